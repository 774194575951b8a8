"""Exact differential-privacy audit.

The construction uses only public points, so a run on a dataset and a run
on any single-private-entry replacement share the same hypothesis class;
both selection distributions can be written down exactly and compared
pointwise. Every log-ratio must stay within epsilon.
"""

import numpy as np

from ppmlearn import (
    GeneratorSpec,
    Halfspace,
    IllegalNeighborError,
    generate,
    replace_entry,
    verify_dp,
)

spec = GeneratorSpec(dim=2, target=Halfspace([0.8, -0.6], 0.0), seed=21)
dataset = generate(spec, 14)
print(f"instance: n={dataset.n}, private={dataset.n_priv}, "
      f"public={dataset.n_pub}")

for eps in (0.1, 1.0):
    report = verify_dp(dataset, eps, trials=40, seed=2)
    print(f"eps={eps}: class size {report.class_size}, "
          f"max pointwise log-ratio {report.max_log_ratio:.6f} "
          f"({'PASS' if report.passed else 'FAIL'})")

# replacement must target a private entry; the guarantee says nothing about
# public ones and the auditor refuses to pretend otherwise
public_index = int(np.flatnonzero(~dataset.p)[0])
try:
    replace_entry(dataset, public_index, [0.0, 0.0], 1)
except IllegalNeighborError as exc:
    print(f"refused as expected: {exc}")
