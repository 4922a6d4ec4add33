"""A short seeded fuzz run, then the same run with mutations enabled.

Set WEIGHTKIT_JOBS to spread trials over worker processes; the report is
the same either way.
"""

import sys

from weightkit.fuzz import FuzzConfig, run_property_suite

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20
cfg = FuzzConfig(seed=2024, trials=trials, coefficients=("Z", "F2", "Q"))
print(run_property_suite(cfg).text())

mutated = FuzzConfig(seed=2024, trials=trials, coefficients=("Z",),
                     properties=("methods_agree", "linear_algebra"),
                     mutate=True)
print(run_property_suite(mutated).text())
