#!/usr/bin/env python3
"""Run the acceptance criteria and print one PASS/FAIL line per criterion.

Equivalent to `pytest -s tests/test_acceptance.py`; kept as a script so the
suite can be driven without pytest.
"""

import sys
import time
import traceback
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import test_acceptance as acc  # noqa: E402

CRITERIA = [
    acc.test_criterion_1_pushout_oracle_agreement,
    acc.test_criterion_2_fixed_point_commutation,
    acc.test_criterion_3_nerve_comparison,
    acc.test_criterion_4_ex_unit,
    acc.test_criterion_5_hsd2_dwyer,
    acc.test_criterion_6_saturation_of_generators,
    acc.test_criterion_7_reduction_lemma_avatar,
    acc.test_criterion_8_exact_structural_identities,
    acc.test_criterion_9_transfer_harness,
]


def main():
    failures = 0
    t0 = time.time()
    for fn in CRITERIA:
        try:
            fn()
        except AssertionError:
            failures += 1
        except Exception:
            failures += 1
            traceback.print_exc()
    print(f"acceptance: {len(CRITERIA) - failures}/{len(CRITERIA)} criteria passed "
          f"in {time.time() - t0:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
