#!/usr/bin/env python3
"""Run every conditional-law and averaging-identity check over the fixture catalog.

Human-readable companion to `exsuff verify-conditional`: same records, printed
as a table instead of JSON. Exits 1 if any record fails.
"""

import argparse
import sys

from exsuff.harness import ExperimentConfig, run_conditional_verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()

    cfg = ExperimentConfig(command="verify-conditional", seed=args.seed)
    records = run_conditional_verify(cfg, tol=args.tol)

    width = max(len(r["fixture"]) for r in records)
    print(f"{'fixture':<{width}}  {'check':<20} {'cases':>5}  {'worst gap':>12}  status")
    failed = 0
    for r in records:
        status = "ok" if r["passed"] else "FAIL"
        if r["expected_fail"]:
            status += " (expected to exceed tol)"
        if not r["passed"]:
            failed += 1
        print(f"{r['fixture']:<{width}}  {r['check']:<20} {r['cases_checked']:>5}  "
              f"{r['max_abs_discrepancy']:>12.3e}  {status}")
    print(f"\n{len(records) - failed}/{len(records)} records passed (tol {args.tol:g})")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
