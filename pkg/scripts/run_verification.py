"""Run every acceptance check at a few seeds and print a compact summary."""

import argparse

from twistsection.acceptance import run_all
from twistsection.report import RunConfig


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = p.parse_args()
    for seed in args.seeds:
        report = run_all(RunConfig(n=args.n, seed=seed).validate())
        status = "ALL PASS" if report.passed else "FAILURES"
        slow = max(report.checks, key=lambda c: c.runtime_s)
        print(f"seed={seed} {status} slowest={slow.name} ({slow.runtime_s:.1f}s)")
        for c in report.checks:
            if c.status != "pass":
                print(f"  {c.name}: {c.detail}")


if __name__ == "__main__":
    main()
