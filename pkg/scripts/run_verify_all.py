"""Run every verification suite at default settings and write reports.

    python scripts/run_verify_all.py [OUT_DIR] [--workers N]
"""

import argparse
import sys
import time

from subpoisson.verify.report import write_reports
from subpoisson.verify.suites import SUITES, SuiteConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("out", nargs="?", default="report")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = SuiteConfig(workers=args.workers)
    reports = []
    for name in SUITES:
        start = time.perf_counter()
        part = run_suite(name, cfg)
        for r in part:
            print(f"{r.summary_line()}  ({time.perf_counter() - start:.1f}s, {r.bits} bits"
                  f"{', retried' if r.retried else ''})")
        reports += part
    write_reports(reports, args.out)
    failed = [r.check_name for r in reports if not (r.passed or r.report_only)]
    print(f"reports in {args.out}/; failed: {', '.join(failed) or 'none'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
