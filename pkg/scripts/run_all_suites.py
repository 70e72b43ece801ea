#!/usr/bin/env python3
"""Run every verification suite and write machine reports.

Usage: python scripts/run_all_suites.py [--out DIR] [--seed N] [--fast]

--fast shrinks the sampled suites (handy while iterating); the default runs
the full acceptance-scale configuration.  Exit code 1 if any suite FAILs.
"""

import argparse
import pathlib
import sys
import time

from predimlab import SUITE_NAMES, emit_report, run_suite

FAST_OPTIONS = {
    "beatty": {"b_max": 12},
    "ex512": {"samples": 100},
    "msa-bound": {"trials": 25},
    "submodularity": {"max_n": 6, "oracle_cases": 1000},
    "extension-property": {"budget": 60},
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fast", action="store_true")
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    any_fail = False
    for name in SUITE_NAMES:
        opts = FAST_OPTIONS.get(name, {}) if args.fast else {}
        t0 = time.monotonic()
        rep = run_suite(name, seed=args.seed, **opts)
        counts = rep.counts()
        line = " ".join(f"{k}={v}" for k, v in counts.items() if v)
        print(f"{name:22s} {line:40s} {time.monotonic() - t0:6.1f}s "
              f"digest {rep.digest()[:12]}")
        (outdir / f"{name}.json").write_text(emit_report(rep, "machine"))
        if not rep.ok:
            any_fail = True
            for c in rep.failures():
                print(f"    FAIL {c.key}: {c.witness}")
    return 1 if any_fail else 0


if __name__ == "__main__":
    sys.exit(main())
