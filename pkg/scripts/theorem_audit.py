#!/usr/bin/env python3
"""Run the certificate sweep from the command line.

Usage: python scripts/theorem_audit.py [samples] [seed]
"""

import sys
import time

from colorproof.audits import run_certificate_sweep

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

t0 = time.time()
summary = run_certificate_sweep(samples=samples, seed=seed)
dt = time.time() - t0

print(f"{summary.strategies} strategies, {samples} sweep iterations, {dt:.1f}s")
for name in sorted(summary.checks):
    bad = summary.violations.get(name, 0)
    worst = summary.worst_margin.get(name, float("nan"))
    print(f"{name:>24}: {summary.checks[name]:>7} instances  {bad} violations  worst margin {worst:+.3e}")
print("PASS" if summary.clean else "FAIL")
sys.exit(0 if summary.clean else 1)
