#!/usr/bin/env python3
"""Spin up two honest provers and drive a loopback verifier session.

Usage: python scripts/loopback_session.py [rounds] [deadline_ms]
"""

import sys
import time

from colorproof.graphs import gen_planted
from colorproof.net import SessionConfig, run_prover, run_verifier_session

rounds = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
deadline_ms = float(sys.argv[2]) if len(sys.argv) > 2 else 100.0

inst = gen_planted(20, 40, seed=11)
prover_a = run_prover(("127.0.0.1", 0), inst, "a", shared_seed=99)
prover_b = run_prover(("127.0.0.1", 0), inst, "b", shared_seed=99)
try:
    cfg = SessionConfig(
        graph=inst.graph,
        rounds=rounds,
        deadline_ns=int(deadline_ms * 1e6),
        seed=5,
        addr_a=prover_a.address,
        addr_b=prover_b.address,
    )
    t0 = time.time()
    report = run_verifier_session(cfg)
    dt = time.time() - t0
    print(
        f"{report.accepted}/{report.rounds} accepted "
        f"({report.rejected_check} check, {report.rejected_timeout} timeout) in {dt:.1f}s"
    )
    print("session", "ACCEPTED" if report.ok else "REJECTED")
finally:
    prover_a.stop()
    prover_b.stop()
