#!/usr/bin/env python3
"""Print the round-count table for e^-100 soundness at max degree 4."""

from colorproof.soundness import BoundVariant, quantum_value_bound

ROWS = [(200, 380), (600, 1122), (900, 1695)]

print(f"{'n':>6} {'m':>6} {'n_ext':>9} {'m_ext':>9} {'1-omega_q':>12} {'rounds':>10}")
for n, m in ROWS:
    rep = quantum_value_bound(n, m, max_deg=4, variant=BoundVariant.APPENDIX_CHAIN, k=100.0)
    print(f"{n:>6} {m:>6} {rep.n_ext:>9} {rep.m_ext:>9} {rep.epsilon_star:>12.3e} {rep.rounds_str:>10}")

print("\nmain-statement constants for comparison (looser):")
for n, m in ROWS:
    rep = quantum_value_bound(n, m, max_deg=4, variant=BoundVariant.MAIN_THEOREM, k=100.0)
    print(f"{n:>6} {m:>6} {rep.n_ext:>9} {rep.m_ext:>9} {rep.epsilon_star:>12.3e} {rep.rounds_str:>10}")
