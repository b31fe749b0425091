"""
Counting odd ergodic sets
=========================

Reduced mod 2^m, Q permutes the odd residues and every cycle has length a
power of two. A cycle whose length keeps doubling at every higher level
carries an ergodic set of Q. Here they are counted by measure.
"""

import time

from paritylab import build_qn, cycle_decomposition, enumerate_ergodic_sets, measure_summary

for c in cycle_decomposition(build_qn(6)):
    print(c.length, c.elements)

t0 = time.perf_counter()
census = enumerate_ergodic_sets(12, level_cap=18)
print(f"census to measure 2^-12 in {time.perf_counter() - t0:.2f}s")
for k, n in census.counts.items():
    print(k, n)

odd, full = measure_summary(census.records)
print("odd side", float(odd), "whole", float(full))

for r in census.records[:5]:
    print(r.as_dict())
