"""
Rational cycles of Q
====================

Screen all p/q with |p|, q <= 99 modulo 2^40 for a period dividing 16, then
check the survivors exactly. Raising the bound to 999 gives the same six.
"""

from paritylab import SearchConfig, fixed_point_locality, verify_known_cycles
from paritylab.search import search

report = search(SearchConfig(bound=99), threads=2)
print(report.candidates_screened, "candidates in", round(report.seconds, 2), "s")
for c in report.survivors:
    print(c.as_dict())

for name, ok in verify_known_cycles():
    print("ok " if ok else "BAD", name)

# fixed points of Q mod 2^12 sit next to -1 or 1/3
for f in fixed_point_locality(12):
    print(f.residue, f.nearest, f.distance)
