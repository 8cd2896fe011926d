"""Enumerate every morphism out of the smallest interesting completion.

The source is subsets over the sets 0 and 1; the target is a two-object
doctrine with a two-element fiber.  Every equality-preserving morphism
into the target should extend uniquely (up to iso) over the completion.

    python3 demos/universal_property_micro.py
"""

import time

from qdoctrine import powerset_doctrine, two_point_doctrine
from qdoctrine.category import FinSet
from qdoctrine.twocat import enumerate_morphisms, verify_universal_property

P, X = powerset_doctrine(FinSet(1)), two_point_doctrine()

for m in enumerate_morphisms(P, X, budget=100, kind="EqD"):
    print("morphism:", {a: m.F(a) for a in P.base.objects()})

start = time.perf_counter()
rep = verify_universal_property(P, X, budget=10 ** 4)
print(rep.line())
print(f"details: {rep.details}")
print(f"{time.perf_counter() - start:.2f}s")
