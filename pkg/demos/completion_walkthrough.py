"""Build the quotient completion of subsets over small finite sets and look around.

    python3 demos/completion_walkthrough.py
"""

from qdoctrine import embed, powerset_doctrine, quotient_completion
from qdoctrine.category import FinSet
from qdoctrine.completion import QObject, q_quotient
from qdoctrine.completion import embedding_report
from qdoctrine.twocat import check_exact_characterization, check_regular

P = powerset_doctrine(FinSet(2))
Q = quotient_completion(P)
QC = Q.base

print("objects of the completion (carrier, relation bits):")
for s in QC.objects():
    print(f"  {s}   predicates compatible with it: {Q.fiber(s).size}")

total, equality = QObject(2, 0b1111), QObject(2, 0b1001)
print(f"\narrows from the total relation to equality on 2: {len(QC.hom(total, equality))}")
print(f"arrows the other way: {len(QC.hom(equality, total))}")

q = q_quotient(Q, equality, 0b1111)
print(f"\nquotienting equality on 2 by the total relation lands in {q.target}")

J, _ = embed(P, Q)
print(f"\nembedding sends 2 to {J(2)}")
print(embedding_report(P, Q).line())
print(check_regular(Q).line())
print(check_exact_characterization(Q).line())
