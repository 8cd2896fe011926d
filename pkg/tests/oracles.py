"""Brute-force reference answers computed with plain sets and partitions.

Nothing here imports the package: these are the independent side of every
DERIVED comparison.
"""

from itertools import product


def partitions(points):
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for part in partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def bell(n):
    return sum(1 for _ in partitions(range(n)))


def block_of(partition):
    return {x: i for i, block in enumerate(partition) for x in block}


def functions(n, m):
    return list(product(range(m), repeat=n))


def hom_classes(n, p, m, q):
    """Arrows of the completed set doctrine: respecting maps up to pointwise relatedness."""
    bp, bq = block_of(p), block_of(q)
    resp = [f for f in functions(n, m)
            if all(bq[f[x]] == bq[f[y]] for x in range(n) for y in range(n) if bp[x] == bp[y])]
    classes = {tuple(bq[v] for v in f) for f in resp}
    return len(classes)


def unions_of_blocks(n, p):
    """Subsets closed under the partition: the descent data."""
    out = []
    for mask in range(1 << n):
        pts = {i for i in range(n) if mask >> i & 1}
        if all((x in pts) == (y in pts) for block in p for x in block for y in block):
            out.append(pts)
    return out


def relation_masks(n):
    """Every relation on n points encoded on the n*n product, pair (x, y) -> x*n + y."""
    return range(1 << (n * n))


def total_single_valued(rel, a, b):
    graph = {(x, y) for x in range(a) for y in range(b) if rel >> (x * b + y) & 1}
    total = all(any((x, y) in graph for y in range(b)) for x in range(a))
    single = all(y1 == y2 for (x1, y1) in graph for (x2, y2) in graph if x1 == x2)
    return total and single, graph


def auc_failures(a, b, allowed_functions):
    """Relations a -> b that are total and single-valued yet contain no allowed function."""
    bad = []
    for rel in range(1 << (a * b)):
        ok, graph = total_single_valued(rel, a, b)
        if ok and not any(all((x, f[x]) in graph for x in range(a)) for f in allowed_functions):
            bad.append(rel)
    return bad


def respecting(labels_a, labels_b):
    n, m = len(labels_a), len(labels_b)
    return [f for f in functions(n, m)
            if all(labels_b[f[x]] == labels_b[f[y]] for x in range(n) for y in range(n)
                   if labels_a[x] == labels_a[y])]


def subset_lattice_iso_count(n):
    """Subobjects of an n-element set, counted as images of injections."""
    images = set()
    for k in range(n + 1):
        for f in functions(k, n):
            if len(set(f)) == k:
                images.add(frozenset(f))
    return len(images)
