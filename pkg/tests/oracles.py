"""Brute-force reference implementations used to cross-check the library.

Nothing here calls the search or validation code under test; each oracle works
straight from the axioms on small inputs.
"""

import itertools
from math import prod

from fopk.structures import TkModel


def part_ranges(sizes):
    out, acc = [], 0
    for s in sizes:
        out.append(range(acc, acc + s))
        acc += s
    return out


def q_tuples(k, sizes):
    parts = part_ranges(sizes)
    return list(itertools.product(*parts[:k]))


def interleaving_models(k, sizes):
    """Every model as an interleaving of Q-tuples among the points, read off directly.

    A tuple is R-related to exactly the points that follow it, and <_k is the
    order of the tuples in the interleaving.
    """
    q = q_tuples(k, sizes)
    pts = list(part_ranges(sizes)[k])
    items = [("t", t) for t in q] + [("p", w) for w in pts]
    seen = set()
    for perm in itertools.permutations(items):
        if [x for kind, x in perm if kind == "p"] != pts:
            continue
        qorder = tuple(x for kind, x in perm if kind == "t")
        edges = set()
        for i, (kind, x) in enumerate(perm):
            if kind == "t":
                edges |= {(x, y) for kind2, y in perm[i + 1:] if kind2 == "p"}
        key = (qorder, frozenset(edges))
        if key not in seen:
            seen.add(key)
            yield TkModel(k, tuple(sizes), qorder, frozenset(edges))


def monotone(qorder, pts, edges):
    """Axiom: x <=_k y, R(y, w), w <= z imply R(x, z)."""
    rank = {t: i for i, t in enumerate(qorder)}
    for (y, w) in edges:
        for x in qorder:
            if rank[x] > rank[y]:
                continue
            for z in pts:
                if z >= w and (x, z) not in edges:
                    return False
    return True


def brute_valid(k, sizes, qorder, edges):
    """Membership for canonically numbered structures, straight from the axioms."""
    q = set(q_tuples(k, sizes))
    pts = list(part_ranges(sizes)[k])
    if any(t not in q or w not in pts for t, w in edges):
        return False
    if len(qorder) != len(set(qorder)) or set(qorder) != q:
        return False
    return monotone(list(qorder), pts, set(edges))


def has_forbidden(q, pts, edges):
    """R(a,c), R(b,d), not R(a,d), not R(b,c) for some a, b in Q and c, d points."""
    for a, b in itertools.permutations(q, 2):
        for c, d in itertools.permutations(pts, 2):
            if (a, c) in edges and (b, d) in edges and (a, d) not in edges and (b, c) not in edges:
                return True
    return False


def kendall(r1, r2):
    pos = {repr(x): i for i, x in enumerate(r2)}
    seq = [pos[repr(x)] for x in r1]
    return sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])


def brute_embeddings(a, c):
    """All maps A -> C preserving every atomic fact, by trying every injection."""
    out = []
    if a.k != c.k:
        return out
    for h in itertools.permutations(range(c.n), a.n):
        if any(c.part_of(h[x]) != a.part_of(x) for x in range(a.n)):
            continue
        if any(h[x] > h[y] for x in range(a.n) for y in range(x + 1, a.n)):
            continue
        qa = a.q_tuples()
        ok = True
        for s, t in itertools.permutations(qa, 2):
            hs, ht = tuple(h[x] for x in s), tuple(h[x] for x in t)
            if (a.qrank[s] < a.qrank[t]) != (c.qrank[hs] < c.qrank[ht]):
                ok = False
                break
        if ok and all(a.R(t, w) == c.R(tuple(h[x] for x in t), h[w]) for t in qa for w in a.points):
            out.append(tuple(h))
    return sorted(out)


def brute_coords(p, vs, w):
    """g-coordinates by enumerating every coefficient vector."""
    n = len(vs)
    if n == 0:
        return []
    dim = len(w)

    def combo(c):
        return tuple(sum(ci * v[i] for ci, v in zip(c, vs)) % p for i in range(dim))

    coeffs = list(itertools.product(range(p), repeat=n))
    zero = (0,) * dim
    if any(any(c) and combo(c) == zero for c in coeffs):
        return [0] * n
    hits = [c for c in coeffs if combo(c) == tuple(x % p for x in w)]
    return list(hits[0]) if hits else [0] * n


def brute_coords_table(p, vs, dim):
    """brute_coords for every w at once: one pass over the coefficient vectors."""
    n = len(vs)
    table = {}
    dependent = False
    for c in itertools.product(range(p), repeat=n):
        img = tuple(sum(ci * v[i] for ci, v in zip(c, vs)) % p for i in range(dim))
        if any(c) and not any(img):
            dependent = True
        table.setdefault(img, list(c))
    zeros = [0] * n
    return lambda w: zeros if dependent else table.get(tuple(x % p for x in w), zeros)


def ramsey_colorings(n_edges, copies, colors=2):
    """Enumerate all colorings; return (total, number with no monochromatic copy)."""
    total = good = 0
    for chi in itertools.product(range(colors), repeat=n_edges):
        total += 1
        if all(len({chi[i] for i in cp}) > 1 for cp in copies):
            good += 1
    return total, good


def model_count_formula(k, sizes):
    from math import factorial
    q = prod(sizes[:k])
    m = sizes[k]
    return factorial(q + m) // factorial(m)
