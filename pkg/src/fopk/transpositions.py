"""Transpositions between T_k models and the two product constructions.

A transposition is a pair of models on the same L''_k reduct whose star orders
differ by one adjacent swap.  The products replace such an adjacent pair of a
model A by a whole model B: ``product_qp`` for a (tuple, point) pair and
``product_qq`` for a (tuple, tuple) pair.  Each product returns the new model
and a provenance map, and by default re-verifies the properties that make it
useful (embeddings, validity, and the deficient isomorphisms).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from .structures import (
    Item,
    TkModel,
    Tup,
    is_embedding,
    require_valid,
    same_reduct,
    star_order,
    substructure,
    from_star_order,
)


class ReductMismatch(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class PostconditionError(AssertionError):
    pass


@dataclass(frozen=True)
class TranspositionTag:
    kind: str  # "QP" or "QQ"
    alpha: Tup
    beta: Item

    def to_json(self) -> dict:
        b = list(self.beta) if isinstance(self.beta, tuple) else self.beta
        return {"kind": self.kind, "pair": [list(self.alpha), b]}


def _pos(ranking: Sequence[Item]) -> dict:
    return {x: i for i, x in enumerate(ranking)}


def _map_item(x: Item, h: Sequence[int]) -> Item:
    return tuple(h[y] for y in x) if isinstance(x, tuple) else h[x]


def is_deficient_iso(a: TkModel, b: TkModel, h: Sequence[int], alpha: Item, beta: Item) -> bool:
    """Is h an L''_k-isomorphism a -> b preserving <_* on every pair except {alpha, beta}?"""
    if a.part_sizes != b.part_sizes or len(h) != a.n or sorted(h) != list(range(b.n)):
        return False
    for i in range(1, a.k + 2):
        img = [h[x] for x in a.part(i)]
        if img != list(b.part(i)):
            return False
    pb = _pos(star_order(b))
    items = star_order(a)
    skip = {alpha, beta}
    mapped = [pb[_map_item(x, h)] for x in items]
    for i, j in itertools.combinations(range(len(items)), 2):
        if items[i] in skip and items[j] in skip:
            continue
        if mapped[i] > mapped[j]:
            return False
    return True


def _adjacent(a: TkModel, x: Item, y: Item) -> bool:
    p = a.star_pos
    return x in p and y in p and abs(p[x] - p[y]) == 1


# -- classification and paths ---------------------------------------------------

def classify_transposition(a1: TkModel, a2: TkModel) -> TranspositionTag | None:
    require_valid(a1)
    require_valid(a2)
    if not same_reduct(a1, a2):
        raise ReductMismatch("models have different L''_k reducts")
    s1, s2 = star_order(a1), star_order(a2)
    diff = [i for i in range(len(s1)) if s1[i] != s2[i]]
    if len(diff) != 2 or diff[1] != diff[0] + 1:
        return None
    i = diff[0]
    x, y = s1[i], s1[i + 1]
    if (s2[i], s2[i + 1]) != (y, x):
        return None
    if isinstance(x, tuple) and isinstance(y, tuple):
        tag = TranspositionTag("QQ", x, y)
    else:
        t, p = (x, y) if isinstance(x, tuple) else (y, x)
        tag = TranspositionTag("QP", t, p)
    if not is_deficient_iso(a1, a2, list(range(a1.n)), tag.alpha, tag.beta):
        raise PostconditionError("identity is not a deficient isomorphism for the detected swap")
    return tag


def kendall_tau(r1: Sequence[Item], r2: Sequence[Item]) -> int:
    p = _pos(r2)
    seq = [p[x] for x in r1]
    return sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])


def transposition_path(a: TkModel, b: TkModel) -> list[TkModel]:
    """Adjacent-swap sort of A's star order into B's; every step is a transposition.

    Under the contiguous numbering the unique L''_k-isomorphism between models
    with equal part sizes is the identity, so the last model equals B.
    """
    require_valid(a)
    require_valid(b)
    if not same_reduct(a, b):
        raise ReductMismatch("models have different L''_k reducts")
    target = _pos(star_order(b))
    cur = list(star_order(a))
    path = [a]
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if target[cur[i]] > target[cur[i + 1]]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                path.append(from_star_order(a.k, a.part_sizes, cur))
                changed = True
    return path


# -- products -------------------------------------------------------------------
#
# Everything about a product except the block that B itself fills depends only
# on A, the replaced pair and the part sizes of B, so that part is computed once
# per layout.  C ids are handed out part by part: numeric order on C follows the
# part-wise layout, and products of increasing id lists come out in
# lexicographic block order.

@dataclass(frozen=True)
class _Layout:
    a_id: tuple          # A-id -> C-id (None for replaced elements)
    b_id: tuple          # B-id -> C-id
    sizes: tuple
    before: tuple        # (qorder, edges) of the blocks preceding B's block
    after: tuple         # (qorder, edges) of the blocks following it
    row: tuple           # C points related to the tuples of X(e)
    row_d: tuple = ()    # QQ only: C points related to the tuples of X(d)
    x_e: tuple = ()      # QQ only: the tuples of X(e)
    istar: int = 0       # QQ only: first coordinate where d and e differ


def _ids(a: TkModel, b_sizes: Sequence[int], replaced) -> tuple[list, list, tuple]:
    """Hand out C ids; ``replaced(i, x)`` names the B part that takes x's place, or None."""
    k = a.k
    b_offs = [sum(b_sizes[:i]) for i in range(k + 1)]
    a_id: list = [None] * a.n
    b_id: list = [None] * sum(b_sizes)
    sizes = []
    nxt = 0
    for i in range(1, k + 2):
        start = nxt
        for x in a.part(i):
            j = replaced(i, x)
            if j is None:
                a_id[x] = nxt
                nxt += 1
                continue
            for y in range(b_offs[j - 1], b_offs[j - 1] + b_sizes[j - 1]):
                b_id[y] = nxt
                nxt += 1
        sizes.append(nxt - start)
    return a_id, b_id, tuple(sizes)


def _blocks(a: TkModel, skip, choices, row_of) -> tuple[tuple, tuple]:
    """(qorder, edges) for A's blocks split at the first tuple in ``skip``."""
    halves: list = [([], []), ([], [])]
    side = 0
    for at in a.qorder:
        if at in skip:
            side = 1
            continue
        q, ed = halves[side]
        row = row_of(at)
        for c in itertools.product(*choices(at)):
            q.append(c)
            ed += [(c, w) for w in row]
    return tuple((tuple(q), tuple(ed)) for q, ed in halves)


@lru_cache(maxsize=4096)
def _qp_layout(a: TkModel, e: Tup, v: int, b_sizes: tuple) -> _Layout:
    k = a.k
    ev = list(e) + [v]
    a_id, b_id, sizes = _ids(a, b_sizes, lambda i, x: i if x == ev[i - 1] else None)
    b_pts = [b_id[y] for y in range(sum(b_sizes[:k]), sum(b_sizes))]
    offs = [a.part(i + 1).start for i in range(k)]
    choice = [[[a_id[x]] if x != e[i] else [b_id[y] for y in range(sum(b_sizes[:i]), sum(b_sizes[:i + 1]))]
               for x in a.part(i + 1)] for i in range(k)]

    def row_of(at: Tup) -> list[int]:
        rel = a.r_edges
        row = [a_id[w] for w in a.points if w != v and (at, w) in rel]
        return row + b_pts if (at, v) in rel else row

    before, after = _blocks(a, {e}, lambda at: [choice[i][x - offs[i]] for i, x in enumerate(at)], row_of)
    row_e = tuple(a_id[w] for w in a.points if w != v and a.R(e, w))
    return _Layout(tuple(a_id), tuple(b_id), sizes, before, after, row_e)


@lru_cache(maxsize=4096)
def _qq_layout(a: TkModel, d: Tup, e: Tup, b_sizes: tuple) -> _Layout:
    k = a.k
    istar = min(i for i in range(k) if d[i] != e[i])

    def replaced(i: int, x: int):
        if i <= k and x == d[i - 1]:
            return i
        if i - 1 == istar and x == e[istar]:
            return k + 1
        return None

    a_id, b_id, sizes = _ids(a, b_sizes, replaced)
    b_offs = [sum(b_sizes[:i]) for i in range(k + 2)]
    offs = [a.part(i + 1).start for i in range(k)]
    choice = []
    for i in range(k):
        col = []
        for x in a.part(i + 1):
            j = replaced(i + 1, x)
            col.append([a_id[x]] if j is None else [b_id[y] for y in range(b_offs[j - 1], b_offs[j])])
        choice.append(col)

    def choices(at: Tup) -> list[list[int]]:
        return [choice[i][x - offs[i]] for i, x in enumerate(at)]

    def row_of(at: Tup) -> list[int]:
        return [a_id[w] for w in a.points if (at, w) in a.r_edges]

    before, after = _blocks(a, {d, e}, choices, row_of)
    return _Layout(tuple(a_id), tuple(b_id), sizes, before, after, tuple(row_of(e)),
                   row_d=tuple(row_of(d)), x_e=tuple(itertools.product(*choices(e))), istar=istar)


def product_qp(a: TkModel, e: Sequence[int], v: int, b: TkModel, verify: bool = True):
    """Replace the adjacent pair (e, v) of A by the model B.

    Inside a block X(a') the order is lexicographic by position.  Returns
    ``(C, provenance)`` with provenance lists mapping A-ids and B-ids to C-ids
    (None for the removed elements of A).
    """
    require_valid(a)
    require_valid(b)
    if a.k != b.k:
        raise PreconditionError("arity mismatch")
    e = tuple(e)
    k = a.k
    if e not in a.qrank or a.part_of(v) != k + 1:
        raise PreconditionError("(e, v) must be a Q-tuple and a P_{k+1} element of A")
    if not _adjacent(a, e, v):
        raise PreconditionError(f"{list(e)} and {v} are not adjacent in the star order of A")
    lay = _qp_layout(a, e, v, b.part_sizes)
    b_id = lay.b_id
    qorder = list(lay.before[0])
    edges = list(lay.before[1])
    for t in b.qorder:
        c = tuple([b_id[y] for y in t])
        qorder.append(c)
        edges += [(c, w) for w in lay.row]
        edges += [(c, b_id[w]) for w in b.points if (t, w) in b.r_edges]
    qorder.extend(lay.after[0])
    edges.extend(lay.after[1])
    c_model = TkModel(k, lay.sizes, tuple(qorder), frozenset(edges))
    prov = {"A": list(lay.a_id), "B": list(b_id)}
    if verify:
        report = verify_product_qp(a, e, v, b, c_model, prov)
        bad = [key for key, ok in report.items() if not ok]
        if bad:
            raise PostconditionError(f"product postconditions failed: {bad}")
    return c_model, prov


@lru_cache(maxsize=1024)
def _kept_part(src: TkModel, keep: tuple[int, ...]):
    return substructure(src, keep)


def _inclusion_check(src: TkModel, keep: list[int], c: TkModel, mapping: list) -> bool:
    sub, kept = _kept_part(src, tuple(keep))
    return is_embedding(sub, c, [mapping[x] for x in kept])


def _swap_check(a: TkModel, c: TkModel, prov: dict, removed: list[int],
                replacement: list[int], alpha: Item, beta: Item) -> bool:
    """The map fixing A minus ``removed`` and sending removed -> replacement
    (given as C-ids) is an (alpha, beta)-deficient isomorphism onto its image.

    The star order of the image substructure is the restriction of the star
    order of C, so the check runs against C directly.
    """
    h = list(prov["A"])
    for x, y in zip(removed, replacement):
        h[x] = y
    if None in h or len(set(h)) != a.n:
        return False
    pc_part = c._part_index
    for i, r in enumerate(a._parts, 1):
        ys = h[r.start:r.stop]
        if any(pc_part[y] != i for y in ys) or any(y0 >= y1 for y0, y1 in zip(ys, ys[1:])):
            return False
    pc = c.star_pos
    items = a._star
    mapped = [pc.get(tuple([h[y] for y in x]) if isinstance(x, tuple) else h[x]) for x in items]
    if None in mapped:
        return False
    # Every pair except {alpha, beta} keeps its order exactly when the image
    # sequence is increasing once alpha is dropped and once beta is dropped.
    for drop in (alpha, beta):
        seq = [m for x, m in zip(items, mapped) if x != drop]
        if any(p0 > p1 for p0, p1 in zip(seq, seq[1:])):
            return False
    return True


def verify_product_qp(a: TkModel, e: Tup, v: int, b: TkModel, c: TkModel, prov: dict) -> dict:
    k = a.k
    rest = [x for x in range(a.n) if x not in set(e) | {v}]
    out = {
        "a": _inclusion_check(a, rest, c, prov["A"]),
        "b": is_embedding(b, c, prov["B"]),
        "c": not c.violations,
    }
    d_ok = True
    for s in b.q_tuples():
        for t in b.points:
            repl = [prov["B"][y] for y in s] + [prov["B"][t]]
            if not _swap_check(a, c, prov, list(e) + [v], repl, e, v):
                d_ok = False
    out["d"] = d_ok
    return out


def product_qq(a: TkModel, d: Sequence[int], e: Sequence[int], b: TkModel, verify: bool = True):
    """Replace the adjacent tuple pair (d, e) of A, with d <_k e, by the model B.

    With i* the first coordinate where d and e differ, d_i (i != i*) is replaced
    by P_i(B), d_{i*} by P_{i*}(B) and e_{i*} by P_{k+1}(B).  The blocks X(d)
    and X(e) are ordered together following the star order of B, with each
    point t of B expanded to the tuples of X(e) whose i*-th entry is t.
    """
    require_valid(a)
    require_valid(b)
    if a.k != b.k:
        raise PreconditionError("arity mismatch")
    d, e = tuple(d), tuple(e)
    k = a.k
    if d not in a.qrank or e not in a.qrank or d == e:
        raise PreconditionError("d and e must be distinct Q-tuples of A")
    if a.qrank[d] > a.qrank[e]:
        raise PreconditionError("expected d <_k e")
    if not _adjacent(a, d, e):
        raise PreconditionError(f"{list(d)} and {list(e)} are not adjacent in the star order of A")
    lay = _qq_layout(a, d, e, b.part_sizes)
    b_id, istar = lay.b_id, lay.istar
    qorder = list(lay.before[0])
    edges = list(lay.before[1])
    for it in star_order(b):
        if isinstance(it, tuple):
            c = tuple([b_id[y] for y in it])
            qorder.append(c)
            edges += [(c, w) for w in lay.row_d]
        else:
            for c in lay.x_e:
                if c[istar] == b_id[it]:
                    qorder.append(c)
                    edges += [(c, w) for w in lay.row]
    qorder.extend(lay.after[0])
    edges.extend(lay.after[1])
    c_model = TkModel(k, lay.sizes, tuple(qorder), frozenset(edges))
    prov = {"A": list(lay.a_id), "B": list(b_id)}
    prov["istar"] = istar + 1
    if verify:
        report = verify_product_qq(a, d, e, b, c_model, prov)
        bad = [key for key, ok in report.items() if not ok]
        if bad:
            raise PostconditionError(f"product postconditions failed: {bad}")
    return c_model, prov


def b_tuples(a: TkModel, d: Tup, e: Tup, b: TkModel, istar: int) -> list[dict]:
    """The index families b-bar: e_i where e_i != d_i, otherwise any element of P_i(B)."""
    opts = []
    for i in range(a.k):
        if i == istar:
            continue
        opts.append([(i, ("a", e[i]))] if e[i] != d[i] else [(i, ("b", y)) for y in b.part(i + 1)])
    return [dict(c) for c in itertools.product(*opts)]


def verify_product_qq(a: TkModel, d: Tup, e: Tup, b: TkModel, c: TkModel, prov: dict) -> dict:
    k = a.k
    istar = prov["istar"] - 1
    pa, pb = prov["A"], prov["B"]
    gone = {*d, e[istar]}
    rest = [x for x in range(a.n) if x not in gone]
    out: dict[str, bool] = {"a": _inclusion_check(a, rest, c, pa)}
    # (b)(1): the L^Q_k reduct of B sits inside C via inclusion.
    part_c = c._part_index
    ok = True
    for i in range(1, k + 1):
        prev = -1
        for y in b.part(i):
            if part_c[pb[y]] != i or pb[y] <= prev:
                ok = False
            prev = pb[y]
    crank = c.qrank
    prev = -1
    for t in b.qorder:
        r = crank[tuple([pb[y] for y in t])]
        if r <= prev:
            ok = False
        prev = r
    out["b1"] = ok
    # (b)(2): P_{k+1}(B) lands inside P_{i*} in order.
    pts = [pb[y] for y in b.points]
    out["b2"] = all(part_c[x] == istar + 1 for x in pts) and pts == sorted(pts)
    # (b)(3): R^B(s, t) iff s <_k b(t) in C.
    ok = True
    if pts and b.q_size:
        s_ranks = [(s, crank[tuple([pb[y] for y in s])]) for s in b._q]
        for fam in b_tuples(a, d, e, b, istar):
            for t in b.points:
                bt = []
                for i in range(k):
                    if i == istar:
                        bt.append(pb[t])
                    else:
                        src, y = fam[i]
                        bt.append(pa[y] if src == "a" else pb[y])
                t_rank = crank[tuple(bt)]
                for s, s_rank in s_ranks:
                    if ((s, t) in b.r_edges) != (s_rank < t_rank):
                        ok = False
    out["b3"] = ok
    out["c"] = not c.violations
    ok = True
    removed = list(d) + [e[istar]]
    for s in b.q_tuples():
        for t in b.points:
            repl = [pb[y] for y in s] + [pb[t]]
            if not _swap_check(a, c, prov, removed, repl, d, e):
                ok = False
    out["d"] = ok
    return out
