"""Blow-ups of ordered sets with a unary predicate, and amalgamation of T_k models.

A base structure is ``({0..n-1}, <, U)``.  Blowing it up along a bijection
``f: P_1 x ... x P_k -> U`` gives a model of T_k whose star order is the base
order; ``recover_base`` goes back.  Amalgamation works on the base side, where
it is just a merge of linear orders.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import prod
from typing import Any, Sequence

from .structures import (
    Item,
    ParseError,
    TkModel,
    Tup,
    _int,
    _int_list,
    from_star_order,
    is_embedding,
    require_valid,
    star_order,
)


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class BaseStructure:
    n: int
    u: frozenset

    def to_json(self) -> dict:
        return {"kind": "base", "n": self.n, "u": sorted(self.u)}

    @staticmethod
    def from_json(doc: Any) -> "BaseStructure":
        if not isinstance(doc, dict) or doc.get("kind", "base") != "base":
            raise ParseError("kind", "expected a base document")
        n = _int(doc.get("n"), "n")
        u = _int_list(doc.get("u"), "u")
        if n < 0 or any(not 0 <= x < n for x in u) or len(set(u)) != len(u):
            raise ParseError("u", "must be distinct ids in range")
        return BaseStructure(n, frozenset(u))


@dataclass(frozen=True)
class BlowupSpec:
    base: BaseStructure
    part_sizes: tuple[int, ...]  # |P_1|..|P_k|
    f: dict  # Q-tuple (model ids) -> element of base.u

    @property
    def k(self) -> int:
        return len(self.part_sizes)

    def to_json(self) -> dict:
        doc = self.base.to_json()
        doc["part_sizes"] = list(self.part_sizes)
        doc["f"] = [[list(t), u] for t, u in sorted(self.f.items())]
        return doc

    @staticmethod
    def from_json(doc: Any) -> "BlowupSpec":
        base = BaseStructure.from_json(doc)
        sizes = _int_list(doc.get("part_sizes"), "part_sizes")
        if not sizes or any(s < 0 for s in sizes):
            raise ParseError("part_sizes", "expected nonnegative sizes for P_1..P_k")
        if not isinstance(doc.get("f"), list):
            raise ParseError("f", "expected a list of [tuple, u] pairs")
        f = {}
        for i, pair in enumerate(doc["f"]):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"f[{i}]", "expected [tuple, u]")
            f[tuple(_int_list(pair[0], f"f[{i}][0]"))] = _int(pair[1], f"f[{i}][1]")
        return BlowupSpec(base, tuple(sizes), f)


def _q_tuples(sizes: Sequence[int]) -> list[Tup]:
    offs = [sum(sizes[:i]) for i in range(len(sizes))]
    return list(itertools.product(*(range(o, o + s) for o, s in zip(offs, sizes))))


def blow_up(spec: BlowupSpec) -> TkModel:
    """The model obtained from the base via f."""
    sizes = spec.part_sizes
    q = _q_tuples(sizes)
    if prod(sizes) != len(spec.base.u):
        raise ValueError(f"arity mismatch: |Q| = {prod(sizes)} but |U| = {len(spec.base.u)}")
    if set(spec.f) != set(q) or sorted(spec.f.values()) != sorted(spec.base.u):
        raise ValueError("f must be a bijection from Q onto U")
    rest = [x for x in range(spec.base.n) if x not in spec.base.u]
    nq = sum(sizes)
    pid = {x: nq + i for i, x in enumerate(rest)}
    inv = {u: t for t, u in spec.f.items()}
    ranking: list[Item] = [inv[x] if x in inv else pid[x] for x in range(spec.base.n)]
    return from_star_order(len(sizes), tuple(sizes) + (len(rest),), ranking)


def recover_base(model: TkModel) -> BlowupSpec:
    """Base = the star order, with U the positions of Q-tuples."""
    ranking = star_order(model)
    u = frozenset(i for i, x in enumerate(ranking) if isinstance(x, tuple))
    f = {x: i for i, x in enumerate(ranking) if isinstance(x, tuple)}
    return BlowupSpec(BaseStructure(len(ranking), u), model.part_sizes[: model.k], f)


# -- amalgamation ---------------------------------------------------------------

def _merge_over(common: list, left: list, right: list) -> list:
    """Merge two linear orders that agree on ``common`` (given as a shared
    subsequence).  Inside each gap the left-only items come first."""
    cset = set(common)
    out: list = []
    li = ri = 0
    for c in common + [None]:
        while li < len(left) and left[li] != c:
            out.append(left[li])
            li += 1
        while ri < len(right) and right[ri] != c:
            out.append(right[ri])
            ri += 1
        if c is not None:
            out.append(c)
            li += 1
            ri += 1
    assert len(out) == len(set(out)) and cset <= set(out)
    return out


def amalgamate(d: TkModel, m: TkModel, n: TkModel,
               emb1: Sequence[int], emb2: Sequence[int]):
    """Strong amalgam of m and n over d.

    Returns ``(C, f1, f2)`` with ``f1: M -> C`` and ``f2: N -> C`` given as id lists.
    Mixed tuples (touching new elements of both sides) get fresh base points at
    the top of the base order, in lexicographic order of their coordinates.
    """
    for x in (d, m, n):
        require_valid(x)
    if not (d.k == m.k == n.k):
        raise EmbeddingError("arity mismatch")
    if not is_embedding(d, m, emb1):
        raise EmbeddingError("emb1 is not an embedding of D into M")
    if not is_embedding(d, n, emb2):
        raise EmbeddingError("emb2 is not an embedding of D into N")
    k = d.k
    # Abstract labels: ('d', x), ('m', x), ('n', x).
    lab_m = {emb1[x]: ("d", x) for x in range(d.n)}
    lab_n = {emb2[x]: ("d", x) for x in range(d.n)}

    def lm(x: int):
        return lab_m.get(x, ("m", x))

    def ln(x: int):
        return lab_n.get(x, ("n", x))

    def conv(ranking, label):
        return [tuple(label(y) for y in it) if isinstance(it, tuple) else label(it) for it in ranking]

    # Parts 1..k merge independently; the points take their order from the merged
    # star order so that numeric order and the base order agree on P_{k+1}.
    merged = _merge_over(conv(star_order(d), lambda x: ("d", x)),
                         conv(star_order(m), lm), conv(star_order(n), ln))
    parts = []
    for i in range(1, k + 1):
        common = [("d", x) for x in d.part(i)]
        parts.append(_merge_over(common, [lm(x) for x in m.part(i)], [ln(x) for x in n.part(i)]))
    parts.append([it for it in merged if isinstance(it[0], str)])
    sizes = tuple(len(p) for p in parts)
    new_id = {}
    for p in parts:
        for lab in p:
            new_id[lab] = len(new_id)
    f1 = [new_id[lm(x)] for x in range(m.n)]
    f2 = [new_id[ln(x)] for x in range(n.n)]
    base = [new_id[it] if isinstance(it[0], str) else tuple(new_id[y] for y in it) for it in merged]
    placed = set(x for x in base if isinstance(x, tuple))
    offs = [sum(sizes[:i]) for i in range(k + 1)]
    q_all = itertools.product(*(range(offs[i], offs[i] + sizes[i]) for i in range(k)))
    base.extend(t for t in q_all if t not in placed)
    c = from_star_order(k, sizes, base)
    return c, f1, f2


def joint_embedding(m: TkModel, n: TkModel):
    empty = TkModel(m.k, (0,) * (m.k + 1), (), frozenset())
    return amalgamate(empty, m, n, [], [])


# -- generic extension ----------------------------------------------------------

def generic_extend(model: TkModel, target_sizes: Sequence[int], seed: int = 0):
    """Grow ``model`` to ``target_sizes`` with new material spread over all cuts.

    New elements of P_1..P_k are interleaved at seeded positions.  New P_{k+1}
    points go to evenly spaced gaps of the old star order (the two extreme gaps
    first), and new Q-tuples cycle through every cut between old P_{k+1}
    points before any cut is reused.  Returns ``(model', renumbering)``.
    """
    require_valid(model)
    k = model.k
    target = tuple(target_sizes)
    if len(target) != k + 1 or any(t < s for t, s in zip(target, model.part_sizes)):
        raise ValueError(f"target sizes {list(target)} do not dominate {list(model.part_sizes)}")
    if target == model.part_sizes:
        return model, list(range(model.n))
    rng = random.Random(f"fopk-generic:{seed}")

    # Positions of old elements inside each enlarged part of P_1..P_k.
    layout = []
    for i in range(1, k + 1):
        old, new = model.part_sizes[i - 1], target[i - 1] - model.part_sizes[i - 1]
        slots = sorted(rng.sample(range(old + new), old))
        layout.append(slots)
    offs = [sum(target[:i]) for i in range(k + 1)]
    ren: dict[int, int] = {}
    for i in range(1, k + 1):
        for j, x in enumerate(model.part(i)):
            ren[x] = offs[i - 1] + layout[i - 1][j]

    # Old star order in new ids, with old points as ('old', x) placeholders.
    seq: list = []
    for it in star_order(model):
        seq.append(tuple(ren[y] for y in it) if isinstance(it, tuple) else ("old", it))
    m_new = target[k] - model.part_sizes[k]
    gaps = len(seq) + 1
    if m_new == 1:
        picks = [rng.randrange(gaps)]
    elif m_new <= gaps:
        picks = [round(j * (gaps - 1) / (m_new - 1)) for j in range(m_new)]
    else:
        picks = list(range(gaps)) + [rng.randrange(gaps) for _ in range(m_new - gaps)]
    picks.sort()
    merged: list = []
    fresh = iter(range(m_new))
    pi = 0
    for g in range(gaps):
        while pi < len(picks) and picks[pi] == g:
            merged.append(("new", next(fresh)))
            pi += 1
        if g < len(seq):
            merged.append(seq[g])

    # New tuples: cycle through cuts between old points.
    old_tuples = set(seq) - {x for x in seq if isinstance(x, tuple) and x[0] == "old"}
    q_all = itertools.product(*(range(offs[i], offs[i] + target[i]) for i in range(k)))
    new_tuples = [t for t in q_all if t not in old_tuples]
    n_cuts = model.part_sizes[k] + 1
    cuts: list[int] = []
    while len(cuts) < len(new_tuples):
        block = list(range(n_cuts))
        rng.shuffle(block)
        cuts.extend(block)
    for t, cut in zip(new_tuples, cuts):
        # Segment of ``merged`` strictly between old point cut-1 and old point cut.
        olds = [i for i, x in enumerate(merged) if isinstance(x, tuple) and x and x[0] == "old"]
        lo = olds[cut - 1] + 1 if cut > 0 else 0
        hi = olds[cut] if cut < len(olds) else len(merged)
        merged.insert(rng.randint(lo, hi), t)

    # Number P_{k+1} in merged order.
    pbase = offs[k]
    point_id = {}
    for x in merged:
        if isinstance(x, tuple) and x and x[0] in ("old", "new"):
            point_id[x] = pbase + len(point_id)
    for x in model.points:
        ren[x] = point_id[("old", x)]
    ranking = [point_id[x] if x in point_id else x for x in merged]
    out = from_star_order(k, target, ranking)
    return out, [ren[x] for x in range(model.n)]
