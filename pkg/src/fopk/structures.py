"""Finite models of T_k and the operations that treat them as data.

A model lives on the elements ``0..N-1``.  Part ``P_i`` is the i-th contiguous
block of ids and the global order ``<`` is numeric order, so the partition and
block-order axioms are built into the representation.  Documents read from JSON
may carry explicit ``labels`` / ``order`` fields; those exist only so that the
validator can be fed structures that break axioms (1) and (2).
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Any, Iterable, Iterator, Sequence, Union

Tup = tuple[int, ...]
Item = Union[Tup, int]  # a star-order item: a Q-tuple or a P_{k+1} element


class cached:
    """Per-instance cached attribute.

    Like ``functools.cached_property`` without the per-access lock, which
    dominates the cost on the many short-lived models built during searches.
    """

    def __init__(self, fn):
        self.fn = fn
        self.name = fn.__name__

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, obj, cls=None):
        if obj is None:
            return self
        value = self.fn(obj)
        obj.__dict__[self.name] = value
        return value

LANGS = ("Lk", "L'k", "L''k", "LQk")


class ParseError(ValueError):
    """A document is structurally malformed; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvalidModel(ValueError):
    """Raised when an operation needs a model of T_k and did not get one."""

    def __init__(self, violations: list["Violation"]):
        head = violations[0] if violations else None
        super().__init__(f"not a model of T_k: {head.message if head else '?'}")
        self.violations = violations


@dataclass(frozen=True)
class Violation:
    axiom: int
    message: str
    witness: dict

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "message": self.message, "witness": self.witness}


@lru_cache(maxsize=None)
def _shape(k: int, part_sizes: tuple[int, ...]) -> dict:
    """n, offsets, the parts as ranges, the part index of every element, and Q."""
    offsets = tuple(sum(part_sizes[:i]) for i in range(len(part_sizes)))
    parts = tuple(range(off, off + s) for off, s in zip(offsets, part_sizes))
    q = tuple(itertools.product(*parts[:k]))
    return {
        "n": sum(part_sizes),
        "offsets": offsets,
        "_parts": parts,
        "_part_index": tuple(i for i, s in enumerate(part_sizes, 1) for _ in range(max(s, 0))),
        "points": parts[k] if k < len(parts) else range(0),
        "_q": q,
        "_qset": frozenset(q),
    }


@dataclass(frozen=True)
class TkModel:
    k: int
    part_sizes: tuple[int, ...]
    qorder: tuple[Tup, ...]
    r_edges: frozenset
    labels: tuple[tuple[int, ...], ...] | None = None
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        # Layout attributes depend only on (k, part_sizes) and are shared.
        self.__dict__.update(_shape(self.k, tuple(self.part_sizes)))

    # -- layout -----------------------------------------------------------
    def part(self, i: int) -> range:
        """Elements of P_i (1-based part index)."""
        return self._parts[i - 1]

    def part_of(self, x: int) -> int:
        if 0 <= x < len(self._part_index):
            return self._part_index[x]
        raise IndexError(x)

    def q_tuples(self) -> list[Tup]:
        """All of Q = P_1 x ... x P_k in lexicographic order."""
        return list(self._q)

    @property
    def q_size(self) -> int:
        return prod(self.part_sizes[: self.k])

    @cached
    def qrank(self) -> dict[Tup, int]:
        return {t: r for r, t in enumerate(self.qorder)}

    @cached
    def thresholds(self) -> dict[Tup, int | None]:
        """Least P_{k+1} element related to each tuple (None if there is none)."""
        thr: dict[Tup, int | None] = {t: None for t in self.qorder}
        for t, w in self.r_edges:
            cur = thr.get(t)
            if cur is None or w < cur:
                thr[t] = w
        return thr

    @cached
    def _star(self) -> tuple:
        return _star_order(self)

    @cached
    def star_pos(self) -> dict:
        """Position of each Q-tuple and P_{k+1} element in the star order."""
        return {x: i for i, x in enumerate(self._star)}

    @cached
    def violations(self) -> tuple["Violation", ...]:
        return tuple(validate_tk(self))

    def R(self, t: Sequence[int], w: int) -> bool:
        return (tuple(t), w) in self.r_edges

    def is_canonical(self) -> bool:
        return self.labels is None and self.order is None

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "kind": "tk_model",
            "k": self.k,
            "part_sizes": list(self.part_sizes),
            "qorder": [list(t) for t in self.qorder],
            "R": [[list(t), w] for t, w in sorted(self.r_edges)],
        }
        if self.labels is not None:
            doc["labels"] = [list(x) for x in self.labels]
        if self.order is not None:
            doc["order"] = list(self.order)
        return doc

    @staticmethod
    def from_json(doc: Any) -> "TkModel":
        return parse_tk(doc)


def make_model(k: int, part_sizes: Sequence[int], qorder: Iterable[Sequence[int]],
               r_edges: Iterable[tuple[Sequence[int], int]]) -> TkModel:
    return TkModel(k, tuple(part_sizes), tuple(tuple(t) for t in qorder),
                   frozenset((tuple(t), w) for t, w in r_edges))


# -- parsing ------------------------------------------------------------------

def _int(v: Any, field: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(field, f"expected integer, got {v!r}")
    return v


def _int_list(v: Any, field: str) -> list[int]:
    if not isinstance(v, list):
        raise ParseError(field, "expected a list")
    return [_int(x, f"{field}[{i}]") for i, x in enumerate(v)]


def parse_tk(doc: Any) -> TkModel:
    if not isinstance(doc, dict):
        raise ParseError("document", "expected a JSON object")
    if doc.get("kind", "tk_model") != "tk_model":
        raise ParseError("kind", f"expected 'tk_model', got {doc.get('kind')!r}")
    for key in ("k", "part_sizes", "qorder", "R"):
        if key not in doc:
            raise ParseError(key, "missing")
    k = _int(doc["k"], "k")
    if k < 1:
        raise ParseError("k", "must be positive")
    sizes = _int_list(doc["part_sizes"], "part_sizes")
    if len(sizes) != k + 1:
        raise ParseError("part_sizes", f"expected {k + 1} entries, got {len(sizes)}")
    if any(s < 0 for s in sizes):
        raise ParseError("part_sizes", "sizes must be nonnegative")
    n = sum(sizes)
    labels = None
    if "labels" in doc:
        raw = doc["labels"]
        if not isinstance(raw, list):
            raise ParseError("labels", "expected a list")
        labels = tuple(tuple(_int_list(x, f"labels[{i}]")) for i, x in enumerate(raw))
        n = len(labels)
        for i, ls in enumerate(labels):
            if any(not 1 <= p <= k + 1 for p in ls):
                raise ParseError(f"labels[{i}]", "part index out of range")
    order = None
    if "order" in doc:
        order = tuple(_int_list(doc["order"], "order"))
        if any(not 0 <= x < n for x in order):
            raise ParseError("order", "element id out of range")

    def ids(t: Any, field: str, length: int) -> Tup:
        vals = _int_list(t, field)
        if len(vals) != length:
            raise ParseError(field, f"expected a {length}-tuple")
        if any(not 0 <= x < n for x in vals):
            raise ParseError(field, "element id out of range")
        return tuple(vals)

    if not isinstance(doc["qorder"], list):
        raise ParseError("qorder", "expected a list")
    qorder = tuple(ids(t, f"qorder[{i}]", k) for i, t in enumerate(doc["qorder"]))
    if not isinstance(doc["R"], list):
        raise ParseError("R", "expected a list")
    edges = set()
    for i, pair in enumerate(doc["R"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"R[{i}]", "expected [tuple, element]")
        t = ids(pair[0], f"R[{i}][0]", k)
        w = _int(pair[1], f"R[{i}][1]")
        if not 0 <= w < n:
            raise ParseError(f"R[{i}][1]", "element id out of range")
        edges.add((t, w))
    return TkModel(k, tuple(sizes), qorder, frozenset(edges), labels, order)


# -- validation ---------------------------------------------------------------

def validate_tk(model: TkModel) -> list[Violation]:
    """Return one violation per failed axiom (1)-(5); empty iff a model of T_k."""
    if model.is_canonical() and _quick_valid(model):
        return []
    k = model.k
    n = len(model.labels) if model.labels is not None else model.n
    out: list[Violation] = []

    if model.is_canonical():
        # Axioms (1) and (2) hold by construction for the contiguous-block layout.
        members = {i: list(model.part(i)) for i in range(1, k + 2)}
        pos = {x: x for x in range(n)}
    else:
        members, pos = _check_layout(model, n, out)
    member_sets = {i: set(v) for i, v in members.items()}
    qset = set(itertools.product(*(members[i] for i in range(1, k + 1))))
    in_q = qset.__contains__

    # (3) R only on Q x P_{k+1}
    for t, w in sorted(model.r_edges):
        if not in_q(t) or w not in member_sets[k + 1]:
            out.append(Violation(3, f"R holds on ({list(t)}, {w}) outside Q x P_{k + 1}",
                                 {"tuple": list(t), "w": w}))
            break

    # (4) <_k only on Q and a linear order on Q
    bad = next((t for t in model.qorder if not in_q(t)), None)
    seen: dict[Tup, int] = {}
    dup = None
    for t in model.qorder:
        if t in seen and dup is None:
            dup = t
        seen.setdefault(t, len(seen))
    missing = sorted(qset - set(model.qorder))
    if bad is not None:
        out.append(Violation(4, f"<_k relates the non-Q tuple {list(bad)}", {"tuple": list(bad)}))
    elif dup is not None:
        out.append(Violation(4, f"tuple {list(dup)} occurs twice in <_k", {"tuple": list(dup)}))
    elif missing:
        out.append(Violation(4, f"<_k is not total on Q: {list(missing[0])} is unordered",
                             {"tuple": list(missing[0])}))

    # (5) monotonicity, pointwise, to produce a witness
    rank = {t: r for r, t in enumerate(dict.fromkeys(model.qorder)) if in_q(t)}
    pts = sorted(member_sets[k + 1], key=lambda x: pos.get(x, x))
    edges = {(t, w) for t, w in model.r_edges if t in rank and w in member_sets[k + 1]}
    wit = _monotone_witness(rank, pts, edges)
    if wit is not None:
        x, y, w, z = wit
        out.append(Violation(5, "monotonicity fails",
                             {"x": list(x), "y": list(y), "w": w, "z": z}))
    if model.is_canonical() and not out and wit is None:
        raise AssertionError("threshold and pointwise monotonicity checks disagree")
    return out


def _quick_valid(model: TkModel) -> bool:
    """Linear-time acceptance for canonically numbered models; a False answer
    falls through to the full check, which names the violation.

    Axiom (5) in threshold form: every R-row is an up-set of the points and
    the least related point weakly increases along <_k.
    """
    qset, pts = model._qset, model.points
    qorder = model.qorder
    if len(qorder) != len(qset) or not qset.issuperset(qorder):
        return False
    lo, top = pts.start, pts.stop
    count: dict[Tup, int] = {}
    least: dict[Tup, int] = {}
    for t, w in model.r_edges:
        if t not in qset or not lo <= w < top:
            return False
        count[t] = count.get(t, 0) + 1
        if w < least.get(t, top):
            least[t] = w
    last = -1
    for t in qorder:
        c = count.get(t)
        cur = least[t] if c else top
        if c and c != top - cur:
            return False
        if cur < last:
            return False
        last = cur
    return True


def _check_layout(model: TkModel, n: int, out: list) -> tuple[dict, dict]:
    """Axioms (1) and (2) for models with explicit labels or order."""
    k = model.k
    if model.labels is None:
        labels = [(model.part_of(x),) for x in range(n)]
    else:
        labels = [tuple(ls) for ls in model.labels]
    members = {i: [x for x in range(n) if i in labels[x]] for i in range(1, k + 2)}

    # (1) partition
    for x in range(n):
        if len(set(labels[x])) != 1:
            out.append(Violation(1, f"element {x} lies in {len(set(labels[x]))} parts",
                                 {"element": x, "parts": sorted(set(labels[x]))}))
            break

    # (2) linear order with P_1 < ... < P_{k+1}
    order = list(model.order) if model.order is not None else list(range(n))
    pos = {x: i for i, x in enumerate(order)}
    if sorted(order) != list(range(n)):
        missing = sorted(set(range(n)) - set(order))
        dup = sorted(x for x in set(order) if order.count(x) > 1)
        out.append(Violation(2, "< is not a linear order on the domain",
                             {"missing": missing, "repeated": dup}))
    else:
        found = None
        for i in range(1, k + 2):
            for j in range(i + 1, k + 2):
                for x in members[i]:
                    for y in members[j]:
                        if pos[x] > pos[y]:
                            found = (i, j, x, y)
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                break
        if found:
            i, j, x, y = found
            out.append(Violation(2, f"P_{i} element {x} is not below P_{j} element {y}",
                                 {"x": x, "y": y}))
    return members, pos


def _monotone_witness(rank: dict[Tup, int], pts: list[int], edges: set):
    """First (x, y, w, z) with x <=_k y, R(y,w), w <= z and not R(x,z)."""
    by_rank = sorted(rank, key=rank.get)
    ppos = {w: i for i, w in enumerate(pts)}
    for y, w in sorted(edges, key=lambda e: (rank[e[0]], ppos[e[1]])):
        for x in by_rank[: rank[y] + 1]:
            for z in reversed(pts[ppos[w]:]):
                if (x, z) not in edges:
                    return x, y, w, z
    return None


def is_valid(model: TkModel) -> bool:
    return not model.violations


def require_valid(model: TkModel) -> None:
    if model.violations:
        raise InvalidModel(list(model.violations))


# -- star order -----------------------------------------------------------------

def star_order(model: TkModel) -> list[Item]:
    """Rank Q and P_{k+1} together by <_k, R and <."""
    return list(model._star)


def _star_order(model: TkModel) -> tuple[Item, ...]:
    require_valid(model)
    thr = model.thresholds
    out: list[Item] = []
    pending = list(model.qorder)
    i = 0
    for w in model.points:
        while i < len(pending) and thr[pending[i]] is not None and thr[pending[i]] <= w:
            out.append(pending[i])
            i += 1
        out.append(w)
    out.extend(pending[i:])
    return tuple(out)


def from_star_order(k: int, part_sizes: Sequence[int], ranking: Sequence[Item]) -> TkModel:
    """Build the model whose star order is ``ranking``."""
    skel = TkModel(k, tuple(part_sizes), (), frozenset())
    items = [tuple(x) if isinstance(x, (list, tuple)) else x for x in ranking]
    want_q = set(skel.q_tuples())
    got_q = [x for x in items if isinstance(x, tuple)]
    got_p = [x for x in items if not isinstance(x, tuple)]
    if len(set(got_q)) != len(got_q) or set(got_q) != want_q:
        raise ParseError("ranking", "must list every Q-tuple exactly once")
    if got_p != list(skel.points):
        raise ParseError("ranking", "P_{k+1} elements must appear once each in numeric order")
    qorder = tuple(got_q)
    edges = set()
    for idx, x in enumerate(items):
        if isinstance(x, tuple):
            edges.update((x, w) for w in items[idx + 1:] if not isinstance(w, tuple))
    return TkModel(k, tuple(part_sizes), qorder, frozenset(edges))


def item_to_json(x: Item) -> Any:
    return list(x) if isinstance(x, tuple) else x


def star_less(model: TkModel, a: Item, b: Item) -> bool:
    """a <_* b in a model of T_k."""
    if isinstance(a, tuple) and isinstance(b, tuple):
        return model.qrank[a] < model.qrank[b]
    if isinstance(a, tuple):
        return model.R(a, b)
    if isinstance(b, tuple):
        return not model.R(b, a)
    return a < b


# -- quantifier-free types --------------------------------------------------------

_FACT_EQ, _FACT_P, _FACT_LT, _FACT_LTK, _FACT_R = range(5)


def qf_type(model: TkModel, tup: Sequence[int], lang: str = "Lk") -> bytes:
    """Canonical encoding of the atomic diagram of ``tup`` in a sublanguage.

    Facts mention variable positions only, so the encoding is invariant under
    any renaming of elements.
    """
    if lang not in LANGS:
        raise ParseError("lang", f"unknown language tag {lang!r}")
    n = model.n
    tup = tuple(tup)
    for x in tup:
        if not 0 <= x < n:
            raise ParseError("tuple", f"element id {x} out of range")
    k, m = model.k, len(tup)
    facts: list[tuple[int, ...]] = []
    for i in range(m):
        for j in range(m):
            if tup[i] == tup[j]:
                facts.append((_FACT_EQ, i, j))
            if tup[i] < tup[j]:
                facts.append((_FACT_LT, i, j))
    use_last = lang != "LQk"
    for i in range(m):
        p = model.part_of(tup[i])
        if p <= k or use_last:
            facts.append((_FACT_P, p, i))
    if lang in ("Lk", "L'k", "LQk"):
        idx = list(itertools.product(range(m), repeat=k))
        rank = model.qrank
        for u in idx:
            tu = tuple(tup[i] for i in u)
            if tu not in rank:
                continue
            for v in idx:
                tv = tuple(tup[i] for i in v)
                if tv in rank and rank[tu] < rank[tv]:
                    facts.append((_FACT_LTK,) + u + v)
    if lang == "Lk":
        for u in itertools.product(range(m), repeat=k + 1):
            if model.R(tuple(tup[i] for i in u[:k]), tup[u[k]]):
                facts.append((_FACT_R,) + u)
    facts.sort()
    buf = bytearray(struct.pack("<II", LANGS.index(lang), m))
    for f in facts:
        buf += struct.pack(f"<I{len(f)}I", len(f), *f)
    return bytes(buf)


# -- embeddings -------------------------------------------------------------------

def is_embedding(a: TkModel, c: TkModel, h: Sequence[int]) -> bool:
    """Check that h (indexed by a's element ids) is an L_k-embedding of a into c."""
    if a.k != c.k or len(h) != a.n:
        return False
    pa, pc = a._part_index, c._part_index
    prev = -1
    for x in range(a.n):
        y = h[x]
        if y <= prev or y >= c.n or pc[y] != pa[x]:
            return False
        prev = y
    crank = c.qrank
    prev = -1
    images = {}
    for t in a.qorder:
        ht = tuple([h[x] for x in t])
        r = crank.get(ht)
        if r is None or r < prev:
            return False
        prev = r
        images[t] = ht
    ea, ec = a.r_edges, c.r_edges
    for t in a._q:
        ht = images.get(t) or tuple([h[x] for x in t])
        for w in a.points:
            if ((t, w) in ea) != ((ht, h[w]) in ec):
                return False
    return True


def find_embeddings(a: TkModel, c: TkModel) -> list[tuple[int, ...]]:
    """All L_k-embeddings of a into c, lexicographic by image."""
    require_valid(a)
    require_valid(c)
    if a.k != c.k or any(x > y for x, y in zip(a.part_sizes, c.part_sizes)):
        return []
    k = a.k
    q_choices = [list(itertools.combinations(c.part(i), a.part_sizes[i - 1]))
                 for i in range(1, k + 1)]
    a_q = a.q_tuples()
    a_pts = list(a.points)
    out: list[tuple[int, ...]] = []
    for parts in itertools.product(*q_choices):
        h: list[int] = [y for ys in parts for y in ys]
        ranks = [c.qrank[tuple(h[x] for x in t)] for t in a.qorder]
        if any(r0 >= r1 for r0, r1 in zip(ranks, ranks[1:])):
            continue
        images = {t: tuple(h[x] for x in t) for t in a_q}

        def extend(j: int, lo: int) -> None:
            if j == len(a_pts):
                out.append(tuple(h))
                return
            w = a_pts[j]
            for y in range(lo, c.offsets[k] + c.part_sizes[k]):
                if all(a.R(t, w) == c.R(images[t], y) for t in a_q):
                    h.append(y)
                    extend(j + 1, y + 1)
                    h.pop()

        extend(0, c.offsets[k])
    return out


def substructure(model: TkModel, elements: Iterable[int]) -> tuple[TkModel, list[int]]:
    """Induced substructure, renumbered; also returns new-id -> old-id."""
    keep = sorted(set(elements))
    new = {x: i for i, x in enumerate(keep)}
    sizes = [sum(1 for x in keep if x in model.part(i)) for i in range(1, model.k + 2)]
    kept = set(keep)
    qorder = [tuple(new[x] for x in t) for t in model.qorder if all(x in kept for x in t)]
    edges = [(tuple(new[x] for x in t), new[w]) for t, w in model.r_edges
             if w in kept and all(x in kept for x in t)]
    return make_model(model.k, sizes, qorder, edges), keep


# -- enumeration --------------------------------------------------------------------

def model_count(k: int, part_sizes: Sequence[int]) -> int:
    q = prod(part_sizes[:k])
    m = part_sizes[k]
    return factorial(q + m) // factorial(m)


def enumerate_models(k: int, part_sizes: Sequence[int]) -> Iterator[TkModel]:
    """Every model of T_k on the given part sizes, once each."""
    if len(part_sizes) != k + 1 or any(s < 0 for s in part_sizes):
        raise ParseError("part_sizes", f"expected {k + 1} nonnegative sizes")
    skel = TkModel(k, tuple(part_sizes), (), frozenset())
    tuples = skel.q_tuples()
    pts = list(skel.points)
    total = len(tuples) + len(pts)
    for slots in itertools.combinations(range(total), len(pts)):
        slot_set = set(slots)
        for perm in itertools.permutations(tuples):
            it = iter(perm)
            ranking: list[Item] = []
            pi = iter(pts)
            for pos in range(total):
                ranking.append(next(pi) if pos in slot_set else next(it))
            yield from_star_order(k, part_sizes, ranking)


def same_reduct(a: TkModel, b: TkModel) -> bool:
    """Equal L''_k reducts (under the canonical numbering)."""
    return a.k == b.k and a.part_sizes == b.part_sizes


def isomorphic(a: TkModel, b: TkModel) -> bool:
    """L_k-isomorphism; the order-preserving bijection is the only candidate."""
    return same_reduct(a, b) and a.qorder == b.qorder and a.r_edges == b.r_edges
