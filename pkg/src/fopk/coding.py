"""Partite hypergraphs, R-codings of T_k models, and FOP_k / IP_k witnesses.

Index conventions: grid indices and function values live in ``[n] = {1..n}``;
hypergraph vertices are 0-based and local to their part.  A function
``[n]^j -> [n]`` is stored as the tuple of its values listed in lexicographic
order of arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .structures import ParseError, TkModel, _int, _int_list, require_valid

GRID_CAP = 4096
FORMATS = ("grid", "array", "order", "partition", "ip_grid")


class CapacityError(ValueError):
    pass


class ConversionError(ValueError):
    pass


@dataclass(frozen=True)
class PartiteHypergraph:
    k: int
    part_sizes: tuple[int, ...]
    edges: frozenset

    def has(self, e: Sequence[int]) -> bool:
        return tuple(e) in self.edges

    def complement(self) -> "PartiteHypergraph":
        every = itertools.product(*(range(s) for s in self.part_sizes))
        return PartiteHypergraph(self.k, self.part_sizes,
                                 frozenset(e for e in every if e not in self.edges))

    def to_json(self) -> dict:
        return {"kind": "partite_hypergraph", "k": self.k, "part_sizes": list(self.part_sizes),
                "edges": [list(e) for e in sorted(self.edges)]}

    @staticmethod
    def from_json(doc: Any) -> "PartiteHypergraph":
        if not isinstance(doc, dict) or doc.get("kind", "partite_hypergraph") != "partite_hypergraph":
            raise ParseError("kind", "expected a partite_hypergraph document")
        k = _int(doc.get("k"), "k")
        sizes = _int_list(doc.get("part_sizes"), "part_sizes")
        if len(sizes) != k + 1 or any(s < 0 for s in sizes):
            raise ParseError("part_sizes", f"expected {k + 1} nonnegative sizes")
        raw = doc.get("edges")
        if not isinstance(raw, list):
            raise ParseError("edges", "expected a list")
        edges = set()
        for i, e in enumerate(raw):
            e = tuple(_int_list(e, f"edges[{i}]"))
            if len(e) != k + 1 or any(not 0 <= x < s for x, s in zip(e, sizes)):
                raise ParseError(f"edges[{i}]", "coordinate out of range")
            if e in edges:
                raise ParseError(f"edges[{i}]", "duplicate edge")
            edges.add(e)
        return PartiteHypergraph(k, tuple(sizes), frozenset(edges))


def hypergraph_of(model: TkModel) -> PartiteHypergraph:
    """R viewed as a (k+1)-partite hypergraph with part-local indices."""
    offs = model.offsets
    edges = frozenset(tuple(x - offs[i] for i, x in enumerate(t + (w,))) for t, w in model.r_edges)
    return PartiteHypergraph(model.k, model.part_sizes, edges)


# -- R-coding -----------------------------------------------------------------

def verify_r_coding(h: TkModel, e: PartiteHypergraph, assignment: Sequence[int]) -> bool:
    """Check ``E(a_{h_1},...,a_{h_{k+1}}) <-> R(h_1,...,h_{k+1})`` everywhere."""
    if h.k != e.k or len(assignment) != h.n:
        return False
    for x in range(h.n):
        if not 0 <= assignment[x] < e.part_sizes[h.part_of(x) - 1]:
            return False
    for t in h.q_tuples():
        for w in h.points:
            img = tuple(assignment[x] for x in t) + (assignment[w],)
            if e.has(img) != h.R(t, w):
                return False
    return True


def find_r_coding(h: TkModel, e: PartiteHypergraph,
                  assignment: Sequence[int] | None = None) -> list[int] | None:
    """Complete backtracking search for a sequence ``(a_x)`` R-coding h in e.

    With ``assignment`` given, only verifies it (returns it or None).  The
    search picks the variable with the smallest live domain, and after each
    choice prunes the domain of any variable that is the last unassigned
    coordinate of some (k+1)-tuple.
    """
    require_valid(h)
    if h.k != e.k:
        raise ValueError(f"arity mismatch: model k={h.k}, hypergraph k={e.k}")
    if assignment is not None:
        return list(assignment) if verify_r_coding(h, e, assignment) else None
    k = h.k
    n = h.n
    part = [h.part_of(x) - 1 for x in range(n)]
    constraints = [(t + (w,), h.R(t, w)) for t in h.q_tuples() for w in h.points]
    touching: list[list[int]] = [[] for _ in range(n)]
    for ci, (vars_, _) in enumerate(constraints):
        for x in set(vars_):
            touching[x].append(ci)
    domains = [list(range(e.part_sizes[part[x]])) for x in range(n)]
    value: list[int | None] = [None] * n
    edges = e.edges

    def consistent(ci: int) -> bool:
        vars_, want = constraints[ci]
        return ((tuple(value[x] for x in vars_) in edges) == want)

    def search(doms: list[list[int]]) -> bool:
        free = [x for x in range(n) if value[x] is None]
        if not free:
            return True
        x = min(free, key=lambda y: (len(doms[y]), y))
        for v in doms[x]:
            value[x] = v
            ok = True
            new_doms = list(doms)
            for ci in touching[x]:
                vars_, _ = constraints[ci]
                unassigned = {y for y in vars_ if value[y] is None}
                if not unassigned:
                    if not consistent(ci):
                        ok = False
                        break
                elif len(unassigned) == 1:
                    (y,) = unassigned
                    keep = []
                    for cand in new_doms[y]:
                        value[y] = cand
                        if consistent(ci):
                            keep.append(cand)
                    value[y] = None
                    new_doms[y] = keep
                    if not keep:
                        ok = False
                        break
            if ok and search(new_doms):
                return True
            value[x] = None
        return False

    if any(not d for d in domains):
        return [] if n == 0 else None
    if search(domains):
        return [int(v) for v in value]  # type: ignore[arg-type]
    return None


# -- witnesses ----------------------------------------------------------------

def all_functions(n: int, arity: int) -> list[tuple[int, ...]]:
    """Every function [n]^arity -> [n] as a value tuple (lexicographic)."""
    count = n ** (n ** arity)
    if count > GRID_CAP:
        raise CapacityError(f"{count} functions [{n}]^{arity} -> [{n}] exceed the cap {GRID_CAP}")
    return list(itertools.product(range(1, n + 1), repeat=n ** arity))


def fn_value(fvals: Sequence[int], n: int, args: Sequence[int]) -> int:
    idx = 0
    for a in args:
        idx = idx * n + (a - 1)
    return fvals[idx]


def grid_tuples(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, n + 1), repeat=k))


@dataclass
class Witness:
    format: str
    k: int
    n: int
    a: Any = None  # grid: {f: v}; array: {(j, f): v}; order/partition: list of k(+1) lists; ip_grid: {X: v}
    b: Any = None  # grid/array/ip_grid: list of k lists; partition: list of s vertices
    order: list | None = None  # order format: items (tuples or ints) ascending in <_*
    parts: list | None = None  # partition format: E_1..E_s as lists of tuples

    @property
    def s(self) -> int:
        return len(self.parts or [])

    def to_json(self) -> dict:
        doc: dict[str, Any] = {"kind": "witness", "format": self.format, "k": self.k, "n": self.n}
        if self.format == "grid":
            doc["a"] = [[list(f), v] for f, v in sorted(self.a.items())]
            doc["b"] = [list(x) for x in self.b]
        elif self.format == "array":
            doc["a"] = [[j, list(f), v] for (j, f), v in sorted(self.a.items())]
            doc["b"] = [list(x) for x in self.b]
        elif self.format == "order":
            doc["order"] = [list(x) if isinstance(x, tuple) else x for x in self.order]
            doc["a"] = [list(x) for x in self.a]
        elif self.format == "partition":
            doc["s"] = self.s
            doc["parts"] = [[list(t) for t in sorted(p)] for p in self.parts]
            doc["a"] = [list(x) for x in self.a]
            doc["b"] = list(self.b)
        elif self.format == "ip_grid":
            doc["a"] = [[[list(t) for t in sorted(x)], v] for x, v in
                        sorted(self.a.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))]
            doc["b"] = [list(x) for x in self.b]
        return doc

    @staticmethod
    def from_json(doc: Any) -> "Witness":
        if not isinstance(doc, dict):
            raise ParseError("document", "expected a witness object")
        fmt = doc.get("format")
        if fmt not in FORMATS:
            raise ParseError("format", f"expected one of {FORMATS}")
        k = _int(doc.get("k"), "k")
        n = _int(doc.get("n"), "n")
        w = Witness(fmt, k, n)
        if fmt in ("grid", "array", "ip_grid"):
            w.b = [_int_list(x, f"b[{i}]") for i, x in enumerate(doc.get("b") or [])]
        if fmt == "grid":
            w.a = {tuple(_int_list(f, "a")): _int(v, "a") for f, v in doc.get("a", [])}
        elif fmt == "array":
            w.a = {(_int(j, "a"), tuple(_int_list(f, "a"))): _int(v, "a") for j, f, v in doc.get("a", [])}
        elif fmt == "ip_grid":
            w.a = {frozenset(tuple(_int_list(t, "a")) for t in x): _int(v, "a") for x, v in doc.get("a", [])}
        elif fmt == "order":
            w.order = [tuple(_int_list(x, "order")) if isinstance(x, list) else _int(x, "order")
                       for x in doc.get("order", [])]
            w.a = [_int_list(x, f"a[{i}]") for i, x in enumerate(doc.get("a", []))]
        else:
            w.parts = [[tuple(_int_list(t, "parts")) for t in p] for p in doc.get("parts", [])]
            w.a = [_int_list(x, f"a[{i}]") for i, x in enumerate(doc.get("a", []))]
            w.b = _int_list(doc.get("b", []), "b")
        return w


def _vertex_ok(e: PartiteHypergraph, part: int, v: Any) -> bool:
    return isinstance(v, int) and 0 <= v < e.part_sizes[part]


def _check_seq(e: PartiteHypergraph, seqs: Sequence[Sequence[int]], first_part: int, length: int):
    for t, seq in enumerate(seqs):
        if len(seq) < length or any(not _vertex_ok(e, first_part + t, v) for v in seq):
            raise ParseError(f"sequence {t + 1}", "vertex out of range or too short")


def fop_witness_check(e: PartiteHypergraph, w: Witness) -> bool:
    """Does the witness realize its format's defining biconditional in e?"""
    k, n = w.k, w.n
    if e.k != k:
        raise ValueError("witness arity does not match hypergraph")
    if w.format == "grid":
        funcs = all_functions(n, k - 1)
        if set(w.a) != set(funcs) or len(w.b) != k:
            raise ParseError("a", "grid witness must index every function [n]^{k-1} -> [n]")
        if any(not _vertex_ok(e, 0, v) for v in w.a.values()):
            raise ParseError("a", "vertex out of range")
        _check_seq(e, w.b, 1, n)
        for f, av in w.a.items():
            for t in grid_tuples(n, k):
                want = t[-1] <= fn_value(f, n, t[:-1])
                if e.has((av,) + tuple(w.b[i][t[i] - 1] for i in range(k))) != want:
                    return False
        return True
    if w.format == "array":
        funcs = all_functions(n, k)
        keys = {(j, f) for j in range(1, n + 1) for f in funcs}
        if set(w.a) != keys or len(w.b) != k:
            raise ParseError("a", "array witness must index [n] x every function [n]^k -> [n]")
        if any(not _vertex_ok(e, 0, v) for v in w.a.values()):
            raise ParseError("a", "vertex out of range")
        _check_seq(e, w.b, 1, n)
        for (j, f), av in w.a.items():
            for t in grid_tuples(n, k):
                want = t[-1] <= fn_value(f, n, (j,) + t[:-1])
                if e.has((av,) + tuple(w.b[i][t[i] - 1] for i in range(k))) != want:
                    return False
        return True
    if w.format == "order":
        items = grid_tuples(n, k) + list(range(1, n + 1))
        if sorted(map(_item_key, w.order)) != sorted(map(_item_key, items)) or len(w.order) != len(items):
            raise ParseError("order", "must list [n]^k and [n] exactly once")
        if len(w.a) != k + 1:
            raise ParseError("a", "order witness needs k+1 sequences")
        _check_seq(e, w.a, 0, n)
        pos = {_item_key(x): i for i, x in enumerate(w.order)}
        for t in grid_tuples(n, k):
            for j in range(1, n + 1):
                want = pos[_item_key(t)] < pos[_item_key(j)]
                img = tuple(w.a[i][t[i] - 1] for i in range(k)) + (w.a[k][j - 1],)
                if e.has(img) != want:
                    return False
        return True
    if w.format == "partition":
        cells = [set(map(tuple, p)) for p in w.parts]
        flat = [t for p in cells for t in p]
        if len(flat) != len(set(flat)) or set(flat) != set(grid_tuples(n, k)):
            raise ParseError("parts", "must partition [n]^k")
        if len(w.a) != k or len(w.b) != len(cells):
            raise ParseError("a", "partition witness needs k sequences and s b-vertices")
        _check_seq(e, w.a, 0, n)
        if any(not _vertex_ok(e, k, v) for v in w.b):
            raise ParseError("b", "vertex out of range")
        cell_of = {t: i + 1 for i, p in enumerate(cells) for t in p}
        for t in grid_tuples(n, k):
            for j in range(1, len(cells) + 1):
                want = cell_of[t] >= j
                img = tuple(w.a[i][t[i] - 1] for i in range(k)) + (w.b[j - 1],)
                if e.has(img) != want:
                    return False
        return True
    if w.format == "ip_grid":
        tuples = grid_tuples(n, k)
        if len(w.a) != 2 ** len(tuples) or len(w.b) != k:
            raise ParseError("a", "ip_grid witness must index every subset of [n]^k")
        if any(not _vertex_ok(e, 0, v) for v in w.a.values()):
            raise ParseError("a", "vertex out of range")
        _check_seq(e, w.b, 1, n)
        for x, av in w.a.items():
            for t in tuples:
                img = (av,) + tuple(w.b[i][t[i] - 1] for i in range(k))
                if e.has(img) != (t in x):
                    return False
        return True
    raise ParseError("format", w.format)


def _item_key(x: Any) -> tuple:
    return (0,) + tuple(x) if isinstance(x, tuple) else (1, x)


# -- conversions ----------------------------------------------------------------

def default_order(n: int, k: int) -> list:
    """Points 1..n ascending; tuple t sits just before point 1 + (sum(t) - k) mod n."""
    items: list = []
    for p in range(1, n + 1):
        for t in grid_tuples(n, k):
            if 1 + (sum(t) - k) % n == p:
                items.append(t)
        items.append(p)
    return items


def convert_witness(w: Witness, to: str, target_order: list | None = None) -> Witness:
    """Apply one of the constructive conversions; the output's n is reported in it.

    Sizes: grid<->array keep n; grid->order keeps n when every tuple of the
    target order has a point above it, and otherwise uses n-1; order->partition
    keeps n with s = n; partition->grid yields the largest m <= min(n, s) for
    which every function [m]^{k-1} -> [m] is read off some row; ip_grid->grid
    keeps n.
    """
    pair = (w.format, to)
    k, n = w.k, w.n
    if pair == ("grid", "array"):
        funcs = all_functions(n, k)
        a = {}
        for j in range(1, n + 1):
            for f in funcs:
                fj = tuple(fn_value(f, n, (j,) + args) for args in grid_tuples(n, k - 1))
                a[(j, f)] = w.a[fj]
        return Witness("array", k, n, a=a, b=[list(x) for x in w.b])
    if pair == ("array", "grid"):
        a = {}
        for f in all_functions(n, k - 1):
            g = tuple(fn_value(f, n, args[1:]) for args in grid_tuples(n, k))
            a[f] = w.a[(1, g)]
        return Witness("grid", k, n, a=a, b=[list(x) for x in w.b])
    if pair == ("grid", "order"):
        return _grid_to_order(w, target_order)
    if pair == ("order", "partition"):
        return _order_to_partition(w)
    if pair == ("partition", "grid"):
        return _partition_to_grid(w)
    if pair == ("ip_grid", "grid"):
        a = {}
        for f in all_functions(n, k - 1):
            xf = frozenset(t for t in grid_tuples(n, k) if t[-1] <= fn_value(f, n, t[:-1]))
            a[f] = w.a[xf]
        return Witness("grid", k, n, a=a, b=[list(x) for x in w.b])
    raise ConversionError(f"no constructive conversion {w.format} -> {to}")


def _grid_to_order(w: Witness, target: list | None) -> Witness:
    k, n = w.k, w.n
    if target is None:
        target = default_order(n, k)
    target = [tuple(x) if isinstance(x, (list, tuple)) else x for x in target]
    pts = [x for x in target if not isinstance(x, tuple)]
    m = len(pts)
    if sorted(pts) != list(range(1, m + 1)):
        raise ConversionError("target order must list points 1..n'")
    tuples = [x for x in target if isinstance(x, tuple)]
    if sorted(tuples) != grid_tuples(m, k):
        raise ConversionError("target order must list [n']^k exactly once")
    rank = {}  # rank of each point among points, ascending in <_*
    c = {}  # least rank of a point above the tuple, m+1 if none
    seen_pts = 0
    pending = []
    for x in target:
        if isinstance(x, tuple):
            pending.append(x)
        else:
            seen_pts += 1
            rank[x] = seen_pts
            for t in pending:
                c[t] = seen_pts
            pending = []
    for t in pending:
        c[t] = m + 1
    uncovered = bool(pending)
    if m > n or (uncovered and m > n - 1):
        raise ConversionError(
            f"grid of size {n} cannot realize this order on [{m}]" +
            (" (some tuple has no point above it; use n' <= n-1)" if uncovered else ""))
    top = m + 1 if not uncovered else m + 2  # a^{k+1}_p = b^k_{top - rank(p)}
    a1 = []
    for i in range(1, m + 1):
        vals = []
        for args in grid_tuples(n, k - 1):
            if all(x <= m for x in args):
                vals.append(top - c[(i,) + args])
            else:
                vals.append(1)
        a1.append(w.a[tuple(vals)])
    seqs = [a1]
    for t in range(2, k + 1):
        seqs.append([w.b[t - 2][i - 1] for i in range(1, m + 1)])
    seqs.append([w.b[k - 1][top - rank[p] - 1] for p in range(1, m + 1)])
    return Witness("order", k, m, a=seqs, order=target)


def _order_to_partition(w: Witness) -> Witness:
    k, n = w.k, w.n
    pts_desc = [x for x in reversed(w.order) if not isinstance(x, tuple)]
    above = 0
    count: dict[tuple, int] = {}
    for x in reversed(w.order):
        if isinstance(x, tuple):
            count[x] = above
        else:
            above += 1
    bare = sorted(t for t, c in count.items() if c == 0)
    if bare:
        raise ConversionError(f"tuple {list(bare[0])} has no point above it; no cell E_l with l >= 1 fits")
    parts = [[t for t in grid_tuples(n, k) if count[t] == d] for d in range(1, n + 1)]
    b = [w.a[k][q - 1] for q in pts_desc]
    return Witness("partition", k, n, a=[list(x) for x in w.a[:k]], b=b, parts=parts)


def _partition_to_grid(w: Witness) -> Witness:
    k, n, s = w.k, w.n, w.s
    cell_of = {tuple(t): i + 1 for i, p in enumerate(w.parts) for t in p}

    def rows(m: int) -> dict:
        out: dict = {}
        for i in range(1, n + 1):
            g = tuple(min(cell_of[(i,) + args], m) for args in grid_tuples(m, k - 1))
            out.setdefault(g, i)
        return out

    best = 0
    for m in range(min(n, s), 0, -1):
        if m ** (m ** (k - 1)) > GRID_CAP:
            continue
        if len(rows(m)) == m ** (m ** (k - 1)):
            best = m
            break
    if best == 0:
        raise ConversionError("the partition realizes no grid of positive size")
    m = best
    r = rows(m)
    a = {f: w.a[0][r[f] - 1] for f in all_functions(m, k - 1)}
    b = [w.a[t][:m] for t in range(1, k)] + [w.b[:m]]
    return Witness("grid", k, m, a=a, b=b)


# -- IP_k search ----------------------------------------------------------------

def find_ip_grid(e: PartiteHypergraph, n: int) -> Witness | None:
    """Complete search for b-sequences of length n and a_X for every X in [n]^k."""
    k = e.k
    tuples = grid_tuples(n, k)
    need = 2 ** len(tuples)
    if need > e.part_sizes[0]:
        return None
    slots = [(t, i) for t in range(k) for i in range(n)]
    b = [[0] * n for _ in range(k)]
    x1 = range(e.part_sizes[0])

    def patterns(det: list) -> set:
        return {tuple(e.has((v,) + tuple(b[i][t[i] - 1] for i in range(k))) for t in det) for v in x1}

    def search(si: int):
        if si == len(slots):
            return True
        t, i = slots[si]
        for v in range(e.part_sizes[t + 1]):
            b[t][i] = v
            det = [u for u in tuples if all(
                slots.index((c, u[c] - 1)) <= si for c in range(k))]
            if len(patterns(det)) == 2 ** len(det) and search(si + 1):
                return True
        return False

    if any(e.part_sizes[t + 1] == 0 for t in range(k)) and n > 0:
        return None
    if not search(0):
        return None
    a = {}
    for v in x1:
        x = frozenset(u for u in tuples if e.has((v,) + tuple(b[i][u[i] - 1] for i in range(k))))
        a.setdefault(x, v)
    return Witness("ip_grid", k, n, a=a, b=[list(x) for x in b])


# -- planted witnesses ----------------------------------------------------------

def random_order(n: int, k: int, rng, top_point: bool = False) -> list:
    """A uniformly shuffled order on [n]^k and [n] with points ascending."""
    tuples = grid_tuples(n, k)
    while True:
        slots = sorted(rng.sample(range(len(tuples) + n), n))
        if not top_point or n == 0 or slots[-1] == len(tuples) + n - 1:
            break
    rng.shuffle(tuples)
    out: list = []
    it = iter(tuples)
    p = 1
    for pos in range(len(tuples) + n):
        if p <= n and pos == slots[p - 1]:
            out.append(p)
            p += 1
        else:
            out.append(next(it))
    return out


def planted_witness(fmt: str, k: int, n: int, rng, extra: int = 1, noise: float = 0.5,
                    top_point: bool = False):
    """A random hypergraph together with a witness of the given format planted in it.

    Witness vertices are distinct within each part, so every edge between them
    is forced by the format; all other edges are random noise.
    """
    tuples = grid_tuples(n, k)
    if fmt == "grid":
        keys = all_functions(n, k - 1)
    elif fmt == "array":
        keys = [(j, f) for j in range(1, n + 1) for f in all_functions(n, k)]
    elif fmt == "ip_grid":
        keys = [frozenset(c) for r in range(len(tuples) + 1) for c in itertools.combinations(tuples, r)]
    else:
        keys = []
    if fmt in ("grid", "array", "ip_grid"):
        need = [len(keys)] + [n] * k
    elif fmt == "order":
        need = [n] * (k + 1)
    elif fmt == "partition":
        s = rng.randint(1, n + 1)
        need = [n] * k + [s]
    else:
        raise ValueError(f"unknown format {fmt}")
    sizes = tuple(x + rng.randint(0, extra) for x in need)
    verts = [rng.sample(range(sizes[i]), need[i]) for i in range(k + 1)]
    forced: dict = {}
    if fmt in ("grid", "array", "ip_grid"):
        a = dict(zip(keys, verts[0]))
        b = [verts[t + 1] for t in range(k)]
        w = Witness(fmt, k, n, a=a, b=b)
        for key, av in a.items():
            for t in tuples:
                if fmt == "grid":
                    want = t[-1] <= fn_value(key, n, t[:-1])
                elif fmt == "array":
                    want = t[-1] <= fn_value(key[1], n, (key[0],) + t[:-1])
                else:
                    want = t in key
                forced[(av,) + tuple(b[i][t[i] - 1] for i in range(k))] = want
    elif fmt == "order":
        order = random_order(n, k, rng, top_point=top_point)
        pos = {_item_key(x): i for i, x in enumerate(order)}
        w = Witness("order", k, n, a=verts, order=order)
        for t in tuples:
            for j in range(1, n + 1):
                img = tuple(verts[i][t[i] - 1] for i in range(k)) + (verts[k][j - 1],)
                forced[img] = pos[_item_key(t)] < pos[_item_key(j)]
    else:
        cell = {t: rng.randint(1, s) for t in tuples}
        parts = [[t for t in tuples if cell[t] == c] for c in range(1, s + 1)]
        w = Witness("partition", k, n, a=verts[:k], b=verts[k], parts=parts)
        for t in tuples:
            for j in range(1, s + 1):
                img = tuple(verts[i][t[i] - 1] for i in range(k)) + (verts[k][j - 1],)
                forced[img] = cell[t] >= j
    edges = set()
    for e in itertools.product(*(range(x) for x in sizes)):
        if forced.get(e, e not in forced and rng.random() < noise):
            edges.add(e)
    return PartiteHypergraph(k, sizes, frozenset(edges)), w
