"""Partial-function structures, the pre-order class, their correspondences, and
an exact Ramsey-arrow checker.

An ``FnStructure`` has contiguous blocks U_1..U_{k+1} and a partial k-ary
function f, stored extensionally.  When ``ordered`` is set, the order is
numeric order of ids (so U_1 < ... < U_{k+1}).  A ``PreModel`` is a T_k-like
structure whose <_k is a total pre-order, given as an ordered list of blocks of
Q-tuples; inside a block every two distinct tuples are <_k-related both ways.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .structures import (
    ParseError,
    TkModel,
    Tup,
    Violation,
    _int,
    _int_list,
    cached,
    find_embeddings,
    require_valid,
)

CLASSES = ("Rk", "OrderedRk", "Sk", "HkPre")


class ClassError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


class EmbeddingError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _offsets(sizes: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(sizes[:i]) for i in range(len(sizes)))


def _part_of(sizes: Sequence[int], x: int) -> int | None:
    acc = 0
    for i, s in enumerate(sizes):
        if acc <= x < acc + s:
            return i + 1
        acc += s
    return None


# -- FnStructure ----------------------------------------------------------------

@dataclass(frozen=True)
class FnStructure:
    k: int
    part_sizes: tuple[int, ...]
    f_pairs: tuple[tuple[Tup, int], ...]  # sorted (tuple, image) pairs
    ordered: bool = True

    @property
    def n(self) -> int:
        return sum(self.part_sizes)

    @property
    def f(self) -> dict[Tup, int]:
        return dict(self.f_pairs)

    def part(self, i: int) -> range:
        off = _offsets(tuple(self.part_sizes))[i - 1]
        return range(off, off + self.part_sizes[i - 1])

    def q_tuples(self) -> list[Tup]:
        return list(itertools.product(*(self.part(i) for i in range(1, self.k + 1))))

    def image(self) -> set[int]:
        return set(self._image)

    @cached
    def _image(self) -> frozenset:
        return frozenset(v for _, v in self.f_pairs)

    def to_json(self) -> dict:
        return {"kind": "lfk_structure", "k": self.k, "part_sizes": list(self.part_sizes),
                "f": [[list(t), v] for t, v in self.f_pairs], "ordered": self.ordered}

    @staticmethod
    def from_json(doc: Any) -> "FnStructure":
        if not isinstance(doc, dict) or doc.get("kind", "lfk_structure") != "lfk_structure":
            raise ParseError("kind", "expected an lfk_structure document")
        k = _int(doc.get("k"), "k")
        if k < 1:
            raise ParseError("k", "must be positive")
        sizes = _int_list(doc.get("part_sizes"), "part_sizes")
        if len(sizes) != k + 1 or any(s < 0 for s in sizes):
            raise ParseError("part_sizes", f"expected {k + 1} nonnegative sizes")
        raw = doc.get("f", [])
        if not isinstance(raw, list):
            raise ParseError("f", "expected a list of [tuple, id] pairs")
        n = sum(sizes)
        f: dict[Tup, int] = {}
        for i, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"f[{i}]", "expected [tuple, id]")
            t = tuple(_int_list(pair[0], f"f[{i}][0]"))
            v = _int(pair[1], f"f[{i}][1]")
            if len(t) != k or any(not 0 <= x < n for x in t) or not 0 <= v < n:
                raise ParseError(f"f[{i}]", "id out of range or wrong arity")
            if t in f:
                raise ParseError(f"f[{i}]", "f is not a function (tuple listed twice)")
            f[t] = v
        ordered = doc.get("ordered", True)
        if not isinstance(ordered, bool):
            raise ParseError("ordered", "expected a boolean")
        return make_fn(k, sizes, f, ordered)


def make_fn(k: int, sizes: Sequence[int], f: dict, ordered: bool = True) -> FnStructure:
    return FnStructure(k, tuple(sizes), tuple(sorted((tuple(t), v) for t, v in f.items())), ordered)


# -- PreModel -------------------------------------------------------------------

@dataclass(frozen=True)
class PreModel:
    k: int
    part_sizes: tuple[int, ...]
    qblocks: tuple[tuple[Tup, ...], ...]
    r_edges: frozenset

    @property
    def n(self) -> int:
        return sum(self.part_sizes)

    def part(self, i: int) -> range:
        off = _offsets(tuple(self.part_sizes))[i - 1]
        return range(off, off + self.part_sizes[i - 1])

    @property
    def points(self) -> range:
        return self.part(self.k + 1)

    def q_tuples(self) -> list[Tup]:
        return list(itertools.product(*(self.part(i) for i in range(1, self.k + 1))))

    def block_of(self) -> dict[Tup, int]:
        return {t: b for b, blk in enumerate(self.qblocks) for t in blk}

    def R(self, t: Sequence[int], w: int) -> bool:
        return (tuple(t), w) in self.r_edges

    def to_json(self) -> dict:
        return {"kind": "pre_model", "k": self.k, "part_sizes": list(self.part_sizes),
                "qblocks": [[list(t) for t in blk] for blk in self.qblocks],
                "R": [[list(t), w] for t, w in sorted(self.r_edges)]}

    @staticmethod
    def from_json(doc: Any) -> "PreModel":
        if not isinstance(doc, dict) or doc.get("kind", "pre_model") != "pre_model":
            raise ParseError("kind", "expected a pre_model document")
        k = _int(doc.get("k"), "k")
        if k < 1:
            raise ParseError("k", "must be positive")
        sizes = _int_list(doc.get("part_sizes"), "part_sizes")
        if len(sizes) != k + 1 or any(s < 0 for s in sizes):
            raise ParseError("part_sizes", f"expected {k + 1} nonnegative sizes")
        n = sum(sizes)
        blocks = []
        for b, blk in enumerate(doc.get("qblocks", [])):
            if not isinstance(blk, list):
                raise ParseError(f"qblocks[{b}]", "expected a list of tuples")
            cur = []
            for j, t in enumerate(blk):
                t = tuple(_int_list(t, f"qblocks[{b}][{j}]"))
                if len(t) != k or any(not 0 <= x < n for x in t):
                    raise ParseError(f"qblocks[{b}][{j}]", "id out of range or wrong arity")
                cur.append(t)
            blocks.append(tuple(cur))
        edges = set()
        for i, pair in enumerate(doc.get("R", [])):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"R[{i}]", "expected [tuple, id]")
            t = tuple(_int_list(pair[0], f"R[{i}][0]"))
            w = _int(pair[1], f"R[{i}][1]")
            if len(t) != k or any(not 0 <= x < n for x in t) or not 0 <= w < n:
                raise ParseError(f"R[{i}]", "id out of range or wrong arity")
            edges.add((t, w))
        return PreModel(k, tuple(sizes), tuple(blocks), frozenset(edges))


def pre_of_tk(model: TkModel) -> PreModel:
    """A T_k model viewed as a pre-order model with singleton blocks."""
    require_valid(model)
    return PreModel(model.k, model.part_sizes, tuple((t,) for t in model.qorder), model.r_edges)


def tk_of_pre(pre: PreModel) -> TkModel:
    if any(len(b) != 1 for b in pre.qblocks):
        raise ValueError("pre-order has a block with more than one tuple")
    return TkModel(pre.k, pre.part_sizes, tuple(b[0] for b in pre.qblocks), pre.r_edges)


# -- class validation -----------------------------------------------------------

def validate_class(x: FnStructure | PreModel, cls: str) -> list[Violation]:
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls}; expected one of {CLASSES}")
    if cls == "HkPre":
        if not isinstance(x, PreModel):
            raise ParseError("kind", "HkPre validation expects a pre_model document")
        return _validate_pre(x)
    if not isinstance(x, FnStructure):
        raise ParseError("kind", f"{cls} validation expects an lfk_structure document")
    out: list[Violation] = []
    k = x.k
    for t, v in x.f_pairs:
        for i, y in enumerate(t):
            if _part_of(x.part_sizes, y) != i + 1:
                out.append(Violation(2, f"dom(f) contains {list(t)} whose coordinate {i + 1} is not in U_{i + 1}",
                                     {"tuple": list(t)}))
                break
        else:
            if _part_of(x.part_sizes, v) != k + 1:
                out.append(Violation(2, f"f({list(t)}) = {v} is not in U_{k + 1}",
                                     {"tuple": list(t), "image": v}))
    if cls in ("OrderedRk", "Sk") and not x.ordered:
        out.append(Violation(3, "structure is not ordered", None))
    if cls == "Sk":
        dom = x.f
        for t in x.q_tuples():
            if t not in dom:
                out.append(Violation(4, f"f is not defined on {list(t)}", {"tuple": list(t)}))
                break
    return out


def _validate_pre(m: PreModel) -> list[Violation]:
    out: list[Violation] = []
    k = m.k
    q = set(m.q_tuples())
    for t, w in sorted(m.r_edges):
        if t not in q or _part_of(m.part_sizes, w) != k + 1:
            out.append(Violation(3, f"R holds on ({list(t)}, {w}) outside Q x P_{k + 1}",
                                 {"tuple": list(t), "w": w}))
            break
    seen: dict[Tup, int] = {}
    for b, blk in enumerate(m.qblocks):
        if not blk:
            out.append(Violation(5, f"block {b} is empty", {"block": b}))
        for t in blk:
            if t not in q:
                out.append(Violation(4, f"<_k mentions {list(t)} outside Q", {"tuple": list(t)}))
            elif t in seen:
                out.append(Violation(5, f"{list(t)} lies in two blocks", {"tuple": list(t)}))
            seen[t] = b
    missing = sorted(q - set(seen))
    if missing:
        out.append(Violation(5, f"<_k is not total: {list(missing[0])} is in no block",
                             {"tuple": list(missing[0])}))
    if any(v.axiom in (3, 4, 5) for v in out):
        return out
    pts = list(m.points)
    for t, w in sorted(m.r_edges, key=lambda e: (seen[e[0]], e[1])):
        for x in sorted(q, key=lambda s: seen[s]):
            if seen[x] > seen[t]:
                break
            for z in pts:
                if z >= w and not m.R(x, z):
                    out.append(Violation(6, f"R({list(t)}, {w}) and {list(x)} <=_k {list(t)} but not R({list(x)}, {z})",
                                         {"x": list(x), "y": list(t), "w": w, "z": z}))
                    return out
    return out


def require_class(x, cls: str) -> None:
    v = validate_class(x, cls)
    if v:
        raise ClassError(v)


# -- free amalgamation ----------------------------------------------------------

def is_fn_embedding(a: FnStructure, c: FnStructure, h: Sequence[int]) -> bool:
    if a.k != c.k or len(h) != a.n or len(set(h)) != len(h):
        return False
    for i in range(1, a.k + 2):
        if any(_part_of(c.part_sizes, h[x]) != i for x in a.part(i)):
            return False
    if a.ordered and c.ordered and any(h[x] >= h[x + 1] for x in range(a.n - 1)):
        return False
    fa, fc = a.f, c.f
    for t in a.q_tuples():
        ht = tuple(h[x] for x in t)
        if (t in fa) != (ht in fc):
            return False
        if t in fa and h[fa[t]] != fc[ht]:
            return False
    return True


def free_amalgamate_rk(a: FnStructure, b1: FnStructure, b2: FnStructure,
                       alpha1: Sequence[int], alpha2: Sequence[int]):
    """Free amalgam of b1 and b2 over a.  Returns ``(C, beta1, beta2)``.

    Inside each part the layout is: elements of A, then new elements of b1,
    then new elements of b2.  The output is unordered.
    """
    for x in (a, b1, b2):
        require_class(x, "Rk")
    if not (a.k == b1.k == b2.k):
        raise EmbeddingError("arity mismatch")
    ua = FnStructure(a.k, a.part_sizes, a.f_pairs, False)
    u1 = FnStructure(b1.k, b1.part_sizes, b1.f_pairs, False)
    u2 = FnStructure(b2.k, b2.part_sizes, b2.f_pairs, False)
    if not is_fn_embedding(ua, u1, alpha1):
        raise EmbeddingError("alpha1 is not an embedding")
    if not is_fn_embedding(ua, u2, alpha2):
        raise EmbeddingError("alpha2 is not an embedding")
    k = a.k
    inv1 = {y: x for x, y in enumerate(alpha1)}
    inv2 = {y: x for x, y in enumerate(alpha2)}
    labels = []
    for i in range(1, k + 2):
        labels.append([("a", x) for x in a.part(i)] +
                      [("1", y) for y in b1.part(i) if y not in inv1] +
                      [("2", y) for y in b2.part(i) if y not in inv2])
    ids = {lab: j for j, lab in enumerate(lab for p in labels for lab in p)}
    beta1 = [ids[("a", inv1[y])] if y in inv1 else ids[("1", y)] for y in range(b1.n)]
    beta2 = [ids[("a", inv2[y])] if y in inv2 else ids[("2", y)] for y in range(b2.n)]
    f: dict[Tup, int] = {}
    for b, beta in ((b1, beta1), (b2, beta2)):
        for t, v in b.f_pairs:
            f[tuple(beta[x] for x in t)] = beta[v]
    c = make_fn(k, [len(p) for p in labels], f, ordered=False)
    return c, beta1, beta2


# -- B_f and C_R ----------------------------------------------------------------

def to_functional(b: PreModel):
    """The structure B_f.  Returns ``(B_f, point_map, block_points)``.

    U_1..U_k keep their ids.  U_{k+1} holds the old points and one new point
    d per block; d sits below an old point y exactly when R holds between the
    block and y, and the new points follow the block order.  ``point_map``
    sends each old P_{k+1} id to its new id; ``block_points[j]`` is the id of
    the new point of block j.
    """
    v = _validate_pre(b)
    if v:
        raise ClassError(v)
    k = b.k
    base = _offsets(tuple(b.part_sizes))[k]
    pts = list(b.points)
    # Threshold of each block: position of the least point related to it.
    seq: list = []
    thr = []
    for blk in b.qblocks:
        rel = [j for j, y in enumerate(pts) if b.R(blk[0], y)]
        thr.append(rel[0] if rel else len(pts))
    bi = 0
    for j in range(len(pts) + 1):
        while bi < len(b.qblocks) and thr[bi] == j:
            seq.append(("d", bi))
            bi += 1
        if j < len(pts):
            seq.append(("p", pts[j]))
    new_id = {lab: base + j for j, lab in enumerate(seq)}
    f = {t: new_id[("d", j)] for j, blk in enumerate(b.qblocks) for t in blk}
    sizes = list(b.part_sizes[:k]) + [len(seq)]
    out = make_fn(k, sizes, f, ordered=True)
    return out, {y: new_id[("p", y)] for y in pts}, [new_id[("d", j)] for j in range(len(b.qblocks))]


@lru_cache(maxsize=4096)
def to_relational(c: FnStructure):
    """The structure C_R on C minus im(f).  Returns ``(C_R, keep)`` where
    ``keep[j]`` is the C-id of the j-th element of C_R."""
    require_class(c, "Sk")
    k = c.k
    img = c.image()
    keep = [x for x in range(c.n) if x not in img]
    local = {x: j for j, x in enumerate(keep)}
    f = c.f
    sizes = list(c.part_sizes[:k]) + [sum(1 for y in c.part(k + 1) if y not in img)]
    fibers: dict[int, list[Tup]] = {}
    for t in c.q_tuples():
        fibers.setdefault(f[t], []).append(tuple(local[x] for x in t))
    blocks = tuple(tuple(sorted(fibers[v])) for v in sorted(fibers))
    edges = frozenset((tuple(local[x] for x in t), local[z])
                      for t in c.q_tuples() for z in c.part(k + 1) if z not in img and f[t] < z)
    return PreModel(k, tuple(sizes), blocks, edges), tuple(keep)


# -- substructures, phi and psi ---------------------------------------------------

def is_fn_substructure(c: FnStructure, d: Iterable[int]) -> bool:
    ds = set(d)
    return all(v in ds for t, v in c.f_pairs if all(x in ds for x in t))


def fn_substructure(c: FnStructure, d: Iterable[int]):
    ds = sorted(set(d))
    if not is_fn_substructure(c, ds):
        raise ValueError("subset is not closed under f")
    local = {x: j for j, x in enumerate(ds)}
    sizes = [sum(1 for x in ds if _part_of(c.part_sizes, x) == i) for i in range(1, c.k + 2)]
    f = {tuple(local[x] for x in t): local[v] for t, v in c.f_pairs if all(x in local for x in t)}
    return make_fn(c.k, sizes, f, c.ordered), ds


def pre_substructure(m: PreModel, w: Iterable[int]):
    ws = sorted(set(w))
    local = {x: j for j, x in enumerate(ws)}
    sizes = [sum(1 for x in ws if _part_of(m.part_sizes, x) == i) for i in range(1, m.k + 2)]
    blocks = []
    for blk in m.qblocks:
        kept = tuple(tuple(local[x] for x in t) for t in blk if all(x in local for x in t))
        if kept:
            blocks.append(kept)
    edges = frozenset((tuple(local[x] for x in t), local[z]) for t, z in m.r_edges
                      if z in local and all(x in local for x in t))
    return PreModel(m.k, tuple(sizes), tuple(blocks), edges), ws


def admissible(c: FnStructure, d: Iterable[int]) -> bool:
    """D meets im(f^C) exactly in im(f^D); only then is D minus im(f^D) inside C_R."""
    ds = set(d)
    img_d = {v for t, v in c.f_pairs if all(x in ds for x in t)}
    return ds & c.image() == img_d


def phi(c: FnStructure, d: Iterable[int]) -> list[int]:
    """phi_C(D) as a list of C_R ids.  Requires D closed under f and admissible."""
    ds = set(d)
    if not is_fn_substructure(c, ds):
        raise ValueError("D is not a substructure of C (not closed under f)")
    if not admissible(c, ds):
        bad = sorted((ds & c.image()) - {v for t, v in c.f_pairs if all(x in ds for x in t)})
        raise ValueError(f"D contains {bad[0]}, an f-image of a tuple outside D, so "
                         f"D minus im(f^D) is not inside C_R")
    _, keep = to_relational(c)
    local = {x: j for j, x in enumerate(keep)}
    img_d = {v for t, v in c.f_pairs if all(x in ds for x in t)}
    return sorted(local[x] for x in ds - img_d)


def psi(c: FnStructure, w: Iterable[int]) -> list[int]:
    """psi_C(W) as a list of C ids, for W given by C_R ids."""
    _, keep = to_relational(c)
    wc = {keep[x] for x in w}
    f = c.f
    extra = {f[t] for t in c.q_tuples() if all(x in wc for x in t)}
    return sorted(wc | extra)


# -- embeddings and isomorphism -----------------------------------------------------

def find_fn_embeddings(a: FnStructure, c: FnStructure) -> list[tuple[int, ...]]:
    """Order-preserving embeddings between ordered structures, lexicographic by image."""
    if not (a.ordered and c.ordered):
        raise ValueError("embedding search needs ordered structures")
    if a.k != c.k:
        return []
    choices = [list(itertools.combinations(c.part(i), a.part_sizes[i - 1])) for i in range(1, a.k + 2)]
    out = []
    for pick in itertools.product(*choices):
        h = tuple(x for p in pick for x in p)
        if is_fn_embedding(a, c, h):
            out.append(h)
    return out


def is_pre_embedding(a: PreModel, c: PreModel, h: Sequence[int]) -> bool:
    if a.k != c.k or len(h) != a.n:
        return False
    for i in range(1, a.k + 2):
        img = [h[x] for x in a.part(i)]
        if any(_part_of(c.part_sizes, y) != i for y in img) or img != sorted(set(img)):
            return False
    ba, bc = a.block_of(), c.block_of()
    qa = a.q_tuples()
    for s, t in itertools.combinations(qa, 2):
        hs, ht = tuple(h[x] for x in s), tuple(h[x] for x in t)
        if (ba[s] > ba[t]) != (bc[hs] > bc[ht]) or (ba[s] == ba[t]) != (bc[hs] == bc[ht]) \
                or (ba[s] < ba[t]) != (bc[hs] < bc[ht]):
            return False
    for t in qa:
        ht = tuple(h[x] for x in t)
        for w in a.points:
            if a.R(t, w) != c.R(ht, h[w]):
                return False
    return True


def find_pre_embeddings(a: PreModel, c: PreModel) -> list[tuple[int, ...]]:
    if a.k != c.k:
        return []
    choices = [list(itertools.combinations(c.part(i), a.part_sizes[i - 1])) for i in range(1, a.k + 2)]
    return [h for h in (tuple(x for p in pick for x in p) for pick in itertools.product(*choices))
            if is_pre_embedding(a, c, h)]


def canonical_pre(m: PreModel) -> PreModel:
    return PreModel(m.k, m.part_sizes, tuple(tuple(sorted(b)) for b in m.qblocks), m.r_edges)


def pre_isomorphic(a: PreModel, b: PreModel) -> bool:
    """With contiguous numbering the only candidate isomorphism is the identity."""
    return a.k == b.k and canonical_pre(a) == canonical_pre(b)


def fn_isomorphic(a: FnStructure, b: FnStructure) -> bool:
    return a.k == b.k and a.part_sizes == b.part_sizes and a.f_pairs == b.f_pairs


# -- Ramsey arrow ---------------------------------------------------------------

@dataclass
class ArrowResult:
    holds: bool
    coloring: list[int] | None = None
    a_embeddings: list[tuple[int, ...]] = field(default_factory=list)
    b_copies: int = 0
    nodes: int = 0

    def to_json(self) -> dict:
        doc: dict[str, Any] = {"holds": self.holds, "a_embeddings": len(self.a_embeddings),
                               "b_copies": self.b_copies, "nodes": self.nodes}
        if self.coloring is not None:
            doc["coloring"] = [[list(e), col] for e, col in zip(self.a_embeddings, self.coloring)]
        return doc


def _embeddings(a, c):
    if isinstance(a, TkModel) and isinstance(c, TkModel):
        return find_embeddings(a, c)
    if isinstance(a, FnStructure) and isinstance(c, FnStructure):
        if not (a.ordered and c.ordered):
            raise ValueError("unordered structures can have nontrivial automorphisms; "
                             "embeddings and copies would not coincide")
        return find_fn_embeddings(a, c)
    raise ValueError("A, B and C must all be T_k models or all be ordered lfk structures")


def ramsey_arrow(c, b, a, n: int, budget: int = 1_000_000) -> ArrowResult:
    """Decide C -> (B)^A_n exactly.

    Colour classes are explored by backtracking over the embeddings of A into
    C; a branch dies as soon as some copy of B has all its A-embeddings
    coloured alike.  New colours are opened in order (colour-permutation
    symmetry).  Exceeding ``budget`` search nodes raises ResourceError.
    """
    if n < 1:
        raise ValueError("need at least one colour")
    for x in (a, b, c):
        if isinstance(x, TkModel):
            require_valid(x)
    ea = _embeddings(a, c)
    eb = _embeddings(b, c)
    ab = _embeddings(a, b)
    index = {e: i for i, e in enumerate(ea)}
    copies = []
    for sig in eb:
        copies.append(sorted({index[tuple(sig[x] for x in tau)] for tau in ab}))
    if any(not cp for cp in copies):
        return ArrowResult(True, None, ea, len(eb), 0)
    if not copies:
        return ArrowResult(False, [0] * len(ea), ea, 0, 0)
    # Variables are coloured in order; each copy is checked when its last member is set.
    closing: list[list[int]] = [[] for _ in ea]
    for ci, cp in enumerate(copies):
        closing[max(cp)].append(ci)
    color = [0] * len(ea)
    nodes = 0

    def mono(ci: int) -> bool:
        cp = copies[ci]
        c0 = color[cp[0]]
        return all(color[x] == c0 for x in cp)

    def search(i: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceError(f"search budget of {budget} nodes exceeded")
        if i == len(ea):
            return True
        for col in range(min(used + 1, n)):
            color[i] = col
            if any(mono(ci) for ci in closing[i]):
                continue
            if search(i + 1, max(used, col + 1)):
                return True
        return False

    if search(0, 0):
        chi = list(color)
        assert not any(len(set(chi[x] for x in cp)) == 1 for cp in copies)
        return ArrowResult(False, chi, ea, len(eb), nodes)
    return ArrowResult(True, None, ea, len(eb), nodes)


def chain(n: int) -> TkModel:
    """The n-element linear order as a k=1 model with P_2 empty."""
    return TkModel(1, (n, 0), tuple((x,) for x in range(n)), frozenset())
