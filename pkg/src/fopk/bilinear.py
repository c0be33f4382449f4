"""k-linear forms on F_p^n: coordinate functions, generic realisation,
canonical bases, elimination of the form symbol from terms, and one-vector
extension pairs.

Vectors are tuples of ints in [0, p).  A ``FormSpace`` stores f on the
standard basis as a flat row-major tensor.  All answers are checked by
substitution before they are returned.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import prod
from typing import Any, Sequence

from .coding import PartiteHypergraph, Witness, fop_witness_check, grid_tuples
from .structures import ParseError, _int, _int_list

Vec = tuple[int, ...]
SYMMETRIES = ("alternating", "symmetric", "none")


class FormError(ValueError):
    """Precondition failure: degenerate form, dependent tuple, wrong symmetry."""


class CapacityError(ValueError):
    pass


class UnsupportedError(ValueError):
    pass


class SqrtUnavailable(ValueError):
    pass


class InconsistentPair(ValueError):
    pass


class TermError(ValueError):
    pass


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


# -- linear algebra mod p -------------------------------------------------------

def rref(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0]) if m else (ncols or 0)
    piv: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                fac = m[i][c]
                m[i] = [(x - fac * y) % p for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], piv


def rank(vectors: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(vectors, p)[1]) if vectors else 0


def independent(vectors: Sequence[Sequence[int]], p: int) -> bool:
    return rank(vectors, p) == len(vectors)


def solve(a: Sequence[Sequence[int]], b: Sequence[int], p: int, ncols: int) -> list[int] | None:
    """A particular solution of a x = b (free variables set to 0), or None."""
    if not a:
        return [0] * ncols
    aug = [list(r) + [y] for r, y in zip(a, b)]
    red, piv = rref(aug, p)
    if ncols in piv:
        return None
    x = [0] * ncols
    for row, c in zip(red, piv):
        x[c] = row[ncols]
    return x


def nullspace(a: Sequence[Sequence[int]], p: int, ncols: int) -> list[list[int]]:
    red, piv = rref(a, p, ncols) if a else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, c in zip(red, piv):
            v[c] = -row[fc] % p
        basis.append(v)
    return basis


def span_elements(basis: Sequence[Sequence[int]], p: int, dim: int):
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        yield tuple(sum(c * v[i] for c, v in zip(coeffs, basis)) % p for i in range(dim))


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(z for z in range(2, p) if pow(z, (p - 1) // 2, p) == p - 1)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        bb = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, bb * bb % p, t * bb * bb % p, r * bb % p
    return r


# -- form spaces ----------------------------------------------------------------

@dataclass(frozen=True)
class FormSpace:
    p: int
    dim: int
    arity: int
    tensor: tuple[int, ...]
    symmetry: str = "none"

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise FormError(f"p = {self.p} is not an odd prime")
        if self.arity < 2 or self.dim < 0:
            raise FormError("need arity >= 2 and dim >= 0")
        if len(self.tensor) != self.dim ** self.arity:
            raise FormError(f"tensor has {len(self.tensor)} entries, expected {self.dim ** self.arity}")
        if self.symmetry not in SYMMETRIES:
            raise FormError(f"symmetry must be one of {SYMMETRIES}")
        object.__setattr__(self, "tensor", tuple(x % self.p for x in self.tensor))
        bad = self._symmetry_violation()
        if bad:
            raise FormError(bad)

    def entry(self, idx: Sequence[int]) -> int:
        pos = 0
        for i in idx:
            pos = pos * self.dim + i
        return self.tensor[pos]

    def _symmetry_violation(self) -> str | None:
        if self.symmetry == "none":
            return None
        for idx in itertools.product(range(self.dim), repeat=self.arity):
            v = self.entry(idx)
            for i, j in itertools.combinations(range(self.arity), 2):
                sw = list(idx)
                sw[i], sw[j] = sw[j], sw[i]
                w = self.entry(sw)
                if self.symmetry == "symmetric" and v != w:
                    return f"tensor is not symmetric at {list(idx)}"
                if self.symmetry == "alternating":
                    if idx[i] == idx[j] and v:
                        return f"alternating form is nonzero on repeated index {list(idx)}"
                    if (v + w) % self.p:
                        return f"tensor is not antisymmetric at {list(idx)}"
        return None

    def f(self, *vectors: Sequence[int]) -> int:
        """The form evaluated on ``arity`` vectors."""
        if len(vectors) != self.arity:
            raise ValueError(f"form takes {self.arity} arguments")
        supports = [[(i, c) for i, c in enumerate(v) if c % self.p] for v in vectors]
        total = 0
        for combo in itertools.product(*supports):
            total += prod(c for _, c in combo) * self.entry([i for i, _ in combo])
        return total % self.p

    def gram(self, vectors: Sequence[Sequence[int]]) -> list:
        """Form values on all tuples from ``vectors``, as a nested list."""
        def build(prefix):
            if len(prefix) == self.arity:
                return self.f(*(vectors[i] for i in prefix))
            return [build(prefix + (i,)) for i in range(len(vectors))]
        return build(())

    def matrix(self) -> list[list[int]]:
        if self.arity != 2:
            raise FormError("matrix view needs arity 2")
        return [[self.entry((i, j)) for j in range(self.dim)] for i in range(self.dim)]

    def is_nondegenerate(self) -> bool:
        if self.arity != 2:
            raise FormError("non-degeneracy is decided for arity 2 only")
        return rank(self.matrix(), self.p) == self.dim

    def basis(self) -> list[Vec]:
        return [tuple(int(i == j) for i in range(self.dim)) for j in range(self.dim)]

    def to_json(self) -> dict:
        return {"kind": "form_space", "p": self.p, "dim": self.dim, "arity": self.arity,
                "tensor": list(self.tensor), "symmetry": self.symmetry}

    @staticmethod
    def from_json(doc: Any) -> "FormSpace":
        if not isinstance(doc, dict) or doc.get("kind", "form_space") != "form_space":
            raise ParseError("kind", "expected a form_space document")
        p = _int(doc.get("p"), "p")
        dim = _int(doc.get("dim"), "dim")
        arity = _int(doc.get("arity", 2), "arity")
        tensor = _int_list(doc.get("tensor"), "tensor")
        sym = doc.get("symmetry", "none")
        if not isinstance(sym, str):
            raise ParseError("symmetry", "expected a string")
        try:
            return FormSpace(p, dim, arity, tuple(tensor), sym)
        except FormError as e:
            raise ParseError("form_space", str(e)) from None


def standard_space(p: int, dim: int, kind: str = "alternating", arity: int = 2) -> FormSpace:
    """Standard forms.

    ``alternating``: f(e_{2i-1}, e_{2i}) = 1 = -f(e_{2i}, e_{2i-1}), the rest 0.
    ``symmetric``: the dot product.
    ``generic`` (any arity): with m the largest integer such that
    m^(arity-1) <= dim, f(e_a, e_{b_2}, ..., e_{b_k}) = 1 exactly when every
    b_t < m and a is the base-m number with digits b_2..b_k.
    """
    t = [0] * dim ** arity

    def put(idx, val):
        pos = 0
        for i in idx:
            pos = pos * dim + i
        t[pos] = val % p

    if kind == "alternating":
        if arity != 2 or dim % 2:
            raise FormError("standard alternating form needs arity 2 and even dim")
        for i in range(0, dim, 2):
            put((i, i + 1), 1)
            put((i + 1, i), -1)
        return FormSpace(p, dim, 2, tuple(t), "alternating")
    if kind == "symmetric":
        if arity != 2:
            raise FormError("standard symmetric form needs arity 2")
        for i in range(dim):
            put((i, i), 1)
        return FormSpace(p, dim, 2, tuple(t), "symmetric")
    if kind == "generic":
        m = generic_radix(dim, arity)
        for digits in itertools.product(range(m), repeat=arity - 1):
            a = 0
            for d in digits:
                a = a * m + d
            put((a,) + digits, 1)
        return FormSpace(p, dim, arity, tuple(t), "none")
    raise ValueError(f"unknown standard form {kind}")


def generic_radix(dim: int, arity: int) -> int:
    m = 0
    while (m + 1) ** (arity - 1) <= dim:
        m += 1
    return m


# -- coordinates and substructures ------------------------------------------------

def g_coords(p: int, vectors: Sequence[Sequence[int]], w: Sequence[int]) -> list[int]:
    """Coefficients of w over v_1..v_n, or all zeros if v is dependent or v, w independent."""
    n = len(vectors)
    if n == 0:
        return []
    if not independent(vectors, p):
        return [0] * n
    dim = len(w)
    cols = [[vectors[j][i] for j in range(n)] for i in range(dim)]
    x = solve(cols, list(w), p, n)
    return [0] * n if x is None else x


def generated_substructure(space: FormSpace, vectors: Sequence[Sequence[int]], scalars: Sequence[int] = ()):
    """V-part: a reduced basis of the span and its size.  F-part: F_p, always."""
    red, _ = rref(vectors, space.p, space.dim) if vectors else ([], [])
    return ({"basis": [list(r) for r in red], "size": space.p ** len(red)},
            {"field": f"F_{space.p}", "size": space.p})


# -- realising values -------------------------------------------------------------

def _require_bilinear(space: FormSpace) -> None:
    if space.arity != 2:
        raise UnsupportedError("this operation is defined for bilinear forms only")


def solve_form_values(space: FormSpace, ws: Sequence[Sequence[int]], values: Sequence[int]) -> Vec:
    """Some v with f(v, w_i) = a_i for all i."""
    _require_bilinear(space)
    if len(ws) != len(values):
        raise ValueError("need one value per vector")
    if not space.is_nondegenerate():
        raise FormError("form is degenerate")
    if not independent(ws, space.p):
        raise FormError("the vectors w are linearly dependent")
    p, mat = space.p, space.matrix()
    rows = [[sum(mat[a][b] * w[b] for b in range(space.dim)) % p for a in range(space.dim)] for w in ws]
    x = solve(rows, [a % p for a in values], p, space.dim)
    assert x is not None  # non-degenerate form and independent w always admit a solution
    v = tuple(x)
    for w, a in zip(ws, values):
        assert space.f(v, w) == a % p
    return v


def realize_gram(space: FormSpace, sigma) -> list[list[Vec]]:
    """Vectors v[t][j] (t < k, j < n) with f(v[0][j_1], ..., v[k-1][j_k]) = sigma[j_1]...[j_k].

    Arity 2 needs a non-degenerate form and dim >= n.  Higher arity uses
    v[t][j] = e_j for t >= 1 and solves one linear system per j_1; this needs
    dim >= n^(k-1) and is guaranteed for the standard generic tensor.
    """
    k, p = space.arity, space.p
    n = len(sigma)
    idx = list(itertools.product(range(n), repeat=k))

    def sval(t):
        x = sigma
        for i in t:
            x = x[i]
        return x % p

    if k == 2:
        if n > space.dim:
            raise CapacityError(f"dim {space.dim} < n = {n}")
        if not space.is_nondegenerate():
            raise FormError("form is degenerate")
        right = space.basis()[:n]
        left = [solve_form_values(space, right, [sval((i, j)) for j in range(n)]) for i in range(n)]
        out = [left, right]
    else:
        if n ** (k - 1) > space.dim:
            raise CapacityError(f"dim {space.dim} < n^(k-1) = {n ** (k - 1)}")
        if n > space.dim:
            raise CapacityError(f"dim {space.dim} < n = {n}")
        basis = space.basis()[:n]
        rest = list(itertools.product(range(n), repeat=k - 1))
        rows = [[space.entry((a,) + r) for a in range(space.dim)] for r in rest]
        left = []
        for i in range(n):
            x = solve(rows, [sval((i,) + r) for r in rest], p, space.dim)
            if x is None:
                raise UnsupportedError("this tensor does not realise the requested grid from "
                                       "standard basis vectors; use the standard generic tensor")
            left.append(tuple(x))
        out = [left] + [list(basis) for _ in range(k - 1)]
    for t in idx:
        assert space.f(*(out[s][t[s]] for s in range(k))) == sval(t)
    return out


def canonical_basis(space: FormSpace, mode: str) -> list[Vec]:
    """A symplectic basis (e_1, f_1, e_2, f_2, ...) or an orthonormal basis."""
    _require_bilinear(space)
    p, dim = space.p, space.dim
    if not space.is_nondegenerate():
        raise FormError("form is degenerate")
    rest = [list(v) for v in space.basis()]
    out: list[Vec] = []

    def comb(a, x, b, y):
        return [(a * s + b * t) % p for s, t in zip(x, y)]

    if mode == "symplectic":
        if space.symmetry != "alternating":
            raise FormError("symplectic basis needs an alternating form")
        if dim % 2:
            raise FormError("odd dimension has no symplectic basis")
        while rest:
            e = rest.pop(0)
            j = next(j for j, w in enumerate(rest) if space.f(e, w))
            w = rest.pop(j)
            fv = comb(pow(space.f(e, w), -1, p), w, 0, w)
            out += [tuple(e), tuple(fv)]
            rest = [comb(1, comb(1, x, -space.f(x, fv), e), space.f(x, e), fv) for x in rest]
    elif mode == "orthonormal":
        if space.symmetry != "symmetric":
            raise FormError("orthonormal basis needs a symmetric form")
        while rest:
            v = None
            for cand in span_elements(rest, p, dim):
                if sqrt_mod(space.f(cand, cand), p) not in (None, 0):
                    v = list(cand)
                    break
            if v is None:
                raise SqrtUnavailable("no vector of nonzero square norm is left; the "
                                      "discriminant is not a square in F_%d" % p)
            r = sqrt_mod(space.f(v, v), p)
            u = comb(pow(r, -1, p), v, 0, v)
            out.append(tuple(u))
            # Replace rest by a basis of the orthogonal complement of u inside span(rest).
            proj = [comb(1, x, -space.f(x, u), u) for x in rest]
            red, _ = rref(proj, p, dim)
            rest = [list(r) for r in red]
    else:
        raise ValueError("mode must be symplectic or orthonormal")
    g = space.gram(out)
    for i in range(dim):
        for j in range(dim):
            if mode == "orthonormal":
                want = int(i == j)
            else:
                want = 1 if (i % 2 == 0 and j == i + 1) else (p - 1 if (j % 2 == 0 and i == j + 1) else 0)
            assert g[i][j] == want
    return out


# -- extension pairs --------------------------------------------------------------

def pair_positions(m: int, k: int = 2) -> list[tuple[int, ...]]:
    """Index tuples over [m+1]^k that involve y (index 1), lexicographically."""
    return [t for t in itertools.product(range(1, m + 2), repeat=k) if 1 in t]


def check_pair(space: FormSpace, gram_w, d: Sequence[int], ws: Sequence[Sequence[int]]) -> None:
    _require_bilinear(space)
    p, m = space.p, len(ws)
    if len(d) != (m + 1) ** 2 - m ** 2:
        raise ValueError(f"d must have {(m + 1) ** 2 - m ** 2} entries")
    if [[x % p for x in r] for r in gram_w] != space.gram(ws):
        raise ValueError("gram_w does not match the form on w")
    val = {t: x % p for t, x in zip(pair_positions(m), d)}
    if space.symmetry == "alternating":
        if val[(1, 1)]:
            raise InconsistentPair("alternating form forces f(y, y) = 0")
        for i in range(2, m + 2):
            if (val[(1, i)] + val[(i, 1)]) % p:
                raise InconsistentPair(f"alternating form forces f(y, w_{i - 1}) = -f(w_{i - 1}, y)")
    if space.symmetry == "symmetric":
        for i in range(2, m + 2):
            if val[(1, i)] != val[(i, 1)]:
                raise InconsistentPair(f"symmetric form forces f(y, w_{i - 1}) = f(w_{i - 1}, y)")


def realize_extension_pair(space: FormSpace, gram_w, d: Sequence[int], ws: Sequence[Sequence[int]],
                           limit: int = 1 << 20) -> Vec | None:
    """Some y with (y, w) independent whose form values with w are d, or None.

    The conditions f(y, w_i) and f(w_i, y) are linear; f(y, y) is checked on
    every point of the affine solution set.
    """
    check_pair(space, gram_w, d, ws)
    p, m, dim = space.p, len(ws), space.dim
    if not independent(ws, p):
        raise FormError("the vectors w are linearly dependent")
    val = {t: x % p for t, x in zip(pair_positions(m), d)}
    mat = space.matrix()
    rows, rhs = [], []
    for i, w in enumerate(ws, start=2):
        rows.append([sum(mat[a][b] * w[b] for b in range(dim)) % p for a in range(dim)])
        rhs.append(val[(1, i)])
        rows.append([sum(w[a] * mat[a][b] for a in range(dim)) % p for b in range(dim)])
        rhs.append(val[(i, 1)])
    base = solve(rows, rhs, p, dim)
    if base is None:
        return None
    null = nullspace(rows, p, dim) if rows else [list(v) for v in space.basis()]
    if p ** len(null) > limit:
        raise CapacityError(f"affine solution set has {p}^{len(null)} points")
    for delta in span_elements(null, p, dim):
        y = tuple((a + b) % p for a, b in zip(base, delta))
        if space.f(y, y) == val[(1, 1)] and independent([y] + [list(w) for w in ws], p):
            full = space.gram([y] + [tuple(w) for w in ws])
            assert all(full[t[0] - 1][t[1] - 1] == val[t] for t in val)
            return y
    return None


def brute_extension_pair(space: FormSpace, d: Sequence[int], ws: Sequence[Sequence[int]]) -> Vec | None:
    """Reference search over every vector of the space."""
    m = len(ws)
    val = {t: x % space.p for t, x in zip(pair_positions(m), d)}
    for y in itertools.product(range(space.p), repeat=space.dim):
        if not independent([y] + [list(w) for w in ws], space.p):
            continue
        full = space.gram([y] + [tuple(w) for w in ws])
        if all(full[t[0] - 1][t[1] - 1] == val[t] for t in val):
            return y
    return None


# -- induced maps ---------------------------------------------------------------

def induced_map_preserves(s1: FormSpace, vs: Sequence[Sequence[int]],
                          s2: FormSpace, ws: Sequence[Sequence[int]]) -> bool:
    """If v and w are independent with equal form tuples, the linear map v_i -> w_i
    preserves the form on all of span(v)."""
    if s1.p != s2.p or s1.arity != s2.arity or len(vs) != len(ws):
        raise ValueError("incompatible spaces")
    p = s1.p
    if not (independent(vs, p) and independent(ws, p)) or s1.gram(vs) != s2.gram(ws):
        raise ValueError("v and w must be independent with equal form tuples")
    coeffs = list(itertools.product(range(p), repeat=len(vs)))

    def lin(c, basis, dim):
        return tuple(sum(a * b[i] for a, b in zip(c, basis)) % p for i in range(dim))

    for combo in itertools.product(coeffs, repeat=s1.arity):
        if s1.f(*(lin(c, vs, s1.dim) for c in combo)) != s2.f(*(lin(c, ws, s2.dim) for c in combo)):
            return False
    return True


# -- field order witness ------------------------------------------------------------

def fop_from_field_order(space: FormSpace, b: Sequence[int], parts: Sequence[Sequence[Sequence[int]]],
                         psi_table: Sequence[Sequence[bool]]):
    """Vectors c^t_i and indices d_j with psi(d_j, f(c^1_{i_1}, ..., c^k_{i_k})) exactly
    when (i_1, ..., i_k) lies in a cell E_l with l >= j.

    ``parts`` lists the cells E_1..E_s of [N]^k (1-based tuples).  psi relates
    field values through their positions in b.  Returns
    ``(c_arrays, d_indices, hypergraph, witness)``.
    """
    p, k, s = space.p, space.arity, len(b)
    if s == 0:
        raise ValueError("need at least one cell")
    bv = [x % p for x in b]
    if len(set(bv)) != s:
        raise ValueError("b values must be distinct")
    if len(psi_table) != s or any(len(r) != s for r in psi_table):
        raise ValueError("psi_table must be s x s")
    if any(bool(psi_table[j][u]) != (j <= u) for j in range(s) for u in range(s)):
        raise ValueError("psi_table must satisfy psi(j, u) iff j <= u")
    cells = [[tuple(t) for t in cell] for cell in parts]
    if len(cells) != s:
        raise ValueError("need one cell per b value")
    flat = [t for c in cells for t in c]
    n_side = round(len(flat) ** (1 / k)) if flat else 0
    if len(flat) != len(set(flat)) or set(flat) != set(grid_tuples(n_side, k)):
        raise ValueError("cells must partition [N]^k")
    cell_of = {t: u for u, c in enumerate(cells) for t in c}
    sigma = _nested(n_side, k, lambda t: bv[cell_of[tuple(x + 1 for x in t)]])
    arrays = realize_gram(space, sigma)
    pos = {x: u for u, x in enumerate(bv)}

    def psi(j: int, value: int) -> bool:
        return value in pos and bool(psi_table[j][pos[value]])

    edges = set()
    for t in grid_tuples(n_side, k):
        val = space.f(*(arrays[i][t[i] - 1] for i in range(k)))
        for j in range(s):
            want = cell_of[t] >= j
            assert psi(j, val) == want
            if want:
                edges.add(tuple(x - 1 for x in t) + (j,))
    h = PartiteHypergraph(k, (n_side,) * k + (s,), frozenset(edges))
    w = Witness("partition", k, n_side, a=[list(range(n_side)) for _ in range(k)],
                b=list(range(s)), parts=[sorted(c) for c in cells])
    assert fop_witness_check(h, w)
    return arrays, list(range(1, s + 1)), h, w


def _nested(n: int, k: int, fn, prefix=()):
    if len(prefix) == k:
        return fn(prefix)
    return [_nested(n, k, fn, prefix + (i,)) for i in range(n)]


# -- terms --------------------------------------------------------------------------

V_OPS = {"+v": 2, "*v": 2}
F_OPS = {"+f": 2, "*f": 2, "-f": 1, "inv": 1}
CONSTS = {"0v": "V", "0f": "F", "1f": "F"}
_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def var_sort(name: str) -> str:
    """Variables named x... or v... range over V; every other name ranges over F."""
    return "V" if name[0] in "xv" else "F"


def parse_term(text: str):
    toks = _TOKEN.findall(text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(toks):
            raise TermError("unexpected end of term")
        tok = toks[pos]
        pos += 1
        if tok == ")":
            raise TermError("unexpected ')'")
        if tok != "(":
            return tok
        if pos >= len(toks):
            raise TermError("unexpected end of term")
        head = toks[pos]
        pos += 1
        args = []
        while pos < len(toks) and toks[pos] != ")":
            args.append(parse())
        if pos >= len(toks):
            raise TermError("missing ')'")
        pos += 1
        return (head,) + tuple(args)

    t = parse()
    if pos != len(toks):
        raise TermError("trailing tokens after term")
    return t


def show_term(t) -> str:
    if isinstance(t, str):
        return t
    return "(" + " ".join(show_term(x) for x in t) + ")"


def sort_of(t, arity: int) -> str:
    """Sort of a well-sorted term; raises TermError otherwise."""
    if isinstance(t, str):
        if t in CONSTS:
            return CONSTS[t]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", t):
            raise TermError(f"bad symbol {t!r}")
        return var_sort(t)
    head, args = t[0], t[1:]
    want: tuple[str, ...]
    if head == "+v":
        want, out = ("V", "V"), "V"
    elif head == "*v":
        want, out = ("F", "V"), "V"
    elif head in ("+f", "*f"):
        want, out = ("F", "F"), "F"
    elif head in ("-f", "inv"):
        want, out = ("F",), "F"
    elif head == "f":
        want, out = ("V",) * arity, "F"
    else:
        raise TermError(f"unknown operator {head!r}")
    if len(args) != len(want):
        raise TermError(f"{head} takes {len(want)} arguments, got {len(args)}")
    for a, s in zip(args, want):
        if sort_of(a, arity) != s:
            raise TermError(f"argument {show_term(a)} of {head} should have sort {s}")
    return out


def term_vars(t, sort: str | None = None) -> list[str]:
    found: set[str] = set()

    def walk(x):
        if isinstance(x, str):
            if x not in CONSTS:
                found.add(x)
        else:
            for a in x[1:]:
                walk(a)

    walk(t)
    key = lambda s: [int(c) if c.isdigit() else c for c in re.split(r"(\d+)", s)]
    return sorted((v for v in found if sort is None or var_sort(v) == sort), key=key)


def evaluate(t, space: FormSpace, env: dict):
    """Value of a term: a vector for sort V, an int for sort F.  inv(0) = 0."""
    p = space.p
    if isinstance(t, str):
        if t == "0v":
            return (0,) * space.dim
        if t == "0f":
            return 0
        if t == "1f":
            return 1
        return env[t]
    head, args = t[0], [evaluate(a, space, env) for a in t[1:]]
    if head == "+v":
        return tuple((a + b) % p for a, b in zip(*args))
    if head == "*v":
        return tuple(args[0] * x % p for x in args[1])
    if head == "+f":
        return (args[0] + args[1]) % p
    if head == "*f":
        return args[0] * args[1] % p
    if head == "-f":
        return -args[0] % p
    if head == "inv":
        return pow(args[0], -1, p) if args[0] else 0
    if head == "f":
        return space.f(*args)
    raise TermError(f"unknown operator {head!r}")


def _add(a, b):
    if a == "0f":
        return b
    if b == "0f":
        return a
    return ("+f", a, b)


def _mul(a, b):
    if "0f" in (a, b):
        return "0f"
    if a == "1f":
        return b
    if b == "1f":
        return a
    return ("*f", a, b)


def u_name(idx: Sequence[int]) -> str:
    return "u_" + "_".join(str(i) for i in idx)


def eliminate_form_terms(t, arity: int = 2):
    """An f-free term t' and the map from u-variables to index tuples over the
    V-variables of t, such that t = t'(x, f-tuple of x)."""
    sort = sort_of(t, arity)
    vvars = term_vars(t, "V")
    index = {v: i + 1 for i, v in enumerate(vvars)}
    used: dict[str, tuple[int, ...]] = {}

    def lin(x) -> dict:
        if isinstance(x, str):
            return {} if x == "0v" else {x: "1f"}
        if x[0] == "+v":
            out = dict(lin(x[1]))
            for v, c in lin(x[2]).items():
                out[v] = _add(out[v], c) if v in out else c
            return out
        c = elim(x[1])
        return {v: _mul(c, cv) for v, cv in lin(x[2]).items()}

    def elim(x):
        if isinstance(x, str):
            return x
        head = x[0]
        if head == "f":
            combos = [sorted(lin(a).items(), key=lambda kv: index[kv[0]]) for a in x[1:]]
            total = "0f"
            for combo in itertools.product(*combos):
                idx = tuple(index[v] for v, _ in combo)
                name = u_name(idx)
                used[name] = idx
                term = "1f"
                for _, c in combo:
                    term = _mul(term, c)
                total = _add(total, _mul(term, name))
            return total
        args = [elim(a) for a in x[1:]]
        if head == "+f":
            return _add(*args)
        if head == "*f":
            return _mul(*args)
        return (head,) + tuple(args)

    if sort == "F":
        out = elim(t)
    else:
        out = "0v"
        for v, c in sorted(lin(t).items(), key=lambda kv: index[kv[0]]):
            piece = v if c == "1f" else ("*v", c, v)
            out = piece if out == "0v" else ("+v", out, piece)
    return out, {name: list(idx) for name, idx in sorted(used.items())}, vvars


def f_tuple_env(space: FormSpace, vvars: Sequence[str], env: dict) -> dict:
    """Values of every u-variable over ``vvars`` under ``env``."""
    out = {}
    for idx in itertools.product(range(1, len(vvars) + 1), repeat=space.arity):
        out[u_name(idx)] = space.f(*(env[vvars[i - 1]] for i in idx))
    return out


def random_term(rng, depth: int, sort: str, vnames: Sequence[str], fnames: Sequence[str], arity: int = 2):
    if depth <= 1 or rng.random() < 0.25:
        if sort == "V":
            return rng.choice(list(vnames) + ["0v"])
        return rng.choice(list(fnames) + ["0f", "1f"])
    d = depth - 1
    if sort == "V":
        if rng.random() < 0.5:
            return ("+v", random_term(rng, d, "V", vnames, fnames, arity),
                    random_term(rng, d, "V", vnames, fnames, arity))
        return ("*v", random_term(rng, d, "F", vnames, fnames, arity),
                random_term(rng, d, "V", vnames, fnames, arity))
    op = rng.choice(["+f", "*f", "-f", "inv", "f", "f"])
    if op == "f":
        return ("f",) + tuple(random_term(rng, d, "V", vnames, fnames, arity) for _ in range(arity))
    if op in ("-f", "inv"):
        return (op, random_term(rng, d, "F", vnames, fnames, arity))
    return (op, random_term(rng, d, "F", vnames, fnames, arity), random_term(rng, d, "F", vnames, fnames, arity))
