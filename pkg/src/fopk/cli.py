"""Command-line front end: one subcommand per operation, JSON in and out.

Exit status 0 means success, 1 a domain error (invalid input structure,
unrealisable request, exhausted budget), 2 a usage error.  Every output
document carries ``"schema": "fopk/1"`` and is printed with sorted keys and
no insignificant whitespace, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import bilinear as bl
from .blowup import BlowupSpec, amalgamate, blow_up, generic_extend, recover_base
from .coding import (
    FORMATS,
    PartiteHypergraph,
    Witness,
    convert_witness,
    find_ip_grid,
    find_r_coding,
    fop_witness_check,
)
from .ramsey import (
    CLASSES,
    FnStructure,
    PreModel,
    free_amalgamate_rk,
    phi,
    pre_of_tk,
    psi,
    pre_substructure,
    fn_substructure,
    ramsey_arrow,
    to_functional,
    to_relational,
    validate_class,
)
from .structures import (
    LANGS,
    ParseError,
    TkModel,
    _int,
    _int_list,
    enumerate_models,
    find_embeddings,
    from_star_order,
    item_to_json,
    model_count,
    parse_tk,
    qf_type,
    star_order,
    validate_tk,
)
from .transpositions import (
    classify_transposition,
    product_qp,
    product_qq,
    transposition_path,
    verify_product_qp,
    verify_product_qq,
)

SCHEMA = "fopk/1"


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    """A well-formed request whose answer is a failure document (exit 1)."""

    def __init__(self, doc: dict):
        super().__init__(doc.get("message", ""))
        self.doc = doc


# -- argument helpers -------------------------------------------------------------

def ints(text: str) -> list[int]:
    if text.strip() == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def vectors(text: str) -> list[tuple[int, ...]]:
    if text.strip() == "":
        return []
    return [tuple(ints(part)) for part in text.split(";")]


def json_arg(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise argparse.ArgumentTypeError(f"invalid JSON: {e.msg}") from None


def load(path: str | None) -> Any:
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("document", f"invalid JSON at line {e.lineno}: {e.msg}") from None


def load_model(path: str | None) -> TkModel:
    return parse_tk(load(path))


def load_structure(path: str | None):
    doc = load(path)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "lfk_structure":
        return FnStructure.from_json(doc)
    if kind == "pre_model":
        return PreModel.from_json(doc)
    return parse_tk(doc)


# -- subcommands --------------------------------------------------------------------

def cmd_validate(a) -> dict:
    m = load_model(a.inp)
    v = validate_tk(m)
    doc = {"valid": not v, "violations": [x.to_json() for x in v]}
    if v:
        raise DomainFailure({"error": "InvalidModel", "message": v[0].message, **doc})
    return doc


def cmd_enumerate(a) -> dict:
    if len(a.sizes) != a.k + 1 or any(s < 0 for s in a.sizes):
        raise UsageError(f"--sizes needs {a.k + 1} nonnegative entries")
    if a.count_only:
        return {"count": model_count(a.k, a.sizes)}
    models = [m.to_json() for m in enumerate_models(a.k, a.sizes)]
    return {"count": len(models), "models": models}


def cmd_star_order(a) -> dict:
    return {"ranking": [item_to_json(x) for x in star_order(load_model(a.inp))]}


def cmd_from_star(a) -> dict:
    doc = load(a.inp)
    if not isinstance(doc, dict) or not isinstance(doc.get("ranking"), list):
        raise ParseError("ranking", "expected {k, part_sizes, ranking}")
    k = _int(doc.get("k"), "k")
    sizes = _int_list(doc.get("part_sizes"), "part_sizes")
    ranking = [tuple(_int_list(x, "ranking")) if isinstance(x, list) else _int(x, "ranking")
               for x in doc["ranking"]]
    return {"model": from_star_order(k, sizes, ranking).to_json()}


def cmd_qftype(a) -> dict:
    m = load_model(a.inp)
    return {"lang": a.lang, "tuple": a.tuple, "type": qf_type(m, a.tuple, a.lang).hex()}


def cmd_embed(a) -> dict:
    emb = find_embeddings(load_model(a.A), load_model(a.C))
    return {"count": len(emb), "embeddings": [list(h) for h in emb]}


def cmd_blowup(a) -> dict:
    return {"model": blow_up(BlowupSpec.from_json(load(a.inp))).to_json()}


def cmd_recover(a) -> dict:
    return {"blowup": recover_base(load_model(a.inp)).to_json()}


def cmd_amalgamate(a) -> dict:
    c, f1, f2 = amalgamate(load_model(a.D), load_model(a.M), load_model(a.N), a.emb1, a.emb2)
    return {"C": c.to_json(), "f1": f1, "f2": f2}


def cmd_generic_extend(a) -> dict:
    m, ren = generic_extend(load_model(a.inp), a.sizes, a.seed)
    return {"model": m.to_json(), "renumbering": ren, "seed": a.seed}


def cmd_code_search(a) -> dict:
    h = load_model(a.H)
    e = PartiteHypergraph.from_json(load(a.E))
    found = find_r_coding(h, e)
    return {"found": found is not None, "assignment": found}


def cmd_fop_check(a) -> dict:
    e = PartiteHypergraph.from_json(load(a.E))
    w = Witness.from_json(load(a.W))
    return {"holds": fop_witness_check(e, w)}


def cmd_convert_witness(a) -> dict:
    w = Witness.from_json(load(a.inp))
    order = None
    if a.order is not None:
        order = [tuple(x) if isinstance(x, list) else x for x in a.order]
    return {"witness": convert_witness(w, a.to, order).to_json()}


def cmd_ip_search(a) -> dict:
    w = find_ip_grid(PartiteHypergraph.from_json(load(a.E)), a.n)
    return {"found": w is not None, "witness": w.to_json() if w else None}


def cmd_transpose_classify(a) -> dict:
    tag = classify_transposition(load_model(a.A1), load_model(a.A2))
    return {"transposition": tag.to_json() if tag else None}


def cmd_transpose_path(a) -> dict:
    path = transposition_path(load_model(a.A), load_model(a.B))
    tags = [classify_transposition(x, y).to_json() for x, y in zip(path, path[1:])]
    return {"length": len(path), "path": [m.to_json() for m in path], "steps": tags}


def cmd_product(a) -> dict:
    am, bm = load_model(a.A), load_model(a.B)
    if a.kind == "qp":
        if a.v is None:
            raise UsageError("--kind qp needs --e and --v")
        c, prov = product_qp(am, a.e, a.v, bm)
        checks = verify_product_qp(am, tuple(a.e), a.v, bm, c, prov)
    else:
        if a.d is None:
            raise UsageError("--kind qq needs --d and --e")
        c, prov = product_qq(am, a.d, a.e, bm)
        checks = verify_product_qq(am, tuple(a.d), tuple(a.e), bm, c, prov)
    return {"C": c.to_json(), "provenance": prov, "checks": checks}


def cmd_class_validate(a) -> dict:
    x = load_structure(a.inp)
    if isinstance(x, TkModel):
        x = pre_of_tk(x)
    v = validate_class(x, a.cls)
    doc = {"class": a.cls, "member": not v, "violations": [y.to_json() for y in v]}
    if v:
        raise DomainFailure({"error": "NotAMember", "message": v[0].message, **doc})
    return doc


def cmd_to_functional(a) -> dict:
    x = load_structure(a.inp)
    if isinstance(x, TkModel):
        x = pre_of_tk(x)
    if not isinstance(x, PreModel):
        raise ParseError("kind", "expected a pre_model or tk_model document")
    fs, pmap, bpts = to_functional(x)
    return {"structure": fs.to_json(), "point_map": [[y, z] for y, z in sorted(pmap.items())],
            "block_points": bpts}


def _load_fn(path) -> FnStructure:
    x = load_structure(path)
    if not isinstance(x, FnStructure):
        raise ParseError("kind", "expected an lfk_structure document")
    return x


def cmd_to_relational(a) -> dict:
    pre, keep = to_relational(_load_fn(a.inp))
    return {"pre_model": pre.to_json(), "keep": list(keep)}


def cmd_phi(a) -> dict:
    c = _load_fn(a.inp)
    ids = phi(c, a.set)
    sub, _ = pre_substructure(to_relational(c)[0], ids)
    return {"ids": ids, "substructure": sub.to_json()}


def cmd_psi(a) -> dict:
    c = _load_fn(a.inp)
    ids = psi(c, a.set)
    sub, _ = fn_substructure(c, ids)
    return {"ids": ids, "substructure": sub.to_json()}


def cmd_free_amalgamate(a) -> dict:
    c, b1, b2 = free_amalgamate_rk(_load_fn(a.A), _load_fn(a.B1), _load_fn(a.B2), a.alpha1, a.alpha2)
    return {"C": c.to_json(), "beta1": b1, "beta2": b2}


def cmd_ramsey(a) -> dict:
    c, b, x = load_structure(a.C), load_structure(a.B), load_structure(a.A)
    return ramsey_arrow(c, b, x, a.colors, a.budget).to_json()


def _space(a) -> bl.FormSpace:
    return bl.FormSpace.from_json(load(a.inp))


def cmd_bf_g(a) -> dict:
    if not bl.is_prime(a.p):
        raise UsageError("--p must be prime")
    return {"coords": bl.g_coords(a.p, a.vectors, a.w)}


def cmd_bf_solve(a) -> dict:
    return {"v": list(bl.solve_form_values(_space(a), a.w, a.values))}


def cmd_bf_gram(a) -> dict:
    out = bl.realize_gram(_space(a), a.sigma)
    return {"arrays": [[list(v) for v in row] for row in out]}


def cmd_bf_basis(a) -> dict:
    return {"basis": [list(v) for v in bl.canonical_basis(_space(a), a.mode)]}


def cmd_bf_term(a) -> dict:
    t = bl.parse_term(a.term)
    out, umap, vvars = bl.eliminate_form_terms(t, a.arity)
    return {"term": bl.show_term(out), "u": umap, "v_vars": vvars}


def cmd_bf_ext(a) -> dict:
    y = bl.realize_extension_pair(_space(a), a.gram, a.d, a.w)
    return {"y": list(y) if y is not None else None}


def cmd_bf_fop(a) -> dict:
    space = _space(a)
    s = len(a.b)
    table = a.psi if a.psi is not None else [[j <= u for u in range(s)] for j in range(s)]
    arrays, d, h, w = bl.fop_from_field_order(space, a.b, a.parts, table)
    return {"arrays": [[list(v) for v in row] for row in arrays], "d": d,
            "hypergraph": h.to_json(), "witness": w.to_json()}


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=1_000_000)
    common.add_argument("--format", choices=["json"], default="json")

    p = argparse.ArgumentParser(prog="fopk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    table: list[tuple[str, Callable, list]] = [
        ("validate", cmd_validate, [("--in", dict(dest="inp"))]),
        ("enumerate", cmd_enumerate, [("--k", dict(type=int, required=True)),
                                      ("--sizes", dict(type=ints, required=True)),
                                      ("--count-only", dict(action="store_true"))]),
        ("star-order", cmd_star_order, [("--in", dict(dest="inp"))]),
        ("from-star", cmd_from_star, [("--in", dict(dest="inp"))]),
        ("qftype", cmd_qftype, [("--in", dict(dest="inp")), ("--tuple", dict(type=ints, required=True)),
                                ("--lang", dict(choices=LANGS, default="Lk"))]),
        ("embed", cmd_embed, [("--A", dict(required=True)), ("--C", dict(required=True))]),
        ("blowup", cmd_blowup, [("--in", dict(dest="inp"))]),
        ("recover", cmd_recover, [("--in", dict(dest="inp"))]),
        ("amalgamate", cmd_amalgamate, [("--D", dict(required=True)), ("--M", dict(required=True)),
                                        ("--N", dict(required=True)),
                                        ("--emb1", dict(type=ints, required=True)),
                                        ("--emb2", dict(type=ints, required=True))]),
        ("generic-extend", cmd_generic_extend, [("--in", dict(dest="inp")),
                                                ("--sizes", dict(type=ints, required=True))]),
        ("code-search", cmd_code_search, [("--H", dict(required=True)), ("--E", dict(required=True))]),
        ("fop-check", cmd_fop_check, [("--E", dict(required=True)), ("--W", dict(required=True))]),
        ("convert-witness", cmd_convert_witness, [("--in", dict(dest="inp")),
                                                  ("--to", dict(choices=FORMATS, required=True)),
                                                  ("--order", dict(type=json_arg, default=None))]),
        ("ip-search", cmd_ip_search, [("--E", dict(required=True)), ("--n", dict(type=int, required=True))]),
        ("transpose-classify", cmd_transpose_classify, [("--A1", dict(required=True)),
                                                        ("--A2", dict(required=True))]),
        ("transpose-path", cmd_transpose_path, [("--A", dict(required=True)), ("--B", dict(required=True))]),
        ("product", cmd_product, [("--A", dict(required=True)), ("--B", dict(required=True)),
                                  ("--kind", dict(choices=["qp", "qq"], required=True)),
                                  ("--d", dict(type=ints)), ("--e", dict(type=ints, required=True)),
                                  ("--v", dict(type=int))]),
        ("class-validate", cmd_class_validate, [("--in", dict(dest="inp")),
                                                ("--class", dict(dest="cls", choices=CLASSES, required=True))]),
        ("to-functional", cmd_to_functional, [("--in", dict(dest="inp"))]),
        ("to-relational", cmd_to_relational, [("--in", dict(dest="inp"))]),
        ("phi", cmd_phi, [("--in", dict(dest="inp")), ("--set", dict(type=ints, required=True))]),
        ("psi", cmd_psi, [("--in", dict(dest="inp")), ("--set", dict(type=ints, required=True))]),
        ("free-amalgamate", cmd_free_amalgamate, [("--A", dict(required=True)), ("--B1", dict(required=True)),
                                                  ("--B2", dict(required=True)),
                                                  ("--alpha1", dict(type=ints, required=True)),
                                                  ("--alpha2", dict(type=ints, required=True))]),
        ("ramsey", cmd_ramsey, [("--C", dict(required=True)), ("--B", dict(required=True)),
                                ("--A", dict(required=True)), ("--colors", dict(type=int, default=2))]),
        ("bf-g", cmd_bf_g, [("--p", dict(type=int, required=True)),
                            ("--vectors", dict(type=vectors, required=True)),
                            ("--w", dict(type=ints, required=True))]),
        ("bf-solve", cmd_bf_solve, [("--in", dict(dest="inp")), ("--w", dict(type=vectors, required=True)),
                                    ("--values", dict(type=ints, required=True))]),
        ("bf-gram", cmd_bf_gram, [("--in", dict(dest="inp")), ("--sigma", dict(type=json_arg, required=True))]),
        ("bf-basis", cmd_bf_basis, [("--in", dict(dest="inp")),
                                    ("--mode", dict(choices=["symplectic", "orthonormal"], required=True))]),
        ("bf-term", cmd_bf_term, [("--term", dict(required=True)), ("--arity", dict(type=int, default=2))]),
        ("bf-ext", cmd_bf_ext, [("--in", dict(dest="inp")), ("--w", dict(type=vectors, required=True)),
                                ("--gram", dict(type=json_arg, required=True)),
                                ("--d", dict(type=ints, required=True))]),
        ("bf-fop", cmd_bf_fop, [("--in", dict(dest="inp")), ("--b", dict(type=ints, required=True)),
                                ("--parts", dict(type=json_arg, required=True)),
                                ("--psi", dict(type=json_arg, default=None))]),
    ]
    for name, fn, opts in table:
        sp = sub.add_parser(name, parents=[common])
        for flag, kw in opts:
            sp.add_argument(flag, **kw)
        sp.set_defaults(func=fn)
    return p


def render(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, sort_keys=True, separators=(",", ":")) + "\n"


def emit(doc: dict, path: str | None) -> None:
    text = render(doc)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        doc = args.func(args)
    except UsageError as e:
        sys.stderr.write(f"fopk: {e}\n")
        return 2
    except DomainFailure as e:
        emit(e.doc, args.out)
        return 1
    except (ValueError, RuntimeError) as e:
        # ParseError, InvalidModel, embedding and capacity errors all land here.
        doc = {"error": type(e).__name__, "message": str(e)}
        if isinstance(e, ParseError):
            doc["field"] = e.field
        emit(doc, args.out)
        return 1
    emit(doc, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
