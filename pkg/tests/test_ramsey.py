import itertools

import pytest

import oracles
from test_acceptance import hkpre_members, sk_members
from fopk.ramsey import (
    ClassError,
    EmbeddingError,
    PreModel,
    ResourceError,
    admissible,
    chain,
    fn_isomorphic,
    fn_substructure,
    free_amalgamate_rk,
    is_fn_embedding,
    is_fn_substructure,
    make_fn,
    phi,
    pre_isomorphic,
    pre_of_tk,
    psi,
    ramsey_arrow,
    to_functional,
    to_relational,
    validate_class,
)
from fopk.structures import enumerate_models, make_model

Q = (0, 1)


# -- class validation ---------------------------------------------------------------

def test_image_outside_last_part_is_rk_violation():
    c = make_fn(2, (1, 1, 1), {Q: 1})
    assert [v.axiom for v in validate_class(c, "Rk")] == [2]


def test_total_ordered_function_is_sk():
    c = make_fn(2, (1, 2, 1), {(0, 1): 3, (0, 2): 3})
    assert validate_class(c, "Sk") == []
    assert validate_class(make_fn(2, (1, 2, 1), {(0, 1): 3}), "Sk")


def test_unordered_structure_is_not_ordered_rk():
    c = make_fn(1, (1, 1), {(0,): 1}, ordered=False)
    assert validate_class(c, "Rk") == []
    assert validate_class(c, "OrderedRk")


def test_block_split_by_r_is_axiom_6():
    m = PreModel(2, (1, 2, 1), (((0, 1), (0, 2)),), frozenset({((0, 1), 3)}))
    assert [v.axiom for v in validate_class(m, "HkPre")] == [6]


def test_every_tk_model_is_a_pre_model():
    for m in enumerate_models(2, (1, 2, 2)):
        assert validate_class(pre_of_tk(m), "HkPre") == []


def test_pre_validator_matches_brute_force():
    # Exhaustive over (1,2,1): blocks and edge sets, against the axioms read directly.
    q = [(0, 1), (0, 2)]
    pts = [3]
    pairs = [(t, w) for t in q for w in pts]
    for blocks in ([(q[0],), (q[1],)], [(q[1],), (q[0],)], [tuple(q)]):
        rank = {t: i for i, b in enumerate(blocks) for t in b}
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = frozenset(p for p, b in zip(pairs, bits) if b)
            ok = all((x, z) in edges for (y, w) in edges for x in q if rank[x] <= rank[y]
                     for z in pts if z >= w)
            m = PreModel(2, (1, 2, 1), tuple(blocks), edges)
            assert (validate_class(m, "HkPre") == []) == ok


# -- free amalgamation --------------------------------------------------------------

def test_free_amalgam_over_empty_is_disjoint_union():
    a = make_fn(1, (0, 0), {})
    b = make_fn(1, (1, 1), {})
    c, beta1, beta2 = free_amalgamate_rk(a, b, b, [], [])
    assert c.part_sizes == (2, 2) and c.f == {}
    assert set(beta1).isdisjoint(beta2)


def test_free_amalgam_keeps_both_edges():
    a = make_fn(1, (1, 1), {})
    b = make_fn(1, (2, 1), {(1,): 2})
    c, beta1, beta2 = free_amalgamate_rk(a, b, b, [0, 2], [0, 2])
    assert validate_class(c, "Rk") == []
    assert len(c.f) == 2
    assert is_fn_embedding(b, c, beta1) and is_fn_embedding(b, c, beta2)


def test_free_amalgam_has_no_mixed_tuples():
    a = make_fn(2, (1, 0, 1), {})
    b = make_fn(2, (1, 1, 1), {(0, 1): 2})
    c, beta1, beta2 = free_amalgamate_rk(a, b, b, [0, 2], [0, 2])
    new1 = set(beta1) - {beta1[0], beta1[2]}
    new2 = set(beta2) - {beta2[0], beta2[2]}
    for t in c.f:
        assert not (set(t) & new1 and set(t) & new2)


def test_free_amalgam_rejects_non_embedding():
    a = make_fn(1, (1, 1), {(0,): 1})
    b = make_fn(1, (1, 1), {})
    with pytest.raises(EmbeddingError):
        free_amalgamate_rk(a, b, b, [0, 1], [0, 1])


def test_free_amalgam_exhaustive_small():
    bs = [make_fn(1, (2, 1), f) for f in ({}, {(0,): 2}, {(1,): 2}, {(0,): 2, (1,): 2})]
    a = make_fn(1, (1, 1), {})
    for b1, b2 in itertools.product(bs, repeat=2):
        for x1, x2 in itertools.product((0, 1), repeat=2):
            al1, al2 = [x1, 2], [x2, 2]
            if not (is_fn_embedding(make_fn(1, (1, 1), {}, False), make_fn(1, (2, 1), b1.f, False), al1)
                    and is_fn_embedding(make_fn(1, (1, 1), {}, False), make_fn(1, (2, 1), b2.f, False), al2)):
                continue
            c, beta1, beta2 = free_amalgamate_rk(a, b1, b2, al1, al2)
            assert validate_class(c, "Rk") == []
            transported = {tuple(beta1[x] for x in t) for t in b1.f} | {tuple(beta2[x] for x in t) for t in b2.f}
            assert set(c.f) == transported


# -- B_f and C_R --------------------------------------------------------------------

def test_one_block_gives_one_point():
    b = PreModel(2, (1, 2, 1), (((0, 1), (0, 2)),), frozenset({((0, 1), 3), ((0, 2), 3)}))
    c, pmap, dpts = to_functional(b)
    assert len(dpts) == 1 and set(c.f.values()) == {dpts[0]}
    assert dpts[0] < pmap[3]


def test_tk_model_gives_injective_function():
    m = make_model(2, (1, 2, 1), [(0, 1), (0, 2)], [((0, 1), 3)])
    c, _, _ = to_functional(pre_of_tk(m))
    assert len(set(c.f.values())) == len(c.f)


def test_point_placement_matches_r():
    for b in hkpre_members(2, 5):
        c, pmap, dpts = to_functional(b)
        for j, blk in enumerate(b.qblocks):
            for y in b.points:
                assert (dpts[j] < pmap[y]) == b.R(blk[0], y)


def test_injective_function_gives_singleton_blocks():
    c = make_fn(1, (2, 2), {(0,): 2, (1,): 3})
    r, keep = to_relational(c)
    assert all(len(blk) == 1 for blk in r.qblocks)


def test_point_outside_image_survives():
    c = make_fn(1, (1, 2), {(0,): 1})
    r, keep = to_relational(c)
    assert keep == (0, 2) and list(r.points) == [1]
    assert r.R((0,), 1)


def test_round_trips():
    for c in sk_members(2, 5):
        r, _ = to_relational(c)
        assert validate_class(r, "HkPre") == []
        back, _, _ = to_functional(r)
        assert fn_isomorphic(back, c)
    for b in hkpre_members(2, 5):
        c, _, _ = to_functional(b)
        r, _ = to_relational(c)
        assert pre_isomorphic(r, b)


# -- phi and psi --------------------------------------------------------------------

def test_phi_of_everything_is_everything():
    c = make_fn(1, (2, 3), {(0,): 2, (1,): 4})
    r, _ = to_relational(c)
    full = list(range(c.n))
    assert phi(c, full) == list(range(r.n))
    assert psi(c, phi(c, full)) == full


def test_psi_of_point_adds_nothing():
    c = make_fn(1, (2, 3), {(0,): 2, (1,): 4})
    _, keep = to_relational(c)
    j = keep.index(3)
    assert psi(c, [j]) == [3]


def test_psi_adds_image_of_tuple():
    c = make_fn(1, (2, 3), {(0,): 2, (1,): 4})
    assert psi(c, [0]) == [0, 2]


def test_phi_rejects_inadmissible_subset():
    # 3 is the image of (1,), which is not in D; D minus im(f^D) would contain an f-image.
    c = make_fn(1, (2, 2), {(0,): 2, (1,): 3})
    d = {0, 2, 3}
    assert is_fn_substructure(c, d) and not admissible(c, d)
    with pytest.raises(ValueError):
        phi(c, d)


def test_phi_psi_inverse_on_small_members():
    for c in sk_members(1, 5):
        r, _ = to_relational(c)
        for size in range(r.n + 1):
            for w in itertools.combinations(range(r.n), size):
                d = psi(c, w)
                assert is_fn_substructure(c, d) and admissible(c, d)
                assert phi(c, d) == list(w)
        for size in range(c.n + 1):
            for d in itertools.combinations(range(c.n), size):
                if is_fn_substructure(c, d) and admissible(c, d):
                    assert psi(c, phi(c, d)) == list(d)


def test_fn_substructure_and_isomorphism():
    c = make_fn(1, (2, 2), {(0,): 2, (1,): 3})
    sub, ds = fn_substructure(c, [1, 3])
    assert ds == [1, 3] and fn_isomorphic(sub, make_fn(1, (1, 1), {(0,): 1}))
    with pytest.raises(ValueError):
        fn_substructure(c, [1])


# -- Ramsey arrows ------------------------------------------------------------------

def test_six_chain_arrows_triangles():
    assert ramsey_arrow(chain(6), chain(3), chain(2), 2).holds


def test_five_chain_has_verified_counterexample():
    res = ramsey_arrow(chain(5), chain(3), chain(2), 2)
    assert not res.holds
    idx = {e: i for i, e in enumerate(res.a_embeddings)}
    for tri in itertools.combinations(range(5), 3):
        cols = {res.coloring[idx[pair]] for pair in itertools.combinations(tri, 2)}
        assert len(cols) == 2


def test_b_equal_a_holds():
    for n in (2, 3, 4):
        assert ramsey_arrow(chain(n), chain(2), chain(2), 3).holds


def test_arrow_agrees_with_coloring_count():
    for n in (3, 4, 5):
        res = ramsey_arrow(chain(n), chain(3), chain(2), 2)
        copies = [[i for i, e in enumerate(res.a_embeddings) if set(e) <= set(tri)]
                  for tri in itertools.combinations(range(n), 3)]
        _, good = oracles.ramsey_colorings(len(res.a_embeddings), copies)
        assert res.holds == (good == 0)


def test_arrow_budget():
    with pytest.raises(ResourceError):
        ramsey_arrow(chain(6), chain(3), chain(2), 2, budget=10)


def test_arrow_rejects_unordered():
    a = make_fn(1, (1, 0), {}, ordered=False)
    with pytest.raises(ValueError):
        ramsey_arrow(a, a, a, 2)


def test_invalid_pre_model_is_class_error():
    m = PreModel(2, (1, 2, 1), (((0, 1), (0, 2)),), frozenset({((0, 1), 3)}))
    with pytest.raises(ClassError):
        to_functional(m)
