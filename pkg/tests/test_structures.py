import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fopk.structures import (
    InvalidModel,
    ParseError,
    TkModel,
    enumerate_models,
    find_embeddings,
    from_star_order,
    is_valid,
    isomorphic,
    make_model,
    model_count,
    parse_tk,
    qf_type,
    require_valid,
    star_order,
    substructure,
    validate_tk,
)

Q = (0, 1)


# -- validation -------------------------------------------------------------------

def test_trivial_model_is_valid():
    assert validate_tk(make_model(2, (1, 1, 1), [Q], [])) == []


def test_monotonicity_violation_has_witness():
    m = make_model(2, (1, 2, 2), [(0, 1), (0, 2)], [((0, 2), 3)])
    vs = validate_tk(m)
    assert [v.axiom for v in vs] == [5]
    w = vs[0].witness
    assert (tuple(w["x"]), tuple(w["y"]), w["w"], w["z"]) == ((0, 1), (0, 2), 3, 4)


def test_up_set_is_valid():
    assert is_valid(make_model(2, (1, 1, 2), [Q], [(Q, 2), (Q, 3)]))


def test_edge_outside_q_times_points_is_axiom_3():
    m = make_model(2, (1, 1, 1), [Q], [((0, 2), 2)])
    assert 3 in {v.axiom for v in validate_tk(m)}


def test_incomplete_qorder_is_axiom_4():
    m = make_model(2, (1, 2, 1), [(0, 1)], [])
    assert 4 in {v.axiom for v in validate_tk(m)}


def test_require_valid_raises():
    with pytest.raises(InvalidModel):
        require_valid(make_model(2, (1, 2, 2), [(0, 1), (0, 2)], [((0, 2), 3)]))


def test_parse_error_names_field():
    doc = make_model(2, (1, 1, 1), [Q], []).to_json()
    doc["qorder"] = "nope"
    with pytest.raises(ParseError) as err:
        parse_tk(doc)
    assert "qorder" in str(err.value)


def test_json_round_trip():
    m = make_model(2, (1, 2, 2), [(0, 2), (0, 1)], [((0, 2), 4), ((0, 1), 4), ((0, 1), 3)])
    assert parse_tk(m.to_json()) == m


@pytest.mark.parametrize("sizes", [(1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 1, 3)])
def test_validator_agrees_with_brute_force_on_every_edge_set(sizes):
    k = 2
    q = oracles.q_tuples(k, sizes)
    pts = list(oracles.part_ranges(sizes)[k])
    pairs = [(t, w) for t in q for w in pts]
    for qorder in itertools.permutations(q):
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = {p for p, b in zip(pairs, bits) if b}
            m = make_model(k, sizes, qorder, edges)
            assert is_valid(m) == oracles.brute_valid(k, sizes, qorder, edges)


# -- star order ---------------------------------------------------------------------

@pytest.mark.parametrize("edges, expected", [
    ([(Q, 3)], [2, Q, 3]),
    ([(Q, 2), (Q, 3)], [Q, 2, 3]),
])
def test_star_order_examples(edges, expected):
    m = make_model(2, (1, 1, 2), [Q], edges)
    assert star_order(m) == expected
    assert from_star_order(2, (1, 1, 2), expected) == m


def test_star_order_no_edges():
    m = make_model(2, (1, 1, 1), [Q], [])
    assert star_order(m) == [2, Q]
    assert from_star_order(2, (1, 1, 1), [2, Q]) == m


def test_from_star_order_examples():
    m = from_star_order(2, (1, 2, 1), [(0, 1), (0, 2), 3])
    assert m.r_edges == {((0, 1), 3), ((0, 2), 3)}
    m = from_star_order(2, (1, 2, 1), [3, (0, 1), (0, 2)])
    assert m.r_edges == frozenset()


def test_from_star_order_rejects_bad_rankings():
    with pytest.raises(ParseError):
        from_star_order(2, (1, 2, 1), [(0, 1), 3])
    with pytest.raises(ParseError):
        from_star_order(2, (1, 2, 1), [(0, 1), (0, 1), (0, 2), 3])
    with pytest.raises(ParseError):
        from_star_order(2, (1, 1, 2), [3, Q, 2])


# -- quantifier-free types ------------------------------------------------------------

def test_qf_type_examples():
    m = make_model(2, (1, 1, 2), [Q], [(Q, 3)])
    assert qf_type(m, (0, 1, 2), "L''k") == qf_type(m, (0, 1, 3), "L''k")
    assert qf_type(m, (0, 1, 2), "Lk") != qf_type(m, (0, 1, 3), "Lk")
    assert qf_type(m, (0, 1, 3), "Lk") == qf_type(m, (0, 1, 3), "Lk")


def test_qf_type_is_renaming_invariant():
    a = make_model(2, (1, 1, 1), [Q], [(Q, 2)])
    c = make_model(2, (1, 1, 2), [Q], [(Q, 3)])
    assert qf_type(a, (0, 1, 2)) == qf_type(c, (0, 1, 3))


def test_qf_type_rejects_out_of_range():
    with pytest.raises(ParseError):
        qf_type(make_model(2, (1, 1, 1), [Q], []), (0, 7))


# -- embeddings ---------------------------------------------------------------------

def test_embedding_examples():
    a = make_model(2, (1, 1, 1), [Q], [(Q, 2)])
    assert find_embeddings(a, a) == [(0, 1, 2)]
    a0 = make_model(2, (1, 1, 1), [Q], [])
    c = make_model(2, (1, 1, 2), [Q], [(Q, 3)])
    assert find_embeddings(a0, c) == [(0, 1, 2)]
    assert find_embeddings(a, make_model(2, (1, 1, 2), [Q], [])) == []


@pytest.mark.parametrize("a_sizes, c_sizes", [((1, 1, 1), (1, 2, 2)), ((1, 1, 1), (2, 1, 2)), ((1, 2, 1), (2, 2, 1))])
def test_embeddings_match_brute_force(a_sizes, c_sizes):
    for a in enumerate_models(2, a_sizes):
        for c in enumerate_models(2, c_sizes):
            assert find_embeddings(a, c) == oracles.brute_embeddings(a, c)


def test_substructure_of_embedding_image_is_isomorphic():
    a0 = make_model(2, (1, 1, 1), [Q], [])
    c = make_model(2, (1, 1, 2), [Q], [(Q, 3)])
    sub, keep = substructure(c, [0, 1, 2])
    assert keep == [0, 1, 2] and isomorphic(sub, a0)


# -- enumeration --------------------------------------------------------------------

@pytest.mark.parametrize("sizes, count", [((1, 1, 2), 3), ((1, 2, 2), 12), ((2, 2, 2), 360)])
def test_enumeration_counts(sizes, count):
    models = list(enumerate_models(2, sizes))
    assert len(models) == count == model_count(2, sizes)
    assert len(set(models)) == count
    assert all(is_valid(m) for m in models)


@pytest.mark.parametrize("k, sizes", [(1, (2, 2)), (2, (1, 2, 2)), (2, (2, 1, 1)), (3, (1, 1, 2, 1))])
def test_enumeration_matches_interleavings(k, sizes):
    assert set(enumerate_models(k, sizes)) == set(oracles.interleaving_models(k, sizes))


def test_empty_part_gives_empty_q():
    models = list(enumerate_models(2, (0, 2, 3)))
    assert models == [TkModel(2, (0, 2, 3), (), frozenset())]


# -- properties ---------------------------------------------------------------------

sizes_strategy = st.tuples(st.integers(1, 2), st.integers(1, 2), st.integers(0, 3))


@st.composite
def models(draw):
    sizes = draw(sizes_strategy)
    skel = TkModel(2, sizes, (), frozenset())
    items = skel.q_tuples() + list(skel.points)
    perm = draw(st.permutations(items))
    pts = iter(skel.points)
    ranking = [next(pts) if not isinstance(x, tuple) else x for x in perm]
    return from_star_order(2, sizes, ranking)


@settings(max_examples=150, deadline=None)
@given(models())
def test_star_order_round_trip(m):
    assert is_valid(m)
    assert from_star_order(m.k, m.part_sizes, star_order(m)) == m


@settings(max_examples=150, deadline=None)
@given(models())
def test_no_forbidden_configuration(m):
    assert not oracles.has_forbidden(m.q_tuples(), list(m.points), set(m.r_edges))


@settings(max_examples=150, deadline=None)
@given(models())
def test_separating_point_orders_tuples(m):
    for x, y in itertools.permutations(m.q_tuples(), 2):
        if any(m.R(x, z) and not m.R(y, z) for z in m.points):
            assert m.qrank[x] < m.qrank[y]
