import itertools

import pytest

import oracles
from test_acceptance import product_grid
from fopk.structures import enumerate_models, from_star_order, is_embedding, make_model, star_order, validate_tk
from fopk.transpositions import (
    PreconditionError,
    ReductMismatch,
    TranspositionTag,
    classify_transposition,
    is_deficient_iso,
    kendall_tau,
    product_qp,
    product_qq,
    transposition_path,
    verify_product_qp,
    verify_product_qq,
)

Q = (0, 1)


def star(sizes, ranking):
    return from_star_order(2, sizes, ranking)


# -- classification -----------------------------------------------------------------

def test_classify_single_qp_swap():
    tag = classify_transposition(star((1, 1, 2), [Q, 2, 3]), star((1, 1, 2), [2, Q, 3]))
    assert tag == TranspositionTag("QP", Q, 2)


def test_classify_two_swaps_is_none():
    assert classify_transposition(star((1, 1, 2), [Q, 2, 3]), star((1, 1, 2), [2, 3, Q])) is None


def test_classify_qq_swap():
    a1 = star((1, 2, 1), [(0, 1), (0, 2), 3])
    a2 = star((1, 2, 1), [(0, 2), (0, 1), 3])
    assert classify_transposition(a1, a2) == TranspositionTag("QQ", (0, 1), (0, 2))


def test_classify_reduct_mismatch():
    with pytest.raises(ReductMismatch):
        classify_transposition(star((1, 1, 2), [Q, 2, 3]), star((1, 1, 1), [Q, 2]))


@pytest.mark.parametrize("sizes", [(1, 1, 2), (1, 2, 1), (1, 1, 3), (2, 1, 1), (1, 2, 2)])
def test_classify_exactly_adjacent_swaps(sizes):
    models = list(enumerate_models(2, sizes))
    for a, b in itertools.product(models, repeat=2):
        d = oracles.kendall(star_order(a), star_order(b))
        assert (classify_transposition(a, b) is not None) == (d == 1)


# -- paths --------------------------------------------------------------------------

def test_path_two_qp_swaps():
    a, b = star((1, 1, 2), [Q, 2, 3]), star((1, 1, 2), [2, 3, Q])
    path = transposition_path(a, b)
    assert len(path) == 3 and path[0] == a and path[-1] == b
    assert all(classify_transposition(x, y).kind == "QP" for x, y in zip(path, path[1:]))


def test_path_identity():
    a = star((1, 1, 2), [Q, 2, 3])
    assert transposition_path(a, a) == [a]


def test_path_single_qq():
    a1 = star((1, 2, 1), [(0, 1), (0, 2), 3])
    a2 = star((1, 2, 1), [(0, 2), (0, 1), 3])
    assert len(transposition_path(a1, a2)) == 2


@pytest.mark.parametrize("sizes", [(1, 2, 1), (1, 1, 3), (1, 2, 2)])
def test_paths_are_minimal(sizes):
    models = list(enumerate_models(2, sizes))
    for a, b in itertools.product(models, repeat=2):
        path = transposition_path(a, b)
        assert len(path) == kendall_tau(star_order(a), star_order(b)) + 1
        assert path[-1] == b
        assert all(classify_transposition(x, y) for x, y in zip(path, path[1:]))


def test_deficient_iso_rejects_broken_map():
    a = star((1, 1, 2), [Q, 2, 3])
    b = star((1, 1, 2), [2, 3, Q])
    assert is_deficient_iso(a, star((1, 1, 2), [2, Q, 3]), [0, 1, 2, 3], Q, 2)
    assert not is_deficient_iso(a, b, [0, 1, 2, 3], Q, 2)


# -- products -----------------------------------------------------------------------

def check_valid_by_brute_force(c):
    assert oracles.brute_valid(c.k, c.part_sizes, c.qorder, c.r_edges)


def test_qp_example_edge_into_empty():
    a = make_model(2, (1, 1, 1), [Q], [(Q, 2)])
    b = make_model(2, (1, 1, 1), [Q], [])
    c, prov = product_qp(a, Q, 2, b)
    assert c.part_sizes == (1, 1, 1)
    assert not validate_tk(c)
    assert all(verify_product_qp(a, Q, 2, b, c, prov).values())


def test_qp_example_nonempty_b():
    a = make_model(2, (1, 1, 1), [Q], [(Q, 2)])
    b = make_model(2, (1, 2, 2), [(0, 2), (0, 1)], [((0, 1), 4), ((0, 2), 4), ((0, 2), 3)])
    c, prov = product_qp(a, Q, 2, b)
    check_valid_by_brute_force(c)
    assert is_embedding(b, c, prov["B"])


def test_qp_example_larger_a():
    a = star((1, 1, 2), [2, Q, 3])
    b = make_model(2, (1, 1, 1), [Q], [])
    c, prov = product_qp(a, Q, 3, b)
    assert c.part_sizes[2] == 2
    check_valid_by_brute_force(c)


def test_qp_requires_adjacency():
    a = star((1, 1, 2), [Q, 2, 3])
    with pytest.raises(PreconditionError):
        product_qp(a, Q, 3, make_model(2, (1, 1, 1), [Q], []))


def test_qq_example():
    a = star((1, 2, 1), [(0, 1), (0, 2), 3])
    b = make_model(2, (1, 1, 1), [Q], [])
    c, prov = product_qq(a, (0, 1), (0, 2), b)
    check_valid_by_brute_force(c)
    assert all(verify_product_qq(a, (0, 1), (0, 2), b, c, prov).values())


def test_qq_point_block_lands_in_istar():
    a = star((1, 2, 1), [(0, 1), (0, 2), 3])
    b = star((1, 1, 2), [2, Q, 3])
    c, prov = product_qq(a, (0, 1), (0, 2), b)
    istar = prov["istar"]
    assert istar == 2
    assert c.part_sizes[istar - 1] == a.part_sizes[istar - 1] - 2 + 1 + 2
    assert all(c.part_of(prov["B"][t]) == istar for t in b.points)


def test_qq_empty_relation_in_b():
    a = star((1, 2, 1), [(0, 1), (0, 2), 3])
    b = make_model(2, (1, 1, 2), [Q], [])
    c, prov = product_qq(a, (0, 1), (0, 2), b)
    # d_1 = e_1, so coordinate 1 of every b(t) ranges over P_1(B)
    s = tuple(prov["B"][y] for y in Q)
    for t in b.points:
        bt = (prov["B"][0], prov["B"][t])
        assert c.qrank[bt] < c.qrank[s]


def test_qq_requires_order():
    a = star((1, 2, 1), [(0, 1), (0, 2), 3])
    with pytest.raises(PreconditionError):
        product_qq(a, (0, 2), (0, 1), make_model(2, (1, 1, 1), [Q], []))


def test_product_grid_k1():
    assert product_grid(1) > 0


def test_product_grid_k3():
    assert product_grid(3) > 0
