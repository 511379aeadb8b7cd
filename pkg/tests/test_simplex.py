import itertools
from fractions import Fraction

import pytest

from lapcode.errors import NotReflexiveError, ResourceGuardError
from lapcode.exactmat import IntMatrix, determinant
from lapcode.graphs import complete, cycle, enumerate_connected, path, star, whisker
from lapcode.simplex import (
    HStarVector, LambdaElement, build_simplex, dual_lifted_matrix, dual_vertex_matrix, dual_volume,
    ehrhart_count, ehrhart_polynomial, height_one_decomposition_witness, hstar, hyperplane_check,
    interior_point_count, is_reflexive_cofactor, is_reflexive_hibi, is_unimodal, lambda_set,
    lambda_set_bruteforce_oracle, lattice_point_count, parallelepiped_points,
)


def test_build_simplex_examples():
    s = build_simplex(complete(3))
    assert (s.vertex_matrix.rows, s.vertex_matrix.cols) == (3, 2)
    assert s.volume == 9
    assert build_simplex(cycle(5)).volume == 25
    assert build_simplex(star(6)).volume == 6


def test_vertex_matrix_columns_sum_to_zero():
    g = whisker(cycle(3))
    for i in range(1, g.n + 1):
        s = build_simplex(g, i)
        column = [sum(s.vertex_matrix[r, c] for r in range(g.n)) for c in range(g.n - 1)]
        assert column == [0] * (g.n - 1)
        assert abs(determinant(s.lifted_matrix)) == s.volume


def test_lambda_set_of_a_tree():
    lam = lambda_set(build_simplex(path(5)))
    assert lam.denominator == 5
    assert [e.numerators for e in lam] == [(k,) * 5 for k in range(5)]


def test_lambda_set_of_complete_graph():
    lam = lambda_set(build_simplex(complete(3)))
    assert lam.numerator_set() == {x for x in itertools.product(range(3), repeat=3) if sum(x) % 3 == 0}
    assert len(lam) == 9


def test_lambda_set_of_odd_cycle():
    lam = lambda_set(build_simplex(cycle(5)))
    expected = {
        tuple((alpha + beta * j) % 5 for j in range(5)) for alpha in range(5) for beta in range(5)
    }
    assert lam.numerator_set() == expected


def test_lambda_set_is_sorted_and_bounded():
    lam = lambda_set(build_simplex(cycle(4)))
    assert lam.denominator == 16
    assert list(lam.elements) == sorted(lam.elements)
    assert all(0 <= x < 16 for e in lam for x in e.numerators)
    assert all(0 <= e.height <= 3 for e in lam)


@pytest.mark.parametrize("g", [complete(3), cycle(4), cycle(6), cycle(7), complete(6), whisker(complete(3))])
def test_bruteforce_oracle_matches(g):
    s = build_simplex(g)
    assert lambda_set_bruteforce_oracle(s) == lambda_set(s)


def test_bruteforce_oracle_matches_every_small_graph():
    for n in range(2, 6):
        for g in enumerate_connected(n):
            s = build_simplex(g)
            assert lambda_set_bruteforce_oracle(s) == lambda_set(s), g.label


def test_bruteforce_oracle_of_even_cycle():
    lam = lambda_set_bruteforce_oracle(build_simplex(cycle(4)))
    assert len(lam) == 16
    assert lam.denominator == 16


def test_bruteforce_oracle_guard(guard):
    guard(100)
    with pytest.raises(ResourceGuardError):
        lambda_set_bruteforce_oracle(build_simplex(complete(4)))


def test_lambda_guard(guard):
    guard(50)
    with pytest.raises(ResourceGuardError) as error:
        lambda_set(build_simplex(complete(4)))
    assert error.value.exit_code == 3


def test_parallelepiped_points_of_unit_cube():
    lam = parallelepiped_points(IntMatrix.identity(3))
    assert len(lam) == 1
    assert lam[0].numerators == (0, 0, 0)


@pytest.mark.parametrize("g", [complete(3), cycle(5), whisker(complete(3)), path(4)])
def test_closure_walk_matches_box_scan(g):
    s = build_simplex(g)
    assert parallelepiped_points(s.lifted_matrix, "closure") == parallelepiped_points(s.lifted_matrix, "box")
    dual = dual_lifted_matrix(s) if is_reflexive_cofactor(s) else None
    if dual is not None:
        assert parallelepiped_points(dual, "closure") == parallelepiped_points(dual, "box")


def test_auto_walks_when_the_box_is_too_large(guard):
    dual = dual_lifted_matrix(build_simplex(cycle(7)))
    guard(20000)
    lam = parallelepiped_points(dual, "auto")
    assert len(lam) == 7 ** 5
    with pytest.raises(ResourceGuardError):
        parallelepiped_points(dual, "box")
    with pytest.raises(ValueError):
        parallelepiped_points(dual, "sideways")


def test_column_deletion_invariance():
    for g in (cycle(5), cycle(4), whisker(complete(3))):
        reference = lambda_set(build_simplex(g))
        for i in range(1, g.n):
            assert lambda_set(build_simplex(g, i)) == reference


@pytest.mark.parametrize("g, expected", [
    (complete(3), (1, 7, 1)),
    (path(4), (1, 1, 1, 1)),
    (cycle(5), (1, 1, 21, 1, 1)),
])
def test_hstar(g, expected):
    h = hstar(build_simplex(g))
    assert h.coefficients == expected


def test_hstar_invariants_on_small_graphs():
    for g in enumerate_connected(5):
        s = build_simplex(g)
        h = hstar(s)
        assert h[0] == 1
        assert min(h.coefficients) >= 1
        assert h.volume == s.volume


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_complete_graphs_are_reflexive(n):
    assert is_reflexive_cofactor(build_simplex(complete(n)))


def test_even_cycle_is_not_reflexive():
    certificate = is_reflexive_cofactor(build_simplex(cycle(4)))
    assert not certificate
    row, col, value = certificate.offending
    assert value % 4


@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_reflexive_iff_odd(n):
    assert bool(is_reflexive_cofactor(build_simplex(cycle(n)))) == bool(n % 2)


def test_reflexivity_criteria_agree():
    for n in range(2, 7):
        for g in enumerate_connected(n):
            s = build_simplex(g)
            assert bool(is_reflexive_cofactor(s)) == is_reflexive_hibi(hstar(s)), g.label


def test_hibi_and_unimodality_examples():
    assert is_reflexive_hibi(HStarVector((1, 7, 1)))
    assert not is_reflexive_hibi(HStarVector((1, 208, 1763, 7205, 12923, 9900, 2658, 333, 1)))
    assert is_reflexive_hibi(HStarVector((1, 3, 3, 5, 3, 5, 3, 3, 1)))
    assert is_unimodal(HStarVector((1, 7, 1)))
    assert not is_unimodal(HStarVector((1, 3, 3, 5, 3, 5, 3, 3, 1)))
    assert is_unimodal((1, 1, 1, 1))
    assert is_unimodal((1, 2, 2, 1))


def test_hstar_vector_validation():
    with pytest.raises(ValueError):
        HStarVector((1, -1))
    with pytest.raises(ValueError):
        HStarVector(())


def test_height_bijection_and_support_identity():
    for g in (complete(4), cycle(5), whisker(complete(3))):
        s = build_simplex(g)
        lam = lambda_set(s)
        n = g.n
        numerators = lam.numerator_set()
        for e in lam:
            mirrored = tuple(n - 1 - x for x in e.numerators)
            assert mirrored in numerators
            assert LambdaElement(mirrored, n).height == n - 1 - e.height
            assert e.height + e.inverse().height == len(e.support)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_dual_of_complete_graph(n):
    s = build_simplex(complete(n))
    expected = [[-int(i == j) for j in range(n - 1)] for i in range(n - 1)] + [[1] * (n - 1)]
    assert dual_vertex_matrix(s).to_rows() == expected
    assert hyperplane_check(s)


def test_hyperplane_check_for_every_deleted_column():
    for i in range(1, 5):
        s = build_simplex(cycle(5), i)
        assert hyperplane_check(s)


def test_dual_volume():
    for g in (complete(4), cycle(5), whisker(complete(3))):
        s = build_simplex(g)
        assert dual_volume(s) == Fraction(g.n ** (g.n - 1), s.tau)
        assert abs(determinant(dual_lifted_matrix(s))) == dual_volume(s)
    assert dual_volume(build_simplex(cycle(4))) == Fraction(4 ** 3, 4)


def test_dual_needs_reflexive_simplex():
    with pytest.raises(NotReflexiveError) as error:
        dual_vertex_matrix(build_simplex(cycle(4)))
    assert "cofactor" in str(error.value)


def test_lattice_counts():
    h = hstar(build_simplex(complete(3)))
    assert lattice_point_count(h) == 10
    assert interior_point_count(h) == 1


def test_ehrhart_polynomial():
    assert ehrhart_polynomial(HStarVector((1,)), 0) == [Fraction(1)]
    h = HStarVector((1, 7, 1))
    polynomial = ehrhart_polynomial(h)
    assert polynomial[0] == 1
    assert ehrhart_count(h, 1) - 2 - 1 == 7
    assert polynomial[-1] == Fraction(9, 2)
    for g in (path(4), cycle(5)):
        h = hstar(build_simplex(g))
        assert ehrhart_count(h, 0) == 1
        assert ehrhart_count(h, 1) == lattice_point_count(h)


def test_height_one_witness_trivial_cases():
    s = build_simplex(complete(3))
    point = next(e for e in lambda_set(s) if e.height == 1)
    decomposition = height_one_decomposition_witness(s, point)
    assert decomposition.size == 1
    doubled = tuple(2 * v for v in point.point(s.lifted_matrix))
    decomposition = height_one_decomposition_witness(s, doubled)
    assert decomposition.size == 2
