import itertools
import random
from decimal import Decimal
from fractions import Fraction

import pytest

from lapcode.cache import WriteOnceCache
from lapcode.codes import (
    MdsVerdict, ModularCode, SelfRelation, code_from_simplex, codes_permutation_equivalent,
    dual_code, is_cyclic, is_mds, log_cardinality, minimum_distance, parity_check_columns_dependent,
    permute_word, prime_dimension_report, rate, self_relation, verify_code_duality,
    weight_distribution,
)
from lapcode.errors import MatrixError, NotReflexiveError, ResourceGuardError
from lapcode.exactmat import IntMatrix
from lapcode.graphs import (
    bridge, complete, cycle, enumerate_connected, isomorphism, path, relabel, star_whisker_complete,
    whisker,
)
from lapcode.simplex import build_simplex, is_reflexive_cofactor, lambda_set


def _code(g):
    return code_from_simplex(build_simplex(g))


def _repetition(n):
    return ModularCode(n, n, ((1,) * n,))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tree_code_is_repetition_code(n):
    code = _code(path(n))
    assert code == _repetition(n)
    assert code.cardinality == n


@pytest.mark.parametrize("n", [3, 4, 5])
def test_complete_graph_code_is_sum_zero(n):
    code = _code(complete(n))
    assert code.cardinality == n ** (n - 1)
    assert set(code.codewords()) == {x for x in itertools.product(range(n), repeat=n) if sum(x) % n == 0}


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_cycle_code(n):
    code = _code(cycle(n))
    assert code.cardinality == n * n
    assert code == ModularCode(n, n, ((1,) * n, tuple(range(n))))


def test_code_needs_reflexive_simplex():
    with pytest.raises(NotReflexiveError):
        _code(cycle(4))


def test_membership():
    code = _code(complete(4))
    assert code.contains((1, 2, 3, 2))
    assert not code.contains((1, 0, 0, 0))


def test_dual_of_repetition_code_is_sum_zero():
    assert dual_code(_repetition(5)) == _code(complete(5))


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_dual_of_complete_graph_code_is_repetition(n):
    dual = dual_code(_code(complete(n)))
    assert dual == _repetition(n)
    assert dual == _code(path(n))


def test_odd_cycle_code_lies_in_its_dual():
    code = _code(cycle(5))
    dual = dual_code(code)
    assert all(dual.contains(g) for g in code.generators)


def test_double_dual():
    for g in (complete(4), cycle(5), whisker(complete(3)), path(4), star_whisker_complete(3)):
        code = _code(g)
        dual = dual_code(code)
        assert code.cardinality * dual.cardinality == g.n ** g.n
        assert dual_code(dual) == code


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_complete_graph_distance(n):
    assert minimum_distance(_code(complete(n))) == 2


@pytest.mark.parametrize("n", [5, 7, 9])
def test_odd_cycle_distance(n):
    assert minimum_distance(_code(cycle(n))) == n - 1


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_tree_distance(n):
    assert minimum_distance(_code(path(n))) == n


def test_star_whisker_distance():
    assert minimum_distance(_code(star_whisker_complete(3))) == 5


@pytest.mark.parametrize("g", [complete(5), complete(7), cycle(5), cycle(7), star_whisker_complete(3)])
def test_distance_methods_agree(g):
    code = _code(g)
    assert minimum_distance(code, "exhaustive") == minimum_distance(code, "columns")


def test_distance_of_zero_code():
    with pytest.raises(MatrixError):
        minimum_distance(ModularCode(3, 3, ((0, 0, 0),)))


def test_distance_guard(guard):
    code = _code(complete(4))
    guard(20)
    with pytest.raises(ResourceGuardError):
        minimum_distance(code)
    assert minimum_distance(_code(complete(5)), "columns") == 2


def test_unknown_distance_method():
    with pytest.raises(ValueError):
        minimum_distance(_repetition(3), "guess")


def test_mds_examples():
    assert is_mds(_code(complete(4))) is MdsVerdict.MDS
    assert is_mds(_code(cycle(5))) is MdsVerdict.MDS
    assert is_mds(_code(cycle(7))) is MdsVerdict.MDS
    assert is_mds(ModularCode(3, 3, ((1, 0, 0),))) is MdsVerdict.NOT_MDS
    assert is_mds(_code(bridge([cycle(3), cycle(3)]))) is MdsVerdict.NOT_APPLICABLE


def test_star_whisker_code_over_eleven_is_mds():
    code = _code(star_whisker_complete(5))
    assert log_cardinality(code) == 5
    assert minimum_distance(code) == 7
    assert is_mds(code)


def test_singleton_bound_holds():
    for n in range(3, 6):
        for g in enumerate_connected(n):
            s = build_simplex(g)
            if not is_reflexive_cofactor(s):
                continue
            code = code_from_simplex(s)
            k = log_cardinality(code)
            if k is not None:
                assert minimum_distance(code) <= n - k + 1


@pytest.mark.parametrize("n", [3, 5, 7])
def test_rates(n):
    assert rate(_code(path(n))) == Fraction(1, n)
    assert rate(_code(cycle(n))) == Fraction(2, n)
    assert rate(_code(complete(n))) == Fraction(n - 1, n)


def test_rate_without_integral_dimension():
    value = rate(_code(bridge([cycle(3), cycle(3)])))
    assert isinstance(value, Decimal)
    assert Decimal("0.371") < value < Decimal("0.372")


def test_cyclic_codes():
    assert is_cyclic(_code(cycle(5)))
    assert is_cyclic(_code(complete(4)))
    assert not is_cyclic(ModularCode(3, 3, ((1, 0, 0),)))


def test_self_relations():
    assert self_relation(_code(cycle(5))) is SelfRelation.SELF_ORTHOGONAL
    assert self_relation(_code(cycle(7))) is SelfRelation.SELF_ORTHOGONAL
    assert self_relation(_code(complete(4))) is SelfRelation.CONTAINS_DUAL
    assert self_relation(_code(star_whisker_complete(3))) is SelfRelation.NONE
    assert self_relation(ModularCode(2, 2, ((1, 1),))) is SelfRelation.SELF_DUAL


@pytest.mark.parametrize("g", [complete(4), cycle(5), path(4)])
def test_code_duality(g):
    report = verify_code_duality(build_simplex(g))
    assert report
    assert report.dual_lambda_size == g.n ** (g.n - 1) // build_simplex(g).tau
    assert report.cardinality_product == g.n ** g.n


def test_code_duality_sizes():
    assert verify_code_duality(build_simplex(complete(4))).expected_size == 4
    assert verify_code_duality(build_simplex(cycle(5))).expected_size == 125


@pytest.mark.parametrize("g, k, tau", [
    (complete(5), 4, 125),
    (cycle(7), 2, 7),
    (star_whisker_complete(3), 3, 49),
])
def test_prime_dimension_report(g, k, tau):
    report = prime_dimension_report(build_simplex(g))
    assert (report.dimension, report.tau, report.holds) == (k, tau, True)


def test_prime_dimension_needs_prime_vertex_count():
    with pytest.raises(MatrixError):
        prime_dimension_report(build_simplex(complete(4)))


def test_weight_distributions():
    assert weight_distribution(_repetition(5)) == [1, 0, 0, 0, 0, 4]
    assert weight_distribution(_code(complete(3))) == [1, 0, 6, 2]


def test_codewords_guard(guard):
    code = _code(complete(4))
    guard(10)
    with pytest.raises(ResourceGuardError):
        code.codewords()


def test_isomorphic_graphs_give_permutation_equivalent_codes():
    rng = random.Random(9)
    g = bridge([cycle(3), path(3)])
    sigma = list(range(1, 7))
    rng.shuffle(sigma)
    h = relabel(g, sigma)
    found = isomorphism(g, h)
    c, c2 = _code(g), _code(h)
    assert codes_permutation_equivalent(c, c2, found)
    assert weight_distribution(c) == weight_distribution(c2)
    assert sorted(permute_word(w, found) for w in c.codewords()) == c2.codewords()


def test_all_ones_word_and_support_weights():
    for g in (complete(4), cycle(5), whisker(complete(3)), bridge([cycle(3), path(3)])):
        s = build_simplex(g)
        code = code_from_simplex(s)
        assert code.contains((1,) * g.n)
        for element in lambda_set(s):
            word = element.numerators
            assert code.contains(word)
            assert sum(1 for x in word if x) == element.height + element.inverse().height


def test_parity_check_columns():
    h = IntMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    dependence = parity_check_columns_dependent(h, 5)
    assert dependence.size == 3
    assert dependence.columns == (1, 2, 3)
    with pytest.raises(MatrixError):
        parity_check_columns_dependent(h, 4)


def test_write_once_cache_keeps_the_first_value():
    cache = WriteOnceCache()
    calls = []
    assert cache.get("k") == (None, False)
    assert cache.get_or_compute("k", lambda: calls.append(1) or 7) == 7
    assert cache.get_or_compute("k", lambda: calls.append(2) or 8) == 7
    assert cache.set("k", 9) == 7
    assert calls == [1]


def test_codes_memoise_their_distance():
    code = code_from_simplex(build_simplex(cycle(5)))
    assert minimum_distance(code, "exhaustive") == 4
    assert code._cache.get("distance") == (4, True)
