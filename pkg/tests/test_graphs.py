import itertools
import random

import networkx as nx
import pytest

from lapcode.errors import InvalidGraphError, ResourceGuardError
from lapcode.exactmat import IntMatrix, cofactor_matrix
from lapcode.graphs import (
    Graph, bridge, canonical_form, complete, cycle, enumerate_connected, isomorphism, laplacian,
    path, relabel, spanning_tree_count, star, star_whisker, star_whisker_complete,
    to_networkx, tree_from_pruefer, whisker, write_edge_list,
)


def _random_connected(rng, n):
    while True:
        edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5]
        candidate = nx.Graph(edges)
        candidate.add_nodes_from(range(1, n + 1))
        if nx.is_connected(candidate):
            return Graph.from_edges(n, edges)


def test_laplacian_examples():
    assert laplacian(complete(3)).to_rows() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert laplacian(path(2)).to_rows() == [[1, -1], [-1, 1]]


def test_whisker_laplacian_block_form():
    assert laplacian(whisker(complete(2))).to_rows() == [
        [2, -1, -1, 0],
        [-1, 2, 0, -1],
        [-1, 0, 1, 0],
        [0, -1, 0, 1],
    ]


def test_laplacian_is_symmetric_with_zero_sums():
    for g in enumerate_connected(5):
        rows = laplacian(g).to_rows()
        assert rows == [list(col) for col in zip(*rows)]
        assert all(sum(row) == 0 for row in rows)
        assert [rows[v - 1][v - 1] for v in range(1, 6)] == [g.degree(v) for v in range(1, 6)]


@pytest.mark.parametrize("g, tau", [
    (cycle(7), 7),
    (complete(5), 125),
    (star_whisker_complete(4), 729),
    (path(6), 1),
])
def test_spanning_tree_count(g, tau):
    assert spanning_tree_count(g) == tau


def test_every_laplacian_cofactor_is_tau():
    rng = random.Random(1)
    for _ in range(20):
        g = _random_connected(rng, rng.randint(2, 6))
        tau = spanning_tree_count(g)
        assert set(cofactor_matrix(laplacian(g)).entries) == {tau}


def test_spanning_tree_count_agrees_with_networkx():
    if not hasattr(nx, "number_of_spanning_trees"):
        pytest.skip("networkx without number_of_spanning_trees")
    rng = random.Random(2)
    for _ in range(10):
        g = _random_connected(rng, 6)
        assert spanning_tree_count(g) == round(nx.number_of_spanning_trees(to_networkx(g)))


def test_graph_validation():
    with pytest.raises(InvalidGraphError):
        Graph.from_edges(3, [(1, 1), (1, 2), (2, 3)])
    with pytest.raises(InvalidGraphError):
        Graph.from_edges(3, [(1, 2), (2, 1), (2, 3)])
    with pytest.raises(InvalidGraphError):
        Graph.from_edges(4, [(1, 2), (3, 4)])
    with pytest.raises(InvalidGraphError):
        Graph.from_edges(3, [(1, 4), (1, 2)])
    with pytest.raises(InvalidGraphError):
        cycle(2)
    with pytest.raises(InvalidGraphError):
        complete(1)


def test_whisker_shapes():
    w = whisker(complete(2))
    assert w.n == 4
    assert w.edge_list == [(1, 2), (1, 3), (2, 4)]
    assert whisker(cycle(3), 2).n == 9
    for g in (cycle(5), complete(4)):
        for k in (1, 2, 3):
            wk = whisker(g, k)
            assert wk.n == (k + 1) * g.n
            assert spanning_tree_count(wk) == spanning_tree_count(g)


def test_star_whisker_shape():
    g = star_whisker_complete(3)
    assert g.n == 7
    assert g.edge_count == 9
    assert g.degree(7) == 3
    assert g.neighbors(7) == [4, 5, 6]
    assert g.name == "W*(K3)"


def test_star_whisker_laplacian_block_form():
    n = 4
    rows = laplacian(star_whisker_complete(n)).to_rows()
    k = laplacian(complete(n)).to_rows()
    for i in range(n):
        assert rows[i][:n] == [k[i][j] + int(i == j) for j in range(n)]
        assert rows[i][n:2 * n] == [-int(i == j) for j in range(n)]
        assert rows[n + i][n:2 * n] == [2 * int(i == j) for j in range(n)]
        assert rows[n + i][2 * n] == -1
    assert rows[2 * n][2 * n] == n


def test_star_whisker_deeper_layers():
    g = star_whisker(complete(3), 2)
    assert g.n == 10
    assert g.neighbors(10) == [7, 8, 9]
    assert spanning_tree_count(g) == 100


def test_bridge_shape_and_tau():
    b = bridge([cycle(3), path(3)])
    assert b.n == 6
    assert b.edge_count == 6
    assert (3, 4) in b.edges
    assert spanning_tree_count(b) == spanning_tree_count(cycle(3)) * spanning_tree_count(path(3))
    assert bridge([complete(3), cycle(3), complete(3)]).edge_count == 11


def test_bridge_of_unequal_sizes_warns(caplog):
    b = bridge([complete(3), complete(6)])
    assert b.n == 9
    assert "unequal sizes" in caplog.text


def test_bridge_order_matters():
    assert bridge([path(3), cycle(3)]) != bridge([cycle(3), path(3)])


def test_pruefer_trees():
    t = tree_from_pruefer([4, 4])
    assert t.n == 4
    assert t.degree(4) == 3
    assert tree_from_pruefer([]).edge_list == [(1, 2)]
    assert tree_from_pruefer([2, 2, 3]).edge_list == [(1, 2), (2, 3), (2, 4), (3, 5)]
    assert star(5).degree(5) == 4
    with pytest.raises(InvalidGraphError):
        tree_from_pruefer([9])


def test_relabel_conjugates_the_laplacian():
    g = bridge([cycle(3), path(3)])
    sigma = (4, 6, 1, 2, 5, 3)
    h = relabel(g, sigma)
    lg, lh = laplacian(g), laplacian(h)
    permutation = IntMatrix.from_rows([[int(sigma[i] == j + 1) for j in range(6)] for i in range(6)])
    assert lh == permutation.transpose() @ lg @ permutation


def test_canonical_form_is_label_invariant():
    rng = random.Random(4)
    for _ in range(10):
        g = _random_connected(rng, 6)
        sigma = list(range(1, 7))
        rng.shuffle(sigma)
        h = relabel(g, sigma)
        assert canonical_form(g).key == canonical_form(h).key
        found = isomorphism(g, h)
        assert found is not None
        assert relabel(g, found) == h


def test_isomorphism_rejects_different_graphs():
    assert isomorphism(path(4), star(4)) is None
    assert isomorphism(cycle(4), complete(4)) is None


@pytest.mark.parametrize("n, count", [(2, 1), (3, 2), (4, 6), (5, 21), (6, 112), (7, 853)])
def test_enumerate_connected_counts(n, count):
    assert len(list(enumerate_connected(n))) == count


def test_enumerated_classes_are_pairwise_non_isomorphic():
    graphs = [to_networkx(g) for g in enumerate_connected(5)]
    for a, b in itertools.combinations(graphs, 2):
        assert not nx.is_isomorphic(a, b)


def test_enumerated_classes_come_in_canonical_order():
    keys = [canonical_form(g).key for g in enumerate_connected(6)]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_enumeration_covers_every_labelled_graph():
    keys = {canonical_form(g).key for g in enumerate_connected(4)}
    labelled = list(enumerate_connected(4, labeled=True))
    assert len(labelled) == 38
    assert {canonical_form(g).key for g in labelled} == keys


def test_enumeration_guard():
    with pytest.raises(ResourceGuardError):
        enumerate_connected(8)
    with pytest.raises(InvalidGraphError):
        enumerate_connected(1)


def test_write_edge_list():
    assert write_edge_list(path(3)) == "3 2\n1 2\n2 3\n"
