from qgraph.baselines import bfs_components, dijkstra, kruskal, scc, two_colorable
from qgraph.graphmodel import INF, ArrayOracle, MatrixOracle


def test_kruskal_triangle():
    g = MatrixOracle.from_edges(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)], directed=False, weighted=True)
    assert sum(w for _, _, w in kruskal(g).answer) == 3


def test_kruskal_empty():
    assert kruskal(ArrayOracle.from_edges(4, [], directed=False, weighted=True)).answer == []


def test_kruskal_tie_break():
    g = ArrayOracle.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], directed=False)
    assert kruskal(g).answer == [(0, 1, 1), (0, 2, 1)]


def test_components():
    two = MatrixOracle.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], directed=False)
    assert bfs_components(two).answer == [[0, 1, 2], [3, 4, 5]]
    path = ArrayOracle.from_edges(5, [(i, i + 1) for i in range(4)], directed=False)
    assert len(bfs_components(path).answer) == 1


def test_scc():
    cyc = ArrayOracle.from_edges(4, [(i, (i + 1) % 4) for i in range(4)], directed=True)
    assert scc(cyc).answer == [[0, 1, 2, 3]]
    dag = MatrixOracle.from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (2, 4)], directed=True)
    assert len(scc(dag).answer) == 5


def test_scc_deep_path_no_recursion_limit():
    n = 5000
    g = ArrayOracle.from_edges(n, [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)], directed=True)
    assert len(scc(g).answer) == 1


def test_dijkstra():
    g = ArrayOracle.from_edges(4, [(0, 1, 2), (1, 2, 3)], directed=True)
    assert dijkstra(g, 0).answer == [0, 2, 5, INF]


def test_two_colorable():
    even = ArrayOracle.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)], directed=False)
    odd = ArrayOracle.from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=False)
    assert two_colorable(even).answer and not two_colorable(odd).answer
