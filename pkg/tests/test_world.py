import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.utils.file_utils import read_graph, read_tree, write_graph, write_tree
from src.utils.utils import IllegalSelectionError, RevealError, TreeBuildError
from src.workbench.generators import gen_random_tree
from src.world import Arrival, EdgeEvent, EdgeStatus, ExplorationView, Graph, build_tree

PROPERTY_SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


class TestBuildTree:
    def test_single_node(self):
        tree = build_tree([])
        assert tree.num_nodes == 1
        assert tree.depth == 0
        assert tree.max_degree == 0

    def test_path_parameters(self, path4):
        assert (path4.num_nodes, path4.depth, path4.max_degree) == (4, 3, 2)
        assert path4.path_to_root(3) == [3, 2, 1, 0]

    def test_reversed_pairs_are_reoriented(self):
        tree = build_tree([(1, 0), (2, 1)])
        assert tree.parent == [-1, 0, 1]
        assert tree.edges == [(0, 1), (1, 2)]

    def test_ports_parent_edge_first(self):
        tree = build_tree([(0, 2), (0, 1), (1, 3), (1, 4)])
        assert tree.ports[0] == [1, 0]
        assert tree.ports[1] == [1, 2, 3]
        assert tree.port_of(1, 1) == 1
        assert tree.children(1) == [3, 4]

    @pytest.mark.parametrize("edges", [
        [(0, 1), (1, 2), (2, 0)],
        [(0, 1), (0, 1)],
        [(0, 1), (2, 3)],
    ])
    def test_rejects_non_trees(self, edges):
        with pytest.raises(TreeBuildError):
            build_tree(edges)

    def test_ancestry_and_lca(self, binary3):
        assert binary3.is_ancestor(0, 14)
        assert binary3.is_ancestor(1, 8)
        assert not binary3.is_ancestor(1, 14)
        assert binary3.lca(7, 10) == 1
        assert binary3.lca(7, 14) == 0

    def test_euler_tour_is_closed_walk(self, binary3):
        tour = binary3.euler_tour()
        assert tour[0] == tour[-1] == 0
        assert len(tour) - 1 == 2 * (binary3.num_nodes - 1)
        for a, b in zip(tour, tour[1:]):
            assert binary3.parent[a] == b or binary3.parent[b] == a


@PROPERTY_SETTINGS
@given(n=st.integers(min_value=1, max_value=120), seed=st.integers(min_value=0, max_value=10_000))
def test_random_tree_shape(n, seed):
    tree = gen_random_tree(n, seed=seed)
    assert tree.num_nodes == n
    assert len(tree.edge_list()) == n - 1
    assert all(tree.depth_of[c] == tree.depth_of[p] + 1 for p, c in tree.edge_list())
    assert tree.depth == max(tree.depth_of)


class TestExplorationView:
    def test_initial_state(self, path4):
        view = ExplorationView(path4)
        assert view.discovered == [True, False, False, False]
        assert view.status[0] is EdgeStatus.DANGLING
        assert view.open_nodes() == [0]
        assert not view.fully_explored

    def test_down_then_up(self, path4):
        view = ExplorationView(path4)
        down = view.traverse(0, 0, robot=0)
        assert (down.dst, down.arrival, down.event) == (1, Arrival.REVEALED, EdgeEvent.DOWN)
        assert down.new_dangling == [1]
        assert view.status[0] is EdgeStatus.TRAVERSED
        assert view.is_half_explored(0)
        up = view.traverse(0, 1, robot=0)
        assert (up.dst, up.arrival, up.event) == (0, Arrival.KNOWN, EdgeEvent.UP)
        assert view.edge_events == 2
        assert view.path_from_root(1) == [0]

    def test_full_walk_explores(self, path4):
        view = ExplorationView(path4)
        for e, src in [(0, 0), (1, 1), (2, 2)]:
            view.traverse(e, src)
        assert view.fully_explored
        assert view.shallowest_open() == []

    def test_reveal_needs_adjacency(self, path4):
        view = ExplorationView(path4)
        with pytest.raises(RevealError):
            view.reveal(3)

    def test_undiscovered_edge(self, path4):
        view = ExplorationView(path4)
        with pytest.raises(IllegalSelectionError):
            view.traverse(2, 2)

    def test_shallowest_open_within_subtree(self, star4):
        view = ExplorationView(star4)
        view.traverse(0, 0)
        assert view.shallowest_open() == [0]
        assert view.shallowest_open(within=1) == []

    def test_dangling_edges_at_depth(self, star4, path4):
        assert ExplorationView(star4).dangling_edges_at_depth(0) == [(0, 0), (0, 1), (0, 2)]
        view = ExplorationView(path4)
        view.traverse(0, 0)
        view.traverse(1, 1)
        assert view.dangling_edges_at_depth(2) == [(2, 2)]
        assert view.dangling_edges_at_depth(0) == []
        view.traverse(2, 2)
        assert all(view.dangling_edges_at_depth(d) == [] for d in range(4))


class TestGraph:
    def test_distances_from_bfs(self):
        g = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        assert [g.dist(v) for v in range(4)] == [0, 1, 1, 2]
        assert g.depth == 2
        assert g.max_degree == 2

    def test_inconsistent_oracle(self):
        with pytest.raises(TreeBuildError):
            Graph(3, [(0, 1), (1, 2)], dist={0: 0, 1: 1, 2: 3})

    def test_disconnected(self):
        with pytest.raises(TreeBuildError):
            Graph(3, [(0, 1)])

    def test_from_tree_keeps_depths(self, binary3):
        g = Graph.from_tree(binary3)
        assert g.num_edges == binary3.num_edges
        assert g.depth == binary3.depth


class TestFiles:
    def test_tree_file(self, tmp_path, binary3):
        path = write_tree(binary3, tmp_path / "t.txt")
        again = read_tree(path)
        assert again.edge_list() == binary3.edge_list()

    def test_tree_file_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("5\n0 1\n1 2\n")
        with pytest.raises(TreeBuildError):
            read_tree(path)

    def test_graph_file_with_oracle(self, tmp_path):
        g = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        again = read_graph(write_graph(g, tmp_path / "g.txt", with_dist=True))
        assert again.edges == g.edges
        assert [again.dist(v) for v in range(4)] == [0, 1, 1, 2]
