import networkx as nx
import numpy as np
import pytest

from conftest import decomposition, system, table
from heckecells.cells import cell_module, cells, decompose, exact_matmul, preorder_graph, subquotient_module
from heckecells.laurent import QUANTUM_TWO, ZERO
from heckecells.perron import specialize_action
from oracles import bumping_rs


def named(dec):
    W = dec.system
    return [[W.name(x) for x in c] for c in dec.cells]


def test_rank_one():
    T = table("A1")
    graph = preorder_graph(T, "left")
    assert graph[0] == {1}
    assert named(cells(T, "left")) == [["e"], ["1"]]


def test_s3_cells():
    assert named(decomposition("A2", 0, "left")) == [["e"], ["1", "21"], ["2", "12"], ["121"]]
    assert named(decomposition("A2", 0, "right")) == [["e"], ["1", "12"], ["2", "21"], ["121"]]
    D = decomposition("A2", 0, "two-sided")
    assert named(D) == [["e"], ["1", "2", "12", "21"], ["121"]]
    assert D.edges == {(0, 1), (1, 2)}
    assert D.leq(2, 0) and not D.leq(0, 2)


def test_b2_cells_in_characteristic_two():
    assert named(decomposition("B2", 2, "two-sided")) == [["e"], ["1"], ["2", "12", "21", "121", "212"], ["1212"]]
    left = named(decomposition("B2", 2, "left"))
    assert ["2", "12", "212"] in left and ["21", "121"] in left and ["1"] in left
    assert named(decomposition("B2", 0, "two-sided")) == [["e"], ["1", "2", "12", "21", "121", "212"], ["1212"]]


def full_product_graph(T, side):
    """y -> z whenever pkl_z occurs in pkl_x pkl_y (left) or pkl_y pkl_x (right) for some x."""
    W = T.system
    graph = {y: set() for y in range(W.order)}
    for x in range(W.order):
        for y in range(W.order):
            if side in ("left", "two-sided"):
                graph[y].update(T.product(x, y))
            if side in ("right", "two-sided"):
                graph[y].update(T.product(y, x))
    return graph


@pytest.mark.parametrize("name, p", [("A2", 0), ("A3", 0), ("B2", 0), ("B2", 2)])
@pytest.mark.parametrize("side", ["left", "right", "two-sided"])
def test_generator_preorder_equals_full_product_preorder(name, p, side):
    T = table(name, p)
    gen = nx.transitive_closure(nx.DiGraph([(y, x) for y, xs in preorder_graph(T, side).items() for x in xs]))
    full = nx.DiGraph([(y, x) for y, xs in full_product_graph(T, side).items() for x in xs if x != y])
    full = nx.transitive_closure(full)
    assert set(gen.edges) == set(full.edges)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_type_a_cells_are_rs_fibers(n):
    name = f"A{n - 1}"
    W = system(name)
    q_fibers, p_fibers, shapes = {}, {}, {}
    for w in range(W.order):
        P, Q = bumping_rs(W.one_line(w))
        q_fibers.setdefault(str(Q), set()).add(w)
        p_fibers.setdefault(str(P), set()).add(w)
        shapes.setdefault(tuple(map(len, P)), set()).add(w)
    as_sets = lambda d: {frozenset(v) for v in d.values()}
    assert decomposition(name, 0, "left").as_sets() == as_sets(q_fibers)
    assert decomposition(name, 0, "right").as_sets() == as_sets(p_fibers)
    assert decomposition(name, 0, "two-sided").as_sets() == as_sets(shapes)


@pytest.mark.parametrize("name, p", [("A3", 0), ("A4", 0), ("B2", 2), ("B3", 0)])
def test_inversion_maps_left_cells_to_right_cells(name, p):
    W = system(name)
    left = decomposition(name, p, "left").as_sets()
    right = decomposition(name, p, "right").as_sets()
    assert {frozenset(W.inverse[x] for x in c) for c in left} == right


@pytest.mark.parametrize("name, p", [("A3", 0), ("A4", 0), ("A5", 0), ("B2", 0), ("B2", 2), ("B3", 0)])
def test_left_cells_share_right_descents(name, p):
    W = system(name)
    for c in decomposition(name, p, "left").cells:
        assert len({W.right_descents(x) for x in c}) == 1


@pytest.mark.parametrize("name, p", [("A3", 0), ("B2", 2), ("B3", 0)])
def test_condensation_is_a_reduced_partial_order(name, p):
    for side in ("left", "right", "two-sided"):
        D = decomposition(name, p, side)
        G = nx.DiGraph(list(D.edges))
        G.add_nodes_from(range(len(D)))
        assert nx.is_directed_acyclic_graph(G)
        assert set(nx.transitive_reduction(G).edges) == D.edges
        for i in range(len(D)):
            for j in range(len(D)):
                assert D.leq(i, j) == (i == j or nx.has_path(G, j, i))
        # the identity is on top, the longest element at the bottom
        top, bottom = D.cell_of[0], D.cell_of[D.system.w0]
        assert all(D.leq(i, top) and D.leq(bottom, i) for i in range(len(D)))


def test_cell_module_of_identity_is_zero():
    for name in ("A2", "B2"):
        M = cell_module([0], table(name))
        assert all(M.actions[s] == [[ZERO]] for s in range(M.system.rank))
        assert {(s, z) for s, _, z, _ in M.discarded} == {(s, M.system.lmul[s][0]) for s in range(M.system.rank)}


def test_cell_module_of_longest_element():
    T = table("A2")
    M = cell_module([T.system.w0], T)
    assert all(M.actions[s] == [[QUANTUM_TWO]] for s in range(2))
    assert M.discarded == []


@pytest.mark.parametrize("name, p", [("A3", 0), ("B2", 0), ("B2", 2), ("B3", 0)])
def test_cell_modules_satisfy_hecke_relations(name, p):
    T = table(name, p)
    for side in ("left", "right"):
        for c in decomposition(name, p, side).cells:
            M = cell_module(c, T, side)
            assert M.check_relations()
            assert all(f.is_nonnegative() for A in M.actions for row in A for f in row)


def test_relations_fail_for_a_non_module():
    T = table("A2")
    # {1} alone is not closed under the quotient: 21 is in the same cell
    assert not subquotient_module([1], T).check_relations()


def test_v_equals_one_action_is_a_group_representation():
    T = table("B2", 2)
    W = T.system
    for c in decomposition("B2", 2, "left").cells:
        M = cell_module(c, T)
        rho = dict(M.iter_standard_action())
        for x in range(W.order):
            for y in range(W.order):
                assert np.array_equal(rho[x] @ rho[y], rho[W.multiply(x, y)])


def test_right_module_action_is_an_antihomomorphism():
    T = table("A3")
    W = T.system
    c = decomposition("A3", 0, "right").cells[3]
    M = cell_module(c, T, "right")
    rho = dict(M.iter_standard_action())
    for x in range(W.order):
        for y in range(0, W.order, 5):
            assert np.array_equal(rho[y] @ rho[x], rho[W.multiply(x, y)])


def test_b2_left_cell_block_of_weighted_sum():
    T = table("B2", 2)
    W = T.system
    J = [W.index(n) for n in ("2", "12", "21", "121", "212")]
    M = cell_module([W.index(n) for n in ("2", "12", "212")], T)
    assert specialize_action(M, restrict_to=J).tolist() == [[3, 4, 3], [4, 6, 4], [3, 4, 3]]


def test_exact_matmul_falls_back_to_python_ints():
    A = np.array([[2**40, 2**40], [0, 1]], dtype=np.int64)
    P = exact_matmul(A, A)
    assert P.dtype == object
    assert P[0, 0] == 2**80
    assert exact_matmul(np.eye(2, dtype=np.int64), A).dtype == np.int64


def test_reports_and_dot():
    D = decomposition("B2", 2, "two-sided")
    doc = D.to_json()
    assert doc["cells"][2] == ["2", "12", "21", "121", "212"]
    assert doc["condensation_edges"] == [[0, 1], [1, 2], [2, 3]]
    dot = D.to_dot()
    assert dot.startswith('digraph "two-sided_cells"') and "c1 -> c2;" in dot


def test_decompose_arbitrary_graph():
    W = system("A2")
    D = decompose(W, {0: {1, 2}, 1: {2}, 2: {1}, 3: {3}, 4: {5}, 5: set()}, "left")
    assert [list(c) for c in D.cells] == [[0], [1, 2], [3], [4], [5]]
    assert D.leq(1, 0) and D.leq(4, 3)
    assert not D.leq(3, 4) and not D.leq(2, 0)
    assert D.edges == {(0, 1), (3, 4)}
