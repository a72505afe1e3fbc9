import json
from itertools import permutations

import pytest

from conftest import system
from heckecells.coxeter import CartanSpec, build_system, load_cartan, preset
from heckecells.errors import InfiniteGroup, MalformedCartan, UnknownElement
from oracles import BruteGroup, inversions


@pytest.mark.parametrize("name, order, longest", [
    ("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("A4", 120, 10), ("A5", 720, 15),
    ("B2", 8, 4), ("B3", 48, 9),
])
def test_group_orders(name, order, longest):
    W = system(name)
    assert W.order == order
    assert W.length[W.w0] == longest
    assert max(W.length) == longest


def test_b2_names_in_shortlex_order():
    W = system("B2")
    assert [W.name(w) for w in range(W.order)] == ["e", "1", "2", "12", "21", "121", "212", "1212"]


@pytest.mark.parametrize("name", ["A3", "B2", "B3"])
def test_coxeter_relations(name):
    W = system(name)
    m = W.coxeter_matrix
    for w in range(W.order):
        for s in range(W.rank):
            assert W.rmul[s][W.rmul[s][w]] == w
            assert abs(W.length[W.rmul[s][w]] - W.length[w]) == 1
            for t in range(W.rank):
                x = y = w
                for k in range(m[s][t]):
                    x = W.rmul[s if k % 2 == 0 else t][x]
                    y = W.rmul[t if k % 2 == 0 else s][y]
                assert x == y


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_words_inverses_and_multiplication(name):
    W = system(name)
    for w in range(W.order):
        assert len(W.words[w]) == W.length[w]
        assert W.from_word(W.words[w]) == w
        assert W.multiply(w, W.inverse[w]) == 0
        assert W.length[W.inverse[w]] == W.length[w]


@pytest.mark.parametrize("name", ["A2", "A3", "B2"])
def test_bruhat_order_matches_subword_oracle(name):
    W = system(name)
    G = BruteGroup(W.spec.matrix)
    assert len(G.elements) == W.order
    to_brute = {w: G.from_word(W.words[w]) for w in range(W.order)}
    for y in range(W.order):
        for x in range(W.order):
            assert W.bruhat_leq(x, y) == G.leq(to_brute[x], to_brute[y])


def test_bruhat_without_materialized_table_agrees():
    W = system("A3")
    fresh = build_system(preset("A3"))
    fresh._bruhat_down = None
    for x in range(W.order):
        for y in range(W.order):
            assert fresh.bruhat_leq(x, y) == W.bruhat_leq(x, y)


def test_type_a_one_line_conventions():
    W = system("A3")
    for w in range(W.order):
        perm = W.one_line(w)
        assert inversions(perm) == W.length[w]
        assert W.from_one_line(perm) == w
        for i in range(W.rank):
            swapped = list(perm)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            assert W.one_line(W.rmul[i][w]) == tuple(swapped)
            # left descent i+1 <-> values i+1, i+2 appear in decreasing order
            left = perm.index(i + 2) < perm.index(i + 1)
            assert (i in W.left_descents(w)) == left
            assert (i in W.right_descents(w)) == (perm[i] > perm[i + 1])
    assert sorted(W.one_line(w) for w in range(W.order)) == sorted(permutations(range(1, 5)))


def test_element_lookup():
    W = system("B2")
    assert W.index("e") == 0
    assert W.index("121") == W.from_word([0, 1, 0])
    assert W.index([1, 0]) == W.index("21")
    assert W.name(W.w0) == "1212"
    with pytest.raises(UnknownElement):
        W.index("33")
    attrs = W.attributes(W.index("12"))
    assert attrs.length == 2
    assert attrs.left_descents == frozenset({0}) and attrs.right_descents == frozenset({1})
    assert W.name(attrs.inverse) == "21"


def test_conjugacy_class_counts():
    assert len(system("A3").conjugacy_classes()) == 5
    assert len(system("A4").conjugacy_classes()) == 7
    assert len(system("B2").conjugacy_classes()) == 5
    assert len(system("B3").conjugacy_classes()) == 10


def test_malformed_and_infinite_cartan():
    with pytest.raises(MalformedCartan):
        CartanSpec(("1", "2"), ((2, 1), (-1, 2)))
    with pytest.raises(MalformedCartan):
        CartanSpec(("1", "2"), ((2, -1), (0, 2)))
    with pytest.raises(MalformedCartan):
        CartanSpec(("1",), ((3,),))
    with pytest.raises(InfiniteGroup):
        CartanSpec(("1", "2"), ((2, -2), (-2, 2)))
    with pytest.raises(InfiniteGroup):
        build_system(CartanSpec(("1", "2", "3"), ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))))
    with pytest.raises(MalformedCartan):
        preset("Z9")


def test_cartan_file_round_trip(tmp_path):
    spec = preset("B3")
    path = tmp_path / "b3.json"
    path.write_text(json.dumps(spec.to_json()))
    loaded = load_cartan(path)
    assert loaded.matrix == spec.matrix
    assert build_system(loaded).order == 48


def test_g2_is_supported():
    W = build_system(CartanSpec(("1", "2"), ((2, -1), (-3, 2))))
    assert W.order == 12
    assert W.length[W.w0] == 6
