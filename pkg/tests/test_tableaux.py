from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from conftest import system
from heckecells.errors import NotAPartition, NotComparable, ShapeMismatch, SizeMismatch
from heckecells.tableaux import (
    Partition, StandardTableau, apply_right, chain_witness, dominance_covers, dominance_leq, evacuation,
    knuth_class, partitions, permutation_length, render_diagram, rs, rs_inverse, standard_tableaux,
    tableau_descents,
)
from oracles import bumping_rs


def perms(n):
    return list(permutations(range(1, n + 1)))


def tab(rows):
    return StandardTableau(tuple(map(tuple, rows)))


def test_rs_examples():
    P, Q = rs((1, 2, 3, 4))
    assert P.to_json() == Q.to_json() == [[1, 2, 3, 4]]
    P, Q = rs((2, 1, 4, 3))
    assert P.to_json() == Q.to_json() == [[1, 3], [2, 4]]
    assert P.shape == (2, 2)


def test_rs_inverse_examples():
    col = tab([[1], [2], [3]])
    assert rs_inverse(col, col) == (3, 2, 1)
    row = tab([[1, 2, 3]])
    assert rs_inverse(row, row) == (1, 2, 3)
    with pytest.raises(ShapeMismatch):
        rs_inverse(row, col)


@pytest.mark.parametrize("n", range(1, 7))
def test_rs_is_a_bijection_and_matches_bumping_oracle(n):
    seen = set()
    for w in perms(n):
        P, Q = rs(w)
        assert (P.to_json(), Q.to_json()) == bumping_rs(w)
        assert P.shape == Q.shape
        assert rs_inverse(P, Q) == w
        seen.add((P.rows, Q.rows))
    expected = sum(len(standard_tableaux(lam)) ** 2 for lam in partitions(n))
    assert len(seen) == expected == len(perms(n))


@pytest.mark.parametrize("n", range(1, 7))
def test_rs_of_inverse_swaps_tableaux(n):
    for w in perms(n):
        inv = tuple(sorted(range(1, n + 1), key=lambda i: w[i - 1]))
        P, Q = rs(w)
        assert rs(inv) == (Q, P)


def test_longest_element_formulas_on_s5():
    for w in perms(5):
        P, Q = rs(w)
        ww0 = tuple(reversed(w))
        w0w = tuple(6 - a for a in w)
        assert rs(ww0) == (P.transpose(), evacuation(Q).transpose())
        assert rs(w0w) == (evacuation(P).transpose(), Q.transpose())
        assert rs(tuple(reversed(w0w))) == (evacuation(P), evacuation(Q))


def test_knuth_class_examples():
    assert knuth_class((1, 2, 3)) == {(1, 2, 3)}
    assert knuth_class((2, 1, 3)) == {(2, 1, 3), (2, 3, 1)}


def test_knuth_classes_are_p_fibers_in_s5():
    fibers = {}
    for w in perms(5):
        fibers.setdefault(rs(w)[0], set()).add(w)
    for w in perms(5):
        assert knuth_class(w) == fibers[rs(w)[0]]


def test_tableau_descents_examples():
    assert tableau_descents(tab([[1, 2, 3, 4]])) == set()
    assert tableau_descents(tab([[1], [2], [3], [4]])) == {1, 2, 3}
    assert tableau_descents(tab([[1, 3], [2, 4]])) == {1, 3}


def test_descent_lemma_on_s5():
    W = system("A4")
    for w in range(W.order):
        P, _ = rs(W.one_line(w))
        assert {s + 1 for s in W.left_descents(w)} == tableau_descents(P)


def test_evacuation_examples_and_involution():
    assert evacuation(tab([[1, 2, 3]])) == tab([[1, 2, 3]])
    assert evacuation(tab([[1, 2], [3]])) == tab([[1, 3], [2]])
    for n in range(1, 7):
        for lam in partitions(n):
            for T in standard_tableaux(lam):
                assert evacuation(evacuation(T)).rows == T.rows
                assert evacuation(T).shape == T.shape


def test_partitions_of_four_form_a_chain():
    ps = partitions(4)
    assert ps == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    for a, b in zip(ps, ps[1:]):
        assert dominance_leq(b, a) and not dominance_leq(a, b)
    assert dominance_leq((2, 2), (2, 2))


def prefix_leq(lam, mu):
    n = sum(lam)
    pad = lambda p: list(p) + [0] * (n - len(p))
    a, b = pad(lam), pad(mu)
    return all(sum(a[:k]) <= sum(b[:k]) for k in range(1, n + 1))


@pytest.mark.parametrize("n", range(1, 9))
def test_dominance_and_covers_against_prefix_sums(n):
    ps = partitions(n)
    for lam in ps:
        for mu in ps:
            assert dominance_leq(lam, mu) == prefix_leq(lam, mu)
            assert dominance_leq(lam, mu) == dominance_leq(mu.transpose(), lam.transpose())
        strictly_above = [mu for mu in ps if mu != lam and prefix_leq(lam, mu)]
        covers = [mu for mu in strictly_above
                  if not any(nu not in (lam, mu) and prefix_leq(lam, nu) and prefix_leq(nu, mu) for nu in ps)]
        assert sorted(dominance_covers(lam)) == sorted(covers)


def test_partition_and_tableau_validation():
    with pytest.raises(NotAPartition):
        Partition((1, 2))
    with pytest.raises(NotAPartition):
        Partition((2, -1))
    assert Partition((3, 1, 0)) == (3, 1)
    assert Partition((3, 1)).transpose() == (2, 1, 1)
    with pytest.raises(ValueError):
        tab([[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        tab([[2, 1]])
    with pytest.raises(SizeMismatch):
        dominance_leq((2,), (1, 1, 1))


def test_standard_tableaux_counts_by_hook_length():
    assert len(standard_tableaux((3, 2))) == 5
    assert len(standard_tableaux((3, 2, 1))) == 16
    assert len(standard_tableaux((4, 3, 2, 1))) == 768


def test_chain_witness_examples():
    assert chain_witness((3, 1), (2, 2)) == ((2, 1, 4, 3), 3, (3, 1))
    x, j, nu = chain_witness((2, 1), (1, 1, 1), n=3)
    assert nu == (2, 1)
    assert permutation_length(apply_right(x, j)) < permutation_length(x)
    with pytest.raises(NotComparable):
        chain_witness((2, 2), (2, 2))
    with pytest.raises(NotComparable):
        chain_witness((2, 2), (3, 1))
    with pytest.raises(SizeMismatch):
        chain_witness((3, 1), (2, 1))


def shape(w):
    return tuple(len(r) for r in bumping_rs(w)[0])


@pytest.mark.parametrize("n", range(2, 8))
def test_chain_witness_on_all_comparable_pairs(n):
    ps = partitions(n)
    for lam in ps:
        for mu in ps:
            if lam == mu or not prefix_leq(mu, lam):
                continue
            x, j, nu = chain_witness(lam, mu)
            xs = apply_right(x, j)
            assert shape(x) == mu and shape(xs) == nu
            assert x[j - 1] > x[j]
            assert prefix_leq(nu, lam) and prefix_leq(mu, nu) and nu != mu


def test_iterated_witnesses_reach_the_top():
    lam, mu, steps = (5,), (1, 1, 1, 1, 1), 0
    while mu != lam:
        _, _, mu = chain_witness(lam, mu)
        steps += 1
    assert steps <= len(partitions(5)) - 1


def test_render_diagram():
    assert render_diagram((3, 1)) == "[][][]\n[]"
    assert "1" in render_diagram(tab([[1, 2], [3]]))


@given(st.permutations(list(range(1, 9))))
def test_rs_round_trip_on_s8(w):
    w = tuple(w)
    P, Q = rs(w)
    assert rs_inverse(P, Q) == w
    assert (P.to_json(), Q.to_json()) == bumping_rs(w)
