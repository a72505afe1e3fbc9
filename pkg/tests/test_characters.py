from math import factorial

import pytest

from conftest import system
from heckecells.characters import irreducible_characters, mn_character, partition_label
from heckecells.errors import UnsupportedType
from heckecells.tableaux import partitions, standard_tableaux


def hook_dimension(lam):
    n = sum(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])]
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return factorial(n) // hooks


def test_s3_and_s4_dimensions():
    assert sorted(irreducible_characters(system("A2")).dim(n) for n in irreducible_characters(system("A2")).names) == [1, 1, 2]
    T = irreducible_characters(system("A3"))
    assert sorted(T.dim(n) for n in T.names) == [1, 1, 2, 3, 3]


@pytest.mark.parametrize("n", range(2, 7))
def test_type_a_tables(n):
    W = system(f"A{n - 1}")
    T = irreducible_characters(W)
    assert T.is_orthonormal()
    assert len(T.names) == len(partitions(n))
    for lam in partitions(n):
        name = partition_label(lam)
        assert T.dim(name) == hook_dimension(lam) == len(standard_tableaux(lam))


def test_murnaghan_nakayama_values():
    assert mn_character((2, 1), (3,)) == -1
    assert mn_character((2, 1), (2, 1)) == 0
    assert mn_character((3, 1), (2, 2)) == -1
    assert mn_character((2, 2), (2, 2)) == 2
    assert mn_character((1, 1, 1, 1), (4,)) == -1


def test_sign_character_is_the_one_column_partition():
    W = system("A3")
    T = irreducible_characters(W)
    assert T.element_values("(1,1,1,1)") == [(-1) ** W.length[w] for w in range(W.order)]
    assert T.element_values("(4)") == [1] * W.order


def test_b2_table():
    W = system("B2")
    T = irreducible_characters(W)
    assert set(T.names) == {"triv", "sgn", "sgn_s", "sgn_t", "geom"}
    assert T.dim("geom") == 2 and T.is_orthonormal()
    s, t = W.index("1"), W.index("2")
    assert (T.value("sgn_s", s), T.value("sgn_s", t)) == (1, -1)
    assert (T.value("sgn_t", s), T.value("sgn_t", t)) == (-1, 1)
    regular = [W.order if w == 0 else 0 for w in range(W.order)]
    assert T.decompose(regular) == {"triv": 1, "sgn": 1, "sgn_s": 1, "sgn_t": 1, "geom": 2}


def test_unsupported_types():
    with pytest.raises(UnsupportedType):
        irreducible_characters(system("B3"))
