import json

import pytest

from conftest import system, table
from heckecells.canonical import PRESET_TABLES, CanonicalBasisTable, builtin_table, load_table
from heckecells.errors import MalformedDocument, MissingTable, NonUnitriangular, UnknownElement, ValidationFailed
from heckecells.hecke import kl_basis
from heckecells.laurent import LaurentPoly, ONE


def test_b2_characteristic_two_table_validates():
    T = table("B2", 2)
    W = T.system
    assert T.validate().ok
    assert [W.name(w) for w in T.corrected] == ["121"]
    assert T.element("121").to_json() == {"e": "v + v^3", "1": "1 + v^2", "2": "v^2", "12": "v", "21": "v", "121": "1"}


def test_b2_characteristic_two_products():
    T = table("B2", 2)
    W = T.system
    prod = {W.name(z): str(c) for z, c in T.product("121", "121").items()}
    assert prod == {"1212": "v^-2 + 2 + v^2", "121": "2v^-1 + 2v"}
    # b_1 b_21 = b_121 + b_1, which is the single element pkl_121 when p = 2
    assert {W.name(z) for z in T.generator_product(0, W.index("21"), "left")} == {"121"}
    assert {W.name(z) for z in table("B2", 0).generator_product(0, W.index("21"), "left")} == {"121", "1"}


def test_pkl_basis_round_trip():
    T = table("B2", 2)
    W = T.system
    for w in range(W.order):
        assert T.to_pkl_basis(T.std(w)) == {w: ONE}


@pytest.mark.parametrize("name, p", [("A2", 0), ("A3", 0), ("B2", 0), ("B2", 2)])
def test_structure_coefficients_are_positive_and_self_dual(name, p):
    T = table(name, p)
    W = T.system
    for x in range(W.order):
        for y in range(W.order):
            for c in T.product(x, y).values():
                assert c.is_nonnegative() and c.is_self_dual()


def test_products_agree_with_standard_multiplication():
    T = table("B2", 2)
    W = T.system
    for x in range(W.order):
        for y in range(W.order):
            lhs = T.element(x) * T.element(y)
            rhs = {}
            for z, c in T.product(x, y).items():
                for u, f in T.std(z).items():
                    rhs[u] = rhs.get(u, LaurentPoly()) + f * c
            assert lhs.terms == {u: f for u, f in rhs.items() if f}


def test_characteristic_zero_table_is_the_kl_basis():
    T = table("A3", 0)
    kl = kl_basis(T.system)
    for w in range(T.system.order):
        assert T.std(w) == kl.expansion(w)
        assert T.in_kl(w) == {w: ONE}


def test_document_round_trip(tmp_path):
    W = system("B2")
    doc = table("B2", 2).to_json()
    path = tmp_path / "b2p2.json"
    path.write_text(json.dumps(doc))
    again = load_table(str(path), W)
    assert again.p == 2
    assert again.in_kl("121") == table("B2", 2).in_kl("121")
    assert load_table(json.dumps(doc), W).validate().ok


def test_malformed_documents():
    W = system("B2")
    with pytest.raises(MalformedDocument):
        load_table({"basis": {}}, W)
    with pytest.raises(MalformedDocument):
        load_table({"p": 4, "basis": {}}, W)
    with pytest.raises(MalformedDocument):
        load_table({"p": 2, "basis": {"121": {"121": "1", "1": "v +* 2"}}}, W)
    with pytest.raises(MalformedDocument):
        load_table({"system": "A3", "p": 2, "basis": {}}, W)
    with pytest.raises(MalformedDocument):
        load_table("{not json", W)
    with pytest.raises(UnknownElement):
        load_table({"p": 2, "basis": {"33": {"33": "1"}}}, W)


def test_non_unitriangular_documents():
    W = system("B2")
    with pytest.raises(NonUnitriangular):
        load_table({"p": 2, "basis": {"121": {"121": "2"}}}, W)
    with pytest.raises(NonUnitriangular):
        load_table({"p": 2, "basis": {"12": {"12": "1", "21": "1"}}}, W)


def test_validation_catches_each_defect():
    W = system("B2")
    not_dual = load_table({"p": 2, "basis": {"121": {"121": "1", "1": "v"}}}, W).validate()
    assert not not_dual["self_duality"].passed
    negative = load_table({"p": 2, "basis": {"121": {"121": "1", "1": "-1"}}}, W).validate()
    assert not negative["kl_multiplicities_nonnegative"].passed
    asymmetric = load_table({"p": 2, "basis": {"12": {"12": "1", "1": "1"}}}, W).validate()
    assert not asymmetric["iota_compatibility"].passed
    generator = load_table({"p": 2, "basis": {"1": {"1": "1", "e": "1"}}}, W).validate()
    assert not generator["generators_are_kl"].passed


def test_validation_catches_negative_structure_coefficients():
    # the B2 correction transplanted to S3 is not a p-canonical basis
    W = system("A2")
    T = load_table({"p": 2, "basis": {"121": {"121": "1", "1": "1"}}}, W)
    report = T.validate()
    assert not report["structure_coefficients"].passed
    assert report["structure_coefficients"].witnesses
    with pytest.raises(ValidationFailed):
        T.ensure_validated()
    with pytest.raises(ValidationFailed):
        T.product(1, 1)


def test_unvalidated_tables_refuse_products():
    T = CanonicalBasisTable(system("A2"), 0)
    with pytest.raises(ValidationFailed):
        T.generator_product(0, 0)
    T.validate()
    assert T.generator_product(0, 0) == {1: ONE}


def test_builtin_tables():
    assert ("B2", 2) in PRESET_TABLES
    with pytest.raises(MissingTable):
        builtin_table(system("A3"), 3)
    assert builtin_table(system("A3"), 0).p == 0


def test_synthetic_characteristic_two_document_for_type_a():
    # an explicit all-KL table labelled p = 2: exercises the ingestion path only
    W = system("A3")
    doc = {"system": "A3", "p": 2, "provenance": "synthetic", "basis": {W.name(w): {W.name(w): "1"} for w in range(W.order)}}
    T = load_table(doc, W)
    assert T.p == 2 and T.corrected == []
    assert T.validate().ok
