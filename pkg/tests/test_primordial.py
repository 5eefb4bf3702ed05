import itertools

import pytest
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from tsgreen import primordial
from tsgreen.classifiers import is_k_dress, is_k_elementary, is_q_dress
from tsgreen.errors import BadAction, CatalogError, HypothesisViolation, TheoremViolation
from tsgreen.fields import parse_field
from tsgreen.groups import parse_group, quotient
from tsgreen.linalg import intmat
from tsgreen.primordial import (default_catalog, induction_lattice, is_primordial, parse_catalog,
                                parse_certificate_params, prop35_certificate, verify_theorem)

GF2, GF3, GF4 = parse_field("GF(2)"), parse_field("GF(3)"), parse_field("GF(4)")


def _sympy_contains(M, v):
    A = sympy.Matrix(M)
    return hermite_normal_form(A) == hermite_normal_form(A.row_join(sympy.Matrix(v)))


def _bounded_witness(L, e0, bound=1, support=3):
    """Sparse bounded search for an integer combination of lattice columns equal to e0."""
    cols = [L.column(j) for j in range(L.ncols)]
    for s in range(1, support + 1):
        for idx in itertools.combinations(range(len(cols)), s):
            for coeffs in itertools.product([c for c in range(-bound, bound + 1) if c], repeat=s):
                v = [sum(c * cols[j][i] for c, j in zip(coeffs, idx)) for i in range(len(e0))]
                if v == e0:
                    return dict(zip(idx, coeffs))
    return None


def test_lattice_examples():
    L = induction_lattice(parse_group("C1"), GF2)
    assert L.ncols == 0 and L.matrix == [[]]
    assert is_primordial(parse_group("C1"), GF2).is_primordial
    L = induction_lattice(parse_group("C2"), GF2)
    assert [L.column(j) for j in range(L.ncols)] == [[0, 1]]
    L = induction_lattice(parse_group("S3"), GF2)
    cols = [L.column(j) for j in range(L.ncols)]
    for want in ([0, 1, 0], [0, 0, 2], [1, 0, 1]):
        assert want in cols
    assert all(x >= 0 for c in cols for x in c)


@pytest.mark.parametrize("spec,k,expected", [("C2", "GF(2)", True), ("S3", "GF(2)", True), ("S3", "GF(4)", False),
                                             ("D7", "GF(2)", False), ("C9", "GF(3)", True),
                                             ("C13:C4@5", "GF(3)", False), ("C13:C4@5", "GF(2)", True),
                                             ("D4", "GF(2)", True), ("C6", "GF(2)", True), ("C6", "GF(5)", True),
                                             ("D5", "GF(2)", True), ("A4", "GF(3)", False)])
def test_verdicts_against_independent_oracles(spec, k, expected):
    G, F = parse_group(spec), parse_field(k)
    L = induction_lattice(G, F)
    v = is_primordial(G, F, L)
    assert v.is_primordial == expected
    assert v.identity_in_T == v.lattice_full == (not expected)
    e0 = L.basis.unit()
    if L.ncols:
        assert _sympy_contains(L.matrix, e0) == (not expected)
    if not expected:
        assert v.witness is not None and intmat.matvec(L.matrix, v.witness) == e0
        assert _bounded_witness(L, e0) is not None


def test_s3_is_integrally_but_not_rationally_primordial():
    L = induction_lattice(parse_group("S3"), GF2)
    assert sympy.Matrix(L.matrix).rank() == len(L.basis)       # Q-span is everything
    assert is_primordial(parse_group("S3"), GF2).is_primordial  # Z-span misses [k]


def test_witness_json_lists_nonzero_terms():
    out = is_primordial(parse_group("D7"), GF2).to_json()
    assert out["is_primordial"] is False
    assert all(t["coefficient"] != 0 for t in out["witness"])


SMALL_CATALOG = [(g, f) for g, f in default_catalog() if len(parse_group(g)) <= 24]


def test_witness_validity_on_small_catalog():
    for spec, fname in SMALL_CATALOG:
        G, F = parse_group(spec), parse_field(fname)
        L = induction_lattice(G, F)
        v = is_primordial(G, F, L)
        if not v.is_primordial:
            assert intmat.matvec(L.matrix, v.witness) == L.basis.unit()


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("S4", "GF(2)"), ("A4", "GF(2)"), ("D4", "GF(2)"),
                                    ("C7:C3@2", "GF(2)"), ("C12", "GF(2)"), ("C13:C4@5", "GF(2)")])
def test_primordiality_closed_under_subgroups_and_quotients(spec, k):
    G, F = parse_group(spec), parse_field(k)
    assert is_primordial(G, F).is_primordial
    for c in G.subgroup_classes():
        assert is_primordial(c.rep.group, F).is_primordial
    for N in G.normal_subgroups():
        assert is_primordial(quotient(G, N).group, F).is_primordial


def test_chain_e_k_prim_dress():
    for spec, fname in SMALL_CATALOG:
        G, F = parse_group(spec), parse_field(fname)
        prim = is_primordial(G, F).is_primordial
        if is_k_elementary(G, F):
            assert prim
        if prim:
            primes = {p for p in range(2, len(G) + 1) if len(G) % p == 0 and sympy.isprime(p)} | {F.p}
            assert any(is_q_dress(G, q, F.p) for q in primes)


def test_certificates():
    c = prop35_certificate(7, 2, 1, 6, GF2)
    assert c.ok and c.perm_dim == 7 and c.trivial_multiplicity == 1
    assert [(s.dim, s.multiplicity, s.subgroup_order) for s in c.covers] == [(6, 1, 7)]
    assert c.reexpanded == c.unit
    c = prop35_certificate(13, 2, 2, 5, GF3)
    assert c.ok and c.perm_dim == 13 and 1 + sum(s.dim * s.multiplicity for s in c.covers) == 13


def test_certificate_hypotheses():
    with pytest.raises(HypothesisViolation):
        prop35_certificate(3, 2, 1, 2, GF2)       # 2 ∈ I_3(GF(2))
    with pytest.raises(HypothesisViolation):
        prop35_certificate(4, 2, 1, 3, GF3)
    with pytest.raises(BadAction):
        prop35_certificate(7, 2, 1, 3, GF2)       # 3 has order 6 mod 7


def test_parse_certificate_params():
    assert parse_certificate_params("7:2@6") == (7, 2, 1, 6)
    assert parse_certificate_params("13:2^2@5") == (13, 2, 2, 5)
    assert parse_certificate_params("13:4@5") == (13, 2, 2, 5)
    with pytest.raises(HypothesisViolation):
        parse_certificate_params("13:6@5")
    with pytest.raises(HypothesisViolation):
        parse_certificate_params("seven")


def test_verify_theorem_examples_and_parallel_order():
    cat = [("D7", "GF(2)"), ("C9", "GF(3)"), ("S3", "GF(4)"), ("S3", "GF(2)"), ("C1", "GF(2)")]
    serial = verify_theorem(cat, parallelism=1)
    par = verify_theorem(cat, parallelism=2)
    assert serial.ok and [r.to_json() for r in serial.rows] == [r.to_json() for r in par.rows]
    d7 = serial.rows[0]
    assert (d7.k_dress, d7.primordial) == (False, False)
    c9 = serial.rows[1]
    assert (c9.k_dress, c9.primordial) == (True, True)


def test_theorem_violation_is_raised(monkeypatch):
    monkeypatch.setattr(primordial.classifiers, "is_k_dress", lambda G, k: (False, None))
    with pytest.raises(TheoremViolation):
        verify_theorem([("C2", "GF(2)")])
    report = verify_theorem([("C2", "GF(2)")], raise_on_violation=False)
    assert not report.ok and len(report.violations) == 1


def test_catalog_parsing():
    assert parse_catalog("# c\nS3 GF(2)\n\nD7 GF(2)  # trailing\n") == [("S3", "GF(2)"), ("D7", "GF(2)")]
    with pytest.raises(CatalogError):
        parse_catalog("S3\n")
    with pytest.raises(CatalogError):
        primordial.read_catalog("/nonexistent/catalog.txt")
    assert len(default_catalog()) == 124
    assert len(default_catalog("order16")) == 80
