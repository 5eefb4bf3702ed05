import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tsgreen.classifiers import is_r_hypoelementary
from tsgreen.decompose import decompose, iso
from tsgreen.errors import NotTrivialSource
from tsgreen.fields import parse_field
from tsgreen.greenring import apply, classify_in_basis, induction_matrix, restriction_matrix, ts_basis
from tsgreen.groups import parse_group
from tsgreen.linalg import intmat
from tsgreen.modules import Representation, induce, perm_module, restrict, tensor, trivial_module

GF2, GF3, GF4 = parse_field("GF(2)"), parse_field("GF(3)"), parse_field("GF(4)")


def _sub(G, order, which=0):
    return [c.rep for c in G.subgroup_classes() if c.rep.order() == order][which]


@pytest.mark.parametrize("spec,k,dims", [("C2", "GF(2)", [1, 2]), ("C3", "GF(4)", [1, 1, 1]),
                                         ("C3", "GF(2)", [1, 2]), ("S3", "GF(2)", [1, 2, 2]),
                                         ("C1", "GF(3)", [1]), ("C9", "GF(3)", [1, 3, 9]),
                                         ("A4", "GF(2)", [1, 2, 4, 6, 8]), ("S4", "GF(3)", None),
                                         ("C13:C4@5", "GF(3)", None)])
def test_basis_examples(spec, k, dims):
    B = ts_basis(parse_group(spec), parse_field(k))
    if dims is not None:
        assert B.dims == dims
    assert B.dims[0] == 1 and B.elements[0].module.tag.startswith("triv")
    assert all(np.array_equal(g, [[1]]) for g in B.elements[0].module.gens)


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("S4", "GF(2)"), ("D4", "GF(2)"), ("A4", "GF(3)"),
                                    ("C7:C3@2", "GF(2)"), ("C12", "GF(2)")])
def test_basis_invariants(spec, k):
    G, F = parse_group(spec), parse_field(k)
    B = ts_basis(G, F)
    mods = [b.module for b in B.elements]
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            assert not (mods[i].dim == mods[j].dim and iso(mods[i], mods[j]))
    # completeness: every permutation module (not just those on p-subgroups) classifies exactly
    for c in G.subgroup_classes():
        P = perm_module(G, c.rep, F)
        v = classify_in_basis(P, B)
        assert sum(a * d for a, d in zip(v, B.dims)) == P.dim
        assert all(a >= 0 for a in v)


def test_basis_is_cached():
    G = parse_group("S3")
    assert ts_basis(G, GF2) is ts_basis(G, GF2)


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("D4", "GF(2)"), ("A4", "GF(2)"), ("S4", "GF(3)"),
                                    ("C6", "GF(9)"), ("D5", "GF(4)")])
def test_pairing_and_decomposition_routes_agree(spec, k):
    G, F = parse_group(spec), parse_field(k)
    B = ts_basis(G, F)
    for c in G.subgroup_classes():
        P = perm_module(G, c.rep, F)
        assert classify_in_basis(P, B, "pairing") == classify_in_basis(P, B, "decompose")
    for i in range(len(B)):
        for j in range(i, len(B)):
            T = tensor(B[i].module, B[j].module)
            if T.dim <= 64:
                assert classify_in_basis(T, B, "pairing") == classify_in_basis(T, B, "decompose")


def test_s3_induction_columns():
    G = parse_group("S3")
    B = ts_basis(G, GF2)
    got = {}
    for order in (1, 2, 3):
        S = _sub(G, order)
        got[order] = induction_matrix(S, ts_basis(S.group, GF2), B).T.tolist()
    assert got[1] == [[0, 1, 2]]
    assert got[2] == [[1, 0, 1], [0, 1, 2]]
    assert got[3] == [[0, 1, 0], [0, 0, 2]]


def test_classify_examples():
    G = parse_group("S3")
    B = ts_basis(G, GF2)
    assert classify_in_basis(trivial_module(G, GF2), B) == [1, 0, 0]
    v = classify_in_basis(perm_module(G, _sub(G, 2), GF2), B)
    assert sum(a * d for a, d in zip(v, B.dims)) == 3 and v[0] == 1


def test_not_trivial_source():
    G = parse_group("C3")
    J2 = Representation(G, GF3, [np.array([[1, 1], [0, 1]])])
    with pytest.raises(NotTrivialSource):
        classify_in_basis(J2, ts_basis(G, GF3))


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("D4", "GF(2)"), ("A4", "GF(2)"), ("S4", "GF(2)"),
                                    ("C13:C4@5", "GF(3)")])
def test_induction_restriction_matrix_laws(spec, k):
    G, F = parse_group(spec), parse_field(k)
    B = ts_basis(G, F)
    assert np.array_equal(restriction_matrix(G.whole(), B, ts_basis(G.whole().group, F)), np.eye(len(B)))
    for c in G.subgroup_classes():
        S = c.rep
        BK = ts_basis(S.group, F)
        I = induction_matrix(S, BK, B)
        R = restriction_matrix(S, B, BK)
        assert (I >= 0).all() and (R >= 0).all()
        index = len(G) // S.order()
        assert I[:, 0].tolist() == classify_in_basis(perm_module(G, S, F), B)
        assert (np.array(B.dims) @ I).tolist() == [index * d for d in BK.dims]
        assert (np.array(BK.dims) @ R).tolist() == B.dims


def test_transitivity():
    G, F = parse_group("S4"), GF2
    BG = ts_basis(G, F)
    for c in G.subgroup_classes():
        K = c.rep
        BK = ts_basis(K.group, F)
        IKG = induction_matrix(K, BK, BG)
        for cj in K.group.subgroup_classes():
            J = cj.rep
            BJ = ts_basis(J.group, F)
            IJK = induction_matrix(J, BJ, BK)
            JG = G.subgroup_from_perms([K.group.elements[e] for e in J.elems])
            IJG = induction_matrix(JG, BJ, BG)
            assert np.array_equal(IKG @ IJK, IJG)


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("D4", "GF(2)"), ("A4", "GF(2)"), ("C6", "GF(3)")])
def test_mult_table_is_commutative_associative_unital(spec, k):
    G, F = parse_group(spec), parse_field(k)
    B = ts_basis(G, F)
    c = B.mult_table()
    n = len(B)
    assert (c >= 0).all()
    assert np.array_equal(c, c.transpose(1, 0, 2))
    for i in range(n):
        assert np.array_equal(c[0, i], np.eye(n, dtype=np.int64)[i])
        for j in range(n):
            assert int(np.dot(c[i, j], B.dims)) == B.dims[i] * B.dims[j]
    # associativity on basis triples
    lhs = np.einsum("ijm,mkl->ijkl", c, c)
    rhs = np.einsum("jkm,iml->ijkl", c, c)
    assert np.array_equal(lhs, rhs)


def _vectors(n):
    return st.lists(st.integers(-5, 5), min_size=n, max_size=n)


@pytest.mark.parametrize("spec,k,order", [("S3", "GF(2)", 2), ("S3", "GF(2)", 3), ("D4", "GF(2)", 4),
                                          ("A4", "GF(2)", 3), ("S4", "GF(3)", 6)])
def test_frobenius_reciprocity(spec, k, order):
    G, F = parse_group(spec), parse_field(k)
    S = _sub(G, order)
    BG, BK = ts_basis(G, F), ts_basis(S.group, F)
    I = induction_matrix(S, BK, BG)
    R = restriction_matrix(S, BG, BK)

    @settings(max_examples=40)
    @given(_vectors(len(BK)), _vectors(len(BG)))
    def check(m, n):
        left = apply(I, BK.multiply(m, apply(R, n)))
        right = BG.multiply(apply(I, m), n)
        assert left == right
        # restriction is a ring map
        assert apply(R, BG.multiply(n, n)) == BK.multiply(apply(R, n), apply(R, n))

    check()


@pytest.mark.parametrize("spec,k", [("S3", "GF(2)"), ("D4", "GF(2)"), ("A4", "GF(2)"), ("S4", "GF(2)"),
                                    ("S4", "GF(3)"), ("D7", "GF(2)"), ("C13:C4@5", "GF(3)")])
def test_restrictions_to_p_hypoelementary_subgroups_are_jointly_injective(spec, k):
    G, F = parse_group(spec), parse_field(k)
    B = ts_basis(G, F)
    blocks = []
    for c in G.subgroup_classes():
        if is_r_hypoelementary(c.rep.group, F.p):
            blocks.append(restriction_matrix(c.rep, B, ts_basis(c.rep.group, F)))
    stacked = np.concatenate(blocks, axis=0).tolist()
    assert intmat.rank(stacked) == len(B)
    assert sympy.Matrix(stacked).rank() == len(B)


def test_module_level_frobenius():
    """Ind(M ⊗ Res N) ≅ Ind(M) ⊗ N as class vectors."""
    G, F = parse_group("S3"), GF2
    S = _sub(G, 3)
    BG, BK = ts_basis(G, F), ts_basis(S.group, F)
    for M in BK.elements:
        for N in BG.elements:
            a = classify_in_basis(induce(tensor(M.module, restrict(N.module, S)), S), BG)
            b = classify_in_basis(tensor(induce(M.module, S), N.module), BG)
            assert a == b
