"""Krull-Schmidt decomposition with certified indecomposable summands.

Splitting: for an endomorphism φ whose minimal polynomial has two coprime
factors g·h, Fitting's lemma gives M = ker g(φ)^N ⊕ im g(φ)^N as G-modules.

Certification: a summand V is indecomposable iff E = End(V) is local.  We
exhibit a nilpotent two-sided ideal J of E with E/J a field:
  * E/J = k: J = span{x - χ(x)} where χ(x) is the unique eigenvalue of x;
  * otherwise J is the Jacobson radical from the Cohen-Ivanyos-Wales trace
    algorithm and E/J = k[z̄] for an element z whose minimal polynomial is a
    power of an irreducible of degree dim E/J.
Both checks (ideal, nilpotent) are verified directly, so the certificate does
not rely on the radical algorithm being right.

Multiplicities: for V local with residue field of degree f, the multiplicity
of V in T is rank(λ(α∘β))/f over bases α of Hom(T,V), β of Hom(V,T), where λ
is a functional on End(V) vanishing on J with λ(1) = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import get_config
from .errors import DecompositionFailed, NotIndecomposable
from .fields import FieldSpec, Poly
from .groups import Subgroup
from .linalg import ff
from .modules import Representation, end_space, hom_space, perm_module, restrict, transversal

# -- small helpers ---------------------------------------------------------------


def _flat(E: np.ndarray) -> np.ndarray:
    return E.reshape(E.shape[0], -1)


def _combine(F: FieldSpec, coeffs: np.ndarray, E: np.ndarray) -> np.ndarray:
    w = E.shape[1]
    return F.matmul(coeffs[None, :], _flat(E))[0].reshape(w, w)


def minimal_polynomial(F: FieldSpec, A: np.ndarray) -> list[int]:
    """Monic minimal polynomial of a square matrix (codes, low -> high)."""
    n = A.shape[0]
    rows: list[np.ndarray] = []
    pivs: list[int] = []
    combos: list[np.ndarray] = []
    P = F.identity(n)
    for k in range(n + 1):
        v = P.reshape(-1).copy()
        c = np.zeros(n + 1, dtype=np.int64)
        c[k] = 1
        for row, piv, com in zip(rows, pivs, combos):
            t = int(v[piv])
            if t:
                v = F.sub(v, F.mul(row, t))
                c = F.sub(c, F.mul(com, t))
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return Poly.monic(F, [int(x) for x in c[:k + 1]])
        piv = int(nz[0])
        inv = int(F.inv(int(v[piv])))
        rows.append(F.mul(v, inv))
        pivs.append(piv)
        combos.append(F.mul(c, inv))
        P = F.matmul(A, P)
    raise AssertionError("minimal polynomial degree exceeds matrix size")  # pragma: no cover


def _stable_power(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """A^N with N large enough that rank has stabilised (Fitting power)."""
    P = A
    r = ff.rank(F, P)
    while True:
        Q = F.matmul(P, P)
        r2 = ff.rank(F, Q)
        if r2 == r:
            return Q
        P, r = Q, r2


def _column_basis(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    return ff.row_basis(F, A.T).T


# -- local rings -----------------------------------------------------------------


@dataclass
class LocalData:
    """Certificate that End(V) is local, plus the functional used for pairings."""

    f: int                    # dim_k End/J
    end_dim: int
    j_dim: int
    rows: np.ndarray          # functional λ(x) = Σ coeffs[i] * x[rows[i], cols[i]]
    cols: np.ndarray
    coeffs: np.ndarray
    method: str

    def to_json(self) -> dict:
        return {"end_dim": self.end_dim, "radical_dim": self.j_dim, "residue_degree": self.f,
                "method": self.method}


class _Echelon:
    """A subspace of matrices in RREF, for membership and coordinates."""

    def __init__(self, F: FieldSpec, mats: np.ndarray, w: int):
        self.F = F
        self.w = w
        if len(mats):
            R, piv = ff.rref(F, _flat(mats))
            self.R = R[: len(piv)]
            self.piv = piv
        else:
            self.R = np.zeros((0, w * w), dtype=np.int64)
            self.piv = []

    @property
    def dim(self) -> int:
        return len(self.piv)

    def contains(self, mats: np.ndarray) -> bool:
        if len(mats) == 0:
            return True
        red = ff.reduce_against(self.F, self.R, self.piv, _flat(mats))
        return not red.any()

    def matrices(self) -> np.ndarray:
        return self.R.reshape(-1, self.w, self.w)


def _is_nilpotent_ideal(F: FieldSpec, E: np.ndarray, J: np.ndarray) -> bool:
    w = E.shape[1]
    if len(J) == 0:
        return True
    Jech = _Echelon(F, J, w)
    Jm = Jech.matrices()
    left = F.matmul(E[:, None], Jm[None]).reshape(-1, w, w)
    right = F.matmul(Jm[:, None], E[None]).reshape(-1, w, w)
    if not (Jech.contains(left) and Jech.contains(right)):
        return False
    P = Jm
    for _ in range(w + 1):
        prods = F.matmul(P[:, None], Jm[None]).reshape(-1, w, w)
        nxt = _Echelon(F, prods, w)
        if nxt.dim == 0:
            return True
        if nxt.dim >= len(P):
            return False
        P = nxt.matrices()
    return False


def _functional(F: FieldSpec, Eech: _Echelon, J: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """λ on E (RREF coordinates) with λ(J) = 0 and λ(1) = 1."""
    w = Eech.w
    piv = np.array(Eech.piv)
    coordsJ = _flat(J)[:, piv] if len(J) else np.zeros((0, len(piv)), dtype=np.int64)
    coordsI = F.identity(w).reshape(-1)[piv][None]
    A = np.concatenate([coordsJ, coordsI], axis=0)
    b = np.zeros(A.shape[0], dtype=np.int64)
    b[-1] = 1
    c, _ = ff.solve(F, A, b)
    if c is None:
        raise DecompositionFailed("identity lies in the claimed radical")
    nz = np.flatnonzero(c)
    r, s = np.divmod(piv[nz], w)
    return r, s, c[nz]


def _radical_ciw(F: FieldSpec, E: np.ndarray) -> np.ndarray:
    """Jacobson radical of the algebra spanned by E (Cohen-Ivanyos-Wales).

    The GF(q)-algebra is viewed over GF(p) inside M_{wd}(GF(p)); with
    g_i(x) = (Tr(x̃^{p^i}) mod p^{i+1}) / p^i for an integer lift x̃,
    I_i = {a in I_{i-1} : g_i(ab) = 0 for all b} and Rad = I_l, l = ⌊log_p(wd)⌋.
    """
    p, d = F.p, F.d
    e, w, _ = E.shape
    n = w * d
    # d x d matrix over GF(p) of multiplication by each code
    mats = np.zeros((F.q, d, d), dtype=np.int64)
    basis_codes = [F.power(F.x, j) if d > 1 else 1 for j in range(d)]
    for c in range(F.q):
        for j, bj in enumerate(basis_codes):
            mats[c, :, j] = F.digits[int(F.mul(c, bj))]

    def to_prime(A):
        B = mats[A]                                  # (w, w, d, d)
        return B.transpose(0, 2, 1, 3).reshape(n, n)

    A = np.stack([to_prime(F.mul(E[i], bj)) for i in range(e) for bj in basis_codes]).astype(np.float64)
    l = 0
    while p ** (l + 1) <= n:
        l += 1
    cur = A.copy()                                   # basis of I_{i-1} over GF(p)
    for i in range(l + 1):
        if len(cur) == 0:
            break
        mod = p ** (i + 1)
        g = np.empty((len(cur), len(A)), dtype=np.int64)
        for j, a in enumerate(cur):
            if i == 0:
                tr = np.einsum("ij,bji->b", a, A)          # Tr(a b) without forming ab
            else:
                X = _power_mod(np.matmul(a[None], A) % p, p ** i, mod)   # lifts in [0, p)
                tr = np.trace(X, axis1=1, axis2=2)
            tr = np.rint(tr).astype(np.int64) % mod
            if np.any(tr % (p ** i)):
                raise DecompositionFailed("trace power not divisible in radical computation")
            g[j] = tr // p ** i % p
        # a = Σ c_j cur_j lies in I_i iff Σ_j c_j g[j, b] = 0 for all b
        K = _prime_nullspace(p, g.T)
        cur = (np.tensordot(K.T.astype(np.float64), cur, axes=1) % p) if K.shape[1] else cur[:0]
    cur = np.rint(cur).astype(np.int64)
    # back to GF(q): an entry's code is read off the first column of its block
    if len(cur) == 0:
        return np.zeros((0, w, w), dtype=np.int64)
    blocks = cur.reshape(len(cur), w, d, w, d)[:, :, :, :, 0]    # (k, w, d(row digit), w)
    digits = blocks.transpose(0, 1, 3, 2)                        # (k, w, w, d)
    back = F.encode(digits.reshape(-1, d)).reshape(len(cur), w, w)
    rows = ff.row_basis(F, _flat(back))
    return rows.reshape(-1, w, w)


def _power_mod(X: np.ndarray, e: int, mod: int) -> np.ndarray:
    """Stacked integer matrix power X^e reduced mod ``mod`` (float64 exact here)."""
    out = None
    while e:
        if e & 1:
            out = X if out is None else np.matmul(out, X) % mod
        e >>= 1
        if e:
            X = np.matmul(X, X) % mod
    return out


def _prime_nullspace(p: int, A: np.ndarray) -> np.ndarray:
    from .fields import FieldSpec as _FS
    return ff.nullspace(_FS(p, 1), A % p)


# -- analysis of an endomorphism ring -------------------------------------------


@dataclass
class _Split:
    phi: np.ndarray
    g: list[int]


def _candidates(F: FieldSpec, E: np.ndarray, rng: np.random.Generator, budget: int):
    e = len(E)
    for i in range(e):
        yield E[i]
    for i in range(e - 1):
        yield F.add(E[i], E[i + 1])
    for _ in range(budget):
        yield _combine(F, F.random(rng, e), E)


def analyze_endomorphisms(F: FieldSpec, E: np.ndarray, rng: np.random.Generator,
                          budget: int = 48) -> _Split | LocalData:
    """Either a splitting endomorphism or a locality certificate."""
    w = E.shape[1]
    Eech = _Echelon(F, E, w)
    basis = Eech.matrices()
    e = len(basis)
    if e == 1:
        r, s, c = _functional(F, Eech, np.zeros((0, w, w), dtype=np.int64))
        return LocalData(1, 1, 0, r, s, c, "scalar")
    eig: list[int | None] = []
    degrees: set[int] = set()
    radical = None
    for idx, phi in enumerate(_candidates(F, basis, rng, budget)):
        mu = minimal_polynomial(F, phi)
        g = Poly.coprime_factor(F, mu, rng)
        if g is not None:
            return _Split(phi, g)
        pi = _irreducible_part(F, mu)
        deg = len(pi) - 1
        degrees.add(deg)
        if deg == e and len(mu) == len(pi):
            # k[φ] is a field of dimension dim E
            return _field_certificate(F, Eech, "field")
        if idx < e:
            eig.append(int(F.neg(pi[0])) if deg == 1 else None)
        if idx == e - 1 and all(v is not None for v in eig):
            # candidate E/J = k with J = span{x - χ(x)}
            J = np.stack([F.sub(basis[i], F.mul(F.identity(w), eig[i])) for i in range(e)])
            J = ff.row_basis(F, _flat(J)).reshape(-1, w, w)
            if len(J) == e - 1 and _is_nilpotent_ideal(F, basis, J):
                r, s, c = _functional(F, Eech, J)
                return LocalData(1, e, e - 1, r, s, c, "eigenvalue")
        if idx == e + 7:
            radical = _radical_ciw(F, basis)
            if not _is_nilpotent_ideal(F, basis, radical):
                raise DecompositionFailed("radical candidate is not a nilpotent ideal", end_dim=e)
        if radical is not None:
            f = e - len(radical)
            # E/J = k[z̄] once some z has min poly π^s with deg π = dim E/J
            if f in degrees:
                r, s, c = _functional(F, Eech, radical)
                return LocalData(f, e, len(radical), r, s, c, "radical")
    raise DecompositionFailed(f"no split and no locality certificate after {e + budget} candidates",
                              end_dim=e, dim=w)


def _field_certificate(F, Eech, method):
    e = Eech.dim
    r, s, c = _functional(F, Eech, np.zeros((0, Eech.w, Eech.w), dtype=np.int64))
    return LocalData(e, e, 0, r, s, c, method)


def _irreducible_part(F: FieldSpec, mu: list[int]) -> list[int]:
    """For mu = π^s (already known primary) return π = mu / gcd(mu, mu')."""
    deriv = Poly.trim([F.mul(mu[i], i % F.p).item() for i in range(1, len(mu))])
    if not deriv:
        # mu is a p-th power: recurse on the p-th root
        root = [mu[i] for i in range(0, len(mu), F.p)]
        root = [int(F.power(c, F.q // F.p)) for c in root]
        return _irreducible_part(F, root)
    g = Poly.gcd(F, mu, deriv)
    return Poly.monic(F, Poly.divmod(F, mu, g)[0])


# -- decomposition ---------------------------------------------------------------


@dataclass
class Summand:
    module: Representation
    local: LocalData
    W: np.ndarray        # columns: basis of the summand in parent coordinates
    Winv: np.ndarray     # rows: projection onto the summand


@dataclass
class Decomposition:
    parent: Representation
    pieces: list[Summand]
    summands: list[tuple[Representation, int]]
    classes: list[list[int]] = field(default_factory=list)   # piece indices per iso class
    change_of_basis: np.ndarray | None = None

    def dims(self) -> list[int]:
        return [m.dim for m, _ in self.summands]

    def multiplicities(self) -> list[int]:
        return [k for _, k in self.summands]

    def local_data(self, i: int) -> LocalData:
        return self.pieces[self.classes[i][0]].local


def _split_off(F, M, E, W, Winv, rng, budget, out):
    res = analyze_endomorphisms(F, E, rng, budget)
    if isinstance(res, LocalData):
        out.append((W, Winv, E, res))
        return
    psi = _stable_power(F, Poly.eval_matrix(F, res.g, res.phi))
    K = ff.nullspace(F, psi)
    Im = _column_basis(F, psi)
    if K.shape[1] == 0 or Im.shape[1] == 0:
        raise DecompositionFailed("Fitting split produced an empty piece")  # pragma: no cover
    B = np.concatenate([K, Im], axis=1)
    Binv = ff.inverse(F, B)
    w1 = K.shape[1]
    for cols, rows in ((B[:, :w1], Binv[:w1]), (B[:, w1:], Binv[w1:])):
        Ei = F.matmul(rows[None], F.matmul(E, cols[None]))
        Ei = ff.row_basis(F, _flat(Ei)).reshape(-1, cols.shape[1], cols.shape[1])
        _split_off(F, M, Ei, F.matmul(W, cols), F.matmul(rows, Winv), rng, budget, out)


def decompose(M: Representation, seed: int | None = None, budget: int = 48) -> Decomposition:
    """Full Krull-Schmidt decomposition; summands grouped by isomorphism."""
    F = M.field
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    E = end_space(M)
    raw: list = []
    I = F.identity(M.dim)
    _split_off(F, M, E, I, I, rng, budget, raw)
    pieces = []
    for W, Winv, _, loc in raw:
        sub = M.conjugate_by(W, Winv, tag=f"summand({M.tag})")
        pieces.append(Summand(sub, loc, W, Winv))
    classes: list[list[int]] = []
    for i, pc in enumerate(pieces):
        for cl in classes:
            rep = pieces[cl[0]]
            if rep.module.dim == pc.module.dim and multiplicity(rep.module, rep.local, pc.module) == 1:
                cl.append(i)
                break
        else:
            classes.append([i])
    summands = [(pieces[cl[0]].module, len(cl)) for cl in classes]
    order = [i for cl in classes for i in cl]
    Wall = np.concatenate([pieces[i].W for i in order], axis=1)
    return Decomposition(M, pieces, summands, classes, Wall)


def local_data(V: Representation, seed: int | None = None) -> LocalData:
    """Locality certificate for V, raising NotIndecomposable if V splits."""
    F = V.field
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    res = analyze_endomorphisms(F, end_space(V), rng)
    if not isinstance(res, LocalData):
        raise NotIndecomposable(f"module of dimension {V.dim} has a nontrivial idempotent")
    return res


def is_indecomposable(V: Representation) -> bool:
    try:
        local_data(V)
        return True
    except NotIndecomposable:
        return False


# -- pairings ----------------------------------------------------------------------


def pairing_rank(V: Representation, loc: LocalData, T: Representation) -> int:
    """k-rank of (α, β) ↦ λ(α∘β), α in Hom(T,V), β in Hom(V,T)."""
    F = V.field
    A = hom_space(T, V)       # (h1, dV, dT)
    B = hom_space(V, T)       # (h2, dT, dV)
    if len(A) == 0 or len(B) == 0:
        return 0
    Gam = F.mul(A[:, loc.rows, :], loc.coeffs[None, :, None])       # (h1, r, dT)
    Bt = B[:, :, loc.cols].transpose(0, 2, 1)                        # (h2, r, dT)
    Pm = F.matmul(Gam.reshape(len(A), -1), Bt.reshape(len(B), -1).T)
    return ff.rank(F, Pm)


def multiplicity(V: Representation, loc: LocalData, T: Representation) -> int:
    r = pairing_rank(V, loc, T)
    if r % loc.f:
        raise DecompositionFailed(f"pairing rank {r} not divisible by residue degree {loc.f}")
    return r // loc.f


def iso(V: Representation, W: Representation, loc_v: LocalData | None = None,
        loc_w: LocalData | None = None) -> bool:
    """Isomorphism of indecomposable modules."""
    loc_v = loc_v or local_data(V)
    if loc_w is None:
        local_data(W)
    if V.dim != W.dim:
        return False
    return multiplicity(V, loc_v, W) == 1


def iso_by_composites(V: Representation, W: Representation) -> bool:
    """Independent check: some composite of basis homs V -> W -> V is invertible."""
    if V.dim != W.dim:
        return False
    F = V.field
    A = hom_space(V, W)
    B = hom_space(W, V)
    for a in A:
        if not ff.is_invertible(F, a):
            continue
        return True
    for a in A:
        for b in B:
            if ff.is_invertible(F, F.matmul(b, a)):
                return True
    return False


# -- relative projectivity and vertices ------------------------------------------


@dataclass
class HigmanCertificate:
    projective: bool
    witness: np.ndarray | None   # an H-endomorphism with Tr_H^G = identity


def higman_projective(V: Representation, H: Subgroup) -> HigmanCertificate:
    """Is id_V a relative trace from End_kH(V)?"""
    F = V.field
    G = V.group
    if len(H) == len(G):
        return HigmanCertificate(True, F.identity(V.dim))
    EH = end_space(restrict(V, H))
    if len(EH) == 0:
        return HigmanCertificate(False, None)
    # Tr(x) lies in End_G(V); read it in the RREF coordinates of End_G(V):
    # Tr(x)[r, s] = Σ_{a,b} x[a, b] C[a, b] with C = Σ_t ρ(t)[r, :]^T ρ(t^-1)[:, s]
    EG = _Echelon(F, end_space(V), V.dim)
    rows, cols = np.divmod(np.array(EG.piv), V.dim)
    reps = transversal(H).reps
    R = V.images(reps)
    Rinv = V.images(G.inv[reps].tolist())
    C = F.matmul(R[:, rows, :].transpose(1, 2, 0), Rinv[:, :, cols].transpose(2, 0, 1))   # (e, n, n)
    coords = F.matmul(_flat(EH), _flat(C).T)                                              # (h, e)
    target = F.identity(V.dim).reshape(-1)[np.array(EG.piv)]
    x, _ = ff.solve(F, coords.T, target)
    if x is None:
        return HigmanCertificate(False, None)
    return HigmanCertificate(True, _combine(F, x, EH))


@dataclass
class VertexReport:
    vertex: Subgroup
    trivial_source: bool
    source_dim: int | None

    def to_json(self) -> dict:
        return {"vertex_order": self.vertex.order(), "vertex_elements": list(self.vertex.elems),
                "trivial_source": self.trivial_source, "source_dim": self.source_dim}


def vertex(V: Representation, loc: LocalData | None = None) -> VertexReport:
    """Smallest p-subgroup representative relative to which V is projective."""
    loc = loc or local_data(V)
    G, F = V.group, V.field
    for cls in G.p_subgroup_classes(F.p):
        P = cls.rep
        if higman_projective(V, P).projective:
            ts = multiplicity(V, loc, perm_module(G, P, F)) > 0
            return VertexReport(P, ts, 1 if ts else None)
    raise AssertionError("every module is projective relative to a Sylow subgroup")  # pragma: no cover


def is_trivial_source(V: Representation, loc: LocalData | None = None) -> bool:
    loc = loc or local_data(V)
    G, F = V.group, V.field
    return any(multiplicity(V, loc, perm_module(G, c.rep, F)) > 0 for c in G.p_subgroup_classes(F.p))
