"""kG-modules as matrix representations.

A Representation stores one invertible matrix per generator of its group
(column convention: g acts on column vectors).  Trivial-source modules also
carry a *permutation embedding*: a G-set X with G-maps U: M -> k[X] and
Uplus: k[X] -> M such that Uplus U = 1.  Hom spaces into and out of k[X]
reduce to fixed points of point stabilisers, which is far cheaper than
solving the commutation equations directly; every construction below keeps
the embedding when it can.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import get_config
from .errors import DimensionCapExceeded, DimensionMismatch
from .fields import FieldSpec
from .groups import PermGroup, Quotient, Subgroup
from .linalg import ff

SET_CAP = 4096
TABLE_CAP = 40_000_000


class GSet:
    """A finite left G-set given by the permutation of each group generator."""

    def __init__(self, group: PermGroup, gen_perms):
        self.group = group
        self.gen_perms = [np.asarray(g, dtype=np.int64) for g in gen_perms]
        if len(self.gen_perms) != len(group.generators):
            raise DimensionMismatch("one point permutation per generator is required")
        self.n = len(self.gen_perms[0]) if self.gen_perms else 1

    @classmethod
    def from_table(cls, group: PermGroup, table: np.ndarray) -> "GSet":
        """Build from an element action table, generators read off by index."""
        perms = [table[group.index[g]] for g in group.generators]
        out = cls(group, perms)
        if not perms:
            out.n = table.shape[1]
        out.__dict__["table"] = np.asarray(table, dtype=np.int64)
        return out

    @cached_property
    def table(self) -> np.ndarray:
        """``table[g, x]`` is the image of point x under element g."""
        G = self.group
        T = np.empty((len(G), self.n), dtype=np.int64)
        T[0] = np.arange(self.n)
        for i in range(1, len(G)):
            par, s = G.parent[i]
            T[i] = self.gen_perms[s][T[par]]
        return T

    @cached_property
    def orbits(self) -> list["Orbit"]:
        T = self.table
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for x0 in range(self.n):
            if seen[x0]:
                continue
            col = T[:, x0]
            points = np.unique(col)
            seen[points] = True
            # first element carrying x0 to each point
            first = {}
            for g, x in enumerate(col.tolist()):
                first.setdefault(x, g)
            stab = Subgroup(self.group, tuple(np.flatnonzero(col == x0).tolist()))
            out.append(Orbit(x0, points.tolist(), [first[x] for x in points.tolist()], stab))
        return out


@dataclass
class Orbit:
    base: int
    points: list[int]
    movers: list[int]          # movers[i] sends base to points[i]
    stabilizer: Subgroup


@dataclass
class PermEmbedding:
    """M is a summand of k[X]: U embeds, Uplus projects, Uplus @ U = 1."""

    gset: GSet
    U: np.ndarray      # |X| x dim
    Uplus: np.ndarray  # dim x |X|


class Representation:
    """A finite-dimensional kG-module."""

    def __init__(self, group: PermGroup, field: FieldSpec, gens, embedding: PermEmbedding | None = None,
                 tag: str = "", dim: int | None = None):
        self.group = group
        self.field = field
        self.gens = [np.asarray(g, dtype=np.int64) for g in gens]
        if len(self.gens) != len(group.generators):
            raise DimensionMismatch(f"{len(self.gens)} images for {len(group.generators)} generators")
        if self.gens:
            dim = self.gens[0].shape[0]
        elif dim is None:
            raise DimensionMismatch("dimension required for a representation of a trivial group")
        self.dim = int(dim)
        for g in self.gens:
            if g.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"generator image of shape {g.shape}, expected {self.dim}")
        if self.dim > get_config().dim_cap:
            raise DimensionCapExceeded(f"module dimension {self.dim} exceeds cap {get_config().dim_cap}",
                                       dim=self.dim, cap=get_config().dim_cap)
        self.embedding = embedding
        self.tag = tag
        self._cache: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"Representation(dim={self.dim}, group={self.group.label}, field={self.field.name}, tag={self.tag!r})"

    # -- element images -----------------------------------------------------

    @cached_property
    def _table(self) -> np.ndarray | None:
        G = self.group
        if len(G) * self.dim * self.dim > TABLE_CAP:
            return None
        F = self.field
        T = np.empty((len(G), self.dim, self.dim), dtype=np.int64)
        T[0] = F.identity(self.dim)
        for i in range(1, len(G)):
            par, s = G.parent[i]
            T[i] = F.matmul(self.gens[s], T[par])
        return T

    def image(self, idx: int) -> np.ndarray:
        if self._table is not None:
            return self._table[idx]
        if idx not in self._cache:
            F = self.field
            M = F.identity(self.dim)
            for s in self.group.word(idx):
                M = F.matmul(self.gens[s], M)
            self._cache[idx] = M
        return self._cache[idx]

    def images(self, idxs) -> np.ndarray:
        idxs = list(idxs)
        if self._table is not None:
            return self._table[idxs]
        if not idxs:
            return np.zeros((0, self.dim, self.dim), dtype=np.int64)
        return np.stack([self.image(i) for i in idxs])

    def check_homomorphism(self) -> bool:
        """The BFS-extended map is a homomorphism iff it commutes with left
        multiplication by every generator."""
        G, F = self.group, self.field
        for s, g in enumerate(G.generators):
            gi = G.index[g]
            lhs = F.matmul(self.gens[s][None], self.images(range(len(G))))
            rhs = self.images(G.mul[gi].tolist())
            if not np.array_equal(lhs, rhs):
                return False
        return True

    # -- convenience --------------------------------------------------------

    def fixed_points(self, S: Subgroup) -> np.ndarray:
        """Columns span {v : s v = v for all s in S}."""
        gens = S.generators()
        F = self.field
        if not gens:
            return F.identity(self.dim)
        I = F.identity(self.dim)
        A = np.concatenate([F.sub(self.image(s), I) for s in gens], axis=0)
        return ff.nullspace(F, A)

    def left_fixed_points(self, S: Subgroup) -> np.ndarray:
        """Rows span {r : r s = r for all s in S}."""
        gens = S.generators()
        F = self.field
        if not gens:
            return F.identity(self.dim)
        I = F.identity(self.dim)
        A = np.concatenate([F.sub(self.image(s), I) for s in gens], axis=1)
        return ff.left_nullspace(F, A)

    def conjugate_by(self, W: np.ndarray, Winv: np.ndarray, tag: str = "") -> "Representation":
        """The module W^-1 M W restricted to the invariant subspace spanned by W's columns."""
        F = self.field
        gens = [F.matmul(Winv, F.matmul(g, W)) for g in self.gens]
        emb = None
        if self.embedding is not None:
            e = self.embedding
            emb = PermEmbedding(e.gset, F.matmul(e.U, W), F.matmul(Winv, e.Uplus))
        return Representation(self.group, F, gens, emb, tag or self.tag, dim=W.shape[1])


# -- constructors -------------------------------------------------------------

def trivial_module(G: PermGroup, k: FieldSpec) -> Representation:
    X = GSet(G, [np.zeros(1, dtype=np.int64) for _ in G.generators])
    X.n = 1
    one = np.ones((1, 1), dtype=np.int64)
    return Representation(G, k, [one for _ in G.generators], PermEmbedding(X, one, one), "trivial", dim=1)


def gset_module(X: GSet, k: FieldSpec, tag: str = "") -> Representation:
    """The permutation module k[X] (P(g) e_x = e_{g x})."""
    n = X.n
    gens = []
    for perm in X.gen_perms:
        P = np.zeros((n, n), dtype=np.int64)
        P[perm, np.arange(n)] = 1
        gens.append(P)
    I = np.eye(n, dtype=np.int64)
    return Representation(X.group, k, gens, PermEmbedding(X, I, I), tag or f"perm{n}", dim=n)


def coset_gset(G: PermGroup, H: Subgroup) -> GSet:
    """G acting on left cosets of H, ordered by minimal element index."""
    cosets = H.cosets()
    where = np.empty(len(G), dtype=np.int64)
    for ci, c in enumerate(cosets):
        where[list(c)] = ci
    reps = np.array([c[0] for c in cosets])
    table = where[G.mul[:, reps]]
    return GSet.from_table(G, table)


def perm_module(G: PermGroup, H: Subgroup, k: FieldSpec) -> Representation:
    if H.parent is not G:
        raise DimensionMismatch("subgroup belongs to a different group")
    return gset_module(coset_gset(G, H), k, tag=f"k[G/H{H.order()}]")


def regular_module(G: PermGroup, k: FieldSpec) -> Representation:
    return perm_module(G, G.trivial(), k)


def direct_sum(mods: list[Representation]) -> Representation:
    F = mods[0].field
    G = mods[0].group
    dims = [m.dim for m in mods]
    n = sum(dims)
    gens = []
    for s in range(len(G.generators)):
        B = np.zeros((n, n), dtype=np.int64)
        o = 0
        for m in mods:
            B[o:o + m.dim, o:o + m.dim] = m.gens[s]
            o += m.dim
        gens.append(B)
    emb = None
    if all(m.embedding is not None for m in mods):
        sizes = [m.embedding.gset.n for m in mods]
        N = sum(sizes)
        if N <= SET_CAP:
            table = np.concatenate([m.embedding.gset.table + off
                                    for m, off in zip(mods, np.cumsum([0] + sizes[:-1]))], axis=1)
            X = GSet.from_table(G, table)
            U = np.zeros((N, n), dtype=np.int64)
            Up = np.zeros((n, N), dtype=np.int64)
            o, ox = 0, 0
            for m in mods:
                e = m.embedding
                U[ox:ox + e.gset.n, o:o + m.dim] = e.U
                Up[o:o + m.dim, ox:ox + e.gset.n] = e.Uplus
                o += m.dim
                ox += e.gset.n
            emb = PermEmbedding(X, U, Up)
    return Representation(G, F, gens, emb, "sum", dim=n)


# -- hom spaces ---------------------------------------------------------------

def _hom_from_perm(X: GSet, N: Representation) -> list[np.ndarray]:
    """Basis of Hom_G(k[X], N), each a dim(N) x |X| matrix."""
    F = N.field
    out = []
    for orb in X.orbits:
        fix = N.fixed_points(orb.stabilizer)
        if fix.shape[1] == 0:
            continue
        cols = F.matmul(N.images(orb.movers), fix[None])      # (|orbit|, dimN, f)
        for j in range(fix.shape[1]):
            Phi = np.zeros((N.dim, X.n), dtype=np.int64)
            Phi[:, orb.points] = cols[:, :, j].T
            out.append(Phi)
    return out


def _hom_to_perm(N: Representation, X: GSet) -> list[np.ndarray]:
    """Basis of Hom_G(N, k[X]), each a |X| x dim(N) matrix."""
    F = N.field
    G = N.group
    out = []
    for orb in X.orbits:
        fix = N.left_fixed_points(orb.stabilizer)
        if fix.shape[0] == 0:
            continue
        inv = G.inv[orb.movers].tolist()
        rows = F.matmul(fix[None], N.images(inv))              # (|orbit|, f, dimN)
        for j in range(fix.shape[0]):
            Psi = np.zeros((X.n, N.dim), dtype=np.int64)
            Psi[orb.points] = rows[:, j, :]
            out.append(Psi)
    return out


def _independent(F: FieldSpec, mats: list[np.ndarray], shape) -> np.ndarray:
    if not mats:
        return np.zeros((0,) + tuple(shape), dtype=np.int64)
    rows = ff.row_basis(F, np.stack([m.reshape(-1) for m in mats]))
    return rows.reshape((-1,) + tuple(shape))


def _hom_generic(M: Representation, N: Representation) -> np.ndarray:
    """Solve X M(g) = N(g) X for all generators (Kronecker form, row-major vec)."""
    F = M.field
    if not M.gens:
        return np.eye(N.dim * M.dim, dtype=np.int64).reshape(-1, N.dim, M.dim)
    blocks = []
    In, Im = F.identity(N.dim), F.identity(M.dim)
    for a, b in zip(M.gens, N.gens):
        # vec(X A) = (I ⊗ A^T) vec X ; vec(B X) = (B ⊗ I) vec X
        blocks.append(F.sub(F.kron(In, a.T), F.kron(b, Im)))
    K = ff.nullspace(F, np.concatenate(blocks, axis=0))
    return K.T.reshape(-1, N.dim, M.dim)


def hom_space(M: Representation, N: Representation) -> np.ndarray:
    """Basis of Hom_G(M, N) as an array of shape (h, dim N, dim M)."""
    if M.group is not N.group:
        raise DimensionMismatch("modules over different groups")
    if M.field != N.field:
        raise DimensionMismatch("modules over different fields")
    F = M.field
    em, en = M.embedding, N.embedding
    use_m = em is not None and (en is None or em.gset.n <= en.gset.n)
    if use_m:
        phis = _hom_from_perm(em.gset, N)
        mats = [F.matmul(P, em.U) for P in phis]
        return _independent(F, mats, (N.dim, M.dim))
    if en is not None:
        psis = _hom_to_perm(M, en.gset)
        mats = [F.matmul(en.Uplus, P) for P in psis]
        return _independent(F, mats, (N.dim, M.dim))
    return _hom_generic(M, N)


def end_space(M: Representation) -> np.ndarray:
    return hom_space(M, M)


def is_hom(M: Representation, N: Representation, X: np.ndarray) -> bool:
    F = M.field
    return all(np.array_equal(F.matmul(X, a), F.matmul(b, X)) for a, b in zip(M.gens, N.gens))


# -- change of group ----------------------------------------------------------

def _subgroup_index_map(S: Subgroup) -> np.ndarray:
    """Index in S.group of each parent element of S (others -1)."""
    K = S.group
    G = S.parent
    out = np.full(len(G), -1, dtype=np.int64)
    for e in S.elems:
        out[e] = K.index[G.elements[e]]
    return out


@dataclass
class Transversal:
    """Left transversal t_i of S in G with g t_i = t_{perm[g, i]} h[g, i]."""

    reps: list[int]
    perm: np.ndarray      # |G| x r
    h: np.ndarray         # |G| x r, parent indices of elements of S


def transversal(S: Subgroup) -> Transversal:
    G = S.parent
    cosets = S.cosets()
    reps = [c[0] for c in cosets]
    where = np.empty(len(G), dtype=np.int64)
    for ci, c in enumerate(cosets):
        where[list(c)] = ci
    prods = G.mul[:, reps]                      # g t_i
    perm = where[prods]
    treps = np.array(reps)
    tinv = G.inv[treps[perm]]                   # t_{σ(i)}^{-1}
    h = G.mul[tinv, prods]
    return Transversal(reps, perm, h)


def induce(M: Representation, S: Subgroup, tag: str = "") -> Representation:
    """Ind_S^G M with a fixed transversal of minimal coset representatives."""
    G, F = S.parent, M.field
    if set(M.group.elements) != {G.elements[e] for e in S.elems}:
        raise DimensionMismatch("module is not over the given subgroup")
    T = transversal(S)
    r, m = len(T.reps), M.dim
    if r * m > get_config().dim_cap:
        raise DimensionCapExceeded(f"induced dimension {r * m} exceeds cap", dim=r * m)
    kmap = _module_index_map(M, S)
    gens = [_induced_matrix(M, T, kmap, G.index[g]) for g in G.generators]
    emb = None
    if M.embedding is not None and r * M.embedding.gset.n <= SET_CAP:
        e = M.embedding
        nx = e.gset.n
        ktab = e.gset.table
        table = np.empty((len(G), r * nx), dtype=np.int64)
        for i in range(r):
            tgt = T.perm[:, i]
            hk = kmap[T.h[:, i]]
            table[:, i * nx:(i + 1) * nx] = tgt[:, None] * nx + ktab[hk]
        X = GSet.from_table(G, table)
        U = np.kron(np.eye(r, dtype=np.int64), e.U)
        Up = np.kron(np.eye(r, dtype=np.int64), e.Uplus)
        emb = PermEmbedding(X, U, Up)
    return Representation(G, F, gens, emb, tag or f"Ind({M.tag})", dim=r * m)


def _module_index_map(M: Representation, S: Subgroup) -> np.ndarray:
    G = S.parent
    out = np.full(len(G), -1, dtype=np.int64)
    for e in S.elems:
        out[e] = M.group.index[G.elements[e]]
    return out


def _induced_matrix(M: Representation, T: Transversal, kmap: np.ndarray, g: int) -> np.ndarray:
    r, m = len(T.reps), M.dim
    B = np.zeros((r * m, r * m), dtype=np.int64)
    for i in range(r):
        j = T.perm[g, i]
        B[j * m:(j + 1) * m, i * m:(i + 1) * m] = M.image(int(kmap[T.h[g, i]]))
    return B


def induced_image(M: Representation, S: Subgroup, g: int) -> np.ndarray:
    """Matrix of an arbitrary element g on Ind_S^G M, from the defining formula."""
    return _induced_matrix(M, transversal(S), _module_index_map(M, S), g)


def restrict(V: Representation, S: Subgroup, tag: str = "") -> Representation:
    G = V.group
    if S.parent is not G:
        raise DimensionMismatch("subgroup belongs to a different group")
    K = S.group
    pidx = [G.index[g] for g in K.generators]
    gens = [V.image(i) for i in pidx]
    emb = None
    if V.embedding is not None:
        e = V.embedding
        perms = [e.gset.table[i] for i in pidx]
        X = GSet(K, perms) if perms else _trivial_gset(K, e.gset.n)
        emb = PermEmbedding(X, e.U, e.Uplus)
    return Representation(K, V.field, gens, emb, tag or f"Res({V.tag})", dim=V.dim)


def _trivial_gset(K: PermGroup, n: int) -> GSet:
    X = GSet(K, [])
    X.n = n
    return X


def inflate(M: Representation, Q: Quotient, tag: str = "") -> Representation:
    """Inflation from G/N to G along the quotient map."""
    if M.group is not Q.group:
        raise DimensionMismatch("module is not over this quotient")
    G = Q.parent
    qidx = [Q.image(G.index[g]) for g in G.generators]
    gens = [M.image(i) for i in qidx]
    emb = None
    if M.embedding is not None:
        e = M.embedding
        X = GSet(G, [e.gset.table[i] for i in qidx])
        if not G.generators:
            X.n = e.gset.n
        emb = PermEmbedding(X, e.U, e.Uplus)
    return Representation(G, M.field, gens, emb, tag or f"Inf({M.tag})", dim=M.dim)


def tensor(M: Representation, N: Representation, tag: str = "") -> Representation:
    if M.group is not N.group:
        raise DimensionMismatch("modules over different groups")
    F = M.field
    G = M.group
    n = M.dim * N.dim
    if n > get_config().dim_cap:
        raise DimensionCapExceeded(f"tensor dimension {n} exceeds cap", dim=n)
    gens = [F.kron(a, b) for a, b in zip(M.gens, N.gens)]
    emb = None
    if M.embedding is not None and N.embedding is not None:
        ex, ey = M.embedding, N.embedding
        nx, ny = ex.gset.n, ey.gset.n
        if nx * ny <= SET_CAP:
            table = (ex.gset.table[:, :, None] * ny + ey.gset.table[:, None, :]).reshape(len(G), nx * ny)
            X = GSet.from_table(G, table)
            emb = PermEmbedding(X, F.kron(ex.U, ey.U), F.kron(ex.Uplus, ey.Uplus))
    return Representation(G, F, gens, emb, tag or f"({M.tag})⊗({N.tag})", dim=n)


def _tensor_induced_matrix(M: Representation, T: Transversal, kmap: np.ndarray, g: int) -> np.ndarray:
    """g acts on ⊗_i t_i ⊗ M by sending factor i, twisted by h_i, to slot σ(i)."""
    F = M.field
    r, m = len(T.reps), M.dim
    D = m ** r
    X = F.identity(D).reshape((m,) * r + (D,))
    for i in range(r):
        A = M.image(int(kmap[T.h[g, i]]))
        X = np.moveaxis(X, i, 0)
        sh = X.shape
        X = F.matmul(A, X.reshape(m, -1)).reshape(sh)
        X = np.moveaxis(X, 0, i)
    # the factor in slot i moves to slot σ(i)
    sigma = T.perm[g]
    order = [0] * r
    for i in range(r):
        order[sigma[i]] = i
    X = np.transpose(X, order + [r])
    return X.reshape(D, D)


def tensor_induce(M: Representation, S: Subgroup, tag: str = "") -> Representation:
    G = S.parent
    T = transversal(S)
    r, m = len(T.reps), M.dim
    D = m ** r
    if D > get_config().dim_cap:
        raise DimensionCapExceeded(f"tensor-induced dimension {D} exceeds cap", dim=D)
    kmap = _module_index_map(M, S)
    gens = [_tensor_induced_matrix(M, T, kmap, G.index[g]) for g in G.generators]
    emb = None
    if M.embedding is not None and M.embedding.gset.n ** r <= SET_CAP:
        e = M.embedding
        nx = e.gset.n
        ktab = e.gset.table
        F = M.field
        pts = np.indices((nx,) * r).reshape(r, -1).T if r else np.zeros((1, 0), dtype=np.int64)
        table = np.empty((len(G), len(pts)), dtype=np.int64)
        weights = nx ** np.arange(r - 1, -1, -1)
        for g in range(len(G)):
            new = np.empty_like(pts)
            for i in range(r):
                new[:, T.perm[g, i]] = ktab[kmap[T.h[g, i]]][pts[:, i]]
            table[g] = new @ weights
        X = GSet.from_table(G, table)
        U, Up = e.U, e.Uplus
        for _ in range(r - 1):
            U, Up = F.kron(U, e.U), F.kron(Up, e.Uplus)
        emb = PermEmbedding(X, U, Up)
    return Representation(G, M.field, gens, emb, tag or f"TenInd({M.tag})", dim=D)


def tensor_induced_image(M: Representation, S: Subgroup, g: int) -> np.ndarray:
    return _tensor_induced_matrix(M, transversal(S), _module_index_map(M, S), g)
