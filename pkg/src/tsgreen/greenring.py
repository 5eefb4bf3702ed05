"""The trivial-source Green ring a(kG, triv) as a free Z-module.

Every indecomposable trivial-source module with vertex P is a summand of
k[G/P], so decomposing k[G/P] over p-subgroup representatives P (in order of
size) finds each iso class exactly once, first at its vertex.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .decompose import LocalData, decompose, local_data, multiplicity
from .errors import NotTrivialSource, UnknownSummand
from .fields import FieldSpec
from .groups import PermGroup, Subgroup
from .modules import Representation, induce, perm_module, restrict, tensor, trivial_module


@dataclass
class BasisElement:
    module: Representation
    local: LocalData
    vertex: Subgroup
    vertex_class: int          # index among p-subgroup class representatives
    fixed_dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.module.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertex_order": self.vertex.order(),
                "vertex_class": self.vertex_class, "end": self.local.to_json(),
                "fixed_point_dims": list(self.fixed_dims)}


@dataclass
class TSBasis:
    group: PermGroup
    field: FieldSpec
    elements: list[BasisElement]
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _mult: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> BasisElement:
        return self.elements[i]

    @property
    def dims(self) -> list[int]:
        return [b.dim for b in self.elements]

    def unit(self) -> list[int]:
        return [1] + [0] * (len(self) - 1)

    def to_json(self) -> dict:
        return {"group": self.group.label, "order": len(self.group), "field": self.field.to_json(),
                "size": len(self), "elements": [b.to_json() for b in self.elements]}

    def mult_table(self) -> np.ndarray:
        """Structure constants c[i, j, :] = classify(B_i ⊗ B_j); built once."""
        with self._lock:
            if self._mult is None:
                n = len(self)
                c = np.zeros((n, n, n), dtype=np.int64)
                for i in range(n):
                    for j in range(i, n):
                        v = classify_in_basis(tensor(self[i].module, self[j].module), self)
                        c[i, j] = c[j, i] = v
                self._mult = c
            return self._mult

    def multiply(self, x, y) -> list[int]:
        c = self.mult_table()
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        out = np.einsum("i,j,ijk->k", x, y, c.astype(object))
        return [int(v) for v in out]


_cache_lock = threading.Lock()


def ts_basis(G: PermGroup, k: FieldSpec) -> TSBasis:
    """Basis of indecomposable trivial-source modules, cached per (group, field)."""
    with _cache_lock:
        cache = G.__dict__.setdefault("_ts_basis", {})
        lock = cache.setdefault(("lock", k), threading.Lock())
    with lock:
        if k not in cache:
            cache[k] = _build_basis(G, k)
        return cache[k]


def _fixed_dims(V: Representation, reps: list[Subgroup]) -> tuple[int, ...]:
    return tuple(V.fixed_points(S).shape[1] for S in reps)


def _build_basis(G: PermGroup, k: FieldSpec) -> TSBasis:
    pclasses = G.p_subgroup_classes(k.p)
    reps = [c.rep for c in G.subgroup_classes()]
    found: list[BasisElement] = []
    one = trivial_module(G, k)
    found.append(BasisElement(one, local_data(one), pclasses[-1].rep, len(pclasses) - 1,
                              _fixed_dims(one, reps)))
    # the trivial module's vertex is a Sylow subgroup; it is registered up front
    for vi, cls in enumerate(pclasses):
        P = cls.rep
        D = decompose(perm_module(G, P, k))
        for ci, (V, _) in enumerate(D.summands):
            loc = D.local_data(ci)
            if any(b.dim == V.dim and multiplicity(b.module, b.local, V) == 1 for b in found):
                continue
            found.append(BasisElement(V, loc, P, vi, _fixed_dims(V, reps)))
    head, rest = found[0], found[1:]
    rest.sort(key=lambda b: (b.dim, b.vertex.order(), b.vertex_class, tuple(-x for x in b.fixed_dims)))
    return TSBasis(G, k, [head] + rest)


def classify_in_basis(T: Representation, B: TSBasis, method: str = "pairing") -> list[int]:
    """Integer coordinates of [T] in the basis (multiplicities of summands)."""
    if T.group is not B.group:
        raise ValueError("module and basis belong to different groups")
    if method == "decompose":
        return _classify_by_decomposition(T, B)
    coords = [multiplicity(b.module, b.local, T) for b in B.elements]
    if sum(c * d for c, d in zip(coords, B.dims)) == T.dim:
        return coords
    return _classify_by_decomposition(T, B)


def _classify_by_decomposition(T: Representation, B: TSBasis) -> list[int]:
    D = decompose(T)
    coords = [0] * len(B)
    for ci, (V, mult) in enumerate(D.summands):
        for i, b in enumerate(B.elements):
            if b.dim == V.dim and multiplicity(b.module, b.local, V) == 1:
                coords[i] += mult
                break
        else:
            loc = D.local_data(ci)
            G, k = T.group, T.field
            ts = any(multiplicity(V, loc, perm_module(G, c.rep, k)) > 0 for c in G.p_subgroup_classes(k.p))
            if ts:
                raise UnknownSummand(f"trivial-source summand of dimension {V.dim} missing from basis",
                                     dim=V.dim)
            raise NotTrivialSource(f"summand of dimension {V.dim} does not have trivial source", dim=V.dim)
    return coords


def induction_matrix(S: Subgroup, BK: TSBasis, BG: TSBasis) -> np.ndarray:
    """Column j is the class of Ind_S^G of the j-th basis element of S."""
    cols = [classify_in_basis(induce(b.module, S), BG) for b in BK.elements]
    return np.array(cols, dtype=np.int64).T.reshape(len(BG), len(BK))


def restriction_matrix(S: Subgroup, BG: TSBasis, BK: TSBasis) -> np.ndarray:
    cols = [classify_in_basis(restrict(b.module, S), BK) for b in BG.elements]
    return np.array(cols, dtype=np.int64).T.reshape(len(BK), len(BG))


def subgroup_basis(S: Subgroup, k: FieldSpec) -> TSBasis:
    return ts_basis(S.group, k)


def apply(M: np.ndarray, v) -> list[int]:
    return [int(x) for x in np.asarray(M, dtype=object) @ np.asarray(v, dtype=object)]
