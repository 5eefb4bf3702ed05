"""Primordiality of H for the trivial-source Green ring functor.

T(H) is the Z-span of classes induced from proper subgroups.  Because T(H)
is an ideal (Frobenius reciprocity), H is primordial iff [k] ∉ T(H), iff
T(H) ≠ a(kH, triv).  Both tests are run over Z and must agree.
"""
from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, field

import numpy as np

from . import classifiers
from .config import RunConfig, get_config, set_config
from .decompose import decompose, multiplicity
from .errors import CertificateFailed, HypothesisViolation, InconsistentIdealCheck, CatalogError, TheoremViolation
from .fields import FieldSpec, parse_field
from .groups import PermGroup, _prime_factors, parse_group, semidirect_cyclic
from .greenring import TSBasis, classify_in_basis, ts_basis
from .linalg import intmat
from .modules import induce, perm_module


@dataclass
class InductionLattice:
    group: PermGroup
    field: FieldSpec
    basis: TSBasis
    matrix: list[list[int]]                  # rows = basis of a(kH, triv), columns = induced classes
    labels: list[tuple[int, int, int]]       # (subgroup class index, subgroup order, basis index)

    @property
    def ncols(self) -> int:
        return len(self.labels)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    def to_json(self) -> dict:
        return {"rows": len(self.matrix), "columns": [
            {"subgroup_class": c, "subgroup_order": o, "basis_index": b, "class": self.column(j)}
            for j, (c, o, b) in enumerate(self.labels)]}


def induction_lattice(H: PermGroup, k: FieldSpec) -> InductionLattice:
    B = ts_basis(H, k)
    cols, labels = [], []
    for ci, cls in enumerate(H.subgroup_classes()):
        K = cls.rep
        if K.order() == len(H):
            continue
        BK = ts_basis(K.group, k)
        for j, b in enumerate(BK.elements):
            cols.append(classify_in_basis(induce(b.module, K), B))
            labels.append((ci, K.order(), j))
    n = len(B)
    matrix = [[c[i] for c in cols] for i in range(n)]
    return InductionLattice(H, k, B, matrix, labels)


@dataclass
class PrimordialVerdict:
    group: str
    field: str
    is_primordial: bool
    identity_in_T: bool
    lattice_full: bool
    divisors: list[int]
    basis_dims: list[int]
    witness: list[int] | None = None          # coefficients on lattice columns
    labels: list[tuple[int, int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"group": self.group, "field": self.field, "is_primordial": self.is_primordial,
               "identity_in_T": self.identity_in_T, "lattice_full": self.lattice_full,
               "snf_divisors": self.divisors, "basis_dims": self.basis_dims}
        if self.witness is not None:
            out["witness"] = [{"subgroup_class": c, "subgroup_order": o, "basis_index": b, "coefficient": x}
                              for (c, o, b), x in zip(self.labels, self.witness) if x]
        return out


def is_primordial(H: PermGroup, k: FieldSpec, lattice: InductionLattice | None = None) -> PrimordialVerdict:
    L = lattice or induction_lattice(H, k)
    n = len(L.basis)
    e0 = L.basis.unit()
    x = intmat.lattice_solve(L.matrix, e0, L.ncols)
    contains = x is not None
    s = intmat.snf(L.matrix, L.ncols)
    full = s.rank == n and all(d == 1 for d in s.divisors)
    if contains != full:
        raise InconsistentIdealCheck(f"[k] in T(H) is {contains} but T(H) = whole ring is {full}",
                                     group=H.label, field=k.name)
    if contains and intmat.matvec(L.matrix, x) != e0:
        raise InconsistentIdealCheck("witness does not re-expand to the unit")  # pragma: no cover
    return PrimordialVerdict(H.label, k.name, not contains, contains, full, s.divisors,
                             L.basis.dims, x, L.labels)


# -- theorem verification ------------------------------------------------------------


@dataclass
class TheoremRow:
    group: str
    order: int
    p: int
    field: str
    k_dress: bool
    witness_q: int | None
    primordial: bool
    q_dress_some: bool
    seconds: float = 0.0

    @property
    def agreement(self) -> bool:
        return self.k_dress == self.primordial and (self.q_dress_some or not self.primordial)

    def to_json(self) -> dict:
        return {"group": self.group, "order": self.order, "p": self.p, "field": self.field,
                "k_dress": self.k_dress, "witness_q": self.witness_q, "primordial": self.primordial,
                "q_dress_for_some_q": self.q_dress_some, "agreement": self.agreement}


def verify_entry(spec: str, field_text: str) -> TheoremRow:
    import time
    t0 = time.perf_counter()
    G = parse_group(spec)
    k = parse_field(field_text)
    kd, q = classifiers.is_k_dress(G, k)
    qd = any(classifiers.is_q_dress(G, r, k.p) for r in sorted(set(_prime_factors(len(G))) | {k.p}))
    prim = is_primordial(G, k).is_primordial
    return TheoremRow(spec, len(G), k.p, k.name, kd, q, prim, qd, time.perf_counter() - t0)


def _worker(args):
    cfg, spec, fld = args
    set_config(cfg)
    return verify_entry(spec, fld)


@dataclass
class TheoremReport:
    rows: list[TheoremRow]

    @property
    def violations(self) -> list[TheoremRow]:
        return [r for r in self.rows if not r.agreement]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"entries": len(self.rows), "agreements": len(self.rows) - len(self.violations),
                "all_agree": self.ok, "rows": [r.to_json() for r in self.rows]}


def verify_theorem(catalog: list[tuple[str, str]], raise_on_violation: bool = True,
                   parallelism: int | None = None) -> TheoremReport:
    """Check is_primordial == is_k_dress on every catalog entry (output in catalog order)."""
    width = parallelism or get_config().parallelism
    if width > 1 and len(catalog) > 1:
        cfg = get_config()
        with cf.ProcessPoolExecutor(max_workers=width) as pool:
            rows = list(pool.map(_worker, [(cfg, s, f) for s, f in catalog]))
    else:
        rows = [verify_entry(s, f) for s, f in catalog]
    report = TheoremReport(rows)
    if raise_on_violation and not report.ok:
        bad = report.violations[0]
        raise TheoremViolation(f"{bad.group} over {bad.field}: k-Dress={bad.k_dress}, primordial={bad.primordial}",
                               report=report.to_json())
    return report


def parse_catalog(text: str, source: str = "<catalog>") -> list[tuple[str, str]]:
    """Parse '<group-spec> <field>' lines; '#' starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CatalogError(f"{source}:{lineno}: expected '<group-spec> <field>', got {line!r}",
                               source=source, line=lineno)
        out.append((parts[0], parts[1]))
    return out


def read_catalog(path: str) -> list[tuple[str, str]]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc.strerror}", path=path) from None
    return parse_catalog(text, path)


BUNDLED_CATALOGS = ("catalog", "order16")


def default_catalog(name: str = "catalog") -> list[tuple[str, str]]:
    """A catalog shipped with the package: 'catalog' (the theorem run) or 'order16'."""
    from importlib import resources
    if name not in BUNDLED_CATALOGS:
        raise CatalogError(f"unknown bundled catalog {name!r}", choices=list(BUNDLED_CATALOGS))
    text = resources.files("tsgreen").joinpath(f"data/{name}.txt").read_text()
    return parse_catalog(text, name)


# -- explicit certificate for C_r ⋊ C_{q^n} ------------------------------------------


@dataclass
class SummandCover:
    dim: int
    multiplicity: int
    trivial_source: bool
    subgroup_order: int
    subgroup_class: int
    basis_index: int
    induced_dim: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Prop35Certificate:
    r: int
    q: int
    n: int
    a: int
    field: str
    perm_dim: int
    trivial_multiplicity: int
    covers: list[SummandCover]
    witness: list[int]                         # coefficients on lattice columns
    labels: list[tuple[int, int, int]]
    reexpanded: list[int]
    unit: list[int]
    agrees_with_lattice: bool

    @property
    def dimension_bookkeeping(self) -> bool:
        return 1 + sum(c.dim * c.multiplicity for c in self.covers) == self.r

    @property
    def ok(self) -> bool:
        return (self.trivial_multiplicity == 1 and self.dimension_bookkeeping
                and self.reexpanded == self.unit and self.agrees_with_lattice)

    def to_json(self) -> dict:
        return {"parameters": {"r": self.r, "q": self.q, "n": self.n, "a": self.a}, "field": self.field,
                "perm_module_dim": self.perm_dim, "trivial_multiplicity": self.trivial_multiplicity,
                "dimension_bookkeeping": self.dimension_bookkeeping,
                "summands": [c.to_json() for c in self.covers],
                "witness": [{"subgroup_class": c, "subgroup_order": o, "basis_index": b, "coefficient": x}
                            for (c, o, b), x in zip(self.labels, self.witness) if x],
                "reexpanded": self.reexpanded, "unit": self.unit,
                "agrees_with_lattice": self.agrees_with_lattice, "ok": self.ok}


def _is_prime(n: int) -> bool:
    return n > 1 and _prime_factors(n) == [n]


def prop35_certificate(r: int, q: int, n: int, a: int, k: FieldSpec) -> Prop35Certificate:
    """Certify [k] ∈ T(H) for H = C_r ⋊_a C_{q^n} with a ∉ I_r(k).

    k[H/Q] = 1 ⊕ rest; each summand of rest must be Ind_A^H W for a proper A
    and a trivial-source A-module W, so [k] = [k[H/Q]] − Σ [Ind_A^H W].
    """
    if not (_is_prime(r) and _is_prime(q) and r != q):
        raise HypothesisViolation(f"r={r} and q={q} must be distinct primes")
    if n < 1:
        raise HypothesisViolation("n must be positive")
    if r % k.p == 0:
        raise HypothesisViolation(f"characteristic {k.p} divides r={r}")
    I = classifiers.galois_index_set(k, r)
    if a % r in I.members:
        raise HypothesisViolation(f"a={a} lies in I_{r}(k) = {list(I.members)}", a=a, I=list(I.members))
    H = semidirect_cyclic(r, q ** n, a)
    L = induction_lattice(H, k)
    B = L.basis
    Q = H.sylow(q)
    perm = perm_module(H, Q, k)
    D = decompose(perm)
    triv_mult = 0
    covers: list[SummandCover] = []
    witness = [0] * L.ncols
    qcls = next(ci for ci, c in enumerate(H.subgroup_classes())
                if c.rep.order() == Q.order() and c.rep.contains_conjugate_of(Q))
    witness[L.labels.index((qcls, Q.order(), 0))] += 1        # [Ind_Q^H k]
    classes = H.subgroup_classes()
    for ci, (V, mult) in enumerate(D.summands):
        loc = D.local_data(ci)
        if V.dim == 1 and multiplicity(B[0].module, B[0].local, V) == 1:
            triv_mult += mult
            continue
        cover = None
        for j, (sc, order, bi) in enumerate(L.labels):
            K = classes[sc].rep
            W = ts_basis(K.group, k)[bi].module
            if W.dim * (len(H) // order) != V.dim:
                continue
            if multiplicity(V, loc, induce(W, K)) == 1:
                cover = (j, sc, order, bi)
                break
        if cover is None:
            raise CertificateFailed(f"summand of dimension {V.dim} is not induced from a proper subgroup",
                                    dim=V.dim)
        j, sc, order, bi = cover
        witness[j] -= mult
        ts = any(multiplicity(V, loc, perm_module(H, c.rep, k)) > 0 for c in H.p_subgroup_classes(k.p))
        covers.append(SummandCover(V.dim, mult, ts, order, sc, bi, V.dim))
    reexp = intmat.matvec(L.matrix, witness)
    verdict = is_primordial(H, k, L)
    cert = Prop35Certificate(r, q, n, a, k.name, perm.dim, triv_mult, covers, witness, L.labels,
                             reexp, B.unit(), not verdict.is_primordial)
    if not cert.ok or not all(c.trivial_source for c in covers):
        raise CertificateFailed("certificate checks failed", certificate=cert.to_json())
    return cert


def parse_certificate_params(text: str) -> tuple[int, int, int, int]:
    """``<r>:<q>[^<n>]@<a>`` -> (r, q, n, a)."""
    import re
    m = re.fullmatch(r"\s*(\d+):(\d+)(?:\^(\d+))?@(-?\d+)\s*", text)
    if not m:
        raise HypothesisViolation(f"cannot parse certificate parameters {text!r}; expected r:q^n@a")
    r, base, e, a = m.groups()
    base, n = int(base), int(e) if e else 1
    if not e:
        # accept a plain prime power such as 13:4@5
        ps = _prime_factors(base)
        if len(ps) != 1:
            raise HypothesisViolation(f"{base} is not a prime power")
        q = ps[0]
        n = 0
        while base > 1:
            base //= q
            n += 1
        return int(r), q, n, int(a)
    return int(r), base, n, int(a)
