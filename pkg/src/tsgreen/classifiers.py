"""Galois index sets and the group classes built on them.

A group H is q-hyperelementary when O^q(H) is cyclic and r-hypoelementary
when H/O_r(H) is cyclic.  It is k-elementary (for q) when, writing
H = C ⋊ Q with C = O^q(H) cyclic of order m prime to p, every y in Q acts on
a generator x of C by y x y^-1 = x^a with a in I_m(k) = <|k| mod m>.  H is
q-Dress when O^q(H) is p-hypoelementary, and k-Dress when moreover
H/O_p(H) is k-elementary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CharacteristicDividesM, NotMinimalCounterexample
from .fields import FieldSpec
from .groups import PermGroup, Subgroup, _prime_factors, is_prime_power_of, o_lower, o_upper, quotient


@dataclass(frozen=True)
class GaloisIndexSet:
    m: int
    members: tuple[int, ...]

    def __contains__(self, a: int) -> bool:
        return a % self.m in self.members if self.m > 1 else True

    def to_json(self) -> dict:
        return {"m": self.m, "members": list(self.members)}


def galois_index_set(k: FieldSpec, m: int) -> GaloisIndexSet:
    """The image of Gal(k(ω_m)/k) in (Z/m)^*: powers of |k| modulo m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m % k.p == 0:
        raise CharacteristicDividesM(f"characteristic {k.p} divides m={m}", p=k.p, m=m)
    if m == 1:
        return GaloisIndexSet(1, (0,))
    seen, a = set(), 1
    while a not in seen:
        seen.add(a)
        a = a * k.q % m
    return GaloisIndexSet(m, tuple(sorted(seen)))


# -- group predicates -----------------------------------------------------------

def _cyclic_order(S: Subgroup) -> int | None:
    G = S.parent
    if max(G.element_orders[S.elem_array]) == S.order():
        return S.order()
    return None


def is_q_hyperelementary(G: PermGroup, q: int) -> bool:
    return _cyclic_order(o_upper(G, q)) is not None


def is_r_hypoelementary(G: PermGroup, r: int) -> bool:
    N = o_lower(G, r)
    return quotient(G, N).group.is_cyclic()


def _discrete_log(G: PermGroup, x: int, target: int, m: int) -> int:
    cur = 0
    for a in range(m):
        if cur == target:
            return a
        cur = int(G.mul[x, cur])
    raise ValueError("target not in the cyclic subgroup")


@dataclass
class ElementaryData:
    q: int
    m: int
    c_order: int
    q_order: int
    exponents: list[int]
    index_set: list[int]
    elementary: bool

    def to_json(self) -> dict:
        return {"q": self.q, "C_order": self.c_order, "Q_order": self.q_order,
                "action_exponents": self.exponents, "I_m": self.index_set,
                "k_elementary": self.elementary}


def k_elementary_data(G: PermGroup, k: FieldSpec, q: int) -> ElementaryData | None:
    """Decomposition data for G as C ⋊ Q with C = O^q(G); None when G is not
    q-hyperelementary or C has order divisible by p."""
    C = o_upper(G, q)
    m = _cyclic_order(C)
    if m is None or m % k.p == 0:
        return None
    Q = G.sylow(q)
    if m == 1:
        return ElementaryData(q, 1, 1, Q.order(), [], [0], True)
    x = next(e for e in C.elems if G.element_orders[e] == m)
    I = galois_index_set(k, m)
    exps = sorted({_discrete_log(G, x, int(G.conj[y, x]), m) for y in Q.generators()})
    # exponents of every generator y of Q, not just the chosen generating set
    all_exps = sorted({_discrete_log(G, x, int(G.conj[y, x]), m) for y in Q.elems})
    ok = all(a in I for a in all_exps)
    return ElementaryData(q, m, m, Q.order(), exps, list(I.members), ok)


def is_k_elementary(G: PermGroup, k: FieldSpec, q: int | None = None) -> bool:
    primes = [q] if q is not None else _candidate_primes(G, k)
    for r in primes:
        data = k_elementary_data(G, k, r)
        if data is not None and data.elementary:
            return True
    return False


def _candidate_primes(G: PermGroup, k: FieldSpec) -> list[int]:
    return sorted(set(_prime_factors(len(G))) | {k.p})


def is_q_dress(G: PermGroup, q: int, p: int) -> bool:
    """O^q(G) is p-hypoelementary."""
    U = o_upper(G, q)
    return is_r_hypoelementary(U.group, p)


def _reduced(G: PermGroup, p: int) -> PermGroup:
    return quotient(G, o_lower(G, p)).group


def is_k_dress(G: PermGroup, k: FieldSpec) -> tuple[bool, int | None]:
    """(True, q) when G/O_p(G) is k-elementary for the prime q."""
    Gbar = _reduced(G, k.p)
    for q in _candidate_primes(G, k):
        data = k_elementary_data(Gbar, k, q)
        if data is not None and data.elementary:
            return True, q
    return False, None


def in_dr_p_star(G: PermGroup, k: FieldSpec) -> bool:
    ok, _ = is_k_dress(G, k)
    return ok and (len(G) // len(o_lower(G, k.p))) % k.p == 0


@dataclass
class DressVerdict:
    group: str
    order: int
    field: str
    p: int
    is_q_dress: dict[int, bool]
    is_k_dress: bool
    witness_q: int | None
    in_dr_p_star: bool
    is_k_elementary: bool
    reduced_order: int
    decomposition: dict | None = field(default=None)

    def to_json(self) -> dict:
        return {"group": self.group, "order": self.order, "field": self.field, "p": self.p,
                "is_q_dress": {str(q): v for q, v in sorted(self.is_q_dress.items())},
                "is_k_dress": self.is_k_dress, "witness_q": self.witness_q,
                "in_dr_p_star": self.in_dr_p_star, "is_k_elementary": self.is_k_elementary,
                "order_mod_O_p": self.reduced_order, "decomposition": self.decomposition}


def classify(G: PermGroup, k: FieldSpec) -> DressVerdict:
    p = k.p
    primes = _candidate_primes(G, k)
    qd = {q: is_q_dress(G, q, p) for q in primes}
    kd, wq = is_k_dress(G, k)
    Gbar = _reduced(G, p)
    decomp = None
    if wq is not None:
        decomp = k_elementary_data(Gbar, k, wq).to_json()
    return DressVerdict(
        group=G.label, order=len(G), field=k.name, p=p, is_q_dress=qd,
        is_k_dress=kd, witness_q=wq,
        in_dr_p_star=kd and len(Gbar) % p == 0,
        is_k_elementary=is_k_elementary(G, k),
        reduced_order=len(Gbar), decomposition=decomp)


# -- minimal counterexample shape ------------------------------------------------

def _dress_not_k_dress(G: PermGroup, k: FieldSpec) -> bool:
    if is_k_dress(G, k)[0]:
        return False
    return any(is_q_dress(G, q, k.p) for q in _candidate_primes(G, k))


def minimal_non_k_dress_shape(G: PermGroup, k: FieldSpec, require_minimal: bool = True
                              ) -> tuple[int, int, int, int]:
    """Parameters (r, q, n, a) with G ≅ C_r ⋊_a C_{q^n} and a ∉ I_r(k), for G
    q-Dress, not k-Dress, and minimal with that property.

    With ``require_minimal=False`` only the shape is certified; this covers
    groups such as C13 ⋊_5 C4 over GF(3), whose dihedral subgroup C13 ⋊ C2
    is already a smaller counterexample.
    """
    if not _dress_not_k_dress(G, k):
        raise NotMinimalCounterexample(f"{G.label} is k-Dress or not q-Dress for any q")
    for cls in (G.subgroup_classes() if require_minimal else []):
        S = cls.rep
        if 1 < S.order() < len(G) and _dress_not_k_dress(S.group, k):
            raise NotMinimalCounterexample(f"proper subgroup of order {S.order()} has the property",
                                           subgroup_order=S.order())
    for N in (G.normal_subgroups() if require_minimal else []):
        if N.order() > 1 and _dress_not_k_dress(quotient(G, N).group, k):
            raise NotMinimalCounterexample(f"quotient by normal subgroup of order {N.order()} has the property",
                                           normal_order=N.order())
    for q in _candidate_primes(G, k):
        data = k_elementary_data(G, k, q)
        if data is None or data.elementary:
            continue
        r, qn = data.m, data.q_order
        if not (_is_prime(r) and r != q and is_prime_power_of(qn, q) and r * qn == len(G)
                and G.sylow(q).group.is_cyclic()):
            raise NotMinimalCounterexample(f"{G.label} does not have the shape C_r ⋊ C_q^n")
        n = round(math.log(qn, q))
        I = galois_index_set(k, r)
        a = min(e for e in _generator_exponents(G, q, r) if e not in I)
        return r, q, n, a
    raise NotMinimalCounterexample(f"no hyperelementary decomposition found for {G.label}")


def _generator_exponents(G: PermGroup, q: int, m: int) -> list[int]:
    C = o_upper(G, q)
    Q = G.sylow(q)
    x = next(e for e in C.elems if G.element_orders[e] == m)
    gens = [y for y in Q.elems if G.element_orders[y] == Q.order()]
    return sorted({_discrete_log(G, x, int(G.conj[y, x]), m) for y in gens})


def _is_prime(n: int) -> bool:
    return n > 1 and _prime_factors(n) == [n]
