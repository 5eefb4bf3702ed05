"""Finite groups as explicit permutation groups.

Permutations are tuples ``g`` with ``g[i]`` the image of point i; products
compose right-to-left, ``(g*h)[i] = g[h[i]]``, so points carry a left action.
Every group keeps its full element list (orders are capped), a Cayley table
and a BFS spanning tree over the generators that yields a word for each
element; representations use those words to evaluate arbitrary elements.
"""
from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import get_config
from .errors import BadAction, DegreeTooLarge, GroupSpecError, GroupTooLarge, NotNormal

Perm = tuple[int, ...]

MAX_DEGREE = 512


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[i] for i in h)


def perm_inverse(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def cycles_to_perm(degree: int, cycles: list[list[int]]) -> Perm:
    img = list(range(degree))
    seen: set[int] = set()
    for cyc in cycles:
        for a in cyc:
            if not 0 <= a < degree:
                raise GroupSpecError(f"point {a} outside 0..{degree - 1}")
            if a in seen:
                raise GroupSpecError(f"point {a} repeated in cycle notation")
            seen.add(a)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return tuple(img)


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_prime_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


class PermGroup:
    """A permutation group with its elements enumerated eagerly."""

    def __init__(self, degree: int, generators, name: str | None = None, order_cap: int | None = None):
        if degree < 1:
            raise GroupSpecError("degree must be positive")
        if degree > MAX_DEGREE:
            raise DegreeTooLarge(f"degree {degree} exceeds {MAX_DEGREE}")
        ident = tuple(range(degree))
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupSpecError(f"generator {g} is not a permutation of 0..{degree - 1}")
            if g != ident and g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.name = name
        cap = order_cap if order_cap is not None else get_config().order_cap
        elements = [ident]
        index = {ident: 0}
        parent = [(-1, -1)]
        i = 0
        while i < len(elements):
            e = elements[i]
            for s, g in enumerate(self.generators):
                h = compose(g, e)
                if h not in index:
                    index[h] = len(elements)
                    elements.append(h)
                    parent.append((i, s))
                    if len(elements) > cap:
                        raise GroupTooLarge(f"group order exceeds cap {cap}", cap=cap)
            i += 1
        self.elements: list[Perm] = elements
        self.index: dict[Perm, int] = index
        self.parent = parent
        self._lock = threading.Lock()

    # -- basics ---------------------------------------------------------------

    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"PermGroup({self.label}, order={self.order()})"

    @property
    def label(self) -> str:
        return self.name or f"G{self.order()}"

    @cached_property
    def element_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(len(self.elements), self.degree)

    @cached_property
    def mul(self) -> np.ndarray:
        """Cayley table: ``mul[i, j]`` is the index of elements[i] * elements[j]."""
        E = self.element_array
        n = len(E)
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            prods = E[i][E]
            table[i] = [self.index[tuple(r)] for r in prods.tolist()]
        return table

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmax(self.mul == 0, axis=1).astype(np.int64)

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x]`` is the index of g x g^-1."""
        return self.mul[self.mul, self.inv[:, None]]

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = len(self)
        orders = np.ones(n, dtype=np.int64)
        cur = np.arange(n)
        k = 1
        pending = cur != 0
        while pending.any():
            cur = self.mul[cur, np.arange(n)]
            k += 1
            done = pending & (cur == 0)
            orders[done] = k
            pending &= ~done
        orders[0] = 1
        return orders

    def word(self, idx: int) -> list[int]:
        """Generator indices s_1..s_k with element = g_{s_k} ... g_{s_1}."""
        out = []
        while idx:
            idx, s = self.parent[idx]
            out.append(s)
        return out[::-1]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def is_cyclic(self) -> bool:
        return bool((self.element_orders == len(self)).any())

    def exponent_primes(self) -> list[int]:
        return _prime_factors(len(self))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(len(self))))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def closure(self, gens) -> "Subgroup":
        return Subgroup(self, tuple(closure_indices(self, list(gens))))

    def subgroup_from_perms(self, perms) -> "Subgroup":
        return self.closure([self.index[tuple(p)] for p in perms])

    # -- subgroup lattice -----------------------------------------------------

    def subgroup_classes(self) -> list["SubgroupClass"]:
        """Conjugacy classes of subgroups, ordered by (order, canonical key)."""
        with self._lock:
            if not hasattr(self, "_classes"):
                self._classes = _enumerate_classes(self)
            return self._classes

    def p_subgroup_classes(self, p: int) -> list["SubgroupClass"]:
        return [c for c in self.subgroup_classes() if is_prime_power_of(c.rep.order(), p)]

    def normal_subgroups(self) -> list["Subgroup"]:
        return [c.rep for c in self.subgroup_classes() if c.size == 1]

    def sylow(self, p: int) -> "Subgroup":
        best = [c.rep for c in self.p_subgroup_classes(p)]
        return max(best, key=lambda s: s.order())


def closure_indices(G: PermGroup, gens: list[int]) -> list[int]:
    gens = sorted(set(int(g) for g in gens) - {0})
    members = np.zeros(len(G), dtype=bool)
    members[0] = True
    if not gens:
        return [0]
    frontier = np.array([0])
    garr = np.array(gens)
    while frontier.size:
        prods = G.mul[garr[:, None], frontier[None, :]].ravel()
        new = np.unique(prods[~members[prods]])
        members[new] = True
        frontier = new
    return np.flatnonzero(members).tolist()


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by the sorted indices of its elements in ``parent``."""

    parent: PermGroup
    elems: tuple[int, ...]

    def order(self) -> int:
        return len(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, idx):
        return idx in self.elem_set

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elems == self.elems

    def __hash__(self):
        return hash((id(self.parent), self.elems))

    def __repr__(self):
        return f"Subgroup(order={self.order()} of {self.parent.label})"

    @cached_property
    def elem_set(self) -> frozenset[int]:
        return frozenset(self.elems)

    @cached_property
    def elem_array(self) -> np.ndarray:
        return np.array(self.elems, dtype=np.int64)

    def is_subgroup(self) -> bool:
        S = self.elem_array
        prods = self.parent.mul[S[:, None], S[None, :]]
        return bool(np.isin(prods, S).all() and np.isin(self.parent.inv[S], S).all() and 0 in self.elem_set)

    def is_normal(self) -> bool:
        return bool(np.isin(self.parent.conj[:, self.elem_array], self.elem_array).all())

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self.parent.conj[g, self.elem_array].tolist())))

    @cached_property
    def canonical_key(self) -> tuple[int, ...]:
        return _canonical_key(self.parent, self.elem_array)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return other.elem_set <= self.elem_set

    def contains_conjugate_of(self, other: "Subgroup") -> bool:
        conj = self.parent.conj[:, other.elem_array]
        return bool(np.isin(conj, self.elem_array).all(axis=1).any())

    def generators(self) -> list[int]:
        """A small generating set (greedy, deterministic)."""
        gens: list[int] = []
        have = {0}
        order = self.parent.element_orders
        for x in sorted(self.elems, key=lambda e: (-order[e], e)):
            if x not in have:
                gens.append(x)
                have = set(closure_indices(self.parent, gens))
                if len(have) == len(self.elems):
                    break
        return gens

    @cached_property
    def group(self) -> PermGroup:
        """This subgroup as a PermGroup on the parent's points (the parent itself if S = G)."""
        G = self.parent
        if len(self.elems) == len(G):
            return G
        K = PermGroup(G.degree, [G.elements[i] for i in self.generators()],
                      name=None, order_cap=max(len(G), 1))
        return K

    def normalizer(self) -> "Subgroup":
        conj = self.parent.conj[:, self.elem_array]
        keep = [g for g in range(len(self.parent)) if set(conj[g].tolist()) == self.elem_set]
        return Subgroup(self.parent, tuple(keep))

    def core(self) -> "Subgroup":
        keep = self.elem_set
        for g in range(len(self.parent)):
            keep = keep & frozenset(self.parent.conj[g, self.elem_array].tolist())
        return Subgroup(self.parent, tuple(sorted(keep)))

    def cosets(self) -> list[tuple[int, ...]]:
        """Left cosets gS, ordered by their minimal element index."""
        G = self.parent
        seen = np.full(len(G), -1)
        out = []
        for g in range(len(G)):
            if seen[g] < 0:
                c = sorted(G.mul[g, self.elem_array].tolist())
                seen[c] = len(out)
                out.append(tuple(c))
        return out


@dataclass
class SubgroupClass:
    rep: Subgroup
    size: int


def _canonical_key(G: PermGroup, elems: np.ndarray) -> tuple[int, ...]:
    conj = np.sort(G.conj[:, elems], axis=1)
    order = np.lexsort(conj.T[::-1])
    return tuple(conj[order[0]].tolist())


def _enumerate_classes(G: PermGroup) -> list[SubgroupClass]:
    """Cyclic-extension enumeration of subgroup classes.

    Every subgroup is reached from a cyclic subgroup by adjoining one element
    at a time; extending each class representative by each element (one per
    double coset) therefore reaches a conjugate of every subgroup.
    """
    n = len(G)
    found: dict[tuple[int, ...], Subgroup] = {}
    queue: list[Subgroup] = []

    def add(members: list[int]):
        key = _canonical_key(G, np.array(members))
        if key not in found:
            rep = Subgroup(G, key)
            found[key] = rep
            queue.append(rep)

    for g in range(n):
        add(closure_indices(G, [g]))
    while queue:
        S = queue.pop()
        covered = np.zeros(n, dtype=bool)
        covered[S.elem_array] = True
        Sarr = S.elem_array
        for g in range(n):
            if covered[g]:
                continue
            dc = G.mul[G.mul[Sarr[:, None], g], Sarr[None, :]].ravel()
            covered[dc] = True
            add(closure_indices(G, list(S.generators()) + [g]))
    classes = []
    for key, rep in found.items():
        conj = np.sort(G.conj[:, rep.elem_array], axis=1)
        size = len({tuple(r) for r in conj.tolist()})
        classes.append(SubgroupClass(rep, size))
    classes.sort(key=lambda c: (c.rep.order(), c.rep.canonical_key))
    return classes


def enumerate_subgroups(G: PermGroup) -> list[Subgroup]:
    """One representative per conjugacy class of subgroups, ordered by size."""
    if len(G) > get_config().order_cap:
        raise GroupTooLarge(f"group order {len(G)} exceeds cap {get_config().order_cap}")
    return [c.rep for c in G.subgroup_classes()]


# -- characteristic subgroups -------------------------------------------------

def o_upper(G: PermGroup, q: int) -> Subgroup:
    """Smallest normal subgroup with q-group quotient: the subgroup generated
    by all elements of order prime to q (a conjugation-closed set)."""
    gens = [i for i in range(len(G)) if G.element_orders[i] % q != 0]
    return G.closure(gens)


def o_lower(G: PermGroup, r: int) -> Subgroup:
    """Largest normal r-subgroup: the intersection of the Sylow r-subgroups."""
    return G.sylow(r).core()


@dataclass
class Quotient:
    """G/N realised as a permutation group on the cosets of N."""

    group: PermGroup
    parent: PermGroup
    kernel: Subgroup
    coset_of: np.ndarray          # parent element index -> coset index
    element_of_coset: list[int]   # coset index -> quotient element index

    def image(self, g: int) -> int:
        return self.element_of_coset[int(self.coset_of[g])]


def quotient(G: PermGroup, N: Subgroup, name: str | None = None) -> Quotient:
    if N.parent is not G:
        raise NotNormal("subgroup belongs to a different group")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order()} is not normal in {G.label}")
    cosets = N.cosets()
    coset_of = np.empty(len(G), dtype=np.int64)
    for ci, c in enumerate(cosets):
        coset_of[list(c)] = ci
    reps = [c[0] for c in cosets]

    def act(g):
        return tuple(int(coset_of[G.mul[g, r]]) for r in reps)

    gens = [act(G.index[s]) for s in G.generators]
    Q = PermGroup(len(cosets), gens, name=name or f"{G.label}/N{N.order()}", order_cap=len(G))
    element_of_coset = [Q.index[act(r)] for r in reps]
    return Quotient(Q, G, N, coset_of, element_of_coset)


# -- constructors ---------------------------------------------------------------

def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise GroupSpecError("cyclic group order must be positive")
    return PermGroup(n, [tuple((i + 1) % n for i in range(n))], name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n (symmetries of an n-gon)."""
    if n < 1:
        raise GroupSpecError("dihedral parameter must be positive")
    if n == 1:
        return PermGroup(2, [(1, 0)], name="D1")
    if n == 2:
        return PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)], name="D2")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rot, ref], name=f"D{n}")


def symmetric(n: int) -> PermGroup:
    if not 1 <= n <= 5:
        raise GroupSpecError(f"symmetric group S{n} not supported (n <= 5)")
    if n == 1:
        return PermGroup(1, [], name="S1")
    if n == 2:
        return PermGroup(2, [(1, 0)], name="S2")
    return PermGroup(n, [tuple((i + 1) % n for i in range(n)), (1, 0) + tuple(range(2, n))], name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if not 1 <= n <= 5:
        raise GroupSpecError(f"alternating group A{n} not supported (n <= 5)")
    if n <= 2:
        return PermGroup(max(n, 1), [], name=f"A{n}")
    gens = [cycles_to_perm(n, [[0, 1, i]]) for i in range(2, n)]
    return PermGroup(n, gens, name=f"A{n}")


def quaternion8() -> PermGroup:
    # left regular representation on {±1, ±i, ±j, ±k} indexed 0..7
    # order: 1, i, j, k, -1, -i, -j, -k
    table = {
        ("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
        ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
    }
    names = ["1", "i", "j", "k"]

    def left(u):
        img = []
        for sign in (1, -1):
            for b in names:
                r = table[(u, b)]
                s = -1 if r.startswith("-") else 1
                r = r.lstrip("-")
                s *= sign
                img.append(names.index(r) + (0 if s == 1 else 4))
        return tuple(img)

    return PermGroup(8, [left("i"), left("j")], name="Q8")


def direct_product(A: PermGroup, B: PermGroup, name: str | None = None) -> PermGroup:
    da, db = A.degree, B.degree
    gens = [tuple(g) + tuple(range(da, da + db)) for g in A.generators]
    gens += [tuple(range(da)) + tuple(da + x for x in g) for g in B.generators]
    return PermGroup(da + db, gens, name=name or f"{A.label}x{B.label}")


def semidirect_cyclic(m: int, n: int, a: int, name: str | None = None) -> PermGroup:
    """C_m ⋊ C_n with y x y^-1 = x^a, acting on Z_m (x: i -> i+1, y: i -> a i),
    plus an n-cycle on extra points when a has multiplicative order < n."""
    if m < 1 or n < 1:
        raise GroupSpecError("semidirect orders must be positive")
    a %= m if m > 1 else 1
    if m > 1 and math.gcd(a, m) != 1:
        raise BadAction(f"a={a} is not a unit modulo {m}")
    if m > 1 and pow(a, n, m) != 1 % m:
        raise BadAction(f"{a}^{n} is not 1 modulo {m}")
    label = name or f"C{m}:C{n}@{a}"
    if m == 1:
        return PermGroup(n, [tuple((i + 1) % n for i in range(n))], name=label)
    ord_a = 1
    while pow(a, ord_a, m) != 1:
        ord_a += 1
    extra = n if ord_a < n else 0
    deg = m + extra
    x = tuple((i + 1) % m for i in range(m)) + tuple(range(m, deg))
    y = tuple((a * i) % m for i in range(m)) + tuple(m + (j + 1) % n for j in range(extra))
    G = PermGroup(deg, [x, y], name=label)
    if len(G) != m * n:  # pragma: no cover - guarded by the checks above
        raise BadAction(f"construction produced order {len(G)}, expected {m * n}")
    return G


def from_generators(degree: int, perms, name: str | None = None) -> PermGroup:
    return PermGroup(degree, perms, name=name)


# -- group spec DSL -------------------------------------------------------------

_ATOM = re.compile(r"^(C|D|S|A)(\d+)$")
_SEMI = re.compile(r"^C(\d+):C(\d+)@(-?\d+)$")
_CERT = re.compile(r"^(\d+):(\d+)(?:\^(\d+))?@(-?\d+)$")


def _parse_atom(tok: str) -> PermGroup:
    if tok == "Q8":
        return quaternion8()
    m = _SEMI.match(tok)
    if m:
        return semidirect_cyclic(int(m.group(1)), int(m.group(2)), int(m.group(3)), name=tok)
    m = _CERT.match(tok)
    if m:
        r, base, e, a = m.groups()
        n = int(base) ** int(e) if e else int(base)
        return semidirect_cyclic(int(r), n, int(a), name=f"C{r}:C{n}@{a}")
    m = _ATOM.match(tok)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"C": cyclic, "D": dihedral, "S": symmetric, "A": alternating}[kind](n)
    raise GroupSpecError(f"unrecognised group token {tok!r}", token=tok)


def parse_group(spec: str) -> PermGroup:
    """Parse a group spec: C7, D7, S4, A5, Q8, C6xC2, C7:C3@2, 7:2@6, 13:2^2@5,
    gens:<degree>:<cycles;cycles;...> (e.g. ``gens:4:(0 1 2 3);(0 2)``)."""
    text = spec.strip()
    if not text:
        raise GroupSpecError("empty group spec", token="")
    if text.startswith("gens:"):
        parts = text.split(":", 2)
        if len(parts) != 3 or not parts[1].strip().isdigit():
            raise GroupSpecError(f"malformed gens spec {text!r}; expected gens:<degree>:<cycles;...>",
                                 token=parts[1] if len(parts) > 1 else text)
        degree = int(parts[1])
        perms = []
        for chunk in parts[2].split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", chunk):
                raise GroupSpecError(f"bad cycle notation {chunk!r}", token=chunk)
            cycles = [[int(x) for x in re.split(r"[\s,]+", c.strip())]
                      for c in re.findall(r"\(([^)]*)\)", chunk)]
            perms.append(cycles_to_perm(degree, cycles))
        return PermGroup(degree, perms, name=text)
    factors = text.split("x")
    groups = [_parse_atom(f.strip()) for f in factors]
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    if len(groups) > 1:
        G.name = text
    return G
