"""Finite fields GF(p^d) and dense polynomial arithmetic over them.

Field elements are encoded as integer codes ``c_0 + c_1 p + ... + c_{d-1} p^{d-1}``
where ``c_0 + c_1 x + ...`` is the residue modulo the defining polynomial.
For d == 1 the code is the residue itself, so prime-field arrays can use plain
modular arithmetic; extension fields go through lookup tables.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import FieldError

__all__ = ["FieldSpec", "parse_field", "smallest_irreducible", "is_irreducible_mod_p"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % i for i in range(2, int(n**0.5) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            d, r = 0, q
            while r % p == 0:
                r //= p
                d += 1
            if r != 1 or not _is_prime(p):
                break
            return p, d
    raise FieldError(f"{q} is not a prime power")


# -- polynomials over GF(p), coefficient lists low -> high --------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _trim(a)
    return a


def is_irreducible_mod_p(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    d = len(poly) - 1
    if d < 1:
        return False
    for deg in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            if not _polymod_p(poly, list(tail) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over GF(p).

    Coefficients are compared from x^(d-1) down to x^0; returned low -> high.
    """
    if d == 1:
        return (0, 1)
    for high_to_low in itertools.product(range(p), repeat=d):
        poly = list(reversed(high_to_low)) + [1]
        if is_irreducible_mod_p(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible of degree {d} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^d) with a fixed monic irreducible modulus."""

    p: int
    d: int = 1
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not _is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.d < 1:
            raise FieldError("extension degree must be >= 1")
        if not self.modulus:
            object.__setattr__(self, "modulus", smallest_irreducible(self.p, self.d))
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.d + 1 or mod[-1] != 1:
            raise FieldError(f"modulus {list(self.modulus)} is not monic of degree {self.d}")
        if not is_irreducible_mod_p(list(mod), self.p):
            raise FieldError(f"modulus {list(mod)} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.d

    @property
    def name(self) -> str:
        return f"GF({self.q})"

    def __str__(self):
        return self.name

    def to_json(self) -> dict:
        return {"name": self.name, "p": self.p, "d": self.d, "modulus": list(self.modulus)}

    # -- tables -------------------------------------------------------------

    @cached_property
    def digits(self) -> np.ndarray:
        """(q, d) array of polynomial coefficients for every code."""
        codes = np.arange(self.q)
        return np.stack([(codes // self.p**i) % self.p for i in range(self.d)], axis=1)

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.d)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        """Inverse of ``digits`` along the last axis."""
        return (digits % self.p) @ self._powers

    def _reduce_poly(self, coeffs: np.ndarray) -> np.ndarray:
        # coeffs: (..., 2d-1) -> (..., d), using x^d = -sum(mod_i x^i)
        c = coeffs.copy()
        d, p = self.d, self.p
        for k in range(c.shape[-1] - 1, d - 1, -1):
            top = c[..., k] % p
            if not np.any(top):
                continue
            for i in range(d):
                if self.modulus[i]:
                    c[..., k - d + i] -= top * self.modulus[i]
            c[..., k] = 0
        return c[..., :d] % p

    @cached_property
    def mul_table(self) -> np.ndarray:
        dg = self.digits
        conv = np.zeros((self.q, self.q, 2 * self.d - 1), dtype=np.int64)
        for i in range(self.d):
            for j in range(self.d):
                conv[:, :, i + j] += np.outer(dg[:, i], dg[:, j])
        return self.encode(self._reduce_poly(conv))

    @cached_property
    def add_table(self) -> np.ndarray:
        dg = self.digits
        return self.encode(dg[:, None, :] + dg[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.digits)

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    @cached_property
    def x(self) -> int:
        """Code of the class of x (a generator of GF(q) over GF(p))."""
        return self.p if self.d > 1 else 0

    # -- vectorised arithmetic on code arrays ------------------------------

    def add(self, a, b):
        if self.d == 1:
            return (np.asarray(a) + b) % self.p
        return self.add_table[a, b]

    def sub(self, a, b):
        if self.d == 1:
            return (np.asarray(a) - b) % self.p
        return self.add_table[a, self.neg_table[b]]

    def neg(self, a):
        if self.d == 1:
            return (-np.asarray(a)) % self.p
        return self.neg_table[a]

    def mul(self, a, b):
        if self.d == 1:
            return (np.asarray(a) * b) % self.p
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.d == 1:
            return np.asarray(pow(int(a), -1, self.p)) if np.ndim(a) == 0 else \
                np.array([pow(int(v), -1, self.p) for v in np.ravel(a)]).reshape(np.shape(a))
        return self.inv_table[a]

    def power(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            e >>= 1
        return result

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over the field (works on stacked arrays too)."""
        a = np.asarray(a)
        b = np.asarray(b)
        p = self.p
        if self.d == 1:
            if a.size and b.size:
                prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
                return np.rint(prod).astype(np.int64) % p
            return np.zeros(np.matmul(a, b).shape, dtype=np.int64)
        da = self.digits[a].astype(np.float64)
        db = self.digits[b].astype(np.float64)
        shape = np.matmul(a, b).shape
        conv = np.zeros(shape + (2 * self.d - 1,), dtype=np.int64)
        for i in range(self.d):
            for j in range(self.d):
                conv[..., i + j] += np.rint(np.matmul(da[..., i], db[..., j])).astype(np.int64)
        return self.encode(self._reduce_poly(conv % p))

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r1, c1 = a.shape
        r2, c2 = b.shape
        prod = self.mul(a[:, None, :, None], b[None, :, None, :])
        return np.asarray(prod).reshape(r1 * r2, c1 * c2)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def frobenius_order(self, m: int) -> int:
        """Multiplicative order of q modulo m."""
        if m == 1:
            return 1
        k, v = 1, self.q % m
        while v != 1:
            v = v * self.q % m
            k += 1
        return k


_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)\s*$", re.IGNORECASE)


def parse_field(text: str, modulus: list[int] | None = None) -> FieldSpec:
    """Parse ``GF(q)`` or ``GF(p^d)``; ``modulus`` overrides the default polynomial."""
    m = _FIELD_RE.match(text)
    if not m:
        if text.strip().isdigit():
            m = _FIELD_RE.match(f"GF({text.strip()})")
        if not m:
            raise FieldError(f"cannot parse field spec {text!r}; expected GF(q) or GF(p^d)")
    base = int(m.group(1))
    if m.group(2):
        p, d = base, int(m.group(2))
        if not _is_prime(p):
            raise FieldError(f"{p} in {text!r} is not prime")
    else:
        p, d = _prime_power(base)
    return FieldSpec(p, d, tuple(modulus) if modulus else ())


# -- polynomials over GF(q): lists of codes, low -> high ------------------------

class Poly:
    """Dense univariate polynomial helpers over a FieldSpec (static namespace)."""

    @staticmethod
    def trim(a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return a

    @staticmethod
    def add(F: FieldSpec, a, b):
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        return Poly.trim(int(F.add(x, y)) for x, y in zip(a, b))

    @staticmethod
    def sub(F: FieldSpec, a, b):
        return Poly.add(F, a, [int(F.neg(c)) for c in b])

    @staticmethod
    def mul(F: FieldSpec, a, b):
        if not a or not b:
            return []
        if F.d == 1:
            return Poly.trim(int(c) for c in np.convolve(np.array(a, dtype=object),
                                                         np.array(b, dtype=object)) % F.p)
        out = [0] * (len(a) + len(b) - 1)
        mt, at = F.mul_table, F.add_table
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = int(at[out[i + j], mt[x, y]])
        return Poly.trim(out)

    @staticmethod
    def divmod(F: FieldSpec, a, b):
        a = Poly.trim(a)
        b = Poly.trim(b)
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = int(F.inv(b[-1]))
        quot = [0] * max(len(a) - len(b) + 1, 0)
        rem = list(a)
        while len(rem) >= len(b):
            c = int(F.mul(rem[-1], inv_lead))
            shift = len(rem) - len(b)
            quot[shift] = c
            for i, bc in enumerate(b):
                rem[shift + i] = int(F.sub(rem[shift + i], F.mul(c, bc)))
            rem = Poly.trim(rem)
        return Poly.trim(quot), rem

    @staticmethod
    def mod(F, a, b):
        return Poly.divmod(F, a, b)[1]

    @staticmethod
    def monic(F, a):
        a = Poly.trim(a)
        if not a:
            return a
        inv = int(F.inv(a[-1]))
        return [int(F.mul(c, inv)) for c in a]

    @staticmethod
    def gcd(F, a, b):
        a, b = Poly.trim(a), Poly.trim(b)
        while b:
            a, b = b, Poly.mod(F, a, b)
        return Poly.monic(F, a)

    @staticmethod
    def powmod(F, a, e: int, m):
        result = [1]
        base = Poly.mod(F, a, m)
        while e:
            if e & 1:
                result = Poly.mod(F, Poly.mul(F, result, base), m)
            base = Poly.mod(F, Poly.mul(F, base, base), m)
            e >>= 1
        return result

    @staticmethod
    def eval_matrix(F, a, mat: np.ndarray) -> np.ndarray:
        """Horner evaluation of polynomial ``a`` at a square matrix."""
        n = mat.shape[0]
        out = np.zeros((n, n), dtype=np.int64)
        for c in reversed(Poly.trim(a)):
            out = F.matmul(out, mat)
            if c:
                out[np.diag_indices(n)] = F.add(out[np.diag_indices(n)], c)
        return out

    @staticmethod
    def coprime_factor(F: FieldSpec, mu, rng: np.random.Generator):
        """Return a monic factor g of ``mu`` that is coprime to the cofactor
        ``mu / g^inf`` with both nontrivial, or None if ``mu`` is a power of
        one irreducible polynomial."""
        mu = Poly.monic(F, mu)
        if len(mu) <= 2:
            return None
        x = [0, 1]
        rest = list(mu)
        h = x
        deg = len(mu) - 1
        for i in range(1, deg + 1):
            h = Poly.powmod(F, h, F.q, rest) if len(rest) > 1 else []
            if len(rest) <= 1:
                return None
            g = Poly.gcd(F, rest, Poly.sub(F, h, x))
            if len(g) <= 1:
                continue
            # strip every factor of g from rest
            while True:
                c = Poly.gcd(F, rest, g)
                if len(c) <= 1:
                    break
                rest = Poly.divmod(F, rest, c)[0]
            if len(rest) > 1:
                return g
            if len(g) - 1 > i:
                return Poly._equal_degree_split(F, g, i, rng)
            return None
        return None

    @staticmethod
    def _equal_degree_split(F: FieldSpec, g, i: int, rng):
        n = len(g) - 1
        for _ in range(200):
            r = Poly.trim(int(c) for c in rng.integers(0, F.q, size=n))
            if len(r) <= 1:
                continue
            if F.p == 2:
                t, acc = r, r
                for _ in range(F.d * i - 1):
                    t = Poly.mod(F, Poly.mul(F, t, t), g)
                    acc = Poly.add(F, acc, t)
                cand = Poly.gcd(F, g, acc)
            else:
                w = Poly.powmod(F, r, (F.q**i - 1) // 2, g)
                cand = Poly.gcd(F, g, Poly.sub(F, w, [1]))
            if 1 < len(cand) < len(g):
                return cand
        return None  # pragma: no cover - probability ~2^-200
