"""Exact arithmetic in finite-field towers GF(p) <= GF(p^m) <= GF(p^N).

A field GF(p^N) is represented absolutely: an element is an integer code in
range(p**N) packing its coefficient vector over GF(p), little endian, in the
power basis of the canonical root of the defining polynomial.  Subfields
GF(p^m) for m | N are never re-represented; they are identified inside the
absolute field as the fixed sets of the Frobenius power x -> x**(p**m).

Polynomials over GF(p) appear as coefficient lists, little endian, with the
defining polynomial stored monic of length N + 1.
"""

from __future__ import annotations

import enum
import functools
import math
from typing import Sequence

import numpy as np


class SquareClass(enum.Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(p), used only to build and validate fields.
# ---------------------------------------------------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """a*b mod f over GF(p); f monic, deg(a), deg(b) < deg(f)."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for k in range(n):
            prod[d - n + k] = (prod[d - n + k] - c * f[k]) % p
    return _poly_trim(prod[:n] + [0] * max(0, n - len(prod)))


def _poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b):
            c = (r[-1] * inv) % p
            shift = len(r) - len(b)
            for k, bk in enumerate(b):
                r[shift + k] = (r[shift + k] - c * bk) % p
            r = _poly_trim(r)
            if not r:
                break
        a, b = b, r
    return a


def poly_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Deterministic irreducibility test: x^(p^n) == x mod f plus, for every
    prime r | n, gcd(x^(p^(n/r)) - x, f) = 1."""
    f = list(f)
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    g = x
    powers = {}
    for i in range(1, n + 1):
        g = _poly_powmod(g, p, f, p)
        powers[i] = g
    top = list(powers[n])
    # x^(p^n) - x must vanish mod f
    diff = list(top) + [0] * max(0, 2 - len(top))
    diff[1] = (diff[1] - 1) % p
    if _poly_trim(diff):
        return False
    for r in _prime_factors(n):
        g = list(powers[n // r])
        g = g + [0] * max(0, 2 - len(g))
        g[1] = (g[1] - 1) % p
        if len(_poly_gcd(g, f, p)) != 1:
            return False
    return True


def lex_smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n over GF(p), ordering the lower
    coefficient vectors (c0..c_{n-1}) as base-p integers."""
    for code in range(p ** n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if poly_is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError(f"no irreducible polynomial of degree {n} over GF({p})")


# ---------------------------------------------------------------------------
# The field itself.
# ---------------------------------------------------------------------------

class FiniteField:
    """GF(p**degree) with a fixed monic irreducible defining polynomial.

    Immutable after construction; all element operations are pure functions
    of (field, integer codes) and safe to share across threads.
    """

    def __init__(self, p: int, degree: int, poly: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if degree < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.degree = degree
        self.order = p ** degree
        if poly is None:
            self.poly = lex_smallest_irreducible(p, degree)
        else:
            poly = tuple(c % p for c in poly)
            if len(poly) != degree + 1 or poly[-1] != 1:
                raise ValueError("defining polynomial must be monic of the stated degree")
            if not poly_is_irreducible(poly, p):
                raise ValueError("defining polynomial is reducible")
            self.poly = poly
        self._build_tables()
        self._np_cache: dict = {}

    # -- construction helpers ------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        pa, pb = self.coeffs(a), self.coeffs(b)
        prod = _poly_mulmod(list(pa), list(pb), list(self.poly), self.p)
        return self.from_coeffs(prod)

    def _build_tables(self) -> None:
        n = self.order
        if n == 2:
            self._gen = 1
            self._exp = [1]
            self._log = [0, 0]
            return
        for cand in range(2, n):
            seq = [1]
            x = cand
            while x != 1:
                seq.append(x)
                x = self._slow_mul(x, cand)
                if len(seq) > n:
                    raise AssertionError("multiplicative order overflow")
            if len(seq) == n - 1:
                self._gen = cand
                self._exp = seq
                log = [0] * n
                for i, v in enumerate(seq):
                    log[v] = i
                self._log = log
                return
        raise AssertionError("no multiplicative generator found")

    # -- codecs ---------------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        """Little-endian coefficient vector over GF(p), length = degree."""
        out = []
        for _ in range(self.degree):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.degree:
            raise ValueError("too many coefficients for this field")
        x = 0
        for c in reversed([c % self.p for c in coeffs]):
            x = x * self.p + c
        return x

    def check_element(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.order:
            raise ValueError(f"{x!r} is not an element code of {self!r}")
        return int(x)

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def generator(self) -> int:
        return self._gen

    @property
    def canonical_root(self) -> int:
        """The class of x modulo the defining polynomial (code p); for a
        prime field the polynomial is x and the root is 0."""
        return self.p % self.order if self.degree == 1 else self.p

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.degree == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out, pw = 0, 1
        while a or b:
            out += ((a + b) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.degree == 1:
            return (-a) % p
        if p == 2:
            return a
        out, pw = 0, 1
        while a:
            out += ((p - a % p) % p) * pw
            a //= p
            pw *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a ** (p**k); the absolute Frobenius iterated k times."""
        if k < 0:
            raise ValueError("frobenius power must be >= 0")
        k %= self.degree
        return self.power(a, self.p ** k)

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.order - 1
        return n // math.gcd(n, self._log[a])

    # -- tower operations ------------------------------------------------------

    def check_subfield(self, m: int) -> int:
        if m < 1 or self.degree % m != 0:
            raise ValueError(f"{m} does not divide the extension degree {self.degree}")
        return m

    def subfield_order(self, m: int) -> int:
        self.check_subfield(m)
        return self.p ** m

    def tower_degree(self, m: int) -> int:
        """w = [GF(p^N) : GF(p^m)]."""
        self.check_subfield(m)
        return self.degree // m

    def is_in_subfield(self, a: int, m: int) -> bool:
        self.check_subfield(m)
        return self.frobenius(a, m) == a

    def relative_trace(self, a: int, m: int) -> int:
        """Tr to GF(p^m): sum of a**(q**i) for 0 <= i < w, q = p**m."""
        w = self.tower_degree(m)
        out, x = 0, a
        for _ in range(w):
            out = self.add(out, x)
            x = self.frobenius(x, m)
        return out

    def relative_norm(self, a: int, m: int) -> int:
        """Norm to GF(p^m): a ** ((p^N - 1) / (q - 1))."""
        self.check_subfield(m)
        if a == 0:
            return 0
        q = self.p ** m
        return self.power(a, (self.order - 1) // (q - 1))

    def square_class(self, a: int, m: int) -> SquareClass:
        """Square class of a nonzero subfield element; odd characteristic only
        (in characteristic 2 every element is a square and the distinction is
        meaningless)."""
        self.check_subfield(m)
        if self.p == 2:
            raise ValueError("square classes are trivial in characteristic 2")
        if a == 0:
            raise ValueError("zero has no square class")
        if not self.is_in_subfield(a, m):
            raise ValueError("element does not lie in the requested subfield")
        q = self.p ** m
        return SquareClass.SQUARE if self.power(a, (q - 1) // 2) == 1 else SquareClass.NONSQUARE

    def subfield_power_basis(self, m: int) -> tuple[int, ...]:
        """Basis {1, g, ..., g^(w-1)} of the field over GF(p^m), where g is the
        canonical root; g has degree N over GF(p), hence degree w over GF(p^m)."""
        w = self.tower_degree(m)
        g = self.canonical_root
        return tuple(self.power(g, i) for i in range(w)) if w > 1 else (1,)

    # -- numpy views -----------------------------------------------------------

    def np_exp(self) -> np.ndarray:
        if "exp" not in self._np_cache:
            self._np_cache["exp"] = np.asarray(self._exp, dtype=np.int64)
        return self._np_cache["exp"]

    def np_log(self) -> np.ndarray:
        if "log" not in self._np_cache:
            self._np_cache["log"] = np.asarray(self._log, dtype=np.int64)
        return self._np_cache["log"]

    def np_digits(self) -> np.ndarray:
        if "digits" not in self._np_cache:
            self._np_cache["digits"] = np.asarray(
                [self.coeffs(x) for x in range(self.order)], dtype=np.int64
            )
        return self._np_cache["digits"]

    def np_frobenius_map(self, k: int) -> np.ndarray:
        """Permutation array sending each code x to frobenius(x, k)."""
        k %= self.degree
        key = ("frob", k)
        if key not in self._np_cache:
            self._np_cache[key] = np.asarray(
                [self.frobenius(x, k) for x in range(self.order)], dtype=np.int64
            )
        return self._np_cache[key]

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "N": self.degree, "poly": list(self.poly)}

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteField":
        return cls(int(data["p"]), int(data["N"]), data.get("poly"))

    # -- dunder ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.degree == other.degree
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.poly))

    def __repr__(self) -> str:
        return f"GF({self.order})"


@functools.lru_cache(maxsize=64)
def canonical_field(p: int, degree: int) -> FiniteField:
    """The field with the deterministic (lex-smallest) defining polynomial;
    cached so tables are built once per tower level."""
    return FiniteField(p, degree)


def field_create(p: int, degree: int, poly: Sequence[int] | None = None) -> FiniteField:
    """Create GF(p**degree); with poly omitted the deterministic canonical
    polynomial is used and the instance is shared."""
    if poly is None:
        return canonical_field(p, degree)
    return FiniteField(p, degree, poly)


def element_to_json(field: FiniteField, x: int) -> list[int]:
    return list(field.coeffs(field.check_element(x)))


def element_from_json(field: FiniteField, coeffs: Sequence[int]) -> int:
    return field.from_coeffs(coeffs)
