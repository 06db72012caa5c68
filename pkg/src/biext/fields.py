"""Arithmetic in an explicit finite field F_p[x]/(m(x))."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence


# -- polynomials over F_p as coefficient lists, constant term first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result, base = [1], poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin's test: m | x^(p^k) - x and gcd(m, x^(p^(k/r)) - x) = 1 for primes r | k."""
    k = len(m) - 1
    if k < 1 or m[-1] % p == 0:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if poly_sub(poly_powmod(x, p ** k, m, p), x, p):
        return False
    for r in _prime_factors(k):
        h = poly_sub(poly_powmod(x, p ** (k // r), m, p), x, p)
        if len(poly_gcd(m, h, p)) > 1:
            return False
    return True


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The first monic irreducible of degree k in lexicographic order of coefficients."""
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        m = list(tail) + [1]
        if m[0] and is_irreducible(m, p):
            return tuple(m)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


LOG_TABLE_LIMIT = 1 << 14


@dataclass(frozen=True)
class FiniteField:
    p: int
    k: int = 1
    modulus: tuple[int, ...] = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_irreducible(self.p, self.k))
        m = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", m)
        if len(m) - 1 != self.k or m[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.k}")
        if not is_irreducible(list(m), self.p):
            raise ValueError(f"modulus {m} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p ** self.k

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        coeffs = poly_mod(coeffs, self.modulus, self.p) if len(coeffs) > self.k else coeffs
        return FieldElement(self, tuple(coeffs) + (0,) * (self.k - len(coeffs)))

    @cached_property
    def zero(self) -> FieldElement:
        return self(0)

    @cached_property
    def one(self) -> FieldElement:
        return self(1)

    @cached_property
    def gen(self) -> FieldElement:
        """The class of x."""
        return self([0, 1])

    def elements(self) -> Iterator[FieldElement]:
        for c in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, tuple(reversed(c)))

    def from_index(self, i: int) -> FieldElement:
        coeffs = []
        for _ in range(self.k):
            i, r = divmod(i, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def random(self, rng) -> FieldElement:
        return self.from_index(rng.randrange(self.q))

    @cached_property
    def _log_tables(self) -> tuple[dict, list] | None:
        """Discrete log and antilog tables for small extension fields, else None."""
        if self.k == 1 or self.q > LOG_TABLE_LIMIT:
            return None
        n = self.q - 1
        for c in itertools.product(range(self.p), repeat=self.k):
            g = list(reversed(c))
            if not any(g):
                continue
            powers, x = [], [1] + [0] * (self.k - 1)
            for _ in range(n):
                powers.append(tuple(x))
                x = poly_mod(poly_mul(x, g, self.p), self.modulus, self.p)
                x = x + [0] * (self.k - len(x))
            if len(set(powers)) == n:
                exp = [FieldElement(self, t) for t in powers]
                return {t: i for i, t in enumerate(powers)}, exp
        raise ArithmeticError("no primitive element found")

    @cached_property
    def _sqrt_table(self) -> dict:
        table = {}
        for x in self.elements():
            table.setdefault(x * x, x)
        return table

    def sqrt(self, a: FieldElement) -> FieldElement | None:
        return self._sqrt_table.get(a)

    def is_square(self, a: FieldElement) -> bool:
        return a in self._sqrt_table

    def __str__(self) -> str:
        return f"F_{self.q}" if self.k == 1 else f"F_{self.p}^{self.k}"

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


@dataclass(frozen=True)
class FieldElement:
    F: FiniteField = field(repr=False)
    c: tuple[int, ...]

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.F is not self.F and other.F != self.F:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.F(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.F.p
        if self.F.k == 1:
            return FieldElement(self.F, ((self.c[0] + other.c[0]) % p,))
        return FieldElement(self.F, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.F.p
        return FieldElement(self.F, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.F.k == 1:
            return FieldElement(self.F, ((self.c[0] - other.c[0]) % self.F.p,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        if F.k == 1:
            return FieldElement(F, (self.c[0] * other.c[0] % F.p,))
        tables = F._log_tables
        if tables is not None:
            if not self or not other:
                return F.zero
            log, exp = tables
            return exp[(log[self.c] + log[other.c]) % (F.q - 1)]
        prod = poly_mod(poly_mul(self.c, other.c, F.p), F.modulus, F.p)
        return FieldElement(F, tuple(prod) + (0,) * (F.k - len(prod)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.F.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.F.k == 1:
            return FieldElement(self.F, (pow(self.c[0], -1, self.F.p),))
        tables = self.F._log_tables
        if tables is not None:
            log, exp = tables
            return exp[-log[self.c] % (self.F.q - 1)]
        return self ** (self.F.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.F(other) * self.inverse()

    def __bool__(self) -> bool:
        return any(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.F(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.c == other.c and self.F.p == other.F.p and self.F.modulus == other.F.modulus

    def __hash__(self) -> int:
        return hash(self.c)

    def frobenius(self) -> FieldElement:
        return self ** self.F.p

    def multiplicative_order(self) -> int:
        if not self:
            raise ValueError("zero has no multiplicative order")
        n = self.F.q - 1
        order = n
        for r in _prime_factors(n):
            while order % r == 0 and (self ** (order // r)) == self.F.one:
                order //= r
        return order

    def sort_key(self) -> tuple[int, ...]:
        return tuple(reversed(self.c))

    def to_json(self) -> list[str] | str:
        return str(self.c[0]) if self.F.k == 1 else [str(x) for x in self.c]

    def __repr__(self) -> str:
        if self.F.k == 1:
            return str(self.c[0])
        terms = [str(x) if i == 0 else (f"{x}a" if i == 1 else f"{x}a^{i}")
                 for i, x in enumerate(self.c) if x]
        return "+".join(terms) if terms else "0"
