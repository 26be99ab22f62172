"""
Arithmetic in finite fields F_q, q = p^m.

Elements are stored as canonical integers in [0, q): the base-p digits of
the integer are the coordinates in the polynomial basis, digit i being the
coefficient of x^i.  For m = 1 this is plain arithmetic mod p.

Most of the package exchanges field elements as these canonical integers
because basis labels of qudit states are tuples of them.  ``FieldElement``
wraps an integer together with its field for checked, operator-style use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

#: largest field order accepted by ``make_field``
DEFAULT_CAP = 1 << 16

#: fields at or below this order get precomputed log/exp tables
TABLE_LIMIT = 256


class FieldError(ValueError):
    """Invalid field construction or illegal operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
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
# polynomials over F_p as ascending coefficient lists

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead % p
        quot[shift] = factor
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - factor * bc) % p
        _trim(a)
    return quot, a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _digits(v: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        v, d = divmod(v, p)
        out.append(d)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2 over F_p."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in range(p ** d):
            divisor = _digits(tail, p, d) + [1]
            _, rem = _pdivmod(poly, divisor, p)
            if not rem:
                return False
    return True


def smallest_irreducible(p: int, m: int) -> list[int]:
    """
    Smallest monic irreducible polynomial of degree m over F_p.

    Polynomials are ordered by their base-p integer encoding, i.e. compared
    from the leading coefficient down, so for p = 2, m = 3 this yields
    x^3 + x + 1 rather than x^3 + x^2 + 1.
    """
    if m == 1:
        return [0, 1]
    for tail in range(p ** m):
        cand = _digits(tail, p, m) + [1]
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """
    The field F_q with q = p^m, in a fixed polynomial basis.

    Use :func:`make_field` or :func:`parse_field` to build one.  Two specs
    compare equal when p, m and the modulus agree.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    primitive: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.m}")
        mod = tuple(self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1 or any(not 0 <= c < self.p for c in mod):
            raise FieldError(f"modulus {list(mod)} is not monic of degree {self.m} over F_{self.p}")
        if self.m > 1 and not is_irreducible(mod, self.p):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)
        self._build_tables()
        object.__setattr__(self, "primitive", self._find_primitive())

    # identity ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FieldSpec({self.descriptor()})"

    @property
    def q(self) -> int:
        return self.p ** self.m

    def descriptor(self) -> str:
        """Text form ``p^m`` (prime fields) or ``p^m/c0,c1,...,cm``."""
        if self.m == 1:
            return f"{self.p}^1"
        return f"{self.p}^{self.m}/" + ",".join(str(c) for c in self.modulus)

    # integer-level arithmetic -----------------------------------------

    def _build_tables(self):
        q = self.q
        object.__setattr__(self, "_log", None)
        object.__setattr__(self, "_exp", None)
        if self.m == 1 or q > TABLE_LIMIT:
            return
        # brute-force a generator with the slow path, then tabulate its powers
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                object.__setattr__(self, "_exp", exp + exp)
                object.__setattr__(self, "_log", log)
                return
        raise FieldError("multiplicative group is not cyclic; modulus check failed")  # pragma: no cover

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        prod = _pmul(_digits(a, p, m), _digits(b, p, m), p)
        _, rem = _pdivmod(prod, self.modulus, p)
        return _undigits(rem, p)

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p, out, place = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        p, out, place = self.p, 0, 1
        while a:
            out += (-(a % p) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.descriptor())
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._euclid_inv(a)

    def _euclid_inv(self, a: int) -> int:
        p = self.p
        r0, r1 = list(self.modulus), _trim(_digits(a, p, self.m))
        t0, t1 = [], [1]
        while r1:
            quo, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            t0, t1 = t1, _psub(t0, _pmul(quo, t1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], p - 2, p)
        return _undigits([x * c % p for x in t0] + [0] * (self.m - len(t0)), p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        for g in range(1, self.q):
            if self.order(g) == self.q - 1:
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    # tables for vectorised work ------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        q = self.q
        return np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        return np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    # element-level API ---------------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def coerce(self, x) -> int:
        """Canonical integer for ``x`` (an int in range or a FieldElement of this field)."""
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise FieldError(f"element of {x.spec.descriptor()} used in {self.descriptor()}")
            return x.value
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x < self.q:
            return int(x)
        raise FieldError(f"{x!r} is not an element of {self.descriptor()}")

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific field; arithmetic never mixes fields."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldError(f"{self.value} out of range for {self.spec.descriptor()}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("operands belong to different fields")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            # small integers embed through the prime subfield
            return other % self.spec.p
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(self.spec, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.div(o, self.value))

    def __pow__(self, e: int):
        return self._wrap(self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.spec.inv(self.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@{self.spec.descriptor()}"


def make_field(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None,
               cap: int = DEFAULT_CAP) -> FieldSpec:
    """
    Build F_{p^m}.

    Without an explicit ``modulus`` the smallest monic irreducible polynomial
    (see :func:`smallest_irreducible`) is used, so the result is the same on
    every run.  For m = 1 the modulus is ``x`` by convention.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    if p ** m > cap:
        raise FieldError(f"field order {p}^{m} exceeds cap {cap}")
    if modulus is None:
        modulus = smallest_irreducible(p, m)
    return FieldSpec(p, m, tuple(modulus))


def parse_field(text: str, cap: int = DEFAULT_CAP) -> FieldSpec:
    """Parse ``p^m``, ``p^m/c0,...,cm`` or a bare prime ``p``."""
    text = text.strip()
    try:
        head, _, mod = text.partition("/")
        p_s, _, m_s = head.partition("^")
        p, m = int(p_s), int(m_s or 1)
        modulus = [int(c) for c in mod.split(",")] if mod else None
    except ValueError:
        raise FieldError(f"bad field descriptor {text!r}") from None
    return make_field(p, m, modulus, cap=cap)


def all_elements(spec: FieldSpec) -> list[FieldElement]:
    """Every element of the field in ascending canonical order."""
    return [FieldElement(spec, v) for v in range(spec.q)]
