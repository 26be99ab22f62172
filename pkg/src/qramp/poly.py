"""
Univariate polynomials over F_q with an explicit degree bound, the
evaluation map at a tuple of distinct points, Lagrange interpolation and a
small amount of dense linear algebra over F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .gf import FieldError, FieldSpec


@dataclass(frozen=True)
class Polynomial:
    """
    c_1 + c_2 x + ... + c_k x^(k-1), stored as the ascending tuple
    ``(c_1, ..., c_k)`` of canonical integers.

    ``len(coeffs)`` is the degree bound k; a polynomial of lower actual
    degree is zero padded rather than trimmed.
    """

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.spec.coerce(c) for c in self.coeffs))

    @classmethod
    def zero(cls, spec: FieldSpec, bound: int) -> "Polynomial":
        return cls(spec, (0,) * bound)

    @classmethod
    def constant(cls, spec: FieldSpec, c, bound: int = 1) -> "Polynomial":
        return cls(spec, (spec.coerce(c),) + (0,) * (bound - 1))

    @property
    def bound(self) -> int:
        return len(self.coeffs)

    def degree(self) -> int:
        """Actual degree; -1 for the zero polynomial."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def _same(self, other: "Polynomial"):
        if other.spec != self.spec:
            raise FieldError("polynomials over different fields")

    def padded(self, bound: int) -> "Polynomial":
        if bound < self.degree() + 1:
            raise ValueError(f"degree {self.degree()} does not fit bound {bound}")
        c = self.coeffs[:bound]
        return Polynomial(self.spec, c + (0,) * (bound - len(c)))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same(other)
        n = max(self.bound, other.bound)
        a = self.coeffs + (0,) * (n - self.bound)
        b = other.coeffs + (0,) * (n - other.bound)
        return Polynomial(self.spec, tuple(self.spec.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.spec, tuple(self.spec.neg(x) for x in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, a) -> "Polynomial":
        a = self.spec.coerce(a)
        return Polynomial(self.spec, tuple(self.spec.mul(a, x) for x in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._same(other)
        F = self.spec
        out = [0] * (self.bound + other.bound - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Polynomial(F, tuple(out))

    def shift(self, n: int) -> "Polynomial":
        """Multiply by x^n, growing the bound by n."""
        return Polynomial(self.spec, (0,) * n + self.coeffs)

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class PointSet:
    """Ordered, pairwise-distinct evaluation points."""

    spec: FieldSpec
    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(self.spec.coerce(x) for x in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError(f"evaluation points are not pairwise distinct: {list(pts)}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


def evaluate(f: Polynomial, x) -> int:
    """Horner evaluation of ``f`` at ``x``."""
    F = f.spec
    x = F.coerce(x)
    acc = 0
    for c in reversed(f.coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ev_map(f: Polynomial, pts: PointSet) -> tuple[int, ...]:
    if pts.spec != f.spec:
        raise FieldError("polynomial and points over different fields")
    return tuple(evaluate(f, x) for x in pts)


@lru_cache(maxsize=4096)
def lagrange_basis(pts: PointSet, i: int) -> Polynomial:
    """The polynomial equal to 1 at ``pts[i]`` and 0 at every other point."""
    if not 0 <= i < len(pts):
        raise IndexError(f"basis index {i} out of range for {len(pts)} points")
    F = pts.spec
    num = Polynomial(F, (1,))
    denom = 1
    xi = pts[i]
    for j, xj in enumerate(pts):
        if j != i:
            num = num * Polynomial(F, (F.neg(xj), 1))
            denom = F.mul(denom, F.sub(xi, xj))
    return num.scale(F.inv(denom))


def lagrange_interpolate(pts: PointSet, values: Sequence) -> Polynomial:
    """Unique polynomial of degree bound ``len(pts)`` through the given values."""
    if len(values) != len(pts):
        raise ValueError(f"{len(values)} values for {len(pts)} points")
    F = pts.spec
    out = [0] * len(pts)
    for i, v in enumerate(values):
        v = F.coerce(v)
        if v:
            for j, c in enumerate(lagrange_basis(pts, i).coeffs):
                if c:
                    out[j] = F.add(out[j], F.mul(v, c))
    return Polynomial(F, tuple(out))


def vandermonde(spec: FieldSpec, points: Iterable, cols: int) -> list[list[int]]:
    """Rows (1, x, x^2, ..., x^(cols-1)) for each point."""
    rows = []
    for x in points:
        x = spec.coerce(x)
        row, acc = [], 1
        for _ in range(cols):
            row.append(acc)
            acc = spec.mul(acc, x)
        rows.append(row)
    return rows


def mat_inverse(spec: FieldSpec, a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Gauss-Jordan inverse of a square matrix over F_q."""
    F = spec
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = F.inv(aug[col][col])
        aug[col] = [F.mul(inv, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_vec(spec: FieldSpec, a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            acc = spec.add(acc, spec.mul(x, y))
        out.append(acc)
    return out
