"""
Exact sparse pure states on registers of q-dimensional qudits.

Amplitudes are complex numbers with rational real and imaginary parts.  The
irrational normalisations that occur in secret sharing states are kept out
of the amplitudes: a state carries a global factor

    q^(-scale_exp / 2) * norm_div^(-1/2)

with ``scale_exp`` an integer and ``norm_div`` a positive rational, so that
every quantity that is observable (squared norms, reduced density matrices,
inner products up to phase) is an exact rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .gf import FieldSpec, parse_field

Ket = tuple[int, ...]

DEFAULT_CAP_KETS = 10_000_000
DEFAULT_CAP_DM = 6561           # 9^4: four registers of the largest small field
DEFAULT_CAP_BIJECTION = 1 << 24


class CapExceeded(RuntimeError):
    """An enumeration or dense-matrix limit would be exceeded."""


# ---------------------------------------------------------------------------

class ComplexRational:
    """re + i*im with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    def __add__(self, o):
        if type(o) is not ComplexRational:
            o = ComplexRational.coerce(o)
        if not self.im and not o.im:
            return _cr(self.re + o.re, _ZERO)
        return _cr(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = ComplexRational.coerce(o)
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return ComplexRational.coerce(o) - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, o):
        if type(o) is not ComplexRational:
            o = ComplexRational.coerce(o)
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return _cr(a * c, _ZERO)
        return _cr(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = ComplexRational.coerce(o)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        n = self * o.conj()
        return ComplexRational(n.re / d, n.im / d)

    def conj(self) -> "ComplexRational":
        return self if not self.im else _cr(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, complex, ComplexRational)):
            o = ComplexRational.coerce(o)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"CR({self.re})"
        return f"CR({self.re}, {self.im}i)"

    def to_text(self) -> str:
        return (f"{self.re.numerator}/{self.re.denominator} "
                f"{self.im.numerator}/{self.im.denominator}")

    @classmethod
    def from_text(cls, re: str, im: str) -> "ComplexRational":
        return cls(Fraction(re), Fraction(im))


_ZERO = Fraction(0)


def _cr(re: Fraction, im: Fraction) -> ComplexRational:
    # trusted constructor: both parts are already Fractions
    z = object.__new__(ComplexRational)
    z.re = re
    z.im = im
    return z


ONE = ComplexRational(1)
I = ComplexRational(0, 1)


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseState:
    """
    Pure state on ``registers`` qudits: basis tuple -> amplitude.

    Treat instances as immutable; zero amplitudes are dropped on construction.
    """

    spec: FieldSpec
    registers: int
    amps: Mapping[Ket, ComplexRational]
    scale_exp: int = 0
    norm_div: Fraction = Fraction(1)

    def __post_init__(self):
        clean = {}
        q = self.spec.q
        for ket, a in self.amps.items():
            ket = tuple(int(x) for x in ket)
            if len(ket) != self.registers:
                raise ValueError(f"ket {ket} does not have {self.registers} registers")
            if any(not 0 <= x < q for x in ket):
                raise ValueError(f"ket {ket} has labels outside F_{q}")
            a = ComplexRational.coerce(a)
            if a:
                clean[ket] = a
        object.__setattr__(self, "amps", clean)
        nd = Fraction(self.norm_div)
        if nd <= 0:
            raise ValueError("norm_div must be positive")
        object.__setattr__(self, "norm_div", nd)

    @property
    def global_sq(self) -> Fraction:
        """Square of the global factor multiplying every stored amplitude."""
        return Fraction(1, self.spec.q ** self.scale_exp) / self.norm_div if self.scale_exp >= 0 \
            else Fraction(self.spec.q ** -self.scale_exp) / self.norm_div

    def norm_sq(self) -> Fraction:
        return sum((a.abs2() for a in self.amps.values()), Fraction(0)) * self.global_sq

    def is_normalized(self) -> bool:
        return self.norm_sq() == 1

    def normalized(self) -> "SparseState":
        n = self.norm_sq()
        if n == 0:
            raise ValueError("cannot normalise the zero state")
        return SparseState(self.spec, self.registers, self.amps, self.scale_exp, self.norm_div * n)

    def kets(self) -> list[Ket]:
        return sorted(self.amps)

    def support(self) -> frozenset:
        return frozenset(self.amps)

    def __len__(self):
        return len(self.amps)


def basis_state(spec: FieldSpec, indices: Sequence) -> SparseState:
    """|i_1> (x) ... (x) |i_m> with amplitude 1."""
    ket = tuple(spec.coerce(x) for x in indices)
    return SparseState(spec, len(ket), {ket: ONE})


def tensor(a: SparseState, b: SparseState) -> SparseState:
    if a.spec != b.spec:
        raise ValueError("states over different fields")
    amps = {ka + kb: x * y for ka, x in a.amps.items() for kb, y in b.amps.items()}
    return SparseState(a.spec, a.registers + b.registers, amps,
                       a.scale_exp + b.scale_exp, a.norm_div * b.norm_div)


def superpose(terms: Iterable[tuple[object, SparseState]]) -> SparseState:
    """
    Linear combination sum_j coeff_j * state_j, exactly.

    The result uses the global factor of the first term; the others must
    differ from it by a rational-square ratio (same q-exponent parity).
    """
    terms = list(terms)
    if not terms:
        raise ValueError("empty superposition")
    first = terms[0][1]
    spec, regs, g0 = first.spec, first.registers, first.global_sq
    acc: dict[Ket, ComplexRational] = {}
    for coeff, st in terms:
        if st.registers != regs:
            raise ValueError(f"register count mismatch: {st.registers} vs {regs}")
        if st.spec != spec:
            raise ValueError("states over different fields")
        ratio = _rational_sqrt(st.global_sq / g0)
        if ratio is None:
            raise ValueError("global factors differ by an irrational ratio")
        c = ComplexRational.coerce(coeff) * ratio
        for ket, a in st.amps.items():
            acc[ket] = acc.get(ket, ComplexRational()) + c * a
    return SparseState(spec, regs, acc, first.scale_exp, first.norm_div)


def uniform_resource(spec: FieldSpec, count: int, cap: int = DEFAULT_CAP_KETS) -> SparseState:
    """q^(-count/2) * sum_r |r> (x) |r> over r in F_q^count (2*count registers)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if spec.q ** count > cap:
        raise CapExceeded(f"resource state needs {spec.q}^{count} kets (cap {cap})")
    amps = {r + r: ONE for r in itertools.product(range(spec.q), repeat=count)}
    return SparseState(spec, 2 * count, amps, scale_exp=count)


def permute_registers(state: SparseState, order: Sequence[int]) -> SparseState:
    """New register i holds old register ``order[i]``."""
    if sorted(order) != list(range(state.registers)):
        raise ValueError(f"{list(order)} is not a permutation of the registers")
    amps = {tuple(k[j] for j in order): a for k, a in state.amps.items()}
    return SparseState(state.spec, state.registers, amps, state.scale_exp, state.norm_div)


# ---------------------------------------------------------------------------

class BasisMap:
    """
    A relabelling of computational basis tuples, F_q^in -> F_q^out.

    ``func`` acts on one tuple.  ``vectorized`` (optional) acts on an integer
    array of shape (N, in_arity) and is used for exhaustive bijectivity
    checks; ``inverse`` (optional) is used for sampled checks when the domain
    is too large to enumerate.
    """

    def __init__(self, spec: FieldSpec, in_arity: int, out_arity: int,
                 func: Callable[[Ket], Ket],
                 vectorized: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 inverse: Optional[Callable[[Ket], Ket]] = None,
                 name: str = "map"):
        self.spec = spec
        self.in_arity = in_arity
        self.out_arity = out_arity
        self.func = func
        self.vectorized = vectorized
        self.inverse = inverse
        self.name = name
        self._verified = False

    def __call__(self, ket: Ket) -> Ket:
        return tuple(self.func(tuple(ket)))

    def verify(self, cap: int = DEFAULT_CAP_BIJECTION, loop_cap: int = 1 << 16,
               samples: int = 2000, seed: int = 0) -> None:
        """Raise ``ValueError`` unless the map is a bijection (result cached)."""
        if self._verified:
            return
        q, n = self.spec.q, self.in_arity
        if self.out_arity != n:
            raise ValueError(f"{self.name}: arity {n} -> {self.out_arity} cannot be a bijection")
        size = q ** n
        if self.vectorized is not None and size <= cap:
            self._verify_vectorized(size)
        elif size <= cap and (size <= loop_cap or self.inverse is None):
                seen = set()
                for ket in itertools.product(range(q), repeat=n):
                    out = self(ket)
                    if len(out) != n or any(not 0 <= x < q for x in out):
                        raise ValueError(f"{self.name}: {ket} maps outside F_q^{n}")
                    seen.add(out)
                if len(seen) != size:
                    raise ValueError(f"{self.name} is not injective ({len(seen)} images of {size})")
        else:
            if self.inverse is None:
                raise CapExceeded(f"{self.name}: domain {q}^{n} over cap and no inverse supplied")
            import random
            rng = random.Random(seed)
            for _ in range(samples):
                ket = tuple(rng.randrange(q) for _ in range(n))
                if tuple(self.inverse(self(ket))) != ket:
                    raise ValueError(f"{self.name}: inverse check failed at {ket}")
        self._verified = True

    def _verify_vectorized(self, size: int, chunk: int = 1 << 20) -> None:
        q, n = self.spec.q, self.in_arity
        seen = np.zeros(size, dtype=bool)
        weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        for start in range(0, size, chunk):
            codes = np.arange(start, min(start + chunk, size), dtype=np.int64)
            dom = (codes[:, None] // weights[None, :]) % q
            img = np.asarray(self.vectorized(dom))
            if img.shape != dom.shape or img.min() < 0 or img.max() >= q:
                raise ValueError(f"{self.name}: image outside F_q^{n}")
            out = img @ weights
            if seen[out].any() or len(np.unique(out)) != len(out):
                raise ValueError(f"{self.name} is not injective")
            seen[out] = True


def apply_basis_map(state: SparseState, regs: Sequence[int], bmap: BasisMap,
                    check: bool = True) -> SparseState:
    """
    Relabel registers ``regs`` of every ket through ``bmap``.

    The untouched registers keep their relative order and the map's output
    registers are inserted where the first selected register was.
    """
    regs = list(regs)
    if len(set(regs)) != len(regs) or any(not 0 <= r < state.registers for r in regs):
        raise ValueError(f"bad register selection {regs} for {state.registers} registers")
    if len(regs) != bmap.in_arity:
        raise ValueError(f"{bmap.name} takes {bmap.in_arity} registers, got {len(regs)}")
    if check:
        bmap.verify()
    sel = set(regs)
    rest_idx = [i for i in range(state.registers) if i not in sel]
    at = sum(1 for i in rest_idx if i < min(regs)) if regs else 0
    amps = {}
    for ket, a in state.amps.items():
        out = bmap(tuple(ket[r] for r in regs))
        rest = [ket[i] for i in rest_idx]
        new = tuple(rest[:at]) + out + tuple(rest[at:])
        if new in amps:
            raise ValueError(f"{bmap.name} sent two kets to {new}")
        amps[new] = a
    return SparseState(state.spec, len(rest_idx) + bmap.out_arity, amps,
                       state.scale_exp, state.norm_div)


def inner_product(a: SparseState, b: SparseState) -> tuple[ComplexRational, Fraction]:
    """
    <a|b> as ``(z, g)`` meaning z * sqrt(g); g is the product of the two
    squared global factors, so |<a|b>|^2 = |z|^2 * g exactly.
    """
    if a.registers != b.registers:
        raise ValueError("register count mismatch")
    small, big = (a, b) if len(a.amps) <= len(b.amps) else (b, a)
    z = ComplexRational()
    for ket, x in small.amps.items():
        y = big.amps.get(ket)
        if y is not None:
            z = z + (a.amps[ket].conj() * b.amps[ket])
    return z, a.global_sq * b.global_sq


def states_equal(a: SparseState, b: SparseState) -> bool:
    """True iff a = lambda * b for some unit-modulus lambda."""
    if a.registers != b.registers:
        raise ValueError(f"register count mismatch: {a.registers} vs {b.registers}")
    if a.spec != b.spec:
        return False
    if a.amps.keys() != b.amps.keys():
        return False
    if not a.amps:
        return True
    pivot = next(iter(a.amps))
    ap, bp = a.amps[pivot], b.amps[pivot]
    if ap.abs2() * a.global_sq != bp.abs2() * b.global_sq:
        return False
    return all(x * bp == ap * b.amps[k] for k, x in a.amps.items())


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityMatrix:
    """
    Reduced state on an ordered register subset.

    Entries are exact and already include the state's global factor.  Only
    nonzero entries are stored; indices are basis tuples over ``subset``.
    """

    spec: FieldSpec
    subset: tuple[int, ...]
    entries: Mapping[tuple[Ket, Ket], ComplexRational] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(self.subset))
        object.__setattr__(self, "entries", {k: v for k, v in self.entries.items() if v})

    @property
    def dim(self) -> int:
        return self.spec.q ** len(self.subset)

    def __getitem__(self, uv: tuple[Ket, Ket]) -> ComplexRational:
        return self.entries.get(uv, ComplexRational())

    def trace(self) -> ComplexRational:
        t = ComplexRational()
        for (u, v), x in self.entries.items():
            if u == v:
                t = t + x
        return t

    def is_hermitian(self) -> bool:
        return all(self[(v, u)] == x.conj() for (u, v), x in self.entries.items())

    def __matmul__(self, other: "DensityMatrix") -> "DensityMatrix":
        rows: dict[Ket, list] = {}
        for (u, v), y in other.entries.items():
            rows.setdefault(u, []).append((v, y))
        out: dict = {}
        for (u, w), x in self.entries.items():
            for v, y in rows.get(w, ()):
                out[(u, v)] = out.get((u, v), ComplexRational()) + x * y
        return DensityMatrix(self.spec, self.subset, out)

    def power_traces(self, count: int) -> list[ComplexRational]:
        """tr(rho), tr(rho^2), ..., tr(rho^count)."""
        out, acc = [], self
        for _ in range(count):
            out.append(acc.trace())
            acc = acc @ self
        return out

    def nonzero_charpoly(self, rank_bound: int) -> list[ComplexRational]:
        """
        Elementary symmetric functions e_1..e_r of the eigenvalues, from power
        sums via Newton's identities.  For r >= rank these are, up to sign,
        the coefficients of the characteristic polynomial with the zero
        eigenvalues divided out, so they are comparable across dimensions.
        """
        p = self.power_traces(rank_bound)
        e = [ONE]
        for j in range(1, rank_bound + 1):
            acc = ComplexRational()
            for i in range(1, j + 1):
                term = e[j - i] * p[i - 1]
                acc = acc + term if i % 2 == 1 else acc - term
            e.append(acc * Fraction(1, j))
        return e[1:]

    def index_tuples(self) -> list[Ket]:
        return list(itertools.product(range(self.spec.q), repeat=len(self.subset)))

    def is_psd(self, max_dim: int = 256) -> bool:
        """Exact LDL* test on the support of the matrix (dense, small only)."""
        idx = sorted({u for (u, _) in self.entries} | {v for (_, v) in self.entries})
        n = len(idx)
        if n > max_dim:
            raise CapExceeded(f"PSD check on {n} x {n} support exceeds {max_dim}")
        pos = {u: i for i, u in enumerate(idx)}
        a = [[ComplexRational() for _ in range(n)] for _ in range(n)]
        for (u, v), x in self.entries.items():
            a[pos[u]][pos[v]] = x
        for k in range(n):
            d = a[k][k]
            if d.im or d.re < 0:
                return False
            if d.re == 0:
                if any(a[k][j] for j in range(k + 1, n)):
                    return False
                continue
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] / d
                    for j in range(k + 1, n):
                        if a[k][j]:
                            a[i][j] = a[i][j] - f * a[k][j]
        return True

    def to_text(self) -> str:
        """Nonzero entries in row-major order: ``<row> <col> re im`` per line."""
        q = self.spec.q
        width = len(self.subset)
        weights = [q ** (width - 1 - i) for i in range(width)]

        def code(t):
            return sum(x * w for x, w in zip(t, weights))

        lines = [f"qramp-dm v1; field={self.spec.descriptor()}; "
                 f"subset={','.join(str(i) for i in self.subset)}; dim={self.dim}"]
        for (u, v), x in sorted(self.entries.items(), key=lambda kv: (code(kv[0][0]), code(kv[0][1]))):
            lines.append(f"{code(u)} {code(v)} {x.to_text()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DensityMatrix":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        hdr = _parse_header(lines[0], "qramp-dm v1")
        spec = parse_field(hdr["field"])
        subset = tuple(int(x) for x in hdr["subset"].split(",")) if hdr["subset"] else ()
        width = len(subset)
        entries = {}
        for ln in lines[1:]:
            r, c, re, im = ln.split()
            entries[(_decode(int(r), spec.q, width), _decode(int(c), spec.q, width))] = \
                ComplexRational.from_text(re, im)
        return cls(spec, subset, entries)


def _decode(code: int, q: int, width: int) -> Ket:
    out = []
    for _ in range(width):
        code, d = divmod(code, q)
        out.append(d)
    return tuple(reversed(out))


def partial_trace(state: SparseState, keep: Sequence[int], cap_dm: int = DEFAULT_CAP_DM) -> DensityMatrix:
    """
    rho[u, v] = sum_w psi(u, w) conj(psi(v, w)), w over the traced registers,
    computed from the sparse support only.
    """
    keep = tuple(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= r < state.registers for r in keep):
        raise ValueError(f"bad subset {keep} for {state.registers} registers")
    if state.spec.q ** len(keep) > cap_dm:
        raise CapExceeded(f"density matrix of dimension {state.spec.q}^{len(keep)} exceeds cap {cap_dm}")
    ks = set(keep)
    rest = [i for i in range(state.registers) if i not in ks]
    groups: dict[Ket, list] = {}
    for ket, a in state.amps.items():
        w = tuple(ket[i] for i in rest)
        groups.setdefault(w, []).append((tuple(ket[i] for i in keep), a))
    g = state.global_sq
    entries: dict = {}
    for items in groups.values():
        for u, x in items:
            for v, y in items:
                key = (u, v)
                entries[key] = entries.get(key, ComplexRational()) + x * y.conj()
    if g != 1:
        entries = {k: v * g for k, v in entries.items()}
    return DensityMatrix(state.spec, keep, entries)


def dm_equal(a: DensityMatrix, b: DensityMatrix) -> bool:
    """Exact entrywise equality."""
    if len(a.subset) != len(b.subset) or a.spec != b.spec:
        raise ValueError("density matrices of different shape")
    return a.entries == b.entries


def maximally_mixed(spec: FieldSpec, subset: Sequence[int]) -> DensityMatrix:
    subset = tuple(subset)
    d = spec.q ** len(subset)
    c = ComplexRational(Fraction(1, d))
    return DensityMatrix(spec, subset, {(u, u): c for u in itertools.product(range(spec.q), repeat=len(subset))})


# ---------------------------------------------------------------------------
# text format

def _parse_header(line: str, magic: str) -> dict[str, str]:
    parts = [p.strip() for p in line.split(";")]
    if parts[0] != magic:
        raise ValueError(f"expected header {magic!r}, got {parts[0]!r}")
    out = {}
    for p in parts[1:]:
        k, _, v = p.partition("=")
        out[k.strip()] = v.strip()
    return out


def dumps_state(state: SparseState) -> str:
    """
    Text form: a header line, then one line per ket (sorted
    lexicographically) holding the labels followed by ``re im`` as fractions.
    """
    hdr = (f"qramp-state v1; field={state.spec.descriptor()}; "
           f"registers={state.registers}; scale_exp={state.scale_exp}")
    if state.norm_div != 1:
        hdr += f"; norm_div={state.norm_div.numerator}/{state.norm_div.denominator}"
    lines = [hdr]
    for ket in state.kets():
        lines.append(" ".join([*(str(x) for x in ket), state.amps[ket].to_text()]))
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> SparseState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty state text")
    hdr = _parse_header(lines[0], "qramp-state v1")
    spec = parse_field(hdr["field"])
    regs = int(hdr["registers"])
    amps = {}
    for ln in lines[1:]:
        tok = ln.split()
        if len(tok) != regs + 2:
            raise ValueError(f"ket line has {len(tok)} fields, expected {regs + 2}: {ln!r}")
        ket = tuple(int(x) for x in tok[:regs])
        if ket in amps:
            raise ValueError(f"duplicate ket {ket}")
        amps[ket] = ComplexRational.from_text(tok[regs], tok[regs + 1])
    return SparseState(spec, regs, amps, int(hdr["scale_exp"]),
                       Fraction(hdr.get("norm_div", "1")))
