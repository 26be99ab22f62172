"""
The two (k, L, n) ramp encoders, their advance-sharing variants and
reconstruction from a qualified set.

Share and register indices are 0-based throughout the Python API; the CLI
translates to the 1-based share numbering used in reports.

Both schemes encode the basis secret |s> as the uniform superposition of
evaluation vectors (f_c(alpha_1), ..., f_c(alpha_n)) over a coset of
q^(k-L) coefficient vectors c:

* ``ogawa``: c_1..c_L equal the secret symbols;
* ``zm``: f_c(beta_i) = s_i for the extra points beta_1..beta_L.

Advance sharing hands out one half of q^(-t/2) sum_r |r>|r> (t = k-L) before
the secret exists; afterwards a basis relabelling of (kept half, secret)
produces the remaining n - t shares.
"""

from __future__ import annotations

import hashlib
import itertools
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .gf import FieldSpec, parse_field
from .poly import (Polynomial, PointSet, evaluate, lagrange_basis, lagrange_interpolate,
                   mat_inverse, vandermonde)
from .qstate import (DEFAULT_CAP_KETS, BasisMap, CapExceeded, ComplexRational, SparseState,
                     apply_basis_map, basis_state, permute_registers, tensor, uniform_resource)

OGAWA = "ogawa"
ZM = "zm"
KINDS = (OGAWA, ZM)


class SchemeError(ValueError):
    """Invalid scheme parameters or misuse of a scheme operation."""


class AdvanceError(SchemeError):
    """Advance-sharing request that cannot be honoured."""


class ReconstructionError(SchemeError):
    """Share state or share subset does not allow reconstruction."""


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchemeParams:
    spec: FieldSpec
    kind: str
    n: int
    k: int
    L: int
    alphas: PointSet
    betas: PointSet = None

    def __post_init__(self):
        F = self.spec
        if self.kind not in KINDS:
            raise SchemeError(f"unknown scheme {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.alphas, PointSet):
            object.__setattr__(self, "alphas", PointSet(F, tuple(self.alphas)))
        betas = self.betas if self.betas is not None else ()
        if not isinstance(betas, PointSet):
            betas = PointSet(F, tuple(betas))
        object.__setattr__(self, "betas", betas)
        n, k, L = self.n, self.k, self.L
        if not 1 <= L <= k <= n:
            raise SchemeError(f"need 1 <= L <= k <= n, got k={k} L={L} n={n}")
        if n != 2 * k - L:
            raise SchemeError(f"pure-state ramp scheme needs n = 2k - L, got n={n} k={k} L={L}")
        if len(self.alphas) != n:
            raise SchemeError(f"{len(self.alphas)} alphas given for n={n}")
        if self.kind == OGAWA:
            if n > F.q - 1:
                raise SchemeError(f"ogawa allows at most q-1 = {F.q - 1} shares, got n={n}")
            if 0 in self.alphas.points:
                raise SchemeError("ogawa requires nonzero alphas")
            if len(betas):
                raise SchemeError("ogawa takes no betas")
        else:
            if n > F.q - L:
                raise SchemeError(f"zm allows at most q-L = {F.q - L} shares, got n={n}")
            if len(betas) != L:
                raise SchemeError(f"zm needs L={L} betas, got {len(betas)}")
            if set(self.alphas.points) & set(betas.points):
                raise SchemeError("zm alphas and betas must be pairwise distinct")

    @property
    def t(self) -> int:
        """k - L: the number of shares that can be handed out in advance."""
        return self.k - self.L

    @property
    def q(self) -> int:
        return self.spec.q

    def descriptor(self) -> str:
        return (f"scheme={self.kind} field={self.spec.descriptor()} n={self.n} k={self.k} L={self.L} "
                f"alphas={','.join(map(str, self.alphas))} betas={','.join(map(str, self.betas))}")

    def params_hash(self) -> str:
        return hashlib.sha256(self.descriptor().encode()).hexdigest()[:12]

    @classmethod
    def from_descriptor(cls, text: str) -> "SchemeParams":
        kv = dict(tok.split("=", 1) for tok in text.split())
        spec = parse_field(kv["field"])

        def ints(s):
            return tuple(int(x) for x in s.split(",")) if s else ()

        return cls(spec, kv["scheme"], int(kv["n"]), int(kv["k"]), int(kv["L"]),
                   ints(kv["alphas"]), ints(kv.get("betas", "")))

    def check_secret(self, s: Sequence) -> tuple[int, ...]:
        if len(s) != self.L:
            raise SchemeError(f"secret must have L={self.L} symbols, got {len(s)}")
        return tuple(self.spec.coerce(x) for x in s)

    def all_secrets(self):
        return itertools.product(range(self.q), repeat=self.L)


def default_points(spec: FieldSpec, kind: str, n: int, L: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    Evaluation points used when none are given: powers g^1, g^2, ... of the
    primitive element g, and for zm the betas continue the same list with 0
    appended at the end.
    """
    g = spec.primitive
    powers = [spec.pow(g, i) for i in range(1, spec.q)]
    if kind == OGAWA:
        return tuple(powers[:n]), ()
    pts = powers + [0]
    return tuple(pts[:n]), tuple(pts[n:n + L])


def make_params(spec: FieldSpec, kind: str, n: int, k: int, L: int,
                alphas: Optional[Sequence[int]] = None,
                betas: Optional[Sequence[int]] = None) -> SchemeParams:
    da, db = default_points(spec, kind, n, L) if n <= spec.q else ((), ())
    return SchemeParams(spec, kind, n, k, L,
                        tuple(alphas) if alphas is not None else da,
                        tuple(betas) if betas is not None else db)


# ---------------------------------------------------------------------------
# coefficient sets

def _require(params: SchemeParams, kind: str):
    if params.kind != kind:
        raise SchemeError(f"operation needs a {kind} scheme, got {params.kind}")


def coeff_set_ogawa(params: SchemeParams, s: Sequence) -> frozenset:
    """All c in F_q^k whose first L entries are the secret."""
    _require(params, OGAWA)
    s = params.check_secret(s)
    return frozenset(s + tail for tail in itertools.product(range(params.q), repeat=params.t))


def _zm_solver(params: SchemeParams):
    """(V_head^-1, V_tail) for the system V_head c_head + V_tail c_tail = s."""
    V = vandermonde(params.spec, params.betas, params.k)
    head = [row[:params.L] for row in V]
    tail = [row[params.L:] for row in V]
    return mat_inverse(params.spec, head), tail


def coeff_set_zm(params: SchemeParams, s: Sequence) -> frozenset:
    """All c in F_q^k with f_c(beta_i) = s_i; the last k-L entries are free."""
    _require(params, ZM)
    s = params.check_secret(s)
    F = params.spec
    head_inv, tail = _zm_solver(params)
    out = set()
    for free in itertools.product(range(params.q), repeat=params.t):
        rhs = []
        for i, si in enumerate(s):
            acc = si
            for a, c in zip(tail[i], free):
                acc = F.sub(acc, F.mul(a, c))
            rhs.append(acc)
        head = []
        for row in head_inv:
            acc = 0
            for a, v in zip(row, rhs):
                acc = F.add(acc, F.mul(a, v))
            head.append(acc)
        out.add(tuple(head) + free)
    return frozenset(out)


def coeff_set(params: SchemeParams, s: Sequence) -> frozenset:
    return coeff_set_ogawa(params, s) if params.kind == OGAWA else coeff_set_zm(params, s)


# ---------------------------------------------------------------------------
# encoders

def as_secret_state(params: SchemeParams, secret) -> SparseState:
    """Accept a basis tuple or an L-register state."""
    if isinstance(secret, SparseState):
        if secret.registers != params.L:
            raise SchemeError(f"secret state has {secret.registers} registers, expected L={params.L}")
        if secret.spec != params.spec:
            raise SchemeError("secret state is over a different field")
        return secret
    return basis_state(params.spec, params.check_secret(secret))


def _encode(params: SchemeParams, secret, cap: int) -> SparseState:
    secret = as_secret_state(params, secret)
    if not secret.is_normalized():
        raise SchemeError("secret state is not normalised")
    if params.q ** params.t * len(secret) > cap:
        raise CapExceeded(f"encoding needs {params.q ** params.t * len(secret)} kets (cap {cap})")
    amps: dict = {}
    for s, a in secret.amps.items():
        for c in coeff_set(params, s):
            f = Polynomial(params.spec, c)
            ket = tuple(evaluate(f, x) for x in params.alphas)
            amps[ket] = amps.get(ket, ComplexRational()) + a
    return SparseState(params.spec, params.n, amps, secret.scale_exp + params.t, secret.norm_div)


def encode_ogawa(params: SchemeParams, secret, cap: int = DEFAULT_CAP_KETS) -> SparseState:
    _require(params, OGAWA)
    return _encode(params, secret, cap)


def encode_zm(params: SchemeParams, secret, cap: int = DEFAULT_CAP_KETS) -> SparseState:
    _require(params, ZM)
    return _encode(params, secret, cap)


def encode(params: SchemeParams, secret, cap: int = DEFAULT_CAP_KETS) -> SparseState:
    """Direct encoding with whichever scheme ``params`` describes."""
    return _encode(params, secret, cap)


# ---------------------------------------------------------------------------
# advance-sharing polynomials

def _points(params: SchemeParams, order: Optional[Sequence[int]]) -> tuple[int, ...]:
    if order is None:
        return params.alphas.points
    return tuple(params.alphas[i] for i in order)


def g_poly(params: SchemeParams, r: Sequence, s: Sequence,
           order: Optional[Sequence[int]] = None) -> Polynomial:
    """
    The unique f_c with c_1..c_L = s and f_c(alpha_i) = r_i on the first k-L
    points (after reordering the alphas by ``order``).

    Built as x^L f(x) + sum_i s_i x^(i-1), where f interpolates
    b_i = (r_i - s_1 - s_2 a_i - ... - s_L a_i^(L-1)) / a_i^L.
    """
    _require(params, OGAWA)
    F = params.spec
    s = params.check_secret(s)
    t = params.t
    if len(r) != t:
        raise SchemeError(f"r must have k-L={t} symbols, got {len(r)}")
    pts = _points(params, order)[:t]
    if 0 in pts:
        raise SchemeError("advance points must be nonzero")
    b = []
    for ri, a in zip(r, pts):
        num = F.coerce(ri)
        apow = 1
        for sj in s:
            num = F.sub(num, F.mul(sj, apow))
            apow = F.mul(apow, a)
        b.append(F.div(num, apow))          # apow == a^L here
    f = lagrange_interpolate(PointSet(F, pts), b) if t else Polynomial.zero(F, 0)
    return f.shift(params.L) + Polynomial(F, s)


def h_poly(params: SchemeParams, r: Sequence, s: Sequence,
           order: Optional[Sequence[int]] = None) -> Polynomial:
    """The unique polynomial of degree < k with h(beta_i) = s_i and h(alpha_i) = r_i, i <= k-L."""
    _require(params, ZM)
    s = params.check_secret(s)
    if len(r) != params.t:
        raise SchemeError(f"r must have k-L={params.t} symbols, got {len(r)}")
    merged = PointSet(params.spec, params.betas.points + _points(params, order)[:params.t])
    return lagrange_interpolate(merged, tuple(s) + tuple(r))


def advance_poly(params: SchemeParams, r, s, order=None) -> Polynomial:
    return g_poly(params, r, s, order) if params.kind == OGAWA else h_poly(params, r, s, order)


def secret_of(params: SchemeParams, f: Polynomial) -> tuple[int, ...]:
    """Secret symbols carried by a codeword polynomial."""
    if params.kind == OGAWA:
        return f.coeffs[:params.L]
    return tuple(evaluate(f, b) for b in params.betas)


# vectorised helpers -------------------------------------------------------

def _vscale(F: FieldSpec, c: int, arr: np.ndarray) -> np.ndarray:
    return F.mul_table[c][arr]


def _vadd(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return F.add_table[a, b]


def _lagrange_values(F: FieldSpec, basis_pts: Sequence[int], at: Sequence[int]) -> list[list[int]]:
    """table[j][i] = l_i(at_j) for the Lagrange basis on ``basis_pts``."""
    ps = PointSet(F, tuple(basis_pts))
    basis = [lagrange_basis(ps, i) for i in range(len(ps))]
    return [[evaluate(l, x) for l in basis] for x in at]


def encoding_map(params: SchemeParams, order: Optional[Sequence[int]] = None) -> BasisMap:
    return _encoding_map(params, None if order is None else tuple(order))


@lru_cache(maxsize=256)
def _encoding_map(params: SchemeParams, order: Optional[tuple[int, ...]]) -> BasisMap:
    """
    The completion unitary (r, s) -> (P(a_{t+1}), ..., P(a_n)) where P is the
    advance polynomial (g for ogawa, h for zm) and the alphas are taken in
    ``order``.  Input arity k, output arity n - (k - L) = k.
    """
    F = params.spec
    t, L, k = params.t, params.L, params.k
    pts = _points(params, order)
    outs = pts[t:]

    def func(x):
        r, s = x[:t], x[t:]
        P = advance_poly(params, r, s, order)
        return tuple(evaluate(P, a) for a in outs)

    if params.kind == OGAWA:
        adv = pts[:t]
        lag = _lagrange_values(F, adv, outs) if t else [[] for _ in outs]
        inv_pow = [F.inv(F.pow(a, L)) for a in adv]
        out_pow_L = [F.pow(a, L) for a in outs]
        s_pows = [[F.pow(a, j) for j in range(L)] for a in adv]
        o_pows = [[F.pow(a, j) for j in range(L)] for a in outs]

        def vectorized(arr):
            arr = np.asarray(arr, dtype=np.int64)
            r, s = arr[:, :t], arr[:, t:]
            b = []
            for i in range(t):
                acc = r[:, i]
                for j in range(L):
                    acc = _vadd(F, acc, F.neg_table[_vscale(F, s_pows[i][j], s[:, j])])
                b.append(_vscale(F, inv_pow[i], acc))
            cols = []
            for jo in range(len(outs)):
                f_val = np.zeros(len(arr), dtype=np.int64)
                for i in range(t):
                    f_val = _vadd(F, f_val, _vscale(F, lag[jo][i], b[i]))
                val = _vscale(F, out_pow_L[jo], f_val)
                for j in range(L):
                    val = _vadd(F, val, _vscale(F, o_pows[jo][j], s[:, j]))
                cols.append(val)
            return np.stack(cols, axis=1) if cols else np.zeros((len(arr), 0), dtype=np.int64)
    else:
        merged = params.betas.points + pts[:t]
        lag = _lagrange_values(F, merged, outs)

        def vectorized(arr):
            arr = np.asarray(arr, dtype=np.int64)
            # basis order is (betas, first t alphas); inputs are (r, s)
            vals = np.concatenate([arr[:, t:], arr[:, :t]], axis=1)
            cols = []
            for jo in range(len(outs)):
                acc = np.zeros(len(arr), dtype=np.int64)
                for i in range(k):
                    acc = _vadd(F, acc, _vscale(F, lag[jo][i], vals[:, i]))
                cols.append(acc)
            return np.stack(cols, axis=1)

    out_ps = PointSet(F, outs)

    def inverse(y):
        P = lagrange_interpolate(out_ps, y)
        return tuple(evaluate(P, a) for a in pts[:t]) + secret_of(params, P)

    label = "U_enc" if params.kind == OGAWA else "U_ZM_enc"
    return BasisMap(F, k, n_out(params), func, vectorized, inverse, name=label)


def n_out(params: SchemeParams) -> int:
    return params.n - params.t


# ---------------------------------------------------------------------------
# advance sharing sessions

@dataclass(frozen=True)
class AdvanceSession:
    """
    State of the dealer after the advance phase.

    ``order`` lists share indices so that the resource's distributed half
    feeds shares ``order[:t]``; ``advanced`` is the subset actually handed
    out and ``held`` the remainder of ``order[:t]`` whose halves the dealer
    keeps until completion.
    """

    params: SchemeParams
    advanced: tuple[int, ...]
    order: tuple[int, ...]
    resource: SparseState

    @property
    def held(self) -> tuple[int, ...]:
        return self.order[len(self.advanced):self.params.t]

    def to_text(self) -> str:
        from .qstate import dumps_state
        head = (f"qramp-session v1; {self.params.descriptor()}; "
                f"advanced={','.join(map(str, self.advanced))}; order={','.join(map(str, self.order))}")
        return head + "\n" + dumps_state(self.resource)

    @classmethod
    def from_text(cls, text: str) -> "AdvanceSession":
        from .qstate import loads_state
        first, _, rest = text.partition("\n")
        parts = [p.strip() for p in first.split(";")]
        if parts[0] != "qramp-session v1":
            raise ValueError(f"not a session file: {parts[0]!r}")
        params = SchemeParams.from_descriptor(parts[1])
        kv = dict(p.split("=", 1) for p in parts[2:])

        def ints(s):
            return tuple(int(x) for x in s.split(",")) if s else ()

        sess = cls(params, ints(kv["advanced"]), ints(kv["order"]), loads_state(rest))
        _check_session(sess)
        return sess


def _check_session(sess: AdvanceSession):
    p = sess.params
    if sorted(sess.order) != list(range(p.n)):
        raise AdvanceError("session order is not a permutation of the shares")
    if tuple(sess.order[:len(sess.advanced)]) != sess.advanced:
        raise AdvanceError("session order does not start with the advanced shares")
    if sess.resource.registers != 2 * p.t:
        raise AdvanceError("resource state has the wrong register count")


def advance_setup(params: SchemeParams, advanced: Sequence[int] = (),
                  cap: int = DEFAULT_CAP_KETS) -> AdvanceSession:
    """
    Prepare the resource state and decide which shares it feeds.

    At most k-L shares can be distributed before the secret is known; any
    larger set carries information about the secret and is rejected.
    """
    advanced = tuple(int(a) for a in advanced)
    t = params.t
    if len(set(advanced)) != len(advanced) or any(not 0 <= a < params.n for a in advanced):
        raise AdvanceError(f"advanced shares {list(advanced)} are not distinct indices in 0..{params.n - 1}")
    if len(advanced) > t:
        raise AdvanceError(
            f"cannot advance-share {len(advanced)} shares: at most k-L = {t}; "
            f"any k-L+1 shares depend on the secret, so they cannot be sent before it exists")
    rest = [i for i in range(params.n) if i not in advanced]
    order = advanced + tuple(rest)
    return AdvanceSession(params, advanced, order, uniform_resource(params.spec, t, cap))


def advance_complete(session: AdvanceSession, secret, umap: Optional[BasisMap] = None) -> SparseState:
    """
    Apply the completion unitary to (kept half, secret) and return the state
    of all n shares, share i in register i.
    """
    params = session.params
    secret = as_secret_state(params, secret)
    if not secret.is_normalized():
        raise SchemeError("secret state is not normalised")
    t = params.t
    if umap is None:
        umap = encoding_map(params, session.order)
    joint = tensor(session.resource, secret)
    # registers: [distributed t][kept t][secret L] -> [distributed t][outputs n-t]
    joint = apply_basis_map(joint, range(t, 2 * t + params.L), umap)
    inv = [0] * params.n
    for pos, share in enumerate(session.order):
        inv[share] = pos
    return permute_registers(joint, inv)


# ---------------------------------------------------------------------------
# reconstruction

def is_codeword(params: SchemeParams, ket: Sequence[int]) -> bool:
    """Whether ``ket`` is the evaluation vector of some polynomial of degree < k."""
    return _is_codeword(params, tuple(ket))


@lru_cache(maxsize=1 << 18)
def _is_codeword(params: SchemeParams, ket: tuple[int, ...]) -> bool:
    F = params.spec
    head = PointSet(F, params.alphas.points[:params.k])
    f = lagrange_interpolate(head, ket[:params.k])
    return all(evaluate(f, a) == v for a, v in zip(params.alphas.points[params.k:], ket[params.k:]))


@dataclass(frozen=True)
class Reconstruction:
    """
    ``secret`` is the recovered L-qudit state.  ``residual`` holds the k-L
    decoded helper registers followed by the untouched shares listed in
    ``residual_shares``; it is the same for every secret.
    """

    secret: SparseState
    residual: SparseState
    residual_shares: tuple[int, ...]
    used: tuple[int, ...]


def decoding_map(params: SchemeParams, used: Sequence[int]) -> BasisMap:
    """
    (v_1..v_k) on shares ``used`` -> (secret symbols, f at the k-L unused
    share points), where f is the polynomial through the used values.

    For every secret the second part ranges over all q^(k-L) tuples in
    lockstep with the unused shares, so after the map the secret registers
    are in a product with everything else.
    """
    return _decoding_map(params, tuple(used))


@lru_cache(maxsize=1024)
def _decoding_map(params: SchemeParams, used: tuple[int, ...]) -> BasisMap:
    F = params.spec
    pts = PointSet(F, tuple(params.alphas[i] for i in used))
    rest = tuple(i for i in range(params.n) if i not in used)
    rest_pts = tuple(params.alphas[i] for i in rest)
    order = rest + tuple(used)

    @lru_cache(maxsize=1 << 16)
    def func(v):
        f = lagrange_interpolate(pts, v)
        return secret_of(params, f) + tuple(evaluate(f, a) for a in rest_pts)

    def inverse(y):
        s, r = y[:params.L], y[params.L:]
        P = advance_poly(params, r, s, order)
        return tuple(evaluate(P, a) for a in pts)

    return BasisMap(F, params.k, params.k, func, None, inverse, name="decode")


def split_product(state: SparseState, m: int) -> tuple[SparseState, SparseState]:
    """
    Factor ``state`` as a (x) b with a on the first ``m`` registers.  Both
    factors come back normalised and their product equals ``state`` exactly.
    Raises ``ReconstructionError`` if the state is entangled across the cut.
    """
    if not state.amps:
        raise ReconstructionError("zero state")
    rows: dict = {}
    for ket, a in state.amps.items():
        rows.setdefault(ket[:m], {})[ket[m:]] = a
    s0 = next(iter(rows))
    w0 = next(iter(rows[s0]))
    p = rows[s0][w0]
    cols = rows[s0].keys()
    if len(rows) * len(cols) != len(state.amps):
        raise ReconstructionError("share state does not factor: support is not a product")
    for s, row in rows.items():
        if row.keys() != cols:
            raise ReconstructionError("share state does not factor: support is not a product")
        x = row[w0]
        for w, a in row.items():
            if a * p != x * rows[s0][w]:
                raise ReconstructionError("share state does not factor: amplitudes are entangled")
    a_amps = {s: row[w0] for s, row in rows.items()}
    b_amps = {w: rows[s0][w] / p for w in cols}
    na = sum((x.abs2() for x in a_amps.values()), Fraction(0))
    nb = sum((x.abs2() for x in b_amps.values()), Fraction(0))
    a = SparseState(state.spec, m, a_amps, 0, na)
    b = SparseState(state.spec, state.registers - m, b_amps, 0, nb)
    return a, b


def reconstruct(params: SchemeParams, share_state: SparseState, qualified: Sequence[int]) -> Reconstruction:
    """
    Recover the secret from the shares in ``qualified`` (|qualified| >= k).

    Only the first k listed shares are touched: a basis relabelling sends
    them to (secret, first k-L of them), after which the secret registers
    must factor out of the joint state.
    """
    qualified = tuple(int(i) for i in qualified)
    if len(set(qualified)) != len(qualified) or any(not 0 <= i < params.n for i in qualified):
        raise ReconstructionError(f"bad share subset {list(qualified)}")
    if len(qualified) < params.k:
        raise ReconstructionError(f"need >= k = {params.k} shares, got {len(qualified)}")
    if share_state.registers != params.n:
        raise ReconstructionError(f"share state has {share_state.registers} registers, expected n={params.n}")
    for ket in share_state.amps:
        if not is_codeword(params, ket):
            raise ReconstructionError(f"ket {ket} is not a codeword of the scheme")
    used = qualified[:params.k]
    rest = tuple(i for i in range(params.n) if i not in used)
    st = permute_registers(share_state, used + rest)
    st = apply_basis_map(st, range(params.k), decoding_map(params, used))
    secret, residual = split_product(st, params.L)
    return Reconstruction(secret, residual, rest, used)


# ---------------------------------------------------------------------------
# batched support computation for exhaustive sweeps

def _all_tuples(q: int, width: int) -> np.ndarray:
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((q,) * width).reshape(width, -1).T
    return grid.astype(np.int64)


def batch_direct_kets(params: SchemeParams, secrets: np.ndarray) -> np.ndarray:
    """
    Kets of the direct encoding for each basis secret, shape
    (num_secrets, q^(k-L), n), rows in the order of the free coefficients.
    """
    F = params.spec
    secrets = np.asarray(secrets, dtype=np.int64)
    S, t, L = len(secrets), params.t, params.L
    free = _all_tuples(params.q, t)                       # (q^t, t)
    T = len(free)
    sec = np.repeat(secrets[:, None, :], T, axis=1)       # (S, T, L)
    fr = np.broadcast_to(free[None, :, :], (S, T, t))
    if params.kind == OGAWA:
        coeffs = np.concatenate([sec, fr], axis=2)
    else:
        head_inv, tail = _zm_solver(params)
        rhs = []
        for i in range(L):
            acc = sec[..., i]
            for j in range(t):
                acc = _vadd(F, acc, F.neg_table[_vscale(F, tail[i][j], fr[..., j])])
            rhs.append(acc)
        head = []
        for row in head_inv:
            acc = np.zeros((S, T), dtype=np.int64)
            for a, v in zip(row, rhs):
                acc = _vadd(F, acc, _vscale(F, a, v))
            head.append(acc)
        coeffs = np.concatenate([np.stack(head, axis=2), fr], axis=2)
    kets = []
    for a in params.alphas:
        acc = np.zeros((S, T), dtype=np.int64)
        for j in range(params.k - 1, -1, -1):
            acc = _vadd(F, _vscale(F, a, acc), coeffs[..., j])
        kets.append(acc)
    return np.stack(kets, axis=2)


def batch_advance_kets(session: AdvanceSession, secrets: np.ndarray,
                       umap: Optional[BasisMap] = None) -> np.ndarray:
    """
    Kets of the advance-sharing output for each basis secret, shape
    (num_secrets, q^(k-L), n), computed from the session's resource kets
    and the vectorised completion map.
    """
    params = session.params
    secrets = np.asarray(secrets, dtype=np.int64)
    t, n = params.t, params.n
    if umap is None:
        umap = encoding_map(params, session.order)
    umap.verify()
    res = np.array(sorted(session.resource.amps), dtype=np.int64).reshape(len(session.resource), 2 * t)
    S, T = len(secrets), len(res)
    dist = np.broadcast_to(res[None, :, :t], (S, T, t))
    kept = np.broadcast_to(res[None, :, t:], (S, T, t))
    sec = np.broadcast_to(secrets[:, None, :], (S, T, params.L))
    inp = np.concatenate([kept, sec], axis=2).reshape(S * T, params.k)
    out = np.asarray(umap.vectorized(inp)).reshape(S, T, n - t)
    joint = np.concatenate([dist, out], axis=2)
    inv = [0] * n
    for pos, share in enumerate(session.order):
        inv[share] = pos
    return joint[:, :, inv]
