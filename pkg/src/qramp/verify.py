"""
Exact checks of access structure, encoder equivalence, strong security and
maximality of advance-shareable sets.

"Independent of the secret" is a statement about every L-qudit secret.
Since the encoders are linear, it suffices to check a family of secret
states whose projectors span the whole operator space: the q^L basis
states and, for every pair s < s', the two states proportional to
|s> + |s'> and |s> + i|s'>.  That is exactly q^(2L) probes, and the span is
confirmed by an exact rank computation when the family is built.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .gf import FieldSpec
from .qstate import (DEFAULT_CAP_DM, I, ONE, BasisMap, CapExceeded, ComplexRational, DensityMatrix,
                     SparseState, basis_state, dm_equal, dumps_state, inner_product, loads_state,
                     partial_trace, states_equal)
from .schemes import (OGAWA, ZM, SchemeError, SchemeParams, advance_complete, advance_setup,
                      batch_advance_kets, batch_direct_kets, encode, encoding_map, reconstruct,
                      ReconstructionError)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"

DEFAULT_CAP_PROBES = 10_000
DEFAULT_CAP_SUBSETS = 12


class VerificationError(RuntimeError):
    """A check could not reach a verdict."""


# ---------------------------------------------------------------------------
# probe family

def probe_states(spec: FieldSpec, width: int) -> list[SparseState]:
    """Basis states, then (|s>+|s'>)/sqrt2 and (|s>+i|s'>)/sqrt2 for s < s'."""
    basis = list(itertools.product(range(spec.q), repeat=width))
    out = [basis_state(spec, s) for s in basis]
    two = Fraction(2)
    for a, b in itertools.combinations(basis, 2):
        out.append(SparseState(spec, width, {a: ONE, b: ONE}, 0, two))
        out.append(SparseState(spec, width, {a: ONE, b: I}, 0, two))
    return out


def operator_rank(vectors: Iterable[dict]) -> int:
    """Exact rank of sparse vectors (dict key -> ComplexRational) by elimination."""
    pivots: dict = {}
    for vec in vectors:
        v = {k: x for k, x in vec.items() if x}
        while v:
            col = min(v)
            row = pivots.get(col)
            if row is None:
                lead = v[col]
                pivots[col] = {k: x / lead for k, x in v.items()}
                break
            f = v[col]
            for k, x in row.items():
                y = v.get(k, ComplexRational()) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return len(pivots)


def _projector(state: SparseState) -> dict:
    g = state.global_sq
    return {(u, v): a * b.conj() * g for u, a in state.amps.items() for v, b in state.amps.items()}


@dataclass(frozen=True)
class SecretProbe:
    spec: FieldSpec
    width: int
    states: tuple = field(repr=False)

    @classmethod
    def build(cls, spec: FieldSpec, width: int, cap: int = DEFAULT_CAP_PROBES) -> "SecretProbe":
        need = spec.q ** (2 * width)
        if need > cap:
            raise CapExceeded(f"probe family of size {need} exceeds cap {cap}")
        states = tuple(probe_states(spec, width))
        rank = operator_rank(_projector(s) for s in states)
        if rank != need:
            raise VerificationError(f"probe family spans {rank} of {need} operator dimensions")
        return cls(spec, width, states)

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)


@lru_cache(maxsize=32)
def _probes(spec: FieldSpec, width: int) -> SecretProbe:
    return SecretProbe.build(spec, width)


def _encoded(params: SchemeParams, secret: SparseState) -> SparseState:
    return _encode_cached(params, dumps_state(secret)) if len(secret) > 1 else \
        _encode_basis(params, next(iter(secret.amps)))


@lru_cache(maxsize=65536)
def _encode_basis(params: SchemeParams, s: tuple) -> SparseState:
    return encode(params, s)


@lru_cache(maxsize=8192)
def _encode_cached(params: SchemeParams, text: str) -> SparseState:
    return encode(params, loads_state(text))


# ---------------------------------------------------------------------------
# witnesses and results

@dataclass
class Witness:
    """
    Two secrets whose share states restricted to ``subset`` differ.

    ``kind`` is ``"distinct"`` (the reduced states are unequal, so the subset
    is not forbidden) or ``"overlap"`` (two orthogonal secrets give reduced
    states with tr(rho_a rho_b) != 0, so the subset cannot be qualified).
    """

    kind: str
    subset: tuple[int, ...]
    secret_a: SparseState
    secret_b: SparseState
    state_a: SparseState
    state_b: SparseState
    rho_a: DensityMatrix
    rho_b: DensityMatrix
    note: str = ""

    def to_text(self) -> str:
        parts = [f"qramp-witness v1; kind={self.kind}; subset={','.join(map(str, self.subset))}; "
                 f"note={self.note}"]
        for name in ("secret_a", "secret_b", "state_a", "state_b"):
            parts.append(f"--- {name}")
            parts.append(dumps_state(getattr(self, name)).rstrip("\n"))
        parts.append("--- rho_a")
        parts.append(self.rho_a.to_text().rstrip("\n"))
        parts.append("--- rho_b")
        parts.append(self.rho_b.to_text().rstrip("\n"))
        return "\n".join(parts) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Witness":
        blocks = text.split("\n--- ")
        head = dict(p.strip().split("=", 1) for p in blocks[0].split(";")[1:])
        body = {}
        for b in blocks[1:]:
            name, _, rest = b.partition("\n")
            body[name.strip()] = rest
        subset = tuple(int(x) for x in head["subset"].split(",")) if head["subset"] else ()
        return cls(head["kind"], subset,
                   loads_state(body["secret_a"]), loads_state(body["secret_b"]),
                   loads_state(body["state_a"]), loads_state(body["state_b"]),
                   DensityMatrix.from_text(body["rho_a"]), DensityMatrix.from_text(body["rho_b"]),
                   head.get("note", ""))

    def recheck(self, params: Optional[SchemeParams] = None) -> bool:
        """
        Re-derive the verdict from the serialised form alone: parse the
        witness text, recompute both partial traces and compare.  With
        ``params`` the share states are also re-encoded from the secrets.
        """
        w = Witness.from_text(self.to_text())
        ra = partial_trace(w.state_a, w.subset)
        rb = partial_trace(w.state_b, w.subset)
        if not (dm_equal(ra, w.rho_a) and dm_equal(rb, w.rho_b)):
            return False
        if params is not None:
            enc = encode if w.secret_a.registers == params.L else encode_with_reference
            if not (states_equal(enc(params, w.secret_a), w.state_a)
                    and states_equal(enc(params, w.secret_b), w.state_b)):
                return False
        if w.kind == "distinct":
            return not dm_equal(ra, rb)
        if w.kind == "overlap":
            z, _ = inner_product(w.secret_a, w.secret_b)
            return not z and bool((ra @ rb).trace())
        return False


@dataclass
class Transcript:
    """Record that every probe secret was recovered from ``used``."""

    subset: tuple[int, ...]
    used: tuple[int, ...]
    probes_checked: int
    sample: list = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"qramp-transcript v1; subset={','.join(map(str, self.subset))}; "
                 f"used={','.join(map(str, self.used))}; probes={self.probes_checked}"]
        for secret, recovered in self.sample:
            lines.append("--- secret")
            lines.append(dumps_state(secret).rstrip("\n"))
            lines.append("--- recovered")
            lines.append(dumps_state(recovered).rstrip("\n"))
        return "\n".join(lines) + "\n"


@dataclass
class CheckResult:
    name: str
    params_hash: str
    status: str
    detail: str = ""
    witness: Optional[Witness] = None
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def line(self, witness_file: Optional[str] = None) -> str:
        out = f"CHECK {self.name} {self.params_hash} {self.status}"
        if witness_file:
            out += f" {witness_file}"
        return out


# ---------------------------------------------------------------------------
# forbidden / qualified

def _subset(params: SchemeParams, subset: Sequence[int]) -> tuple[int, ...]:
    subset = tuple(int(i) for i in subset)
    if len(set(subset)) != len(subset) or any(not 0 <= i < params.n for i in subset):
        raise SchemeError(f"bad share subset {list(subset)} for n={params.n}")
    return subset


def _invariance(params: SchemeParams, subset, secrets: Iterable[SparseState],
                cap_dm: int) -> tuple[bool, Optional[Witness]]:
    first = None
    for sec in secrets:
        st = _encoded(params, sec)
        rho = partial_trace(st, subset, cap_dm)
        if first is None:
            first = (sec, st, rho)
        elif not dm_equal(first[2], rho):
            return False, Witness("distinct", subset, first[0], sec, first[1], st, first[2], rho)
    return True, None


def is_forbidden(params: SchemeParams, subset: Sequence[int],
                 cap_dm: int = DEFAULT_CAP_DM) -> tuple[bool, Optional[Witness]]:
    """
    Whether the reduced share state on ``subset`` is the same for every
    secret.  On ``False`` the witness holds the first distinguishing pair.
    """
    subset = _subset(params, subset)
    if params.q ** len(subset) > cap_dm:
        raise CapExceeded(f"subset of size {len(subset)} exceeds density-matrix cap {cap_dm}")
    return _invariance(params, subset, _probes(params.spec, params.L), cap_dm)


def _overlap_witness(params: SchemeParams, subset: tuple[int, ...]) -> Optional[Witness]:
    seen: dict = {}
    for s in params.all_secrets():
        st = _encode_basis(params, s)
        for ket in st.amps:
            key = tuple(ket[i] for i in subset)
            other = seen.setdefault(key, s)
            if other != s:
                a, b = basis_state(params.spec, other), basis_state(params.spec, s)
                sa, sb = _encode_basis(params, other), st
                return Witness("overlap", subset, a, b, sa, sb,
                               partial_trace(sa, subset), partial_trace(sb, subset),
                               note="orthogonal secrets with overlapping reduced states")
    return None


def is_qualified(params: SchemeParams, subset: Sequence[int]):
    """
    Whether the secret can be recovered from ``subset``.

    With at least k shares every probe secret is run through
    :func:`reconstruct` and must come back exactly (up to global phase),
    factored off the remaining registers; the result carries a
    :class:`Transcript`.  With fewer shares the result carries an
    ``"overlap"`` :class:`Witness`: two orthogonal secrets that cannot be
    told apart with certainty, which rules reconstruction out.
    """
    subset = _subset(params, subset)
    if len(subset) >= params.k:
        used = tuple(sorted(subset))
        probes = _probes(params.spec, params.L)
        sample = []
        for sec in probes:
            st = _encoded(params, sec)
            try:
                rec = reconstruct(params, st, used)
            except ReconstructionError as exc:
                raise VerificationError(f"reconstruction from {used} failed: {exc}") from exc
            if not states_equal(rec.secret, sec):
                raise VerificationError(f"reconstruction from {used} returned a different secret")
            if len(sample) < 3:
                sample.append((sec, rec.secret))
        return True, Transcript(subset, used[:params.k], len(probes), sample)
    w = _overlap_witness(params, subset)
    if w is None:
        raise VerificationError(f"no verdict for subset {subset} of size < k")
    return False, w


# ---------------------------------------------------------------------------
# access structure

@dataclass
class SubsetClassification:
    subset: tuple[int, ...]
    verdict: str
    forbidden: bool
    qualified: bool
    witness: Optional[Witness] = None
    transcript: Optional[Transcript] = None


def expected_verdict(params: SchemeParams, size: int) -> str:
    if size >= params.k:
        return "qualified"
    if size <= params.t:
        return "forbidden"
    return "intermediate"


def classify_subset(params: SchemeParams, subset: Sequence[int],
                    cap_dm: int = DEFAULT_CAP_DM) -> SubsetClassification:
    subset = _subset(params, subset)
    forb, fw = is_forbidden(params, subset, cap_dm)
    qual, qw = is_qualified(params, subset)
    if forb and qual and params.L:
        raise VerificationError(f"subset {subset} is both forbidden and qualified")
    verdict = "qualified" if qual else "forbidden" if forb else "intermediate"
    return SubsetClassification(subset, verdict, forb, qual, fw if fw is not None else
                                (qw if isinstance(qw, Witness) else None),
                                qw if isinstance(qw, Transcript) else None)


def access_structure_report(params: SchemeParams, cap_subsets: int = DEFAULT_CAP_SUBSETS,
                            cap_dm: int = DEFAULT_CAP_DM) -> CheckResult:
    """
    Classify every share subset and compare with the threshold rule
    (qualified iff |S| >= k, forbidden iff |S| <= k-L).  The pure-state
    duality qualified(A) <=> forbidden(complement of A) is checked as an
    independent cross-check.
    """
    n = params.n
    if n > cap_subsets:
        raise CapExceeded(f"2^{n} subsets exceeds cap 2^{cap_subsets}")
    if params.q ** n > cap_dm:
        raise CapExceeded(f"the full share set needs dimension {params.q}^{n}, over density-matrix cap {cap_dm}")
    rows = {}
    for size in range(n + 1):
        for sub in itertools.combinations(range(n), size):
            rows[sub] = classify_subset(params, sub, cap_dm)
    problems = []
    for sub, row in rows.items():
        exp = expected_verdict(params, len(sub))
        if row.verdict != exp:
            problems.append(f"{sub}: {row.verdict}, expected {exp}")
        comp = tuple(i for i in range(n) if i not in sub)
        if row.qualified != rows[comp].forbidden:
            problems.append(f"duality fails for {sub}")
    by_size: dict = {}
    for sub, row in rows.items():
        by_size.setdefault(len(sub), set()).add(row.verdict)
    uniform = all(len(v) == 1 for v in by_size.values())
    if not uniform:
        problems.append("verdict depends on more than |S|")
    summary = ", ".join(f"|S|={s}:{'/'.join(sorted(v))}" for s, v in sorted(by_size.items()))
    return CheckResult("access", params.params_hash(), FAIL if problems else PASS,
                       "; ".join(problems) or summary, data={"rows": rows})


# ---------------------------------------------------------------------------
# encoder equivalence

def random_superposition(spec: FieldSpec, width: int, rng: random.Random,
                         max_terms: int = 3) -> SparseState:
    """Normalised superposition of 2..max_terms basis states with small rational weights."""
    size = spec.q ** width
    terms = min(rng.randint(2, max_terms), size)
    codes = rng.sample(range(size), terms) if size < 1 << 30 else [rng.randrange(size) for _ in range(terms)]
    amps = {}
    for c in codes:
        ket = []
        for _ in range(width):
            c, d = divmod(c, spec.q)
            ket.append(d)
        while True:
            z = ComplexRational(Fraction(rng.randint(-7, 7), rng.randint(1, 7)),
                                Fraction(rng.randint(-7, 7), rng.randint(1, 7)))
            if z:
                break
        amps[tuple(reversed(ket))] = z
    return SparseState(spec, width, amps).normalized()


def _codes(kets: np.ndarray, q: int) -> np.ndarray:
    n = kets.shape[-1]
    w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return kets @ w


def equivalence_check(params: SchemeParams, advanced: Sequence[int] = (), superposed: int = 10,
                      seed: int = 0, umap: Optional[BasisMap] = None,
                      exact_limit: int = 20_000, chunk: int = 1 << 16) -> CheckResult:
    """
    Advance encoding versus direct encoding.

    Every basis secret is compared, then ``superposed`` seeded random
    superpositions.  Basis secrets go through :func:`states_equal` on the
    exact states when q^k <= ``exact_limit``; above that the ket sets of
    both encodings are computed in bulk with integer arrays and compared
    as sets.  Every basis-secret output is a uniform superposition with
    amplitude 1 and the same scale, so set equality (with no repeated kets)
    is state equality.
    """
    session = advance_setup(params, advanced)
    if umap is None:
        umap = encoding_map(params, session.order)
    q, k = params.q, params.k
    checked = 0
    fail = None
    route = "exact" if q ** k <= exact_limit else "bulk"
    if route == "exact":
        for s in params.all_secrets():
            a = _encode_basis(params, s)
            b = advance_complete(session, s, umap)
            checked += 1
            if not states_equal(a, b):
                fail = (s, a.kets(), b.kets())
                break
    else:
        secrets = np.array(list(params.all_secrets()), dtype=np.int64) if q ** params.L <= chunk else None
        total = q ** params.L
        for start in range(0, total, chunk):
            if secrets is not None:
                block = secrets[start:start + chunk]
            else:
                codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
                w = q ** np.arange(params.L - 1, -1, -1, dtype=np.int64)
                block = (codes[:, None] // w[None, :]) % q
            v1 = np.sort(_codes(batch_direct_kets(params, block), q), axis=1)
            v2 = np.sort(_codes(batch_advance_kets(session, block, umap), q), axis=1)
            checked += len(block)
            bad = np.any(v1 != v2, axis=1)
            if v1.shape[1] > 1:
                bad |= np.any(np.diff(v1, axis=1) == 0, axis=1) | np.any(np.diff(v2, axis=1) == 0, axis=1)
            if bad.any():
                i = int(np.argmax(bad))
                s = tuple(int(x) for x in block[i])
                fail = (s, sorted(map(tuple, batch_direct_kets(params, block[i:i + 1])[0].tolist())),
                        sorted(map(tuple, batch_advance_kets(session, block[i:i + 1], umap)[0].tolist())))
                break
    rng = random.Random(seed)
    n_sup = 0
    if fail is None:
        for _ in range(superposed):
            sec = random_superposition(params.spec, params.L, rng)
            a = encode(params, sec)
            b = advance_complete(session, sec, umap)
            n_sup += 1
            if not states_equal(a, b):
                fail = (dumps_state(sec), a.kets(), b.kets())
                break
    data = {"basis_secrets": checked, "superposed": n_sup, "kets_per_state": q ** params.t,
            "route": route, "advanced": tuple(advanced)}
    if fail is None:
        return CheckResult("equivalence", params.params_hash(), PASS,
                           f"{checked} basis secrets ({route}) and {n_sup} superpositions, "
                           f"{q ** params.t} kets each", data=data)
    s, v1, v2 = fail
    only1 = sorted(set(v1) - set(v2))
    only2 = sorted(set(v2) - set(v1))
    data.update(secret=s, V1=v1, V2=v2)
    return CheckResult("equivalence", params.params_hash(), FAIL,
                       f"secret {s}: V1 != V2; only direct {only1[:4]}, only advance {only2[:4]}",
                       data=data)


# ---------------------------------------------------------------------------
# strong security

def _embed(spec: FieldSpec, L: int, T: tuple[int, ...], fixed: tuple[int, ...],
           probe: SparseState) -> SparseState:
    others = [i for i in range(L) if i not in T]
    amps = {}
    for ket, a in probe.amps.items():
        full = [0] * L
        for i, v in zip(T, ket):
            full[i] = v
        for i, v in zip(others, fixed):
            full[i] = v
        amps[tuple(full)] = a
    return SparseState(spec, L, amps, probe.scale_exp, probe.norm_div)


def purified_secret(spec: FieldSpec, L: int, T: Sequence[int], probe: SparseState) -> SparseState:
    """
    ``probe`` on the coordinates T, the other L-|T| coordinates maximally
    entangled with as many reference registers appended after the secret.
    Tracing out the reference leaves probe (x) I/q^(L-|T|).
    """
    T = tuple(T)
    m = L - len(T)
    amps = {}
    for fixed in itertools.product(range(spec.q), repeat=m):
        for ket, a in _embed(spec, L, T, fixed, probe).amps.items():
            amps[ket + fixed] = a
    return SparseState(spec, L + m, amps, probe.scale_exp + m, probe.norm_div)


def encode_with_reference(params: SchemeParams, secret: SparseState) -> SparseState:
    """
    Encode the first L registers of ``secret`` and leave any further
    (reference) registers untouched; the result has n + extra registers.
    """
    L = params.L
    if secret.registers < L:
        raise SchemeError(f"secret has {secret.registers} registers, need at least L={L}")
    amps: dict = {}
    for ket, a in secret.amps.items():
        ref = ket[L:]
        for code in _encode_basis(params, ket[:L]).amps:
            key = code + ref
            amps[key] = amps.get(key, ComplexRational()) + a
    return SparseState(params.spec, params.n + secret.registers - L, amps,
                       secret.scale_exp + params.t, secret.norm_div)


def _st_check(params: SchemeParams, S: Sequence[int], T: Sequence[int]):
    S = _subset(params, S)
    T = tuple(sorted(int(i) for i in T))
    if len(set(T)) != len(T) or any(not 0 <= i < params.L for i in T):
        raise SchemeError(f"bad secret coordinates {list(T)} for L={params.L}")
    if len(S) + len(T) > params.k:
        raise SchemeError(f"|S| + |T| = {len(S) + len(T)} exceeds k = {params.k}")
    return S, T


def _strong_invariance(params: SchemeParams, S: Sequence[int], T: Sequence[int],
                       cap_dm: int, conditional: bool = False) -> tuple[bool, Optional[Witness]]:
    S, T = _st_check(params, S, T)
    if not T:
        return True, None
    probes = _probes(params.spec, len(T))
    if conditional:
        for fixed in itertools.product(range(params.q), repeat=params.L - len(T)):
            secrets = (_embed(params.spec, params.L, T, fixed, p) for p in probes)
            ok, w = _invariance(params, S, secrets, cap_dm)
            if not ok:
                w.note = f"T={','.join(map(str, T))} fixed={','.join(map(str, fixed))}"
                return False, w
        return True, None
    first = None
    for p in probes:
        sec = purified_secret(params.spec, params.L, T, p)
        st = encode_with_reference(params, sec)
        rho = partial_trace(st, S, cap_dm)
        if first is None:
            first = (sec, st, rho)
        elif not dm_equal(first[2], rho):
            return False, Witness("distinct", S, first[0], sec, first[1], st, first[2], rho,
                                  note=f"T={','.join(map(str, T))} reference={params.L - len(T)}")
    return True, None


def strong_security_check(params: SchemeParams, S: Sequence[int], T: Sequence[int],
                          cap_dm: int = DEFAULT_CAP_DM,
                          conditional: bool = False) -> tuple[bool, Optional[Witness]]:
    """
    Whether shares ``S`` carry no information about secret coordinates ``T``
    (|S| + |T| <= k).

    The T part ranges over its probe family while the remaining
    coordinates are maximally entangled with a reference the holders of S
    do not see (the quantum counterpart of a uniformly random remainder);
    the reduced state on S must not change.  With ``conditional=True`` the
    remaining coordinates are instead pinned to each basis value in turn,
    which asks for more: no information about T even when the rest of the
    secret is known.
    """
    if params.kind != ZM:
        raise SchemeError("strong security is a property of the zm scheme")
    return _strong_invariance(params, S, T, cap_dm, conditional)


def _st_pairs(params: SchemeParams, min_s: int = 0):
    for ts in range(1, params.L + 1):
        for ss in range(min_s, params.k - ts + 1):
            for S in itertools.combinations(range(params.n), ss):
                for T in itertools.combinations(range(params.L), ts):
                    yield S, T


def strong_security_sweep(params: SchemeParams, cap_dm: int = DEFAULT_CAP_DM,
                          conditional: bool = False) -> CheckResult:
    """Every (S, T) with T nonempty and |S| + |T| <= k (empty T holds vacuously)."""
    if params.kind != ZM:
        raise SchemeError("strong security is a property of the zm scheme")
    count = 0
    for S, T in _st_pairs(params):
        ok, w = _strong_invariance(params, S, T, cap_dm, conditional)
        count += 1
        if not ok:
            return CheckResult("strong", params.params_hash(), FAIL,
                               f"S={S} T={T} leaks", witness=w, data={"pairs": count})
    return CheckResult("strong", params.params_hash(), PASS, f"{count} (S,T) pairs invariant",
                       data={"pairs": count})


def leakage_search(params: SchemeParams, cap_dm: int = DEFAULT_CAP_DM,
                   conditional: bool = False) -> CheckResult:
    """
    Look for (S, T) with |S| + |T| <= k where the reduced state on S does
    depend on the T part of the secret.  Finding one is evidence, not a
    failure; finding none is INCONCLUSIVE.  Forbidden sizes are skipped
    because they cannot leak anything.
    """
    name = "leakage"
    if params.L < 2:
        return CheckResult(name, params.params_hash(), INCONCLUSIVE,
                           "vacuous: with L=1 only forbidden sets satisfy |S|+|T| <= k")
    tried = 0
    for S, T in _st_pairs(params, min_s=params.t + 1):
        ok, w = _strong_invariance(params, S, T, cap_dm, conditional)
        tried += 1
        if not ok:
            return CheckResult(name, params.params_hash(), PASS,
                               f"S={S} learns about secret coordinates T={T} ({w.note})",
                               witness=w, data={"S": S, "T": T, "tried": tried})
    return CheckResult(name, params.params_hash(), INCONCLUSIVE,
                       f"no leakage among {tried} (S,T) pairs", data={"tried": tried})


def leakage_demo_ogawa(params: SchemeParams, cap_dm: int = DEFAULT_CAP_DM) -> CheckResult:
    if params.kind != OGAWA:
        raise SchemeError("leakage demo targets the ogawa scheme")
    return leakage_search(params, cap_dm)


# ---------------------------------------------------------------------------
# maximality of advance sharing

def max_advance_check(params: SchemeParams, cap_dm: int = DEFAULT_CAP_DM) -> CheckResult:
    """
    Every (k-L)-subset is forbidden and every (k-L+1)-subset is not, each of
    the latter with a witness that survives an independent re-check.
    """
    t, n = params.t, params.n
    problems = []
    for sub in itertools.combinations(range(n), t):
        ok, _ = is_forbidden(params, sub, cap_dm)
        if not ok:
            problems.append(f"{sub} of size k-L is not forbidden")
    first = None
    larger = 0
    if t + 1 <= n:
        for sub in itertools.combinations(range(n), t + 1):
            ok, w = is_forbidden(params, sub, cap_dm)
            larger += 1
            if ok:
                problems.append(f"{sub} of size k-L+1 is forbidden")
            elif not w.recheck(params):
                problems.append(f"witness for {sub} failed re-check")
            elif first is None:
                first = w
    return CheckResult("max-advance", params.params_hash(), FAIL if problems else PASS,
                       "; ".join(problems) or f"all size-{t} subsets forbidden, "
                       f"all {larger} size-{t + 1} subsets distinguishable",
                       witness=first)


def run_checks(params: SchemeParams, which: str = "all", advanced: Sequence[int] = (),
               seed: int = 0, superposed: int = 10, cap_dm: int = DEFAULT_CAP_DM) -> list[CheckResult]:
    """Run the named group of checks (``equivalence``, ``access``, ``strong``, ``max-advance`` or ``all``)."""
    names = ["equivalence", "access", "strong", "max-advance"] if which == "all" else [which]
    out = []
    for name in names:
        if name == "equivalence":
            out.append(equivalence_check(params, advanced, superposed, seed))
        elif name == "access":
            out.append(access_structure_report(params, cap_dm=cap_dm))
        elif name == "strong":
            out.append(strong_security_sweep(params, cap_dm) if params.kind == ZM
                       else leakage_search(params, cap_dm))
        elif name == "max-advance":
            out.append(max_advance_check(params, cap_dm))
        else:
            raise ValueError(f"unknown check {name!r}")
    return out
