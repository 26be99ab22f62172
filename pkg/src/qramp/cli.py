"""
Command-line driver.

Scheme parameters come from global flags, optionally preloaded from a
``key=value`` config file (flags win).  Share numbers on the command line
are 1-based; field elements are canonical integers.

Exit codes: 0 every check passed, 1 a verification failed, 2 invalid
configuration, input or cap.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .gf import FieldError, parse_field
from .qstate import (DEFAULT_CAP_DM, DEFAULT_CAP_KETS, CapExceeded, SparseState, basis_state,
                     dumps_state, loads_state)
from .schemes import (KINDS, OGAWA, AdvanceSession, SchemeError, SchemeParams, advance_complete,
                      advance_setup, encode, make_params, reconstruct)
from . import verify as V

CONFIG_KEYS = ("scheme", "field", "n", "k", "L", "alphas", "betas", "advanced", "seed",
               "cap-kets", "cap-dm", "out", "superposed")
CHECKS = ("equivalence", "access", "strong", "max-advance", "leakage", "all")


class UsageError(ValueError):
    """Bad command-line input; reported with exit code 2."""


def _ints(text: Optional[str], what: str) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    text = text.strip()
    if text.lower() in ("", "none", "-"):
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers, got {text!r}") from None


@dataclass
class RunConfig:
    scheme: str
    field: str
    n: Optional[int]
    k: int
    L: int
    alphas: Optional[tuple[int, ...]] = None
    betas: Optional[tuple[int, ...]] = None
    advanced: Optional[tuple[int, ...]] = None      # 1-based; None means the first k-L
    seed: int = 0
    superposed: int = 10
    cap_kets: int = DEFAULT_CAP_KETS
    cap_dm: int = DEFAULT_CAP_DM
    out: Optional[str] = None
    params: SchemeParams = field(init=False, repr=False)

    def __post_init__(self):
        if self.scheme not in KINDS:
            raise UsageError(f"--scheme must be one of {', '.join(KINDS)}, got {self.scheme!r}")
        spec = parse_field(self.field)
        n = self.n if self.n is not None else 2 * self.k - self.L
        self.params = make_params(spec, self.scheme, n, self.k, self.L, self.alphas, self.betas)

    def advanced_shares(self) -> tuple[int, ...]:
        """0-based advanced subset."""
        if self.advanced is None:
            return tuple(range(self.params.t))
        return shares_from_cli(self.params, self.advanced, "--advanced")


def shares_from_cli(params: SchemeParams, shares: Sequence[int], what: str) -> tuple[int, ...]:
    bad = [s for s in shares if not 1 <= s <= params.n]
    if bad:
        raise UsageError(f"{what}: share numbers run from 1 to n={params.n}, got {bad}")
    if len(set(shares)) != len(shares):
        raise UsageError(f"{what}: repeated share number")
    return tuple(s - 1 for s in shares)


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected key=value with key in {', '.join(CONFIG_KEYS)}")
        out[key] = value.strip()
    return out


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    g = parser.add_argument_group("scheme")
    g.add_argument("--config", help="file of key=value lines; flags override it", **kw)
    g.add_argument("--scheme", choices=KINDS, **kw)
    g.add_argument("--field", help="field descriptor, e.g. 7^1 or 2^2/1,1,1", **kw)
    g.add_argument("--n", help="number of shares (default 2k-L)", **kw)
    g.add_argument("--k", **kw)
    g.add_argument("--L", **kw)
    g.add_argument("--alphas", help="comma-separated share points", **kw)
    g.add_argument("--betas", help="comma-separated secret points (zm)", **kw)
    g.add_argument("--advanced", help="1-based shares sent before the secret (default 1..k-L; 'none' for empty)",
                   **kw)
    g.add_argument("--seed", help="seed for random superposed secrets", **kw)
    g.add_argument("--superposed", help="number of random superposed secrets in equivalence checks", **kw)
    g.add_argument("--cap-kets", **kw)
    g.add_argument("--cap-dm", **kw)
    g.add_argument("--out", help="output file (verify: report file)", **kw)


def build_parser() -> argparse.ArgumentParser:
    """Global flags are accepted both before and after the subcommand."""
    ap = argparse.ArgumentParser(prog="qramp", description="Quantum ramp secret sharing with advance sharing.")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("encode", parents=[common], help="encode a secret directly")
    p.add_argument("--secret", help="basis secret, comma-separated")
    p.add_argument("--secret-file", help="secret state file")

    sub.add_parser("advance", parents=[common], help="prepare the resource state and write a session file")

    p = sub.add_parser("complete", parents=[common], help="finish an advance session with the secret")
    p.add_argument("--session", required=True)
    p.add_argument("--secret")
    p.add_argument("--secret-file")

    p = sub.add_parser("reconstruct", parents=[common], help="recover the secret from a share state")
    p.add_argument("--state", required=True)
    p.add_argument("--subset", required=True, help="1-based shares to use")

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("which", choices=CHECKS)
    p.add_argument("--witness-dir", help="write a witness file for each check that has one")
    p.add_argument("-v", "--verbose", action="store_true", help="print check details")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key.replace("-", "_"))
        if val is not None:
            merged[key] = val
    for key in ("scheme", "field", "k", "L"):
        if key not in merged:
            raise UsageError(f"missing --{key}")

    def num(key, default=None):
        if key not in merged:
            return default
        try:
            return int(merged[key])
        except ValueError:
            raise UsageError(f"--{key}: expected an integer, got {merged[key]!r}") from None

    return RunConfig(merged["scheme"], merged["field"], num("n"), num("k"), num("L"),
                     _ints(merged.get("alphas"), "--alphas"), _ints(merged.get("betas"), "--betas"),
                     _ints(merged.get("advanced"), "--advanced"), num("seed", 0), num("superposed", 10),
                     num("cap-kets", DEFAULT_CAP_KETS), num("cap-dm", DEFAULT_CAP_DM), merged.get("out"))


# ---------------------------------------------------------------------------

def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _secret(cfg: RunConfig, secret: Optional[str], secret_file: Optional[str]) -> SparseState:
    if (secret is None) == (secret_file is None):
        raise UsageError("give exactly one of --secret or --secret-file")
    p = cfg.params
    if secret_file is not None:
        st = loads_state(Path(secret_file).read_text())
        if st.spec != p.spec or st.registers != p.L:
            raise UsageError(f"secret file must hold {p.L} registers over {p.spec.descriptor()}")
        return st
    vals = _ints(secret, "--secret")
    if len(vals) != p.L:
        raise UsageError(f"--secret needs L={p.L} symbols, got {len(vals)}")
    try:
        return basis_state(p.spec, vals)
    except FieldError as exc:
        raise UsageError(f"--secret: {exc}") from None


def _summary(state: SparseState) -> str:
    return f"kets={len(state)} scale_exp={state.scale_exp}"


def cmd_encode(cfg: RunConfig, args) -> int:
    st = encode(cfg.params, _secret(cfg, args.secret, args.secret_file), cap=cfg.cap_kets)
    _emit(dumps_state(st), cfg.out)
    print(_summary(st), file=sys.stderr if cfg.out is None else sys.stdout)
    return 0


def cmd_advance(cfg: RunConfig, args) -> int:
    sess = advance_setup(cfg.params, cfg.advanced_shares(), cap=cfg.cap_kets)
    _emit(sess.to_text(), cfg.out)
    msg = (f"advanced shares: {','.join(str(i + 1) for i in sess.advanced) or 'none'}; "
           f"dealer keeps {cfg.params.t} halves")
    print(msg, file=sys.stderr if cfg.out is None else sys.stdout)
    return 0


def cmd_complete(cfg: RunConfig, args) -> int:
    sess = AdvanceSession.from_text(Path(args.session).read_text())
    if sess.params != cfg.params:
        raise UsageError("session file was made with different scheme parameters")
    st = advance_complete(sess, _secret(cfg, args.secret, args.secret_file))
    _emit(dumps_state(st), cfg.out)
    print(_summary(st), file=sys.stderr if cfg.out is None else sys.stdout)
    return 0


def cmd_reconstruct(cfg: RunConfig, args) -> int:
    p = cfg.params
    st = loads_state(Path(args.state).read_text())
    used = shares_from_cli(p, _ints(args.subset, "--subset"), "--subset")
    if len(used) < p.k:
        raise UsageError(f"need >= k = {p.k} shares, got {len(used)}")
    rec = reconstruct(p, st, used)
    sec = rec.secret
    if len(sec) == 1 and cfg.out is None:
        print("secret " + ",".join(map(str, next(iter(sec.amps)))))
    else:
        _emit(dumps_state(sec), cfg.out)
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    p = cfg.params
    names = ["equivalence", "access", "strong", "max-advance"] if args.which == "all" else [args.which]
    results = []
    for name in names:
        if name == "equivalence":
            r = V.equivalence_check(p, cfg.advanced_shares(), cfg.superposed, cfg.seed)
        elif name == "access":
            r = V.access_structure_report(p, cap_dm=cfg.cap_dm)
        elif name == "max-advance":
            r = V.max_advance_check(p, cfg.cap_dm)
        elif name == "strong" and p.kind != OGAWA:
            r = V.strong_security_sweep(p, cfg.cap_dm)
        else:
            r = V.leakage_search(p, cfg.cap_dm)
        results.append(r)
    lines = []
    for r in results:
        wfile = None
        if r.witness is not None and args.witness_dir:
            d = Path(args.witness_dir)
            d.mkdir(parents=True, exist_ok=True)
            wfile = str(d / f"{r.name}-{r.params_hash}.witness")
            Path(wfile).write_text(r.witness.to_text())
        lines.append(r.line(wfile))
        if args.verbose:
            lines.append(f"# {r.name}: {r.detail}")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if cfg.out:
        Path(cfg.out).write_text(report)
    return 1 if any(r.status == V.FAIL for r in results) else 0


COMMANDS = {"encode": cmd_encode, "advance": cmd_advance, "complete": cmd_complete,
            "reconstruct": cmd_reconstruct, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.cmd](cfg, args)
    except (UsageError, SchemeError, FieldError, CapExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
