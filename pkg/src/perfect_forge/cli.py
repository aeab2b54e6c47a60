"""Command-line interface: ``perfect-forge <subcommand> ...``.

Exit codes: 0 success, 2 verification failure, 3 cap refusal, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .components import ComponentError, i_components_explicit, i_sigma_components_explicit
from .constructions import (
    ENUMERATION_CAP,
    ConstructionError,
    LambdaFunction,
    SigmaMap,
    SwitchPart,
    coset_partition,
    default_sigma,
    doubling,
    fullrank_code,
    generalized_ls,
    implicit_enumerate,
    lindstrom_schonheim,
    switch_family_explicit,
    vasiliev,
)
from .fileio import FormatError, code_text, matrix_text, read_code, read_implicit, write_code, write_implicit, atomic_write
from .fqla import CapExceeded, ExplicitCode, DimensionError
from .gf import FieldError, FieldPermutation, field_from_order, perm_make
from .hamming import GeometryError, build_hamming
from .verify import (
    MARK_CAP,
    VerificationError,
    VerificationReport,
    big_decimal,
    lower_bound_count,
    rank_certificate,
    sampled_perfect_check,
    verify_perfect_explicit,
)

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_CAP = 3
EXIT_USAGE = 64

log = logging.getLogger("perfect_forge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument helpers --------------------------------------------------------


def _field(q: int):
    try:
        return field_from_order(q)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}: expected comma-separated integers") from exc


def _perm(text: str, q: int) -> FieldPermutation:
    if text in ("swap", "cycle", "identity"):
        return default_sigma(q, text)
    try:
        return perm_make(_ints(text, "permutation"), q)
    except FieldError as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from exc


def _load_base(spec: str, q: int | None = None) -> ExplicitCode:
    """``hamming:q,m``, ``trivial:q`` (the length-1 code {0}) or a code file path."""
    if spec.startswith("hamming:"):
        vals = _ints(spec.split(":", 1)[1], "base spec")
        if len(vals) != 2:
            raise UsageError(f"bad base spec {spec!r}; expected hamming:q,m")
        bq, bm = vals
        code = build_hamming(bq, bm).codewords()
    elif spec.startswith("trivial:"):
        (tq,) = _ints(spec.split(":", 1)[1], "base spec")
        f = _field(tq)
        code = ExplicitCode(f, 1, np.zeros((1, 1), dtype=np.uint8))
    else:
        code = read_code(spec)
    if q is not None and code.q != q:
        raise UsageError(f"base code is over F_{code.q}, expected F_{q}")
    return code


def _lambda(args, code_q: int) -> LambdaFunction:
    kind = args.lam
    if kind == "zero":
        return LambdaFunction()
    if kind == "seeded":
        if args.seed is None:
            raise UsageError("--lambda seeded requires --seed")
        return LambdaFunction("seeded", seed=args.seed)
    if kind.startswith("table:"):
        return LambdaFunction("table", table=tuple(_ints(kind.split(":", 1)[1], "lambda table")))
    raise UsageError(f"unknown --lambda {kind!r}")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(text)


def _report_exit(args, report: VerificationReport, extra: dict | None = None) -> int:
    payload = report.to_dict()
    if extra:
        payload.update(extra)
    text = report.text()
    if extra:
        text += "\n" + "\n".join(f"{k}: {v}" for k, v in extra.items())
    _emit(args, payload, text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _finish_code(args, code: ExplicitCode) -> int:
    """Write ``--out`` and run ``--verify`` for an explicit construction output."""
    if args.out:
        write_code(args.out, code)
        log.info("wrote %d words to %s", len(code), args.out)
    if args.verify == "exact":
        report = verify_perfect_explicit(code, cap=args.mark_cap)
        return _report_exit(args, report, {"count": len(code), "rank": rank_certificate(code).rank})
    if not args.out:
        sys.stdout.write(code_text(code))
    elif args.json:
        print(json.dumps({"count": len(code), "n": code.n, "q": code.q, "out": args.out}, sort_keys=True))
    return EXIT_OK


# -- subcommands -------------------------------------------------------------


def cmd_field_table(args) -> int:
    f = _field(args.q)
    rows = {"add": f.add, "mul": f.mul}
    if args.json:
        _emit(args, {"q": f.q, "p": f.p, "k": f.k, "modulus": list(f.modulus),
                     **{k: v.tolist() for k, v in rows.items()}}, "")
        return EXIT_OK
    print(f"F_{f.q}: p={f.p} k={f.k} modulus={','.join(map(str, f.modulus))} (low degree first)")
    for name, table in rows.items():
        print(f"{name}:")
        for r in table.tolist():
            print("  " + " ".join(f"{v:2d}" for v in r))
    return EXIT_OK


def cmd_hamming(args) -> int:
    code = build_hamming(args.q, args.m)
    if args.out:
        out = Path(args.out)
        atomic_write(out.with_name(out.name + ".H.txt"), matrix_text(code.H))
        atomic_write(out.with_name(out.name + ".basis.txt"), matrix_text(code.basis))
    if args.list:
        write_code(args.list, code.codewords(cap=args.cap))
    payload = {"q": code.q, "m": code.m, "n": code.n, "dim": code.dim,
               "distinguished": list(code.distinguished)}
    text = (f"H_{{{code.q},{code.m}}}: n={code.n} dim={code.dim} distinguished={list(code.distinguished)}")
    if not args.out and not args.json:
        text += "\n" + matrix_text(code.H) + matrix_text(code.basis).rstrip("\n")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_components(args) -> int:
    code = read_code(args.code)
    if args.sigma:
        part = i_sigma_components_explicit(code, args.i, _perm(args.sigma, code.q))
    else:
        part = i_components_explicit(code, args.i)
    blocks = part.block_codes(code)
    if args.out:
        out = Path(args.out)
        for t, block in enumerate(blocks, start=1):
            write_code(out / f"block_{t:03d}.txt", block)
    summary = {"i": args.i, "sigma": args.sigma, "blocks": len(blocks), "sizes": part.sizes()}
    lines = [f"{len(blocks)} blocks at coordinate {args.i}" + (f" with sigma={args.sigma}" if args.sigma else "")]
    lines += [f"block {t}: {len(b)} words" for t, b in enumerate(blocks, start=1)]
    if args.out:
        atomic_write(Path(args.out) / "summary.txt", "\n".join(lines) + "\n")
    _emit(args, summary, "\n".join(lines))
    return EXIT_OK


def cmd_vasiliev(args) -> int:
    base = _load_base(args.base, 2)
    return _finish_code(args, vasiliev(base, _lambda(args, 2), cap=args.cap))


def cmd_ls(args) -> int:
    base = _load_base(args.base, args.q)
    return _finish_code(args, lindstrom_schonheim(base, _lambda(args, base.q), cap=args.cap))


def cmd_doubling(args) -> int:
    p1 = coset_partition(args.m)
    n = p1.n
    if args.pi is None:
        pi = list(range(n + 1))
    else:
        pi = _ints(args.pi, "--pi")
    return _finish_code(args, doubling(p1, coset_partition(args.m), pi))


def cmd_gls(args) -> int:
    base = _load_base(args.base)
    if args.sigma_map == "identity":
        smap = SigmaMap()
    elif args.sigma_map == "seeded":
        if args.seed is None:
            raise UsageError("--sigma-map seeded requires --seed")
        smap = SigmaMap("seeded", seed=args.seed)
    elif args.sigma_map.startswith("table:"):
        entries = args.sigma_map.split(":", 1)[1].split(";")
        smap = SigmaMap("table", table=tuple(_perm(e, base.q) for e in entries))
    else:
        raise UsageError(f"unknown --sigma-map {args.sigma_map!r}")
    return _finish_code(args, generalized_ls(base, args.i, smap, cap=args.cap))


def cmd_switch(args) -> int:
    code = read_code(args.code)
    base = None
    if args.hamming:
        vals = _ints(args.hamming, "--hamming")
        if len(vals) != 2:
            raise UsageError("--hamming expects q,m")
        base = build_hamming(*vals)
    parts = []
    for spec in args.part:
        fields = spec.split(":", 2)
        if len(fields) != 3 or not fields[0].isdigit():
            raise UsageError(f"bad --part {spec!r}; expected i:blockfile:sigma")
        parts.append(SwitchPart(read_code(fields[1]), int(fields[0]), _perm(fields[2], code.q)))
    return _finish_code(args, switch_family_explicit(code, parts, base=base))


def _sigmas(args) -> list[FieldPermutation]:
    entries = args.sigma.split(";")
    if len(entries) == 1:
        entries = entries * args.m
    if len(entries) != args.m:
        raise UsageError(f"--sigma needs 1 or {args.m} entries separated by ';'")
    return [_perm(e, args.q) for e in entries]


def cmd_fullrank(args) -> int:
    code = fullrank_code(args.q, args.m, _sigmas(args), variant=args.variant)
    if args.implicit:
        write_implicit(args.implicit, code)
    extra = {"n": code.n, "members": [m.i for m in code.family]}
    if args.verify == "exact":
        explicit = implicit_enumerate(code, cap=args.cap)
        if args.out:
            write_code(args.out, explicit)
        report = verify_perfect_explicit(explicit, cap=args.mark_cap)
        extra.update(count=len(explicit), rank=rank_certificate(explicit).rank)
        return _report_exit(args, report, extra)
    if args.out:
        write_code(args.out, implicit_enumerate(code, cap=args.cap))
    if args.verify == "sampled":
        if args.seed is None:
            raise UsageError("--verify sampled requires --seed")
        report = sampled_perfect_check(code, args.trials, args.seed, threads=args.threads, targeted=args.targeted)
        extra["rank"] = rank_certificate(code, seed=args.seed).rank
        return _report_exit(args, report, extra)
    _emit(args, extra, f"full-rank code q={args.q} m={args.m} n={code.n}, switched coordinates {extra['members']}")
    return EXIT_OK


def _load_any(args):
    if bool(args.code) == bool(args.implicit):
        raise UsageError("give exactly one of --code or --implicit")
    return read_code(args.code) if args.code else read_implicit(args.implicit)


def cmd_verify(args) -> int:
    code = _load_any(args)
    if args.exact == (args.sampled is not None):
        raise UsageError("give exactly one of --exact or --sampled N")
    if args.exact:
        if not isinstance(code, ExplicitCode):
            code = implicit_enumerate(code, cap=args.cap)
        return _report_exit(args, verify_perfect_explicit(code, m=args.m, cap=args.mark_cap))
    if args.seed is None:
        raise UsageError("--sampled requires --seed")
    return _report_exit(args, sampled_perfect_check(code, args.sampled, args.seed,
                                                    threads=args.threads, targeted=args.targeted))


def cmd_rank(args) -> int:
    code = _load_any(args)
    if not isinstance(code, ExplicitCode) and args.seed is None:
        raise UsageError("rank of an implicit code requires --seed")
    cert = rank_certificate(code, seed=args.seed or 0)
    payload = {"rank": cert.rank, "n": code.n, "witnesses": len(cert.witnesses)}
    lines = [f"rank {cert.rank} of {code.n}"]
    if args.show_witnesses:
        lines += [f"  {w}  ({p})" for w, p in zip(cert.witnesses, cert.proofs)]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_bound(args) -> int:
    b = lower_bound_count(args.q, args.n)
    payload = {"q": b.q, "n": b.n, "inner_length": b.inner_length, "inner_m": b.inner_m,
               "base": b.base, "gap": b.gap,
               "exponent": None if b.exponent is None else big_decimal(b.exponent),
               "decimal": b.decimal, "vacuous": b.vacuous}
    _emit(args, payload, b.describe())
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single-line JSON summary")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="enumeration cap (codewords)")
    common.add_argument("--mark-cap", type=int, default=MARK_CAP, help="ball-marking cap (cells)")
    common.add_argument("--log-level", default="WARNING")

    p = _Parser(prog="perfect-forge", description="Construct and verify q-ary 1-perfect codes.")
    p.add_argument("--version", action="version", version=f"perfect-forge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    def construction_flags(sp):
        sp.add_argument("--out", help="output code file")
        sp.add_argument("--verify", choices=["none", "exact"], default="none")
        sp.add_argument("--seed", type=int)

    sp = add("field-table", cmd_field_table, "print addition and multiplication tables")
    sp.add_argument("--q", type=int, required=True)

    sp = add("hamming", cmd_hamming, "build a Hamming code")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--out", help="prefix for <out>.H.txt and <out>.basis.txt")
    sp.add_argument("--list", help="also write all codewords to this code file")

    sp = add("components", cmd_components, "i-components or (i,sigma)-components of a code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--sigma")
    sp.add_argument("--out", help="directory for block files and summary.txt")

    sp = add("vasiliev", cmd_vasiliev, "binary Vasil'ev construction")
    sp.add_argument("--base", required=True, help="hamming:2,m | trivial:2 | code file")
    sp.add_argument("--lambda", dest="lam", default="zero", help="zero | seeded | table:v0,v1,...")
    construction_flags(sp)

    sp = add("doubling", cmd_doubling, "doubling construction from two coset partitions")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--pi", help="comma list, a permutation of 0..n (default identity)")
    construction_flags(sp)

    sp = add("ls", cmd_ls, "q-ary Lindstrom-Schonheim construction")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--base", required=True)
    sp.add_argument("--lambda", dest="lam", default="zero")
    construction_flags(sp)

    sp = add("gls", cmd_gls, "union of permuted principal-component cosets")
    sp.add_argument("--base", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--sigma-map", default="identity", help="identity | seeded | table:p1;p2;...")
    construction_flags(sp)

    sp = add("switch", cmd_switch, "switch a family of components of an explicit code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--part", action="append", required=True, help="i:blockfile:sigma (repeatable)")
    sp.add_argument("--hamming", help="q,m when the code is that Hamming code")
    construction_flags(sp)

    sp = add("fullrank", cmd_fullrank, "full-rank code by switching an admissible family")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--sigma", required=True, help="swap | cycle | comma table; ';' separates per-coordinate entries")
    sp.add_argument("--variant", choices=["char2", "general"])
    sp.add_argument("--verify", choices=["none", "exact", "sampled"], default="none")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--targeted", type=int, default=0)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--implicit", help="write the implicit description here")
    sp.add_argument("--out", help="write the enumerated code here")

    for name, func, text in (("verify", cmd_verify, "verify perfectness"), ("rank", cmd_rank, "rank of a code")):
        sp = add(name, func, text)
        sp.add_argument("--code")
        sp.add_argument("--implicit")
        sp.add_argument("--seed", type=int)
        if name == "verify":
            sp.add_argument("--exact", action="store_true")
            sp.add_argument("--sampled", type=int, metavar="N")
            sp.add_argument("--targeted", type=int, default=0)
            sp.add_argument("--m", type=int)
        else:
            sp.add_argument("--show-witnesses", action="store_true")

    sp = add("bound", cmd_bound, "lower bound on the number of 1-perfect codes")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    return p


def _configure_logging(level: str) -> None:
    # one handler on our own logger, bound to the current stderr
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"perfect-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    _configure_logging(args.log_level)
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    log.info("config %s backend=%s", json.dumps(config, sort_keys=True), kernels.BACKEND)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"perfect-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"perfect-forge: refused: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FieldError, GeometryError, ComponentError, ConstructionError, VerificationError,
            FormatError, DimensionError, OSError) as exc:
        print(f"perfect-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
