"""Command-line front end.

Exit codes: 0 ok, 1 suite failure, 2 parse error, 3 invalid flags,
4 oracle cap exceeded, 5 dictionary does not span the target, 6 construction
validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import constructions as C
from . import envelope as E
from . import greedy as G
from . import norms as N
from . import seqfile
from . import verify as V
from .seq import FinSeq, ValidationError, indicator

EXIT_SUITE, EXIT_PARSE, EXIT_FLAGS, EXIT_CAP, EXIT_LP, EXIT_CONSTRUCT = 1, 2, 3, 4, 5, 6


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_FLAGS, message)


def _fmt(x, as_float: bool) -> str:
    if as_float:
        return repr(float(x))
    if isinstance(x, N.NormValue):
        return str(x)
    return seqfile.frac_str(x)


def _space(text: Optional[str]) -> Optional[N.SpaceSpec]:
    if text is None:
        return None
    try:
        return N.SpaceSpec.parse(text)
    except ValidationError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None


def _read(path: str) -> FinSeq:
    try:
        return seqfile.read(path)
    except (seqfile.SeqFileError, ValidationError) as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


def _gauge(which: str, space: Optional[N.SpaceSpec]) -> N.Gauge:
    if which.startswith("lorentz:"):
        return N.Gauge("lorentz", _space(which))
    if which == "lorentz":
        return N.Gauge("lorentz", space or N.SpaceSpec())
    try:
        return N.Gauge(which, space)
    except ValidationError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None


# --------------------------------------------------------------------------
# subcommands


def cmd_norm(args, out) -> int:
    f = _read(args.input)
    gauge = _gauge(args.which, _space(args.space))
    value = gauge(f)
    out.write(_fmt(value, args.float) + "\n")
    if args.oracle:
        if gauge.kind not in ("B", "A", "B-comb", "A-comb"):
            raise CliError(EXIT_FLAGS, f"--oracle is not available for {args.which}")
        try:
            ref = gauge.oracle(f)
        except N.OracleCapExceeded as exc:
            raise CliError(EXIT_CAP, str(exc)) from None
        out.write(f"{_fmt(ref, args.float)} {'AGREE' if ref == value else 'DISAGREE'}\n")
    return 0


def cmd_greedy(args, out) -> int:
    f = _read(args.input)
    if args.size is None:
        for mod, members in G.greedy_family(f).levels:
            out.write(f"{_fmt(mod, args.float)}: {' '.join(map(str, sorted(members)))}\n")
        return 0
    try:
        sets = G.iter_greedy_sets_of_size(f, args.size)
        for A in sets:
            out.write(" ".join(map(str, sorted(A))) + "\n")
    except ValidationError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    return 0


def _target(text: str) -> FinSeq:
    kind, _, arg = text.partition(":")
    if kind in ("indicator", "alt-indicator"):
        try:
            m = int(arg)
        except ValueError:
            raise CliError(EXIT_FLAGS, f"bad target {text!r}") from None
        if m < 1:
            raise CliError(EXIT_FLAGS, "m must be positive")
        return indicator(range(1, m + 1)) if kind == "indicator" else E.alternating_indicator(m)
    return _read(text)


def cmd_envelope(args, out) -> int:
    f = _target(args.target)
    if not f:
        raise CliError(EXIT_FLAGS, "target is zero")
    space = _space(args.space) or N.SpaceSpec()
    which = args.which
    if args.dict == "auto":
        dictionary = None
    elif args.dict == "coords":
        dictionary = E.coordinate_dictionary(f.indices(), space, which)
    elif args.dict == "cyclic:harmonic":
        dictionary = E.cyclic_dictionary(f.max_index(), None, space, which)
    else:
        raise CliError(EXIT_FLAGS, f"unknown dictionary {args.dict!r}")
    try:
        b = E.envelope_interval(f, space, which, dictionary=dictionary)
    except E.DictionaryError as exc:
        raise CliError(EXIT_LP, str(exc)) from None
    out.write(f"{_fmt(b.lower, args.float)} {_fmt(b.upper, args.float)}\n")
    cert = {
        "lower": seqfile.frac_str(b.lower),
        "lower_cert": str(b.lower_cert),
        "upper": str(b.upper),
        "optimal": b.upper_cert.optimal,
        "decomposition": [
            {"weight": seqfile.frac_str(w), "atom": seqfile.to_entries(a.vector), "norm": str(a.norm)}
            for w, a in zip(b.upper_cert.weights, b.upper_cert.atoms)
        ],
    }
    out.write(json.dumps(cert, sort_keys=True) + "\n")
    return 0


def _blocks_meta(meta: C.H0Blocks) -> dict:
    span = lambda S: [min(S), max(S)] if S else []
    d = {"n": list(meta.n[1:]), "J": [span(J) for J in meta.J]}
    if meta.H:
        d["H"] = [span(H) for H in meta.H]
    return d


def cmd_construct(args, out) -> int:
    w = args.which
    try:
        if w in ("h0", "h"):
            params = C.H0Params.named(args.preset, args.depth)
            K = params.K
            vec, meta = (C.build_h0 if w == "h0" else C.build_h)(params, K)
            info = {"which": w, "preset": params.preset, "depth": K, **_blocks_meta(meta)}
            info["m_k_b_k"] = [seqfile.frac_str(params.m(k) * params.b(k)) for k in range(1, K + 1)]
            info["g0_mass"] = seqfile.frac_str(sum(meta.g0.values(), Fraction(0)))
        elif w == "G":
            t = seqfile.parse_value(args.t) if args.t is not None else Fraction(1)
            vec, pred = C.discontinuity_witness(args.n, t)
            info = {"which": "G", "N": args.n, "t": seqfile.frac_str(t), "predicted": seqfile.frac_str(pred)}
        elif w == "leibniz":
            data = C.leibniz_check(FinSeq.from_values([4, 3, 2, 1]), [(1, 1), (2, 2), (3, 3), (4, 4)])
            vec = C.alternating_from_leibniz(data)
            info = {
                "which": "leibniz",
                "blocks": [[J.lo, J.hi] for J in data.blocks],
                "alpha": seqfile.frac_str(data.alpha),
                "omega_trunc": seqfile.frac_str(data.omega_trunc),
            }
        else:
            raise CliError(EXIT_FLAGS, f"unknown construction {w!r}")
    except C.ConstructionError as exc:
        raise CliError(EXIT_CONSTRUCT, str(exc)) from None
    except seqfile.SeqFileError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    except ValidationError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    info["size"] = len(vec)
    if args.out:
        fmt = "json" if args.out.endswith(".json") else "lines"
        seqfile.write(args.out, vec, fmt)
        with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(info, sort_keys=True) + "\n")
    else:
        out.write(json.dumps({"entries": seqfile.to_entries(vec), "meta": info}, sort_keys=True) + "\n")
    return 0


def cmd_verify(args, out) -> int:
    ids = list(V.REGISTRY) if args.suite == "all" else [args.suite]
    for sid in ids:
        if sid not in V.REGISTRY:
            raise CliError(EXIT_FLAGS, f"unknown suite {sid!r}")
    try:
        corpus = V.CorpusSpec(seed=args.seed, trials=args.trials)
    except ValueError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    reports = [V.run_suite(sid, corpus, workers=args.threads) for sid in ids]
    for r in reports:
        out.write(f"{r.suite} {'PASS' if r.passed else 'FAIL'} trials={r.trials} failures={len(r.failures)}\n")
    if args.report:
        V.write_report(reports, args.report)
    return 0 if all(r.passed for r in reports) else EXIT_SUITE


def cmd_democracy(args, out) -> int:
    if args.window is None:
        args.window = args.m_max
    if args.m_max < 1:
        raise CliError(EXIT_FLAGS, "--m-max must be positive")
    if args.window < args.m_max:
        raise CliError(EXIT_FLAGS, "window must be at least m-max")
    gauge = _gauge(args.gauge, _space(args.space) or N.SpaceSpec())
    prof = N.democracy_profile(gauge, args.m_max, args.window)
    lines = ["m,phi_l,phi_u"]
    for m, lo, hi in zip(range(1, args.m_max + 1), prof.lower, prof.upper):
        lines.append(f"{m},{_fmt(lo, args.float)},{_fmt(hi, args.float)}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


# --------------------------------------------------------------------------


def _default_threads() -> int:
    raw = os.environ.get("GREEDYLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="greedylab", description="Exact norms, greedy sets and certified envelope bounds.")
    p.add_argument("--float", action="store_true", help="print decimal approximations (not authoritative)")
    p.add_argument("--threads", type=int, default=_default_threads(), help="worker processes (default $GREEDYLAB_THREADS or 1)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("norm", help="evaluate a norm")
    s.add_argument("--input", required=True)
    s.add_argument("--which", required=True, help="l1|linf|lorentz:q|B|A|B-comb|A-comb")
    s.add_argument("--space", help="lorentz:q, required for combined norms")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(fn=cmd_norm)

    s = sub.add_parser("greedy", help="list greedy levels or greedy sets of a given size")
    s.add_argument("--input", required=True)
    s.add_argument("--size", type=int)
    s.set_defaults(fn=cmd_greedy)

    s = sub.add_parser("envelope", help="certified interval for the envelope norm")
    s.add_argument("--target", required=True, help="FILE | indicator:m | alt-indicator:m")
    s.add_argument("--space", default="lorentz:inf")
    s.add_argument("--which", choices=("B", "A"), default="B")
    s.add_argument("--dict", default="auto", help="auto | coords | cyclic:harmonic")
    s.set_defaults(fn=cmd_envelope)

    s = sub.add_parser("construct", help="emit an explicit construction")
    s.add_argument("--which", required=True, choices=("h0", "h", "G", "leibniz"))
    s.add_argument("--preset", default="A", choices=("A", "B"))
    s.add_argument("--depth", type=int)
    s.add_argument("--t")
    s.add_argument("--n", type=int, default=32, help="last index of the tail in G(t)")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_construct)

    s = sub.add_parser("verify", help="run property suites")
    s.add_argument("--suite", default="all")
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("democracy", help="fundamental-function table as CSV")
    s.add_argument("--gauge", default="lorentz", help="l1|linf|lorentz|B|A|B-comb|A-comb")
    s.add_argument("--space")
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--window", type=int)
    s.add_argument("--csv")
    s.set_defaults(fn=cmd_democracy)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise CliError(EXIT_FLAGS, "--threads must be positive")
        return args.fn(args, out)
    except CliError as exc:
        print(f"greedylab: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
