"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 runtime error. Diagnostics go to
stderr; data goes to stdout or the --out path. Identical invocations with
identical seeds produce byte-identical data outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from .bignum import MulAlgorithm, Natural, hex_decode, hex_encode
from .estimator import mq_attack_log2_time, rsaprg_param_report
from .modred import ReductionMethod
from .quad import (
    DEFAULT_OUTPUT_CAP as QUAD_CAP,
    QuadParams,
    QuadState,
    build_precomp,
    make_classical_evaluator,
    make_precomp_evaluator,
    quad_generate,
    quad_keygen,
    read_system,
    write_system,
)
from .rsaprg import (
    RsaprgParams,
    default_output_bits,
    generate,
    key_file_dict,
    keygen,
    params_from_dict,
    seed_state,
)


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise ValueError("seed must fit in 64 bits")
    return v


def _csv_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def build_parser() -> _Parser:
    parser = _Parser(prog="prbgkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rsaprg = sub.add_parser("rsaprg", help="RSA-iteration generator")
    rsub = rsaprg.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    kg = rsub.add_parser("keygen", help="generate a key/parameter file")
    kg.add_argument("--bits", type=int, required=True)
    kg.add_argument("--e", type=int, default=9)
    kg.add_argument("--seed", type=_u64, required=True)
    kg.add_argument("--out")
    kg.add_argument("--emit-private", action="store_true")
    kg.add_argument("--r", type=int, help="output bits per iteration "
                    "(defaults only for the published (6144, 9) point)")
    kg.add_argument("--l", type=int, help="lifetime output cap in bits")
    kg.set_defaults(func=_cmd_rsaprg_keygen)

    st = rsub.add_parser("stream", help="emit keystream bits")
    st.add_argument("--params", required=True)
    st.add_argument("--seed-x", required=True, metavar="HEX")
    st.add_argument("--nbits", type=int, required=True)
    st.add_argument("--method", choices=[m.value for m in ReductionMethod],
                    default="classical")
    st.add_argument("--format", choices=["hex", "raw"], default="hex")
    st.add_argument("--out")
    st.set_defaults(func=_cmd_rsaprg_stream)

    quad = sub.add_parser("quad", help="quadratic-system generator")
    qsub = quad.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    qk = qsub.add_parser("keygen", help="generate a system file")
    qk.add_argument("--n", type=int, required=True)
    qk.add_argument("--k", type=int, default=2)
    qk.add_argument("--seed", type=_u64, required=True)
    qk.add_argument("--out", required=True)
    qk.add_argument("--d", type=int, default=64, choices=[32, 64])
    qk.set_defaults(func=_cmd_quad_keygen)

    qs = qsub.add_parser("stream", help="emit keystream bits")
    qs.add_argument("--system", required=True)
    qs.add_argument("--x0", metavar="HEX", help="initial state (default: zero state)")
    qs.add_argument("--nbits", type=int, required=True)
    qs.add_argument("--variant", choices=["classical", "l2", "l4"], default="classical")
    qs.add_argument("--format", choices=["hex", "raw"], default="hex")
    qs.add_argument("--out")
    qs.set_defaults(func=_cmd_quad_stream)

    bench = sub.add_parser("bench", help="measurement harness")
    bsub = bench.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def bench_common(p, reps_default, reps_flag="--reps"):
        p.add_argument(reps_flag, dest="reps", type=int, default=reps_default)
        p.add_argument("--seed", type=_u64, default=1)
        p.add_argument("--format", choices=["csv", "markdown", "json"], default="csv")
        p.add_argument("--out")
        p.add_argument("--shape-report", action="store_true",
                       help="append expected-vs-observed ordering notes to stderr")

    bm = bsub.add_parser("mul")
    bm.add_argument("--n", type=_csv_ints, default=[6144])
    bm.add_argument("--algs", default="all",
                    help="comma list of classical,karatsuba1,karatsuba2,toomcook3")
    bench_common(bm, 1000)
    bm.set_defaults(func=_cmd_bench_mul)

    bd = bsub.add_parser("modred")
    bd.add_argument("--n", type=_csv_ints, default=[6144])
    bd.add_argument("--methods", default="all",
                    help="comma list of classical,barrett,method1,method2")
    bench_common(bd, 1000)
    bd.set_defaults(func=_cmd_bench_modred)

    br = bsub.add_parser("rsaprg")
    br.add_argument("--n", type=int, default=6144)
    br.add_argument("--e", type=int, default=9)
    br.add_argument("--r", type=int)
    br.add_argument("--methods", default="all")
    bench_common(br, 1000)
    br.set_defaults(func=_cmd_bench_rsaprg)

    bq = bsub.add_parser("quad")
    bq.add_argument("--n", type=int, default=160)
    bq.add_argument("--k", type=int, default=2)
    bq.add_argument("--variants", default="classical,l2,l4")
    bench_common(bq, 10000, reps_flag="--iters")
    bq.set_defaults(func=_cmd_bench_quad)

    est = sub.add_parser("estimate", help="security-parameter estimates")
    esub = est.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    eq = esub.add_parser("quad")
    eq.add_argument("--k", type=float, required=True)
    eq.add_argument("--n", type=int, required=True)
    eq.add_argument("--format", choices=["text", "json"], default="text")
    eq.add_argument("--out")
    eq.set_defaults(func=_cmd_estimate_quad)

    er = esub.add_parser("rsaprg")
    er.add_argument("--n", type=int, required=True)
    er.add_argument("--e", type=int, required=True)
    er.add_argument("--r", type=int, required=True)
    er.add_argument("--l", type=int, required=True)
    er.add_argument("--format", choices=["text", "json"], default="text")
    er.add_argument("--out")
    er.set_defaults(func=_cmd_estimate_rsaprg)

    return parser


# ---------------------------------------------------------------------------
# output plumbing

def _write(data, out_path: str | None) -> None:
    if isinstance(data, bytes):
        if out_path:
            with open(out_path, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
    else:
        if out_path:
            with open(out_path, "w") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _emit_stream(bits, fmt: str, out_path: str | None) -> None:
    raw = bits.to_bytes()
    if fmt == "raw":
        _write(raw, out_path)
    else:
        _write(raw.hex() + "\n", out_path)


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_rsaprg_keygen(args) -> None:
    r = args.r if args.r is not None else default_output_bits(args.bits, args.e)
    if r is None:
        raise CliUsageError(
            f"no published output width for (n={args.bits}, e={args.e}); pass --r")
    l = args.l if args.l is not None else 2 ** 32
    key = keygen(args.bits, args.e, args.seed)
    params = RsaprgParams(n=args.bits, e=args.e, r=r, l=l)
    params.validate(strict=False)
    if args.emit_private:
        data = key_file_dict(params, key.N, key.p, key.q)
    else:
        data = key_file_dict(params, key.N)
    _write(json.dumps(data, indent=2) + "\n", args.out)


def _cmd_rsaprg_stream(args) -> None:
    with open(args.params) as fh:
        params, N = params_from_dict(json.load(fh))
    params.validate(strict=True)
    state = seed_state(N, params, hex_decode(args.seed_x),
                       ReductionMethod(args.method))
    bits = generate(state, args.nbits)
    _emit_stream(bits, args.format, args.out)


def _cmd_quad_keygen(args) -> None:
    params = QuadParams(n=args.n, k=args.k, d=args.d)
    system, state = quad_keygen(params, args.seed)
    write_system(system, args.out)
    meta = {"n": args.n, "k": args.k, "d": args.d,
            "columns": system.column_count,
            "x0": hex_encode(Natural(state.x)),
            "system_file": args.out}
    _write(json.dumps(meta, indent=2) + "\n", None)


def _cmd_quad_stream(args) -> None:
    system = read_system(args.system)
    x0 = int(hex_decode(args.x0)) if args.x0 else 0
    if x0 >> system.params.n:
        raise ValueError("x0 wider than the system's state")
    state = QuadState(x=x0, L_cap=QUAD_CAP)
    if args.variant == "classical":
        evaluator = make_classical_evaluator(system)
    else:
        pre = build_precomp(system, int(args.variant[1:]))
        evaluator = make_precomp_evaluator(system, pre)
    bits = quad_generate(system, state, args.nbits, evaluator)
    _emit_stream(bits, args.format, args.out)


def _parse_selection(text: str, enum_cls, what: str):
    if text == "all":
        return list(enum_cls)
    out = []
    for name in text.split(","):
        try:
            out.append(enum_cls(name))
        except ValueError:
            raise CliUsageError(f"unknown {what} {name!r}") from None
    return out


def _finish_bench(records, args) -> None:
    _write(bench_mod.emit(records, args.format), args.out)
    if args.shape_report:
        report = bench_mod.shape_report(records)
        if report:
            print(report, file=sys.stderr)


def _cmd_bench_mul(args) -> None:
    algs = _parse_selection(args.algs, MulAlgorithm, "algorithm")
    _finish_bench(bench_mod.bench_mul(args.n, algs, args.reps, args.seed), args)


def _cmd_bench_modred(args) -> None:
    methods = _parse_selection(args.methods, ReductionMethod, "method")
    _finish_bench(bench_mod.bench_modred(args.n, methods, args.reps, args.seed), args)


def _cmd_bench_rsaprg(args) -> None:
    methods = _parse_selection(args.methods, ReductionMethod, "method")
    _finish_bench(bench_mod.bench_rsaprg(args.n, args.e, methods, args.reps,
                                         args.seed, r=args.r), args)


def _cmd_bench_quad(args) -> None:
    variants = args.variants.split(",")
    _finish_bench(bench_mod.bench_quad(args.n, args.k, variants, args.reps,
                                       args.seed), args)


def _cmd_estimate_quad(args) -> None:
    est = mq_attack_log2_time(args.k, args.n)
    if args.format == "json":
        _write(json.dumps({"k": est.k, "n": est.n, "D": est.D,
                           "log2_time": est.log2_time}, indent=2) + "\n", args.out)
    else:
        _write(f"quadratic system: k={est.k:g} n={est.n}\n"
               f"regularity degree D = {est.D}\n"
               f"attack time ~ 2^{est.log2_time:.1f} operations\n", args.out)


def _cmd_estimate_rsaprg(args) -> None:
    report = rsaprg_param_report(args.n, args.e, args.r, args.l)
    if args.format == "json":
        _write(json.dumps(report, indent=2) + "\n", args.out)
    else:
        lines = [f"parameters: n={args.n} e={args.e} r={args.r} l={args.l}",
                 f"verdict: {report['verdict']}"]
        lines += [f"  - {reason}" for reason in report["reasons"]]
        _write("\n".join(lines) + "\n", args.out)


# ---------------------------------------------------------------------------

def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    try:
        args.func(args)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
