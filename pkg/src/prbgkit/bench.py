"""Measurement harness for multiplication, reduction, exponentiation and
quadratic-system iteration.

Measurement rules: operand generation and all precomputation happen
outside the timed region; results are validated against the relevant
oracle in an untimed warmup pass; the timed region is single-threaded.
If one pass over the requested repetitions runs under 10 ms, the pass is
repeated and the per-pass time averaged, so the recorded repetition count
stays reproducible for a fixed seed while the region stays measurable.
Elapsed times are wall-clock and machine-specific; every other record
field is deterministic in the seed.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

from .bignum import MulAlgorithm, MulCounter, Natural, mul
from .modred import (
    ReductionMethod,
    ReductionStats,
    make_context,
    reduce,
    reduce_classical,
)
from .quad import (
    QuadParams,
    QuadState,
    XorCounter,
    build_precomp,
    make_classical_evaluator,
    make_precomp_evaluator,
    quad_iterate,
    quad_keygen,
)
from .rsaprg import IterationCounts, RsaprgParams, RsaprgState, default_output_bits, iterate, seed_state
from .splitmix import SplitMix64

MIN_REGION_NS = 10_000_000
MAX_EXTRA_PASSES = 64

CSV_COLUMNS = ("operation", "variant", "size_bits", "repetitions", "elapsed_ns",
               "ns_per_op", "throughput_mbit_s", "leaf_muls", "xor_words")


class BenchFormatError(ValueError):
    """Unknown emission format."""


@dataclass
class BenchRecord:
    """One measurement row."""

    operation: str
    variant: str
    size_bits: int
    repetitions: int
    elapsed_ns: int
    throughput_mbit_s: float | None = None
    leaf_mul_counts: dict[str, int] | None = None
    xor_words: int | None = None

    @property
    def ns_per_op(self) -> float:
        return self.elapsed_ns / self.repetitions

    @property
    def leaf_muls(self) -> int | None:
        if self.leaf_mul_counts is None:
            return None
        return sum(self.leaf_mul_counts.values())

    def row(self) -> dict:
        return {
            "operation": self.operation,
            "variant": self.variant,
            "size_bits": self.size_bits,
            "repetitions": self.repetitions,
            "elapsed_ns": self.elapsed_ns,
            "ns_per_op": round(self.ns_per_op, 3),
            "throughput_mbit_s": None if self.throughput_mbit_s is None
            else round(self.throughput_mbit_s, 4),
            "leaf_muls": self.leaf_muls,
            "xor_words": self.xor_words,
        }


def throughput_mbit_s(bits_total: int, elapsed_ns: float) -> float:
    """Emitted bits over wall time, in Mbit/s."""
    if elapsed_ns <= 0:
        raise ValueError("elapsed time must be positive")
    return bits_total / elapsed_ns * 1000.0


def _timed_passes(run_pass) -> int:
    """Average per-pass nanoseconds, repeating until the region is >= 10 ms."""
    t0 = time.perf_counter_ns()
    run_pass()
    elapsed = time.perf_counter_ns() - t0
    passes = 1
    while elapsed < MIN_REGION_NS and passes < MAX_EXTRA_PASSES:
        t0 = time.perf_counter_ns()
        run_pass()
        elapsed += time.perf_counter_ns() - t0
        passes += 1
    return elapsed // passes


def _exact_bits(stream: SplitMix64, bits: int) -> int:
    return stream.next_bits(bits) | (1 << (bits - 1))


def bench_mul(n_list: list[int], algs: list[MulAlgorithm], reps: int,
              rng_seed: int) -> list[BenchRecord]:
    """Time reps products of fresh random n-bit operands per (n, algorithm)."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    records = []
    stream = SplitMix64(rng_seed)
    for n in n_list:
        pairs = [(Natural(_exact_bits(stream, n)), Natural(_exact_bits(stream, n)))
                 for _ in range(reps)]
        for alg in algs:
            for a, b in pairs[:3]:  # warmup oracle pass
                if int(mul(a, b, alg)) != int(a) * int(b):
                    raise RuntimeError(f"warmup oracle mismatch: {alg} at n={n}")
            counter = MulCounter()
            mul(pairs[0][0], pairs[0][1], alg, counter)

            def run_pass(alg=alg):
                for a, b in pairs:
                    mul(a, b, alg)

            elapsed = _timed_passes(run_pass)
            records.append(BenchRecord(
                operation="mul", variant=alg.value, size_bits=n,
                repetitions=reps, elapsed_ns=elapsed,
                leaf_mul_counts=counter.snapshot()))
    return records


def bench_modred(n_list: list[int], methods: list[ReductionMethod], reps: int,
                 rng_seed: int) -> list[BenchRecord]:
    """Time reps reductions of random 2n-bit inputs against one fixed
    modulus per n; context precomputation is excluded from the timing."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    records = []
    stream = SplitMix64(rng_seed)
    for n in n_list:
        N = Natural(_exact_bits(stream, n) | 1)
        ctx = make_context(N)
        inputs = [Natural(_exact_bits(stream, 2 * n)) for _ in range(reps)]
        expected = [reduce_classical(x, ctx) for x in inputs[:3]]
        for method in methods:
            for x, want in zip(inputs[:3], expected):  # warmup oracle pass
                if reduce(x, ctx, method) != want:
                    raise RuntimeError(f"warmup oracle mismatch: {method} at n={n}")
            counter = MulCounter()
            stats = ReductionStats()
            reduce(inputs[0], ctx, method, counter, stats)

            def run_pass(method=method):
                for x in inputs:
                    reduce(x, ctx, method)

            elapsed = _timed_passes(run_pass)
            records.append(BenchRecord(
                operation="modred", variant=method.value, size_bits=n,
                repetitions=reps, elapsed_ns=elapsed,
                leaf_mul_counts=counter.snapshot() or None))
    return records


def bench_rsaprg(n: int, e: int, methods: list[ReductionMethod], reps: int,
                 rng_seed: int, r: int | None = None) -> list[BenchRecord]:
    """Time full x^e iterations per reduction method.

    The modulus is a random odd n-bit value from the seed stream; the
    iteration's cost does not depend on its factorization, so benchmark
    runs skip prime generation. Throughput assumes r output bits per
    iteration.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if r is None:
        r = default_output_bits(n, e)
        if r is None:
            raise ValueError(f"no default output width for (n={n}, e={e}); pass r")
    stream = SplitMix64(rng_seed)
    N = Natural(_exact_bits(stream, n) | 1)
    params = RsaprgParams(n=n, e=e, r=r, l=2 ** 62)
    records = []
    for method in methods:
        x0 = Natural(stream.randbelow(int(N)))
        state = seed_state(N, params, x0, method)
        # warmup oracle pass: one iteration against the host's modular pow
        probe = RsaprgState(ctx=state.ctx, params=params, x=state.x, method=method)
        counts = IterationCounts()
        counter = MulCounter()
        iterate(probe, counter=counter, counts=counts)
        if int(probe.x) != pow(int(state.x), e, int(N)):
            raise RuntimeError(f"warmup oracle mismatch: {method} iteration at n={n}")

        def run_pass(state=state):
            for _ in range(reps):
                iterate(state)

        elapsed = _timed_passes(run_pass)
        throughput = throughput_mbit_s(r * reps, elapsed)
        records.append(BenchRecord(
            operation="rsaprg", variant=method.value, size_bits=n,
            repetitions=reps, elapsed_ns=elapsed,
            throughput_mbit_s=throughput,
            leaf_mul_counts=counter.snapshot()))
    return records


def bench_quad(n: int, k: int, variants: list[str], iters: int,
               rng_seed: int) -> list[BenchRecord]:
    """Time full iterations per evaluation variant.

    Precomputation-table builds are reported as separate quad_precomp
    rows and excluded from iteration timing. xor_words comes from an
    untimed instrumented replay over the same states.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    known = {"classical", "l2", "l4"}
    bad = set(variants) - known
    if bad:
        raise ValueError(f"unknown variants: {sorted(bad)}")
    params = QuadParams(n=n, k=k)
    system, state0 = quad_keygen(params, rng_seed)
    records = []
    out_bits = params.out_bits_per_iteration
    for variant in variants:
        if variant == "classical":
            evaluator = make_classical_evaluator(system)
        else:
            l = int(variant[1:])
            t0 = time.perf_counter_ns()
            pre = build_precomp(system, l)
            build_ns = time.perf_counter_ns() - t0
            records.append(BenchRecord(
                operation="quad_precomp", variant=variant, size_bits=n,
                repetitions=1, elapsed_ns=build_ns))
            evaluator = make_precomp_evaluator(system, pre)
        # warmup oracle pass against the classical evaluator
        probe = QuadState(x=state0.x, L_cap=2 ** 62)
        ref = QuadState(x=state0.x, L_cap=2 ** 62)
        for _ in range(3):
            got = quad_iterate(system, probe, evaluator)
            want = quad_iterate(system, ref)
            if got != want or probe.x != ref.x:
                raise RuntimeError(f"warmup oracle mismatch: quad variant {variant}")

        def run_pass(evaluator=evaluator):
            st = QuadState(x=state0.x, L_cap=2 ** 62)
            for _ in range(iters):
                quad_iterate(system, st, evaluator)

        elapsed = _timed_passes(run_pass)
        # instrumented replay, untimed
        xors = XorCounter()
        if variant == "classical":
            counted = make_classical_evaluator(system, xors)
        else:
            counted = make_precomp_evaluator(system, pre, xors)
        st = QuadState(x=state0.x, L_cap=2 ** 62)
        for _ in range(iters):
            quad_iterate(system, st, counted)
        throughput = throughput_mbit_s(out_bits * iters, elapsed)
        records.append(BenchRecord(
            operation="quad", variant=variant, size_bits=n,
            repetitions=iters, elapsed_ns=elapsed,
            throughput_mbit_s=throughput, xor_words=xors.words))
    return records


# ---------------------------------------------------------------------------
# emission

def emit(records: list[BenchRecord], format: str) -> str:
    """Render records as csv, markdown or json."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            row = rec.row()
            writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])
        return buf.getvalue()
    if format == "json":
        out = []
        for rec in records:
            row = rec.row()
            row["leaf_mul_counts"] = rec.leaf_mul_counts
            out.append(row)
        return json.dumps(out, indent=2) + "\n"
    if format == "markdown":
        return _emit_markdown(records)
    raise BenchFormatError(f"unknown format {format!r}")


def _emit_markdown(records: list[BenchRecord]) -> str:
    """Variants as rows, sizes as columns, nanoseconds per operation."""
    lines = []
    operations = []
    for rec in records:
        if rec.operation not in operations:
            operations.append(rec.operation)
    for op in operations:
        rows = [r for r in records if r.operation == op]
        sizes = sorted({r.size_bits for r in rows})
        variants = []
        for r in rows:
            if r.variant not in variants:
                variants.append(r.variant)
        lines.append(f"### {op} (ns per operation)")
        lines.append("| variant | " + " | ".join(f"n={s}" for s in sizes) + " |")
        lines.append("|---" * (len(sizes) + 1) + "|")
        for v in variants:
            cells = []
            for s in sizes:
                match = [r for r in rows if r.variant == v and r.size_bits == s]
                cells.append(f"{match[0].ns_per_op:.1f}" if match else "")
            lines.append(f"| {v} | " + " | ".join(cells) + " |")
        lines.append("")
    return "\n".join(lines)


def shape_report(records: list[BenchRecord]) -> str:
    """Expected-versus-observed ordering notes; informative, never a failure.

    The expectations are desktop-class trends; platforms are known to
    invert some of them, which is exactly why they are not assertions.
    """
    lines = []

    def ns(op, variant, size):
        for r in records:
            if (r.operation, r.variant, r.size_bits) == (op, variant, size):
                return r.ns_per_op
        return None

    modred_sizes = sorted({r.size_bits for r in records if r.operation == "modred"})
    for n in modred_sizes:
        classical = ns("modred", "classical", n)
        for variant in ("barrett", "method1", "method2"):
            t = ns("modred", variant, n)
            if classical is None or t is None:
                continue
            verdict = "yes" if t < classical else "NO (inverted on this platform)"
            lines.append(
                f"modred n={n}: expected {variant} faster than classical: "
                f"{t:.0f} vs {classical:.0f} ns/op: {verdict}")
    if len(modred_sizes) >= 2:
        lo, hi = modred_sizes[0], modred_sizes[-1]
        for variant in ("method1", "method2"):
            b_lo, b_hi = ns("modred", "barrett", lo), ns("modred", "barrett", hi)
            v_lo, v_hi = ns("modred", variant, lo), ns("modred", variant, hi)
            if None in (b_lo, b_hi, v_lo, v_hi):
                continue
            r_lo, r_hi = v_lo / b_lo, v_hi / b_hi
            verdict = "yes" if r_hi < r_lo else "NO (no growth on this platform)"
            lines.append(
                f"modred sweep: expected {variant}'s advantage over barrett to grow "
                f"with n: time ratio {r_lo:.2f} at n={lo} -> {r_hi:.2f} at n={hi}: {verdict}")
    mul_sizes = sorted({r.size_bits for r in records if r.operation == "mul"})
    for n in mul_sizes:
        times = {r.variant: r.ns_per_op for r in records
                 if r.operation == "mul" and r.size_bits == n}
        if "classical" in times and len(times) > 1:
            slowest = max(times, key=times.get)
            verdict = "yes" if slowest == "classical" else (
                f"NO (classical is the platform primitive here; {slowest} is slowest)")
            lines.append(f"mul n={n}: expected classical slowest: {verdict}")
    for n in mul_sizes:
        classical = ns("mul", "classical", n)
        if classical is None:
            continue
        ratios = []
        for variant in ("karatsuba1", "karatsuba2", "toomcook3"):
            t = ns("mul", variant, n)
            if t is not None:
                ratios.append(f"{variant} {t / classical:.2f}")
        if ratios:
            lines.append(
                f"mul n={n}: measured time vs classical: " + ", ".join(ratios)
                + " (the split-cost model treats these as ~1 in this range)")
    for n in mul_sizes:
        if 2 * n in mul_sizes:
            t1, t2 = ns("mul", "classical", n), ns("mul", "classical", 2 * n)
            if t1 and t2:
                lines.append(
                    f"mul growth on doubling {n} -> {2 * n}: ratio {t2 / t1:.2f} "
                    "(4 for an ideal quadratic primitive; below that means the "
                    "platform multiply is already subquadratic at this width)")
    for n in sorted({r.size_bits for r in records if r.operation == "rsaprg"}):
        classical = ns("rsaprg", "classical", n)
        m2 = ns("rsaprg", "method2", n)
        if classical is not None and m2 is not None:
            verdict = "yes" if m2 < classical else "NO (inverted on this platform)"
            lines.append(
                f"rsaprg n={n}: expected method2 iteration faster than classical: "
                f"{m2:.0f} vs {classical:.0f} ns/op: {verdict}")
    return "\n".join(lines)
