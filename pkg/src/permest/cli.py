"""Command-line front end.

Exit codes: 0 success, 2 parse/usage error, 3 size or capacity limit,
4 domain error. Deterministic commands write byte-identical stdout across
runs; wall-clock timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import binary_bias, complex_bias
from .errors import (
    CapacityError,
    ConvergenceError,
    DescriptorError,
    DomainError,
    MatrixParseError,
    SizeLimitError,
)
from .estimators import (
    Estimate,
    estimate_derandomized,
    estimate_derandomized_multi,
    estimate_random,
    estimate_random_multi,
    multi_bound_term,
    permanent_upper_bound,
    phase_space_size,
)
from .exact import (
    permanent_gengly_exact,
    permanent_glynn_exact,
    permanent_naive,
    permanent_ryser,
)
from .matrices import (
    MultiplicitySpec,
    expand,
    parse_matrix,
    serialize_matrix,
    spectral_norm,
)
from .optics import (
    amplitude_estimate,
    amplitude_exact,
    bunching_bound,
    saturating_outcome,
    saturating_unitary,
)

_EXACT_METHODS = {
    "naive": permanent_naive,
    "ryser": permanent_ryser,
    "glynn": permanent_glynn_exact,
}


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            return parse_matrix(fh.read())
    except OSError as exc:
        raise MatrixParseError(f"cannot read {path}: {exc.strerror}", 0) from None


def _parse_counts(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated integer list") from None


def _emit(payload: dict, primary: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(" ".join(primary))
        for key, val in payload.items():
            print(f"{key}={_fmt(val) if isinstance(val, float) else val}")


def _complex_payload(prefix: str, z: complex) -> dict:
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _cmd_exact(args) -> int:
    a = _load_matrix(args.matrix)
    if args.mult:
        spec = MultiplicitySpec(a, _parse_counts(args.mult, "--mult"))
        a = expand(spec)
    start = time.perf_counter()
    value = _EXACT_METHODS[args.method](a)
    elapsed = time.perf_counter() - start
    print(f"wall_time_s={elapsed:.6f}", file=sys.stderr)
    payload = _complex_payload("value", value)
    payload["method"] = args.method
    payload["n"] = a.shape[0]
    if args.mult:
        payload["mult"] = args.mult
    _emit(payload, [_fmt(value.real), _fmt(value.imag)], args.format)
    return 0


def _build_space_for(args, n: int, mults: tuple[int, ...] | None):
    if args.space:
        kind = args.space.split()[0] if args.space.split() else ""
        if kind == "binary":
            return binary_bias.space_from_descriptor(args.space)
        if kind == "complex":
            return complex_bias.complex_space_from_descriptor(args.space)
        raise DescriptorError(f"unknown space descriptor kind {kind!r}")
    if mults is None:
        return binary_bias.build_binary_space(n, args.epsilon)
    return complex_bias.build_complex_space(
        tuple(s + 1 for s in mults), args.epsilon
    )


def _cmd_estimate(args) -> int:
    a = _load_matrix(args.matrix)
    mults = _parse_counts(args.mult, "--mult") if args.mult else None
    spec = MultiplicitySpec(a, mults) if mults else None
    payload: dict = {}
    if args.mode == "random":
        if spec is None:
            est = estimate_random(a, args.epsilon, args.delta, args.seed)
        else:
            est = estimate_random_multi(spec, args.epsilon, args.delta, args.seed)
        payload_extra = {"delta": args.delta, "seed": args.seed}
    elif args.mode == "exhaustive":
        if spec is None:
            n = a.shape[0]
            est = Estimate(
                permanent_glynn_exact(a),
                spectral_norm(a).value ** n,
                0.0,
                1 << n,
                "exhaustive",
            )
        else:
            est = Estimate(
                permanent_gengly_exact(spec),
                multi_bound_term(spec),
                0.0,
                phase_space_size([s + 1 for s in spec.mults]),
                "exhaustive",
            )
        payload_extra = {}
    else:
        space = _build_space_for(args, a.shape[0], mults)
        if spec is None:
            est = estimate_derandomized(a, space)
        else:
            est = estimate_derandomized_multi(spec, space)
        payload_extra = {"space": space.descriptor()}
    payload.update(_complex_payload("value", est.value))
    payload["bound_term"] = est.bound_term
    payload["epsilon"] = est.epsilon
    payload["guarantee"] = est.guarantee().additive_error_bound
    payload["samples"] = est.samples_used
    payload["mode"] = est.mode
    payload.update(payload_extra)
    _emit(payload, [_fmt(est.value.real), _fmt(est.value.imag)], args.format)
    return 0


def _cmd_bound(args) -> int:
    a = _load_matrix(args.matrix)
    mults = (
        _parse_counts(args.mult, "--mult") if args.mult else (1,) * a.shape[1]
    )
    spec = MultiplicitySpec(a, mults)
    bound = permanent_upper_bound(spec)
    payload = {
        "bound": bound,
        "norm": spectral_norm(spec.base).value,
        "n": spec.n,
        "k": spec.k,
    }
    _emit(payload, [_fmt(bound)], args.format)
    return 0


def _cmd_space_build(args) -> int:
    if args.kind == "binary":
        if args.n is None:
            raise ValueError("binary spaces need --n")
        space = binary_bias.build_binary_space(args.n, args.epsilon)
    else:
        if not args.mults:
            raise ValueError("complex spaces need --mults")
        mults = _parse_counts(args.mults, "--mults")
        space = complex_bias.build_complex_space(
            tuple(s + 1 for s in mults),
            args.epsilon,
            force_construction=args.force_construction,
            ell=args.ell,
        )
    payload = {
        "descriptor": space.descriptor(),
        "seed_bits": space.seed_bits,
        "eps": space.declared_epsilon,
    }
    if hasattr(space, "construction_bound"):
        payload["certified_bias"] = space.construction_bound
    _emit(payload, [space.descriptor()], args.format)
    return 0


def _cmd_space_audit(args) -> int:
    kind = args.descriptor.split()[0] if args.descriptor.split() else ""
    if kind == "binary":
        space = binary_bias.space_from_descriptor(args.descriptor)
        measured = binary_bias.measure_bias(space)
    elif kind == "complex":
        space = complex_bias.complex_space_from_descriptor(args.descriptor)
        measured = complex_bias.measure_complex_bias(space)
    else:
        raise DescriptorError(f"unknown space descriptor kind {kind!r}")
    # exhaustive spaces declare zero bias; allow the audit's rounding dust
    tol = 1e-12 if space.exhaustive else 0.0
    verdict = "PASS" if measured <= space.declared_epsilon + tol else "FAIL"
    payload = {
        "measured_bias": measured,
        "declared_eps": space.declared_epsilon,
        "verdict": verdict,
    }
    _emit(payload, [_fmt(measured), verdict], args.format)
    return 0


def _cmd_optics(args) -> int:
    if args.optics_cmd == "bound":
        value = bunching_bound(_parse_counts(args.pattern, "--pattern"))
        _emit({"bound": value}, [_fmt(value)], args.format)
        return 0
    if args.optics_cmd == "saturate":
        pattern = _parse_counts(args.pattern, "--pattern")
        u = saturating_unitary(pattern)
        outcome = saturating_outcome(pattern)
        text = serialize_matrix(u)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            payload = {
                "outcome": ",".join(str(c) for c in outcome),
                "probability": bunching_bound(pattern),
                "written": args.out,
            }
            _emit(payload, [payload["outcome"]], args.format)
        else:
            if args.format == "json":
                payload = {
                    "matrix": text,
                    "outcome": ",".join(str(c) for c in outcome),
                    "probability": bunching_bound(pattern),
                }
                print(json.dumps(payload, sort_keys=True))
            else:
                sys.stdout.write(text)
        return 0
    # prob / amp
    u = _load_matrix(args.unitary)
    out_pattern = _parse_counts(args.out_pattern, "--out-pattern")
    if args.estimate:
        if args.in_pattern:
            raise ValueError(
                "estimation covers the standard initial state; drop --in-pattern"
            )
        if args.epsilon is None:
            raise ValueError("estimation needs --epsilon")
        result = amplitude_estimate(
            u, out_pattern, args.epsilon, args.mode, args.delta, args.seed
        )
    else:
        if args.in_pattern:
            in_pattern = _parse_counts(args.in_pattern, "--in-pattern")
        else:
            n = sum(out_pattern)
            k = u.shape[0]
            if n > k:
                raise ValueError("standard input needs photons <= modes")
            in_pattern = (1,) * n + (0,) * (k - n)
        result = amplitude_exact(u, out_pattern, in_pattern)
    payload = _complex_payload("amplitude", result.amplitude)
    payload["probability"] = result.probability
    if args.estimate:
        payload["amp_error_bound"] = result.amp_error_bound
        payload["prob_error_bound"] = result.prob_error_bound
    if args.optics_cmd == "prob":
        primary = [_fmt(result.probability)]
    else:
        primary = [_fmt(result.amplitude.real), _fmt(result.amplitude.imag)]
    _emit(payload, primary, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permest",
        description="Permanent estimation: exact kernels, Glynn-type "
        "estimators, small-bias derandomization, linear-optics amplitudes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("exact", help="exact permanent of a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--method", choices=sorted(_EXACT_METHODS), default="ryser")
    p.add_argument("--mult", help="column multiplicities; the file then holds the base matrix")
    add_format(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("estimate", help="additive-error permanent estimate")
    p.add_argument("--matrix", required=True)
    p.add_argument("--mult")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument(
        "--mode", choices=("random", "derandomized", "exhaustive"), default="random"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--space", help="sample-space descriptor for derandomized mode")
    add_format(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("bound", help="permanent magnitude upper bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--mult")
    add_format(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("space", help="build or audit sample spaces")
    space_sub = p.add_subparsers(dest="space_cmd", required=True)
    pb = space_sub.add_parser("build")
    pb.add_argument("--kind", choices=("binary", "complex"), required=True)
    pb.add_argument("--n", type=int)
    pb.add_argument("--mults")
    pb.add_argument("--epsilon", type=float, required=True)
    pb.add_argument("--force-construction", action="store_true")
    pb.add_argument("--ell", type=int)
    add_format(pb)
    pb.set_defaults(func=_cmd_space_build)
    pa = space_sub.add_parser("audit")
    pa.add_argument("--descriptor", required=True)
    add_format(pa)
    pa.set_defaults(func=_cmd_space_audit)

    p = sub.add_parser("optics", help="linear-optics amplitudes and bounds")
    optics_sub = p.add_subparsers(dest="optics_cmd", required=True)
    for name in ("prob", "amp"):
        po = optics_sub.add_parser(name)
        po.add_argument("--unitary", required=True)
        po.add_argument("--out-pattern", required=True)
        po.add_argument("--in-pattern")
        po.add_argument("--estimate", action="store_true")
        po.add_argument("--epsilon", type=float)
        po.add_argument(
            "--mode",
            choices=("random", "derandomized", "exhaustive"),
            default="random",
        )
        po.add_argument("--delta", type=float, default=0.01)
        po.add_argument("--seed", type=int, default=0)
        add_format(po)
        po.set_defaults(func=_cmd_optics)
    for name in ("bound", "saturate"):
        po = optics_sub.add_parser(name)
        po.add_argument("--pattern", required=True)
        if name == "saturate":
            po.add_argument("--out")
        add_format(po)
        po.set_defaults(func=_cmd_optics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MatrixParseError, DescriptorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SizeLimitError, CapacityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
