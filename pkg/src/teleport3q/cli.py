"""Command-line front end: state construction, protocol runs, feasibility reports.

Exit codes are a stable scripting contract: 0 for an affirmative verdict,
1 for a negative verdict, 2 for usage or input errors. All output is
deterministic for a fixed flag set, including --seed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from .feasibility import build_feasibility_report, haar_scan
from .linalg import HADAMARD, IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, haar_random_unitary
from .protocols import (
    MeasurementBasis,
    TeleportProtocol,
    basis_from_S,
    bell_protocol,
    ghz_protocol,
    protocol_from_basis,
    run_teleport,
    sample_teleport,
    w_like_protocol,
)
from .serialize import (
    dumps_canonical,
    protocol_from_jsonable,
    protocol_to_jsonable,
    report_to_jsonable,
    round12,
    state_from_jsonable,
    state_input_hash,
    state_to_jsonable,
)
from .states import PureState, WLikeParams, bloch_qubit, haar_random_state, make_named_state, w_like_from_params

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

_BELL_SPEC_RE = re.compile(r"^bell\(\s*[01]\s*,\s*[01]\s*\)$")
_HAAR_BASIS_RE = re.compile(r"^haar:(\d+)$")
_DIAG_RE = re.compile(r"^diag\((.+)\)$")
_NAMED_S = {"I": IDENTITY, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z, "H": HADAMARD}


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_w_like_params(text: str) -> WLikeParams:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated angles, got {text!r}")
    try:
        gamma, phi, omega = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"malformed angle in {text!r}") from exc
    return WLikeParams(gamma=gamma, phi=phi, omega=omega)


def _load_state_file(path: str) -> PureState:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValueError(f"unreadable state file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"state file {path!r} is not valid JSON: {exc}") from exc
    return state_from_jsonable(data)


def _resolve_state(args) -> tuple[PureState, str, str, WLikeParams | None]:
    """Returns (state, label, kind, w_like_params); kind names the state family."""
    if args.state_file and args.shared:
        raise ValueError("pass either --shared or --state-file, not both")
    if args.state_file:
        return _load_state_file(args.state_file), args.state_file, "file", None
    if not args.shared:
        raise ValueError("a shared state is required: --shared or --state-file")
    spec = args.shared.strip()
    lowered = spec.lower()
    if lowered in ("ghz", "w") or _BELL_SPEC_RE.match(lowered):
        return make_named_state(lowered), lowered, lowered if lowered in ("ghz", "w") else "bell", None
    if lowered.startswith("w-like:"):
        params = _parse_w_like_params(spec[len("w-like:"):])
        return w_like_from_params(params), spec, "w-like", params
    if Path(spec).exists():
        return _load_state_file(spec), spec, "file", None
    raise ValueError(
        f"unrecognized state spec {spec!r}; expected ghz, w, bell(m,n), w-like:g,p,o, or a file path"
    )


def _resolve_message(args) -> tuple[PureState, str]:
    if args.random and args.theta is not None:
        raise ValueError("pass either --random or --theta/--phi, not both")
    if args.random:
        return haar_random_state(1, args.seed), f"random(seed={args.seed})"
    if args.theta is None:
        raise ValueError("a message state is required: --theta [--phi] or --random")
    return bloch_qubit(args.theta, args.phi), f"theta={_fmt(args.theta)}, phi={_fmt(args.phi)}"


def _known_basis(kind: str, params: WLikeParams | None) -> MeasurementBasis:
    if kind == "ghz":
        return ghz_protocol().basis
    if kind == "w-like":
        return w_like_protocol(params).basis
    raise ValueError(f"no known perfect basis for state kind {kind!r}")


def _resolve_protocol(args) -> tuple[TeleportProtocol, str]:
    if args.protocol_file:
        if args.shared or args.state_file:
            raise ValueError("--protocol-file excludes --shared and --state-file")
        if args.basis:
            raise ValueError("--protocol-file excludes --basis")
        try:
            data = json.loads(Path(args.protocol_file).read_text())
        except OSError as exc:
            raise ValueError(f"unreadable protocol file {args.protocol_file!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValueError(f"protocol file is not valid JSON: {exc}") from exc
        return protocol_from_jsonable(data), args.protocol_file
    state, label, kind, params = _resolve_state(args)
    if args.basis:
        match = _HAAR_BASIS_RE.match(args.basis.strip())
        if not match:
            raise ValueError(f"unrecognized basis spec {args.basis!r}; expected haar:SEED")
        u = haar_random_unitary(2**state.n_qubits, int(match.group(1)))
        return protocol_from_basis(state, MeasurementBasis.from_unitary_columns(u)), label
    if kind == "ghz":
        return ghz_protocol(), label
    if kind == "w-like":
        return w_like_protocol(params), label
    if kind == "bell":
        if label == "bell(0,0)":
            return bell_protocol(), label
        return protocol_from_basis(state, bell_protocol().basis), label
    raise ValueError(
        f"no canonical protocol for {label!r}; pass --basis haar:SEED or --protocol-file"
    )


def _entry_to_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(value[0], value[1])
    raise ValueError("matrix entries must be numbers or [re, im] pairs")


def _parse_s_operator(spec: str) -> np.ndarray:
    text = spec.strip()
    if text.upper() in _NAMED_S:
        return _NAMED_S[text.upper()]
    match = _DIAG_RE.match(text)
    if match:
        parts = match.group(1).split(",")
        if len(parts) != 2:
            raise ValueError(f"diag(...) needs two entries, got {text!r}")
        return np.diag([complex(float(p)) for p in parts])
    if text.startswith("["):
        data = json.loads(text)
    else:
        try:
            data = json.loads(Path(text).read_text())
        except OSError as exc:
            raise ValueError(f"unreadable S operator file {text!r}: {exc}") from exc
    matrix = np.array([[_entry_to_complex(v) for v in row] for row in data])
    if matrix.shape != (2, 2):
        raise ValueError(f"S must be 2x2, got shape {matrix.shape}")
    return matrix


def cmd_teleport(args) -> int:
    protocol, shared_label = _resolve_protocol(args)
    psi, message_label = _resolve_message(args)
    result = run_teleport(psi, protocol)
    perfect = result.total_fidelity >= 1.0 - args.tolerance
    sample = (
        sample_teleport(psi, protocol, args.trials, args.seed) if args.sample else None
    )

    if args.format == "json":
        branches = [
            {
                "index": "".join(str(b) for b in o.index),
                "probability": round12(o.probability),
                "fidelity": None if o.branch_fidelity is None else round12(o.branch_fidelity),
            }
            for o in result.outcomes
        ]
        payload = {
            "sharedLabel": shared_label,
            "sharedState": state_to_jsonable(protocol.shared),
            "messageLabel": message_label,
            "message": state_to_jsonable(psi),
            "branches": branches,
            "totalFidelity": round12(result.total_fidelity),
            "perfect": perfect,
            "tolerance": round12(args.tolerance),
        }
        if sample is not None:
            payload["sample"] = {
                "trials": sample.trials,
                "seed": args.seed,
                "counts": [int(c) for c in sample.counts],
                "empiricalFidelity": round12(sample.empirical_fidelity),
            }
        _emit(dumps_canonical(payload), args.out)
    else:
        lines = [
            f"shared: {shared_label}",
            f"message: {message_label}",
            "branch  probability     fidelity",
        ]
        for o in result.outcomes:
            bits = "".join(str(b) for b in o.index)
            fid = "-" if o.branch_fidelity is None else _fmt(o.branch_fidelity)
            lines.append(f"{bits:<7} {_fmt(o.probability):<15} {fid}")
        lines.append(f"total fidelity: {_fmt(result.total_fidelity)}")
        if args.expect_perfect:
            lines.append(f"expect-perfect: {'PASS' if perfect else 'FAIL'} (tolerance {_fmt(args.tolerance)})")
        if sample is not None:
            lines.append(
                f"sampled {sample.trials} trials (seed {args.seed}): "
                f"empirical fidelity {_fmt(sample.empirical_fidelity)}"
            )
            lines.append("counts: " + " ".join(str(int(c)) for c in sample.counts))
        _emit("\n".join(lines) + "\n", args.out)

    if args.expect_perfect and not perfect:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_analyze(args) -> int:
    state, label, _, _ = _resolve_state(args)
    if state.n_qubits != 3:
        raise ValueError(f"analyze expects a 3-qubit shared state, got {state.n_qubits} qubits")
    report = build_feasibility_report(state, label, args.scan_trials, args.seed)
    payload = report_to_jsonable(report, state_input_hash(state))

    if args.format == "json":
        _emit(dumps_canonical(payload), args.out)
    else:
        comp = "yes" if report.componentwise.exists else "no"
        lines = [
            f"state: {label}",
            f"entropy (bits): {_fmt(report.entropy_bits)}",
            f"entropy feasible: {'yes' if report.entropy_feasible else 'no'}",
            f"sum rule rows: ({_fmt(report.sum_rule_row0)}, {_fmt(report.sum_rule_row1)})",
            f"sum rule balanced: {'yes' if report.sum_rule_balanced else 'no'}",
            f"scan: {report.scan.feasible_count}/{report.scan.trials} feasible bases "
            f"(max passing branches {report.scan.max_passing_branches})",
            f"componentwise disentangler exists: {comp}",
            f"schmidt disentangler residual entropy: {_fmt(report.schmidt.residual_entropy)}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.entropy_feasible else EXIT_NEGATIVE


def cmd_scan(args) -> int:
    state, label, kind, params = _resolve_state(args)
    inject = _known_basis(kind, params) if args.inject_known_basis else None
    result = haar_scan(state, args.trials, args.seed, inject=inject, tol=args.tolerance)

    if args.format == "json":
        payload = {
            "stateLabel": label,
            "trials": result.trials,
            "feasibleCount": result.feasible_count,
            "maxPassingBranches": result.max_passing_branches,
            "tolerance": round12(result.tolerance),
            "seed": args.seed,
            "injectedKnownBasis": result.injected,
        }
        _emit(dumps_canonical(payload), args.out)
    else:
        lines = [
            f"state: {label}",
            f"feasible bases: {result.feasible_count}/{result.trials}",
            f"max unitary-passing branches: {result.max_passing_branches}",
            f"tolerance: {_fmt(result.tolerance)}",
            f"seed: {args.seed}",
            f"injected known basis: {'yes' if result.injected else 'no'}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_basis_gen(args) -> int:
    params = _parse_w_like_params(args.params)
    s = _parse_s_operator(args.s_operator)
    protocol = basis_from_S(params, s)
    _emit(dumps_canonical(protocol_to_jsonable(protocol)), args.out)
    return EXIT_OK


def _add_state_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--shared",
        help="shared state: ghz, w, bell(m,n), w-like:gamma,phi,omega, or a state JSON path",
    )
    parser.add_argument("--state-file", help="shared state as a JSON file")


def _add_common_options(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--out", help="write output to this path instead of stdout")
    parser.add_argument(
        "--format", choices=("json", "text"), default=default_format,
        help=f"output format (default {default_format})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleport3q",
        description="Teleportation over small shared entangled states: run, analyze, scan.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("teleport", help="run a protocol branch by branch")
    _add_state_options(p)
    p.add_argument("--protocol-file", help="load a full protocol JSON instead of --shared")
    p.add_argument("--theta", type=float, help="message polar angle (radians)")
    p.add_argument("--phi", type=float, default=0.0, help="message azimuthal angle (radians)")
    p.add_argument("--random", action="store_true", help="Haar-random message from --seed")
    p.add_argument("--basis", help="override measurement basis: haar:SEED")
    p.add_argument(
        "--expect-perfect", action="store_true",
        help="exit 1 unless total fidelity reaches 1 within --tolerance",
    )
    p.add_argument("--sample", action="store_true", help="also sample the classical channel")
    p.add_argument(
        "--trials", type=int, default=100000, help="sampling trials (default 100000)"
    )
    p.add_argument(
        "--tolerance", type=float, default=1e-10,
        help="fidelity tolerance for the perfect verdict (default 1e-10)",
    )
    _add_common_options(p, "text")
    p.set_defaults(handler=cmd_teleport)

    p = sub.add_parser("analyze", help="full feasibility report for a 3-qubit state")
    _add_state_options(p)
    p.add_argument(
        "--scan-trials", type=int, default=200,
        help="Haar bases tried for the embedded scan (default 200)",
    )
    _add_common_options(p, "json")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("scan", help="feasibility search over Haar-random bases")
    _add_state_options(p)
    p.add_argument("--trials", type=int, default=100000, help="bases to try (default 100000)")
    p.add_argument(
        "--inject-known-basis", action="store_true",
        help="replace trial 0 with the state's known perfect basis (ghz / w-like only)",
    )
    p.add_argument(
        "--tolerance", type=float, default=1e-8,
        help="branch unitarity tolerance for the verdict (default 1e-8)",
    )
    _add_common_options(p, "text")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("basis-gen", help="emit the protocol determined by a free unitary S")
    p.add_argument("--params", required=True, help="w-like angles: gamma,phi,omega")
    p.add_argument(
        "--S", dest="s_operator", required=True,
        help="2x2 unitary: named I/X/Y/Z/H, diag(a,b), inline JSON, or a JSON file",
    )
    p.add_argument("--out", help="write the protocol JSON to this path")
    p.set_defaults(handler=cmd_basis_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
