"""Command-line interface.

Subcommands: ree, bures, analytic, werner-table, verify, check-ppt, sanov.
Exit codes: 0 success/certified, 1 input error, 2 uncertified result or
property violation. All values print in nats unless --bits is given.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analytic, measures, verify
from .optimizer import OptimizerConfig, MeasureResult, minimize
from .states import (
    DensityMatrix,
    PureState,
    bell_state,
    random_density,
    random_pure,
    werner,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNCERTIFIED = 2


class InputError(Exception):
    pass


def load_state(path: str) -> DensityMatrix:
    """Read a density matrix from the JSON state format."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "dims" not in doc or "matrix" not in doc:
        raise InputError(f"{path}: state file needs 'dims' and 'matrix' fields")
    dims = doc["dims"]
    if not (isinstance(dims, list) and len(dims) == 2):
        raise InputError(f"{path}: 'dims' must be a two-element list")
    try:
        rows = [
            [complex(float(entry[0]), float(entry[1])) for entry in row]
            for row in doc["matrix"]
        ]
        matrix = np.array(rows, dtype=complex)
    except (TypeError, ValueError, IndexError):
        raise InputError(
            f"{path}: 'matrix' must be rows of [re, im] pairs"
        ) from None
    try:
        return DensityMatrix(matrix, (int(dims[0]), int(dims[1])))
    except ValueError as exc:
        raise InputError(f"{path}: invalid density matrix: {exc}") from None


def dump_state(rho: DensityMatrix, name: str | None = None) -> dict:
    """The JSON document for a density matrix (floats round-trip exactly)."""
    doc = {
        "dims": [rho.dims[0], rho.dims[1]],
        "matrix": [
            [[float(entry.real), float(entry.imag)] for entry in row]
            for row in rho.matrix
        ],
    }
    if name:
        doc["name"] = name
    return doc


def save_state(rho: DensityMatrix, path: str, name: str | None = None):
    with open(path, "w") as fh:
        json.dump(dump_state(rho, name), fh, indent=1)
        fh.write("\n")


def _format_value(value: float, bits: bool) -> str:
    lines = [f"value (nats): {value:.12g}"]
    if bits:
        lines.append(f"value (bits): {value / math.log(2.0):.12g}")
    return "\n".join(lines)


def _matrix_lines(matrix: np.ndarray) -> str:
    return np.array2string(
        matrix, precision=6, suppress_small=True, floatmode="fixed"
    )


def _print_result(result: MeasureResult, bits: bool, out):
    print(_format_value(result.value, bits), file=out)
    print(f"iterations: {result.iterations}", file=out)
    print(f"gradient norm: {result.gradient_norm:.3e}", file=out)
    print(f"restarts: {result.restarts_used}", file=out)
    print(f"certificate slack: {result.certificate_slack:.3e}", file=out)
    print(f"certified: {'yes' if result.certified else 'no'}", file=out)
    print("closest separable state:", file=out)
    print(_matrix_lines(result.closest.matrix), file=out)


def _config_from_args(args, functional: str) -> OptimizerConfig:
    return OptimizerConfig(
        functional=functional,
        restarts=args.restarts,
        seed=args.seed,
        gradient_tolerance=args.tol,
    )


def _cmd_measure(args, functional: str) -> int:
    sigma = load_state(args.state)
    result = minimize(sigma, _config_from_args(args, functional))
    _print_result(result, args.bits, sys.stdout)
    if args.out:
        save_state(result.closest, args.out, name="closest-separable")
    return EXIT_OK if result.certified else EXIT_UNCERTIFIED


def cmd_ree(args) -> int:
    return _cmd_measure(args, "ree")


def cmd_bures(args) -> int:
    return _cmd_measure(args, "bures")


def cmd_analytic(args) -> int:
    params = {}
    if args.lam is not None:
        params["lam"] = args.lam
    if args.A is not None:
        params["A"] = args.A
    if args.B is not None:
        params["B"] = args.B
    try:
        case = analytic.example_case(args.which, **params)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(f"case: {case.name}  parameters: {case.parameters}")
    print("sigma:")
    print(_matrix_lines(case.sigma.matrix))
    print("closest separable state:")
    print(_matrix_lines(case.closest.matrix))
    print("closed form " + _format_value(case.value, args.bits))
    result = minimize(case.sigma, _config_from_args(args, "ree"))
    print(f"optimizer value (nats): {result.value:.12g}")
    print(f"optimizer delta: {abs(result.value - case.value):.3e}")
    print(f"certificate slack: {result.certificate_slack:.3e}")
    print(f"certified: {'yes' if result.certified else 'no'}")
    return EXIT_OK if result.certified else EXIT_UNCERTIFIED


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must look like a:b:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"grid must be numeric, got {text!r}") from None
    if step <= 0 or stop < start:
        raise InputError(f"grid needs step > 0 and stop >= start, got {text!r}")
    count = int(round((stop - start) / step))
    values = [start + k * step for k in range(count + 1)]
    if not 0.0 <= values[0] and values[-1] <= 1.0 + 1e-12:
        raise InputError("grid must stay inside [0, 1]")
    return [min(v, 1.0) for v in values]


def cmd_werner_table(args) -> int:
    grid = _parse_grid(args.grid)
    lines = ["F,REE_analytic,REE_optimizer,EoF"]
    for f in grid:
        state = werner(f)
        rest = (1.0 - f) / 3.0
        ree_exact = analytic.bell_diagonal_ree([f, rest, rest, rest])
        ree_opt = minimize(state, _config_from_args(args, "ree")).value
        eof = analytic.eof_two_qubit(state)
        lines.append(f"{f:.12g},{ree_exact:.12g},{ree_opt:.12g},{eof:.12g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _spawned_seeds(seed: int, count: int):
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def _suite_completeness(seed: int):
    residuals = []
    for s in _spawned_seeds(seed, 200):
        op = verify.sample_local_operation(1 + s % 4, s, correlated=bool(s % 2))
        residuals.append(op.completeness_residual())
    margin = verify.COMPLETENESS_TOLERANCE - max(residuals)
    return [verify.PropertyReport("completeness", len(residuals), int(margin < 0), margin, [])]


def _suite_ppt(seed: int):
    reports = []
    seeds = _spawned_seeds(seed, 16)
    for k, s in enumerate(seeds):
        state = random_density((2, 2), 1 + k % 4, s)
        value = minimize(state, OptimizerConfig(seed=s)).value
        agree = (value < 1e-4) == verify.is_ppt_separable(state)
        reports.append(verify.PropertyReport("E1-ppt-agreement", 1, int(not agree), 0.0 if agree else -1.0, [] if agree else [s]))
    return [verify.merge_reports("E1-ppt-agreement", reports)]


def _suite_e2(seed: int):
    reports = []
    for k, s in enumerate(_spawned_seeds(seed, 6)):
        state = random_density((2, 2), 1 + k % 4, s)
        reports.append(verify.check_local_unitary_invariance(state, s))
    return [verify.merge_reports("E2-local-unitary", reports)]


def _suite_e3(seed: int, functional: str):
    reports = []
    for k, s in enumerate(_spawned_seeds(seed, 8)):
        state = random_density((2, 2), 1 + k % 4, s)
        op = verify.sample_local_operation(2 + k % 2, s)
        reports.append(verify.check_E3(state, op, measure=functional, seed=s))
    return [verify.merge_reports("E3-monotonicity", reports)]


def _suite_convexity(seed: int, functional: str):
    reports = []
    rng = np.random.default_rng(seed)
    for s in _spawned_seeds(seed, 8):
        s1 = random_density((2, 2), 2, s)
        s2 = random_density((2, 2), 4, s + 1)
        reports.append(
            verify.check_convexity(s1, s2, float(rng.uniform()), measure=functional, seed=s)
        )
    return [verify.merge_reports("theorem5-convexity", reports)]


def _suite_theorem4(seed: int):
    reports = []
    for s in _spawned_seeds(seed, 4):
        psi = random_pure((2, 2), s)
        for x in (0.25, 0.5, 0.75):
            reports.append(verify.check_theorem4(psi, x, seed=s))
    return [verify.merge_reports("theorem4-segment", reports)]


def _suite_theorem6(seed: int):
    reports = []
    for k, s in enumerate(_spawned_seeds(seed, 8)):
        state = random_density((2, 2), 1 + k % 4, s)
        reports.append(verify.check_theorem6(state, seed=s))
    return [verify.merge_reports("theorem6-ordering", reports)]


def _suite_subadditivity(seed: int):
    cases = [
        random_pure((2, 2), seed).density(),
        random_density((2, 2), 4, seed + 1),
        werner(0.75),
    ]
    reports = [verify.probe_subadditivity(c, seed=seed) for c in cases]
    return [verify.merge_reports("subadditivity-witness", reports)]


def cmd_verify(args) -> int:
    functional = args.functional
    suites = {
        "completeness": lambda: _suite_completeness(args.seed),
        "ppt": lambda: _suite_ppt(args.seed),
        "e2": lambda: _suite_e2(args.seed),
        "e3": lambda: _suite_e3(args.seed, functional),
        "convexity": lambda: _suite_convexity(args.seed, functional),
        "theorem4": lambda: _suite_theorem4(args.seed),
        "theorem6": lambda: _suite_theorem6(args.seed),
        "subadditivity": lambda: _suite_subadditivity(args.seed),
    }
    if args.suite == "full":
        chosen = list(suites)
    elif args.suite in suites:
        chosen = [args.suite]
    else:
        raise InputError(
            f"unknown suite {args.suite!r}; pick one of full, {', '.join(suites)}"
        )
    reports = []
    for name in chosen:
        reports.extend(suites[name]())
    total_violations = sum(r.violations for r in reports)
    doc = {
        "seed": args.seed,
        "functional": functional,
        "violations": total_violations,
        "suites": [
            {
                "property": r.property_id,
                "trials": r.trials,
                "violations": r.violations,
                "worst_margin": r.worst_margin if math.isfinite(r.worst_margin) else None,
                "violating_seeds": list(r.violating_seeds),
            }
            for r in reports
        ],
    }
    text = json.dumps(doc, indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if total_violations == 0 else EXIT_UNCERTIFIED


def cmd_check_ppt(args) -> int:
    sigma = load_state(args.state)
    try:
        separable = verify.is_ppt_separable(sigma)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    from .linalg import eig_hermitian, partial_transpose

    smallest = eig_hermitian(
        partial_transpose(sigma.matrix, sigma.dims, "B")
    ).eigenvalues[-1]
    verdict = "separable" if separable else "entangled"
    print(f"{verdict} (min partial-transpose eigenvalue {smallest:.6g})")
    return EXIT_OK


def cmd_sanov(args) -> int:
    sigma = load_state(args.sigma)
    rho = load_state(args.rho)
    if args.n <= 0:
        raise InputError(f"n must be positive, got {args.n}")
    prob = measures.sanov_confusion_probability(sigma, rho, args.n)
    print(f"{prob:.17g}")
    return EXIT_OK


def _add_optimizer_flags(parser):
    parser.add_argument("--restarts", type=int, default=5, help="optimizer restarts")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument(
        "--tol", type=float, default=1e-6, help="gradient-norm stopping tolerance"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entcalc",
        description="Entanglement measures of two-qubit states by minimization "
        "over the separable set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ree = sub.add_parser("ree", help="relative entropy of entanglement of a state file")
    p_ree.add_argument("state", help="JSON state file")
    _add_optimizer_flags(p_ree)
    p_ree.add_argument("--bits", action="store_true", help="also print the value in bits")
    p_ree.add_argument("--out", help="write the closest separable state to this file")
    p_ree.set_defaults(fn=cmd_ree)

    p_bures = sub.add_parser("bures", help="Bures measure of entanglement of a state file")
    p_bures.add_argument("state", help="JSON state file")
    _add_optimizer_flags(p_bures)
    p_bures.add_argument("--bits", action="store_true", help="also print the value in bits")
    p_bures.add_argument("--out", help="write the closest separable state to this file")
    p_bures.set_defaults(fn=cmd_bures)

    p_analytic = sub.add_parser("analytic", help="worked example with closed-form value")
    p_analytic.add_argument("which", type=int, help="example number 1..4")
    p_analytic.add_argument("--lam", type=float, help="mixing parameter for examples 1-2")
    p_analytic.add_argument("--A", type=float, help="diagonal parameter for examples 3-4")
    p_analytic.add_argument("--B", type=float, help="coherence parameter for examples 3-4")
    _add_optimizer_flags(p_analytic)
    p_analytic.add_argument("--bits", action="store_true", help="also print the value in bits")
    p_analytic.set_defaults(fn=cmd_analytic)

    p_table = sub.add_parser("werner-table", help="CSV of Werner-state measures over an F grid")
    p_table.add_argument("--grid", default="0.5:1.0:0.05", help="F grid as a:b:step")
    _add_optimizer_flags(p_table)
    p_table.add_argument("--out", help="write CSV here instead of stdout")
    p_table.set_defaults(fn=cmd_werner_table)

    p_verify = sub.add_parser("verify", help="run property suites, emit a JSON report")
    p_verify.add_argument("--suite", default="full", help="suite name or 'full'")
    p_verify.add_argument("--seed", type=int, default=0, help="master random seed")
    p_verify.add_argument(
        "--functional", choices=("ree", "bures"), default="ree",
        help="distance functional for the monotonicity suites",
    )
    p_verify.add_argument("--out", help="write the JSON report here instead of stdout")
    p_verify.set_defaults(fn=cmd_verify)

    p_ppt = sub.add_parser("check-ppt", help="Peres-Horodecki separability verdict")
    p_ppt.add_argument("state", help="JSON state file")
    p_ppt.set_defaults(fn=cmd_check_ppt)

    p_sanov = sub.add_parser("sanov", help="asymptotic confusion probability e^(-n S)")
    p_sanov.add_argument("sigma", help="JSON state file (true state)")
    p_sanov.add_argument("rho", help="JSON state file (hypothesis state)")
    p_sanov.add_argument("n", type=int, help="number of trials")
    p_sanov.set_defaults(fn=cmd_sanov)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
