"""Command-line interface: evaluator, REPL, verification suites, dynamics tools.

Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 evaluation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .dirac import (
    DiracSystem,
    SpinAxis,
    combined_projectors,
    dirac_hamiltonian,
    energy_projectors,
    spin_operator,
    verify_dirac_point,
)
from .errors import AlgebraError, EvalError, ParseError
from .evaluator import SessionConfig, eval_source, render
from .lorentz import active_transform, boost_alpha
from .mechanics import (
    CovariantHamiltonian,
    hamilton_rhs,
    homogeneous_b_potential,
    integrate,
)
from .multivector import metric_by_name
from .report import CheckReport
from .suites import SUITES, run_all, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_EVAL = 3


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="starprod",
        description="Exact star-product engine for phase-space mechanics on spacetime algebra.",
    )
    top.add_argument("--format", choices=("text", "json"), default="text")
    # default nonstandard for the expression layer; the mechanics subcommands
    # default to standard (timelike shell p.p = +m^2) unless overridden
    top.add_argument("--metric", choices=("standard", "nonstandard"), default=None)
    top.add_argument(
        "--order", type=int, default=8, help="default truncation order for exp()"
    )
    sub = top.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate expressions")
    p_eval.add_argument("expressions", nargs="*", help="expressions to evaluate")
    p_eval.add_argument("--file", help="script file (UTF-8, # comments)")

    sub.add_parser("repl", help="interactive line-oriented session")

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=tuple(sorted(SUITES)) + ("all",))

    p_dirac = sub.add_parser("dirac", help="free Dirac sector tools")
    p_dirac.add_argument("mode", nargs="?", choices=("show", "verify"), default="show")
    p_dirac.add_argument("--mass", default="3")
    p_dirac.add_argument("--momentum", default="0,0,4")
    p_dirac.add_argument("--axis", default="1,0,0")

    p_lor = sub.add_parser("lorentz", help="Lorentz/Poincare verification and boosts")
    lor_sub = p_lor.add_subparsers(dest="lorentz_command", required=True)
    lor_sub.add_parser("passive-check")
    lor_sub.add_parser("active-check")
    lor_sub.add_parser("poincare-check")
    p_boost = lor_sub.add_parser("boost")
    p_boost.add_argument("--rapidity", type=float, required=True)
    p_boost.add_argument("--vector", required=True, help="w,x,y,z components")
    p_boost.add_argument("--axis", type=int, default=1, choices=(1, 2, 3))

    p_mech = sub.add_parser("mech", help="parametrized mechanics tools")
    mech_sub = p_mech.add_subparsers(dest="mech_command", required=True)
    p_br = mech_sub.add_parser("bracket")
    p_br.add_argument("f")
    p_br.add_argument("g")
    p_ham = mech_sub.add_parser("hamilton")
    _add_field_args(p_ham)
    p_lim = mech_sub.add_parser("limit-check")
    p_lim.add_argument("--count", type=int, default=100)
    p_lim.add_argument("--seed", type=int, default=20406)
    p_sim = mech_sub.add_parser("simulate")
    _add_field_args(p_sim)
    p_sim.add_argument("--step", type=float, default=1e-3)
    p_sim.add_argument("--smax", type=float, default=1.0)
    p_sim.add_argument("--out", default="traj.csv")
    p_sim.add_argument("--q0", default="0,0,0,0")
    p_sim.add_argument("--p0", default=None, help="initial p_mu; defaults per field")
    return top


def _add_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", choices=("free", "homogeneous-b"), default="free")
    parser.add_argument("--b3", default="1")
    parser.add_argument("--e", default="1")
    parser.add_argument("--m", default="1")


def _fractions(text: str, n: int) -> tuple[Fraction, ...]:
    parts = tuple(Fraction(x) for x in text.split(","))
    if len(parts) != n:
        raise AlgebraError(f"expected {n} comma-separated values, got {len(parts)}")
    return parts


def _floats(text: str, n: int) -> tuple[float, ...]:
    parts = tuple(float(x) for x in text.split(","))
    if len(parts) != n:
        raise AlgebraError(f"expected {n} comma-separated values, got {len(parts)}")
    return parts


def _hamiltonian_from_args(args) -> CovariantHamiltonian:
    metric = metric_by_name(args.metric or "standard")
    if args.field == "free":
        return CovariantHamiltonian.free(Fraction(args.m), metric)
    return CovariantHamiltonian.charged(
        Fraction(args.m), Fraction(args.e), homogeneous_b_potential(Fraction(args.b3)), metric
    )


def _print_reports(reports: list[CheckReport], fmt: str) -> int:
    if fmt == "json":
        payload = [r.to_json_obj() for r in reports]
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for r in reports:
            print(r.to_text())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def _cmd_eval(args, cfg: SessionConfig) -> int:
    sources: list[str] = list(args.expressions)
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    sources.append(line)
    if not sources:
        print("nothing to evaluate", file=sys.stderr)
        return EXIT_USAGE
    for source in sources:
        print(render(eval_source(source, cfg), cfg))
    return EXIT_OK


def _cmd_repl(cfg: SessionConfig) -> int:
    print("starprod repl; :quit to exit, :set metric|order|format, :load FILE")
    while True:
        try:
            line = input("star> ").strip()
        except EOFError:
            print()
            return EXIT_OK
        if not line or line.startswith("#"):
            continue
        if line.startswith(":"):
            parts = line.split()
            if parts[0] == ":quit":
                return EXIT_OK
            if parts[0] == ":set" and len(parts) == 3:
                key, value = parts[1], parts[2]
                try:
                    if key == "metric":
                        cfg = SessionConfig(
                            metric=metric_by_name(value),
                            product=cfg.product,
                            order=cfg.order,
                            fmt=cfg.fmt,
                        )
                    elif key == "order":
                        cfg = SessionConfig(
                            metric=cfg.metric, product=cfg.product, order=int(value), fmt=cfg.fmt
                        )
                    elif key == "format":
                        if value not in ("text", "json"):
                            raise AlgebraError("format must be text or json")
                        cfg = SessionConfig(
                            metric=cfg.metric, product=cfg.product, order=cfg.order, fmt=value
                        )
                    else:
                        print(f"unknown setting {key!r}")
                        continue
                    print(f"{key} = {value}")
                except (AlgebraError, ValueError) as exc:
                    print(f"error: {exc}")
                continue
            if parts[0] == ":load" and len(parts) == 2:
                try:
                    with open(parts[1], encoding="utf-8") as fh:
                        for raw in fh:
                            raw = raw.strip()
                            if raw and not raw.startswith("#"):
                                print(render(eval_source(raw, cfg), cfg))
                except (OSError, ParseError, EvalError, AlgebraError) as exc:
                    print(f"error: {exc}")
                continue
            print(f"unknown command {parts[0]!r}")
            continue
        try:
            print(render(eval_source(line, cfg), cfg))
        except (ParseError, EvalError, AlgebraError) as exc:
            print(f"error: {exc}")


def _cmd_dirac(args, cfg: SessionConfig) -> int:
    system = DiracSystem.from_mass_momentum(
        Fraction(args.mass), _fractions(args.momentum, 3), metric_by_name("standard")
    )
    axis = SpinAxis.of(_fractions(args.axis, 3))
    if args.mode == "verify":
        report = CheckReport(name="dirac point")
        report.extend(verify_dirac_point(system, axis))
        return _print_reports([report], cfg.fmt)
    h = dirac_hamiltonian(system)
    energy = energy_projectors(system)
    spin = spin_operator(axis, system.metric)
    combined = combined_projectors(system, axis)
    if cfg.fmt == "json":
        from .textform import multivector_to_obj

        payload = {
            "hamiltonian": multivector_to_obj(h),
            "energy": str(system.energy),
            "pi_plus_E": multivector_to_obj(energy.pi_plus),
            "pi_minus_E": multivector_to_obj(energy.pi_minus),
            "spin_operator": multivector_to_obj(spin),
            "combined": {
                f"{es:+d},{ss:+d}": multivector_to_obj(pi) for (es, ss), pi in combined
            },
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"H = {h}")
        print(f"E = {system.energy}")
        print(f"pi(+E) = {energy.pi_plus}")
        print(f"pi(-E) = {energy.pi_minus}")
        print(f"S_u = {spin}")
        for (es, ss), pi in combined:
            print(f"pi({es:+d}E,{ss:+d}1/2) = {pi}")
    return EXIT_OK


def _cmd_lorentz(args, cfg: SessionConfig) -> int:
    metric = metric_by_name(args.metric or "nonstandard")
    if args.lorentz_command == "passive-check":
        from .lorentz import passive_algebra_check

        return _print_reports([passive_algebra_check(metric)], cfg.fmt)
    if args.lorentz_command == "active-check":
        from .lorentz import active_algebra_check

        return _print_reports([active_algebra_check(metric)], cfg.fmt)
    if args.lorentz_command == "poincare-check":
        from .lorentz import poincare_check

        return _print_reports([poincare_check(metric)], cfg.fmt)
    vector = _floats(args.vector, 4)
    alpha = boost_alpha(Fraction(args.rapidity), args.axis, metric)
    out = active_transform(vector, alpha, metric)
    if cfg.fmt == "json":
        print(json.dumps({"input": list(vector), "output": [float(x) for x in out]}))
    else:
        print(",".join(repr(float(x)) for x in out))
    return EXIT_OK


def _cmd_mech(args, cfg: SessionConfig) -> int:
    if args.mech_command == "bracket":
        from .mechanics import poisson_bracket
        from .multivector import Multivector

        f = eval_source(args.f, cfg)
        g = eval_source(args.g, cfg)
        if not (isinstance(f, Multivector) and isinstance(g, Multivector)):
            raise EvalError("bracket arguments must be multivector-valued")
        if not (f.is_scalar() and g.is_scalar()):
            raise EvalError("bracket arguments must be grade 0")
        result = Multivector.scalar(poisson_bracket(f.scalar_part(), g.scalar_part()))
        print(render(result, cfg))
        return EXIT_OK
    if args.mech_command == "hamilton":
        ham = _hamiltonian_from_args(args)
        qdot, pdot = hamilton_rhs(ham)
        if cfg.fmt == "json":
            payload = {
                "qdot": [str(x) for x in qdot],
                "pdot": [str(x) for x in pdot],
                "K": str(ham.hamiltonian()),
            }
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(f"K = {ham.hamiltonian()}")
            for mu in range(4):
                print(f"dq{mu}/ds = {qdot[mu]}")
            for mu in range(4):
                print(f"dp{mu}/ds = {pdot[mu]}")
        return EXIT_OK
    if args.mech_command == "limit-check":
        from .suites import suite_classical_limit

        return _print_reports([suite_classical_limit(args.count, args.seed)], cfg.fmt)
    # simulate
    ham = _hamiltonian_from_args(args)
    q0 = _floats(args.q0, 4)
    if args.p0 is not None:
        p0 = _floats(args.p0, 4)
    elif args.field == "homogeneous-b":
        p0 = ((1.0 + float(Fraction(args.m)) ** 2) ** 0.5, 1.0, 0.0, 0.0)
    else:
        p0 = (float(Fraction(args.m)), 0.0, 0.0, 0.0)
    trajectory = integrate(ham, q0, p0, args.smax, args.step)
    trajectory.to_csv(args.out)
    drift = max(abs(d) for d in trajectory.pi2_drift)
    print(f"wrote {len(trajectory.samples)} samples to {args.out}; max |pi.pi drift| = {drift:.3e}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = SessionConfig(
        metric=metric_by_name(args.metric or "nonstandard"), order=args.order, fmt=args.format
    )
    try:
        if args.command == "eval":
            return _cmd_eval(args, cfg)
        if args.command == "repl":
            return _cmd_repl(cfg)
        if args.command == "verify":
            reports = run_all() if args.suite == "all" else [run_suite(args.suite)]
            return _print_reports(reports, cfg.fmt)
        if args.command == "dirac":
            return _cmd_dirac(args, cfg)
        if args.command == "lorentz":
            return _cmd_lorentz(args, cfg)
        if args.command == "mech":
            return _cmd_mech(args, cfg)
        parser.error(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvalError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
