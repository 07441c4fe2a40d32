"""``blaschke-lab`` command-line entry point.

Every subcommand writes one JSON report to standard output and a short
human summary to standard error. Exit codes: 0 certified, 1 precondition
violation, 2 capacity/resolution/search failure or an uncertified run,
64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time

import numpy as np

from . import __version__, acceptance
from .approx_fbp import TaylorSeries, caratheodory_approximant, fisher_approximate
from .blaschke import FiniteBlaschkeProduct
from .disc import BoundaryGrid, FourierCoefficients, grid_angles
from .douglas_rudin import build_map, douglas_rudin_approximate
from .elliptic import EllipticParameters, modulus_residual, solve_modulus
from .errors import (CapacityError, DomainError, NumericalError, PreconditionError, ResolutionError,
                     SearchError)
from .inner import InnerFunction, frostman_approximate, is_blaschke_test
from .numrange import (as_matrix, berger_stampfli_check, berger_stampfli_ensemble, numerical_radius,
                       resolvent_partial_fraction_check, spectral_radius)
from .serialization import RunConfig, as_grid, as_taylor, dumps, load_object, write_grid_csv
from .unimodular import hankel_distance_estimate, helson_sarason, riemann_unimodular_combo

EXIT_OK, EXIT_PRECONDITION, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _taylor_input(obj):
    if isinstance(obj, FiniteBlaschkeProduct):
        return TaylorSeries(obj.taylor(63))
    return as_taylor(obj)


def _circle(n):
    return np.exp(1j * grid_angles(n))


def _dump(args, theta, columns):
    if args.dump_grid:
        write_grid_csv(args.dump_grid, theta, columns)


# -- subcommands ------------------------------------------------------------------


def cmd_caratheodory(args, cfg):
    f = _taylor_input(load_object(args.f, cfg.grid_n))
    B = caratheodory_approximant(f, args.n)
    coeff_err = float(np.max(np.abs(B.taylor(args.n) - f.coeffs[: args.n + 1])))
    checks = []
    for r in args.radii:
        z = r * _circle(512)
        checks.append({"r": r, "bound": 2.0 * r**args.n, "achieved": float(np.max(np.abs(f.evaluate(z) - B.evaluate(z))))})
    certified = coeff_err <= 1e-9 and all(c["achieved"] <= c["bound"] for c in checks)
    zeta = _circle(cfg.grid_n)
    _dump(args, grid_angles(cfg.grid_n), {"f": f.evaluate(zeta), "B": B.evaluate(zeta)})
    return {"result": {"fbp": B.to_json(), "degree": B.degree},
            "certificate": {"coefficient_error": coeff_err, "coefficient_tol": 1e-9, "circles": checks,
                            "certified": certified}}, certified, f"degree {B.degree}, coefficient error {coeff_err:.2e}"


def cmd_fisher(args, cfg):
    obj = load_object(args.f, cfg.grid_n)
    f = obj if isinstance(obj, FiniteBlaschkeProduct) else _taylor_input(obj)
    res = fisher_approximate(f, args.eps, grid_n=cfg.grid_n, order_cap=cfg.order_cap, item_cap=cfg.item_cap)
    cert = res.certificate()
    zeta = _circle(cfg.grid_n)
    _dump(args, grid_angles(cfg.grid_n), {"f": f.evaluate(zeta), "combination": res.combination.evaluate(zeta)})
    return ({"result": res.combination.to_json(), "certificate": cert}, cert["certified"],
            f"t = {res.t}, order {res.order}, achieved {res.achieved:.4g} < {args.eps}")


def cmd_helson_sarason(args, cfg):
    g = as_grid(load_object(args.f, cfg.grid_n), cfg.grid_n)
    res = helson_sarason(g, args.eps)
    _dump(args, g.theta, {"f": g.values, "quotient": res.quotient.evaluate(g.points)})
    return ({"result": res.quotient.to_json(), "certificate": res.report.to_json()}, res.report.certified,
            f"degree {res.degree}, parity {res.parity}, achieved {res.report.achieved:.4g}")


def cmd_combo(args, cfg):
    g = as_grid(load_object(args.f, cfg.grid_n), cfg.grid_n)
    combo, rep = riemann_unimodular_combo(g, args.eps, args.n)
    result = {"weights": [1.0 / args.n] * args.n if args.emit_items else {"uniform": args.n},
              "items": ([it.to_json() for it in combo.items] if args.emit_items else
                        {"rule": "(w_k + s f) / (1 + s conj(f) w_k), w_k = exp(2 pi i k / N)",
                         "s": 1.0 - args.eps, "N": args.n})}
    _dump(args, g.theta, {"f": g.values, "combination": combo.evaluate(g.points)})
    return {"result": result, "certificate": rep.to_json()}, rep.certified, f"achieved {rep.achieved:.4g} <= bound {rep.bound:.4g}"


def cmd_dist(args, cfg):
    obj = load_object(args.coeffs, cfg.grid_n)
    if isinstance(obj, (TaylorSeries,)):
        obj = FourierCoefficients.from_dict(dict(enumerate(obj.coeffs)))
    elif isinstance(obj, FiniteBlaschkeProduct):
        obj = BoundaryGrid.from_function(obj.evaluate, cfg.grid_n)
    if not isinstance(obj, (BoundaryGrid, FourierCoefficients)):
        raise PreconditionError("dist needs Fourier coefficients or boundary samples")
    ladder = [hankel_distance_estimate(obj, M).lower for M in range(1, args.m + 1)]
    rep = {"lower": ladder[-1], "matrix_size": args.m, "ladder": ladder,
           "monotone": all(b >= a - 1e-14 for a, b in zip(ladder, ladder[1:]))}
    return {"result": rep, "certificate": {"lower_bound": ladder[-1], "certified": rep["monotone"]}}, \
        rep["monotone"], f"dist >= {ladder[-1]:.6g} (M = {args.m})"


def cmd_frostman(args, cfg):
    phi = load_object(args.phi, cfg.grid_n)
    if isinstance(phi, FiniteBlaschkeProduct):
        phi = InnerFunction(phi)
    if not isinstance(phi, InnerFunction):
        raise PreconditionError("frostman needs an inner function (catalog entry or inner JSON)")
    verdict = is_blaschke_test(phi, cfg.r_ladder)
    B, cert = frostman_approximate(phi, args.eps, seed=cfg.seed, r_ladder=cfg.r_ladder)
    certified = cert.achieved <= cert.bound < cert.eps
    return ({"result": {"shifted": B.to_json(), "input_verdict": verdict.to_json()}, "certificate": cert.to_json()},
            certified, f"input mass {verdict.estimated_mass:.4g}, shift |w| = {cert.rho:.4g}, bound {cert.bound:.4g}")


def cmd_douglas_rudin(args, cfg):
    obj = load_object(args.phi, cfg.grid_n)
    g = as_grid(obj, cfg.grid_n)
    product, rep = douglas_rudin_approximate(g, args.eps, buffer=args.buffer)
    _dump(args, g.theta, {"phi": g.values, "quotient": product.evaluate(g.points)})
    return ({"result": product.to_json(), "certificate": rep.to_json()}, rep.certified,
            f"{len(product.factors)} factor(s), achieved {rep.achieved:.4g} <= {rep.bound:.4g}")


def cmd_elliptic(args, cfg):
    p = EllipticParameters.from_modulus(args.k)
    result = {"K": p.K, "K_prime": p.K_prime, "r": p.r_inner, "R": p.R_outer, "params": p.to_json()}
    certified = True
    if args.theta0 is not None:
        if args.eps is None:
            raise UsageError("--theta0 requires --eps")
        m = build_map(args.theta0, args.eps)
        images, targets = m.anchors()
        k_rel = solve_modulus(args.theta0, args.eps)
        anchor_err = float(np.max(np.abs(images - targets)))
        result["map"] = m.to_json()
        result["modulus_relation"] = {"k": k_rel, "residual": modulus_residual(k_rel, args.theta0, args.eps)}
        result["anchor_error"] = anchor_err
        certified = anchor_err <= 1e-10
    summary = f"K = {p.K:.15g}, K' = {p.K_prime:.15g}, r = {p.r_inner:.6g}, R = {p.R_outer:.6g}"
    return {"result": result, "certificate": {"certified": certified}}, certified, summary


def cmd_numrange(args, cfg):
    result, certified, parts = {}, True, []
    if args.matrix:
        T = as_matrix(load_object(args.matrix, cfg.grid_n))
        rep = numerical_radius(T, cfg.angles)
        result["range"] = rep.to_json()
        result["spectral_radius"] = spectral_radius(T)
        parts.append(f"w(T) = {rep.radius:.12g}")
        if args.fbp:
            B = load_object(args.fbp, cfg.grid_n)
            if not isinstance(B, FiniteBlaschkeProduct):
                raise PreconditionError("--fbp must name a finite Blaschke product")
            bs = berger_stampfli_check(T, B, cfg.bs_tol, m=cfg.angles)
            result["berger_stampfli"] = bs.to_json()
            if rep.radius > 0:
                S = (bs.r / rep.radius) * T
                gammas = np.exp(1j * (grid_angles(4) + 0.25))
                result["resolvent_residuals"] = [resolvent_partial_fraction_check(S, B, g) for g in gammas]
            certified &= bs.passed
            parts.append(f"w(B(rT/w)) = {bs.wBT:.12g} ({'pass' if bs.passed else 'FAIL'})")
    elif args.fbp:
        raise UsageError("--fbp requires --matrix")
    if args.ensemble:
        ens = berger_stampfli_ensemble(args.ensemble, cfg.seed, cfg.bs_tol, m=cfg.angles, workers=cfg.threads)
        result["ensemble"] = ens.to_json()
        certified &= ens.failures == 0
        parts.append(f"ensemble {ens.trials} trials, {ens.failures} failures")
    if not result:
        raise UsageError("numrange needs --matrix or --ensemble")
    return {"result": result, "certificate": {"certified": certified}}, certified, "; ".join(parts)


def cmd_selftest(args, cfg):
    checks = acceptance.CRITERIA
    if args.only:
        checks = [acceptance.CRITERIA[i - 1] for i in args.only]
    results = []
    for check in checks:
        res = acceptance.run_criterion(check)
        sys.stderr.write(res.line() + "\n")
        results.append(res)
    passed = all(r.passed for r in results)
    return ({"result": [r.to_json(args.timing) for r in results], "certificate": {"certified": passed}}, passed,
            f"{sum(r.passed for r in results)}/{len(results)} criteria passed")


# -- parser -----------------------------------------------------------------------


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return parse


def _float_list(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if any(not 1 <= v <= len(acceptance.CRITERIA) for v in vals):
        raise argparse.ArgumentTypeError(f"criteria are numbered 1..{len(acceptance.CRITERIA)}")
    return vals


COMMANDS = {
    "caratheodory": cmd_caratheodory, "fisher": cmd_fisher, "helson-sarason": cmd_helson_sarason,
    "combo": cmd_combo, "dist": cmd_dist, "frostman": cmd_frostman, "douglas-rudin": cmd_douglas_rudin,
    "elliptic": cmd_elliptic, "numrange": cmd_numrange, "selftest": cmd_selftest,
}
RANDOMIZED = {"frostman"}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--grid", type=_positive(int), help="boundary grid size (power of two >= 64)")
    common.add_argument("--seed", type=int, help="random seed (required by randomized subcommands)")
    common.add_argument("--dump-grid", metavar="CSV", help="write boundary samples to a CSV file")
    common.add_argument("--timing", action="store_true", help="include the runtime in the JSON report")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="blaschke-lab", description="Constructive approximation by Blaschke products.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("caratheodory", parents=[common], help="Blaschke product matching Taylor coefficients")
    s.add_argument("--f", required=True, help="catalog name or coefficient JSON file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--radii", type=_float_list, default=[0.3, 0.6, 0.9])

    s = sub.add_parser("fisher", parents=[common], help="convex combination of Blaschke products")
    s.add_argument("--f", required=True)
    s.add_argument("--eps", type=_positive(float), required=True)

    s = sub.add_parser("helson-sarason", parents=[common], help="quotient of Blaschke products")
    s.add_argument("--f", required=True)
    s.add_argument("--eps", type=_positive(float), required=True)

    s = sub.add_parser("combo", parents=[common], help="average of unimodular functions")
    s.add_argument("--f", required=True)
    s.add_argument("--eps", type=_positive(float), required=True)
    s.add_argument("--n", type=int, required=True, help="number of averaged functions N")
    s.add_argument("--emit-items", action="store_true", help="include every item's samples in the report")

    s = sub.add_parser("dist", parents=[common], help="Hankel lower bound for dist(f, H-infinity)")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--m", type=_positive(int), required=True)

    s = sub.add_parser("frostman", parents=[common], help="Frostman shift of an inner function")
    s.add_argument("--phi", required=True)
    s.add_argument("--eps", type=_positive(float), required=True)

    s = sub.add_parser("douglas-rudin", parents=[common], help="quotient of inner functions")
    s.add_argument("--phi", required=True)
    s.add_argument("--eps", type=_positive(float), required=True)
    s.add_argument("--buffer", type=int, default=2, help="samples excluded next to each jump")

    s = sub.add_parser("elliptic", parents=[common], help="elliptic parameters and the annulus map")
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--theta0", type=float)
    s.add_argument("--eps", type=float)

    s = sub.add_parser("numrange", parents=[common], help="numerical radius and Berger-Stampfli checks")
    s.add_argument("--matrix")
    s.add_argument("--fbp")
    s.add_argument("--ensemble", type=_positive(int), help="number of random (T, B) pairs")

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=_int_list, help="comma-separated criterion numbers")
    return p


def _config(args):
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.grid is not None:
        cfg.grid_n = args.grid
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg.with_env()


def _inputs(args):
    skip = {"config", "dump_grid", "timing", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    report = {"command": args.command, "inputs": _inputs(args)}
    t0 = time.perf_counter()
    try:
        cfg = _config(args)
        report["config"] = cfg.to_json()
        needs_seed = args.command in RANDOMIZED or (args.command == "numrange" and args.ensemble)
        if needs_seed and cfg.seed is None:
            parser.error(f"{args.command} is randomized; pass --seed or set seed in the config file")
        body, certified, summary = COMMANDS[args.command](args, cfg)
        report.update(body)
        report["certified"] = bool(certified)
        code = EXIT_OK if certified else EXIT_FAILURE
    except UsageError as exc:
        parser.error(str(exc))
    except (PreconditionError, DomainError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        summary, code = f"precondition violated: {exc}", EXIT_PRECONDITION
    except (CapacityError, ResolutionError, SearchError, NumericalError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        achieved = getattr(exc, "achieved", None)
        if achieved is not None and math.isfinite(achieved):
            report["error"]["achieved"] = achieved
        summary, code = f"failed: {exc}", EXIT_FAILURE
    runtime = time.perf_counter() - t0
    if args.timing:
        report["runtime_s"] = runtime
    sys.stdout.write(dumps(report) + "\n")
    sys.stderr.write(f"{args.command}: {summary} [{runtime:.2f} s, exit {code}]\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
