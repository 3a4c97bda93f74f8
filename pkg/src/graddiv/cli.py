"""Command line entry point: ``graddiv <subcommand> ...``.

Every run prints a header line ``# graddiv <version> seed=<s> config=<digest>``
to stdout; CSV artifacts go to ``--out`` (stdout when omitted for tables).
Exit status: 0 on success, 1 when a verification fails or a resonant
problem has no solution, 2 on usage errors.
"""
import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from . import ballgrid, eigenbasis, ellipticity, fields, spectral, specfun
from .errors import GradDivError


def _orders(text):
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3 or min(parts) < 1:
        raise argparse.ArgumentTypeError("orders must be three positive integers n_r,n_theta,n_phi")
    return tuple(parts)


def _int_list(text):
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text}")


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _header(args):
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    digest = hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode()).hexdigest()
    print(f"# graddiv {__version__} seed={args.seed} config={digest[:16]}")


def _rule(args):
    return ballgrid.build_ball_quadrature(args.radius, *args.orders)


def _modes(args):
    if getattr(args, "count", None):
        return eigenbasis.enumerate_modes(count=args.count, radius=args.radius)
    return eigenbasis.modes_up_to(args.nmax, args.mmax, args.radius)


def _write(path, text):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_zeros(args):
    table = specfun.zero_table(args.kind, args.nmax, args.mmax)
    lines = ["n,m,z"] + [f"{n},{m},{z:.15g}" for n, m, z in table.rows()]
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_basis(args):
    if args.grid:
        points = ballgrid.read_points_csv(args.grid)
    else:
        rng = np.random.default_rng(args.seed)
        points = eigenbasis.random_ball_points(args.points, args.radius, rng, fraction=1.0)
    if args.mode:
        if len(args.mode) != 3:
            raise GradDivError("--mode needs n,m,k")
        n, m, k = args.mode
        mode = eigenbasis.make_mode(n, m, k, args.radius)
        values = eigenbasis.vector_eigenfunction(mode, points).reshape(-1, 3)
        ballgrid.write_field_csv(ballgrid.FieldSample(points, values, args.radius), args.out)
        return 0
    rows = ["n,m,k,x,y,z,ux,uy,uz"]
    for mode in eigenbasis.modes_up_to(args.nmax, args.mmax, args.radius):
        values = eigenbasis.vector_eigenfunction(mode, points).reshape(-1, 3)
        for p, v in zip(points, values):
            rows.append(f"{mode.n},{mode.m},{mode.k}," + ",".join(f"{x:.17g}" for x in (*p, *v)))
    _write(args.out, "\n".join(rows) + "\n")
    return 0


def _field_input(args, rule):
    if args.field:
        sample = ballgrid.read_field_csv(args.field, args.radius)
        ballgrid._check_on_rule(sample, rule)
        return sample
    return fields.preset(args.preset, args.radius)


def cmd_expand(args):
    rule = _rule(args)
    if args.nodes_out:
        pts = rule.points
        ballgrid.write_field_csv(ballgrid.FieldSample(pts, np.zeros(len(pts))), args.nodes_out)
    coeffs = spectral.expand(_field_input(args, rule), _modes(args), rule)
    if args.out:
        coeffs.to_csv(args.out)
    else:
        print("n,m,k,coeff")
        for md, v in zip(coeffs.modes, coeffs.values):
            print(f"{md.n},{md.m},{md.k},{v:.17g}")
    return 0


def cmd_solve(args):
    if args.f.startswith("preset:"):
        rule = _rule(args)
        f_coeffs = spectral.expand(fields.preset(args.f, args.radius), _modes(args), rule)
    else:
        f_coeffs = spectral.CoeffVector.from_csv(args.f, args.radius)
    outcome = spectral.solve_graddiv(f_coeffs, args.lam, args.resonance_tol)
    print(f"OUTCOME={outcome.kind.value}")
    print(f"# violation={outcome.violation:.6e} kernel={len(outcome.kernel_modes)}")
    for kappa in outcome.kernel_modes:
        print(f"# kernel {kappa}")
    if outcome.solution is None:
        return 1
    sol = outcome.solution
    if args.out:
        sol.to_csv(args.out)
    else:
        print("n,m,k,coeff")
        for md, v in zip(sol.modes, sol.values):
            print(f"{md.n},{md.m},{md.k},{v:.17g}")
    return 0


def cmd_convergence(args):
    rule = _rule(args)
    field = fields.preset(args.preset, args.radius)
    rows = spectral.convergence_table(field, args.s, args.truncations, rule)
    lines = ["n_modes,l2_error,c0_error,coeff_sum"]
    lines += [f"{r.n_modes},{r.l2_error:.10e},{r.c0_error:.10e},{r.coeff_sum:.10e}" for r in rows]
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_ellipticity(args):
    report = ellipticity.ellipticity_report(args.lam, args.samples, args.frames, args.seed)
    cover = report.covering
    print(f"verdict: {report.verdict}")
    print(f"stacked_rank: min={min(report.ranks)} max={max(report.ranks)} samples={len(report.ranks)}")
    print(f"min_singular_value: {report.min_singular:.6e}")
    print(f"curl_identity_residual: {report.identity_residual:.3e}")
    print(f"covering: {sum(c.passed for c in cover)}/{len(cover)} PASS")
    if cover:
        print(f"covering_kernel_dim: {max(c.kernel_dim for c in cover)}")
        print(f"max_symbol_residual: {max(c.symbol_residual for c in cover):.3e}")
        print(f"min_boundary_value: {min(abs(c.boundary_value) for c in cover):.6e}")
    # lambda = 0 is expected to come out non-elliptic
    failed = args.lam != 0 and report.verdict != "generalized elliptic"
    return 1 if failed else 0


def cmd_verify(args):
    rule = _rule(args)
    modes = eigenbasis.modes_up_to(args.nmax, args.mmax, args.radius)
    reports = eigenbasis.verify_modes(modes, rule, seed=args.seed)
    gram = eigenbasis.gram_matrix(modes, rule)
    gram_err = float(np.max(np.abs(gram - np.eye(len(modes)))))
    lines = ["n,m,k,nu,div_residual,curl_residual,trace_residual,norm_error,status"]
    for md, rep in zip(modes, reports):
        lines.append(f"{md.n},{md.m},{md.k},{md.nu:.15g},{rep.div_residual:.6e},"
                     f"{rep.curl_residual:.6e},{rep.trace_residual:.6e},{rep.norm_error:.6e},"
                     f"{rep.status}")
    gram_ok = gram_err <= args.gram_tol
    _write(args.out, "\n".join(lines) + "\n")
    passed = sum(r.passed for r in reports)
    print(f"modes: {passed}/{len(reports)} PASS")
    print(f"gram: max|G - I| = {gram_err:.3e} {'PASS' if gram_ok else 'FAIL'}")
    ok = gram_ok and passed == len(reports)
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="graddiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"graddiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--radius", type=_positive, default=1.0)
        p.set_defaults(func=func)
        return p

    p = add("zeros", cmd_zeros, "tabulate zeros of psi_n or psi_n'")
    p.add_argument("--kind", choices=["psi", "psi-prime"], required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--out")

    p = add("basis", cmd_basis, "sample q fields on a point cloud")
    p.add_argument("--nmax", type=int, default=1)
    p.add_argument("--mmax", type=int, default=1)
    p.add_argument("--mode", type=_int_list, help="single mode n,m,k")
    p.add_argument("--grid", help="CSV with columns x,y,z")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--out", required=True)

    def rule_opts(p):
        p.add_argument("--orders", type=_orders, default=ballgrid.DEFAULT_ORDERS)
        p.add_argument("--nmax", type=int, default=3)
        p.add_argument("--mmax", type=int, default=3)
        p.add_argument("--count", type=int, help="first COUNT modes instead of nmax/mmax")

    p = add("expand", cmd_expand, "expansion coefficients against the q basis")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--field", help="vector field CSV sampled on the rule nodes")
    src.add_argument("--preset", help=f"one of {', '.join(fields.PRESETS)}")
    rule_opts(p)
    p.add_argument("--nodes-out", help="write the rule nodes as a scalar CSV")
    p.add_argument("--out")

    p = add("solve", cmd_solve, "solve grad div u + lambda u = f")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--f", required=True, help="coefficient CSV or preset:NAME")
    p.add_argument("--resonance-tol", type=_positive, default=None)
    rule_opts(p)
    p.add_argument("--out")

    p = add("convergence", cmd_convergence, "partial-sum errors for a preset field")
    p.add_argument("--preset", required=True)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--truncations", type=_int_list, default=[10, 20, 50, 100])
    p.add_argument("--orders", type=_orders, default=ballgrid.DEFAULT_ORDERS)
    p.add_argument("--out")

    p = add("ellipticity", cmd_ellipticity, "symbol-level ellipticity checks")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--frames", type=int, default=50)

    p = add("verify", cmd_verify, "residual report for all modes up to nmax, mmax")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--mmax", type=int, default=3)
    p.add_argument("--orders", type=_orders, default=ballgrid.DEFAULT_ORDERS)
    p.add_argument("--gram-tol", type=_positive, default=1e-7)
    p.add_argument("--out")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _header(args)
    try:
        return args.func(args)
    except GradDivError as exc:
        print(f"graddiv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
