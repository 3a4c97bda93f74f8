"""Acceptance criteria 1-10; each test records one PASS/FAIL line."""
import contextlib
import math

import numpy as np
import pytest

from graddiv import ballgrid, cli, eigenbasis as eb, ellipticity as el, fields, spectral as sp, specfun
from graddiv.ballgrid import FieldSample, l2_norm


@contextlib.contextmanager
def criterion(request, num, title):
    checks = []
    status = "FAIL"
    try:
        yield checks
        status = "PASS" if all(ok for _, ok in checks) else "FAIL"
    finally:
        failed = [name for name, ok in checks if not ok]
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        request.config.acceptance_lines[num] = f"criterion {num:2d} {title}: {status}{detail}"
    bad = [name for name, ok in checks if not ok]
    assert not bad, f"criterion {num} failed checks: {bad}"


def bisect(f, lo, hi):
    flo = f(lo)
    while hi - lo > 1e-15 * hi:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_01_zeros(request):
    with criterion(request, 1, "zeros") as checks:
        checks.append(("rho_0m = m pi",
                       all(abs(specfun.bessel_zero(0, m) - m * math.pi) <= 1e-12 for m in range(1, 21))))
        checks.append(("alpha_0m = rho_1m",
                       all(abs(specfun.bessel_prime_zero(0, m) - specfun.bessel_zero(1, m)) <= 1e-12
                           for m in range(1, 11))))
        oracle = bisect(lambda z: math.tan(z) - z, math.pi + 1e-9, 1.5 * math.pi - 1e-9)
        checks.append(("tan z = z oracle", abs(specfun.bessel_prime_zero(0, 1) - oracle) <= 1e-10
                       and abs(oracle - 4.493409457909064) <= 1e-10))


def test_criterion_02_special_function_residuals(request):
    with criterion(request, 2, "special-function residuals") as checks:
        z = np.random.default_rng(2).uniform(0.1, 50.0, 200)
        ode_worst, rec_worst = 0.0, 0.0
        for n in range(11):
            p = specfun.psi(n, z)
            ode = specfun.psi_second(n, z) + 2 / z * specfun.psi_prime(n, z) + (1 - n * (n + 1) / z**2) * p
            ode_worst = max(ode_worst, float(np.max(np.abs(ode) / np.maximum(1, np.abs(p)))))
            if n >= 1:
                lhs = specfun.psi(n - 1, z) + specfun.psi(n + 1, z)
                rhs = (2 * n + 1) / z * p
                rel = np.abs(lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
                rec_worst = max(rec_worst, float(np.max(rel)))
        checks.append((f"ODE residual {ode_worst:.1e}", ode_worst <= 1e-9))
        checks.append((f"recurrence residual {rec_worst:.1e}", rec_worst <= 1e-11))


def test_criterion_03_eigenbasis_validity(request, rule):
    with criterion(request, 3, "eigenbasis validity") as checks:
        modes = eb.modes_up_to(4, 4)
        reports = eb.verify_modes(modes, rule)
        tol = eb.ModeTolerances()
        checks.append(("div + nu^2 g", max(r.div_residual for r in reports) <= tol.divergence))
        checks.append(("curl", max(r.curl_residual for r in reports) <= tol.curl))
        checks.append(("boundary trace", max(r.trace_residual for r in reports) <= tol.trace))
        checks.append(("unit norm", max(r.norm_error for r in reports) <= tol.norm))
        checks.append(("all modes PASS", all(r.passed for r in reports) and len(reports) == 100))


def test_criterion_04_orthonormality(request, rule):
    with criterion(request, 4, "orthonormality") as checks:
        modes = eb.enumerate_modes(count=50)
        gram = eb.gram_matrix(modes, rule)
        checks.append(("Gram of first 50", float(np.max(np.abs(gram - np.eye(50)))) <= 1e-7))
        worst = 0.0
        for md in eb.modes_up_to(5, 5):
            g = FieldSample(rule.points, eb.BasisSampler.from_rule(rule).g(md))
            q = FieldSample(rule.points, eb.BasisSampler.from_rule(rule).q(md))
            worst = max(worst, abs(l2_norm(q, rule) - md.nu * l2_norm(g, rule)))
        checks.append(("||q|| = nu ||g||", worst <= 1e-9))


def test_criterion_05_solver(request):
    with criterion(request, 5, "solver") as checks:
        modes = eb.enumerate_modes(count=60)
        mu1 = modes[0].mu
        j2 = next(i for i, md in enumerate(modes) if md.mu > mu1)
        mu2 = modes[j2].mu
        rng = np.random.default_rng(5)
        f = sp.CoeffVector(modes, rng.normal(size=len(modes)))
        for lam in (0.0, 0.5 * (mu1 + mu2)):
            out = sp.solve_graddiv(f, lam)
            back = sp.apply_graddiv_plus_lambda(out.solution, lam)
            err = float(np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values)))
            checks.append((f"round trip lambda={lam:.4g}", out.kind is sp.OutcomeKind.UNIQUE and err <= 1e-12))
        unit = np.zeros(len(modes))
        unit[0] = 1.0
        out = sp.solve_graddiv(f.with_values(unit), mu1)
        checks.append(("resonant-unsolvable", out.kind is sp.OutcomeKind.RESONANT_UNSOLVABLE
                       and out.violation == 1.0))
        unit = np.zeros(len(modes))
        unit[j2] = 1.0
        out = sp.solve_graddiv(f.with_values(unit), mu1)
        multiplet = [md.kappa for md in modes if md.mu == mu1]
        checks.append(("resonant-solvable", out.kind is sp.OutcomeKind.RESONANT_SOLVABLE
                       and out.kernel_modes == multiplet and len(multiplet) == 2 * modes[0].n + 1))
        f20 = sp.CoeffVector(modes[:20], rng.normal(size=20))
        lam = 0.5 * (mu1 + mu2)
        pts = eb.random_ball_points(50, 1.0, rng)
        res = sp.pde_residual(sp.solve_graddiv(f20, lam).solution, f20, lam, pts)
        checks.append((f"PDE residual {res:.1e}", res <= 1e-4))


def test_criterion_06_decomposition(request, rule):
    with criterion(request, 6, "decomposition") as checks:
        modes = eb.enumerate_modes(count=100)
        w = fields.rigid_rotation
        wnorm = l2_norm(FieldSample(rule.points, w(rule.points)), rule)
        c = sp.expand(w, modes, rule)
        checks.append(("rigid rotation coefficients", float(np.max(np.abs(c.values))) <= 1e-7 * wnorm))
        f = lambda p: fields.grad_r2(p) + w(p) + eb.vector_evaluator(modes[4])(p)
        once = sp.expand(f, modes, rule)
        twice = sp.expand(sp.project_potential(f, modes, rule), modes, rule)
        checks.append(("idempotence", float(np.max(np.abs(once.values - twice.values))) <= 1e-12))


def test_criterion_07_sobolev_diagnostics(request, rule):
    with criterion(request, 7, "Sobolev diagnostics") as checks:
        truncations = [50, 100, 200, 400]
        modes = eb.enumerate_modes(count=400)
        c = sp.expand(fields.grad_r2, modes, rule)
        rep = sp.sobolev_coeff_sum(c, 1, truncations)
        sums = ", ".join(f"{v:.6g}" for v in rep.partial_sums)
        checks.append((f"2x s=1 sums strictly increase [{sums}]", bool(np.all(np.diff(rep.partial_sums) > 0))))
        ratios = ", ".join(f"{v:.4g}" for v in rep.ratios)
        checks.append((f"2x shell ratios > 1 [{ratios}]", bool(np.all(rep.ratios > 1))))
        trace = sp.check_AsK_membership(fields.grad_r2, 2)
        checks.append(("2x trace check FAILs with 2R",
                       trace.status == "FAIL" and abs(trace.residuals[0] - 2.0) <= 1e-6))
        smooth = fields.decaying_field(6.0, 800)
        rows = sp.convergence_table(smooth, 1, truncations, rule, modes=smooth.coeffs.modes)
        tail = abs(rows[-1].coeff_sum - rows[-2].coeff_sum)
        checks.append((f"nu^-6 sum settles ({tail:.1e})", tail < 1e-6))
        l2 = [r.l2_error for r in rows]
        checks.append(("nu^-6 L2 error decreases", all(b < a for a, b in zip(l2, l2[1:]))))


def test_criterion_08_selfadjointness(request, small_rule):
    with criterion(request, 8, "self-adjointness") as checks:
        rng = np.random.default_rng(8)
        pool = eb.enumerate_modes(count=30)
        worst = 0.0
        for _ in range(10):
            u = sp.CoeffVector([pool[i] for i in rng.choice(30, 10, replace=False)], rng.normal(size=10))
            v = sp.CoeffVector([pool[i] for i in rng.choice(30, 10, replace=False)], rng.normal(size=10))
            lhs, rhs = sp.selfadjointness_check(u, v, float(rng.uniform(-5, 5)), small_rule)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        checks.append((f"relative gap {worst:.1e}", worst <= 1e-5))


def test_criterion_09_ellipticity(request, capsys):
    with criterion(request, 9, "ellipticity") as checks:
        for lam in (1.0, -3.7):
            rep = el.ellipticity_report(lam, samples=100, frames=50, seed=9)
            checks.append((f"rank 3 at lambda={lam}", rep.rank_ok and len(rep.ranks) == 100))
            checks.append((f"covering at lambda={lam}", rep.covering_ok and len(rep.covering) == 50))
            checks.append((f"identity at lambda={lam}", rep.identity_residual <= 1e-14))
        rep0 = el.ellipticity_report(0.0, seed=9)
        checks.append(("rank 1 at lambda=0", all(r == 1 for r in rep0.ranks)))
        code = cli.main(["ellipticity", "--lambda", "0"])
        out = capsys.readouterr().out
        checks.append(("CLI reports not elliptic", code == 0 and "verdict: not elliptic" in out))


def test_criterion_10_determinism(request, tmp_path, capsys):
    with criterion(request, 10, "determinism") as checks:
        paths = [tmp_path / "run1.csv", tmp_path / "run2.csv"]
        codes = [cli.main(["verify", "--nmax", "4", "--mmax", "4", "--seed", "11", "--out", str(p)])
                 for p in paths]
        capsys.readouterr()
        checks.append(("verify exits 0", codes == [0, 0]))
        checks.append(("byte-identical CSV", paths[0].read_bytes() == paths[1].read_bytes()))
