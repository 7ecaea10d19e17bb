"""The nine check suites the CLI can run against a scenario.

Each suite is a pure function of a materialized scenario returning a dict with
one entry per check; a check carries its measured value, the bound it was
compared against, and the tolerance used, so every number in a report is
auditable.  Family scenarios route the single-space suites to a representative
member and the trend suites to the whole family.
"""

from __future__ import annotations

import numpy as np

from . import young as young_mod
from .holder import (
    empirical_holder_constant,
    holder_from_domination,
    normalization_constants,
)
from .measure import MinOfLinear, cond_exp, domination_constant, generalized_jensen_check, jensen_check
from .operators import (
    WeightedConditionalExpectation,
    boundedness_classifier,
    essential_norm_bound,
    level_set,
    mean_multiplier_sup,
    multiplier_levels,
    norm_estimate,
    norm_upper_bound,
    resolvent_check,
    spectrum,
    truncate,
    truncation_gap_check,
)
from .orlicz import contraction_check, luxemburg_norm
from .sampling import signed_log_uniform
from .scenarios import Materialized
from .young import evaluate

__all__ = ["SUITE_ORDER", "run_suite", "run_all_suites"]

# Trend expectations implied by each multiplier law: (bounded, compact).
_LAW_VERDICTS = {
    "reciprocal": (True, True),
    "flat": (True, False),
    "log_growth": (False, False),
}


def _check(name: str, passed: bool, value=None, bound=None, tolerance=None, **details) -> dict:
    out = {"name": name, "passed": bool(passed)}
    if value is not None:
        out["value"] = float(value)
    if bound is not None:
        out["bound"] = float(bound)
    if tolerance is not None:
        out["tolerance"] = float(tolerance)
    out.update(details)
    return out


def _norm_str(x: float) -> str:
    return f"{x:.12g}"


def _claimed_constant(op: WeightedConditionalExpectation) -> float:
    c0 = domination_constant(op.space, op.partition)
    return c0 * c0


def _suite_young_calculus(mat: Materialized) -> list[dict]:
    phi, psi = mat.phi, mat.psi
    ys = np.logspace(-3, 3, 64)
    errs = []
    for y in ys:
        want = young_mod.conjugate_numeric(phi, float(y), tol=1e-9)
        got = float(evaluate(psi, float(y)))
        errs.append(abs(got - want) / max(1.0, abs(want)))
    conj_err = max(errs)

    xs = np.logspace(-3, 3, 256)
    ts = evaluate(phi, xs)
    ts = ts[np.isfinite(ts)]  # the exponential kind overflows before x = 1e3
    back = evaluate(phi, phi.inverse(ts))
    inv_err = float(np.max(np.abs(back - ts) / np.maximum(1.0, ts)))

    product = young_mod.young_inequality_check(phi, psi, samples=5_000, seed=mat.scenario.seed + 3)

    cert = young_mod.check_delta2(phi)
    expect_cert = phi.kind != "exp_type"  # the exponential kind genuinely fails doubling
    doubling_ok = (cert is not None) == expect_cert

    checks = [
        _check("conjugate_consistency", conj_err <= 1e-6, value=conj_err, tolerance=1e-6),
        _check("inverse_roundtrip", inv_err <= 1e-9, value=inv_err, tolerance=1e-9),
        _check(
            "product_inequality",
            product.holds,
            value=product.max_violation,
            tolerance=1e-9,
            samples=product.samples,
        ),
        _check(
            "doubling_certificate",
            doubling_ok,
            value=(cert.constant if cert else None),
            certificate_present=cert is not None,
            expected_present=expect_cert,
        ),
    ]
    return checks


def _suite_jensen(mat: Materialized) -> list[dict]:
    op = mat.representative()
    space, part = op.space, op.partition
    rng = np.random.default_rng(mat.scenario.seed + 11)
    worst = -np.inf
    ok = True
    for _ in range(200):
        f = signed_log_uniform(rng, space.n_atoms)
        rep = jensen_check(space, part, mat.phi, f)
        worst = max(worst, rep["max_violation"])
        ok = ok and rep["holds"]
    theta = MinOfLinear(((1.0, 0.0), (0.0, 1.0)))  # (f, g) -> min(f, g)
    gen_worst = -np.inf
    gen_ok = True
    for _ in range(50):
        f = np.abs(signed_log_uniform(rng, space.n_atoms))
        g = np.abs(signed_log_uniform(rng, space.n_atoms))
        rep = generalized_jensen_check(space, part, theta, [f, g])
        gen_worst = max(gen_worst, rep["max_violation"])
        gen_ok = gen_ok and rep["holds"]
    return [
        _check("convexity_inequality", ok, value=worst, tolerance=1e-12, cases=200),
        _check("concave_min_inequality", gen_ok, value=gen_worst, tolerance=1e-12, cases=50),
    ]


def _suite_contraction(mat: Materialized) -> list[dict]:
    op = mat.representative()
    space, part = op.space, op.partition
    rng = np.random.default_rng(mat.scenario.seed + 13)
    worst_ratio = 0.0
    ok = True
    for _ in range(200):
        f = signed_log_uniform(rng, space.n_atoms)
        rep = contraction_check(space, part, mat.phi, f)
        if rep["norm_f"] > 0:
            worst_ratio = max(worst_ratio, rep["norm_Ef"] / rep["norm_f"])
        ok = ok and rep["holds"]
    g = cond_exp(space, part, signed_log_uniform(rng, space.n_atoms))
    ng, neg = luxemburg_norm(space, mat.phi, g), luxemburg_norm(space, mat.phi, cond_exp(space, part, g))
    fixed = abs(neg - ng) <= 1e-9 * max(1.0, ng)
    return [
        _check("norm_nonexpansive", ok, value=worst_ratio, bound=1.0, tolerance=1e-9, cases=200),
        _check(
            "fixed_on_measurable",
            fixed,
            value=neg,
            bound=ng,
            tolerance=1e-9,
            norm_str=_norm_str(neg),
        ),
    ]


def _suite_gcthi(mat: Materialized) -> list[dict]:
    op = mat.representative()
    space, part = op.space, op.partition
    phi, psi = mat.phi, mat.psi
    budget = mat.scenario.budget
    seed = mat.scenario.seed + 17
    report = holder_from_domination(space, part, phi, psi, budget=budget, seed=seed)
    c0 = domination_constant(space, part)
    checks = [
        _check(
            "ratio_within_domination_constant",
            bool(report.holds_with_claimed),
            value=report.empirical_C,
            bound=report.claimed_C,
            tolerance=1e-9,
            samples=report.samples,
        )
    ]
    if phi.kind in ("power", "scaled_power", "conjugate_power"):
        unit = empirical_holder_constant(space, part, phi, psi, budget=budget, seed=seed + 1, claimed_C=1.0)
        checks.append(
            _check(
                "homogeneous_pair_unit_constant",
                bool(unit.holds_with_claimed),
                value=unit.empirical_C,
                bound=1.0,
                tolerance=1e-9,
                samples=unit.samples,
            )
        )
    c1, c2 = normalization_constants(space, part, phi, psi, sample_budget=2_000, seed=seed + 2)
    b1 = float(evaluate(phi, c0))
    b2 = float(evaluate(psi, c0))
    checks.append(
        _check(
            "normalized_average_first_factor",
            c1 <= b1 * (1.0 + 1e-9),
            value=c1,
            bound=b1,
            tolerance=1e-9,
        )
    )
    checks.append(
        _check(
            "normalized_average_second_factor",
            c2 <= b2 * (1.0 + 1e-9),
            value=c2,
            bound=b2,
            tolerance=1e-9,
        )
    )
    checks.append(
        _check(
            "sum_constant_dominates_search",
            report.empirical_C <= (c1 + c2) * (1.0 + 1e-9),
            value=report.empirical_C,
            bound=c1 + c2,
            tolerance=1e-9,
        )
    )
    return checks


def _sandwich_checks(mat: Materialized, op: WeightedConditionalExpectation, seed: int) -> list[dict]:
    C = _claimed_constant(op)
    upper = norm_upper_bound(op, mat.phi, mat.psi, C)
    lower, _ = norm_estimate(op, mat.phi, budget=300, seed=seed)
    sup = mean_multiplier_sup(op)
    return [
        _check(
            "norm_sandwich",
            lower <= upper * (1.0 + 1e-6),
            value=lower,
            bound=upper,
            tolerance=1e-6,
            lower_str=_norm_str(lower),
            upper_str=_norm_str(upper),
            constant=C,
        ),
        _check(
            "block_mean_attained",
            sup <= lower * (1.0 + 1e-9),
            value=sup,
            bound=lower,
            tolerance=1e-9,
        ),
    ]


def _suite_boundedness(mat: Materialized) -> list[dict]:
    seed = mat.scenario.seed + 19
    checks = _sandwich_checks(mat, mat.representative(), seed)
    if mat.is_family:
        law = mat.scenario.u["name"]
        flags = {
            "gcthi": True,
            "delta_prime": young_mod.check_delta_prime(mat.phi) is not None,
        }
        verdict = boundedness_classifier(
            mat.family, mat.phi, mat.psi, _claimed_constant(mat.family.member(mat.family.sizes[0])), flags
        )
        expected_bounded = _LAW_VERDICTS[law][0]
        checks.append(
            _check(
                "trend_verdict_bounded",
                verdict["bounded"] == expected_bounded,
                expected=expected_bounded,
                verdict=verdict["bounded"],
                level_sups=verdict["level_sups"],
                flags=verdict["flags"],
            )
        )
    return checks


def _suite_compactness(mat: Materialized) -> list[dict]:
    phi, psi = mat.phi, mat.psi
    op = mat.representative()
    levels = multiplier_levels(op, psi)
    positive = levels[levels > 0]
    checks = []
    if positive.size:
        grid = np.geomspace(0.5 * float(np.min(positive)), 1.5 * float(np.max(positive)), 12)
        counts = [level_set(op, psi, float(e)).count for e in grid]
        monotone = all(b <= a for a, b in zip(counts, counts[1:]))
        checks.append(_check("level_count_monotone", monotone, counts=counts))
        tiny = 0.5 * float(np.min(positive))
        full = truncate(op, psi, tiny)
        same = float(np.max(np.abs(full.matrix - op.matrix)))
        checks.append(
            _check("truncation_below_min_level_is_identity", same <= 1e-14, value=same, tolerance=1e-14)
        )
        big = 1.5 * float(np.max(positive))
        zero = truncate(op, psi, big)
        z = float(np.max(np.abs(zero.matrix)))
        checks.append(
            _check("truncation_above_max_level_is_zero", z <= 1e-14, value=z, tolerance=1e-14)
        )
    if mat.is_family:
        law = mat.scenario.u["name"]
        flags = {"gcthi": True, "delta_prime": young_mod.check_delta_prime(phi) is not None}
        verdict = boundedness_classifier(
            mat.family, phi, psi, _claimed_constant(mat.family.member(mat.family.sizes[0])), flags
        )
        expected_compact = _LAW_VERDICTS[law][1]
        checks.append(
            _check(
                "trend_verdict_compact",
                verdict["compact"] == expected_compact,
                expected=expected_compact,
                verdict=verdict["compact"],
                level_counts=verdict["level_counts"],
                eps_grid=verdict["eps_grid"],
            )
        )
    return checks


def _suite_spectrum(mat: Materialized) -> list[dict]:
    op = mat.representative()
    rep = spectrum(op)
    scale = float(np.max(np.abs(rep.predicted))) if rep.predicted.size else 0.0
    tol = 1e-8 * (1.0 + scale)
    return [
        _check(
            "predicted_matches_oracle",
            rep.max_match_distance <= tol,
            value=rep.max_match_distance,
            tolerance=tol,
            predicted=[float(v) for v in rep.predicted],
        )
    ]


def _suite_resolvent(mat: Materialized) -> list[dict]:
    op = mat.representative()
    rng = np.random.default_rng(mat.scenario.seed + 23)
    eu = np.unique(
        np.concatenate([np.atleast_1d(op.apply(np.ones(op.n_atoms))), [0.0]])
    )
    span = float(np.max(np.abs(eu))) + 2.0
    worst = 0.0
    ok = True
    for _ in range(20):
        f = signed_log_uniform(rng, op.n_atoms)
        lam = None
        for _ in range(100):
            cand = rng.uniform(-span, span)
            if np.min(np.abs(eu - cand)) >= 0.5:
                lam = cand
                break
        if lam is None:
            lam = float(np.max(eu)) + 1.5
        rep = resolvent_check(op, lam, f)
        worst = max(worst, rep["residual_left"], rep["residual_right"])
        ok = ok and rep["holds"]
    return [
        _check("inversion_residuals", ok, value=worst, tolerance=1e-9, cases=20, margin=0.5)
    ]


def _suite_essential_norm(mat: Materialized) -> list[dict]:
    phi, psi = mat.phi, mat.psi
    seed = mat.scenario.seed + 29
    if mat.is_family:
        C = _claimed_constant(mat.family.member(mat.family.sizes[0]))
        report = essential_norm_bound(mat.family, phi, psi, C, budget=150, seed=seed)
        betas = report["betas"]
        law = mat.scenario.u["name"]
        checks = [
            _check(
                "gap_within_scaled_threshold",
                report["all_gaps_hold"],
                betas=betas,
                members=report["members"],
            )
        ]
        if law == "reciprocal":
            vanishing = report["trend_decreasing"] and betas[-1] <= 0.5 * betas[0]
            checks.append(_check("threshold_vanishes", vanishing, betas=betas))
        elif law == "flat":
            level = betas[0]
            stable = all(abs(b - level) <= 0.01 * max(level, 1e-300) for b in betas)
            checks.append(_check("threshold_stabilizes", stable, value=level, betas=betas))
        return checks
    op = mat.operator
    C = _claimed_constant(op)
    cutoff = max(1, op.partition.n_blocks // 4)
    levels = np.sort(multiplier_levels(op, psi))[::-1]
    beta = float(levels[cutoff]) if levels.size > cutoff else 0.0
    eps = beta + 0.05
    gap = truncation_gap_check(op, phi, psi, C, eps, budget=150, seed=seed)
    return [
        _check(
            "gap_within_scaled_threshold",
            gap["holds"],
            value=gap["gap_lower_bound"],
            bound=gap["bound"],
            tolerance=1e-6,
            beta=beta,
        )
    ]


_SUITES = {
    "young-calculus": _suite_young_calculus,
    "jensen": _suite_jensen,
    "contraction": _suite_contraction,
    "gcthi": _suite_gcthi,
    "boundedness": _suite_boundedness,
    "compactness-trend": _suite_compactness,
    "spectrum": _suite_spectrum,
    "resolvent": _suite_resolvent,
    "essential-norm": _suite_essential_norm,
}

SUITE_ORDER = (
    "young-calculus",
    "jensen",
    "contraction",
    "gcthi",
    "boundedness",
    "compactness-trend",
    "spectrum",
    "resolvent",
    "essential-norm",
)


def run_suite(name: str, mat: Materialized) -> dict:
    if name not in _SUITES:
        from .errors import ConfigError

        raise ConfigError(f"suite: unknown suite {name!r}; known: {', '.join(SUITE_ORDER)}")
    checks = _SUITES[name](mat)
    return {
        "suite": name,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }


def run_all_suites(mat: Materialized, names=None) -> dict:
    names = tuple(names) if names else SUITE_ORDER
    results = {name: run_suite(name, mat) for name in names}
    return {
        "scenario": mat.scenario.name,
        "suites": results,
        "passed": all(r["passed"] for r in results.values()),
    }
