"""
Acceptance Suites
-----------------
Expected-versus-observed checks behind the repro command.

Expected values and accepted intervals come from REPRO_TOLERANCES; no
suite carries its own constants.

Suites:
- appendix_d: horizon bounds and searched thresholds on mdp_d
- appendix_e: sign change of S between n=1 and n=2 on mdp_e
- appendix_f: the two Hurwitz-bound branches on mdp_f
- example1: nonsingular N with an unstable projected operator on example1
- error_bounds: fixed-point errors against their bounds on every fixture
- richardson: convergence at the scaled Lyapunov step wherever S is Hurwitz
- moments: sampled i.i.d. moments and the exact uncapped system on mdp_d
- appendix_d_stochastic: clipped TD directional check on the homogeneous mdp_d
"""
import logging

import numpy as np
from celery import group
from django.conf import settings

from apps.analysis.services.bounds import bound_n2, bound_set, nth_bound
from apps.analysis.services.matrices import pbe_vector_b, td_matrix_s
from apps.analysis.services.solutions import error_bounds, fixed_point_theta_n
from apps.analysis.services.stability import safe_alpha, stability_report
from apps.dp.services.iterations import richardson, spectral_verdict_richardson
from apps.experiments.services.fixtures import load_fixture
from apps.experiments.services.manifest import AcceptanceCheck
from apps.linalg import kernels
from apps.td.services.moments import clipped_system, moment_check
from apps.td.services.sampling import rng_new
from apps.td.services.sweeps import SweepResult, homogeneous_model
from apps.td.tasks import run_td_seed
from apps.td.types import TdAlgorithm, TdRunConfig
from core.exceptions import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

SUITE_FIXTURES = {
    'appendix_d': 'mdp_d',
    'appendix_e': 'mdp_e',
    'appendix_f': 'mdp_f',
    'example1': 'example1',
    'error_bounds': ('mdp_d', 'mdp_e', 'mdp_f', 'example1'),
    'richardson': ('mdp_d', 'mdp_e', 'mdp_f', 'example1'),
    'moments': 'mdp_d',
    'appendix_d_stochastic': 'mdp_d',
}
DEFAULT_SUITES = ('appendix_d', 'appendix_e', 'appendix_f', 'example1', 'error_bounds', 'richardson', 'moments')


def suite_fixtures(suite):
    names = SUITE_FIXTURES[suite]
    return (names,) if isinstance(names, str) else tuple(names)


def tolerances(suite):
    return settings.REPRO_TOLERANCES[suite]


def exact_check(suite, name, tolerance, observed, detail=''):
    expected = tolerance['expected']
    return AcceptanceCheck(suite, name, expected, observed, observed == expected, detail)


def interval_check(suite, name, tolerance, observed, detail=''):
    low, high = tolerance['low'], tolerance['high']
    observed = float(observed)
    return AcceptanceCheck(
        suite,
        name,
        {'expected': tolerance['expected'], 'low': low, 'high': high},
        observed,
        low <= observed <= high,
        detail,
    )


def appendix_d_checks():
    suite = 'appendix_d'
    table = tolerances(suite)
    bounds = bound_set(load_fixture(SUITE_FIXTURES[suite]).model, n_max=table['n_max'])
    names = ('n1_upper', 'n2_upper', 'nth_upper', 'min_n_schur', 'min_n_contraction_weighted', 'min_n_hurwitz')
    detail = f"searched n ≤ {bounds.n_max}; ∞-norm contraction threshold {bounds.min_n_contraction_inf}"
    return [exact_check(suite, name, table[name], getattr(bounds, name), detail) for name in names]


def appendix_e_checks():
    suite = 'appendix_e'
    table = tolerances(suite)
    model = load_fixture(SUITE_FIXTURES[suite]).model
    verdicts = [td_matrix_s(model, n) for n in (1, 2)]

    checks = [
        interval_check(suite, f"s_n{verdict.n}", table[f"s_n{verdict.n}"], verdict.spectrum.max_real_part)
        for verdict in verdicts
    ]
    checks.append(exact_check(suite, 'hurwitz_bitmap', table['hurwitz_bitmap'], [bool(v.is_hurwitz) for v in verdicts]))
    return checks


def appendix_f_checks():
    suite = 'appendix_f'
    table = tolerances(suite)
    nth = nth_bound(load_fixture(SUITE_FIXTURES[suite]).model)
    detail = f"q1={nth.q1:.6g} q2={nth.q2:.6g} nth_upper={nth.nth_upper}"
    return [
        interval_check(suite, 'q1_ratio', table['q1_ratio'], nth.q1_ratio, detail),
        interval_check(suite, 'q2_ratio', table['q2_ratio'], nth.q2_ratio, detail),
        exact_check(suite, 'winner', table['winner'], nth.winner, detail),
    ]


def example1_checks():
    suite = 'example1'
    table = tolerances(suite)
    model = load_fixture(SUITE_FIXTURES[suite]).model
    report = stability_report(model, 1)
    radius = kernels.eig_general(model.gamma * model.pi_proj @ model.p_pi).spectral_radius

    det_minimum = table['det_n_abs_min']
    radius_minimum = table['gamma_pi_p_radius_min']
    return [
        AcceptanceCheck(
            suite,
            'det_n_abs',
            f"> {det_minimum:g}",
            abs(report.det_n),
            bool(report.n_is_nonsingular and abs(report.det_n) > det_minimum),
        ),
        AcceptanceCheck(
            suite,
            'gamma_pi_p_radius',
            f"> {radius_minimum:g}",
            float(radius),
            bool(radius > radius_minimum),
            f"ρ(A(1))={report.a_spectrum.spectral_radius:.6g} schur={report.a_is_schur}",
        ),
    ]


def initial_direction(num_features, seed=0):
    """
    θ₀ with ‖θ₀‖∞ = 1, drawn from a fixed seed so every horizon starts alike.
    """
    theta0 = rng_new(seed).normal(size=num_features)
    return theta0 / np.max(np.abs(theta0))


def appendix_d_stochastic_checks(seeds=None, iters=None, algorithm=TdAlgorithm.IID):
    """
    Median final ‖θ_K‖∞ per horizon on the reward-free fixture with the ratio cap.

    Every fixed point of the reward-free problem is the origin, so
    ‖θ_K‖∞ is the distance to the clipped and unclipped solutions alike.
    """
    suite = 'appendix_d_stochastic'
    table = tolerances(suite)
    fixture = load_fixture(SUITE_FIXTURES[suite])
    model = homogeneous_model(fixture.model) if table['homogeneous'] else fixture.model
    seeds = list(range(table['seeds'])) if seeds is None else list(seeds)
    iters = table['iters'] if iters is None else int(iters)
    if not seeds:
        raise PreconditionError("the stochastic suite needs at least one seed")

    theta0 = initial_direction(model.num_features)
    start_norm = float(np.max(np.abs(theta0)))
    checks = []

    for n in table['horizons']:
        config = TdRunConfig.from_settings(
            algorithm,
            n,
            step_a=table['step_a'],
            step_b=table['step_b'],
            clip=table['clip'],
            max_iters=iters,
            record_every=max(iters // 100, 1),
            theta0=theta0.tolist(),
        )
        summaries = group(
            run_td_seed.s(str(fixture.path), config.to_dict(), seed, homogeneous=table['homogeneous'])
            for seed in seeds
        )().get()
        result = SweepResult.from_summaries(summaries)
        system = clipped_system(model, n, clip=table['clip'])
        detail = (
            f"S̄({n}) max real part {system.spectrum.max_real_part:.4g}, "
            f"{int(result.diverged.sum())}/{len(seeds)} seeds hit the overflow guard"
        )

        if n in table['diverging']:
            threshold = table['divergence_factor'] * start_norm
            passed = result.median_final_norm > threshold
            expected = f"> {threshold:g}"
        else:
            threshold = table['convergence_factor'] * start_norm
            passed = result.median_final_norm < threshold
            expected = f"< {threshold:g}"

        checks.append(AcceptanceCheck(suite, f"median_norm_n{n}", expected, result.median_final_norm, bool(passed), detail))
        logger.info(f"{suite} n={n}: median ‖θ_K‖∞ {result.median_final_norm:.4g} ({'pass' if passed else 'FAIL'})")

    return checks


def error_bounds_checks():
    """
    Actual fixed-point errors against both bounds at the first ∞-norm contracting horizon.
    """
    suite = 'error_bounds'
    table = tolerances(suite)
    slack = table['slack']
    checks = []

    for name in suite_fixtures(suite):
        model = load_fixture(name).model
        n = bound_n2(model)
        try:
            bounds = error_bounds(model, n)
        except InvariantViolation as exc:
            checks.append(AcceptanceCheck(suite, f"{name}_bounds", 'no violation', str(exc), False))
            continue

        detail = f"n={n} γⁿ‖Π‖∞={bounds.gamma_n_pi_norm:.6g}"
        checks.append(AcceptanceCheck(
            suite,
            f"{name}_value_error",
            f"≤ {bounds.value_error_bound:.6g}",
            float(bounds.value_error),
            bool(bounds.value_error <= bounds.value_error_bound + slack),
            detail,
        ))
        checks.append(AcceptanceCheck(
            suite,
            f"{name}_projection_error",
            f"≤ {bounds.projection_error_bound:.6g}",
            float(bounds.projection_error),
            bool(bounds.projection_error <= bounds.projection_error_bound + slack),
            detail,
        ))

        later = error_bounds(model, n + table['decay_offset'])
        if bounds.approximation_error > table['min_approximation_error']:
            decays = later.projection_error_bound < bounds.projection_error_bound
        else:
            # V^π is representable and both bounds are zero
            decays = later.projection_error_bound <= bounds.projection_error_bound
        checks.append(AcceptanceCheck(
            suite,
            f"{name}_projection_decay",
            f"< {bounds.projection_error_bound:.6g}",
            float(later.projection_error_bound),
            bool(decays),
            f"bound at n={later.n} against n={n}",
        ))
    return checks


def richardson_checks():
    """
    Richardson at the scaled Lyapunov step on every fixture horizon with Hurwitz S.
    """
    suite = 'richardson'
    table = tolerances(suite)
    checks = []

    for name in suite_fixtures(suite):
        model = load_fixture(name).model
        hurwitz, failed = [], []
        for n in range(1, table['n_max'] + 1):
            verdict = td_matrix_s(model, n)
            if not verdict.is_hurwitz:
                continue
            hurwitz.append(n)
            alpha = safe_alpha(verdict.matrix)
            spectral = spectral_verdict_richardson(model, n, alpha)
            trace = richardson(model, n, alpha, theta0=np.ones(model.num_features))
            theta_star = fixed_point_theta_n(model, n)
            scale = max(1.0, kernels.norm_inf(theta_star))
            error = kernels.norm_inf(trace.final_params - theta_star)
            if not (spectral.converges and trace.converged and error <= table['tolerance'] * scale):
                failed.append(n)
                logger.warning(f"{suite} {name} n={n}: ρ(I − αN)={spectral.spectral_radius:.6g} error {error:.3g}")

        detail = f"Hurwitz horizons {hurwitz}" if hurwitz else f"no Hurwitz S for n ≤ {table['n_max']}"
        if failed:
            detail += f"; failing {failed}"
        checks.append(AcceptanceCheck(
            suite, f"{name}_hurwitz_pairs", len(hurwitz), len(hurwitz) - len(failed), not failed, detail,
        ))
    return checks


def moments_checks():
    """
    Sampled i.i.d. moments within a few standard errors, retried once with the next seed.
    """
    suite = 'moments'
    table = tolerances(suite)
    (name,) = suite_fixtures(suite)
    model = load_fixture(name).model
    n = table['n']

    for seed in table['seeds']:
        report = moment_check(model, n, table['samples'], rng_new(seed))
        if report.within(table['sigmas']):
            break
        logger.warning(f"{suite}: seed {seed} outside {table['sigmas']:g} standard errors")

    expected = f"≤ {table['sigmas']:g} SE"
    checks = [
        AcceptanceCheck(
            suite,
            label,
            expected,
            float(estimate.deviation),
            estimate.within(table['sigmas']),
            f"seed {seed}, {estimate.num_samples} rollouts, max SE {float(np.max(estimate.standard_error)):.3g}",
        )
        for label, estimate in (('first_moment', report.first), ('second_moment', report.second))
    ]

    unclipped = clipped_system(model, n)
    clipped = clipped_system(model, n, clip=table['clip'])
    gap = max(
        kernels.norm_inf(np.ravel(unclipped.matrix_s - td_matrix_s(model, n).matrix)),
        kernels.norm_inf(unclipped.vector_b - pbe_vector_b(model, n)),
    )
    checks.append(AcceptanceCheck(
        suite,
        'unclipped_system',
        f"≤ {table['system_atol']:g}",
        float(gap),
        bool(gap <= table['system_atol']),
        f"S̄({n}) with cap {table['clip']:g}: max real part {clipped.spectrum.max_real_part:.4g}",
    ))
    return checks


SUITES = {
    'appendix_d': appendix_d_checks,
    'appendix_e': appendix_e_checks,
    'appendix_f': appendix_f_checks,
    'example1': example1_checks,
    'error_bounds': error_bounds_checks,
    'richardson': richardson_checks,
    'moments': moments_checks,
}


def run_suite(name):
    """
    Raises:
        PreconditionError: unknown suite name
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise PreconditionError(f"unknown repro suite {name!r}; choose from {', '.join(SUITES)}")

    checks = suite()
    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.warning(f"Suite {name}: {len(failed)} of {len(checks)} checks failed ({', '.join(failed)})")
    else:
        logger.info(f"Suite {name}: all {len(checks)} checks passed")
    return checks
