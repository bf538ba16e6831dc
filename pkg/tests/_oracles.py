"""Independent oracles and shared draw helpers for the test suite.

Everything in here is deliberately kept independent of the code paths it
checks: the moment inversion solves the bound equations by hand-derived
algebra, and the moment/joint samplers use only the model's permitted-cell
patterns.
"""

from __future__ import annotations

import numpy as np

from pocbounds import AssumptionSet, ObservedMoments

#: Published point bounds the fixture moments must reproduce.
TABLE_UB1 = 0.609
TABLE_UB3 = 0.163
TABLE_LB3 = 0.106


def invert_bounds_to_moments(ub1: float, ub3: float, lb3: float) -> tuple[float, float, float]:
    """Solve the three unclipped bound equations for (p1, q0, alpha).

    The equations, with r = p1 / alpha:

        ub1 = r / q0
        ub3 = (r + q0 - 1) / q0
        lb3 = (p1 + q0 - 1) / q0

    Subtracting the first two gives ub1 - ub3 = (1 - q0) / q0, hence

        q0    = 1 / (1 + ub1 - ub3)
        p1    = 1 - q0 * (1 - lb3)
        alpha = p1 / (q0 * ub1)

    Valid whenever the target values come from an interior (unclipped)
    configuration, which the checks below confirm by substitution.
    """
    q0 = 1.0 / (1.0 + ub1 - ub3)
    p1 = 1.0 - q0 * (1.0 - lb3)
    alpha = p1 / (q0 * ub1)
    assert abs((p1 / alpha) / q0 - ub1) < 1e-12
    assert abs((p1 / alpha + q0 - 1.0) / q0 - ub3) < 1e-12
    assert abs((p1 + q0 - 1.0) / q0 - lb3) < 1e-12
    return p1, q0, alpha


def derive_table_moments(
    p_s1_d1: float = 0.6068, p_d1: float = 0.5
) -> ObservedMoments:
    """Moment vector recovered from the published bound values.

    Only the trim ratio is identified by the inversion; the treated-arm
    selection level is set to a realistic default and the control-arm
    level follows from the ratio.
    """
    p1, q0, alpha = invert_bounds_to_moments(TABLE_UB1, TABLE_UB3, TABLE_LB3)
    return ObservedMoments(
        p_y1_s1d1=p1,
        p_y0_s1d0=q0,
        p_s1_d1=p_s1_d1,
        p_s1_d0=alpha * p_s1_d1,
        p_d1=p_d1,
    )


def draw_restricted_moments(rng: np.random.Generator) -> ObservedMoments:
    """One moment vector satisfying the selection and outcome restrictions.

    Draw ranges keep the trim ratio strictly below one and leave a margin
    above the outcome-restriction boundary so every assumption bundle has
    a nonempty feasible set.
    """
    p_s1_d1 = rng.uniform(0.2, 0.95)
    alpha = rng.uniform(0.3, 0.98)
    q0 = rng.uniform(0.15, 0.95)
    floor = (1.0 - q0) * alpha
    p1 = floor + rng.uniform(0.02, 0.98) * (1.0 - floor)
    return ObservedMoments(
        p_y1_s1d1=p1,
        p_y0_s1d0=q0,
        p_s1_d1=p_s1_d1,
        p_s1_d0=alpha * p_s1_d1,
        p_d1=rng.uniform(0.25, 0.75),
    )


def draw_any_moments(rng: np.random.Generator) -> ObservedMoments:
    """One moment vector with trim ratio at most one, otherwise unrestricted."""
    p_s1_d1 = rng.uniform(0.05, 1.0)
    alpha = rng.uniform(0.05, 1.0)
    return ObservedMoments(
        p_y1_s1d1=rng.uniform(0.0, 1.0),
        p_y0_s1d0=rng.uniform(0.01, 1.0),
        p_s1_d1=p_s1_d1,
        p_s1_d0=alpha * p_s1_d1,
        p_d1=rng.uniform(0.1, 0.9),
    )


ASSUMPTION_SETS = (AssumptionSet.A1_3, AssumptionSet.A1_4, AssumptionSet.A1_5)


def draw_gentle_moments(rng: np.random.Generator) -> ObservedMoments:
    """Moment vector whose six raw endpoints all sit 0.05 inside [0, 1].

    High selection rates and a large control failure rate keep every
    endpoint's sampling slope near one, so plug-in bounds estimated from
    a few thousand records have standard errors around 0.01.  Used by the
    stratified Monte Carlo fixtures, where the aggregate must track the
    known truth tightly.
    """
    from pocbounds import ASSUMPTION_ORDER, compute_bounds

    for _ in range(1000):
        q0 = rng.uniform(0.78, 0.92)
        alpha = rng.uniform(0.90, 0.97)
        p_s1_d1 = rng.uniform(0.85, 0.97)
        lo = 1.0 - 0.93 * alpha * q0
        hi = 0.93 * alpha * q0
        if lo >= hi:
            continue
        p1 = rng.uniform(lo, hi)
        m = ObservedMoments(
            p_y1_s1d1=p1, p_y0_s1d0=q0, p_s1_d1=p_s1_d1, p_s1_d0=alpha * p_s1_d1
        )
        raws = []
        for a in ASSUMPTION_ORDER:
            interval = compute_bounds(m, a)
            raws += [interval.lb_raw, interval.ub_raw]
        if all(0.05 <= r <= 0.95 for r in raws):
            return m
    raise RuntimeError("no feasible gentle moment draw")


def build_stratified_fixture(seed: int, n_strata: int = 10):
    """Equal-weight strata with known per-stratum truth.

    Each stratum's latent joint is an interior-point construction for a
    gentle moment vector, so its forward map (and hence its true interval)
    is known exactly.  Returns (joints, weights, truth) where truth maps
    each assumption set to the weighted aggregate (lb, ub).
    """
    from pocbounds import ASSUMPTION_ORDER, compute_bounds, observed_from_latent
    from pocbounds.latent import construct_interior_distribution

    rng = np.random.default_rng(seed)
    joints = {}
    for k in range(n_strata):
        m = draw_gentle_moments(rng)
        joints[f"c{k}"] = construct_interior_distribution(
            m, AssumptionSet.A1_5, rng.uniform(0.3, 0.7)
        )
    weights = {name: 1.0 / n_strata for name in joints}
    truth = {}
    for a in ASSUMPTION_ORDER:
        lb = sum(
            weights[k] * compute_bounds(observed_from_latent(joints[k]), a).lb
            for k in joints
        )
        ub = sum(
            weights[k] * compute_bounds(observed_from_latent(joints[k]), a).ub
            for k in joints
        )
        truth[a] = (lb, ub)
    return joints, weights, truth
