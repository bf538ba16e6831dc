"""Random generators for latent joints and synthetic microdata.

Used by the test suite and the experiment scripts to exercise the bounds
against known data-generating processes.  Latent joints are drawn
uniformly (Dirichlet with unit concentration) over the cells a given
assumption set permits, with rejection sampling for the stochastic
dominance restriction.  Microdata are drawn i.i.d. from a latent joint
under the observability rule ``y = y_d`` when ``s_d = 1`` and missing
otherwise.
"""

from __future__ import annotations

import numpy as np

from .bounds import AssumptionSet
from .estimation import Dataset, MicroRecord
from .latent import CELL_ORDER, LatentJoint, cell_index, check_assumptions


def _permitted_cells(a: AssumptionSet) -> list[int]:
    permitted = []
    for idx, (y0, y1, s0, s1) in enumerate(CELL_ORDER):
        if (s0, s1) == (1, 0):
            continue
        if a is not AssumptionSet.A1_3 and (y0, y1) == (1, 0) and (s0, s1) != (0, 0):
            continue
        permitted.append(idx)
    return permitted


def draw_latent_joint(
    a: AssumptionSet,
    rng: np.random.Generator,
    p_d1: float | None = None,
    max_tries: int = 10_000,
) -> LatentJoint:
    """Draw one latent joint satisfying assumption set ``a``.

    Masses are Dirichlet(1, ..., 1) over the permitted cells, so the draw
    is uniform on the feasible face of the simplex; for ``A1_5`` draws are
    rejected until the dominance restriction holds.
    """
    permitted = _permitted_cells(a)
    share = float(rng.uniform(0.2, 0.8)) if p_d1 is None else p_d1
    for _ in range(max_tries):
        masses = rng.dirichlet(np.ones(len(permitted)))
        cells = [0.0] * 16
        for idx, mass in zip(permitted, masses):
            cells[idx] = float(mass)
        joint = LatentJoint(cells=tuple(cells), p_d1=share)
        if a is not AssumptionSet.A1_5:
            return joint
        if check_assumptions(joint).holds_a5:
            return joint
    raise RuntimeError(f"failed to draw an {a.value} joint in {max_tries} tries")


def sample_dataset(
    L: LatentJoint,
    n: int,
    rng: np.random.Generator,
    stratum: str | None = None,
) -> Dataset:
    """Draw ``n`` i.i.d. records (d, s, y) from a latent joint."""
    d, s, y = _sample_arrays(L, n, rng)
    records = _records_from_arrays(d, s, y, [stratum] * n if stratum is not None else None)
    return Dataset(records=records)


def sample_stratified_dataset(
    joints: dict[str, LatentJoint],
    weights: dict[str, float],
    n: int,
    rng: np.random.Generator,
) -> Dataset:
    """Draw records with stratum labels sampled from ``weights``.

    Each record's stratum is drawn first, then (d, s, y) from that
    stratum's latent joint.
    """
    names = sorted(joints)
    probs = np.array([weights[name] for name in names], dtype=float)
    probs = probs / probs.sum()
    counts = rng.multinomial(n, probs)
    records: list[MicroRecord] = []
    for name, count in zip(names, counts):
        if count == 0:
            continue
        d, s, y = _sample_arrays(joints[name], int(count), rng)
        records.extend(_records_from_arrays(d, s, y, [name] * int(count)))
    order = rng.permutation(len(records))
    return Dataset(records=tuple(records[i] for i in order))


def _sample_arrays(L: LatentJoint, n: int, rng: np.random.Generator):
    cells = L.as_array()
    idx = rng.choice(16, size=n, p=cells / cells.sum())
    y0 = idx >> 3 & 1
    y1 = idx >> 2 & 1
    s0 = idx >> 1 & 1
    s1 = idx & 1
    d = (rng.random(n) < L.p_d1).astype(int)
    s = np.where(d == 1, s1, s0)
    ystar = np.where(d == 1, y1, y0)
    y = np.where(s == 1, ystar, -1)
    return d, s, y


def _records_from_arrays(d, s, y, strata) -> tuple[MicroRecord, ...]:
    records = []
    for i in range(len(d)):
        records.append(
            MicroRecord(
                d=int(d[i]),
                s=int(s[i]),
                y=None if y[i] < 0 else int(y[i]),
                stratum=None if strata is None else strata[i],
            )
        )
    return tuple(records)
