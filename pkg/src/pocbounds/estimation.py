"""Estimation of observed moments and stratified bounds from binary microdata.

A record carries a binary treatment ``d``, a binary selection indicator
``s``, an outcome ``y`` that is observed (0 or 1) only when ``s = 1`` and
missing otherwise, and an optional stratum label.  Every probability is
estimated by the corresponding sample proportion, so estimates are exact
rationals ``k / n`` in floating point.

Stratified estimation computes fully saturated within-stratum means (with
discrete strata and no further covariates this coincides with a
fixed-effects fit), bounds each stratum, and averages the endpoints with
the strata's sample shares.  Strata on which a conditioning cell is empty
are dropped with a reason and the remaining weights renormalized; silent
reweighting would hide the bias, so the drops are reported.

Estimation is read-only over an immutable dataset; per-stratum work is
independent and order-insensitive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import AssumptionSet, BoundsInterval, ObservedMoments, compute_bounds

#: Column layout of a count table: [y=1 among selected, y=0 among selected,
#: not selected], one row per treatment arm (row 0 = control, row 1 = treated).
COUNT_COLUMNS = ("s1_y1", "s1_y0", "s0")


@dataclass(frozen=True)
class MicroRecord:
    """One observation (d, s, y, stratum) under the censoring rule y = y* . s."""

    d: int
    s: int
    y: int | None
    stratum: str | None = None

    def __post_init__(self) -> None:
        if self.d not in (0, 1):
            raise ValueError(f"d must be 0 or 1, got {self.d!r}")
        if self.s not in (0, 1):
            raise ValueError(f"s must be 0 or 1, got {self.s!r}")
        if self.s == 0 and self.y is not None:
            raise ValueError("y must be missing when s = 0 (outcome is censored)")
        if self.s == 1 and self.y not in (0, 1):
            raise ValueError(f"y must be 0 or 1 when s = 1, got {self.y!r}")


@dataclass(frozen=True)
class Dataset:
    """Immutable sequence of records plus an index of stratum positions."""

    records: tuple[MicroRecord, ...]
    stratum_index: dict[str, tuple[int, ...]] = field(init=False)

    def __post_init__(self) -> None:
        if len(self.records) < 1:
            raise ValueError("dataset must contain at least one record")
        index: dict[str, list[int]] = {}
        for pos, rec in enumerate(self.records):
            if rec.stratum is not None:
                index.setdefault(rec.stratum, []).append(pos)
        object.__setattr__(
            self, "stratum_index", {k: tuple(v) for k, v in index.items()}
        )

    @property
    def n(self) -> int:
        return len(self.records)

    def has_complete_strata(self) -> bool:
        return all(rec.stratum is not None for rec in self.records)


def cell_counts(records) -> np.ndarray:
    """2x3 integer table of (arm x selection/outcome cell) counts."""
    counts = np.zeros((2, 3), dtype=np.int64)
    for rec in records:
        if rec.s == 0:
            counts[rec.d, 2] += 1
        elif rec.y == 1:
            counts[rec.d, 0] += 1
        else:
            counts[rec.d, 1] += 1
    return counts


def stratum_cell_counts(data: Dataset) -> dict[str, np.ndarray]:
    """Per-stratum count tables, keyed by stratum id."""
    return {
        name: cell_counts(data.records[i] for i in positions)
        for name, positions in data.stratum_index.items()
    }


def moments_from_counts(counts: np.ndarray) -> ObservedMoments:
    """Sample-proportion moments from a 2x3 count table.

    Raises ``ValueError`` naming the first empty conditioning cell.
    """
    n0 = int(counts[0].sum())
    n1 = int(counts[1].sum())
    if n1 == 0:
        raise ValueError("no treated units (D=1)")
    if n0 == 0:
        raise ValueError("no control units (D=0)")
    s1d1 = int(counts[1, 0] + counts[1, 1])
    s1d0 = int(counts[0, 0] + counts[0, 1])
    if s1d1 == 0:
        raise ValueError("no S=1 units with D=1")
    if s1d0 == 0:
        raise ValueError("no S=1 units with D=0")
    if counts[0, 1] == 0:
        raise ValueError("no Y=0 outcomes among S=1, D=0 units")
    return ObservedMoments(
        p_y1_s1d1=int(counts[1, 0]) / s1d1,
        p_y0_s1d0=int(counts[0, 1]) / s1d0,
        p_s1_d1=s1d1 / n1,
        p_s1_d0=s1d0 / n0,
        p_d1=n1 / (n0 + n1),
    )


def estimate_moments(data: Dataset) -> ObservedMoments:
    """Observed moments for the pooled sample."""
    return moments_from_counts(cell_counts(data.records))


@dataclass(frozen=True)
class StratumResult:
    moments: ObservedMoments
    bounds: BoundsInterval
    weight: float
    n: int


@dataclass(frozen=True)
class StratifiedBounds:
    """Per-stratum moments and bounds plus their weighted aggregate.

    ``aggregate`` holds the summary-measure interval: endpoint-wise
    weighted averages of the retained strata's bounds, with weights equal
    to each stratum's share of the retained records.  Its flags are the
    disjunction of the per-stratum flags.
    """

    per_stratum: dict[str, StratumResult]
    dropped: list[tuple[str, str]]
    aggregate: BoundsInterval


def stratified_from_counts(
    counts_by_stratum: dict[str, np.ndarray], a: AssumptionSet
) -> StratifiedBounds:
    """Stratified bounds from per-stratum count tables.

    Strata failing the moment preconditions are dropped with the error
    message as the reason; weights renormalize over what remains.
    """
    fitted: dict[str, tuple[ObservedMoments, BoundsInterval, int]] = {}
    dropped: list[tuple[str, str]] = []
    for name in sorted(counts_by_stratum):
        counts = counts_by_stratum[name]
        try:
            moments = moments_from_counts(counts)
        except ValueError as err:
            dropped.append((name, str(err)))
            continue
        fitted[name] = (moments, compute_bounds(moments, a), int(counts.sum()))

    if not fitted:
        raise ValueError("every stratum was dropped; no estimable stratum remains")

    total = sum(n for _, _, n in fitted.values())
    per_stratum = {
        name: StratumResult(moments=mom, bounds=b, weight=n / total, n=n)
        for name, (mom, b, n) in fitted.items()
    }

    lb = sum(r.weight * r.bounds.lb for r in per_stratum.values())
    ub = sum(r.weight * r.bounds.ub for r in per_stratum.values())
    aggregate = BoundsInterval(
        lb=lb,
        ub=ub,
        assumption_set=a,
        lb_clipped=any(r.bounds.lb_clipped for r in per_stratum.values()),
        ub_clipped=any(r.bounds.ub_clipped for r in per_stratum.values()),
        lb_raw=sum(r.weight * r.bounds.lb_raw for r in per_stratum.values()),
        ub_raw=sum(r.weight * r.bounds.ub_raw for r in per_stratum.values()),
        restriction_violated=any(r.bounds.restriction_violated for r in per_stratum.values()),
        crossed=lb > ub,
    )
    return StratifiedBounds(per_stratum=per_stratum, dropped=dropped, aggregate=aggregate)


def estimate_stratified(data: Dataset, a: AssumptionSet) -> StratifiedBounds:
    """Within-stratum moments, per-stratum bounds, and the aggregate interval."""
    if not data.has_complete_strata():
        raise ValueError("stratified estimation requires a stratum label on every record")
    return stratified_from_counts(stratum_cell_counts(data), a)
