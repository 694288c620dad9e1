"""End-to-end recommendation, random-selection baseline and R_max sweep."""

from __future__ import annotations

import logging
import statistics
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from ._parallel import ordered_map
from .assembly import AssemblyBundle, HostGroup, group_by_host
from .influence import InfluenceTable, influence_scores
from .metrics import efficiency_deltas, stability_ratios
from .reduction import RemovalCandidate, delta_constraints, enumerate_candidates, isolation_check

log = logging.getLogger(__name__)

DEFAULT_R_MAX = 3
DEFAULT_SWEEP = (1, 2, 3, 4)
MAX_REDRAWS = 100


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: RemovalCandidate
    delta_E: int
    delta_T: int
    delta_D: float
    rho_J: float
    rho_A: float
    degenerate_J: bool
    degenerate_A: bool

    @property
    def sort_key(self):
        c = self.candidate
        return (-c.subset_influence, self.delta_E, c.host, c.removal_set)

    def to_record(self) -> dict:
        c = self.candidate
        return {
            "host": c.host,
            "removal_set": list(c.removal_set),
            "r": c.r,
            "subset_influence": c.subset_influence,
            "delta_E": self.delta_E,
            "delta_T": self.delta_T,
            "delta_D_mm": self.delta_D,
            "rho_J": self.rho_J,
            "rho_A": self.rho_A,
            "degenerate_J": self.degenerate_J,
            "degenerate_A": self.degenerate_A,
        }


def score_removal(bundle: AssemblyBundle, group: HostGroup, removed: Sequence[int]) -> tuple:
    """(delta_E, delta_T, delta_D, StabilityRatios) for removing ``removed`` from ``group``."""
    eff = efficiency_deltas(bundle, removed)
    return delta_constraints(bundle, removed), eff.delta_T, eff.delta_D, stability_ratios(group, removed, bundle)


def score_candidates(bundle: AssemblyBundle, candidates: list[RemovalCandidate],
                     groups: list[HostGroup]) -> list[ScoredCandidate]:
    by_host = {g.host: g for g in groups}
    out = []
    for c in candidates:
        dE, dT, dD, ratios = score_removal(bundle, by_host[c.host], c.removal_set)
        out.append(ScoredCandidate(c, dE, dT, dD, ratios.rho_J, ratios.rho_A,
                                   ratios.degenerate_J, ratios.degenerate_A))
    out.sort(key=lambda sc: sc.sort_key)
    return out


def recommend(
    bundle: AssemblyBundle,
    r_max: int = DEFAULT_R_MAX,
    influence: InfluenceTable | None = None,
    workers: int | None = None,
) -> list[ScoredCandidate]:
    """Ranked fastener-reduction candidates, highest subset influence first.

    Ties fall back to the larger constraint reduction, then host id, then the
    removal set itself, so the order is total.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    groups = group_by_host(bundle)
    if not groups:
        return []
    if influence is None:
        influence = influence_scores(bundle, workers)
    candidates = enumerate_candidates(bundle, influence, r_max, groups)
    return score_candidates(bundle, candidates, groups)


@dataclass(frozen=True)
class BaselineStats:
    r: int
    trials: int
    seed: int
    used_trials: int
    skipped_groups: int
    delta_E_mean: float
    delta_E_std: float
    delta_T_mean: float
    delta_T_std: float
    delta_D_mean: float
    delta_D_std: float
    rho_J_mean: float
    rho_A_mean: float

    def to_record(self) -> dict:
        return asdict(self)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _run_trial(bundle: AssemblyBundle, groups: list[HostGroup], r: int, seed: int, trial: int):
    rng = trial_rng(seed, trial)
    rows = []
    skipped = 0
    for group in groups:
        k = min(r, len(group.fasteners))
        for _ in range(MAX_REDRAWS):
            picks = rng.choice(len(group.fasteners), size=k, replace=False)
            removed = sorted(group.fasteners[int(i)] for i in picks)
            if not isolation_check(bundle, removed):
                break
        else:
            log.info("trial %d: host %d skipped after %d isolating draws", trial, group.host, MAX_REDRAWS)
            skipped += 1
            continue
        dE, dT, dD, ratios = score_removal(bundle, group, removed)
        rows.append((dE, dT, dD, ratios.rho_J, ratios.rho_A))
    if not rows:
        return None, skipped
    # one value per trial: the average over the groups drawn in it
    return tuple(statistics.fmean(col) for col in zip(*rows)), skipped


def random_baseline(
    bundle: AssemblyBundle,
    r: int = DEFAULT_R_MAX,
    trials: int = 20,
    seed: int = 42,
    workers: int | None = None,
) -> BaselineStats:
    """Uniform random removal of ``min(r, |group|)`` fasteners per host group.

    Trial ``t`` draws from its own generator seeded with ``(seed, t)``, so
    results do not depend on how trials are scheduled.
    """
    if r < 1 or trials < 1:
        raise ValueError("r and trials must be >= 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    groups = group_by_host(bundle)
    if not any(len(g.fasteners) >= r for g in groups):
        raise ValueError(f"no host group has at least {r} fasteners")

    results = ordered_map(lambda t: _run_trial(bundle, groups, r, seed, t), range(trials), workers)
    values = [v for v, _ in results if v is not None]
    if not values:
        raise ValueError("every random draw isolated a part; no admissible trial")
    dE, dT, dD, rJ, rA = (list(col) for col in zip(*values))
    return BaselineStats(
        r=r, trials=trials, seed=seed,
        used_trials=len(values),
        skipped_groups=sum(s for _, s in results),
        delta_E_mean=statistics.fmean(dE), delta_E_std=statistics.pstdev(dE),
        delta_T_mean=statistics.fmean(dT), delta_T_std=statistics.pstdev(dT),
        delta_D_mean=statistics.fmean(dD), delta_D_std=statistics.pstdev(dD),
        rho_J_mean=statistics.fmean(rJ), rho_A_mean=statistics.fmean(rA),
    )


@dataclass(frozen=True)
class SensitivityPoint:
    r_max: int
    max_abs_dE: int
    max_abs_dT: int
    max_abs_dD: float


def sensitivity_sweep(
    bundle: AssemblyBundle,
    r_values: Sequence[int] = DEFAULT_SWEEP,
    workers: int | None = None,
) -> list[SensitivityPoint]:
    """Largest achievable reductions (as magnitudes) for each removal limit."""
    r_values = list(r_values)
    if not r_values or any(r < 1 for r in r_values):
        raise ValueError("r_values must be non-empty positive integers")
    if any(b <= a for a, b in zip(r_values, r_values[1:])):
        raise ValueError("r_values must be strictly ascending")
    influence = influence_scores(bundle, workers) if group_by_host(bundle) else None
    curve = []
    for r_max in r_values:
        ranked = recommend(bundle, r_max, influence=influence)
        curve.append(SensitivityPoint(
            r_max=r_max,
            max_abs_dE=max((abs(c.delta_E) for c in ranked), default=0),
            max_abs_dT=max((abs(c.delta_T) for c in ranked), default=0),
            max_abs_dD=max((abs(c.delta_D) for c in ranked), default=0.0),
        ))
    return curve
