"""Per-component influence scores from positional swaps of the baseline sequence.

Each component is moved to every other slot of the baseline disassembly
sequence. Every resulting sequence is scored for violated blocking relations
(``c_const``) and for worsened tool-change / travel-distance objectives
(``c_obj``); the combined score is their plain average.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .assembly import AssemblyBundle
from .metrics import DISTANCE_EPS, tool_changes, travel_distance


@dataclass(frozen=True)
class InfluenceTable:
    c_const: tuple[float, ...]
    c_obj: tuple[float, ...]
    s: tuple[float, ...]

    def kind(self, name: str) -> tuple[float, ...]:
        try:
            return {"const": self.c_const, "obj": self.c_obj, "combined": self.s}[name]
        except KeyError:
            raise ValueError(f"unknown score kind {name!r}") from None


def generate_swaps(sequence: Sequence[int], component: int) -> list[list[int]]:
    """All n-1 sequences with ``component`` reinserted at a different position."""
    seq = list(sequence)
    if len(seq) < 2:
        raise ValueError("sequence needs at least 2 components")
    if component not in seq:
        raise ValueError(f"component {component} is not in the sequence")
    origin = seq.index(component)
    rest = seq[:origin] + seq[origin + 1:]
    return [rest[:k] + [component] + rest[k:] for k in range(len(seq)) if k != origin]


def count_constraint_violations(sequence: Sequence[int], constraint) -> int:
    """Number of pairs (a, b) with ``constraint[a][b] != 0`` where b comes before a.

    A nonzero ``constraint[a][b]`` means a blocks b, so a has to be removed first.
    """
    X = np.asarray(constraint)
    pos = np.empty(len(sequence), dtype=np.int64)
    pos[list(sequence)] = np.arange(len(sequence))
    a, b = np.nonzero(X)
    return int(np.count_nonzero(pos[b] < pos[a]))


def count_objective_degradations(candidate: Sequence[int], baseline: Sequence[int], bundle: AssemblyBundle) -> int:
    worse_T = tool_changes(candidate, bundle) > tool_changes(baseline, bundle)
    worse_D = travel_distance(candidate, bundle) > travel_distance(baseline, bundle) + DISTANCE_EPS
    return int(worse_T) + int(worse_D)


class _SwapScorer:
    """Vectorized scoring of many reorderings of one bundle."""

    def __init__(self, bundle: AssemblyBundle):
        self.bundle = bundle
        self.block_a, self.block_b = np.nonzero(bundle.constraint)
        codes = {t: k for k, t in enumerate(sorted(set(bundle.tools)))}
        self.tool_code = np.array([codes[t] for t in bundle.tools])
        self.centers = bundle.centers
        base = list(bundle.baseline_sequence)
        self.base_T = tool_changes(base, bundle)
        self.base_D = travel_distance(base, bundle)

    def score(self, component: int) -> tuple[float, float]:
        swaps = np.array(generate_swaps(self.bundle.baseline_sequence, component))
        m, n = swaps.shape
        pos = np.empty_like(swaps)
        pos[np.arange(m)[:, None], swaps] = np.arange(n)
        violations = np.count_nonzero(pos[:, self.block_b] < pos[:, self.block_a], axis=1)

        tools = self.tool_code[swaps]
        T = np.count_nonzero(tools[:, 1:] != tools[:, :-1], axis=1)
        path = self.centers[swaps]
        D = np.linalg.norm(np.diff(path, axis=1), axis=2).sum(axis=1)
        degradations = (T > self.base_T).astype(np.int64) + (D > self.base_D + DISTANCE_EPS)

        # integer totals first so the mean is exact and order independent
        return int(violations.sum()) / m, int(degradations.sum()) / m


def influence_scores(bundle: AssemblyBundle, workers: int | None = None) -> InfluenceTable:
    if bundle.n < 2:
        raise ValueError("influence needs at least 2 components")
    scorer = _SwapScorer(bundle)
    rows = ordered_map(scorer.score, range(bundle.n), workers)
    c_const = tuple(r[0] for r in rows)
    c_obj = tuple(r[1] for r in rows)
    s = tuple((a + b) / 2 for a, b in rows)
    return InfluenceTable(c_const, c_obj, s)
