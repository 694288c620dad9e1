"""Fastener-removal simulation on the constraint graph and candidate enumeration."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .assembly import AssemblyBundle, HostGroup, group_by_host
from .influence import InfluenceTable


@dataclass(frozen=True)
class RemovalCandidate:
    host: int
    removal_set: tuple[int, ...]  # ascending ids
    subset_influence: float

    @property
    def r(self) -> int:
        return len(self.removal_set)


def constraint_indicator(constraint) -> np.ndarray:
    """Symmetric 0/1 matrix: 1 where either part blocks the other."""
    X = np.asarray(constraint)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"constraint matrix must be square, got shape {X.shape}")
    e = ((X != 0) | (X.T != 0)).astype(np.int64)
    np.fill_diagonal(e, 0)
    return e


def keep_mask(n: int, removed: Iterable[int]) -> np.ndarray:
    m = np.ones(n, dtype=np.int64)
    m[list(removed)] = 0
    return m


def count_constraints(e, mask) -> int:
    """Constraint pairs i < j whose endpoints both survive the keep-mask."""
    e = np.asarray(e)
    m = np.asarray(mask)
    if e.ndim != 2 or e.shape != (len(m), len(m)):
        raise ValueError(f"indicator shape {e.shape} does not match mask length {len(m)}")
    return int(np.triu(e * np.outer(m, m), k=1).sum())


def _check_ids(bundle: AssemblyBundle, ids: set[int]) -> None:
    bad = sorted(i for i in ids if not (isinstance(i, (int, np.integer)) and 0 <= i < bundle.n))
    if bad:
        raise ValueError(f"unknown part ids: {bad}")


def delta_constraints(bundle: AssemblyBundle, removed: Iterable[int]) -> int:
    removed = set(removed)
    _check_ids(bundle, removed)
    e = constraint_indicator(bundle.constraint)
    before = count_constraints(e, np.ones(bundle.n, dtype=np.int64))
    return count_constraints(e, keep_mask(bundle.n, removed)) - before


def isolation_check(bundle: AssemblyBundle, removed: Iterable[int]) -> list[int]:
    """Remaining parts left without any contact to another remaining part."""
    removed = set(removed)
    _check_ids(bundle, removed)
    if len(removed) >= bundle.n:
        raise ValueError("removal set covers every part")
    m = keep_mask(bundle.n, removed)
    touching = bundle.contact @ m
    return [j for j in range(bundle.n) if m[j] and touching[j] == 0]


def enumerate_candidates(
    bundle: AssemblyBundle,
    influence: InfluenceTable,
    r_max: int,
    groups: list[HostGroup] | None = None,
) -> list[RemovalCandidate]:
    """Top-r influence prefixes of each host group, isolation-safe and deduplicated.

    Within a group fasteners are ranked by descending combined score, ties by
    ascending id. When the same removal set arises from several hosts only the
    lowest host id is kept.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if groups is None:
        groups = group_by_host(bundle)
    s = influence.s
    seen: set[tuple[int, ...]] = set()
    out: list[RemovalCandidate] = []
    for group in groups:
        ranked = sorted(group.fasteners, key=lambda f: (-s[f], f))
        for r in range(1, min(r_max, len(ranked)) + 1):
            chosen = ranked[:r]
            key = tuple(sorted(chosen))
            if key in seen:
                continue
            if isolation_check(bundle, chosen):
                continue
            seen.add(key)
            out.append(RemovalCandidate(group.host, key, math.fsum(s[f] for f in chosen)))
    return out
