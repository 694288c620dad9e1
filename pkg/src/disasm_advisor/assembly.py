"""Product data model: parts, CCC-graph matrices, bundle I/O and fastener grouping."""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import IO, Any

import numpy as np

FASTENER_TOKENS = ("_screw", "_bolt", "_nut")


class BundleError(Exception):
    """Base class for bundle loading problems."""


class BundleParseError(BundleError):
    """The document is not well-formed JSON or has the wrong top-level shape."""


class BundleValidationError(BundleError):
    """The document parsed but violates one or more invariants.

    ``violations`` holds one ``"<field path>: <message>"`` string per problem.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Part:
    id: int
    label: str
    center: tuple[float, float, float]
    tool: str

    @property
    def is_fastener(self) -> bool:
        return is_fastener_label(self.label)


@dataclass(frozen=True, eq=False)
class AssemblyBundle:
    """Immutable product description.

    ``contact`` and ``constraint`` are read-only numpy arrays; ``connections``
    holds normalized ``(min, max)`` pairs.
    """

    parts: tuple[Part, ...]
    contact: np.ndarray
    constraint: np.ndarray
    connections: frozenset[tuple[int, int]]
    baseline_sequence: tuple[int, ...]
    meshes: dict[int, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def labels(self) -> list[str]:
        return [p.label for p in self.parts]

    @property
    def tools(self) -> list[str]:
        return [p.tool for p in self.parts]

    @property
    def centers(self) -> np.ndarray:
        return np.array([p.center for p in self.parts], dtype=float).reshape(-1, 3)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "parts": [
                {"id": p.id, "label": p.label, "center": list(p.center), "tool": p.tool}
                for p in self.parts
            ],
            "contact": self.contact.astype(int).tolist(),
            "constraint": self.constraint.astype(int).tolist(),
            "connections": [list(pair) for pair in sorted(self.connections)],
            "baseline_sequence": list(self.baseline_sequence),
        }
        if self.meshes:
            doc["meshes"] = {str(k): v for k, v in sorted(self.meshes.items())}
        return doc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AssemblyBundle):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]


def is_fastener_label(label: str) -> bool:
    return any(token in label for token in FASTENER_TOKENS)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _check_matrix(name: str, value: Any, n: int, errors: list[str]) -> np.ndarray | None:
    if not isinstance(value, list) or len(value) != n:
        got = len(value) if isinstance(value, list) else type(value).__name__
        errors.append(f"{name}: expected {n}x{n} matrix, got {got} rows")
        return None
    ok = True
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            errors.append(f"{name}[{i}]: expected {n} columns, got {got}")
            ok = False
            continue
        for j, x in enumerate(row):
            if not _is_int(x):
                errors.append(f"{name}[{i}][{j}]: expected integer, got {x!r}")
                ok = False
    if not ok:
        return None
    return np.array(value, dtype=np.int64).reshape(n, n)


def bundle_from_dict(doc: Any) -> AssemblyBundle:
    """Build and validate a bundle from an already-parsed document."""
    if not isinstance(doc, dict):
        raise BundleParseError("bundle document must be a JSON object")

    errors: list[str] = []
    for key in ("parts", "contact", "constraint", "connections", "baseline_sequence"):
        if key not in doc:
            errors.append(f"{key}: missing required key")
    if errors:
        raise BundleValidationError(errors)

    raw_parts = doc["parts"]
    if not isinstance(raw_parts, list):
        raise BundleValidationError(["parts: expected array"])
    n = len(raw_parts)
    if n == 0:
        errors.append("parts: at least one part is required")

    parts: list[Part | None] = [None] * n
    for k, rp in enumerate(raw_parts):
        path = f"parts[{k}]"
        if not isinstance(rp, dict):
            errors.append(f"{path}: expected object")
            continue
        pid, label, center, tool = (rp.get(key) for key in ("id", "label", "center", "tool"))
        bad = False
        if not _is_int(pid) or not 0 <= pid < n:
            errors.append(f"{path}.id: expected integer in 0..{n - 1}, got {pid!r}")
            bad = True
        elif parts[pid] is not None:
            errors.append(f"{path}.id: duplicate id {pid}")
            bad = True
        if not isinstance(label, str):
            errors.append(f"{path}.label: expected string")
            bad = True
        if not isinstance(tool, str) or not tool:
            errors.append(f"{path}.tool: expected non-empty string")
            bad = True
        if not isinstance(center, list) or len(center) != 3 or not all(_is_number(c) for c in center):
            errors.append(f"{path}.center: expected [x, y, z] numbers")
            bad = True
        elif not all(math.isfinite(c) for c in center):
            errors.append(f"{path}.center: components must be finite")
            bad = True
        if not bad:
            parts[pid] = Part(pid, label, (float(center[0]), float(center[1]), float(center[2])), tool)

    contact = _check_matrix("contact", doc["contact"], n, errors)
    if contact is not None:
        if not np.isin(contact, (0, 1)).all():
            errors.append("contact: entries must be 0 or 1")
        if not (contact == contact.T).all():
            errors.append("contact: matrix must be symmetric")
        if np.diag(contact).any():
            errors.append("contact: diagonal must be zero")

    constraint = _check_matrix("constraint", doc["constraint"], n, errors)
    if constraint is not None and np.diag(constraint).any():
        errors.append("constraint: diagonal must be zero")

    connections: set[tuple[int, int]] = set()
    raw_conn = doc["connections"]
    if not isinstance(raw_conn, list):
        errors.append("connections: expected array of [i, j] pairs")
    else:
        for k, pair in enumerate(raw_conn):
            path = f"connections[{k}]"
            if not isinstance(pair, list) or len(pair) != 2 or not all(_is_int(x) for x in pair):
                errors.append(f"{path}: expected [i, j] integer pair")
                continue
            i, j = pair
            if not (0 <= i < n and 0 <= j < n):
                errors.append(f"{path}: id out of range 0..{n - 1}")
            elif i == j:
                errors.append(f"{path}: self-connection on {i}")
            else:
                connections.add((min(i, j), max(i, j)))

    seq = doc["baseline_sequence"]
    if not isinstance(seq, list) or not all(_is_int(x) for x in seq):
        errors.append("baseline_sequence: expected array of integer ids")
    elif sorted(seq) != list(range(n)):
        errors.append(f"baseline_sequence: not a permutation of 0..{n - 1}")

    meshes: dict[int, str] = {}
    raw_meshes = doc.get("meshes", {})
    if not isinstance(raw_meshes, dict):
        errors.append("meshes: expected object mapping part id to path")
    else:
        for key, path in raw_meshes.items():
            try:
                pid = int(key)
            except (TypeError, ValueError):
                errors.append(f"meshes.{key}: key is not a part id")
                continue
            if not 0 <= pid < n:
                errors.append(f"meshes.{key}: id out of range 0..{n - 1}")
            elif not isinstance(path, str) or not path:
                errors.append(f"meshes.{key}: expected non-empty path string")
            else:
                meshes[pid] = path

    if errors:
        raise BundleValidationError(errors)

    return AssemblyBundle(
        parts=tuple(parts),  # type: ignore[arg-type]
        contact=_frozen(contact),
        constraint=_frozen(constraint),
        connections=frozenset(connections),
        baseline_sequence=tuple(seq),
        meshes=meshes,
    )


def load_bundle(source: IO[bytes] | IO[str] | bytes | str) -> AssemblyBundle:
    """Parse and validate a bundle document from a stream or raw bytes/text."""
    raw = source.read() if hasattr(source, "read") else source
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BundleParseError(f"bundle is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BundleParseError(f"malformed bundle document: {exc}") from exc
    return bundle_from_dict(doc)


def dump_bundle(bundle: AssemblyBundle) -> str:
    return json.dumps(bundle.to_dict(), indent=2)


def identify_fasteners(bundle: AssemblyBundle) -> set[int]:
    return {p.id for p in bundle.parts if p.is_fastener}


@dataclass(frozen=True)
class HostGroup:
    host: int
    fasteners: tuple[int, ...]


def group_by_host(bundle: AssemblyBundle) -> list[HostGroup]:
    """Group fasteners by the non-fastener parts they connect to.

    A fastener connected to several hosts is listed under each of them.
    Only groups with two or more fasteners are returned, ordered by host id.
    """
    fasteners = identify_fasteners(bundle)
    attached: dict[int, set[int]] = {}
    for i, j in bundle.connections:
        for host, other in ((i, j), (j, i)):
            if host not in fasteners and other in fasteners:
                attached.setdefault(host, set()).add(other)
    return [
        HostGroup(host, tuple(sorted(members)))
        for host, members in sorted(attached.items())
        if len(members) >= 2
    ]


def subsequence_excluding(sequence: Sequence[int], removed: Iterable[int]) -> list[int]:
    removed = set(removed)
    unknown = removed.difference(sequence)
    if unknown:
        raise ValueError(f"ids not in sequence: {sorted(unknown)}")
    return [c for c in sequence if c not in removed]
