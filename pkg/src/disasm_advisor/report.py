"""Report writers: CSV/Markdown/JSON tables, heatmap score export and painted PLY meshes."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .assembly import AssemblyBundle, group_by_host
from .influence import InfluenceTable
from .pipeline import BaselineStats, ScoredCandidate, SensitivityPoint

SCORE_KINDS = ("const", "obj", "combined")

CANDIDATE_COLUMNS = [
    "rank", "host", "removal_set", "r", "subset_influence", "delta_E", "delta_T",
    "delta_D_mm", "rho_J", "rho_A", "degenerate_flags",
]
BASELINE_COLUMNS = [
    "strategy", "r", "trials", "seed", "delta_E_mean", "delta_E_std", "delta_T_mean",
    "delta_T_std", "delta_D_mean_mm", "delta_D_std_mm", "rho_J_mean", "rho_A_mean",
]
SENSITIVITY_COLUMNS = ["r_max", "max_abs_dE", "max_abs_dT", "max_abs_dD_mm"]

# light-to-dark ramp (yellow -> dark red); higher scores map darker
COLOR_STOPS = np.array([
    (255, 255, 204),
    (254, 217, 118),
    (253, 141, 60),
    (227, 26, 28),
    (128, 0, 38),
], dtype=float)
SCAFFOLD_RGBA = (200, 200, 200, 64)


def fmt(x: float) -> str:
    """Six significant digits, locale-free, without negative zero."""
    text = format(float(x), ".6g")
    return "0" if text == "-0" else text


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _flags(sc: ScoredCandidate) -> str:
    return ";".join(name for name, on in (("J", sc.degenerate_J), ("A", sc.degenerate_A)) if on)


def _set_text(ids: Sequence[int]) -> str:
    return ";".join(str(i) for i in ids)


def candidates_csv(ranked: Sequence[ScoredCandidate]) -> str:
    rows = []
    for rank, sc in enumerate(ranked, start=1):
        c = sc.candidate
        rows.append([
            rank, c.host, _set_text(c.removal_set), c.r, fmt(c.subset_influence), sc.delta_E,
            sc.delta_T, fmt(sc.delta_D), fmt(sc.rho_J), fmt(sc.rho_A), _flags(sc),
        ])
    return _csv_text(CANDIDATE_COLUMNS, rows)


def candidates_markdown(ranked: Sequence[ScoredCandidate], bundle: AssemblyBundle, r_max: int) -> str:
    lines = [
        f"# Fastener-reduction candidates (R_max = {r_max})",
        "",
        "| Rank | Host | Removed fasteners | Influence | ΔE | ΔT | ΔD [mm] | ρ_J | ρ_A |",
        "|---:|---|---|---:|---:|---:|---:|---:|---:|",
    ]
    for rank, sc in enumerate(ranked, start=1):
        c = sc.candidate
        removed = ", ".join(f"{bundle.parts[f].label} ({f})" for f in c.removal_set)
        flag = lambda v, on: fmt(v) + ("*" if on else "")  # noqa: E731
        lines.append(
            f"| {rank} | {bundle.parts[c.host].label} ({c.host}) | {removed} | {fmt(c.subset_influence)} "
            f"| {sc.delta_E} | {sc.delta_T} | {fmt(sc.delta_D)} "
            f"| {flag(sc.rho_J, sc.degenerate_J)} | {flag(sc.rho_A, sc.degenerate_A)} |"
        )
    lines += ["", "`*` ratio fixed to 1 because the full fastener group has zero spread or area.", ""]
    return "\n".join(lines)


def candidates_json(ranked: Sequence[ScoredCandidate]) -> str:
    records = [{"rank": k, **sc.to_record()} for k, sc in enumerate(ranked, start=1)]
    return json.dumps(records, indent=2) + "\n"


def influence_csv(bundle: AssemblyBundle, table: InfluenceTable) -> str:
    rows = [
        [p.id, p.label, p.tool, int(p.is_fastener), fmt(table.c_const[p.id]), fmt(table.c_obj[p.id]),
         fmt(table.s[p.id])]
        for p in bundle.parts
    ]
    return _csv_text(["id", "label", "tool", "is_fastener", "c_const", "c_obj", "s"], rows)


def baseline_csv(stats: BaselineStats, top: ScoredCandidate | None) -> str:
    rows = [[
        "random", stats.r, stats.trials, stats.seed,
        fmt(stats.delta_E_mean), fmt(stats.delta_E_std), fmt(stats.delta_T_mean), fmt(stats.delta_T_std),
        fmt(stats.delta_D_mean), fmt(stats.delta_D_std), fmt(stats.rho_J_mean), fmt(stats.rho_A_mean),
    ]]
    if top is not None:
        rows.append([
            "influence", stats.r, "", "", top.delta_E, 0, top.delta_T, 0,
            fmt(top.delta_D), 0, fmt(top.rho_J), fmt(top.rho_A),
        ])
    return _csv_text(BASELINE_COLUMNS, rows)


def sensitivity_csv(curve: Sequence[SensitivityPoint]) -> str:
    rows = [[p.r_max, p.max_abs_dE, p.max_abs_dT, fmt(p.max_abs_dD)] for p in curve]
    return _csv_text(SENSITIVITY_COLUMNS, rows)


@dataclass(frozen=True)
class HeatmapScores:
    score_kind: str
    values: dict[int, float]

    def to_json(self) -> str:
        doc = {"score_kind": self.score_kind, "values": {str(k): v for k, v in self.values.items()}}
        return json.dumps(doc, indent=2) + "\n"


def min_max_normalize(raw: Sequence[float]) -> list[float]:
    """Scale to [0, 1]; a constant vector maps to all zeros."""
    arr = np.asarray(raw, dtype=float)
    if arr.size == 0:
        return []
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return [0.0] * arr.size
    return [min(1.0, max(0.0, v)) for v in ((arr - lo) / (hi - lo)).tolist()]


def heatmap_scores(bundle: AssemblyBundle, table: InfluenceTable, kind: str,
                   fasteners_only: bool = False) -> HeatmapScores:
    """Normalize jointly over all parts, then optionally keep only grouped fasteners."""
    if kind not in SCORE_KINDS:
        raise ValueError(f"unknown score kind {kind!r}; expected one of {', '.join(SCORE_KINDS)}")
    normalized = min_max_normalize(table.kind(kind))
    ids = range(bundle.n)
    if fasteners_only:
        ids = sorted({f for g in group_by_host(bundle) for f in g.fasteners})
    return HeatmapScores(kind, {i: normalized[i] for i in ids})


def score_color(value: float) -> tuple[int, int, int]:
    t = min(1.0, max(0.0, value)) * (len(COLOR_STOPS) - 1)
    k = min(int(t), len(COLOR_STOPS) - 2)
    rgb = COLOR_STOPS[k] + (t - k) * (COLOR_STOPS[k + 1] - COLOR_STOPS[k])
    return tuple(int(round(c)) for c in rgb)  # type: ignore[return-value]


class MeshError(Exception):
    pass


def read_mesh(path: Path) -> tuple[np.ndarray, list[list[int]]]:
    """Read vertices and faces from a Wavefront OBJ or ASCII PLY file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MeshError(f"{path}: only ASCII meshes are supported") from exc
    suffix = Path(path).suffix.lower()
    try:
        if suffix == ".obj":
            return _parse_obj(text)
        if suffix == ".ply":
            return _parse_ply(text)
    except (ValueError, IndexError) as exc:
        raise MeshError(f"{path}: malformed mesh ({exc})") from exc
    raise MeshError(f"{path}: unsupported mesh format {suffix!r}")


def _parse_obj(text: str):
    verts, faces = [], []
    for line in text.splitlines():
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "v":
            verts.append([float(x) for x in tok[1:4]])
        elif tok[0] == "f":
            faces.append([int(t.split("/")[0]) - 1 for t in tok[1:]])
    return np.array(verts, dtype=float).reshape(-1, 3), faces


def _parse_ply(text: str):
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ply":
        raise ValueError("missing ply magic")
    n_vert = n_face = 0
    vert_props: list[str] = []
    current = None
    body = 0
    for k, line in enumerate(lines[1:], start=1):
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "format" and tok[1] != "ascii":
            raise ValueError("binary PLY is not supported")
        if tok[0] == "element":
            current = tok[1]
            if current == "vertex":
                n_vert = int(tok[2])
            elif current == "face":
                n_face = int(tok[2])
        elif tok[0] == "property" and current == "vertex":
            vert_props.append(tok[-1])
        elif tok[0] == "end_header":
            body = k + 1
            break
    xyz = [vert_props.index(a) for a in ("x", "y", "z")]
    rows = [ln.split() for ln in lines[body:] if ln.strip()]
    verts = np.array([[float(r[i]) for i in xyz] for r in rows[:n_vert]], dtype=float).reshape(-1, 3)
    faces = [[int(x) for x in r[1:1 + int(r[0])]] for r in rows[n_vert:n_vert + n_face]]
    if len(verts) != n_vert or len(faces) != n_face:
        raise ValueError("element counts do not match body")
    return verts, faces


def _coord(v: float) -> str:
    # nine significant digits round-trip the declared float32 property
    return "0" if v == 0 else format(float(v), ".9g")


def ply_text(vertices: np.ndarray, faces: Sequence[Sequence[int]], rgba: tuple[int, int, int, int]) -> str:
    out = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(vertices)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "property uchar alpha",
        f"element face {len(faces)}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    color = " ".join(str(c) for c in rgba)
    out += [f"{_coord(x)} {_coord(y)} {_coord(z)} {color}" for x, y, z in vertices]
    out += [" ".join([str(len(f))] + [str(i) for i in f]) for f in faces]
    return "\n".join(out) + "\n"


def paint_meshes(bundle: AssemblyBundle, heat: HeatmapScores, base_dir: Path, out_dir: Path) -> list[Path]:
    """Write one uniformly colored PLY per part that has a mesh.

    Parts outside ``heat.values`` (e.g. filtered by the fastener view) are
    written as a translucent grey scaffold.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for pid, rel in sorted(bundle.meshes.items()):
        path = Path(rel)
        if not path.is_absolute():
            path = base_dir / path
        verts, faces = read_mesh(path)
        if pid in heat.values:
            rgba = (*score_color(heat.values[pid]), 255)
        else:
            rgba = SCAFFOLD_RGBA
        target = out_dir / f"part_{pid}_{heat.score_kind}.ply"
        target.write_text(ply_text(verts, faces, rgba), encoding="utf-8")
        written.append(target)
    return written
