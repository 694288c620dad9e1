"""Brute-force reference implementations used only by the tests.

Everything here works on plain bundle documents (dicts of lists) with
straightforward loops, sharing no code with the package under test.
"""

from __future__ import annotations

import math

FASTENER_TOKENS = ("_screw", "_bolt", "_nut")


def is_fastener(label):
    return any(t in label for t in FASTENER_TOKENS)


def induced_edge_count(constraint, removed):
    n = len(constraint)
    kept = [i for i in range(n) if i not in removed]
    count = 0
    for a in range(len(kept)):
        for b in range(a + 1, len(kept)):
            i, j = kept[a], kept[b]
            if constraint[i][j] != 0 or constraint[j][i] != 0:
                count += 1
    return count


def violations(seq, constraint):
    count = 0
    for later in range(len(seq)):
        for earlier in range(later):
            # seq[earlier] is removed before seq[later]; bad if seq[later] blocks seq[earlier]
            if constraint[seq[later]][seq[earlier]] != 0:
                count += 1
    return count


def tool_count(seq, tools):
    return sum(1 for k in range(len(seq) - 1) if tools[seq[k]] != tools[seq[k + 1]])


def path_length(seq, centers):
    return sum(math.dist(centers[seq[k]], centers[seq[k + 1]]) for k in range(len(seq) - 1))


def doc_arrays(doc):
    parts = sorted(doc["parts"], key=lambda p: p["id"])
    return (
        [p["label"] for p in parts],
        [p["tool"] for p in parts],
        [tuple(float(c) for c in p["center"]) for p in parts],
    )


def influence(doc):
    """Exhaustive swap enumeration; returns (c_const, c_obj, s) lists."""
    _, tools, centers = doc_arrays(doc)
    S = list(doc["baseline_sequence"])
    n = len(S)
    T0, D0 = tool_count(S, tools), path_length(S, centers)
    c_const, c_obj = [], []
    for i in range(n):
        tot_v = tot_o = 0
        seen = []
        for target in range(n):
            Sk = list(S)
            Sk.remove(i)
            Sk.insert(target, i)
            if Sk == S:
                continue
            seen.append(Sk)
            tot_v += violations(Sk, doc["constraint"])
            tot_o += (tool_count(Sk, tools) > T0) + (path_length(Sk, centers) > D0 + 1e-9)
        assert len(seen) == n - 1
        c_const.append(tot_v / (n - 1))
        c_obj.append(tot_o / (n - 1))
    s = [(a + b) / 2 for a, b in zip(c_const, c_obj)]
    return c_const, c_obj, s


def host_groups(doc):
    labels, _, _ = doc_arrays(doc)
    groups = {}
    for i, j in doc["connections"]:
        for h, f in ((i, j), (j, i)):
            if not is_fastener(labels[h]) and is_fastener(labels[f]):
                groups.setdefault(h, set()).add(f)
    return {h: sorted(fs) for h, fs in sorted(groups.items()) if len(fs) >= 2}


def isolated(doc, removed):
    n = len(doc["parts"])
    kept = [j for j in range(n) if j not in removed]
    return [j for j in kept if not any(doc["contact"][j][k] for k in kept if k != j)]


# --- geometry ---------------------------------------------------------------

def polar(points):
    if len(points) < 2:
        return 0.0
    m = [sum(p[d] for p in points) / len(points) for d in range(3)]
    return sum(sum((p[d] - m[d]) ** 2 for d in range(3)) for p in points) / len(points)


def _orient(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def gift_wrap(points, tol=0.0):
    """Jarvis march; collinear points on an edge are skipped (farthest is taken)."""
    pts = list({(float(x), float(y)) for x, y in points})
    if len(pts) < 3:
        return []
    start = min(pts)
    hull = [start]
    current = start
    while True:
        candidate = pts[0] if pts[0] != current else pts[1]
        for p in pts:
            if p == current:
                continue
            turn = _orient(current, candidate, p)
            if turn < -tol or (abs(turn) <= tol and math.dist(current, p) > math.dist(current, candidate)):
                candidate = p
        if candidate == start:
            break
        hull.append(candidate)
        current = candidate
        if len(hull) > len(pts):
            raise RuntimeError("gift wrap did not close")
    return hull if len(hull) >= 3 else []


def fan_area(hull):
    if len(hull) < 3:
        return 0.0
    o = hull[0]
    return abs(sum(_orient(o, hull[k], hull[k + 1]) for k in range(1, len(hull) - 1))) / 2.0


def hull_area(points):
    return fan_area(gift_wrap(points))


def plane_area(points3d):
    """Area on the best-fit plane via SVD (not the covariance eigen-solver)."""
    import numpy as np

    if len(points3d) < 3:
        return 0.0
    P = np.asarray(points3d, dtype=float)
    C = P - P.mean(axis=0)
    if not C.any():
        return 0.0
    _, sv, vt = np.linalg.svd(C, full_matrices=False)
    if sv[1] <= 1e-9 * sv[0]:
        return 0.0
    uv = C @ vt[:2].T
    return hull_area(uv.tolist())


def ratio(before, after):
    if before == 0.0:
        return 1.0, True
    if after == 0.0:
        return 0.0, False
    return after / before, False


# --- full pipeline ----------------------------------------------------------

def score(doc, group, removed):
    labels, tools, centers = doc_arrays(doc)
    n = len(labels)
    dE = induced_edge_count(doc["constraint"], set(removed)) - induced_edge_count(doc["constraint"], set())
    S = doc["baseline_sequence"]
    SR = [c for c in S if c not in removed]
    dT = tool_count(SR, tools) - tool_count(S, tools)
    dD = path_length(SR, centers) - path_length(S, centers)
    if abs(dD) <= 1e-9:
        dD = 0.0
    before = [centers[f] for f in group]
    after = [centers[f] for f in group if f not in removed]
    rJ, dJ = ratio(polar(before), polar(after))
    rA, dA = ratio(plane_area(before), plane_area(after))
    assert n > len(removed)
    return dE, dT, dD, rJ, rA, dJ, dA


def recommend(doc, r_max):
    """All per-group top-r prefixes, scored and ranked; list of dict rows."""
    _, _, s = influence(doc)
    rows, seen = [], set()
    for host, fasteners in host_groups(doc).items():
        ranked = sorted(fasteners, key=lambda f: (-s[f], f))
        for r in range(1, min(r_max, len(ranked)) + 1):
            R = tuple(sorted(ranked[:r]))
            if R in seen or isolated(doc, set(R)):
                continue
            seen.add(R)
            dE, dT, dD, rJ, rA, dJ, dA = score(doc, fasteners, set(R))
            rows.append(dict(host=host, removal_set=R, influence=math.fsum(s[f] for f in ranked[:r]),
                             dE=dE, dT=dT, dD=dD, rho_J=rJ, rho_A=rA, deg_J=dJ, deg_A=dA))
    rows.sort(key=lambda x: (-x["influence"], x["dE"], x["host"], x["removal_set"]))
    return rows


def pstats(xs):
    m = sum(xs) / len(xs)
    return m, math.sqrt(sum((x - m) ** 2 for x in xs) / len(xs))
