"""Random bundle documents for property and acceptance tests."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from disasm_advisor import load_bundle

FIXTURE = Path(__file__).parent / "fixtures" / "seven_part.json"
TOOLS = ("gripper", "screwdriver", "wrench", "suction")


def fixture_doc():
    return json.loads(FIXTURE.read_text())


def fixture_bundle():
    return load_bundle(FIXTURE.read_bytes())


def random_doc(rng: np.random.Generator, n: int, fastener_share=0.5, density=0.35, integer_centers=False):
    """A valid bundle document with roughly ``fastener_share`` fasteners.

    Every fastener is connected (and touching) one or two non-fastener hosts,
    so multi-fastened groups show up regularly.
    """
    n_fast = int(rng.integers(0, max(1, int(n * fastener_share)) + 1)) if n > 1 else 0
    n_fast = min(n_fast, n - 1)
    is_fast = [False] * (n - n_fast) + [True] * n_fast
    order = rng.permutation(n)
    is_fast = [is_fast[k] for k in order]
    suffixes = ("_screw", "_bolt", "_nut")
    labels = [
        f"m{k}{suffixes[k % 3]}" if f else f"part{k}"
        for k, f in enumerate(is_fast)
    ]
    tools = [TOOLS[int(rng.integers(0, len(TOOLS)))] for _ in range(n)]
    if integer_centers:
        centers = rng.integers(-200, 200, size=(n, 3)).astype(float).tolist()
    else:
        centers = np.round(rng.uniform(-500, 500, size=(n, 3)), 3).tolist()

    contact = np.triu((rng.random((n, n)) < density).astype(int), 1)
    contact = contact + contact.T
    constraint = (rng.random((n, n)) < density / 2).astype(int) * rng.integers(1, 4, size=(n, n))
    np.fill_diagonal(constraint, 0)

    hosts = [k for k in range(n) if not is_fast[k]]
    connections = set()
    for f in (k for k in range(n) if is_fast[k]):
        for h in rng.choice(hosts, size=min(len(hosts), int(rng.integers(1, 3))), replace=False):
            connections.add((int(min(f, h)), int(max(f, h))))
            contact[f, h] = contact[h, f] = 1

    return {
        "parts": [
            {"id": k, "label": labels[k], "center": centers[k], "tool": tools[k]}
            for k in range(n)
        ],
        "contact": contact.tolist(),
        "constraint": constraint.tolist(),
        "connections": [list(p) for p in sorted(connections)],
        "baseline_sequence": rng.permutation(n).tolist(),
    }


def random_bundle(rng, n, **kw):
    doc = random_doc(rng, n, **kw)
    return doc, load_bundle(json.dumps(doc))
