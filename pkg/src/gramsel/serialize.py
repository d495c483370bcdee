"""JSON serialization of matrices, instances, and generated networks.

Square matrices travel as ``{"n": int, "entries": [row-major reals]}``;
rectangular base-input matrices as ``{"rows": int, "cols": int, "entries":
[row-major reals]}``. An instance file is

    {"a": <square matrix>, "candidates": [[...], ...] | "standard_basis",
     "base": <rect matrix> | null, "epsilon": float}

optionally carrying extra blocks (generated networks add "adjacency",
"shift", "kind", "seed"), which loaders ignore. All writers sort keys and
use the shortest round-trip float representation, so identical data always
produces identical bytes.
"""

import json

import numpy as np

from .system import STANDARD_BASIS, LinearSystem


def square_matrix_to_json(a):
    a = np.asarray(a, dtype=float)
    return {"n": int(a.shape[0]), "entries": [float(x) for x in a.reshape(-1)]}


def square_matrix_from_json(obj, name="matrix"):
    n = int(obj["n"])
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.size != n * n:
        raise ValueError(
            f"{name}: expected {n * n} entries for n = {n}, got {entries.size}"
        )
    return entries.reshape(n, n)


def rect_matrix_to_json(a):
    a = np.asarray(a, dtype=float)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [float(x) for x in a.reshape(-1)],
    }


def rect_matrix_from_json(obj, name="matrix"):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.size != rows * cols:
        raise ValueError(
            f"{name}: expected {rows * cols} entries for {rows}x{cols}, "
            f"got {entries.size}"
        )
    return entries.reshape(rows, cols)


def system_to_json(system):
    return {
        "a": square_matrix_to_json(system.a),
        "candidates": [[float(x) for x in b] for b in system.candidates],
        "base": None if system.base is None else rect_matrix_to_json(system.base),
        "epsilon": float(system.epsilon),
    }


def system_from_json(obj):
    a = square_matrix_from_json(obj["a"], "a")
    candidates = obj.get("candidates", STANDARD_BASIS)
    if not isinstance(candidates, str):
        candidates = np.asarray(candidates, dtype=float)
    base = obj.get("base")
    if base is not None:
        base = rect_matrix_from_json(base, "base")
    return LinearSystem(
        a=a,
        candidates=candidates,
        base=base,
        epsilon=float(obj.get("epsilon", 0.0)),
    )


def network_to_json(network, epsilon=0.0):
    """Instance JSON for a generated network, plus its adjacency and shift."""
    system = network.to_system(epsilon=epsilon)
    out = system_to_json(system)
    out["adjacency"] = [[int(i), int(j)] for i, j in network.edges]
    out["shift"] = float(network.shift)
    out["kind"] = network.spec.kind
    out["n"] = int(network.spec.n)
    out["seed"] = int(network.spec.seed)
    return out


def dump_json(obj, path):
    """Write deterministic JSON: sorted keys, indent 2, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_instance(system, path):
    dump_json(system_to_json(system), path)


def load_instance(path):
    """Load a LinearSystem from an instance file (extra keys are ignored)."""
    return system_from_json(load_json(path))
