"""On-disk formats: tab-separated edge lists, label/score/result CSVs,
JSON generator specs. Floats are written with repr so that write-read
round trips are lossless and reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .graph import DirectedGraph, build_graph
from .synth import BlockModelSpec, GmmSpec, GroundTruth


def fmt_value(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_edge_list(path, G: DirectedGraph):
    """One `src<TAB>dst` line per edge, ascending (src, dst)."""
    src, dst = G.edge_list()
    with open(path, "w") as fh:
        fh.write(f"# directed edge list, n={G.n}\n")
        for u, v in zip(src.tolist(), dst.tolist()):
            fh.write(f"{u}\t{v}\n")


def read_edge_list(path, n=None) -> DirectedGraph:
    """Parse a tab-separated edge list; `#` lines are comments.

    The vertex count is max index + 1 unless given explicitly; an `n=`
    hint in a comment header is honored.
    """
    src = []
    dst = []
    hint = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "n=" in line and hint is None:
                    try:
                        hint = int(line.split("n=")[1].split()[0])
                    except (ValueError, IndexError):
                        pass
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected src<TAB>dst, got {line!r}")
            try:
                src.append(int(parts[0]))
                dst.append(int(parts[1]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer vertex id in {line!r}") from None
    if n is None:
        n = hint if hint is not None else (max(max(src), max(dst)) + 1 if src else 0)
    return build_graph(n, (np.array(src, np.int64), np.array(dst, np.int64)))


def write_labels(path, gt: GroundTruth):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if gt.is_core is not None:
            writer.writerow(["vertex", "community", "is_core"])
            for v in range(gt.n):
                writer.writerow([v, int(gt.community[v]), int(gt.is_core[v])])
        else:
            writer.writerow(["vertex", "community"])
            for v in range(gt.n):
                writer.writerow([v, int(gt.community[v])])


def read_labels(path, n=None) -> GroundTruth:
    """Read `vertex,community[,is_core]` rows; every vertex 0..n-1 must appear."""
    rows = {}
    has_core = False
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty labels file")
        cols = [h.strip().lower() for h in header]
        if "vertex" not in cols or "community" not in cols:
            raise ValueError(f"{path}: labels need 'vertex' and 'community' columns")
        vi, ci = cols.index("vertex"), cols.index("community")
        ki = cols.index("is_core") if "is_core" in cols else None
        has_core = ki is not None
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                v = int(row[vi])
                c = int(row[ci])
                k = bool(int(row[ki])) if ki is not None else None
            except (ValueError, IndexError):
                raise ValueError(f"{path}:{lineno}: malformed label row {row!r}") from None
            rows[v] = (c, k)
    if n is None:
        n = max(rows) + 1 if rows else 0
    community = np.empty(n, dtype=np.int64)
    is_core = np.empty(n, dtype=bool) if has_core else None
    for v in range(n):
        if v not in rows:
            raise ValueError(f"{path}: missing label for vertex {v}")
        community[v] = rows[v][0]
        if has_core:
            is_core[v] = rows[v][1]
    return GroundTruth(community, is_core)


def write_points(path, points, header=False):
    pts = np.asarray(points, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"x{j}" for j in range(pts.shape[1])])
        for row in pts:
            writer.writerow([repr(float(x)) for x in row])


def read_points(path, has_header=False) -> np.ndarray:
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if has_header:
            next(reader, None)
        for lineno, row in enumerate(reader, 2 if has_header else 1):
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                bad = next(i for i, x in enumerate(row) if not _is_float(x))
                raise ValueError(
                    f"{path}:{lineno}: non-numeric cell {row[bad]!r} in column {bad}"
                ) from None
    return np.array(rows, dtype=float) if rows else np.empty((0, 0))


def _is_float(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def write_scores(path, scores, ranking):
    """`vertex,score,rank` rows; rank is the 0-based position in the ranking."""
    scores = np.asarray(scores, dtype=float)
    position = np.empty(len(ranking), dtype=np.int64)
    position[np.asarray(ranking)] = np.arange(len(ranking))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vertex", "score", "rank"])
        for v in range(scores.size):
            writer.writerow([v, repr(float(scores[v])), int(position[v])])


def read_scores(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = [(int(v), float(s), int(r)) for v, s, r in reader]
    rows.sort()
    scores = np.array([s for _, s, _ in rows])
    return scores


RESULT_COLUMNS = ["source", "method", "seed", "metric", "c", "value"]


def write_results(path, rows):
    """Result rows as CSV; callers pre-sort for deterministic output."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for r in rows:
            writer.writerow([fmt_value(x) for x in r])


def block_spec_to_dict(spec: BlockModelSpec):
    return {
        "block_sizes": [[int(c), bool(k), int(s)] for c, k, s in spec.block_sizes],
        "P": spec.P.tolist(),
        "k": int(spec.k),
        "seed": int(spec.seed),
    }


def block_spec_from_dict(data) -> BlockModelSpec:
    sizes = [(int(c), bool(k), int(s)) for c, k, s in data["block_sizes"]]
    return BlockModelSpec(sizes, np.array(data["P"], float), int(data["k"]), int(data.get("seed", 0)))


def gmm_spec_to_dict(spec: GmmSpec):
    return {
        "centers": spec.centers.tolist(),
        "core_sigma": spec.core_sigma.tolist(),
        "periphery_sigma": spec.periphery_sigma.tolist(),
        "core_count": spec.core_count.tolist(),
        "periphery_count": spec.periphery_count.tolist(),
        "seed": int(spec.seed),
    }


def gmm_spec_from_dict(data) -> GmmSpec:
    return GmmSpec(
        centers=np.array(data["centers"], float),
        core_sigma=np.array(data["core_sigma"], float),
        periphery_sigma=np.array(data["periphery_sigma"], float),
        core_count=np.array(data["core_count"], np.int64),
        periphery_count=np.array(data["periphery_count"], np.int64),
        seed=int(data.get("seed", 0)),
    )


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
