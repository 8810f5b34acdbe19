"""File formats: edge lists, dense CSV matrices, time-series CSV, reports.

Edge list: UTF-8 text, one edge per line as ``<label_i>\\t<label_j>\\t<weight>``,
with a first header line ``#proximity`` or ``#distance`` (optionally followed
by ``directed``).  Pairs not listed default to 0 in proximity space and
``+inf`` in distance space.  Dense matrices are CSV with a label header row
and column, using the literal ``inf`` for missing distance edges.  Time
series are CSV with one column per vertex, header row carrying the labels.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .closure import ClosureReport
from .errors import ParseError, ValidationError
from .graphs import DistanceGraph, ProximityGraph

INF = float("inf")

_SPACES = ("proximity", "distance")


def _fmt(v, digits=12):
    if math.isinf(v):
        return "inf"
    return format(float(v), f".{digits}g")


def _parse_weight(tok, line):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"bad weight {tok!r}", line) from None
    if math.isnan(v):
        raise ParseError("NaN weight", line)
    return v


def space_of(graph) -> str:
    return "proximity" if isinstance(graph, ProximityGraph) else "distance"


def _graph_cls(space):
    if space not in _SPACES:
        raise ParseError(f"unknown space {space!r}")
    return ProximityGraph if space == "proximity" else DistanceGraph


# ---------------------------------------------------------------------------
# Edge list
# ---------------------------------------------------------------------------

def read_edgelist(path):
    """Read an edge-list file.  Returns the graph (space per its header)."""
    labels = []
    index = {}
    entries = {}
    space = None
    directed = False

    def vid(label):
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if space is None:
                    toks = line[1:].split()
                    if not toks or toks[0] not in _SPACES:
                        raise ParseError(
                            "header must be '#proximity' or '#distance'", ln)
                    space = toks[0]
                    directed = "directed" in toks[1:]
                continue
            if space is None:
                raise ParseError("missing '#proximity'/'#distance' header", ln)
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", ln)
            a, b, wtok = parts
            w = _parse_weight(wtok, ln)
            i, j = vid(a), vid(b)
            if space == "proximity" and not (0.0 <= w <= 1.0):
                raise ParseError(f"proximity weight {w!r} outside [0, 1]", ln)
            if space == "distance" and w < 0.0:
                raise ParseError(f"negative distance {w!r}", ln)
            if i == j:
                expected = 1.0 if space == "proximity" else 0.0
                if w != expected:
                    raise ParseError(
                        f"self edge of {a!r} must be {expected:g} in {space} space", ln)
                continue
            keys = [(i, j)] if directed else [(i, j), (j, i)]
            for key in keys:
                if key in entries and entries[key] != w:
                    raise ParseError(
                        f"conflicting weight for edge ({a!r}, {b!r})", ln)
                entries[key] = w
    if space is None:
        raise ParseError("empty edge-list file")
    n = len(labels)
    default = 0.0 if space == "proximity" else INF
    diag = 1.0 if space == "proximity" else 0.0
    w = np.full((n, n), default)
    np.fill_diagonal(w, diag)
    for (i, j), v in entries.items():
        w[i, j] = v
    return _graph_cls(space)(w, tuple(labels), directed)


def write_edgelist(graph, path, digits=12):
    space = space_of(graph)
    default = 0.0 if space == "proximity" else INF
    diag = 1.0 if space == "proximity" else 0.0
    w = graph.weights
    n = graph.n
    lines = ["#" + space + (" directed" if graph.directed else "")]
    # register every vertex up front so readers recover the label order
    for i in range(n):
        lines.append(f"{graph.labels[i]}\t{graph.labels[i]}\t{diag:g}")
    if graph.directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        if w[i, j] != default:
            lines.append(f"{graph.labels[i]}\t{graph.labels[j]}\t{_fmt(w[i, j], digits)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Dense CSV matrix
# ---------------------------------------------------------------------------

def read_matrix_csv(path, space):
    cls = _graph_cls(space)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty CSV file")
    header = rows[0]
    if len(header) < 2 or header[0] not in ("", "label"):
        raise ParseError("first CSV cell must be empty (label corner)", 1)
    labels = [h.strip() for h in header[1:]]
    n = len(labels)
    w = np.empty((n, n))
    if len(rows) - 1 != n:
        raise ParseError(f"expected {n} data rows, got {len(rows) - 1}")
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} cells, got {len(row)}", r)
        if row[0].strip() != labels[r - 2]:
            raise ParseError(
                f"row label {row[0]!r} does not match column label {labels[r - 2]!r}", r)
        for c, tok in enumerate(row[1:]):
            w[r - 2, c] = _parse_weight(tok.strip(), r)
    try:
        return cls(w, tuple(labels))
    except ValidationError:
        # asymmetric matrices are accepted as directed graphs
        return cls(w, tuple(labels), directed=True)


def write_matrix_csv(graph, path, digits=12):
    w = graph.weights
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([""] + list(graph.labels))
        for i, lab in enumerate(graph.labels):
            out.writerow([lab] + [_fmt(v, digits) for v in w[i]])


# ---------------------------------------------------------------------------
# Time series CSV
# ---------------------------------------------------------------------------

def read_timeseries_csv(path):
    """Read a time-series CSV.  Returns (observations x vertices array, labels)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ParseError("time-series file needs a header and at least one row")
    labels = [h.strip() for h in rows[0]]
    n = len(labels)
    data = np.empty((len(rows) - 1, n))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != n:
            raise ParseError(f"expected {n} columns, got {len(row)}", r)
        for c, tok in enumerate(row):
            data[r - 2, c] = _parse_weight(tok.strip(), r)
    return data, tuple(labels)


# ---------------------------------------------------------------------------
# Auto format dispatch
# ---------------------------------------------------------------------------

def sniff_format(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if first.startswith("#proximity") or first.startswith("#distance"):
        return "edgelist"
    return "csv"


def read_graph(path, fmt="auto", space=None):
    if fmt == "auto":
        fmt = sniff_format(path)
    if fmt == "edgelist":
        return read_edgelist(path)
    if fmt == "csv":
        if space is None:
            raise ParseError("CSV input needs an explicit space (proximity|distance)")
        return read_matrix_csv(path, space)
    raise ParseError(f"unknown format {fmt!r}")


def write_graph(graph, path, fmt="auto", digits=12):
    if fmt == "auto":
        fmt = "csv" if str(path).endswith(".csv") else "edgelist"
    if fmt == "edgelist":
        write_edgelist(graph, path, digits)
    elif fmt == "csv":
        write_matrix_csv(graph, path, digits)
    else:
        raise ParseError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Closure report JSON
# ---------------------------------------------------------------------------

def _matrix_to_json(w):
    return [["inf" if math.isinf(v) else float(v) for v in row] for row in w]


def _matrix_from_json(rows):
    return np.array([[INF if v == "inf" else float(v) for v in row] for row in rows])


def report_to_json(report: ClosureReport) -> dict:
    g = report.closed
    log = report.iterations_log
    return {
        "schema": 1,
        "method": report.method,
        "space": space_of(g),
        "kappa": report.kappa,
        "converged": report.converged,
        "distortion": report.distortion,
        "labels": list(g.labels),
        "directed": g.directed,
        "matrix": _matrix_to_json(g.weights),
        "iterations_log": (["inf" if math.isinf(v) else float(v) for v in log]
                           if log else None),
    }


def write_report_json(report: ClosureReport, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_json(report), fh, indent=1, allow_nan=False)
        fh.write("\n")


def read_report_json(path) -> ClosureReport:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != 1:
        raise ParseError(f"unsupported report schema {doc.get('schema')!r}")
    cls = _graph_cls(doc["space"])
    g = cls(_matrix_from_json(doc["matrix"]), tuple(doc["labels"]), doc["directed"])
    log = doc.get("iterations_log")
    if log is not None:
        log = tuple(INF if v == "inf" else float(v) for v in log)
    return ClosureReport(g, doc["kappa"], doc["converged"], doc["distortion"],
                         doc["method"], log)


# ---------------------------------------------------------------------------
# Diffusion hierarchy file
# ---------------------------------------------------------------------------

def write_hierarchy(trace, path):
    """One line per power: ``n<TAB>count<TAB>asymmetry<TAB>label:community ...``."""
    lines = []
    for k, part in enumerate(trace.partitions):
        pairs = " ".join(f"{lab}:{cid}" for lab, cid in part.items())
        lines.append(f"{k + 1}\t{trace.community_counts[k]}\t"
                     f"{_fmt(trace.asymmetry[k])}\t{pairs}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
