"""File formats: spaces, graphs, relations, witnesses, sweep CSV.

All emitted floats are normalized to 12 significant digits before
encoding, so writing, reloading, and writing again is byte-stable.
Field names are part of the interface and fixed.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .bounds import BoundRecord
from .correspondences import Correspondence, PLCorrespondence
from .errors import InputError
from .models import MetricGraph
from .nonlinearity import LipschitzWitness
from .segment_circle import CertificateResult, RegimeReport
from .spaces import FiniteMetricSpace, validate_metric

SWEEP_HEADER = ["lambda", "formula", "lower", "upper", "regime", "slack"]


def round12(x: float) -> float:
    """Nearest float to the 12-significant-digit decimal rendering of x."""
    return float(f"{float(x):.12g}")


def fmt12(x: float) -> str:
    return f"{round12(x):.12g}"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2) + "\n"


# -- spaces -------------------------------------------------------------

def space_to_json(space: FiniteMetricSpace) -> str:
    return _dump({
        "labels": list(space.labels),
        "dist": [[round12(v) for v in row] for row in space.dist],
    })


def space_from_json(text: str, tol: float = 1e-9) -> FiniteMetricSpace:
    try:
        doc = json.loads(text)
        labels = doc["labels"]
        matrix = doc["dist"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"space file must hold labels and dist: {exc}") from exc
    return validate_metric(np.asarray(matrix, dtype=float), labels, tol)


def space_to_csv(space: FiniteMetricSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(space.labels)
    for row in space.dist:
        writer.writerow([fmt12(v) for v in row])
    return buf.getvalue()


def space_from_csv(text: str, tol: float = 1e-9) -> FiniteMetricSpace:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InputError("empty CSV space file")
    labels = rows[0]
    try:
        matrix = [[float(v) for v in row] for row in rows[1:]]
    except ValueError as exc:
        raise InputError(f"non-numeric distance entry: {exc}") from exc
    if len(matrix) != len(labels):
        raise InputError(
            f"CSV has {len(labels)} labels but {len(matrix)} matrix rows"
        )
    return validate_metric(np.asarray(matrix, dtype=float), labels, tol)


def load_space(path, tol: float = 1e-9) -> FiniteMetricSpace:
    """Load a space file, dispatching on the .csv extension."""
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    text = p.read_text()
    if p.suffix.lower() == ".csv":
        return space_from_csv(text, tol)
    return space_from_json(text, tol)


# -- graphs -------------------------------------------------------------

def graph_to_json(graph: MetricGraph) -> str:
    return _dump({
        "vertices": graph.n_vertices,
        "edges": [[u, v, round12(w)] for u, v, w in graph.edges],
    })


def graph_from_json(text: str) -> MetricGraph:
    try:
        doc = json.loads(text)
        edges = [(int(u), int(v), float(w)) for u, v, w in doc["edges"]]
        return MetricGraph(int(doc["vertices"]), tuple(edges))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"graph file must hold vertices and edges: {exc}") from exc


# -- relations ----------------------------------------------------------

def correspondence_to_json(corr: Correspondence) -> str:
    return _dump({"pairs": [[i, j] for i, j in corr.sorted_pairs()]})


def correspondence_pairs_from_json(text: str) -> set[tuple[int, int]]:
    try:
        doc = json.loads(text)
        return {(int(i), int(j)) for i, j in doc["pairs"]}
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"correspondence file must hold pairs: {exc}") from exc


def pl_to_json(pl: PLCorrespondence) -> str:
    return _dump({
        "lambda": round12(pl.lam),
        "segments": [
            [[round12(t0), round12(p0)], [round12(t1), round12(p1)]]
            for (t0, p0), (t1, p1) in pl.segments
        ],
    })


def pl_from_json(text: str) -> PLCorrespondence:
    try:
        doc = json.loads(text)
        segments = [
            ((float(s[0][0]), float(s[0][1])), (float(s[1][0]), float(s[1][1])))
            for s in doc["segments"]
        ]
        return PLCorrespondence(float(doc["lambda"]), segments)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"PL file must hold lambda and segments: {exc}") from exc


# -- witnesses and bounds ------------------------------------------------

def witness_to_json(witness: LipschitzWitness) -> str:
    return _dump({
        "values": [round12(v) for v in witness.values],
        "objective": round12(witness.objective),
    })


def witness_from_json(text: str) -> LipschitzWitness:
    try:
        doc = json.loads(text)
        return LipschitzWitness(
            tuple(float(v) for v in doc["values"]), float(doc["objective"])
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"witness file must hold values and objective: {exc}") from exc


def bound_record_to_dict(record: BoundRecord) -> dict:
    return {
        "kind": record.kind,
        "value": round12(record.value),
        "source": record.source,
        "flags": list(record.flags),
        "slack": round12(record.slack),
        "has_certificate": record.certificate is not None,
    }


# -- certificates and sweeps ----------------------------------------------

def certificate_to_json(cert: CertificateResult) -> str:
    doc = {
        "lambda": round12(cert.lam),
        "regime": cert.regime,
        "kind": cert.kind,
        "path": cert.path,
        "measured": round12(cert.measured),
        "half": round12(cert.half),
    }
    rel = cert.relation
    if isinstance(rel, PLCorrespondence):
        doc["relation"] = {
            "type": "piecewise-linear",
            "segments": json.loads(pl_to_json(rel))["segments"],
        }
    else:
        doc["relation"] = {
            "type": "pairs",
            "pairs": [[i, j] for i, j in rel.sorted_pairs()],
        }
    return _dump(doc)


def sweep_to_csv(reports: list[RegimeReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for rep in reports:
        writer.writerow([
            fmt12(rep.lam),
            fmt12(rep.formula_value),
            fmt12(rep.lower.value),
            fmt12(rep.upper.value),
            rep.regime,
            fmt12(rep.slack),
        ])
    return buf.getvalue()
