"""File formats: JSON for structures, CSV for matrices and measures."""
from __future__ import annotations

import json

import numpy as np

from .dendron import FiniteDendron, MarkedPoint
from .errors import ValidationError
from .real_tree import MeasuredRealTree, RealTreeSkeleton
from .sampling import SamplingMeasure, validate_distance_matrix
from .tree_core import FiniteTree


def read_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from exc


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def parse_structure(obj):
    """Build a FiniteTree, MeasuredRealTree or FiniteDendron from its JSON form."""
    if not isinstance(obj, dict):
        raise ValidationError("expected a JSON object")
    try:
        if "skeleton" in obj:
            return FiniteDendron.from_json(obj)
        if "atoms" in obj or "atoms_interior" in obj or any(len(e) == 3 for e in obj.get("edges", [])):
            return MeasuredRealTree.from_json(obj)
        return FiniteTree.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed structure: {exc!r}") from exc


def load_structure(path):
    return parse_structure(read_json(path))


def load_measured_tree(path) -> MeasuredRealTree:
    obj = load_structure(path)
    if not isinstance(obj, MeasuredRealTree):
        raise ValidationError(f"{path}: expected a measured real tree")
    return obj


def load_dendron(path) -> FiniteDendron:
    obj = load_structure(path)
    if not isinstance(obj, FiniteDendron):
        raise ValidationError(f"{path}: expected a dendron")
    return obj


def read_matrix(path) -> np.ndarray:
    try:
        a = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"{path}: not a numeric CSV matrix ({exc})") from exc
    return validate_distance_matrix(a, atol=1e-12)


def write_matrix(a, path):
    np.savetxt(path, np.asarray(a, dtype=float), delimiter=",", fmt="%.17g")


def read_measure(path) -> SamplingMeasure:
    return SamplingMeasure.from_csv(path)


def nsample_to_json(x) -> list:
    return [m.to_json() for m in x]


def nsample_from_json(obj, s: RealTreeSkeleton) -> list[MarkedPoint]:
    return [MarkedPoint(s.point_from_json(m["point"]), float(m["height"])) for m in obj]
