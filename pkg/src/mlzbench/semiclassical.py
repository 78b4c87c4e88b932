"""Chronological product of pairwise Landau-Zener blocks and interference detection."""

from dataclasses import dataclass, field

import numpy as np

from .propagator import DEFAULT_RK_TOL, DEFAULT_T_LIST, transition_matrix
from .spectrum import diabatic_crossings

NON_INTERFERENCE = "exact (no interference)"
APPROXIMATION = "non-interference approximation"


class DegenerateCrossing(ValueError):
    """Two coupled crossings share a level at the same time."""


@dataclass
class CrossingDiagram:
    events: list
    blocks: list

    def to_dict(self):
        return {"events": [e.to_dict() for e in self.events]}


@dataclass
class PathReport:
    path_count: np.ndarray
    interference: bool

    def to_dict(self):
        return {"path_count": self.path_count.tolist(), "interference": self.interference}


@dataclass
class Prediction:
    probability: np.ndarray
    paths: PathReport
    tag: str
    diagram: CrossingDiagram = None

    def to_dict(self):
        return {
            "probability": self.probability.tolist(),
            "paths": self.paths.to_dict(),
            "tag": self.tag,
        }


def lz_block(n, a, b, p):
    blk = np.eye(n)
    q = 1.0 - p
    blk[a, a] = blk[b, b] = p
    blk[a, b] = blk[b, a] = q
    return blk


def build_diagram(model):
    events = diabatic_crossings(model)
    coupled = [e for e in events if e.coupled]
    for i, e in enumerate(coupled):
        for f in coupled[i + 1:]:
            if f.time != e.time:
                break
            if {e.a, e.b} & {f.a, f.b}:
                raise DegenerateCrossing(
                    f"coupled crossings {e.level_pair} and {f.level_pair} coincide at t = {e.time}"
                )
    blocks = [lz_block(model.n, e.a, e.b, e.lz_p) if e.coupled else np.eye(model.n) for e in events]
    return CrossingDiagram(events, blocks)


def chronological_product(blocks):
    """blocks[-1] @ ... @ blocks[0]; the earliest crossing acts first on the initial column."""
    n = blocks[0].shape[0] if blocks else 0
    out = np.eye(n)
    for blk in blocks:
        out = blk @ out
    return out


def count_paths(model, diagram):
    """Number of branch choices leading from each initial to each final level."""
    n = model.n
    count = np.eye(n, dtype=np.int64)
    for e in diagram.events:
        if not e.coupled:
            continue
        step = np.eye(n, dtype=np.int64)
        step[e.a, e.b] = step[e.b, e.a] = 1
        count = step @ count
    return PathReport(count, bool(np.any(count >= 2)))


def predict_probabilities(model):
    diagram = build_diagram(model)
    n = model.n
    prob = chronological_product(diagram.blocks) if diagram.blocks else np.eye(n)
    paths = count_paths(model, diagram)
    tag = APPROXIMATION if paths.interference else NON_INTERFERENCE
    return Prediction(prob, paths, tag, diagram)


@dataclass
class ComparisonReport:
    max_deviation: float
    predicted: Prediction
    numeric: object
    orientation: str = "P[j, i]: final j, initial i"
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "max_deviation": self.max_deviation,
            "orientation": self.orientation,
            "predicted": self.predicted.to_dict(),
            "numeric": self.numeric.to_dict(),
            **self.extra,
        }


def compare_with_numerics(model, T_list=DEFAULT_T_LIST, rk_tol=DEFAULT_RK_TOL):
    pred = predict_probabilities(model)
    num = transition_matrix(model, T_list, rk_tol)
    dev = float(np.max(np.abs(pred.probability - num.probability)))
    return ComparisonReport(dev, pred, num)


def p6_matrix(p):
    """Transition matrix of the six-state model as a polynomial in p (q = 1 - p)."""
    q = 1.0 - p
    return np.array(
        [
            [p * p, q * q, 0, 0, p * q, p * q],
            [p * q * q, p**3, q * q, p * q, p * p * q, p * p * q],
            [p * q * q, p * q * q, p * p, p * q, q**3, p * p * q],
            [q**3, p * p * q, p * q, p * p, p * q * q, p * q * q],
            [p * q, p * q, 0, 0, p * p, q * q],
            [p * p * q, p * p * q, p * q, q * q, p * q * q, p**3],
        ],
        dtype=float,
    )


def match_orientation(p_num, p_ref):
    """Entrywise max deviation against p_ref and its transpose; the smaller wins."""
    direct = float(np.max(np.abs(p_num - p_ref)))
    transposed = float(np.max(np.abs(p_num - p_ref.T)))
    if direct <= transposed:
        return "as printed (rows final, columns initial)", direct
    return "transposed", transposed
