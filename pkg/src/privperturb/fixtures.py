"""Bundled benchmark problems and fixture file loading.

A fixture file is a JSON document describing a multi-agent problem:

    {
      "name": "...",                     # optional
      "domain": {"lo": [...], "hi": [...]},
      "objectives": [<polynomial>, ...], # objectives.PolynomialObjective JSON
      "reference_slopes": [[...], ...]   # optional (N, n) perturbation slopes
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import UsageError
from .intervals import Box
from .objectives import AgentProblem, PolynomialObjective, poly_to_spec

NONCONVEX_TRIO = "nonconvex_trio"
BUNDLED = (NONCONVEX_TRIO,)


@dataclass(frozen=True)
class Fixture:
    name: str
    problem: AgentProblem
    reference_slopes: np.ndarray | None  # (N, n) or None

    @property
    def domain(self) -> Box:
        return self.problem.domain


def fixture_from_json(doc: dict) -> Fixture:
    try:
        domain = Box.from_json(doc["domain"])
        polys = [PolynomialObjective.from_json(o) for o in doc["objectives"]]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed fixture document: {exc}") from exc
    if not polys:
        raise UsageError("fixture needs at least one objective")
    specs = tuple(poly_to_spec(p, domain) for p in polys)
    problem = AgentProblem(objectives=specs)
    slopes = doc.get("reference_slopes")
    if slopes is not None:
        slopes = np.asarray(slopes, float)
        if slopes.shape != (problem.n_agents, problem.dim):
            raise UsageError("reference_slopes must have shape (N, n)")
    return Fixture(
        name=str(doc.get("name", "fixture")), problem=problem, reference_slopes=slopes
    )


def load_fixture(source: str) -> Fixture:
    """Load a fixture from a bundled name or a JSON file path."""
    if source in BUNDLED:
        text = (
            resources.files("privperturb").joinpath(f"data/{source}.json").read_text()
        )
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read fixture {source!r}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"fixture {source!r} is not valid JSON: {exc}") from exc
    return fixture_from_json(doc)


def nonconvex_trio() -> Fixture:
    """Three quartic/cubic agents on [-10, 10] whose sum has one global
    and one spurious local minimizer."""
    return load_fixture(NONCONVEX_TRIO)
