"""Structured verification reports shared by the algebra and numeric checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Residual:
    """A nonzero leftover from an identity that should hold exactly."""

    relation: str
    residual: str
    central_only: bool = False


@dataclass
class EstimateRow:
    label: str
    value_re: float
    value_im: float
    stderr: float
    reference_re: float
    reference_im: float
    rel_err: float


@dataclass
class VerificationReport:
    """Outcome of one verification task.

    ``passed`` is true iff ``residuals`` is empty and every estimate row is
    within the task tolerance.  ``notes`` carries structured side records
    (recorded central characters, documented defects) that do not gate the
    pass flag; the JSON schema is stable across runs.
    """

    task: str
    params: dict
    passed: bool = True
    residuals: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add_residual(self, relation: str, residual, central_only: bool = False):
        self.residuals.append(Residual(relation, str(residual), central_only))
        self.passed = False

    def add_note(self, kind: str, **payload):
        self.notes.append({"kind": kind, **payload})

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "params": self.params,
            "pass": self.passed,
            "residuals": [
                {
                    "relation": r.relation,
                    "residual": r.residual,
                    "central_only": r.central_only,
                }
                for r in self.residuals
            ],
            "estimates": [
                {
                    "label": e.label,
                    "value_re": e.value_re,
                    "value_im": e.value_im,
                    "stderr": e.stderr,
                    "reference_re": e.reference_re,
                    "reference_im": e.reference_im,
                    "rel_err": e.rel_err,
                }
                for e in self.estimates
            ],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))
