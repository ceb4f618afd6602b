"""Exact two-sided predictions: joint outcome tables, conditioned correlators, CHSH."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bellsim.linalg import TOL, Direction, check_density_matrix, check_pure_state, expectation, singlet
from bellsim.povm import LABELS, OutcomeLabel, Povm, Setting, build_epr_povm, validate_povm

#: Correlator keys: upper case is the first setting, lower case the second.
PAIRS = {
    "AB": (Setting.FIRST, Setting.FIRST),
    "Ab": (Setting.FIRST, Setting.SECOND),
    "aB": (Setting.SECOND, Setting.FIRST),
    "ab": (Setting.SECOND, Setting.SECOND),
}


class InvalidPovmError(ValueError):
    def __init__(self, side, report):
        self.report = report
        axioms = ", ".join(sorted({f.axiom for f in report.failures}))
        super().__init__(f"{side} POVM fails validation ({axioms})")


class DegenerateBlockError(ValueError):
    pass


@dataclass(frozen=True)
class JointOutcomeTable:
    """P(left outcome i, right outcome j), rows and columns in ``LABELS`` order."""

    probabilities: np.ndarray
    left: Povm
    right: Povm
    state: str = "custom"

    def entry(self, left: OutcomeLabel, right: OutcomeLabel) -> float:
        return float(self.probabilities[left.index, right.index])

    def block(self, left_setting: Setting, right_setting: Setting) -> np.ndarray:
        """2x2 sub-table [[P++, P+-], [P-+, P--]] for one setting pair."""
        i = 0 if Setting(left_setting) is Setting.FIRST else 2
        j = 0 if Setting(right_setting) is Setting.FIRST else 2
        return self.probabilities[i : i + 2, j : j + 2]

    def block_probability(self, left_setting: Setting, right_setting: Setting) -> float:
        return float(self.block(left_setting, right_setting).sum())

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "labels": [str(lab) for lab in LABELS],
            "probabilities": self.probabilities.tolist(),
        }


def joint_outcome_table(state: np.ndarray, left: Povm, right: Povm, state_label: str = "custom") -> JointOutcomeTable:
    """Born-rule table <psi| E_i (x) F_j |psi> (or Tr(rho E_i (x) F_j))."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        check_pure_state(state)
    else:
        check_density_matrix(state)
    if state.shape[0] != 4:
        raise ValueError("joint outcome table needs a two-qubit state")
    for side, p in (("left", left), ("right", right)):
        report = validate_povm(p)
        if not report.passed:
            raise InvalidPovmError(side, report)

    probs = np.empty((4, 4))
    for la, ea in left.elements:
        for lb, eb in right.elements:
            probs[la.index, lb.index] = expectation(state, np.kron(ea, eb))
    if probs.min() < -1e-12:
        raise ValueError(f"negative joint probability {probs.min()!r}")
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1) > TOL:
        raise ValueError(f"joint probabilities sum to {total!r}")
    probs.flags.writeable = False
    return JointOutcomeTable(probs, left, right, state_label)


def correlator_from_block(block: np.ndarray) -> float:
    block = np.asarray(block, dtype=float)
    total = block.sum()
    if total <= 1e-12:
        raise DegenerateBlockError(f"block probability {total!r} too small to condition on")
    signed = block[0, 0] - block[0, 1] - block[1, 0] + block[1, 1]
    return float(signed / total)


def conditional_correlator(t: JointOutcomeTable, left_setting: Setting, right_setting: Setting) -> float:
    """Mean product of outcomes, conditioned on both sides landing in the given settings.

    The denominator is read off the table rather than assumed, so states whose
    blocks are not equiprobable are handled too.
    """
    return correlator_from_block(t.block(left_setting, right_setting))


def chsh_combination(c_AB: float, c_Ab: float, c_aB: float, c_ab: float) -> float:
    return abs(c_AB - c_Ab - c_aB - c_ab)


@dataclass(frozen=True)
class ChshResult:
    value: float
    correlators: dict[str, float]
    block_probabilities: dict[str, float]
    settings: dict[str, Direction]
    table: JointOutcomeTable

    def recompute(self) -> float:
        c = self.correlators
        return chsh_combination(c["AB"], c["Ab"], c["aB"], c["ab"])

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "correlators": dict(self.correlators),
            "block_probabilities": dict(self.block_probabilities),
            "settings": {k: d.as_list() for k, d in self.settings.items()},
            "table": self.table.to_dict(),
        }


def chsh_value(
    state: np.ndarray, dA: Direction, da: Direction, dB: Direction, db: Direction, state_label: str = "custom"
) -> ChshResult:
    """|<AB> - <Ab> - <aB> - <ab>| with POVM (A, a) on the left and (B, b) on the right."""
    table = joint_outcome_table(state, build_epr_povm(dA, da), build_epr_povm(dB, db), state_label)
    correlators = {k: conditional_correlator(table, *pair) for k, pair in PAIRS.items()}
    blocks = {k: table.block_probability(*pair) for k, pair in PAIRS.items()}
    value = chsh_combination(correlators["AB"], correlators["Ab"], correlators["aB"], correlators["ab"])
    return ChshResult(value, correlators, blocks, {"A": dA, "a": da, "B": dB, "b": db}, table)


def singlet_chsh(dA: Direction, da: Direction, dB: Direction, db: Direction) -> ChshResult:
    return chsh_value(singlet(), dA, da, dB, db, state_label="singlet")


def perpendicular(axis: Direction, hint: Direction | None = None) -> Direction:
    """A unit vector orthogonal to ``axis``, taken from ``hint`` when possible."""
    v = axis.vector
    for cand in ([hint.vector] if hint is not None else []) + [np.eye(3)[i] for i in np.argsort(np.abs(v))]:
        w = cand - np.dot(cand, v) * v
        if np.linalg.norm(w) > 1e-6:
            return Direction(*w)
    raise AssertionError("unreachable")


def rotated_axis(axis: Direction, towards: Direction, theta: float) -> Direction:
    """``axis`` rotated by ``theta`` in the plane spanned with ``towards`` (orthogonal to it)."""
    return Direction(*(math.cos(theta) * axis.vector + math.sin(theta) * towards.vector))
