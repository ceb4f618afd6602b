"""The four-outcome two-axis POVM, its validation, and its Neumark dilation.

For two axes ``d1`` and ``d2`` the POVM has elements P(d1, +-1)/2 and
P(d2, +-1)/2. The dilation adjoins an ancilla qubit and measures a single
projective observable on particle (x) ancilla: the ``d1`` spin on the ancilla's
z = +1 sector and the ``d2`` spin on its z = -1 sector. With the ancilla
maximally mixed, branch probabilities coincide with the POVM's Born
probabilities.

Measuring z on the ancilla first and then the selected spin on the particle
gives the same statistics as the joint measurement; only the joint form is
implemented here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from bellsim.linalg import (
    IDENTITY2,
    IDENTITY4,
    TOL,
    Direction,
    Z_AXIS,
    check_density_matrix,
    expectation,
    is_hermitian,
    maximally_mixed,
    min_eigenvalue,
    projector_from_direction,
    tensor,
)


class Setting(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"


class OutcomeLabel(NamedTuple):
    setting: Setting
    value: int

    @property
    def index(self) -> int:
        """Position in the canonical order (first,+1), (first,-1), (second,+1), (second,-1)."""
        return 2 * (self.setting is Setting.SECOND) + (self.value == -1)

    @classmethod
    def from_index(cls, i: int) -> "OutcomeLabel":
        return LABELS[i]

    def __str__(self):
        return f"{self.setting.value}{'+' if self.value == 1 else '-'}"


LABELS = (
    OutcomeLabel(Setting.FIRST, 1),
    OutcomeLabel(Setting.FIRST, -1),
    OutcomeLabel(Setting.SECOND, 1),
    OutcomeLabel(Setting.SECOND, -1),
)

#: Default result tags r: value gives the sign, magnitude 1 or 2 the setting.
DEFAULT_RESULT_TAGS = {LABELS[0]: 1.0, LABELS[1]: -1.0, LABELS[2]: 2.0, LABELS[3]: -2.0}


@dataclass(frozen=True)
class Povm:
    elements: tuple[tuple[OutcomeLabel, np.ndarray], ...]
    axes: tuple[Direction, Direction] | None = None

    def __post_init__(self):
        labels = [lab for lab, _ in self.elements]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate outcome labels in POVM: {labels}")

    @property
    def labels(self) -> list[OutcomeLabel]:
        return [lab for lab, _ in self.elements]

    def operator(self, label: OutcomeLabel) -> np.ndarray:
        for lab, op in self.elements:
            if lab == label:
                return op
        raise KeyError(label)

    def born_probabilities(self, rho: np.ndarray) -> dict[OutcomeLabel, float]:
        """Tr(rho E_d) for every element."""
        return {lab: expectation(rho, op) for lab, op in self.elements}


def build_epr_povm(d1: Direction, d2: Direction) -> Povm:
    elements = tuple(
        (label, 0.5 * projector_from_direction(axis, label.value))
        for label, axis in zip(LABELS, (d1, d1, d2, d2))
    )
    for _, op in elements:
        op.flags.writeable = False
    return Povm(elements, axes=(d1, d2))


@dataclass(frozen=True)
class ValidationFailure:
    axiom: str  # "hermitian", "psd", "completeness" or "labels"
    element: str | None
    detail: str
    value: float | None = None


@dataclass(frozen=True)
class ValidationReport:
    min_eigenvalues: dict[str, float]
    completeness_residual: float
    failures: list[ValidationFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "min_eigenvalues": dict(self.min_eigenvalues),
            "completeness_residual": self.completeness_residual,
            "failures": [
                {"axiom": f.axiom, "element": f.element, "detail": f.detail, "value": f.value}
                for f in self.failures
            ],
        }


def validate_povm(p: Povm, tol: float = TOL) -> ValidationReport:
    """Check positivity and completeness of every element.

    Failures are collected in the report, not raised.
    """
    failures = []
    mins = {}
    total = np.zeros((2, 2), dtype=complex)
    for label, op in p.elements:
        name = str(label)
        op = np.asarray(op, dtype=complex)
        if op.shape != (2, 2):
            failures.append(ValidationFailure("hermitian", name, f"element has shape {op.shape}"))
            continue
        total = total + op
        if not is_hermitian(op, tol):
            failures.append(ValidationFailure("hermitian", name, "element is not Hermitian"))
        lam = min_eigenvalue(op)
        mins[name] = lam
        if lam < -tol:
            failures.append(
                ValidationFailure("psd", name, f"minimum eigenvalue {lam:.6g} is negative", lam)
            )
    residual = float(np.max(np.abs(total - IDENTITY2)))
    if residual > tol:
        failures.append(
            ValidationFailure(
                "completeness", None, f"elements sum to identity only within {residual:.6g}", residual
            )
        )
    if sorted(p.labels) != sorted(LABELS):
        failures.append(
            ValidationFailure("labels", None, f"expected the four canonical labels, got {p.labels}")
        )
    return ValidationReport(mins, residual, failures)


class Branch(NamedTuple):
    label: OutcomeLabel
    projector: np.ndarray  # 4x4, particle (x) ancilla
    result: float


@dataclass(frozen=True)
class DilatedObservable:
    branches: tuple[Branch, ...]

    def observable(self) -> np.ndarray:
        """sum_r r P_r"""
        return sum(b.result * b.projector for b in self.branches)

    def branch(self, label: OutcomeLabel) -> Branch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)


def neumark_dilate(
    d1: Direction, d2: Direction, result_tags: dict[OutcomeLabel, float] | None = None
) -> DilatedObservable:
    tags = DEFAULT_RESULT_TAGS if result_tags is None else result_tags
    branches = []
    for label in LABELS:
        if label.setting is Setting.FIRST:
            proj = tensor(projector_from_direction(d1, label.value), projector_from_direction(Z_AXIS, 1))
        else:
            proj = tensor(projector_from_direction(d2, label.value), projector_from_direction(Z_AXIS, -1))
        branches.append(Branch(label, proj, float(tags[label])))
    return DilatedObservable(tuple(branches))


def dilated_probabilities(particle: np.ndarray, dil: DilatedObservable) -> dict[OutcomeLabel, float]:
    """Branch probabilities for ``particle`` (x) maximally mixed ancilla."""
    rho = check_density_matrix(particle)
    if rho.shape != (2, 2):
        raise ValueError(f"particle state must be a single-qubit density matrix, got {rho.shape}")
    joint = np.kron(rho, maximally_mixed(2))
    return {b.label: expectation(joint, b.projector) for b in dil.branches}


def dilation_residual(particle: np.ndarray, d1: Direction, d2: Direction) -> float:
    """Largest |branch probability - Tr(rho E_d)| over the four outcomes."""
    dilated = dilated_probabilities(particle, neumark_dilate(d1, d2))
    born = build_epr_povm(d1, d2).born_probabilities(particle)
    return max(abs(dilated[lab] - born[lab]) for lab in LABELS)


def dilation_structure_residuals(dil: DilatedObservable) -> dict[str, float]:
    """Orthogonality and completeness residuals of the branch projectors."""
    projs = [b.projector for b in dil.branches]
    ortho = 0.0
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            ortho = max(ortho, float(np.max(np.abs(projs[i] @ projs[j]))))
    complete = float(np.max(np.abs(sum(projs) - IDENTITY4)))
    idem = max(float(np.max(np.abs(p @ p - p))) for p in projs)
    return {"orthogonality": ortho, "completeness": complete, "idempotence": idem}
