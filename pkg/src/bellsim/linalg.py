"""Small-dimension complex linear algebra for one and two qubits.

Everything is expressed in the z eigenbasis. Two-qubit operators use the
product ordering |++>, |+->, |-+>, |-->, i.e. ``np.kron(left, right)``.
Arrays returned from this module are read-only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Tolerance for structural checks (Hermiticity, normalization, PSD).
TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY2, IDENTITY4):
    _m.flags.writeable = False


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Direction:
    """Unit 3-vector giving a spin measurement axis.

    The constructor normalizes its arguments, so ``Direction(1, 0, 1)`` is the
    axis (1, 0, 1)/sqrt(2). The zero vector is rejected.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        comps = [float(c) for c in (self.x, self.y, self.z)]
        if not all(math.isfinite(c) for c in comps):
            raise ValueError(f"direction components must be finite, got {comps}")
        norm = math.sqrt(sum(c * c for c in comps))
        if norm < 1e-12:
            raise ValueError("cannot normalize the zero vector into a direction")
        object.__setattr__(self, "x", comps[0] / norm)
        object.__setattr__(self, "y", comps[1] / norm)
        object.__setattr__(self, "z", comps[2] / norm)

    @classmethod
    def of(cls, v) -> "Direction":
        if isinstance(v, Direction):
            return v
        vals = list(v)
        if len(vals) != 3:
            raise ValueError(f"a direction needs 3 components, got {len(vals)}")
        return cls(*vals)

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> "Direction":
        """Polar angle ``theta`` from +z, azimuth ``phi`` from +x."""
        return cls(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Direction":
        """Uniformly distributed on the sphere."""
        while True:
            v = rng.normal(size=3)
            if np.linalg.norm(v) > 1e-6:
                return cls(*v)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "Direction") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def angle_to(self, other: "Direction") -> float:
        return math.acos(max(-1.0, min(1.0, self.dot(other))))

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.z]


Z_AXIS = Direction(0, 0, 1)
X_AXIS = Direction(1, 0, 0)
Y_AXIS = Direction(0, 1, 0)


def spin_operator(n: Direction) -> np.ndarray:
    """n . sigma"""
    return _frozen(n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z)


def projector_from_direction(n: Direction, sign: int) -> np.ndarray:
    """Eigenprojector of spin along ``n`` for eigenvalue ``sign`` (+1 or -1).

    Uses the Bloch form (I + sign n.sigma)/2.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return _frozen(0.5 * (IDENTITY2 + sign * (n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z)))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-qubit operators (left factor first)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor expects two 2x2 operators, got {a.shape} and {b.shape}")
    return _frozen(np.kron(a, b))


def singlet() -> np.ndarray:
    """(|+-> - |-+>)/sqrt(2) in the z product basis."""
    s = 1 / math.sqrt(2)
    return _frozen([0, s, -s, 0])


def basis_state(*signs: int) -> np.ndarray:
    """Product state of z eigenstates, e.g. ``basis_state(1, -1)`` is |+->."""
    vec = np.array([1.0 + 0j])
    for s in signs:
        vec = np.kron(vec, [1, 0] if s == 1 else [0, 1])
    return _frozen(vec)


def maximally_mixed(dim: int) -> np.ndarray:
    return _frozen(np.eye(dim) / dim)


def density_from_pure(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return _frozen(np.outer(psi, psi.conj()))


def is_hermitian(m: np.ndarray, tol: float = TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_projector(m: np.ndarray, tol: float = TOL) -> bool:
    m = np.asarray(m)
    return is_hermitian(m, tol) and bool(np.max(np.abs(m @ m - m)) <= tol)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian 2x2 or 4x4 matrix.

    2x2 uses the closed form. 4x4 goes through LAPACK ``eigvalsh``: closed-form
    quartic roots lose about a cube root of precision at the triple-degenerate
    spectra that pure two-qubit states have.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape == (2, 2):
        a = m[0, 0].real
        d = m[1, 1].real
        half_gap = math.hypot((a - d) / 2, abs(m[0, 1]))
        mean = (a + d) / 2
        return np.array([mean - half_gap, mean + half_gap])
    if m.shape == (4, 4):
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    raise ValueError(f"only 2x2 and 4x4 matrices are supported, got {m.shape}")


def min_eigenvalue(m: np.ndarray) -> float:
    return float(hermitian_eigenvalues(m)[0])


def check_pure_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] not in (2, 4):
        raise ValueError(f"pure state must be a vector of length 2 or 4, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > TOL:
        raise ValueError(f"pure state is not normalized (norm {norm!r})")
    return psi


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise ValueError(f"density matrix must be 2x2 or 4x4, got shape {rho.shape}")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1) > TOL:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lam = min_eigenvalue(rho)
    if lam < -TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lam!r}")
    return rho


def expectation(state: np.ndarray, m: np.ndarray) -> float:
    """<psi|M|psi> for a state vector, Tr(rho M) for a density matrix."""
    state = np.asarray(state, dtype=complex)
    m = np.asarray(m, dtype=complex)
    dim = state.shape[0]
    if m.shape != (dim, dim):
        raise ValueError(f"operator shape {m.shape} does not match state dimension {dim}")
    if state.ndim == 1:
        value = np.vdot(state, m @ state)
    elif state.ndim == 2 and state.shape == (dim, dim):
        value = np.trace(state @ m)
    else:
        raise ValueError(f"state must be a vector or a square matrix, got shape {state.shape}")
    if abs(value.imag) > TOL:
        raise ValueError(
            f"expectation has imaginary part {value.imag!r}; operand is not Hermitian"
        )
    return float(value.real)
