"""JSON report assembly for the command line front end."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from bellsim import budget, lhv
from bellsim.config import ExperimentConfig
from bellsim.experiment import ChshResult, correlator_from_block, joint_outcome_table, perpendicular, rotated_axis
from bellsim.linalg import X_AXIS, Y_AXIS, Z_AXIS, Direction, density_from_pure, maximally_mixed, projector_from_direction, singlet
from bellsim.povm import build_epr_povm, dilation_residual, dilation_structure_residuals, neumark_dilate, validate_povm
from bellsim.sampler import SWEEP, ChshEstimate, derive_seed, estimate_from_counts, sample_trials

SCHEMA_ID = "bellsim-report/1"
SCHEMA_PATH = Path(__file__).parent / "schemas" / "report.schema.json"


def load_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text())


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _header(kind: str) -> dict:
    return {"schema": SCHEMA_ID, "kind": kind}


def _matrix(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def chsh_exact_report(result: ChshResult, cfg: ExperimentConfig) -> dict:
    return {
        **_header("chsh-exact"),
        **result.to_dict(),
        "lhv_bound": lhv.lhv_chsh_max(),
        "violation": result.value - lhv.lhv_chsh_max(),
        "config_sha256": cfg.sha256(),
    }


def chsh_sample_report(est: ChshEstimate, cfg: ExperimentConfig, source: str, exact: float | None) -> dict:
    return {
        **_header("chsh-sample"),
        **est.to_dict(),
        "source": source,
        "exact_value": exact,
        "eta_left": cfg.eta_left,
        "eta_right": cfg.eta_right,
        "provenance": {"seed": cfg.seed, "config_sha256": cfg.sha256()},
    }


def lhv_max_report() -> dict:
    return {
        **_header("lhv-max"),
        "bound": lhv.lhv_chsh_max(),
        "mixture_bound": lhv.mixture_chsh_max(),
        "strategies": [
            {**s._asdict(), "value": lhv.strategy_chsh(s)} for s in lhv.enumerate_strategies()
        ],
    }


def _sides(cfg: ExperimentConfig) -> dict[str, tuple[Direction, Direction]]:
    d = cfg.directions
    return {"left": (d["A"], d["a"]), "right": (d["B"], d["b"])}


def validate_povm_report(cfg: ExperimentConfig) -> dict:
    povms = {side: validate_povm(build_epr_povm(*axes)).to_dict() for side, axes in _sides(cfg).items()}
    return {**_header("validate-povm"), "passed": all(p["passed"] for p in povms.values()), "povms": povms}


def probe_states() -> list[np.ndarray]:
    """Axis eigenstates, the maximally mixed state, and a generic mixed state."""
    states = [projector_from_direction(ax, s) for ax in (X_AXIS, Y_AXIS, Z_AXIS) for s in (1, -1)]
    states.append(maximally_mixed(2))
    states.append(0.7 * projector_from_direction(Direction(1, 2, 3), 1) + 0.3 * maximally_mixed(2))
    # reduced state of one singlet particle
    rho = density_from_pure(singlet()).reshape(2, 2, 2, 2)
    states.append(np.einsum("ijkj->ik", rho))
    return states


def dilate_report(cfg: ExperimentConfig) -> dict:
    povms = {}
    worst = 0.0
    for side, (d1, d2) in _sides(cfg).items():
        dil = neumark_dilate(d1, d2)
        residual = max(dilation_residual(rho, d1, d2) for rho in probe_states())
        worst = max(worst, residual)
        povms[side] = {
            "axes": [d1.as_list(), d2.as_list()],
            "branches": [
                {"label": str(b.label), "result": b.result, "projector": _matrix(b.projector)}
                for b in dil.branches
            ],
            "structure_residuals": dilation_structure_residuals(dil),
            "equivalence_residual": residual,
        }
    return {**_header("dilate"), "povms": povms, "equivalence_residual": worst}


def budget_report(t_s: float, t_m: float) -> dict:
    return {
        **_header("budget"),
        "speed_of_light_m_per_s": budget.SPEED_OF_LIGHT,
        "comparison": budget.compare_modes(t_s, t_m).to_dict(),
        "reference": budget.reference_budget(),
    }


SWEEP_HEADER = "theta,exact,minus_cos,estimate,standard_error,block_count"


def sweep_rows(cfg: ExperimentConfig, steps: int, workers: int = 1) -> list[tuple]:
    """Correlator of the (first, first) block as the right axis turns away from A.

    Step k puts the right first axis at theta = pi k/steps from A, in the plane
    of A and a; the second axes stay as configured.
    """
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    dA, da, _, db = cfg.settings
    towards = perpendicular(dA, da)
    left = build_epr_povm(dA, da)
    rows = []
    for k in range(steps + 1):
        theta = np.pi * k / steps
        right = build_epr_povm(rotated_axis(dA, towards, theta), db)
        table = joint_outcome_table(singlet(), left, right)
        exact = correlator_from_block(table.block("first", "first"))
        trials = sample_trials(singlet(), left, right, cfg.n, derive_seed(cfg.seed, SWEEP, k), workers)
        est = estimate_from_counts(trials.joint_counts(), len(trials))
        rows.append((theta, exact, -np.cos(theta), est.correlators["AB"], est.standard_errors["AB"], est.block_counts["AB"]))
    return rows


def sweep_csv(rows, comments=()) -> str:
    lines = [f"# {c}" for c in comments] + [SWEEP_HEADER]
    lines += [",".join(repr(float(v)) if i < 5 else str(int(v)) for i, v in enumerate(r)) for r in rows]
    return "\n".join(lines) + "\n"


def sweep_report(rows, cfg: ExperimentConfig, csv_path: str) -> dict:
    return {
        **_header("sweep"),
        "steps": len(rows) - 1,
        "trials_per_step": cfg.n,
        "csv": csv_path,
        "max_exact_deviation": max(abs(r[1] - r[2]) for r in rows),
        "provenance": {"seed": cfg.seed, "config_sha256": cfg.sha256()},
    }
