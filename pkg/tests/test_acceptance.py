"""Exit criteria. Each test logs one PASS/FAIL line to the terminal summary."""
import json
import math
import time

import numpy as np
import pytest

from bellsim.budget import SPEED_OF_LIGHT, TimingModel, compare_modes, detection_threshold, min_separation
from bellsim.cli import EXIT_OK, run
from bellsim.config import bundled_config
from bellsim.experiment import PAIRS, conditional_correlator, joint_outcome_table
from bellsim.lhv import enumerate_strategies, lhv_chsh_max, mixture_chsh, strategy_chsh
from bellsim.linalg import Z_AXIS, Direction, projector_from_direction, singlet
from bellsim.povm import LABELS, build_epr_povm, dilated_probabilities, neumark_dilate, validate_povm

from conftest import ACCEPTANCE_LINES, random_density

REFERENCE_CFG = str(bundled_config("paper"))
LHV = str(bundled_config("lhv"))
TARGET = 2 * math.sqrt(2)


def record(number, name, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")
    assert ok, detail


def cli_json(capsys, *argv):
    assert run(list(argv)) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_1_exact_violation(capsys):
    t0 = time.perf_counter()
    value = cli_json(capsys, "chsh-exact", "--config", REFERENCE_CFG)["value"]
    elapsed = time.perf_counter() - t0
    err = abs(value - TARGET)
    record(1, "exact violation", err <= 1e-12 and elapsed < 1, f"value={value!r} |err|={err:.2e} t={elapsed:.3f}s")


def test_2_minus_cos_law():
    rng = np.random.default_rng(2)
    psi = singlet()
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        m, n = Direction.random(rng), Direction.random(rng)
        t = joint_outcome_table(psi, build_epr_povm(m, Z_AXIS), build_epr_povm(n, Z_AXIS))
        worst = max(worst, abs(conditional_correlator(t, "first", "first") + m.dot(n)))
    elapsed = time.perf_counter() - t0
    record(2, "-cos theta law", worst <= 1e-9 and elapsed < 5, f"max dev={worst:.2e} t={elapsed:.3f}s")


def test_3_neumark_equivalence():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        rho = random_density(rng)
        d1, d2 = Direction.random(rng), Direction.random(rng)
        probs = dilated_probabilities(rho, neumark_dilate(d1, d2))
        for lab, axis in zip(LABELS, (d1, d1, d2, d2)):
            born = 0.5 * np.trace(rho @ projector_from_direction(axis, lab.value)).real
            worst = max(worst, abs(probs[lab] - born))
    elapsed = time.perf_counter() - t0
    record(3, "Neumark equivalence", worst <= 1e-9 and elapsed < 5, f"max dev={worst:.2e} t={elapsed:.3f}s")


def test_4_povm_axioms():
    rng = np.random.default_rng(4)
    failures = 0
    worst_trace = 0.0
    for _ in range(500):
        p = build_epr_povm(Direction.random(rng), Direction.random(rng))
        failures += not validate_povm(p, tol=1e-9).passed
        worst_trace = max(worst_trace, max(abs(np.trace(op).real - 0.5) for _, op in p.elements))
    ok = failures == 0 and worst_trace <= 1e-12
    record(4, "POVM axioms", ok, f"failures={failures}/500 max trace dev={worst_trace:.2e}")


def test_5_lhv_oracle():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    values = {strategy_chsh(s) for s in enumerate_strategies()}
    bound = lhv_chsh_max()
    worst_mix = max(mixture_chsh(rng.dirichlet(np.ones(16))) for _ in range(1000))
    elapsed = time.perf_counter() - t0
    ok = values == {2} and bound == 2 and worst_mix <= 2 + 1e-12 and elapsed < 1
    record(5, "LHV oracle", ok, f"strategy values={values} max={bound} max mixture={worst_mix:.12f} t={elapsed:.3f}s")


def test_6_statistical_reproduction(capsys, tmp_path):
    t0 = time.perf_counter()
    quantum = cli_json(capsys, "chsh-sample", "--config", REFERENCE_CFG, "--n", "1000000", "--eta-left", "1", "--eta-right", "1", "--out", str(tmp_path / "q"))
    t_quantum = time.perf_counter() - t0
    classical = cli_json(capsys, "chsh-sample", "--config", LHV, "--n", "1000000", "--out", str(tmp_path / "c"))
    q_err = abs(quantum["estimate"] - 2.828427)
    ok = q_err <= 0.02 and classical["estimate"] <= 2.02 and t_quantum < 60
    record(
        6,
        "statistical reproduction",
        ok,
        f"quantum={quantum['estimate']:.5f} (|err|={q_err:.5f}) lhv={classical['estimate']:.5f} t={t_quantum:.2f}s",
    )


def test_7_block_probabilities():
    rng = np.random.default_rng(7)
    worst = 0.0
    settings = [(Direction(1, 0, 0), Direction(0, 0, 1), Direction(-1, 0, 1), Direction(1, 0, 1))]
    settings += [tuple(Direction.random(rng) for _ in range(4)) for _ in range(100)]
    for dA, da, dB, db in settings:
        t = joint_outcome_table(singlet(), build_epr_povm(dA, da), build_epr_povm(dB, db))
        worst = max(worst, max(abs(t.block_probability(*pair) - 0.25) for pair in PAIRS.values()))
    record(7, "block probabilities", worst <= 1e-12, f"max |block - 1/4|={worst:.2e}")


def test_8_determinism(capsys, tmp_path):
    def go(name, workers):
        d = tmp_path / name
        cli_json(capsys, "chsh-sample", "--config", REFERENCE_CFG, "--n", "1000000", "--seed", "42", "--workers", str(workers), "--out", str(d))
        return (d / "trials.csv").read_bytes(), (d / "estimate.json").read_bytes()

    first, second, parallel = go("a", 1), go("b", 1), go("c", 4)
    same_run = first == second
    est = [json.loads(x[1])["estimate"] for x in (first, parallel)]
    ok = same_run and est[0] == est[1] and parallel == first
    record(8, "determinism", ok, f"repeat byte-identical={same_run} workers 1 vs 4 estimate {est[0]!r} vs {est[1]!r}")


def test_9_budget():
    sep = min_separation(TimingModel(1.3e-6, 0.0))
    rng = np.random.default_rng(9)
    exact_saving = all(
        compare_modes(t_s, t_m).saving == SPEED_OF_LIGHT * t_s for t_s, t_m in rng.uniform(0, 1e-5, size=(200, 2))
    )
    threshold = detection_threshold()
    ok = abs(sep - 389.7) <= 0.1 and exact_saving and threshold == 0.828
    record(9, "budget arithmetic", ok, f"separation(1.3us)={sep:.4f} m saving==c*t_S: {exact_saving} threshold={threshold}")
