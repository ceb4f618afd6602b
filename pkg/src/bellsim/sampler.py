"""Seeded Monte Carlo trials, detection thinning and CHSH estimation.

Random numbers come from Philox4x64-10 (``numpy.random.Philox``) keyed by a
``SeedSequence`` built from ``(master seed, purpose, stream index)``. Trials
are cut into fixed chunks of ``CHUNK_SIZE``; chunk ``k`` always uses stream
``k``. The chunking does not depend on the number of workers, so any worker
count produces the same trials. Counting is the only aggregation.
"""
from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from bellsim.experiment import PAIRS, DegenerateBlockError, joint_outcome_table
from bellsim.povm import LABELS, OutcomeLabel, Povm

CHUNK_SIZE = 1 << 16

# Stream purposes; part of the key so different uses never share a stream.
OUTCOMES = 1
DETECTION = 2
LHV = 3
SWEEP = 4

CSV_HEADER = "trial,left_setting,left_value,right_setting,right_value,left_det,right_det"


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def stream(seed: int, purpose: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """A child master seed, e.g. one per sweep step."""
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=keys)
    return int(ss.generate_state(1, np.uint64)[0])


def chunked(n: int, purpose: int, seed: int, fn: Callable[[np.random.Generator, int], tuple], workers: int = 1):
    """Run ``fn(generator, size)`` per chunk and concatenate results in chunk order."""
    if n < 1:
        raise ValueError(f"trial count must be at least 1, got {n}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    sizes = [min(CHUNK_SIZE, n - start) for start in range(0, n, CHUNK_SIZE)]

    def job(k):
        return fn(stream(seed, purpose, k), sizes[k])

    if workers == 1:
        parts = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    return tuple(np.concatenate(cols) for cols in zip(*parts))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    left: OutcomeLabel
    right: OutcomeLabel
    left_detected: bool = True
    right_detected: bool = True

    @property
    def coincident(self) -> bool:
        return self.left_detected and self.right_detected


@dataclass(frozen=True)
class Trials:
    """Column store of trial records.

    ``left``/``right`` hold outcome indices into ``LABELS``. Iterating yields
    ``TrialRecord`` objects.
    """

    left: np.ndarray
    right: np.ndarray
    left_det: np.ndarray
    right_det: np.ndarray

    def __post_init__(self):
        n = len(self.left)
        if not (len(self.right) == len(self.left_det) == len(self.right_det) == n):
            raise ValueError("trial columns have different lengths")
        for col in (self.left, self.right, self.left_det, self.right_det):
            col.flags.writeable = False

    @classmethod
    def all_detected(cls, left: np.ndarray, right: np.ndarray) -> "Trials":
        ones = np.ones(len(left), dtype=bool)
        return cls(left.astype(np.int8), right.astype(np.int8), ones, ones.copy())

    def __len__(self) -> int:
        return len(self.left)

    def __getitem__(self, i: int) -> TrialRecord:
        if i < 0:
            i += len(self)
        return TrialRecord(
            i,
            LABELS[self.left[i]],
            LABELS[self.right[i]],
            bool(self.left_det[i]),
            bool(self.right_det[i]),
        )

    def __iter__(self) -> Iterator[TrialRecord]:
        return (self[i] for i in range(len(self)))

    @property
    def coincident(self) -> np.ndarray:
        return self.left_det & self.right_det

    def with_detection(self, left_det: np.ndarray, right_det: np.ndarray) -> "Trials":
        return Trials(self.left, self.right, np.asarray(left_det, bool), np.asarray(right_det, bool))

    def joint_counts(self, coincident_only: bool = True) -> np.ndarray:
        """4x4 integer counts indexed like ``JointOutcomeTable.probabilities``."""
        mask = self.coincident if coincident_only else slice(None)
        codes = self.left[mask].astype(np.int64) * 4 + self.right[mask]
        return np.bincount(codes, minlength=16).reshape(4, 4)


def inverse_cdf(weights: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Indices drawn by inverse CDF; ``u`` in [0, 1). Zero-weight cells are never returned."""
    cdf = np.cumsum(np.asarray(weights, dtype=float).ravel())
    return np.searchsorted(cdf, u * cdf[-1], side="right")


def sample_trials(state, left: Povm, right: Povm, n: int, seed: int, workers: int = 1) -> Trials:
    """Independent draws from the 16-cell joint distribution, row-major in label order."""
    table = joint_outcome_table(state, left, right)
    probs = table.probabilities

    def draw(gen, size):
        cell = inverse_cdf(probs, gen.random(size)).astype(np.int8)
        return cell // 4, cell % 4

    lo, ro = chunked(n, OUTCOMES, seed, draw, workers)
    return Trials.all_detected(lo, ro)


def apply_detection(trials: Trials, eta_left: float, eta_right: float, seed: int, workers: int = 1) -> Trials:
    """Flag each side detected independently of its outcome with probability eta."""
    for name, eta in (("eta_left", eta_left), ("eta_right", eta_right)):
        if not 0.0 <= eta <= 1.0 or math.isnan(eta):
            raise ValueError(f"{name} must lie in [0, 1], got {eta}")

    def draw(gen, size):
        return gen.random(size) < eta_left, gen.random(size) < eta_right

    ld, rd = chunked(len(trials), DETECTION, seed, draw, workers)
    return trials.with_detection(ld, rd)


class InsufficientDataError(DegenerateBlockError):
    pass


@dataclass(frozen=True)
class ChshEstimate:
    estimate: float
    standard_error: float
    correlators: dict[str, float]
    standard_errors: dict[str, float]
    block_counts: dict[str, float]
    total_trials: int
    coincidences: float
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "standard_error": self.standard_error,
            "correlators": dict(self.correlators),
            "standard_errors": dict(self.standard_errors),
            "block_counts": dict(self.block_counts),
            "total_trials": self.total_trials,
            "coincidences": self.coincidences,
            "seed": self.seed,
        }


def estimate_from_counts(counts, total_trials: int | None = None, seed: int | None = None) -> ChshEstimate:
    """Plug-in CHSH estimate from a 4x4 count (or weight) table.

    Passing exact probabilities instead of counts reproduces the exact value.
    """
    counts = np.asarray(counts)
    if counts.shape != (4, 4):
        raise ValueError(f"counts must be 4x4, got {counts.shape}")
    correlators, errors, blocks = {}, {}, {}
    for key, (ls, rs) in PAIRS.items():
        i = 0 if ls.value == "first" else 2
        j = 0 if rs.value == "first" else 2
        pp, pm = counts[i, j], counts[i, j + 1]
        mp, mm = counts[i + 1, j], counts[i + 1, j + 1]
        block = pp + pm + mp + mm
        if block <= 0:
            raise InsufficientDataError(f"no coincident trials in setting block {key}")
        c = float((pp - pm - mp + mm) / block)
        correlators[key] = c
        errors[key] = math.sqrt(max(0.0, 1.0 - c * c) / float(block))
        blocks[key] = block.item() if hasattr(block, "item") else block
    value = abs(correlators["AB"] - correlators["Ab"] - correlators["aB"] - correlators["ab"])
    total_se = math.sqrt(sum(e * e for e in errors.values()))
    coinc = counts.sum()
    coinc = coinc.item() if hasattr(coinc, "item") else coinc
    return ChshEstimate(
        value,
        total_se,
        correlators,
        errors,
        blocks,
        int(total_trials) if total_trials is not None else int(round(float(coinc))),
        coinc,
        seed,
    )


def estimate_chsh(trials: Trials, seed: int | None = None) -> ChshEstimate:
    """CHSH estimate from detected coincidences only (fair sampling)."""
    return estimate_from_counts(trials.joint_counts(), len(trials), seed)


_CELL_TEXT = [f"{lab.setting.value},{lab.value}" for lab in LABELS]


def trials_to_csv(trials: Trials, comments: list[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(CSV_HEADER + "\n")
    lt = [_CELL_TEXT[i] for i in trials.left.tolist()]
    rt = [_CELL_TEXT[i] for i in trials.right.tolist()]
    ld = trials.left_det.astype(np.int8).tolist()
    rd = trials.right_det.astype(np.int8).tolist()
    buf.writelines(f"{i},{l},{r},{a},{b}\n" for i, (l, r, a, b) in enumerate(zip(lt, rt, ld, rd)))
    return buf.getvalue()


def write_trials_csv(trials: Trials, path, comments: list[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(trials_to_csv(trials, comments))


def read_trials_csv(path) -> Trials:
    lookup = {text: i for i, text in enumerate(_CELL_TEXT)}
    left, right, ld, rd = [], [], [], []
    with open(path) as fh:
        lines = (line for line in fh if not line.startswith("#"))
        header = next(lines).strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        for expected, line in enumerate(lines):
            f = line.rstrip("\n").split(",")
            if int(f[0]) != expected:
                raise ValueError(f"trial index {f[0]} out of sequence")
            left.append(lookup[f"{f[1]},{f[2]}"])
            right.append(lookup[f"{f[3]},{f[4]}"])
            ld.append(f[5] == "1")
            rd.append(f[6] == "1")
    return Trials(np.array(left, np.int8), np.array(right, np.int8), np.array(ld, bool), np.array(rd, bool))
