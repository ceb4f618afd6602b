"""Deterministic local-hidden-variable strategies as a classical oracle.

A strategy fixes the outcomes of both settings on both sides in advance.
Stochastic models are mixtures of the 16 strategies, and the CHSH expression
is affine in the mixture weights, so its extremes sit on single strategies.
"""
from __future__ import annotations

import itertools
import math
from typing import NamedTuple

import numpy as np

from bellsim.sampler import LHV, Trials, chunked, inverse_cdf


class Strategy(NamedTuple):
    A: int
    a: int
    B: int
    b: int

    def signed_chsh(self) -> int:
        return self.A * self.B - self.A * self.b - self.a * self.B - self.a * self.b


def enumerate_strategies() -> list[Strategy]:
    """All 16 sign assignments, +1 before -1, lexicographic in (A, a, B, b)."""
    return [Strategy(*s) for s in itertools.product((1, -1), repeat=4)]


def strategy_chsh(s: Strategy) -> int:
    return abs(s.signed_chsh())


def lhv_chsh_max() -> int:
    return max(strategy_chsh(s) for s in enumerate_strategies())


def mixture_chsh_max() -> int:
    """Max of |sum_i w_i s_i| over the probability simplex: attained at a vertex."""
    signed = [s.signed_chsh() for s in enumerate_strategies()]
    return max(abs(max(signed)), abs(min(signed)))


def check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (16,):
        raise ValueError(f"mixture needs 16 weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("mixture weights must be finite and nonnegative")
    if abs(w.sum() - 1) > 1e-9:
        raise ValueError(f"mixture weights sum to {w.sum()!r}, expected 1")
    return w


def mixture_chsh(weights) -> float:
    """|<AB> - <Ab> - <aB> - <ab>| for a mixture, from mixture-averaged correlators."""
    w = check_weights(weights)
    strategies = enumerate_strategies()
    corr = {
        key: math.fsum(wi * getattr(s, key[0]) * getattr(s, key[1]) for wi, s in zip(w, strategies))
        for key in ("AB", "Ab", "aB", "ab")
    }
    return abs(corr["AB"] - corr["Ab"] - corr["aB"] - corr["ab"])


def uniform_mixture() -> np.ndarray:
    return np.full(16, 1 / 16)


def point_mixture(s: Strategy) -> np.ndarray:
    w = np.zeros(16)
    w[enumerate_strategies().index(s)] = 1.0
    return w


# table[strategy, side, setting] -> outcome index into LABELS
def _outcome_table() -> np.ndarray:
    table = np.empty((16, 2, 2), dtype=np.int8)
    for k, s in enumerate(enumerate_strategies()):
        for side, (first, second) in enumerate(((s.A, s.a), (s.B, s.b))):
            table[k, side, 0] = 0 if first == 1 else 1
            table[k, side, 1] = 2 if second == 1 else 3
    return table


_OUTCOMES = _outcome_table()


def lhv_sample(mixture, n: int, seed: int, workers: int = 1) -> Trials:
    """Trials from a strategy mixture with uniform, independent settings per side."""
    w = check_weights(mixture)

    def draw(gen, size):
        k = inverse_cdf(w, gen.random(size))
        ls = gen.integers(0, 2, size)
        rs = gen.integers(0, 2, size)
        return _OUTCOMES[k, 0, ls], _OUTCOMES[k, 1, rs]

    lo, ro = chunked(n, LHV, seed, draw, workers)
    return Trials.all_detected(lo, ro)
