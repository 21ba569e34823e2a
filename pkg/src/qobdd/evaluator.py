"""Acceptance semantics for k-QOBDDs.

Three independent routes compute the final amplitudes ``beta``:

* :func:`run` applies the selected matrices one at a time to ``e_0``;
* :func:`beta_by_matrix_product` multiplies the per-layer amplitude
  matrices ``mu1^T . mu^(2) ... mu^(k)`` as row vectors;
* :func:`beta_by_path_sum` sums the amplitude of every sequence of
  intermediate states ``(i2, ..., ik)`` ending in ``j``.

Inputs are bit sequences ``a`` with ``a[v - 1]`` the value of variable ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, GuardExceeded
from .program import KQobddProgram

PATH_SUM_GUARD = 10**6
TRUTH_MAP_GUARD = 20


def parse_bits(text: str) -> tuple[int, ...]:
    """``"0110"`` -> ``(0, 1, 1, 0)``."""
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"input must be a non-empty string of 0/1, got {text!r}")
    return tuple(int(c) for c in text)


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def all_inputs(n: int):
    """Every input of length ``n`` in lexicographic order."""
    return itertools.product((0, 1), repeat=n)


def _check_input(p: KQobddProgram, a: Sequence[int]) -> tuple[int, ...]:
    bits = tuple(int(b) for b in a)
    if len(bits) != p.n:
        raise DimensionError(f"input has {len(bits)} bits, program reads {p.n} variables")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"input bits must be 0 or 1, got {list(a)}")
    return bits


def selected(p: KQobddProgram, layer: int, position: int, a: Sequence[int]) -> np.ndarray:
    """Matrix applied at 0-based ``(layer, position)`` on input ``a``."""
    return p.layers[layer][position].select(a[p.ordering[position] - 1])


def run(p: KQobddProgram, a: Sequence[int]) -> np.ndarray:
    """State reached from ``e_0`` just before measurement."""
    bits = _check_input(p, a)
    state = linalg.basis_vector(p.width, p.start)
    for lam in range(p.k):
        for pos in range(p.n):
            state = selected(p, lam, pos, bits) @ state
    return state


def final_amplitude(p: KQobddProgram, a: Sequence[int], i: int) -> complex:
    if not 0 <= i < p.width:
        raise IndexError(f"state {i} out of range for width {p.width}")
    return complex(run(p, a)[i])


def acceptance_from_beta(beta: np.ndarray, accepting) -> float:
    return float(sum(abs(beta[j]) ** 2 for j in sorted(accepting)))


def acceptance(p: KQobddProgram, a: Sequence[int]) -> float:
    """Probability that measuring the final state yields an accepting state."""
    return acceptance_from_beta(run(p, a), p.accepting)


def layer_unitary(p: KQobddProgram, lam: int, a: Sequence[int]) -> np.ndarray:
    """``U_lam(a)`` for a 1-based layer index; position 1 acts first."""
    bits = _check_input(p, a)
    if not 1 <= lam <= p.k:
        raise IndexError(f"layer {lam} out of range 1..{p.k}")
    u = linalg.identity(p.width)
    for pos in range(p.n):
        u = selected(p, lam - 1, pos, bits) @ u
    return u


@dataclass(frozen=True, eq=False)
class LayerMatrices:
    """``mu1[j] = <j|U_1|0>``; ``mus[l][i, j] = <j|U_{l+2}|i>`` (no conjugation)."""

    mu1: np.ndarray
    mus: tuple[np.ndarray, ...]


def layer_matrices(p: KQobddProgram, a: Sequence[int]) -> LayerMatrices:
    us = [layer_unitary(p, lam, a) for lam in range(1, p.k + 1)]
    return LayerMatrices(us[0][:, p.start].copy(), tuple(u.T.copy() for u in us[1:]))


def beta_by_matrix_product(p: KQobddProgram, a: Sequence[int]) -> np.ndarray:
    lm = layer_matrices(p, a)
    row = lm.mu1
    for mu in lm.mus:
        row = row @ mu
    return row


def path_amplitude(p: KQobddProgram, a: Sequence[int], path: Sequence[int]) -> complex:
    """Amplitude of one computation path ``(i2, ..., ik, j)``.

    ``i_l`` is the state entering layer ``l``; ``j`` is the final state.
    """
    if len(path) != p.k:
        raise DimensionError(f"path needs {p.k} states (i2..ik, j), got {len(path)}")
    if any(not 0 <= s < p.width for s in path):
        raise IndexError(f"path {list(path)} has states outside 0..{p.width - 1}")
    lm = layer_matrices(p, a)
    return _path_product(lm, path)


def _path_product(lm: LayerMatrices, path: Sequence[int]) -> complex:
    amp = complex(lm.mu1[path[0]])
    for mu, (i, j) in zip(lm.mus, zip(path, path[1:])):
        amp *= complex(mu[i, j])
    return amp


def beta_by_path_sum(p: KQobddProgram, a: Sequence[int], j: int) -> complex:
    """``beta_j`` as the sum over all ``w**(k-1)`` paths ending in ``j``.

    Raises:
        GuardExceeded: if there are more than 10**6 paths; use
            :func:`beta_by_matrix_product` instead.
    """
    if not 0 <= j < p.width:
        raise IndexError(f"state {j} out of range for width {p.width}")
    npaths = p.width ** (p.k - 1)
    if npaths > PATH_SUM_GUARD:
        raise GuardExceeded(
            f"path sum would enumerate {npaths} paths (limit {PATH_SUM_GUARD}); "
            "use the matrix-product semantics"
        )
    lm = layer_matrices(p, a)
    total = 0j
    for prefix in itertools.product(range(p.width), repeat=p.k - 1):
        total += _path_product(lm, prefix + (j,))
    return total


@dataclass(frozen=True, eq=False)
class EvalReport:
    beta: np.ndarray
    acceptance: float
    residual_matrix_product: float
    residual_path_sum: float | None


def evaluate(p: KQobddProgram, a: Sequence[int]) -> EvalReport:
    """Run all three semantics and report the largest disagreements."""
    beta = run(p, a)
    mp = beta_by_matrix_product(p, a)
    res_mp = float(np.max(np.abs(beta - mp)))
    res_ps = None
    if p.width ** (p.k - 1) <= PATH_SUM_GUARD:
        ps = np.array([beta_by_path_sum(p, a, j) for j in range(p.width)])
        res_ps = float(np.max(np.abs(mp - ps)))
    return EvalReport(beta, acceptance_from_beta(beta, p.accepting), res_mp, res_ps)


def accepts(prob: float, threshold: float = 0.5, strict: bool = True) -> bool:
    return prob > threshold if strict else prob >= threshold


@dataclass(frozen=True)
class TruthRow:
    bits: tuple[int, ...]
    acceptance: float
    accepted: bool


def truth_map(p: KQobddProgram, threshold: float = 0.5, strict: bool = True) -> list[TruthRow]:
    """Acceptance for all ``2**n`` inputs in lexicographic order."""
    if p.n > TRUTH_MAP_GUARD:
        raise GuardExceeded(f"truth map over n={p.n} variables exceeds limit {TRUTH_MAP_GUARD}")
    rows = []
    for bits in all_inputs(p.n):
        acc = acceptance(p, bits)
        rows.append(TruthRow(bits, acc, accepts(acc, threshold, strict)))
    return rows
