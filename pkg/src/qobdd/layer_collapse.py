"""Collapse a k-QOBDD into a single-pass QOBDD.

:func:`collapse` runs all ``k`` layers in parallel on the product space
``D^(x)k`` plus two sink states ``t0`` (rejecting) and ``t1`` (accepting).
A preparation unitary ``V`` applied before the first variable spreads the
start state over every guess ``|0 i2 ... ik>`` of the intermediate states.
Product basis states are indexed with the first layer's digit most
significant, so ``|d1 ... dk>`` is ``sum(d_l * w**(k - l))``.

The intended acceptance law for that construction is the affine map
:func:`predicted_acceptance`. It holds for ``k == 1`` only: the sum over
guesses interferes across *inconsistent* paths (guess ``i_{l+1}`` differing
from the state actually left by layer ``l``), so for ``k >= 2`` measured
acceptance deviates from the prediction in general, including on the
double-parity example. :func:`collapse_report` exposes the residual.

:func:`collapse_coherent` repairs the construction by keeping a copy of the
guessed states next to the computation registers and closing with a unitary
``W`` that maps the uniform superposition of consistent paths ending in ``j``
onto one basis state. Its acceptance is exactly
:func:`coherent_predicted_acceptance`, an increasing affine map with fixed
point 1/2, at width ``w**(2k-1) + 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import GuardExceeded
from .evaluator import acceptance, layer_unitary
from .program import KQobddProgram, TransformationPair

COLLAPSE_GUARD = 10**4


@dataclass(frozen=True)
class CollapsedSpace:
    """Index bookkeeping for ``D^(x)k`` plus the sinks ``t0``, ``t1``."""

    w: int
    k: int

    @property
    def m(self) -> int:
        return self.w ** (self.k - 1)

    @property
    def core(self) -> int:
        return self.w ** self.k

    @property
    def dim(self) -> int:
        return self.core + 2

    @property
    def t0(self) -> int:
        return self.core

    @property
    def t1(self) -> int:
        return self.core + 1

    def index(self, digits: Sequence[int]) -> int:
        if len(digits) != self.k or any(not 0 <= d < self.w for d in digits):
            raise IndexError(f"bad product state {list(digits)} for w={self.w}, k={self.k}")
        idx = 0
        for d in digits:
            idx = idx * self.w + d
        return idx

    def digits(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.core:
            raise IndexError(f"index {index} is not a product state")
        out = []
        for _ in range(self.k):
            index, d = divmod(index, self.w)
            out.append(d)
        return tuple(reversed(out))


def _guard(dim: int) -> None:
    if dim > COLLAPSE_GUARD:
        raise GuardExceeded(f"collapsed width {dim} exceeds limit {COLLAPSE_GUARD}")


def tensor_layer_transforms(p: KQobddProgram, pos: int, eps: int) -> np.ndarray:
    """Kronecker product over layers of the matrices at 0-based ``pos`` for bit ``eps``."""
    if not 0 <= pos < p.n:
        raise IndexError(f"position {pos} out of range 0..{p.n - 1}")
    return linalg.tensor_all([layer[pos].select(eps) for layer in p.layers])


def tensor_unitary(p: KQobddProgram, a: Sequence[int]) -> np.ndarray:
    """``U_1(a) (x) ... (x) U_k(a)``, the product-space action on input ``a``."""
    return linalg.tensor_all([layer_unitary(p, lam, a) for lam in range(1, p.k + 1)])


def path_superposition_amplitude(p: KQobddProgram, a: Sequence[int], path: Sequence[int]) -> complex:
    """Amplitude of ``|i2 ... ik j>`` in ``U_(x)(a) |0 i2 ... ik>``.

    Equals :func:`qobdd.evaluator.path_amplitude` for the same path.
    """
    space = CollapsedSpace(p.width, p.k)
    start = space.index((0,) + tuple(path[:-1]))
    end = space.index(tuple(path))
    return complex(tensor_unitary(p, a)[end, start])


def v_column(w: int, k: int) -> np.ndarray:
    """Image of the start state under ``V``."""
    space = CollapsedSpace(w, k)
    m = space.m
    col = np.zeros(space.dim, dtype=np.complex128)
    # digits (0, i2, ..., ik) occupy indices 0..m-1
    col[:m] = 1.0 / np.sqrt(2 * m)
    col[space.t0] = 1.0 / (2 * np.sqrt(m))
    col[space.t1] = np.sqrt(2 * m - 1) / (2 * np.sqrt(m))
    return col


def build_v(w: int, k: int) -> np.ndarray:
    if w < 1 or k < 1:
        raise ValueError("w and k must be positive")
    _guard(w**k + 2)
    return linalg.complete_unitary(v_column(w, k), 0)


def _extend(m: np.ndarray) -> np.ndarray:
    # identity on the two sinks
    return linalg.direct_sum(m, linalg.identity(2))


def collapse(p: KQobddProgram) -> KQobddProgram:
    """Single-layer QOBDD of width ``w**k + 2`` built from ``p``.

    Position 0 applies ``V`` and then the product transformation; the
    accepting set is every product state whose last digit is in ``F``,
    plus ``t1``.
    """
    space = CollapsedSpace(p.width, p.k)
    _guard(space.dim)
    v = build_v(p.width, p.k)
    pairs = []
    for pos in range(p.n):
        mats = [_extend(tensor_layer_transforms(p, pos, eps)) for eps in (0, 1)]
        if pos == 0:
            mats = [t @ v for t in mats]
        pairs.append(TransformationPair(*mats))
    accepting = {i for i in range(space.core) if i % p.width in p.accepting} | {space.t1}
    return KQobddProgram(p.n, 1, space.dim, p.ordering, (tuple(pairs),), frozenset(accepting),
                         f"collapse({p.name})")


def predicted_acceptance(acc: float, w: int, k: int) -> float:
    """``acc / (2m) + (2m - 1) / (4m)`` with ``m = w**(k-1)``."""
    if not -linalg.DEFAULT_TOL <= acc <= 1 + linalg.DEFAULT_TOL:
        raise ValueError(f"acceptance probability out of range: {acc!r}")
    m = w ** (k - 1)
    return acc / (2 * m) + (2 * m - 1) / (4 * m)


# -- coherent variant -------------------------------------------------------

@dataclass(frozen=True)
class CoherentSpace:
    """``k`` computation registers, ``k-1`` copy registers, then ``t0``, ``t1``.

    Basis index is ``computation_index * m + copy_index``.
    """

    w: int
    k: int

    @property
    def m(self) -> int:
        return self.w ** (self.k - 1)

    @property
    def core(self) -> int:
        return self.w ** self.k * self.m

    @property
    def dim(self) -> int:
        return self.core + 2

    @property
    def t0(self) -> int:
        return self.core

    @property
    def t1(self) -> int:
        return self.core + 1

    def readout(self, j: int) -> int:
        """Basis state that collects the amplitude of final state ``j``."""
        return j * self.m

    def consistent_state(self, j: int) -> np.ndarray:
        """Uniform superposition of ``|g, j>|g>`` over all guesses ``g``."""
        vec = np.zeros(self.core, dtype=np.complex128)
        for g in range(self.m):
            vec[(g * self.w + j) * self.m + g] = 1.0
        return vec / np.sqrt(self.m)


def coherent_v_column(w: int, k: int) -> np.ndarray:
    space = CoherentSpace(w, k)
    m = space.m
    col = np.zeros(space.dim, dtype=np.complex128)
    for g in range(m):
        # computation digits (0, g) have index g
        col[g * m + g] = 1.0 / np.sqrt(2 * m)
    col[space.t0] = 1.0 / (2 * m)
    col[space.t1] = np.sqrt(0.5 - 1.0 / (4 * m * m))
    return col


def build_w(w: int, k: int) -> np.ndarray:
    """Unitary on the core sending each consistent state to its readout state."""
    space = CoherentSpace(w, k)
    targets = [space.consistent_state(j) for j in range(w)]
    c = linalg.complete_unitary_columns(targets, [space.readout(j) for j in range(w)])
    return c.conj().T


def collapse_coherent(p: KQobddProgram) -> KQobddProgram:
    """Single-layer QOBDD of width ``w**(2k-1) + 2`` whose acceptance is
    ``acc / (2 m**2) + 1/2 - 1/(4 m**2)``.
    """
    space = CoherentSpace(p.width, p.k)
    _guard(space.dim)
    v = linalg.complete_unitary(coherent_v_column(p.width, p.k), 0)
    w_ext = _extend(build_w(p.width, p.k))
    copies = linalg.identity(space.m)
    pairs = []
    for pos in range(p.n):
        mats = [_extend(np.kron(tensor_layer_transforms(p, pos, eps), copies)) for eps in (0, 1)]
        if pos == 0:
            mats = [t @ v for t in mats]
        if pos == p.n - 1:
            mats = [w_ext @ t for t in mats]
        pairs.append(TransformationPair(*mats))
    accepting = {space.readout(j) for j in p.accepting} | {space.t1}
    return KQobddProgram(p.n, 1, space.dim, p.ordering, (tuple(pairs),), frozenset(accepting),
                         f"collapse_coherent({p.name})")


def coherent_predicted_acceptance(acc: float, w: int, k: int) -> float:
    if not -linalg.DEFAULT_TOL <= acc <= 1 + linalg.DEFAULT_TOL:
        raise ValueError(f"acceptance probability out of range: {acc!r}")
    m2 = (w ** (k - 1)) ** 2
    return acc / (2 * m2) + 0.5 - 1.0 / (4 * m2)


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class CollapseReport:
    bits: tuple[int, ...]
    original: float
    collapsed: float
    predicted: float

    @property
    def residual(self) -> float:
        return abs(self.collapsed - self.predicted)


def collapse_report(
    p: KQobddProgram,
    a: Sequence[int],
    collapsed: KQobddProgram | None = None,
    coherent: bool = False,
) -> CollapseReport:
    if collapsed is None:
        collapsed = collapse_coherent(p) if coherent else collapse(p)
    orig = acceptance(p, a)
    predict = coherent_predicted_acceptance if coherent else predicted_acceptance
    return CollapseReport(tuple(a), orig, acceptance(collapsed, a), predict(orig, p.width, p.k))


def collapse_table(p: KQobddProgram, coherent: bool = False) -> list[CollapseReport]:
    collapsed = collapse_coherent(p) if coherent else collapse(p)
    return [collapse_report(p, bits, collapsed, coherent)
            for bits in itertools.product((0, 1), repeat=p.n)]
