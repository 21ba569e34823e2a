"""Leveled quantum branching programs: QOBDDs and k-QOBDDs.

A k-QOBDD of width ``w`` on ``n`` variables is ``k`` layers of ``n``
transformation pairs. Position ``i`` of every layer reads variable
``ordering[i]`` (1-based), so all layers share one variable ordering.
States are 0-based: a 1-based ket ``|i>`` is index ``i - 1``, the start
state is index 0, and ``accepting`` is a set of indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import ValidationError


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TransformationPair:
    """The matrices applied when the variable read is 0 (``t0``) or 1 (``t1``)."""

    t0: np.ndarray
    t1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t0", _frozen(self.t0))
        object.__setattr__(self, "t1", _frozen(self.t1))

    def select(self, bit: int) -> np.ndarray:
        return self.t1 if bit else self.t0


@dataclass(frozen=True, eq=False)
class KQobddProgram:
    """A k-QOBDD; a QOBDD is the special case ``k == 1``.

    Construction does not check well-formedness; call :func:`validate` or
    :meth:`check` for that.
    """

    n: int
    k: int
    width: int
    ordering: tuple[int, ...]
    layers: tuple[tuple[TransformationPair, ...], ...]
    accepting: frozenset[int]
    name: str | None = None
    comment: str | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "ordering", tuple(int(v) for v in self.ordering))
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        object.__setattr__(self, "accepting", frozenset(int(s) for s in self.accepting))

    @property
    def start(self) -> int:
        return 0

    @property
    def length(self) -> int:
        return self.k * self.n

    @property
    def size(self) -> int:
        """Width times length."""
        return self.width * self.length

    @property
    def is_qobdd(self) -> bool:
        return self.k == 1

    def pair(self, layer: int, position: int) -> TransformationPair:
        """Pair at 0-based ``(layer, position)``."""
        return self.layers[layer][position]

    def matrices(self):
        """Yield ``(layer, position, label, matrix)`` for every stored matrix."""
        for lam, layer in enumerate(self.layers):
            for pos, pr in enumerate(layer):
                yield lam, pos, "t0", pr.t0
                yield lam, pos, "t1", pr.t1

    def check(self) -> "KQobddProgram":
        diags = validate(self)
        if diags:
            raise ValidationError(f"invalid program: {diags[0]}", diags)
        return self

    def with_accepting(self, accepting: Iterable[int], name: str | None = None) -> "KQobddProgram":
        return KQobddProgram(
            self.n, self.k, self.width, self.ordering, self.layers,
            frozenset(accepting), name if name is not None else self.name, self.comment,
        )


QobddProgram = KQobddProgram


def validate(p: KQobddProgram, tol: float = linalg.DEFAULT_TOL) -> list[str]:
    """Every violated well-formedness rule of ``p``, with its location.

    An empty list means the program is valid.
    """
    diags: list[str] = []
    if not isinstance(p.n, int) or p.n < 1:
        diags.append(f"n must be a positive integer, got {p.n!r}")
    if not isinstance(p.k, int) or p.k < 1:
        diags.append(f"k must be a positive integer, got {p.k!r}")
    if not isinstance(p.width, int) or p.width < 1:
        diags.append(f"width must be a positive integer, got {p.width!r}")
    if diags:
        return diags

    if len(p.ordering) != p.n or sorted(p.ordering) != list(range(1, p.n + 1)):
        diags.append(f"ordering not a permutation of 1..{p.n}: {list(p.ordering)}")

    bad_acc = sorted(s for s in p.accepting if not 0 <= s < p.width)
    if bad_acc:
        diags.append(f"accepting states out of range 0..{p.width - 1}: {bad_acc}")

    if len(p.layers) != p.k:
        diags.append(f"expected {p.k} layers, found {len(p.layers)}")
    for lam, layer in enumerate(p.layers):
        if len(layer) != p.n:
            diags.append(f"layer {lam}: expected {p.n} pairs, found {len(layer)}")

    for lam, pos, label, m in p.matrices():
        where = f"layer {lam} position {pos} {label}"
        if m.shape != (p.width, p.width):
            diags.append(f"{where}: shape {m.shape[0]}x{m.shape[1]}, expected {p.width}x{p.width}")
        elif not np.all(np.isfinite(m)):
            diags.append(f"{where}: non-finite entries")
        elif not linalg.is_unitary(m, tol):
            diags.append(
                f"{where}: matrix is not unitary (defect {linalg.unitarity_defect(m):.3g})"
            )
    return diags


def make_program(
    n: int,
    width: int,
    layers: Sequence[Sequence[tuple]],
    accepting: Iterable[int],
    ordering: Sequence[int] | None = None,
    name: str | None = None,
    comment: str | None = None,
) -> KQobddProgram:
    """Build a program from nested ``(t0, t1)`` tuples; ``k`` is ``len(layers)``."""
    if ordering is None:
        ordering = range(1, n + 1)
    built = tuple(tuple(TransformationPair(t0, t1) for t0, t1 in layer) for layer in layers)
    return KQobddProgram(n, len(built), width, tuple(ordering), built,
                         frozenset(accepting), name, comment)


def build_rotation_program(n: int, theta: float, accepting: Iterable[int], k: int = 1) -> KQobddProgram:
    """Width-2 program: identity on bit 0, ``rotation(theta)`` on bit 1.

    With ``F = {1}`` and ``k = 1`` the acceptance on an input with ``t`` ones
    is ``sin(t*theta)**2``; ``k`` layers behave like angle ``k*theta``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    pr = (linalg.identity(2), linalg.rotation(theta))
    return make_program(n, 2, [[pr] * n for _ in range(k)], accepting,
                        name=f"rotation n={n} theta={theta!r} k={k}")


def identity_program(n: int, width: int, accepting: Iterable[int], k: int = 1) -> KQobddProgram:
    pr = (linalg.identity(width), linalg.identity(width))
    return make_program(n, width, [[pr] * n for _ in range(k)], accepting, name="identity")


def always_accept(n: int, k: int = 1) -> KQobddProgram:
    return identity_program(n, 1, {0}, k)


def always_reject(n: int, k: int = 1) -> KQobddProgram:
    return identity_program(n, 1, set(), k)


def repeat_with_identity_layers(p: KQobddProgram, k: int) -> KQobddProgram:
    """Pad a program with identity layers up to ``k`` layers (same function)."""
    if k < p.k:
        raise ValueError(f"cannot shrink {p.k} layers to {k}")
    eye = linalg.identity(p.width)
    pad = tuple(tuple(TransformationPair(eye, eye) for _ in range(p.n)) for _ in range(k - p.k))
    return KQobddProgram(p.n, k, p.width, p.ordering, p.layers + pad, p.accepting,
                         p.name, p.comment)


def random_program(
    width: int,
    k: int,
    n: int,
    seed: int,
    accepting: Iterable[int] | None = None,
    shuffle_ordering: bool = False,
) -> KQobddProgram:
    """Random k-QOBDD; a pure function of its arguments.

    One ``PCG64`` stream seeded by ``seed`` supplies, in order: the ordering
    permutation (only if ``shuffle_ordering``), the accepting set (only if
    not given; a uniformly sized non-empty proper subset when ``width > 1``,
    ``{0}`` or empty for ``width == 1``), then the matrices layer by layer,
    position by position, ``t0`` before ``t1``.
    """
    rng = linalg.make_rng(seed)
    ordering = list(range(1, n + 1))
    if shuffle_ordering:
        ordering = [int(v) + 1 for v in rng.permutation(n)]
    if accepting is None:
        if width == 1:
            accepting = [0] if rng.integers(2) else []
        else:
            size = int(rng.integers(1, width))
            accepting = [int(s) for s in rng.choice(width, size, replace=False)]
    layers = []
    for _ in range(k):
        layer = []
        for _ in range(n):
            t0 = linalg.random_unitary_from(rng, width)
            t1 = linalg.random_unitary_from(rng, width)
            layer.append((t0, t1))
        layers.append(layer)
    return make_program(n, width, layers, accepting, ordering,
                        name=f"random w={width} k={k} n={n} seed={seed}")


def programs_close(p: KQobddProgram, q: KQobddProgram, tol: float = 0.0) -> bool:
    """Structural equality with matrices compared entrywise within ``tol``."""
    if (p.n, p.k, p.width, p.ordering, p.accepting) != (q.n, q.k, q.width, q.ordering, q.accepting):
        return False
    for (_, _, _, a), (_, _, _, b) in zip(p.matrices(), q.matrices()):
        if a.shape != b.shape or np.max(np.abs(a - b)) > tol:
            return False
    return True
