"""Deterministic leveled OBDDs as full-width transition tables.

Used as the classical baseline (the neighbored-ones function ``NO_n``) and
as a source of exact QOBDDs: a reversible OBDD, whose transitions are all
bijections, lifts to a QOBDD built from permutation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .program import KQobddProgram, make_program


@dataclass(frozen=True)
class DetObdd:
    """``transitions[i][eps][s]`` is the successor of state ``s`` at position ``i``
    when the variable ``ordering[i]`` has value ``eps``. Start state is 0.
    """

    n: int
    width: int
    ordering: tuple[int, ...]
    transitions: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    accepting: frozenset[int]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "ordering", tuple(int(v) for v in self.ordering))
        object.__setattr__(
            self, "transitions",
            tuple((tuple(int(s) for s in d0), tuple(int(s) for s in d1)) for d0, d1 in self.transitions),
        )
        object.__setattr__(self, "accepting", frozenset(int(s) for s in self.accepting))


def validate_det(d: DetObdd) -> list[str]:
    diags = []
    if d.n < 1 or d.width < 1:
        return [f"n and width must be positive, got n={d.n}, width={d.width}"]
    if sorted(d.ordering) != list(range(1, d.n + 1)):
        diags.append(f"ordering not a permutation of 1..{d.n}: {list(d.ordering)}")
    if len(d.transitions) != d.n:
        diags.append(f"expected {d.n} transition pairs, found {len(d.transitions)}")
    for i, pair in enumerate(d.transitions):
        for eps, delta in enumerate(pair):
            if len(delta) != d.width:
                diags.append(f"position {i} bit {eps}: table has {len(delta)} entries, expected {d.width}")
            elif any(not 0 <= s < d.width for s in delta):
                diags.append(f"position {i} bit {eps}: successor out of range 0..{d.width - 1}")
    bad = sorted(s for s in d.accepting if not 0 <= s < d.width)
    if bad:
        diags.append(f"accepting states out of range 0..{d.width - 1}: {bad}")
    return diags


def eval_det(d: DetObdd, a: Sequence[int]) -> bool:
    """Follow the path activated by ``a``; accept iff it ends in an accepting state."""
    if len(a) != d.n:
        raise DimensionError(f"input has {len(a)} bits, OBDD reads {d.n} variables")
    state = 0
    for i, pair in enumerate(d.transitions):
        state = pair[int(a[d.ordering[i] - 1])][state]
    return state in d.accepting


def neighbored_ones(a: Sequence[int]) -> bool:
    """True iff two adjacent variables are both 1."""
    return any(a[i] and a[i + 1] for i in range(len(a) - 1))


def build_no_n(n: int) -> DetObdd:
    """Width-3 OBDD for ``NO_n``.

    States: 0 = last bit 0, 1 = last bit 1, 2 = found (absorbing, accepting).
    """
    if n < 2:
        raise ValueError(f"NO_n needs n >= 2, got {n}")
    step = ((0, 0, 2), (1, 2, 2))
    return DetObdd(n, 3, tuple(range(1, n + 1)), (step,) * n, frozenset({2}), f"NO_{n}")


def build_parity(n: int, accepting: Iterable[int] = (1,)) -> DetObdd:
    """Width-2 reversible OBDD tracking the parity of the ones read."""
    step = ((0, 1), (1, 0))
    return DetObdd(n, 2, tuple(range(1, n + 1)), (step,) * n, frozenset(accepting), f"parity_{n}")


def is_reversible(d: DetObdd) -> bool:
    return all(sorted(delta) == list(range(d.width)) for pair in d.transitions for delta in pair)


def permutation_matrix(delta: Sequence[int]) -> np.ndarray:
    """Matrix sending ``e_s`` to ``e_delta[s]``."""
    w = len(delta)
    m = np.zeros((w, w), dtype=np.complex128)
    for s, t in enumerate(delta):
        m[t, s] = 1.0
    return m


def lift_reversible(d: DetObdd) -> KQobddProgram:
    """QOBDD with permutation matrices; acceptance is exactly 0 or 1.

    Raises:
        ValidationError: if some transition is not a bijection.
    """
    if not is_reversible(d):
        raise ValidationError("cannot lift: OBDD is not reversible (some transition is not a bijection)")
    layer = [(permutation_matrix(d0), permutation_matrix(d1)) for d0, d1 in d.transitions]
    return make_program(d.n, d.width, [layer], d.accepting, d.ordering,
                        name=f"lift({d.name})" if d.name else "lift")
