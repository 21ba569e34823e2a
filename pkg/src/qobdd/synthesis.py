"""Boolean synthesis of programs through the tensor product.

The product program runs both factors side by side on the state space
``D1 x D2``, with ``(i, j)`` stored at index ``i * w2 + j``. Final amplitudes
multiply: ``fa((d1, d2), a) == fa(d1, a) * fa(d2, a)``. Only the accepting set
differs between ``and``, ``or`` and the plain product.
"""

from __future__ import annotations

from typing import Iterable

from . import linalg
from .errors import DimensionError
from .program import KQobddProgram, TransformationPair


def product_index(i: int, j: int, w2: int) -> int:
    return i * w2 + j


def split_index(index: int, w2: int) -> tuple[int, int]:
    return divmod(index, w2)


def _check_compatible(b1: KQobddProgram, b2: KQobddProgram) -> None:
    for field in ("n", "k", "ordering"):
        if getattr(b1, field) != getattr(b2, field):
            raise DimensionError(
                f"programs differ in {field}: {getattr(b1, field)!r} vs {getattr(b2, field)!r}"
            )


def tensor_programs(b1: KQobddProgram, b2: KQobddProgram, accepting: Iterable[int]) -> KQobddProgram:
    """Product program with pairs ``(T0 (x) S0, T1 (x) S1)`` at each level."""
    _check_compatible(b1, b2)
    layers = tuple(
        tuple(
            TransformationPair(linalg.tensor_product(p.t0, q.t0), linalg.tensor_product(p.t1, q.t1))
            for p, q in zip(l1, l2)
        )
        for l1, l2 in zip(b1.layers, b2.layers)
    )
    name = f"({b1.name or 'B1'}) x ({b2.name or 'B2'})"
    return KQobddProgram(b1.n, b1.k, b1.width * b2.width, b1.ordering, layers,
                         frozenset(accepting), name)


def and_synthesis(b1: KQobddProgram, b2: KQobddProgram) -> KQobddProgram:
    """Accepting set ``F1 x F2``; accepts with probability ``p1 * p2``."""
    acc = {product_index(i, j, b2.width) for i in b1.accepting for j in b2.accepting}
    out = tensor_programs(b1, b2, acc)
    return out.with_accepting(acc, f"and({b1.name}, {b2.name})")


def or_synthesis(b1: KQobddProgram, b2: KQobddProgram) -> KQobddProgram:
    """Accepting set ``F1 x D2 | D1 x F2``; probability ``p1 + p2 - p1 * p2``."""
    acc = {
        product_index(i, j, b2.width)
        for i in range(b1.width)
        for j in range(b2.width)
        if i in b1.accepting or j in b2.accepting
    }
    out = tensor_programs(b1, b2, acc)
    return out.with_accepting(acc, f"or({b1.name}, {b2.name})")


def not_synthesis(b: KQobddProgram) -> KQobddProgram:
    """Same transformations, complemented accepting set."""
    return b.with_accepting(set(range(b.width)) - b.accepting, f"not({b.name})")


def self_conjunction(b: KQobddProgram, times: int) -> KQobddProgram:
    """``times``-fold ``and`` of ``b`` with itself; width ``b.width**times``.

    Acceptance becomes ``p**times``. Building block for amplification schemes.
    """
    if times < 1:
        raise ValueError("times must be at least 1")
    out = b
    for _ in range(times - 1):
        out = and_synthesis(out, b)
    return out
