import itertools

import numpy as np
import pytest

from qobdd import linalg
from qobdd.errors import ValidationError
from qobdd.evaluator import acceptance, all_inputs
from qobdd.program import (
    KQobddProgram,
    TransformationPair,
    build_rotation_program,
    identity_program,
    make_program,
    random_program,
    repeat_with_identity_layers,
    validate,
)


def test_parity_program_is_valid(p2):
    assert validate(p2) == []
    assert p2.check() is p2


def test_non_unitary_matrix_is_located(p2):
    bad = make_program(2, 2, [[(np.eye(2), [[1, 1], [0, 1]]), (np.eye(2), np.eye(2))]], {1})
    diags = validate(bad)
    assert len(diags) == 1
    assert "layer 0 position 0 t1" in diags[0] and "not unitary" in diags[0]
    with pytest.raises(ValidationError):
        bad.check()


def test_ordering_must_be_permutation():
    eye = (np.eye(2), np.eye(2))
    p = make_program(2, 2, [[eye, eye]], {0}, ordering=(1, 1))
    assert any("ordering not a permutation" in d for d in validate(p))


def test_wrong_shapes_and_counts_reported():
    eye = (np.eye(2), np.eye(2))
    p = make_program(2, 2, [[eye, (np.eye(3), np.eye(2))]], {5})
    diags = validate(p)
    assert any("accepting states out of range" in d for d in diags)
    assert any("layer 0 position 1 t0: shape 3x3" in d for d in diags)
    short = KQobddProgram(2, 2, 2, (1, 2), ((TransformationPair(*eye),) * 2,), frozenset())
    assert any("expected 2 layers" in d for d in validate(short))


def _sin2_oracle(bits, theta):
    return np.sin(sum(bits) * theta) ** 2


@pytest.mark.parametrize("n, theta", [(2, np.pi / 2), (1, np.pi / 4), (3, 0.7), (4, 1.1)])
def test_rotation_program_matches_closed_form(n, theta):
    p = build_rotation_program(n, theta, {1})
    for bits in all_inputs(n):
        assert acceptance(p, bits) == pytest.approx(_sin2_oracle(bits, theta), abs=1e-12)


def test_p2_table(p2):
    assert [round(acceptance(p2, b), 12) for b in all_inputs(2)] == [0, 1, 1, 0]


def test_rotation_single_input_half():
    p = build_rotation_program(1, np.pi / 4, {1})
    assert acceptance(p, (1,)) == pytest.approx(0.5, abs=1e-15)


def test_zero_angle_accepts_everything():
    p = build_rotation_program(3, 0.0, {0})
    assert all(acceptance(p, b) == 1 for b in all_inputs(3))


@pytest.mark.parametrize("w, k, n", [(1, 1, 1), (2, 3, 4), (3, 2, 3), (5, 1, 7)])
def test_size_is_width_times_length(w, k, n):
    p = random_program(w, k, n, seed=w * 100 + k * 10 + n)
    assert p.length == k * n
    assert p.size == w * k * n
    assert validate(p) == []


def test_random_program_is_deterministic():
    a, b = random_program(3, 2, 3, 5, shuffle_ordering=True), random_program(3, 2, 3, 5, shuffle_ordering=True)
    assert a.ordering == b.ordering and a.accepting == b.accepting
    for (_, _, _, x), (_, _, _, y) in zip(a.matrices(), b.matrices()):
        assert x.tobytes() == y.tobytes()


def test_random_accepting_is_nonempty_proper_subset():
    for seed in range(30):
        p = random_program(3, 1, 1, seed)
        assert 0 < len(p.accepting) < 3


def test_identity_padding_keeps_function(p2):
    q = repeat_with_identity_layers(p2, 3)
    assert q.k == 3 and validate(q) == []
    for bits in itertools.product((0, 1), repeat=2):
        assert acceptance(q, bits) == pytest.approx(acceptance(p2, bits), abs=1e-15)


def test_matrices_are_read_only(p2):
    with pytest.raises(ValueError):
        p2.layers[0][0].t0[0, 0] = 5


def test_empty_accepting_is_legal():
    assert validate(identity_program(2, 2, set())) == []


def test_identity_layer_rotation_matrix():
    p = build_rotation_program(1, 0.2, {1})
    assert np.array_equal(p.pair(0, 0).t1, linalg.rotation(0.2))
