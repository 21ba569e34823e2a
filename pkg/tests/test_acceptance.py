"""Exit criteria, one test per criterion, each at its pinned tolerance.

Run alone with ``pytest tests/test_acceptance.py``; a summary line per
criterion is printed at the end of the session.
"""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from qobdd import linalg
from qobdd.classical import build_no_n, build_parity, eval_det, lift_reversible, neighbored_ones
from qobdd.evaluator import (
    acceptance,
    all_inputs,
    beta_by_matrix_product,
    beta_by_path_sum,
    final_amplitude,
    run,
)
from qobdd.io import parse_program, serialize_program
from qobdd.layer_collapse import (
    CollapsedSpace,
    build_v,
    coherent_predicted_acceptance,
    collapse,
    collapse_coherent,
    predicted_acceptance,
    tensor_layer_transforms,
)
from qobdd.program import build_rotation_program, random_program
from qobdd.synthesis import and_synthesis, product_index, tensor_programs

TOL = 1e-9
EXACT_V = 1e-12


def instance_family():
    """54 random k-QOBDDs: six per (w, k) in {1,2,3}^2, n cycling through 1..4."""
    progs = []
    for w, k in itertools.product((1, 2, 3), repeat=2):
        for rep in range(6):
            count = len(progs)
            progs.append(random_program(w, k, 1 + count % 4, seed=1000 + count,
                                        shuffle_ordering=rep % 2 == 1))
    return progs


FAMILY = instance_family()


def double_parity():
    return build_rotation_program(2, np.pi / 4, {1}, k=2)


def test_family_spans_required_ranges():
    assert len(FAMILY) >= 50
    assert {(p.width, p.k) for p in FAMILY} == set(itertools.product((1, 2, 3), repeat=2))
    assert {p.n for p in FAMILY} == {1, 2, 3, 4}


def test_c1_semantics_agreement(criterion):
    start = time.perf_counter()
    worst_mp = worst_ps = 0.0
    for p in FAMILY:
        for bits in all_inputs(p.n):
            seq = run(p, bits)
            mp = beta_by_matrix_product(p, bits)
            ps = np.array([beta_by_path_sum(p, bits, j) for j in range(p.width)])
            worst_mp = max(worst_mp, float(np.max(np.abs(seq - mp))))
            worst_ps = max(worst_ps, float(np.max(np.abs(mp - ps))))
    elapsed = time.perf_counter() - start
    ok = worst_mp < TOL and worst_ps < TOL and elapsed < 10
    criterion("C1 semantics agreement", ok,
              f"{len(FAMILY)} programs, max|run-mp|={worst_mp:.2e}, max|mp-ps|={worst_ps:.2e}, {elapsed:.2f}s")
    assert ok


def test_c2_tensor_law(criterion):
    worst_fa = worst_and = 0.0
    npairs = 0
    for s in range(24):
        w1, w2 = 1 + s % 3, 1 + (s // 3) % 3
        n, k = 1 + s % 4, 1 + s % 2
        b1 = random_program(w1, k, n, 2000 + 2 * s)
        b2 = random_program(w2, k, n, 2001 + 2 * s)
        prod = tensor_programs(b1, b2, set())
        conj = and_synthesis(b1, b2)
        npairs += 1
        for bits in all_inputs(n):
            for d1 in range(w1):
                for d2 in range(w2):
                    got = final_amplitude(prod, bits, product_index(d1, d2, w2))
                    want = final_amplitude(b1, bits, d1) * final_amplitude(b2, bits, d2)
                    worst_fa = max(worst_fa, abs(got - want))
            worst_and = max(worst_and, abs(acceptance(conj, bits) - acceptance(b1, bits) * acceptance(b2, bits)))
    ok = npairs >= 20 and worst_fa < TOL and worst_and < TOL
    criterion("C2 tensor law", ok, f"{npairs} pairs, max fa residual={worst_fa:.2e}, max and residual={worst_and:.2e}")
    assert ok


def test_c3_collapse_identity(criterion):
    start = time.perf_counter()
    worst = 0.0
    failing = 0
    for p in FAMILY + [double_parity()]:
        q = collapse(p)
        bad = False
        for bits in all_inputs(p.n):
            res = abs(acceptance(q, bits) - predicted_acceptance(acceptance(p, bits), p.width, p.k))
            worst = max(worst, res)
            bad |= res >= TOL
        failing += bad
    demo = [acceptance(collapse(double_parity()), b) for b in all_inputs(2)]
    demo_ok = np.allclose(demo, [0.375, 0.625, 0.625, 0.375], atol=TOL, rtol=0)
    elapsed = time.perf_counter() - start
    ok = worst < TOL and demo_ok and elapsed < 30
    criterion("C3 collapse identity", ok,
              f"{failing}/{len(FAMILY) + 1} programs off, max residual={worst:.3g}, "
              f"demo={[round(x, 6) for x in demo]} (want 0.375/0.625), {elapsed:.2f}s")
    assert ok


def test_c4_threshold_preservation(criterion):
    discrepancies = 0
    total = 0
    for p in FAMILY + [double_parity()]:
        q = collapse(p)
        for bits in all_inputs(p.n):
            total += 1
            discrepancies += (acceptance(p, bits) > 0.5) != (acceptance(q, bits) > 0.5)
    # programs with acceptance exactly 1/2 on input 1 for k = 1, 2, 3
    halves = []
    for k in (1, 2, 3):
        p = build_rotation_program(1, np.pi / (4 * k), {1}, k=k)
        assert abs(acceptance(p, (1,)) - 0.5) < 1e-12
        halves.append(acceptance(collapse(p), (1,)))
    half_ok = all(abs(h - 0.5) < TOL for h in halves) and abs(predicted_acceptance(0.5, 3, 3) - 0.5) < TOL
    ok = discrepancies == 0 and half_ok
    criterion("C4 threshold preservation", ok,
              f"{discrepancies}/{total} inputs flip the >1/2 predicate; "
              f"acc=1/2 maps to {[round(h, 6) for h in halves]} for k=1,2,3")
    assert ok


def test_supplementary_coherent_collapse(criterion):
    """Not an exit criterion: the guess-register variant on the C3/C4 family."""
    worst = 0.0
    flips = 0
    for p in FAMILY + [double_parity()]:
        q = collapse_coherent(p)
        for bits in all_inputs(p.n):
            orig, got = acceptance(p, bits), acceptance(q, bits)
            worst = max(worst, abs(got - coherent_predicted_acceptance(orig, p.width, p.k)))
            flips += (orig > 0.5) != (got > 0.5)
    ok = worst < TOL and flips == 0
    criterion("supplementary coherent collapse", ok,
              f"max residual={worst:.2e} vs acc/(2m^2)+1/2-1/(4m^2), {flips} threshold flips")
    assert ok


def test_c5_unitarity_suite(criterion):
    checked = 0
    worst = 0.0

    def check(m):
        nonlocal checked, worst
        checked += 1
        worst = max(worst, linalg.unitarity_defect(m))

    for p in FAMILY + [double_parity()]:
        for *_, m in p.matrices():
            check(m)
        for *_, m in collapse(p).matrices():
            check(m)
        for pos in range(p.n):
            for eps in (0, 1):
                check(tensor_layer_transforms(p, pos, eps))
    for s in range(10):
        b1, b2 = random_program(2, 1, 2, 3000 + s), random_program(3, 1, 2, 3100 + s)
        for *_, m in and_synthesis(b1, b2).matrices():
            check(m)
    for n in range(1, 6):
        for *_, m in lift_reversible(build_parity(n)).matrices():
            check(m)

    v_worst = 0.0
    for w, k in itertools.product((1, 2, 3), repeat=2):
        v = build_v(w, k)
        check(v)
        m = w ** (k - 1)
        space = CollapsedSpace(w, k)
        want = np.zeros(space.dim)
        for rest in itertools.product(range(w), repeat=k - 1):
            want[space.index((0,) + rest)] = 1 / np.sqrt(2 * m)
        want[space.t0] = 1 / (2 * np.sqrt(m))
        want[space.t1] = np.sqrt(2 * m - 1) / (2 * np.sqrt(m))
        v_worst = max(v_worst, float(np.max(np.abs(v[:, 0] - want))))
    ok = worst <= TOL and v_worst <= EXACT_V
    criterion("C5 unitarity suite", ok,
              f"{checked} matrices, max defect={worst:.2e}, max |V e0 - target|={v_worst:.2e}")
    assert ok


def test_c6_classical_baseline(criterion):
    mismatches = 0
    checked = 0
    for n in range(2, 13):
        d = build_no_n(n)
        for bits in all_inputs(n):
            checked += 1
            mismatches += eval_det(d, bits) != neighbored_ones(bits)
    lift_bad = 0
    for n in range(1, 11):
        d = build_parity(n)
        q = lift_reversible(d)
        for bits in all_inputs(n):
            acc = acceptance(q, bits)
            lift_bad += acc not in (0.0, 1.0) or acc != float(eval_det(d, bits))
    ok = mismatches == 0 and lift_bad == 0
    criterion("C6 classical baseline", ok,
              f"NO_n mismatches {mismatches}/{checked} (n<=12), lift mismatches {lift_bad} (n<=10)")
    assert ok


def test_c7_structural_sizes(criterion):
    bad = []
    for s in range(12):
        b1, b2 = random_program(1 + s % 3, 1, 2, 4000 + s), random_program(1 + (s // 3) % 3, 1, 2, 4100 + s)
        if tensor_programs(b1, b2, set()).width != b1.width * b2.width:
            bad.append(("tensor", s))
    for p in FAMILY:
        q = collapse(p)
        w, k, n = p.width, p.k, p.n
        if (q.width, q.length, q.size) != (w**k + 2, n, (w**k + 2) * n) or p.size != w * k * n:
            bad.append(("collapse", p.name))
    ok = not bad
    criterion("C7 structural sizes", ok, f"{len(bad)} violations over 12 tensor and {len(FAMILY)} collapse checks")
    assert ok


def test_c8_tooling(criterion, tmp_path):
    mismatched = 0
    for s in range(100):
        p = random_program(1 + s % 4, 1 + s % 3, 1 + s % 4, 5000 + s, shuffle_ordering=bool(s % 2))
        text = serialize_program(p)
        q = parse_program(text)
        same = all(a.tobytes() == b.tobytes() for (*_, a), (*_, b) in zip(p.matrices(), q.matrices()))
        mismatched += not same or serialize_program(q) != text

    def cli(*args):
        return subprocess.run([sys.executable, "-m", "qobdd", *map(str, args)], capture_output=True)

    doc = tmp_path / "dp.json"
    cli("demo", "parity", "2", "pi/4", "--k", "2", "-o", doc)
    nondeterministic = []
    for args in (["truth-table", doc], ["collapse", doc, "-o", tmp_path / "c.json"]):
        a, b = cli(*args), cli(*args)
        if a.returncode or a.stdout != b.stdout or a.stderr != b.stderr:
            nondeterministic.append(args[0])
    ok = mismatched == 0 and not nondeterministic
    criterion("C8 tooling", ok,
              f"round-trip mismatches {mismatched}/100, non-deterministic commands {nondeterministic or 'none'}")
    assert ok
