import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_unitary
from qperceptron.statevector import (
    H,
    MCX,
    MCZ,
    Gate,
    Histogram,
    LayoutError,
    QubitIndexError,
    QubitLayout,
    SizeError,
    StateVector,
    X,
    Z,
    apply_gate,
    basis_state,
    init_state,
    marginal,
    probabilities,
    sample,
)


def test_init_state():
    assert init_state(1).amplitudes.tolist() == [1, 0]
    assert init_state(2).amplitudes.tolist() == [1, 0, 0, 0]
    with pytest.raises(SizeError):
        init_state(25)
    with pytest.raises(SizeError):
        init_state(0)


def test_hadamard_on_zero():
    out = apply_gate(init_state(1), H(0))
    np.testing.assert_allclose(out.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)


def test_apply_gate_leaves_input_untouched():
    s = init_state(1)
    apply_gate(s, X(0))
    assert s.amplitudes.tolist() == [1, 0]


def test_toffoli_truth_table():
    # |110>: q2=1, q1=1, q0=0
    out = apply_gate(basis_state(3, 0b110), MCX([1, 2], 0))
    assert out.amplitudes[0b111] == 1


def test_uniform_superposition():
    s = init_state(4).run([H(q) for q in range(4)])
    hist = probabilities(s)
    assert len(hist) == 16
    for p in hist.entries.values():
        assert p == pytest.approx(1 / 16, abs=1e-15)


def test_probabilities_examples():
    assert probabilities(init_state(1)).entries == {"0": 1.0}
    h = probabilities(StateVector([1 / math.sqrt(2), -1 / math.sqrt(2)]))
    assert h["0"] == pytest.approx(0.5) and h["1"] == pytest.approx(0.5)


@pytest.mark.parametrize(
    "gate",
    [X(3), MCX([0], 0), MCZ([1, 1]), MCX([0, 0], 2), H(-1)],
    ids=["out-of-range", "self-control", "dup-mcz", "dup-control", "negative"],
)
def test_bad_indices(gate):
    with pytest.raises(QubitIndexError):
        apply_gate(init_state(3), gate)


def test_single_qubit_kinds_reject_controls():
    with pytest.raises(ValueError):
        Gate("X", 2, (0,))


def test_gate_kernel_matches_dense_matrix(rng):
    n = 4
    gates = [H(1), X(0), Z(3), MCX([0, 2], 3), MCX([3], 1), MCZ([0, 1, 2]), MCZ([2]), MCX([0, 1, 2], 3)]
    for g in gates:
        psi = rng.normal(size=16) + 1j * rng.normal(size=16)
        psi /= np.linalg.norm(psi)
        got = apply_gate(StateVector(psi), g).amplitudes
        np.testing.assert_allclose(got, dense_unitary(g, n) @ psi, atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_control_degenerates(n):
    for t in range(n):
        for b in range(1 << n):
            s = basis_state(n, b)
            assert np.array_equal(apply_gate(s, MCX([], t)).amplitudes, apply_gate(s, X(t)).amplitudes)
            assert np.array_equal(apply_gate(s, MCZ([t])).amplitudes, apply_gate(s, Z(t)).amplitudes)


def random_gate(data, n):
    kind = data.draw(st.sampled_from(["H", "X", "Z", "MCX", "MCZ"]))
    qs = data.draw(st.permutations(range(n)))
    if kind in ("H", "X", "Z"):
        return Gate(kind, qs[0])
    k = data.draw(st.integers(1, n))
    return MCX(qs[1:k], qs[0]) if kind == "MCX" else MCZ(qs[:k])


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_norm_preserved(data):
    n = data.draw(st.integers(1, 8))
    s = init_state(n)
    for _ in range(data.draw(st.integers(1, 30))):
        s.apply(random_gate(data, n))
    assert abs(s.norm() - 1) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_gates_square_to_identity(data):
    n = data.draw(st.integers(1, 6))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi /= np.linalg.norm(psi)
    g = random_gate(data, n)
    twice = StateVector(psi).apply(g).apply(g).amplitudes
    if g.kind == "H":
        np.testing.assert_allclose(twice, psi, atol=1e-12)
    else:
        assert np.array_equal(twice, psi)


LAYOUT6 = QubitLayout.from_widths([("I", 2), ("w1", 2), ("w2", 2)])


def test_layout_validation():
    with pytest.raises(LayoutError):
        QubitLayout({"a": (0, 1), "b": (1, 2)})
    with pytest.raises(LayoutError):
        QubitLayout({"a": (0, 2)})
    with pytest.raises(LayoutError):
        LAYOUT6["sum"]
    assert LAYOUT6.header() == "# layout: I=[0,1] w1=[2,3] w2=[4,5]"
    assert QubitLayout.from_header(LAYOUT6.header()) == LAYOUT6


def test_marginal_deterministic_state():
    # I=11, w1=01, w2=10
    idx = 0b11 | 0b01 << 2 | 0b10 << 4
    hist = probabilities(basis_state(6, idx), LAYOUT6)
    assert hist.entries == {"11 01 10": 1.0}
    assert marginal(hist, LAYOUT6, ["w1", "w2"]).entries == {"01 10": 1.0}


def test_marginal_uniform_joint():
    hist = probabilities(init_state(6).run([H(q) for q in range(6)]), LAYOUT6)
    m = marginal(hist, LAYOUT6, ["w2", "w1"])
    assert m.names == ("w1", "w2")
    assert len(m) == 16
    for p in m.entries.values():
        assert p == pytest.approx(1 / 16, abs=1e-12)


def test_marginal_identity_and_errors(rng):
    psi = rng.normal(size=64) + 0j
    hist = probabilities(StateVector(psi / np.linalg.norm(psi)), LAYOUT6)
    full = marginal(hist, LAYOUT6, ["I", "w1", "w2"])
    assert full.entries == pytest.approx(hist.entries)
    with pytest.raises(LayoutError):
        marginal(hist, LAYOUT6, ["carry"])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sets(st.sampled_from(["I", "w1", "w2"]), min_size=1))
def test_marginal_composes(seed, subset):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=64) + 1j * rng.normal(size=64)
    hist = probabilities(StateVector(psi / np.linalg.norm(psi)), LAYOUT6)
    outer = {"I", "w1", "w2"}
    for drop in ["I", "w1", "w2"]:
        if drop not in subset:
            outer = outer - {drop}
            break
    two_step = marginal(marginal(hist, LAYOUT6, outer), LAYOUT6, subset)
    direct = marginal(hist, LAYOUT6, subset)
    assert two_step.entries.keys() == direct.entries.keys()
    for k in direct:
        assert two_step[k] == pytest.approx(direct[k], abs=1e-12)


def test_sample_deterministic_distribution():
    assert sample({"0": 1.0}, 100, seed=3) == {"0": 100}


def test_sample_binomial_bounds():
    counts = sample({"0": 0.5, "1": 0.5}, 10000, seed=42)
    assert sum(counts.values()) == 10000
    # 5 sigma for Binomial(10000, 0.5) is 250
    assert 4600 <= counts["0"] <= 5400 and 4600 <= counts["1"] <= 5400


def test_sample_seeded_and_validated():
    h = Histogram((("q", 2),), {"00": 0.1, "01": 0.2, "10": 0.3, "11": 0.4})
    assert sample(h, 50, seed=7) == sample(h, 50, seed=7)
    with pytest.raises(ValueError):
        sample(h, 0, seed=1)
