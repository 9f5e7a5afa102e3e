import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairsampler.ising import (
    EnumerationLimitError,
    IsingError,
    IsingModel,
    brute_force_ground_states,
    builtin_problem,
    energy,
    energy_table,
    fix_q0_up,
    flip,
    ground_states,
)

# known ground states of the six benchmarks, first-spin-up half
GS_UP_HALF = {
    "a": ["00000", "00011", "00111"],
    "b": ["00000", "00010", "00101", "00110", "01000", "01001"],
    "c": ["000001", "010100", "010111"],
    "d": ["0001", "0010", "0011"],
    "e": ["001", "010", "011"],
    "f": ["01"],
}

GROUND_ENERGY = {"a": -4.0, "b": -5.0, "c": -4.0, "d": -2.0, "e": -1.0, "f": -1.0}


@pytest.mark.parametrize("name", sorted(GS_UP_HALF))
def test_builtin_ground_states_match_known_sets(name):
    gs = ground_states(builtin_problem(name))
    expected = sorted(GS_UP_HALF[name] + [flip(s) for s in GS_UP_HALF[name]])
    assert list(gs.states) == expected
    assert gs.degeneracy == len(expected)
    assert gs.energy == GROUND_ENERGY[name]


def test_energy_examples_problem_f():
    f = builtin_problem("f")
    assert energy(f, "01") == -1.0
    assert energy(f, "00") == 1.0


def test_problem_d_minimum_ties_listed_states():
    d = builtin_problem("d")
    oracle = brute_force_ground_states(d)
    assert energy(d, "0001") == oracle.energy
    for s in GS_UP_HALF["d"]:
        assert energy(d, s) == oracle.energy


def test_single_spin_field_aligns():
    m = IsingModel(n=1, linear=((0, 1.0),))
    gs = ground_states(m)
    assert gs.states == ("0",)
    assert gs.degeneracy == 1


@pytest.mark.parametrize("name", sorted(GS_UP_HALF))
def test_enumeration_agrees_with_independent_oracle(name):
    m = builtin_problem(name)
    assert ground_states(m) == brute_force_ground_states(m)


def test_enumeration_agrees_with_oracle_on_random_models():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(pairs)
        quad = tuple((i, j, float(rng.integers(-2, 3))) for i, j in pairs[: rng.integers(1, len(pairs) + 1)])
        lin = tuple((i, float(rng.integers(-2, 3))) for i in range(n) if rng.random() < 0.5)
        m = IsingModel(n=n, quadratic=quad, linear=lin)
        assert ground_states(m) == brute_force_ground_states(m)


@given(st.sampled_from("abcdef"), st.integers(min_value=0, max_value=63))
@settings(max_examples=60, deadline=None)
def test_global_flip_symmetry(name, raw):
    m = builtin_problem(name)
    s = format(raw % (1 << m.n), f"0{m.n}b")
    assert energy(m, s) == pytest.approx(energy(m, flip(s)), abs=1e-12)


@pytest.mark.parametrize(
    "name,expected_linear,expected_quadratic",
    [
        ("d", ((0, 1.0),), ((0, 1, -1.0), (0, 2, -1.0), (1, 2, -1.0))),
        ("f", ((0, -1.0),), ()),
    ],
)
def test_fix_q0_reduction_examples(name, expected_linear, expected_quadratic):
    red = fix_q0_up(builtin_problem(name))
    assert red.linear == expected_linear
    assert red.quadratic == expected_quadratic


@pytest.mark.parametrize("name", "abcde")
def test_fix_q0_preserves_restricted_spectrum(name):
    m = builtin_problem(name)
    red = fix_q0_up(m)
    for idx in range(1 << red.n):
        suffix = format(idx, f"0{red.n}b")
        assert energy(red, suffix) == pytest.approx(energy(m, "0" + suffix), abs=1e-12)


@pytest.mark.parametrize("name", "abcde")
def test_fix_q0_ground_states_are_the_up_half(name):
    m = builtin_problem(name)
    red_states = ground_states(fix_q0_up(m)).states
    up_half = tuple(s[1:] for s in ground_states(m).states if s[0] == "0")
    assert red_states == up_half


def test_fix_q0_rejects_flip_asymmetric_models():
    m = IsingModel(n=2, quadratic=((0, 1, 1.0),), linear=((1, 0.5),))
    with pytest.raises(IsingError):
        fix_q0_up(m)


def test_model_validation():
    with pytest.raises(IsingError):
        IsingModel(n=2, quadratic=((0, 2, 1.0),))
    with pytest.raises(IsingError):
        IsingModel(n=2, quadratic=((0, 0, 1.0),))
    with pytest.raises(IsingError):
        IsingModel(n=3, quadratic=((0, 1, 1.0), (1, 0, 2.0)))
    with pytest.raises(IsingError):
        IsingModel(n=2, linear=((0, 1.0), (0, 2.0)))
    with pytest.raises(IsingError):
        builtin_problem("z")
    with pytest.raises(IsingError):
        energy(builtin_problem("f"), "000")


def test_enumeration_bound():
    with pytest.raises(EnumerationLimitError):
        ground_states(IsingModel(n=25, quadratic=((0, 1, 1.0),)))


def test_json_roundtrip():
    m = builtin_problem("b")
    again = IsingModel.from_json(m.to_json())
    assert again == m


def test_energy_table_matches_scalar_energy():
    m = builtin_problem("d")
    table = energy_table(m)
    for idx in range(1 << m.n):
        assert table[idx] == pytest.approx(energy(m, format(idx, f"0{m.n}b")))
