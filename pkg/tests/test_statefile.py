import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darboux.catalog import demo_state, sample_cartesian_state, sample_jacobi_state
from darboux.jacobi import from_jacobi
from darboux.phasespace import PhaseState, flatten
from darboux.statefile import (
    KINDS,
    Representation,
    StateFileError,
    convert,
    fmt,
    format_state,
    parse_state,
    read_state,
    write_state,
)

from oracles import relative_inf


def cartesian(state):
    return Representation("cartesian", state.masses, state)


DEMO = cartesian(demo_state())


def test_fmt_is_bit_faithful():
    for x in (0.1, 1 / 3, np.pi, 1e-300, -2.5e17):
        assert float(fmt(x)) == x


def test_parse_minimal_file():
    text = "# two bodies\nmass 0 1.0\nmass 1 2.0  # heavy\nbody 1 1 0 0 0 1 0\nbody 0 0 0 0 0 -1 0\n"
    rep = parse_state(text)
    assert rep.kind == "cartesian"
    np.testing.assert_array_equal(rep.masses, [1.0, 2.0])
    np.testing.assert_array_equal(rep.payload.q[1], [1, 0, 0])


@pytest.mark.parametrize("kind", KINDS)
def test_format_parse_round_trip_is_exact(kind):
    rep = convert(DEMO, kind)
    again = parse_state(format_state(rep))
    assert again.kind == kind
    assert format_state(again) == format_state(rep)


@pytest.mark.parametrize("source", KINDS)
@pytest.mark.parametrize("target", KINDS)
def test_every_conversion_pair_round_trips(source, target):
    rep = convert(DEMO, source)
    back = convert(convert(rep, target), "cartesian")
    assert relative_inf(flatten(back.payload), flatten(DEMO.payload)) < 1e-9


def test_cartesian_jacobi_cartesian_to_a_few_ulp(rng):
    for _ in range(20):
        s = sample_cartesian_state(rng, 4)
        back = parse_state(format_state(convert(parse_state(format_state(convert(cartesian(s), "jacobi"))), "cartesian")))
        x, y = flatten(back.payload), flatten(s)
        assert np.all(np.abs(x - y) <= 4 * np.spacing(np.maximum(np.abs(y), 1.0)))


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_delaunay_file_round_trip(seed):
    s = from_jacobi(sample_jacobi_state(np.random.default_rng(seed), 3))
    text = format_state(convert(cartesian(s), "delaunay"))
    back = convert(parse_state(text), "cartesian").payload
    assert relative_inf(flatten(back), flatten(s)) < 1e-10


def test_anchor_is_kept():
    rep = convert(DEMO, "deprit")
    assert rep.anchor is not None
    assert "anchor " in format_state(rep)
    np.testing.assert_allclose(convert(rep, "cartesian").payload.q[0], DEMO.payload.q[0], atol=1e-12)


def test_circular_horizontal_warnings():
    m = np.array([1.0, 1.0])
    s = PhaseState(m, [[-0.5, 0, 0], [0.5, 0, 0]], [[0, -np.sqrt(0.5), 0], [0, np.sqrt(0.5), 0]])
    rep = convert(cartesian(s), "delaunay")
    assert any(w.startswith("Circular") for w in rep.warnings)
    assert any(w.startswith("Horizontal") for w in rep.warnings)
    assert convert(DEMO, "delaunay").warnings == ()


def test_file_io(tmp_path):
    path = tmp_path / "state.txt"
    write_state(path, DEMO)
    assert format_state(read_state(path)) == format_state(DEMO)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "mass 0 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1\n",
        "mass 0 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 2 1 0 0 0 1 0\n",
        "mass 0 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0\n",
        "mass 0 1\nmass 1 -1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0\n",
        "mass 0 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 nan 1 0\n",
        "mass 0 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 x 0\n",
        "mass 0 1\nmass 1 1\nplanet 0 0 0 0 0 0 0\n",
        "mass 0 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0\njacobi 1 0 0 0 1 0 0\n",
        "mass a 1\nmass 1 1\nbody 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0\n",
        "body 0 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0\n",
        "mass 0 1\nmass 1 1\nmass 2 1\ndeprit ellipse 1 1 0 0.5 0\n",
    ],
    ids=["empty", "short", "gap", "extra-body", "negative-mass", "nan", "garbage", "unknown",
         "mixed", "bad-index", "no-mass", "incomplete-deprit"],
)
def test_malformed_files(text):
    with pytest.raises(StateFileError):
        parse_state(text)


def test_unknown_target():
    with pytest.raises(ValueError):
        convert(DEMO, "polar")
