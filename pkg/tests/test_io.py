import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_array_equal

from whfactor import io
from whfactor.errors import DimensionMismatch
from whfactor.generate import random_contractive_system, random_symbol
from whfactor.realization import StateSpaceSystem
from whfactor.wiener_hopf import eval_factor_many, factorize

seeds = st.integers(min_value=0, max_value=2**32 - 1)
finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_complex_round_trip(re, im):
    z = complex(re, im)
    assert io.complex_from_json(json.loads(json.dumps(io.complex_to_json(z)))) == z


def test_complex_parsing():
    assert io.complex_from_json(2) == 2
    with pytest.raises(ValueError):
        io.complex_from_json([1, 2, 3])
    with pytest.raises(ValueError):
        io.complex_from_json("1")


def test_matrix_parsing():
    assert io.matrix_from_json([], (0, 3)).shape == (0, 3)
    with pytest.raises(DimensionMismatch):
        io.matrix_from_json([[[1, 0]], [[1, 0], [2, 0]]])
    with pytest.raises(ValueError):
        io.matrix_from_json([1, 2])


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_system_round_trip(seed):
    _, sys = random_contractive_system(np.random.default_rng(seed), max_states=8)
    back = io.system_from_json(json.loads(io.dump_json(io.system_to_json(sys))))
    for k in "ABCD":
        assert_array_equal(getattr(back, k), getattr(sys, k))


def test_system_with_empty_state():
    sys = StateSpaceSystem.static(np.eye(2))
    back = io.system_from_json(json.loads(io.dump_json(io.system_to_json(sys))))
    assert back.n == 0 and back.B.shape == (0, 2) and back.C.shape == (2, 0)


def test_system_rejects_extra_keys():
    with pytest.raises(ValueError):
        io.system_from_json({"A": [], "B": [], "C": [], "D": [], "E": []})


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_spec_round_trip(seed):
    spec = random_symbol(np.random.default_rng(seed), max_states=8)
    back = io.spec_from_json(json.loads(io.dump_json(io.spec_to_json(spec))))
    z = 0.3 + 0.2j
    assert_array_equal(back.evaluate(z), spec.evaluate(z))


def test_factorization_round_trip(rng):
    _, sys = random_contractive_system(rng, max_states=8)
    wh = factorize(sys)
    back = io.factorization_from_json(json.loads(io.dump_json(io.factorization_to_json(wh))))
    z = np.exp(1j * np.linspace(0, 6, 7))
    for name, f in wh.factors().items():
        g = back.factors()[name]
        assert g.domain is f.domain
        assert_array_equal(eval_factor_many(g, z), eval_factor_many(f, z))


def test_factorization_degenerate_round_trip(sys_antistable):
    wh = factorize(sys_antistable)
    data = json.loads(io.dump_json(io.factorization_to_json(wh)))
    assert data["spectral_bounds"]["factor_inner"] == 0.0
    back = io.factorization_from_json(data)
    assert back.factor_inner.states == 0


def test_dump_json_rejects_nan():
    with pytest.raises(ValueError):
        io.dump_json({"x": float("nan")})
