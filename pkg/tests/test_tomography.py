import math

import numpy as np
import pytest

from quadsuite import (
    ConditioningError,
    ConvergenceError,
    DomainError,
    IntervalSet,
    QuadratureDataset,
    coherent_state,
    dawson,
    dawson_derivatives,
    generate_dataset,
    gk_density,
    gk_from_quadrature_data,
    load_dataset,
    markov_kernel_number,
    number_state,
    quadrature_density,
    reconstruct_state,
    save_dataset,
    tomography_probability,
    vacuum_state,
)
from quadsuite import tomography

# reference values from a 30-digit arbitrary-precision evaluation of
# F(t) = exp(-t^2) int_0^t exp(y^2) dy and its derivatives
DAWSON_TABLE = [
    (-2.0, -0.30134038892379195),
    (-0.5, -0.4244363835020223),
    (0.0, 0.0),
    (0.3, 0.28263166502131193),
    (1.0, 0.5380795069127684),
    (2.5, 0.2230837221674355),
]
DERIVS_AT_07 = [
    0.5105040575592318, 0.2852943194170755, -1.4204201623023693,
    0.847410949555015, 7.336145644437194, -17.049891498652194,
    -49.49160834625888, 273.8869496685887, 309.44078731160005,
    -4815.40829693366,
]
DERIVS_AT_M13 = [
    -0.4833975173848241, -0.25683354520054275, 0.2990278172482371,
    1.8048065056475875, 2.8983300111943047, -6.902794016075507,
    -46.930564553739366, -39.185939646816266, 555.1444606706289,
    2070.3506320926954,
]


@pytest.mark.parametrize("t,want", DAWSON_TABLE)
def test_dawson_reference_values(t, want):
    assert abs(dawson(t) - want) < 1e-14


@pytest.mark.parametrize("t,table", [(0.7, DERIVS_AT_07), (-1.3, DERIVS_AT_M13)])
def test_dawson_derivatives_reference(t, table):
    got = dawson_derivatives(t, 9)
    for k, want in enumerate(table):
        assert abs(got[k] - want) <= 1e-8 * max(1.0, abs(want))


def test_dawson_derivatives_vector_shape():
    ts = np.linspace(-2.0, 2.0, 7)
    out = dawson_derivatives(ts, 3)
    assert out.shape == (4, 7)
    np.testing.assert_allclose(out[1], 1.0 - 2.0 * ts * out[0], atol=1e-15)


def test_kernel_forms_agree():
    ts = np.arange(-4.0, 4.0001, 0.05)
    for n in range(3):
        d = markov_kernel_number(n, (0.0, 0.0), 0.0, ts, form="derivative")
        s = markov_kernel_number(n, (0.0, 0.0), 0.0, ts, form="series")
        assert np.max(np.abs(d - s)) < 1e-8


def test_kernel_value_at_origin():
    assert abs(markov_kernel_number(0, (0.0, 0.0), 0.0, 0.0) - 2.0) < 1e-14


def test_kernel_depends_only_on_shifted_coordinate():
    v1 = markov_kernel_number(2, (0.7, -0.3), 1.1, 2.0)
    shift = 0.7 * math.cos(1.1) - 0.3 * math.sin(1.1)
    v2 = markov_kernel_number(2, (0.0, 0.0), 0.0, 2.0 - shift)
    assert v1 == v2


def test_kernel_guards():
    with pytest.raises(DomainError):
        markov_kernel_number(9, (0.0, 0.0), 0.0, 0.0)
    with pytest.raises(DomainError):
        markov_kernel_number(0, (0.0, 0.0), 0.0, 0.0, form="magic")
    with pytest.raises(DomainError):
        dawson_derivatives(0.0, -1)


def test_kernel_series_convergence_guard(monkeypatch):
    monkeypatch.setattr(tomography, "SERIES_MAX_TERMS", 3)
    with pytest.raises(ConvergenceError):
        markov_kernel_number(1, (0.0, 0.0), 0.0, np.array([2.0]), form="series")


def test_dataset_validation():
    xs_axis = (-8.0, 8.0, 0.01)
    good = generate_dataset(vacuum_state(6), 4, xs_axis)
    bad_values = good.values.copy()
    bad_values[1] *= 0.5                      # breaks normalization
    with pytest.raises(DomainError):
        QuadratureDataset(4, xs_axis, bad_values)
    negative = good.values.copy()
    negative[0, 3] = -1e-3
    with pytest.raises(DomainError):
        QuadratureDataset(4, xs_axis, negative)
    with pytest.raises(DomainError):
        QuadratureDataset(5, xs_axis, good.values)


def test_dataset_roundtrip_through_file(tmp_path):
    data = generate_dataset(coherent_state(0.9 + 0.4j, 25), 8)
    path = tmp_path / "set.txt"
    save_dataset(data, path)
    back = load_dataset(path)
    assert back.angles == 8
    assert back.x_axis == data.x_axis
    np.testing.assert_allclose(back.values, data.values, atol=1e-13)


def test_dataset_header_check(tmp_path):
    path = tmp_path / "junk.txt"
    path.write_text("1.0 2.0\n")
    with pytest.raises(DomainError):
        load_dataset(path)


def test_reconstruction_roundtrip_pure(rng, random_pure):
    for _ in range(3):
        st = random_pure(rng, 4, 6)
        rec = reconstruct_state(generate_dataset(st, 16), 6)
        assert np.linalg.norm(rec.matrix - st.matrix) < 1e-8
        assert "clipped_mass" in rec.meta and "fit_residual" in rec.meta


def test_reconstruction_roundtrip_mixed(rng, random_mixed):
    st = random_mixed(rng, 5)
    rec = reconstruct_state(generate_dataset(st, 16), 5)
    assert np.linalg.norm(rec.matrix - st.matrix) < 1e-8


def test_reconstruction_output_is_state(rng, random_mixed):
    rec = reconstruct_state(generate_dataset(random_mixed(rng, 4), 16), 4)
    evals = np.linalg.eigvalsh(rec.matrix)
    assert evals.min() >= -1e-12
    assert abs(np.trace(rec.matrix).real - 1.0) < 1e-12


def test_reconstruction_needs_enough_angles():
    data = generate_dataset(vacuum_state(6), 8)
    with pytest.raises(DomainError):
        reconstruct_state(data, 6)              # needs 2*6 - 1 = 11


def test_reconstruction_conditioning_guard(monkeypatch):
    data = generate_dataset(vacuum_state(4), 16)
    monkeypatch.setattr(tomography, "CONDITION_LIMIT", 1.0 + 1e-12)
    with pytest.raises(ConditioningError):
        reconstruct_state(data, 4)


def test_probability_whole_space_is_one(rng, random_pure):
    st = random_pure(rng, 5, 10)
    full = tomography_probability(
        st, IntervalSet.of((0.0, 2.0 * math.pi)), IntervalSet.full_line()
    )
    assert abs(full - 1.0) < 1e-12


def test_probability_vacuum_factorizes():
    st = vacuum_state(8)
    val = tomography_probability(
        st, IntervalSet.of((0.0, math.pi)), IntervalSet.of((0.0, math.inf))
    )
    assert abs(val - 0.25) < 1e-12


def test_probability_against_quadrature_oracle():
    # (1/2pi) int_0^{pi/3} int_0^inf quadrature density, tabulated once
    # with an adaptive integrator to 0.16138412106624636
    st = coherent_state(1.2, 30)
    val = tomography_probability(
        st, IntervalSet.of((0.0, math.pi / 3.0)), IntervalSet.of((0.0, math.inf))
    )
    assert abs(val - 0.16138412106624636) < 1e-6


def test_probability_angle_window_validated():
    with pytest.raises(DomainError):
        tomography_probability(
            vacuum_state(4), IntervalSet.of((-0.5, 1.0)), IntervalSet.full_line()
        )


def test_gk_from_data_matches_direct(rng, random_pure):
    st = random_pure(rng, 4, 30)
    data = generate_dataset(st, 48)
    kernel = number_state(0, 30)
    for pt in [(0.0, 0.0), (1.0, -0.5), (-1.2, 0.7)]:
        est = gk_from_quadrature_data(data, 0, pt)
        assert abs(est - gk_density(st, kernel, pt)) < 1e-6


def test_gk_from_data_guards():
    data = generate_dataset(vacuum_state(6), 8)
    with pytest.raises(DomainError):
        gk_from_quadrature_data(data, 0, (0.0, 0.0))    # too few angles
    coarse = generate_dataset(vacuum_state(6), 32, (-8.0, 8.0, 0.05))
    with pytest.raises(DomainError):
        gk_from_quadrature_data(coarse, 0, (0.0, 0.0))  # step too wide
