import cmath
import math

import pytest

import heunforge as hf


def test_heun_spec_gives_eight_branches():
    sigma = "3*z - 4*z^2 + z^3"
    tau = "3/2 - 5*z + 17/6*z^2"
    sigma_tilde = "5/6*z*(3*z - 4*z^2 + z^3)"
    found = hf.branches(sigma, tau, sigma_tilde)
    assert len(found) == 8
    assert {b["sign"] for b in found} == {"+", "-"}


def test_degree_bound_is_a_value_error():
    with pytest.raises(ValueError):
        hf.branches("z^5")


def test_heun_class_one_states():
    states = hf.heun_solve("I", 2, 0.5, 1 / 3, 2.0, 3.0)
    assert len(states) == 3
    for st in states:
        assert st["class"] == "I"
        assert len(st["polynomial"]) == 3
        assert st["residual"] < 1e-8


def test_che_states():
    states = hf.che_solve(2, 1, 1.5, -0.3, 0.4)
    K = 2 - 1.5 - 0.3 + 0.4
    for st in states:
        mu = st["accessory"]
        assert abs(mu * mu - K * mu - 1.5 * (1 - 0.3)) < 1e-10


def test_class_relation_written_out():
    g, d, e = 0.5, 2 / 3, 1.25
    for n in range(4):
        assert hf.heun_class_ab("I", n, g, d, e) == pytest.approx(-n * (g + d + e + n - 1))


def test_applications():
    assert hf.coulomb3s_energy(1, 0, 0.0) == 3.0
    st = hf.electrons_sphere_state(1, 1.0, 2.0)
    assert st["R"] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert st["E"] == pytest.approx(1.0, abs=1e-12)
    assert hf.bethe_residual(st["roots"], 1.0, 2.0) < 1e-8
    assert hf.doublewell_spectrum(0, 1.0, 49.0) == -4.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        hf.doublewell_spectrum(0, 1.0, 1.0, "odd")
    with pytest.raises(ValueError):
        hf.heun_solve("IX", 1, 0.5, 0.5, 0.5, 2.0)
    assert issubclass(hf.NoSolution, RuntimeError)
    assert hf.SCHEMA_VERSION == 1
    assert cmath.isfinite(hf.heun_solve("II", 0, 0.5, 1 / 3, 2.0, 3.0)[0]["accessory"])
