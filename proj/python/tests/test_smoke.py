import json
import math

import pytest

import pqfreq

J01 = 2.404825558


def test_disk_eigenvalue():
    d = pqfreq.Domain("disk:r=1", 1 / 32)
    assert d.dim == 2
    assert abs(d.measure - math.pi) / math.pi < 0.05
    r = pqfreq.principal_frequency(d, 2, 2)
    assert r["converged"]
    assert abs(r["value"] - J01**2) / J01**2 < 0.03


def test_torsion_and_cheeger():
    d = pqfreq.Domain("square:side=1", 1 / 32)
    mf = pqfreq.cheeger(d)["value"]
    assert abs(mf - (2 + math.sqrt(math.pi))) / (2 + math.sqrt(math.pi)) < 0.06
    assert pqfreq.principal_frequency(d, 2, 1)["value"] > 0


def test_scaling_and_closed_forms():
    assert pqfreq.scaling_exponent(2, 2, 2) == pytest.approx(2.0)
    assert pqfreq.disk_relative_capacity(0.01) == pytest.approx(2 * math.pi / math.log(100))
    assert pqfreq.punctured_ball_value(2, 4) == pytest.approx(16 * math.pi / 27)
    assert pqfreq.punctured_linf_lower(2, 4) < pqfreq.punctured_ball_value(2, 4)


def test_radial_linf():
    r = pqfreq.punctured_radial(2, 4.0, "linf", 4000)
    assert abs(r["value"] - 16 * math.pi / 27) / (16 * math.pi / 27) < 0.01


def test_validation_errors():
    d = pqfreq.Domain("disk:r=1", 0.1)
    with pytest.raises(ValueError):
        pqfreq.principal_frequency(d, 4, pqfreq.inf)
    with pytest.raises(pqfreq.ValidationError):
        pqfreq.Domain("disk:r=-1", 0.1)
    with pytest.raises(ValueError):
        pqfreq.linf_frequency(d, 2.0)


def test_cli_bridge():
    code, out, err = pqfreq.run_cli(["bounds", "--N", "2", "--p", "2", "--q", "2"])
    assert code == 0
    record = json.loads(out)
    assert record["scaling_exponent"] == pytest.approx(2.0)
    code, _, err = pqfreq.run_cli(["nope"])
    assert code == 2
    assert err.startswith("pqfreq: ")
