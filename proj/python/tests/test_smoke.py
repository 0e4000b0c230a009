import math

import pytest

import stokeswave as sw


def test_flat_wave_is_hydrostatic():
    flat = sw.Solution.flat(8)
    s = flat.sample(0.7, -1.5)
    assert s["u"] == 0.0 and s["v"] == 0.0
    assert s["P"] == pytest.approx(-s["y"], abs=1e-14)
    assert flat.steepness == 0.0


def test_solve_ten_percent_anchor():
    wave = sw.solve(0.10, modes=256)
    assert wave.c == pytest.approx(1.0505584733, abs=1e-9)
    assert wave.steepness == pytest.approx(0.10, abs=1e-12)
    assert 0.0 < wave.crest_indicator < 1.0


def test_verify_report_passes():
    report = sw.verify(sw.solve(0.05), nq=64, np=32)
    assert report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"Px_interior_negative", "Py_negative"} <= names


def test_surface_profile():
    prof = sw.surface(sw.solve(0.08), 64)
    assert len(prof["eta"]) == 65
    assert prof["x"][-1] == pytest.approx(math.pi)
    assert all(a > b for a, b in zip(prof["eta"], prof["eta"][1:]))


def test_beyond_limit_raises():
    with pytest.raises(sw.SolverError):
        sw.solve(0.20, modes=64, max_modes=128)


def test_bad_config_raises():
    with pytest.raises(sw.InvalidConfig):
        sw.solve(0.05, modes=0)


def test_save_and_load(tmp_path):
    wave = sw.solve(0.06)
    path = tmp_path / "wave.json"
    wave.save(str(path))
    back = sw.load(str(path))
    assert back.coeffs == wave.coeffs
    assert back.to_json() == wave.to_json()
