import math

import numpy as np
import pytest

import mftd


def test_special_functions():
    assert mftd.bessel_j(0, 0.0) == 1.0
    assert abs(mftd.bessel_j(1, 2.5) - 0.4970941024642741) < 1e-12
    assert mftd.lambda_fn(0.0, 3.0) == 3.0
    assert abs(mftd.lambda_fn(1.0, 400.0) - 1.0) < math.sqrt(2 / (math.pi * 400))


def test_resonance_and_neumann():
    hit = mftd.find_resonance(1.8411837813406593)
    assert hit is not None and hit[0] == 1
    assert mftd.find_resonance(2 * math.pi / 0.5) is None
    w = 2 * math.pi / 0.5
    assert abs(mftd.neumann(w, (0.2, 0.1), (-0.4, 0.3)) - mftd.neumann(w, (-0.4, 0.3), (0.2, 0.1))) < 1e-8


def test_errors_carry_a_category():
    with pytest.raises(mftd.Error) as info:
        mftd.neumann(1.8411837813406593, (0.1, 0.0), (0.3, 0.0))
    assert info.value.category == "resonance"


def test_config_validation():
    assert mftd.validate_config("") == []
    diags = mftd.validate_config("[material]\nh = 0.2\n")
    assert any(level == "error" and "thickness" in msg for level, msg in diags)
    names = [name for name, _ in mftd.presets()]
    assert "initial_guess" in names
    for _, text in mftd.presets():
        assert not [d for d in mftd.validate_config(text) if d[0] == "error"]


def test_map_and_metric():
    img = mftd.etd_multi_map(["sigma1"], L=4, K=2, lattice=32)
    assert img.shape == (32, 32)
    inside = img[~np.isnan(img)]
    assert inside.size > 0 and np.nanmax(np.abs(inside)) <= 1.0 + 1e-12
    assert mftd.localization_metric(["sigma1"], L=16, K=4) <= 0.1


def test_fit_and_run(tmp_path):
    s = np.linspace(-0.5, 0.5, 40)
    a, b, c = mftd.chebyshev_fit(list(zip(s, 2 * s**2 - 1)), 2)
    assert (a, b) == (-0.5, 0.5)
    assert abs(c[0] + 0.75) < 1e-10

    text = "[incident]\nK = 2\n[grid]\nlattice = 24\nboundary_points = 64\ncurve_nodes = 48\n"
    files, manifest = mftd.run(text, str(tmp_path / "a"), seed=5)
    files2, manifest2 = mftd.run(text, str(tmp_path / "b"), seed=5)
    assert files == files2 and manifest == manifest2
    data = (tmp_path / "a" / files[0]).read_bytes()
    assert mftd.git_blob_sha1(data) in manifest
