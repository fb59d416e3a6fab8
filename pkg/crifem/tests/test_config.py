# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import pytest

from ..config import RawConfig, parse_config, help_text, encode
from ..curves import CircleLevelSet, EllipseLevelSet
from ..errors import ConfigError

def test_example_alone():
    cfg = parse_config(flags={"example": "1a"})
    assert cfg.example == "1a"
    assert (cfg.interface, cfg.r0) == ("circle", 0.36)
    assert (cfg.mu_minus, cfg.mu_plus, cfg.lambda_ratio) == (1.0, 100.0, 5.0)
    assert list(cfg.levels) == [3, 4, 5, 6]
    assert cfg.domain == (-1.0, 1.0, -1.0, 1.0)
    mat = cfg.material()
    assert (mat.lambda_minus, mat.lambda_plus) == (5.0, 500.0)
    assert cfg.stabilization().tau == 1000.0
    ls = cfg.level_set()
    assert isinstance(ls, CircleLevelSet) and ls.r0 == 0.36
    assert cfg.problem().exact is not None

def test_example_4():
    cfg = parse_config(flags={"example": "4"})
    assert isinstance(cfg.level_set(), EllipseLevelSet)
    assert cfg.body_force == "unknown"
    mat = cfg.material()
    assert mat.lambda_plus == pytest.approx(400.0)
    assert mat.lambda_minus == pytest.approx(0.56/0.44)
    assert cfg.problem().exact is None

def test_defaults_without_example():
    cfg = parse_config()
    assert cfg.example is None
    assert cfg.lambda_ratio == 1.0
    assert cfg.solver == "cg"
    assert cfg.tol == 1e-12
    assert cfg.vtk is True

def test_negative_tau():
    with pytest.raises(ConfigError) as e:
        parse_config(flags={"tau": -1})
    assert e.value.key == "tau"
    assert "tau" in str(e.value)
    assert e.value.exit_code == 2

def test_flag_overrides_file(tmp_path):
    path = tmp_path/"run.cfg"
    path.write_text("# sweep\nexample=2a\nk_max=5\nr0 = 0.65\n\n")
    cfg = parse_config(path, {"k_max": 6})
    assert cfg.k_max == 6
    assert cfg.r0 == 0.65
    assert cfg.lambda_ratio == 100.0
    assert parse_config(path).k_max == 5

def test_unknown_key():
    with pytest.raises(ConfigError) as e:
        parse_config(flags={"radius": "0.5"})
    assert e.value.key == "radius"

def test_invalid_key_characters():
    with pytest.raises(ConfigError):
        RawConfig.from_text("Mu-Plus=3")

def test_missing_equals(tmp_path):
    path = tmp_path/"bad.cfg"
    path.write_text("k_max 5\n")
    with pytest.raises(ConfigError):
        parse_config(path)

def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path/"nothing.cfg")

def test_unparsable_value():
    with pytest.raises(ConfigError) as e:
        parse_config(flags={"k_max": "many"})
    assert e.value.key == "k_max"
    with pytest.raises(ConfigError) as e:
        parse_config(flags={"edge_set": "some"})
    assert e.value.key == "edge_set"

def test_user_lambda_replaces_preset():
    cfg = parse_config(flags={"example": "1a", "lambda_minus": 2, "lambda_plus": 3})
    assert cfg.lambda_ratio is None
    mat = cfg.material()
    assert (mat.lambda_minus, mat.lambda_plus) == (2.0, 3.0)

def test_incomplete_lambda_group():
    with pytest.raises(ConfigError):
        parse_config(flags={"lambda_minus": 2})
    with pytest.raises(ConfigError):
        parse_config(flags={"lambda_ratio": 2, "nu_minus": 0.3, "nu_plus": 0.3})

def test_validation_messages_name_key():
    for flags, key in (({"k_min": 4, "k_max": 3}, "k_max"), ({"mu_plus": 0}, "mu_plus"),
            ({"r0": -0.1}, "r0"), ({"nu_minus": 0.5, "nu_plus": 0.3}, "nu_minus"),
            ({"dirichlet": "weak"}, "dirichlet"), ({"threads": 0}, "threads")):
        with pytest.raises(ConfigError) as e:
            parse_config(flags=flags)
        assert e.value.key == key

def test_weak_dirichlet_config():
    cfg = parse_config(flags={"dirichlet": "weak", "edge_set": "all", "tau": 50})
    stab = cfg.stabilization()
    assert stab.tau == 50.0
    assert stab.edge_set.value == "all"

def test_resolved_config_round_trip(tmp_path):
    cfg = parse_config(flags={"example": "3b", "k_max": 4})
    text = cfg.to_raw().to_text()
    assert "tau=1000.0\n" in text
    path = tmp_path/"config.txt"
    path.write_text(text)
    again = parse_config(path)
    assert again.to_raw() == cfg.to_raw()
    assert again.material() == cfg.material()

def test_encode():
    assert encode(None) == ""
    assert encode(True) == "true"
    assert encode(0.1) == "0.1"
    assert encode(3) == "3"

def test_help_text():
    text = help_text()
    for key in ("tau", "edge_set", "lambda_ratio", "example"):
        assert key in text
