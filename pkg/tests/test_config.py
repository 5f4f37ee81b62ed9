import json

import pytest

from specagg import (
    ConfigError,
    PowerMode,
    ScenarioConfig,
    SweepSpec,
    apply_axis,
    load_config,
    sensing_fraction,
)

REFERENCE = {
    "m_bands": 13,
    "k_antennas": 8,
    "tau_b_frac": 0.01,
    "spectral_eff_r": 2.0,
    "snr_s": 1.0,
    "p_bar_p": 0.9,
    "p_fa": 0.05,
    "p_md": 0.05,
    "lambda_p": 0.5,
    "lambda_s": 0.3,
}


def write(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_reference_scenario_parses(tmp_path):
    cfg = load_config(write(tmp_path, REFERENCE))
    assert isinstance(cfg, ScenarioConfig)
    assert cfg.channel.m_bands == 13
    assert sensing_fraction(cfg.channel) == 0.02
    assert cfg.channel.power_mode is PowerMode.PSD  # default
    assert cfg.label is None
    assert cfg.traffic.lambda_s == 0.3


def test_label_and_power_mode(tmp_path):
    cfg = load_config(
        write(tmp_path, {**REFERENCE, "label": "ref", "power_mode": "limited"})
    )
    assert cfg.label == "ref"
    assert cfg.channel.power_mode is PowerMode.LIMITED


def test_snr_p_variant(tmp_path):
    payload = dict(REFERENCE)
    del payload["p_bar_p"]
    payload["snr_p"] = 4.0
    cfg = load_config(write(tmp_path, payload))
    assert cfg.channel.snr_p == 4.0
    assert cfg.channel.p_bar_p is None


@pytest.mark.parametrize(
    "mutation,needle",
    [
        ({"p_fa": 1.5}, "p_fa"),
        ({"lambda_p": -0.1}, "lambda_p"),
        ({"m_bands": 0}, "m_bands"),
        ({"m_bands": 2.5}, "m_bands"),
        ({"m_bands": "13"}, "m_bands"),
        ({"snr_s": 0}, "snr_s"),
        ({"tau_b_frac": True}, "tau_b_frac"),
        ({"power_mode": "BOTH"}, "power_mode"),
        ({"label": 7}, "label"),
        ({"snr_p": 4.0}, "snr_p / p_bar_p"),  # both present
        ({"extra_key": 1}, "extra_key"),
    ],
)
def test_scenario_violations_name_the_key(tmp_path, mutation, needle):
    with pytest.raises(ConfigError, match=needle):
        load_config(write(tmp_path, {**REFERENCE, **mutation}))


def test_missing_keys_are_reported(tmp_path):
    payload = dict(REFERENCE)
    del payload["snr_s"]
    with pytest.raises(ConfigError, match="snr_s"):
        load_config(write(tmp_path, payload))
    payload = dict(REFERENCE)
    del payload["p_bar_p"]
    with pytest.raises(ConfigError, match="snr_p / p_bar_p"):
        load_config(write(tmp_path, payload))


def test_sweep_parses(tmp_path):
    payload = {
        **REFERENCE,
        "axis": "lambda_p",
        "values": [0.0, 0.2, 0.4],
        "with_simulation": True,
        "sim_slots": 5000,
        "sim_seed": 9,
    }
    spec = load_config(write(tmp_path, payload))
    assert isinstance(spec, SweepSpec)
    assert spec.axis == "lambda_p"
    assert spec.values == [0.0, 0.2, 0.4]
    assert spec.with_simulation and spec.sim_slots == 5000 and spec.sim_seed == 9


def test_sweep_without_simulation(tmp_path):
    spec = load_config(write(tmp_path, {**REFERENCE, "axis": "p_fa", "values": [0.0, 0.1]}))
    assert not spec.with_simulation
    assert spec.sim_slots is None


@pytest.mark.parametrize(
    "mutation,needle",
    [
        ({"axis": "bandwidth", "values": [1]}, "axis"),
        ({"axis": "lambda_p", "values": []}, "values"),
        ({"axis": "lambda_p", "values": [0.1, "x"]}, "values"),
        ({"axis": "m_bands", "values": [2.5]}, "values"),
        ({"axis": "lambda_p", "values": [0.1], "with_simulation": 1}, "with_simulation"),
        ({"axis": "lambda_p", "values": [0.1], "with_simulation": True}, "sim_slots"),
        ({"axis": "lambda_p", "values": [0.1], "sim_slots": 10}, "sim_slots"),
    ],
)
def test_sweep_violations(tmp_path, mutation, needle):
    with pytest.raises(ConfigError, match=needle):
        load_config(write(tmp_path, {**REFERENCE, **mutation}))


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config(arr)


def test_apply_axis_touches_the_right_component(tmp_path):
    base = load_config(write(tmp_path, REFERENCE))
    assert apply_axis(base, "m_bands", 20).channel.m_bands == 20
    assert apply_axis(base, "k_antennas", 4.0).channel.k_antennas == 4
    assert apply_axis(base, "tau_b_frac", 0.05).channel.tau_b_frac == 0.05
    assert apply_axis(base, "spectral_eff_r", 1.0).channel.spectral_eff_r == 1.0
    assert apply_axis(base, "p_fa", 0.2).sensing.p_fa == 0.2
    assert apply_axis(base, "p_md", 0.2).sensing.p_md == 0.2
    assert apply_axis(base, "lambda_p", 0.1).traffic.lambda_p == 0.1
    assert apply_axis(base, "lambda_s", 0.1).traffic.lambda_s == 0.1
    # the base is untouched
    assert base.channel.m_bands == 13
    with pytest.raises(ConfigError, match="axis"):
        apply_axis(base, "snr_s", 2.0)
