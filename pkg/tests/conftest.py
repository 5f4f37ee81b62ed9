"""Shared scenario factories for the test suite."""

from specagg import ChannelParams, PowerMode, ScenarioConfig, SensingParams, TrafficParams


def make_channel(**overrides) -> ChannelParams:
    """Channel at the reference operating point unless overridden."""
    params = dict(
        snr_s=1.0,
        spectral_eff_r=2.0,
        tau_b_frac=0.01,
        m_bands=13,
        k_antennas=8,
        p_bar_p=0.9,
        power_mode=PowerMode.PSD,
    )
    params.update(overrides)
    return ChannelParams(**params)


def reference_scenario(lambda_s: float = 0.0, **channel_overrides) -> ScenarioConfig:
    """The documented reference operating point: 13 bands, 8 antennas,
    1% per-band sensing overhead, 5% sensing error rates, half-loaded
    primaries."""
    return ScenarioConfig(
        channel=make_channel(**channel_overrides),
        sensing=SensingParams(p_fa=0.05, p_md=0.05),
        traffic=TrafficParams(lambda_p=0.5, lambda_s=lambda_s),
    )


def error_free_scenario(lambda_p: float = 0.2, **channel_overrides) -> ScenarioConfig:
    """Perfect sensing, lightly loaded primaries with a fading primary link."""
    channel = dict(
        snr_s=1.0,
        spectral_eff_r=2.0,
        tau_b_frac=0.01,
        m_bands=15,
        k_antennas=8,
        snr_p=4.0,
        p_bar_p=None,
    )
    channel.update(channel_overrides)
    return ScenarioConfig(
        channel=ChannelParams(**channel),
        sensing=SensingParams(p_fa=0.0, p_md=0.0),
        traffic=TrafficParams(lambda_p=lambda_p, lambda_s=0.0),
    )
