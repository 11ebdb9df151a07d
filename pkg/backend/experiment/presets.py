"""
Preset experiment configurations
Electron (square and sinc-3 pulses) and nuclear spin benchmarking runs
"""
import copy
from typing import Dict

from backend import config
from backend.exceptions import ConfigError

DEFAULT_PRESET = "electron-square"

_DEVICE_NOISE = {
    "detuning_sigma": config.DEFAULT_DETUNING_SIGMA,
    "amplitude_error_sigma": 0.0,
    "time_quantum": config.BASEBAND_TIME_QUANTUM,
    "depolarizing_per_clifford": 0.0,
    "t2_star": None,
    "idle_time": 0.0,
    "interleaved_depolarizing": 0.0,
}

_DEVICE_SPAM = {
    "init_error": 0.02,
    "readout_fidelity_up": 0.85,
    "readout_fidelity_down": 0.95,
}

PRESETS: Dict[str, dict] = {
    "electron-square": {
        "lengths": list(config.ELECTRON_LENGTHS),
        "sequences_per_length": 15,
        "shots_per_sequence": 200,
        "pulse_shape": "square",
        "pi_pulse_duration": 2.08e-6,
        "noise": dict(_DEVICE_NOISE),
        "spam": dict(_DEVICE_SPAM),
    },
    "electron-sinc": {
        "lengths": list(config.ELECTRON_LENGTHS),
        "sequences_per_length": 15,
        "shots_per_sequence": 200,
        "pulse_shape": "sinc3",
        "pi_pulse_duration": 11.06e-6,
        "noise": dict(_DEVICE_NOISE),
        "spam": dict(_DEVICE_SPAM),
    },
    "nuclear-square": {
        "lengths": list(config.NUCLEAR_LENGTHS),
        "sequences_per_length": 5,
        "shots_per_sequence": 75,
        "pulse_shape": "square",
        "pi_pulse_duration": 150e-6,
        "noise": dict(_DEVICE_NOISE, t2_star=config.NUCLEAR_T2_STAR),
        "spam": dict(_DEVICE_SPAM),
    },
}


def preset_names():
    return sorted(PRESETS)


def get_preset(name: str) -> dict:
    """
    Raw settings of a preset (a fresh copy)

    Raises:
        ConfigError: for an unknown preset name
    """
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset '{name}' (choose from {', '.join(preset_names())})")
    return copy.deepcopy(PRESETS[name])
