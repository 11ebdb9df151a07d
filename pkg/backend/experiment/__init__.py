"""
Experiment layer: configuration, presets, sweeps and report emission
"""
