"""
RB engine: sequence generation, shot simulation and dataset assembly
"""
