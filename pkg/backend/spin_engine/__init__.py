"""
Spin engine: density-matrix evolution under shaped resonant pulses
"""
