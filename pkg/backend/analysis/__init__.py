"""
Analysis: decay aggregation, fitting, bootstrap and fidelity conversion
"""
