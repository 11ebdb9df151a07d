"""
Clifford engine: physical gate alphabet and the 24-element Clifford group
"""
