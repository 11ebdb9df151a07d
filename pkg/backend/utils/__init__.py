"""
Utility modules for spin bench
"""
