"""
Utilities package
"""