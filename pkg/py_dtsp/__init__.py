"""
py-dtsp

Dynamic traveling-salesman solvers: Ant System, a gradient-descent hybrid and a
seeded benchmark harness.
"""

__version__ = "1.0.0"
__author__ = "py-dtsp Team"
