"""Layered grant-free NOMA access: closed form, simulation and optimisation."""

__version__ = "0.1.0"
