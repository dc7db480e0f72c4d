"""Time-delayed ON/OFF PD stabilization of an inverted pendulum.

Simulation of the switched pendulum under two state-dependent switching
rules, zero-delay sliding analysis, small-delay asymptotic series, and
bifurcation-set scans.
"""

from .model import GKind, Manifold, Params, Rule, State, hamiltonian

__all__ = [
    "GKind",
    "Manifold",
    "Params",
    "Rule",
    "State",
    "hamiltonian",
]

__version__ = "0.1.0"
