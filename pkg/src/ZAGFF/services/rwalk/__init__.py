"""
Simple random walk simulation.

Exports:
    ExitSample, ExitBlock, simulate_exit, simulate_exits: walks run to first exit
    McEstimate, ExitDistribution: Monte Carlo results
    expected_exit_time_mc, exit_distribution_mc: exit-time and harmonic-measure estimators
    green_zd_visits_mc: visit-count estimate of g_{Z^d}(0, 0)
"""

from .estimators import (
    MIN_REPLICATES,
    ExitDistribution,
    McEstimate,
    exit_distribution_mc,
    expected_exit_time_mc,
    green_zd_visits_mc,
)
from .walker import ExitBlock, ExitSample, draw_steps, simulate_exit, simulate_exits

__all__ = [
    "MIN_REPLICATES",
    "ExitBlock",
    "ExitDistribution",
    "ExitSample",
    "McEstimate",
    "draw_steps",
    "exit_distribution_mc",
    "expected_exit_time_mc",
    "green_zd_visits_mc",
    "simulate_exit",
    "simulate_exits",
]
