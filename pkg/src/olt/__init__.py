"""Property testers that keep working while an adversary erases or corrupts the
input between queries, together with the adversaries, an auditing oracle and an
experiment harness."""

from . import adversaries, boolean_testers, f2core, kernels, oracle, seq_testers
from .f2core import *  # noqa: F401,F403
from .oracle import AdversarialOracle, OracleConfig, replay
from .seq_testers import RealSequence

__version__ = "0.1.0"
