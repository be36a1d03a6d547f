"""Fair subset selection from item streams under per-group quotas."""
from .bench import Dataset, ExperimentConfig, RunRecord, emit_csv, exchange_baseline, run_experiment
from .exact import brute_force_opt, greedy, greedy_complete, lazy_greedy, unconstrained_greedy
from .fairness import FairnessSpec, allocate_equal, allocate_proportional, explicit_budgets, is_fair
from .mp_fsm import MpFsmConfig, MpFsmReport, run_mp_fsm
from .oracles import (CoverageGroundSet, CoverageOracle, RecGroundSet, RecommendationOracle,
                      SubmodularOracle)
from .solution import Solution
from .sp_fsm import SpFsm, SpFsmConfig, SpFsmReport, run_sp_fsm
from .stream import ForwardStream, Reservoir, Stream, StreamItem

__version__ = "0.1.0"
