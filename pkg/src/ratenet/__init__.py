"""ratenet: directed causal networks of interest-rate panels.

Workflow: load and detrend a panel (:mod:`ratenet.panel`), fit VAR models
(:mod:`ratenet.var`), test conditional Granger causality in time
(:mod:`ratenet.causality`) and frequency (:mod:`ratenet.spectral`) domains,
assemble the significant edges into a network (:mod:`ratenet.network`), and
score benchmark candidates with CheiRank (:mod:`ratenet.rank`). The
:mod:`ratenet.pipeline` module orchestrates the full study and
:mod:`ratenet.synth` generates panels with known ground truth.
"""

from .causality import EdgeList, GcStat, all_pairs_conditional, conditional_gc, pairwise_gc
from .errors import RateNetError
from .network import CausalNetwork, annotate_frequency, build_network, degree_table, export
from .panel import Panel, clean, detrend_ma, load_csv, stationarity_screen
from .pipeline import Config, run_full, run_group_analysis, run_rolling
from .rank import RankScores, cheirank, pagerank, top_k
from .spectral import (
    FrequencyGrid,
    SpectralProfile,
    band_classify,
    conditional_spectral_gc,
    cpsd,
    peak_frequency,
    remove_instantaneous,
    spectral_gc,
    transfer_function,
)
from .synth import make_chain, make_hub_panel, oracle_gc
from .var import VarModel, fit_var, is_stable, select_order_bic, simulate_var

__version__ = "0.1.0"
