"""Maximal and quasimaximal relative projection constants: bounds, searches, ETFs."""

__version__ = "0.1.0"

from .constants import (
    bound_report,
    certify_equality,
    delta_bound,
    delta_exact,
    global_upper_bound,
    mu_objective,
    objective,
    optimal_weights,
)
from .etf import real_maximal_etf, seidel_to_etf, sic_fiducial, sic_frame, simplex_etf
from .frames import (
    ParsevalNormalizer,
    cardinality_cap,
    certify_etf,
    coherence_profile,
    gram,
    is_tight,
    normalize_to_parseval,
    welch_angle,
)
from .replication import FrameReplicator, rationalize, replicate, verify_replication_identity
from .search import LambdaSearch, MuSearch, OptConfig, lambda_search, mu_search
