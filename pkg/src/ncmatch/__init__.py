"""Perfect and minimum-weight perfect matching through a matching-weight oracle."""

from .errors import (DimacsError, DisconnectedSet, EvenComponentAtThreshold, EvenSet,
                     GraphError, InvalidWalk, LemmaViolation, NCMatchError, NoPerfectMatchingInput,
                     NoProgress, NotLaminar, NoWitness, OddTokens, OracleError, OverlappingSets,
                     WeightCapError)
from .graph import (CONTRACTION_AUDIT, LaminarFamily, Minor, connected_components, contract,
                    dedupe_parallel_edges, flip_heavy_sets, is_perfect_matching_graph,
                    non_isolated_edge_count)
from .io import format_dimacs, parse_dimacs, read_dimacs
from .oracle import (BruteForceOracle, Oracle, OracleTranscript, ReplayOracle, TutteOracle,
                     allowed_edges, make_oracle, mu, mu_all)
from .parallel import Config, Context
from .duals import balanced_critical_dual
from .walks import EvenWalk, circulation, mismatch, signature, weight_family
from .reduce import reduce
from .partial import Triad, find_triads, maximal_disjoint_triads, partial_matching
from .matcher import (MatchingResult, NoPerfectMatching, maximum_matching,
                      min_weight_perfect_matching, perfect_matching, verify_perfect_matching)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
