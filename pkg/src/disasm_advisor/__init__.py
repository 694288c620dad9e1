"""Component influence scores and fastener-reduction recommendations for robotic disassembly."""

from .assembly import (
    AssemblyBundle,
    BundleError,
    BundleParseError,
    BundleValidationError,
    HostGroup,
    Part,
    dump_bundle,
    group_by_host,
    identify_fasteners,
    load_bundle,
    subsequence_excluding,
)
from .influence import InfluenceTable, influence_scores
from .pipeline import (
    BaselineStats,
    ScoredCandidate,
    SensitivityPoint,
    random_baseline,
    recommend,
    sensitivity_sweep,
)
from .reduction import RemovalCandidate, delta_constraints, enumerate_candidates, isolation_check

__version__ = "0.1.0"

__all__ = [
    "AssemblyBundle",
    "BaselineStats",
    "BundleError",
    "BundleParseError",
    "BundleValidationError",
    "HostGroup",
    "InfluenceTable",
    "Part",
    "RemovalCandidate",
    "ScoredCandidate",
    "SensitivityPoint",
    "delta_constraints",
    "dump_bundle",
    "enumerate_candidates",
    "group_by_host",
    "identify_fasteners",
    "influence_scores",
    "isolation_check",
    "load_bundle",
    "random_baseline",
    "recommend",
    "sensitivity_sweep",
    "subsequence_excluding",
]
