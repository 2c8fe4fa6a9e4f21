"""starcount: planted subgraph detection with constant-degree polynomial tests.

Decide whether any constant-degree polynomial (equivalently, signed subgraph
count) statistic separates the planted model P (G(n,p) union a random copy of
H) from the null Q = G(n,p); identify the optimal star-count statistic; and
verify the closed-form moment and advantage formulas against brute-force
oracles and Monte Carlo at desk scale.
"""

__version__ = "1.0.0"

from .advantage import (
    AdvantageReport,
    RegimeLabel,
    RegimeMargins,
    StarAdvantage,
    StarCriterion,
    analyze_profile,
    brute_force_advantage,
    classify_regime,
    exact_planted_second_moment,
    intersection_ratio,
    shape_advantage,
    shape_moments,
    star_criterion,
    total_advantage,
)
from .errors import BudgetError, ConfigError
from .graphs import (
    DegreeProfile,
    Graph,
    IntersectionPattern,
    Shape,
    automorphism_count,
    canonical_form,
    count_in_complete,
    count_labelled_copies,
    enumerate_patterns,
    enumerate_shapes,
    falling_factorial,
    format_edge_list,
    parse_edge_list,
    star_copy_count,
)
from .models import (
    HSpec,
    PlantedModel,
    PlantedSample,
    analytic_profile,
    parse_hspec,
    realize_h,
    sample_null,
    sample_planted,
    trial_rng,
)
from .montecarlo import (
    ConcentrationReport,
    MCReport,
    RatioEstimate,
    degree_concentration_check,
    empirical_error,
    estimate_separation,
    second_moment_ratio,
)
from .stats import (
    TestStatistic,
    chi,
    closed_path_trace,
    evaluate,
    parse_statistic,
    signed_count,
    signed_count_naive,
    signed_star_count,
    unsigned_clique_count,
)
