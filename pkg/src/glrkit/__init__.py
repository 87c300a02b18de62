"""glrkit: statistical evidence for composite hypotheses.

Build a likelihood model, describe hypotheses as predicate strings over
named parameters, and compare them by the ratio of restricted likelihood
suprema.  Profile curves, support sets, Monte Carlo limit checks, and
reduced-data calculators round out the toolkit; the ``glrkit`` console
script exposes everything with JSON/CSV output.
"""

__version__ = "0.1.0"

from .asymptotics import (
    ConsistencyReport,
    EmpiricalDistribution,
    LimitSpec,
    SimulationConfig,
    boundary_scenario,
    consistency_scenario,
    consistency_trend,
    ks_distance,
    limit_cdf,
    point_null_scenario,
    simulate_glr,
)
from .evidence import (
    EvidenceReport,
    LikelihoodModel,
    ProfileCurve,
    SupportSet,
    evidence_vs_complement,
    glr,
    largest_supported_k,
    profile_curve,
    strength_label,
    sup_log_lik,
    support_set,
    supported_region_covers_support_set,
)
from .models import (
    BinomialData,
    BivariateNormalParams,
    PairedSample,
    TwoBinomialData,
    binomial_log_lik,
    binomial_model,
    bivnorm_log_lik,
    generate_paired_sample,
    load_paired_csv,
    mean_diff_model,
    mean_diff_profile_log_lik,
    sd_ratio_model,
    sd_ratio_profile_log_lik,
    two_binomial_model,
    two_binomial_profile_log_lik,
)
from .optimize import (
    BracketError,
    MaxResult,
    NumericError,
    OptimizerConfig,
    find_root_1d,
    maximize_1d,
    maximize_box,
)
from .reduced import (
    PowerFunction,
    TestOutcome,
    glr_from_pvalue_general,
    glr_from_pvalue_normal,
    glr_from_test,
)
from .regions import (
    EmptyRegionError,
    Interval,
    Parameter,
    ParameterSpace,
    Region,
    RegionError,
    RegionSyntaxError,
    ScalarRegion,
    UnknownParameterError,
    closure,
    complement,
    contains,
    parse_region,
)

__all__ = [name for name in dir() if not name.startswith("_")]
