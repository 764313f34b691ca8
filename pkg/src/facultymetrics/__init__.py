"""Field-normalized research productivity and faculty mobility analytics.

Computes per-researcher productivity (citation-scaled, co-authorship
fractionalized yearly output), derives recruitment and turnover events
from yearly rosters, and scores each university's effectiveness at
attracting and retaining productive faculty, with ranked reports and
rank-correlation analyses.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    AssessmentConfig,
    AuthorSlot,
    ConfigError,
    Dataset,
    DataQualityIssue,
    LoadResult,
    Publication,
    RosterEntry,
    classify_bibliometric_sds,
    load_dataset,
    restrict_to_bibliometric,
)
from .credit import CreditVector, credit_for, equal_fractions, positional_fractions  # noqa: F401
from .scoring import (  # noqa: F401
    ProductivityRecord,
    ScoreTable,
    build_scores,
    compute_baselines,
    compute_fss,
    fss_ratio,
    percentile_rank,
    salary_normalize,
    scaled_citation,
    service_years,
    university_productivity,
)
from .mobility import (  # noqa: F401
    CareerEvent,
    MobilitySummary,
    UniversityCohorts,
    build_cohorts,
    derive_events,
    summarize_mobility,
)
from .indicators import (  # noqa: F401
    EffectivenessReport,
    ExternalAverage,
    FullReport,
    InternalAverage,
    external_average,
    full_report,
    internal_average,
    mobility_effectiveness,
    recruitment_effectiveness,
    substitute_degenerate,
    turnover_effectiveness,
)
from .stats import CorrelationMatrix, correlation_matrix, spearman  # noqa: F401
from .synth import SynthSpec, generate  # noqa: F401
