"""Quantile correlation coefficients with tail dependence inference.

The quantile correlation at level tau is the signed geometric mean of the two
directional quantile-regression slopes, mirroring how the Pearson correlation
relates to the two least-squares slopes.  This package provides the point
estimator, sandwich standard errors with two conditional-density strategies,
tail dependence and asymmetry tests, seeded data-generating processes, and a
Monte-Carlo campaign harness.
"""

from .conddens import (
    BH,
    HK,
    BhBandwidths,
    BhDensityEvaluator,
    DensityValues,
    bh_bandwidths,
    bh_density_values,
    density_values,
    hk_bandwidth,
    hk_density_values,
    norm_cdf,
    norm_pdf,
    norm_ppf,
)
from .correlation import (
    DeltaTau,
    QCorrEstimate,
    TailMeasure,
    combine_slopes,
    delta_tau_diagnostic,
    li_indicator_correlation,
    li_indicator_slopes,
    quantile_correlation,
    tail_asymmetry_measure,
    tail_dependence_measure,
)
from .errors import (
    DataError,
    DegenerateDesignError,
    DegenerateMomentsError,
    DegenerateVarianceError,
    InsufficientDataError,
    NumericalDegeneracyError,
    ParameterError,
    QcorrError,
    SingularInformationError,
    UndefinedCorrelationError,
)
from .inference import (
    CiResult,
    SandwichParts,
    TestResult,
    confidence_interval,
    h_hat,
    m_hat,
    sandwich_parts,
    score_vectors,
    tail_tests,
    two_tau_parts,
    two_tau_variance,
    variance_rho,
)
from .quantreg import (
    QuantRegFit,
    X_ON_Y,
    Y_ON_X,
    check_loss,
    fit_both,
    fit_line,
)
from .sampling import (
    BivariateSample,
    DgpSpec,
    RngStream,
    draw,
    draw_bivariate_normal,
    draw_bivariate_t,
    draw_cubic,
    draw_garch,
    draw_rocket,
)
from .simkit import (
    CampaignSpec,
    McReport,
    McRow,
    TrueValueEstimate,
    approximate_true_rho,
    run_coverage_campaign,
    run_test_campaign,
    true_rho,
)

__version__ = "0.1.0"
