from .exponents import (
    RatePrediction as RatePrediction,
    estimate_alpha as estimate_alpha,
    estimate_beta as estimate_beta,
    estimate_tail_alpha as estimate_tail_alpha,
    predict_rates as predict_rates,
    tail_rank_window as tail_rank_window,
)
from .io import (
    expansion_summary as expansion_summary,
    spectrum_summary as spectrum_summary,
    write_expansion as write_expansion,
    write_spectrum as write_spectrum,
)
from .lemma import Regime as Regime, classify_regime as classify_regime, powerlaw_sum as powerlaw_sum
from .mercer import (
    Mode as Mode,
    Parity as Parity,
    Spectrum as Spectrum,
    TruncatedKernel as TruncatedKernel,
    design_matrix as design_matrix,
    eigenfunction_value as eigenfunction_value,
    mercer_spectrum as mercer_spectrum,
    profile_coefficients as profile_coefficients,
)
from .targets import (
    BUILTIN_TARGETS as BUILTIN_TARGETS,
    PRIOR_TARGET as PRIOR_TARGET,
    TABLE_ROWS as TABLE_ROWS,
    FourierTarget as FourierTarget,
    SeriesTarget as SeriesTarget,
    TargetExpansion as TargetExpansion,
    resolve_target as resolve_target,
    sample_target_from_prior as sample_target_from_prior,
    target_expansion as target_expansion,
)
from .theory import (
    TheoryCurve as TheoryCurve,
    eigenvalue_tail_bound as eigenvalue_tail_bound,
    theory_curves as theory_curves,
)
