from .functionals import (
    IdentityCheck as IdentityCheck,
    NscTerms as NscTerms,
    bayes_gen_error as bayes_gen_error,
    excess_mse as excess_mse,
    expected_gen_error as expected_gen_error,
    expected_nsc as expected_nsc,
    expected_nsc_terms as expected_nsc_terms,
    gen_error_identity_check as gen_error_identity_check,
    kl_gaussian as kl_gaussian,
    nsc as nsc,
    quadrature_grid as quadrature_grid,
)
from .posterior import (
    Dataset as Dataset,
    PosteriorState as PosteriorState,
    fit as fit,
    krr_predict as krr_predict,
    posterior_mean as posterior_mean,
    posterior_mean_var as posterior_mean_var,
    posterior_var as posterior_var,
)
