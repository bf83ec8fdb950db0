from .arccos import (
    AngularPoint as AngularPoint,
    KernelSpec as KernelSpec,
    ZonalKernel as ZonalKernel,
    angle_between as angle_between,
    as_thetas as as_thetas,
    pairwise_angles as pairwise_angles,
    wrap_angle as wrap_angle,
    zonal_profile as zonal_profile,
)
from .gram import (
    DEFAULT_JITTER as DEFAULT_JITTER,
    GramMatrix as GramMatrix,
    JitterPolicy as JitterPolicy,
    cross_gram as cross_gram,
    gram as gram,
    jittered_cholesky as jittered_cholesky,
)
