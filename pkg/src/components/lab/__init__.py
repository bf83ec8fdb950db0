from .config import ExperimentConfig as ExperimentConfig, load_config as load_config
from .experiment import (
    CellResult as CellResult,
    ExperimentTarget as ExperimentTarget,
    LearningCurveResult as LearningCurveResult,
    generate_dataset as generate_dataset,
    resolve_experiment_target as resolve_experiment_target,
    run_cell as run_cell,
    run_learning_curve as run_learning_curve,
)
from .report import (
    RateReport as RateReport,
    RateRow as RateRow,
    SlopeFit as SlopeFit,
    compare_to_theory as compare_to_theory,
    fit_slope as fit_slope,
)
from .rng import cell_generator as cell_generator
