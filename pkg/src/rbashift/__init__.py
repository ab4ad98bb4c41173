"""Robust bias-aware classification under covariate shift.

Estimators whose target predictions hedge by the source/target density
ratio, their kernelized counterparts, importance-weighted and plain
softmax-regression baselines, density-ratio estimation, regularization
selection, and a biased-sampling benchmark harness.
"""

from .baselines import BaselineModel, iw_fit, kiw_fit, klr_fit, lr_fit
from .core import (
    Dataset,
    FeatureMap,
    MetricReport,
    NumericalFailure,
    accuracy,
    check_prediction_matrix,
    design_matrix,
    entropy,
    evaluate,
    feature_map,
    load_csv,
    logloss,
    save_csv,
    softmax_rows,
)
from .density_ratio import (
    DensityRatioModel,
    fit_ratio,
    fit_ratio_cv,
    ratio,
    ratio_many,
)
from .kernel_rba import KernelRbaModel, krba_fit, krba_predict, krba_score
from .kernels import KernelSpec, gram, joint_kernel, kernel_eval
from .model_select import SelectionPlan, select
from .optim import OptResult, TrainConfig, minimize
from .rba import LinearRbaModel, rba_fit, rba_gradient, rba_potential, rba_predict
from .serialize import load_model, save_model
from .shiftbench import (
    BiasPlan,
    ExperimentReport,
    SCENARIOS,
    bias_sample,
    run_experiment,
    synth_scenario,
)
from .stats import paired_t_test, t_cdf

__all__ = [
    "BaselineModel",
    "BiasPlan",
    "Dataset",
    "DensityRatioModel",
    "ExperimentReport",
    "FeatureMap",
    "KernelRbaModel",
    "KernelSpec",
    "LinearRbaModel",
    "MetricReport",
    "NumericalFailure",
    "OptResult",
    "SCENARIOS",
    "SelectionPlan",
    "TrainConfig",
    "accuracy",
    "bias_sample",
    "check_prediction_matrix",
    "design_matrix",
    "entropy",
    "evaluate",
    "feature_map",
    "fit_ratio",
    "fit_ratio_cv",
    "gram",
    "iw_fit",
    "joint_kernel",
    "kernel_eval",
    "kiw_fit",
    "klr_fit",
    "krba_fit",
    "krba_predict",
    "krba_score",
    "load_csv",
    "load_model",
    "logloss",
    "lr_fit",
    "minimize",
    "paired_t_test",
    "ratio",
    "ratio_many",
    "rba_fit",
    "rba_gradient",
    "rba_potential",
    "rba_predict",
    "run_experiment",
    "save_csv",
    "save_model",
    "select",
    "softmax_rows",
    "synth_scenario",
    "t_cdf",
]

__version__ = "0.1.0"
