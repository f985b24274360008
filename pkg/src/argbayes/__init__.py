"""Bayesian direct and inverse inference over abstract argumentation frameworks."""

from .af import ArgumentationFramework, extensions
from .errors import (
    ArgBayesError,
    CapacityError,
    ConfigError,
    DegenerateEvidenceError,
    InputError,
    ParseError,
    PlanError,
    SchemaError,
)
from .gibbs import GibbsConfig, SampleHistogram, run_gibbs
from .inference import (
    AttackVariableSpace,
    Observation,
    PosteriorDistribution,
    exact_posterior,
    map_estimate,
    ml_estimate,
    ml_prediction,
    posterior_predictive,
)
from .model import ModelConfig

__all__ = [
    "ArgumentationFramework",
    "AttackVariableSpace",
    "ArgBayesError",
    "CapacityError",
    "ConfigError",
    "DegenerateEvidenceError",
    "GibbsConfig",
    "InputError",
    "ModelConfig",
    "Observation",
    "ParseError",
    "PlanError",
    "PosteriorDistribution",
    "SampleHistogram",
    "SchemaError",
    "exact_posterior",
    "extensions",
    "map_estimate",
    "ml_estimate",
    "ml_prediction",
    "posterior_predictive",
    "run_gibbs",
]

__version__ = "0.1.0"
