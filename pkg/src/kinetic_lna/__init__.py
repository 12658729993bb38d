# Copyright 2026 sudoping01.

# Licensed under the MIT License; you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:

# https://opensource.org/licenses/MIT

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

__version__ = "1.0.1"
__author__ = "sudoping01"
__license__ = "MIT"


from .config import (
    ChainConfig,
    IntegratorConfig,
    LikelihoodEngine,
    ObservationRegime,
    PriorFamily,
    SimulationMethod,
    TuningConfig,
)
from .datasets import Dataset, load_dataset, smallpox
from .errors import (
    ConfigurationError,
    DataFormatError,
    DegenerateObservationWarning,
    DegenerateReactionWarning,
    FilterError,
    IntegrationError,
    KineticLNAError,
    KineticLNAWarning,
    MatrixError,
    NegativeEtaWarning,
    NetworkParseError,
    NumericalError,
    ParseErrorKind,
    RateEvaluationError,
    SimulationError,
    StateInconsistencyError,
    TuningWarning,
    UnknownNameError,
)
from .inference import (
    FilterResult,
    ObservationModel,
    ObservationSeries,
    TransitionLikelihood,
    gaussian_logpdf,
    kalman_update,
    likelihood_function,
    loglik_fully_observed,
    loglik_lna_filter,
    loglik_lna_global,
    loglik_ode_gauss,
    loglik_ode_profile,
    ode_solution,
)
from .lna import (
    EtaPath,
    GaussianDist,
    LNAState,
    clip_psd,
    integrate_ode,
    lna_predict,
    lna_predict_global,
    lna_transition_density,
    psd_sqrt,
    solve_eta_path,
)
from .mcmc import (
    ESSResult,
    InitialStatePrior,
    ParameterSummary,
    PosteriorTarget,
    PriorEntry,
    PriorSpec,
    SampleChain,
    ess,
    log_accept_ratio,
    log_prior,
    rwm_chain,
    summarize,
    tune_proposal,
)
from .models import BUILTINS, autoreg, builtin, lotka_volterra, ornstein_uhlenbeck, sir
from .network import (
    RateExpression,
    Reaction,
    ReactionNetwork,
    diffusion_matrix,
    drift,
    drift_jacobian,
    parse_network,
    propensities,
    serialize_network,
)
from .simulation import (
    EmpiricalTransition,
    Trajectory,
    em_lna_perturbation,
    em_trajectory,
    empirical_transition,
    empirical_transitions,
    euler_maruyama,
    make_rng,
    sample_at_times,
    ssa_trajectory,
)

__all__ = [
    # Configuration
    "ChainConfig",
    "IntegratorConfig",
    "LikelihoodEngine",
    "ObservationRegime",
    "PriorFamily",
    "SimulationMethod",
    "TuningConfig",
    # Errors and warnings
    "ConfigurationError",
    "DataFormatError",
    "DegenerateObservationWarning",
    "DegenerateReactionWarning",
    "FilterError",
    "IntegrationError",
    "KineticLNAError",
    "KineticLNAWarning",
    "MatrixError",
    "NegativeEtaWarning",
    "NetworkParseError",
    "NumericalError",
    "ParseErrorKind",
    "RateEvaluationError",
    "SimulationError",
    "StateInconsistencyError",
    "TuningWarning",
    "UnknownNameError",
    # Network model
    "RateExpression",
    "Reaction",
    "ReactionNetwork",
    "diffusion_matrix",
    "drift",
    "drift_jacobian",
    "parse_network",
    "propensities",
    "serialize_network",
    "BUILTINS",
    "autoreg",
    "builtin",
    "lotka_volterra",
    "ornstein_uhlenbeck",
    "sir",
    # Simulation
    "EmpiricalTransition",
    "Trajectory",
    "em_lna_perturbation",
    "em_trajectory",
    "empirical_transition",
    "empirical_transitions",
    "euler_maruyama",
    "make_rng",
    "sample_at_times",
    "ssa_trajectory",
    # LNA
    "EtaPath",
    "GaussianDist",
    "LNAState",
    "clip_psd",
    "integrate_ode",
    "lna_predict",
    "lna_predict_global",
    "lna_transition_density",
    "psd_sqrt",
    "solve_eta_path",
    # Inference
    "FilterResult",
    "ObservationModel",
    "ObservationSeries",
    "TransitionLikelihood",
    "gaussian_logpdf",
    "kalman_update",
    "likelihood_function",
    "loglik_fully_observed",
    "loglik_lna_filter",
    "loglik_lna_global",
    "loglik_ode_gauss",
    "loglik_ode_profile",
    "ode_solution",
    # MCMC
    "ESSResult",
    "InitialStatePrior",
    "ParameterSummary",
    "PosteriorTarget",
    "PriorEntry",
    "PriorSpec",
    "SampleChain",
    "ess",
    "log_accept_ratio",
    "log_prior",
    "rwm_chain",
    "summarize",
    "tune_proposal",
    # Datasets
    "Dataset",
    "load_dataset",
    "smallpox",
]
