# Copyright 2026 sudoping01.

# Licensed under the MIT License; you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:

# https://opensource.org/licenses/MIT

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Exceptions and warning categories.

Library code raises; only the command-line front end turns these into exit codes.
"""

from __future__ import annotations

from enum import Enum


class ParseErrorKind(Enum):
    SYNTAX = "syntax"
    UNKNOWN_IDENTIFIER = "unknown_identifier"
    DUPLICATE_NAME = "duplicate_name"
    EMPTY_REACTIONS = "empty_reactions"
    MISSING_DECLARATION = "missing_declaration"
    INVALID_STOICHIOMETRY = "invalid_stoichiometry"


class KineticLNAError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(KineticLNAError, ValueError):
    pass


class UnknownNameError(KineticLNAError, ValueError):
    """Unknown builtin network or dataset name."""


class NetworkParseError(KineticLNAError, ValueError):
    """Network DSL error with a machine-readable kind and a 1-based position."""

    def __init__(self, kind: ParseErrorKind, message: str, line: int = 0, column: int = 0):
        self.kind = kind
        self.line = line
        self.column = column
        super().__init__(f"{kind.value} at line {line}, column {column}: {message}")


class DataFormatError(KineticLNAError, ValueError):
    """Malformed observation CSV, observation-model spec or prior spec."""

    def __init__(self, message: str, source: str = "", line: int = 0):
        self.source = source
        self.line = line
        where = f"{source}:{line}: " if source else ""
        super().__init__(f"{where}{message}")


class NumericalError(KineticLNAError, ArithmeticError):
    """Base for failures that map to the numerical-failure exit code."""


class RateEvaluationError(NumericalError):
    def __init__(self, reaction: int, message: str):
        self.reaction = reaction
        super().__init__(f"reaction {reaction + 1}: {message}")


class StateInconsistencyError(NumericalError):
    """A propensity is negative at the requested state."""

    def __init__(self, reaction: int, value: float):
        self.reaction = reaction
        self.value = value
        super().__init__(f"reaction {reaction + 1} has negative propensity {value:g}")


class SimulationError(NumericalError):
    def __init__(self, message: str, time: float = float("nan"), replicate: int | None = None):
        self.reason = message
        self.time = time
        self.replicate = replicate
        prefix = f"replicate {replicate}: " if replicate is not None else ""
        super().__init__(f"{prefix}{message} (t={time:g})")


class IntegrationError(NumericalError):
    def __init__(self, message: str, time: float = float("nan"), interval: int | None = None):
        self.reason = message
        self.time = time
        self.interval = interval
        prefix = f"interval {interval}: " if interval is not None else ""
        super().__init__(f"{prefix}{message} (t={time:g})")


class MatrixError(NumericalError):
    """Matrix is not symmetric, or not positive semi-definite beyond tolerance."""


class FilterError(NumericalError):
    """Innovation covariance is not positive definite even after jitter."""


class KineticLNAWarning(UserWarning):
    pass


class DegenerateReactionWarning(KineticLNAWarning):
    pass


class NegativeEtaWarning(KineticLNAWarning):
    pass


class TuningWarning(KineticLNAWarning):
    pass


class DegenerateObservationWarning(KineticLNAWarning):
    pass
