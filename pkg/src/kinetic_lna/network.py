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
Reaction networks: the line DSL, propensities, drift, diffusion and drift Jacobian.

A network file looks like::

    species pred prey
    param theta1 theta2 theta3
    reaction: pred + prey -> 2 pred @ theta1 * pred * prey
    reaction: pred -> 0 @ theta2 * pred
    reaction: prey -> 2 prey @ theta3 * prey

Rate expressions are parsed into sympy trees; the Jacobian is differentiated symbolically
and every expression is compiled once with ``sympy.lambdify``.

Examples:
    >>> net = parse_network(text)
    >>> propensities(net, [40, 140], [0.01, 0.6, 0.3])
    array([56., 24., 42.])
"""

from __future__ import annotations

import logging
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import sympy

from .errors import (
    DegenerateReactionWarning,
    NetworkParseError,
    ParseErrorKind,
    RateEvaluationError,
    StateInconsistencyError,
)

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/()]))"
)
_SIDE_TERM = re.compile(r"^\s*(?:(?P<count>\d+)\s*)?(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*$")
_CONST_LINE = re.compile(r"^const\s+(?P<name>\S+)\s*=\s*(?P<value>\S+)\s*$")


# ==================#
# DOMAIN TYPES      #
# ==================#


@dataclass(frozen=True)
class RateExpression:
    """A parsed rate law. Equality is on the whitespace-normalised source text."""

    source: str
    expr: sympy.Expr = field(compare=False, repr=False)

    @property
    def identifiers(self) -> set[str]:
        return {s.name for s in self.expr.free_symbols}


@dataclass(frozen=True)
class Reaction:
    reactants: tuple[int, ...]
    products: tuple[int, ...]
    rate: RateExpression

    @property
    def net_effect(self) -> np.ndarray:
        return np.asarray(self.products, dtype=int) - np.asarray(self.reactants, dtype=int)

    @property
    def is_degenerate(self) -> bool:
        return not np.any(self.net_effect)


@dataclass(frozen=True)
class ReactionNetwork:
    """
    Species, parameters, constants and reactions of a network.

    Immutable after construction; compiled evaluators are cached on first use, so one
    instance can be shared by concurrent evaluations.

    Attributes:
        species: Ordered species names (state indices)
        params: Ordered parameter names (theta indices)
        constants: Named numeric constants substituted into the rate laws
        reactions: Reactions in declaration order
    """

    species: tuple[str, ...]
    params: tuple[str, ...]
    constants: dict[str, float]
    reactions: tuple[Reaction, ...]

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_params(self) -> int:
        return len(self.params)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @cached_property
    def net_effect_matrix(self) -> np.ndarray:
        """A, the n_r x n_s net-effect matrix; its transpose is the stoichiometry matrix."""
        return np.array([r.net_effect for r in self.reactions], dtype=int).reshape(
            self.n_reactions, self.n_species
        )

    @cached_property
    def reactant_matrix(self) -> np.ndarray:
        return np.array([r.reactants for r in self.reactions], dtype=int)

    @cached_property
    def product_matrix(self) -> np.ndarray:
        return np.array([r.products for r in self.reactions], dtype=int)

    @cached_property
    def _stoichiometry(self) -> np.ndarray:
        return self.net_effect_matrix.T.astype(float)

    @cached_property
    def _symbols(self) -> tuple[list[sympy.Symbol], list[sympy.Symbol]]:
        return (
            [sympy.Symbol(name) for name in self.species],
            [sympy.Symbol(name) for name in self.params],
        )

    @cached_property
    def _rate_exprs(self) -> list[sympy.Expr]:
        subs = {
            sympy.Symbol(name): sympy.nsimplify(value) for name, value in self.constants.items()
        }
        return [r.rate.expr.subs(subs) for r in self.reactions]

    @cached_property
    def _rate_funcs(self) -> list[Callable[..., float]]:
        xs, ps = self._symbols
        return [sympy.lambdify((xs, ps), e, modules="math") for e in self._rate_exprs]

    @cached_property
    def _rate_vector_func(self) -> Callable[..., list[float]]:
        xs, ps = self._symbols
        return sympy.lambdify((xs, ps), self._rate_exprs, modules="math")

    @cached_property
    def _gradient_funcs(self) -> list[Callable[..., list[float]]]:
        xs, ps = self._symbols
        return [
            sympy.lambdify((xs, ps), [sympy.diff(e, x) for x in xs], modules="math")
            for e in self._rate_exprs
        ]

    @cached_property
    def _rate_jacobian_func(self) -> Callable[..., list[list[float]]]:
        xs, ps = self._symbols
        rows = [[sympy.diff(e, x) for x in xs] for e in self._rate_exprs]
        return sympy.lambdify((xs, ps), rows, modules="math")

    def rate_jacobian(self, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
        """dh/dx, the n_r x n_s matrix of propensity derivatives."""
        xs, ps = _as_floats(x, self.n_species), _as_floats(theta, self.n_params)
        try:
            jac = np.asarray(self._rate_jacobian_func(xs, ps), dtype=float)
        except (ZeroDivisionError, OverflowError, ValueError):
            jac = None
        if jac is None or not np.all(np.isfinite(jac)):
            self._locate_failure(self._gradient_funcs, xs, ps, "derivative")
        return jac.reshape(self.n_reactions, self.n_species)

    def propensities(self, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
        xs, ps = _as_floats(x, self.n_species), _as_floats(theta, self.n_params)
        try:
            h = np.asarray(self._rate_vector_func(xs, ps), dtype=float)
        except (ZeroDivisionError, OverflowError, ValueError):
            h = None
        if h is None or not np.all(np.isfinite(h)):
            self._locate_failure(self._rate_funcs, xs, ps, "rate")
        return h

    def drift(self, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
        return self._stoichiometry @ self.propensities(x, theta)

    def diffusion_matrix(self, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
        h = self.propensities(x, theta)
        return self._diffusion_from(h)

    def drift_jacobian(self, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
        return self._stoichiometry @ self.rate_jacobian(x, theta)

    def _diffusion_from(self, h: np.ndarray) -> np.ndarray:
        negative = np.flatnonzero(h < 0)
        if negative.size:
            i = int(negative[0])
            raise StateInconsistencyError(i, float(h[i]))
        a_t = self._stoichiometry
        return (a_t * h) @ a_t.T

    def _locate_failure(
        self, funcs: Sequence[Callable[..., object]], xs: list[float], ps: list[float], what: str
    ) -> None:
        for i, func in enumerate(funcs):
            try:
                value = np.asarray(func(xs, ps), dtype=float)
            except ZeroDivisionError:
                raise RateEvaluationError(i, f"division by zero in {what} expression") from None
            except (OverflowError, ValueError) as exc:
                raise RateEvaluationError(i, f"{what} evaluation failed: {exc}") from None
            if not np.all(np.isfinite(value)):
                raise RateEvaluationError(i, f"non-finite {what} value")
        raise RateEvaluationError(-1, f"{what} evaluation failed")


def _as_floats(values: Sequence[float], size: int) -> list[float]:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size != size:
        raise ValueError(f"Expected {size} values, got {arr.size}")
    return arr.tolist()


# ==================#
# EVALUATION API    #
# ==================#


def propensities(net: ReactionNetwork, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
    """Reaction rates h(x, theta) as an n_r-vector."""
    return net.propensities(x, theta)


def drift(net: ReactionNetwork, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
    """A'h(x, theta), the infinitesimal mean rate of change."""
    return net.drift(x, theta)


def diffusion_matrix(
    net: ReactionNetwork, x: Sequence[float], theta: Sequence[float]
) -> np.ndarray:
    """A' diag(h) A; raises StateInconsistencyError if any propensity is negative."""
    return net.diffusion_matrix(x, theta)


def drift_jacobian(net: ReactionNetwork, x: Sequence[float], theta: Sequence[float]) -> np.ndarray:
    """F = d(A'h)/dx from the symbolic derivative of every rate law."""
    return net.drift_jacobian(x, theta)


# ==================#
# DSL PARSER        #
# ==================#


class _ExpressionParser:
    """Recursive descent over expr := term (('+'|'-') term)*, term := factor (('*'|'/') factor)*."""

    def __init__(self, text: str, line: int, offset: int, known: dict[str, sympy.Symbol]):
        self.line = line
        self.known = known
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if match is None or match.end() == pos:
                col = offset + pos + len(stripped[pos:]) - len(stripped[pos:].lstrip()) + 1
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX,
                    f"unexpected character {stripped[pos:].lstrip()[:1]!r}",
                    line,
                    col,
                )
            kind = match.lastgroup or "op"
            self.tokens.append((kind, match.group(kind), offset + match.start(kind) + 1))
            pos = match.end()
        self.index = 0
        self.end_column = offset + len(stripped) + 1

    def parse(self) -> sympy.Expr:
        if not self.tokens:
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, "empty rate expression", self.line, self.end_column
            )
        expr = self._expr()
        if self.index < len(self.tokens):
            _, value, col = self.tokens[self.index]
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, f"unexpected token {value!r}", self.line, col
            )
        return expr

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _expr(self) -> sympy.Expr:
        result = self._term()
        while (tok := self._peek()) is not None and tok[1] in "+-" and tok[0] == "op":
            self.index += 1
            rhs = self._term()
            result = result + rhs if tok[1] == "+" else result - rhs
        return result

    def _term(self) -> sympy.Expr:
        result = self._factor()
        while (tok := self._peek()) is not None and tok[1] in "*/" and tok[0] == "op":
            self.index += 1
            rhs = self._factor()
            if tok[1] == "*":
                result = result * rhs
            else:
                if rhs == 0:
                    raise NetworkParseError(
                        ParseErrorKind.SYNTAX, "division by zero", self.line, tok[2]
                    )
                result = result / rhs
        return result

    def _factor(self) -> sympy.Expr:
        tok = self._peek()
        if tok is None:
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, "unexpected end of expression", self.line, self.end_column
            )
        kind, value, col = tok
        self.index += 1
        if kind == "number":
            return sympy.Rational(value)
        if kind == "name":
            if value not in self.known:
                raise NetworkParseError(
                    ParseErrorKind.UNKNOWN_IDENTIFIER,
                    f"undeclared identifier {value!r}",
                    self.line,
                    col,
                )
            return self.known[value]
        if value == "-":
            return -self._factor()
        if value == "(":
            inner = self._expr()
            closing = self._peek()
            if closing is None or closing[1] != ")":
                where = closing[2] if closing else self.end_column
                raise NetworkParseError(ParseErrorKind.SYNTAX, "expected ')'", self.line, where)
            self.index += 1
            return inner
        raise NetworkParseError(
            ParseErrorKind.SYNTAX, f"unexpected token {value!r}", self.line, col
        )


def _declared(raw: str) -> list[tuple[str, int]]:
    """Names after the keyword of a declaration line, with 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw)][1:]


def _check_names(names: list[tuple[str, int]], seen: set[str], line: int) -> None:
    for name, col in names:
        if not IDENTIFIER.fullmatch(name):
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, f"invalid identifier {name!r}", line, col
            )
        if name in seen:
            raise NetworkParseError(
                ParseErrorKind.DUPLICATE_NAME, f"duplicate name {name!r}", line, col
            )
        seen.add(name)


def _parse_side(
    text: str, species_index: dict[str, int], line: int, offset: int
) -> tuple[int, ...]:
    counts = [0] * len(species_index)
    stripped = text.strip()
    if stripped == "0":
        return tuple(counts)
    if not stripped:
        raise NetworkParseError(
            ParseErrorKind.SYNTAX, "empty reaction side (use 0)", line, offset + 1
        )
    pos = 0
    for term in text.split("+"):
        col = offset + pos + len(term) - len(term.lstrip()) + 1
        match = _SIDE_TERM.match(term)
        if match is None:
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, f"bad stoichiometric term {term.strip()!r}", line, col
            )
        name = match.group("name")
        if name not in species_index:
            raise NetworkParseError(
                ParseErrorKind.UNKNOWN_IDENTIFIER, f"unknown species {name!r}", line, col
            )
        count = int(match.group("count") or 1)
        if count <= 0:
            raise NetworkParseError(
                ParseErrorKind.INVALID_STOICHIOMETRY,
                f"multiplicity must be positive: {term.strip()!r}",
                line,
                col,
            )
        counts[species_index[name]] += count
        pos += len(term) + 1
    return tuple(counts)


def parse_network(text: str) -> ReactionNetwork:
    """
    Parse the network DSL.

    Args:
        text: DSL source (``#`` comments, blank lines ignored)

    Returns:
        The parsed ReactionNetwork

    Raises:
        NetworkParseError: with kind syntax, unknown_identifier, duplicate_name,
            empty_reactions, missing_declaration or invalid_stoichiometry
    """
    species: list[str] | None = None
    params: list[str] | None = None
    constants: dict[str, float] = {}
    seen: set[str] = set()
    pending: list[tuple[int, str, int]] = []

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        raw = raw_line.split("#", 1)[0].rstrip()
        if not raw.strip():
            continue
        indent = len(raw) - len(raw.lstrip())
        line = raw.strip()
        keyword = line.split(None, 1)[0]

        if keyword == "species":
            if species is not None:
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX, "second species declaration", lineno, indent + 1
                )
            declared = _declared(raw)
            species = [name for name, _ in declared]
            if not species:
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX, "at least one species is required", lineno, indent + 1
                )
            _check_names(declared, seen, lineno)
        elif keyword == "param":
            if params is not None:
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX, "second param declaration", lineno, indent + 1
                )
            declared = _declared(raw)
            params = [name for name, _ in declared]
            _check_names(declared, seen, lineno)
        elif keyword == "const":
            match = _CONST_LINE.match(line)
            if match is None:
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX, "expected 'const <name> = <number>'", lineno, indent + 1
                )
            name, value = match.group("name"), match.group("value")
            _check_names([(name, indent + match.start("name") + 1)], seen, lineno)
            body = value[1:] if value.startswith("-") else value
            if not NUMBER.fullmatch(body):
                raise NetworkParseError(
                    ParseErrorKind.SYNTAX,
                    f"constant value is not a number: {value!r}",
                    lineno,
                    raw.rfind(value) + 1,
                )
            constants[name] = float(value)
        elif line.startswith("reaction:"):
            pending.append((lineno, raw, indent + len("reaction:")))
        else:
            raise NetworkParseError(
                ParseErrorKind.SYNTAX, f"unknown statement {keyword!r}", lineno, indent + 1
            )

    if species is None:
        raise NetworkParseError(ParseErrorKind.MISSING_DECLARATION, "missing 'species' line", 0, 0)
    if params is None:
        raise NetworkParseError(ParseErrorKind.MISSING_DECLARATION, "missing 'param' line", 0, 0)
    if not pending:
        raise NetworkParseError(ParseErrorKind.EMPTY_REACTIONS, "network has no reactions", 0, 0)

    species_index = {name: i for i, name in enumerate(species)}
    known = {name: sympy.Symbol(name) for name in [*species, *params, *constants]}
    reactions = [
        _parse_reaction(lineno, raw, start, species_index, known)
        for lineno, raw, start in pending
    ]

    for i, reaction in enumerate(reactions):
        if reaction.is_degenerate:
            warnings.warn(
                f"reaction {i + 1} has zero net effect", DegenerateReactionWarning, stacklevel=2
            )

    net = ReactionNetwork(tuple(species), tuple(params), constants, tuple(reactions))
    logger.debug("parsed network: %d species, %d reactions", net.n_species, net.n_reactions)
    return net


def _parse_reaction(
    lineno: int, raw: str, start: int, species_index: dict[str, int], known: dict[str, sympy.Symbol]
) -> Reaction:
    body = raw[start:]
    arrow = body.find("->")
    at = body.find("@")
    if arrow < 0:
        raise NetworkParseError(ParseErrorKind.SYNTAX, "expected '->'", lineno, start + 1)
    if at < 0 or at < arrow:
        raise NetworkParseError(
            ParseErrorKind.SYNTAX, "expected '@ <rate expression>'", lineno, start + arrow + 1
        )
    reactants = _parse_side(body[:arrow], species_index, lineno, start)
    products = _parse_side(body[arrow + 2 : at], species_index, lineno, start + arrow + 2)
    rate_text = body[at + 1 :]
    expr = _ExpressionParser(rate_text, lineno, start + at + 1, known).parse()
    return Reaction(reactants, products, RateExpression(" ".join(rate_text.split()), expr))


# ==================#
# SERIALIZATION     #
# ==================#


def _format_side(counts: Sequence[int], species: Sequence[str]) -> str:
    terms = [name if n == 1 else f"{n} {name}" for n, name in zip(counts, species) if n]
    return " + ".join(terms) if terms else "0"


def serialize_network(net: ReactionNetwork) -> str:
    """Render a network back to the DSL; parse_network inverts this up to whitespace."""
    lines = [f"species {' '.join(net.species)}", f"param {' '.join(net.params)}".rstrip()]
    lines.extend(f"const {name} = {value!r}" for name, value in net.constants.items())
    for reaction in net.reactions:
        lhs = _format_side(reaction.reactants, net.species)
        rhs = _format_side(reaction.products, net.species)
        lines.append(f"reaction: {lhs} -> {rhs} @ {reaction.rate.source}")
    return "\n".join(lines) + "\n"
