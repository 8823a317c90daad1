"""Unit representations over a symbol registry.

A unit system registers three kinds of symbols: dimensions, prefixes
(each worth an exact positive ratio), and base units (each carrying a
dimension). A concrete unit is then an exponent map over prefixed base
units, and this module provides the ladder of coarser views of it:

    Unit            exponent map over PreUnit values
    RootUnit        the same with all prefixes erased
    NormalizedUnit  a prefix word paired with a root
    EvaluatedUnit   the prefix word collapsed to its ratio value
    AbstractUnit    the root collapsed to its dimension

together with the maps between them and equality at each level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .abelian import (
    ExponentMap,
    GroupInterface,
    em_delta,
    em_empty,
    em_eval,
    em_flatten,
    em_map,
    em_mul,
)
from .numeric import ONE, ratio_inv, ratio_mul

__all__ = [
    "AbstractUnit",
    "Dimension",
    "EQUIV_LEVELS",
    "EvaluatedUnit",
    "NormalizedUnit",
    "PreUnit",
    "Prefix",
    "RATIO_GROUP",
    "RootUnit",
    "Unit",
    "UnitSystem",
    "UnknownSymbolError",
    "abstract",
    "dim",
    "dim_root",
    "equiv",
    "evaluate",
    "norm",
    "pref",
    "prefix_apply",
    "prefix_unit",
    "pval",
    "root",
    "strip",
    "unroot",
    "val",
]

# All four are exponent maps; the aliases record what the generators are.
Dimension = ExponentMap  # over dimension symbols
Prefix = ExponentMap  # over prefix symbols
RootUnit = ExponentMap  # over base-unit symbols
Unit = ExponentMap  # over PreUnit values

RATIO_GROUP: GroupInterface[Fraction] = GroupInterface(
    combine=ratio_mul, invert=ratio_inv, neutral=ONE
)


class UnknownSymbolError(LookupError):
    """A symbol is not registered in the unit system at hand."""


@dataclass(frozen=True)
class PreUnit:
    """A base-unit symbol under a prefix word.

    The prefix is an exponent map over prefix symbols; the empty map means
    the bare base unit. Ordering is by base symbol first so canonical
    renderings group factors of the same base unit together.
    """

    prefix: Prefix
    base: str

    def __lt__(self, other: "PreUnit") -> bool:
        if not isinstance(other, PreUnit):
            return NotImplemented
        return (self.base, self.prefix) < (other.base, other.prefix)

    def __le__(self, other: "PreUnit") -> bool:
        if not isinstance(other, PreUnit):
            return NotImplemented
        return (self.base, self.prefix) <= (other.base, other.prefix)

    def __gt__(self, other: "PreUnit") -> bool:
        if not isinstance(other, PreUnit):
            return NotImplemented
        return (self.base, self.prefix) > (other.base, other.prefix)

    def __ge__(self, other: "PreUnit") -> bool:
        if not isinstance(other, PreUnit):
            return NotImplemented
        return (self.base, self.prefix) >= (other.base, other.prefix)


@dataclass(frozen=True)
class NormalizedUnit:
    """Prefix word and root, kept separate but not yet evaluated."""

    prefix: Prefix
    root: RootUnit


@dataclass(frozen=True)
class EvaluatedUnit:
    """Exact scale factor and root."""

    factor: Fraction
    root: RootUnit


@dataclass(frozen=True)
class AbstractUnit:
    """Exact scale factor and dimension; the coarsest faithful view."""

    factor: Fraction
    dimension: Dimension


@dataclass(frozen=True)
class UnitSystem:
    """Immutable registry of dimension, prefix, and base-unit symbols.

    `base_prefixes` maps each prefix symbol to its exact positive value;
    `base_units` maps each base-unit symbol to its dimension, an exponent
    map over registered dimension symbols. Construction validates that
    every dimension a unit mentions is registered and every prefix value
    is a positive rational.
    """

    base_dimensions: frozenset[str]
    base_prefixes: Mapping[str, Fraction]
    base_units: Mapping[str, Dimension]

    def __post_init__(self) -> None:
        dimensions = frozenset(self.base_dimensions)
        prefixes = dict(self.base_prefixes)
        units = dict(self.base_units)
        for symbol, value in prefixes.items():
            if not isinstance(value, Fraction) or value <= 0:
                raise ValueError(f"prefix {symbol!r} must have a positive rational value, got {value!r}")
        for symbol, dimension in units.items():
            if not isinstance(dimension, ExponentMap):
                raise ValueError(f"unit {symbol!r} must carry an exponent-map dimension")
            for dim_symbol in dimension:
                if dim_symbol not in dimensions:
                    raise UnknownSymbolError(
                        f"unit {symbol!r} uses unregistered dimension {dim_symbol!r}"
                    )
        object.__setattr__(self, "base_dimensions", dimensions)
        object.__setattr__(self, "base_prefixes", MappingProxyType(prefixes))
        object.__setattr__(self, "base_units", MappingProxyType(units))


def _check_unit(system: UnitSystem, unit: Unit) -> None:
    for preunit in unit:
        if not isinstance(preunit, PreUnit):
            raise TypeError(f"unit generators must be PreUnit values, got {preunit!r}")
        if preunit.base not in system.base_units:
            raise UnknownSymbolError(f"unknown base unit {preunit.base!r}")
        for symbol in preunit.prefix:
            if symbol not in system.base_prefixes:
                raise UnknownSymbolError(f"unknown prefix {symbol!r}")


def prefix_unit(prefix: Prefix, base: str) -> Unit:
    """The unit consisting of one prefixed base-unit symbol."""
    return em_delta(PreUnit(prefix, base))


def pref(system: UnitSystem, unit: Unit) -> Prefix:
    """Total prefix word of a unit: each factor's prefix, raised and merged."""
    _check_unit(system, unit)
    return em_flatten(em_map(lambda preunit: preunit.prefix, unit))


def root(unit: Unit) -> RootUnit:
    """Erase prefixes, keeping base-unit symbols and exponents."""
    return em_map(lambda preunit: preunit.base, unit)


def unroot(root_unit: RootUnit) -> Unit:
    """Reread base-unit symbols as prefixless unit factors."""
    return em_map(lambda base: PreUnit(em_empty(), base), root_unit)


def strip(unit: Unit) -> Unit:
    """Drop all prefixes in place: the prefixless unit with the same root."""
    return unroot(root(unit))


def norm(system: UnitSystem, unit: Unit) -> NormalizedUnit:
    return NormalizedUnit(pref(system, unit), root(unit))


def prefix_apply(system: UnitSystem, prefix: Prefix, normalized: NormalizedUnit) -> NormalizedUnit:
    """Multiply an extra prefix word onto a normalized unit."""
    for symbol in prefix:
        if symbol not in system.base_prefixes:
            raise UnknownSymbolError(f"unknown prefix {symbol!r}")
    return NormalizedUnit(em_mul(prefix, normalized.prefix), normalized.root)


def _prefix_value(system: UnitSystem, symbol: str) -> Fraction:
    try:
        return system.base_prefixes[symbol]
    except KeyError:
        raise UnknownSymbolError(f"unknown prefix {symbol!r}") from None


def val(system: UnitSystem, prefix: Prefix) -> Fraction:
    """Value of a prefix word: the product of member values, exactly.

    Computed by mapping each symbol to its registered ratio and evaluating
    the resulting map in the multiplicative group of positive rationals.
    """
    return em_eval(RATIO_GROUP, em_map(lambda symbol: _prefix_value(system, symbol), prefix))


def pval(system: UnitSystem, unit: Unit) -> Fraction:
    """Value of a unit's total prefix word."""
    return val(system, pref(system, unit))


def _unit_dimension(system: UnitSystem, symbol: str) -> Dimension:
    try:
        return system.base_units[symbol]
    except KeyError:
        raise UnknownSymbolError(f"unknown base unit {symbol!r}") from None


def dim_root(system: UnitSystem, root_unit: RootUnit) -> Dimension:
    return em_flatten(em_map(lambda symbol: _unit_dimension(system, symbol), root_unit))


def dim(system: UnitSystem, unit: Unit) -> Dimension:
    return dim_root(system, root(unit))


def evaluate(system: UnitSystem, unit: Unit) -> EvaluatedUnit:
    return EvaluatedUnit(pval(system, unit), root(unit))


def abstract(system: UnitSystem, unit: Unit) -> AbstractUnit:
    return AbstractUnit(pval(system, unit), dim(system, unit))


EQUIV_LEVELS = ("norm", "eval", "root", "dim")


def equiv(system: UnitSystem, left: Unit, right: Unit, level: str = "norm") -> bool:
    """Equality of two units at the chosen level of abstraction.

    The levels sit in a chain from finest to coarsest: agreement at
    "norm" implies agreement at "eval" (the prefix word determines its
    value), which implies agreement at "root" (the root is part of the
    evaluated view), which implies agreement at "dim".
    """
    if level == "norm":
        return norm(system, left) == norm(system, right)
    if level == "eval":
        return evaluate(system, left) == evaluate(system, right)
    if level == "root":
        return root(left) == root(right)
    if level == "dim":
        return dim(system, left) == dim(system, right)
    raise ValueError(f"unknown equivalence level {level!r}; expected one of {EQUIV_LEVELS}")
