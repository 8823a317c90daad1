"""Exact units-of-measure calculus.

Units are finitely supported exponent maps over prefixed base symbols,
so products, inverses, and integer powers are free-abelian-group
operations. Conversion rules rewrite base units into replacement units
at exact rational ratios; well-founded rule sets reach a normal form in
a number of parallel passes bounded by the dependency depth, and two
units convert exactly when their normal forms share a root.

The bundled "si" registry covers the seven base units, the named
derived units, and the full decimal and binary prefix tables; "uk"
layers imperial definitions on top. See docs/format.md for the
registry file format.
"""

from .abelian import (
    ExponentMap,
    GroupInterface,
    MAP_GROUP,
    em_delta,
    em_empty,
    em_eval,
    em_factors,
    em_flatten,
    em_inv,
    em_map,
    em_mul,
    em_pow,
)
from .convert import (
    ClassificationReport,
    ClosureExploration,
    ConvTriple,
    ConversionError,
    DefiningConversion,
    DependencyReport,
    NotWellDefiningError,
    RuleError,
    analyze,
    check_triples,
    classify,
    coherent,
    convert,
    defining_conversion,
    explore_closure,
    rwr_eval,
    rwr_star,
    xpd,
)
from .model import (
    EQUIV_LEVELS,
    RATIO_GROUP,
    AbstractUnit,
    EvaluatedUnit,
    NormalizedUnit,
    PreUnit,
    UnitSystem,
    UnknownSymbolError,
    abstract,
    dim,
    dim_root,
    equiv,
    evaluate,
    norm,
    pref,
    prefix_apply,
    prefix_unit,
    pval,
    root,
    strip,
    unroot,
    val,
)
from .numeric import (
    ONE,
    Ratio,
    RatioError,
    ratio_make,
    ratio_parse,
    ratio_text,
    ratio_to_decimal,
)
from .registry import (
    BUNDLED_REGISTRIES,
    RegistryDocument,
    RegistryError,
    UnitSyntaxError,
    UnknownIdentifierError,
    build_system,
    bundled_registry,
    load_registry,
    merge_documents,
    parse_document,
    parse_unit,
    print_dimension,
    print_evaluated,
    print_normalized,
    print_prefix,
    print_root,
    print_unit,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractUnit",
    "BUNDLED_REGISTRIES",
    "ClassificationReport",
    "ClosureExploration",
    "ConvTriple",
    "ConversionError",
    "DefiningConversion",
    "DependencyReport",
    "EQUIV_LEVELS",
    "EvaluatedUnit",
    "ExponentMap",
    "GroupInterface",
    "MAP_GROUP",
    "NormalizedUnit",
    "NotWellDefiningError",
    "ONE",
    "PreUnit",
    "RATIO_GROUP",
    "Ratio",
    "RatioError",
    "RegistryDocument",
    "RegistryError",
    "RuleError",
    "UnitSyntaxError",
    "UnitSystem",
    "UnknownIdentifierError",
    "UnknownSymbolError",
    "__version__",
    "abstract",
    "analyze",
    "build_system",
    "bundled_registry",
    "check_triples",
    "classify",
    "coherent",
    "convert",
    "defining_conversion",
    "dim",
    "dim_root",
    "em_delta",
    "em_empty",
    "em_eval",
    "em_factors",
    "em_flatten",
    "em_inv",
    "em_map",
    "em_mul",
    "em_pow",
    "equiv",
    "evaluate",
    "explore_closure",
    "load_registry",
    "merge_documents",
    "norm",
    "parse_document",
    "parse_unit",
    "pref",
    "prefix_apply",
    "prefix_unit",
    "print_dimension",
    "print_evaluated",
    "print_normalized",
    "print_prefix",
    "print_root",
    "print_unit",
    "pval",
    "ratio_make",
    "ratio_parse",
    "ratio_text",
    "ratio_to_decimal",
    "root",
    "rwr_eval",
    "rwr_star",
    "strip",
    "unroot",
    "val",
    "xpd",
]
