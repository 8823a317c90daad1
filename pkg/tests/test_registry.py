from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unical import (
    BUNDLED_REGISTRIES,
    ExponentMap,
    PreUnit,
    RegistryError,
    UnitSyntaxError,
    UnknownIdentifierError,
    bundled_registry,
    build_system,
    em_delta,
    em_empty,
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
    evaluate,
    norm,
)
from support import as_preunit, bare, random_unit, unit_of

SI, SI_RULES = load_registry(bundled_registry("si"))

SAMPLE = """\
# sample registry
[dimensions]
L T  # two at once

[prefixes]
k 1000
m 1/1000

[units]
m L
s T
v L/T   # a velocity pseudo-unit

[rules]
v 1 m/s
"""


def test_parse_document_sections():
    doc = parse_document(SAMPLE)
    assert [symbol for symbol, _ in doc.dimensions] == ["L", "T"]
    assert [(p.symbol, p.value_text) for p in doc.prefixes] == [
        ("k", "1000"),
        ("m", "1/1000"),
    ]
    assert [u.symbol for u in doc.units] == ["m", "s", "v"]
    assert [r.base for r in doc.rules] == ["v"]
    assert not doc.rules[0].pathological


def test_parse_document_records_line_numbers():
    doc = parse_document(SAMPLE)
    assert doc.dimensions[0][1] == 3
    assert doc.prefixes[0].line == 6
    assert doc.rules[0].line == 15


def test_parse_document_rejects_duplicates():
    with pytest.raises(RegistryError, match="line 4"):
        parse_document("[prefixes]\nk 1000\n\nk 1000\n")
    with pytest.raises(RegistryError):
        parse_document("[dimensions]\nL L\n")


def test_parse_document_rejects_unknown_section():
    with pytest.raises(RegistryError, match="section"):
        parse_document("[nonsense]\nx 1\n")


def test_parse_document_rejects_entries_before_a_section():
    with pytest.raises(RegistryError, match="line 1"):
        parse_document("L\n[dimensions]\n")


def test_build_rejects_bad_ratio_with_line():
    doc = parse_document("[prefixes]\nk 1000\nbad 0/3\n")
    with pytest.raises(RegistryError, match="line 3"):
        build_system(doc)


def test_parse_document_reads_pathological_flag():
    doc = parse_document("[dimensions]\nL\n[units]\nm L\n[rules]\nm 1 m !pathological\n")
    assert doc.rules[0].pathological


def test_merge_rules_later_wins():
    base = parse_document("[dimensions]\nT\n[units]\ns T\nh T\n[rules]\nh 3600 s\n")
    override = parse_document("[units]\nh T\n[rules]\nh 3601 s\n")
    merged = merge_documents([base, override])
    system, rules = build_system(merged)
    assert rules.rules["h"][0] == Fraction(3601)


def test_merge_rejects_prefix_conflicts_but_not_restatements():
    one = parse_document("[prefixes]\nk 1000\n")
    same = parse_document("[prefixes]\nk 10^3\n")
    merge_documents([one, same])
    different = parse_document("[prefixes]\nk 999\n")
    with pytest.raises(RegistryError, match="k"):
        merge_documents([one, different])


def test_merge_rejects_unit_dimension_conflicts():
    one = parse_document("[dimensions]\nL T\n[units]\nx L\n")
    clash = parse_document("[units]\nx T\n")
    with pytest.raises(RegistryError, match="x"):
        merge_documents([one, clash])
    restated = parse_document("[units]\nx L\n")
    merge_documents([one, restated])


def test_build_system_rejects_unknown_dimension_symbols():
    doc = parse_document("[units]\nm L\n")
    with pytest.raises(RegistryError):
        build_system(doc)


def test_build_system_can_skip_pathological_rules():
    system, rules = load_registry(bundled_registry("si"), include_pathological=False)
    assert "rad" not in rules.rules and "sr" not in rules.rules
    assert "rad" in system.base_units
    assert "Hz" in rules.rules


def test_load_registry_requires_at_least_one_text():
    with pytest.raises(RegistryError):
        load_registry()


def test_bundled_tables_have_the_documented_shape():
    assert BUNDLED_REGISTRIES == ("si", "uk")
    assert len(SI.base_dimensions) == 7
    assert len(SI.base_prefixes) == 32
    assert len(SI.base_units) == 29
    assert len(SI_RULES.rules) == 22
    uk_system, uk_rules = load_registry(bundled_registry("si"), bundled_registry("uk"))
    assert len(uk_system.base_units) == 33
    assert len(uk_rules.rules) == 26
    assert uk_rules.rules["lb"][0] == Fraction(45359237, 100000)


def test_resolution_prefers_exact_base_match():
    assert parse_unit(SI, "cd") == em_delta(as_preunit("cd"))
    assert parse_unit(SI, "m") == em_delta(as_preunit("m"))


def test_resolution_greedy_prefix_chain():
    assert parse_unit(SI, "mm") == em_delta(as_preunit("m", {"m": 1}))
    assert parse_unit(SI, "dam") == em_delta(as_preunit("m", {"da": 1}))
    assert parse_unit(SI, "µkg") == em_delta(as_preunit("g", {"μ": 1, "k": 1}))
    assert parse_unit(SI, "mcd") == em_delta(as_preunit("cd", {"m": 1}))
    with pytest.raises(UnknownIdentifierError):
        parse_unit(SI, "kiB")


def test_resolution_underscore_forms():
    system, _ = load_registry(bundled_registry("si"), bundled_registry("uk"))
    assert parse_unit(system, "g_n") == em_delta(as_preunit("g_n"))
    assert parse_unit(system, "k_g_n") == em_delta(as_preunit("g_n", {"k": 1}))
    assert parse_unit(system, "k^2_m") == em_delta(as_preunit("m", {"k": 2}))
    assert parse_unit(system, "k_μ_g") == em_delta(as_preunit("g", {"k": 1, "μ": 1}))
    with pytest.raises(UnknownIdentifierError):
        parse_unit(system, "kg_n")


def test_normalization_folds_compatibility_codepoints():
    micro_sign = parse_unit(SI, "µg")
    greek_mu = parse_unit(SI, "μg")
    assert micro_sign == greek_mu
    ohm_sign = parse_unit(SI, "Ω")
    greek_omega = parse_unit(SI, "Ω")
    assert ohm_sign == greek_omega


def test_grammar_products_quotients_powers():
    assert parse_unit(SI, "kg*m/s^2") == unit_of(("g", 1, {"k": 1}), ("m", 1), ("s", -2))
    assert parse_unit(SI, "kg*m*s^-2") == parse_unit(SI, "kg*m/s^2")
    assert parse_unit(SI, "m/s/s") == unit_of(("m", 1), ("s", -2))
    assert parse_unit(SI, "(J/s)^2") == unit_of(("J", 2), ("s", -2))
    assert parse_unit(SI, "J^0") == em_empty()
    assert parse_unit(SI, "1") == em_empty()
    assert parse_unit(SI, "1/s") == unit_of(("s", -1))
    assert parse_unit(SI, " m * s ") == unit_of(("m", 1), ("s", 1))


@pytest.mark.parametrize(
    "text",
    ["", "m*", "*m", "m^", "m^x", "(m", "m)", "2*m", "m**s", "m^2^3", "m^-", "()"],
)
def test_grammar_rejects_malformed(text):
    with pytest.raises(UnitSyntaxError):
        parse_unit(SI, text)


def test_unknown_identifier_carries_position():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_unit(SI, "m*bogus")
    assert info.value.position == 2


def test_print_unit_examples():
    assert print_unit(SI, em_empty()) == "1"
    assert print_unit(SI, bare("m")) == "m"
    assert print_unit(SI, unit_of(("m", 2, {"k": 1}))) == "km^2"
    assert print_unit(SI, unit_of(("m", 1, {"k": 1}), ("g", -1))) == "g^-1*km"
    assert print_unit(SI, unit_of(("m", 1, {"k": 2}))) == "k^2_m"
    assert print_unit(SI, unit_of(("g", 1, {"k": 1, "μ": 1}))) == "k_μ_g"


def test_print_helpers():
    n = norm(SI, parse_unit(SI, "dm^3/m^2"))
    assert print_normalized(SI, n) == "(d^3, m)"
    e = evaluate(SI, parse_unit(SI, "dm^3/m^2"))
    assert print_evaluated(SI, e) == "(1/1000, m)"
    assert print_prefix(em_empty()) == "1"
    assert print_root(ExponentMap({"m": 1, "s": -2})) == "m*s^-2"
    assert print_dimension(ExponentMap({"L": 1, "M": 1, "T": -2})) == "L*M*T^-2"


def test_print_unit_refuses_unregistered_symbols():
    with pytest.raises((ValueError, KeyError)):
        print_unit(SI, em_delta(PreUnit(em_empty(), "cubit")))


@given(st.randoms(use_true_random=False))
def test_parse_print_roundtrip(rng):
    unit = random_unit(rng, SI, max_parts=3)
    assert parse_unit(SI, print_unit(SI, unit)) == unit
