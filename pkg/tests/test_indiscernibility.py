"""Bounded indiscernibility, strong arrays, locally-based families."""

from __future__ import annotations

import itertools

import pytest

from treeprop.errors import InputError
from treeprop.index_structures import plain_order, standard_c
from treeprop.indiscernibility import (
    IndexedFamily,
    check_indiscernible,
    check_locally_based,
    check_strong_array,
)
from treeprop.logic_core import (
    X,
    FormulaTemplate,
    equality_structure,
    random_graph_structure,
)
from treeprop.constructions import gen_random_graph_witness

PAIR_EQ = FormulaTemplate("pair-eq", 2, (("=", True, (0, 1)),))
EDGE = FormulaTemplate("edge", 2, (("R", True, (0, 1)),))

AB = equality_structure(["a", "b"])
RGRG = standard_c(4, ["R", "G"])


def ab_family(order, pattern, context=()):
    return IndexedFamily(order, {i: (pattern[i],) for i in range(order.size)}, AB,
                         tuple(context))


def test_alternating_family_on_colored_order_indiscernible():
    fam = ab_family(RGRG, "abab")
    report = check_indiscernible(fam, 2, [PAIR_EQ])
    assert report.passed
    assert report.bound["arity"] == 2


def test_constant_family_indiscernible_any_delta():
    fam = ab_family(RGRG, "aaaa")
    assert check_indiscernible(fam, 3, [PAIR_EQ]).passed
    assert check_indiscernible(fam, 3, []).passed


def test_alternating_family_on_uncolored_order_fails():
    fam = ab_family(plain_order(4), "abab")
    report = check_indiscernible(fam, 2, [PAIR_EQ])
    assert not report.passed
    # (0,1) and (0,2) share the uncolored type but carry (a,b) vs (a,a)
    assert report.first_failure.violation["tuples"] == [["0", "1"], ["0", "2"]]


def test_delta_monotonicity():
    # passing a larger delta implies passing any subset of it
    richer = [PAIR_EQ, FormulaTemplate("triple-eq", 3, (("=", True, (0, 2)),))]
    for pattern in ("abab", "aaab", "aaaa", "abba"):
        fam = ab_family(RGRG, pattern)
        if check_indiscernible(fam, 2, richer).passed:
            assert check_indiscernible(fam, 2, [PAIR_EQ]).passed


def test_reduct_monotonicity_exhaustive_small_families():
    # uncolored indiscernibility implies colored indiscernibility: the colored
    # order splits type classes, never merges them
    for size in (4, 6):
        colored = standard_c(size, ["R", "G"])
        uncolored = plain_order(size)
        for bits in itertools.product("ab", repeat=size):
            plain_fam = ab_family(uncolored, bits)
            colored_fam = ab_family(colored, bits)
            if check_indiscernible(plain_fam, 2, [PAIR_EQ]).passed:
                assert check_indiscernible(colored_fam, 2, [PAIR_EQ]).passed


def test_context_matters():
    # a,b,a,b is indiscernible over (), but adding context a lets delta see
    # which entries equal the context element only through same-type tuples
    fam = ab_family(RGRG, "abab", context=("a",))
    assert check_indiscernible(fam, 2, [PAIR_EQ]).passed
    # on the uncolored order the context breaks singleton exchangeability
    fam2 = ab_family(plain_order(2), "ab", context=("a",))
    report = check_indiscernible(fam2, 1, [PAIR_EQ])
    assert not report.passed


def test_delta_templates_must_be_ground():
    fam = ab_family(RGRG, "abab")
    with_x = FormulaTemplate("bad", 1, (("=", True, (X, 0)),))
    with pytest.raises(InputError):
        check_indiscernible(fam, 2, [with_x])


# ---------------------------------------------------------------------------
# strong arrays

def _array_family(w):
    return IndexedFamily(w.index, dict(w.assignment), w.structure)


def test_constant_array_strongly_indiscernible():
    st_ = equality_structure(["a"])
    order = standard_c(2, ["R", "G"])
    from treeprop.index_structures import ArrayIndex
    arr = ArrayIndex(2, order)
    fam = IndexedFamily(arr, {c: ("a",) for c in arr.cells()}, st_)
    report = check_strong_array(fam, 2, [PAIR_EQ])
    assert report.passed


def test_random_graph_array_strongly_indiscernible():
    w = gen_random_graph_witness("array", 3, RGRG)
    report = check_strong_array(_array_family(w), 2, [PAIR_EQ, EDGE])
    assert report.passed
    assert [c.name for c in report.clauses] == ["mutual", "rows"]


def test_duplicated_letter_across_rows_fails_mutual():
    w = gen_random_graph_witness("array", 2, RGRG)
    assignment = dict(w.assignment)
    assignment[(1, 2)] = ("c0", "d0")  # reuse row-0 letters inside row 1
    fam = IndexedFamily(w.index, assignment, w.structure)
    report = check_strong_array(fam, 2, [PAIR_EQ])
    assert not report.passed
    assert report.first_failure.name == "mutual"
    assert report.first_failure.violation["row"] == 1


# ---------------------------------------------------------------------------
# locally based

def test_locally_based_reflexive():
    for pattern in ("abab", "aabb", "aaaa"):
        fam = ab_family(RGRG, pattern)
        assert check_locally_based(fam, fam, [PAIR_EQ], 3)


def test_locally_based_sub_pattern():
    base = ab_family(standard_c(8, ["R", "G"]), "abababab")
    target = ab_family(RGRG, "abab")
    assert check_locally_based(target, base, [PAIR_EQ], 2)


def test_locally_based_missing_delta_type():
    base = ab_family(RGRG, "aaaa")
    target = ab_family(RGRG, "abab")  # has a same-type pair with unequal entries
    assert not check_locally_based(target, base, [PAIR_EQ], 2)


def test_locally_based_needs_same_index_language():
    a = ab_family(RGRG, "abab")
    b = IndexedFamily(plain_order(2), {0: ("a",), 1: ("b",)}, AB)
    with pytest.raises(InputError):
        from treeprop.index_structures import ArrayIndex
        arr_fam = IndexedFamily(ArrayIndex(1, RGRG),
                                {(0, j): ("a",) for j in range(4)}, AB)
        check_locally_based(a, arr_fam, [PAIR_EQ], 2)


def test_report_json_is_deterministic():
    fam = ab_family(RGRG, "abab")
    import json
    r1 = json.dumps(check_indiscernible(fam, 2, [PAIR_EQ]).to_json(), sort_keys=True)
    r2 = json.dumps(check_indiscernible(fam, 2, [PAIR_EQ]).to_json(), sort_keys=True)
    assert r1 == r2
