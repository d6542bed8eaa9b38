"""Property checkers: tree properties, IP, dividing, chains."""

from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeprop.constructions import (
    array_rows_as_sibling_tree,
    gen_random_graph_witness,
    gen_set_ctp1_witness,
    gen_set_ctp2_witness,
    gen_triviality_chain,
)
from treeprop.errors import InputError
from treeprop.index_structures import (
    ArrayIndex,
    IndexTree,
    chain_type,
    parse_qtype,
    plain_order,
    standard_c,
)
from treeprop.indiscernibility import IndexedFamily
from treeprop.logic_core import (
    X,
    FormulaTemplate,
    equality_structure,
    set_structure,
)
from treeprop.properties import (
    ChainStep,
    DividingChain,
    WitnessFamily,
    check_c_tp1,
    check_generalized_dividing,
    check_generalized_tp,
    check_generalized_tp2,
    check_ip,
    verify_dividing_chain,
)

RG = standard_c(2, ["R", "G"])
RGRG = standard_c(4, ["R", "G"])
EQ = FormulaTemplate("eq", 1, (("=", True, (X, 0)),))
PAIR_EQ = FormulaTemplate("pair-eq", 2, (("=", True, (0, 1)),))
EDGE = FormulaTemplate("edge", 2, (("R", True, (0, 1)),))


# ---------------------------------------------------------------------------
# generalized tree property

def test_rg_tree_witness_passes():
    w = gen_random_graph_witness("tree", 2, RGRG)
    report = check_generalized_tp(w)
    assert report.passed and report.exhaustive


def test_rg_tree_witness_fails_same_color_q():
    w = gen_random_graph_witness("tree", 2, RGRG)
    for text in ("R<R", "G<G"):
        w2 = WitnessFamily(w.index, dict(w.assignment), w.template, w.structure,
                           spec_q=parse_qtype(text))
        report = check_generalized_tp(w2)
        assert not report.passed
        assert report.first_failure.name == "siblings"


def test_height_zero_tree_vacuous_pass():
    w = gen_random_graph_witness("tree", 0, RG)
    report = check_generalized_tp(w)
    assert report.passed
    assert {c.name for c in report.clauses if c.vacuous} == {"paths", "siblings"}


def test_unrealized_color_reported_vacuous():
    w = gen_random_graph_witness("tree", 1, standard_c(2, ["R", "G"]))
    rr_only = standard_c(2, ["R", "G"], "explicit", ["R", "R"])
    w2 = WitnessFamily(IndexTree(1, rr_only), dict(w.assignment), w.template,
                       w.structure, spec_q=parse_qtype("R<G"))
    report = check_generalized_tp(w2)
    assert report.passed
    siblings = report.clause("siblings")
    assert siblings.vacuous and any("unrealized" in n for n in siblings.notes)


def _equality_tp_witness(width=4, k=2):
    """Height-1 witness: siblings get pairwise distinct x=a_i instances."""
    letters = [f"a{i}" for i in range(width)]
    structure = equality_structure(letters)
    tree = IndexTree(1, plain_order(width, "C"))
    assignment = {(i,): (letters[i],) for i in range(width)}
    return WitnessFamily(tree, assignment, EQ, structure, spec_k=k)


def test_equality_witness_classical_k_mode():
    assert check_generalized_tp(_equality_tp_witness()).passed


def test_one_color_q_agrees_with_k_mode():
    # specialization: a one-color q of arity k selects exactly the k-subsets
    for width in (2, 3, 4):
        for k in (2, 3):
            w = _equality_tp_witness(width, k)
            q = chain_type(["C"] * k)
            wq = WitnessFamily(w.index, dict(w.assignment), w.template,
                               w.structure, spec_q=q)
            rk = check_generalized_tp(w)
            rq = check_generalized_tp(wq)
            assert rk.passed == rq.passed
            assert [c.vacuous for c in rk.clauses] == [c.vacuous for c in rq.clauses]


@given(st.lists(st.sampled_from(["a0", "a1", "a2"]), min_size=2, max_size=2),
       st.integers(0, 2), st.integers(1, 4), st.integers(2, 3))
def test_specialization_on_generated_witnesses(pool_pair, height, width, k):
    """q = one-color chain of arity k agrees with the direct k-subset check."""
    letters = ["a0", "a1", "a2"]
    structure = equality_structure(letters)
    tree = IndexTree(height, plain_order(width, "C"))
    cycle = itertools.cycle(pool_pair + ["a2"])
    assignment = {n: (next(cycle),) for n in tree.nodes() if n}
    wk = WitnessFamily(tree, assignment, EQ, structure, spec_k=k)
    wq = WitnessFamily(tree, dict(assignment), EQ, structure,
                       spec_q=chain_type(["C"] * k))
    rk, rq = check_generalized_tp(wk), check_generalized_tp(wq)
    assert rk.passed == rq.passed
    fk, fq = rk.first_failure, rq.first_failure
    assert (fk.violation if fk else None) == (fq.violation if fq else None)


# ---------------------------------------------------------------------------
# first-kind property

def test_set_witness_passes_ctp1():
    w = gen_set_ctp1_witness(2, RG)
    assert check_c_tp1(w).passed


def test_set_witness_fails_same_color_q():
    w = gen_set_ctp1_witness(2, RG)
    w2 = WitnessFamily(w.index, dict(w.assignment), w.template, w.structure,
                       spec_q=parse_qtype("R<R"))
    report = check_c_tp1(w2)
    assert not report.passed
    assert report.first_failure.name == "incomparables"


def test_rg_tree_witness_fails_ctp1():
    # incomparable red/green nodes under different parents use different
    # letters, so their instances are consistent
    w = gen_random_graph_witness("tree", 2, RGRG)
    report = check_c_tp1(w)
    assert not report.passed
    assert report.first_failure.name == "incomparables"


def test_height_zero_ctp1_vacuous():
    st_ = set_structure({"S": ["1"]})
    tree = IndexTree(0, RG)
    member = FormulaTemplate("member", 1, (("in", True, (X, 0)),))
    w = WitnessFamily(tree, {}, member, st_, spec_q=parse_qtype("R<G"))
    report = check_c_tp1(w)
    assert report.passed
    assert all(c.vacuous for c in report.clauses)


def test_ctp1_witness_also_passes_generalized_tp():
    # sibling tuples are a special case of incomparable tuples
    w = gen_set_ctp1_witness(2, RG)
    assert check_generalized_tp(w).passed


# ---------------------------------------------------------------------------
# second-kind property

def test_rg_array_passes_exhaustively():
    w = gen_random_graph_witness("array", 3, RGRG)
    report = check_generalized_tp2(w)
    assert report.passed and report.exhaustive
    assert report.clause("paths").checked == 4 ** 3


def test_rg_array_fails_same_color_q():
    w = gen_random_graph_witness("array", 3, RGRG)
    w2 = WitnessFamily(w.index, dict(w.assignment), w.template, w.structure,
                       spec_q=parse_qtype("R<R"))
    report = check_generalized_tp2(w2)
    assert not report.passed and report.first_failure.name == "rows"


def test_zero_row_array_vacuous():
    w = gen_random_graph_witness("array", 0, RGRG)
    report = check_generalized_tp2(w)
    assert report.passed
    assert all(c.vacuous for c in report.clauses)


def test_path_sampling_is_seeded_and_reported():
    w = gen_random_graph_witness("array", 3, RGRG)
    r1 = check_generalized_tp2(w, path_budget=10, seed=7)
    r2 = check_generalized_tp2(w, path_budget=10, seed=7)
    assert not r1.exhaustive and r1.seed == 7
    assert json.dumps(r1.to_json()) == json.dumps(r2.to_json())
    assert r1.passed


def test_array_reindexed_as_sibling_tree_passes_tp():
    for w in (gen_random_graph_witness("array", 3, RGRG), gen_set_ctp2_witness(3)):
        tree_w = array_rows_as_sibling_tree(w)
        assert check_generalized_tp(tree_w).passed


# ---------------------------------------------------------------------------
# independence property

def _sequence_family(values, structure):
    order = plain_order(len(values))
    return IndexedFamily(order, {i: values[i] for i in range(len(values))}, structure)


def test_ip_on_extracted_random_graph_column():
    w = gen_random_graph_witness("array", 6, RGRG)
    fam = _sequence_family([w.assignment[(i, 1)] for i in range(6)], w.structure)
    report = check_ip(fam, w.template, [EDGE, PAIR_EQ], 3)
    assert report.passed


def test_ip_constant_sequence_fails_alternation():
    st_ = equality_structure(["a"])
    fam = _sequence_family([("a",)] * 4, st_)
    report = check_ip(fam, EQ, [PAIR_EQ], 2)
    assert not report.passed
    assert report.first_failure.name == "alternating"


def test_ip_non_indiscernible_sequence_fails_first_clause():
    st_ = equality_structure(["a", "b"])
    fam = _sequence_family([("a",), ("b",), ("a",), ("a",)], st_)
    report = check_ip(fam, EQ, [PAIR_EQ], 2)
    assert not report.passed
    assert report.first_failure.name == "indiscernible"
    assert report.first_failure.violation is not None


def test_ip_needs_length_two():
    st_ = equality_structure(["a"])
    with pytest.raises(InputError):
        check_ip(_sequence_family([("a",)], st_), EQ, [PAIR_EQ], 2)


# ---------------------------------------------------------------------------
# generalized dividing

AB = equality_structure(["a", "b"])


def _ab_alternation(context=()):
    return IndexedFamily(RGRG, {0: ("a",), 1: ("b",), 2: ("a",), 3: ("b",)}, AB,
                         tuple(context))


def test_triviality_family_divides():
    report = check_generalized_dividing(_ab_alternation(), EQ, parse_qtype("R<G"),
                                        0, [PAIR_EQ], 2)
    assert report.passed
    assert any("pivot 0" in n for n in report.clause("q-inconsistent").notes)


def test_constant_family_never_divides():
    fam = IndexedFamily(RGRG, {i: ("a",) for i in range(4)}, AB)
    for text in ("R<G", "R<R", "G<G"):
        report = check_generalized_dividing(fam, EQ, parse_qtype(text), 0,
                                            [PAIR_EQ], 2)
        assert not report.passed
        assert report.first_failure.name == "q-inconsistent"


def test_set_family_with_designed_disjointness_divides():
    st_ = set_structure({"Sr": ["1"], "Sg": ["2"]})
    member = FormulaTemplate("member", 1, (("in", True, (X, 0)),))
    fam = IndexedFamily(RG, {0: ("Sr",), 1: ("Sg",)}, st_)
    report = check_generalized_dividing(fam, member, parse_qtype("R<G"), 0,
                                        [PAIR_EQ], 2)
    assert report.passed


def test_dividing_rejects_foreign_pivot():
    with pytest.raises(InputError):
        check_generalized_dividing(_ab_alternation(), EQ, parse_qtype("R<G"),
                                   9, [PAIR_EQ], 2)


# ---------------------------------------------------------------------------
# dividing chains

def test_triviality_chain_passes():
    report = verify_dividing_chain(gen_triviality_chain(5))
    assert report.passed
    assert [c.name for c in report.clauses] == [
        "chain-consistent", "step-0", "step-1", "step-2", "step-3", "step-4"]


def test_length_one_chain_passes():
    assert verify_dividing_chain(gen_triviality_chain(1)).passed


def test_chain_fails_at_broken_step():
    chain = gen_triviality_chain(3)
    # step 2's family stops being indiscernible over b_{<2} = (a, a)
    broken = dict(chain.steps[2].assignment)
    broken[1] = ("a",)
    steps = list(chain.steps)
    steps[2] = ChainStep(steps[2].b, steps[2].index, broken, steps[2].q, steps[2].pivot)
    report = verify_dividing_chain(DividingChain(chain.template, chain.structure,
                                                 tuple(steps), chain.delta, chain.arity))
    assert not report.passed
    assert report.first_failure.name == "step-2"
    assert "indiscernible" in report.first_failure.notes


def test_chain_missing_pivot_is_an_error():
    chain = gen_triviality_chain(1)
    steps = [ChainStep(("b",), chain.steps[0].index,
                       {i: ("a",) for i in range(6)}, chain.steps[0].q, None)]
    with pytest.raises(InputError):
        verify_dividing_chain(DividingChain(chain.template, chain.structure,
                                            tuple(steps), chain.delta, chain.arity))


# ---------------------------------------------------------------------------
# report hygiene

def test_reports_deterministic_across_runs():
    w = gen_random_graph_witness("tree", 2, RGRG)
    r1 = json.dumps(check_generalized_tp(w).to_json(), sort_keys=True)
    r2 = json.dumps(check_generalized_tp(w).to_json(), sort_keys=True)
    assert r1 == r2


def test_witness_validation():
    with pytest.raises(InputError):
        WitnessFamily(IndexTree(1, RG), {}, EQ, AB)  # no spec at all
    with pytest.raises(InputError):
        WitnessFamily(IndexTree(1, RG), {(0,): ("a",), (1,): ("a",)}, EQ, AB,
                      spec_q=parse_qtype("B<B"))  # q color outside palette
