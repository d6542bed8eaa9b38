"""Checkers for tree properties, IP, generalized dividing and dividing chains.

A witness family bundles an index structure, an assignment of parameter
tuples, one formula template, the parameter structure (whose kind selects
the oracle), and an inconsistency specification: either a natural number k
(classical k-inconsistency) or a quantifier-free colored-order type q
(q-inconsistency).

Finite path semantics: "paths are consistent" is checked over all
root-to-leaf paths of a finite tree, and over all (or a seeded sample of)
column-choice functions of a finite array.  The root of a tree carries no
formula instance: constructions assign parameters to nonempty nodes, and the
root has no color, so instance sets range over the nonroot nodes of a path.
Every vacuous clause is reported as such, never silently passed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    Index,
    IndexTree,
    QfType,
    chain_colors,
    index_points,
    qftp_order,
    realizations,
)
from .indiscernibility import (
    ClauseReport,
    IndexedFamily,
    Report,
    check_indiscernible,
    make_report,
    _point_key,
)
from .logic_core import (
    FinStructure,
    FormulaTemplate,
    InstantiatedFormula,
    instantiate_template,
    oracle_consistent,
)

DEFAULT_PATH_BUDGET = 20000
DEFAULT_SEED = 0


@dataclass(frozen=True)
class WitnessFamily:
    """Index + assignment + formula template + oracle structure + k or q."""

    index: Index
    assignment: Mapping
    template: FormulaTemplate
    structure: FinStructure
    spec_q: QfType | None = None
    spec_k: int | None = None

    def __post_init__(self):
        if (self.spec_q is None) == (self.spec_k is None):
            raise InputError("exactly one of q and k must be given")
        if self.spec_k is not None and self.spec_k < 1:
            raise InputError("k must be at least 1")
        if self.spec_q is not None:
            palette = set(_index_palette(self.index))
            missing = [c for c in self.spec_q.colors() if c not in palette]
            if missing:
                raise InputError(f"q mentions colors outside the index palette: {missing}")
        uniset = set(self.structure.universe)
        for point in _assigned_points(self.index):
            if point not in self.assignment:
                raise InputError(f"assignment is missing index point {point!r}")
            value = self.assignment[point]
            if len(value) != self.template.parameter_arity:
                raise InputError(
                    f"value at {point!r} has length {len(value)}, template "
                    f"{self.template.name!r} expects {self.template.parameter_arity}"
                )
            if not set(value) <= uniset:
                raise InputError(f"value at {point!r} mentions unknown elements")

    def instance(self, point, positive: bool = True) -> InstantiatedFormula:
        return instantiate_template(self.template, tuple(self.assignment[point]), positive)


def _index_palette(index: Index) -> tuple[str, ...]:
    if isinstance(index, ColoredOrder):
        return index.palette
    if isinstance(index, IndexTree):
        return index.branching.palette
    if isinstance(index, ArrayIndex):
        return index.row_order.palette
    raise InputError(f"not an index structure: {index!r}")


def _assigned_points(index: Index) -> tuple:
    """Points that must carry values: everything except a tree's root."""
    if isinstance(index, IndexTree):
        return tuple(n for n in index.nodes() if n)
    return index_points(index)


def _sibling_spec_tuples(w: WitnessFamily, order: ColoredOrder):
    """Position tuples of the shared order that trigger the inconsistency
    clause, plus notes about vacuity."""
    notes: list[str] = []
    if w.spec_k is not None:
        tuples = list(itertools.combinations(range(order.size), w.spec_k))
        if not tuples:
            notes.append(f"k={w.spec_k} exceeds the order size {order.size}")
        return tuples, notes
    q = w.spec_q
    tuples = realizations(order, q)
    if not tuples:
        unused = [c for c in q.colors() if not order.positions_of(c)]
        if unused:
            notes.append(f"color unrealized in the order: {unused}")
        else:
            notes.append("q has no realizations in the order")
    return tuples, notes


def _tree_paths_clause(w: WitnessFamily, tree: IndexTree) -> ClauseReport:
    if tree.height == 0:
        return ClauseReport("paths", True, vacuous=True,
                            notes=("no paths of positive length",))
    checked = 0
    for leaf in tree.leaves():
        chain = [leaf[:i] for i in range(1, len(leaf) + 1)]
        formulas = [w.instance(n) for n in chain]
        checked += 1
        if not oracle_consistent(w.structure, formulas):
            return ClauseReport("paths", False, checked=checked,
                                violation={"tuples": [[_point_key(n) for n in chain]]})
    return ClauseReport("paths", True, checked=checked)


def check_generalized_tp(w: WitnessFamily) -> Report:
    """Tree property over the witness tree.

    Clause "paths": every root-to-leaf instance set is consistent.  Clause
    "siblings": below every node, every sibling tuple realizing q (or every
    k-subset, in classical mode) yields an inconsistent instance set.
    """
    tree = w.index
    if not isinstance(tree, IndexTree):
        raise InputError("check_generalized_tp needs a tree-indexed witness")
    clauses = [_tree_paths_clause(w, tree)]

    tuples, notes = _sibling_spec_tuples(w, tree.branching)
    parents = [n for n in tree.nodes() if len(n) < tree.height]
    checked = 0
    violation = None
    for parent in parents:
        for ptuple in tuples:
            siblings = [parent + (p,) for p in ptuple]
            formulas = [w.instance(n) for n in siblings]
            checked += 1
            if oracle_consistent(w.structure, formulas):
                violation = {"tuples": [[_point_key(n) for n in siblings]]}
                break
        if violation:
            break
    vacuous = not parents or not tuples
    if not parents:
        notes = list(notes) + ["no nodes with successors"]
    clauses.append(ClauseReport("siblings", violation is None, vacuous=vacuous,
                                checked=checked, violation=violation,
                                notes=tuple(notes)))
    return make_report(clauses, _witness_bound(w), exhaustive=True)


def incomparable_order_type(tree: IndexTree, nodes: Sequence) -> QfType:
    """Colored-order type of pairwise-incomparable nodes: each node's color
    together with the lexicographic order of the tuple.  This is all the
    order language can see on nodes from different copies of the branching
    structure."""
    atoms = []
    for i, n in enumerate(nodes):
        atoms.append(f"{tree.color(n)}(x{i + 1})")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if nodes[i] < nodes[j]:
                atoms.append(f"x{i + 1}<x{j + 1}")
            else:
                atoms.append(f"x{j + 1}<x{i + 1}")
    return QfType(len(nodes), tuple(sorted(atoms)))


def _pairwise_incomparable(nodes: Sequence) -> bool:
    for a, b in itertools.combinations(nodes, 2):
        if a[: len(b)] == b or b[: len(a)] == a:
            return False
    return True


def check_c_tp1(w: WitnessFamily) -> Report:
    """First-kind tree property: paths consistent, incomparables inconsistent.

    With q: every pairwise-incomparable node tuple whose colored-order type
    (colors plus lexicographic order) matches q must be inconsistent.  With
    k: every pairwise-incomparable k-subset must be inconsistent (classical
    mode).
    """
    tree = w.index
    if not isinstance(tree, IndexTree):
        raise InputError("check_c_tp1 needs a tree-indexed witness")
    clauses = [_tree_paths_clause(w, tree)]

    k = w.spec_k if w.spec_k is not None else w.spec_q.arity
    notes: list[str] = []
    if w.spec_q is not None and w.spec_q.has_equalities():
        notes.append("q forces equal entries; incomparable nodes are distinct")
    nonroot = [n for n in tree.nodes() if n]
    checked = 0
    matched = 0
    violation = None
    for combo in itertools.combinations(nonroot, k):
        if not _pairwise_incomparable(combo):
            continue
        checked += 1
        if w.spec_q is not None and incomparable_order_type(tree, combo) != w.spec_q:
            continue
        matched += 1
        formulas = [w.instance(n) for n in combo]
        if oracle_consistent(w.structure, formulas):
            violation = {"tuples": [[_point_key(n) for n in combo]]}
            break
    if matched == 0 and violation is None:
        notes.append("no incomparable tuple matches the specification")
    clauses.append(ClauseReport("incomparables", violation is None,
                                vacuous=(matched == 0), checked=matched,
                                violation=violation, notes=tuple(notes)))
    return make_report(clauses, _witness_bound(w), exhaustive=True)


def check_generalized_tp2(w: WitnessFamily, path_budget: int = DEFAULT_PATH_BUDGET,
                          seed: int = DEFAULT_SEED) -> Report:
    """Array property: column choices consistent, within-row tuples inconsistent.

    All column-choice functions are enumerated when their count fits the
    budget; otherwise a seeded deterministic sample of path_budget functions
    is checked and the report says so.
    """
    arr = w.index
    if not isinstance(arr, ArrayIndex):
        raise InputError("check_generalized_tp2 needs an array-indexed witness")
    cols = arr.row_order.size
    clauses: list[ClauseReport] = []

    if arr.rows == 0 or cols == 0:
        clauses.append(ClauseReport("paths", True, vacuous=True,
                                    notes=("no column choices",)))
        exhaustive = True
    else:
        total = cols ** arr.rows
        exhaustive = total <= path_budget
        if exhaustive:
            paths = itertools.product(range(cols), repeat=arr.rows)
        else:
            rng = random.Random(seed)
            paths = (tuple(rng.randrange(cols) for _ in range(arr.rows))
                     for _ in range(path_budget))
        checked = 0
        violation = None
        for f in paths:
            formulas = [w.instance((i, f[i])) for i in range(arr.rows)]
            checked += 1
            if not oracle_consistent(w.structure, formulas):
                violation = {"tuples": [[_point_key((i, f[i])) for i in range(arr.rows)]]}
                break
        clauses.append(ClauseReport(
            "paths", violation is None, checked=checked, violation=violation,
            notes=() if exhaustive else (f"sampled {path_budget} of {total} paths",),
        ))

    tuples, notes = _sibling_spec_tuples(w, arr.row_order)
    checked = 0
    violation = None
    for i in range(arr.rows):
        for ptuple in tuples:
            cells = [(i, j) for j in ptuple]
            formulas = [w.instance(c) for c in cells]
            checked += 1
            if oracle_consistent(w.structure, formulas):
                violation = {"tuples": [[_point_key(c) for c in cells]]}
                break
        if violation:
            break
    vacuous = arr.rows == 0 or not tuples
    if arr.rows == 0:
        notes = list(notes) + ["no rows"]
    clauses.append(ClauseReport("rows", violation is None, vacuous=vacuous,
                                checked=checked, violation=violation,
                                notes=tuple(notes)))
    return make_report(clauses, _witness_bound(w), exhaustive=exhaustive, seed=seed)


def check_ip(fam: IndexedFamily, template: FormulaTemplate,
             delta: Sequence[FormulaTemplate], arity: int) -> Report:
    """Independence property on a finite sequence.

    Clause "indiscernible": the family passes the bounded indiscernibility
    check.  Clause "alternating": the instance set asserting the template at
    odd positions and its negation at even positions is consistent.
    """
    order = fam.index
    if not isinstance(order, ColoredOrder):
        raise InputError("check_ip needs an order-indexed family")
    if order.size < 2:
        raise InputError("check_ip needs a sequence of length at least 2")
    sub = check_indiscernible(fam, arity, delta)
    clauses = [ClauseReport("indiscernible", sub.passed,
                            checked=sub.clauses[0].checked,
                            violation=sub.first_failure.violation if sub.first_failure else None)]
    formulas = [
        instantiate_template(template, tuple(fam.assignment[i]), positive=(i % 2 == 1))
        for i in range(order.size)
    ]
    ok = oracle_consistent(fam.structure, formulas)
    clauses.append(ClauseReport("alternating", ok, checked=1,
                                violation=None if ok else {"tuples": [[str(i) for i in range(order.size)]]}))
    bound = {"arity": arity, "delta": [t.name for t in sorted(delta, key=lambda t: t.name)],
             "length": order.size}
    return make_report(clauses, bound, exhaustive=True)


def check_generalized_dividing(fam: IndexedFamily, template: FormulaTemplate,
                               q: QfType, pivot, delta: Sequence[FormulaTemplate],
                               arity: int) -> Report:
    """Generalized dividing of the pivot's instance over the family's context.

    Passes iff the family is delta-indiscernible over its context (bounded)
    and the full instance set is q-inconsistent.  The pivot condition (the
    divided instance appears in the family) is validated and recorded.
    """
    points = index_points(fam.index)
    pivot = tuple(pivot) if isinstance(pivot, (list, tuple)) else pivot
    if pivot not in points:
        raise InputError(f"pivot {pivot!r} is not an index point")
    sub = check_indiscernible(fam, arity, delta)
    clauses = [ClauseReport("indiscernible", sub.passed,
                            checked=sub.clauses[0].checked,
                            violation=sub.first_failure.violation if sub.first_failure else None)]

    tuples = realizations(fam.index, q)
    checked = 0
    violation = None
    for tup in tuples:
        formulas = [instantiate_template(template, tuple(fam.assignment[p])) for p in tup]
        checked += 1
        if oracle_consistent(fam.structure, formulas):
            violation = {"tuples": [[_point_key(p) for p in tup]]}
            break
    notes = (f"pivot {_point_key(pivot)} carries {list(fam.assignment[pivot])}",)
    if not tuples:
        notes = notes + ("q has no realizations in the index",)
    clauses.append(ClauseReport("q-inconsistent", violation is None,
                                vacuous=not tuples, checked=checked,
                                violation=violation, notes=notes))
    bound = {"arity": arity, "delta": [t.name for t in sorted(delta, key=lambda t: t.name)],
             "context_size": len(fam.context)}
    return make_report(clauses, bound, exhaustive=True)


@dataclass(frozen=True)
class ChainStep:
    """One link of a dividing chain: the divided parameters, the witnessing
    indexed family (its context is derived from the chain), the type q, and
    the index point where the parameters sit."""

    b: tuple[str, ...]
    index: Index
    assignment: Mapping
    q: QfType
    pivot: object = None


@dataclass(frozen=True)
class DividingChain:
    template: FormulaTemplate
    structure: FinStructure
    steps: tuple[ChainStep, ...]
    delta: tuple[FormulaTemplate, ...]
    arity: int


def verify_dividing_chain(chain: DividingChain) -> Report:
    """Chain consistency plus per-step dividing over the accumulated prefix."""
    if not chain.steps:
        raise InputError("a dividing chain needs at least one step")
    clauses: list[ClauseReport] = []
    head = [instantiate_template(chain.template, step.b) for step in chain.steps]
    ok = oracle_consistent(chain.structure, head)
    clauses.append(ClauseReport("chain-consistent", ok, checked=1))

    prefix: tuple[str, ...] = ()
    for i, step in enumerate(chain.steps):
        fam = IndexedFamily(step.index, step.assignment, chain.structure, prefix)
        pivot = step.pivot
        if pivot is None:
            pivot = next((p for p in index_points(step.index)
                          if tuple(fam.assignment[p]) == tuple(step.b)), None)
        if pivot is None or tuple(fam.assignment[pivot]) != tuple(step.b):
            raise InputError(f"step {i} family does not contain its divided tuple {step.b!r}")
        sub = check_generalized_dividing(fam, chain.template, step.q, pivot,
                                         chain.delta, chain.arity)
        failure = sub.first_failure
        clauses.append(ClauseReport(
            f"step-{i}", sub.passed,
            vacuous=any(c.vacuous for c in sub.clauses),
            checked=sum(c.checked for c in sub.clauses),
            violation=failure.violation if failure else None,
            notes=(failure.name,) if failure else (),
        ))
        prefix = prefix + tuple(step.b)
    bound = {"arity": chain.arity, "delta": [t.name for t in chain.delta],
             "length": len(chain.steps)}
    return make_report(clauses, bound, exhaustive=True)


def _witness_bound(w: WitnessFamily) -> dict:
    bound: dict = {}
    if isinstance(w.index, IndexTree):
        bound["height"] = w.index.height
        bound["branching"] = w.index.branching.size
    elif isinstance(w.index, ArrayIndex):
        bound["rows"] = w.index.rows
        bound["columns"] = w.index.row_order.size
    elif isinstance(w.index, ColoredOrder):
        bound["length"] = w.index.size
    if w.spec_k is not None:
        bound["k"] = w.spec_k
    else:
        bound["q_arity"] = w.spec_q.arity
    return bound
