"""Bounded indiscernibility checkers for indexed families of parameters.

A family assigns a parameter tuple to every point of an index structure.
Indiscernibility is checked at a caller-supplied arity bound against a
finite delta of ground formula templates: index tuples with equal
quantifier-free type must have equal delta-types.  The delta-type of a tuple
is the truth vector of every delta template under every way of filling its
slots from the flattened assigned values followed by the context tuple, so
it realizes the finite-formula-set comparison at desk scale.

Reports always carry the bound checked; a pass never claims more than
"indiscernible up to this arity for this delta".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    Index,
    IndexTree,
    index_points,
    index_qftp,
    plain_order,
)
from .logic_core import FinStructure, FormulaTemplate, X


@dataclass(frozen=True)
class ClauseReport:
    """Outcome of one clause of a checker."""

    name: str
    passed: bool
    vacuous: bool = False
    checked: int = 0
    violation: dict | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "vacuous": self.vacuous,
            "checked": self.checked,
            "violation": self.violation,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Report:
    """Deterministic check result: per-clause outcomes plus the bound used."""

    passed: bool
    clauses: tuple[ClauseReport, ...]
    bound: dict
    exhaustive: bool | None = None
    seed: int | None = None

    @property
    def first_failure(self) -> ClauseReport | None:
        for c in self.clauses:
            if not c.passed:
                return c
        return None

    def clause(self, name: str) -> ClauseReport:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        failure = self.first_failure
        return {
            "pass": self.passed,
            "clause": failure.name if failure else None,
            "violating_tuples": (failure.violation or {}).get("tuples") if failure else None,
            "vacuous": [c.name for c in self.clauses if c.vacuous],
            "bound": self.bound,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "clauses": [c.to_json() for c in self.clauses],
        }


def make_report(clauses: Sequence[ClauseReport], bound: dict,
                exhaustive: bool | None = None, seed: int | None = None) -> Report:
    return Report(all(c.passed for c in clauses), tuple(clauses), dict(bound),
                  exhaustive, seed)


@dataclass(frozen=True)
class IndexedFamily:
    """An index structure, a total assignment of parameter tuples, a context.

    All assigned tuples must have one length; the context is a tuple of
    elements of the same structure, appended when delta-types are compared
    (indiscernibility over C).
    """

    index: Index
    assignment: Mapping
    structure: FinStructure
    context: tuple[str, ...] = ()

    def __post_init__(self):
        points = index_points(self.index)
        lengths = set()
        for p in points:
            if p not in self.assignment:
                raise InputError(f"assignment is missing index point {p!r}")
            lengths.add(len(self.assignment[p]))
        if len(lengths) > 1:
            raise InputError("assigned tuples must all have the same length")
        uniset = set(self.structure.universe)
        for p in points:
            if not set(self.assignment[p]) <= uniset:
                raise InputError(f"value at {p!r} mentions elements outside the structure")
        if not set(self.context) <= uniset:
            raise InputError("context mentions elements outside the structure")

    @property
    def tuple_length(self) -> int:
        points = index_points(self.index)
        return len(self.assignment[points[0]]) if points else 0

    def values(self, tup: Sequence) -> tuple[str, ...]:
        out: list[str] = []
        for p in tup:
            out.extend(self.assignment[p])
        return tuple(out)


def check_delta(delta: Sequence[FormulaTemplate]) -> tuple[FormulaTemplate, ...]:
    delta = tuple(delta)
    for t in delta:
        if t.uses_x:
            raise InputError(
                f"delta template {t.name!r} mentions x; delta formulas are ground"
            )
    return tuple(sorted(delta, key=lambda t: t.name))


def delta_type(structure: FinStructure, values: Sequence[str],
               delta: Sequence[FormulaTemplate]) -> tuple[bool, ...]:
    """Truth vector of all delta templates over all slot fillings."""
    bits: list[bool] = []
    for t in delta:
        for filling in itertools.product(range(len(values)), repeat=t.parameter_arity):
            truth = True
            for rel, sign, args in t.literals:
                ground = tuple(values[filling[a]] for a in args)
                if structure.holds(rel, ground) != sign:
                    truth = False
                    break
            bits.append(truth)
    return tuple(bits)


def _family_delta_type(fam: IndexedFamily, tup: Sequence,
                       delta: Sequence[FormulaTemplate],
                       use_context: bool = True) -> tuple[bool, ...]:
    values = fam.values(tup) + (fam.context if use_context else ())
    return delta_type(fam.structure, values, delta)


def _point_key(p) -> str:
    if isinstance(p, tuple):
        return ",".join(str(e) for e in p)
    return str(p)


def check_indiscernible(fam: IndexedFamily, arity: int,
                        delta: Sequence[FormulaTemplate]) -> Report:
    """Compare delta-types across all same-type index tuples up to the arity.

    Fails on the first pair of index tuples with equal quantifier-free type
    whose assigned parameters disagree on some delta instance over the
    family's context.
    """
    if arity < 1:
        raise InputError("arity bound must be at least 1")
    delta = check_delta(delta)
    points = index_points(fam.index)
    checked = 0
    groups: dict = {}
    for n in range(1, arity + 1):
        for tup in itertools.product(points, repeat=n):
            q = index_qftp(fam.index, tup)
            d = _family_delta_type(fam, tup, delta)
            checked += 1
            if q not in groups:
                groups[q] = (tup, d)
            elif groups[q][1] != d:
                first, _ = groups[q]
                clause = ClauseReport(
                    "indiscernible", False, checked=checked,
                    violation={"tuples": [[_point_key(p) for p in first],
                                          [_point_key(p) for p in tup]]},
                )
                return make_report([clause], _bound(arity, delta, fam))
    clause = ClauseReport("indiscernible", True, vacuous=(checked == 0), checked=checked)
    return make_report([clause], _bound(arity, delta, fam), exhaustive=True)


def _bound(arity, delta, fam=None) -> dict:
    bound = {"arity": arity, "delta": [t.name for t in delta]}
    if fam is not None:
        bound["context_size"] = len(fam.context)
    return bound


def check_strong_array(fam: IndexedFamily, arity: int,
                       delta: Sequence[FormulaTemplate]) -> Report:
    """Strong array indiscernibility, bounded.

    Clause "mutual": every row, read as a family over the row order, is
    delta-indiscernible over the other rows' parameters (and the ambient
    context).  Clause "rows": the sequence of flattened rows is
    delta-indiscernible.
    """
    if not isinstance(fam.index, ArrayIndex):
        raise InputError("check_strong_array needs an array-indexed family")
    delta = check_delta(delta)
    arr = fam.index
    clauses: list[ClauseReport] = []

    mutual_violation = None
    checked = 0
    for i in range(arr.rows):
        others: list[str] = []
        for r in range(arr.rows):
            if r != i:
                for j in range(arr.row_order.size):
                    others.extend(fam.assignment[(r, j)])
        row_fam = IndexedFamily(
            arr.row_order,
            {j: tuple(fam.assignment[(i, j)]) for j in range(arr.row_order.size)},
            fam.structure,
            fam.context + tuple(others),
        )
        sub = check_indiscernible(row_fam, arity, delta)
        checked += sub.clauses[0].checked
        if not sub.passed:
            mutual_violation = {"row": i, **(sub.first_failure.violation or {})}
            break
    clauses.append(ClauseReport("mutual", mutual_violation is None,
                                vacuous=(arr.rows == 0), checked=checked,
                                violation=mutual_violation))

    row_values = {
        i: tuple(e for j in range(arr.row_order.size) for e in fam.assignment[(i, j)])
        for i in range(arr.rows)
    }
    rows_fam = IndexedFamily(plain_order(arr.rows, "row"), row_values,
                             fam.structure, fam.context)
    sub = check_indiscernible(rows_fam, arity, delta)
    clauses.append(ClauseReport("rows", sub.passed,
                                vacuous=sub.clauses[0].vacuous,
                                checked=sub.clauses[0].checked,
                                violation=sub.first_failure.violation if sub.first_failure else None))
    return make_report(clauses, _bound(arity, delta, fam), exhaustive=True)


def check_locally_based(target: IndexedFamily, base: IndexedFamily,
                        delta: Sequence[FormulaTemplate], arity: int) -> bool:
    """Every target tuple pattern (type, delta-type) occurs in the base.

    Delta-types are compared without contexts: the notion is context-free.
    Both families must be indexed in the same language and assign tuples of
    one length.
    """
    if arity < 1:
        raise InputError("arity bound must be at least 1")
    delta = check_delta(delta)
    if type(target.index) is not type(base.index):
        raise InputError("families must be indexed in the same language")
    if (isinstance(target.index, IndexTree)
            and target.index.language_mode != base.index.language_mode):
        raise InputError("tree families must share a language mode")
    if target.tuple_length != base.tuple_length:
        raise InputError("families must assign tuples of the same length")
    base_profiles: set = set()
    base_points = index_points(base.index)
    target_points = index_points(target.index)
    for n in range(1, arity + 1):
        for tup in itertools.product(base_points, repeat=n):
            base_profiles.add((
                index_qftp(base.index, tup),
                _family_delta_type(base, tup, delta, use_context=False),
            ))
        for tup in itertools.product(target_points, repeat=n):
            profile = (
                index_qftp(target.index, tup),
                _family_delta_type(target, tup, delta, use_context=False),
            )
            if profile not in base_profiles:
                return False
    return True
