"""Finite parameter structures, literal-conjunction formulas, theory oracles.

Formulas are conjunctions of relational literals in one free variable x over
parameter slots.  A positively signed instance asserts every literal; a
negated instance asserts that some literal fails.  Consistency of a finite
instance set is decided relative to a structure class selected by the
structure's oracle kind:

* random_graph      -- x may be any existing vertex or a fresh vertex with an
                       arbitrary adjacency pattern to the parameters
                       (extension axioms).
* equality          -- named elements are pairwise distinct; a fresh x equals
                       none of them.
* set_intersection  -- parameters are fixed finite sets and ``in`` is
                       membership; a fresh x belongs to no set.
* generic           -- decided by the brute-force search.

``brute_force_consistent`` is the independent reference decision procedure:
blind enumeration of x over existing elements and fresh relation patterns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputError, OracleError

RANDOM_GRAPH = "random_graph"
EQUALITY = "equality"
SET_INTERSECTION = "set_intersection"
GENERIC = "generic"
ORACLE_KINDS = (RANDOM_GRAPH, EQUALITY, SET_INTERSECTION, GENERIC)

X = "x"

Literal = tuple[str, bool, tuple]  # (relation, sign, args); args mix X and slot ints


@dataclass(frozen=True)
class FinStructure:
    """A finite relational structure with named elements and an oracle tag."""

    universe: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, ...]]]
    kind: str

    def __post_init__(self):
        if self.kind not in ORACLE_KINDS:
            raise InputError(f"unknown oracle kind {self.kind!r}")
        if len(set(self.universe)) != len(self.universe):
            raise InputError("universe elements must be distinct")

    def holds(self, rel: str, args: Sequence[str]) -> bool:
        if rel == "=":
            if len(args) != 2:
                raise OracleError("equality is binary")
            return args[0] == args[1]
        return tuple(args) in self.relations.get(rel, frozenset())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "universe": list(self.universe),
            "relations": {
                name: sorted(list(t) for t in rows)
                for name, rows in sorted(self.relations.items())
            },
        }

    @staticmethod
    def from_json(data: Mapping) -> "FinStructure":
        return fin_structure(
            data["universe"],
            {name: [tuple(t) for t in rows] for name, rows in data.get("relations", {}).items()},
            data["kind"],
        )


def fin_structure(universe: Iterable[str], relations: Mapping[str, Iterable[tuple]],
                  kind: str) -> FinStructure:
    """Validating constructor; symmetrizes R for the random-graph kind."""
    uni = tuple(universe)
    uniset = set(uni)
    rels: dict[str, frozenset] = {}
    for name, rows in relations.items():
        fixed = set()
        for row in rows:
            row = tuple(row)
            if not set(row) <= uniset:
                raise InputError(f"relation {name!r} mentions elements outside the universe")
            fixed.add(row)
        rels[name] = frozenset(fixed)
    if kind == RANDOM_GRAPH:
        edges = set(rels.get("R", frozenset()))
        for a, b in list(edges):
            if a == b:
                raise InputError("random-graph edge relation must be irreflexive")
            edges.add((b, a))
        rels["R"] = frozenset(edges)
    return FinStructure(uni, rels, kind)


def random_graph_structure(universe: Iterable[str], edges: Iterable[tuple[str, str]] = ()) -> FinStructure:
    return fin_structure(universe, {"R": list(edges)}, RANDOM_GRAPH)


def equality_structure(universe: Iterable[str]) -> FinStructure:
    return fin_structure(universe, {}, EQUALITY)


def set_structure(sets: Mapping[str, Iterable[str]], extra_points: Iterable[str] = ()) -> FinStructure:
    """Universe of set names plus all their points; ``in`` is membership."""
    membership = []
    points: list[str] = []
    for name in sets:
        for p in sets[name]:
            membership.append((p, name))
            if p not in points:
                points.append(p)
    for p in extra_points:
        if p not in points:
            points.append(p)
    universe = points + [s for s in sets if s not in points]
    return fin_structure(universe, {"in": membership}, SET_INTERSECTION)


def set_members(structure: FinStructure, set_name: str) -> frozenset[str]:
    return frozenset(p for (p, s) in structure.relations.get("in", frozenset()) if s == set_name)


@dataclass(frozen=True)
class FormulaTemplate:
    """phi(x; y_0..y_{arity-1}): a conjunction of signed relational literals.

    x is the only free variable allowed; slot indices refer to the parameter
    tuple.  Templates whose literals never mention x are evaluable as ground
    sentences and serve as delta formulas for indiscernibility checks.
    """

    name: str
    parameter_arity: int
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if self.parameter_arity < 0:
            raise InputError("parameter arity must be nonnegative")
        if not self.literals:
            raise InputError("a template needs at least one literal")
        for rel, sign, args in self.literals:
            if not isinstance(sign, bool):
                raise InputError("literal sign must be a boolean")
            for a in args:
                if a == X:
                    continue
                if not (isinstance(a, int) and 0 <= a < self.parameter_arity):
                    raise InputError(f"bad literal argument {a!r} in template {self.name!r}")

    @property
    def uses_x(self) -> bool:
        return any(X in args for _, _, args in self.literals)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "arity": self.parameter_arity,
            "literals": [[rel, sign, list(args)] for rel, sign, args in self.literals],
        }

    @staticmethod
    def from_json(data: Mapping) -> "FormulaTemplate":
        lits = tuple(
            (str(rel), bool(sign), tuple(X if a == X else int(a) for a in args))
            for rel, sign, args in data["literals"]
        )
        return FormulaTemplate(str(data["name"]), int(data["arity"]), lits)


@dataclass(frozen=True)
class InstantiatedFormula:
    """A template bound to concrete parameters, possibly negated as a whole."""

    template: FormulaTemplate
    parameters: tuple[str, ...]
    positive: bool = True

    def __post_init__(self):
        if len(self.parameters) != self.template.parameter_arity:
            raise InputError(
                f"template {self.template.name!r} expects {self.template.parameter_arity} "
                f"parameters, got {len(self.parameters)}"
            )

    def filled_literals(self) -> tuple[Literal, ...]:
        """Literals with slots replaced by concrete elements (x left in place)."""
        return tuple(
            (rel, sign, tuple(a if a == X else self.parameters[a] for a in args))
            for rel, sign, args in self.template.literals
        )

    def negated(self) -> "InstantiatedFormula":
        return InstantiatedFormula(self.template, self.parameters, not self.positive)

    def to_json(self) -> dict:
        return {"template": self.template.name, "parameters": list(self.parameters),
                "sign": self.positive}


def instantiate_template(t: FormulaTemplate, params: Sequence[str],
                         positive: bool = True) -> InstantiatedFormula:
    return InstantiatedFormula(t, tuple(params), positive)


# ---------------------------------------------------------------------------
# evaluation with x bound to an existing element or to a fresh-element pattern

_ALLOWED_RELATIONS = {
    RANDOM_GRAPH: {"R", "="},
    EQUALITY: {"="},
    SET_INTERSECTION: {"in", "="},
}


def _validate(structure: FinStructure, formulas: Iterable[InstantiatedFormula]) -> None:
    allowed = _ALLOWED_RELATIONS.get(structure.kind)
    uniset = set(structure.universe)
    for f in formulas:
        if not set(f.parameters) <= uniset:
            raise OracleError(
                f"parameters {f.parameters!r} not all in the oracle's structure"
            )
        for rel, _, args in f.template.literals:
            if allowed is not None and rel not in allowed:
                raise OracleError(f"relation {rel!r} unsupported by the {structure.kind} oracle")
            if rel in ("=", "R", "in") and len(args) != 2:
                raise OracleError(f"relation {rel!r} is binary")
            if structure.kind == SET_INTERSECTION and rel == "in" and args[1] == X:
                raise OracleError("set membership must have the set in second position")


def _lit_true_at(structure: FinStructure, lit: Literal, value: str) -> bool:
    rel, sign, args = lit
    ground = tuple(value if a == X else a for a in args)
    return structure.holds(rel, ground) == sign


def formula_true_at(structure: FinStructure, f: InstantiatedFormula, value: str) -> bool:
    lits = f.filled_literals()
    if f.positive:
        return all(_lit_true_at(structure, lit, value) for lit in lits)
    return any(not _lit_true_at(structure, lit, value) for lit in lits)


def _x_atom(structure: FinStructure, rel: str, args: tuple):
    """Normal form of an atomic formula mentioning x, for fresh-x reasoning.

    Returns ("const", bool) when the truth value is forced for every fresh
    element, else a hashable atom key.
    """
    if rel == "=":
        if args[0] == X and args[1] == X:
            return ("const", True)
        return ("=", args[0] if args[1] == X else args[1])
    if structure.kind == RANDOM_GRAPH and rel == "R":
        if args[0] == X and args[1] == X:
            return ("const", False)
        return ("R", args[0] if args[1] == X else args[1])
    if structure.kind == SET_INTERSECTION and rel == "in":
        return ("in", args[1])
    return (rel, args)


def _lit_true_fresh(structure: FinStructure, lit: Literal, pattern: Mapping) -> bool:
    rel, sign, args = lit
    if X not in args:
        return structure.holds(rel, args) == sign
    atom = _x_atom(structure, rel, args)
    if atom[0] == "const":
        value = atom[1]
    elif atom[0] == "=":
        value = False
    else:
        value = pattern.get(atom, False)
    return value == sign


def formula_true_fresh(structure: FinStructure, f: InstantiatedFormula,
                       pattern: Mapping) -> bool:
    lits = f.filled_literals()
    if f.positive:
        return all(_lit_true_fresh(structure, lit, pattern) for lit in lits)
    return any(not _lit_true_fresh(structure, lit, pattern) for lit in lits)


def _pattern_atoms(structure: FinStructure, formulas: Sequence[InstantiatedFormula]) -> list:
    """Atoms a fresh element may satisfy, for the structure class."""
    atoms = set()
    for f in formulas:
        for rel, _, args in f.filled_literals():
            if X not in args:
                continue
            atom = _x_atom(structure, rel, args)
            if atom[0] in ("const", "="):
                continue
            if structure.kind == RANDOM_GRAPH and atom[0] == "R":
                atoms.add(atom)
            elif structure.kind == GENERIC:
                atoms.add(atom)
            # equality / set kinds: a fresh element satisfies no positive atom
    return sorted(atoms, key=repr)


def brute_force_consistent(structure: FinStructure,
                           formulas: Sequence[InstantiatedFormula],
                           fresh_bound: int = 4096) -> bool:
    """Reference decision procedure: blind search over all assignments of x.

    Tries every existing element, then every pattern of relations between one
    fresh element and the parameters that is legal for the structure class
    (up to fresh_bound patterns).  Kept deliberately independent of the
    per-kind oracles so the two can cross-check each other.
    """
    formulas = list(formulas)
    _validate(structure, formulas)
    for e in structure.universe:
        if all(formula_true_at(structure, f, e) for f in formulas):
            return True
    atoms = _pattern_atoms(structure, formulas)
    seen = 0
    for bits in itertools.product((False, True), repeat=len(atoms)):
        seen += 1
        if seen > fresh_bound:
            break
        pattern = dict(zip(atoms, bits))
        if all(formula_true_fresh(structure, f, pattern) for f in formulas):
            return True
    return False


# ---------------------------------------------------------------------------
# per-kind oracles

def _expand(structure: FinStructure, formulas: Sequence[InstantiatedFormula]):
    """Units and clauses over x-atoms, with ground literals resolved now.

    Returns (units, clauses, feasible).  A positive instance contributes one
    unit per x-literal; a negated instance contributes one clause that some
    x-literal must fail.  feasible=False means a contradiction is already
    forced (conflicting units, false ground literal, empty clause).
    """
    units: dict = {}
    clauses: list[list] = []
    for f in formulas:
        lits = f.filled_literals()
        if f.positive:
            for rel, sign, args in lits:
                if X not in args:
                    if structure.holds(rel, args) != sign:
                        return {}, [], False
                    continue
                atom = _x_atom(structure, rel, args)
                if atom[0] == "const":
                    if atom[1] != sign:
                        return {}, [], False
                    continue
                if units.get(atom, sign) != sign:
                    return {}, [], False
                units[atom] = sign
        else:
            disjuncts = []
            satisfied = False
            for rel, sign, args in lits:
                if X not in args:
                    if structure.holds(rel, args) != sign:
                        satisfied = True
                        break
                    continue
                atom = _x_atom(structure, rel, args)
                if atom[0] == "const":
                    if atom[1] != sign:
                        satisfied = True
                        break
                    continue
                disjuncts.append((atom, not sign))  # need atom's value != sign
            if satisfied:
                continue
            if not disjuncts:
                return {}, [], False
            clauses.append(disjuncts)
    return units, clauses, True


def _fresh_clause_sat(units: Mapping, clauses: Sequence[Sequence]) -> bool:
    """Can a fresh element satisfy all units and clauses?

    Equality atoms are false for a fresh element; relation atoms may be set
    freely unless a unit fixes them.  Remaining free atoms are searched
    exhaustively (they are few: only atoms inside unresolved clauses).
    """
    if any(atom[0] == "=" and want for atom, want in units.items()):
        return False
    open_clauses: list[list] = []
    free: set = set()
    for disjuncts in clauses:
        sat = False
        remaining = []
        for atom, want in disjuncts:
            if atom[0] == "=":
                if want is False:
                    sat = True
                    break
                continue
            if atom in units:
                if units[atom] == want:
                    sat = True
                    break
                continue
            remaining.append((atom, want))
        if sat:
            continue
        if not remaining:
            return False
        open_clauses.append(remaining)
        free.update(atom for atom, _ in remaining)
    free_list = sorted(free, key=repr)
    for bits in itertools.product((False, True), repeat=len(free_list)):
        assign = dict(zip(free_list, bits))
        if all(any(assign[a] == w for a, w in cl) for cl in open_clauses):
            return True
    return False


def _random_graph_consistent(structure, formulas):
    units, clauses, feasible = _expand(structure, formulas)
    if not feasible:
        return False
    forced = sorted({atom[1] for atom, want in units.items() if atom[0] == "=" and want})
    if len(forced) > 1:
        return False
    if forced:
        e = forced[0]
        return all(formula_true_at(structure, f, e) for f in formulas)
    if _fresh_clause_sat(units, clauses):
        return True
    return any(
        all(formula_true_at(structure, f, e) for f in formulas)
        for e in structure.universe
    )


def _equality_consistent(structure, formulas):
    units, clauses, feasible = _expand(structure, formulas)
    if not feasible:
        return False
    mentioned = sorted({
        a for f in formulas for _, _, args in f.filled_literals() for a in args if a != X
    })
    for e in mentioned:
        if all(formula_true_at(structure, f, e) for f in formulas):
            return True
    return all(formula_true_fresh(structure, f, {}) for f in formulas)


def _set_consistent(structure, formulas):
    units, clauses, feasible = _expand(structure, formulas)
    if not feasible:
        return False
    required = sorted({atom[1] for atom, want in units.items() if atom[0] == "in" and want})
    if required:
        candidates = set_members(structure, required[0])
        for s in required[1:]:
            candidates &= set_members(structure, s)
    else:
        candidates = {p for (p, _) in structure.relations.get("in", frozenset())}
        candidates |= {
            a for f in formulas for rel, _, args in f.filled_literals()
            if rel == "=" for a in args if a != X
        }
    for c in sorted(candidates):
        if all(formula_true_at(structure, f, c) for f in formulas):
            return True
    return all(formula_true_fresh(structure, f, {}) for f in formulas)


def oracle_consistent(structure: FinStructure,
                      formulas: Sequence[InstantiatedFormula]) -> bool:
    """Decide consistency of the instance set in the structure's class."""
    formulas = list(formulas)
    _validate(structure, formulas)
    if not formulas:
        return True
    if structure.kind == RANDOM_GRAPH:
        return _random_graph_consistent(structure, formulas)
    if structure.kind == EQUALITY:
        return _equality_consistent(structure, formulas)
    if structure.kind == SET_INTERSECTION:
        return _set_consistent(structure, formulas)
    return brute_force_consistent(structure, formulas)


def k_inconsistent(structure: FinStructure,
                   formulas: Sequence[InstantiatedFormula], k: int) -> bool:
    """True iff every k-element subset of the list is oracle-inconsistent.

    Vacuously true when the list has fewer than k entries; callers that
    build reports flag that case.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    return all(
        not oracle_consistent(structure, list(sub))
        for sub in itertools.combinations(formulas, k)
    )
