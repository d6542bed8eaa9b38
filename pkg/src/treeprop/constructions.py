"""Witness generators and witness-to-witness transformations.

Each construction both builds its object and leaves it in a form the
corresponding checker accepts; round-trip soundness (generator output passes
its target checker) is part of the test suite.  Parameter letters generated
within one witness are pairwise distinct unless a construction dictates
repetition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import Case2Required, ConstructionError, InputError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    IndexTree,
    Node,
    QfType,
    chain_colors,
    chain_type,
    plain_order,
    realizations,
    standard_c,
)
from .indiscernibility import IndexedFamily
from .logic_core import (
    X,
    FinStructure,
    FormulaTemplate,
    InstantiatedFormula,
    equality_structure,
    instantiate_template,
    oracle_consistent,
    random_graph_structure,
    set_structure,
)
from .properties import (
    ChainStep,
    DividingChain,
    WitnessFamily,
    check_c_tp1,
    check_generalized_tp,
    check_ip,
)

RED, GREEN = "R", "G"

EDGE_NONEDGE = FormulaTemplate(
    "edge-nonedge", 2, (("R", True, (X, 0)), ("R", False, (X, 1)))
)
MEMBER = FormulaTemplate("member", 1, (("in", True, (X, 0)),))
EQ = FormulaTemplate("eq", 1, (("=", True, (X, 0)),))
PAIR_EQ = FormulaTemplate("pair-eq", 2, (("=", True, (0, 1)),))


def conjunction_template(t: FormulaTemplate, copies: int,
                         name: str | None = None) -> FormulaTemplate:
    """The copies-fold conjunction of t over stacked parameter slots."""
    if copies < 1:
        raise InputError("need at least one conjunct")
    literals = []
    for c in range(copies):
        offset = c * t.parameter_arity
        for rel, sign, args in t.literals:
            literals.append((rel, sign, tuple(a if a == X else a + offset for a in args)))
    return FormulaTemplate(name or f"and{copies}-{t.name}",
                           copies * t.parameter_arity, tuple(literals))


# ---------------------------------------------------------------------------
# random-graph witnesses

def gen_random_graph_witness(mode: str, size: int,
                             branching: ColoredOrder) -> WitnessFamily:
    """Two-colored tree or array witness over disconnected vertex pairs.

    A fresh pair (c_i, d_i) is fixed per level (tree mode) or per row (array
    mode); red positions are assigned (c_i, d_i) and green positions the
    swap (d_i, c_i), so a red and a green instance of xRy & not xRz clash on
    c_i while any choice of one instance per level stays satisfiable.
    """
    if set(branching.palette) != {RED, GREEN}:
        raise ConstructionError(
            "branching palette must be exactly {R, G}; apply duplicate_colors for more colors"
        )
    if size < 0:
        raise InputError("size must be nonnegative")
    letters = [(f"c{i}", f"d{i}") for i in range(size)]
    structure = random_graph_structure([v for pair in letters for v in pair])
    q = chain_type([RED, GREEN])

    def pair_for(level: int, color: str) -> tuple[str, str]:
        c, d = letters[level]
        return (c, d) if color == RED else (d, c)

    if mode == "tree":
        tree = IndexTree(size, branching)
        assignment = {
            node: pair_for(len(node) - 1, branching.color(node[-1]))
            for node in tree.nodes() if node
        }
        return WitnessFamily(tree, assignment, EDGE_NONEDGE, structure, spec_q=q)
    if mode == "array":
        arr = ArrayIndex(size, branching)
        assignment = {
            (i, j): pair_for(i, branching.color(j))
            for i in range(size) for j in range(branching.size)
        }
        return WitnessFamily(arr, assignment, EDGE_NONEDGE, structure, spec_q=q)
    raise InputError(f"unknown mode {mode!r} (tree or array)")


# ---------------------------------------------------------------------------
# palette transformations

def duplicate_colors(w: WitnessFamily, new_palette: Sequence[str]) -> WitnessFamily:
    """Enlarge the palette by duplicating assigned tuples under new colors.

    Every copy of the shared order gains, for each added color, a recolored
    duplicate of all original positions carrying the same tuples, so paths of
    the output restrict to paths of the input and the inconsistency type q is
    untouched.
    """
    new_palette = tuple(new_palette)
    old = _shared_order(w)
    if not set(old.palette) <= set(new_palette):
        raise ConstructionError("new palette must contain every old color")
    if w.spec_q is not None:
        missing = [c for c in w.spec_q.colors() if c not in new_palette]
        if missing:
            raise ConstructionError(f"new palette omits colors used by q: {missing}")
    added = [c for c in new_palette if c not in old.palette]
    coloring = list(old.coloring)
    for color in added:
        coloring.extend([color] * old.size)
    new_order = ColoredOrder(new_palette, tuple(coloring))
    project = lambda e: e % old.size if old.size else e

    if isinstance(w.index, IndexTree):
        tree = IndexTree(w.index.height, new_order, w.index.language_mode)
        assignment = {}
        for node in tree.nodes():
            source = tuple(project(e) for e in node)
            if node == () and source not in w.assignment:
                continue
            assignment[node] = tuple(w.assignment[source])
        index = tree
    elif isinstance(w.index, ArrayIndex):
        index = ArrayIndex(w.index.rows, new_order)
        assignment = {
            (i, j): tuple(w.assignment[(i, project(j))])
            for i in range(w.index.rows) for j in range(new_order.size)
        }
    else:
        raise InputError("duplicate_colors needs a tree- or array-indexed witness")
    return WitnessFamily(index, assignment, w.template, w.structure,
                         spec_q=w.spec_q, spec_k=w.spec_k)


def _shared_order(w: WitnessFamily) -> ColoredOrder:
    if isinstance(w.index, IndexTree):
        return w.index.branching
    if isinstance(w.index, ArrayIndex):
        return w.index.row_order
    raise InputError("witness has no shared sibling/row order")


def trivial_coloring(w: WitnessFamily, palette: Sequence[str]) -> WitnessFamily:
    """Color a classical k-witness by cycling the palette over siblings.

    The assignment is untouched; since every k-subset of a sibling family is
    already inconsistent, the type of any k elements works as q.  The chosen
    q is the type of the first k recolored positions.
    """
    if not isinstance(w.index, IndexTree):
        raise InputError("trivial_coloring needs a tree-indexed witness")
    if w.spec_k is None:
        raise InputError("trivial_coloring starts from a k-inconsistency witness")
    if len(w.index.branching.palette) != 1:
        raise InputError("trivial_coloring starts from a one-color witness")
    base = check_generalized_tp(w)
    if not base.passed:
        raise ConstructionError("input does not pass the classical tree-property check")
    k = w.spec_k
    new_order = standard_c(w.index.branching.size, palette)
    tree = IndexTree(w.index.height, new_order, w.index.language_mode)
    q = chain_type([new_order.palette[i % len(new_order.palette)] for i in range(k)])
    return WitnessFamily(tree, dict(w.assignment), w.template, w.structure, spec_q=q)


# ---------------------------------------------------------------------------
# a genuinely colored first-kind witness over the set-intersection oracle

def gen_set_ctp1_witness(height: int, branching: ColoredOrder) -> WitnessFamily:
    """Set-valued tree whose incomparable red/green pairs are disjoint.

    Node n carries the set of path points of the leaves extending n, plus a
    shared red marker on red nodes and a shared green marker on green nodes.
    Paths meet in their leaf's path point; same-color incomparables share a
    marker and stay consistent; red/green incomparables are disjoint, so the
    inconsistency genuinely needs both colors.
    """
    if height < 1:
        raise InputError("height must be at least 1")
    if set(branching.palette) != {RED, GREEN}:
        raise ConstructionError("branching palette must be exactly {R, G}")
    tree = IndexTree(height, branching)

    def set_name(node: Node) -> str:
        return "S_" + ("-".join(str(e) for e in node) if node else "root")

    def point_name(leaf: Node) -> str:
        return "pt_" + "-".join(str(e) for e in leaf)

    sets: dict[str, list[str]] = {}
    for node in tree.nodes():
        members = [point_name(leaf) for leaf in tree.leaves()
                   if leaf[: len(node)] == node]
        color = tree.color(node)
        if color == RED:
            members.append("r_star")
        elif color == GREEN:
            members.append("g_star")
        sets[set_name(node)] = members
    structure = set_structure(sets)
    assignment = {node: (set_name(node),) for node in tree.nodes()}
    return WitnessFamily(tree, assignment, MEMBER, structure,
                         spec_q=chain_type([RED, GREEN]))


# ---------------------------------------------------------------------------
# first-kind collapse: colored witness -> classical tuple-tree witness

def transform_ctp1_to_tp1(w: WitnessFamily, out_height: int, out_width: int,
                          check_input: bool = True):
    """Build the tuple tree turning a colored first-kind witness classical.

    Each output node is a k-tuple of input nodes forming a chain: a fresh
    same-colored successor of the deepest node used so far (one per output
    sibling, cycling the first color of q), then one successor per remaining
    color of q.  Output siblings therefore stay on one input path, every
    output node covers all colors of q, and incomparability is preserved, so
    the k-fold conjunction of the template is k-inconsistent on
    incomparables.  Returns (witness, psi).
    """
    tree = w.index
    if not isinstance(tree, IndexTree):
        raise InputError("transform needs a tree-indexed witness")
    if w.spec_q is None:
        raise InputError("transform starts from a q-inconsistency witness")
    colors = chain_colors(w.spec_q)
    if colors is None:
        raise InputError("q must be a strict chain of colors")
    k = len(colors)
    if out_height < 0 or out_width < 1:
        raise InputError("output height/width out of range")
    firsts = tree.branching.positions_of(colors[0])
    if len(firsts) < out_width:
        raise ConstructionError(
            f"branching order lacks enough distinct {colors[0]}-colored positions: "
            f"{len(firsts)} available, {out_width} needed"
        )
    rest = []
    for c in colors[1:]:
        positions = tree.branching.positions_of(c)
        if not positions:
            raise ConstructionError(f"branching order has no {c}-colored position")
        rest.append(positions[0])
    if tree.height < k * out_height:
        raise ConstructionError(
            f"input height {tree.height} cannot host output height {out_height}: "
            f"each output level consumes {k} input levels"
        )
    if () not in w.assignment:
        raise ConstructionError("transform needs a value at the input root")
    if check_input:
        base = check_c_tp1(w)
        if not base.passed:
            raise ConstructionError("input does not pass the first-kind check")

    psi = conjunction_template(w.template, k)
    out_tree = IndexTree(out_height, plain_order(out_width, "w"))
    components: dict[Node, tuple[Node, ...]] = {(): ((),) * k}
    assignment: dict[Node, tuple[str, ...]] = {}
    for node in out_tree.nodes():
        if node == ():
            assignment[node] = tuple(w.assignment[()]) * k
            continue
        deepest = components[node[:-1]][-1]
        chain = [deepest + (firsts[node[-1]],)]
        for position in rest:
            chain.append(chain[-1] + (position,))
        for part, color in zip(chain, colors):
            assert tree.color(part) == color
        components[node] = tuple(chain)
        assignment[node] = tuple(
            e for part in chain for e in w.assignment[part]
        )
    witness = WitnessFamily(out_tree, assignment, psi, w.structure, spec_k=k)
    return witness, psi


# ---------------------------------------------------------------------------
# second-kind witnesses: IP extraction and the block transform

@dataclass(frozen=True)
class BlockParams:
    """Anchor data for the two second-kind cases.

    anchors are column positions j_0 < ... < j_m whose colors spell out q;
    the constant paths sit at j_0..j_{m-2} and the alternating path swings
    between j_{m-1} and j_m, whose colors must differ.  block_height is the
    even block height K used by the case-2 transform.
    """

    block_height: int
    anchors: tuple[int, ...]
    anchor_colors: tuple[str, ...]

    def __post_init__(self):
        if self.block_height < 2 or self.block_height % 2:
            raise InputError("block height K must be even and at least 2")
        if len(self.anchors) != len(self.anchor_colors) or len(self.anchors) < 2:
            raise InputError("need anchors j_0..j_m for the m+1 colors of q")
        if list(self.anchors) != sorted(set(self.anchors)):
            raise InputError("anchors must be strictly increasing")
        if self.anchor_colors[-1] == self.anchor_colors[-2]:
            raise InputError("the last two anchor colors must differ")

    @property
    def m(self) -> int:
        return len(self.anchors) - 1


def canonical_block_params(w: WitnessFamily, block_height: int = 2) -> BlockParams:
    """Smallest strictly increasing anchor columns realizing q's colors."""
    if not isinstance(w.index, ArrayIndex):
        raise InputError("block parameters are defined for array witnesses")
    if w.spec_q is None:
        raise InputError("the witness must carry a q-inconsistency type")
    colors = chain_colors(w.spec_q)
    if colors is None or len(colors) < 2:
        raise InputError("q must be a strict chain of at least two colors")
    order = w.index.row_order
    anchors: list[int] = []
    position = -1
    for c in colors:
        found = next((p for p in range(position + 1, order.size)
                      if order.coloring[p] == c), None)
        if found is None:
            raise ConstructionError(
                f"no increasing anchor of color {c!r} after position {position}"
            )
        anchors.append(found)
        position = found
    return BlockParams(block_height, tuple(anchors), tuple(colors))


def anchor_path_union(w: WitnessFamily, params: BlockParams,
                      rows: int) -> list[InstantiatedFormula]:
    """Instances along the m-1 constant anchor paths and the alternating one,
    restricted to the first ``rows`` rows."""
    arr = w.index
    if rows > arr.rows:
        raise InputError("restriction exceeds the array")
    out: list[InstantiatedFormula] = []
    for t in range(params.m - 1):
        for i in range(rows):
            out.append(w.instance((i, params.anchors[t])))
    for i in range(rows):
        col = params.anchors[params.m - 1] if i % 2 == 0 else params.anchors[params.m]
        out.append(w.instance((i, col)))
    return out


@dataclass(frozen=True)
class IpExtraction:
    """Alternating-column IP candidate with its oracle-verified justification."""

    family: IndexedFamily
    template: FormulaTemplate
    column: int
    alternating: tuple[InstantiatedFormula, ...]
    justification: tuple[InstantiatedFormula, ...]


def extract_ip_case1(w: WitnessFamily, params: BlockParams | None = None) -> IpExtraction:
    """Consistent case: read the independence pattern off the last anchor column.

    Requires the union of the anchor paths to be consistent; the oracle then
    confirms that adding the negated even-row instances of the last column
    keeps it consistent (the negations are forced by row inconsistency at the
    anchors, which is also verified).  Raises Case2Required when the union is
    inconsistent.
    """
    arr = w.index
    if not isinstance(arr, ArrayIndex) or arr.rows < 1:
        raise InputError("extraction needs a nonempty array witness")
    params = params or canonical_block_params(w)
    justification = anchor_path_union(w, params, arr.rows)
    if not oracle_consistent(w.structure, justification):
        raise Case2Required(
            "the union of the anchor paths is inconsistent; apply block_transform_case2"
        )
    column = params.anchors[params.m]
    for i in range(arr.rows):
        anchor_row = [w.instance((i, j)) for j in params.anchors]
        if oracle_consistent(w.structure, anchor_row):
            raise ConstructionError(
                f"anchor tuple in row {i} is consistent; the witness does not "
                "carry its q-inconsistency at these anchors"
            )
    negatives = [w.instance((i, column), positive=False)
                 for i in range(arr.rows) if i % 2 == 0]
    if not oracle_consistent(w.structure, justification + negatives):
        raise ConstructionError(
            "negated even-row instances are not jointly consistent with the "
            "anchor paths; extraction is unsound here"
        )
    alternating = tuple(
        w.instance((i, column), positive=(i % 2 == 1)) for i in range(arr.rows)
    )
    family = IndexedFamily(
        plain_order(arr.rows),
        {i: tuple(w.assignment[(i, column)]) for i in range(arr.rows)},
        w.structure,
    )
    return IpExtraction(family, w.template, column, alternating, tuple(justification))


def block_transform_case2(w: WitnessFamily, params: BlockParams,
                          out_width: int | None = None) -> WitnessFamily:
    """Inconsistent case: fold K consecutive rows into blocks, dropping one color.

    Output cell (i, j) stacks K input cells from rows iK..iK+K-1: a constant
    column j_l when j has color e_l with l < m-1, and the alternating pair
    (j_m at even offsets, j_{m-1} at odd offsets) when l = m-1.  Rows of the
    output are r-inconsistent for the m-color chain r = e_0 < ... < e_{m-1},
    one variable fewer than q, and every output path folds back to an input
    path.
    """
    arr = w.index
    if not isinstance(arr, ArrayIndex):
        raise InputError("block transform needs an array witness")
    K = params.block_height
    out_rows = arr.rows // K
    if out_rows < 1:
        raise ConstructionError(
            f"insufficient rows: {arr.rows} rows cannot host a block of height {K}"
        )
    restricted = anchor_path_union(w, params, K)
    if oracle_consistent(w.structure, restricted):
        raise ConstructionError(
            f"anchor-path union restricted to {K} rows is consistent; "
            "use extract_ip_case1"
        )
    m = params.m
    out_width = 2 * m if out_width is None else out_width
    if out_width < m:
        raise InputError("output width must realize every reduced color")
    out_palette = tuple(f"e{t}" for t in range(m))
    out_order = ColoredOrder(out_palette, tuple(f"e{j % m}" for j in range(out_width)))
    psi = conjunction_template(w.template, K)
    assignment: dict[tuple[int, int], tuple[str, ...]] = {}
    for i in range(out_rows):
        for j in range(out_width):
            values: list[str] = []
            for t in range(K):
                values.extend(w.assignment[(i * K + t, _block_column(params, j, t))])
            assignment[(i, j)] = tuple(values)
    return WitnessFamily(ArrayIndex(out_rows, out_order), assignment, psi,
                         w.structure, spec_q=chain_type(out_palette))


def _block_column(params: BlockParams, out_column: int, offset: int) -> int:
    level = out_column % params.m
    if level < params.m - 1:
        return params.anchors[level]
    return params.anchors[params.m] if offset % 2 == 0 else params.anchors[params.m - 1]


def case2_path_preimage(params: BlockParams, rows_in: int,
                        out_path: Sequence[int]) -> tuple[int, ...]:
    """The input path whose instance set proves an output path's instances."""
    d: list[int] = []
    for col in out_path:
        for t in range(params.block_height):
            d.append(_block_column(params, col, t))
    while len(d) < rows_in:
        d.append(params.anchors[0])
    return tuple(d)


# ---------------------------------------------------------------------------
# a designed second-kind set witness whose anchor paths clash at K=2

def gen_set_ctp2_witness(rows: int, colors: Sequence[str] = ("B", RED, GREEN)) -> WitnessFamily:
    """Array of sets with pairwise-intersecting, triple-disjoint rows.

    Each column-choice function f owns a point placed in exactly the cells it
    selects, so every path is consistent; each same-row pair of cells shares
    one extra point, so all chains shorter than q stay consistent; no
    same-row triple of distinct cells has a common point, so the full chain
    q = colors[0] < ... < colors[-1] is row-inconsistent.  Any union of two
    anchor paths hits two cells of one row and is therefore inconsistent
    already at block height 2.
    """
    if rows < 1:
        raise InputError("need at least one row")
    colors = tuple(colors)
    if len(colors) < 3 or len(set(colors)) != len(colors):
        raise InputError("need at least three distinct colors")
    order = ColoredOrder(colors, colors)
    width = order.size

    def cell_set(i: int, j: int) -> str:
        return f"S_{i}_{j}"

    sets: dict[str, list[str]] = {cell_set(i, j): [] for i in range(rows)
                                  for j in range(width)}
    for f in itertools.product(range(width), repeat=rows):
        point = "p" + "".join(str(j) for j in f)
        for i, j in enumerate(f):
            sets[cell_set(i, j)].append(point)
    for i in range(rows):
        for j1, j2 in itertools.combinations(range(width), 2):
            point = f"w{i}_{j1}{j2}"
            sets[cell_set(i, j1)].append(point)
            sets[cell_set(i, j2)].append(point)
    structure = set_structure(sets)
    assignment = {(i, j): (cell_set(i, j),) for i in range(rows) for j in range(width)}
    return WitnessFamily(ArrayIndex(rows, order), assignment, MEMBER, structure,
                         spec_q=chain_type(colors))


# ---------------------------------------------------------------------------
# dividing chains

def gen_triviality_chain(n: int, family_size: int = 6) -> DividingChain:
    """Constant chain for x=y over two elements, each step witnessed by the
    two-colored alternation a,b,a,b,... whose red/green pairs clash."""
    if n < 1:
        raise InputError("chain length must be at least 1")
    if family_size < 2:
        raise InputError("step families need at least two entries")
    structure = equality_structure(["a", "b"])
    order = standard_c(family_size, [RED, GREEN])
    assignment = {
        p: ("a",) if order.color(p) == RED else ("b",) for p in range(family_size)
    }
    q = chain_type([RED, GREEN])
    steps = tuple(
        ChainStep(("a",), order, dict(assignment), q, pivot=0) for _ in range(n)
    )
    return DividingChain(EQ, structure, steps, (PAIR_EQ,), 2)


# ---------------------------------------------------------------------------
# the induction driver: iterate case 1 / case 2 until IP or classical TP2

def q_minimality(w: WitnessFamily) -> tuple[bool, QfType | None]:
    """Is any strictly smaller chain implied by q already row-inconsistent?

    Returns (True, None) when q is minimal, else (False, r) for the smallest
    realized chain r in fewer variables whose realizing within-row tuples are
    all inconsistent.
    """
    arr = w.index
    if not isinstance(arr, ArrayIndex) or w.spec_q is None:
        raise InputError("minimality is defined for array witnesses with q")
    colors = chain_colors(w.spec_q)
    if colors is None:
        raise InputError("q must be a strict chain")
    seen: set[tuple[str, ...]] = set()
    for size in range(1, len(colors)):
        for combo in itertools.combinations(range(len(colors)), size):
            sub = tuple(colors[i] for i in combo)
            if sub in seen:
                continue
            seen.add(sub)
            r = chain_type(sub)
            tuples = realizations(arr.row_order, r)
            if not tuples:
                continue
            witnesses = all(
                not oracle_consistent(
                    w.structure,
                    [w.instance((i, j)) for j in tup],
                )
                for i in range(arr.rows) for tup in tuples
            )
            if witnesses and arr.rows > 0:
                return False, r
    return True, None


def run_ip_extraction(w: WitnessFamily, delta: Sequence[FormulaTemplate] = (PAIR_EQ,),
                      arity: int = 2):
    """Drive the second-kind induction to an IP candidate or classical TP2.

    Before each step the minimality of q is checked and reported; a smaller
    row-inconsistent chain replaces q when found.  A one-color q stops the
    driver (restricting to that color is a classical second-kind witness).
    Returns (result, trace).
    """
    trace: list[dict] = []
    current = w
    while True:
        colors = chain_colors(current.spec_q) if current.spec_q else None
        if colors is None:
            raise InputError("driver needs a strict-chain q")
        minimal, reduced = q_minimality(current)
        trace.append({"q": list(colors), "minimal": minimal})
        if not minimal:
            trace[-1]["reduced_to"] = list(chain_colors(reduced))
            current = WitnessFamily(current.index, dict(current.assignment),
                                    current.template, current.structure,
                                    spec_q=reduced)
            continue
        if len(set(colors)) == 1:
            trace.append({"case": "classical", "color": colors[0]})
            return {"kind": "classical_tp2", "color": colors[0],
                    "witness": current}, trace
        params = canonical_block_params(current)
        try:
            extraction = extract_ip_case1(current, params)
            report = check_ip(extraction.family, extraction.template, delta, arity)
            trace.append({"case": 1, "column": extraction.column})
            return {"kind": "ip", "extraction": extraction, "report": report}, trace
        except Case2Required:
            K = next(
                (k for k in range(2, current.index.rows + 1, 2)
                 if not oracle_consistent(
                     current.structure,
                     anchor_path_union(current, canonical_block_params(current, k), k))),
                None,
            )
            if K is None:
                raise ConstructionError(
                    "anchor-path union is inconsistent but no even restriction is; "
                    "not enough rows to pick a block height"
                )
            params = canonical_block_params(current, K)
            trace.append({"case": 2, "K": K})
            current = block_transform_case2(current, params)


# ---------------------------------------------------------------------------
# re-indexing helpers

def array_rows_as_sibling_tree(w: WitnessFamily) -> WitnessFamily:
    """View array rows as the sibling families along a full tree of the same
    shared order: the node at depth i+1 ending in j carries the row-i value
    at column j, so row tuples become sibling tuples and column choices
    become root-to-leaf paths."""
    arr = w.index
    if not isinstance(arr, ArrayIndex):
        raise InputError("re-indexing starts from an array witness")
    tree = IndexTree(arr.rows, arr.row_order)
    assignment = {
        node: tuple(w.assignment[(len(node) - 1, node[-1])])
        for node in tree.nodes() if node
    }
    return WitnessFamily(tree, assignment, w.template, w.structure,
                         spec_q=w.spec_q, spec_k=w.spec_k)
