"""Finite index structures and their quantifier-free types.

Three kinds of index structure are supported: colored linear orders, trees
whose sibling sets all carry one shared colored order, and arrays whose rows
are copies of a colored order (a convexly ordered equivalence relation).

A quantifier-free type is stored canonically as a sorted tuple of atom
strings over variables x1..xn (plus meet terms in tree mode).  Two tuples
receive equal types exactly when the induced correspondence between them,
extended to pairwise meets for trees, is a partial isomorphism of the index
structure in the selected language.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import InputError

Color = str
Node = tuple[int, ...]
Cell = tuple[int, int]

L0I = "L0I"
LSI = "LsI"


def _reserved_head(head: str) -> bool:
    """Atom heads used structurally, hence unavailable as color names."""
    return head in ("E", "pre", "lex", "sib") or (head[:1] == "P" and head[1:].isdigit())


@dataclass(frozen=True)
class QfType:
    """Canonical quantifier-free type: arity plus a sorted atom tuple."""

    arity: int
    atoms: tuple[str, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise InputError("arity must be nonnegative")
        if tuple(sorted(self.atoms)) != self.atoms:
            object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    def colors(self) -> tuple[str, ...]:
        """Color names mentioned by unary color atoms, sorted.

        Heads E, pre, lex, sib and P<digits> are reserved for structural
        atoms and may not be used as palette colors.
        """
        found = set()
        for atom in self.atoms:
            if "(" not in atom or not atom.endswith(")"):
                continue
            head = atom[: atom.index("(")]
            arg = atom[atom.index("(") + 1 : -1]
            if "," in arg or _reserved_head(head):
                continue
            found.add(head)
        return tuple(sorted(found))

    def has_equalities(self) -> bool:
        return any("=" in a and "(" not in a for a in self.atoms)

    def to_json(self) -> dict:
        return {"arity": self.arity, "atoms": list(self.atoms)}

    @staticmethod
    def from_json(data: Mapping) -> "QfType":
        return QfType(int(data["arity"]), tuple(str(a) for a in data["atoms"]))


@dataclass(frozen=True)
class ColoredOrder:
    """A finite linear order with a total coloring of its positions.

    Positions are 0..size-1 in increasing order; ``coloring[i]`` is the color
    of position i.  Every color used must belong to the palette; the palette
    may contain colors that no position realizes.
    """

    palette: tuple[Color, ...]
    coloring: tuple[Color, ...]

    def __post_init__(self):
        if len(set(self.palette)) != len(self.palette):
            raise InputError("palette colors must be distinct")
        for c in self.palette:
            if _reserved_head(c) or not c or any(ch in c for ch in "()<=&,"):
                raise InputError(f"{c!r} is not usable as a color name")
        for c in self.coloring:
            if c not in self.palette:
                raise InputError(f"color {c!r} not in palette {list(self.palette)}")

    @property
    def size(self) -> int:
        return len(self.coloring)

    def color(self, position: int) -> Color:
        self.check_position(position)
        return self.coloring[position]

    def check_position(self, position: int) -> None:
        if not (isinstance(position, int) and 0 <= position < self.size):
            raise InputError(f"position {position!r} out of range for order of size {self.size}")

    def positions_of(self, color: Color) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coloring) if c == color)

    def to_json(self) -> dict:
        return {"size": self.size, "palette": list(self.palette), "coloring": list(self.coloring)}

    @staticmethod
    def from_json(data: Mapping) -> "ColoredOrder":
        order = ColoredOrder(tuple(data["palette"]), tuple(data["coloring"]))
        if int(data.get("size", order.size)) != order.size:
            raise InputError("declared size does not match coloring length")
        return order


def standard_c(n: int, palette: Sequence[Color], scheme: str = "alternating",
               coloring: Sequence[Color] | None = None) -> ColoredOrder:
    """Finite fragment of the colored order: n positions over the palette.

    The alternating scheme cycles through the palette in position order (so
    with two colors, even positions get the first color and odd positions the
    second).  An explicit scheme requires a total coloring.
    """
    if n < 0:
        raise InputError("size must be nonnegative")
    pal = tuple(palette)
    if scheme == "alternating":
        if not pal and n > 0:
            raise InputError("alternating scheme needs a nonempty palette")
        colors = tuple(pal[i % len(pal)] for i in range(n))
    elif scheme == "explicit":
        if coloring is None or len(coloring) != n:
            raise InputError("explicit scheme requires a total coloring of all positions")
        colors = tuple(coloring)
    else:
        raise InputError(f"unknown coloring scheme {scheme!r}")
    return ColoredOrder(pal, colors)


def plain_order(n: int, color: Color = "o") -> ColoredOrder:
    """A one-color order: the classical, uncolored index structure."""
    return standard_c(n, [color])


def qftp_order(order: ColoredOrder, tup: Sequence[int]) -> QfType:
    """Quantifier-free type of a position tuple: =/< pattern plus colors."""
    for p in tup:
        order.check_position(p)
    atoms = [f"{order.color(p)}(x{i + 1})" for i, p in enumerate(tup)]
    for i in range(len(tup)):
        for j in range(i + 1, len(tup)):
            a, b = tup[i], tup[j]
            if a == b:
                atoms.append(f"x{i + 1}=x{j + 1}")
            elif a < b:
                atoms.append(f"x{i + 1}<x{j + 1}")
            else:
                atoms.append(f"x{j + 1}<x{i + 1}")
    return QfType(len(tup), tuple(sorted(atoms)))


def chain_type(colors: Sequence[Color]) -> QfType:
    """The type of strictly increasing elements with the given colors."""
    atoms = [f"{c}(x{i + 1})" for i, c in enumerate(colors)]
    for i in range(len(colors)):
        for j in range(i + 1, len(colors)):
            atoms.append(f"x{i + 1}<x{j + 1}")
    return QfType(len(colors), tuple(sorted(atoms)))


def chain_colors(q: QfType) -> tuple[Color, ...] | None:
    """Recover c1..ck when q is the type of a strict chain, else None."""
    colors: dict[int, str] = {}
    less: set[tuple[int, int]] = set()
    for atom in q.atoms:
        if "(" in atom:
            head, arg = atom[: atom.index("(")], atom[atom.index("(") + 1 : -1]
            if not arg.startswith("x") or "," in arg:
                return None
            colors[int(arg[1:])] = head
        elif "<" in atom:
            a, b = atom.split("<")
            less.add((int(a[1:]), int(b[1:])))
        else:
            return None  # equality atom: not a strict chain
    n = q.arity
    if sorted(colors) != list(range(1, n + 1)):
        return None
    if less != {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}:
        return None
    return tuple(colors[i] for i in range(1, n + 1))


def parse_qtype(text: str) -> QfType:
    """Parse the command-line q syntax: ``R<G``, ``R<R<G``, ``R=R<G``.

    ``<`` separates strictly increasing groups; ``=`` joins positions forced
    equal (which must share one color).
    """
    if not text.strip():
        raise InputError("empty type expression")
    groups = [seg.split("=") for seg in text.split("<")]
    var = 0
    numbered: list[list[int]] = []
    colors: list[str] = []
    for group in groups:
        ids = []
        for token in group:
            token = token.strip()
            if not token:
                raise InputError(f"bad type expression {text!r}")
            if len(set(group)) != 1:
                raise InputError(f"equal positions must share a color: {text!r}")
            var += 1
            ids.append(var)
            colors.append(token)
        numbered.append(ids)
    atoms = [f"{colors[i - 1]}(x{i})" for g in numbered for i in g]
    for gi, g in enumerate(numbered):
        for a, b in itertools.combinations(g, 2):
            atoms.append(f"x{a}=x{b}")
        for h in numbered[gi + 1:]:
            for a in g:
                for b in h:
                    atoms.append(f"x{a}<x{b}")
    return QfType(var, tuple(sorted(atoms)))


def render_qtype(q: QfType) -> str:
    """Inverse of parse_qtype where possible, else the raw atom list."""
    colors: dict[int, str] = {}
    eq: set[tuple[int, int]] = set()
    less: set[tuple[int, int]] = set()
    for atom in q.atoms:
        if "(" in atom:
            head, arg = atom[: atom.index("(")], atom[atom.index("(") + 1 : -1]
            if not arg.startswith("x") or "," in arg or _reserved_head(head) or not arg[1:].isdigit():
                return " & ".join(q.atoms)
            colors[int(arg[1:])] = head
        elif "=" in atom:
            a, b = atom.split("=")
            if not (a.startswith("x") and b.startswith("x")):
                return " & ".join(q.atoms)
            eq.add((int(a[1:]), int(b[1:])))
        elif "<" in atom:
            a, b = atom.split("<")
            less.add((int(a[1:]), int(b[1:])))
        else:
            return " & ".join(q.atoms)
    if sorted(colors) != list(range(1, q.arity + 1)):
        return " & ".join(q.atoms)
    # union-find the equality groups, then order groups by <
    parent = list(range(q.arity + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in eq:
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(1, q.arity + 1):
        groups.setdefault(find(i), []).append(i)
    order_ok = all(
        ((find(a) == find(b)) == ((a, b) not in less and (b, a) not in less))
        for a in range(1, q.arity + 1) for b in range(a + 1, q.arity + 1)
    )
    if not order_ok:
        return " & ".join(q.atoms)
    preceding = {
        r: len({find(a) for a, b in less if find(b) == r and find(a) != r})
        for r in groups
    }
    ranked = sorted(groups, key=lambda r: preceding[r])
    return "<".join("=".join(colors[i] for i in sorted(groups[r])) for r in ranked)


@dataclass(frozen=True)
class IndexTree:
    """The tree of sequences of length <= height over a shared sibling order.

    Nodes are tuples of branching positions; the empty tuple is the root.
    Every node's immediate successors form a copy of ``branching``; no index
    relations hold between different copies.  A node's color is the color of
    its last entry, so the root is uncolored.
    """

    height: int
    branching: ColoredOrder
    language_mode: str = LSI

    def __post_init__(self):
        if self.height < 0:
            raise InputError("height must be nonnegative")
        if self.language_mode not in (L0I, LSI):
            raise InputError(f"unknown language mode {self.language_mode!r}")

    def nodes(self) -> tuple[Node, ...]:
        return _tree_nodes(self.height, self.branching.size)

    def contains(self, node: Node) -> bool:
        return (
            isinstance(node, tuple)
            and len(node) <= self.height
            and all(isinstance(e, int) and 0 <= e < self.branching.size for e in node)
        )

    def check_node(self, node: Node) -> None:
        if not self.contains(node):
            raise InputError(f"node {node!r} does not belong to this tree")

    def color(self, node: Node) -> Color | None:
        """Color of the node's last entry; None for the root."""
        self.check_node(node)
        return self.branching.color(node[-1]) if node else None

    def children(self, node: Node) -> tuple[Node, ...]:
        self.check_node(node)
        if len(node) == self.height:
            return ()
        return tuple(node + (i,) for i in range(self.branching.size))

    def leaves(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes() if len(n) == self.height)

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "branching": self.branching.to_json(),
            "language_mode": self.language_mode,
        }

    @staticmethod
    def from_json(data: Mapping) -> "IndexTree":
        return IndexTree(
            int(data["height"]),
            ColoredOrder.from_json(data["branching"]),
            str(data.get("language_mode", LSI)),
        )


@lru_cache(maxsize=None)
def _tree_nodes(height: int, width: int) -> tuple[Node, ...]:
    out: list[Node] = []
    level: list[Node] = [()]
    out.extend(level)
    for _ in range(height):
        level = [n + (i,) for n in level for i in range(width)]
        out.extend(level)
    return tuple(sorted(out))


def meet(tree: IndexTree, a: Node, b: Node) -> Node:
    """Longest common prefix of two nodes."""
    tree.check_node(a)
    tree.check_node(b)
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return a[:k]


def is_prefix(a: Node, b: Node) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def lex_less(a: Node, b: Node) -> bool:
    """Total lexicographic order: a proper prefix precedes its extensions."""
    return a != b and a <= b


def are_siblings(a: Node, b: Node) -> bool:
    return len(a) == len(b) and len(a) >= 1 and a[:-1] == b[:-1] and a != b


def qftp_tree(tree: IndexTree, tup: Sequence[Node]) -> QfType:
    """Type of a node tuple, computed on its meet closure.

    Terms are x1..xn and the formal meets xi^xj; atoms record equalities,
    the prefix order, lexicographic order, sibling order within one copy of
    the branching structure, colors, and (in LsI mode) absolute levels.
    """
    nodes = [tuple(n) for n in tup]
    for n in nodes:
        tree.check_node(n)
    terms: list[tuple[str, Node]] = [(f"x{i + 1}", n) for i, n in enumerate(nodes)]
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            terms.append((f"x{i + 1}^x{j + 1}", meet(tree, nodes[i], nodes[j])))
    atoms: list[str] = []
    for label, value in terms:
        if value:
            atoms.append(f"{tree.branching.color(value[-1])}({label})")
        if tree.language_mode == LSI:
            atoms.append(f"P{len(value)}({label})")
    for (s, a), (t, b) in itertools.combinations(terms, 2):
        if a == b:
            atoms.append(f"{s}={t}")
            continue
        if is_prefix(a, b):
            atoms.append(f"pre({s},{t})")
        elif is_prefix(b, a):
            atoms.append(f"pre({t},{s})")
        if lex_less(a, b):
            atoms.append(f"lex({s},{t})")
        else:
            atoms.append(f"lex({t},{s})")
        if are_siblings(a, b):
            if a[-1] < b[-1]:
                atoms.append(f"sib({s},{t})")
            else:
                atoms.append(f"sib({t},{s})")
    return QfType(len(nodes), tuple(sorted(atoms)))


@dataclass(frozen=True)
class ArrayIndex:
    """Rows x columns index where every row is a copy of one colored order.

    Cells (i, j) carry the convexly ordered equivalence structure: same-row
    cells are equivalent, rows are ordered by row number, and within a row
    the cells inherit the colored order.
    """

    rows: int
    row_order: ColoredOrder

    def __post_init__(self):
        if self.rows < 0:
            raise InputError("row count must be nonnegative")

    def cells(self) -> tuple[Cell, ...]:
        return tuple((i, j) for i in range(self.rows) for j in range(self.row_order.size))

    def contains(self, cell: Cell) -> bool:
        return (
            isinstance(cell, tuple) and len(cell) == 2
            and 0 <= cell[0] < self.rows and 0 <= cell[1] < self.row_order.size
        )

    def check_cell(self, cell: Cell) -> None:
        if not self.contains(cell):
            raise InputError(f"cell {cell!r} does not belong to this array")

    def color(self, cell: Cell) -> Color:
        self.check_cell(cell)
        return self.row_order.color(cell[1])

    def to_json(self) -> dict:
        return {"rows": self.rows, "row_order": self.row_order.to_json()}

    @staticmethod
    def from_json(data: Mapping) -> "ArrayIndex":
        return ArrayIndex(int(data["rows"]), ColoredOrder.from_json(data["row_order"]))


def qftp_array(arr: ArrayIndex, tup: Sequence[Cell]) -> QfType:
    """Type of a cell tuple: convex order, row equivalence, colors."""
    cells = [tuple(c) for c in tup]
    for c in cells:
        arr.check_cell(c)
    atoms = [f"{arr.color(c)}(x{i + 1})" for i, c in enumerate(cells)]
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            a, b = cells[i], cells[j]
            if a == b:
                atoms.append(f"x{i + 1}=x{j + 1}")
                continue
            if a < b:
                atoms.append(f"x{i + 1}<x{j + 1}")
            else:
                atoms.append(f"x{j + 1}<x{i + 1}")
            if a[0] == b[0]:
                atoms.append(f"E(x{i + 1},x{j + 1})")
    return QfType(len(cells), tuple(sorted(atoms)))


Index = Union[ColoredOrder, IndexTree, ArrayIndex]


def index_points(index: Index) -> tuple:
    """All index points in canonical (lexicographic) enumeration order."""
    if isinstance(index, ColoredOrder):
        return tuple(range(index.size))
    if isinstance(index, IndexTree):
        return index.nodes()
    if isinstance(index, ArrayIndex):
        return index.cells()
    raise InputError(f"not an index structure: {index!r}")


def index_qftp(index: Index, tup: Sequence) -> QfType:
    if isinstance(index, ColoredOrder):
        return qftp_order(index, tup)
    if isinstance(index, IndexTree):
        return qftp_tree(index, tup)
    if isinstance(index, ArrayIndex):
        return qftp_array(index, tup)
    raise InputError(f"not an index structure: {index!r}")


def realizations(index: Index, q: QfType, limit: int | None = None) -> list[tuple]:
    """Tuples of index points whose type equals q, in lexicographic order.

    Exhaustive when fewer than ``limit`` exist; a q over colors the index
    palette lacks simply has no realizations.
    """
    if q.arity < 1:
        raise InputError("realizations needs arity >= 1")
    points = index_points(index)
    out: list[tuple] = []
    for tup in itertools.product(points, repeat=q.arity):
        if index_qftp(index, tup) == q:
            out.append(tup)
            if limit is not None and len(out) >= limit:
                break
    return out
