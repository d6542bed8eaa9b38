"""Index structures: orders, trees, arrays, and their canonical types."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeprop.errors import InputError
from treeprop.index_structures import (
    ArrayIndex,
    ColoredOrder,
    IndexTree,
    QfType,
    chain_type,
    meet,
    parse_qtype,
    plain_order,
    qftp_array,
    qftp_order,
    qftp_tree,
    realizations,
    render_qtype,
    standard_c,
)

RGRG = standard_c(4, ["R", "G"])


# ---------------------------------------------------------------------------
# independent oracles: direct partial-isomorphism checks

def order_iso(order: ColoredOrder, t1, t2) -> bool:
    if len(t1) != len(t2):
        return False
    for i in range(len(t1)):
        if order.coloring[t1[i]] != order.coloring[t2[i]]:
            return False
        for j in range(i + 1, len(t1)):
            if (t1[i] == t1[j]) != (t2[i] == t2[j]):
                return False
            if (t1[i] < t1[j]) != (t2[i] < t2[j]):
                return False
    return True


def _prefix(a, b):
    return len(a) <= len(b) and b[: len(a)] == a


def _siblings(a, b):
    return a != b and len(a) == len(b) and len(a) >= 1 and a[:-1] == b[:-1]


def tree_iso(tree: IndexTree, t1, t2) -> bool:
    """Induced correspondence on meet closures preserves every relation."""
    c1 = list(t1) + [meet(tree, a, b) for a, b in itertools.combinations(t1, 2)]
    c2 = list(t2) + [meet(tree, a, b) for a, b in itertools.combinations(t2, 2)]
    for a, b in zip(c1, c2):
        if bool(a) != bool(b):
            return False
        if a and tree.branching.coloring[a[-1]] != tree.branching.coloring[b[-1]]:
            return False
        if tree.language_mode == "LsI" and len(a) != len(b):
            return False
    for (a, a2), (b, b2) in zip(itertools.combinations(c1, 2),
                                itertools.combinations(c2, 2)):
        if (a == a2) != (b == b2):
            return False
        if _prefix(a, a2) != _prefix(b, b2) or _prefix(a2, a) != _prefix(b2, b):
            return False
        if (a < a2) != (b < b2):
            return False
        if _siblings(a, a2) != _siblings(b, b2):
            return False
        if _siblings(a, a2) and (a[-1] < a2[-1]) != (b[-1] < b2[-1]):
            return False
    return True


# ---------------------------------------------------------------------------
# standard_c

def test_standard_c_alternates_two_colors():
    assert RGRG.coloring == ("R", "G", "R", "G")
    assert RGRG.positions_of("R") == (0, 2)


def test_standard_c_empty():
    assert standard_c(0, ["R", "G"]).size == 0


def test_standard_c_three_color_cycle():
    # independently: position i gets palette[i mod 3]
    order = standard_c(5, ["R", "G", "B"])
    assert order.coloring == tuple(["R", "G", "B"][i % 3] for i in range(5))
    assert order.coloring == ("R", "G", "B", "R", "G")


def test_standard_c_explicit_requires_total_coloring():
    with pytest.raises(InputError):
        standard_c(3, ["R", "G"], "explicit", ["R", "G"])
    with pytest.raises(InputError):
        standard_c(2, ["R", "G"], "explicit", ["R", "B"])


# ---------------------------------------------------------------------------
# qftp on orders

def test_qftp_order_red_green_chain():
    q = qftp_order(RGRG, (0, 1))
    assert q == chain_type(["R", "G"])
    assert render_qtype(q) == "R<G"


def test_qftp_order_equal_entries():
    q = qftp_order(RGRG, (2, 2))
    assert "x1=x2" in q.atoms
    assert "R(x1)" in q.atoms and "R(x2)" in q.atoms


def test_qftp_order_reversed_pair():
    q = qftp_order(RGRG, (3, 0))
    assert "x2<x1" in q.atoms
    assert "G(x1)" in q.atoms and "R(x2)" in q.atoms


def test_qftp_order_out_of_range():
    with pytest.raises(InputError):
        qftp_order(RGRG, (0, 4))


def test_qftp_order_matches_partial_iso_smoke():
    order = standard_c(4, ["R", "G"])
    tuples = list(itertools.product(range(4), repeat=2))
    for t1 in tuples:
        for t2 in tuples:
            assert (qftp_order(order, t1) == qftp_order(order, t2)) == order_iso(order, t1, t2)


@given(st.integers(2, 4), st.permutations(["R", "G", "B"]))
def test_qftp_color_permutation_equivariance(n, new_names):
    order = standard_c(n, ["R", "G", "B"])
    rename = dict(zip(["R", "G", "B"], new_names))
    renamed = ColoredOrder(tuple(new_names), tuple(rename[c] for c in order.coloring))
    for tup in itertools.product(range(n), repeat=2):
        atoms = set()
        for atom in qftp_order(order, tup).atoms:
            for old, new in rename.items():
                if atom.startswith(old + "("):
                    atom = new + atom[len(old):]
                    break
            atoms.add(atom)
        assert atoms == set(qftp_order(renamed, tup).atoms)


# ---------------------------------------------------------------------------
# trees

def test_meet_examples():
    tree = IndexTree(3, standard_c(4, ["R", "G"]))
    assert meet(tree, (0, 1), (0, 2)) == (0,)
    assert meet(tree, (), (1, 0)) == ()
    assert meet(tree, (1, 0, 2), (1, 0, 3)) == (1, 0)


def test_meet_laws_small_trees():
    for height, palette in ((4, ["R", "G"]), (3, ["R"])):
        tree = IndexTree(height, standard_c(2, palette))
        nodes = tree.nodes()
        for a, b in itertools.product(nodes, repeat=2):
            assert meet(tree, a, a) == a
            assert meet(tree, a, b) == meet(tree, b, a)
        for a, b, c in itertools.product(nodes, repeat=3):
            assert meet(tree, a, meet(tree, b, c)) == meet(tree, meet(tree, a, b), c)


def test_qftp_tree_identity():
    tree = IndexTree(2, RGRG)
    q = qftp_tree(tree, ((0, 1), (0, 1)))
    assert "x1=x2" in q.atoms


def test_qftp_tree_sibling_pairs_same_level_equal_types():
    # parents (0,) and (2,) share a color, so the meet closures correspond
    tree = IndexTree(2, RGRG)
    t1 = ((0, 0), (0, 1))
    t2 = ((2, 0), (2, 1))
    assert tree_iso(tree, t1, t2)
    assert qftp_tree(tree, t1) == qftp_tree(tree, t2)
    # parents of different colors break the correspondence
    t3 = ((1, 0), (1, 1))
    assert not tree_iso(tree, t1, t3)
    assert qftp_tree(tree, t1) != qftp_tree(tree, t3)


def test_qftp_tree_lsi_example():
    # x1=(0), x2=(1,0): incomparable, x1 lex-first, levels 1 < 2, meet = root
    tree = IndexTree(2, RGRG, "LsI")
    q = qftp_tree(tree, ((0,), (1, 0)))
    atoms = set(q.atoms)
    assert "lex(x1,x2)" in atoms
    assert "pre(x1,x2)" not in atoms and "pre(x2,x1)" not in atoms
    assert "P1(x1)" in atoms and "P2(x2)" in atoms  # levels compare as 1 < 2
    assert "P0(x1^x2)" in atoms  # the meet is the root
    assert "pre(x1^x2,x1)" in atoms and "pre(x1^x2,x2)" in atoms


def test_qftp_tree_l0i_drops_levels():
    tree = IndexTree(2, RGRG, "L0I")
    q = qftp_tree(tree, ((0,), (1, 0)))
    assert not any(atom.startswith("P") for atom in q.atoms)


def test_qftp_tree_levels_distinguish_in_lsi_only():
    order = standard_c(2, ["R"])
    lsi = IndexTree(2, order, "LsI")
    l0i = IndexTree(2, order, "L0I")
    assert qftp_tree(lsi, ((0,),)) != qftp_tree(lsi, ((0, 0),))
    assert qftp_tree(l0i, ((0,),)) == qftp_tree(l0i, ((0, 0),))


def test_qftp_tree_matches_partial_iso_exhaustive_small():
    tree = IndexTree(2, standard_c(2, ["R", "G"]))
    nodes = tree.nodes()
    pairs = list(itertools.product(nodes, repeat=2))
    for t1 in pairs:
        for t2 in pairs:
            assert (qftp_tree(tree, t1) == qftp_tree(tree, t2)) == tree_iso(tree, t1, t2)


def test_qftp_tree_foreign_node():
    tree = IndexTree(1, RGRG)
    with pytest.raises(InputError):
        qftp_tree(tree, ((0, 1),))


# ---------------------------------------------------------------------------
# arrays

def test_qftp_array_row_equivalence():
    arr = ArrayIndex(2, RGRG)
    q = qftp_array(arr, ((0, 0), (0, 3), (1, 1)))
    atoms = set(q.atoms)
    assert "E(x1,x2)" in atoms and "x1<x2" in atoms
    assert "E(x1,x3)" not in atoms and "x2<x3" in atoms
    assert "R(x1)" in atoms and "G(x2)" in atoms and "G(x3)" in atoms


# ---------------------------------------------------------------------------
# realizations

def test_realizations_red_green_pairs():
    # independent enumeration: increasing pairs with colors (R, G)
    expected = [
        (i, j)
        for i in range(4) for j in range(4)
        if i < j and RGRG.coloring[i] == "R" and RGRG.coloring[j] == "G"
    ]
    assert expected == [(0, 1), (0, 3), (2, 3)]
    assert realizations(RGRG, chain_type(["R", "G"])) == expected


def test_realizations_red_red():
    assert realizations(RGRG, chain_type(["R", "R"])) == [(0, 2)]


def test_realizations_absent_color_is_empty():
    q = QfType(2, chain_type(["B", "B"]).atoms)
    assert realizations(RGRG, q) == []


def test_realizations_limit_and_recheck():
    q = chain_type(["R", "G"])
    got = realizations(RGRG, q, limit=2)
    assert got == [(0, 1), (0, 3)]
    for tup in realizations(RGRG, q):
        assert qftp_order(RGRG, tup) == q


def test_realizations_on_tree_and_array():
    tree = IndexTree(1, standard_c(2, ["R", "G"]))
    single_red = qftp_tree(tree, ((0,),))
    assert realizations(tree, single_red) == [((0,),)]
    arr = ArrayIndex(2, standard_c(2, ["R", "G"]))
    cell_type = qftp_array(arr, ((0, 0),))
    assert realizations(arr, cell_type) == [((0, 0),), ((1, 0),)]


# ---------------------------------------------------------------------------
# q syntax

def test_parse_and_render_round_trip():
    for text in ("R<G", "R<R<G", "R=R<G", "G<R"):
        assert render_qtype(parse_qtype(text)) == text


def test_parse_qtype_matches_qftp():
    assert parse_qtype("R<G") == qftp_order(RGRG, (0, 1))
    assert parse_qtype("R=R") == qftp_order(RGRG, (0, 0))


def test_parse_qtype_rejects_mixed_equality():
    with pytest.raises(InputError):
        parse_qtype("R=G")


def test_json_round_trips():
    assert ColoredOrder.from_json(RGRG.to_json()) == RGRG
    tree = IndexTree(2, RGRG, "L0I")
    assert IndexTree.from_json(tree.to_json()) == tree
    arr = ArrayIndex(3, RGRG)
    assert ArrayIndex.from_json(arr.to_json()) == arr
    q = chain_type(["R", "G"])
    assert QfType.from_json(q.to_json()) == q


def test_plain_order_single_type_per_arity():
    order = plain_order(4)
    types = {qftp_order(order, t) for t in itertools.combinations(range(4), 2)}
    assert len(types) == 1
