"""Unlabeled rooted trees and forests with exact combinatorics.

Trees are stored in a canonical form (children sorted by a recursive key),
so isomorphic trees compare equal and hash equal.  On top of the raw
enumeration the module computes automorphism group orders, levelizations
(placements of the vertices on distinct horizontal levels with every child
strictly above its parent, counted up to isomorphism), Connes-Moscovici
weights, and the rational weight of a levelization used by the tree-sum
formulas of the series modules.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import BoundsError, ValidationError

DEFAULT_MAX_VERTICES = 10


class RootedTree:
    """An unlabeled rooted tree: a canonically ordered multiset of subtrees.

    The empty tuple of children is the single-vertex tree.  Trees compare by
    ``(vertex count, ordered child keys)``; two trees are isomorphic iff they
    are equal.
    """

    __slots__ = ("children", "nvertices", "key", "_hash")

    def __init__(self, children=()):
        kids = tuple(sorted(children, key=lambda c: c.key))
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "nvertices", 1 + sum(c.nvertices for c in kids))
        object.__setattr__(self, "key", (self.nvertices, tuple(c.key for c in kids)))
        object.__setattr__(self, "_hash", hash(self.key))

    def __setattr__(self, name, value):
        raise AttributeError("RootedTree is immutable")

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"RootedTree.from_text({self.to_text()!r})"

    @staticmethod
    def leaf() -> "RootedTree":
        return _LEAF

    def to_text(self) -> str:
        """Canonical text form, e.g. ``(* (*) (* (*)))`` for unlabeled trees."""
        if not self.children:
            return "(*)"
        return "(* " + " ".join(c.to_text() for c in self.children) + ")"

    @staticmethod
    def from_text(text: str) -> "RootedTree":
        from .series import LabeledTree  # local import: parser lives with labels

        return LabeledTree.from_text(text).shape()


_LEAF = RootedTree()


class Forest:
    """A finite multiset of rooted trees in canonical order.  May be empty."""

    __slots__ = ("trees", "nvertices", "key", "_hash")

    def __init__(self, trees=()):
        ts = tuple(sorted(trees, key=lambda t: t.key))
        object.__setattr__(self, "trees", ts)
        object.__setattr__(self, "nvertices", sum(t.nvertices for t in ts))
        object.__setattr__(self, "key", tuple(t.key for t in ts))
        object.__setattr__(self, "_hash", hash(self.key))

    def __setattr__(self, name, value):
        raise AttributeError("Forest is immutable")

    def __eq__(self, other):
        return isinstance(other, Forest) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.trees)

    def __repr__(self):
        return "Forest([" + ", ".join(t.to_text() for t in self.trees) + "])"


class Levelization:
    """One placement of a forest's vertices on distinct levels, topmost first.

    ``order[i]`` is the vertex id (see :func:`forest_structure`) placed on
    level ``i + 1``.  Every child appears strictly before its parent.
    """

    __slots__ = ("forest", "order")

    def __init__(self, forest: Forest, order):
        self.forest = forest
        self.order = tuple(order)

    def __eq__(self, other):
        return (
            isinstance(other, Levelization)
            and self.forest == other.forest
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.forest, self.order))

    def __repr__(self):
        return f"Levelization({self.forest!r}, {self.order})"


def _as_forest(f) -> Forest:
    if isinstance(f, RootedTree):
        return Forest((f,))
    if isinstance(f, Forest):
        return f
    raise TypeError(f"expected RootedTree or Forest, got {type(f).__name__}")


@lru_cache(maxsize=None)
def _trees(n: int):
    if n == 1:
        return (_LEAF,)
    return tuple(sorted((RootedTree(f) for f in _forest_tuples(n - 1)), key=lambda t: t.key))


@lru_cache(maxsize=None)
def _forest_tuples_bounded(m: int, size_bound: int, idx_bound: int):
    # Nonincreasing sequences of trees with total size m, first tree bounded
    # by trees(size_bound)[idx_bound].
    if m == 0:
        return ((),)
    out = []
    for size in range(min(m, size_bound), 0, -1):
        ts = _trees(size)
        start = idx_bound if size == size_bound else len(ts) - 1
        for i in range(start, -1, -1):
            for rest in _forest_tuples_bounded(m - size, size, i):
                out.append((ts[i],) + rest)
    return tuple(out)


def _forest_tuples(m: int):
    return _forest_tuples_bounded(m, m, len(_trees(m)) - 1)


def enumerate_trees(n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> list:
    """All isomorphism classes of rooted trees with exactly ``n`` vertices.

    Deterministic order (sorted by canonical key), no duplicates.
    """
    if not 1 <= n <= max_vertices:
        raise BoundsError(f"vertex count must be in 1..{max_vertices}, got {n}")
    return list(_trees(n))


def enumerate_forests(n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> list:
    """All nonempty forests with exactly ``n`` vertices, deterministic order."""
    if not 1 <= n <= max_vertices:
        raise BoundsError(f"vertex count must be in 1..{max_vertices}, got {n}")
    return [Forest(f) for f in _forest_tuples(n)]


def aut_order(f) -> int:
    """Order of the automorphism group of a tree or forest.

    For a forest this includes the factor permuting identical trees, so
    ``aut_order(Forest([t, t])) == 2 * aut_order(t) ** 2``.
    """
    forest = _as_forest(f)
    return _aut_of_children(forest.trees)


def _aut_of_children(trees) -> int:
    result = 1
    i = 0
    while i < len(trees):
        j = i
        while j < len(trees) and trees[j] == trees[i]:
            j += 1
        mult = j - i
        result *= math.factorial(mult) * _aut_of_children(trees[i].children) ** mult
        i = j
    return result


def forest_structure(f):
    """Vertex ids for a forest: ``(parents, children)`` arrays.

    Ids are assigned by visiting the trees in canonical order, each tree in
    preorder with children in canonical order.  Roots have parent ``None``.
    """
    forest = _as_forest(f)
    parents: list = []
    children: list = []

    def visit(tree, parent):
        vid = len(parents)
        parents.append(parent)
        children.append([])
        if parent is not None:
            children[parent].append(vid)
        for c in tree.children:
            visit(c, vid)

    for t in forest.trees:
        visit(t, None)
    return parents, children


def _linear_extensions(parents, children):
    n = len(parents)
    placed = [False] * n
    waiting = [len(children[v]) for v in range(n)]  # unplaced children per vertex
    order: list = []

    def rec():
        if len(order) == n:
            yield tuple(order)
            return
        for v in range(n):
            if not placed[v] and waiting[v] == 0:
                placed[v] = True
                order.append(v)
                p = parents[v]
                if p is not None:
                    waiting[p] -= 1
                yield from rec()
                if p is not None:
                    waiting[p] += 1
                order.pop()
                placed[v] = False

    yield from rec()


def _picture_key(order, parents, children):
    level = {v: i for i, v in enumerate(order)}

    def enc(v):
        return (level[v], tuple(sorted(enc(c) for c in children[v])))

    return tuple(sorted(enc(v) for v in range(len(parents)) if parents[v] is None))


def levelizations(f) -> list:
    """All levelizations of a forest, counted up to isomorphism.

    Two placements that differ by an automorphism of the forest are the same
    levelization; one canonical representative of each is returned.  The
    empty forest has no levelizations.
    """
    forest = _as_forest(f)
    if forest.nvertices == 0:
        return []
    parents, children = forest_structure(forest)
    seen = set()
    out = []
    for order in _linear_extensions(parents, children):
        key = _picture_key(order, parents, children)
        if key not in seen:
            seen.add(key)
            out.append(Levelization(forest, order))
    return out


def cm_weight(t: RootedTree) -> int:
    """Connes-Moscovici weight: the number of levelizations of the tree.

    Computed in closed form as (number of linear extensions) / |Aut t|,
    where the extension count is nvertices! divided by the product of all
    subtree sizes.
    """
    if not isinstance(t, RootedTree):
        raise TypeError("cm_weight expects a RootedTree")
    extensions, sizes = math.factorial(t.nvertices), _subtree_size_product(t)
    le_count, rem = divmod(extensions, sizes)
    assert rem == 0
    n_t, rem = divmod(le_count, aut_order(t))
    assert rem == 0
    return n_t


def _subtree_size_product(t: RootedTree) -> int:
    return t.nvertices * math.prod(_subtree_size_product(c) for c in t.children)


def level_weight(lev: Levelization) -> Fraction:
    """Exact rational weight of a levelization.

    Every root grows a virtual stem down to a ground line below the lowest
    level.  For each gap (between consecutive levels, and between the lowest
    level and ground) count the strands crossing it -- an edge spans from the
    child's level down to the parent's level, a stem from its root's level to
    ground -- and multiply one over the strand count over all gaps.
    """
    forest = _as_forest(lev.forest)
    parents, _children = forest_structure(forest)
    n = len(parents)
    if sorted(lev.order) != list(range(n)):
        raise ValidationError("levelization order is not a permutation of the vertices")
    level = {v: i + 1 for i, v in enumerate(lev.order)}
    for v, p in enumerate(parents):
        if p is not None and level[v] >= level[p]:
            raise ValidationError(f"vertex {v} is not above its parent {p}")
    weight = Fraction(1)
    for gap in range(1, n + 1):
        strands = 0
        for v, p in enumerate(parents):
            if p is None:
                if level[v] <= gap:
                    strands += 1
            elif level[v] <= gap < level[p]:
                strands += 1
        weight /= strands
    return weight
