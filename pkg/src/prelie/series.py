"""Truncated free pre-Lie algebra on labeled rooted trees.

Generators are plain string symbols of homological degree 0.  A series is a
finite rational combination of generator-labeled rooted trees plus a scalar
multiple of the unit (the vertex-free tree), truncated at a fixed vertex
count.  The grafting product, symmetric braces, circle product, exponential,
Magnus logarithm, group-like inversion, Lie bracket, BCH product and the
gauge action are provided as module-level functions.

The unit is one-sided:  1 * x = x,  while grafting the unit on the right
contributes nothing (x * 1 = 0 on the pure-unit part).  This convention is
pinned down by the identity  e^{r_lambda}(a) = a (o) e^lambda  exercised in
the test suite.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import calculus
from .errors import DomainError, InternalCheckError, ParseError, TruncationMismatch
from .trees import RootedTree, aut_order, enumerate_trees


class LabeledTree:
    """A rooted tree with generator labels, canonical under labeled isomorphism."""

    __slots__ = ("label", "children", "nvertices", "key", "_hash")

    def __init__(self, label: str, children=()):
        kids = tuple(sorted(children, key=lambda c: c.key))
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "nvertices", 1 + sum(c.nvertices for c in kids))
        object.__setattr__(
            self, "key", (self.nvertices, label, tuple(c.key for c in kids))
        )
        object.__setattr__(self, "_hash", hash(self.key))

    def __setattr__(self, name, value):
        raise AttributeError("LabeledTree is immutable")

    def __eq__(self, other):
        return isinstance(other, LabeledTree) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"LabeledTree.from_text({self.to_text()!r})"

    def shape(self) -> RootedTree:
        """Forget the labels."""
        return RootedTree(c.shape() for c in self.children)

    def relabel(self, label: str) -> "LabeledTree":
        """Every vertex relabeled by the same symbol."""
        return LabeledTree(label, (c.relabel(label) for c in self.children))

    def to_text(self) -> str:
        if not self.children:
            return f"({self.label})"
        return f"({self.label} " + " ".join(c.to_text() for c in self.children) + ")"

    @staticmethod
    def from_text(text: str) -> "LabeledTree":
        tree, end = _parse_tree(text, 0)
        if text[end:].strip():
            raise ParseError("trailing input after tree", f"column {end + 1}")
        if tree is None:
            raise ParseError("the empty tree '()' is not a LabeledTree", "column 1")
        return tree


def labeled_from_shape(shape: RootedTree, label: str) -> LabeledTree:
    """The rooted tree ``shape`` with every vertex labeled ``label``."""
    return LabeledTree(label, (labeled_from_shape(c, label) for c in shape.children))


def aut_order_labeled(t: LabeledTree) -> int:
    """Order of the label-preserving automorphism group."""
    kids = t.children
    result = 1
    i = 0
    while i < len(kids):
        j = i
        while j < len(kids) and kids[j] == kids[i]:
            j += 1
        mult = j - i
        result *= math.factorial(mult) * aut_order_labeled(kids[i]) ** mult
        i = j
    return result


class TreeSeries:
    """Finite rational combination of labeled trees, truncated in vertex count."""

    __slots__ = ("order", "unit", "terms")

    def __init__(self, order: int, unit=0, terms=None):
        if order < 1:
            raise DomainError(f"truncation order must be >= 1, got {order}")
        self.order = order
        self.unit = Fraction(unit)
        clean = {}
        if terms:
            for tree, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff and tree.nvertices <= order:
                    clean[tree] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(order: int) -> "TreeSeries":
        return TreeSeries(order)

    @staticmethod
    def one(order: int) -> "TreeSeries":
        return TreeSeries(order, unit=1)

    @staticmethod
    def generator(symbol: str, order: int) -> "TreeSeries":
        return TreeSeries(order, terms={LabeledTree(symbol): Fraction(1)})

    @staticmethod
    def from_tree(tree: LabeledTree, order: int, coeff=1) -> "TreeSeries":
        return TreeSeries(order, terms={tree: Fraction(coeff)})

    # -- protocol for the generic calculus ---------------------------------

    @property
    def max_weight(self) -> int:
        return self.order

    def unit_like(self) -> "TreeSeries":
        return TreeSeries.one(self.order)

    def zero_like(self) -> "TreeSeries":
        return TreeSeries.zero(self.order)

    def weight_component(self, n: int) -> "TreeSeries":
        if n == 0:
            return TreeSeries(self.order, unit=self.unit)
        return TreeSeries(
            self.order,
            terms={t: c for t, c in self.terms.items() if t.nvertices == n},
        )

    def is_zero(self) -> bool:
        return self.unit == 0 and not self.terms

    def star(self, other: "TreeSeries") -> "TreeSeries":
        return graft(self, other)

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, TreeSeries):
            raise TypeError(f"expected TreeSeries, got {type(other).__name__}")
        if self.order != other.order:
            raise TruncationMismatch(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        self._check_compatible(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, Fraction(0)) + c
        return TreeSeries(self.order, self.unit + other.unit, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return TreeSeries(
            self.order,
            self.unit * scalar,
            {t: c * scalar for t, c in self.terms.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, TreeSeries)
            and self.order == other.order
            and self.unit == other.unit
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.order, self.unit, frozenset(self.terms.items())))

    def __repr__(self):
        body = "; ".join(format_series(self).splitlines()) or "0"
        return f"<TreeSeries order={self.order}: {body}>"

    def coefficient(self, tree: LabeledTree) -> Fraction:
        return self.terms.get(tree, Fraction(0))

    def min_tree_weight(self):
        return min((t.nvertices for t in self.terms), default=None)


# -- grafting ----------------------------------------------------------------


def _graft_trees(s: LabeledTree, t: LabeledTree):
    """All ways to attach t's root as a new child of a vertex of s."""
    out = [LabeledTree(s.label, s.children + (t,))]
    for i, child in enumerate(s.children):
        for grafted in _graft_trees(child, t):
            out.append(
                LabeledTree(s.label, s.children[:i] + (grafted,) + s.children[i + 1 :])
            )
    return out


def graft(s: TreeSeries, t: TreeSeries) -> TreeSeries:
    """Pre-Lie grafting product, bilinear over trees.

    The unit grafts as a left unit only:  1 * x = x  while  sigma * 1 = 0
    for every tree sigma.
    """
    s._check_compatible(t)
    order = s.order
    result = t * s.unit  # 1 * x = x on the unit part of s
    terms: dict = {}
    for sigma, cs in s.terms.items():
        for tau, ct in t.terms.items():
            if sigma.nvertices + tau.nvertices > order:
                continue
            c = cs * ct
            for tree in _graft_trees(sigma, tau):
                terms[tree] = terms.get(tree, Fraction(0)) + c
    return result + TreeSeries(order, 0, terms)


def bracket(x: TreeSeries, y: TreeSeries) -> TreeSeries:
    """Lie bracket  [x, y] = x*y - y*x  (all generators sit in degree 0)."""
    return graft(x, y) - graft(y, x)


def brace(a: TreeSeries, args) -> TreeSeries:
    """Symmetric brace {a; b_1, ..., b_n} by the defining recursion."""
    return calculus.symmetric_brace(a, list(args))


# -- circle product ----------------------------------------------------------


def _require_grouplike(g: TreeSeries):
    if g.unit != 1:
        raise DomainError("right factor of the circle product must have unit part 1")


def circle(a: TreeSeries, g: TreeSeries) -> TreeSeries:
    """Circle product  a (o) g = sum_n {a; b, .., b} / n!  for g = 1 + b.

    Computed by attaching, at every vertex of every tree of ``a``
    independently, a multiset of trees of b weighted by prod c^m / m!;
    grouping the brace expansion by which vertex receives which arguments
    shows the two formulas agree (the expansion itself is kept available as
    ``calculus.circle_by_braces`` and cross-checked in the tests).
    """
    a._check_compatible(g)
    _require_grouplike(g)
    order = a.order
    b_terms = sorted(((t, c) for t, c in g.terms.items()), key=lambda tc: tc[0].key)

    max_budget = order - (a.min_tree_weight() or order)
    # multisets of b-terms with total weight <= max_budget, folded iteratively
    # (recursing per term would overflow on dense series)
    all_msets = [((), Fraction(1), 0)]
    for tree, coeff in b_terms:
        w = tree.nvertices
        if w > max_budget:
            continue
        extended = []
        for ms, c, used in all_msets:
            copies, factor = 1, coeff
            while used + copies * w <= max_budget:
                extended.append((ms + (tree,) * copies, c * factor, used + copies * w))
                copies += 1
                factor = factor * coeff / copies
        all_msets.extend(extended)
    msets_by_weight: list = [[] for _ in range(max_budget + 1)]
    for ms, c, used in all_msets:
        msets_by_weight[used].append((ms, c))

    dec_cache: dict = {}

    def decorate(tree, budget):
        # all (tree with multisets attached below its vertices, coeff, extra weight)
        key = (tree, budget)
        hit = dec_cache.get(key)
        if hit is not None:
            return hit

        def children_choices(idx, budget_left):
            if idx == len(tree.children):
                return [((), Fraction(1), 0)]
            out = []
            for ct, cc, cu in decorate(tree.children[idx], budget_left):
                for rest, rc, ru in children_choices(idx + 1, budget_left - cu):
                    out.append(((ct,) + rest, cc * rc, cu + ru))
            return out

        out = []
        for kids, kc, ku in children_choices(0, budget):
            for weight in range(0, budget - ku + 1):
                for attach, mc in msets_by_weight[weight]:
                    out.append(
                        (LabeledTree(tree.label, kids + attach), kc * mc, ku + weight)
                    )
        dec_cache[key] = out
        return out

    result = g * a.unit  # left linearity: the unit part of a contributes a.unit * g
    terms: dict = {}
    for sigma, cs in a.terms.items():
        for tree, coeff, _used in decorate(sigma, order - sigma.nvertices):
            terms[tree] = terms.get(tree, Fraction(0)) + cs * coeff
    return result + TreeSeries(order, 0, terms)


def circle_pointed(a: TreeSeries, g: TreeSeries, c: TreeSeries) -> TreeSeries:
    """One-argument-distinguished circle product sum_n {a; b,..,b, c} / n!."""
    a._check_compatible(g)
    a._check_compatible(c)
    _require_grouplike(g)
    b = g - g.unit_like()
    out = a.zero_like()
    args = [c]
    for n in range(0, a.max_weight + 1):
        term = calculus.symmetric_brace(a, args)
        out = out + term * Fraction(1, math.factorial(n))
        if b.is_zero():
            break
        args = [b] + args
    return out


# -- exponential, logarithm, group structure ---------------------------------


def exp(lam: TreeSeries) -> TreeSeries:
    """Pre-Lie exponential  1 + lam + lam^{*2}/2! + ...  (right-iterated powers)."""
    return calculus.exp_series(lam)


def magnus(a: TreeSeries) -> TreeSeries:
    """Pre-Lie Magnus expansion: the unique lam with exp(lam) = 1 + a."""
    return calculus.magnus_series(a)


def tree_monomial(shape: RootedTree, value: TreeSeries) -> TreeSeries:
    """Image of an unlabeled tree under the pre-Lie morphism sending the
    generator to ``value``: the root evaluates to {value; children...}."""
    return calculus.symmetric_brace(
        value, [tree_monomial(c, value) for c in shape.children]
    )


def grouplike_inverse(g: TreeSeries) -> TreeSeries:
    """Circle-product inverse of a group-like element g = 1 - mu.

    Computed by the closed tree sum  sum_t t(mu) / |Aut t|  and verified
    internally against the weight-by-weight solution of  x (o) g = 1.
    """
    _require_grouplike(g)
    mu = -(g - g.unit_like())
    closed = g.unit_like()
    for n in range(1, g.order + 1):
        for shape in enumerate_trees(n, max_vertices=g.order):
            closed = closed + tree_monomial(shape, mu) * Fraction(1, aut_order(shape))
    solved = calculus.circle_inverse(g, circle)
    if closed != solved:
        raise InternalCheckError(
            "group-like inverse: closed tree formula and equation solve disagree"
        )
    return closed


def bch(x: TreeSeries, y: TreeSeries) -> TreeSeries:
    """Baker-Campbell-Hausdorff product  log(exp(x) (o) exp(y))."""
    return magnus(circle(exp(x), exp(y)) - x.unit_like())


def gauge_act(lam: TreeSeries, alpha: TreeSeries) -> TreeSeries:
    """Gauge action  (exp(lam) * alpha) (o) exp(-lam)  =  e^{ad_lam}(alpha)."""
    return circle(graft(exp(lam), alpha), exp(-lam))


def eval_tree(tree: LabeledTree, values, brace_fn=None):
    """Evaluate a labeled tree monomial in any pre-Lie target.

    ``values`` maps generator symbols to target elements; a root r with child
    subtrees s_1..s_k evaluates to {values[r]; eval(s_1), .., eval(s_k)}.
    The default brace implementation is the generic recursion over ``.star``.
    """
    if brace_fn is None:
        brace_fn = calculus.symmetric_brace
    try:
        root = values[tree.label]
    except KeyError:
        raise KeyError(f"generator {tree.label!r} is not bound in the context") from None
    return brace_fn(root, [eval_tree(c, values, brace_fn) for c in tree.children])


# -- text format --------------------------------------------------------------


def _parse_tree(text: str, pos: int):
    """Parse one parenthesized tree starting at pos; returns (tree|None, end).

    ``()`` parses to None (the unit marker).
    """
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    if pos >= n or text[pos] != "(":
        raise ParseError("expected '('", f"column {pos + 1}")
    pos += 1
    while pos < n and text[pos].isspace():
        pos += 1
    if pos < n and text[pos] == ")":
        return None, pos + 1
    start = pos
    while pos < n and not text[pos].isspace() and text[pos] not in "()":
        pos += 1
    label = text[start:pos]
    if not label:
        raise ParseError("expected a generator symbol", f"column {pos + 1}")
    children = []
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            raise ParseError("unterminated tree", f"column {pos + 1}")
        if text[pos] == ")":
            return LabeledTree(label, children), pos + 1
        child, pos = _parse_tree(text, pos)
        if child is None:
            raise ParseError("the unit '()' cannot appear as a subtree", f"column {pos}")
        children.append(child)


def parse_series(text: str, order: int) -> TreeSeries:
    """Parse the one-term-per-line format ``<rational> <tree>``.

    The unit term is written ``1 ()``.  Children may appear in any order;
    trees are canonicalized.  Blank lines and ``#`` comments are skipped.
    """
    unit = Fraction(0)
    terms: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 1)
        if len(fields) != 2:
            raise ParseError("expected '<rational> <tree>'", f"line {lineno}")
        try:
            coeff = Fraction(fields[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(
                f"bad rational coefficient {fields[0]!r}", f"line {lineno}"
            ) from None
        try:
            tree, end = _parse_tree(fields[1], 0)
            if fields[1][end:].strip():
                raise ParseError("trailing input after tree", f"column {end + 1}")
        except ParseError as exc:
            raise ParseError(str(exc), f"line {lineno}") from None
        if tree is None:
            unit += coeff
        else:
            if tree.nvertices > order:
                raise ParseError(
                    f"tree has {tree.nvertices} vertices, above truncation {order}",
                    f"line {lineno}",
                )
            terms[tree] = terms.get(tree, Fraction(0)) + coeff
    return TreeSeries(order, unit, terms)


def format_series(s: TreeSeries) -> str:
    """Inverse of :func:`parse_series`; terms sorted canonically."""
    lines = []
    if s.unit:
        lines.append(f"{s.unit} ()")
    for tree in sorted(s.terms, key=lambda t: t.key):
        lines.append(f"{s.terms[tree]} {tree.to_text()}")
    return "\n".join(lines)
