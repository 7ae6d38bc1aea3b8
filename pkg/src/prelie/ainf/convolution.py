"""Arity-graded convolution pre-Lie algebra of multilinear operations.

Elements collect one multilinear map per arity on a graded rational space;
the weight of the arity-n component is n - 1.  Everything is stored in
desuspended form: a homotopy-associative structure is a family of degree -1
operations whose square vanishes, a morphism is a family of degree-0
operations.  All signs reduce to one Koszul rule, applied when a map passes
graded inputs inside a partial composition or a tensor of maps.

``star`` is the insertion (pre-Lie) product; ``circle`` is the associative
composition product defined on group-like elements (and extended verbatim to
arbitrary operands).  Maurer-Cartan checking, the infinity-morphism
equation, and the gauge action are built from the two products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .. import calculus
from ..errors import BoundsError, DomainError, ShapeError
from ..linalg import GradedMap, GradedSpace

DEFAULT_TRUNCATION_ARITY = 5


class MultiOp:
    """Sparse multilinear map  source^{tensor n} -> target  of fixed degree.

    Entries are keyed by ``(inputs, output)`` where ``inputs`` is a tuple of
    n basis labels ``(degree, index)`` of the source and ``output`` one basis
    label of the target.  Stored entries always satisfy
    ``output degree == sum of input degrees + self.degree``.
    """

    __slots__ = ("source", "target", "arity", "degree", "entries")

    def __init__(self, source, target, arity, degree, entries=None):
        if arity < 1:
            raise BoundsError(f"arity must be >= 1, got {arity}")
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.entries = {}
        if entries:
            for (ins, out), coeff in entries.items():
                self[ins, out] = self.entries.get((ins, out), 0) + coeff

    def __setitem__(self, key, coeff):
        ins, out = key
        ins = tuple(ins)
        coeff = Fraction(coeff)
        if len(ins) != self.arity:
            raise ShapeError(f"expected {self.arity} inputs, got {len(ins)}")
        for b in ins:
            if not self.source.has_basis(b):
                raise ShapeError(f"no basis vector {b} in the source")
        if not self.target.has_basis(out):
            raise ShapeError(f"no basis vector {out} in the target")
        if out[0] != sum(b[0] for b in ins) + self.degree:
            raise ShapeError(
                f"entry {ins} -> {out} violates the degree-{self.degree} rule"
            )
        if coeff:
            self.entries[ins, out] = coeff
        else:
            self.entries.pop((ins, out), None)

    @staticmethod
    def identity(space) -> "MultiOp":
        out = MultiOp(space, space, 1, 0)
        for b in space.basis():
            out.entries[(b,), b] = Fraction(1)
        return out

    @staticmethod
    def from_graded_map(gmap: GradedMap) -> "MultiOp":
        out = MultiOp(gmap.source, gmap.target, 1, gmap.degree)
        for (sdeg, sidx, tidx), coeff in gmap.entries.items():
            out.entries[((sdeg, sidx),), (sdeg + gmap.degree, tidx)] = coeff
        return out

    def _check_same_shape(self, other):
        if (
            self.source != other.source
            or self.target != other.target
            or self.arity != other.arity
            or self.degree != other.degree
        ):
            raise ShapeError("multilinear maps have different shapes")

    def __add__(self, other):
        self._check_same_shape(other)
        out = MultiOp(self.source, self.target, self.arity, self.degree, dict(self.entries))
        for key, coeff in other.entries.items():
            val = out.entries.get(key, Fraction(0)) + coeff
            if val:
                out.entries[key] = val
            else:
                out.entries.pop(key, None)
        return out

    def __sub__(self, other):
        return self + (other * -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = MultiOp(self.source, self.target, self.arity, self.degree)
        if scalar:
            out.entries.update({k: v * scalar for k, v in self.entries.items()})
        return out

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, MultiOp)
            and self.source == other.source
            and self.target == other.target
            and self.arity == other.arity
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def __repr__(self):
        return (
            f"<MultiOp arity={self.arity} degree={self.degree} "
            f"#entries={len(self.entries)}>"
        )


def compose_at(f: MultiOp, g: MultiOp, j: int) -> MultiOp:
    """Partial composition: plug g into the j-th input slot of f (1-based).

    Koszul rule: moving the degree-|g| map past the first j-1 inputs costs
    (-1)^(|g| * (sum of their degrees)).
    """
    if not 1 <= j <= f.arity:
        raise BoundsError(f"insertion position {j} not in 1..{f.arity}")
    if g.target != f.source:
        raise ShapeError("inner operation does not land in the outer source")
    out = MultiOp(
        g.source if f.arity == 1 else f.source,
        f.target,
        f.arity + g.arity - 1,
        f.degree + g.degree,
    )
    if f.arity > 1 and g.source != f.source:
        raise ShapeError("mixed-space insertion needs an arity-1 outer map")
    by_output: dict = {}
    for (gins, gout), gc in g.entries.items():
        by_output.setdefault(gout, []).append((gins, gc))
    odd = g.degree % 2
    for (fins, fout), fc in f.entries.items():
        slot = fins[j - 1]
        matches = by_output.get(slot)
        if not matches:
            continue
        sign = -1 if odd and sum(b[0] for b in fins[: j - 1]) % 2 else 1
        for gins, gc in matches:
            key = (fins[: j - 1] + gins + fins[j:], fout)
            val = out.entries.get(key, Fraction(0)) + sign * fc * gc
            if val:
                out.entries[key] = val
            else:
                out.entries.pop(key, None)
    return out


def _compose_tensor(f: MultiOp, factors) -> MultiOp:
    """Full composite  f o (g_1 x ... x g_k)  with Koszul signs.

    ``factors`` has length f.arity; factor m picks up the sign
    (-1)^(|g_m| * (sum of raw input degrees of the blocks before it)).
    """
    if len(factors) != f.arity:
        raise ShapeError("need one factor per input slot")
    source = factors[0].source
    for g in factors:
        if g.source != source:
            raise ShapeError("tensor factors start on different spaces")
        if g.target != f.source:
            raise ShapeError("tensor factors do not land in the outer source")
    out = MultiOp(
        source,
        f.target,
        sum(g.arity for g in factors),
        f.degree + sum(g.degree for g in factors),
    )
    by_output = []
    for g in factors:
        table: dict = {}
        for (gins, gout), gc in g.entries.items():
            table.setdefault(gout, []).append((gins, gc))
        by_output.append(table)

    def expand(slot, ins_acc, coeff, parity):
        if slot == f.arity:
            key = (ins_acc, current_out)
            val = out.entries.get(key, Fraction(0)) + coeff
            if val:
                out.entries[key] = val
            else:
                out.entries.pop(key, None)
            return
        for gins, gc in by_output[slot].get(current_ins[slot], ()):
            sign = -1 if (factors[slot].degree % 2) and parity % 2 else 1
            expand(
                slot + 1,
                ins_acc + gins,
                coeff * gc * sign,
                parity + sum(b[0] for b in gins),
            )

    for (fins, fout), fc in f.entries.items():
        current_ins = fins
        current_out = fout
        expand(0, (), fc, 0)
    return out


class ConvElement:
    """Series of multilinear operations, one per arity, of a common degree.

    ``kind`` is "structure" for degree -1 and "morphism" for degree 0; other
    degrees occur transiently (a homotopy viewed as an element has degree 1).
    """

    __slots__ = ("source", "target", "truncation", "degree", "components")

    def __init__(self, source, target, truncation, degree, components=None):
        if truncation < 1:
            raise BoundsError("truncation arity must be >= 1")
        self.source = source
        self.target = target
        self.truncation = truncation
        self.degree = degree
        self.components = {}
        if components:
            for arity, op in components.items():
                self._insert(arity, op)

    def _insert(self, arity: int, op: MultiOp):
        if not 1 <= arity <= self.truncation:
            return
        if op.arity != arity or op.degree != self.degree:
            raise ShapeError("component does not match the element's arity/degree")
        if op.source != self.source or op.target != self.target:
            raise ShapeError("component does not match the element's spaces")
        if not op.is_zero():
            self.components[arity] = op

    @property
    def kind(self) -> str:
        return {-1: "structure", 0: "morphism"}.get(self.degree, f"degree {self.degree}")

    def component(self, arity: int) -> MultiOp:
        got = self.components.get(arity)
        if got is not None:
            return got
        return MultiOp(self.source, self.target, arity, self.degree)

    # -- protocol for the generic calculus ---------------------------------

    @property
    def max_weight(self) -> int:
        return self.truncation - 1

    def unit_like(self) -> "ConvElement":
        if self.source != self.target:
            raise DomainError("only endomorphism-type elements have a unit")
        return unit_element(self.source, self.truncation)

    def zero_like(self) -> "ConvElement":
        return ConvElement(self.source, self.target, self.truncation, self.degree)

    def weight_component(self, n: int) -> "ConvElement":
        out = self.zero_like()
        if n + 1 in self.components:
            out.components[n + 1] = self.components[n + 1]
        return out

    def is_zero(self) -> bool:
        return not self.components

    def star(self, other: "ConvElement") -> "ConvElement":
        return star(self, other)

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, ConvElement):
            raise TypeError(f"expected ConvElement, got {type(other).__name__}")
        if self.source != other.source or self.target != other.target:
            raise ShapeError("elements live on different spaces")
        if self.truncation != other.truncation:
            raise ShapeError("elements have different truncation arities")
        if self.degree != other.degree:
            raise ShapeError(
                f"cannot combine degree {self.degree} with degree {other.degree}"
            )

    def __add__(self, other):
        self._check_compatible(other)
        out = ConvElement(
            self.source, self.target, self.truncation, self.degree, dict(self.components)
        )
        for arity, op in other.components.items():
            total = out.component(arity) + op
            if total.is_zero():
                out.components.pop(arity, None)
            else:
                out.components[arity] = total
        return out

    def __sub__(self, other):
        return self + (other * -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = self.zero_like()
        if scalar:
            out.components = {a: op * scalar for a, op in self.components.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, ConvElement)
            and self.source == other.source
            and self.target == other.target
            and self.truncation == other.truncation
            and self.degree == other.degree
            and self.components == other.components
        )

    def __repr__(self):
        return (
            f"<ConvElement {self.kind} truncation={self.truncation} "
            f"arities={sorted(self.components)}>"
        )


def unit_element(space: GradedSpace, truncation: int) -> ConvElement:
    """The two-sided circle unit / left star unit: identity at arity 1."""
    return ConvElement(space, space, truncation, 0, {1: MultiOp.identity(space)})


def element_from_map(gmap: GradedMap, truncation: int) -> ConvElement:
    """View a graded linear map as the arity-1 convolution element."""
    return ConvElement(
        gmap.source,
        gmap.target,
        truncation,
        gmap.degree,
        {1: MultiOp.from_graded_map(gmap)},
    )


def star(f: ConvElement, g: ConvElement) -> ConvElement:
    """Insertion product  (f * g)_n = sum over slots of f_k o_j g_l.

    Right-symmetric associator (pre-Lie); the unit is a left unit only.
    ``g`` must be an endomorphism-type element of f's source.
    """
    if not isinstance(g, ConvElement):
        raise TypeError(f"expected ConvElement, got {type(g).__name__}")
    if g.source != g.target or g.target != f.source:
        raise ShapeError("star inserts an endomorphism element of f's source")
    if f.truncation != g.truncation:
        raise ShapeError("elements have different truncation arities")
    out = ConvElement(f.source, f.target, f.truncation, f.degree + g.degree)
    for k, fk in f.components.items():
        for l, gl in g.components.items():
            n = k + l - 1
            if n > f.truncation:
                continue
            for j in range(1, k + 1):
                term = compose_at(fk, gl, j)
                if term.is_zero():
                    continue
                total = out.component(n) + term
                if total.is_zero():
                    out.components.pop(n, None)
                else:
                    out.components[n] = total
    return out


def circle(f: ConvElement, g: ConvElement) -> ConvElement:
    """Composition product  (f (o) g)_n = sum f_k o (g_{i_1} x .. x g_{i_k}).

    Associative and unital on group-like elements; defined by the same
    formula for arbitrary f.  The right factor must have degree 0 so the
    result stays degree-homogeneous.
    """
    if not isinstance(g, ConvElement):
        raise TypeError(f"expected ConvElement, got {type(g).__name__}")
    if g.target != f.source:
        raise ShapeError("circle composes g into f")
    if f.truncation != g.truncation:
        raise ShapeError("elements have different truncation arities")
    if g.degree != 0 and any(a != 1 for a in f.components):
        # One inhomogeneous factor is fine when f is pure postcomposition.
        raise DomainError("right factor of the circle product must have degree 0")
    out_degree = f.degree + (g.degree if g.degree != 0 else 0)
    out = ConvElement(g.source, f.target, f.truncation, out_degree)
    for k, fk in f.components.items():
        for split in _compositions(k, f.truncation):
            factors = [g.components.get(i) for i in split]
            if any(op is None for op in factors):
                continue
            term = _compose_tensor(fk, factors)
            n = term.arity
            total = out.component(n) + term
            if total.is_zero():
                out.components.pop(n, None)
            else:
                out.components[n] = total
    return out


def _compositions(k: int, total_max: int):
    """All tuples (i_1..i_k) of positive integers with sum <= total_max."""
    if k == 1:
        return [(i,) for i in range(1, total_max + 1)]
    out = []
    for first in range(1, total_max - k + 2):
        for rest in _compositions(k - 1, total_max - first):
            out.append((first,) + rest)
    return out


def circle_inverse(g: ConvElement) -> ConvElement:
    """Circle inverse of a group-like element, solved weight by weight."""
    return calculus.circle_inverse(g, circle)


@dataclass
class MCReport:
    """Outcome of a Maurer-Cartan check: flat square, or first bad arity."""

    ok: bool
    arity: Optional[int] = None
    residual: Optional[MultiOp] = None

    def __bool__(self):
        return self.ok


def mc_check(alpha: ConvElement) -> MCReport:
    """True iff  alpha * alpha = 0  up to the truncation arity.

    For the desuspended structure of a differential graded algebra this is
    exactly d^2 = 0, the Leibniz rule, and associativity.
    """
    if alpha.degree != -1:
        raise DomainError("mc_check expects a structure-kind element (degree -1)")
    square = star(alpha, alpha)
    for n in sorted(square.components):
        return MCReport(False, n, square.components[n])
    return MCReport(True)


def inf_morphism_check(f: ConvElement, alpha: ConvElement, beta: ConvElement) -> bool:
    """Does f satisfy the infinity-morphism equation  f * alpha == beta (o) f ?

    ``alpha`` lives on f's source, ``beta`` on f's target; f may relate two
    different spaces (e.g. the extended inclusion of a transfer).
    """
    if f.degree != 0:
        raise DomainError("an infinity-morphism has degree 0")
    if alpha.source != f.source or alpha.target != f.source:
        raise ShapeError("alpha must be a structure on the source of f")
    if beta.source != f.target or beta.target != f.target:
        raise ShapeError("beta must be a structure on the target of f")
    return star(f, alpha) == circle(beta, f)


def gauge_act(lam: ConvElement, alpha: ConvElement) -> ConvElement:
    """Gauge action  (e^lam * alpha) (o) e^{-lam}  on Maurer-Cartan elements."""
    if lam.degree != 0:
        raise DomainError("gauge parameter must have degree 0")
    if not lam.weight_component(0).is_zero():
        raise DomainError("gauge parameter must vanish in arity 1")
    report = mc_check(alpha)
    if not report.ok:
        raise DomainError(f"gauge_act needs a Maurer-Cartan element; fails at arity {report.arity}")
    return circle(star(calculus.exp_series(lam), alpha), calculus.exp_series(-lam))
