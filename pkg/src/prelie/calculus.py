"""Series calculus generic over weight-graded left-unital products.

The functions here work on any element type exposing

    +, -, unary -, scalar * (Fraction or int),
    .star(other)          the product
    .weight_component(n)  projection onto weight n
    .max_weight           truncation bound (inclusive)
    .unit_like()          the unit, same space/truncation
    .zero_like()
    .is_zero()

Tree series, convolution elements, and operator towers all satisfy this
protocol, so the exponential, the Magnus-style logarithm, symmetric braces,
and circle-product inverses are implemented once.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError


def exp_series(x):
    """Exponential with right-iterated powers: 1 + x + (x*x)*x/3! + ...

    Requires the weight-0 component of ``x`` to vanish, which makes every
    weight of the result a finite sum.  When the product is associative this
    is the ordinary exponential.
    """
    if not x.weight_component(0).is_zero():
        raise DomainError("exponential needs a trivial weight-0 component")
    out = x.unit_like() + x
    power = x
    for n in range(2, x.max_weight + 1):
        power = power.star(x)
        if power.is_zero():
            break
        out = out + power * Fraction(1, math.factorial(n))
    return out


def magnus_series(a):
    """The series L with ``exp_series(L) == unit + a``, solved weight by weight.

    This is the logarithm inverse to :func:`exp_series`; for pre-Lie products
    it is the Magnus expansion.
    """
    if not a.weight_component(0).is_zero():
        raise DomainError("logarithm needs a trivial weight-0 component")
    lam = a.zero_like()
    unit = a.unit_like()
    for n in range(1, a.max_weight + 1):
        defect = (a - (exp_series(lam) - unit)).weight_component(n)
        if not defect.is_zero():
            lam = lam + defect
    return lam


def assoc_log(f):
    """Alternating logarithm  m - m*m/2 + m*m*m/3 - ...  with m = f - unit.

    Only meaningful when the underlying product is associative (operator
    towers); for pre-Lie products use :func:`magnus_series`.
    """
    mu = f - f.unit_like()
    if not mu.weight_component(0).is_zero():
        raise DomainError("logarithm needs unit weight-0 component")
    out = mu.zero_like()
    power = None
    for n in range(1, f.max_weight + 1):
        power = mu if power is None else power.star(mu)
        if power.is_zero():
            break
        out = out + power * Fraction((-1) ** (n + 1), n)
    return out


def symmetric_brace(a, args):
    """Symmetric brace {a; b_1, ..., b_n} built from the product by recursion.

    {a;} = a, {a; b} = a*b, and
    {a; b_1..b_n} = {{a; b_1..b_{n-1}}; b_n}
                    - sum_i {a; b_1, .., {b_i; b_n}, .., b_{n-1}}.
    """
    args = list(args)
    if not args:
        return a
    if len(args) == 1:
        return a.star(args[0])
    head, last = args[:-1], args[-1]
    out = symmetric_brace(a, head).star(last)
    for i in range(len(head)):
        nested = list(head)
        nested[i] = head[i].star(last)
        out = out - symmetric_brace(a, nested)
    return out


def circle_by_braces(a, g):
    """Circle product  a (o) g = sum_n {a; b,..,b} / n!  with g = unit + b."""
    if not (g.weight_component(0) - g.unit_like()).is_zero():
        raise DomainError("right factor of the circle product must be group-like")
    b = g - g.unit_like()
    out = a
    args: list = []
    for n in range(1, a.max_weight + 1):
        args.append(b)
        term = symmetric_brace(a, args)
        if term.is_zero():
            break
        out = out + term * Fraction(1, math.factorial(n))
    return out


def circle_inverse(g, circle):
    """Inverse of a group-like element for the given circle product.

    Solved weight by weight from  x (o) g = unit ; the weight-n component of
    the equation involves x only through its components of weight < n plus
    the unknown x_(n) itself.
    """
    unit = g.unit_like()
    if not (g.weight_component(0) - unit).is_zero():
        raise DomainError("only group-like elements are circle-invertible")
    x = unit
    for n in range(1, g.max_weight + 1):
        defect = (unit - circle(x, g)).weight_component(n)
        if not defect.is_zero():
            x = x + defect
    return x
