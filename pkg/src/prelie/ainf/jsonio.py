"""JSON interchange for convolution elements and contractions.

A multilinear operation is serialized as

    {"arity": n, "degree": d,
     "entries": [[[[deg, idx], ...inputs], [deg, idx], "p/q"], ...]}

a structure element as ``{"space": ..., "truncation": A, "operations": [...]}``
and a contraction as a record of the two spaces plus the maps d, i, p, h in
the entry-list format of the multicomplex module.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ValidationError
from ..linalg import GradedMap, GradedSpace
from ..multicomplex import space_from_dict, space_to_dict
from .convolution import ConvElement, MultiOp
from .transfer import Contraction


def multiop_to_dict(op: MultiOp) -> dict:
    return {
        "arity": op.arity,
        "degree": op.degree,
        "entries": [
            [[list(b) for b in ins], list(out), str(coeff)]
            for (ins, out), coeff in sorted(op.entries.items())
        ],
    }


def multiop_from_dict(data: dict, source: GradedSpace, target: GradedSpace) -> MultiOp:
    try:
        op = MultiOp(source, target, int(data["arity"]), int(data["degree"]))
        for ins, out, coeff in data.get("entries", ()):
            key = (tuple(tuple(map(int, b)) for b in ins), tuple(map(int, out)))
            op[key[0], key[1]] = op.entries.get(key, 0) + Fraction(coeff)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad operation record: {exc}") from None
    return op


def element_to_dict(elt: ConvElement) -> dict:
    return {
        "space": space_to_dict(elt.source),
        "target_space": space_to_dict(elt.target),
        "truncation": elt.truncation,
        "degree": elt.degree,
        "operations": [multiop_to_dict(elt.component(a)) for a in sorted(elt.components)],
    }


def element_from_dict(data: dict, source=None, target=None) -> ConvElement:
    try:
        if source is None:
            source = space_from_dict(data["space"])
        if target is None:
            target = (
                space_from_dict(data["target_space"]) if "target_space" in data else source
            )
        truncation = int(data["truncation"])
        degree = int(data.get("degree", -1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad element record: {exc}") from None
    components = {}
    for op_data in data.get("operations", ()):
        op = multiop_from_dict(op_data, source, target)
        if op.degree != degree:
            raise ValidationError(
                f"operation of degree {op.degree} in a degree-{degree} element"
            )
        if op.arity in components:
            components[op.arity] = components[op.arity] + op
        else:
            components[op.arity] = op
    return ConvElement(source, target, truncation, degree, components)


def _gmap_to_list(gmap: GradedMap) -> list:
    return [
        [sdeg, sidx, tidx, str(coeff)]
        for (sdeg, sidx, tidx), coeff in sorted(gmap.entries.items())
    ]


def _gmap_from_list(entries, source, target, degree) -> GradedMap:
    gmap = GradedMap(source, target, degree)
    try:
        for sdeg, sidx, tidx, coeff in entries:
            key = (int(sdeg), int(sidx), int(tidx))
            gmap[key] = gmap.entries.get(key, 0) + Fraction(coeff)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad map entry: {exc}") from None
    return gmap


def contraction_to_dict(c: Contraction) -> dict:
    return {
        "big_space": space_to_dict(c.big),
        "small_space": space_to_dict(c.small),
        "d": _gmap_to_list(c.d),
        "i": _gmap_to_list(c.incl),
        "p": _gmap_to_list(c.proj),
        "h": _gmap_to_list(c.h),
    }


def contraction_from_dict(data: dict) -> Contraction:
    try:
        big = space_from_dict(data["big_space"])
        small = space_from_dict(data["small_space"])
    except KeyError as exc:
        raise ValidationError(f"contraction record is missing {exc}") from None
    return Contraction(
        big,
        small,
        _gmap_from_list(data.get("d", ()), big, big, -1),
        _gmap_from_list(data.get("i", ()), small, big, 0),
        _gmap_from_list(data.get("p", ()), big, small, 0),
        _gmap_from_list(data.get("h", ()), big, big, 1),
    )
