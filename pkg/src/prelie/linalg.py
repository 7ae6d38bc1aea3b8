"""Exact-rational graded linear algebra on finite-dimensional spaces.

A :class:`GradedSpace` is a finite family of standard-basis coordinate
spaces indexed by integer degrees.  A :class:`GradedMap` is a sparse
rational matrix between two graded spaces that shifts degree by a fixed
amount.  Composition is plain matrix composition -- maps between graded
spaces pick up no Koszul signs on their own; signs only appear when maps
act inside tensor products (see the ainf package).

Also home to the deterministic Gaussian solver used by the stage-wise
trivialization routines.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ShapeError, ValidationError


class GradedSpace:
    """Finite-dimensional graded vector space with implicit standard basis."""

    __slots__ = ("dims",)

    def __init__(self, dims):
        clean = {}
        for deg, dim in dims.items():
            deg, dim = int(deg), int(dim)
            if dim < 0:
                raise ValidationError(f"negative dimension {dim} in degree {deg}")
            if dim:
                clean[deg] = dim
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("GradedSpace is immutable")

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def basis(self):
        """All basis labels ``(degree, index)`` in deterministic order."""
        return [(deg, i) for deg, dim in self.dims.items() for i in range(dim)]

    def has_basis(self, b) -> bool:
        deg, idx = b
        return 0 <= idx < self.dim(deg)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __hash__(self):
        return hash(tuple(self.dims.items()))

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class GradedMap:
    """Sparse degree-homogeneous linear map between graded spaces.

    Entries are keyed by ``(source_degree, source_index, target_index)``;
    the target degree is always ``source_degree + self.degree``.
    """

    __slots__ = ("source", "target", "degree", "entries")

    def __init__(self, source, target, degree, entries=None):
        self.source = source
        self.target = target
        self.degree = degree
        self.entries = {}
        if entries:
            for (sdeg, sidx, tidx), coeff in entries.items():
                self[sdeg, sidx, tidx] = self.entries.get((sdeg, sidx, tidx), 0) + coeff

    def __setitem__(self, key, coeff):
        sdeg, sidx, tidx = key
        coeff = Fraction(coeff)
        if not 0 <= sidx < self.source.dim(sdeg):
            raise ShapeError(f"no basis vector ({sdeg}, {sidx}) in the source")
        if not 0 <= tidx < self.target.dim(sdeg + self.degree):
            raise ShapeError(
                f"no basis vector ({sdeg + self.degree}, {tidx}) in the target"
            )
        if coeff:
            self.entries[sdeg, sidx, tidx] = coeff
        else:
            self.entries.pop((sdeg, sidx, tidx), None)

    @staticmethod
    def zero(source, target, degree) -> "GradedMap":
        return GradedMap(source, target, degree)

    @staticmethod
    def identity(space) -> "GradedMap":
        out = GradedMap(space, space, 0)
        for deg, idx in space.basis():
            out[deg, idx, idx] = 1
        return out

    def apply(self, basis_label):
        """Image of one basis vector as a list of ((degree, index), coeff)."""
        deg, idx = basis_label
        out = []
        for (sdeg, sidx, tidx), coeff in self.entries.items():
            if sdeg == deg and sidx == idx:
                out.append(((deg + self.degree, tidx), coeff))
        return out

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        if other.target != self.source:
            raise ShapeError("composition: inner spaces differ")
        out = GradedMap(other.source, self.target, self.degree + other.degree)
        outer = {}
        for (sdeg, sidx, tidx), coeff in self.entries.items():
            outer.setdefault((sdeg, sidx), []).append((tidx, coeff))
        for (sdeg, sidx, mid), c1 in other.entries.items():
            for tidx, c2 in outer.get((sdeg + other.degree, mid), ()):
                key = (sdeg, sidx, tidx)
                val = out.entries.get(key, Fraction(0)) + c1 * c2
                if val:
                    out.entries[key] = val
                else:
                    out.entries.pop(key, None)
        return out

    def _check_same_shape(self, other):
        if (
            self.source != other.source
            or self.target != other.target
            or self.degree != other.degree
        ):
            raise ShapeError("graded maps have different shapes")

    def __add__(self, other):
        self._check_same_shape(other)
        out = GradedMap(self.source, self.target, self.degree, dict(self.entries))
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
        out = GradedMap(self.source, self.target, self.degree)
        if scalar:
            out.entries.update({k: v * scalar for k, v in self.entries.items()})
        return out

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(
            (self.source, self.target, self.degree, frozenset(self.entries.items()))
        )

    def __repr__(self):
        return (
            f"<GradedMap degree={self.degree} "
            f"entries={sorted(self.entries.items())}>"
        )


def solve_sparse(rows, rhs, nvars):
    """Solve a sparse rational linear system by deterministic elimination.

    ``rows[i]`` is a dict ``var -> coeff`` and ``rhs[i]`` the right-hand
    side.  Returns ``(True, solution)`` with free variables set to 0, or
    ``(False, partial)`` where ``partial`` solves the consistent subsystem
    (pivot order: increasing variable index, first usable row).
    """
    work = [(dict(r), Fraction(v)) for r, v in zip(rows, rhs)]
    pivots = []  # (var, row_dict, rhs)
    used = [False] * len(work)
    for var in range(nvars):
        pick = None
        for i, (row, _val) in enumerate(work):
            if not used[i] and row.get(var):
                pick = i
                break
        if pick is None:
            continue
        used[pick] = True
        row, val = work[pick]
        inv = 1 / row[var]
        row = {k: c * inv for k, c in row.items()}
        val = val * inv
        pivots.append((var, row, val))
        for i, (other, oval) in enumerate(work):
            if used[i]:
                continue
            factor = other.get(var)
            if not factor:
                continue
            for k, c in row.items():
                newc = other.get(k, Fraction(0)) - factor * c
                if newc:
                    other[k] = newc
                else:
                    other.pop(k, None)
            work[i] = (other, oval - factor * val)
    consistent = all(used[i] or not val for i, (_row, val) in enumerate(work))
    solution = [Fraction(0)] * nvars
    for var, row, val in reversed(pivots):
        acc = val
        for k, c in row.items():
            if k != var:
                acc -= c * solution[k]
        solution[var] = acc
    return consistent, solution
