"""Simplicial cones modulo a constant-direction lineality, and MESC tests.

Throughout, the constant-one vector is lineality: it is never a one-sided
generator. A MESC over a support universe U (a finite vector family that
includes the constant-one direction) is a cone whose generators, together
with the constant-one vector, form a basis, and which absorbs no other
member of U. MESCs are the maximal cells available for triangulating a
normal fan whose rays are drawn from U, which is what makes the adjacency
walk work.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import (
    dot,
    expand_in_basis,
    in_nonneg_span,
    is_multiple,
    nullspace,
    ones,
    rank,
    vec,
)

__all__ = [
    "Cone",
    "SupportUniverse",
    "MescFailure",
    "NonSimplicialConeError",
    "AdjacencyPreconditionError",
    "contains",
    "in_relative_interior",
    "is_simplicial",
    "mesc_failure",
    "is_mesc",
    "are_adjacent",
]


class NonSimplicialConeError(ValueError):
    """Operation requires independent generators (plus lineality)."""


class AdjacencyPreconditionError(ValueError):
    """The two cones do not share a candidate common facet."""


@dataclass(frozen=True)
class Cone:
    """Finitely generated cone: cone(generators) + span(lineality).

    Generators are stored deduplicated and sorted (canonical form), so two
    equal cones given in different orders compare equal. Zero vectors are
    rejected in both roles.
    """

    generators: tuple
    lineality: tuple = ()

    def __post_init__(self):
        gens = sorted({vec(g) for g in self.generators})
        lin = sorted({vec(l) for l in self.lineality})
        for v in gens + lin:
            if all(a == 0 for a in v):
                raise ValueError("zero vector in cone description")
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "lineality", tuple(lin))

    @property
    def dim_ambient(self) -> int:
        for v in self.generators + self.lineality:
            return len(v)
        raise ValueError("empty cone has no ambient dimension")


@dataclass(frozen=True)
class SupportUniverse:
    """Finite family of support vectors; must contain the constant-one
    vector (the lineality direction of every cone drawn from it).
    Stored sorted and deduplicated."""

    vectors: tuple

    def __post_init__(self):
        vs = tuple(sorted({vec(v) for v in self.vectors}))
        if not vs:
            raise ValueError("empty support universe")
        n = len(vs[0])
        if any(len(v) != n for v in vs):
            raise ValueError("mixed dimensions in support universe")
        if ones(n) not in vs:
            raise ValueError("support universe must contain the constant-one vector")
        object.__setattr__(self, "vectors", vs)

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, v):
        return vec(v) in self.vectors


def contains(c: Cone, v) -> bool:
    """Closed-cone membership: v in cone(generators) + span(lineality)."""
    return in_nonneg_span(c.generators, c.lineality, v) is not None


def in_relative_interior(c: Cone, v) -> bool:
    """Membership with all generator coefficients strictly positive.

    Well defined only when generators + lineality are independent (the
    expansion is unique); raises NonSimplicialConeError otherwise.
    """
    cols = list(c.generators) + list(c.lineality)
    try:
        coeffs = expand_in_basis(cols, v)
    except ValueError as exc:
        raise NonSimplicialConeError(str(exc)) from None
    if coeffs is None:
        return False
    return all(a > 0 for a in coeffs[: len(c.generators)])


def is_simplicial(c: Cone) -> bool:
    """True iff generators and lineality together are linearly independent."""
    cols = list(c.generators) + list(c.lineality)
    return rank(cols) == len(cols)


@dataclass(frozen=True)
class MescFailure:
    """Why a cone is not a MESC over a universe.

    kind is one of 'size' (not exactly n-1 generators), 'dependent'
    (generators plus constant-one are not a basis), 'absorbs' (some other
    universe vector lies in the cone; that vector and its conic witness are
    attached)."""

    kind: str
    vector: tuple = None
    witness: object = None


def _require_constant_lineality(c: Cone) -> int:
    n = c.dim_ambient
    if c.lineality != (ones(n),):
        raise ValueError("MESC tests require lineality exactly {constant-one}")
    return n


def mesc_failure(c: Cone, universe: SupportUniverse):
    """None if c is a MESC over the universe, else the first failure found.

    Universe vectors that are constant (multiples of the lineality
    direction) are skipped: they lie in every cone considered here.
    """
    n = _require_constant_lineality(c)
    gens = c.generators
    if len(gens) != n - 1:
        return MescFailure("size")
    if rank(list(gens) + [ones(n)]) != n:
        return MescFailure("dependent")
    gen_set = set(gens)
    for u in universe:
        if u in gen_set or is_multiple(u, ones(n)):
            continue
        w = in_nonneg_span(gens, c.lineality, u)
        if w is not None:
            return MescFailure("absorbs", u, w)
    return None


def is_mesc(c: Cone, universe: SupportUniverse) -> bool:
    return mesc_failure(c, universe) is None


def are_adjacent(a: Cone, b: Cone) -> bool:
    """Sign test for two MESCs sharing all generators but one.

    Let t span the orthogonal complement of the shared generators together
    with the lineality. The cones lie on opposite sides of that common
    hyperplane (share a facet) iff the two swapped generators take opposite
    signs against t. Raises AdjacencyPreconditionError unless the inputs
    share exactly all-but-one generator, agree on lineality, and the shared
    span has codimension one.
    """
    if a.lineality != b.lineality:
        raise AdjacencyPreconditionError("lineality mismatch")
    sa, sb = set(a.generators), set(b.generators)
    if len(sa) != len(sb):
        raise AdjacencyPreconditionError("generator counts differ")
    shared = sa & sb
    if len(shared) != len(sa) - 1:
        raise AdjacencyPreconditionError(
            f"cones share {len(shared)} of {len(sa)} generators; need all but one"
        )
    (f,) = sa - sb
    (g,) = sb - sa
    basis = nullspace(sorted(shared) + list(a.lineality))
    if len(basis) != 1:
        raise AdjacencyPreconditionError(
            "shared generators plus lineality do not span a hyperplane"
        )
    t = basis[0]
    sf, sg = dot(f, t), dot(g, t)
    return (sf < 0 < sg) or (sg < 0 < sf)
