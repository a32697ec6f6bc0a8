"""Lower previsions, their credal sets, and natural extension.

A lower prevision assigns a supremum acceptable buying price to each of
finitely many gambles (real-valued maps on a finite outcome space). Its
credal set is the polytope of probability mass functions dominating every
assessment:

    p . f >= lpr(f)   for each assessed gamble f,
    p . 1_x >= 0      for each outcome x (unless already implied),
    p . 1   == 1.

The probability-one equality makes the constant-one direction lineality in
every normal cone, never a one-sided generator. Nonnegativity rows that are
implied by the other constraints are kept in the H-representation but
excluded from the support universe: they are never tight on a facet, so
they cannot generate a MESC wall.

Natural extension evaluates the lower envelope of the credal set at any
gamble; on this layer it is computed from the brute-force vertex oracle and
therefore inherits its small-instance guards. The structured engines exist
precisely to avoid this path.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .cones import SupportUniverse
from .exactla import (
    ZERO,
    dot,
    in_nonneg_span,
    is_multiple,
    ones,
    rank,
    rat,
    solve_nonneg,
    unit,
    vec,
)
from .polytope import HPolytope, normal_cone_at, vertices_bruteforce

__all__ = [
    "OutcomeSpace",
    "Gamble",
    "Assessment",
    "LowerPrevision",
    "CoherenceReport",
    "AssessmentCheck",
    "AxiomReport",
    "AxiomFailure",
    "EventCollection",
    "EventMescReport",
    "IncoherenceError",
    "SchemaError",
    "build_credal_hrep",
    "is_coherent",
    "natural_extension",
    "check_axioms",
    "cone_additivity_check",
    "is_event_mesc",
    "lower_prevision_from_json",
    "parse_gamble",
]


class IncoherenceError(ValueError):
    """Operation requires a coherent lower prevision."""


class SchemaError(ValueError):
    """A model document violates the input schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class OutcomeSpace:
    """Finite possibility space with named outcomes (order is significant:
    it fixes vector coordinates)."""

    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("outcome space must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("duplicate outcome names")
        if any(not isinstance(n, str) or not n for n in names):
            raise ValueError("outcome names must be nonempty strings")
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown outcome {name!r}") from None


@dataclass(frozen=True)
class Gamble:
    """Real-valued map on an outcome space, stored as an exact vector."""

    space: OutcomeSpace
    values: tuple

    def __post_init__(self):
        values = vec(self.values)
        if len(values) != self.space.n:
            raise ValueError("gamble length does not match the outcome space")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, space: OutcomeSpace, c) -> "Gamble":
        return cls(space, (rat(c),) * space.n)

    @classmethod
    def indicator(cls, space: OutcomeSpace, members) -> "Gamble":
        idx = {m if isinstance(m, int) else space.index(m) for m in members}
        if not idx <= set(range(space.n)):
            raise ValueError("indicator members out of range")
        return cls(space, tuple(rat(1) if i in idx else ZERO for i in range(space.n)))

    def _binop(self, other, op):
        if isinstance(other, Gamble):
            if other.space != self.space:
                raise ValueError("gambles on different outcome spaces")
            ov = other.values
        else:
            c = rat(other)
            ov = (c,) * self.space.n
        return Gamble(self.space, tuple(op(a, b) for a, b in zip(self.values, ov)))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __neg__(self):
        return Gamble(self.space, tuple(-a for a in self.values))

    def __mul__(self, scalar):
        c = rat(scalar)
        return Gamble(self.space, tuple(c * a for a in self.values))

    __rmul__ = __mul__

    def min_value(self):
        return min(self.values)

    def max_value(self):
        return max(self.values)

    def is_constant(self) -> bool:
        return all(a == self.values[0] for a in self.values)


@dataclass(frozen=True)
class Assessment:
    """One accepted bound: the gamble's lower prevision. provenance records
    whether the bound was given directly, obtained by conjugacy from an
    upper bound, or is a structural convention."""

    gamble: Gamble
    lower: object
    provenance: str = "direct"

    def __post_init__(self):
        object.__setattr__(self, "lower", rat(self.lower))
        if self.provenance not in ("direct", "conjugate", "convention"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class LowerPrevision:
    """Finitely many assessments on a common outcome space.

    Constant gambles are rejected: an assessment on a constant is either
    vacuous or contradictory and has no facet normal, so it cannot take part
    in the fan machinery. At most one assessment per distinct gamble.
    """

    space: OutcomeSpace
    assessments: tuple

    def __post_init__(self):
        assessments = tuple(self.assessments)
        seen = set()
        for a in assessments:
            if a.gamble.space != self.space:
                raise ValueError("assessment on a different outcome space")
            if a.gamble.is_constant():
                raise ValueError("assessment on a constant gamble is not representable")
            if a.gamble.values in seen:
                raise ValueError("two assessments on the same gamble")
            seen.add(a.gamble.values)
        object.__setattr__(self, "assessments", assessments)

    @classmethod
    def from_bounds(cls, space: OutcomeSpace, lower=(), upper=()) -> "LowerPrevision":
        """Build from (gamble, bound) pairs; upper bounds are converted at
        once through conjugacy: an upper bound u on f is the lower bound -u
        on -f."""
        out = []
        for g, b in lower:
            g = g if isinstance(g, Gamble) else Gamble(space, g)
            out.append(Assessment(g, b, "direct"))
        for g, b in upper:
            g = g if isinstance(g, Gamble) else Gamble(space, g)
            out.append(Assessment(-g, -rat(b), "conjugate"))
        return cls(space, tuple(out))

    @classmethod
    def vacuous(cls, space: OutcomeSpace) -> "LowerPrevision":
        return cls(space, ())


def _canonical_ray(f, b):
    """Scale a constraint so the normal's first nonzero entry is +-1; rows
    with the same normal direction then merge literally."""
    lead = next(a for a in f if a != 0)
    c = 1 / abs(lead)
    return tuple(c * a for a in f), b * c


def _nonneg_row_implied(x: int, other_rows, n: int) -> bool:
    """Is p(x) >= 0 implied by the listed rows plus total mass one?

    First search for an exact descent ray (d . g >= 0 on every other normal,
    d . 1 == 0, d(x) == -1): one exists iff p(x) is unbounded below over the
    relaxation, in which case the row is certainly not implied. Otherwise
    the relaxation is pointed and bounded in that coordinate, so the vertex
    scan decides.
    """
    normals = [f for f, _ in other_rows]
    m = len(normals)
    rows_dim = m + 2

    def column(entries):
        return vec(entries)

    cols = []
    for i in range(n):  # d+ part
        cols.append(column([g[i] for g in normals] + [1, 1 if i == x else 0]))
    for i in range(n):  # d- part
        cols.append(column([-g[i] for g in normals] + [-1, -1 if i == x else 0]))
    for j in range(m):  # slack per inequality
        cols.append(column([-1 if k == j else 0 for k in range(m)] + [0, 0]))
    target = vec([0] * m + [0, -1])
    if solve_nonneg(cols, target) is not None:
        return False
    relaxed = HPolytope(n, tuple(other_rows), ((ones(n), 1),))
    vs = vertices_bruteforce(relaxed)
    if not vs:
        return False
    return min(v.point[x] for v in vs) >= 0


@lru_cache(maxsize=None)
def build_credal_hrep(lp: LowerPrevision):
    """H-representation of the credal set plus its support universe.

    Rows are stored ray-canonically (normals scaled so the first nonzero
    entry is +-1) and rows sharing a normal merge to the binding bound, so
    the universe vectors are literally row normals. A nonnegativity row is
    added for every outcome; a row implied by all the others is excluded
    from the universe. The cheap sufficient test (a direct assessment on
    that outcome's indicator with a nonnegative bound) keeps large
    structured models off the oracle path; otherwise an exact relaxation
    test decides, subject to the oracle guards.
    """
    n = lp.space.n
    assess_rows = []
    for a in lp.assessments:
        assess_rows.append(_canonical_ray(a.gamble.values, a.lower))
    convention_rows = [(unit(n, x), ZERO) for x in range(n)]

    implied = []
    for x in range(n):
        e_x = unit(n, x)
        if any(f == e_x and b >= 0 for f, b in assess_rows):
            implied.append(True)
            continue
        others = assess_rows + [r for y, r in enumerate(convention_rows) if y != x]
        implied.append(_nonneg_row_implied(x, others, n))

    merged: dict = {}
    for f, b in assess_rows + convention_rows:
        if f not in merged or b > merged[f]:
            merged[f] = b
    h = HPolytope(n, tuple(merged.items()), ((ones(n), 1),))

    universe = {f for f, _ in assess_rows if not is_multiple(f, ones(n))}
    universe.update(unit(n, x) for x in range(n) if not implied[x])
    universe.add(ones(n))
    return h, SupportUniverse(tuple(sorted(universe)))


@lru_cache(maxsize=None)
def _credal_vertices(lp: LowerPrevision):
    h, _ = build_credal_hrep(lp)
    return vertices_bruteforce(h)


@dataclass(frozen=True)
class AssessmentCheck:
    gamble: Gamble
    lower: object
    attained: object  # exact minimum over the credal set, None when empty

    @property
    def tight(self) -> bool:
        return self.attained == self.lower


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    empty: bool
    checks: tuple

    def failures(self):
        return tuple(c for c in self.checks if c.attained is None or not c.tight)


def is_coherent(lp: LowerPrevision) -> CoherenceReport:
    """Envelope check: the credal set must be nonempty and every assessed
    bound must equal the exact minimum of its gamble over the set. A bound
    strictly below the minimum is not attained (the assessment is too weak
    to be an envelope value); a bound above would empty the set."""
    vs = _credal_vertices(lp)
    if not vs:
        checks = tuple(AssessmentCheck(a.gamble, a.lower, None) for a in lp.assessments)
        return CoherenceReport(False, True, checks)
    checks = []
    for a in lp.assessments:
        attained = min(dot(a.gamble.values, v.point) for v in vs)
        checks.append(AssessmentCheck(a.gamble, a.lower, attained))
    return CoherenceReport(all(c.tight for c in checks), False, tuple(checks))


def _as_vector(lp: LowerPrevision, f):
    if isinstance(f, Gamble):
        if f.space != lp.space:
            raise ValueError("gamble on a different outcome space")
        return f.values
    v = vec(f)
    if len(v) != lp.space.n:
        raise ValueError("gamble length does not match the outcome space")
    return v


def natural_extension(lp: LowerPrevision, f):
    """Exact lower envelope value min {p . f : p in the credal set}.

    Defined here only for coherent lp (IncoherenceError otherwise); the
    minimum is taken over the cached vertex set.
    """
    report = is_coherent(lp)
    if not report.coherent:
        raise IncoherenceError(
            "natural extension requires a coherent lower prevision"
            + (" (empty credal set)" if report.empty else "")
        )
    v = _as_vector(lp, f)
    return min(dot(v, vtx.point) for vtx in _credal_vertices(lp))


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str  # 'bounds' | 'homogeneity' | 'superadditivity'
    gambles: tuple
    lhs: object
    rhs: object


@dataclass(frozen=True)
class AxiomReport:
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


_HOMOGENEITY_SCALES = (0, 1, 2, 5)


def check_axioms(extension, gambles) -> AxiomReport:
    """Test a candidate lower-prevision functional on concrete gambles.

    Checks, exactly: min f <= E(f) <= max f; E(c f) == c E(f) for small
    nonnegative scales c; E(f + g) >= E(f) + E(g) on all pairs. Every
    violation is reported with its witnesses.
    """
    gambles = tuple(gambles)
    failures = []
    values = {}
    for g in gambles:
        values[g.values] = extension(g)
    for g in gambles:
        e = values[g.values]
        if not (g.min_value() <= e <= g.max_value()):
            failures.append(AxiomFailure("bounds", (g,), e, (g.min_value(), g.max_value())))
    for g in gambles:
        for c in _HOMOGENEITY_SCALES:
            scaled = extension(g * c) if c != 1 else values[g.values]
            if scaled != rat(c) * values[g.values]:
                failures.append(AxiomFailure("homogeneity", (g, c), scaled, rat(c) * values[g.values]))
    for ga, gb in itertools.combinations_with_replacement(gambles, 2):
        lhs = extension(ga + gb)
        rhs = values[ga.values] + values[gb.values]
        if lhs < rhs:
            failures.append(AxiomFailure("superadditivity", (ga, gb), lhs, rhs))
    return AxiomReport(tuple(failures))


def cone_additivity_check(lp: LowerPrevision, vertex_point, g, h):
    """Natural extension is additive on gambles sharing a normal cone.

    Returns None (skip) when g or h lies outside the normal cone at the
    given extreme point, else whether E(g + h) == E(g) + E(h) exactly.
    """
    hrep, _ = build_credal_hrep(lp)
    cone = normal_cone_at(hrep, vertex_point)
    gv = _as_vector(lp, g)
    hv = _as_vector(lp, h)
    for v in (gv, hv):
        if in_nonneg_span(cone.generators, cone.lineality, v) is None:
            return None
    lhs = natural_extension(lp, tuple(a + b for a, b in zip(gv, hv)))
    return lhs == natural_extension(lp, gv) + natural_extension(lp, hv)


# --------------------------------------------------------------- events


@dataclass(frozen=True)
class EventCollection:
    """Family of events (index sets) over an outcome space."""

    events: tuple

    def __post_init__(self):
        evs = []
        seen = set()
        for e in self.events:
            fe = frozenset(e)
            if not fe:
                raise ValueError("empty event in collection")
            if fe not in seen:
                seen.add(fe)
                evs.append(fe)
        evs.sort(key=lambda s: (len(s), sorted(s)))
        object.__setattr__(self, "events", tuple(evs))

    @classmethod
    def from_labels(cls, space: OutcomeSpace, groups) -> "EventCollection":
        return cls(tuple(frozenset(space.index(x) for x in g) for g in groups))


@dataclass(frozen=True)
class EventMescReport:
    """Outcome of the event-MESC test. reason is None on success, else one
    of 'size', 'disjoint-pair', 'covering-pair', 'dependent', 'absorbs';
    the offending events (and the conic witness for absorption) follow."""

    ok: bool
    reason: str = None
    events: tuple = ()
    witness: object = None


def _event_indicator(n, members):
    return tuple(rat(1) if i in members else ZERO for i in range(n))


def is_event_mesc(col: EventCollection, space: OutcomeSpace) -> EventMescReport:
    """Does this event family, which must contain the sure event, span a
    MESC over the universe of all event indicators?

    The necessary structure is checked in increasing cost order: right
    count, no disjoint pair, no pair covering the sure event, indicators
    plus constant-one a basis, and finally no other event indicator
    absorbed by the cone.
    """
    n = space.n
    omega = frozenset(range(n))
    for e in col.events:
        if not e <= omega:
            raise ValueError("event outside the outcome space")
    if omega not in col.events:
        raise ValueError("collection must contain the sure event")
    members = [e for e in col.events if e != omega]
    if len(members) != n - 1:
        return EventMescReport(False, "size", tuple(members))
    for a, b in itertools.combinations(members, 2):
        if not (a & b):
            return EventMescReport(False, "disjoint-pair", (a, b))
        if a | b == omega:
            return EventMescReport(False, "covering-pair", (a, b))
    gens = [_event_indicator(n, e) for e in members]
    if rank(gens + [ones(n)]) != n:
        return EventMescReport(False, "dependent", tuple(members))
    gen_set = set(gens)
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            u = _event_indicator(n, s)
            if u in gen_set:
                continue
            w = in_nonneg_span(gens, [ones(n)], u)
            if w is not None:
                return EventMescReport(False, "absorbs", (frozenset(s),), w)
    return EventMescReport(True)


# ----------------------------------------------------------------- JSON

_RAT_LITERAL = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def _schema_rat(value, path: str):
    # strict literal form: the numeric backends accept more (decimals,
    # exponents) but not identically, so the schema pins the syntax
    if not isinstance(value, str) or not _RAT_LITERAL.match(value):
        raise SchemaError(path, f"expected a rational like '1/2' or '-3', got {value!r}")
    return rat(value)


def _schema_outcomes(obj, path: str) -> OutcomeSpace:
    names = obj.get("outcomes")
    if not isinstance(names, list) or not names:
        raise SchemaError(f"{path}.outcomes", "required: nonempty list of outcome names")
    if any(not isinstance(x, str) or not x for x in names):
        raise SchemaError(f"{path}.outcomes", "outcome names must be nonempty strings")
    if len(set(names)) != len(names):
        raise SchemaError(f"{path}.outcomes", "duplicate outcome names")
    return OutcomeSpace(tuple(names))


def parse_gamble(obj, space: OutcomeSpace, path: str = "gamble") -> Gamble:
    """Gamble from a JSON mapping {outcome: rational string}; every outcome
    must be present. Also accepts {'values': {...}}."""
    if isinstance(obj, dict) and set(obj) == {"values"}:
        obj = obj["values"]
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected a mapping from outcome to rational string")
    missing = [x for x in space.names if x not in obj]
    if missing:
        raise SchemaError(path, f"missing outcomes: {missing}")
    unknown = [x for x in obj if x not in space.names]
    if unknown:
        raise SchemaError(path, f"unknown outcomes: {unknown}")
    return Gamble(space, tuple(_schema_rat(obj[x], f"{path}.{x}") for x in space.names))


def lower_prevision_from_json(obj) -> LowerPrevision:
    """Parse the lower-prevision model document.

    Shape: {"type": "lower_prevision", "outcomes": [...], "assessments":
    [{"gamble": {...} | "event": [...], "lower": "p/q" and/or "upper":
    "p/q"}, ...]}. Upper bounds convert through conjugacy immediately.
    """
    if not isinstance(obj, dict):
        raise SchemaError("$", "model document must be an object")
    if obj.get("type", "lower_prevision") != "lower_prevision":
        raise SchemaError("$.type", f"expected 'lower_prevision', got {obj.get('type')!r}")
    space = _schema_outcomes(obj, "$")
    raw = obj.get("assessments")
    if not isinstance(raw, list):
        raise SchemaError("$.assessments", "required: list of assessments")
    lower, upper = [], []
    for i, entry in enumerate(raw):
        path = f"$.assessments[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(path, "assessment must be an object")
        has_gamble = "gamble" in entry
        has_event = "event" in entry
        if has_gamble == has_event:
            raise SchemaError(path, "exactly one of 'gamble' or 'event' is required")
        if has_gamble:
            g = parse_gamble(entry["gamble"], space, f"{path}.gamble")
        else:
            ev = entry["event"]
            if (
                not isinstance(ev, list)
                or not ev
                or len(set(ev)) != len(ev)
                or any(x not in space.names for x in ev)
            ):
                raise SchemaError(f"{path}.event", "expected a nonempty list of distinct outcomes")
            g = Gamble.indicator(space, ev)
        if "lower" not in entry and "upper" not in entry:
            raise SchemaError(path, "at least one of 'lower'/'upper' is required")
        if "lower" in entry:
            lower.append((g, _schema_rat(entry["lower"], f"{path}.lower")))
        if "upper" in entry:
            upper.append((g, _schema_rat(entry["upper"], f"{path}.upper")))
    try:
        return LowerPrevision.from_bounds(space, lower, upper)
    except ValueError as exc:
        raise SchemaError("$.assessments", str(exc)) from None
