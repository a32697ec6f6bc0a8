"""Shared constructors for the test suite.

These build H-representations by hand, independent of the package's own
model-to-polytope builders, so lower layers are testable on their own and
the builders themselves can be cross-checked against them.
"""

import itertools

from credalfans.cones import SupportUniverse
from credalfans.exactla import ones, rat, unit
from credalfans.polytope import HPolytope

Q = rat


def ind(n, members):
    """0/1 indicator vector of a set of outcome indices."""
    return tuple(Q(1) if i in members else Q(0) for i in range(n))


def interval_hrep(lows, ups):
    """Probability-interval H-rep: lower rows on singleton indicators,
    upper rows on complement indicators, masses summing to one."""
    n = len(lows)
    rows = [(unit(n, i), Q(lows[i])) for i in range(n)]
    for i in range(n):
        rows.append((ind(n, set(range(n)) - {i}), 1 - Q(ups[i])))
    return HPolytope(n, tuple(rows), ((ones(n), 1),))


def interval_universe(n):
    vs = [unit(n, i) for i in range(n)]
    vs += [ind(n, set(range(n)) - {i}) for i in range(n)]
    vs.append(ones(n))
    return SupportUniverse(tuple(vs))


def lowprob_hrep(n, values):
    """H-rep of a lower probability: one row per proper nonempty event.

    values maps frozenset -> rational lower bound; missing events default
    to zero.
    """
    rows = []
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            rows.append((ind(n, set(s)), Q(values.get(frozenset(s), 0))))
    return HPolytope(n, tuple(rows), ((ones(n), 1),))


def event_universe(n):
    vs = []
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            vs.append(ind(n, set(s)))
    vs.append(ones(n))
    return SupportUniverse(tuple(vs))


SUPERMOD3 = {
    frozenset({0}): Q("1/10"),
    frozenset({1}): Q("1/10"),
    frozenset({2}): Q("1/10"),
    frozenset({0, 1}): Q("1/2"),
    frozenset({0, 2}): Q("1/2"),
    frozenset({1, 2}): Q("1/2"),
}


def coherent_intervals(rng, n, den=12):
    """Random reachable probability intervals: sample around a random
    distribution, then tighten each bound to the reachable envelope."""
    while True:
        weights = [rng.randint(1, den) for _ in range(n)]
        total = sum(weights)
        center = [Q(w) / total for w in weights]
        lows = [max(Q(0), c - Q(rng.randint(0, den)) / (4 * den)) for c in center]
        ups = [min(Q(1), c + Q(rng.randint(0, den)) / (4 * den)) for c in center]
        if sum(lows) <= 1 <= sum(ups):
            break
    sl, su = sum(lows), sum(ups)
    tight_l = [max(lows[i], 1 - (su - ups[i])) for i in range(n)]
    tight_u = [min(ups[i], 1 - (sl - lows[i])) for i in range(n)]
    return tight_l, tight_u


def belief_masses(rng, n, den=24):
    """Random belief function given by a Moebius mass assignment: nonneg
    masses on nonempty events summing to one. L(A) = mass inside A is
    infinitely monotone, hence 2-monotone."""
    events = []
    for r in range(1, n + 1):
        events.extend(frozenset(s) for s in itertools.combinations(range(n), r))
    raw = [rng.randint(0, den) for _ in events]
    while sum(raw) == 0:
        raw = [rng.randint(0, den) for _ in events]
    total = sum(raw)
    mass = {e: Q(w) / total for e, w in zip(events, raw)}
    values = {}
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            a = frozenset(s)
            values[a] = sum((m for e, m in mass.items() if e <= a), Q(0))
    return values


def quadratic_lowprob(rng, n, wmax=5):
    """Strictly supermodular game L(A) = (sum of weights in A)^2 scaled to
    L(full) = 1; positive weights make every incomparable inequality
    strict."""
    w = [rng.randint(1, wmax) for _ in range(n)]
    total = sum(w)
    values = {}
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            part = sum(w[i] for i in s)
            values[frozenset(s)] = Q(part * part) / (total * total)
    return values


def random_gamble(rng, n, den=12, lo=-3, hi=6):
    return tuple(Q(rng.randint(lo * den, hi * den)) / den for _ in range(n))


def coherentify_lowprob(n, values):
    """Tighten every event's bound to its attained minimum over the credal
    set, making each row of the H-rep tight somewhere (None if empty)."""
    import itertools as _it

    from credalfans.polytope import lp_min, vertices_bruteforce

    h = lowprob_hrep(n, values)
    if not vertices_bruteforce(h):
        return None
    out = {}
    for r in range(1, n):
        for s in _it.combinations(range(n), r):
            val, _ = lp_min(h, ind(n, set(s)))
            out[frozenset(s)] = val
    return out
