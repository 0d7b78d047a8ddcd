"""Exact solving of small polynomial systems (at most a few unknowns).

The deciders reduce every projection question to the real solvability of a
system of polynomial equations in the camera parameters.  This module settles
such systems by lexicographic resultant cascades: repeatedly eliminate one
unknown by taking resultants against a low-degree pivot, split the variety
whenever two equations share a factor (V(g*a, g*b, ...) = V(g, ...) united
with V(a, b, ...)), isolate the real roots of the final univariate
eliminants, and screen the resulting candidate tuples against the full system
-- exactly for rational candidates, by refined interval arithmetic for
irrational ones.

Outcomes are certified in one direction: ``Infeasible`` is rigorous (every
candidate that could cover a real solution was excluded by an exact sign
check), and every ``confirmed`` solution point is an exact common zero.
Candidate tuples with irrational coordinates that cannot be separated from
zero are reported unconfirmed rather than silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import (
    Caps,
    DEFAULT_CAPS,
    AlgebraError,
    IsolatingBox,
    LimitExceeded,
    MultiPoly,
    isolate_real_roots,
    poly_ring,
    resultant,
)

#: Fixed enumeration of small rationals used for witness hunting on
#: positive-dimensional solution sets.
SMALL_RATIONALS: tuple[Fraction, ...] = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 3),
    Fraction(-1, 3),
    Fraction(3),
    Fraction(-3),
    Fraction(1, 4),
    Fraction(-1, 4),
    Fraction(4),
    Fraction(-4),
    Fraction(5),
    Fraction(-5),
)

_MAX_LEAVES = 500
_REJECT_ROUNDS = 48


@dataclass(frozen=True)
class SolutionPoint:
    """One candidate common zero; ``confirmed`` means verified exactly."""

    unknowns: tuple[str, ...]
    boxes: tuple[IsolatingBox, ...]
    confirmed: bool

    def rational(self) -> dict[str, Fraction] | None:
        """Exact coordinates if every box pins a rational value."""
        if any(b.exact is None for b in self.boxes):
            return None
        return {u: b.exact for u, b in zip(self.unknowns, self.boxes)}


@dataclass(frozen=True)
class Infeasible:
    """The system has no real solutions (certified)."""

    unknowns: tuple[str, ...]


@dataclass(frozen=True)
class Solutions:
    """Candidate real solutions of a zero-dimensional system."""

    unknowns: tuple[str, ...]
    points: tuple[SolutionPoint, ...]

    def rational_points(self) -> list[dict[str, Fraction]]:
        return [p.rational() for p in self.points if p.confirmed and p.rational()]


@dataclass(frozen=True)
class PositiveDimensional:
    """The real solution set contains a positive-dimensional component."""

    unknowns: tuple[str, ...]
    witness: dict[str, Fraction] | None


SystemOutcome = Infeasible | Solutions | PositiveDimensional


# ---------------------------------------------------------------------------
# small-rational enumeration
# ---------------------------------------------------------------------------


def small_rational_tuples(arity: int, limit: int | None = None) -> Iterator[tuple[Fraction, ...]]:
    """Tuples over SMALL_RATIONALS ordered by total enumeration index."""
    n = len(SMALL_RATIONALS)
    count = 0
    for total in range(arity * (n - 1) + 1):
        for idxs in _compositions(total, arity, n - 1):
            yield tuple(SMALL_RATIONALS[i] for i in idxs)
            count += 1
            if limit is not None and count >= limit:
                return


def _compositions(total: int, arity: int, top: int) -> Iterator[tuple[int, ...]]:
    if arity == 1:
        if total <= top:
            yield (total,)
        return
    for first in range(min(total, top) + 1):
        for rest in _compositions(total - first, arity - 1, top):
            yield (first,) + rest


def grid_witnesses(
    eqs: Sequence[MultiPoly],
    unknowns: Sequence[str],
    limit: int = 20,
    tuples: int = 6000,
) -> list[dict[str, Fraction]]:
    """Small-rational tuples satisfying every equation exactly, in order."""
    hits = []
    for values in small_rational_tuples(len(unknowns), tuples):
        assignment = dict(zip(unknowns, values))
        if all(_eval_exact(e, assignment) == 0 for e in eqs):
            hits.append(assignment)
            if len(hits) >= limit:
                break
    return hits


def _eval_exact(e: MultiPoly, assignment: Mapping[str, Fraction]) -> Fraction:
    return e.subs(assignment).as_fraction()


# ---------------------------------------------------------------------------
# interval arithmetic (exact rational endpoints)
# ---------------------------------------------------------------------------


def _ival_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _ival_pow(a: tuple[Fraction, Fraction], k: int):
    if k == 0:
        return (Fraction(1), Fraction(1))
    if k == 1:
        return a
    lo, hi = a
    plo, phi = lo ** k, hi ** k
    if k % 2 == 1:
        return (plo, phi)
    if lo >= 0:
        return (plo, phi)
    if hi <= 0:
        return (phi, plo)
    return (Fraction(0), max(plo, phi))


def interval_evaluate(
    p: MultiPoly, box: Mapping[str, tuple[Fraction, Fraction]]
) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of p over an axis-aligned box (exact endpoints)."""
    names = p.variables
    lo_total, hi_total = Fraction(0), Fraction(0)
    for mono, coeff in p.terms().items():
        term = (Fraction(1), Fraction(1))
        for name, k in zip(names, mono):
            if k:
                term = _ival_mul(term, _ival_pow(box[name], k))
        term = _ival_mul(term, (coeff, coeff))
        lo_total += term[0]
        hi_total += term[1]
    return lo_total, hi_total


# ---------------------------------------------------------------------------
# preparation and gcd folding
# ---------------------------------------------------------------------------


class _InfeasibleBranch(Exception):
    pass


def _prep(e: MultiPoly) -> MultiPoly | None:
    """Primitive squarefree part; None for the zero polynomial.

    Raises :class:`_InfeasibleBranch` for a nonzero constant equation.
    """
    if e.is_zero:
        return None
    if e.is_constant:
        raise _InfeasibleBranch
    _, p = e.sqf_part().primitive()
    return p


def _prep_all(eqs: Iterable[MultiPoly]) -> list[MultiPoly] | None:
    """None signals an infeasible branch (a nonzero constant equation)."""
    out = []
    try:
        for e in eqs:
            p = _prep(e)
            if p is not None:
                out.append(p)
    except _InfeasibleBranch:
        return None
    # dedupe syntactically equal equations
    seen: list[MultiPoly] = []
    for e in out:
        if not any(e == s for s in seen):
            seen.append(e)
    return seen


def _gcd_all(eqs: Sequence[MultiPoly]) -> MultiPoly:
    acc = eqs[0]
    for e in eqs[1:]:
        if acc.is_constant:
            break
        acc = acc.gcd(e)
    return acc


def _used_unknowns(eqs: Sequence[MultiPoly], unknowns: Sequence[str]) -> list[str]:
    return [u for u in unknowns if any(e.degree(u) > 0 for e in eqs)]


# ---------------------------------------------------------------------------
# eliminant cascade with variety splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Leaf:
    kind: str  # 'eliminant' | 'unbounded'
    poly: MultiPoly | None = None


def _coordinate_leaves(
    eqs: Sequence[MultiPoly],
    keep: str,
    unknowns: Sequence[str],
    caps: Caps,
    budget: list[int],
) -> list[_Leaf]:
    """Decompose the variety and collect univariate data for ``keep``.

    Inputs must already be prepped (primitive squarefree, nonconstant).
    Returns leaves holding either a nonzero univariate eliminant whose roots
    cover the possible ``keep``-coordinates on that component, or an
    ``unbounded`` marker when a component leaves ``keep`` unconstrained.
    Branches proven empty contribute nothing.
    """
    budget[0] -= 1
    if budget[0] < 0:
        raise LimitExceeded("variety decomposition branch budget exhausted")
    if not eqs:
        return [_Leaf("unbounded")]

    leaves: list[_Leaf] = []

    # common-factor component: V(g*e1', g*e2', ...) = V(g) u V(e1', e2', ...)
    g = _gcd_all(eqs)
    if not g.is_constant:
        residual = _branch_eqs((_quo(e, g) for e in eqs))
        gu = [u for u in unknowns if g.degree(u) > 0]
        if gu == [keep]:
            leaves.append(_Leaf("eliminant", g))
        else:
            # a hypersurface carrying other unknowns never pins keep
            leaves.append(_Leaf("unbounded"))
        if residual is not None:
            leaves.extend(_coordinate_leaves(residual, keep, unknowns, caps, budget))
        return leaves

    active = _used_unknowns(eqs, unknowns)
    others = [u for u in active if u != keep]
    if not others:
        # univariate (or keep-free) system: fold by gcd
        univariate = [e for e in eqs if e.degree(keep) > 0]
        if not univariate:
            return [_Leaf("unbounded")]
        gk = _gcd_all(univariate)
        if gk.is_constant:
            return []
        return [_Leaf("eliminant", gk)]

    # choose the elimination variable with the cheapest pivot
    def pivot_cost(v: str):
        degs = [(e.degree(v), len(e.terms())) for e in eqs if e.degree(v) > 0]
        return min(degs)

    v = min(others, key=lambda u: pivot_cost(u))
    withv = sorted(
        (e for e in eqs if e.degree(v) > 0),
        key=lambda e: (e.degree(v), len(e.terms())),
    )
    rest = [e for e in eqs if e.degree(v) <= 0]
    pivot = withv[0]
    new_eqs = list(rest)
    for e in withv[1:]:
        r = resultant(pivot, e, v)
        if r.is_zero:
            shared = pivot.gcd(e)
            if shared.is_constant:
                # cannot resolve the pair; drop e (sound: fewer equations only
                # enlarge the candidate cover)
                continue
            remaining = [q for q in eqs if q is not pivot and q is not e]
            on_shared = _branch_eqs(remaining + [shared])
            off_shared = _branch_eqs(remaining + [_quo(pivot, shared), _quo(e, shared)])
            for branch in (on_shared, off_shared):
                if branch is not None:
                    leaves.extend(_coordinate_leaves(branch, keep, unknowns, caps, budget))
            return leaves
        caps.check(r.raw)
        try:
            p = _prep(r)
        except _InfeasibleBranch:
            # two equations with no common zeros at all
            return []
        if p is not None:
            new_eqs.append(p)
    leaves.extend(_coordinate_leaves(new_eqs, keep, unknowns, caps, budget))
    return leaves


def _branch_eqs(eqs: Iterable[MultiPoly]) -> list[MultiPoly] | None:
    return _prep_all(eqs)


def _quo(e: MultiPoly, g: MultiPoly) -> MultiPoly:
    q = e.raw.quo(g.raw if g.raw.ring is e.raw.ring else g.raw.set_ring(e.raw.ring))
    return MultiPoly(q)


# ---------------------------------------------------------------------------
# candidate screening
# ---------------------------------------------------------------------------


def _screen_candidates(
    eqs: Sequence[MultiPoly],
    unknowns: Sequence[str],
    per_var_boxes: Mapping[str, Sequence[IsolatingBox]],
) -> tuple[list[SolutionPoint], list[SolutionPoint]]:
    """Split candidate tuples into confirmed solutions and unresolved ones."""
    confirmed: list[SolutionPoint] = []
    unresolved: list[SolutionPoint] = []
    names = tuple(unknowns)
    for combo in product(*(per_var_boxes[u] for u in names)):
        exact = {u: b.exact for u, b in zip(names, combo) if b.exact is not None}
        if len(exact) == len(names):
            if all(_eval_exact(e, exact) == 0 for e in eqs):
                confirmed.append(SolutionPoint(names, tuple(combo), True))
            continue
        # substitute the exact coordinates once, then interval-reject the rest
        reduced = [e.subs(exact) for e in eqs]
        reduced = [e for e in reduced if not (e.is_constant and e.as_fraction() == 0)]
        if any(e.is_constant and e.as_fraction() != 0 for e in reduced):
            continue
        boxes = {u: b for u, b in zip(names, combo) if b.exact is None}
        if _interval_reject(reduced, boxes):
            continue
        unresolved.append(SolutionPoint(names, tuple(combo), False))
    return confirmed, unresolved


def _interval_reject(
    eqs: Sequence[MultiPoly], boxes: Mapping[str, IsolatingBox]
) -> bool:
    """True when some equation provably misses zero on the candidate box."""
    current = dict(boxes)
    for _ in range(_REJECT_ROUNDS):
        enclosure = {u: (b.low, b.high) for u, b in current.items()}
        for e in eqs:
            lo, hi = interval_evaluate(e, enclosure)
            if lo > 0 or hi < 0:
                return True
        widest = max(current.values(), key=lambda b: b.width)
        if widest.width == 0:
            return False
        current = {u: b.refine(b.width / 4) for u, b in current.items()}
    return False


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def solve_system(
    eqs: Sequence[MultiPoly],
    unknowns: Sequence[str] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> SystemOutcome:
    """Classify the real solution set of a polynomial system.

    Triangularizes by successive resultants (splitting off shared-factor
    components), isolates real roots of the eliminants, and screens candidate
    tuples against every equation: exact substitution for rational tuples,
    refined interval arithmetic otherwise.  ``Infeasible`` is a certified
    verdict, never a heuristic one.
    """
    if unknowns is None:
        seen: list[str] = []
        for e in eqs:
            for v in e.variables:
                if e.degree(v) > 0 and v not in seen:
                    seen.append(v)
        unknowns = seen
    names = tuple(unknowns)

    prepped = _prep_all(eqs)
    if prepped is None:
        return Infeasible(names)
    if not names:
        return Solutions((), (SolutionPoint((), (), True),))
    if not prepped:
        witness = {u: Fraction(0) for u in names}
        return PositiveDimensional(names, witness)

    active = _used_unknowns(prepped, names)
    if len(active) < len(names):
        # some unknown is entirely unconstrained
        sub = solve_system(prepped, active, caps)
        if isinstance(sub, Infeasible):
            return Infeasible(names)
        witness = None
        hits = grid_witnesses(prepped, names, limit=1)
        if hits:
            witness = hits[0]
        return PositiveDimensional(names, witness)

    budget = [_MAX_LEAVES]
    per_var_boxes: dict[str, list[IsolatingBox]] = {}
    unbounded = False
    for u in names:
        leaves = _coordinate_leaves(prepped, u, names, caps, budget)
        if not leaves:
            return Infeasible(names)
        if any(leaf.kind == "unbounded" for leaf in leaves):
            unbounded = True
            break
        boxes: list[IsolatingBox] = []
        for leaf in leaves:
            boxes.extend(isolate_real_roots(_as_univariate(leaf.poly, u)))
        boxes = _dedupe_boxes(boxes)
        if not boxes:
            return Infeasible(names)
        per_var_boxes[u] = boxes

    if unbounded:
        hits = grid_witnesses(prepped, names, limit=1)
        return PositiveDimensional(names, hits[0] if hits else None)

    confirmed, unresolved = _screen_candidates(prepped, names, per_var_boxes)
    if not confirmed and not unresolved:
        return Infeasible(names)
    return Solutions(names, tuple(confirmed + unresolved))


def _as_univariate(p: MultiPoly, var: str) -> MultiPoly:
    """Rebuild an eliminant in the one-variable ring for isolation."""
    ring = poly_ring([var])
    names = p.variables
    idx = names.index(var)
    data = {}
    for mono, coeff in p.terms().items():
        if any(k for i, k in enumerate(mono) if i != idx):
            raise AlgebraError(f"eliminant not univariate in {var}")
        data[(mono[idx],)] = coeff
    return MultiPoly.from_terms([var], data)


def _dedupe_boxes(boxes: list[IsolatingBox]) -> list[IsolatingBox]:
    out: list[IsolatingBox] = []
    for b in sorted(boxes, key=lambda b: (b.low, b.high)):
        dup = False
        for c in out:
            if b.exact is not None and c.exact is not None:
                dup = b.exact == c.exact
            else:
                dup = b.low == c.low and b.high == c.high and b.poly == c.poly
            if dup:
                break
        if not dup:
            out.append(b)
    return out
