"""Exact arithmetic foundation.

Arbitrary-precision rationals, multivariate polynomials over Q, rational
functions in a distinguished curve parameter, resultants, and certified real
root isolation.  Everything here is immutable after construction and all
operations are pure, so values can be shared freely across concurrent
queries.

Polynomials are backed by SymPy's sparse polynomial rings (``sympy.polys.rings``)
with GMP rationals as ground type.  Rational functions keep their own
reduced-form arithmetic on top of those rings: products and powers of reduced
fractions are combined with cross-cancellation (Henrici's scheme) instead of
full-product gcds, which is what makes order-8 invariant chains tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing, PolyElement
from sympy.polys.rings import ring as _make_ring
from sympy.polys.rootisolation import (
    dup_count_real_roots,
    dup_isolate_real_roots_sqf,
    dup_refine_real_root,
)

#: Exact rational scalar used throughout the package.  ``fractions.Fraction``
#: already maintains the reduced-form invariants (coprime parts, positive
#: denominator).
BigRational = Fraction


class AlgebraError(ValueError):
    """Invalid algebraic operation (zero denominator, degenerate resultant...)."""


class LimitExceeded(RuntimeError):
    """A configured degree or coefficient-size cap was exceeded."""


@dataclass(frozen=True)
class Caps:
    """Resource caps for symbolic computations.

    ``max_degree`` bounds the degree (in any one variable) of intermediate
    polynomials produced by elimination; ``max_bits`` bounds the bit length of
    any single integer appearing in a coefficient.
    """

    max_degree: int = 3000
    max_bits: int = 400_000

    def check(self, p: PolyElement) -> None:
        if not p:
            return
        ring = p.ring
        for i in range(ring.ngens):
            if p.degree(i) > self.max_degree:
                raise LimitExceeded(
                    f"degree {p.degree(i)} in {ring.symbols[i]} exceeds cap {self.max_degree}"
                )
        # Sampling the leading coefficient is enough to catch runaway growth.
        c = p.LC
        if c.numerator.bit_length() + c.denominator.bit_length() > self.max_bits:
            raise LimitExceeded("coefficient size exceeds cap")


DEFAULT_CAPS = Caps()

# ---------------------------------------------------------------------------
# ring management
# ---------------------------------------------------------------------------

_RING_CACHE: dict[tuple[str, ...], PolyRing] = {}


def poly_ring(variables: Sequence[str]) -> PolyRing:
    """Return the cached sparse polynomial ring Q[variables] (lex order)."""
    key = tuple(variables)
    if not key:
        raise AlgebraError("a polynomial ring needs at least one variable")
    if len(set(key)) != len(key):
        raise AlgebraError(f"duplicate variables in {key}")
    cached = _RING_CACHE.get(key)
    if cached is None:
        cached = _make_ring(",".join(key), QQ)[0]
        _RING_CACHE[key] = cached
    return cached


def _ring_names(ring: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def _to_qq(value) -> object:
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _unify_raw(a: PolyElement, b: PolyElement) -> tuple[PolyElement, PolyElement, PolyRing]:
    """Embed two raw polynomials in a common ring (left operand's order first)."""
    if a.ring is b.ring:
        return a, b, a.ring
    na, nb = _ring_names(a.ring), _ring_names(b.ring)
    if na == nb:
        return a, b.set_ring(a.ring), a.ring
    merged = list(na) + [n for n in nb if n not in na]
    ring = poly_ring(merged)
    return a.set_ring(ring), b.set_ring(ring), ring


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------


class MultiPoly:
    """Immutable multivariate polynomial with exact rational coefficients.

    Stored sparsely as a map exponent-vector -> coefficient; zero coefficients
    are never kept.  Use :meth:`from_terms` to build one directly, or parse a
    curve and take numerators.
    """

    __slots__ = ("raw",)

    def __init__(self, raw: PolyElement):
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("MultiPoly is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_terms(
        cls, variables: Sequence[str], terms: Mapping[tuple[int, ...], Fraction | int]
    ) -> "MultiPoly":
        ring = poly_ring(variables)
        data = {}
        for expo, coeff in terms.items():
            if len(expo) != ring.ngens:
                raise AlgebraError("exponent vector length must match variable count")
            q = _to_qq(coeff)
            if q:
                data[tuple(expo)] = q
        return cls(ring.from_dict(data))

    @classmethod
    def constant(cls, variables: Sequence[str], value: Fraction | int) -> "MultiPoly":
        ring = poly_ring(variables)
        return cls(ring.ground_new(_to_qq(value)))

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        ring = poly_ring(variables)
        names = _ring_names(ring)
        return cls(ring.gens[names.index(name)])

    # -- inspection ----------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return _ring_names(self.raw.ring)

    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(m): _to_fraction(c) for m, c in self.raw.terms()}

    def degree(self, variable: str) -> int:
        names = self.variables
        if variable not in names:
            return 0
        d = self.raw.degree(names.index(variable))
        return d if d >= 0 else 0

    def total_degree(self) -> int:
        if not self.raw:
            return 0
        return max(sum(m) for m, _ in self.raw.terms())

    @property
    def is_zero(self) -> bool:
        return not self.raw

    @property
    def is_constant(self) -> bool:
        return self.raw.is_ground

    def as_fraction(self) -> Fraction:
        if not self.raw.is_ground:
            raise AlgebraError("polynomial is not constant")
        if not self.raw:
            return Fraction(0)
        return _to_fraction(self.raw.LC)

    # -- algebra -------------------------------------------------------------

    def _coerce(self, other) -> tuple[PolyElement, PolyElement]:
        if isinstance(other, MultiPoly):
            a, b, _ = _unify_raw(self.raw, other.raw)
            return a, b
        if isinstance(other, (int, Fraction)):
            return self.raw, self.raw.ring.ground_new(_to_qq(other))
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return MultiPoly(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return MultiPoly(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return MultiPoly(b - a)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return MultiPoly(a * b)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        return MultiPoly(self.raw ** n)

    def __neg__(self):
        return MultiPoly(-self.raw)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.raw.is_ground and (
                (not self.raw and other == 0)
                or (bool(self.raw) and _to_fraction(self.raw.LC) == other)
            )
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._coerce(other)
        return a == b

    __hash__ = None  # mutable-dict backing; identity hashing would mislead

    def diff(self, variable: str) -> "MultiPoly":
        names = self.variables
        if variable not in names:
            return MultiPoly(self.raw.ring.zero)
        return MultiPoly(self.raw.diff(self.raw.ring.gens[names.index(variable)]))

    def subs(self, assignment: Mapping[str, Fraction | int]) -> "MultiPoly":
        """Substitute exact rationals for a subset of the variables."""
        names = self.variables
        pairs = []
        for name, value in assignment.items():
            if name in names:
                pairs.append((self.raw.ring.gens[names.index(name)], _to_qq(value)))
        if not pairs:
            return self
        return MultiPoly(self.raw.subs(pairs))

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        out = self.subs(assignment)
        return out.as_fraction()

    def primitive(self) -> tuple[Fraction, "MultiPoly"]:
        """Split into (content, primitive part); primitive part has coprime
        integer coefficients and positive leading coefficient."""
        if not self.raw:
            return Fraction(0), self
        c, part = self.raw.primitive()
        if part.LC < 0:
            c, part = -c, -part
        return _to_fraction(c), MultiPoly(part)

    def sqf_part(self) -> "MultiPoly":
        return MultiPoly(self.raw.sqf_part())

    def factor_list(self) -> tuple[Fraction, list[tuple["MultiPoly", int]]]:
        coeff, factors = self.raw.factor_list()
        return _to_fraction(coeff), [(MultiPoly(f), int(k)) for f, k in factors]

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._coerce(other)
        return MultiPoly(a.gcd(b))

    def __str__(self):
        return str(self.raw)

    def __repr__(self):
        return f"MultiPoly({self.raw})"


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------


def _normalize_pair(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    """Scale a reduced fraction so the denominator is integer-primitive with a
    positive leading coefficient (lex order, curve parameter first)."""
    if not den:
        raise AlgebraError("denominator is identically zero")
    if not num:
        return den.ring.zero, den.ring.one
    c, den = den.primitive()
    if den.LC < 0:
        den = -den
        c = -c
    if c != 1:
        num = num.mul_ground(QQ(1) / c)
    return num, den


class RationalFunction:
    """Reduced ratio of polynomials in a distinguished curve parameter.

    The first ring variable is the curve parameter; any further variables are
    treated as symbolic coefficients (camera parameters).  Instances are kept
    in a canonical form: numerator and denominator coprime, denominator
    integer-primitive with positive leading coefficient.  Values are undefined
    where the denominator vanishes.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyElement, den: PolyElement, *, _reduced: bool = False):
        if num.ring is not den.ring:
            num, den, _ = _unify_raw(num, den)
        if not _reduced:
            if not den:
                raise AlgebraError("denominator is identically zero")
            g = num.gcd(den)
            if g != 1:
                num = num.quo(g)
                den = den.quo(g)
        num, den = _normalize_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("RationalFunction is immutable")

    # -- construction --------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunction":
        return cls(p.raw, p.raw.ring.one, _reduced=True)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Fraction | int) -> "RationalFunction":
        ring = poly_ring(variables)
        return cls(ring.ground_new(_to_qq(value)), ring.one, _reduced=True)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "RationalFunction":
        p = MultiPoly.variable(variables, name)
        return cls.from_poly(p)

    # -- inspection ----------------------------------------------------------

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def main_variable(self) -> str:
        return _ring_names(self.ring)[0]

    @property
    def variables(self) -> tuple[str, ...]:
        return _ring_names(self.ring)

    def numerator(self) -> MultiPoly:
        return MultiPoly(self.num)

    def denominator(self) -> MultiPoly:
        return MultiPoly(self.den)

    @property
    def is_zero(self) -> bool:
        return not self.num

    def is_constant_in(self, variable: str) -> bool:
        names = self.variables
        if variable not in names:
            return True
        i = names.index(variable)
        return self.num.degree(i) <= 0 and self.den.degree(i) <= 0

    @property
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def as_fraction(self) -> Fraction:
        if not self.is_constant:
            raise AlgebraError("rational function is not constant")
        if not self.num:
            return Fraction(0)
        return _to_fraction(self.num.LC) / _to_fraction(self.den.LC)

    # -- arithmetic (reduced-operand scheme) ----------------------------------

    def _coerce(self, other) -> tuple["RationalFunction", "RationalFunction"]:
        if isinstance(other, RationalFunction):
            if self.ring is other.ring:
                return self, other
            a_num, b_num, ring = _unify_raw(self.num, other.num)
            a_den = self.den.set_ring(ring)
            b_den = other.den.set_ring(ring)
            return (
                RationalFunction(a_num, a_den, _reduced=True),
                RationalFunction(b_num, b_den, _reduced=True),
            )
        if isinstance(other, (int, Fraction)):
            ring = self.ring
            return self, RationalFunction(
                ring.ground_new(_to_qq(other)), ring.one, _reduced=True
            )
        if isinstance(other, MultiPoly):
            return self._coerce(RationalFunction.from_poly(other))
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if not a.num:
            return b
        if not b.num:
            return a
        g = a.den.gcd(b.den)
        if g == 1:
            return RationalFunction(
                a.num * b.den + b.num * a.den, a.den * b.den, _reduced=True
            )
        d1 = a.den.quo(g)
        d2 = b.den.quo(g)
        t = a.num * d2 + b.num * d1
        if not t:
            return RationalFunction(a.ring.zero, a.ring.one, _reduced=True)
        h = t.gcd(g)
        return RationalFunction(t.quo(h), a.den.quo(h) * d2, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if not a.num or not b.num:
            return RationalFunction(a.ring.zero, a.ring.one, _reduced=True)
        g1 = a.num.gcd(b.den)
        g2 = b.num.gcd(a.den)
        return RationalFunction(
            a.num.quo(g1) * b.num.quo(g2),
            a.den.quo(g2) * b.den.quo(g1),
            _reduced=True,
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise AlgebraError("division by the identically-zero function")
        return RationalFunction(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise AlgebraError("only integer powers of rational functions")
        if n == 0:
            return RationalFunction(self.ring.one, self.ring.one, _reduced=True)
        base = self if n > 0 else self.inverse()
        k = abs(n)
        # reduced fraction stays reduced under powers: no gcd needed
        return RationalFunction(base.num ** k, base.den ** k, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant and self.as_fraction() == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        a, b = self._coerce(other)
        return a.num == b.num and a.den == b.den

    __hash__ = None

    # -- calculus -------------------------------------------------------------

    def diff(self) -> "RationalFunction":
        """Exact derivative with respect to the curve parameter."""
        x = self.ring.gens[0]
        p, q = self.num, self.den
        dp = p.diff(x)
        if q == 1:
            return RationalFunction(dp, self.ring.one, _reduced=True)
        dq = q.diff(x)
        g = q.gcd(dq) if dq else self.ring.one
        q1 = q.quo(g)
        t = dp * q1 - p * dq.quo(g) if dq else dp * q1
        if not t:
            return RationalFunction(self.ring.zero, self.ring.one, _reduced=True)
        den = q * q1
        h = t.gcd(den)
        if h != 1:
            t = t.quo(h)
            den = den.quo(h)
        return RationalFunction(t, den, _reduced=True)

    # -- substitution ----------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Fraction | int]) -> "RationalFunction":
        """Substitute exact rationals for coefficient variables.

        Raises :class:`AlgebraError` if the substituted denominator vanishes
        identically (the specialization is undefined as a function).
        """
        names = self.variables
        pairs = []
        for name, value in assignment.items():
            if name == self.main_variable:
                raise AlgebraError("cannot specialize the curve parameter; use evaluate")
            if name in names:
                pairs.append((self.ring.gens[names.index(name)], _to_qq(value)))
        if not pairs:
            return self
        keep = [n for n in names if n not in assignment]
        num = self.raw_subs(self.num, pairs)
        den = self.raw_subs(self.den, pairs)
        ring = poly_ring(keep)
        num = num.set_ring(ring)
        den = den.set_ring(ring)
        if not den:
            raise AlgebraError("specialization hits an identically-zero denominator")
        return RationalFunction(num, den)

    @staticmethod
    def raw_subs(p: PolyElement, pairs) -> PolyElement:
        return p.subs(pairs) if pairs else p

    def evaluate(self, value: Fraction | int) -> Fraction:
        """Evaluate a coefficient-free function at a rational parameter value."""
        if len(self.variables) != 1:
            raise AlgebraError("evaluate needs a coefficient-free function; specialize first")
        x = self.ring.gens[0]
        den = self.den.subs([(x, _to_qq(value))])
        if not den:
            raise AlgebraError(f"function undefined at {value}")
        num = self.num.subs([(x, _to_qq(value))])
        if not num:
            return Fraction(0)
        return _to_fraction(num.LC) / _to_fraction(den.LC)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """Substitute ``inner`` for the curve parameter."""
        a, b = self._coerce(inner)
        ring = a.ring
        num = _poly_compose_main(a.num, b)
        den = _poly_compose_main(a.den, b)
        if den.is_zero:
            raise AlgebraError("composition hits an identically-zero denominator")
        return num / den

    def __str__(self):
        if self.den == self.ring.one:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _poly_compose_main(p: PolyElement, inner: "RationalFunction") -> "RationalFunction":
    """Horner evaluation of p at main variable -> inner (coefficients kept)."""
    ring = p.ring
    if not p:
        return RationalFunction(ring.zero, ring.one, _reduced=True)
    # coefficients of powers of the main variable, as raw polys
    buckets: dict[int, dict] = {}
    for mono, coeff in p.terms():
        buckets.setdefault(mono[0], {})[(0,) + mono[1:]] = coeff
    top = max(buckets)
    acc = RationalFunction(ring.zero, ring.one, _reduced=True)
    for k in range(top, -1, -1):
        acc = acc * inner
        if k in buckets:
            ck = RationalFunction(ring.from_dict(buckets[k]), ring.one, _reduced=True)
            acc = acc + ck
    return acc


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


def resultant(p: MultiPoly, q: MultiPoly, variable: str) -> MultiPoly:
    """Resultant of ``p`` and ``q`` eliminating ``variable``.

    Zero exactly when the inputs share a common factor involving the
    variable.  Both inputs must have positive degree in it.
    """
    if p.degree(variable) < 1 or q.degree(variable) < 1:
        raise AlgebraError(f"resultant needs positive degree in {variable} on both sides")
    a, b, ring = _unify_raw(p.raw, q.raw)
    names = list(_ring_names(ring))
    rest = [n for n in names if n != variable]
    front = poly_ring([variable] + rest)
    r = a.set_ring(front).resultant(b.set_ring(front))
    target = poly_ring(rest) if rest else None
    if isinstance(r, PolyElement):
        if target is None:
            return MultiPoly(front.ground_new(r.LC if r else QQ(0)))
        return MultiPoly(r.set_ring(target))
    # ground value (univariate input)
    host = target if target is not None else poly_ring([variable])
    return MultiPoly(host.ground_new(r))


# ---------------------------------------------------------------------------
# real root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatingBox:
    """Certified isolating interval for one real root of ``poly``.

    Either ``exact`` is a rational root (then ``low == high == exact``) or the
    squarefree certificate changes sign across the open interval.
    """

    variable: str
    low: Fraction
    high: Fraction
    poly: MultiPoly
    exact: Fraction | None = None

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    @property
    def midpoint(self) -> Fraction:
        return (self.low + self.high) / 2

    def contains(self, value: Fraction) -> bool:
        return self.low <= value <= self.high

    def refine(self, width: Fraction) -> "IsolatingBox":
        if self.exact is not None or self.width <= width:
            return self
        dense = _to_dense_univariate(self.poly)
        lo, hi = dup_refine_real_root(
            dense, _to_qq(self.low), _to_qq(self.high), QQ, eps=_to_qq(width)
        )
        lo, hi = _to_fraction(lo), _to_fraction(hi)
        if lo > hi:
            lo, hi = hi, lo
        return IsolatingBox(self.variable, lo, hi, self.poly, None)


def _to_dense_univariate(p: MultiPoly) -> list:
    names = [n for n in p.variables if p.degree(n) > 0]
    if len(names) > 1:
        raise AlgebraError("expected a univariate polynomial")
    name = names[0] if names else p.variables[0]
    idx = p.variables.index(name)
    deg = p.raw.degree(idx) if p.raw else 0
    dense = [QQ(0)] * (deg + 1)
    for mono, coeff in p.raw.terms():
        dense[deg - mono[idx]] = coeff
    return dense


def univariate_variable(p: MultiPoly) -> str:
    """Name of the single variable a univariate polynomial actually uses."""
    names = [n for n in p.variables if p.degree(n) > 0]
    if len(names) != 1:
        raise AlgebraError("polynomial is not univariate")
    return names[0]


def rational_roots(p: MultiPoly) -> list[Fraction]:
    """All rational roots of a univariate polynomial, exactly (via factoring)."""
    var = univariate_variable(p)
    roots = []
    _, factors = p.factor_list()
    for f, _k in factors:
        if f.degree(var) == 1:
            ts = f.terms()
            names = f.variables
            i = names.index(var)
            lead = Fraction(0)
            const = Fraction(0)
            for mono, c in ts.items():
                if mono[i] == 1:
                    lead = c
                else:
                    const = c
            roots.append(-const / lead)
    return sorted(roots)


def isolate_real_roots(p: MultiPoly) -> list[IsolatingBox]:
    """Disjoint certified isolating boxes, one per distinct real root.

    The squarefree part is taken first, so multiplicities collapse.  Boxes
    whose root is rational carry it exactly in ``exact``.
    """
    if p.is_zero:
        raise AlgebraError("cannot isolate roots of the zero polynomial")
    if p.is_constant:
        return []
    var = univariate_variable(p)
    sqf = p.sqf_part()
    _, sqf = sqf.primitive()
    dense = _to_dense_univariate(sqf)
    raw_intervals = dup_isolate_real_roots_sqf(dense, QQ)
    rats = rational_roots(sqf)
    boxes = []
    for lo, hi in raw_intervals:
        lo, hi = _to_fraction(lo), _to_fraction(hi)
        if lo > hi:
            lo, hi = hi, lo
        exact = None
        for r in rats:
            if lo <= r <= hi:
                exact = r
                break
        if exact is not None:
            boxes.append(IsolatingBox(var, exact, exact, sqf, exact))
        else:
            box = IsolatingBox(var, lo, hi, sqf)
            # endpoints must not be roots for the sign-change certificate
            if _eval_univariate(sqf, lo) == 0 or _eval_univariate(sqf, hi) == 0:
                box = box.refine(box.width / 4)
            boxes.append(box)
    return boxes


def _eval_univariate(p: MultiPoly, value: Fraction) -> Fraction:
    if p.is_constant:
        return p.as_fraction()
    return p.subs({univariate_variable(p): value}).as_fraction()


def count_real_roots_in(p: MultiPoly, low: Fraction, high: Fraction) -> int:
    """Number of distinct real roots of ``p`` in [low, high] (Sturm-based)."""
    dense = _to_dense_univariate(p.sqf_part())
    return int(dup_count_real_roots(dense, QQ, _to_qq(low), _to_qq(high)))
