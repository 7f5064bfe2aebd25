"""Exact arithmetic on linear forms x0 + x1*tau over one declared irrational.

Every scalar the engine touches is an ExactReal: a pair of Fractions (x0, x1)
read as x0 + x1*tau, where tau is fixed by a NumberContext and is either
absent (rational context), a quadratic surd sqrt(d), or pi.  No decision path
ever consults floating point: sign queries over a surd are settled
algebraically, and sign queries over pi refine a certified rational enclosure
until the interval for the value excludes zero (which always happens unless
the value is exactly zero, detected coefficient-wise).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import (
    ContextMismatch,
    NonPositiveModulus,
    NotOnLattice,
    PrecisionExhausted,
)

RationalLike = Union[int, Fraction]

_PI_START_BITS = 64
_DEFAULT_MAX_BITS = 4096


def square_free_decompose(n: int) -> Tuple[int, int]:
    """Write n = s*s*d with d square-free; returns (s, d)."""
    if n <= 0:
        raise ValueError("square_free_decompose needs a positive integer")
    s, d, f = 1, 1, 2
    m = n
    while f * f <= m:
        e = 0
        while m % f == 0:
            m //= f
            e += 1
        s *= f ** (e // 2)
        if e % 2:
            d *= f
        f += 1
    d *= m
    return s, d


def _raw_mpf_to_fraction(raw) -> Fraction:
    # raw is mpmath's (sign, mantissa, exponent, bitcount) tuple; the
    # mantissa may be a gmpy2 integer, which must not leak into Fractions
    # (pre-3.12 Fraction arithmetic would keep the foreign type alive)
    sign, man, exp, _ = raw
    val = Fraction(int(man))
    exp = int(exp)
    if exp >= 0:
        val *= 2**exp
    else:
        val /= 2 ** (-exp)
    return -val if sign else val


def _pi_enclosure(bits: int) -> Tuple[Fraction, Fraction]:
    """Certified rational interval containing pi, width about 2**-bits."""
    from mpmath import libmp

    lo = _raw_mpf_to_fraction(libmp.mpf_pi(bits, "d"))
    hi = _raw_mpf_to_fraction(libmp.mpf_pi(bits, "u"))
    assert lo < hi
    return lo, hi


def _sqrt_enclosure(d: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Certified rational interval containing sqrt(d), width 2**-bits."""
    scale = 1 << bits
    n = math.isqrt(d * scale * scale)
    return Fraction(n, scale), Fraction(n + 1, scale)


class NumberContext:
    """The base irrational tau that ExactReal coefficients multiply.

    kind is one of "rational", "surd" (tau = sqrt(d), d square-free >= 2) or
    "pi".  The pi context owns a refinable enclosure; refinement is locked so
    values can be shared across worker threads.
    """

    def __init__(self, kind: str, d: Optional[int] = None, max_bits: int = _DEFAULT_MAX_BITS):
        if kind not in ("rational", "surd", "pi"):
            raise ValueError(f"unknown context kind {kind!r}")
        if kind == "surd":
            if d is None or d < 2:
                raise ValueError("surd context needs an integer d >= 2")
            s, d0 = square_free_decompose(d)
            if d0 == 1:
                raise ValueError(f"sqrt({d}) is rational; use the rational context")
            # the context itself always carries the square-free part
            d = d0
        else:
            d = None
        self.kind = kind
        self.d = d
        self.max_bits = max_bits
        self._bits = _PI_START_BITS
        self._lock = threading.Lock()
        self._cache: Optional[Tuple[Fraction, Fraction]] = None

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]  # locks cannot cross process boundaries
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, NumberContext)
            and self.kind == other.kind
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.kind, self.d))

    def __repr__(self):
        if self.kind == "surd":
            return f"NumberContext(surd, d={self.d})"
        return f"NumberContext({self.kind})"

    @property
    def basis_symbol(self) -> str:
        if self.kind == "pi":
            return "pi"
        if self.kind == "surd":
            return f"sqrt({self.d})"
        raise ValueError("rational context has no irrational basis")

    # -- enclosure ---------------------------------------------------------
    def enclosure(self) -> Tuple[Fraction, Fraction]:
        """Current certified interval for tau."""
        if self.kind == "rational":
            raise ValueError("rational context has no enclosure")
        with self._lock:
            if self._cache is None:
                self._cache = self._compute(self._bits)
            return self._cache

    def refine(self) -> Tuple[Fraction, Fraction]:
        """Halve (at least) the enclosure width; PrecisionExhausted past the cap."""
        with self._lock:
            if self._bits * 2 > self.max_bits:
                raise PrecisionExhausted(
                    f"enclosure for {self.basis_symbol} already at {self._bits} bits "
                    f"(cap {self.max_bits})"
                )
            self._bits *= 2
            self._cache = self._compute(self._bits)
            return self._cache

    def _compute(self, bits: int) -> Tuple[Fraction, Fraction]:
        if self.kind == "pi":
            return _pi_enclosure(bits)
        return _sqrt_enclosure(self.d, bits)

    # -- construction ------------------------------------------------------
    def num(self, x0: RationalLike = 0, x1: RationalLike = 0) -> "ExactReal":
        return ExactReal(self, Fraction(x0), Fraction(x1))


RATIONAL = NumberContext("rational")


def pi_context(max_bits: int = _DEFAULT_MAX_BITS) -> NumberContext:
    return NumberContext("pi", max_bits=max_bits)


def surd_context(d: int, max_bits: int = _DEFAULT_MAX_BITS) -> NumberContext:
    return NumberContext("surd", d=d, max_bits=max_bits)


def rat(x: RationalLike) -> "ExactReal":
    """Shorthand for a rational-context value."""
    return ExactReal(RATIONAL, Fraction(x), Fraction(0))


@dataclass(frozen=True)
class ExactReal:
    """x0 + x1*tau with exact rational coefficients; immutable."""

    ctx: NumberContext
    x0: Fraction
    x1: Fraction

    def __post_init__(self):
        if self.ctx.kind == "rational" and self.x1 != 0:
            raise ContextMismatch("rational context cannot carry a tau coefficient")

    # -- plumbing ----------------------------------------------------------
    def _join(self, other: "ExactReal") -> NumberContext:
        if self.ctx != other.ctx:
            # a pure rational is welcome in any context
            if self.ctx.kind == "rational":
                return other.ctx
            if other.ctx.kind == "rational":
                return self.ctx
            raise ContextMismatch(f"cannot mix {self.ctx!r} with {other.ctx!r}")
        return self.ctx

    def _coerce(self, other) -> "ExactReal":
        if isinstance(other, ExactReal):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactReal(RATIONAL, Fraction(other), Fraction(0))
        return NotImplemented

    @property
    def is_rational_value(self) -> bool:
        return self.x1 == 0

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self._join(o)
        return ExactReal(ctx, self.x0 + o.x0, self.x1 + o.x1)

    __radd__ = __add__

    def __neg__(self):
        return ExactReal(self.ctx, -self.x0, -self.x1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.__add__(-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self._join(o)
        cross = self.x0 * o.x1 + self.x1 * o.x0
        if self.x1 != 0 and o.x1 != 0:
            if ctx.kind == "surd":
                return ExactReal(ctx, self.x0 * o.x0 + self.x1 * o.x1 * ctx.d, cross)
            raise ValueError("product of two pi-terms leaves the linear form")
        return ExactReal(ctx, self.x0 * o.x0, cross)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self._join(o)
        if o.x0 == 0 and o.x1 == 0:
            raise ZeroDivisionError("division by exact zero")
        if o.x1 == 0:
            return ExactReal(ctx, self.x0 / o.x0, self.x1 / o.x0)
        if ctx.kind == "surd":
            # multiply by the conjugate; the norm x0^2 - d*x1^2 is a nonzero rational
            norm = o.x0 * o.x0 - ctx.d * o.x1 * o.x1
            num = self * ExactReal(ctx, o.x0, -o.x1)
            return ExactReal(ctx, num.x0 / norm, num.x1 / norm)
        q = self.ratio(o)
        if q is None:
            raise ValueError("quotient leaves the linear form over pi")
        return ExactReal(ctx, q, Fraction(0))

    def ratio(self, other: "ExactReal") -> Optional[Fraction]:
        """self/other as an exact Fraction, or None if the quotient is not rational."""
        o = self._coerce(other)
        self._join(o)
        if o.x0 == 0 and o.x1 == 0:
            raise ZeroDivisionError("ratio with exact zero")
        if o.x1 == 0:
            if self.x1 != 0:
                return None
            return self.x0 / o.x0
        if o.x0 == 0:
            if self.x0 != 0:
                return None
            return self.x1 / o.x1
        if self.x0 == 0 and self.x1 == 0:
            return Fraction(0)
        q = self.x1 / o.x1
        if self.x0 == q * o.x0:
            return q
        return None

    # -- decisions ----------------------------------------------------------
    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}; refines the pi enclosure as needed."""
        if self.x1 == 0:
            return _sgn(self.x0)
        if self.x0 == 0:
            return _sgn(self.x1)  # tau > 0 for every supported basis
        s0, s1 = _sgn(self.x0), _sgn(self.x1)
        if s0 == s1:
            return s0
        if self.ctx.kind == "surd":
            lhs = self.x0 * self.x0
            rhs = self.x1 * self.x1 * self.ctx.d
            if lhs == rhs:
                raise AssertionError(
                    "sqrt(d) compared equal to a rational; context is corrupt"
                )
            return s0 if lhs > rhs else s1
        # pi context: refine until the interval excludes zero
        while True:
            lo, hi = self.interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.ctx.refine()

    def interval(self) -> Tuple[Fraction, Fraction]:
        """Rational interval containing the value, at current enclosure precision."""
        if self.x1 == 0 or self.ctx.kind == "rational":
            return self.x0, self.x0
        tlo, thi = self.ctx.enclosure()
        if self.x1 > 0:
            return self.x0 + self.x1 * tlo, self.x0 + self.x1 * thi
        return self.x0 + self.x1 * thi, self.x0 + self.x1 * tlo

    def __float__(self):
        lo, hi = self.interval()
        return float((lo + hi) / 2)

    def is_zero(self) -> bool:
        return self.x0 == 0 and self.x1 == 0

    # -- order --------------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        self._join(o)
        return self.x0 == o.x0 and self.x1 == o.x1

    def __hash__(self):
        return hash((self.ctx, self.x0, self.x1))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # -- rendering ----------------------------------------------------------
    def render(self) -> str:
        """Canonical expression string; parse_number round-trips it."""
        parts = []
        if self.x0 != 0 or self.x1 == 0:
            parts.append(_render_fraction(self.x0))
        if self.x1 != 0:
            basis = self.ctx.basis_symbol
            mag = abs(self.x1)
            term = basis if mag == 1 else f"{_render_fraction(mag)}*{basis}"
            if not parts:
                parts.append(term if self.x1 > 0 else f"-{term}")
            else:
                parts.append(f"+{term}" if self.x1 > 0 else f"-{term}")
        return "".join(parts)

    def __repr__(self):
        return f"ExactReal({self.render()})"


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _render_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x: ExactReal) -> int:
    return x.sign()


def floor_div(t: ExactReal, a: ExactReal) -> int:
    """The unique integer k with k*a <= t < (k+1)*a, for a > 0; exact."""
    if not isinstance(t, ExactReal):
        t = rat(t)
    if not isinstance(a, ExactReal):
        a = rat(a)
    if a.sign() <= 0:
        raise NonPositiveModulus(f"floor_div modulus {a!r} is not positive")
    ctx = t._join(a)
    if t.x1 == 0 and a.x1 == 0:
        return (t.x0 / a.x0).__floor__()
    q = t.ratio(a)
    if q is not None:
        return q.__floor__()
    # interval estimate, then exact certification of the candidate
    while True:
        tlo, thi = t.interval()
        alo, ahi = a.interval()
        if alo <= 0:
            ctx.refine()
            continue
        k_lo = (tlo / ahi).__floor__()
        k_hi = (thi / alo).__floor__()
        if k_hi - k_lo <= 1:
            for k in (k_hi, k_lo):
                if (t - k * a).sign() >= 0 and (t - (k + 1) * a).sign() < 0:
                    return k
            raise AssertionError("floor_div certification failed for both candidates")
        ctx.refine()


def mod(t: ExactReal, a: ExactReal) -> ExactReal:
    """t reduced into [0, a)."""
    return t - floor_div(t, a) * a


def lattice_gcd(x: ExactReal, y: ExactReal, r: ExactReal) -> ExactReal:
    """gcd of x and y inside the lattice r*Z (all three positive)."""
    for v, name in ((x, "x"), (y, "y"), (r, "r")):
        if v.sign() <= 0:
            raise NotOnLattice(f"lattice_gcd argument {name} must be positive")
    ints = []
    for v in (x, y):
        q = v.ratio(r)
        if q is None or q.denominator != 1:
            raise NotOnLattice(f"{v!r} is not an integer multiple of {r!r}")
        ints.append(q.numerator)
    return math.gcd(*ints) * r
