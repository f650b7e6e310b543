"""Subdivision masks, their Laurent symbols, and pseudo-spline families.

A mask is a finitely supported symmetric sequence of reals indexed by
centered integer offsets.  Its symbol is the Laurent polynomial
``p(z) = sum_a p_a z**a``, which on the unit circle ``z = exp(-i x)``
becomes the real trigonometric polynomial
``p(x) = p_0 + sum_{a>0} 2 p_a cos(a x)``.

Mask construction is carried out in exact rational arithmetic and only
converted to floating point for evaluation, so the pseudo-spline
coefficients are bit-exact rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import InvalidOrder, OrderTooLarge, ParseError

#: Largest supported analytic derivative order of a mask symbol.  Beyond
#: this, the scale factors a**k amplify rounding in the cosine series to
#: the point where zero tests become meaningless.
MAX_DERIVATIVE_ORDER = 12


class LaurentPoly:
    """Laurent polynomial with coefficients keyed by integer exponent.

    Coefficients may be exact (``Fraction``/``int``) or floating point;
    arithmetic follows the coefficient type.  Zero coefficients are not
    stored.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients=None):
        data = {}
        if coefficients:
            for k, v in coefficients.items():
                if v != 0:
                    data[int(k)] = v
        self.coefficients = data

    @classmethod
    def monomial(cls, exponent, value=1):
        return cls({exponent: value})

    @property
    def is_zero(self):
        return not self.coefficients

    @property
    def support(self):
        """Smallest and largest exponent with nonzero coefficient."""
        if self.is_zero:
            raise ValueError("zero polynomial has empty support")
        keys = self.coefficients.keys()
        return min(keys), max(keys)

    def max_abs(self):
        if self.is_zero:
            return 0.0
        return max(abs(v) for v in self.coefficients.values())

    def shift(self, k):
        """Multiply by z**k."""
        return LaurentPoly({a + k: v for a, v in self.coefficients.items()})

    def to_float_dict(self):
        return {a: float(v) for a, v in self.coefficients.items()}

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __add__(self, other):
        data = dict(self.coefficients)
        for a, v in other.coefficients.items():
            data[a] = data.get(a, 0) + v
        return LaurentPoly(data)

    def __neg__(self):
        return LaurentPoly({a: -v for a, v in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            data = {}
            for a, u in self.coefficients.items():
                for b, v in other.coefficients.items():
                    k = a + b
                    data[k] = data.get(k, 0) + u * v
            return LaurentPoly(data)
        return LaurentPoly({a: v * other for a, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divide(self, divisor):
        """Long division: returns ``(quotient, remainder)``.

        Exact when coefficients are rational; in floating point the
        remainder carries the rounding.
        """
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return LaurentPoly(), LaurentPoly()
        lo_n, hi_n = self.support
        lo_d, hi_d = divisor.support
        # Work on ordinary polynomials after factoring out z**lo.
        num = [self.coefficients.get(hi_n - i, 0) for i in range(hi_n - lo_n + 1)]
        den = [divisor.coefficients.get(hi_d - i, 0) for i in range(hi_d - lo_d + 1)]
        quot = []
        while len(num) >= len(den):
            c = num[0] / den[0]
            quot.append(c)
            for i in range(len(den)):
                num[i] = num[i] - c * den[i]
            num.pop(0)
        deg_q = len(quot) - 1
        q = LaurentPoly(
            {lo_n - lo_d + (deg_q - i): c for i, c in enumerate(quot)}
        )
        r = LaurentPoly(
            {lo_n + (len(num) - 1 - i): c for i, c in enumerate(num)}
        )
        return q, r

    def __repr__(self):
        items = ", ".join(f"{a}: {v}" for a, v in sorted(self.coefficients.items()))
        return f"LaurentPoly({{{items}}})"


class SubdivisionSymbol:
    """Finitely supported symmetric mask of a subdivision scheme.

    Parameters
    ----------
    coefficients : mapping int -> number
        Mask values keyed by centered offset.  Symmetry ``p[-a] == p[a]``
        is required; values are stored exactly as ``Fraction``.
    arity : int
        Dilation factor ``g >= 2`` of the scheme, which is also the
        coarsening ratio of the induced grid transfer operator.
    """

    def __init__(self, coefficients, arity):
        arity = int(arity)
        if arity < 2:
            raise ValueError(f"arity must be >= 2, got {arity}")
        exact = {}
        for k, v in coefficients.items():
            f = Fraction(v)
            if f:
                exact[int(k)] = f
        for a, v in exact.items():
            if exact.get(-a) != v:
                raise ValueError(f"mask is not symmetric at offset {a}")
        self.arity = arity
        self._exact = exact
        pos = sorted(a for a in exact if a > 0)
        self._pos_offsets = np.array(pos, dtype=float)
        self._pos_values = np.array([float(exact[a]) for a in pos])
        self._p0 = float(exact.get(0, 0))

    @property
    def coefficients(self):
        """Mask values as floats, keyed by offset."""
        return {a: float(v) for a, v in self._exact.items()}

    @property
    def exact_coefficients(self):
        """Mask values as exact rationals, keyed by offset."""
        return dict(self._exact)

    @property
    def support_radius(self):
        """Largest offset with a nonzero coefficient (0 for the zero mask)."""
        if not self._exact:
            return 0
        return max(abs(a) for a in self._exact)

    #: Degree of the symbol as a trigonometric polynomial.
    degree = support_radius

    def max_abs_coefficient(self):
        if not self._exact:
            return 0.0
        return max(abs(float(v)) for v in self._exact.values())

    def coefficient(self, offset):
        return float(self._exact.get(offset, 0))

    def mask_sum(self):
        """Exact sum of the mask, i.e. the symbol evaluated at z = 1."""
        return sum(self._exact.values(), Fraction(0))

    def eval(self, x):
        """Evaluate the symbol at ``z = exp(-i x)``; the result is real."""
        x = np.asarray(x, dtype=float)
        if self._pos_offsets.size:
            val = self._p0 + 2.0 * np.cos(np.multiply.outer(x, self._pos_offsets)) @ self._pos_values
        else:
            val = np.full_like(x, self._p0)
        return val if val.ndim else float(val)

    def derivative_at(self, x, order):
        """Analytic derivative of order ``order`` of ``x -> p(exp(-i x))``.

        Term-by-term differentiation of the cosine series; exact up to
        floating rounding.  Orders above ``MAX_DERIVATIVE_ORDER`` raise
        ``OrderTooLarge``.
        """
        order = int(order)
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if order > MAX_DERIVATIVE_ORDER:
            raise OrderTooLarge(
                f"derivative order {order} exceeds the supported maximum "
                f"{MAX_DERIVATIVE_ORDER}"
            )
        if order == 0:
            return self.eval(x)
        x = np.asarray(x, dtype=float)
        if not self._pos_offsets.size:
            val = np.zeros_like(x)
            return val if val.ndim else float(val)
        phase = np.multiply.outer(x, self._pos_offsets) + order * np.pi / 2.0
        weights = self._pos_values * self._pos_offsets**order
        val = 2.0 * np.cos(phase) @ weights
        return val if val.ndim else float(val)

    def laurent(self):
        """The symbol as an exact-rational Laurent polynomial."""
        return LaurentPoly(dict(self._exact))

    def __eq__(self, other):
        if not isinstance(other, SubdivisionSymbol):
            return NotImplemented
        return self.arity == other.arity and self._exact == other._exact

    def __repr__(self):
        lo = -self.support_radius
        row = " ".join(str(self._exact.get(a, Fraction(0))) for a in range(lo, -lo + 1))
        return f"SubdivisionSymbol(g={self.arity}, mask=[{row}])"


def _binomial(n, k):
    return Fraction(math.comb(n, k))


def binary_pseudo_spline(J, L):
    """Mask of the binary primal pseudo-spline scheme of order (J, L).

    ``L = 0`` gives the B-spline scheme of degree ``2J - 1``;
    ``L = J - 1`` gives the interpolatory 2J-point scheme.  Requires
    ``J >= 1`` and ``0 <= L <= J - 1``.
    """
    J, L = int(J), int(L)
    if J < 1 or L < 0 or L > J - 1:
        raise InvalidOrder(f"binary pseudo-spline requires J >= 1, 0 <= L <= J-1; got ({J}, {L})")
    sigma = LaurentPoly({-1: Fraction(1, 4), 0: Fraction(1, 2), 1: Fraction(1, 4)})
    delta = LaurentPoly({-1: Fraction(-1, 4), 0: Fraction(1, 2), 1: Fraction(-1, 4)})
    q = LaurentPoly()
    for k in range(L + 1):
        q = q + _binomial(J - 1 + k, k) * delta**k
    p = 2 * (sigma**J * q)
    return SubdivisionSymbol(p.coefficients, arity=2)


def ternary_pseudo_spline(J, L):
    """Mask of the ternary primal pseudo-spline scheme of order (J, L).

    ``L = 1`` gives the ternary B-spline scheme of degree ``J``; ``L = J``
    with odd ``J`` gives the interpolatory (J+1)-point scheme.  Requires
    ``J >= 1`` and odd ``L`` with ``1 <= L <= J``.
    """
    J, L = int(J), int(L)
    if J < 1 or L < 1 or L > J or L % 2 == 0:
        raise InvalidOrder(
            f"ternary pseudo-spline requires J >= 1 and odd L with 1 <= L <= J; got ({J}, {L})"
        )
    half = (L - 1) // 2
    sigma = LaurentPoly({-1: Fraction(1, 3), 0: Fraction(1, 3), 1: Fraction(1, 3)})
    delta = LaurentPoly({-1: Fraction(-1, 3), 0: Fraction(2, 3), 1: Fraction(-1, 3)})
    q = LaurentPoly()
    for k in range(half + 1):
        q = q + _binomial(J + k, k) * delta**k
    p = 3 * (sigma ** (J + 1) * q)
    return SubdivisionSymbol(p.coefficients, arity=3)


def smoothing_factor_split(symbol, tol=1e-10):
    """Split ``p = (1 + z + ... + z**(g-1))**(d+1) * b`` with maximal d + 1.

    Returns ``(d, b)`` where ``b`` is the floating-point quotient.  When the
    factor does not divide ``p`` at all, ``d = -1`` and ``b`` equals ``p``.
    A division counts as exact when the remainder stays below ``tol``
    relative to the largest input coefficient, which gives exactly
    constructed masks machine-precision splits and user-supplied masks a
    little slack.
    """
    g = symbol.arity
    factor = LaurentPoly({k: 1.0 for k in range(g)})
    current = LaurentPoly(symbol.coefficients)
    scale = current.max_abs()
    if scale == 0.0:
        return -1, current
    count = 0
    while not current.is_zero:
        q, r = current.divide(factor)
        if r.max_abs() > tol * scale:
            break
        current = LaurentPoly(
            {a: v for a, v in q.coefficients.items() if abs(v) > 1e-14 * scale}
        )
        count += 1
    return count - 1, current


def symbol_to_text(symbol):
    """Serialize a mask to the plain-text exchange format.

    Line 1 is ``arity g``; line 2 lists the coefficients as ``num/den``
    rationals from the leftmost to the rightmost offset of the support
    window; line 3 is the 0-based index of the center coefficient.
    """
    r = symbol.support_radius
    exact = symbol.exact_coefficients
    parts = []
    for a in range(-r, r + 1):
        c = exact.get(a, Fraction(0))
        parts.append(f"{c.numerator}/{c.denominator}")
    return f"arity {symbol.arity}\n{' '.join(parts)}\n{r}\n"


def symbol_from_text(text):
    """Parse a mask from the plain-text exchange format.

    Raises ``ParseError`` on any malformed input, including masks that
    violate the symmetry requirement.
    """
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ParseError(f"expected 3 nonempty lines, got {len(lines)}")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "arity":
        raise ParseError(f"first line must be 'arity g', got {lines[0]!r}")
    try:
        arity = int(head[1])
        values = [Fraction(tok) for tok in lines[1].split()]
        center = int(lines[2])
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed symbol text: {exc}") from exc
    if not 0 <= center < len(values):
        raise ParseError(f"center index {center} outside the coefficient row")
    coeffs = {i - center: v for i, v in enumerate(values)}
    try:
        return SubdivisionSymbol(coeffs, arity)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
