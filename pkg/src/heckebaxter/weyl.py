"""Exact engine for normal-ordered polynomial differential operators.

Operators act on functions of the matrix entries ``x[i,j]`` of an
``n x n`` real matrix (``n = ell + 1``).  A term is a normal-ordered
monomial  ``x^A d^B``  (all multiplications in front of all partial
derivatives) with an exact coefficient: a Laurent polynomial in one
formal positive symbol ``c`` whose coefficients are Gaussian rationals.
Everything here is exact; no floating point enters any identity.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Iterator, NamedTuple


class DimensionMismatchError(ValueError):
    """Raised when two operators over different matrix sizes are combined."""


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other):
        other = _coerce_gr(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_gr(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce_gr(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_gr(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i" if self.im != 1 else "i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imtxt = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{imtxt}"


def _coerce_gr(v) -> GaussianRational:
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussianRational(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to GaussianRational")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class CoeffPoly:
    """Laurent polynomial in the formal symbol ``c`` over Gaussian rationals.

    Stored as a map from integer exponent (possibly negative) to a nonzero
    GaussianRational.  The central element of the Heisenberg algebra is the
    scalar ``i*c`` and its inverse is ``-i*c^-1``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, v in terms.items():
                v = _coerce_gr(v)
                if v:
                    clean[int(k)] = v
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffPoly is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "CoeffPoly":
        return cls()

    @classmethod
    def scalar(cls, v) -> "CoeffPoly":
        return cls({0: _coerce_gr(v)})

    @classmethod
    def c_power(cls, k: int, v=1) -> "CoeffPoly":
        return cls({k: _coerce_gr(v)})

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = _coerce_cp(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return CoeffPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce_cp(other))

    def __neg__(self):
        return CoeffPoly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        other = _coerce_cp(other)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                s = out.get(k, ZERO) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return CoeffPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = _coerce_cp(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -------------------------------------------------------
    def is_constant(self) -> bool:
        """True when no power of c appears (exponent 0 only, or zero)."""
        return all(k == 0 for k in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(0, ZERO)

    def substitute_c(self, value: Fraction) -> GaussianRational:
        """Exact specialisation of the formal symbol c to a rational value."""
        value = _as_fraction(value)
        out = ZERO
        for k, v in self.terms.items():
            out = out + v * GaussianRational(value**k)
        return out

    def __complex__(self):
        return complex(self.constant_value())

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            v = self.terms[k]
            if k == 0:
                bits.append(f"({v})")
            elif k == 1:
                bits.append(f"({v})c")
            else:
                bits.append(f"({v})c^{k}")
        return " + ".join(bits)

    __repr__ = __str__


def _coerce_cp(v) -> CoeffPoly:
    if isinstance(v, CoeffPoly):
        return v
    if isinstance(v, (int, Fraction, GaussianRational)):
        return CoeffPoly.scalar(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to CoeffPoly")


CP_ZERO = CoeffPoly.zero()
CP_ONE = CoeffPoly.scalar(1)
# Central element C = i*c of the Heisenberg algebra and its inverse.
CP_CENTRAL = CoeffPoly.c_power(1, I)
CP_CENTRAL_INV = CoeffPoly.c_power(-1, -I)


class WeylMonomial(NamedTuple):
    """Normal-ordered monomial: x-exponents then d-exponents, slotwise."""

    xdeg: tuple
    ddeg: tuple

    @property
    def degree(self):
        return sum(self.xdeg) + sum(self.ddeg)


def _falling(c: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= c - t
    return out


def _slot(dim: int, i: int, j: int) -> int:
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise IndexError(f"index ({i},{j}) out of range for dim {dim}")
    return (i - 1) * dim + (j - 1)


class WeylOp:
    """A finite sum of normal-ordered monomials with CoeffPoly coefficients.

    Canonical form: no zero coefficients are stored, so two operators are
    equal iff their term maps are equal.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        nslots = dim * dim
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _coerce_cp(coeff)
                if not coeff:
                    continue
                if not isinstance(mono, WeylMonomial):
                    mono = WeylMonomial(tuple(mono[0]), tuple(mono[1]))
                if len(mono.xdeg) != nslots or len(mono.ddeg) != nslots:
                    raise ValueError("monomial has wrong number of slots")
                clean[mono] = coeff
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("WeylOp is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "WeylOp":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, coeff) -> "WeylOp":
        z = (0,) * (dim * dim)
        return cls(dim, {WeylMonomial(z, z): coeff})

    @classmethod
    def one(cls, dim: int) -> "WeylOp":
        return cls.scalar(dim, 1)

    @classmethod
    def x(cls, dim: int, i: int, j: int, coeff=1) -> "WeylOp":
        z = [0] * (dim * dim)
        xd = list(z)
        xd[_slot(dim, i, j)] = 1
        return cls(dim, {WeylMonomial(tuple(xd), tuple(z)): coeff})

    @classmethod
    def d(cls, dim: int, i: int, j: int, coeff=1) -> "WeylOp":
        z = [0] * (dim * dim)
        dd = list(z)
        dd[_slot(dim, i, j)] = 1
        return cls(dim, {WeylMonomial(tuple(z), tuple(dd)): coeff})

    @classmethod
    def monomial(cls, dim: int, xdeg, ddeg, coeff=1) -> "WeylOp":
        return cls(dim, {WeylMonomial(tuple(xdeg), tuple(ddeg)): coeff})

    # -- linear structure ----------------------------------------------
    def _check(self, other: "WeylOp"):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dim {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "WeylOp") -> "WeylOp":
        self._check(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, CP_ZERO) + coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return WeylOp(self.dim, out)

    def __sub__(self, other: "WeylOp") -> "WeylOp":
        return self + (-other)

    def __neg__(self) -> "WeylOp":
        return WeylOp(self.dim, {m: -c for m, c in self.terms.items()})

    def scale(self, coeff) -> "WeylOp":
        coeff = _coerce_cp(coeff)
        return WeylOp(self.dim, {m: coeff * c for m, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, CoeffPoly)):
            return self.scale(other)
        return NotImplemented

    # -- multiplication (normal ordering) -------------------------------
    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, CoeffPoly)):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for (ax, ad), ca in self.terms.items():
            for (bx, bd), cb in other.terms.items():
                coeff = ca * cb
                for mult, xdeg, ddeg in _reorder(ax, ad, bx, bd):
                    mono = WeylMonomial(xdeg, ddeg)
                    cur = acc.get(mono, CP_ZERO) + (
                        coeff if mult == 1 else coeff * mult
                    )
                    if cur:
                        acc[mono] = cur
                    else:
                        acc.pop(mono, None)
        return WeylOp(self.dim, acc)

    def bracket(self, other: "WeylOp") -> "WeylOp":
        """Commutator [self, other] = self*other - other*self."""
        return self * other - other * self

    # -- involutions -----------------------------------------------------
    def adjoint(self) -> "WeylOp":
        """Formal adjoint for integration by parts: x -> x, d -> -d.

        Coefficients are NOT conjugated (the contragredient convention is a
        bare minus sign); factors are reversed and the result renormal-
        ordered, so (x^A d^B)^+ = (-1)^|B| d^B x^A.
        """
        out = WeylOp.zero(self.dim)
        for (xd, dd), coeff in self.terms.items():
            sign = -1 if sum(dd) % 2 else 1
            dpart = WeylOp.monomial(self.dim, (0,) * len(xd), dd)
            xpart = WeylOp.monomial(self.dim, xd, (0,) * len(dd))
            out = out + (dpart * xpart).scale(coeff * sign)
        return out

    def gaussian_conjugate(self, c_value: Fraction | None = None) -> "WeylOp":
        """Conjugation by the Gaussian exp(-Tr(x^T x)/(2c)).

        Returns  exp(+Tr(x^T x)/2c) o self o exp(-Tr(x^T x)/2c),  i.e. the
        substitution d[i,j] -> d[i,j] - c^-1 x[i,j].  With ``c_value`` the
        formal symbol is afterwards specialised to that rational value.
        """
        n = self.dim * self.dim
        subs = {}

        def sub_d(t: int) -> "WeylOp":
            if t not in subs:
                z = [0] * n
                dd = list(z)
                dd[t] = 1
                xd = list(z)
                xd[t] = 1
                subs[t] = WeylOp(
                    self.dim,
                    {
                        WeylMonomial(tuple(z), tuple(dd)): CP_ONE,
                        WeylMonomial(tuple(xd), tuple(z)): CoeffPoly.c_power(-1, -1),
                    },
                )
            return subs[t]

        out = WeylOp.zero(self.dim)
        for (xd, dd), coeff in self.terms.items():
            term = WeylOp.monomial(self.dim, xd, (0,) * n, coeff)
            for t, b in enumerate(dd):
                for _ in range(b):
                    term = term * sub_d(t)
            out = out + term
        if c_value is not None:
            out = out.substitute_c(c_value)
        return out

    def substitute_c(self, value: Fraction) -> "WeylOp":
        return WeylOp(
            self.dim,
            {m: CoeffPoly.scalar(c.substitute_c(value)) for m, c in self.terms.items()},
        )

    # -- action on polynomials -------------------------------------------
    def is_polynomial(self) -> bool:
        return all(sum(m.ddeg) == 0 for m in self.terms)

    def apply_to(self, poly: "WeylOp") -> "WeylOp":
        """Apply the operator to a polynomial in the x-variables."""
        self._check(poly)
        if not poly.is_polynomial():
            raise ValueError("apply_to expects a polynomial (no d factors)")
        prod = self * poly
        kept = {m: c for m, c in prod.terms.items() if sum(m.ddeg) == 0}
        return WeylOp(self.dim, kept)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        """True when only the empty monomial (a central scalar) appears."""
        return all(m.degree == 0 for m in self.terms)

    def scalar_part(self) -> CoeffPoly:
        z = WeylMonomial((0,) * (self.dim * self.dim), (0,) * (self.dim * self.dim))
        return self.terms.get(z, CP_ZERO)

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (m.degree, m.xdeg, m.ddeg)):
            coeff = self.terms[mono]
            names = []
            for t, e in enumerate(mono.xdeg):
                if e:
                    i, j = divmod(t, self.dim)
                    names.append(f"x[{i+1},{j+1}]" + (f"^{e}" if e > 1 else ""))
            for t, e in enumerate(mono.ddeg):
                if e:
                    i, j = divmod(t, self.dim)
                    names.append(f"d[{i+1},{j+1}]" + (f"^{e}" if e > 1 else ""))
            head = "*".join(names) if names else "1"
            bits.append(f"({coeff})*{head}")
        return " + ".join(bits)

    __repr__ = __str__


def _reorder(ax, ad, bx, bd) -> Iterator[tuple]:
    """Normal-order the middle of (x^ax d^ad)*(x^bx d^bd).

    Slotwise Weyl relation:  d^b x^c = sum_k  C(b,k) * c!/(c-k)! * x^(c-k) d^(b-k).
    Yields (integer multiplier, xdeg, ddeg) triples.
    """
    hot = [t for t in range(len(ax)) if ad[t] and bx[t]]
    if not hot:
        yield 1, tuple(a + b for a, b in zip(ax, bx)), tuple(
            a + b for a, b in zip(ad, bd)
        )
        return
    choices = []
    for t in hot:
        b, c = ad[t], bx[t]
        choices.append(
            [(t, k, comb(b, k) * _falling(c, k)) for k in range(min(b, c) + 1)]
        )
    for pick in itertools.product(*choices):
        mult = 1
        xdeg = [a + b for a, b in zip(ax, bx)]
        ddeg = [a + b for a, b in zip(ad, bd)]
        for t, k, m in pick:
            mult *= m
            xdeg[t] -= k
            ddeg[t] -= k
        if mult:
            yield mult, tuple(xdeg), tuple(ddeg)


def eval_at_identity(poly: WeylOp) -> CoeffPoly:
    """Evaluate a polynomial at the identity matrix x[i,j] = delta_ij."""
    if not poly.is_polynomial():
        raise ValueError("eval_at_identity expects a polynomial")
    dim = poly.dim
    out = CP_ZERO
    for mono, coeff in poly.terms.items():
        if all(e == 0 or t // dim == t % dim for t, e in enumerate(mono.xdeg)):
            out = out + coeff
    return out


def polynomial_monomials(dim: int, max_degree: int) -> Iterator[WeylOp]:
    """All monomials 1, x[i,j], x*x, ... of total degree <= max_degree."""
    n = dim * dim
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            xd = [0] * n
            for t in combo:
                xd[t] += 1
            yield WeylOp.monomial(dim, xd, (0,) * n)
