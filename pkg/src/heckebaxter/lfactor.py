"""Complex Gamma function and Archimedean L-factors.

The L-factor attached to a principal series with spectral parameters
gamma_1..gamma_{ell+1} is

    L(s; c) = prod_j (2c)^((s - i*gamma_j)/2) * Gamma((s - i*gamma_j)/2),

a positive-real-torsor worth of normalisations; the classical arithmetic
normalisation is the section 2c = 1/pi.  These values are the reference
eigenvalues of the convolution checks in :mod:`heckebaxter.harmonic`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


class GammaPoleError(ArithmeticError):
    """Gamma evaluated at (or within 1e-12 of) a non-positive integer."""


class GammaOverflowError(OverflowError):
    """|Gamma(z)| exceeds the double-precision range."""


# Lanczos rational approximation (Godfrey coefficients, g = 607/128,
# 15 terms).  Relative error below ~1e-13 on the right half plane.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_POLE_TOL = 1e-12
_EXP_LIMIT = 709.0  # log of the largest finite double, minus slack


def _near_nonpositive_integer(z: complex) -> bool:
    if abs(z.imag) > _POLE_TOL:
        return False
    n = round(z.real)
    return n <= 0 and abs(z.real - n) <= _POLE_TOL


def _lanczos_right(z: complex) -> complex:
    # Valid for Re(z) >= 0.5; z shifted down by one internally.
    w = z - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    # t^(w+1/2) e^(-t) via the exponential to catch overflow early.
    expo = (w + 0.5) * cmath.log(t) - t
    if expo.real > _EXP_LIMIT:
        raise GammaOverflowError(f"Gamma overflow at z={z}")
    return math.sqrt(2.0 * math.pi) * cmath.exp(expo) * acc


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex z, relative error <= 1e-12 for |z| <= 20.

    Lanczos approximation on Re(z) >= 0.5 and the reflection formula
    Gamma(z)Gamma(1-z) = pi/sin(pi z) on the left half plane.  Raises
    GammaPoleError within 1e-12 of a non-positive integer rather than
    returning a huge value: verification code must fail loudly.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise GammaPoleError(f"Gamma pole at z={z}")
    if z.real >= 0.5:
        out = _lanczos_right(z)
    else:
        s = cmath.sin(cmath.pi * z)
        if s == 0:
            raise GammaPoleError(f"Gamma pole at z={z}")
        out = cmath.pi / (s * _lanczos_right(1.0 - z))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise GammaOverflowError(f"Gamma overflow at z={z}")
    return out


@dataclass(frozen=True)
class LFactorParams:
    """Spectral data (ell, gamma_1..gamma_{ell+1}, s, c) of an L-factor."""

    ell: int
    gamma: tuple
    s: complex
    c: float

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be non-negative")
        gamma = tuple(complex(g) for g in self.gamma)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "s", complex(self.s))
        if len(gamma) != self.ell + 1:
            raise ValueError(
                f"gamma must have ell+1 = {self.ell + 1} entries, got {len(gamma)}"
            )
        if not self.c > 0:
            raise ValueError("c must be positive")
        for g in gamma:
            if (self.s - 1j * g).real <= 0:
                raise ValueError(
                    f"Re(s - i*gamma_j) must be positive (gamma_j={g}, s={self.s})"
                )


def l_factor_terms(params: LFactorParams) -> list:
    """Per-j factors (2c)^((s-i*gamma_j)/2) Gamma((s-i*gamma_j)/2)."""
    log2c = math.log(2.0 * params.c)
    out = []
    for g in params.gamma:
        w = (params.s - 1j * g) / 2.0
        out.append(cmath.exp(w * log2c) * complex_gamma(w))
    return out


def l_factor(params: LFactorParams) -> complex:
    """The Archimedean L-factor: product of the per-gamma_j terms."""
    out = 1.0 + 0.0j
    for t in l_factor_terms(params):
        out *= t
    return out


def l_factor_canonical(ell: int, gamma, s: complex) -> complex:
    """L-factor on the arithmetic section 2c = 1/pi."""
    return l_factor(LFactorParams(ell, tuple(gamma), s, 0.5 / math.pi))
