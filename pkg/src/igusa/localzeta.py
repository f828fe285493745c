"""Local fields, their residue constants c_F, local zeta functions and
numerical Mellin transforms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .arith import prime_power_base
from .exactcore import Polynomial, RatFun, StructuredConstant


class LocalFieldError(ValueError):
    """Invalid local field description."""


class QuadratureFailure(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


QUAD_TOL = 1e-10
QUAD_LIMIT = 10**6


@dataclass(frozen=True, slots=True)
class LocalField:
    """kind is 'real', 'complex' or 'padic'.

    For archimedean fields the Haar normalisation is given by the measure of
    [-1, 1] (real, default 2) or of the unit disc as a multiple of pi
    (complex, default 1, i.e. pi). For p-adic fields mu0 is the measure of the
    ring of integers and q the residue field size.
    """

    kind: str
    q: int | None = None
    mu0: Fraction = Fraction(1)
    mu_interval: Fraction = Fraction(2)
    mu_disc_over_pi: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.kind not in ("real", "complex", "padic"):
            raise LocalFieldError(f"unknown field kind {self.kind!r}")
        if self.kind == "padic":
            if self.q is None or prime_power_base(self.q) is None:
                raise LocalFieldError(f"q = {self.q!r} is not a prime power")
            if Fraction(self.mu0) <= 0:
                raise LocalFieldError("mu0 must be positive")
        for name in ("mu0", "mu_interval", "mu_disc_over_pi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def padic(cls, q: int, mu0=1) -> LocalField:
        return cls("padic", q, Fraction(mu0))

    @property
    def is_archimedean(self) -> bool:
        return self.kind != "padic"


REALS = LocalField("real")
COMPLEXES = LocalField("complex")


def c_constant(field: LocalField) -> StructuredConstant:
    """c_F = lim_{s -> 0} s * zeta_F(s)."""
    if field.kind == "real":
        return StructuredConstant(field.mu_interval)
    if field.kind == "complex":
        return StructuredConstant(field.mu_disc_over_pi, pi_exp=1)
    return StructuredConstant(field.mu0 * (1 - Fraction(1, field.q)), field.q, 0, -1)


@dataclass(frozen=True, slots=True)
class ArchimedeanZeta:
    """zeta_F(s) = c_F / s."""

    c: StructuredConstant

    def __call__(self, s: complex) -> complex:
        return self.c.numeric() / s


def zeta_local(field: LocalField) -> RatFun | ArchimedeanZeta:
    """Local zeta function; p-adic ones are rational in T = q^{-s}."""
    if field.kind == "padic":
        return RatFun(Polynomial.constant(field.mu0 * (1 - Fraction(1, field.q))), ((1, 1, 1),))
    return ArchimedeanZeta(c_constant(field))


def residue_measure_norm(fields: Sequence[LocalField]) -> StructuredConstant:
    """prod_alpha c_{F_alpha}: the factor turning residue measures into tau_{D_A}."""
    out = StructuredConstant(Fraction(1))
    for f in fields:
        out = out * c_constant(f)
    return out


def _quad(func: Callable[[float], float], lo: float, hi: float, tol: float, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(func, lo, hi, epsabs=tol, epsrel=0.0, limit=QUAD_LIMIT // 1000, **kw)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"quadrature on [{lo}, {hi}]: {exc}") from exc
    if not math.isfinite(value) or err > max(tol, 1e-12 * abs(value)) * 10:
        raise QuadratureFailure(f"quadrature on [{lo}, {hi}] reported error {err:g}")
    return value


def mellin_numeric(phi: Callable[[float], float], s: complex, support: tuple[float, float], tol: float = QUAD_TOL) -> complex:
    """int_R phi(x) |x|^{s-1} dx for Re s > 0, phi supported in ``support``.

    The algebraic endpoint singularity at 0 is handled by QUADPACK's weighted
    rule, so only the smooth factor phi(x) cos/sin(Im s log|x|) is sampled.
    """
    s = complex(s)
    if s.real <= 0:
        raise LocalFieldError("the Mellin integral needs Re s > 0")
    lo, hi = support
    alpha = s.real - 1.0
    total = 0j
    for sign, length in ((1.0, hi), (-1.0, -lo)):
        if length <= 0:
            continue
        re = _quad(lambda x: phi(sign * x) * math.cos(s.imag * math.log(x)) if x > 0 else phi(0.0), 0.0, length, tol, weight="alg", wvar=(alpha, 0.0))
        im = 0.0
        if s.imag:
            im = _quad(lambda x: phi(sign * x) * math.sin(s.imag * math.log(x)) if x > 0 else 0.0, 0.0, length, tol, weight="alg", wvar=(alpha, 0.0))
        total += complex(re, im)
    return total


RESIDUE_POINTS = (0.1, 0.05, 0.01)


def mellin_residue_check(phi: Callable[[float], float], support: tuple[float, float], points: Sequence[float] = RESIDUE_POINTS) -> float:
    """lim_{s -> 0} s * M(s), by polynomial extrapolation through the sample points."""
    xs = np.array(points, dtype=float)
    ys = np.array([x * mellin_numeric(phi, x, support).real for x in xs])
    coeffs = np.polyfit(xs, ys, len(xs) - 1)
    return float(np.polyval(coeffs, 0.0))


def integral_over_R(func: Callable[[float], float], tol: float = 1e-11) -> float:
    """int_{-inf}^{inf} func(x) dx, mapped to a finite interval by x = tan(theta)."""

    def pulled_back(theta: float) -> float:
        c = math.cos(theta)
        if c == 0.0:
            return 0.0
        return func(math.tan(theta)) / (c * c)

    half = math.pi / 2
    return _quad(pulled_back, -half, 0.0, tol / 2) + _quad(pulled_back, 0.0, half, tol / 2)
