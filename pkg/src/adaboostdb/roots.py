"""Bracketed scalar root finding (Brent's method via scipy)."""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import brentq

from .core import NumericalError


def zeroin(f: Callable[[float], float], a: float, b: float, rtol: float = 1e-12,
           fa: float | None = None, fb: float | None = None, maxiter: int = 500) -> float:
    """Root of ``f`` in [a, b] where f(a), f(b) differ in sign.

    Converges to within ``rtol * max(1, |x|)``. Known endpoint values short
    circuit exact endpoint roots and the bracket check.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if math.isnan(fa) or math.isnan(fb):
        raise NumericalError(f"f is NaN at a bracket endpoint ({a}, {b})")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise NumericalError(f"root not bracketed: f({a})={fa}, f({b})={fb}")
    try:
        return brentq(f, a, b, xtol=rtol, rtol=max(rtol, 4.5e-16), maxiter=maxiter)
    except (RuntimeError, ValueError) as exc:
        raise NumericalError(str(exc)) from exc
