"""Time-dependent coefficient signals and the oscillator specification.

A :class:`Signal` is a real-valued function of time with analytically
consistent first and second derivatives.  The Hamiltonian

    H(t) = omega(t) b'b + f(t) b' + conj(f(t)) b + g(t)

carries three of them: omega and g are real, f is a pair (Re, Im) wrapped in
:class:`ComplexSignal` so that f-dot and f-ddot stay exact for parametric
forms.  Tabulated signals fall back to cubic-spline derivatives, which is a
declared approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import SignalRangeError


class Signal:
    """Real function of time with value/d1/d2 accessors.

    Subclasses must be evaluable on scalars and numpy arrays alike.
    """

    def value(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)


@dataclass(frozen=True)
class Constant(Signal):
    c: float = 0.0

    def value(self, t):
        return self.c + 0.0 * np.asarray(t) if np.ndim(t) else self.c

    def d1(self, t):
        return 0.0 * np.asarray(t) if np.ndim(t) else 0.0

    d2 = d1


@dataclass(frozen=True)
class Sinusoid(Signal):
    """amplitude * sin(frequency * t + phase) + offset."""

    amplitude: float
    frequency: float
    phase: float = 0.0
    offset: float = 0.0

    def value(self, t):
        return self.amplitude * np.sin(self.frequency * np.asarray(t) + self.phase) + self.offset

    def d1(self, t):
        w = self.frequency
        return self.amplitude * w * np.cos(w * np.asarray(t) + self.phase)

    def d2(self, t):
        w = self.frequency
        return -self.amplitude * w * w * np.sin(w * np.asarray(t) + self.phase)


@dataclass(frozen=True)
class Polynomial(Signal):
    """Polynomial in t with ascending coefficients (coeffs[k] * t**k)."""

    coeffs: tuple[float, ...]

    def _poly(self, deriv: int):
        p = np.polynomial.Polynomial(self.coeffs)
        return p.deriv(deriv) if deriv else p

    def value(self, t):
        return self._poly(0)(np.asarray(t)) if np.ndim(t) else self._poly(0)(t)

    def d1(self, t):
        return self._poly(1)(np.asarray(t)) if np.ndim(t) else self._poly(1)(t)

    def d2(self, t):
        return self._poly(2)(np.asarray(t)) if np.ndim(t) else self._poly(2)(t)


@dataclass(frozen=True)
class Tabulated(Signal):
    """Cubic-spline interpolant through (times, values); strictly in-range.

    Derivatives come from the spline, not from the underlying data.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size < 2 or t.size != v.size:
            raise ValueError("tabulated signal needs matching 1-d times/values, len >= 2")
        if not np.all(np.diff(t) > 0):
            raise ValueError("tabulated signal times must be strictly increasing")
        object.__setattr__(self, "_spline", CubicSpline(t, v))

    def _check_range(self, t):
        lo, hi = self.times[0], self.times[-1]
        tm = np.asarray(t)
        if np.any(tm < lo) or np.any(tm > hi):
            bad = float(np.min(tm)) if np.any(tm < lo) else float(np.max(tm))
            raise SignalRangeError(
                f"t={bad} outside tabulated range [{lo}, {hi}]"
            )

    def value(self, t):
        self._check_range(t)
        out = self._spline(t)
        return out if np.ndim(t) else float(out)

    def d1(self, t):
        self._check_range(t)
        out = self._spline(t, 1)
        return out if np.ndim(t) else float(out)

    def d2(self, t):
        self._check_range(t)
        out = self._spline(t, 2)
        return out if np.ndim(t) else float(out)


@dataclass(frozen=True)
class ComplexSignal:
    """Complex function of time as a pair of real signals (Re, Im)."""

    re: Signal
    im: Signal = Constant(0.0)

    def value(self, t):
        return self.re.value(t) + 1j * self.im.value(t)

    def d1(self, t):
        return self.re.d1(t) + 1j * self.im.d1(t)

    def d2(self, t):
        return self.re.d2(t) + 1j * self.im.d2(t)

    def __call__(self, t):
        return self.value(t)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Coefficients of the forced fermion oscillator Hamiltonian.

    omega and g are real signals; f is complex.  Immutable after
    construction; all evaluation is pure.
    """

    omega: Signal
    f: ComplexSignal
    g: Signal = Constant(0.0)


def constant_spec(omega: float = 0.0, f: complex = 0.0, g: float = 0.0) -> HamiltonianSpec:
    """Spec with constant coefficients, handy for closed-form checks."""
    f = complex(f)
    return HamiltonianSpec(
        omega=Constant(float(omega)),
        f=ComplexSignal(Constant(f.real), Constant(f.imag)),
        g=Constant(float(g)),
    )
