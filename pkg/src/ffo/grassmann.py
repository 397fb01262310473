"""Exact algebra over two anticommuting generators zeta, zeta* .

Elements live in the 4-dimensional algebra with ordered monomial basis

    {1, zeta, zeta*, zeta*zeta}

(the quartic monomial is stored with zeta* leftmost, matching the Berezin
measure ordering d zeta* d zeta; zeta zeta* is represented as -zeta*zeta).
All coefficients are complex and every operation is exact up to floating
rounding -- nothing in this module is approximated.

Grading conventions
-------------------
* zeta and zeta* anticommute with each other and square to zero.
* The generators anticommute with fermion ladder operators.  For the bare
  b, b' this is the usual rule "moving the operator past an odd coefficient
  flips its sign".
* A dressed ladder operator (any 2x2 matrix standing for a nu-combination
  that obeys the ladder conditions) is treated as a single odd object: its
  whole matrix action receives the parity flip, including the diagonal
  b'b - 1/2 part.  The coherent-state eigenvalue relation for invariant
  ladder operators holds only under this convention.
"""

from __future__ import annotations

import numpy as np

# basis slots
_ONE, _Z, _ZS, _ZSZ = 0, 1, 2, 3


class GrassmannElement:
    """Element c0*1 + c1*zeta + c2*zeta* + c3*zeta*zeta."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.c = np.zeros(4, dtype=complex)
        else:
            c = np.asarray(coeffs, dtype=complex)
            if c.shape != (4,):
                raise ValueError("GrassmannElement needs exactly 4 coefficients")
            self.c = c.copy()

    @staticmethod
    def scalar(value) -> "GrassmannElement":
        e = GrassmannElement()
        e.c[_ONE] = value
        return e

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GrassmannElement(self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GrassmannElement(self.c - other.c)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return GrassmannElement(-self.c)

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return g_mul(self, other)
        return GrassmannElement(self.c * complex(other))

    def __rmul__(self, other):
        # scalars commute with everything in the algebra
        return GrassmannElement(self.c * complex(other))

    # -- structure maps -----------------------------------------------------

    def conjugate(self) -> "GrassmannElement":
        """Conjugation: complex-conjugate scalars, swap zeta <-> zeta*,
        reverse monomial order ((zeta*zeta)* = zeta*zeta)."""
        c = self.c
        return GrassmannElement([c[_ONE].conjugate(), c[_ZS].conjugate(),
                                 c[_Z].conjugate(), c[_ZSZ].conjugate()])

    def parity_flip(self) -> "GrassmannElement":
        """Negate the odd (degree-1) part; used when an odd operator moves
        past this coefficient."""
        c = self.c.copy()
        c[_Z] = -c[_Z]
        c[_ZS] = -c[_ZS]
        return GrassmannElement(c)

    def berezin(self) -> complex:
        return berezin_integrate(self)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.c)))

    def __repr__(self):
        return f"GrassmannElement({self.c.tolist()})"


def _coerce(x) -> GrassmannElement:
    if isinstance(x, GrassmannElement):
        return x
    return GrassmannElement.scalar(complex(x))


ONE = GrassmannElement([1, 0, 0, 0])
ZETA = GrassmannElement([0, 1, 0, 0])
ZETA_STAR = GrassmannElement([0, 0, 1, 0])
ZETA_STAR_ZETA = GrassmannElement([0, 0, 0, 1])
ZERO = GrassmannElement()


def g_mul(x: GrassmannElement, y: GrassmannElement, commuting: bool = False) -> GrassmannElement:
    """Graded product of two elements, reduced to the ordered basis.

    ``commuting=True`` is a diagnostic hook that multiplies the generators
    as if they commuted (zeta zeta* = +zeta*zeta); it exists so tests can
    demonstrate that the completeness integral detects wrong grading.
    """
    a, b = x.c, y.c
    sign = 1.0 if commuting else -1.0
    out = np.empty(4, dtype=complex)
    out[_ONE] = a[_ONE] * b[_ONE]
    out[_Z] = a[_ONE] * b[_Z] + a[_Z] * b[_ONE]
    out[_ZS] = a[_ONE] * b[_ZS] + a[_ZS] * b[_ONE]
    # zeta* . zeta -> +zeta*zeta ; zeta . zeta* -> -zeta*zeta (graded)
    out[_ZSZ] = (a[_ONE] * b[_ZSZ] + a[_ZSZ] * b[_ONE]
                 + a[_ZS] * b[_Z] + sign * a[_Z] * b[_ZS])
    return GrassmannElement(out)


def berezin_integrate(x: GrassmannElement) -> complex:
    """Berezin integral d zeta* d zeta.

    zeta zeta* integrates to 1 (so the stored zeta*zeta coefficient picks up
    -1); the lower monomials integrate to 0.
    """
    return complex(-x.c[_ZSZ])


class GrassmannKet:
    """State a0|0> + a1|1> with Grassmann-valued left coefficients."""

    __slots__ = ("a0", "a1")

    def __init__(self, a0, a1):
        self.a0 = _coerce(a0)
        self.a1 = _coerce(a1)

    def coeff_array(self) -> np.ndarray:
        """(2, 4) coefficient array; row 0 is the |0> component."""
        return np.vstack([self.a0.c, self.a1.c])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeff_array())))

    def __add__(self, other):
        return GrassmannKet(self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other):
        return GrassmannKet(self.a0 - other.a0, self.a1 - other.a1)

    def left_mul(self, x) -> "GrassmannKet":
        """Left-multiply both components by a Grassmann element (or scalar)."""
        x = _coerce(x)
        return GrassmannKet(g_mul(x, self.a0), g_mul(x, self.a1))

    def __repr__(self):
        return f"GrassmannKet(a0={self.a0!r}, a1={self.a1!r})"


class GrassmannOperator:
    """Graded action of a fermion ladder operator on GrassmannKets.

    ``matrix`` is the operator's 2x2 matrix in the {|0>, |1>} basis.  The
    operator is treated as odd as a whole: every ket coefficient receives a
    parity flip before the matrix acts (see module docstring).
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("GrassmannOperator needs a 2x2 matrix")
        self.matrix = m

    def apply(self, ket: GrassmannKet) -> GrassmannKet:
        m = self.matrix
        f0 = ket.a0.parity_flip()
        f1 = ket.a1.parity_flip()
        return GrassmannKet(m[0, 0] * f0 + m[0, 1] * f1,
                            m[1, 0] * f0 + m[1, 1] * f1)


def _bare(op: str) -> GrassmannOperator:
    if op == "b":
        return GrassmannOperator([[0, 1], [0, 0]])
    if op == "b_dag":
        return GrassmannOperator([[0, 0], [1, 0]])
    raise ValueError(f"unknown fermion operator {op!r}")


def apply_fermion_op(op: str, ket: GrassmannKet) -> GrassmannKet:
    """Act with 'b' or 'b_dag' on a ket under the graded sign rule."""
    return _bare(op).apply(ket)


def coherent_ket(scale: complex = 1.0) -> GrassmannKet:
    """Canonical coherent state for eigenvalue scale*zeta.

    exp(-|scale|^2 zeta*zeta / 2) (|0> - scale*zeta |1>); the exponential
    truncates exactly by nilpotency.
    """
    s = complex(scale)
    a0 = GrassmannElement([1.0, 0, 0, -0.5 * (s.conjugate() * s)])
    a1 = GrassmannElement([0, -s, 0, 0])
    return GrassmannKet(a0, a1)


def outer_integral(ket: GrassmannKet, bra_ket: GrassmannKet | None = None,
                   commuting: bool = False) -> np.ndarray:
    """Berezin-integrate the operator |ket><bra_ket| entry by entry.

    The bra coefficients are the conjugates of the ket's; each operator
    entry is ket_m * conj(bra_n) in that order.  Returns the integrated 2x2
    complex matrix.
    """
    if bra_ket is None:
        bra_ket = ket
    kets = [ket.a0, ket.a1]
    bras = [bra_ket.a0.conjugate(), bra_ket.a1.conjugate()]
    out = np.empty((2, 2), dtype=complex)
    for m in range(2):
        for n in range(2):
            out[m, n] = berezin_integrate(g_mul(kets[m], bras[n], commuting=commuting))
    return out


def completeness_check(commuting: bool = False) -> float:
    """Max-abs deviation of integral d zeta* d zeta |zeta><zeta| from 1.

    Exact zero (to rounding) under the graded convention; the ``commuting``
    hook recomputes with commuting generators and then deviates by 2 on the
    |1><1| entry, which is how tests detect a wrong sign convention.
    """
    mat = outer_integral(coherent_ket(1.0), commuting=commuting)
    return float(np.max(np.abs(mat - np.eye(2))))
