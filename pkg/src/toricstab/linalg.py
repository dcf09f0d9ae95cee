"""Exact rational scalars, dense exact linear algebra, and polynomial interpolation.

Everything downstream works over ``fractions.Fraction`` (arbitrary precision,
always in lowest terms, positive denominator), so no rounding can occur
anywhere in the library.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DegreeMismatch, SingularMatrix

Rat = Fraction
RatLike = Union[int, str, Fraction]


def rat(x: RatLike) -> Fraction:
    """Coerce an int, ``"p/q"`` string or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs: Sequence[RatLike]) -> tuple[Fraction, ...]:
    return tuple(rat(x) for x in xs)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: RatLike, u):
    c = rat(c)
    return tuple(c * a for a in u)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]):
    return tuple(dot(row, v) for row in m)


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(m)
    a = [[rat(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            f = a[r][col] / inv
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def solve_linear(
    m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    """Solve the square system ``m x = b`` exactly.

    Pivots on the first nonzero entry in each column; exactness makes any
    nonzero pivot as good as any other.  Raises :class:`SingularMatrix` when
    the matrix is not invertible.
    """
    n = len(m)
    if any(len(row) != n for row in m) or len(b) != n:
        raise ValueError("solve_linear expects a square system")
    a = [[rat(x) for x in row] + [rat(y)] for row, y in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"zero pivot column {col}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col] / inv
            for c in range(col, n + 1):
                a[r][c] -= f * a[col][c]
    return tuple(a[r][n] / a[r][r] for r in range(n))


class AnyS:
    """Distinguished result of a 0 = 0 one-unknown system: every scalar works.

    Kept as its own type (not a sentinel number) so callers can tell
    "any s is admissible" apart from "s = 0 is the solution".
    """

    _instance: Optional["AnyS"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AnyS"


ANY_S = AnyS()


def solve_overdetermined_1d(
    coeffs: Sequence[Fraction], rhs: Sequence[Fraction]
) -> Union[Fraction, AnyS, None]:
    """Solve ``coeffs[k] * s = rhs[k]`` for a single unknown ``s``.

    Returns the exact solution when one satisfies every row, :data:`ANY_S`
    when every row reads 0 = 0, and ``None`` when the rows are inconsistent.
    Inconsistency is a legitimate answer here, not an error.
    """
    if len(coeffs) != len(rhs):
        raise ValueError("dimension mismatch")
    s: Optional[Fraction] = None
    for c, r in zip(coeffs, rhs):
        c, r = rat(c), rat(r)
        if c == 0:
            if r != 0:
                return None
            continue
        cand = r / c
        if s is None:
            s = cand
        elif s != cand:
            return None
    return ANY_S if s is None else s


def poly_eval(coeffs_desc: Sequence[Fraction], t: RatLike) -> Fraction:
    """Evaluate a univariate polynomial given highest-degree-first coefficients."""
    t = rat(t)
    acc = Fraction(0)
    for c in coeffs_desc:
        acc = acc * t + c
    return acc


def interpolate_poly(
    points: Sequence[tuple[RatLike, RatLike]], degree: int
) -> tuple[Fraction, ...]:
    """Interpolate the unique degree-``degree`` polynomial through the points.

    The first ``degree + 1`` points determine the polynomial (their abscissae
    must be distinct); any extra points are verified to lie on it exactly and
    :class:`DegreeMismatch` is raised otherwise -- the signal that a count
    sequence is not polynomial of the stated degree.

    Returns coefficients highest degree first.
    """
    pts = [(rat(x), rat(y)) for x, y in points]
    if len(pts) < degree + 1:
        raise ValueError(f"need at least {degree + 1} points for degree {degree}")
    base = pts[: degree + 1]
    xs = [p[0] for p in base]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be distinct")
    vander = [[x ** k for k in range(degree, -1, -1)] for x in xs]
    coeffs = solve_linear(vander, [p[1] for p in base])
    for x, y in pts[degree + 1:]:
        if poly_eval(coeffs, x) != y:
            raise DegreeMismatch(
                f"point ({rat_str(x)}, {rat_str(y)}) is off the degree-{degree} interpolant"
            )
    return coeffs
