"""Lattice point enumeration in dilations and Ehrhart polynomial reconstruction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeMismatch, NotLatticePolytope
from .linalg import interpolate_poly, poly_eval, rat_str
from .polytope import Polytope


def lattice_points(p: Polytope, i: int) -> list[tuple[int, ...]]:
    """All integer points of the dilation ``i * P``, sorted lexicographically.

    Scans the exact bounding box; membership tests are pure integer
    arithmetic (each half-space rhs is cleared of denominators once).
    """
    if i <= 0:
        raise ValueError("dilation factor must be a positive integer")
    key = ("lattice_points", i)
    if key in p.cache:
        return p.cache[key]
    n = p.dim
    lo = [math.ceil(min(v[k] for v in p.vertices) * i) for k in range(n)]
    hi = [math.floor(max(v[k] for v in p.vertices) * i) for k in range(n)]
    # <l, z> <= i * rhs  with rhs = a/b  becomes  b*<l, z> <= i*a.
    constraints = [
        (h.normal, h.rhs.denominator, i * h.rhs.numerator) for h in p.halfspaces
    ]
    points = []
    ranges = [range(lo[k], hi[k] + 1) for k in range(n)]

    def scan(prefix: list[int], depth: int):
        if depth == n:
            z = tuple(prefix)
            for normal, den, bound in constraints:
                if den * sum(a * b for a, b in zip(normal, z)) > bound:
                    return
            points.append(z)
            return
        for val in ranges[depth]:
            prefix.append(val)
            scan(prefix, depth + 1)
            prefix.pop()

    scan([], 0)
    points.sort()
    p.cache[key] = points
    return points


def refined_points(p: Polytope, i: int) -> list[tuple[Fraction, ...]]:
    """The refined sample P meet (Z/i)^n, i.e. lattice points of iP divided by i."""
    return [tuple(Fraction(z, i) for z in pt) for pt in lattice_points(p, i)]


@dataclass(frozen=True)
class EhrhartPoly:
    """Lattice point counting polynomial, coefficients highest degree first."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t) -> Fraction:
        return poly_eval(self.coeffs, t)

    def __str__(self):
        n = self.degree
        bits = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = n - k
            mono = "" if power == 0 else ("t" if power == 1 else f"t^{power}")
            bits.append(rat_str(c) + ("*" + mono if mono else ""))
        return " + ".join(bits) if bits else "0"


def ehrhart(p: Polytope, verify_identities: bool = True) -> EhrhartPoly:
    """Reconstruct the counting polynomial of a lattice polytope.

    Interpolates through the exact counts at 0..n and then cross-checks the
    counts at n+1 and n+2 plus the coefficient identities (leading = volume,
    second = half the boundary measure, constant = 1).  Any failure raises
    :class:`DegreeMismatch` -- that means an enumeration bug or non-integral
    input, never something to paper over.
    """
    if not p.is_lattice():
        raise NotLatticePolytope(
            "counting polynomial requires integral vertices; dilate first"
        )
    if "ehrhart" in p.cache:
        return p.cache["ehrhart"]
    n = p.dim
    samples = [(0, 1)] + [(i, len(lattice_points(p, i))) for i in range(1, n + 3)]
    coeffs = interpolate_poly(samples, n)
    poly = EhrhartPoly(tuple(coeffs))
    if verify_identities:
        if poly.coeffs[0] != p.volume():
            raise DegreeMismatch("leading coefficient differs from the volume")
        if 2 * poly.coeffs[1] != p.boundary_volume():
            raise DegreeMismatch("second coefficient differs from half the boundary measure")
        if poly.coeffs[-1] != 1:
            raise DegreeMismatch("constant coefficient is not 1")
    p.cache["ehrhart"] = poly
    return poly


def interior_lattice_point_count(p: Polytope) -> int:
    """Number of integer points strictly inside P (used for reciprocity checks)."""
    count = 0
    for z in lattice_points(p, 1):
        if all(h.value(z) < h.rhs for h in p.halfspaces):
            count += 1
    return count
