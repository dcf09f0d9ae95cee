"""Exact integration of polynomials over polytopes and their boundaries.

One kernel does all the work: on a simplex, expand the integrand in
barycentric coordinates and apply the Dirichlet moment formula

    integral over S of  lam^alpha dx  =  n! Vol(S) * (prod alpha_j!) / (n + |alpha|)!

Polytope integrals sum the kernel over a triangulation; boundary integrals
sum facet-chart projections weighted by the exact Jacobian 1/|l_k|, which
realizes the lattice-normalized boundary measure without leaving the
rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .linalg import rat, rat_str
from .polytope import Polytope, Simplex, facet_chart


class Poly:
    """Multivariate polynomial over the rationals, keyed by exponent vector."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for expo, coeff in terms.items():
                coeff = rat(coeff)
                if coeff != 0:
                    self.terms[tuple(expo)] = coeff

    @staticmethod
    def constant(nvars: int, value) -> "Poly":
        return Poly(nvars, {(0,) * nvars: rat(value)})

    @staticmethod
    def coordinate(nvars: int, k: int) -> "Poly":
        expo = [0] * nvars
        expo[k] = 1
        return Poly(nvars, {tuple(expo): Fraction(1)})

    @staticmethod
    def affine(gradient: Sequence, constant) -> "Poly":
        n = len(gradient)
        p = Poly.constant(n, constant)
        for k, a in enumerate(gradient):
            a = rat(a)
            if a != 0:
                expo = [0] * n
                expo[k] = 1
                p.terms[tuple(expo)] = a
        return p

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for expo, c in other.terms.items():
            out[expo] = out.get(expo, Fraction(0)) + c
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for expo, c in other.terms.items():
            out[expo] = out.get(expo, Fraction(0)) - c
        return Poly(self.nvars, out)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                out[expo] = out.get(expo, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    def scale(self, c) -> "Poly":
        c = rat(c)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            term = coeff
            for x, e in zip(point, expo):
                if e:
                    term *= rat(x) ** e
            total += term
        return total

    def compose_affine(self, maps: Sequence["Poly"]) -> "Poly":
        """Substitute x_i = maps[i] (polynomials in a new variable set)."""
        nvars = maps[0].nvars
        out = Poly.constant(nvars, 0)
        for expo, coeff in self.terms.items():
            term = Poly.constant(nvars, coeff)
            for i, e in enumerate(expo):
                for _ in range(e):
                    term = term * maps[i]
            out = out + term
        return out

    def eliminate_axis(self, axis: int, normal: Sequence[int], rhs: Fraction) -> "Poly":
        """Restrict to the hyperplane <normal, x> = rhs, dropping coordinate ``axis``.

        The result lives in the (nvars-1)-variable chart obtained by deleting
        that coordinate.
        """
        n = self.nvars
        keep = [j for j in range(n) if j != axis]
        maps = []
        for j in range(n):
            if j == axis:
                grad = [-Fraction(normal[k]) / normal[axis] for k in keep]
                maps.append(Poly.affine(grad, rat(rhs) / normal[axis]))
            else:
                maps.append(Poly.coordinate(n - 1, keep.index(j)))
        return self.compose_affine(maps)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for expo in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            mono = "*".join(
                f"x{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(expo)
                if e
            )
            c = rat_str(self.terms[expo])
            bits.append(c if not mono else f"{c}*{mono}")
        return "Poly(" + " + ".join(bits) + ")"


def integrate_simplex(simplex: Simplex, p: Poly) -> Fraction:
    """Exact integral of ``p`` over one simplex via the Dirichlet formula."""
    n = simplex.dim
    vol = simplex.volume()
    if vol == 0:
        return Fraction(0)
    v0 = simplex.vertices[0]
    # x_i = v0_i + sum_j (v_j - v0)_i * lam_j as polynomials in lam_1..lam_n
    maps = []
    for i in range(n):
        grad = [simplex.vertices[j + 1][i] - v0[i] for j in range(n)]
        maps.append(Poly.affine(grad, v0[i]))
    in_bary = p.compose_affine(maps)
    total = Fraction(0)
    nfact_vol = math.factorial(n) * vol
    for expo, coeff in in_bary.terms.items():
        num = 1
        for e in expo:
            num *= math.factorial(e)
        total += coeff * nfact_vol * Fraction(num, math.factorial(n + sum(expo)))
    return total


def integrate(p: Polytope, poly: Poly) -> Fraction:
    """Integral of a polynomial over the polytope (triangulation sum)."""
    key = ("integral", tuple(sorted(poly.terms.items())))
    if key in p.cache:
        return p.cache[key]
    val = sum((integrate_simplex(s, poly) for s in p.triangulation()), Fraction(0))
    p.cache[key] = val
    return val


def moment_vector(p: Polytope) -> tuple[Fraction, ...]:
    """Componentwise integral of the coordinate functions."""
    return tuple(integrate(p, Poly.coordinate(p.dim, k)) for k in range(p.dim))


def boundary_integral(p: Polytope, poly: Poly) -> Fraction:
    """Integral of ``poly`` over the boundary with the lattice-normalized measure."""
    total = Fraction(0)
    for i in range(len(p.halfspaces)):
        chart = facet_chart(p, i)
        restricted = poly.eliminate_axis(chart.axis, chart.normal, chart.rhs)
        total += chart.scale * integrate(chart.polytope, restricted)
    return total
