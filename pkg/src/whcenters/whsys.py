"""Weight-homogeneous planar systems and global-center constructions.

Centers are built from a pair of weight-homogeneous polynomials (h1, h2) with
h2 >= 0 and a complex exponent sigma with positive real part. Everything in
this module is exact rational arithmetic; floats appear only in the sampling
falsifier for the positivity hypotheses.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import (
    Poly2,
    PowerSeries1,
    implicit_solution_is_exact,
    rational,
    series_solve_implicit,
    series_substitute,
)


class NotWeightHomogeneous(ValueError):
    """The monomial weight constraints are inconsistent."""


class DegenerateWeights(ValueError):
    """Weight constraints admit no unique positive (alpha, beta) direction."""


class HypothesisViolation(ValueError):
    """A center hypothesis (h2 >= 0, lone common zero, Re sigma > 0) failed."""


class InvalidC(ValueError):
    """Family parameter c must satisfy c < -1/4."""


class TruncationInconclusive(RuntimeError):
    """Series truncation too short to classify; retry with a higher order."""


class NotNormalForm(ValueError):
    """System is not in the nilpotent normal form x' = y + F, y' = G."""


@dataclass(frozen=True)
class WeightSignature:
    """Normalized weights (alpha, beta, omega) with alpha, beta coprime positive."""

    alpha: Fraction
    beta: Fraction
    omega: Fraction

    def as_tuple(self):
        return (self.alpha, self.beta, self.omega)


@dataclass(frozen=True)
class PlanarSystem:
    """Polynomial field x' = f(x, y), y' = g(x, y)."""

    f: Poly2
    g: Poly2

    def __post_init__(self):
        if self.f.is_zero() and self.g.is_zero():
            raise ValueError("zero system")

    def divergence(self) -> Poly2:
        return self.f.partial_x() + self.g.partial_y()


@dataclass(frozen=True)
class SigmaParam:
    """sigma = a + i*b with a != 0; b may encode b*s in normalized form."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("Re(sigma) must be nonzero")


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (n, c) of the family x' = y + x^(2n), y' = 2nc x^(4n-1)."""

    n: int
    c: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise InvalidC("n must be a positive integer")
        if self.c >= Fraction(-1, 4):
            raise InvalidC(f"c = {self.c} must be < -1/4")

    @property
    def s_squared(self) -> Fraction:
        return -1 - 4 * self.c

    @property
    def s(self) -> float:
        return math.sqrt(float(self.s_squared))

    @property
    def mu_plus(self) -> complex:
        return complex(0.5, 0.5 * self.s)

    @property
    def mu_minus(self) -> complex:
        return complex(0.5, -0.5 * self.s)

    @property
    def sigma(self) -> complex:
        return complex(1.0, 1.0 / self.s)


@dataclass(eq=False)
class CenterModel:
    """A constructed global center.

    The second component of the pair is s * h2n with s = sqrt(s_squared); the
    exact layer stores h2n and s_squared so that every coefficient stays
    rational even when s is irrational. `t = b * s` plays the role of the
    imaginary part of sigma in the assembled field.
    """

    h1: Poly2
    h2n: Poly2
    s_squared: Fraction
    a: Fraction
    t: Fraction
    f: Poly2
    g: Poly2
    v_poly: Poly2
    signature: WeightSignature
    delta: Fraction
    family: FamilyParams | None = None

    @property
    def system(self) -> PlanarSystem:
        return PlanarSystem(self.f, self.g)

    @property
    def s(self) -> float:
        return math.sqrt(float(self.s_squared))

    @property
    def b(self) -> float:
        """Imaginary part of sigma as a float (= t / s)."""
        return float(self.t) / self.s


@dataclass(frozen=True)
class MonodromyReport:
    """Outcome of the nilpotent-monodromy test on x' = y + F, y' = G."""

    alpha1: Fraction
    k1: int
    alpha2: Fraction | None
    k2: int | None
    delta_identically_zero: bool
    branch: str  # one of "a", "b", "c", "none"
    monodromic: bool
    discriminant: Fraction | None  # alpha2^2 + 4*alpha1*(k2+1) on branch-(a) data


# ---------------------------------------------------------------------------
# weight detection
# ---------------------------------------------------------------------------


def _rational_nullspace(rows):
    """Nullspace basis of a small rational matrix, via Gaussian elimination."""
    if not rows:
        return [
            [Fraction(1), Fraction(0), Fraction(0)],
            [Fraction(0), Fraction(1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1)],
        ]
    ncols = len(rows[0])
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(mat)) if mat[k][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c] != 0:
                fac = mat[k][c]
                mat[k] = [v - fac * w for v, w in zip(mat[k], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for prow, pc in enumerate(pivots):
            vec[pc] = -mat[prow][fc]
        basis.append(vec)
    return basis


def _normalize_signature(alpha: Fraction, beta: Fraction, omega: Fraction) -> WeightSignature:
    """Scale so alpha, beta are coprime positive integers."""
    scale = Fraction(math.lcm(alpha.denominator, beta.denominator))
    a = alpha * scale
    b = beta * scale
    g = math.gcd(a.numerator, b.numerator)
    scale = scale / g
    return WeightSignature(alpha * scale, beta * scale, omega * scale)


def detect_weights(sys: PlanarSystem) -> WeightSignature:
    """Recover the weight signature of a weight-homogeneous system.

    Solves the homogeneous constraints alpha*i + beta*j = omega + alpha over
    the monomials of f and alpha*i + beta*j = omega + beta over those of g.

    Raises NotWeightHomogeneous when the constraints only admit the zero
    solution, and DegenerateWeights when no unique positive direction exists
    (weights underdetermined, or alpha/beta of opposite signs).
    """
    rows = []
    for (i, j) in sys.f.terms:
        rows.append([Fraction(i - 1), Fraction(j), Fraction(-1)])
    for (i, j) in sys.g.terms:
        rows.append([Fraction(i), Fraction(j - 1), Fraction(-1)])
    basis = _rational_nullspace(rows)
    if not basis:
        raise NotWeightHomogeneous("monomial weight constraints are inconsistent")
    if len(basis) > 1:
        raise DegenerateWeights(
            f"weights underdetermined ({len(basis)}-dimensional solution space)"
        )
    alpha, beta, omega = basis[0]
    if alpha == 0 or beta == 0 or (alpha > 0) != (beta > 0):
        raise DegenerateWeights(f"no positive weight direction: alpha={alpha}, beta={beta}")
    if alpha < 0:
        alpha, beta, omega = -alpha, -beta, -omega
    return _normalize_signature(alpha, beta, omega)


def commensurability_witness(sys: PlanarSystem):
    """A monomial pair ((i,j) of f, (i',j') of g) pinning alpha/beta, or None.

    Subtracting the two weight constraints gives
    alpha*(i - i' - 1) + beta*(j - j' + 1) = 0, which fixes the ratio whenever
    the coefficients are not both zero.
    """
    for (i, j) in sorted(sys.f.terms):
        for (ip, jp) in sorted(sys.g.terms):
            if (i - ip - 1, j - jp + 1) != (0, 0):
                return (i, j), (ip, jp)
    return None


# ---------------------------------------------------------------------------
# center construction
# ---------------------------------------------------------------------------

SPHERE_SAMPLES = 4096
REFINE_STEPS = 20


def _weight_sphere_points(alpha: Fraction, beta: Fraction, count: int):
    """Points on {max(|x|^(1/alpha), |y|^(1/beta)) = 1}, the unit square's
    image under (u, v) -> (sign(u)|u|^alpha, sign(v)|v|^beta)."""
    a = float(alpha)
    b = float(beta)
    pts = []
    for k in range(count):
        p = 8.0 * (k + 0.5) / count  # perimeter coordinate of [-1,1]^2
        if p < 2.0:
            u, v = 1.0, -1.0 + p
        elif p < 4.0:
            u, v = 1.0 - (p - 2.0), 1.0
        elif p < 6.0:
            u, v = -1.0, 1.0 - (p - 4.0)
        else:
            u, v = -1.0 + (p - 6.0), -1.0
        x = math.copysign(abs(u) ** a, u) if u != 0.0 else 0.0
        y = math.copysign(abs(v) ** b, v) if v != 0.0 else 0.0
        pts.append((x, y))
    return pts


def _check_hypotheses(h1: Poly2, h2n: Poly2, s_squared: Fraction, sig_alpha, sig_beta):
    """Sampling falsifier for h2 >= 0 and {h1 = h2 = 0} = {origin}.

    Dense scan of the weight sphere plus local bisection refinement near any
    sign change of h2n; weight homogeneity extends the verdict to all rays.
    This can only falsify the hypotheses, never certify them.
    """
    pts = _weight_sphere_points(sig_alpha, sig_beta, SPHERE_SAMPLES)
    vals2 = [h2n.eval(x, y) for (x, y) in pts]
    s2 = float(s_squared)
    vpol = [h1.eval(x, y) ** 2 + s2 * h2n.eval(x, y) ** 2 for (x, y) in pts]
    scale2 = max(abs(v) for v in vals2) if any(vals2) else 1.0
    scalev = max(vpol)
    if scalev <= 0.0:
        raise HypothesisViolation("h1 and h2 vanish on the entire sampled sphere")
    for v in vpol:
        if v <= 1e-12 * scalev:
            raise HypothesisViolation("h1 and h2 share a zero away from the origin")
    for k, v in enumerate(vals2):
        if v < -1e-12 * scale2:
            raise HypothesisViolation(f"h2 < 0 on the weight sphere (sample {k})")
    # refine near approximate sign changes of h2n
    for k in range(len(pts) - 1):
        if vals2[k] == 0.0 or vals2[k + 1] == 0.0 or (vals2[k] > 0) != (vals2[k + 1] > 0):
            (x0, y0), (x1, y1) = pts[k], pts[k + 1]
            for m in range(1, REFINE_STEPS):
                tpar = m / REFINE_STEPS
                x = x0 + tpar * (x1 - x0)
                y = y0 + tpar * (y1 - y0)
                if h2n.eval(x, y) < -1e-12 * scale2:
                    raise HypothesisViolation("h2 < 0 found by refinement near a sign change")


def _common_signature(h1: Poly2, h2n: Poly2):
    """Weights (alpha, beta) and degree delta shared by h1 and h2n."""
    rows = []
    for p in (h1, h2n):
        for (i, j) in p.terms:
            rows.append([Fraction(i), Fraction(j), Fraction(-1)])
    basis = _rational_nullspace(rows)
    if not basis:
        raise NotWeightHomogeneous("h1, h2 have no common weight signature")
    if len(basis) > 1:
        # one-monomial pairs leave a free direction; pick alpha = 1, beta so
        # that both polynomials are homogeneous, preferring integer weights
        for vec in basis:
            if vec[0] > 0 and vec[1] > 0:
                basis = [vec]
                break
        else:
            combined = [sum(v[k] for v in basis) for k in range(3)]
            basis = [combined]
    alpha, beta, delta = basis[0]
    if alpha <= 0 or beta <= 0:
        raise DegenerateWeights(f"no positive common weights: alpha={alpha}, beta={beta}")
    norm = _normalize_signature(alpha, beta, delta)
    return norm.alpha, norm.beta, norm.omega  # omega slot carries delta here


def _assemble(h1: Poly2, h2n: Poly2, s_squared: Fraction, a: Fraction, t: Fraction,
              family: FamilyParams | None = None) -> CenterModel:
    """Expand (H_y V, -H_x V) for H built on (h1, s*h2n) and sigma = a + i*t/s.

    With w = h1 + i*s*h2n, the field is
        f =  a*(h1*h1_y + s^2*h2n*h2n_y) - t*(h1*h2n_y - h2n*h1_y)
        g = -[a*(h1*h1_x + s^2*h2n*h2n_x) - t*(h1*h2n_x - h2n*h1_x)]
    and every coefficient is rational because s only enters through s^2 and t.
    """
    s2 = rational(s_squared)
    if s2 <= 0:
        raise HypothesisViolation("s_squared must be positive")
    alpha, beta, delta = _common_signature(h1, h2n)
    _check_hypotheses(h1, h2n, s2, alpha, beta)
    h1x, h1y = h1.partial_x(), h1.partial_y()
    h2x, h2y = h2n.partial_x(), h2n.partial_y()
    f = a * (h1 * h1y + s2 * h2n * h2y) - t * (h1 * h2y - h2n * h1y)
    g = -(a * (h1 * h1x + s2 * h2n * h2x) - t * (h1 * h2x - h2n * h1x))
    v_poly = h1 * h1 + s2 * (h2n * h2n)
    signature = WeightSignature(alpha, beta, 2 * delta - alpha - beta)
    return CenterModel(
        h1=h1, h2n=h2n, s_squared=s2, a=rational(a), t=rational(t),
        f=f, g=g, v_poly=v_poly, signature=signature, delta=delta, family=family,
    )


def construct_center(h1: Poly2, h2: Poly2, sigma: SigmaParam,
                     s_squared=Fraction(1)) -> CenterModel:
    """Build the global center driven by H = (h1 + i*h2)^sigma (h1 - i*h2)^conj.

    Parameters
    ----------
    h1, h2 : Poly2
        Weight-homogeneous pair of a common signature; h2 >= 0 and the only
        common zero is the origin (checked by a sampling falsifier).
    sigma : SigmaParam
        With the default s_squared = 1, sigma.b is the imaginary part of
        sigma. With s_squared != 1 the pair encodes the normalized form: the
        true second polynomial is sqrt(s_squared) * h2 and sigma.b holds
        t = Im(sigma) * sqrt(s_squared), so all products stay rational.

    Re(sigma) < 0 is normalized to -sigma (same orbits, clockwise flow).
    """
    a, t = sigma.a, sigma.b
    if a < 0:
        a, t = -a, -t
    return _assemble(h1, h2, s_squared, a, t)


def family(params: FamilyParams) -> CenterModel:
    """The example family: h1 = y + x^(2n)/2, h2 = (s/2) x^(2n), sigma = 1 + i/s.

    Produces exactly x' = y + x^(2n), y' = 2nc x^(4n-1) with inverse
    integrating factor V = y^2 + x^(2n) y - c x^(4n).
    """
    n = params.n
    half = Fraction(1, 2)
    h1 = Poly2.monomial(0, 1) + Poly2.monomial(2 * n, 0, half)
    h2n = Poly2.monomial(2 * n, 0, half)
    # b = 1/s, so t = b*s = 1
    return _assemble(h1, h2n, params.s_squared, Fraction(1), Fraction(1), family=params)


def check_inverse_integrating_factor(model: CenterModel) -> bool:
    """Exact test of f*V_x + g*V_y = V*(f_x + g_y) with V = v_poly."""
    V = model.v_poly
    lhs = model.f * V.partial_x() + model.g * V.partial_y()
    rhs = V * (model.f.partial_x() + model.g.partial_y())
    return lhs == rhs


# ---------------------------------------------------------------------------
# Andreev monodromy test
# ---------------------------------------------------------------------------

MAX_TRUNCATION = 128


def _leading_or_none(series: PowerSeries1, exact: bool):
    lead = series.leading()
    if lead is not None:
        return lead
    if exact:
        return None  # provably the zero function
    raise TruncationInconclusive(
        f"no nonzero coefficient through order {series.truncation_order}"
    )


def andreev_monodromy(sys: PlanarSystem, order: int | None = None) -> MonodromyReport:
    """Classify the nilpotent singularity of x' = y + F(x,y), y' = G(x,y).

    Computes phi with y + F(x, phi(x)) = 0, then xi(x) = G(x, phi(x)) and
    Delta(x) = div(x, phi(x)) as truncated series, extracts their leading
    terms (alpha1, k1) and (alpha2, k2), and evaluates the three monodromy
    branches:

        (a) k1 = 2*k2 + 1 and alpha2^2 + 4*alpha1*(k2 + 1) < 0
        (b) k1 < 2*k2 + 1
        (c) Delta identically zero

    The origin is monodromic iff alpha1 < 0, k1 is odd, and a branch holds.
    The truncation order doubles up to 128 when a leading term cannot be
    pinned down and the series is not provably zero.
    """
    lin = {(i, j): c for (i, j), c in sys.f.terms.items() if i + j <= 1}
    if lin != {(0, 1): Fraction(1)}:
        raise NotNormalForm("x' must be y plus terms of order >= 2")
    F = sys.f - Poly2.monomial(0, 1)
    G = sys.g
    for (i, j) in G.terms:
        if i + j < 2:
            raise NotNormalForm("y' must have order >= 2")
    div = sys.divergence()

    orders = [order] if order is not None else []
    if not orders:
        n0 = 16
        while n0 <= MAX_TRUNCATION:
            orders.append(n0)
            n0 *= 2

    last_exc = None
    for trunc in orders:
        phi = series_solve_implicit(F, trunc)
        exact = implicit_solution_is_exact(F, phi)
        xi = series_substitute(G, phi)
        delta = series_substitute(div, phi)
        try:
            lead_xi = _leading_or_none(xi, exact)
            lead_delta = _leading_or_none(delta, exact or div.is_zero())
        except TruncationInconclusive as exc:
            last_exc = exc
            continue
        if lead_xi is None:
            raise ValueError("xi identically zero: origin is not an isolated singularity")
        k1, alpha1 = lead_xi
        if lead_delta is None:
            alpha2, k2 = None, None
            delta_zero = True
        else:
            k2, alpha2 = lead_delta
            delta_zero = False

        monodromy_pre = alpha1 < 0 and k1 % 2 == 1
        branch = "none"
        discriminant = None
        if delta_zero:
            if monodromy_pre:
                branch = "c"
        else:
            if k1 == 2 * k2 + 1:
                discriminant = alpha2 * alpha2 + 4 * alpha1 * (k2 + 1)
                if monodromy_pre and discriminant < 0:
                    branch = "a"
            elif k1 < 2 * k2 + 1 and monodromy_pre:
                branch = "b"
        return MonodromyReport(
            alpha1=alpha1, k1=k1, alpha2=alpha2, k2=k2,
            delta_identically_zero=delta_zero, branch=branch,
            monodromic=branch != "none", discriminant=discriminant,
        )
    raise last_exc if last_exc is not None else TruncationInconclusive("no usable order")
