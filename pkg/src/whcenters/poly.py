"""Exact sparse bivariate polynomials and truncated power series over rationals.

All coefficients are `fractions.Fraction`; floating point enters only through
the explicit `eval` methods. Term order is (i, j) lexicographic everywhere,
which fixes the float summation order.
"""

from fractions import Fraction


def rational(value) -> Fraction:
    """Coerce int / Fraction / 'p/q' string to Fraction. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("float coefficient in exact context; wrap with Fraction explicitly")
    return Fraction(value)


def fraction_str(q: Fraction) -> str:
    """Render a Fraction as 'p/q' with an explicit denominator."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    """Parse 'p/q', 'p', or an int into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


class Poly2:
    """Sparse polynomial in x, y with Fraction coefficients.

    Terms live in a dict mapping (i, j) exponent pairs to nonzero Fractions.
    Instances are treated as immutable; all operations build new objects.
    """

    __slots__ = ("_terms", "_float_terms")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                c = rational(c)
                if c != 0:
                    if i < 0 or j < 0:
                        raise ValueError(f"negative exponent ({i}, {j})")
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._float_terms = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero() -> "Poly2":
        return Poly2()

    @staticmethod
    def monomial(i: int, j: int, coeff=1) -> "Poly2":
        return Poly2({(i, j): rational(coeff)})

    @staticmethod
    def const(c) -> "Poly2":
        return Poly2({(0, 0): rational(c)})

    # -- basic protocol --------------------------------------------------

    @property
    def terms(self) -> dict:
        """Internal term map; do not mutate."""
        return self._terms

    def items(self):
        """Terms in (i, j) lexicographic order."""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(i + j for (i, j) in self._terms)

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "Poly2(0)"
        bits = []
        for (i, j), c in self.items():
            part = []
            if i:
                part.append("x" + (f"^{i}" if i > 1 else ""))
            if j:
                part.append("y" + (f"^{j}" if j > 1 else ""))
            body = "*".join(part) if part else "1"
            bits.append(f"{c}*{body}")
        return "Poly2(" + " + ".join(bits) + ")"

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rational(other)
            if c == 0:
                return Poly2()
            return Poly2({k: v * c for k, v in self._terms.items()})
        if not isinstance(other, Poly2):
            return NotImplemented
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                s = out.get(k, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly2.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- calculus ---------------------------------------------------------

    def partial_x(self) -> "Poly2":
        return Poly2({(i - 1, j): c * i for (i, j), c in self._terms.items() if i > 0})

    def partial_y(self) -> "Poly2":
        return Poly2({(i, j - 1): c * j for (i, j), c in self._terms.items() if j > 0})

    # -- evaluation --------------------------------------------------------

    def float_terms(self):
        """[(i, j, float(c)), ...] in lexicographic term order, cached."""
        if self._float_terms is None:
            self._float_terms = tuple((i, j, float(c)) for (i, j), c in self.items())
        return self._float_terms

    def eval(self, x: float, y: float) -> float:
        """Double-precision evaluation with deterministic term order."""
        total = 0.0
        for i, j, c in self.float_terms():
            total += c * x**i * y**j
        return total

    def eval_arrays(self, x, y):
        """Vectorized double evaluation on ndarray inputs (same term order)."""
        total = 0.0
        for i, j, c in self.float_terms():
            total = total + c * x**i * y**j
        return total

    def eval_exact(self, x, y) -> Fraction:
        """Exact evaluation at rational arguments."""
        x = rational(x)
        y = rational(y)
        total = Fraction(0)
        for (i, j), c in self.items():
            total += c * x**i * y**j
        return total

    def subs_y(self, p: "Poly2") -> "Poly2":
        """Exact substitution y -> p(x, y)."""
        out = Poly2()
        for (i, j), c in self.items():
            out = out + Poly2.monomial(i, 0, c) * (p**j)
        return out

    # -- weight homogeneity -------------------------------------------------

    def weighted_degree(self, alpha, beta):
        """Common weighted degree alpha*i + beta*j, or None if terms disagree."""
        if not self._terms:
            return None
        alpha = rational(alpha)
        beta = rational(beta)
        degs = {alpha * i + beta * j for (i, j) in self._terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- serialization --------------------------------------------------------

    def to_json_terms(self) -> list:
        """[[i, j, "p/q"], ...] sorted by (i, j)."""
        return [[i, j, fraction_str(c)] for (i, j), c in self.items()]

    @staticmethod
    def from_json_terms(data) -> "Poly2":
        terms = {}
        for i, j, c in data:
            terms[(int(i), int(j))] = parse_fraction(c)
        return Poly2(terms)


class PowerSeries1:
    """Truncated univariate power series with Fraction coefficients.

    `coeffs[k]` is the coefficient of x^k; len(coeffs) == truncation_order + 1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        coeffs = [rational(c) for c in coeffs]
        if order is not None:
            if len(coeffs) > order + 1:
                coeffs = coeffs[: order + 1]
            else:
                coeffs = coeffs + [Fraction(0)] * (order + 1 - len(coeffs))
        if not coeffs:
            raise ValueError("empty coefficient list")
        self.coeffs = coeffs

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def zero(order: int) -> "PowerSeries1":
        return PowerSeries1([Fraction(0)] * (order + 1))

    def __eq__(self, other):
        if not isinstance(other, PowerSeries1):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        bits = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "PowerSeries1(" + (" + ".join(bits) if bits else "0") + f"; O(x^{len(self.coeffs)}))"

    def __add__(self, other):
        n = self.truncation_order
        if isinstance(other, (int, Fraction)):
            out = list(self.coeffs)
            out[0] += rational(other)
            return PowerSeries1(out)
        if other.truncation_order != n:
            raise ValueError("truncation order mismatch")
        return PowerSeries1([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return PowerSeries1([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        n = self.truncation_order
        if isinstance(other, (int, Fraction)):
            c = rational(other)
            return PowerSeries1([a * c for a in self.coeffs])
        if other.truncation_order != n:
            raise ValueError("truncation order mismatch")
        out = [Fraction(0)] * (n + 1)
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for m, b in enumerate(other.coeffs):
                if k + m > n:
                    break
                if b != 0:
                    out[k + m] += a * b
        return PowerSeries1(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        n = self.truncation_order
        result = PowerSeries1([Fraction(1)], order=n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def leading(self):
        """(order, coefficient) of the lowest nonzero term, or None."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k, c
        return None

    def to_poly2(self) -> Poly2:
        """Exact polynomial in x built from the (finitely many) stored terms."""
        return Poly2({(k, 0): c for k, c in enumerate(self.coeffs) if c != 0})


def series_substitute(F: Poly2, phi: PowerSeries1) -> PowerSeries1:
    """F(x, phi(x)) truncated at phi's order."""
    n = phi.truncation_order
    out = PowerSeries1.zero(n)
    for (i, j), c in F.items():
        if i > n:
            continue
        term = phi**j * c
        shifted = [Fraction(0)] * i + term.coeffs[: n + 1 - i]
        out = out + PowerSeries1(shifted, order=n)
    return out


def series_solve_implicit(F: Poly2, order: int) -> PowerSeries1:
    """Solve y + F(x, y) = 0 for y = phi(x) with phi(0) = 0, truncated at `order`.

    Fixed-point iteration phi <- -F(x, phi); each pass fixes at least one more
    coefficient because every term of F has total degree >= 2, so the loop
    terminates after at most order + 1 rounds.

    Raises ValueError if F contains a term of total degree < 2.
    """
    if order < 1:
        raise ValueError("order must be positive")
    for (i, j) in F.terms:
        if i + j < 2:
            raise ValueError(f"F has a term of total degree {i + j} < 2")
    phi = PowerSeries1.zero(order)
    for _ in range(order + 2):
        nxt = -series_substitute(F, phi)
        if nxt == phi:
            return phi
        phi = nxt
    raise RuntimeError("implicit series iteration failed to stabilize")


def implicit_solution_is_exact(F: Poly2, phi: PowerSeries1) -> bool:
    """True iff phi, read as a polynomial, solves y + F(x, y) = 0 exactly."""
    p = phi.to_poly2()
    residual = p + F.subs_y(p)
    return residual.is_zero()


# Convenience atoms.
X = Poly2.monomial(1, 0)
Y = Poly2.monomial(0, 1)
