"""Exact scalar and polynomial arithmetic.

Base fields are F2, Q and the Gaussian rationals Q(i). Everything is
exact integer or rational arithmetic; no floating point exists anywhere
in this package. Scalars serialize as strings ("1/2", "1+1i", "1"),
polynomials as lists of [exponent-vector, coefficient-string] pairs.
"""
from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """A Gaussian rational a + b*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __eq__(self, other):
        return (isinstance(other, GaussianRational)
                and self.re == other.re and self.im == other.im)

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (self.re, self.im)


class FieldError(ValueError):
    pass


class Field:
    """One of the three coefficient fields, as a dispatch object.

    Values are plain Python objects (int for F2, Fraction for Q,
    GaussianRational for Qi) and all arithmetic goes through the field
    so that F2 reduction happens in exactly one place.
    """

    def __init__(self, tag):
        if tag not in ("F2", "Q", "Qi"):
            raise FieldError("unknown field tag: %r" % (tag,))
        self.tag = tag

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "Field(%r)" % self.tag

    @property
    def zero(self):
        if self.tag == "F2":
            return 0
        if self.tag == "Q":
            return Fraction(0)
        return GaussianRational(0)

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        if self.tag == "F2":
            return n % 2
        if self.tag == "Q":
            return Fraction(n)
        return GaussianRational(n)

    def i_unit(self):
        if self.tag != "Qi":
            raise FieldError("field %s has no square root of -1" % self.tag)
        return GaussianRational(0, 1)

    def add(self, a, b):
        return (a + b) % 2 if self.tag == "F2" else a + b

    def sub(self, a, b):
        return (a - b) % 2 if self.tag == "F2" else a - b

    def mul(self, a, b):
        return (a * b) % 2 if self.tag == "F2" else a * b

    def neg(self, a):
        return (-a) % 2 if self.tag == "F2" else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("division by zero in %s" % self.tag)
        if self.tag == "F2":
            return 1
        if self.tag == "Q":
            return 1 / a
        return a.inverse()

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a

    def sign(self, k):
        """(-1)^k as a field element."""
        return self.from_int(-1 if k % 2 else 1)

    # -- string round-trip ------------------------------------------------

    def parse(self, s):
        s = s.strip()
        if self.tag == "F2":
            try:
                return int(s) % 2
            except ValueError:
                raise FieldError("bad F2 scalar: %r" % s)
        if self.tag == "Q":
            try:
                return Fraction(s)
            except (ValueError, ZeroDivisionError):
                raise FieldError("bad Q scalar: %r" % s)
        if s.endswith("i"):
            body = s[:-1]
            # split off a real part at the last top-level sign, if any
            cut = max(body.rfind("+"), body.rfind("-"))
            if cut > 0:
                real_s, imag_s = body[:cut], body[cut:]
            else:
                real_s, imag_s = "0", body
            if imag_s in ("", "+"):
                imag_s = "1"
            elif imag_s == "-":
                imag_s = "-1"
            try:
                return GaussianRational(Fraction(real_s), Fraction(imag_s))
            except (ValueError, ZeroDivisionError):
                raise FieldError("bad Qi scalar: %r" % s)
        try:
            return GaussianRational(Fraction(s), 0)
        except (ValueError, ZeroDivisionError):
            raise FieldError("bad Qi scalar: %r" % s)

    def show(self, a):
        if self.tag == "F2":
            return str(a % 2)
        if self.tag == "Q":
            return str(a)
        if a.im == 0:
            return str(a.re)
        imag = "%si" % a.im if a.im > 0 else "-%si" % (-a.im)
        if a.re == 0:
            return imag
        return "%s%s%s" % (a.re, "+" if a.im > 0 else "", imag)


F2 = Field("F2")
QQ = Field("Q")
QI = Field("Qi")

FIELDS = {"F2": F2, "Q": QQ, "Qi": QI}


def field_by_tag(tag):
    try:
        return FIELDS[tag]
    except KeyError:
        raise FieldError("unknown field tag: %r" % (tag,))


class Poly:
    """Polynomial in U_1..U_r, sparse on exponent vectors.

    Zero coefficients are never stored. The Alexander degree of the
    monomial U^e is -sum(e), so a homogeneous polynomial has a
    well-defined Alexander degree.
    """

    __slots__ = ("field", "arity", "coeffs")

    def __init__(self, field, arity, coeffs=None):
        self.field = field
        self.arity = arity
        clean = {}
        if coeffs:
            for exp, c in coeffs.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != arity:
                    raise FieldError("exponent %r does not match arity %d"
                                     % (exp, arity))
                if any(e < 0 for e in exp):
                    raise FieldError("negative exponent in %r" % (exp,))
                if not field.is_zero(c):
                    clean[exp] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, arity):
        return cls(field, arity)

    @classmethod
    def const(cls, field, arity, scalar):
        return cls(field, arity, {(0,) * arity: scalar})

    @classmethod
    def one(cls, field, arity):
        return cls.const(field, arity, field.one)

    @classmethod
    def monomial(cls, field, arity, exp, scalar=None):
        if scalar is None:
            scalar = field.one
        return cls(field, arity, {tuple(exp): scalar})

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def is_monomial(self):
        return len(self.coeffs) == 1

    def constant_term(self):
        return self.coeffs.get((0,) * self.arity, self.field.zero)

    def alexander_degree(self):
        """Common Alexander degree of all monomials, or None if mixed."""
        degs = {-sum(e) for e in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            return None
        return degs.pop()

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.field != other.field or self.arity != other.arity:
            raise FieldError("polynomial ring mismatch: (%s, r=%d) vs (%s, r=%d)"
                             % (self.field.tag, self.arity,
                                other.field.tag, other.arity))

    def add(self, other):
        self._check(other)
        out = dict(self.coeffs)
        f = self.field
        for exp, c in other.coeffs.items():
            out[exp] = f.add(out.get(exp, f.zero), c)
        return Poly(f, self.arity, out)

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        f = self.field
        return Poly(f, self.arity, {e: f.neg(c) for e, c in self.coeffs.items()})

    def mul(self, other):
        self._check(other)
        f = self.field
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = f.add(out.get(e, f.zero), f.mul(c1, c2))
        return Poly(f, self.arity, out)

    def scalar_mul(self, scalar):
        f = self.field
        return Poly(f, self.arity,
                    {e: f.mul(scalar, c) for e, c in self.coeffs.items()})

    def times_monomial(self, exp, scalar=None):
        return self.mul(Poly.monomial(self.field, self.arity, exp, scalar))

    def eval_at_unit_rescale(self, alphas):
        """Substitute U_i -> alpha_i * U_i for nonzero scalars alpha_i."""
        f = self.field
        if len(alphas) != self.arity:
            raise FieldError("expected %d rescale units, got %d"
                             % (self.arity, len(alphas)))
        for a in alphas:
            if f.is_zero(a):
                raise FieldError("rescale unit must be nonzero")
        out = {}
        for exp, c in self.coeffs.items():
            scale = f.one
            for a, e in zip(alphas, exp):
                for _ in range(e):
                    scale = f.mul(scale, a)
            out[exp] = f.mul(c, scale)
        return Poly(f, self.arity, out)

    def collapse_to_single(self):
        """Set every variable equal to one variable U (for r-to-1 maps)."""
        f = self.field
        out = {}
        for exp, c in self.coeffs.items():
            e = (sum(exp),)
            out[e] = f.add(out.get(e, f.zero), c)
        return Poly(f, 1, out)

    def extend_arity(self, arity, offset):
        """View in a larger ring, variables shifted to start at `offset`."""
        out = {}
        for exp, c in self.coeffs.items():
            e = [0] * arity
            for i, v in enumerate(exp):
                e[offset + i] = v
            out[tuple(e)] = c
        return Poly(self.field, arity, out)

    # -- equality and display -------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.arity == other.arity and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.arity,
                     tuple(sorted(self.coeffs.items(),
                                  key=lambda kv: kv[0]))))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for exp in sorted(self.coeffs):
            c = self.field.show(self.coeffs[exp])
            mono = "*".join("U%d^%d" % (i + 1, e)
                            for i, e in enumerate(exp) if e)
            parts.append(c if not mono else "%s*%s" % (c, mono))
        return "Poly(%s)" % " + ".join(parts)

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return [[list(exp), self.field.show(c)]
                for exp, c in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, field, arity, data):
        coeffs = {}
        f = field
        for item in data:
            if len(item) != 2:
                raise FieldError("bad polynomial term: %r" % (item,))
            exp, cs = item
            exp = tuple(int(e) for e in exp)
            c = f.parse(cs)
            coeffs[exp] = f.add(coeffs.get(exp, f.zero), c)
        return cls(field, arity, coeffs)
