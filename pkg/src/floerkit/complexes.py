"""Free bigraded chain complexes over k[U_1..U_r].

A FreeComplex carries a homological grading h (integers, or residues
mod 2 when declared Z2-graded) and an Alexander grading vector. Each
ring variable U_i has Alexander degree -1; the Alexander vector either
has one slot per ring variable or is a single total grading (the latter
is what mapping cones over U_1 - U_2 force, since that map is only
homogeneous for the total grading).

Differentials are sparse: a dict keyed by (target name, source name)
with Poly values. Everything is exact.
"""
from __future__ import annotations

import json

from . import linalg
from .scalars import FieldError, Poly, field_by_tag


class ComplexFormatError(ValueError):
    """Raised when a complex file or construction is malformed.

    The message carries the JSON field path of the offending value so a
    CLI user can find it.
    """


class Generator:
    __slots__ = ("name", "h", "alex")

    def __init__(self, name, h, alex):
        self.name = str(name)
        self.h = int(h)
        self.alex = tuple(int(a) for a in alex)

    def __repr__(self):
        return "Generator(%r, h=%d, alex=%s)" % (self.name, self.h, list(self.alex))

    def __eq__(self, other):
        return (isinstance(other, Generator) and self.name == other.name
                and self.h == other.h and self.alex == other.alex)


def _alex_weight(exp, alex_len):
    """Alexander degree vector removed by multiplying with U^exp."""
    if alex_len == len(exp):
        return tuple(exp)
    if alex_len == 1:
        return (sum(exp),)
    # only constants can live in a ring whose variables have no slot
    return (0,) * alex_len if not any(exp) else None


class FreeComplex:
    """Finitely generated free chain complex over k[U_1..U_r]."""

    def __init__(self, field, arity, generators, differential=None,
                 grading="Z"):
        self.field = field
        self.arity = int(arity)
        if grading not in ("Z", "Z2"):
            raise ComplexFormatError("grading: expected 'Z' or 'Z2', got %r"
                                     % (grading,))
        self.grading = grading
        self.generators = list(generators)
        self.by_name = {}
        for i, g in enumerate(self.generators):
            if g.name in self.by_name:
                raise ComplexFormatError("generators[%d].name: duplicate %r"
                                         % (i, g.name))
            self.by_name[g.name] = g
        lens = {len(g.alex) for g in self.generators}
        if len(lens) > 1:
            raise ComplexFormatError(
                "generators: mixed alex vector lengths %s" % sorted(lens))
        self.alex_len = lens.pop() if lens else (self.arity or 1)
        if self.alex_len not in (1, self.arity) and self.generators:
            raise ComplexFormatError(
                "generators: alex length %d fits neither 1 nor arity %d"
                % (self.alex_len, self.arity))
        self.diff = {}
        for (t, s), p in (differential or {}).items():
            if t not in self.by_name:
                raise ComplexFormatError("differential: unknown target %r" % (t,))
            if s not in self.by_name:
                raise ComplexFormatError("differential: unknown source %r" % (s,))
            if p.is_zero():
                continue
            if p.field != field or p.arity != self.arity:
                raise ComplexFormatError(
                    "differential[%s <- %s]: ring mismatch" % (t, s))
            self.diff[(t, s)] = p

    # -- bookkeeping --------------------------------------------------------

    def names(self):
        return [g.name for g in self.generators]

    def gen(self, name):
        return self.by_name[name]

    def d_entry(self, tgt, src):
        return self.diff.get((tgt, src), Poly.zero(self.field, self.arity))

    def d_of(self, src):
        return [(t, p) for (t, s), p in self.diff.items() if s == src]

    def h_equal(self, a, b):
        if self.grading == "Z2":
            return (a - b) % 2 == 0
        return a == b

    def bidegree(self, name):
        g = self.by_name[name]
        return (g.h, g.alex)

    def total_alex(self, name):
        return sum(self.by_name[name].alex)

    def __repr__(self):
        return "FreeComplex(%s, r=%d, %d generators, %d entries)" % (
            self.field.tag, self.arity, len(self.generators), len(self.diff))

    # -- validation -----------------------------------------------------------

    def validate(self):
        """Check d^2 = 0 and both grading laws; never raises.

        Returns a ValidationReport whose issues name the offending
        generator pairs.
        """
        issues = []
        f = self.field
        for (t, s), p in sorted(self.diff.items()):
            gt, gs = self.by_name[t], self.by_name[s]
            if not self.h_equal(gt.h, gs.h - 1):
                issues.append(ValidationIssue(
                    "h-grading", s, t,
                    "entry %s <- %s has h %d -> %d, expected drop by 1"
                    % (t, s, gs.h, gt.h)))
            for exp in p.coeffs:
                w = _alex_weight(exp, self.alex_len)
                expected = (tuple(a - b for a, b in zip(gt.alex, w))
                            if w is not None else None)
                if expected != gs.alex:
                    issues.append(ValidationIssue(
                        "alex-grading", s, t,
                        "entry %s <- %s, monomial U^%s moves Alexander %s -> %s"
                        % (t, s, list(exp), list(gs.alex),
                           list(expected) if expected else "?")))
                    break
        # d^2, tracked per (target, source) pair of the composite
        square = {}
        for (t, s), p in self.diff.items():
            for (t2, s2), q in self.diff.items():
                if s2 != t:
                    continue
                key = (t2, s)
                acc = square.get(key, Poly.zero(f, self.arity))
                square[key] = acc.add(q.mul(p))
        for (t2, s), p in sorted(square.items()):
            if not p.is_zero():
                issues.append(ValidationIssue(
                    "d-squared", s, t2,
                    "d^2 sends %s to %s with coefficient %r" % (s, t2, p)))
        return ValidationReport(issues)

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        ds = []
        for (t, s) in sorted(self.diff):
            ds.append([s, t, self.diff[(t, s)].to_json()])
        return {
            "field": self.field.tag,
            "arity": self.arity,
            "grading": self.grading,
            "generators": [{"name": g.name, "h": g.h, "alex": list(g.alex)}
                           for g in self.generators],
            "differential": ds,
        }

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict):
            raise ComplexFormatError("top level: expected an object")
        for key in ("field", "arity", "grading", "generators", "differential"):
            if key not in doc:
                raise ComplexFormatError("%s: missing" % key)
        try:
            field = field_by_tag(doc["field"])
        except FieldError as e:
            raise ComplexFormatError("field: %s" % e)
        try:
            arity = int(doc["arity"])
        except (TypeError, ValueError):
            raise ComplexFormatError("arity: expected an integer, got %r"
                                     % (doc["arity"],))
        if arity < 0:
            raise ComplexFormatError("arity: must be nonnegative")
        gens = []
        for i, g in enumerate(doc["generators"]):
            for key in ("name", "h", "alex"):
                if key not in g:
                    raise ComplexFormatError("generators[%d].%s: missing" % (i, key))
            try:
                gens.append(Generator(g["name"], g["h"], g["alex"]))
            except (TypeError, ValueError):
                raise ComplexFormatError("generators[%d]: malformed" % i)
        diff = {}
        for i, row in enumerate(doc["differential"]):
            if not isinstance(row, list) or len(row) != 3:
                raise ComplexFormatError(
                    "differential[%d]: expected [from, to, terms]" % i)
            s, t, terms = row
            try:
                p = Poly.from_json(field, arity, terms)
            except (FieldError, TypeError, ValueError) as e:
                raise ComplexFormatError("differential[%d]: %s" % (i, e))
            key = (t, s)
            try:
                diff[key] = diff[key].add(p) if key in diff else p
            except FieldError as e:
                raise ComplexFormatError("differential[%d]: %s" % (i, e))
        try:
            return cls(field, arity, gens, diff, doc["grading"])
        except ComplexFormatError:
            raise
        except (TypeError, ValueError) as e:
            raise ComplexFormatError(str(e))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def load_complex(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ComplexFormatError("not valid JSON: %s" % e)
    return FreeComplex.from_json(doc)


class ValidationIssue:
    __slots__ = ("kind", "source", "target", "message")

    def __init__(self, kind, source, target, message):
        self.kind = kind
        self.source = source
        self.target = target
        self.message = message

    def __repr__(self):
        return "ValidationIssue(%s: %s)" % (self.kind, self.message)


class ValidationReport:
    def __init__(self, issues):
        self.issues = list(issues)

    @property
    def ok(self):
        return not self.issues

    def __bool__(self):
        return self.ok

    def lines(self):
        if self.ok:
            return ["valid"]
        return ["%s: %s" % (i.kind, i.message) for i in self.issues]


class ChainMap:
    """Map of free complexes with declared h and Alexander shifts.

    The matrix is keyed (target generator, source generator). A map f
    with h-shift s is a cycle when d_target . f = (-1)^s f . d_source.
    """

    def __init__(self, source, target, matrix, h_shift=0, alex_shift=None):
        if source.field != target.field or source.arity != target.arity:
            raise FieldError("chain map between different rings")
        self.source = source
        self.target = target
        self.h_shift = int(h_shift)
        if alex_shift is None:
            alex_shift = (0,) * target.alex_len
        self.alex_shift = tuple(int(a) for a in alex_shift)
        self.matrix = {}
        for (t, s), p in matrix.items():
            if p.is_zero():
                continue
            if t not in target.by_name:
                raise ComplexFormatError("chain map: unknown target %r" % (t,))
            if s not in source.by_name:
                raise ComplexFormatError("chain map: unknown source %r" % (s,))
            self.matrix[(t, s)] = p

    def entry(self, tgt, src):
        return self.matrix.get((tgt, src),
                               Poly.zero(self.source.field, self.source.arity))

    def gradings_ok(self):
        """Every nonzero entry matches the declared shifts."""
        src, tgt = self.source, self.target
        for (t, s), p in self.matrix.items():
            gt, gs = tgt.by_name[t], src.by_name[s]
            if not tgt.h_equal(gt.h, gs.h + self.h_shift):
                return False
            for exp in p.coeffs:
                w = _alex_weight(exp, tgt.alex_len)
                if w is None:
                    return False
                got = tuple(a - b for a, b in zip(gt.alex, w))
                want = tuple(a + b for a, b in zip(gs.alex, self.alex_shift))
                if got != want:
                    return False
        return True

    def compose(self, other):
        """self . other (apply `other` first)."""
        out = {}
        f = self.source.field
        for (mid, s), p in other.matrix.items():
            for (t, mid2), q in self.matrix.items():
                if mid2 != mid:
                    continue
                key = (t, s)
                acc = out.get(key, Poly.zero(f, self.source.arity))
                out[key] = acc.add(q.mul(p))
        return ChainMap(other.source, self.target, out,
                        self.h_shift + other.h_shift,
                        tuple(a + b for a, b in
                              zip(self.alex_shift, other.alex_shift)))

    def add(self, other):
        if (self.h_shift != other.h_shift
                or self.alex_shift != other.alex_shift):
            raise FieldError("adding chain maps with different shifts")
        out = dict(self.matrix)
        f = self.source.field
        for key, p in other.matrix.items():
            out[key] = out[key].add(p) if key in out else p
        return ChainMap(self.source, self.target, out, self.h_shift,
                        self.alex_shift)

    def scale(self, scalar):
        return ChainMap(self.source, self.target,
                        {k: p.scalar_mul(scalar) for k, p in self.matrix.items()},
                        self.h_shift, self.alex_shift)

    def neg(self):
        return self.scale(self.source.field.from_int(-1))

    def is_zero(self):
        return not self.matrix

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.matrix == other.matrix
                and self.h_shift == other.h_shift
                and self.alex_shift == other.alex_shift)

    def is_cycle(self):
        """d_target . f - (-1)^{h_shift} f . d_source = 0, entry-wise."""
        f = self.source.field
        acc = {}

        def bump(key, p):
            acc[key] = acc[key].add(p) if key in acc else p

        for (t, s), p in self.matrix.items():
            for (t2, q_src), q in self.target.diff.items():
                if q_src == t:
                    bump((t2, s), q.mul(p))
        sign = f.sign(self.h_shift + 1)
        for (mid, s), p in self.source.diff.items():
            for (t, s2), q in self.matrix.items():
                if s2 == mid:
                    bump((t, s), q.mul(p).scalar_mul(sign))
        return all(p.is_zero() for p in acc.values())

    @classmethod
    def identity(cls, cx):
        one = Poly.one(cx.field, cx.arity)
        return cls(cx, cx, {(g.name, g.name): one for g in cx.generators})

    @classmethod
    def zero_map(cls, source, target, h_shift=0, alex_shift=None):
        return cls(source, target, {}, h_shift, alex_shift)


def differential_map(cx):
    """The differential of cx packaged as a degree -1 ChainMap."""
    return ChainMap(cx, cx, dict(cx.diff), h_shift=-1)


def map_boundary(f):
    """Boundary of f in the morphism complex; zero exactly when f is a cycle.

    With s = f.h_shift this is d_target . f + (-1)^{s+1} f . d_source, a
    map of shift s - 1; for an s = 0 map the vanishing says "chain map"
    and for an s = 1 map K the boundary d.K + K.d is what a homotopy
    between grade-preserving maps bounds.
    """
    sign = f.source.field.sign(f.h_shift + 1)
    left = differential_map(f.target).compose(f)
    right = f.compose(differential_map(f.source)).scale(sign)
    return left.add(right)


def find_homotopy(f, g):
    """Solve f - g = map_boundary(K) for K, or return None.

    Both maps must share shifts and have constant entries; the unknown K
    is supported on the generator pairs its gradings allow, so this is a
    finite exact linear solve. Used to exhibit explicit homotopies.
    """
    def same(a, b):
        return a is b or a.to_json() == b.to_json()

    if not (same(f.source, g.source) and same(f.target, g.target)):
        raise ValueError("find_homotopy: maps must share source and target")
    if f.h_shift != g.h_shift or f.alex_shift != g.alex_shift:
        raise ValueError("find_homotopy: maps must share shifts")
    src, tgt = f.source, f.target
    fld = src.field
    for cx in (src, tgt):
        for p in cx.diff.values():
            if set(p.coeffs) - {(0,) * cx.arity}:
                raise ValueError("find_homotopy: non-constant differential")
    s = f.h_shift

    def const(m, t, ss):
        return m.get((t, ss), Poly.zero(fld, src.arity)).constant_term()

    slots = [(t.name, u.name) for u in src.generators for t in tgt.generators
             if tgt.h_equal(t.h, u.h + s + 1)
             and t.alex == tuple(a + b for a, b in zip(u.alex, f.alex_shift))]
    cells = [(t.name, u.name) for u in src.generators for t in tgt.generators
             if tgt.h_equal(t.h, u.h + s)
             and t.alex == tuple(a + b for a, b in zip(u.alex, f.alex_shift))]
    col = {slot: j for j, slot in enumerate(slots)}
    sgn = fld.sign(s)
    rows = []
    rhs = []
    diff = f.add(g.neg())
    for (t, u) in cells:
        row = [fld.zero] * len(slots)
        for (m, _) in [k for k in slots if k[1] == u]:
            c = const(tgt.diff, t, m)
            if not fld.is_zero(c):
                j = col[(m, u)]
                row[j] = fld.add(row[j], c)
        for (_, m) in [k for k in slots if k[0] == t]:
            c = fld.mul(sgn, const(src.diff, m, u))
            if not fld.is_zero(c):
                j = col[(t, m)]
                row[j] = fld.add(row[j], c)
        rows.append(row)
        rhs.append(const(diff.matrix, t, u))
    for (t, u), p in diff.matrix.items():
        if (t, u) not in set(cells) and not p.is_zero():
            return None
    sol = linalg.solve(fld, rows, rhs) if slots else (
        [] if all(fld.is_zero(x) for x in rhs) else None)
    if sol is None:
        return None
    entries = {slot: Poly.const(fld, src.arity, c)
               for slot, c in zip(slots, sol) if not fld.is_zero(c)}
    K = ChainMap(src, tgt, entries, s + 1, f.alex_shift)
    check = map_boundary(K).add(diff.neg())
    assert check.is_zero(), "find_homotopy produced a wrong certificate"
    return K


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def cone(f):
    """Mapping cone of a cycle f: C -> C'.

    Source generators keep their homological grading and absorb the
    map's Alexander shift; target generators move down by h-shift + 1
    and their internal differential picks up the translation sign.
    """
    if not f.is_cycle():
        raise ValueError("cone: the map is not a cycle")
    src, tgt = f.source, f.target
    if src.alex_len != tgt.alex_len or src.grading != tgt.grading:
        raise ValueError("cone: source and target gradings do not line up")
    s = f.h_shift
    gens = []
    for g in src.generators:
        gens.append(Generator("s." + g.name, g.h,
                              tuple(a + b for a, b in zip(g.alex, f.alex_shift))))
    for g in tgt.generators:
        gens.append(Generator("t." + g.name, g.h - s - 1, g.alex))
    diff = {}
    for (t, x), p in src.diff.items():
        diff[("s." + t, "s." + x)] = p
    sign = src.field.sign(s + 1)
    for (t, x), p in tgt.diff.items():
        diff[("t." + t, "t." + x)] = p.scalar_mul(sign)
    for (t, x), p in f.matrix.items():
        diff[("t." + t, "s." + x)] = p
    return FreeComplex(src.field, src.arity, gens, diff, src.grading)


def shift(cx, n):
    """Raise homological gradings by n; the differential becomes (-1)^n d."""
    gens = [Generator(g.name, g.h + n, g.alex) for g in cx.generators]
    sign = cx.field.sign(n)
    diff = {k: p.scalar_mul(sign) for k, p in cx.diff.items()}
    return FreeComplex(cx.field, cx.arity, gens, diff, cx.grading)


def direct_sum(c1, c2, tags=("a.", "b.")):
    if c1.field != c2.field or c1.arity != c2.arity or c1.grading != c2.grading:
        raise FieldError("direct sum of complexes over different rings")
    gens = ([Generator(tags[0] + g.name, g.h, g.alex) for g in c1.generators]
            + [Generator(tags[1] + g.name, g.h, g.alex) for g in c2.generators])
    diff = {}
    for (t, s), p in c1.diff.items():
        diff[(tags[0] + t, tags[0] + s)] = p
    for (t, s), p in c2.diff.items():
        diff[(tags[1] + t, tags[1] + s)] = p
    return FreeComplex(c1.field, c1.arity, gens, diff, c1.grading)


def tensor_field(c1, c2):
    """Tensor over the base field; ring arities add.

    The differential is d1 x 1 + (-1)^{h(x)} 1 x d2 (Koszul sign on the
    first factor's grading).
    """
    if c1.field != c2.field:
        raise FieldError("tensor of complexes over different fields")
    if c1.alex_len != c1.arity or c2.alex_len != c2.arity:
        raise FieldError("tensor_field needs per-variable Alexander gradings")
    if c1.grading != c2.grading:
        raise FieldError("tensor of complexes with different grading modes")
    r = c1.arity + c2.arity
    f = c1.field
    gens = []
    for g1 in c1.generators:
        for g2 in c2.generators:
            gens.append(Generator("%s|%s" % (g1.name, g2.name),
                                  g1.h + g2.h, g1.alex + g2.alex))
    diff = {}
    for (t, s), p in c1.diff.items():
        q = p.extend_arity(r, 0)
        for g2 in c2.generators:
            diff[("%s|%s" % (t, g2.name), "%s|%s" % (s, g2.name))] = q
    for (t, s), p in c2.diff.items():
        q = p.extend_arity(r, c1.arity)
        for g1 in c1.generators:
            signed = q.scalar_mul(f.sign(g1.h))
            key = ("%s|%s" % (g1.name, t), "%s|%s" % (g1.name, s))
            diff[key] = diff[key].add(signed) if key in diff else signed
    return FreeComplex(f, r, gens, diff, c1.grading)


def tensor_ring(c1, c2):
    """Tensor over k[U], both factors single-variable."""
    if c1.arity != 1 or c2.arity != 1:
        raise FieldError("tensor_ring needs single-variable complexes")
    if c1.field != c2.field or c1.grading != c2.grading:
        raise FieldError("tensor of complexes over different rings")
    f = c1.field
    gens = []
    for g1 in c1.generators:
        for g2 in c2.generators:
            gens.append(Generator("%s|%s" % (g1.name, g2.name), g1.h + g2.h,
                                  (g1.alex[0] + g2.alex[0],)))
    diff = {}
    for (t, s), p in c1.diff.items():
        for g2 in c2.generators:
            key = ("%s|%s" % (t, g2.name), "%s|%s" % (s, g2.name))
            diff[key] = diff[key].add(p) if key in diff else p
    for (t, s), p in c2.diff.items():
        for g1 in c1.generators:
            signed = p.scalar_mul(f.sign(g1.h))
            key = ("%s|%s" % (g1.name, t), "%s|%s" % (g1.name, s))
            diff[key] = diff[key].add(signed) if key in diff else signed
    return FreeComplex(f, 1, gens, diff, c1.grading)


def truncate_above(cx, q):
    """Subcomplex on generators of total Alexander grading > q."""
    keep = {g.name for g in cx.generators if sum(g.alex) > q}
    gens = [g for g in cx.generators if g.name in keep]
    diff = {}
    for (t, s), p in cx.diff.items():
        if s in keep:
            if t not in keep:
                raise ValueError(
                    "truncate_above: differential leaves the subcomplex "
                    "(%s -> %s); is the complex Alexander-homogeneous?" % (s, t))
            diff[(t, s)] = p
    return FreeComplex(cx.field, cx.arity, gens, diff, cx.grading)


def specialize_u_zero(cx):
    """Set every U_i to zero; the result is a complex over the bare field."""
    diff = {}
    for (t, s), p in cx.diff.items():
        c = p.constant_term()
        if not cx.field.is_zero(c):
            diff[(t, s)] = Poly.const(cx.field, 0, c)
    gens = [Generator(g.name, g.h, g.alex) for g in cx.generators]
    out = FreeComplex.__new__(FreeComplex)
    out.field = cx.field
    out.arity = 0
    out.grading = cx.grading
    out.generators = gens
    out.by_name = {g.name: g for g in gens}
    out.alex_len = cx.alex_len
    out.diff = diff
    return out


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

def homology_over_field(cx):
    """Bigraded dimension table of homology with all U_i = 0.

    Returns a dict {(h, alex tuple): dim} with zero entries omitted. In
    Z2 grading mode the h key is the residue 0 or 1.
    """
    c0 = specialize_u_zero(cx)
    mod2 = cx.grading == "Z2"
    by_bidegree = {}
    for g in c0.generators:
        key = (g.h % 2 if mod2 else g.h, g.alex)
        by_bidegree.setdefault(key, []).append(g.name)
    f = cx.field
    table = {}
    for (h, alex), names in sorted(by_bidegree.items()):
        below = by_bidegree.get(((h - 1) % 2 if mod2 else h - 1, alex), [])
        above = by_bidegree.get(((h + 1) % 2 if mod2 else h + 1, alex), [])
        d_out = [[_const(c0, t, s) for s in names] for t in below]
        d_in = [[_const(c0, t, s) for s in above] for t in names]
        dim = (len(names) - linalg.rank(f, d_out) - linalg.rank(f, d_in))
        if dim:
            table[(h, alex)] = dim
    return table


def _const(c0, t, s):
    return c0.d_entry(t, s).constant_term()


class GradedModule:
    """Finitely generated k[U]-module, canonically sorted summand list.

    Summands are ("free", h, alex) or ("tors", h, alex, order) with
    order the exponent in k[U]/U^order. Sorting is by alex, then h,
    then kind and order, so equality is decidable.
    """

    def __init__(self, summands):
        canon = []
        for s in summands:
            if s[0] == "free":
                canon.append(("free", int(s[1]), int(s[2])))
            elif s[0] == "tors":
                if int(s[3]) <= 0:
                    raise ValueError("torsion order must be positive")
                canon.append(("tors", int(s[1]), int(s[2]), int(s[3])))
            else:
                raise ValueError("unknown summand kind %r" % (s[0],))
        canon.sort(key=lambda s: (s[2], s[1], s[0] != "free",
                                  s[3] if len(s) > 3 else 0))
        self.summands = canon

    def __eq__(self, other):
        return isinstance(other, GradedModule) and self.summands == other.summands

    def __repr__(self):
        return "GradedModule(%s)" % (self.summands,)

    def free_part(self):
        return [s for s in self.summands if s[0] == "free"]

    def torsion_part(self):
        return [s for s in self.summands if s[0] == "tors"]

    def describe(self):
        """Human-readable one-liner, e.g. 'Free(h=0, A=0) + Torsion(...)'."""
        if not self.summands:
            return "0"
        parts = []
        for s in self.summands:
            if s[0] == "free":
                parts.append("Free(h=%d, A=%d)" % (s[1], s[2]))
            else:
                parts.append("Torsion(h=%d, A=%d, order=%d)" % (s[1], s[2], s[3]))
        return " + ".join(parts)

    def to_json(self):
        return [list(s) for s in self.summands]

    @classmethod
    def from_json(cls, data):
        return cls([tuple(s) for s in data])

    def u_power_cokernel_dims(self, j):
        """Bidegree dimensions of M / U^j M, for cross-checking."""
        table = {}
        for s in self.summands:
            depth = j if s[0] == "free" else min(j, s[3])
            for k in range(depth):
                key = (s[1], s[2] - k)
                table[key] = table.get(key, 0) + 1
        return {k: v for k, v in table.items() if v}


def homology_over_ring(cx):
    """Homology of a single-variable complex as a canonical GradedModule.

    Works by graded Smith reduction: every differential entry of a
    valid complex is a monomial c U^e with e forced by the Alexander
    gradings, so eliminating the globally lowest-degree entry (ties by
    generator order) keeps all entries monomial. An eliminated pair
    with e = 0 is acyclic; with e > 0 it leaves k[U]/U^e at the target.
    """
    if cx.arity != 1:
        raise FieldError("homology_over_ring needs a single U variable")
    f = cx.field
    order = {g.name: i for i, g in enumerate(cx.generators)}
    grades = {g.name: (g.h, g.alex[0]) for g in cx.generators}
    live = set(order)
    entries = {}
    for (t, s), p in cx.diff.items():
        if not p.is_monomial():
            raise ValueError("differential entry %s <- %s is not a monomial; "
                             "is the complex Alexander-homogeneous?" % (t, s))
        exp = next(iter(p.coeffs))
        entries[(t, s)] = p.coeffs[exp]
        if exp[0] != grades[t][1] - grades[s][1]:
            raise ValueError("entry %s <- %s breaks the Alexander grading"
                             % (t, s))

    def degree(t, s):
        return grades[t][1] - grades[s][1]

    summands = []
    while entries:
        key = min(entries, key=lambda ts: (degree(*ts), order[ts[1]], order[ts[0]]))
        y, x = key
        c = entries[key]
        e = degree(y, x)
        cinv = f.inv(c)
        col = {t: v for (t, s), v in entries.items() if s == x and t != y}
        row = {s: v for (t, s), v in entries.items() if t == y and s != x}
        for t, a in col.items():
            for s, b in row.items():
                k2 = (t, s)
                cur = entries.get(k2, f.zero)
                upd = f.sub(cur, f.mul(f.mul(a, cinv), b))
                if f.is_zero(upd):
                    entries.pop(k2, None)
                else:
                    entries[k2] = upd
        for k2 in [k2 for k2 in entries if k2[0] in (x, y) or k2[1] in (x, y)]:
            del entries[k2]
        live.discard(x)
        live.discard(y)
        if e > 0:
            summands.append(("tors", grades[y][0], grades[y][1], e))
    for name in live:
        summands.append(("free", grades[name][0], grades[name][1]))
    return GradedModule(summands)


# ---------------------------------------------------------------------------
# strong deformation retracts
# ---------------------------------------------------------------------------

class SDR:
    """A strong deformation retract (H, i, pi, h) of a field complex.

    The five relations pi.i = id, i.pi = id + d h + h d, h h = 0,
    h i = 0 and pi h = 0 hold as exact matrix identities, and H carries
    zero differential.
    """

    def __init__(self, complex, retract, include, project, homotopy):
        self.complex = complex
        self.retract = retract
        self.include = include
        self.project = project
        self.homotopy = homotopy


def sdr(cx):
    """Contract every invertible differential entry; field coefficients only.

    Raises if some differential entry involves a U variable; apply
    specialize_u_zero first in that case.
    """
    f = cx.field
    for (t, s), p in cx.diff.items():
        for exp in p.coeffs:
            if any(exp):
                raise ValueError(
                    "sdr needs field coefficients; entry %s <- %s has a U "
                    "power (specialize U to zero first)" % (t, s))
    names = cx.names()
    live = list(names)
    d = {(t, s): p.constant_term() for (t, s), p in cx.diff.items()}
    # running maps relative to the original complex
    inc = {(n, n): f.one for n in names}       # (orig, live)
    proj = {(n, n): f.one for n in names}      # (live, orig)
    hom = {}                                   # (orig, orig)

    while True:
        pivot = None
        for s in live:
            for t in live:
                c = d.get((t, s))
                if c is not None and not f.is_zero(c):
                    pivot = (t, s, c)
                    break
            if pivot:
                break
        if pivot is None:
            break
        y, x, c = pivot
        cinv = f.inv(c)
        rest = [w for w in live if w not in (x, y)]
        col = {t: v for (t, s), v in d.items()
               if s == x and t != y and not f.is_zero(v)}
        row = {s: v for (t, s), v in d.items()
               if t == y and s != x and not f.is_zero(v)}
        # step maps between the current live complex and the smaller one
        i2 = {(w, w): f.one for w in rest}
        for w, v in row.items():
            i2[(x, w)] = f.neg(f.mul(cinv, v))
        p2 = {(w, w): f.one for w in rest}
        for t, v in col.items():
            p2[(t, y)] = f.neg(f.mul(cinv, v))
        # compose into the running maps
        new_inc = {}
        for (o, mid), a in inc.items():
            for (mid2, w), b in i2.items():
                if mid2 == mid:
                    key = (o, w)
                    new_inc[key] = f.add(new_inc.get(key, f.zero), f.mul(a, b))
        new_proj = {}
        for (mid, o), a in proj.items():
            for (w, mid2), b in p2.items():
                if mid2 == mid:
                    key = (w, o)
                    new_proj[key] = f.add(new_proj.get(key, f.zero), f.mul(b, a))
        # homotopy: h + i1 h2 p1 where h2 sends y to -c^{-1} x
        for (mid, o), a in proj.items():
            if mid != y:
                continue
            for (o2, mid2), b in inc.items():
                if mid2 != x:
                    continue
                key = (o2, o)
                upd = f.sub(hom.get(key, f.zero), f.mul(f.mul(b, cinv), a))
                if f.is_zero(upd):
                    hom.pop(key, None)
                else:
                    hom[key] = upd
        inc = {k: v for k, v in new_inc.items() if not f.is_zero(v)}
        proj = {k: v for k, v in new_proj.items() if not f.is_zero(v)}
        # Schur update of the differential
        new_d = {}
        for (t, s), v in d.items():
            if t in (x, y) or s in (x, y):
                continue
            new_d[(t, s)] = v
        for t, a in col.items():
            for s, b in row.items():
                key = (t, s)
                upd = f.sub(new_d.get(key, f.zero), f.mul(f.mul(a, cinv), b))
                if f.is_zero(upd):
                    new_d.pop(key, None)
                else:
                    new_d[key] = upd
        d = new_d
        live = rest

    keep = set(live)
    hgens = [Generator(g.name, g.h, g.alex)
             for g in cx.generators if g.name in keep]
    retract = FreeComplex(f, cx.arity, hgens, {}, cx.grading)
    one_arity = cx.arity
    inc_map = ChainMap(retract, cx,
                       {k: Poly.const(f, one_arity, v) for k, v in inc.items()})
    proj_map = ChainMap(cx, retract,
                        {k: Poly.const(f, one_arity, v) for k, v in proj.items()})
    hom_map = ChainMap(cx, cx,
                       {k: Poly.const(f, one_arity, v) for k, v in hom.items()},
                       h_shift=1)
    return SDR(cx, retract, inc_map, proj_map, hom_map)
