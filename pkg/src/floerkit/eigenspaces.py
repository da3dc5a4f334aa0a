"""Generalized eigenspaces of filtered operators on hypercubes.

An operator is a grading-0 filtered cycle mu: H -> H (a CubeMorphism
with constant coefficients).  For an exact eigenvalue lam the
generalized eigenspace of the totalized operator splits along the
vertex filtration; this module constructs the filtered basis change
realizing the splitting, transfers the cube structure across it, and
pushes morphisms, second operators and grading shifts through the
construction.

Everything is verified by matrix arithmetic at construction time and a
failed identity raises RuntimeError rather than returning silently
wrong data: existence is a theorem for valid input, so a failure is an
internal bug, not a user error.

Only Q and Q(i) are supported.  Eigenvalue enumeration needs the
characteristic polynomial to split, and we refuse to chase roots into
extension fields.
"""

from fractions import Fraction

from . import linalg
from .complexes import (ChainMap, FreeComplex, Generator,
                        homology_over_field, map_boundary)
from .hypercubes import (CubeMorphism, Hypercube, _leq, _tag, _weight,
                         cone_cube, edge_cube, morphism_boundary)
from .scalars import FieldError, GaussianRational, Poly

_FIELD_NAMES = {"Q": "Q", "Qi": "Q(i)"}


def _require_eigen_field(field):
    if field.tag not in _FIELD_NAMES:
        raise FieldError("eigenspace computations work over Q or Q(i), "
                         "not %s" % field.tag)


def _scalar_key(field, c):
    """Deterministic sort key for exact scalars."""
    if field.tag == "Qi":
        return (c.re, c.im)
    return (c, Fraction(0))


def _constant(field, p, what):
    """The constant coefficient of p; rejects entries divisible by a U."""
    if set(p.coeffs) - {(0,) * p.arity}:
        raise ValueError("%s must have constant coefficients" % what)
    return p.constant_term()


def _dense(field, ridx, cidx, entries, what):
    """Name-keyed sparse entries to a dense scalar matrix."""
    m = linalg.zeros(field, len(ridx), len(cidx))
    for (t, s), p in entries.items():
        m[ridx[t]][cidx[s]] = _constant(field, p, what)
    return m


def _named(field, rows, cols, entries, what="entry"):
    return _dense(field, {nm: i for i, nm in enumerate(rows)},
                  {nm: j for j, nm in enumerate(cols)}, entries, what)


def _shifted_power(field, m, lam):
    """(m - lam)^n for n = len(m), by repeated squaring."""
    n = len(m)
    a = [row[:] for row in m]
    for i in range(n):
        a[i][i] = field.sub(a[i][i], lam)
    out = linalg.identity(field, n)
    k = n
    while k:
        if k & 1:
            out = linalg.mat_mul(field, out, a)
        k >>= 1
        if k:
            a = linalg.mat_mul(field, a, a)
    return out


def _vertex_complex(field, arity, gens, diff, grading, alex_len):
    cx = FreeComplex(field, arity, gens, diff, grading)
    if not gens:
        # alex_len is inferred from generators, so pin it explicitly for
        # empty vertices to keep the cube uniform
        cx.alex_len = alex_len
    return cx


# -- vertex-level spectral computations ---------------------------------------

def gen_eigenspace(field, matrix, lam):
    """Basis of the generalized lam-eigenspace ker (matrix - lam)^n.

    Vectors come from a deterministic echelon computation, as columns
    (length-n scalar lists).  An empty answer just means lam is not an
    eigenvalue; raising the shifted matrix to the full dimension n makes
    minimal-polynomial bookkeeping unnecessary.
    """
    _require_eigen_field(field)
    p = _shifted_power(field, matrix, lam)
    return linalg.nullspace(field, p, len(matrix))


def _to_sympy(field, c, sympy):
    if field.tag == "Q":
        return sympy.Rational(c.numerator, c.denominator)
    return (sympy.Rational(c.re.numerator, c.re.denominator)
            + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))


def _from_sympy_root(field, z, sympy):
    re, im = sympy.expand(z).as_real_imag()
    re = sympy.Rational(re)
    im = sympy.Rational(im)
    if field.tag == "Q":
        if im != 0:
            raise FieldError("non-real root %s over Q" % z)
        return Fraction(int(re.p), int(re.q))
    return GaussianRational(Fraction(int(re.p), int(re.q)),
                            Fraction(int(im.p), int(im.q)))


def eigenvalues(field, matrix):
    """Exact sorted eigenvalue multiset via the characteristic polynomial.

    Factors over the working field (Gaussian rationals for Qi) and
    refuses, naming the offending factor, whenever an irreducible piece
    of degree two or more appears; the field is never extended silently.
    """
    _require_eigen_field(field)
    n = len(matrix)
    if n == 0:
        return []
    import sympy  # deferred: only this entry point needs symbolic factoring

    x = sympy.Symbol("lam")
    m = sympy.Matrix(n, n,
                     lambda i, j: _to_sympy(field, matrix[i][j], sympy))
    chi = (x * sympy.eye(n) - m).det()
    _, factors = sympy.factor_list(chi, gaussian=(field.tag == "Qi"))
    roots = []
    for fac, mult in factors:
        poly = sympy.Poly(fac, x)
        if poly.degree() == 0:
            continue
        if poly.degree() > 1:
            raise ValueError(
                "characteristic polynomial does not split over %s: "
                "irreducible factor %s" % (_FIELD_NAMES[field.tag], fac))
        a, b = poly.all_coeffs()
        roots.extend([_from_sympy_root(field, -b / a, sympy)] * mult)
    if len(roots) != n:
        raise RuntimeError("internal: eigenvalue multiplicities lost")
    return sorted(roots, key=lambda c: _scalar_key(field, c))


def operator_spectrum(mu):
    """Sorted distinct eigenvalues of an operator's totalization.

    The total matrix is block triangular along the vertex order, so the
    spectrum is the union over the vertex diagonal blocks.
    """
    field = mu.source.field
    out = []
    for e in sorted(mu.source.vertices):
        names = mu.source.vertices[e].names()
        m = _named(field, names, names, mu.component(e, e), "operator")
        for lam in eigenvalues(field, m):
            if lam not in out:
                out.append(lam)
    return sorted(out, key=lambda c: _scalar_key(field, c))


# -- operator validation -------------------------------------------------------

def check_operator(H, mu):
    """Raise unless mu is a valid operator on the cube H.

    Valid means: an endomorphism of H of grading 0 with no Alexander
    shift, constant coefficients throughout (the cube too: eigenspaces
    are plain linear algebra over the field), and [d, mu] = 0 exactly.
    """
    _require_eigen_field(H.field)
    if mu.source is not H and mu.source != H:
        raise ValueError("operator: source cube differs from H")
    if mu.target is not H and mu.target != H:
        raise ValueError("operator: target cube differs from H")
    if mu.grading != 0:
        raise ValueError("operator: must preserve the homological grading")
    if any(mu.alex_shift):
        raise ValueError("operator: must preserve the Alexander grading")
    for (a, b), mat in sorted(mu.components.items()):
        for p in mat.values():
            _constant(H.field, p,
                      "operator component %s->%s" % (_tag(a), _tag(b)))
    for e in sorted(H.vertices):
        for p in H.vertices[e].diff.values():
            _constant(H.field, p, "vertex %s differential" % _tag(e))
    for (a, b), mat in sorted(H.maps.items()):
        for p in mat.values():
            _constant(H.field, p,
                      "structure map %s->%s" % (_tag(a), _tag(b)))
    if not mu.gradings_ok():
        raise ValueError("operator: entries disagree with grading 0")
    if not mu.is_cycle():
        raise ValueError("operator: does not commute with the cube "
                         "differential")


def _check_plain_operator(cx, mu):
    """Same validation for an operator on a plain complex (a ChainMap)."""
    _require_eigen_field(cx.field)
    for side, which in ((mu.source, "source"), (mu.target, "target")):
        if side is not cx and side.to_json() != cx.to_json():
            raise ValueError("operator: %s differs from the complex" % which)
    if mu.h_shift != 0 or any(mu.alex_shift):
        raise ValueError("operator: must preserve both gradings")
    for p in cx.diff.values():
        _constant(cx.field, p, "differential")
    for (t, s), p in mu.matrix.items():
        _constant(cx.field, p, "operator entry %s <- %s" % (t, s))
        gt, gs = cx.by_name[t], cx.by_name[s]
        if not cx.h_equal(gt.h, gs.h) or gt.alex != gs.alex:
            raise ValueError("operator: entry %s <- %s shifts a grading"
                             % (t, s))
    if not mu.is_cycle():
        raise ValueError("operator: does not commute with the differential")


# -- splitting maps ------------------------------------------------------------

class EigenGen:
    """One basis vector of a vertex-level generalized eigenspace."""

    __slots__ = ("name", "h", "alex", "coords")

    def __init__(self, name, h, alex, coords):
        self.name = str(name)
        self.h = int(h)
        self.alex = tuple(alex)
        self.coords = dict(coords)

    def __repr__(self):
        return "EigenGen(%r, h=%d, alex=%s)" % (self.name, self.h,
                                                list(self.alex))


class SplittingMap:
    """Filtered column basis for the generalized eigenspace of (H, mu).

    Per vertex e the diagonal part is an echelon basis of the
    generalized eigenspace of the vertex block of mu, included as-is;
    the strictly increasing correction blocks corr[(e, b)] push each
    column into ker (mu_total - lam)^N.  Assembled, the columns span
    exactly that kernel and the associated graded of the inclusion is
    the identity on each vertex eigenspace.  verify() re-derives all of
    this from the stored data.
    """

    def __init__(self, cube, operator, lam, basis, corr):
        self.cube = cube
        self.operator = operator
        self.lam = lam
        self.basis = {tuple(e): list(v) for e, v in basis.items()}
        self.corr = {}
        for (a, b), block in corr.items():
            a, b = tuple(a), tuple(b)
            if a == b or not _leq(a, b):
                raise ValueError("splitting: correction key %s -> %s is not "
                                 "strictly increasing" % (_tag(a), _tag(b)))
            clean = {k: v for k, v in block.items()
                     if not cube.field.is_zero(v)}
            if clean:
                self.corr[(a, b)] = clean

    def column_keys(self):
        """(vertex, eigen name) pairs in construction order."""
        out = []
        for e in sorted(self.cube.vertices):
            out.extend((e, g.name) for g in self.basis.get(e, []))
        return out

    def dims(self):
        return {e: len(self.basis.get(e, []))
                for e in sorted(self.cube.vertices)}

    def gen(self, e, name):
        for g in self.basis[tuple(e)]:
            if g.name == name:
                return g
        raise KeyError((tuple(e), name))

    def total_matrix(self, total=None):
        """Dense matrix of the assembled map into the totalization."""
        T = total if total is not None else self.cube.total()
        field = self.cube.field
        idx = {nm: i for i, nm in enumerate(T.names())}
        cols = self.column_keys()
        m = linalg.zeros(field, len(idx), len(cols))
        for j, (e, gname) in enumerate(cols):
            pre = _tag(e) + "."
            for cname, val in self.gen(e, gname).coords.items():
                m[idx[pre + cname]][j] = val
            for (a, b), block in self.corr.items():
                if a != e:
                    continue
                preb = _tag(b) + "."
                for (tname, ename), val in block.items():
                    if ename == gname:
                        r = idx[preb + tname]
                        m[r][j] = field.add(m[r][j], val)
        return m

    def verify(self):
        """Re-check every invariant by matrix arithmetic; raise on failure."""
        field = self.cube.field
        T = self.cube.total()
        names = T.names()
        idx = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        mt = _dense(field, idx, idx, self.operator.total().matrix, "operator")
        p = _shifted_power(field, mt, self.lam)
        phi = self.total_matrix(T)
        cols = self.column_keys()
        expect = len(linalg.nullspace(field, p, n))
        if len(cols) != expect:
            raise RuntimeError(
                "internal: splitting has %d columns but the generalized "
                "eigenspace has dimension %d" % (len(cols), expect))
        if cols:
            if linalg.rank(field, phi) != len(cols):
                raise RuntimeError("internal: splitting columns are "
                                   "linearly dependent")
            if not linalg.is_zero_matrix(field,
                                         linalg.mat_mul(field, p, phi)):
                raise RuntimeError("internal: splitting image leaves the "
                                   "generalized eigenspace")
        for j, (e, gname) in enumerate(cols):
            g = self.gen(e, gname)
            want = (g.h - _weight(e), g.alex)
            for i, nm in enumerate(names):
                if field.is_zero(phi[i][j]):
                    continue
                tg = T.by_name[nm]
                if (tg.h, tg.alex) != want:
                    raise RuntimeError(
                        "internal: splitting column %s.%s is not bidegree "
                        "homogeneous" % (_tag(e), gname))
        return self

    def with_column_added(self, at, other, coeff):
        """A new splitting whose column `at` gains coeff times column `other`.

        The second column's home vertex must lie strictly above the
        first's: that is exactly the freedom the construction leaves.
        The result is verified before being returned, so incompatible
        bidegrees fail loudly instead of producing a bad basis.
        """
        (ea, na), (eb, nb) = (tuple(at[0]), at[1]), (tuple(other[0]),
                                                     other[1])
        if ea == eb or not _leq(ea, eb):
            raise ValueError("with_column_added: the added column must live "
                             "strictly above the modified one")
        field = self.cube.field
        corr = {k: dict(v) for k, v in self.corr.items()}
        block = corr.setdefault((ea, eb), {})
        for cname, val in self.gen(eb, nb).coords.items():
            key = (cname, na)
            block[key] = field.add(block.get(key, field.zero),
                                   field.mul(coeff, val))
        for (a, b), src in self.corr.items():
            if a != eb:
                continue
            dst = corr.setdefault((ea, b), {})
            for (tname, ename), val in src.items():
                if ename != nb:
                    continue
                key = (tname, na)
                dst[key] = field.add(dst.get(key, field.zero),
                                     field.mul(coeff, val))
        out = SplittingMap(self.cube, self.operator, self.lam, self.basis,
                           corr)
        return out.verify()


def build_splitting(H, mu, lam, seeds=None):
    """Construct a verified SplittingMap for (H, mu) at lam.

    Works vertex by vertex in decreasing coordinate-weight order.  The
    diagonal part at each vertex is the echelon basis of the vertex
    eigenspace; the strictly increasing corrections come from one exact
    linear solve per column, pushing it into ker (mu_total - lam)^N
    using only coordinates of the same total bidegree.  Free variables
    are pinned to zero, so the output is reproducible.

    `seeds` optionally fixes whole correction blocks in advance, keyed
    {(a, b): {(target generator, eigen name): scalar}}; the solver then
    treats those blocks as given and never writes into them.  Face
    compatibility between a cube and an enclosing cone is arranged this
    way.  Solvability is guaranteed for valid input, so a failed solve
    raises RuntimeError.
    """
    check_operator(H, mu)
    field = H.field
    T = H.total()
    names = T.names()
    idx = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    home = {nm: H.split_total_name(nm)[0] for nm in names}
    mt = _dense(field, idx, idx, mu.total().matrix, "operator")
    p = _shifted_power(field, mt, lam)
    seeds = {(tuple(a), tuple(b)): dict(block)
             for (a, b), block in (seeds or {}).items()}
    corr = {}
    for (a, b), block in seeds.items():
        live = {k: v for k, v in block.items() if not field.is_zero(v)}
        if live:
            corr[(a, b)] = live
    basis = {}
    order = sorted(H.vertices, key=lambda e: (-_weight(e), e))
    for e in order:
        cx = H.vertices[e]
        vnames = cx.names()
        block = _named(field, vnames, vnames, mu.component(e, e), "operator")
        gens = []
        for j, vec in enumerate(gen_eigenspace(field, block, lam)):
            support = [vnames[i] for i, c in enumerate(vec)
                       if not field.is_zero(c)]
            hs = {cx.by_name[nm].h for nm in support}
            als = {cx.by_name[nm].alex for nm in support}
            if len(hs) != 1 or len(als) != 1:
                raise RuntimeError("internal: eigen basis vector at %s "
                                   "mixes bidegrees" % _tag(e))
            gens.append(EigenGen("e%d" % j, hs.pop(), als.pop(),
                                 {vnames[i]: c for i, c in enumerate(vec)
                                  if not field.is_zero(c)}))
        basis[e] = gens
        seeded = {b for (a, b) in seeds if a == e}
        pre = _tag(e) + "."
        for g in gens:
            x = [field.zero] * n
            for cname, val in g.coords.items():
                x[idx[pre + cname]] = val
            for (a, b), blockvals in seeds.items():
                if a != e:
                    continue
                preb = _tag(b) + "."
                for (tname, ename), val in blockvals.items():
                    if ename == g.name:
                        r = idx[preb + tname]
                        x[r] = field.add(x[r], val)
            ht = g.h - _weight(e)
            free = [i for i, nm in enumerate(names)
                    if home[nm] != e and _leq(e, home[nm])
                    and home[nm] not in seeded
                    and T.by_name[nm].h == ht
                    and T.by_name[nm].alex == g.alex]
            rhs = [field.neg(v) for v in linalg.mat_apply(field, p, x)]
            a_mat = [[p[r][c] for c in free] for r in range(n)]
            sol = linalg.solve(field, a_mat, rhs)
            if sol is None:
                raise RuntimeError(
                    "internal: no filtered correction for eigen vector %s "
                    "at vertex %s" % (g.name, _tag(e)))
            for c_i, val in zip(free, sol):
                if field.is_zero(val):
                    continue
                nm = names[c_i]
                blk = corr.setdefault((e, home[nm]), {})
                blk[(H.split_total_name(nm)[1], g.name)] = val
    return SplittingMap(H, mu, lam, basis, corr).verify()


# -- the eigen cube ------------------------------------------------------------

class EigenCube:
    """E^lam of (H, mu): the transferred cube plus the data behind it.

    cube       Hypercube on the eigen bases
    splitting  the SplittingMap used
    include    ChainMap total(cube) -> total(H); a chain isomorphism
               onto the generalized eigenspace of the total operator
    """

    __slots__ = ("cube", "splitting", "include", "lam", "ambient")

    def __init__(self, cube, splitting, include, lam, ambient):
        self.cube = cube
        self.splitting = splitting
        self.include = include
        self.lam = lam
        self.ambient = ambient

    def dims(self):
        return {e: len(self.cube.vertices[e].generators)
                for e in sorted(self.cube.vertices)}


def eigen_cube(H, mu, lam, splitting=None):
    """Transfer the cube structure of (H, mu) onto the lam-eigen pieces.

    With Phi the splitting's column matrix the new structure maps solve
    D . Phi = Phi . delta uniquely.  Filteredness, the cube axioms, the
    closed forms for the length-0 and length-1 components, and the
    inclusion being a chain map are all checked before returning.
    """
    check_operator(H, mu)
    if splitting is None:
        splitting = build_splitting(H, mu, lam)
    elif splitting.lam != lam or (splitting.cube is not H
                                  and splitting.cube != H):
        raise ValueError("eigen_cube: splitting belongs to different data")
    field = H.field
    T = H.total()
    names = T.names()
    idx = {nm: i for i, nm in enumerate(names)}
    d = _dense(field, idx, idx, T.diff, "differential")
    phi = splitting.total_matrix(T)
    cols = splitting.column_keys()
    if cols:
        delta = linalg.solve_matrix(field, phi,
                                    linalg.mat_mul(field, d, phi))
        if delta is None:
            raise RuntimeError("internal: the differential does not "
                               "preserve the eigen image")
    else:
        delta = []
    vert_diff = {e: {} for e in H.vertices}
    maps = {}
    for i, (eb, nb) in enumerate(cols):
        for j, (ea, na) in enumerate(cols):
            val = delta[i][j]
            if field.is_zero(val):
                continue
            if not _leq(ea, eb):
                raise RuntimeError("internal: transferred differential is "
                                   "not filtered")
            poly = Poly.const(field, H.arity, val)
            if ea == eb:
                vert_diff[ea][(nb, na)] = poly
            else:
                maps.setdefault((ea, eb), {})[(nb, na)] = poly
    verts = {}
    for e in sorted(H.vertices):
        gens = [Generator(g.name, g.h, g.alex) for g in splitting.basis[e]]
        verts[e] = _vertex_complex(field, H.arity, gens, vert_diff[e],
                                   H.grading, H.alex_len)
    cube = Hypercube(verts, maps)
    report = cube.validate()
    if not report.ok:
        raise RuntimeError("internal: eigen cube fails validation:\n%s"
                           % "\n".join(i.message for i in report.issues))
    _check_closed_forms(H, splitting, cube)
    entries = {}
    for j, (e, gname) in enumerate(cols):
        tagged = _tag(e) + "." + gname
        for i in range(len(names)):
            if not field.is_zero(phi[i][j]):
                entries[(names[i], tagged)] = Poly.const(field, H.arity,
                                                         phi[i][j])
    include = ChainMap(cube.total(), T, entries)
    if not (include.gradings_ok() and include.is_cycle()):
        raise RuntimeError("internal: eigen inclusion is not a chain map")
    return EigenCube(cube, splitting, include, lam, H)


def _check_closed_forms(H, splitting, cube):
    """Length-0 and length-1 components of the eigen cube, entry-wise.

    Length 0 must be the restriction of the vertex differential to the
    eigen basis; for an adjacent pair a < b, composing with the
    inclusion at b, the transferred map must equal
    D_ab . Phi_aa + D_bb . Phi_ab - Phi_ab . delta_aa.
    """
    field = H.field
    dense_basis = {}
    for e in sorted(H.vertices):
        rows = H.vertices[e].names()
        cols = [g.name for g in splitting.basis[e]]
        m = linalg.zeros(field, len(rows), len(cols))
        ridx = {nm: i for i, nm in enumerate(rows)}
        for j, g in enumerate(splitting.basis[e]):
            for cname, val in g.coords.items():
                m[ridx[cname]][j] = val
        dense_basis[e] = m
    for e in sorted(H.vertices):
        rows = H.vertices[e].names()
        ecols = [g.name for g in splitting.basis[e]]
        if not rows:
            continue
        dv = _named(field, rows, rows, H.vertices[e].diff, "differential")
        de = _named(field, ecols, ecols, cube.vertices[e].diff,
                    "eigen differential")
        lhs = linalg.mat_mul(field, dv, dense_basis[e])
        rhs = linalg.mat_mul(field, dense_basis[e], de)
        if lhs != rhs:
            raise RuntimeError("internal: length-0 eigen component at %s is "
                               "not the restricted differential" % _tag(e))
    for a in sorted(H.vertices):
        for b in sorted(H.vertices):
            if _weight(b) - _weight(a) != 1 or not _leq(a, b):
                continue
            arows = H.vertices[a].names()
            brows = H.vertices[b].names()
            acols = [g.name for g in splitting.basis[a]]
            bcols = [g.name for g in splitting.basis[b]]
            if not brows:
                continue
            d_ab = _named(field, brows, arows, H.component(a, b),
                          "structure map")
            d_bb = _named(field, brows, brows, H.vertices[b].diff,
                          "differential")
            c_ab = _named(field, brows, acols,
                          {k: Poly.const(field, H.arity, v)
                           for k, v in splitting.corr.get((a, b),
                                                          {}).items()},
                          "correction")
            delta_ab = _named(field, bcols, acols, cube.component(a, b),
                              "eigen map")
            delta_aa = _named(field, acols, acols, cube.vertices[a].diff,
                              "eigen differential")
            if bcols:
                lhs = linalg.mat_mul(field, dense_basis[b], delta_ab)
            else:
                # no eigen basis at b: the right side must vanish outright
                lhs = linalg.zeros(field, len(brows), len(acols))
            rhs = linalg.mat_add(
                field, linalg.mat_mul(field, d_ab, dense_basis[a]),
                linalg.mat_sub(field, linalg.mat_mul(field, d_bb, c_ab),
                               linalg.mat_mul(field, c_ab, delta_aa)))
            if lhs != rhs:
                raise RuntimeError(
                    "internal: length-1 eigen component %s -> %s does not "
                    "match its closed form" % (_tag(a), _tag(b)))


# -- plain complexes -----------------------------------------------------------

class EigenModel:
    """E^lam of a plain complex, the verified inclusion, and the basis."""

    __slots__ = ("complex", "include", "basis")

    def __init__(self, complex, include, basis):
        self.complex = complex
        self.include = include
        self.basis = basis


def eigen_complex(cx, mu, lam):
    """Eigen model of a plain complex under an operator ChainMap."""
    _check_plain_operator(cx, mu)
    field = cx.field
    names = cx.names()
    m = _named(field, names, names, mu.matrix, "operator")
    gens = []
    for j, vec in enumerate(gen_eigenspace(field, m, lam)):
        support = [names[i] for i, c in enumerate(vec)
                   if not field.is_zero(c)]
        hs = {cx.by_name[nm].h for nm in support}
        als = {cx.by_name[nm].alex for nm in support}
        if len(hs) != 1 or len(als) != 1:
            raise RuntimeError("internal: eigen basis vector mixes "
                               "bidegrees")
        gens.append(EigenGen("e%d" % j, hs.pop(), als.pop(),
                             {names[i]: c for i, c in enumerate(vec)
                              if not field.is_zero(c)}))
    b = linalg.zeros(field, len(names), len(gens))
    idx = {nm: i for i, nm in enumerate(names)}
    for j, g in enumerate(gens):
        for cname, val in g.coords.items():
            b[idx[cname]][j] = val
    d = _named(field, names, names, cx.diff, "differential")
    if gens:
        delta = linalg.solve_matrix(field, b, linalg.mat_mul(field, d, b))
        if delta is None:
            raise RuntimeError("internal: the differential does not "
                               "preserve the eigen image")
    else:
        delta = []
    diff = {}
    for i, gi in enumerate(gens):
        for j, gj in enumerate(gens):
            if not field.is_zero(delta[i][j]):
                diff[(gi.name, gj.name)] = Poly.const(field, cx.arity,
                                                      delta[i][j])
    model = _vertex_complex(field, cx.arity,
                            [Generator(g.name, g.h, g.alex) for g in gens],
                            diff, cx.grading, cx.alex_len)
    entries = {}
    for j, g in enumerate(gens):
        for cname, val in g.coords.items():
            entries[(cname, g.name)] = Poly.const(field, cx.arity, val)
    include = ChainMap(model, cx, entries)
    if not (include.gradings_ok() and include.is_cycle()):
        raise RuntimeError("internal: eigen inclusion is not a chain map")
    return EigenModel(model, include, gens)


# -- functoriality -------------------------------------------------------------

class EigenMorphism:
    """A morphism of eigen models plus the cone bookkeeping behind it."""

    __slots__ = ("map", "source", "target", "splitting", "cone")

    def __init__(self, map, source, target, splitting, cone):
        self.map = map
        self.source = source
        self.target = target
        self.splitting = splitting
        self.cone = cone


def eigen_morphism(f, h, mu0, mu1, lam, splitting=None):
    """Push a morphism of operator pairs down to the eigen models.

    The pair (f, h) must be a cycle: f a chain map of shift 0 and
    f . mu0 - mu1 . f = map_boundary(h) exactly, h of shift +1.  The
    construction runs the eigen machinery on the cone of f with the
    operators on the two sides and h as the cross component, then reads
    off the edge of the resulting eigen cube.  The cone's vertex models
    are checked against the standalone eigen models of source and
    target, so the returned map genuinely connects those.

    Different `splitting` choices change the answer by an explicit
    homotopy; see splitting_change_homotopy.
    """
    _check_plain_operator(f.source, mu0)
    _check_plain_operator(f.target, mu1)
    if f.h_shift != 0 or any(f.alex_shift):
        raise ValueError("eigen_morphism: f must preserve both gradings")
    if h.h_shift != 1 or any(h.alex_shift):
        raise ValueError("eigen_morphism: h must raise h by one")
    if not (f.gradings_ok() and h.gradings_ok()):
        raise ValueError("eigen_morphism: entries disagree with the "
                         "declared shifts")
    for p in list(f.matrix.values()) + list(h.matrix.values()):
        _constant(f.source.field, p, "morphism entry")
    if not f.is_cycle():
        raise ValueError("eigen_morphism: f is not a chain map")
    comm = f.compose(mu0).add(mu1.compose(f).neg())
    if comm != map_boundary(h):
        raise ValueError("eigen_morphism: (f, h) is not a cycle; the "
                         "operator commutator is not the boundary of h")
    K = edge_cube(f)
    M = CubeMorphism(K, K, {((0,), (0,)): dict(mu0.matrix),
                            ((1,), (1,)): dict(mu1.matrix),
                            ((0,), (1,)): dict(h.matrix)})
    if not M.is_cycle():
        raise RuntimeError("internal: cone operator is not a cycle")
    if splitting is None:
        splitting = build_splitting(K, M, lam)
    ec = eigen_cube(K, M, lam, splitting)
    e0 = eigen_complex(f.source, mu0, lam)
    e1 = eigen_complex(f.target, mu1, lam)
    v0 = ec.cube.vertices[(0,)]
    v1 = ec.cube.vertices[(1,)]
    sig = lambda cx: [(g.name, g.h, g.alex) for g in cx.generators]
    if sig(v0) != sig(e0.complex) or v0.diff != e0.complex.diff:
        raise RuntimeError("internal: cone source face differs from the "
                           "standalone eigen model")
    neg1 = {k: p.neg() for k, p in e1.complex.diff.items()}
    if sig(v1) != sig(e1.complex) or v1.diff != neg1:
        raise RuntimeError("internal: cone target face differs from the "
                           "standalone eigen model")
    out = ChainMap(e0.complex, e1.complex,
                   dict(ec.cube.maps.get(((0,), (1,)), {})))
    if not out.is_cycle():
        raise RuntimeError("internal: extracted eigen morphism is not a "
                           "chain map")
    return EigenMorphism(out, e0, e1, splitting, ec)


def splitting_change_homotopy(em, em2):
    """Explicit homotopy between one morphism pushed through two splittings.

    Both arguments must come from eigen_morphism on the same (f, h,
    mu0, mu1, lam).  Returns K with

        em2.map - em.map = d . K + K . d

    built directly from the correction-block difference of the two cone
    splittings (no search); the identity is asserted before returning.
    """
    if em.cone.ambient != em2.cone.ambient:
        raise ValueError("splitting_change_homotopy: morphisms come from "
                         "different cones")
    field = em.map.source.field
    T = em.cone.ambient.total()
    phi1 = em.cone.splitting.total_matrix(T)
    phi2 = em2.cone.splitting.total_matrix(T)
    u = linalg.solve_matrix(field, phi1, linalg.mat_sub(field, phi2, phi1))
    if u is None:
        raise RuntimeError("internal: splittings do not share a column "
                           "span")
    cols = em.cone.splitting.column_keys()
    arity = em.map.source.arity
    entries = {}
    for i, (ei, ni) in enumerate(cols):
        for j, (ej, nj) in enumerate(cols):
            if field.is_zero(u[i][j]):
                continue
            if ei != (1,) or ej != (0,):
                raise RuntimeError("internal: splittings disagree on the "
                                   "diagonal bases")
            entries[(ni, nj)] = Poly.const(field, arity,
                                           field.neg(u[i][j]))
    K = ChainMap(em.source.complex, em.target.complex, entries, h_shift=1)
    diff = ChainMap(em.source.complex, em.target.complex,
                    dict(em2.map.matrix)).add(em.map.neg())
    if not map_boundary(K).add(diff.neg()).is_zero():
        raise RuntimeError("internal: splitting-change homotopy fails its "
                           "defining identity")
    return K


# -- a second operator on an eigen cube -----------------------------------------

def transfer_operator(ec, other, hom):
    """Induced operator on an eigen cube from a second ambient operator.

    With mu the operator that built ec, requires

        mu . other - other . mu = morphism_boundary(hom)

    exactly, hom of grading 1.  Runs the eigen construction on the cone
    of `other`, seeded so that both faces reuse ec's splitting; checks
    that the faces reproduce ec's cube on the nose (the far face with
    the cone's sign), and assembles the cross blocks into the answer.
    """
    H = ec.ambient
    mu = ec.splitting.operator
    check_operator(H, other)
    if hom.grading != 1 or any(hom.alex_shift):
        raise ValueError("transfer_operator: homotopy must have grading 1 "
                         "and no Alexander shift")
    if not hom.gradings_ok():
        raise ValueError("transfer_operator: homotopy entries disagree "
                         "with grading 1")
    for (a, b), mat in sorted(hom.components.items()):
        for p in mat.values():
            _constant(H.field, p,
                      "homotopy component %s->%s" % (_tag(a), _tag(b)))
    comm = mu.compose(other).add(other.compose(mu).neg())
    if comm != morphism_boundary(hom):
        raise ValueError("transfer_operator: the commutator of the "
                         "operators is not the boundary of the homotopy")
    big = cone_cube(other)
    comps = {}
    for (a, b), mat in mu.components.items():
        comps[(a + (0,), b + (0,))] = dict(mat)
        comps[(a + (1,), b + (1,))] = dict(mat)
    # the cross sign makes the cycle condition match the commutator
    # convention above, against the cone's negated far face
    for (a, b), mat in hom.components.items():
        comps[(a + (0,), b + (1,))] = {k: p.neg() for k, p in mat.items()}
    M = CubeMorphism(big, big, comps)
    if not M.is_cycle():
        raise RuntimeError("internal: cone operator is not a cycle")
    seeds = {}
    for a in sorted(H.vertices):
        for b in sorted(H.vertices):
            if a == b or not _leq(a, b):
                continue
            block = dict(ec.splitting.corr.get((a, b), {}))
            seeds[(a + (0,), b + (0,))] = block
            seeds[(a + (1,), b + (1,))] = dict(block)
    sp = build_splitting(big, M, ec.lam, seeds=seeds)
    ecb = eigen_cube(big, M, ec.lam, sp)
    sig = lambda cx: [(g.name, g.h, g.alex) for g in cx.generators]
    for e in sorted(H.vertices):
        v0 = ecb.cube.vertices[e + (0,)]
        v1 = ecb.cube.vertices[e + (1,)]
        ve = ec.cube.vertices[e]
        if sig(v0) != sig(ve) or v0.diff != ve.diff:
            raise RuntimeError("internal: near cone face drifted from the "
                               "eigen cube at %s" % _tag(e))
        neg = {k: p.neg() for k, p in ve.diff.items()}
        if sig(v1) != sig(ve) or v1.diff != neg:
            raise RuntimeError("internal: far cone face drifted from the "
                               "eigen cube at %s" % _tag(e))
    maps0, maps1, cross = {}, {}, {}
    for (A, B), mat in ecb.cube.maps.items():
        key = (A[:-1], B[:-1])
        if A[-1] == 0 and B[-1] == 0:
            maps0[key] = mat
        elif A[-1] == 1 and B[-1] == 1:
            maps1[key] = mat
        else:
            cross[key] = dict(mat)
    if maps0 != ec.cube.maps:
        raise RuntimeError("internal: near cone face drifted from the "
                           "eigen cube")
    far = {k: {kk: p.neg() for kk, p in m.items()}
           for k, m in ec.cube.maps.items()}
    if maps1 != far:
        raise RuntimeError("internal: far cone face drifted from the "
                           "eigen cube")
    nu = CubeMorphism(ec.cube, ec.cube, cross)
    if not (nu.gradings_ok() and nu.is_cycle()):
        raise RuntimeError("internal: transferred operator is not a cycle")
    return nu


# -- simultaneous eigenspaces and the grading shift ------------------------------

class SimultaneousEigen:
    """Iterated eigen cubes in both orders, with their homology tables."""

    __slots__ = ("nested", "nested_swapped", "table", "table_swapped")

    def __init__(self, nested, nested_swapped, table, table_swapped):
        self.nested = nested
        self.nested_swapped = nested_swapped
        self.table = table
        self.table_swapped = table_swapped

    @property
    def cube(self):
        return self.nested.cube

    @property
    def cube_swapped(self):
        return self.nested_swapped.cube


def simultaneous(H, mu, mu2, hom, lam, lam2):
    """E^lam2 of E^lam and E^lam of E^lam2, with the table equality check.

    hom must satisfy mu . mu2 - mu2 . mu = morphism_boundary(hom); the
    swapped order uses -hom.  Both iterated cubes are built through
    transfer_operator and their bidegree homology tables must agree
    (they always do for valid input, so disagreement raises).
    """
    check_operator(H, mu)
    check_operator(H, mu2)
    ec1 = eigen_cube(H, mu, lam)
    nu2 = transfer_operator(ec1, mu2, hom)
    ec12 = eigen_cube(ec1.cube, nu2, lam2)
    ec2 = eigen_cube(H, mu2, lam2)
    nu1 = transfer_operator(ec2, mu, hom.neg())
    ec21 = eigen_cube(ec2.cube, nu1, lam)
    t12 = homology_over_field(ec12.cube.total())
    t21 = homology_over_field(ec21.cube.total())
    if t12 != t21:
        raise RuntimeError("internal: iterated eigen orders disagree on "
                           "homology")
    return SimultaneousEigen(ec12, ec21, t12, t21)


class ShiftVerdict:
    """Outcome of shift_compare: per-eigenvalue tables for both sides."""

    __slots__ = ("ok", "alpha", "lams", "tables")

    def __init__(self, ok, alpha, lams, tables):
        self.ok = ok
        self.alpha = alpha
        self.lams = lams
        self.tables = tables


def shift_compare(H, mu, mu2, alpha):
    """Compare eigen homology of mu at lam with mu2 at lam + alpha.

    First checks the vertex-level hypothesis, that every vertex complex
    has equal eigen homology for (mu, lam) and (mu2, lam + alpha),
    raising ValueError naming the offending vertex on failure; then
    builds both eigen cubes per candidate eigenvalue and reports the
    cube-level homology tables side by side with an overall verdict.
    """
    check_operator(H, mu)
    check_operator(H, mu2)
    field = H.field
    lams = list(operator_spectrum(mu))
    for v in operator_spectrum(mu2):
        cand = field.sub(v, alpha)
        if cand not in lams:
            lams.append(cand)
    lams.sort(key=lambda c: _scalar_key(field, c))
    for e in sorted(H.vertices):
        cx = H.vertices[e]
        m1 = ChainMap(cx, cx, mu.component(e, e))
        m2 = ChainMap(cx, cx, mu2.component(e, e))
        for lam in lams:
            t1 = homology_over_field(eigen_complex(cx, m1, lam).complex)
            t2 = homology_over_field(
                eigen_complex(cx, m2, field.add(lam, alpha)).complex)
            if t1 != t2:
                raise ValueError(
                    "shift_compare: vertex-level hypothesis fails at "
                    "vertex %s (lam = %s)" % (_tag(e), field.show(lam)))
    tables = {}
    ok = True
    for lam in lams:
        t1 = homology_over_field(eigen_cube(H, mu, lam).cube.total())
        t2 = homology_over_field(
            eigen_cube(H, mu2, field.add(lam, alpha)).cube.total())
        tables[lam] = (t1, t2)
        if t1 != t2:
            ok = False
    return ShiftVerdict(ok, alpha, lams, tables)
