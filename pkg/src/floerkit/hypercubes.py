"""Hypercubes of chain complexes and their morphisms.

A hypercube places a free complex at every vertex of {0,1}^n and a
structure map along every strictly increasing pair of vertices.  The
defining axiom is that for every pair e <= e'' the sum over
intermediate vertices

    sum over e <= e' <= e''  of  D_{e',e''} . D_{e,e'}

vanishes, which is the same as asking that the totalization
differential squares to zero.  Each vertex keeps its own internal
differential; we treat it as the diagonal component D_{e,e}.

Gradings: a component from e to e' raises the vertex-internal
homological grading by |e'| - |e| - 1 and preserves the Alexander
grading.  The totalization places a vertex generator of internal
grading h in total grading h - |e|, so a 0-cube totalizes to its
vertex on the nose (up to the vertex tag in generator names).
"""

import itertools
import json

from .complexes import (ChainMap, ComplexFormatError, FreeComplex, Generator,
                        SDR, ValidationIssue, ValidationReport, cone,
                        differential_map, homology_over_field,
                        homology_over_ring, _alex_weight)
from .scalars import FieldError, Poly
from . import linalg


def _tag(eps):
    return "".join(str(x) for x in eps)


def _weight(eps):
    return sum(eps)


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def _between(a, b):
    """All vertices m with a <= m <= b, assuming a <= b."""
    free = [i for i in range(len(a)) if a[i] != b[i]]
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        m = list(a)
        for i, v in zip(free, bits):
            m[i] = v
        out.append(tuple(m))
    return out


def _all_eps(n):
    return list(itertools.product((0, 1), repeat=n))


# -- sparse matrices of polynomials, keyed (target name, source name) -------

def _md_compose(later, first):
    out = {}
    for (m, s), p in first.items():
        for (t, m2), q in later.items():
            if m2 != m:
                continue
            key = (t, s)
            v = q.mul(p)
            out[key] = out[key].add(v) if key in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _md_add(a, b):
    out = dict(a)
    for k, p in b.items():
        out[k] = out[k].add(p) if k in out else p
    return {k: v for k, v in out.items() if not v.is_zero()}


def _md_scale(a, c):
    out = {k: p.scalar_mul(c) for k, p in a.items()}
    return {k: v for k, v in out.items() if not v.is_zero()}


class Hypercube:
    """Complexes at the vertices of {0,1}^n with higher structure maps.

    `vertices` maps each 0/1 tuple to a FreeComplex; `maps` holds the
    strictly increasing components as {(eps, eps'): {(tgt, src): Poly}}.
    The constructor checks shapes and rings; the cube axiom itself is
    checked by validate(), mirroring how FreeComplex defers d^2.
    """

    def __init__(self, vertices, maps=None):
        vertices = {tuple(int(x) for x in e): c for e, c in vertices.items()}
        if not vertices:
            raise ValueError("hypercube: no vertices given")
        dims = {len(e) for e in vertices}
        if len(dims) != 1:
            raise ValueError("hypercube: vertex labels of mixed lengths %s"
                             % sorted(dims))
        self.dimension = dims.pop()
        expected = set(_all_eps(self.dimension))
        if set(vertices) != expected:
            missing = sorted(expected - set(vertices))
            extra = sorted(set(vertices) - expected)
            raise ValueError("hypercube: missing vertices %s%s"
                             % ([_tag(e) for e in missing],
                                (", stray %s" % [_tag(e) for e in extra])
                                if extra else ""))
        self.vertices = vertices
        ref = vertices[(0,) * self.dimension]
        self.field = ref.field
        self.arity = ref.arity
        self.grading = ref.grading
        self.alex_len = ref.alex_len
        for e in sorted(vertices):
            c = vertices[e]
            if (c.field != self.field or c.arity != self.arity
                    or c.grading != self.grading
                    or c.alex_len != self.alex_len):
                raise ValueError("hypercube: vertex %s lives over a different "
                                 "ring or grading" % _tag(e))
        self.maps = {}
        for (a, b), mat in (maps or {}).items():
            a = tuple(int(x) for x in a)
            b = tuple(int(x) for x in b)
            if a not in self.vertices or b not in self.vertices:
                raise ValueError("hypercube: map key %s -> %s is not a vertex "
                                 "pair" % (_tag(a), _tag(b)))
            if a == b or not _leq(a, b):
                raise ValueError("hypercube: map key %s -> %s does not "
                                 "strictly increase" % (_tag(a), _tag(b)))
            src, tgt = self.vertices[a], self.vertices[b]
            clean = {}
            for (t, s), p in mat.items():
                if p.is_zero():
                    continue
                if t not in tgt.by_name:
                    raise ValueError("hypercube: component %s -> %s hits "
                                     "unknown generator %r" % (_tag(a), _tag(b), t))
                if s not in src.by_name:
                    raise ValueError("hypercube: component %s -> %s reads "
                                     "unknown generator %r" % (_tag(a), _tag(b), s))
                if p.field != self.field or p.arity != self.arity:
                    raise ValueError("hypercube: component %s -> %s entry in "
                                     "the wrong ring" % (_tag(a), _tag(b)))
                clean[(t, s)] = p
            if clean:
                self.maps[(a, b)] = clean

    def __repr__(self):
        return "Hypercube(dim=%d, %s, %d structure maps)" % (
            self.dimension, self.field.tag, len(self.maps))

    def __eq__(self, other):
        return isinstance(other, Hypercube) and self.to_json() == other.to_json()

    def component(self, a, b):
        """The structure map from vertex a to vertex b as a sparse matrix."""
        a, b = tuple(a), tuple(b)
        if a == b:
            return dict(self.vertices[a].diff)
        return dict(self.maps.get((a, b), {}))

    # -- validation ---------------------------------------------------------

    def validate(self):
        """Degree laws per component entry plus the literal cube axiom."""
        issues = []
        for e in sorted(self.vertices):
            for iss in self.vertices[e].validate().issues:
                issues.append(ValidationIssue(
                    iss.kind, "%s.%s" % (_tag(e), iss.source),
                    "%s.%s" % (_tag(e), iss.target),
                    "vertex %s: %s" % (_tag(e), iss.message)))
        for (a, b) in sorted(self.maps):
            src, tgt = self.vertices[a], self.vertices[b]
            deg = _weight(b) - _weight(a) - 1
            for (t, s), p in sorted(self.maps[(a, b)].items()):
                gt, gs = tgt.by_name[t], src.by_name[s]
                if not tgt.h_equal(gt.h, gs.h + deg):
                    issues.append(ValidationIssue(
                        "h-grading", s, t,
                        "component %s->%s entry %s <- %s has h %d -> %d, "
                        "expected step %+d"
                        % (_tag(a), _tag(b), t, s, gs.h, gt.h, deg)))
                for exp in p.coeffs:
                    w = _alex_weight(exp, self.alex_len)
                    ok = (w is not None
                          and tuple(x - y for x, y in zip(gt.alex, w)) == gs.alex)
                    if not ok:
                        issues.append(ValidationIssue(
                            "alex-grading", s, t,
                            "component %s->%s entry %s <- %s does not "
                            "preserve the Alexander grading"
                            % (_tag(a), _tag(b), t, s)))
        for a in sorted(self.vertices):
            for c in sorted(self.vertices):
                if a == c or not _leq(a, c):
                    continue
                acc = {}
                for m in _between(a, c):
                    acc = _md_add(acc, _md_compose(self.component(m, c),
                                                   self.component(a, m)))
                for (t, s) in sorted(acc):
                    issues.append(ValidationIssue(
                        "cube-axiom", s, t,
                        "axiom sum %s->%s does not vanish at entry %s <- %s"
                        % (_tag(a), _tag(c), t, s)))
        return ValidationReport(issues)

    # -- totalization -------------------------------------------------------

    def total(self):
        """One complex on all vertices; internal grading h becomes h - |e|."""
        gens = []
        diff = {}
        for e in sorted(self.vertices):
            pre = _tag(e) + "."
            cx = self.vertices[e]
            for g in cx.generators:
                gens.append(Generator(pre + g.name, g.h - _weight(e), g.alex))
            for (t, s), p in cx.diff.items():
                diff[(pre + t, pre + s)] = p
        for (a, b), mat in self.maps.items():
            pa, pb = _tag(a) + ".", _tag(b) + "."
            for (t, s), p in mat.items():
                diff[(pb + t, pa + s)] = p
        return FreeComplex(self.field, self.arity, gens, diff, self.grading)

    def split_total_name(self, name):
        """Undo total()'s tagging: 'bits.gen' -> (eps, gen)."""
        bits, rest = name.split(".", 1)
        if len(bits) != self.dimension or set(bits) - {"0", "1"}:
            raise ValueError("not a totalized generator name: %r" % (name,))
        return tuple(int(x) for x in bits), rest

    # -- serialization ------------------------------------------------------

    def to_json(self):
        verts = {_tag(e): cx.to_json() for e, cx in self.vertices.items()}
        rows = []
        for (a, b) in sorted(self.maps):
            entries = [[s, t, p.to_json()]
                       for (t, s), p in sorted(self.maps[(a, b)].items())]
            rows.append([_tag(a), _tag(b), entries])
        return {"format": "cube", "dimension": self.dimension,
                "vertices": verts, "maps": rows}

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict):
            raise ComplexFormatError("cube: expected an object")
        verts_doc = doc.get("vertices")
        if not isinstance(verts_doc, dict) or not verts_doc:
            raise ComplexFormatError("vertices: expected a non-empty object")
        vertices = {}
        for bits in sorted(verts_doc):
            if set(bits) - {"0", "1"}:
                raise ComplexFormatError("vertices.%s: label is not a "
                                         "bitstring" % (bits,))
            try:
                vertices[tuple(int(x) for x in bits)] = \
                    FreeComplex.from_json(verts_doc[bits])
            except ComplexFormatError as e:
                raise ComplexFormatError("vertices.%s: %s" % (bits, e)) from e
        if "dimension" in doc:
            want = {len(e) for e in vertices}
            if want != {int(doc["dimension"])}:
                raise ComplexFormatError("dimension: %r does not match the "
                                         "vertex labels" % (doc["dimension"],))
        ref = vertices[sorted(vertices)[0]]
        maps = {}
        rows = doc.get("maps", [])
        if not isinstance(rows, list):
            raise ComplexFormatError("maps: expected a list")
        for i, row in enumerate(rows):
            if (not isinstance(row, list) or len(row) != 3
                    or not isinstance(row[0], str)
                    or not isinstance(row[1], str)):
                raise ComplexFormatError(
                    "maps[%d]: expected [from-vertex, to-vertex, entries]" % i)
            try:
                a = tuple(int(x) for x in row[0])
                b = tuple(int(x) for x in row[1])
                if set(row[0] + row[1]) - {"0", "1"}:
                    raise ValueError
            except ValueError:
                raise ComplexFormatError("maps[%d]: vertex labels must be "
                                         "bitstrings" % i) from None
            mat = {}
            for j, ent in enumerate(row[2]):
                if not isinstance(ent, list) or len(ent) != 3:
                    raise ComplexFormatError(
                        "maps[%d][%d]: expected [from, to, poly]" % (i, j))
                try:
                    p = Poly.from_json(ref.field, ref.arity, ent[2])
                except (FieldError, ComplexFormatError, ValueError, TypeError) as e:
                    raise ComplexFormatError(
                        "maps[%d][%d]: bad polynomial (%s)" % (i, j, e)) from e
                key = (ent[1], ent[0])
                mat[key] = mat[key].add(p) if key in mat else p
            maps[(a, b)] = mat
        try:
            return cls(vertices, maps)
        except ValueError as e:
            raise ComplexFormatError(str(e)) from e

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def load_cube(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ComplexFormatError("not JSON: %s" % e) from e
    return Hypercube.from_json(doc)


def point_cube(cx):
    """The 0-dimensional cube on a single complex."""
    return Hypercube({(): cx})


class CubeMorphism:
    """Filtered map of equal-dimension hypercubes.

    Components are keyed by vertex pairs a <= b (a == b allowed) and the
    component from a to b raises internal h by grading + |b| - |a|.  A
    morphism declared a cycle satisfies, for every pair a <= c,

        sum_m  D'_{m,c} . F_{a,m}  +  (-1)^{grading+1}  F_{m,c} . D_{a,m}  =  0.
    """

    def __init__(self, source, target, components=None, grading=0,
                 alex_shift=None):
        if source.dimension != target.dimension:
            raise ValueError("cube morphism between cubes of different "
                             "dimension")
        if (source.field != target.field or source.arity != target.arity
                or source.grading != target.grading
                or source.alex_len != target.alex_len):
            raise ValueError("cube morphism between cubes over different "
                             "rings or gradings")
        self.source = source
        self.target = target
        self.grading = int(grading)
        if alex_shift is None:
            alex_shift = (0,) * source.alex_len
        self.alex_shift = tuple(int(x) for x in alex_shift)
        self.components = {}
        for (a, b), mat in (components or {}).items():
            a = tuple(int(x) for x in a)
            b = tuple(int(x) for x in b)
            if a not in source.vertices or b not in target.vertices:
                raise ValueError("cube morphism: component key %s -> %s is "
                                 "not a vertex pair" % (_tag(a), _tag(b)))
            if not _leq(a, b):
                raise ValueError("cube morphism: component key %s -> %s is "
                                 "not increasing" % (_tag(a), _tag(b)))
            src, tgt = source.vertices[a], target.vertices[b]
            clean = {}
            for (t, s), p in mat.items():
                if p.is_zero():
                    continue
                if t not in tgt.by_name or s not in src.by_name:
                    raise ValueError("cube morphism: component %s -> %s uses "
                                     "unknown generators" % (_tag(a), _tag(b)))
                clean[(t, s)] = p
            if clean:
                self.components[(a, b)] = clean

    def component(self, a, b):
        return dict(self.components.get((tuple(a), tuple(b)), {}))

    def is_zero(self):
        return not self.components

    def __eq__(self, other):
        return (isinstance(other, CubeMorphism)
                and self.grading == other.grading
                and self.alex_shift == other.alex_shift
                and self.components == other.components)

    def gradings_ok(self):
        for (a, b), mat in self.components.items():
            src = self.source.vertices[a]
            tgt = self.target.vertices[b]
            deg = self.grading + _weight(b) - _weight(a)
            for (t, s), p in mat.items():
                gt, gs = tgt.by_name[t], src.by_name[s]
                if not tgt.h_equal(gt.h, gs.h + deg):
                    return False
                for exp in p.coeffs:
                    w = _alex_weight(exp, tgt.alex_len)
                    if w is None:
                        return False
                    got = tuple(x - y for x, y in zip(gt.alex, w))
                    want = tuple(x + y for x, y in zip(gs.alex, self.alex_shift))
                    if got != want:
                        return False
        return True

    def is_cycle(self):
        return morphism_boundary(self).is_zero()

    def total(self):
        """The morphism on totalizations, as a ChainMap."""
        entries = {}
        for (a, b), mat in self.components.items():
            pa, pb = _tag(a) + ".", _tag(b) + "."
            for (t, s), p in mat.items():
                entries[(pb + t, pa + s)] = p
        return ChainMap(self.source.total(), self.target.total(), entries,
                        h_shift=self.grading, alex_shift=self.alex_shift)

    def add(self, other):
        if (self.grading != other.grading
                or self.alex_shift != other.alex_shift):
            raise ValueError("adding cube morphisms with different shifts")
        keys = set(self.components) | set(other.components)
        comps = {k: _md_add(self.components.get(k, {}),
                            other.components.get(k, {})) for k in keys}
        return CubeMorphism(self.source, self.target, comps, self.grading,
                            self.alex_shift)

    def scale(self, c):
        comps = {k: _md_scale(m, c) for k, m in self.components.items()}
        return CubeMorphism(self.source, self.target, comps, self.grading,
                            self.alex_shift)

    def neg(self):
        return self.scale(self.source.field.from_int(-1))

    def compose(self, other):
        """self . other (apply `other` first)."""
        comps = {}
        for a in sorted(other.source.vertices):
            for c in sorted(self.target.vertices):
                if not _leq(a, c):
                    continue
                acc = {}
                for m in _between(a, c):
                    acc = _md_add(acc, _md_compose(self.component(m, c),
                                                   other.component(a, m)))
                if acc:
                    comps[(a, c)] = acc
        return CubeMorphism(other.source, self.target, comps,
                            self.grading + other.grading,
                            tuple(x + y for x, y in
                                  zip(self.alex_shift, other.alex_shift)))

    @classmethod
    def identity(cls, cube):
        comps = {}
        for e, cx in cube.vertices.items():
            one = Poly.one(cube.field, cube.arity)
            comps[(e, e)] = {(g.name, g.name): one for g in cx.generators}
        return cls(cube, cube, comps)

    @classmethod
    def zero(cls, source, target, grading=0, alex_shift=None):
        return cls(source, target, {}, grading, alex_shift)


def morphism_boundary(F):
    """Boundary of F against the cube structure maps, one grading down.

    Componentwise, (dF)_{a,c} sums D'_{m,c} . F_{a,m} over middle
    vertices together with (-1)^{grading+1} F_{m,c} . D_{a,m}; the
    morphism is a cycle exactly when this vanishes.  On totalizations it
    agrees with map_boundary of F.total().
    """
    sign = F.source.field.sign(F.grading + 1)
    comps = {}
    for a in sorted(F.source.vertices):
        for c in sorted(F.target.vertices):
            if not _leq(a, c):
                continue
            acc = {}
            for m in _between(a, c):
                acc = _md_add(acc, _md_compose(F.target.component(m, c),
                                               F.component(a, m)))
                acc = _md_add(acc, _md_scale(
                    _md_compose(F.component(m, c),
                                F.source.component(a, m)), sign))
            if acc:
                comps[(a, c)] = acc
    return CubeMorphism(F.source, F.target, comps, F.grading - 1,
                        F.alex_shift)


def restrict_morphism(F, pattern):
    """Restrict a morphism of cubes to a coordinate subcube of both."""
    pattern = tuple(pattern)
    fixed = [i for i, v in enumerate(pattern) if v is not None]
    free = [i for i, v in enumerate(pattern) if v is None]
    comps = {}
    for (a, b), mat in F.components.items():
        if any(a[i] != pattern[i] or b[i] != pattern[i] for i in fixed):
            continue
        sa = tuple(a[i] for i in free)
        sb = tuple(b[i] for i in free)
        comps[(sa, sb)] = dict(mat)
    return CubeMorphism(restrict(F.source, pattern),
                        restrict(F.target, pattern),
                        comps, F.grading, F.alex_shift)


def cone_cube(F):
    """One dimension up: source cube at new coordinate 0, target at 1.

    The target copy has its internal gradings lowered by the morphism
    grading and every target-side component scaled by (-1)^{grading+1};
    the cross components are F itself.  Totalizing gives exactly the
    mapping cone of F's totalization.
    """
    if not F.gradings_ok():
        raise ValueError("cone_cube: component entries disagree with the "
                         "declared shifts")
    if not F.is_cycle():
        raise ValueError("cone_cube: the morphism is not a cycle")
    S, T = F.source, F.target
    f = S.field
    sgn = f.sign(F.grading + 1)
    verts = {}
    for e, c in S.vertices.items():
        gens = [Generator(g.name, g.h,
                          tuple(x + y for x, y in zip(g.alex, F.alex_shift)))
                for g in c.generators]
        verts[e + (0,)] = FreeComplex(f, S.arity, gens, dict(c.diff), S.grading)
    for e, c in T.vertices.items():
        gens = [Generator(g.name, g.h - F.grading, g.alex)
                for g in c.generators]
        diff = {k: p.scalar_mul(sgn) for k, p in c.diff.items()}
        verts[e + (1,)] = FreeComplex(f, T.arity, gens, diff, T.grading)
    maps = {}
    for (a, b), mat in S.maps.items():
        maps[(a + (0,), b + (0,))] = dict(mat)
    for (a, b), mat in T.maps.items():
        maps[(a + (1,), b + (1,))] = {k: p.scalar_mul(sgn)
                                      for k, p in mat.items()}
    for (a, b), mat in F.components.items():
        maps[(a + (0,), b + (1,))] = dict(mat)
    return Hypercube(verts, maps)


def edge_cube(f):
    """The 1-cube (mapping cone shape) of a plain ChainMap."""
    F = CubeMorphism(point_cube(f.source), point_cube(f.target),
                     {((), ()): dict(f.matrix)}, grading=f.h_shift,
                     alex_shift=f.alex_shift)
    return cone_cube(F)


def restrict(H, pattern):
    """Coordinate subcube: pattern lists 0, 1 or None (free) per axis."""
    pattern = tuple(pattern)
    if len(pattern) != H.dimension or any(v not in (0, 1, None)
                                          for v in pattern):
        raise ValueError("restrict: pattern must give 0, 1 or None for each "
                         "of the %d axes" % H.dimension)
    free = [i for i, v in enumerate(pattern) if v is None]

    def embed(sub):
        full = list(pattern)
        for i, v in zip(free, sub):
            full[i] = v
        return tuple(full)

    verts = {sub: H.vertices[embed(sub)]
             for sub in itertools.product((0, 1), repeat=len(free))}
    fixed = [i for i, v in enumerate(pattern) if v is not None]
    maps = {}
    for (a, b), mat in H.maps.items():
        if any(a[i] != pattern[i] or b[i] != pattern[i] for i in fixed):
            continue
        sa = tuple(a[i] for i in free)
        sb = tuple(b[i] for i in free)
        maps[(sa, sb)] = dict(mat)
    return Hypercube(verts, maps)


# -- homological perturbation ------------------------------------------------

def reduce_complex(cx):
    """Strong deformation retract onto a smaller model, k[U] allowed.

    Contracts every arrow whose coefficient is an invertible constant;
    U-divisible arrows survive into the retract, so over k[U] the result
    is a minimal model rather than a zero-differential one.
    """
    f = cx.field
    one = Poly.one(f, cx.arity)
    zero_exp = (0,) * cx.arity
    live = list(cx.names())
    d = dict(cx.diff)
    inc = {(n, n): one for n in live}
    proj = {(n, n): one for n in live}
    hom = {}

    def unit_of(p):
        if set(p.coeffs) == {zero_exp}:
            return p.constant_term()
        return None

    while True:
        pivot = None
        for (t, s) in sorted(d):
            c = unit_of(d[(t, s)])
            if c is not None:
                pivot = (t, s, c)
                break
        if pivot is None:
            break
        y, x, c = pivot
        cinv = Poly.const(f, cx.arity, f.inv(c))
        ncinv = cinv.neg()
        rest = [w for w in live if w not in (x, y)]
        col = {t: v for (t, s), v in d.items() if s == x and t != y}
        row = {s: v for (t, s), v in d.items() if t == y and s != x}
        i2 = {(w, w): one for w in rest}
        for w, v in row.items():
            i2[(x, w)] = ncinv.mul(v)
        p2 = {(w, w): one for w in rest}
        for t, v in col.items():
            p2[(t, y)] = ncinv.mul(v)
        # the step homotopy sends y to -c^{-1} x; conjugate by the maps so far
        for (mid, o), a in proj.items():
            if mid != y:
                continue
            for (o2, mid2), b in inc.items():
                if mid2 != x:
                    continue
                key = (o2, o)
                upd = hom.get(key, Poly.zero(f, cx.arity)) \
                    .add(b.mul(cinv).mul(a).neg())
                if upd.is_zero():
                    hom.pop(key, None)
                else:
                    hom[key] = upd
        inc = _md_compose(inc, i2)
        proj = _md_compose(p2, proj)
        new_d = {(t, s): v for (t, s), v in d.items()
                 if t not in (x, y) and s not in (x, y)}
        for t, a in col.items():
            for s, b in row.items():
                key = (t, s)
                upd = new_d.get(key, Poly.zero(f, cx.arity)) \
                    .add(a.mul(cinv).mul(b).neg())
                if upd.is_zero():
                    new_d.pop(key, None)
                else:
                    new_d[key] = upd
        d = new_d
        live = rest

    keep = set(live)
    hgens = [Generator(g.name, g.h, g.alex)
             for g in cx.generators if g.name in keep]
    retract = FreeComplex(f, cx.arity, hgens, d, cx.grading)
    inc_map = ChainMap(retract, cx, inc)
    proj_map = ChainMap(cx, retract, proj)
    hom_map = ChainMap(cx, cx, hom, h_shift=1)
    return SDR(cx, retract, inc_map, proj_map, hom_map)


class CubePerturbation:
    """Result of transferring a cube across vertex-level retractions.

    Carries the reduced cube together with the perturbed inclusion,
    projection and homotopy at the totalization level; the five
    deformation-retract identities hold exactly and are asserted when
    the object is built.
    """

    def __init__(self, cube, include, project, homotopy, vertex_sdrs):
        self.cube = cube
        self.include = include
        self.project = project
        self.homotopy = homotopy
        self.vertex_sdrs = vertex_sdrs


def perturb(H, vertex_sdrs=None):
    """Transfer the cube structure to the vertex retracts.

    The strict components of the result are the usual perturbation
    series: project . delta . (sum over k of (homotopy . delta)^k)
    . include, where delta collects the strict components of H.  The
    series is finite because every delta application strictly raises
    the vertex weight.
    """
    rep = H.validate()
    if not rep.ok:
        raise ValueError("perturb: invalid cube: %s" % rep.lines()[0])
    if vertex_sdrs is None:
        vertex_sdrs = {e: reduce_complex(cx) for e, cx in H.vertices.items()}
    old_total = H.total()
    red_cube0 = Hypercube({e: vertex_sdrs[e].retract for e in H.vertices})
    red0 = red_cube0.total()

    def tagged(cm, e):
        pre = _tag(e) + "."
        return {(pre + t, pre + s): p for (t, s), p in cm.matrix.items()}

    inc0, proj0, hom0 = {}, {}, {}
    for e in sorted(H.vertices):
        s = vertex_sdrs[e]
        inc0.update(tagged(s.include, e))
        proj0.update(tagged(s.project, e))
        hom0.update(tagged(s.homotopy, e))
    delta = {}
    for (a, b), mat in H.maps.items():
        pa, pb = _tag(a) + ".", _tag(b) + "."
        for (t, s), p in mat.items():
            delta[(pb + t, pa + s)] = p

    # include' = (1 - h delta)^{-1} include, summed as a finite series
    inc_terms = [inc0]
    while True:
        nxt = _md_compose(hom0, _md_compose(delta, inc_terms[-1]))
        if not nxt:
            break
        inc_terms.append(nxt)
    inc_big = {}
    for term in inc_terms:
        inc_big = _md_add(inc_big, term)
    # project' = project (1 - delta h)^{-1}
    proj_terms = [proj0]
    while True:
        nxt = _md_compose(_md_compose(proj_terms[-1], delta), hom0)
        if not nxt:
            break
        proj_terms.append(nxt)
    proj_big = {}
    for term in proj_terms:
        proj_big = _md_add(proj_big, term)
    # homotopy' = (1 - h delta)^{-1} h
    hom_terms = [hom0]
    while True:
        nxt = _md_compose(hom0, _md_compose(delta, hom_terms[-1]))
        if not nxt:
            break
        hom_terms.append(nxt)
    hom_big = {}
    for term in hom_terms:
        hom_big = _md_add(hom_big, term)

    dprime = _md_compose(proj_big, _md_compose(delta, inc_big))

    new_maps = {}
    for (t, s), p in dprime.items():
        b, tn = red_cube0.split_total_name(t)
        a, sn = red_cube0.split_total_name(s)
        if a == b:
            raise AssertionError("perturbation produced a diagonal term")
        new_maps.setdefault((a, b), {})[(tn, sn)] = p
    cube = Hypercube({e: vertex_sdrs[e].retract for e in H.vertices}, new_maps)
    rep = cube.validate()
    assert rep.ok, "perturbed cube fails validation: %s" % rep.lines()[0]

    new_total = cube.total()
    include = ChainMap(new_total, old_total, inc_big)
    project = ChainMap(old_total, new_total, proj_big)
    homotopy = ChainMap(old_total, old_total, hom_big, h_shift=1)
    _assert_sdr(new_total, old_total, include, project, homotopy)
    return CubePerturbation(cube, include, project, homotopy, vertex_sdrs)


def _assert_sdr(small, big, include, project, homotopy):
    d_small = differential_map(small)
    d_big = differential_map(big)
    idn = ChainMap.identity(small)
    assert project.compose(include) == idn, "project . include != id"
    lhs = include.compose(project)
    rhs = ChainMap.identity(big) \
        .add(d_big.compose(homotopy).add(homotopy.compose(d_big)))
    assert lhs == rhs, "include . project != id + [d, h]"
    assert homotopy.compose(homotopy).is_zero(), "h . h != 0"
    assert homotopy.compose(include).is_zero(), "h . include != 0"
    assert project.compose(homotopy).is_zero(), "project . h != 0"
    assert include.compose(d_small) == d_big.compose(include), \
        "include is not a chain map"
    assert d_small.compose(project) == project.compose(d_big), \
        "project is not a chain map"


# -- inversion of vertex-wise quasi-isomorphisms ------------------------------

class HomotopyEquivalence:
    """A homotopy inverse with its two verified homotopies.

    fg_homotopy witnesses forward . inverse = id + [d, fg_homotopy] on
    the target totalization, gf_homotopy the other composite on the
    source; both identities are asserted exactly when built.
    """

    def __init__(self, forward, inverse, fg_homotopy, gf_homotopy):
        self.forward = forward
        self.inverse = inverse
        self.fg_homotopy = fg_homotopy
        self.gf_homotopy = gf_homotopy


def _acyclic(cx):
    if all(not any(e) for p in cx.diff.values() for e in p.coeffs):
        return not homology_over_field(cx)
    if cx.arity == 1:
        return not homology_over_ring(cx).summands
    raise ValueError("quasi-isomorphism test needs field or single-variable "
                     "coefficients")


def _vertex_chain_map(F, e):
    return ChainMap(F.source.vertices[e], F.target.vertices[e],
                    F.component(e, e), h_shift=F.grading,
                    alex_shift=F.alex_shift)


def invert_quasi_iso(F, source_sdrs=None, target_sdrs=None):
    """Homotopy inverse of a vertex-wise quasi-isomorphism of cubes.

    Strategy: retract both cubes, conjugate F to a map of the retracts,
    invert that exactly (its constant part is invertible and the
    U-divisible remainder is nilpotent), then transport back.  The two
    homotopy identities are verified as matrix equations before
    returning.
    """
    if F.grading != 0 or any(F.alex_shift):
        raise ValueError("invert_quasi_iso expects a grading-preserving "
                         "morphism")
    if not F.gradings_ok():
        raise ValueError("invert_quasi_iso: component entries disagree with "
                         "the declared shifts")
    if not F.is_cycle():
        raise ValueError("invert_quasi_iso: the morphism is not a cycle")
    bad = []
    for e in sorted(F.source.vertices):
        fe = _vertex_chain_map(F, e)
        if not _acyclic(cone(fe)):
            bad.append(_tag(e))
    if bad:
        raise ValueError("invert_quasi_iso: vertex components at %s are not "
                         "quasi-isomorphisms" % ", ".join(bad))

    pa = perturb(F.source, source_sdrs)
    pb = perturb(F.target, target_sdrs)
    f_tot = F.total()
    f_red = pb.project.compose(f_tot).compose(pa.include)
    g_red = _invert_filtered(f_red)
    g_tot = pa.include.compose(g_red).compose(pb.project)

    d_a = differential_map(f_tot.source)
    d_b = differential_map(f_tot.target)
    fg = f_tot.compose(g_tot)
    gf = g_tot.compose(f_tot)
    h_fg = pb.homotopy.add(pb.homotopy.compose(fg).neg())
    h_gf = pa.homotopy.add(gf.compose(pa.homotopy).neg())
    ok_fg = ChainMap.identity(f_tot.target) \
        .add(d_b.compose(h_fg).add(h_fg.compose(d_b)))
    ok_gf = ChainMap.identity(f_tot.source) \
        .add(d_a.compose(h_gf).add(h_gf.compose(d_a)))
    assert fg == ok_fg, "forward . inverse is not homotopic to the identity"
    assert gf == ok_gf, "inverse . forward is not homotopic to the identity"

    comps = {}
    for (t, s), p in g_tot.matrix.items():
        b, tn = F.source.split_total_name(t)
        a, sn = F.target.split_total_name(s)
        comps.setdefault((a, b), {})[(tn, sn)] = p
    G = CubeMorphism(F.target, F.source, comps)
    assert G.is_cycle(), "inverse fails the cycle condition"
    return HomotopyEquivalence(F, G, h_fg, h_gf)


def _invert_filtered(fmap):
    """Exact inverse of a ChainMap whose constant part is invertible.

    Splits the matrix into a scalar part S and a U-divisible part P and
    sums the finite series (-S^{-1} P)^k S^{-1}.  Raises when S is
    singular, which is how a failed quasi-isomorphism surfaces after
    reduction.
    """
    src, tgt = fmap.source, fmap.target
    f = src.field
    zero_exp = (0,) * src.arity
    rows = tgt.names()
    cols = src.names()
    if len(rows) != len(cols):
        raise ValueError("reduced map is not square; not a quasi-isomorphism")
    s_dense = [[fmap.entry(t, s).constant_term() for s in cols] for t in rows]
    try:
        s_inv_dense = linalg.inverse(f, s_dense)
    except ValueError:
        raise ValueError("reduced map has singular constant part; not a "
                         "quasi-isomorphism") from None
    s_inv = {}
    for i, s in enumerate(cols):
        for j, t in enumerate(rows):
            c = s_inv_dense[i][j]
            if not f.is_zero(c):
                s_inv[(s, t)] = Poly.const(f, src.arity, c)
    p_part = {}
    for (t, s), p in fmap.matrix.items():
        tail = {e: c for e, c in p.coeffs.items() if e != zero_exp}
        if tail:
            p_part[(t, s)] = Poly(f, src.arity, tail)
    out = dict(s_inv)
    term = s_inv
    guard = 0
    while True:
        term = _md_scale(_md_compose(s_inv, _md_compose(p_part, term)),
                         f.from_int(-1))
        if not term:
            break
        out = _md_add(out, term)
        guard += 1
        if guard > 4 * (len(rows) + 4):
            raise AssertionError("inverse series failed to terminate")
    g = ChainMap(tgt, src, out)
    idn_s = ChainMap.identity(src)
    idn_t = ChainMap.identity(tgt)
    assert g.compose(fmap) == idn_s and fmap.compose(g) == idn_t, \
        "inverse check failed"
    return g
