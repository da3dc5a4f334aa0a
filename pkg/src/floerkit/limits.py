"""Direct limits of graded transition systems, with calibration.

A transition system is a finite window of graded spaces connected by
grading-preserving maps ``i -> j`` for every comparable pair ``i < j``
of indices.  Two flavours show up:

* ``TransitiveSystem``: compositions agree on the nose, so the window
  collapses onto its last stage and that collapse is the direct limit.
* ``ProjSystem``: compositions only agree up to a nonzero scalar.  Such
  a window has no limit as given, but as long as every space and map
  above a chosen base index is nonzero it can be rescaled (calibrated)
  into a strictly transitive one, and the limits taken at two different
  base points differ by a canonical unit (``base_change``).

Index sets are either integers or equal-length integer tuples ordered
componentwise; tuple windows must still contain a greatest element.

The staircase construction at the bottom splices two one-parameter
windows into a three-corner mapping complex whose homology agrees with
the plain tensor product of the stages in all gradings above a cutoff,
once the transition maps are isomorphisms up there.  The exact
identities relating the splice to the tensor product are bundled on the
returned object and checked by ``Staircase.verify``.
"""

import json

from . import linalg
from .complexes import (ChainMap, ComplexFormatError, FreeComplex, Generator,
                        homology_over_field, map_boundary)
from .scalars import Poly, field_by_tag


class CalibrationError(ValueError):
    """A projective window could not be rescaled into a transitive one."""


class LimitError(ValueError):
    """The window is too short or too ragged to take a limit."""


def _le(i, j):
    if isinstance(i, tuple) != isinstance(j, tuple):
        raise LimitError("mixed index kinds %r and %r" % (i, j))
    if isinstance(i, tuple):
        if len(i) != len(j):
            raise LimitError("index arities differ: %r vs %r" % (i, j))
        return all(a <= b for a, b in zip(i, j))
    return i <= j


def _lt(i, j):
    return i != j and _le(i, j)


def _proportional(field, wanted, got):
    """The scalar alpha with wanted == alpha * got, or None.

    Zero maps are proportional to each other (alpha = 1) and to nothing
    else; a zero alpha is returned when wanted vanishes but got does
    not, so callers that need a unit must reject it themselves.
    """
    if got.is_zero():
        return field.one if wanted.is_zero() else None
    if (wanted.h_shift != got.h_shift
            or wanted.alex_shift != got.alex_shift):
        return None
    key = min(got.matrix)
    p = got.matrix[key]
    exp = min(p.coeffs)
    alpha = field.div(wanted.entry(*key).coeffs.get(exp, field.zero),
                      p.coeffs[exp])
    return alpha if wanted == got.scale(alpha) else None


def _require_scalar(cmap, i, j):
    """Entries of cmap as plain scalars; ring variables are refused."""
    zero_exp = (0,) * cmap.source.arity
    out = {}
    for (t, s), p in cmap.matrix.items():
        if set(p.coeffs) != {zero_exp}:
            raise LimitError(
                "map %s -> %s multiplies by a ring variable; limits here "
                "want scalar transitions between graded spaces" % (i, j))
        out[(t, s)] = p.coeffs[zero_exp]
    return out


def _iso_above(cmap, cutoff):
    """Does cmap restrict to a bijection on generators of grading > cutoff?

    The grading of a generator is the sum of its Alexander components;
    grading-preserving maps cannot mix the slice with anything below
    it, so bijectivity is a square-matrix rank check.
    """
    src = [g.name for g in cmap.source.generators if sum(g.alex) > cutoff]
    tgt = [g.name for g in cmap.target.generators if sum(g.alex) > cutoff]
    if len(src) != len(tgt):
        return False
    if not src:
        return True
    field = cmap.source.field
    rows = [[cmap.entry(t, s).constant_term() for s in src] for t in tgt]
    return linalg.rank(field, rows) == len(src)


class _SystemBase:
    """Shared plumbing for transitive and projective windows."""

    def __init__(self, spaces, maps):
        if not spaces:
            raise LimitError("a system needs at least one space")
        self.spaces = dict(spaces)
        self.indices = sorted(self.spaces)
        self.maps = {}
        for (i, j), cmap in maps.items():
            if i not in self.spaces or j not in self.spaces:
                raise LimitError("map %s -> %s leaves the window" % (i, j))
            if not _lt(i, j):
                raise LimitError("map %s -> %s does not raise the index"
                                 % (i, j))
            self.maps[(i, j)] = cmap

    @property
    def field(self):
        return self.spaces[self.indices[0]].field

    def space(self, i):
        return self.spaces[i]

    def map(self, i, j):
        if i == j:
            return ChainMap.identity(self.spaces[i])
        try:
            return self.maps[(i, j)]
        except KeyError:
            raise LimitError("no map %s -> %s in the window" % (i, j))

    def pairs(self):
        return [(i, j) for i in self.indices for j in self.indices
                if _lt(i, j)]

    def top(self):
        for t in self.indices:
            if all(_le(i, t) for i in self.indices):
                return t
        raise LimitError("index window has no greatest element")

    def successors(self, i):
        ups = [j for j in self.indices if _lt(i, j)]
        return [j for j in ups
                if not any(_lt(i, k) and _lt(k, j) for k in ups)]

    def tail_pairs(self):
        """Covering pairs (i, j) with nothing strictly between."""
        out = []
        for i in self.indices:
            out.extend((i, j) for j in self.successors(i))
        return out

    def _shape_issues(self):
        out = []
        first = self.indices[0]
        model = self.spaces[first]
        for i in self.indices:
            sp = self.spaces[i]
            if (sp.field != model.field or sp.arity != model.arity
                    or sp.grading != model.grading):
                out.append("space %s: ring or grading mode differs from "
                           "stage %s" % (i, first))
        for (i, j) in self.pairs():
            if (i, j) not in self.maps:
                out.append("missing map %s -> %s" % (i, j))
        for (i, j), m in sorted(self.maps.items()):
            tag = "map %s -> %s" % (i, j)
            if m.source is not self.spaces[i] or m.target is not self.spaces[j]:
                out.append(tag + ": endpoints are not the window's spaces")
                continue
            if m.h_shift != 0 or any(m.alex_shift):
                out.append(tag + ": carries a grading shift")
            elif not m.gradings_ok():
                out.append(tag + ": entries break the grading")
            if not m.is_cycle():
                out.append(tag + ": does not commute with the differentials")
        return out

    def weakly_nontrivial(self, start=None):
        """Obstructions to calibrating from ``start``: zero spaces or maps."""
        idx = [i for i in self.indices if start is None or _le(start, i)]
        out = []
        for i in idx:
            if not self.spaces[i].generators:
                out.append("space %s is zero" % (i,))
        for i in idx:
            for j in idx:
                if _lt(i, j) and (i, j) in self.maps and self.maps[(i, j)].is_zero():
                    out.append("map %s -> %s is zero" % (i, j))
        return out

    def dims(self, i):
        table = {}
        for g in self.spaces[i].generators:
            key = (g.h, g.alex)
            table[key] = table.get(key, 0) + 1
        return table

    # -- serialization: integer interval windows only ------------------------

    def to_json(self):
        start = self.indices[0]
        if (not isinstance(start, int)
                or self.indices != list(range(start, start + len(self.indices)))):
            raise LimitError("only consecutive integer windows serialize")
        field = self.field
        maps = {}
        for (i, j), m in sorted(self.maps.items()):
            rows = []
            for (t, s), c in sorted(_require_scalar(m, i, j).items(),
                                    key=lambda kv: (kv[0][1], kv[0][0])):
                rows.append([s, t, field.show(c)])
            maps["%d->%d" % (i, j)] = rows
        return {"format": "system",
                "field": field.tag,
                "index_start": start,
                "spaces": [self.spaces[i].to_json() for i in self.indices],
                "maps": maps}

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, doc):
        if doc.get("format") != "system":
            raise ComplexFormatError("not a system file")
        field = field_by_tag(doc["field"])
        start = int(doc.get("index_start", 0))
        spaces = {}
        for off, sub in enumerate(doc["spaces"]):
            spaces[start + off] = FreeComplex.from_json(sub)
        maps = {}
        for key, rows in sorted(doc.get("maps", {}).items()):
            try:
                lo, hi = key.split("->")
                i, j = int(lo), int(hi)
            except ValueError:
                raise ComplexFormatError("maps key %r: expected 'i->j'" % key)
            if i not in spaces or j not in spaces:
                raise ComplexFormatError("maps key %r: no such stages" % key)
            arity = spaces[i].arity
            entries = {}
            for s, t, c in rows:
                p = Poly.const(field, arity, field.parse(str(c)))
                prev = entries.get((t, s))
                entries[(t, s)] = p if prev is None else prev.add(p)
            maps[(i, j)] = ChainMap(spaces[i], spaces[j], entries)
        return cls(spaces, maps)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


class TransitiveSystem(_SystemBase):
    """A window whose transition maps compose exactly."""

    def validate(self):
        out = self._shape_issues()
        if out:
            return out
        for i in self.indices:
            for j in self.indices:
                if not _lt(i, j):
                    continue
                for k in self.indices:
                    if not _lt(j, k):
                        continue
                    comp = self.map(j, k).compose(self.map(i, j))
                    if comp != self.map(i, k):
                        out.append("composite %s -> %s -> %s differs from "
                                   "the direct map" % (i, j, k))
        return out

    def assert_valid(self):
        issues = self.validate()
        if issues:
            raise LimitError("; ".join(issues))


class ProjSystem(_SystemBase):
    """A window whose transition maps compose up to nonzero scalars."""

    def validate(self):
        out = self._shape_issues()
        if out:
            return out
        field = self.field
        for i in self.indices:
            for j in self.indices:
                if not _lt(i, j):
                    continue
                for k in self.indices:
                    if not _lt(j, k):
                        continue
                    comp = self.map(j, k).compose(self.map(i, j))
                    alpha = _proportional(field, self.map(i, k), comp)
                    if alpha is None or (field.is_zero(alpha)
                                         and not comp.is_zero()):
                        out.append("composite %s -> %s -> %s is not a unit "
                                   "multiple of the direct map" % (i, j, k))
        return out

    def assert_valid(self):
        issues = self.validate()
        if issues:
            raise LimitError("; ".join(issues))


def calibrate(psys, base):
    """Rescale a projective window into a transitive one, seen from ``base``.

    Maps out of the base keep their scale; every other map ``i -> j``
    picks up the unique nonzero scalar closing the triangle through the
    base on the nose.  Returns the rescaled ``TransitiveSystem`` over
    the stages at or above ``base`` together with the scalar applied to
    each map.  Over F2 the only unit is 1, so a window that validates
    projectively there comes back unchanged.

    Raises ``CalibrationError`` if the window above the base has a zero
    space or a zero map (the scalar would not be unique) or if some
    triangle refuses to close up to a unit.
    """
    issues = psys.validate()
    if issues:
        raise CalibrationError(issues[0])
    if base not in psys.spaces:
        raise CalibrationError("base index %s is not in the window" % (base,))
    trouble = psys.weakly_nontrivial(base)
    if trouble:
        raise CalibrationError(trouble[0])
    field = psys.field
    window = [i for i in psys.indices if _le(base, i)]
    maps, alphas = {}, {}
    for i in window:
        for j in window:
            if not _lt(i, j):
                continue
            phi = psys.map(i, j)
            if i == base:
                alpha = field.one
            else:
                comp = phi.compose(psys.map(base, i))
                alpha = _proportional(field, psys.map(base, j), comp)
                if alpha is None or field.is_zero(alpha):
                    raise CalibrationError(
                        "triangle %s -> %s -> %s does not close up to a unit"
                        % (base, i, j))
            maps[(i, j)] = phi.scale(alpha)
            alphas[(i, j)] = alpha
    out = TransitiveSystem({i: psys.spaces[i] for i in window}, maps)
    left = out.validate()
    if left:
        raise CalibrationError(left[0])
    return out, alphas


class DirectLimit:
    """The limit of a finite transitive window, presented on its last stage."""

    __slots__ = ("system", "top", "space", "stable", "quotient_dim")

    def __init__(self, system, top, stable, quotient_dim):
        self.system = system
        self.top = top
        self.space = system.spaces[top]
        self.stable = dict(stable)
        self.quotient_dim = quotient_dim

    def into(self, i):
        """Structure map from stage i into the limit."""
        return self.system.map(i, self.top)

    def dims(self):
        return self.system.dims(self.top)

    def describe(self):
        lines = ["direct limit of %d stages, last stage %s"
                 % (len(self.system.indices), self.top)]
        for (h, alex), d in sorted(self.dims().items()):
            lines.append("  dim[h=%s, A=%s] = %d"
                         % (h, ",".join(str(a) for a in alex), d))
        for q in sorted(self.stable):
            lines.append("  grading %d stable from stage %s"
                         % (q, self.stable[q]))
        return lines


def _stable_from(system, q):
    """First stage after which every covering map is an iso at gradings >= q.

    Trusting the limit's dimension at grading q takes isomorphisms at q
    itself and everything above it, hence the cutoff q - 1.
    """
    if len(system.indices) == 1:
        return system.indices[0]
    tails = system.tail_pairs()
    for s in system.indices:
        checked = [(i, j) for (i, j) in tails if _le(s, i)]
        if checked and all(_iso_above(system.map(i, j), q - 1)
                           for (i, j) in checked):
            return s
    return None


def direct_limit(system, grading_range=None):
    """Collapse a transitive window onto its last stage, with receipts.

    The limit over a finite window is computed two ways: as the honest
    quotient of the direct sum of all stages by the span of
    ``x - (map to a later stage)(x)``, whose dimension is checked
    against the last stage, and as the last stage itself, onto which
    the quotient projects isomorphically.  The returned ``DirectLimit``
    carries the structure maps ``into(i)``.

    A finite window cannot tell whether the tower keeps changing past
    its end, so trust is per grading: with ``grading_range=(lo, hi)``
    the limit records, for each integer grading q in the range, the
    first stage from which every later covering map restricts to an
    isomorphism on generators of grading >= q (grading = sum of the
    Alexander components).  If even the final map fails that, the
    window is too short there and ``LimitError("unstable at grading
    q")`` is raised.
    """
    issues = system.validate()
    if issues:
        raise LimitError(issues[0])
    top = system.top()
    field = system.field

    basis = []
    for i in system.indices:
        basis.extend((i, g.name) for g in system.spaces[i].generators)
    pos = {key: r for r, key in enumerate(basis)}
    rows = []
    for (i, j) in sorted(system.maps):
        entries = _require_scalar(system.maps[(i, j)], i, j)
        by_src = {}
        for (t, s), c in entries.items():
            by_src.setdefault(s, []).append((t, c))
        for g in system.spaces[i].generators:
            row = [field.zero] * len(basis)
            row[pos[(i, g.name)]] = field.one
            for t, c in by_src.get(g.name, ()):
                row[pos[(j, t)]] = field.neg(c)
            rows.append(row)
    quotient_dim = len(basis) - linalg.rank(field, rows)
    if quotient_dim != len(system.spaces[top].generators):
        raise LimitError(
            "window quotient has dimension %d but the last stage has %d"
            % (quotient_dim, len(system.spaces[top].generators)))

    stable = {}
    if grading_range is not None:
        lo, hi = grading_range
        for q in range(int(lo), int(hi) + 1):
            s = _stable_from(system, q)
            if s is None:
                raise LimitError("unstable at grading %d" % q)
            stable[q] = s
    return DirectLimit(system, top, stable, quotient_dim)


class SystemMorphism:
    """A family of maps between two windows commuting with the transitions.

    ``index_map`` sends source stages to target stages monotonically and
    ``components[i]`` maps stage i to stage ``index_map[i]``.  All
    components must share one (h, Alexander) shift; a pure shift is how
    a ring action on a limit travels through the window.
    """

    def __init__(self, source, target, index_map, components):
        self.source = source
        self.target = target
        self.index_map = dict(index_map)
        self.components = dict(components)

    def component(self, i):
        return self.components[i]

    def validate(self, exact=True):
        out = []
        for i in self.source.indices:
            if i not in self.index_map:
                out.append("stage %s has no image index" % (i,))
            elif self.index_map[i] not in self.target.spaces:
                out.append("stage %s lands outside the target window" % (i,))
            if i not in self.components:
                out.append("stage %s has no component" % (i,))
        if out:
            return out
        shifts = {(c.h_shift, c.alex_shift) for c in self.components.values()}
        if len(shifts) > 1:
            out.append("components carry different grading shifts")
        for (i, j) in self.source.pairs():
            if not _le(self.index_map[i], self.index_map[j]):
                out.append("index map is not monotone on %s -> %s" % (i, j))
        if out:
            return out
        field = self.source.field
        for (i, j) in self.source.pairs():
            left = self.components[j].compose(self.source.map(i, j))
            right = self.target.map(self.index_map[i],
                                    self.index_map[j]).compose(self.components[i])
            if exact:
                if left != right:
                    out.append("square at %s -> %s does not commute" % (i, j))
            else:
                alpha = _proportional(field, right, left)
                if alpha is None or (field.is_zero(alpha)
                                     and not left.is_zero()):
                    out.append("square at %s -> %s does not commute up to "
                               "a unit" % (i, j))
        return out

    def compose(self, other):
        """self . other (apply ``other`` first)."""
        idx = {i: self.index_map[other.index_map[i]]
               for i in other.source.indices}
        comps = {i: self.components[other.index_map[i]].compose(
            other.components[i]) for i in other.source.indices}
        return SystemMorphism(other.source, self.target, idx, comps)


def limit_map(morph, check=True):
    """The map induced on direct limits, presented on the last stages."""
    if check:
        issues = morph.validate()
        if issues:
            raise LimitError(issues[0])
    s_top = morph.source.top()
    t_top = morph.target.top()
    tail = morph.target.map(morph.index_map[s_top], t_top)
    return tail.compose(morph.components[s_top])


def calibrate_morphism(morph, base):
    """Rescale a morphism of projective windows to match calibrations.

    ``morph`` must commute up to units.  The source window is
    calibrated at ``base`` and the target at the base's image; each
    component above the base is then rescaled by the unique unit making
    its square against the base component commute exactly.  Returns the
    exact ``SystemMorphism`` between the calibrated windows and the
    scalars used.
    """
    pre = morph.validate(exact=False)
    if pre:
        raise CalibrationError(pre[0])
    src_cal, _ = calibrate(morph.source, base)
    tgt_base = morph.index_map[base]
    tgt_cal, _ = calibrate(morph.target, tgt_base)
    field = src_cal.field
    comps, alphas = {}, {}
    for i in src_cal.indices:
        part = morph.components[i]
        if i == base:
            alpha = field.one
        else:
            left = part.compose(src_cal.map(base, i))
            right = tgt_cal.map(tgt_base,
                                morph.index_map[i]).compose(morph.components[base])
            alpha = _proportional(field, right, left)
            if alpha is None or field.is_zero(alpha):
                raise CalibrationError(
                    "component at %s does not match the calibrated "
                    "transitions up to a unit" % (i,))
        comps[i] = part.scale(alpha)
        alphas[i] = alpha
    out = SystemMorphism(src_cal, tgt_cal,
                         {i: morph.index_map[i] for i in src_cal.indices},
                         comps)
    left = out.validate()
    if left:
        raise CalibrationError(left[0])
    return out, alphas


class BaseChange:
    """Canonical unit comparing the limits calibrated at two base points.

    Both calibrated limits live on the same last stage; the comparison
    in that presentation is a unit multiple of the identity in each
    direction, and the two directions are honest inverses.  The
    stage-level family is available through ``component``.
    """

    def __init__(self, psys, old_base, new_base):
        if not _le(old_base, new_base):
            raise CalibrationError("base points %s, %s are not comparable"
                                   % (old_base, new_base))
        self.psys = psys
        self.old_base = old_base
        self.new_base = new_base
        self.calibrated_old, _ = calibrate(psys, old_base)
        self.calibrated_new, _ = calibrate(psys, new_base)
        self.top = psys.top()
        field = psys.field
        into_old = psys.map(old_base, self.top)
        corner = psys.map(new_base, self.top).compose(
            psys.map(old_base, new_base))
        fwd = _proportional(field, corner, into_old)
        bwd = _proportional(field, into_old, corner)
        if (fwd is None or field.is_zero(fwd)
                or bwd is None or field.is_zero(bwd)):
            raise CalibrationError(
                "paths from %s and %s to the top stage are not proportional"
                % (old_base, new_base))
        ident = ChainMap.identity(psys.spaces[self.top])
        self.forward_unit = fwd
        self.back_unit = bwd
        self.forward = ident.scale(fwd)
        self.back = ident.scale(bwd)

    def component(self, m, n):
        """The rescaled transition m -> n matching the two calibrations."""
        if not (_le(self.old_base, m) and _le(self.new_base, n)
                and _le(m, n)):
            raise CalibrationError("stages %s -> %s do not sit over the two "
                                   "base points" % (m, n))
        field = self.psys.field
        through_old = self.psys.map(m, n).compose(self.psys.map(self.old_base, m))
        through_new = self.psys.map(self.new_base, n).compose(
            self.psys.map(self.old_base, self.new_base))
        alpha = _proportional(field, through_new, through_old)
        if alpha is None or field.is_zero(alpha):
            raise CalibrationError("no unit matches the calibrations on "
                                   "%s -> %s" % (m, n))
        return self.psys.map(m, n).scale(alpha)

    def verify(self):
        """Round trips on the last stage must be the identity on the nose."""
        ident = ChainMap.identity(self.psys.spaces[self.top])
        out = []
        if self.back.compose(self.forward) != ident:
            out.append("back . forward is not the identity")
        if self.forward.compose(self.back) != ident:
            out.append("forward . back is not the identity")
        return out


def base_change(psys, old_base, new_base):
    return BaseChange(psys, old_base, new_base)


# -- staircases ---------------------------------------------------------------

def graded_tensor(left, right):
    """Tensor product of two zero-differential graded spaces."""
    if left.diff or right.diff:
        raise LimitError("graded_tensor wants zero differentials; "
                         "take homology first")
    if (left.field != right.field or left.arity != right.arity
            or left.grading != right.grading
            or left.alex_len != right.alex_len):
        raise LimitError("tensor factors live over different gradings")
    gens = [Generator("%s|%s" % (a.name, b.name), a.h + b.h,
                      tuple(x + y for x, y in zip(a.alex, b.alex)))
            for a in left.generators for b in right.generators]
    return FreeComplex(left.field, left.arity, gens, {}, left.grading)


def tensor_map(fmap, gmap, source, target):
    """fmap (x) gmap between prebuilt tensors.

    Both factors must be grading-preserving with scalar entries, which
    is why no sign bookkeeping appears.
    """
    out = {}
    for (t1, s1), p in fmap.matrix.items():
        for (t2, s2), q in gmap.matrix.items():
            out[("%s|%s" % (t1, t2), "%s|%s" % (s1, s2))] = p.mul(q)
    return ChainMap(source, target, out)


def _staircase_space(gsys, hsys, n, m):
    g_prev, g_here = gsys.spaces[n - 1], gsys.spaces[n]
    h_prev, h_here = hsys.spaces[m - 1], hsys.spaces[m]
    gens = []
    for a in g_prev.generators:
        for b in h_here.generators:
            gens.append(Generator("L.%s|%s" % (a.name, b.name), a.h + b.h,
                                  tuple(x + y for x, y in zip(a.alex, b.alex))))
    for a in g_here.generators:
        for b in h_prev.generators:
            gens.append(Generator("R.%s|%s" % (a.name, b.name), a.h + b.h,
                                  tuple(x + y for x, y in zip(a.alex, b.alex))))
    for a in g_here.generators:
        for b in h_here.generators:
            gens.append(Generator("T.%s|%s" % (a.name, b.name),
                                  a.h + b.h - 1,
                                  tuple(x + y for x, y in zip(a.alex, b.alex))))
    diff = {}
    for (t, s), p in gsys.map(n - 1, n).matrix.items():
        for b in h_here.generators:
            diff[("T.%s|%s" % (t, b.name), "L.%s|%s" % (s, b.name))] = p
    # the sign on the right arm is what lets from_tensor commute with the
    # differential: its two corner contributions must cancel in T
    for (t, s), p in hsys.map(m - 1, m).matrix.items():
        for a in g_here.generators:
            diff[("T.%s|%s" % (a.name, t), "R.%s|%s" % (a.name, s))] = p.neg()
    return FreeComplex(g_prev.field, g_prev.arity, gens, diff, g_prev.grading)


class Staircase:
    """The splice of two windows at (n, m) with its comparison maps.

    ``complex`` has two source corners, L one stage back in the first
    window and R one stage back in the second, both mapping onto the
    corner T which sits one homological step lower.  ``next_complex``
    is the same shape one stage up in both windows.

    The bundled maps:

    * ``from_tensor``: the tensor of the current stages into
      ``next_complex``;
    * ``to_tensor`` / ``to_tensor_next``: read the L corner out through
      the first window's transition;
    * ``step``: the coordinate-wise transition between the two splices;
    * ``homotopy``: degree +1 witness for the round-trip identity.

    ``verify`` checks, exactly: both complexes are complexes, all four
    degree-0 maps are chain maps, projecting after splicing equals the
    tensor of the transitions, and the splice round trip differs from
    ``step`` by the boundary of ``homotopy``.
    """

    __slots__ = ("n", "m", "complex", "next_complex", "source", "target",
                 "from_tensor", "to_tensor", "to_tensor_next", "step",
                 "tensor_step", "homotopy", "arm_left", "arm_right")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def verify(self):
        out = []
        for tag, cx in (("staircase", self.complex),
                        ("next staircase", self.next_complex)):
            report = cx.validate()
            if not report.ok:
                out.append("%s complex fails validation" % tag)
        for tag, cmap in (("from_tensor", self.from_tensor),
                          ("to_tensor", self.to_tensor),
                          ("to_tensor_next", self.to_tensor_next),
                          ("step", self.step)):
            if not cmap.gradings_ok():
                out.append(tag + ": entries break the grading")
            if not cmap.is_cycle():
                out.append(tag + ": not a chain map")
        if not self.homotopy.gradings_ok():
            out.append("homotopy: entries break the grading")
        if self.to_tensor_next.compose(self.from_tensor) != self.tensor_step:
            out.append("projecting after splicing is not the tensor of the "
                       "transitions")
        round_trip = self.from_tensor.compose(self.to_tensor)
        if round_trip != self.step.add(map_boundary(self.homotopy)):
            out.append("round trip differs from the step map by more than "
                       "a boundary")
        return out

    def hypothesis_holds(self, cutoff):
        """Are both arms of the splice isomorphisms above the cutoff?"""
        return (_iso_above(self.arm_left, cutoff)
                and _iso_above(self.arm_right, cutoff))

    def truncated_iso(self, cutoff):
        """Homology of the splice vs the plain tensor above a grading.

        Returns (equal, homology table, tensor table), each table keyed
        by (h, alex) and restricted to total Alexander grading > cutoff.
        """
        hs = {k: v for k, v in homology_over_field(self.complex).items()
              if sum(k[1]) > cutoff}
        ts = {}
        for g in self.source.generators:
            if sum(g.alex) > cutoff:
                key = (g.h, g.alex)
                ts[key] = ts.get(key, 0) + 1
        return hs == ts, hs, ts


def staircase(gsys, hsys, n, m):
    """Build the splice of two transitive windows at stages (n, m).

    Both windows must contain stages n-1 .. n+1 (first) and m-1 .. m+1
    (second) with scalar transition maps.  See ``Staircase`` for what
    comes back; all of its identities are exact, not up to sign.
    """
    for sys_, k, tag in ((gsys, n, "first"), (hsys, m, "second")):
        for kk in (k - 1, k, k + 1):
            if kk not in sys_.spaces:
                raise LimitError("staircase needs stage %s of the %s window"
                                 % (kk, tag))
        issues = sys_.validate()
        if issues:
            raise LimitError(issues[0])
    for pair, sys_ in (((n - 1, n), gsys), ((n, n + 1), gsys),
                       ((m - 1, m), hsys), ((m, m + 1), hsys)):
        _require_scalar(sys_.map(*pair), *pair)

    small = _staircase_space(gsys, hsys, n, m)
    big = _staircase_space(gsys, hsys, n + 1, m + 1)
    source = graded_tensor(gsys.spaces[n], hsys.spaces[m])
    target = graded_tensor(gsys.spaces[n + 1], hsys.spaces[m + 1])
    g_step, g_prev = gsys.map(n, n + 1), gsys.map(n - 1, n)
    h_step, h_prev = hsys.map(m, m + 1), hsys.map(m - 1, m)

    entries = {}
    for (t, s), p in h_step.matrix.items():
        for a in gsys.spaces[n].generators:
            entries[("L.%s|%s" % (a.name, t), "%s|%s" % (a.name, s))] = p
    for (t, s), p in g_step.matrix.items():
        for b in hsys.spaces[m].generators:
            entries[("R.%s|%s" % (t, b.name), "%s|%s" % (s, b.name))] = p
    from_tensor = ChainMap(source, big, entries)

    entries = {}
    for (t, s), p in g_prev.matrix.items():
        for b in hsys.spaces[m].generators:
            entries[("%s|%s" % (t, b.name), "L.%s|%s" % (s, b.name))] = p
    to_tensor = ChainMap(small, source, entries)

    entries = {}
    for (t, s), p in g_step.matrix.items():
        for b in hsys.spaces[m + 1].generators:
            entries[("%s|%s" % (t, b.name), "L.%s|%s" % (s, b.name))] = p
    to_tensor_next = ChainMap(big, target, entries)

    entries = {}
    for (t, s), p in g_step.matrix.items():
        for b in hsys.spaces[m].generators:
            entries[("R.%s|%s" % (t, b.name), "T.%s|%s" % (s, b.name))] = p
    homotopy = ChainMap(small, big, entries, h_shift=1)

    entries = {}
    for (t1, s1), p in g_prev.matrix.items():
        for (t2, s2), q in h_step.matrix.items():
            entries[("L.%s|%s" % (t1, t2), "L.%s|%s" % (s1, s2))] = p.mul(q)
    for (t1, s1), p in g_step.matrix.items():
        for (t2, s2), q in h_prev.matrix.items():
            entries[("R.%s|%s" % (t1, t2), "R.%s|%s" % (s1, s2))] = p.mul(q)
    for (t1, s1), p in g_step.matrix.items():
        for (t2, s2), q in h_step.matrix.items():
            entries[("T.%s|%s" % (t1, t2), "T.%s|%s" % (s1, s2))] = p.mul(q)
    step = ChainMap(small, big, entries)

    mid_left = graded_tensor(gsys.spaces[n - 1], hsys.spaces[m])
    mid_right = graded_tensor(gsys.spaces[n], hsys.spaces[m - 1])
    arm_left = tensor_map(g_prev, ChainMap.identity(hsys.spaces[m]),
                          mid_left, source)
    arm_right = tensor_map(ChainMap.identity(gsys.spaces[n]), h_prev,
                           mid_right, source)

    return Staircase(n=n, m=m, complex=small, next_complex=big,
                     source=source, target=target, from_tensor=from_tensor,
                     to_tensor=to_tensor, to_tensor_next=to_tensor_next,
                     step=step, tensor_step=tensor_map(g_step, h_step,
                                                       source, target),
                     homotopy=homotopy, arm_left=arm_left,
                     arm_right=arm_right)
