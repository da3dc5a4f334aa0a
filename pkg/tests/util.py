"""Shared random-instance builders for the test suite.

The recurring trick: build an object whose answer is known by
construction (elementary summands, block-diagonal operators), then
disguise it with grading-compatible changes of basis. The disguised
object is what the library sees; the construction data is the oracle.
"""
import random

from floerkit.complexes import FreeComplex, Generator, GradedModule
from floerkit.scalars import F2, QI, QQ, Poly


def random_scalar(rng, field, nonzero=False):
    if field is F2:
        return 1 if nonzero else rng.randint(0, 1)
    while True:
        if field is QQ:
            v = field.parse("%d" % rng.randint(-3, 3))
        else:
            v = field.parse("%d" % rng.randint(-2, 2))
            if rng.random() < 0.4:
                v = field.add(v, field.mul(field.i_unit(),
                                           field.from_int(rng.randint(-2, 2))))
        if not nonzero or not field.is_zero(v):
            return v


def random_summands(rng, max_pieces=3, h_range=(-2, 2), a_range=(-2, 2),
                    max_order=3):
    """A random list of free/torsion summand descriptors."""
    out = []
    for _ in range(rng.randint(1, max_pieces)):
        h = rng.randint(*h_range)
        a = rng.randint(*a_range)
        if rng.random() < 0.5:
            out.append(("free", h, a))
        else:
            out.append(("tors", h, a, rng.randint(1, max_order)))
    return out


def complex_from_summands(field, summands, prefix="g"):
    """Elementary model complex whose homology is exactly `summands`."""
    gens = []
    diff = {}
    for i, s in enumerate(summands):
        if s[0] == "free":
            gens.append(Generator("%s%df" % (prefix, i), s[1], (s[2],)))
        else:
            _, h, a, order = s
            gens.append(Generator("%s%dy" % (prefix, i), h, (a,)))
            gens.append(Generator("%s%dx" % (prefix, i), h + 1, (a - order,)))
            diff[("%s%dy" % (prefix, i), "%s%dx" % (prefix, i))] = \
                Poly.monomial(field, 1, (order,))
    return FreeComplex(field, 1, gens, diff)


def scramble_basis(rng, cx, steps=None):
    """Conjugate by random grading-preserving elementary transvections.

    Homology is unchanged; the sparse elementary structure is not.
    """
    field = cx.field
    gens = cx.generators
    names = [g.name for g in gens]
    diff = {k: p for k, p in cx.diff.items()}
    if steps is None:
        steps = 3 * len(gens)
    by_h = {}
    for g in gens:
        by_h.setdefault(g.h, []).append(g)

    def entry(t, s):
        return diff.get((t, s), Poly.zero(field, cx.arity))

    for _ in range(steps):
        g1 = gens[rng.randrange(len(gens))]
        peers = [g for g in by_h[g1.h]
                 if g.name != g1.name
                 and all(b >= a for a, b in zip(g1.alex, g.alex))]
        if not peers:
            continue
        g2 = peers[rng.randrange(len(peers))]
        exp = tuple(b - a for a, b in zip(g1.alex, g2.alex))
        lam = Poly.monomial(field, cx.arity, exp,
                            random_scalar(rng, field, nonzero=True))
        # basis change g1 <- g1 + lam g2: update column g1, then row g2
        for t in names:
            p = entry(t, g2.name)
            if not p.is_zero():
                q = entry(t, g1.name).add(lam.mul(p))
                if q.is_zero():
                    diff.pop((t, g1.name), None)
                else:
                    diff[(t, g1.name)] = q
        for s in names:
            p = entry(g1.name, s)
            if not p.is_zero():
                q = entry(g2.name, s).sub(lam.mul(p))
                if q.is_zero():
                    diff.pop((g2.name, s), None)
                else:
                    diff[(g2.name, s)] = q
    out = FreeComplex(field, cx.arity,
                      [Generator(g.name, g.h, g.alex) for g in gens],
                      diff, cx.grading)
    report = out.validate()
    assert report.ok, "scramble broke the complex: %s" % report.lines()
    return out


def random_complex(rng, field, max_pieces=3, **kw):
    """A scrambled complex together with its known homology module."""
    summands = random_summands(rng, max_pieces=max_pieces, **kw)
    cx = scramble_basis(rng, complex_from_summands(field, summands))
    return cx, GradedModule(summands)


def random_field_complex(rng, field, max_pieces=3, h_range=(-2, 2),
                         a_range=(-1, 1), prefix="g"):
    """Constant-coefficient complex with a known homology table.

    Pieces are lone generators (one homology class each) or cancelling
    x -> y pairs inside one Alexander level; the table maps (h, alex)
    to a dimension.
    """
    gens = []
    diff = {}
    table = {}
    for i in range(rng.randint(1, max_pieces)):
        h = rng.randint(*h_range)
        a = rng.randint(*a_range)
        if rng.random() < 0.5:
            gens.append(Generator("%s%df" % (prefix, i), h, (a,)))
            key = (h, (a,))
            table[key] = table.get(key, 0) + 1
        else:
            gens.append(Generator("%s%dy" % (prefix, i), h, (a,)))
            gens.append(Generator("%s%dx" % (prefix, i), h + 1, (a,)))
            diff[("%s%dy" % (prefix, i), "%s%dx" % (prefix, i))] = \
                Poly.const(field, 1, random_scalar(rng, field, nonzero=True))
    cx = scramble_basis(rng, FreeComplex(field, 1, gens, diff))
    return cx, table


def scramble_cube(rng, cube, steps=None):
    """Filtered change of basis on a hypercube.

    Transvections g1 <- g1 + c g2 are allowed when both generators sit
    in the same total bidegree and the vertex of g2 dominates the
    vertex of g1, so the conjugated differential stays filtered and
    every vertex complex is conjugated within itself.
    """
    from floerkit.hypercubes import Hypercube

    field = cube.field
    tot = cube.total()
    gens = tot.generators
    names = [g.name for g in gens]
    home = {g.name: cube.split_total_name(g.name)[0] for g in gens}
    diff = dict(tot.diff)
    if steps is None:
        steps = 3 * len(gens)

    def entry(t, s):
        return diff.get((t, s), Poly.zero(field, cube.arity))

    for _ in range(steps):
        g1 = gens[rng.randrange(len(gens))]
        peers = [g for g in gens
                 if g.name != g1.name and g.h == g1.h and g.alex == g1.alex
                 and all(a <= b for a, b in zip(home[g1.name], home[g.name]))]
        if not peers:
            continue
        g2 = peers[rng.randrange(len(peers))]
        lam = Poly.const(field, cube.arity,
                         random_scalar(rng, field, nonzero=True))
        for t in names:
            p = entry(t, g2.name)
            if not p.is_zero():
                q = entry(t, g1.name).add(lam.mul(p))
                if q.is_zero():
                    diff.pop((t, g1.name), None)
                else:
                    diff[(t, g1.name)] = q
        for s in names:
            p = entry(g1.name, s)
            if not p.is_zero():
                q = entry(g2.name, s).sub(lam.mul(p))
                if q.is_zero():
                    diff.pop((g2.name, s), None)
                else:
                    diff[(g2.name, s)] = q

    vdiffs = {e: {} for e in cube.vertices}
    maps = {}
    for (t, s), p in diff.items():
        et, tn = cube.split_total_name(t)
        es, sn = cube.split_total_name(s)
        if et == es:
            vdiffs[es][(tn, sn)] = p
        else:
            maps.setdefault((es, et), {})[(tn, sn)] = p
    verts = {}
    for e, cx in cube.vertices.items():
        verts[e] = FreeComplex(field, cube.arity,
                               [Generator(g.name, g.h, g.alex)
                                for g in cx.generators],
                               vdiffs[e], cube.grading)
    out = Hypercube(verts, maps)
    report = out.validate()
    assert report.ok, "cube scramble went wrong: %s" % report.lines()
    return out


def random_cube(rng, field, dim, max_pieces=2, **kw):
    """A scrambled hypercube plus its per-vertex homology tables.

    Starts from a disjoint union (zero structure maps), so the vertex
    homology is known and the total homology is the vertex homology
    shifted down by the vertex weight.
    """
    import itertools

    from floerkit.hypercubes import Hypercube

    verts = {}
    tables = {}
    for e in itertools.product((0, 1), repeat=dim):
        tag = "".join(str(x) for x in e)
        cx, table = random_field_complex(rng, field, max_pieces=max_pieces,
                                         prefix="v%s_" % tag, **kw)
        verts[e] = cx
        tables[e] = table
    cube = scramble_cube(rng, Hypercube(verts, {}))
    return cube, tables


def total_table_from_vertex_tables(tables):
    """Expected homology table of the totalization of a split cube."""
    out = {}
    for e, table in tables.items():
        for (h, alex), dim in table.items():
            key = (h - sum(e), alex)
            out[key] = out.get(key, 0) + dim
    return {k: v for k, v in out.items() if v}


def _apply_transvections(rng, field, arity, gens, home, mats, steps):
    """Random filtered transvections applied jointly to several matrices.

    Each matrix is a dict keyed (target name, source name) over one
    generator set; the same change of basis hits all of them, so any
    relation between the matrices (cycle conditions, commutators) is
    conjugated rather than destroyed.  `home` maps names to vertex
    labels; use a constant map for a plain complex.
    """
    names = [g.name for g in gens]

    def entry(m, t, s):
        return m.get((t, s), Poly.zero(field, arity))

    for _ in range(steps):
        g1 = gens[rng.randrange(len(gens))]
        peers = [g for g in gens
                 if g.name != g1.name and g.h == g1.h and g.alex == g1.alex
                 and all(a <= b for a, b in zip(home[g1.name],
                                                home[g.name]))]
        if not peers:
            continue
        g2 = peers[rng.randrange(len(peers))]
        lam = Poly.const(field, arity,
                         random_scalar(rng, field, nonzero=True))
        for m in mats:
            for t in names:
                p = entry(m, t, g2.name)
                if not p.is_zero():
                    q = entry(m, t, g1.name).add(lam.mul(p))
                    if q.is_zero():
                        m.pop((t, g1.name), None)
                    else:
                        m[(t, g1.name)] = q
            for s in names:
                p = entry(m, g1.name, s)
                if not p.is_zero():
                    q = entry(m, g2.name, s).sub(lam.mul(p))
                    if q.is_zero():
                        m.pop((g2.name, s), None)
                    else:
                        m[(g2.name, s)] = q


def _rebuild_cube(cube, diff):
    from floerkit.hypercubes import Hypercube

    vdiffs = {e: {} for e in cube.vertices}
    maps = {}
    for (t, s), p in diff.items():
        et, tn = cube.split_total_name(t)
        es, sn = cube.split_total_name(s)
        if et == es:
            vdiffs[es][(tn, sn)] = p
        else:
            maps.setdefault((es, et), {})[(tn, sn)] = p
    verts = {e: FreeComplex(cube.field, cube.arity,
                            [Generator(g.name, g.h, g.alex)
                             for g in cx.generators],
                            vdiffs[e], cube.grading)
             for e, cx in cube.vertices.items()}
    return Hypercube(verts, maps)


def _split_components(cube, entries):
    comps = {}
    for (t, s), p in entries.items():
        et, tn = cube.split_total_name(t)
        es, sn = cube.split_total_name(s)
        comps.setdefault((es, et), {})[(tn, sn)] = p
    return comps


def _bump(d, key, amount=1):
    d[key] = d.get(key, 0) + amount


def _operator_cells(rng, field, eps_list, pick_lams, max_cells,
                    h_range=(-1, 1), a_range=(-1, 1)):
    """Shared cell builder for operator cubes.

    Each cell carries one eigenvalue tuple from pick_lams and is a lone
    generator, a cancelling pair, or the same with a Jordan coupling in
    every operator.  Returns the per-vertex generators, differentials
    and one diagonal-operator entry dict per operator slot, plus the
    cells' bookkeeping: lone-cell records (vertex, name, lams, h, a)
    eligible for crosses and jordan records counted like two lones.
    """
    nops = len(pick_lams(rng, peek=True))
    gens = {e: [] for e in eps_list}
    diffs = {e: {} for e in eps_list}
    mus = [{e: {} for e in eps_list} for _ in range(nops)]
    lones = []
    jordans = []
    for e in eps_list:
        tag = "".join(str(x) for x in e)
        for i in range(rng.randint(1, max_cells)):
            lams = pick_lams(rng)
            h = rng.randint(*h_range)
            a = rng.randint(*a_range)
            base = "v%s_c%d" % (tag, i)
            roll = rng.random()

            def diag(names_):
                for k, lam in enumerate(lams):
                    for nm in names_:
                        mus[k][e][(nm, nm)] = Poly.const(field, 1, lam)

            def couple(src, tgt):
                for k in range(len(lams)):
                    coeff = field.from_int(k + 1)
                    if not field.is_zero(coeff):
                        mus[k][e][(tgt, src)] = Poly.const(field, 1, coeff)

            if roll < 0.4:
                gens[e].append(Generator(base + "f", h, (a,)))
                diag([base + "f"])
                lones.append((e, base + "f", lams, h, a))
            elif roll < 0.65:
                gens[e].append(Generator(base + "y", h, (a,)))
                gens[e].append(Generator(base + "x", h + 1, (a,)))
                diffs[e][(base + "y", base + "x")] = Poly.const(
                    field, 1, random_scalar(rng, field, nonzero=True))
                diag([base + "y", base + "x"])
            elif roll < 0.85:
                gens[e].append(Generator(base + "p", h, (a,)))
                gens[e].append(Generator(base + "q", h, (a,)))
                diag([base + "p", base + "q"])
                couple(base + "p", base + "q")
                jordans.append((e, lams, h, a))
            else:
                c = random_scalar(rng, field, nonzero=True)
                for suf in ("y1", "x1", "y2", "x2"):
                    hh = h + 1 if suf.startswith("x") else h
                    gens[e].append(Generator(base + suf, hh, (a,)))
                diffs[e][(base + "y1", base + "x1")] = Poly.const(field, 1, c)
                diffs[e][(base + "y2", base + "x2")] = Poly.const(field, 1, c)
                diag([base + suf for suf in ("y1", "x1", "y2", "x2")])
                couple(base + "x1", base + "x2")
                couple(base + "y1", base + "y2")
    return gens, diffs, mus, lones, jordans


def _add_crosses(rng, field, lones, crosses, need_equal):
    """Disjoint lone-to-lone crosses between comparable vertices.

    need_equal(src, tgt) gates eigenvalue compatibility, h must step by
    the vertex-weight difference plus `drop`, returned as sparse entry
    dicts keyed by vertex pair; consumed lone records are reported so
    the caller can adjust its homology oracle.
    """
    def attempt(drop, gate, used):
        cands = []
        for s in lones:
            for t in lones:
                ws, wt = sum(s[0]), sum(t[0])
                if s[0] == t[0] or not all(x <= y for x, y in
                                           zip(s[0], t[0])):
                    continue
                if (s[0], s[1]) in used or (t[0], t[1]) in used:
                    continue
                if t[3] != s[3] + (wt - ws) + drop or t[4] != s[4]:
                    continue
                if not gate(s, t):
                    continue
                cands.append((s, t))
        if not cands:
            return None
        return cands[rng.randrange(len(cands))]

    used = set()
    mu_cross = {}
    d_cross = {}
    consumed = []
    for _ in range(crosses):
        hit = attempt(0, lambda s, t: need_equal(s, t, "mu"), used)
        if hit:
            s, t = hit
            used.update({(s[0], s[1]), (t[0], t[1])})
            mu_cross.setdefault((s[0], t[0]), {})[(t[1], s[1])] = \
                Poly.const(field, 1, random_scalar(rng, field, nonzero=True))
        hit = attempt(-1, lambda s, t: need_equal(s, t, "d"), used)
        if hit:
            s, t = hit
            used.update({(s[0], s[1]), (t[0], t[1])})
            d_cross.setdefault((s[0], t[0]), {})[(t[1], s[1])] = \
                Poly.const(field, 1, random_scalar(rng, field, nonzero=True))
            consumed.extend([s, t])
    return mu_cross, d_cross, used, consumed


def _assemble_operator_cube(rng, field, eps_list, gens, diffs, mus,
                            mu_cross_list, d_cross, steps):
    """Build, validate and jointly scramble the cube and its operators."""
    from floerkit.hypercubes import CubeMorphism, Hypercube

    verts = {e: FreeComplex(field, 1, gens[e], diffs[e]) for e in eps_list}
    cube0 = Hypercube(verts, d_cross)
    assert cube0.validate().ok
    ops0 = []
    for k, vmu in enumerate(mus):
        comps = {(e, e): dict(vmu[e]) for e in eps_list if vmu[e]}
        for key, block in mu_cross_list[k].items():
            comps.setdefault(key, {}).update(block)
        op = CubeMorphism(cube0, cube0, comps)
        assert op.gradings_ok() and op.is_cycle()
        ops0.append(op)
    tot = cube0.total()
    home = {g.name: cube0.split_total_name(g.name)[0]
            for g in tot.generators}
    dmat = dict(tot.diff)
    op_mats = [dict(op.total().matrix) for op in ops0]
    if steps is None:
        steps = 3 * len(tot.generators)
    _apply_transvections(rng, field, 1, tot.generators, home,
                         [dmat] + op_mats, steps)
    cube = _rebuild_cube(cube0, dmat)
    assert cube.validate().ok
    ops = []
    for m in op_mats:
        op = CubeMorphism(cube, cube, _split_components(cube, m))
        assert op.gradings_ok() and op.is_cycle()
        ops.append(op)
    return cube, ops


def random_operator_cube(rng, field, dim, lams, max_cells=2, crosses=2,
                         steps=None):
    """Scrambled cube and operator with eigen data known by construction.

    Cells are lone generators (each one surviving homology class with a
    single eigenvalue), cancelling pairs, and both again with a Jordan
    coupling.  Lone-to-lone crosses are added next: in the operator
    between any eigenvalues, in the differential between equal ones
    (consuming the two classes); every generator is used at most once,
    so no length-two products appear and the bookkeeping stays exact.
    Cube and operator are then conjugated by the same random filtered
    transvections.

    Returns (cube, mu, info) where info carries
      vertex_dims    {(lam, e): dim of the vertex generalized eigenspace}
      vertex_tables  {(lam, e): eigen homology table of that vertex}
      total_tables   {lam: homology table of the total eigen complex}
      free_lones     [(e, name, lam, h, a)] lones untouched by crosses
    """
    import itertools

    eps_list = list(itertools.product((0, 1), repeat=dim))

    def pick(rng_, peek=False):
        if peek:
            return (None,)
        return (lams[rng_.randrange(len(lams))],)

    gens, diffs, mus, lones, jordans = _operator_cells(
        rng, field, eps_list, pick, max_cells)
    mu_cross, d_cross, used, consumed = _add_crosses(
        rng, field, lones, crosses,
        lambda s, t, kind: kind == "mu" or s[2] == t[2])
    cube, (mu,) = _assemble_operator_cube(
        rng, field, eps_list, gens, diffs, mus, [mu_cross], d_cross, steps)

    vertex_dims = {}
    vertex_tables = {}
    total = {}
    for (e, name, (lam,), h, a) in lones:
        _bump(vertex_dims, (lam, e))
        _bump(vertex_tables.setdefault((lam, e), {}), (h, (a,)))
    for (e, (lam,), h, a) in jordans:
        _bump(vertex_dims, (lam, e), 2)
        _bump(vertex_tables.setdefault((lam, e), {}), (h, (a,)), 2)
    # pairs contribute to eigenspace dimension but not to homology
    for e in eps_list:
        for (t, s) in diffs[e]:
            src_mu = mus[0][e][(s, s)].constant_term()
            _bump(vertex_dims, (src_mu, e), 2)
    for (e, name, (lam,), h, a) in lones:
        _bump(total.setdefault(lam, {}), (h - sum(e), (a,)))
    for (e, (lam,), h, a) in jordans:
        _bump(total.setdefault(lam, {}), (h - sum(e), (a,)), 2)
    for (e, name, (lam,), h, a) in consumed:
        total[lam][(h - sum(e), (a,))] -= 1
    total = {lam: {k: v for k, v in tab.items() if v}
             for lam, tab in total.items()}
    info = {"vertex_dims": vertex_dims,
            "vertex_tables": vertex_tables,
            "total_tables": total,
            "free_lones": [(e, name, lam, h, a)
                           for (e, name, (lam,), h, a) in lones
                           if (e, name) not in used]}
    return cube, mu, info


def random_commuting_operator_pair(rng, field, dim, pairs, max_cells=2,
                                   crosses=2, steps=None):
    """Cube with two exactly commuting operators and known joint data.

    `pairs` lists the (lam, lam2) eigenvalue tuples cells may take; the
    two operators share each Jordan coupling up to a scalar, so they
    commute on the nose.  Crosses: operator-one crosses need equal
    second eigenvalues, differential crosses need both equal.

    Returns (cube, mu, mu2, info); info carries
      pair_tables       {(lam, lam2): total homology of the joint piece}
      pair_vertex_dims  {(lam, lam2, e): joint eigenspace dimension}
    """
    import itertools

    eps_list = list(itertools.product((0, 1), repeat=dim))

    def pick(rng_, peek=False):
        if peek:
            return (None, None)
        return pairs[rng_.randrange(len(pairs))]

    gens, diffs, mus, lones, jordans = _operator_cells(
        rng, field, eps_list, pick, max_cells)

    def gate(s, t, kind):
        if kind == "mu":
            return s[2][1] == t[2][1]
        return s[2] == t[2]

    mu_cross, d_cross, used, consumed = _add_crosses(
        rng, field, lones, crosses, gate)
    cube, (mu, mu2) = _assemble_operator_cube(
        rng, field, eps_list, gens, diffs, mus,
        [mu_cross, {}], d_cross, steps)

    pair_tables = {}
    pair_vertex_dims = {}
    for (e, name, lams, h, a) in lones:
        _bump(pair_vertex_dims, (lams[0], lams[1], e))
        _bump(pair_tables.setdefault(tuple(lams), {}), (h - sum(e), (a,)))
    for (e, lams, h, a) in jordans:
        _bump(pair_vertex_dims, (lams[0], lams[1], e), 2)
        _bump(pair_tables.setdefault(tuple(lams), {}), (h - sum(e), (a,)), 2)
    for e in eps_list:
        # cancelling pairs sit in the joint eigenspace without homology
        for (t, s) in diffs[e]:
            l1 = mus[0][e][(s, s)].constant_term()
            l2 = mus[1][e][(s, s)].constant_term()
            _bump(pair_vertex_dims, (l1, l2, e), 2)
    for (e, name, lams, h, a) in consumed:
        pair_tables[tuple(lams)][(h - sum(e), (a,))] -= 1
    pair_tables = {key: {k: v for k, v in tab.items() if v}
                   for key, tab in pair_tables.items()}
    info = {"pair_tables": pair_tables,
            "pair_vertex_dims": pair_vertex_dims}
    return cube, mu, mu2, info


def random_cube_homotopy(rng, cube, grading=1, density=0.3, strict=False):
    """A random constant filtered CubeMorphism of the given grading.

    With strict=True the diagonal blocks stay zero, so a perturbation
    by its boundary leaves every vertex operator alone.
    """
    from floerkit.hypercubes import CubeMorphism

    field = cube.field
    comps = {}
    eps_list = sorted(cube.vertices)
    for a in eps_list:
        for b in eps_list:
            if not all(x <= y for x, y in zip(a, b)):
                continue
            if strict and a == b:
                continue
            step = grading + sum(b) - sum(a)
            block = {}
            for gs in cube.vertices[a].generators:
                for gt in cube.vertices[b].generators:
                    if (gt.h == gs.h + step and gt.alex == gs.alex
                            and rng.random() < density):
                        c = random_scalar(rng, field)
                        if not field.is_zero(c):
                            block[(gt.name, gs.name)] = Poly.const(
                                field, cube.arity, c)
            if block:
                comps[(a, b)] = block
    out = CubeMorphism(cube, cube, comps, grading=grading)
    assert out.gradings_ok()
    return out


def random_plain_operator(rng, field, lams, max_cells=3,
                          h_range=(-1, 1), a_range=(-1, 1)):
    """A plain complex and commuting endomorphism with known eigen data.

    Same cell menu as the cube builder, no crosses; complex and
    operator are conjugated together.  Returns (cx, mu, info) with
    info = {"tables": {lam: eigen homology table}, "dims": {lam: n}}.
    """
    from floerkit.complexes import ChainMap

    gens, diffs, mus, lones, jordans = _operator_cells(
        rng, field, [()], lambda r, peek=False: (
            (None,) if peek else (lams[r.randrange(len(lams))],)),
        max_cells, h_range=h_range, a_range=a_range)
    cx0 = FreeComplex(field, 1, gens[()], diffs[()])
    assert cx0.validate().ok
    mu_entries = dict(mus[0][()])
    home = {g.name: () for g in cx0.generators}
    dmat = dict(cx0.diff)
    mmat = dict(mu_entries)
    _apply_transvections(rng, field, 1, cx0.generators, home, [dmat, mmat],
                         3 * len(cx0.generators))
    cx = FreeComplex(field, 1, [Generator(g.name, g.h, g.alex)
                                for g in cx0.generators], dmat)
    assert cx.validate().ok
    mu = ChainMap(cx, cx, mmat)
    assert mu.gradings_ok() and mu.is_cycle()
    tables = {}
    dims = {}
    for (e, name, (lam,), h, a) in lones:
        _bump(tables.setdefault(lam, {}), (h, (a,)))
        _bump(dims, lam)
    for (e, (lam,), h, a) in jordans:
        _bump(tables.setdefault(lam, {}), (h, (a,)), 2)
        _bump(dims, lam, 2)
    for e in [()]:
        for (t, s) in diffs[e]:
            _bump(dims, mus[0][e][(s, s)].constant_term(), 2)
    return cx, mu, {"tables": tables, "dims": dims}


def random_mukom_cycle(rng, cx0, mu0, cx1, mu1, tries=4):
    """A random cycle (f, h) between two operator pairs, by linear solve.

    f is a grading-preserving chain map, h raises h by one, and
    f . mu0 - mu1 . f equals the boundary of h; the full space of such
    pairs is the kernel of one linear system, and a random combination
    of its basis is returned (possibly zero if the space is trivial).
    """
    from floerkit import linalg
    from floerkit.complexes import ChainMap

    field = cx0.field

    def const(m, t, s):
        p = m.get((t, s))
        return p.constant_term() if p is not None else field.zero

    fslots = [(t.name, u.name) for u in cx0.generators
              for t in cx1.generators
              if t.h == u.h and t.alex == u.alex]
    hslots = [(t.name, u.name) for u in cx0.generators
              for t in cx1.generators
              if t.h == u.h + 1 and t.alex == u.alex]
    col = {("f",) + s: j for j, s in enumerate(fslots)}
    for j, s in enumerate(hslots):
        col[("h",) + s] = len(fslots) + j
    ncols = len(fslots) + len(hslots)
    rows = []
    # chain map: d1 . f - f . d0 = 0 on h-step -1 cells
    for u in cx0.generators:
        for t in cx1.generators:
            if t.h != u.h - 1 or t.alex != u.alex:
                continue
            row = [field.zero] * ncols
            for (m, un) in fslots:
                if un == u.name:
                    c = const(cx1.diff, t.name, m)
                    if not field.is_zero(c):
                        j = col[("f", m, un)]
                        row[j] = field.add(row[j], c)
            for (tn, m) in fslots:
                if tn == t.name:
                    c = field.neg(const(cx0.diff, m, u.name))
                    if not field.is_zero(c):
                        j = col[("f", tn, m)]
                        row[j] = field.add(row[j], c)
            if any(not field.is_zero(x) for x in row):
                rows.append(row)
    # commutator: f . mu0 - mu1 . f - d1 . h - h . d0 = 0 on h-step 0 cells
    for u in cx0.generators:
        for t in cx1.generators:
            if t.h != u.h or t.alex != u.alex:
                continue
            row = [field.zero] * ncols
            for (tn, m) in fslots:
                if tn == t.name:
                    c = const(mu0.matrix, m, u.name)
                    if not field.is_zero(c):
                        j = col[("f", tn, m)]
                        row[j] = field.add(row[j], c)
            for (m, un) in fslots:
                if un == u.name:
                    c = field.neg(const(mu1.matrix, t.name, m))
                    if not field.is_zero(c):
                        j = col[("f", m, un)]
                        row[j] = field.add(row[j], c)
            for (m, un) in hslots:
                if un == u.name:
                    c = field.neg(const(cx1.diff, t.name, m))
                    if not field.is_zero(c):
                        j = col[("h", m, un)]
                        row[j] = field.add(row[j], c)
            for (tn, m) in hslots:
                if tn == t.name:
                    c = field.neg(const(cx0.diff, m, u.name))
                    if not field.is_zero(c):
                        j = col[("h", tn, m)]
                        row[j] = field.add(row[j], c)
            if any(not field.is_zero(x) for x in row):
                rows.append(row)
    basis = linalg.nullspace(field, rows, ncols) if rows else \
        [[field.one if i == j else field.zero for i in range(ncols)]
         for j in range(ncols)]
    fmat, hmat = {}, {}
    for _ in range(tries):
        vec = [field.zero] * ncols
        hit = False
        for b in basis:
            c = random_scalar(rng, field)
            if field.is_zero(c):
                continue
            hit = True
            vec = [field.add(x, field.mul(c, y)) for x, y in zip(vec, b)]
        if hit and any(not field.is_zero(x) for x in vec):
            fmat = {s: Poly.const(field, cx0.arity, vec[col[("f",) + s]])
                    for s in fslots
                    if not field.is_zero(vec[col[("f",) + s]])}
            hmat = {s: Poly.const(field, cx0.arity, vec[col[("h",) + s]])
                    for s in hslots
                    if not field.is_zero(vec[col[("h",) + s]])}
            break
    f = ChainMap(cx0, cx1, fmat)
    h = ChainMap(cx0, cx1, hmat, h_shift=1)
    return f, h


FIELDS_ALL = (F2, QQ, QI)
