#!/usr/bin/env python3
"""Build the bundled model data files under src/floerkit/data/.

Standalone on purpose: this script must not import the package. The models
are small graded modules presented through truncation windows. Gradings
follow h(U) = 0 and A(U_i) = -1 in the i-th slot. Knot files store raw
Alexander gradings (the loader adds the framing shift); link files store
already-shifted gradings.

Run this before make_oracles.py, which appends frozen oracle tables.
"""
import json
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "floerkit" / "data"


def tau_knot(n):
    return 1 if n % 2 == 0 else 0


def sigma_knot(n):
    # -(n - 1 + tau)/2, always an integer
    return -((n - 1 + tau_knot(n)) // 2)


def tau_link(nvec):
    r = len(nvec)
    return 0 if (sum(nvec) + r - 1) % 2 == 1 else 1


def sigma_link(nvec):
    r = len(nvec)
    t = tau_link(nvec)
    if t == 0:
        return -((sum(nvec) + r - 2) // 2) + (r - 1)
    return -((sum(nvec) + r - 1) // 2) + (r - 1)


# ---------------------------------------------------------------------------
# knot models
#
# A model is a graded k[U]-module given by summands:
#   ("free", g, h, a)         tower with basis g{e} at (h, a - e), e >= 0
#   ("tors", g, h, a, order)  basis g{e} at (h, a - e), 0 <= e < order
# The framing-n group keeps the basis elements with A >= -n-1.
# ---------------------------------------------------------------------------

def knot_basis(summands, n):
    out = []
    for s in summands:
        if s[0] == "free":
            _, g, h, a = s
            e = 0
            while a - e >= -n - 1:
                out.append(("%s%d" % (g, e), h, a - e))
                e += 1
        else:
            _, g, h, a, order = s
            for e in range(order):
                if a - e >= -n - 1:
                    out.append(("%s%d" % (g, e), h, a - e))
    return out


def knot_file(name, field, summands, window, genus):
    lo, hi = window
    groups = {}
    sfh = {}
    for n in range(lo, hi + 1):
        basis = knot_basis(summands, n)
        shift = sigma_knot(n)
        groups[str(n)] = {"generators": [
            {"name": g, "h": h, "alex": [a - shift]} for (g, h, a) in basis]}
        sfh[str(n)] = len(basis)
    phi_plus = {}
    phi_minus = {}
    for n in range(lo, hi):
        basis = knot_basis(summands, n)
        plus = [[g, g, "1"] for (g, _, _) in basis]
        minus = []
        for s in summands:
            if s[0] == "free":
                _, g, h, a = s
                e = 0
                while a - e >= -n - 1:
                    minus.append(["%s%d" % (g, e), "%s%d" % (g, e + 1), "1"])
                    e += 1
            else:
                _, g, h, a, order = s
                for e in range(order):
                    if a - e >= -n - 1 and e + 1 < order:
                        minus.append(["%s%d" % (g, e), "%s%d" % (g, e + 1), "1"])
        phi_plus[str(n)] = plus
        phi_minus[str(n)] = minus
    return {
        "format": "knot-model",
        "name": name,
        "field": field,
        "components": 1,
        "window": [lo, hi],
        "genus": genus,
        "shift_applied": False,
        "groups": groups,
        "phi_plus": phi_plus,
        "phi_minus": phi_minus,
        "homotopies": {},
        "sfh_dims": sfh,
    }


KNOTS = {
    "unknot": ("F2", [("free", "x", 0, 0)], 0),
    "trefoil_rh": ("F2", [("tors", "a", -2, 1, 1), ("free", "c", 0, -1)], 1),
    "trefoil_lh": ("F2", [("tors", "b", 1, 0, 1), ("free", "c", 0, 1)], 1),
    "figure_eight": ("F2", [("free", "x", 0, 0), ("tors", "t", -1, 1, 1),
                            ("tors", "s", 0, 0, 1)], 1),
    "trefoil_rh_q": ("Q", [("tors", "a", -2, 1, 1), ("free", "c", 0, -1)], 1),
}


# ---------------------------------------------------------------------------
# link models (two components)
#
#   ("free", g, h, (a1, a2))   basis g.e1.e2 at (h, a1-e1, a2-e2)
#   ("tors", g, h, (a1, a2))   single class killed by U1 and U2
# The group at (n1, n2) keeps elements with a_i >= -n_i - 1.
# ---------------------------------------------------------------------------

def link_basis(summands, nvec):
    n1, n2 = nvec
    out = []
    for s in summands:
        kind, g, h, (a1, a2) = s
        if kind == "free":
            for e1 in range(a1 + n1 + 2):
                for e2 in range(a2 + n2 + 2):
                    out.append(("%s.%d.%d" % (g, e1, e2), h, a1 - e1, a2 - e2))
        else:
            if a1 >= -n1 - 1 and a2 >= -n2 - 1:
                out.append(("%s.0.0" % g, h, a1, a2))
    return out


def link_file(name, field, summands, window):
    lo, hi = window
    squares = [(n1, n2) for n1 in range(lo, hi + 1) for n2 in range(lo, hi + 1)]
    groups = {}
    shifts = {}
    for nv in squares:
        key = "%d,%d" % nv
        basis = link_basis(summands, nv)
        groups[key] = {"generators": [
            {"name": g, "h": h, "alex": [a1, a2]} for (g, h, a1, a2) in basis]}
        shifts[key] = [tau_link(nv), sigma_link(nv)]
    phi_plus = {"1": {}, "2": {}}
    phi_minus = {"1": {}, "2": {}}
    for nv in squares:
        key = "%d,%d" % nv
        basis = link_basis(summands, nv)
        for comp in (1, 2):
            step = (1, 0) if comp == 1 else (0, 1)
            tgt = (nv[0] + step[0], nv[1] + step[1])
            if tgt[0] > hi or tgt[1] > hi:
                continue
            tgt_names = set(g for (g, _, _, _) in link_basis(summands, tgt))
            plus = [[g, g, "1"] for (g, _, _, _) in basis]
            minus = []
            for (g, h, a1, a2) in basis:
                stem, e1, e2 = g.rsplit(".", 2)[0], *map(int, g.split(".")[1:])
                img = "%s.%d.%d" % (stem, e1 + step[0], e2 + step[1])
                if img in tgt_names:
                    minus.append([g, img, "1"])
            phi_plus[str(comp)][key] = plus
            phi_minus[str(comp)][key] = minus
    return {
        "format": "link-model",
        "name": name,
        "field": field,
        "components": 2,
        "window": [[lo, hi], [lo, hi]],
        "shift_applied": True,
        "shift_values": shifts,
        "groups": groups,
        "phi_plus": phi_plus,
        "phi_minus": phi_minus,
        "square_homotopies": {},
    }


LINKS = {
    "unlink2": ("F2", [("free", "x", 0, (0, 0)), ("free", "y", -1, (0, 0))]),
    "hopf": ("F2", [("free", "x", 0, (0, 0)), ("free", "y", -2, (-1, -1)),
                    ("tors", "t1", -1, (-1, 0)), ("tors", "t2", -1, (0, -1))]),
}


# ---------------------------------------------------------------------------
# small standalone complexes and the bordered A-side data
# ---------------------------------------------------------------------------

def complex_files():
    unknot_cx = {
        "format": "complex",
        "field": "F2",
        "arity": 1,
        "grading": "Z",
        "generators": [{"name": "x0", "h": 0, "alex": [0]}],
        "differential": [],
    }
    stair = {
        "format": "complex",
        "field": "F2",
        "arity": 1,
        "grading": "Z",
        "generators": [
            {"name": "a", "h": 2, "alex": [-1]},
            {"name": "b", "h": 1, "alex": [0]},
            {"name": "c", "h": 0, "alex": [1]},
        ],
        "differential": [["a", "b", [[[1], "1"]]]],
    }
    stair_q = json.loads(json.dumps(stair))
    stair_q["field"] = "Q"
    return {"unknot.cx.json": unknot_cx,
            "trefoil_staircase.cx.json": stair,
            "trefoil_staircase_q.cx.json": stair_q}


def bordered_file():
    # A-side data for the trefoil complement. Synthetic: valid A-infinity
    # tables whose pairings with the framing-0 and framing-1 solid torus
    # modules have homology dimensions 2 and 3, matching the knot file.
    gens = [{"name": "x1", "iota": 1}, {"name": "x2", "iota": 1},
            {"name": "x3", "iota": 1}, {"name": "x4", "iota": 1},
            {"name": "z1", "iota": 2}]
    actions = [
        ["x3", [], "x4", 0, "1"],
        ["x1", ["r1", "r2"], "x2", 0, "1"],
    ]
    reduced = {
        "type": "A", "k_max": 3,
        "generators": [{"name": "x1", "iota": 1}, {"name": "x2", "iota": 1},
                       {"name": "z1", "iota": 2}],
        "actions": [["x1", ["r1", "r2"], "x2", 0, "1"]],
    }
    return {
        "format": "bordered",
        "field": "F2",
        "modules": {
            "cfa_trefoil": {"type": "A", "k_max": 3,
                            "generators": gens, "actions": actions},
            "cfa_trefoil_reduced": reduced,
        },
    }


def system_file():
    # Four one-vertex stages with maps u * Id, units chosen so that naive
    # composition is transitive only up to units. Used by the calibration
    # demo and tests.
    def space():
        return {
            "field": "Q", "arity": 1, "grading": "Z",
            "generators": [{"name": "e1", "h": 0, "alex": [0]},
                           {"name": "e2", "h": 0, "alex": [-1]}],
            "differential": [],
        }

    def scaled(u):
        return [["e1", "e1", u], ["e2", "e2", u]]

    return {
        "format": "system",
        "field": "Q",
        "index_start": 0,
        "spaces": [space(), space(), space(), space()],
        "maps": {
            "0->1": scaled("2"), "1->2": scaled("3"), "2->3": scaled("5"),
            "0->2": scaled("12"), "1->3": scaled("30"), "0->3": scaled("120"),
        },
    }


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, (field, summands, genus) in KNOTS.items():
        files[name + ".knot.json"] = knot_file(name, field, summands, (0, 4), genus)
    for name, (field, summands) in LINKS.items():
        files[name + ".link.json"] = link_file(name, field, summands, (0, 2))
    files.update(complex_files())
    files["cfa_trefoil.bord.json"] = bordered_file()
    files["calib_demo.sys.json"] = system_file()
    for fname, payload in sorted(files.items()):
        path = DATA / fname
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
        print("wrote %s" % path)


if __name__ == "__main__":
    main()
