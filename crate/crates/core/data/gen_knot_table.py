"""Regenerate knot_table.json from the KnotInfo database.

Requires the `database_knotinfo` package. Prime knots through 8 crossings
come straight from KnotInfo; the two trefoil composites and T(4,5) are
derived from KnotInfo values by the connected-sum product rule and the
torus-knot polynomial formulas respectively.
"""
import json
import sys

import sympy
from database_knotinfo import link_list

t = sympy.Symbol("t")


def laurent_terms(expr):
    expr = sympy.sympify(str(expr).replace("^", "**"), locals={"t": t})
    shifted = sympy.Poly(sympy.expand(expr * t**64), t)
    return {int(m[0]) - 64: int(c) for m, c in shifted.terms() if c != 0}


def symmetrize(terms):
    lo, hi = min(terms), max(terms)
    assert (lo + hi) % 2 == 0
    shift = (lo + hi) // 2
    out = {e - shift: c for e, c in terms.items()}
    if out[max(out)] < 0:
        out = {e: -c for e, c in out.items()}
    assert abs(sum(out.values())) == 1
    assert all(out.get(-e) == c for e, c in out.items())
    return out


def mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[ea + eb] = out.get(ea + eb, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def at_minus_one(terms):
    return abs(sum(c * (-1) ** abs(e) for e, c in terms.items()))


def poly_json(var, terms):
    return {"var": var, "terms": [[e, c] for e, c in sorted(terms.items())]}


def record(name, cn, bridge, unknot, chiral, alex, jones, provenance, pd=None):
    rec = {
        "name": name,
        "crossing_number": cn,
        "bridge_number": bridge,
        "unknotting_number": unknot,
        "chiral": chiral,
        "fingerprint": {
            "determinant": at_minus_one(alex),
            "alexander": poly_json("t", alex),
            # Jones exponents are stored as powers of t^(1/2)
            "jones": poly_json("t^1/2", {2 * e: c for e, c in jones.items()}),
        },
        "provenance": provenance,
    }
    if pd is not None:
        rec["pd"] = pd
    return rec


def torus_polys(p, q):
    alex_num = sympy.expand((t ** (p * q) - 1) * (t - 1))
    alex = sympy.cancel(alex_num / ((t**p - 1) * (t**q - 1)))
    jones = sympy.cancel(
        t ** ((p - 1) * (q - 1) // 2) * (1 - t ** (p + 1) - t ** (q + 1) + t ** (p + q)) / (1 - t**2)
    )
    return laurent_terms(str(sympy.expand(alex))), laurent_terms(str(sympy.expand(jones)))


def main(path):
    rows = {}
    for k in link_list()[1:]:
        cn = k["crossing_number"]
        if not cn.isdigit() or int(cn) > 8 or k["name"].startswith("L"):
            continue
        name = k["name"]
        if name == "0_1":
            alex, jones, pd = {0: 1}, {0: 1}, []
        else:
            alex = symmetrize(laurent_terms(k["alexander_polynomial"]))
            jones = laurent_terms(k["jones_polynomial"])
            pd = json.loads(k["pd_notation"])
        assert name == "0_1" or at_minus_one(alex) == int(k["determinant"])
        unknot = int(k["unknotting_number"]) if k["unknotting_number"] else 0
        chiral = "amphicheiral" not in k["symmetry_type"] and name != "0_1"
        rows[name] = record(
            name, int(cn), int(k["bridge_index"]), unknot, chiral, alex, jones, "KnotInfo", pd
        )

    tre = rows["3_1"]
    tre_alex = {e: c for e, c in tre["fingerprint"]["alexander"]["terms"]}
    tre_jones = {e // 2: c for e, c in tre["fingerprint"]["jones"]["terms"]}
    tre_mirror = {-e: c for e, c in tre_jones.items()}
    composites = [
        record("3_1#3_1", 6, 3, 2, True, mul(tre_alex, tre_alex), mul(tre_jones, tre_jones),
               "KnotInfo 3_1, connected-sum product rule; b by Schubert additivity"),
        record("3_1#m3_1", 6, 3, 2, False, mul(tre_alex, tre_alex), mul(tre_jones, tre_mirror),
               "KnotInfo 3_1, connected-sum product rule; b by Schubert additivity"),
    ]
    alex45, jones45 = torus_polys(4, 5)
    torus = [record("T(4,5)", 15, 4, 6, True, symmetrize(alex45), jones45,
                    "torus-knot formulas; c=q(p-1), b=min(p,q), u=(p-1)(q-1)/2")]

    # the torus formula must reproduce KnotInfo on the tabulated torus knots
    for name, (p, q) in {"3_1": (2, 3), "5_1": (2, 5), "7_1": (2, 7), "8_19": (3, 4)}.items():
        a, j = torus_polys(p, q)
        fp = rows[name]["fingerprint"]
        assert [[e, c] for e, c in sorted(symmetrize(a).items())] == fp["alexander"]["terms"], name
        assert [[2 * e, c] for e, c in sorted(j.items())] == fp["jones"]["terms"], name

    table = list(rows.values()) + composites + torus
    keys = set()
    for rec in table:
        j = tuple(map(tuple, rec["fingerprint"]["jones"]["terms"]))
        a = tuple(map(tuple, rec["fingerprint"]["alexander"]["terms"]))
        for jj in {j, tuple((-e, c) for e, c in reversed(j))}:
            assert (a, jj) not in keys, rec["name"]
        keys.add((a, j))
        if rec["chiral"]:
            keys.add((a, tuple((-e, c) for e, c in reversed(j))))
    with open(path, "w") as fh:
        json.dump(table, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "knot_table.json")
