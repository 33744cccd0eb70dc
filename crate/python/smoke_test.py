"""Smoke test for the petalknot extension module."""

import json

import petalknot as pk


def main():
    tre = pk.PetalPermutation.parse("(1,3,5,2,4)")
    assert tre.p == 5 and tre.is_extremal()
    pd = tre.reduced_diagram()
    assert pd.crossing_count() == 3
    f = pd.fingerprint()
    assert f.determinant == 3
    assert f.alexander == [(-1, 1), (0, -1), (1, 1)]
    assert f.identify() in ("3_1", "m3_1")
    assert f.mirror().identify() != f.identify()
    assert tre.unknotting_cost() == pk.unknotting_bound(5) == 1

    d = tre.diagram()
    assert d.resolve(seed=7).fingerprint() == d.resolve().fingerprint() == f
    pre = d.unfold_top()
    granny = pre.compose(pre)
    assert granny.n == 6 and granny.fingerprint().determinant == 9

    fig7 = pk.PetalPermutation([1, 4, 5, 3, 7, 2, 6])
    assert fig7.remove_trivial_petal(fig7.trivial_petals()[0]) == tre

    assert len(pk.enumerate_classes(5)) == 8
    table = json.loads(pk.classify(5))
    assert {r["knot"] for r in table["rows"]} == {"0_1", "3_1", "m3_1"}

    try:
        pk.PetalPermutation([1, 2, 3, 4])
    except ValueError:
        pass
    else:
        raise AssertionError("even length accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
