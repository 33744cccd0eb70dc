//! One pass/fail line per acceptance criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use petalknot::invariants::{alexander, fingerprint, Fingerprint};
use petalknot::resolve::{resolve, reverse_petal_diagram, PerturbationSchedule};
use petalknot::simplify::petal_reduced_diagram;
use petalknot::tablekit::{check_bridge_bound, classify, enumerate_classes, KnotTable};
use petalknot::unknot::{unknotting_bound, unknotting_sequence};
use petalknot::{
    resolve_default, torus_permutation, Handedness, LaurentPolynomial, PetalPermutation, UbercrossingDiagram,
};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Check {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn all_permutations(p: usize) -> Vec<PetalPermutation> {
    fn rec(k: usize, v: &mut Vec<u32>, out: &mut Vec<PetalPermutation>) {
        if k == v.len() {
            out.push(PetalPermutation::new(v.clone()).unwrap());
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            rec(k + 1, v, out);
            v.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(0, &mut (1..=p as u32).collect(), &mut out);
    out
}

/// `(t^(r(r+1)) - 1)(t - 1) / ((t^r - 1)(t^(r+1) - 1))`, centred.
fn torus_alexander(r: i64) -> LaurentPolynomial {
    let binom = |k: i64| LaurentPolynomial::from_terms([(k, 1), (0, -1)]);
    let num = &binom(r * (r + 1)) * &binom(1);
    let den = &binom(r) * &binom(r + 1);
    num.div_exact(&den).unwrap().shift(-r * (r - 1) / 2)
}

fn pre_petal(sigma: &PetalPermutation) -> UbercrossingDiagram {
    UbercrossingDiagram::from_petal(sigma).unfold_top().unwrap()
}

fn fp(d: &UbercrossingDiagram) -> Fingerprint {
    fingerprint(&petalknot::simplify::diagram_pd(d).unwrap()).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for r in 2..=4u32 {
        let sigma = torus_permutation(r).unwrap();
        let p = sigma.p();
        let pd = petal_reduced_diagram(&sigma).map_err(|e| e.to_string())?;
        let want = (p * p - 2 * p - 3) / 4;
        ensure(want == (r * r - 1) as usize, || format!("count formula disagrees at r={r}"))?;
        ensure(pd.crossing_count() == want, || format!("r={r}: {} crossings, want {want}", pd.crossing_count()))?;
        let a = alexander(&pd).map_err(|e| e.to_string())?;
        ensure(a == torus_alexander(r as i64), || format!("r={r}: Alexander {a}"))?;
        let cert = unknotting_sequence(&sigma);
        cert.verify().map_err(|e| e.to_string())?;
        let bound = unknotting_bound(p).unwrap();
        ensure(cert.total_cost as usize == bound && bound == (r * (r - 1) / 2) as usize, || {
            format!("r={r}: cost {} bound {bound}", cert.total_cost)
        })?;
    }
    within(start, Duration::from_secs(10))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for p in [5, 7] {
        let bound = unknotting_bound(p).unwrap();
        for sigma in all_permutations(p) {
            let meets = unknotting_sequence(&sigma).total_cost as usize == bound;
            ensure(meets == sigma.is_extremal(), || format!("{sigma}: meets bound {meets}"))?;
        }
        let classes = enumerate_classes(p).unwrap();
        let extremal = classes.iter().filter(|s| s.is_extremal()).count();
        ensure(extremal == 2, || format!("p={p}: {extremal} extremal classes"))?;
    }
    within(start, Duration::from_secs(60))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let table = KnotTable::bundled();
    let c5 = classify(5, 24, &table).map_err(|e| e.to_string())?;
    let names: BTreeSet<String> = c5.rows.iter().map(|r| r.knot.clone().unwrap_or_else(|| "?".into())).collect();
    let want: BTreeSet<String> = ["0_1", "3_1", "m3_1"].iter().map(|s| s.to_string()).collect();
    ensure(names == want, || format!("p=5 knots {names:?}"))?;
    for name in ["3_1", "m3_1"] {
        let n: usize = c5.rows_named(name).iter().map(|r| r.class_count).sum();
        ensure(n == 1, || format!("p=5: {name} in {n} classes"))?;
    }
    let c7 = classify(7, 24, &table).map_err(|e| e.to_string())?;
    let count = |name: &str| -> usize { c7.rows_named(name).iter().map(|r| r.class_count).sum() };
    ensure(count("8_19") + count("m8_19") == 2 && count("8_19") == 1, || "p=7: 8_19 class count".into())?;
    ensure(count("5_1") + count("m5_1") > 0, || "p=7: no 5_1".into())?;
    ensure(count("4_1") > 0, || "p=7: no 4_1".into())?;
    within(start, Duration::from_secs(300))
}

struct Compositions {
    granny: UbercrossingDiagram,
    square: UbercrossingDiagram,
    triple: UbercrossingDiagram,
}

fn compositions() -> Compositions {
    let t = torus_permutation(2).unwrap();
    let right = pre_petal(&t);
    let left = pre_petal(&t.mirror());
    let granny = right.compose_simple(&right).unwrap();
    let square = right.compose_simple(&left).unwrap();
    let triple = granny.compose_simple(&right).unwrap();
    Compositions { granny, square, triple }
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let c = compositions();
    let t = LaurentPolynomial::from_terms([(-1, 1), (0, -1), (1, 1)]);
    let trefoil = fp(&pre_petal(&torus_permutation(2).unwrap()));
    for (name, d, other) in [("granny", &c.granny, trefoil.clone()), ("square", &c.square, trefoil.mirror())] {
        ensure(d.n() == 6, || format!("{name}: {} strands", d.n()))?;
        let f = fp(d);
        ensure(f.determinant == 9, || format!("{name}: determinant {}", f.determinant))?;
        ensure(f.alexander == &t * &t, || format!("{name}: Alexander {}", f.alexander))?;
        ensure(f == trefoil.compose(&other), || format!("{name}: fingerprint is not the product"))?;
        let hands: BTreeSet<_> = d.ribbons().iter().map(|r| r.handedness == Handedness::Left).collect();
        ensure(hands.len() == 2, || format!("{name}: ribbons of one handedness only"))?;
    }
    ensure(fp(&c.granny) != fp(&c.square), || "granny and square agree".into())?;
    ensure(c.triple.n() == 8, || format!("triple: {} strands", c.triple.n()))?;
    ensure(fp(&c.triple) == trefoil.compose(&trefoil).compose(&trefoil), || "triple fingerprint".into())?;
    within(start, Duration::from_secs(10))
}

fn criterion_5() -> Check {
    let table = KnotTable::bundled();
    let bound = |d: &UbercrossingDiagram, name: &str, equal: bool| -> Check {
        let rec = table.get(name).ok_or_else(|| format!("{name} missing from table"))?;
        let ok = check_bridge_bound(d, rec).map_err(|e| format!("{name}: {e}"))?;
        ensure(ok, || format!("{name}: {} strands below 2b", d.n()))?;
        ensure(!equal || d.n() == 2 * rec.bridge_number as usize, || format!("{name}: {} strands, not 2b", d.n()))
    };
    for (r, name) in [(2, "3_1"), (3, "8_19"), (4, "T(4,5)")] {
        let sigma = torus_permutation(r).unwrap();
        bound(&UbercrossingDiagram::from_petal(&sigma), name, false)?;
        bound(&pre_petal(&sigma), name, true)?;
        bound(&pre_petal(&sigma.mirror()), name, true)?;
    }
    let c = compositions();
    bound(&c.granny, "3_1#3_1", true)?;
    bound(&c.square, "3_1#m3_1", true)
}

fn members(sigma: &PetalPermutation) -> Vec<PetalPermutation> {
    let p = sigma.p();
    let mut out = Vec::new();
    for k in 0..p {
        for h in 0..p as u32 {
            out.push(sigma.rotate(k).cycle_heights(h));
        }
    }
    out
}

fn criterion_6() -> Check {
    let start = Instant::now();
    for p in [3, 5, 7] {
        for sigma in enumerate_classes(p).unwrap() {
            let d = UbercrossingDiagram::from_petal(&sigma);
            let base = fingerprint(&resolve_default(&d).unwrap()).map_err(|e| e.to_string())?;
            let same = |label: &str, f: Fingerprint| ensure(f == base, || format!("{sigma}: {label} differs"));
            for seed in 0..3 {
                let pd = resolve(&d, &PerturbationSchedule::seeded(p, seed)).map_err(|e| e.to_string())?;
                same("seeded schedule", fingerprint(&pd).unwrap())?;
            }
            for m in members(&sigma) {
                ensure(m.equivalent(&sigma), || format!("{m} is not equivalent to {sigma}"))?;
                let pd = resolve_default(&UbercrossingDiagram::from_petal(&m)).unwrap();
                same("class member", fingerprint(&pd).unwrap())?;
            }
            same("reverse petal", fingerprint(&reverse_petal_diagram(&sigma).unwrap()).unwrap())?;
            same("reduced petal", fingerprint(&petal_reduced_diagram(&sigma).unwrap()).unwrap())?;
            for (target, slot, hand) in [(0, 1, Handedness::Left), (1, p as u32 + 1, Handedness::Right)] {
                let grown = d.add_trivial_petal(target, slot, hand).map_err(|e| e.to_string())?;
                same("added petal", fingerprint(&resolve_default(&grown).unwrap()).unwrap())?;
                let loop_at = grown
                    .ribbons()
                    .into_iter()
                    .find(|r| grown.heights()[r.strands.0].abs_diff(grown.heights()[r.strands.1]) == 1)
                    .ok_or_else(|| format!("{sigma}: no trivial loop after adding a petal"))?;
                let shrunk = grown.remove_trivial_loop(loop_at.arc.0).map_err(|e| e.to_string())?;
                same("removed loop", fingerprint(&resolve_default(&shrunk).unwrap()).unwrap())?;
            }
        }
    }
    within(start, Duration::from_secs(600))
}

fn criterion_7() -> Check {
    let table = KnotTable::bundled();
    let sigma = PetalPermutation::parse("(1,4,5,3,7,2,6)").unwrap();
    let i = *sigma.trivial_petals().first().ok_or("no trivial petal")?;
    let reduced = sigma.remove_trivial_petal(i).map_err(|e| e.to_string())?;
    ensure(reduced == PetalPermutation::parse("(1,3,5,2,4)").unwrap(), || format!("removal gives {reduced}"))?;
    for s in [&sigma, &reduced] {
        let f = fingerprint(&petal_reduced_diagram(s).unwrap()).unwrap();
        let id = table.identify(&f).ok_or_else(|| format!("{s} not identified"))?;
        ensure(id.record.name == "3_1", || format!("{s} identified as {}", id.name()))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("torus identities", criterion_1),
        ("extremal characterization", criterion_2),
        ("census", criterion_3),
        ("composition", criterion_4),
        ("bridge bound", criterion_5),
        ("oracle coherence", criterion_6),
        ("trivial petal regression", criterion_7),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {}: PASS {name}", k + 1),
            Err(e) => {
                println!("criterion {}: FAIL {name}: {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
