//! Reduction of a petal diagram's PD towards `(p^2 - 2p - 3) / 4` crossings.
//!
//! The star resolution pushes neighbouring chords apart with alternating
//! signs, so the crossing of the two strands meeting at each petal sits
//! next to the petal and bounds a monogon. After those `p` kinks go, the
//! knot is the polygon through the petal tips, strand `t` running from tip
//! `t - 1` to tip `t`.
//!
//! Strand removal then lifts strands off the polygon from the top down.
//! A lifted strand is rerouted through the exterior of the circle around
//! the side holding fewer tips. A tip whose petal joins a lifted strand to
//! a strand still in the polygon has a vertical connector passing through
//! the rerouted strand's level, so the route dips into the disk around it,
//! crossing the polygon strand there. The exterior is drawn as a second
//! disk by inversion, which flips crossing signs.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pd::{GaussCode, Passage, PlanarDiagram};
use crate::petalperm::PetalPermutation;
use crate::resolve::{cross, max_offset, resolve_default, star, star_to_gauss, PerturbationSchedule, Point};
use crate::uberdiag::UbercrossingDiagram;

/// Combinatorial record of a star-resolved petal diagram and the
/// reduction steps applied to it.
#[derive(Clone, Debug, PartialEq)]
pub struct StarContext {
    pub sigma: PetalPermutation,
    /// Endpoint slot of the petal after strand `t`; the tip sits half a
    /// step clockwise of it.
    pub tip_slots: Vec<usize>,
    /// PD crossing id of the kink at each tip, while the kinks are present.
    pub tip_crossings: Vec<usize>,
    /// Strands crossed by each strand in traversal order, after the kinks
    /// are gone and before any strand is lifted.
    pub inner: Vec<Vec<usize>>,
    /// Strands from top to bottom.
    pub height_order: Vec<usize>,
    pub monogons_removed: bool,
    /// Strands lifted so far, in order.
    pub lifted: Vec<usize>,
}

impl StarContext {
    pub fn p(&self) -> usize {
        self.sigma.p()
    }

    /// Number of strand removal iterations in a full reduction.
    pub fn iterations(&self) -> usize {
        (self.p() - 3) / 2
    }
}

/// Crossing count after full reduction of a torus-type petal permutation.
pub fn reduced_crossing_bound(p: usize) -> usize {
    (p * p - 2 * p - 3) / 4
}

/// Star schedule for `p` strands scaled by `magnitude`: neighbours get
/// opposite pushes so each petal closes a monogon.
pub fn star_schedule(p: usize, magnitude: f64) -> PerturbationSchedule {
    let offsets = (0..p)
        .map(|k| {
            let m = magnitude + k as f64 * 1e-6;
            if k % 2 == 0 {
                -m
            } else {
                m
            }
        })
        .collect();
    PerturbationSchedule { offsets, tolerance: 1e-9 }
}

fn default_magnitude(p: usize) -> f64 {
    0.5 * max_offset(p)
}

/// Resolves `sigma` with the star schedule, returning the `C(p, 2)`-crossing
/// PD and its context.
pub fn star_resolve(sigma: &PetalPermutation) -> Result<(PlanarDiagram, StarContext)> {
    star_resolve_with(sigma, default_magnitude(sigma.p()))
}

pub fn star_resolve_with(sigma: &PetalPermutation, magnitude: f64) -> Result<(PlanarDiagram, StarContext)> {
    let p = sigma.p();
    if !(magnitude > 0.0 && magnitude + p as f64 * 1e-6 <= max_offset(p)) {
        return Err(Error::DegenerateSchedule(format!("star magnitude {magnitude} is out of range")));
    }
    let d = UbercrossingDiagram::from_petal(sigma);
    let sched = star_schedule(p, magnitude);
    let st = star(p, &sched)?;
    let (gauss, ids) = star_to_gauss(&d, &st);
    let mut tip_crossings = Vec::with_capacity(p);
    for t in 0..p {
        let pair = (t.min((t + 1) % p), t.max((t + 1) % p));
        let c = st.crossings.iter().position(|c| c.strands == pair).expect("every pair of chords crosses");
        tip_crossings.push(ids[c]);
    }
    // fails when the pushes land a tip crossing on the far side
    gauss.remove_kinks(&tip_crossings)?;
    let inner = strand_lists(&gauss, &tip_crossings, p);
    let mut height_order: Vec<usize> = (0..p).collect();
    height_order.sort_by_key(|&k| sigma.entries()[k]);
    let ctx = StarContext {
        sigma: sigma.clone(),
        tip_slots: tip_slots(&d),
        tip_crossings,
        inner,
        height_order,
        monogons_removed: false,
        lifted: Vec::new(),
    };
    Ok((gauss.to_pd(), ctx))
}

fn tip_slots(d: &UbercrossingDiagram) -> Vec<usize> {
    let m = 2 * d.n();
    d.traversal()
        .iter()
        .map(|&(_, exit)| {
            let q = d.partner(exit);
            if (exit + 1) % m == q {
                exit
            } else {
                q
            }
        })
        .collect()
}

/// The other strand at each passage of each strand, skipping `dead`.
fn strand_lists(gauss: &GaussCode, dead: &[usize], p: usize) -> Vec<Vec<usize>> {
    // the Gauss code lists strand 0's crossings first, then strand 1's, and so on;
    // each strand contributes p - 1 passages
    let mut owner = vec![Vec::new(); gauss.crossing_count()];
    for (k, pass) in gauss.passages().iter().enumerate() {
        owner[pass.crossing].push(k / (p - 1));
    }
    let mut lists = vec![Vec::new(); p];
    for (k, pass) in gauss.passages().iter().enumerate() {
        if dead.contains(&pass.crossing) {
            continue;
        }
        let me = k / (p - 1);
        let other = owner[pass.crossing].iter().copied().find(|&s| s != me).unwrap_or(me);
        lists[me].push(other);
    }
    lists
}

/// Removes the `p` petal kinks by Reidemeister I moves.
pub fn remove_monogons(pd: &PlanarDiagram, ctx: &StarContext) -> Result<(PlanarDiagram, StarContext)> {
    if ctx.monogons_removed {
        return Err(Error::Diagram("monogons were already removed".into()));
    }
    let p = ctx.p();
    if pd.crossing_count() != p * (p - 1) / 2 {
        return Err(Error::Diagram(format!("expected {} crossings, found {}", p * (p - 1) / 2, pd.crossing_count())));
    }
    let out = pd.gauss_code().remove_kinks(&ctx.tip_crossings)?.to_pd();
    let mut next = ctx.clone();
    next.monogons_removed = true;
    Ok((out, next))
}

/// Applies strand removal iteration `i` (counting from 1), lifting the
/// `i`-th highest strand off the tip polygon.
pub fn strand_removal(pd: &PlanarDiagram, ctx: &StarContext, i: usize) -> Result<(PlanarDiagram, StarContext)> {
    if !ctx.monogons_removed {
        return Err(Error::Diagram("strand removal needs the monogons removed first".into()));
    }
    if i != ctx.lifted.len() + 1 || i > ctx.iterations() {
        return Err(Error::Diagram(format!("strand removal iteration {i} is out of sequence")));
    }
    let model = TipModel::new(ctx);
    let before = model.render(&ctx.lifted)?;
    if before.crossing_count() != pd.crossing_count() {
        return Err(Error::Diagram("PD does not match the reduction context".into()));
    }
    let mut next = ctx.clone();
    next.lifted.push(ctx.height_order[i - 1]);
    let out = model.render(&next.lifted)?;
    Ok((out.to_pd(), next))
}

/// Crossing counts after the star resolution, kink removal and each
/// strand removal.
pub fn reduction_counts(sigma: &PetalPermutation) -> Result<Vec<usize>> {
    Ok(reduction_stages(sigma)?.iter().map(PlanarDiagram::crossing_count).collect())
}

/// Every intermediate PD of the reduction.
pub fn reduction_stages(sigma: &PetalPermutation) -> Result<Vec<PlanarDiagram>> {
    let (pd, ctx) = star_resolve(sigma)?;
    let (mut cur, mut ctx) = remove_monogons(&pd, &ctx)?;
    let mut stages = vec![pd, cur.clone()];
    for i in 1..=ctx.iterations() {
        (cur, ctx) = strand_removal(&cur, &ctx, i)?;
        stages.push(cur.clone());
    }
    Ok(stages)
}

/// The fully reduced PD of `sigma`.
pub fn petal_reduced_diagram(sigma: &PetalPermutation) -> Result<PlanarDiagram> {
    let (pd, ctx) = star_resolve(sigma)?;
    let (mut pd, mut ctx) = remove_monogons(&pd, &ctx)?;
    for i in 1..=ctx.iterations() {
        (pd, ctx) = strand_removal(&pd, &ctx, i)?;
    }
    Ok(pd)
}

/// The smallest PD available for `d`: the reduced petal diagram when `d`
/// is a petal or pre-petal diagram, otherwise the reduced resolution.
pub fn diagram_pd(d: &UbercrossingDiagram) -> Result<PlanarDiagram> {
    if let Some(sigma) = d.to_petal() {
        return petal_reduced_diagram(&sigma);
    }
    if d.nesting_arcs().len() == 1 {
        if let Some(sigma) = d.fold_top().ok().and_then(|f| f.to_petal()) {
            return petal_reduced_diagram(&sigma);
        }
    }
    Ok(resolve_default(d)?.reduce_r1_r2())
}

/// Generic Reidemeister I/II reduction.
pub fn reduce_r1_r2(pd: &PlanarDiagram) -> PlanarDiagram {
    pd.reduce_r1_r2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Disk {
    Inside,
    Outside,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    strand: usize,
    disk: Disk,
    from: f64,
    to: f64,
}

/// The tip polygon with some strands lifted into the exterior.
struct TipModel {
    p: usize,
    heights: Vec<u32>,
    tip_angle: Vec<f64>,
    tip_slot: Vec<usize>,
}

fn on_circle(theta: f64) -> Point {
    (theta.sin(), theta.cos())
}

impl TipModel {
    fn new(ctx: &StarContext) -> Self {
        let p = ctx.p();
        let step = PI / p as f64;
        TipModel {
            p,
            heights: ctx.sigma.entries().to_vec(),
            tip_angle: ctx.tip_slots.iter().map(|&s| (s as f64 + 0.5) * step).collect(),
            tip_slot: ctx.tip_slots.clone(),
        }
    }

    /// Tip `t` joins strands `t` and `t + 1`.
    fn tip_strands(&self, t: usize) -> (usize, usize) {
        (t, (t + 1) % self.p)
    }

    fn paths(&self, lifted: &[usize]) -> Vec<Vec<Segment>> {
        let p = self.p;
        let m = 2 * p;
        let prev = |t: usize| (t + p - 1) % p;
        let mut paths: Vec<Vec<Segment>> = (0..p)
            .map(|s| vec![Segment { strand: s, disk: Disk::Inside, from: self.tip_angle[prev(s)], to: self.tip_angle[s] }])
            .collect();
        let mut tip_at = vec![None; m];
        for (t, &slot) in self.tip_slot.iter().enumerate() {
            tip_at[slot] = Some(t);
        }
        let dodge = PI / p as f64 / (p as f64 + 1.0);
        for (idx, &s) in lifted.iter().enumerate() {
            let i = idx + 1;
            let before = &lifted[..idx];
            let (v, w) = (prev(s), s);
            let walk = |dir: isize| -> Vec<usize> {
                let mut out = Vec::new();
                let mut slot = self.tip_slot[v] as isize;
                loop {
                    slot = (slot + dir).rem_euclid(m as isize);
                    if slot as usize == self.tip_slot[w] {
                        return out;
                    }
                    if let Some(t) = tip_at[slot as usize] {
                        out.push(t);
                    }
                }
            };
            let (cw, ccw) = (walk(1), walk(-1));
            let (dir, side) = if cw.len() <= ccw.len() { (1.0, cw) } else { (-1.0, ccw) };
            let mut route = Vec::new();
            let mut at = self.tip_angle[v];
            for u in side {
                let (a, b) = self.tip_strands(u);
                let spanning = before.contains(&a) != before.contains(&b) && a != s && b != s;
                if !spanning {
                    continue;
                }
                let off = i as f64 * dodge * dir;
                let (x, y) = (self.tip_angle[u] - off, self.tip_angle[u] + off);
                route.push(Segment { strand: s, disk: Disk::Outside, from: at, to: x });
                route.push(Segment { strand: s, disk: Disk::Inside, from: x, to: y });
                at = y;
            }
            route.push(Segment { strand: s, disk: Disk::Outside, from: at, to: self.tip_angle[w] });
            paths[s] = route;
        }
        paths
    }

    fn render(&self, lifted: &[usize]) -> Result<GaussCode> {
        let segs: Vec<Segment> = self.paths(lifted).into_iter().flatten().collect();
        let mut hits: Vec<Vec<(f64, usize)>> = vec![Vec::new(); segs.len()];
        let mut points: Vec<(Disk, Point, usize, usize)> = Vec::new();
        for a in 0..segs.len() {
            for b in a + 1..segs.len() {
                let (x, y) = (segs[a], segs[b]);
                if x.strand == y.strand || x.disk != y.disk || !interleave(x, y) {
                    continue;
                }
                let (pa, qa) = (on_circle(x.from), on_circle(x.to));
                let (pb, qb) = (on_circle(y.from), on_circle(y.to));
                let da = (qa.0 - pa.0, qa.1 - pa.1);
                let db = (qb.0 - pb.0, qb.1 - pb.1);
                let den = cross(da, db);
                let wv = (pb.0 - pa.0, pb.1 - pa.1);
                let (s, t) = (cross(wv, db) / den, cross(wv, da) / den);
                let id = points.len();
                points.push((x.disk, (pa.0 + s * da.0, pa.1 + s * da.1), a, b));
                hits[a].push((s, id));
                hits[b].push((t, id));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let (u, v) = (points[i], points[j]);
                if u.0 == v.0 && (u.1 .0 - v.1 .0).hypot(u.1 .1 - v.1 .1) < 1e-9 {
                    return Err(Error::DegenerateSchedule("tip model has coincident crossings".into()));
                }
            }
        }
        let dir = |k: usize| {
            let (p, q) = (on_circle(segs[k].from), on_circle(segs[k].to));
            (q.0 - p.0, q.1 - p.1)
        };
        let mut id = vec![usize::MAX; points.len()];
        let mut signs = Vec::new();
        let mut passages = Vec::new();
        for (k, list) in hits.iter_mut().enumerate() {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            for &(_, c) in list.iter() {
                let (disk, _, a, b) = points[c];
                let other = if a == k { b } else { a };
                let over = self.heights[segs[k].strand] < self.heights[segs[other].strand];
                if id[c] == usize::MAX {
                    id[c] = signs.len();
                    let (o, u) = if over { (k, other) } else { (other, k) };
                    let mut sign = if cross(dir(o), dir(u)) > 0.0 { 1 } else { -1 };
                    if disk == Disk::Outside {
                        sign = -sign;
                    }
                    signs.push(sign);
                }
                passages.push(Passage { crossing: id[c], over });
            }
        }
        GaussCode::new(passages, signs)
    }
}

/// Whether two chords with distinct endpoints cross.
fn interleave(x: Segment, y: Segment) -> bool {
    let norm = |a: f64| a.rem_euclid(2.0 * PI);
    let (lo, hi) = {
        let (a, b) = (norm(x.from), norm(x.to));
        (a.min(b), a.max(b))
    };
    let (c, d) = (norm(y.from), norm(y.to));
    let same = |a: f64, b: f64| (a - b).abs() < 1e-12;
    if same(c, lo) || same(c, hi) || same(d, lo) || same(d, hi) {
        return false;
    }
    let inside = |a: f64| a > lo && a < hi;
    inside(c) != inside(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::fingerprint;
    use crate::petalperm::torus_permutation;
    use crate::resolve::resolve_default;

    #[test]
    fn star_resolution_has_a_kink_at_every_tip() {
        for r in 2..=4 {
            let sigma = torus_permutation(r).unwrap();
            let (pd, ctx) = star_resolve(&sigma).unwrap();
            let p = sigma.p();
            assert_eq!(pd.crossing_count(), p * (p - 1) / 2);
            let (out, ctx) = remove_monogons(&pd, &ctx).unwrap();
            assert_eq!(out.crossing_count(), p * (p - 3) / 2);
            assert!(ctx.inner.iter().all(|l| l.len() == p - 3));
        }
    }

    #[test]
    fn torus_counts_reach_the_bound() {
        for (r, want) in [(2, 3), (3, 8), (4, 15)] {
            let sigma = torus_permutation(r).unwrap();
            let pd = petal_reduced_diagram(&sigma).unwrap();
            assert_eq!(pd.crossing_count(), want);
        }
    }

    #[test]
    fn stages_keep_the_fingerprint() {
        let sigma = torus_permutation(3).unwrap();
        let want = fingerprint(&resolve_default(&UbercrossingDiagram::from_petal(&sigma)).unwrap()).unwrap();
        for pd in reduction_stages(&sigma).unwrap() {
            assert_eq!(fingerprint(&pd).unwrap(), want);
        }
    }

    #[test]
    fn pre_petal_diagrams_use_the_folded_petal() {
        let sigma = torus_permutation(4).unwrap();
        let d = UbercrossingDiagram::from_petal(&sigma).unfold_top().unwrap();
        assert_eq!(diagram_pd(&d).unwrap().crossing_count(), 15);
        let plain = UbercrossingDiagram::new(vec![1, 2], &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(diagram_pd(&plain).unwrap().crossing_count(), 0);
    }

    #[test]
    fn out_of_order_iterations_are_rejected() {
        let sigma = torus_permutation(3).unwrap();
        let (pd, ctx) = star_resolve(&sigma).unwrap();
        assert!(strand_removal(&pd, &ctx, 1).is_err());
        let (pd, ctx) = remove_monogons(&pd, &ctx).unwrap();
        assert!(strand_removal(&pd, &ctx, 2).is_err());
        assert!(remove_monogons(&pd, &ctx).is_err());
    }
}
