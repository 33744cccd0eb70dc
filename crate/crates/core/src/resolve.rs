//! Conversion of übercrossing diagrams into double-crossing PD codes.
//!
//! Strand `k` is drawn as the chord from endpoint `k` to `k + n`, pushed
//! off the centre along its normal. Floating point is used only to order
//! intersection points along each chord; over/under and signs come from
//! heights and the traversal orientation.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pd::{GaussCode, Passage, PlanarDiagram};
use crate::petalperm::PetalPermutation;
use crate::uberdiag::UbercrossingDiagram;

/// Signed offsets of each chord along its normal, in units of the radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSchedule {
    pub offsets: Vec<f64>,
    pub tolerance: f64,
}

impl PerturbationSchedule {
    pub fn new(offsets: Vec<f64>, tolerance: f64) -> Result<Self> {
        for (i, &c) in offsets.iter().enumerate() {
            if !c.is_finite() || c.abs() >= 0.1 {
                return Err(Error::DegenerateSchedule(format!("offset {i} = {c} is not below 0.1")));
            }
            if offsets[..i].contains(&c) {
                return Err(Error::DegenerateSchedule(format!("offset {i} = {c} repeats")));
            }
        }
        Ok(Self { offsets, tolerance })
    }

    /// `offsets[k] = (k + 1) * 1e-3`.
    pub fn default_for(n: usize) -> Self {
        Self { offsets: (0..n).map(|k| (k + 1) as f64 * 1e-3).collect(), tolerance: 1e-9 }
    }

    /// Random distinct offsets with random signs, reproducible from `seed`.
    pub fn seeded(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = max_offset(n);
        let mut offsets: Vec<f64> = Vec::with_capacity(n);
        while offsets.len() < n {
            let c = rng.gen_range(0.05..1.0) * scale * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            if !offsets.contains(&c) {
                offsets.push(c);
            }
        }
        Self { offsets, tolerance: 1e-9 }
    }
}

/// Largest offset that certainly keeps the endpoint order on the circle.
pub(crate) fn max_offset(n: usize) -> f64 {
    (0.25 * (PI / (2.0 * n as f64)).sin()).min(0.05)
}

pub(crate) type Point = (f64, f64);

/// Position of endpoint `j` among `2n` placed clockwise from the top.
pub(crate) fn endpoint(n: usize, j: usize) -> Point {
    let theta = PI * j as f64 / n as f64;
    (theta.sin(), theta.cos())
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// A chord line `base + s * dir`, with `dir` a unit vector from endpoint
/// `k` toward `k + n`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Chord {
    pub base: Point,
    pub dir: Point,
}

impl Chord {
    pub fn for_strand(n: usize, k: usize, offset: f64) -> Self {
        let p = endpoint(n, k);
        let dir = (-p.0, -p.1);
        let normal = (-dir.1, dir.0);
        Chord { base: (p.0 + offset * normal.0, p.1 + offset * normal.1), dir }
    }

    /// Parameters `(s, t)` with `self(s) = other(t)`.
    pub fn intersect(&self, other: &Chord) -> Option<(f64, f64)> {
        let den = cross(self.dir, other.dir);
        if den.abs() < 1e-15 {
            return None;
        }
        let w = (other.base.0 - self.base.0, other.base.1 - self.base.1);
        Some((cross(w, other.dir) / den, cross(w, self.dir) / den))
    }

    pub fn at(&self, s: f64) -> Point {
        (self.base.0 + s * self.dir.0, self.base.1 + s * self.dir.1)
    }
}

/// One crossing of the star drawing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarCrossing {
    pub strands: (usize, usize),
    pub point: (f64, f64),
}

/// The perturbed star drawing of a diagram, before conversion to a PD.
#[derive(Clone, Debug)]
pub struct Star {
    pub n: usize,
    pub crossings: Vec<StarCrossing>,
    /// Crossing indices along each strand, ordered from endpoint `k` to
    /// `k + n`.
    pub along: Vec<Vec<usize>>,
}

pub(crate) fn star(n: usize, sched: &PerturbationSchedule) -> Result<Star> {
    if sched.offsets.len() != n {
        return Err(Error::DegenerateSchedule(format!("{} offsets for {n} strands", sched.offsets.len())));
    }
    let chords: Vec<Chord> = (0..n).map(|k| Chord::for_strand(n, k, sched.offsets[k])).collect();
    check_boundary_order(n, &sched.offsets)?;
    let mut crossings = Vec::new();
    let mut params: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for k in 0..n {
        for l in k + 1..n {
            let (s, t) = chords[k]
                .intersect(&chords[l])
                .ok_or_else(|| Error::DegenerateSchedule(format!("strands {k} and {l} are parallel")))?;
            let pt = chords[k].at(s);
            if pt.0.hypot(pt.1) >= 0.999 {
                return Err(Error::DegenerateSchedule(format!("strands {k} and {l} meet outside the circle")));
            }
            let id = crossings.len();
            crossings.push(StarCrossing { strands: (k, l), point: pt });
            params[k].push((s, id));
            params[l].push((t, id));
        }
    }
    for i in 0..crossings.len() {
        for j in i + 1..crossings.len() {
            let (a, b) = (crossings[i].point, crossings[j].point);
            if (a.0 - b.0).hypot(a.1 - b.1) <= sched.tolerance {
                return Err(Error::DegenerateSchedule("two crossings are closer than the tolerance".into()));
            }
        }
    }
    let along = params
        .into_iter()
        .map(|mut v| {
            v.sort_by(|x, y| x.0.total_cmp(&y.0));
            v.into_iter().map(|(_, id)| id).collect()
        })
        .collect();
    Ok(Star { n, crossings, along })
}

/// The pushed chords must meet the circle in the original cyclic order.
fn check_boundary_order(n: usize, offsets: &[f64]) -> Result<()> {
    let m = 2 * n;
    let step = PI / n as f64;
    let mut angles = vec![0.0; m];
    for k in 0..n {
        let shift = offsets[k].clamp(-1.0, 1.0).asin();
        // a parallel push moves the two ends in opposite angular directions
        angles[k] = k as f64 * step + shift;
        angles[k + n] = (k + n) as f64 * step - shift;
    }
    for j in 0..m {
        let next = if j + 1 == m { angles[0] + 2.0 * PI } else { angles[j + 1] };
        if next - angles[j] <= 0.0 {
            return Err(Error::DegenerateSchedule(format!("endpoints {j} and {} swap order", (j + 1) % m)));
        }
    }
    Ok(())
}

/// Converts the star drawing into a PD, following the diagram's traversal
/// from endpoint 0. Also returns the PD crossing id of each star crossing.
pub(crate) fn star_to_gauss(d: &UbercrossingDiagram, star: &Star) -> (GaussCode, Vec<usize>) {
    let n = d.n();
    let h = d.heights();
    let mut id = vec![usize::MAX; star.crossings.len()];
    let mut signs = Vec::new();
    let mut passages = Vec::new();
    let dirs: Vec<Point> = (0..n).map(|k| Chord::for_strand(n, k, 0.0).dir).collect();
    let trav = d.traversal();
    let forward: Vec<bool> = {
        let mut f = vec![true; n];
        for &(entry, _) in &trav {
            f[entry % n] = entry < n;
        }
        f
    };
    for &(entry, _) in &trav {
        let k = entry % n;
        let list: Box<dyn Iterator<Item = &usize>> =
            if forward[k] { Box::new(star.along[k].iter()) } else { Box::new(star.along[k].iter().rev()) };
        for &c in list {
            let (a, b) = star.crossings[c].strands;
            let other = if a == k { b } else { a };
            if id[c] == usize::MAX {
                id[c] = signs.len();
                let (o, u) = if h[k] < h[other] { (k, other) } else { (other, k) };
                let orient = |s: usize| {
                    let v = dirs[s];
                    if forward[s] {
                        v
                    } else {
                        (-v.0, -v.1)
                    }
                };
                signs.push(if cross(orient(o), orient(u)) > 0.0 { 1 } else { -1 });
            }
            passages.push(Passage { crossing: id[c], over: h[k] < h[other] });
        }
    }
    (GaussCode::new(passages, signs).expect("star drawing yields a valid Gauss code"), id)
}

/// Resolves the multi-crossing into `C(n, 2)` double crossings.
pub fn resolve(d: &UbercrossingDiagram, sched: &PerturbationSchedule) -> Result<PlanarDiagram> {
    let s = star(d.n(), sched)?;
    Ok(star_to_gauss(d, &s).0.to_pd())
}

/// Resolves with the default schedule.
pub fn resolve_default(d: &UbercrossingDiagram) -> Result<PlanarDiagram> {
    resolve(d, &PerturbationSchedule::default_for(d.n()))
}

/// Gauss code of a PD.
pub fn gauss_code(pd: &PlanarDiagram) -> GaussCode {
    pd.gauss_code()
}


/// How crossings of the sideways drawing are assigned over/under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideRule {
    /// First visit right of the axis is over, left of it under.
    FirstVisit,
    /// Depth of an explicit spatial realization.
    Depth,
}

/// Sideways drawing of the pre-petal obtained by removing the top strand.
struct Side {
    d: UbercrossingDiagram,
    /// Angle of each endpoint; the nesting block occupies `(0, pi)`.
    angle: Vec<f64>,
    /// Connector angle and radius of the arc at each endpoint.
    conn: Vec<(f64, f64)>,
}

impl Side {
    fn new(sigma: &PetalPermutation) -> Result<Self> {
        let d = UbercrossingDiagram::from_petal(sigma).unfold_top()?;
        let n = d.n();
        let m = 2 * n;
        // the arc whose closed block is exactly half the circle
        let x = (0..m)
            .find(|&e| {
                let f = d.partner(e);
                (f + m - e) % m == n - 1
            })
            .ok_or_else(|| Error::Diagram("pre-petal has no half-circle arc".into()))?;
        let step = PI / n as f64;
        let mut angle = vec![0.0; m];
        for j in 0..m {
            angle[(x + j) % m] = (j as f64 + 0.5) * step;
        }
        let mut conn = vec![(0.0, 0.0); m];
        let y = d.partner(x);
        conn[x] = (PI / 2.0, 3.0);
        conn[y] = (PI / 2.0, 3.0);
        for (i, (a, b)) in d.arcs().into_iter().enumerate() {
            if a == x || a == y {
                continue;
            }
            let (lo, hi) = if angle[a] < angle[b] { (angle[a], angle[b]) } else { (angle[b], angle[a]) };
            let c = ((lo + hi) / 2.0, 2.0 + 0.01 * i as f64);
            conn[a] = c;
            conn[b] = c;
        }
        Ok(Self { d, angle, conn })
    }

    fn conn_x(&self, e: usize) -> f64 {
        let (phi, r) = self.conn[e];
        r * phi.sin()
    }

    /// Depth (distance along the viewing direction) of the horizontal path of
    /// the strand through endpoint `e` at abscissa `x`.
    fn line_depth(&self, e: usize, x: f64) -> f64 {
        let n = self.d.n();
        let (right, left) = if self.angle[e] < PI { (e, (e + n) % (2 * n)) } else { ((e + n) % (2 * n), e) };
        let end = if x > 0.0 { right } else { left };
        let theta = self.angle[end];
        let (phi, r) = self.conn[end];
        if x.abs() <= (r * theta.sin()).abs() {
            return x * theta.cos() / theta.sin();
        }
        let s = (x / r).asin();
        let lo = theta.min(phi);
        let psi = [s, PI - s, 2.0 * PI + s]
            .into_iter()
            .find(|&c| c >= lo - 1e-12 && c <= theta.max(phi) + 1e-12)
            .expect("runs are monotone in x");
        r * psi.cos()
    }
}

/// Double-crossing diagram read off the sideways pre-petal drawing.
pub fn reverse_petal_diagram(sigma: &PetalPermutation) -> Result<PlanarDiagram> {
    reverse_petal_with(sigma, SideRule::FirstVisit)
}

pub fn reverse_petal_with(sigma: &PetalPermutation, rule: SideRule) -> Result<PlanarDiagram> {
    let side = Side::new(sigma)?;
    let d = &side.d;
    let n = d.n();
    let m = 2 * n;
    let h = |e: usize| d.heights()[e % n] as f64;
    let x0 = (0..m).find(|&e| side.conn[e].1 == 3.0).expect("nesting connector");
    // travel the rightmost connector first, from x0 to its partner
    let mut legs: Vec<(usize, usize, bool)> = Vec::new();
    let mut e = x0;
    loop {
        let f = d.partner(e);
        legs.push((e, f, false));
        let g = (f + n) % m;
        legs.push((f, g, true));
        e = g;
        if e == x0 {
            break;
        }
    }
    // crossings are keyed by (connector's smaller endpoint, strand)
    let mut ids: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
    let mut signs: Vec<i8> = Vec::new();
    let mut passages = Vec::new();
    for &(a, b, is_line) in &legs {
        let mut hits: Vec<(f64, (usize, usize), bool)> = Vec::new();
        if is_line {
            let k = a % n;
            let (xa, xb) = (side.conn_x(a), side.conn_x(b));
            for (p, q, _) in legs.iter().filter(|l| !l.2) {
                let xc = side.conn_x(*p);
                let (lo, hi) = (h(*p).min(h(*q)), h(*p).max(h(*q)));
                if xc > xa.min(xb) && xc < xa.max(xb) && h(a) > lo && h(a) < hi {
                    let t = (xc - xa) / (xb - xa);
                    hits.push((t, ((*p).min(*q), k), true));
                }
            }
        } else {
            let xc = side.conn_x(a);
            let (ha, hb) = (h(a), h(b));
            for k in 0..n {
                let hk = d.heights()[k] as f64;
                let (xl, xr) = (side.conn_x(k), side.conn_x(k + n));
                if hk > ha.min(hb) && hk < ha.max(hb) && xc > xl.min(xr) && xc < xl.max(xr) {
                    hits.push(((hk - ha) / (hb - ha), (a.min(b), k), false));
                }
            }
        }
        hits.sort_by(|p, q| p.0.total_cmp(&q.0));
        for (_, key, on_line) in hits {
            let (c, k) = key;
            let xc = side.conn_x(c);
            let first = !ids.contains_key(&key);
            let id = *ids.entry(key).or_insert_with(|| signs.len());
            let line_over = match rule {
                SideRule::FirstVisit => {
                    let over_now = if first { xc > 0.0 } else { passages.iter().any(|p: &Passage| p.crossing == id && !p.over) };
                    if on_line {
                        over_now
                    } else {
                        !over_now
                    }
                }
                SideRule::Depth => {
                    let (phi, r) = side.conn[c];
                    side.line_depth(k, xc) < r * phi.cos()
                }
            };
            if first {
                // directions in the viewing plane: x right, height up
                let line_leg = legs.iter().find(|l| l.2 && l.0 % n == k).expect("strand leg");
                let line_dir = (side.conn_x(line_leg.1) - side.conn_x(line_leg.0)).signum();
                let conn_leg = legs.iter().find(|l| !l.2 && l.0.min(l.1) == c).expect("connector leg");
                let conn_dir = (h(conn_leg.0) - h(conn_leg.1)).signum();
                let (lv, cv) = ((line_dir, 0.0), (0.0, conn_dir));
                let s = if line_over { cross(lv, cv) } else { cross(cv, lv) };
                signs.push(if s > 0.0 { 1 } else { -1 });
            }
            passages.push(Passage { crossing: id, over: line_over == on_line });
        }
    }
    Ok(GaussCode::new(passages, signs)?.to_pd())
}
