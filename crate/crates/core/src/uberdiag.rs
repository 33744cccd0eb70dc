//! Übercrossing diagrams: `n` strands through one multi-crossing, joined
//! outside the crossing by a non-crossing matching of their endpoints.
//!
//! Endpoints are numbered `0..2n` clockwise; strand `k` owns endpoints `k`
//! and `k + n`. Heights are 1-based with 1 on top. The JSON form uses
//! 1-based endpoints.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::petalperm::{rank_compress, PetalPermutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn opposite(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

/// A matching arc joining cyclically adjacent endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ribbon {
    /// `(u, u + 1)` with `u` the clockwise-earlier endpoint.
    pub arc: (usize, usize),
    pub strands: (usize, usize),
    pub handedness: Handedness,
    pub over_strand: usize,
    pub bottom: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UbercrossingDiagram {
    heights: Vec<u32>,
    partner: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    heights: Vec<u32>,
    matching: Vec<[usize; 2]>,
}

impl UbercrossingDiagram {
    /// Builds and validates a diagram from strand heights and 0-based arcs.
    pub fn new(heights: Vec<u32>, arcs: &[(usize, usize)]) -> Result<Self> {
        let m = 2 * heights.len();
        let mut partner = vec![usize::MAX; m];
        for &(a, b) in arcs {
            if a >= m || b >= m || a == b {
                return Err(Error::Diagram(format!("arc ({a}, {b}) is not a pair of distinct endpoints in 0..{m}")));
            }
            for e in [a, b] {
                if partner[e] != usize::MAX {
                    return Err(Error::Diagram(format!("endpoint {e} is matched twice")));
                }
            }
            partner[a] = b;
            partner[b] = a;
        }
        let d = Self { heights, partner };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Diagram("no strands".into()));
        }
        let mut seen = vec![false; n + 1];
        for &h in &self.heights {
            if h == 0 || h as usize > n || std::mem::replace(&mut seen[h as usize], true) {
                return Err(Error::HeightOutOfRange { height: h, count: n });
            }
        }
        if let Some(e) = self.partner.iter().position(|&x| x == usize::MAX) {
            return Err(Error::Diagram(format!("endpoint {e} is unmatched")));
        }
        if n > 1 {
            if let Some(e) = (0..2 * n).find(|&e| self.partner[e] == (e + n) % (2 * n)) {
                return Err(Error::Diagram(format!("arc joins both ends of strand {}", e % n)));
            }
        }
        let mut stack = Vec::new();
        for e in 0..2 * n {
            let q = self.partner[e];
            if q > e {
                stack.push(e);
            } else if stack.pop() != Some(q) {
                return Err(Error::Diagram("matching arcs cross".into()));
            }
        }
        if self.traversal().len() != n {
            return Err(Error::Diagram("diagram has more than one component".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn partner(&self, e: usize) -> usize {
        self.partner[e]
    }

    pub fn strand_of(&self, e: usize) -> usize {
        e % self.n()
    }

    pub fn antipode(&self, e: usize) -> usize {
        (e + self.n()) % (2 * self.n())
    }

    /// Arcs as `(a, b)` with `a < b`, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n()).filter(|&e| e < self.partner[e]).map(|e| (e, self.partner[e])).collect()
    }

    /// Chords in traversal order, each as `(entry endpoint, exit endpoint)`,
    /// starting at endpoint 0.
    pub fn traversal(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut e = 0;
        loop {
            let exit = self.antipode(e);
            out.push((e, exit));
            e = self.partner[exit];
            if e == 0 || out.len() > self.n() {
                return out;
            }
        }
    }

    /// Endpoints strictly inside the smaller side of the arc at `e`,
    /// listed clockwise.
    pub fn span(&self, e: usize) -> Vec<usize> {
        let m = 2 * self.n();
        let f = self.partner[e];
        let cw = (f + m - e) % m - 1;
        let (start, len) = if cw <= m - 2 - cw { (e, cw) } else { (f, m - 2 - cw) };
        (1..=len).map(|k| (start + k) % m).collect()
    }

    /// Arcs whose span contains other endpoints.
    pub fn nesting_arcs(&self) -> Vec<(usize, usize)> {
        self.arcs().into_iter().filter(|&(a, _)| !self.span(a).is_empty()).collect()
    }

    /// All arcs join adjacent endpoints.
    pub fn is_petal(&self) -> bool {
        self.nesting_arcs().is_empty()
    }

    pub fn from_petal(sigma: &PetalPermutation) -> Self {
        let p = sigma.p();
        let m = 2 * p;
        let arcs: Vec<_> = (0..p).map(|t| ((p + 2 * t) % m, (p + 2 * t + 1) % m)).collect();
        Self::new(sigma.entries().to_vec(), &arcs).expect("petal diagrams are valid")
    }

    /// Heights in clockwise strand order, for a petal diagram.
    pub fn to_petal(&self) -> Option<PetalPermutation> {
        if !self.is_petal() || self.n() % 2 == 0 || self.n() < 3 {
            return None;
        }
        PetalPermutation::new(self.heights.clone()).ok()
    }

    /// Builds a diagram from a cyclic endpoint order given by arbitrary keys.
    /// `height` gives a raw height per endpoint key (the two ends of a strand
    /// must agree); heights are rank-compressed.
    fn assemble<K: Copy + Eq + Hash>(order: &[K], arcs: &[(K, K)], height: impl Fn(K) -> u32) -> Result<Self> {
        let m = order.len();
        let n = m / 2;
        let index: HashMap<K, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let raw: Vec<u32> = (0..n).map(|k| height(order[k])).collect();
        for k in 0..n {
            if height(order[k + n]) != raw[k] {
                return Err(Error::Diagram("endpoints of a strand are not antipodal".into()));
            }
        }
        let arcs: Vec<(usize, usize)> = arcs.iter().map(|(a, b)| (index[a], index[b])).collect();
        Self::new(rank_compress(&raw), &arcs)
    }

    /// Old endpoint order after deleting whole strands, starting at `start`.
    fn surviving_order(&self, dead: &[usize], start: usize) -> Vec<usize> {
        let m = 2 * self.n();
        (0..m).map(|k| (start + k) % m).filter(|&e| !dead.contains(&self.strand_of(e))).collect()
    }

    /// Removes the top strand of a petal diagram, merging its two petals
    /// into one nesting arc.
    pub fn unfold_top(&self) -> Result<Self> {
        let n = self.n();
        if !self.is_petal() || n < 3 {
            return Err(Error::Diagram("unfold_top needs a petal diagram with at least 3 strands".into()));
        }
        let s = self.heights.iter().position(|&h| h == 1).expect("height 1 exists");
        let (x, y) = (self.partner[s], self.partner[s + n]);
        let order = self.surviving_order(&[s], s + 1);
        let mut arcs: Vec<_> = self.arcs().into_iter().filter(|&(a, b)| ![a, b].contains(&s) && ![a, b].contains(&(s + n))).collect();
        arcs.push((x, y));
        Self::assemble(&order, &arcs, |e| self.heights[self.strand_of(e)])
    }

    /// Right inverse of [`unfold_top`](Self::unfold_top): threads a new top
    /// strand around the single nesting arc.
    pub fn fold_top(&self) -> Result<Self> {
        let nesting = self.nesting_arcs();
        let &[(a, b)] = nesting.as_slice() else {
            return Err(Error::Diagram("fold_top needs exactly one nesting arc".into()));
        };
        let m = 2 * self.n();
        // orient so the span runs clockwise from x to y
        let (x, y) = if self.span(a).first() == Some(&((a + 1) % m)) { (a, b) } else { (b, a) };
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum K {
            Old(usize),
            New(bool),
        }
        let mut order = Vec::with_capacity(m + 2);
        for k in 0..m {
            let e = (x + k) % m;
            if e == x {
                order.push(K::New(false));
            }
            order.push(K::Old(e));
            if e == y {
                order.push(K::New(true));
            }
        }
        let mut arcs: Vec<(K, K)> =
            self.arcs().into_iter().filter(|&(p, q)| (p, q) != (a, b)).map(|(p, q)| (K::Old(p), K::Old(q))).collect();
        arcs.push((K::New(false), K::Old(x)));
        arcs.push((K::Old(y), K::New(true)));
        Self::assemble(&order, &arcs, |k| match k {
            K::Old(e) => self.heights[self.strand_of(e)] + 1,
            K::New(_) => 1,
        })
    }

    pub fn ribbons(&self) -> Vec<Ribbon> {
        let n = self.n();
        let m = 2 * n;
        let nesting_spans: Vec<Vec<usize>> = self.nesting_arcs().iter().map(|&(a, _)| self.span(a)).collect();
        (0..m)
            .filter(|&u| self.partner[u] == (u + 1) % m && (n > 1 || u == 0))
            .map(|u| {
                let v = (u + 1) % m;
                let (su, sv) = (self.strand_of(u), self.strand_of(v));
                let over_strand = if self.heights[su] < self.heights[sv] { su } else { sv };
                let handedness = if over_strand == su { Handedness::Right } else { Handedness::Left };
                let has_bottom = [su, sv].iter().any(|&s| self.heights[s] as usize == n);
                let bottom = has_bottom && nesting_spans.iter().any(|sp| sp.contains(&u) && sp.contains(&v));
                Ribbon { arc: (u, v), strands: (su, sv), handedness, over_strand, bottom }
            })
            .collect()
    }

    pub fn bottom_ribbon(&self) -> Option<Ribbon> {
        self.ribbons().into_iter().find(|r| r.bottom)
    }

    /// Reflection of the circle order; heights are kept.
    pub fn mirror(&self) -> Self {
        let m = 2 * self.n();
        let order: Vec<usize> = (0..m).map(|k| (m - k) % m).collect();
        Self::assemble(&order, &self.arcs(), |e| self.heights[self.strand_of(e)]).expect("mirror of a valid diagram")
    }

    /// Pulls the loop formed by the adjacent arc at `e` through the crossing.
    /// The two strands must have consecutive heights.
    pub fn remove_trivial_loop(&self, e: usize) -> Result<Self> {
        let n = self.n();
        let m = 2 * n;
        if e >= m {
            return Err(Error::Diagram(format!("endpoint {e} is outside 0..{m}")));
        }
        let f = self.partner[e];
        let (x, y) = if f == (e + 1) % m {
            (e, f)
        } else if e == (f + 1) % m {
            (f, e)
        } else {
            return Err(Error::Diagram(format!("arc ({e}, {f}) does not join adjacent endpoints")));
        };
        let (sx, sy) = (self.strand_of(x), self.strand_of(y));
        if self.heights[sx].abs_diff(self.heights[sy]) != 1 {
            return Err(Error::Diagram(format!("strands {sx} and {sy} do not have consecutive heights")));
        }
        if n < 3 {
            return Err(Error::PetalFloor);
        }
        let (xa, ya) = (self.antipode(x), self.antipode(y));
        let (px, py) = (self.partner[xa], self.partner[ya]);
        let order = self.surviving_order(&[sx, sy], (y + 1) % m);
        let dead = [x, y, xa, ya];
        let mut arcs: Vec<_> = self.arcs().into_iter().filter(|&(a, b)| !dead.contains(&a) && !dead.contains(&b)).collect();
        arcs.push((px, py));
        Self::assemble(&order, &arcs, |k| self.heights[self.strand_of(k)])
    }

    /// Inserts a trivial loop of the given handedness next to the arc at
    /// `target`, with its two strands at heights `height_slot` and
    /// `height_slot + 1`.
    pub fn add_trivial_petal(&self, target: usize, height_slot: u32, handedness: Handedness) -> Result<Self> {
        let n = self.n();
        let m = 2 * n;
        if target >= m {
            return Err(Error::Diagram(format!("endpoint {target} is outside 0..{m}")));
        }
        if height_slot == 0 || height_slot as usize > n + 1 {
            return Err(Error::HeightOutOfRange { height: height_slot, count: n + 2 });
        }
        let other = self.partner[target];
        // x starts the clockwise run through the arc's span
        let x = if self.span(target).first().map_or((target + 1) % m == other, |&f| f == (target + 1) % m) {
            target
        } else {
            other
        };
        let y = self.partner[x];
        let xa = self.antipode(x);
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum K {
            Old(usize),
            // 0, 1: petal endpoints; 2, 3: their antipodes
            New(u8),
        }
        let mut order = Vec::with_capacity(m + 4);
        for e in 0..m {
            order.push(K::Old(e));
            if e == x {
                order.extend([K::New(2), K::New(3)]);
            }
            if e == xa {
                order.extend([K::New(0), K::New(1)]);
            }
        }
        let mut arcs: Vec<(K, K)> =
            self.arcs().into_iter().filter(|&(a, b)| a != x && b != x).map(|(a, b)| (K::Old(a), K::Old(b))).collect();
        arcs.extend([(K::Old(x), K::New(2)), (K::New(3), K::Old(y)), (K::New(0), K::New(1))]);
        // petal endpoint 0 is clockwise-earlier; it carries the over-strand for RIGHT
        let first = match handedness {
            Handedness::Right => height_slot,
            Handedness::Left => height_slot + 1,
        };
        let second = 2 * height_slot + 1 - first;
        Self::assemble(&order, &arcs, |k| match k {
            K::Old(e) => {
                let h = self.heights[self.strand_of(e)];
                if h >= height_slot {
                    h + 2
                } else {
                    h
                }
            }
            K::New(0) | K::New(2) => first,
            K::New(_) => second,
        })
    }

    /// Connected sum along `ribbon` of `self` and the bottom ribbon of the
    /// pre-petal diagram `other`. The two ribbons must have opposite
    /// handedness.
    pub fn compose(&self, ribbon: &Ribbon, other: &Self) -> Result<Self> {
        let (n1, n2) = (self.n(), other.n());
        let (m1, m2) = (2 * n1, 2 * n2);
        let (u, v) = ribbon.arc;
        if v != (u + 1) % m1 || self.partner[u] != v {
            return Err(Error::Diagram(format!("({u}, {v}) is not a ribbon of the first diagram")));
        }
        let nesting = other.nesting_arcs();
        let &[(na, _)] = nesting.as_slice() else {
            return Err(Error::Diagram("second diagram must have exactly one nesting arc".into()));
        };
        let bottom = other.bottom_ribbon().ok_or_else(|| Error::Diagram("second diagram has no bottom ribbon".into()))?;
        let r1 = self.ribbons().into_iter().find(|r| r.arc == ribbon.arc).expect("checked above");
        if r1.handedness == bottom.handedness {
            return Err(Error::HandednessConflict);
        }
        let span = other.span(na);
        let x = (span[0] + m2 - 1) % m2;
        if span.len() + 2 != n2 {
            return Err(Error::Diagram("nesting arc of the second diagram does not cover half the circle".into()));
        }
        let beta = bottom.arc.0;
        let a = (beta + m2 - x) % m2 + 1;

        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum K {
            One(usize),
            Two(usize),
        }
        let b1 = |k: usize| K::Two((x + k) % m2);
        let b2 = |k: usize| K::Two((x + n2 + k) % m2);
        let d1 = |k: usize| K::One((u + k) % m1);
        let mut order = Vec::with_capacity(m1 + m2);
        order.extend((0..a).map(b1));
        order.extend([d1(0), d1(1)]);
        order.extend((a..n2).map(b1));
        order.extend((2..n1).map(d1));
        order.extend((0..a).map(b2));
        order.extend([d1(n1), d1(n1 + 1)]);
        order.extend((a..n2).map(b2));
        order.extend((n1 + 2..m1).map(d1));

        let o = r1.over_strand;
        let o1 = if self.strand_of(u) == o { u } else { v };
        let bs = other.heights.iter().position(|&h| h as usize == n2).expect("bottom strand");
        let bb1 = if other.strand_of(beta) == bs { beta } else { bottom.arc.1 };
        // the band joins endpoints that sit next to each other
        let (o1k, bb1k) = (K::One(o1), K::Two(bb1));
        let pos = |k: K| order.iter().position(|&z| z == k).expect("present");
        let (po, pb) = (pos(o1k), pos(bb1k));
        if (po + 1) % (m1 + m2) != pb && (pb + 1) % (m1 + m2) != po {
            return Err(Error::HandednessConflict);
        }
        let mo = K::One(self.partner[o1]);
        let mb = K::Two(other.partner[bb1]);
        let mut arcs: Vec<(K, K)> = self
            .arcs()
            .into_iter()
            .filter(|&(p, q)| p != o1 && q != o1)
            .map(|(p, q)| (K::One(p), K::One(q)))
            .chain(
                other.arcs().into_iter().filter(|&(p, q)| p != bb1 && q != bb1).map(|(p, q)| (K::Two(p), K::Two(q))),
            )
            .collect();
        arcs.extend([(o1k, bb1k), (mo, mb)]);

        let h_o = self.heights[o];
        let merged = Self::assemble(&order, &arcs, |k| match k {
            K::One(e) => {
                let h = self.heights[self.strand_of(e)];
                if h >= h_o {
                    h + n2 as u32
                } else {
                    h
                }
            }
            K::Two(e) => h_o + other.heights[other.strand_of(e)] - 1,
        })?;
        merged.remove_trivial_loop(po)
    }

    /// Composes along a ribbon of opposite handedness to `other`'s bottom
    /// ribbon, first adding a trivial petal when no such ribbon exists.
    pub fn compose_simple(&self, other: &Self) -> Result<Self> {
        let bottom = other.bottom_ribbon().ok_or_else(|| Error::Diagram("second diagram has no bottom ribbon".into()))?;
        let want = bottom.handedness.opposite();
        if let Some(r) = self.ribbons().into_iter().find(|r| r.handedness == want) {
            return self.compose(&r, other);
        }
        let grown = self.add_trivial_petal(0, 1, want)?;
        let r = grown
            .ribbons()
            .into_iter()
            .find(|r| r.handedness == want)
            .ok_or_else(|| Error::Verification("added petal has the wrong handedness".into()))?;
        grown.compose(&r, other)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let matching = self.arcs().into_iter().map(|(a, b)| [a + 1, b + 1]).collect();
        serde_json::to_value(DiagramJson { n: self.n(), heights: self.heights.clone(), matching })
            .expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DiagramJson = serde_json::from_str(text)?;
        if raw.heights.len() != raw.n {
            return Err(Error::Diagram(format!("{} heights for n = {}", raw.heights.len(), raw.n)));
        }
        let mut arcs = Vec::with_capacity(raw.matching.len());
        for [a, b] in raw.matching {
            if a == 0 || b == 0 {
                return Err(Error::Diagram("endpoints are 1-based".into()));
            }
            arcs.push((a - 1, b - 1));
        }
        Self::new(raw.heights, &arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petalperm::torus_permutation;
    use proptest::prelude::*;

    fn petal(v: &[u32]) -> UbercrossingDiagram {
        UbercrossingDiagram::from_petal(&PetalPermutation::new(v.to_vec()).unwrap())
    }

    fn hands(d: &UbercrossingDiagram) -> (usize, usize) {
        let r = d.ribbons();
        let left = r.iter().filter(|r| r.handedness == Handedness::Left).count();
        (left, r.len() - left)
    }

    #[test]
    fn from_petal_matching() {
        let d = petal(&[1, 3, 5, 2, 4]);
        assert_eq!(d.n(), 5);
        let json = d.to_json();
        assert_eq!(json["matching"], serde_json::json!([[1, 10], [2, 3], [4, 5], [6, 7], [8, 9]]));
        assert!(d.is_petal());
        assert_eq!(d.to_petal().unwrap().entries(), &[1, 3, 5, 2, 4]);
        let small = petal(&[1, 2, 3]);
        assert_eq!(small.ribbons().len(), 3);
        assert!(small.nesting_arcs().is_empty());
        let t = UbercrossingDiagram::from_petal(&torus_permutation(3).unwrap());
        assert!(t.arcs().iter().all(|&(a, b)| b == a + 1 || (a == 0 && b == 13)));
    }

    #[test]
    fn json_round_trip() {
        let d = petal(&[1, 4, 5, 3, 7, 2, 6]).unfold_top().unwrap();
        let back = UbercrossingDiagram::from_json(&d.to_json().to_string()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn validation() {
        // crossing arcs
        assert!(UbercrossingDiagram::new(vec![1, 2], &[(0, 2), (1, 3)]).is_err());
        // self arc
        assert!(UbercrossingDiagram::new(vec![1, 2, 3], &[(0, 3), (1, 2), (4, 5)]).is_err());
        assert!(UbercrossingDiagram::new(vec![1, 2], &[(0, 1), (2, 3)]).is_ok());
        // four petals on four strands close up into two loops
        assert!(UbercrossingDiagram::new(vec![1, 2, 3, 4], &[(0, 1), (2, 3), (4, 5), (6, 7)]).is_err());
        assert!(UbercrossingDiagram::new(vec![1, 1, 3], &[(1, 2), (3, 4), (5, 0)]).is_err());
    }

    #[test]
    fn unfold_trefoil() {
        let d = petal(&[1, 3, 5, 2, 4]).unfold_top().unwrap();
        assert_eq!(d.heights(), &[2, 4, 1, 3]);
        assert_eq!(d.arcs(), vec![(0, 1), (2, 3), (4, 7), (5, 6)]);
        assert_eq!(d.nesting_arcs(), vec![(4, 7)]);
        assert_eq!(d.span(4), vec![5, 6]);
        assert_eq!(d.ribbons().len(), 3);
        let b = d.bottom_ribbon().unwrap();
        assert_eq!(b.arc, (5, 6));
        assert_eq!(petal(&[1, 2, 3]).unfold_top().unwrap().n(), 2);
        let t = UbercrossingDiagram::from_petal(&torus_permutation(3).unwrap()).unfold_top().unwrap();
        assert_eq!(t.n(), 6);
        assert_eq!(t.nesting_arcs().len(), 1);
    }

    #[test]
    fn unfold_requires_petal() {
        let d = petal(&[1, 3, 5, 2, 4]).unfold_top().unwrap();
        assert!(d.unfold_top().is_err());
    }

    #[test]
    fn fold_inverts_unfold() {
        for v in [&[1, 3, 5, 2, 4][..], &[1, 4, 5, 3, 7, 2, 6], &[1, 4, 7, 3, 6, 2, 5], &[1, 2, 3, 4, 5]] {
            let s = PetalPermutation::new(v.to_vec()).unwrap();
            let back = UbercrossingDiagram::from_petal(&s).unfold_top().unwrap().fold_top().unwrap();
            assert!(back.to_petal().unwrap().equivalent(&s), "{s}");
        }
    }

    #[test]
    fn mirror_flips_ribbons() {
        let d = petal(&[1, 3, 5, 2, 4]).unfold_top().unwrap();
        let m = d.mirror();
        let (l, r) = hands(&d);
        assert_eq!(hands(&m), (r, l));
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn remove_loop_matches_petal_removal() {
        let d = petal(&[1, 4, 5, 3, 7, 2, 6]);
        // petal (4,5) joins positions 1 and 2; find its arc
        let (a, _) = d.arcs().into_iter().find(|&(a, b)| {
            let hs = [d.heights()[d.strand_of(a)], d.heights()[d.strand_of(b)]];
            hs == [4, 5] || hs == [5, 4]
        }).unwrap();
        let r = d.remove_trivial_loop(a).unwrap();
        assert!(r.to_petal().unwrap().equivalent(&PetalPermutation::new(vec![1, 3, 5, 2, 4]).unwrap()));
        assert!(d.remove_trivial_loop(0).is_err());
    }

    #[test]
    fn add_petal_round_trip() {
        let d = petal(&[1, 3, 5, 2, 4]).unfold_top().unwrap();
        for target in 0..8 {
            for slot in 1..=5 {
                for hand in [Handedness::Left, Handedness::Right] {
                    let g = d.add_trivial_petal(target, slot, hand).unwrap();
                    assert_eq!(g.n(), 6);
                    let new = g
                        .ribbons()
                        .into_iter()
                        .find(|r| {
                            let hs = [g.heights()[r.strands.0], g.heights()[r.strands.1]];
                            hs.contains(&slot) && hs.contains(&(slot + 1))
                        })
                        .unwrap();
                    assert_eq!(new.handedness, hand);
                    let back = g.remove_trivial_loop(new.arc.0).unwrap();
                    assert_eq!(back.arcs().len(), 4);
                    assert_eq!(back.nesting_arcs().len(), 1);
                }
            }
        }
        assert!(d.add_trivial_petal(0, 6, Handedness::Left).is_err());
    }

    #[test]
    fn compose_trefoils_strand_count() {
        let d = petal(&[1, 3, 5, 2, 4]).unfold_top().unwrap();
        let want = d.bottom_ribbon().unwrap().handedness.opposite();
        let r = d.ribbons().into_iter().find(|r| r.handedness == want).unwrap();
        let c = d.compose(&r, &d).unwrap();
        assert_eq!(c.n(), 6);
        let (l, rr) = hands(&c);
        assert!(l > 0 && rr > 0);
        let same = d.ribbons().into_iter().find(|r| r.handedness != want).unwrap();
        assert_eq!(d.compose(&same, &d), Err(Error::HandednessConflict));
    }

    fn arb_petal() -> impl Strategy<Value = UbercrossingDiagram> {
        (1usize..5)
            .prop_flat_map(|r| Just((1..=2 * r as u32 + 1).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| petal(&v))
    }

    proptest! {
        #[test]
        fn operations_keep_type_invariants(d in arb_petal(), t in 0usize..20, s in 1u32..20, left in any::<bool>()) {
            let hand = if left { Handedness::Left } else { Handedness::Right };
            let t = t % (2 * d.n());
            let s = (s - 1) % (d.n() as u32 + 1) + 1;
            let g = d.add_trivial_petal(t, s, hand).unwrap();
            g.validate().unwrap();
            let m = g.mirror();
            m.validate().unwrap();
            prop_assert_eq!(m.ribbons().len(), g.ribbons().len());
            let u = d.unfold_top().unwrap();
            prop_assert_eq!(u.nesting_arcs().len(), usize::from(d.n() > 3));
            prop_assert_eq!(u.span(u.nesting_arcs().first().map_or(0, |a| a.0)).len() + 2, if d.n() > 3 { u.n() } else { 2 });
        }
    }
}
