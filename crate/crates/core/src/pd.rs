//! Oriented double-crossing diagrams as PD codes and signed Gauss codes.
//!
//! PD convention: each crossing lists its four arc labels counterclockwise
//! starting from the incoming under-arc. Arc labels run `1..=2N`
//! consecutively along the orientation. A positive crossing is
//! `[u_in, o_out, u_out, o_in]`, a negative one `[u_in, o_in, u_out, o_out]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One visit of the traversal to a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

/// Signed Gauss code: passages along the oriented knot plus one sign per
/// crossing id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode {
    passages: Vec<Passage>,
    signs: Vec<i8>,
}

impl GaussCode {
    pub fn new(passages: Vec<Passage>, signs: Vec<i8>) -> Result<Self> {
        if passages.len() != 2 * signs.len() {
            return Err(Error::PlanarDiagram(format!(
                "{} passages for {} crossings",
                passages.len(),
                signs.len()
            )));
        }
        if let Some(s) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::PlanarDiagram(format!("crossing sign {s} is not ±1")));
        }
        let mut seen = vec![[false; 2]; signs.len()];
        for p in &passages {
            let slot = seen
                .get_mut(p.crossing)
                .ok_or_else(|| Error::PlanarDiagram(format!("unknown crossing {}", p.crossing)))?;
            if std::mem::replace(&mut slot[p.over as usize], true) {
                return Err(Error::PlanarDiagram(format!(
                    "crossing {} visited twice as {}",
                    p.crossing,
                    if p.over { "over" } else { "under" }
                )));
            }
        }
        Ok(Self { passages, signs })
    }

    pub fn unknot() -> Self {
        Self { passages: Vec::new(), signs: Vec::new() }
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn to_pd(&self) -> PlanarDiagram {
        let len = self.passages.len();
        let n = self.signs.len();
        let label_in = |k: usize| (k + 1) as u32;
        let label_out = |k: usize| ((k + 1) % len + 1) as u32;
        let mut under = vec![0; n];
        let mut over = vec![0; n];
        for (k, p) in self.passages.iter().enumerate() {
            if p.over {
                over[p.crossing] = k;
            } else {
                under[p.crossing] = k;
            }
        }
        let crossings = (0..n)
            .map(|c| {
                let (u, o) = (under[c], over[c]);
                if self.signs[c] > 0 {
                    [label_in(u), label_out(o), label_out(u), label_in(o)]
                } else {
                    [label_in(u), label_in(o), label_out(u), label_out(o)]
                }
            })
            .collect();
        PlanarDiagram { crossings, signs: self.signs.clone() }
    }

    /// Drops the listed crossings and renumbers the survivors in order of
    /// their ids.
    fn without(&self, dead: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for c in 0..self.signs.len() {
            if !dead.contains(&c) {
                remap[c] = signs.len();
                signs.push(self.signs[c]);
            }
        }
        let passages = self
            .passages
            .iter()
            .filter(|p| remap[p.crossing] != usize::MAX)
            .map(|p| Passage { crossing: remap[p.crossing], over: p.over })
            .collect();
        Self { passages, signs }
    }

    /// Removes the listed kinks, each of which must have its two passages
    /// cyclically adjacent.
    pub fn remove_kinks(&self, kinks: &[usize]) -> Result<Self> {
        let len = self.passages.len();
        for &c in kinks {
            let at: Vec<usize> = (0..len).filter(|&k| self.passages[k].crossing == c).collect();
            if at.len() != 2 || !((at[0] + 1) % len == at[1] || (at[1] + 1) % len == at[0]) {
                return Err(Error::Diagram(format!("crossing {c} does not bound a monogon")));
            }
        }
        Ok(self.without(kinks))
    }

    fn find_r1(&self) -> Option<usize> {
        let len = self.passages.len();
        (0..len)
            .find(|&k| self.passages[k].crossing == self.passages[(k + 1) % len].crossing)
            .map(|k| self.passages[k].crossing)
    }

    fn find_r2(&self) -> Option<(usize, usize)> {
        let len = self.passages.len();
        let mut pos = vec![[0usize; 2]; self.signs.len()];
        for (k, p) in self.passages.iter().enumerate() {
            pos[p.crossing][p.over as usize] = k;
        }
        let adjacent = |a: usize, b: usize| (a + 1) % len == b || (b + 1) % len == a;
        for k in 0..len {
            let (p, q) = (self.passages[k], self.passages[(k + 1) % len]);
            if p.crossing == q.crossing || p.over != q.over {
                continue;
            }
            let other = !p.over as usize;
            if adjacent(pos[p.crossing][other], pos[q.crossing][other])
                && self.signs[p.crossing] != self.signs[q.crossing]
            {
                return Some((p.crossing, q.crossing));
            }
        }
        None
    }

    /// Applies crossing-removing Reidemeister I and II moves until none
    /// applies.
    pub fn reduce_r1_r2(&self) -> Self {
        let mut g = self.clone();
        loop {
            if let Some(c) = g.find_r1() {
                g = g.without(&[c]);
            } else if let Some((a, b)) = g.find_r2() {
                g = g.without(&[a, b]);
            } else {
                return g;
            }
        }
    }

    /// Text form such as `O1+ U2- U1+ O2-` (crossing ids are 1-based).
    pub fn to_text(&self) -> String {
        self.passages
            .iter()
            .map(|p| {
                format!(
                    "{}{}{}",
                    if p.over { 'O' } else { 'U' },
                    p.crossing + 1,
                    if self.signs[p.crossing] > 0 { '+' } else { '-' }
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut passages = Vec::new();
        let mut signs: Vec<i8> = Vec::new();
        for tok in text.split_whitespace() {
            let bad = || Error::Parse(format!("bad Gauss token {tok:?}"));
            let mut chars = tok.chars();
            let over = match chars.next() {
                Some('O') | Some('o') => true,
                Some('U') | Some('u') => false,
                _ => return Err(bad()),
            };
            let rest: String = chars.collect();
            let (num, sign) = match rest.chars().last() {
                Some('+') => (&rest[..rest.len() - 1], 1i8),
                Some('-') => (&rest[..rest.len() - 1], -1),
                Some('−') => (&rest[..rest.len() - '−'.len_utf8()], -1),
                _ => return Err(bad()),
            };
            let id: usize = num.parse().map_err(|_| bad())?;
            if id == 0 {
                return Err(bad());
            }
            if signs.len() < id {
                signs.resize(id, 0);
            }
            if signs[id - 1] != 0 && signs[id - 1] != sign {
                return Err(Error::Parse(format!("crossing {id} has inconsistent signs")));
            }
            signs[id - 1] = sign;
            passages.push(Passage { crossing: id - 1, over });
        }
        Self::new(passages, signs)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// An oriented double-crossing knot diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    pub crossings: Vec<[u32; 4]>,
    pub signs: Vec<i8>,
}

impl PlanarDiagram {
    pub fn unknot() -> Self {
        Self { crossings: Vec::new(), signs: Vec::new() }
    }

    /// Validates a PD code. Signs may be omitted (empty) when every crossing
    /// determines its own sign.
    pub fn new(crossings: Vec<[u32; 4]>, signs: Vec<i8>) -> Result<Self> {
        let n = crossings.len();
        let m = 2 * n as u32;
        let next = |x: u32| x % m + 1;
        let mut inferred = Vec::with_capacity(n);
        for (i, x) in crossings.iter().enumerate() {
            if x.iter().any(|&l| l == 0 || l > m) {
                return Err(Error::PlanarDiagram(format!("crossing {i} has a label outside 1..={m}")));
            }
            let [a, b, c, d] = *x;
            if c != next(a) {
                return Err(Error::PlanarDiagram(format!("crossing {i}: under-arc {a} is not followed by {c}")));
            }
            let (pos, neg) = if n == 1 {
                // the arc leaving the under-strand re-enters as the over-strand
                (d == c, b == c)
            } else {
                (b == next(d), d == next(b))
            };
            let given = signs.get(i).copied();
            let sign = match (pos, neg, given) {
                (true, false, None | Some(1)) => 1,
                (false, true, None | Some(-1)) => -1,
                (true, true, Some(s)) if s == 1 || s == -1 => s,
                (true, true, None) => {
                    return Err(Error::PlanarDiagram(format!("crossing {i}: sign is ambiguous and not given")))
                }
                _ => return Err(Error::PlanarDiagram(format!("crossing {i}: over-arcs do not match the sign"))),
            };
            inferred.push(sign);
        }
        if !signs.is_empty() && signs.len() != n {
            return Err(Error::PlanarDiagram("sign list length differs from crossing count".into()));
        }
        let pd = Self { crossings, signs: inferred };
        pd.check_labels()?;
        pd.check_planar()?;
        Ok(pd)
    }

    fn check_labels(&self) -> Result<()> {
        let m = 2 * self.crossings.len();
        let mut count = vec![0u8; m + 1];
        for x in &self.crossings {
            for &l in x {
                count[l as usize] += 1;
            }
        }
        match (1..=m).find(|&l| count[l] != 2) {
            Some(l) => Err(Error::PlanarDiagram(format!("arc {l} appears {} times", count[l]))),
            None => Ok(()),
        }
    }

    /// Euler characteristic check: a connected diagram on the sphere with
    /// `N > 0` crossings has `N + 2` faces.
    fn check_planar(&self) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * n + 1];
        for (c, x) in self.crossings.iter().enumerate() {
            for (i, &l) in x.iter().enumerate() {
                ends[l as usize].push((c, i));
            }
        }
        let other_end = |c: usize, i: usize| {
            let l = self.crossings[c][i] as usize;
            let [e0, e1] = [ends[l][0], ends[l][1]];
            if e0 == (c, i) {
                e1
            } else {
                e0
            }
        };
        let mut seen = vec![[false; 4]; n];
        let mut faces = 0;
        for c in 0..n {
            for i in 0..4 {
                if seen[c][i] {
                    continue;
                }
                faces += 1;
                let (mut cc, mut ii) = (c, i);
                while !seen[cc][ii] {
                    seen[cc][ii] = true;
                    let (c2, i2) = other_end(cc, ii);
                    cc = c2;
                    ii = (i2 + 1) % 4;
                }
            }
        }
        if faces != n + 2 {
            return Err(Error::PlanarDiagram(format!("{faces} faces for {n} crossings: not planar")));
        }
        Ok(())
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn gauss_code(&self) -> GaussCode {
        let n = self.crossings.len();
        let m = 2 * n;
        let mut by_in = vec![None; m + 1];
        for (c, x) in self.crossings.iter().enumerate() {
            let [a, b, _, d] = *x;
            by_in[a as usize] = Some(Passage { crossing: c, over: false });
            let o_in = if self.signs[c] > 0 { d } else { b };
            by_in[o_in as usize] = Some(Passage { crossing: c, over: true });
        }
        let passages = (1..=m).map(|l| by_in[l].expect("validated PD")).collect();
        GaussCode { passages, signs: self.signs.clone() }
    }

    pub fn reduce_r1_r2(&self) -> PlanarDiagram {
        self.gauss_code().reduce_r1_r2().to_pd()
    }

    pub fn mirror(&self) -> PlanarDiagram {
        let g = self.gauss_code();
        let passages = g.passages.iter().map(|p| Passage { crossing: p.crossing, over: !p.over }).collect();
        let signs = g.signs.iter().map(|s| -s).collect();
        GaussCode { passages, signs }.to_pd()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            crossings: Vec<[u32; 4]>,
            #[serde(default)]
            signs: Vec<i8>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        Self::new(raw.crossings, raw.signs)
    }
}
