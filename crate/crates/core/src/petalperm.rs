//! Petal permutations, their difference classes, cyclic height distance and
//! trivial-petal moves.
//!
//! Positions are 0-based and cyclic; heights are 1-based with 1 on top.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heights of the `p` strands read clockwise around the multi-crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PetalPermutation {
    entries: Vec<u32>,
}

impl PetalPermutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let p = entries.len();
        if p < 3 {
            return Err(Error::perm(p, format!("length {p} is below 3")));
        }
        if p % 2 == 0 {
            return Err(Error::perm(p, format!("even length {p}")));
        }
        let mut seen = vec![false; p + 1];
        for (i, &a) in entries.iter().enumerate() {
            if a == 0 || a as usize > p {
                return Err(Error::perm(i, format!("entry {a} is outside 1..={p}")));
            }
            if std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::perm(i, format!("duplicate entry {a}")));
            }
        }
        Ok(Self { entries })
    }

    /// Parses comma- or whitespace-separated integers, optionally wrapped
    /// in parentheses or brackets.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let entries = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .enumerate()
            .map(|(i, s)| s.parse::<u32>().map_err(|_| Error::perm(i, format!("{s:?} is not a positive integer"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn p(&self) -> usize {
        self.entries.len()
    }

    /// Height at cyclic position `i`.
    pub fn height(&self, i: usize) -> u32 {
        self.entries[i % self.p()]
    }

    /// Cyclic differences `[a_{i+1} - a_i]_p`.
    pub fn diffs(&self) -> Vec<u32> {
        let p = self.p() as u32;
        (0..self.p()).map(|i| (self.height(i + 1) + p - self.height(i)) % p).collect()
    }

    pub fn canonical_class(&self) -> DifferenceClass {
        DifferenceClass::from_diffs(self.diffs())
    }

    /// True when both permutations lie in the same difference class.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.p() == other.p() && self.canonical_class() == other.canonical_class()
    }

    /// Positions `i` with `d_p(a_i, a_{i+1}) = 1`, including the wrap-around
    /// pair at `i = p - 1`.
    pub fn trivial_petals(&self) -> Vec<usize> {
        let p = self.p() as u32;
        (0..self.p()).filter(|&i| distance(p, self.height(i), self.height(i + 1)) == 1).collect()
    }

    /// Pulls the trivial petal at positions `i, i+1` through the crossing.
    pub fn remove_trivial_petal(&self, i: usize) -> Result<Self> {
        let p = self.p();
        if p == 3 {
            return Err(Error::PetalFloor);
        }
        if i >= p || !self.trivial_petals().contains(&i) {
            return Err(Error::NotTrivialPetal { position: i });
        }
        let j = (i + 1) % p;
        let rest: Vec<u32> =
            self.entries.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &a)| a).collect();
        Ok(Self { entries: rank_compress(&rest) })
    }

    /// Moves the strand at position `i` to rank `new_rank`, keeping the
    /// relative order of all others. The cost is the number of strands it
    /// passes.
    pub fn change_height(&self, i: usize, new_rank: u32) -> Result<(Self, u32)> {
        let p = self.p();
        if new_rank == 0 || new_rank as usize > p {
            return Err(Error::HeightOutOfRange { height: new_rank, count: p });
        }
        if i >= p {
            return Err(Error::perm(i, format!("position {i} is outside 0..{p}")));
        }
        let old = self.entries[i];
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                if k == i {
                    new_rank
                } else if old < new_rank && a > old && a <= new_rank {
                    a - 1
                } else if new_rank < old && a >= new_rank && a < old {
                    a + 1
                } else {
                    a
                }
            })
            .collect();
        Ok((Self { entries }, old.abs_diff(new_rank)))
    }

    /// Every adjacent pair sits at the maximal distance `(p-1)/2`.
    pub fn is_extremal(&self) -> bool {
        let p = self.p() as u32;
        (0..self.p()).all(|i| distance(p, self.height(i), self.height(i + 1)) == (p - 1) / 2)
    }

    /// Mirror image: heights are reversed top to bottom.
    pub fn mirror(&self) -> Self {
        let p = self.p() as u32;
        Self { entries: self.entries.iter().map(|a| p + 1 - a).collect() }
    }

    /// Cyclic rotation of positions by `k`.
    pub fn rotate(&self, k: usize) -> Self {
        let p = self.p();
        Self { entries: (0..p).map(|i| self.height(i + k)).collect() }
    }

    /// Moves the top strand to the bottom `k` times.
    pub fn cycle_heights(&self, k: u32) -> Self {
        let p = self.p() as u32;
        Self { entries: self.entries.iter().map(|a| (a + p - 1 + p - k % p) % p + 1).collect() }
    }
}

impl TryFrom<Vec<u32>> for PetalPermutation {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PetalPermutation> for Vec<u32> {
    fn from(p: PetalPermutation) -> Self {
        p.entries
    }
}

impl FromStr for PetalPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for PetalPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Replaces values by their rank among `values`.
pub(crate) fn rank_compress(values: &[u32]) -> Vec<u32> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    values.iter().map(|v| sorted.binary_search(v).expect("present") as u32 + 1).collect()
}

/// `d_p(x, y)`: the cyclic distance between heights modulo `p`.
pub fn cyclic_distance(p: u32, x: u32, y: u32) -> Result<u32> {
    for h in [x, y] {
        if h == 0 || h > p {
            return Err(Error::HeightOutOfRange { height: h, count: p as usize });
        }
    }
    Ok(distance(p, x, y))
}

fn distance(p: u32, x: u32, y: u32) -> u32 {
    let d = (x + p - y) % p;
    d.min(p - d)
}

/// The extremal permutation `(1, r+1, 2r+1, ...)` with `p = 2r+1`.
pub fn torus_permutation(r: u32) -> Result<PetalPermutation> {
    if r == 0 {
        return Err(Error::Unsupported("torus permutation needs r >= 1".into()));
    }
    let p = 2 * r + 1;
    PetalPermutation::new((0..p).map(|i| i * r % p + 1).collect())
}

/// Equivalence class of petal permutations under rotation of the top
/// strand, keyed by the least rotation of the difference sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferenceClass {
    pub diffs: Vec<u32>,
    pub canonical_rotation: Vec<u32>,
    pub representative: PetalPermutation,
}

impl DifferenceClass {
    fn from_diffs(diffs: Vec<u32>) -> Self {
        let p = diffs.len();
        let canonical_rotation = (0..p)
            .map(|k| (0..p).map(|i| diffs[(i + k) % p]).collect::<Vec<_>>())
            .min()
            .expect("p >= 3");
        let mut entries = Vec::with_capacity(p);
        let mut a = 0u32;
        for d in &canonical_rotation[..p - 1] {
            entries.push(a + 1);
            a = (a + d) % p as u32;
        }
        entries.push(a + 1);
        let representative = PetalPermutation::new(entries).expect("difference sequence of a permutation");
        Self { diffs, canonical_rotation, representative }
    }
}

impl PartialEq for DifferenceClass {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_rotation == other.canonical_rotation
    }
}

impl Eq for DifferenceClass {}

impl std::hash::Hash for DifferenceClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_rotation.hash(state);
    }
}
