//! Greedy unknotting of petal permutations with replayable certificates.
//!
//! Each step picks the cyclically adjacent pair closest in cyclic height,
//! passes the first strand of the pair through the strands between them and
//! pulls out the resulting trivial petal. When the short way round wraps
//! past the top, heights are first cycled (top strand to bottom, an
//! isotopy) so the pass runs in plain rank order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::petalperm::{cyclic_distance, PetalPermutation};

/// `(p-1)(p-3)/8`, the unknotting number bound for petal number `p`.
pub fn unknotting_bound(p: usize) -> Result<usize> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::perm(p, format!("petal number {p} must be odd and at least 3")));
    }
    Ok((p - 1) * (p - 3) / 8)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Moves the strand at `position` to rank `new_rank`, passing `cost` strands.
    HeightPass { position: usize, new_rank: u32, cost: u32 },
    /// Moves the top strand to the bottom `count` times, at no cost.
    CycleHeights { count: u32 },
    /// Removes the trivial petal at `position`, `position + 1`.
    RemovePetal { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknottingCertificate {
    pub initial: PetalPermutation,
    pub moves: Vec<Move>,
    pub total_cost: u32,
    #[serde(rename = "final")]
    pub final_perm: PetalPermutation,
}

impl UnknottingCertificate {
    /// Applies the moves to `initial`, checking each recorded cost.
    pub fn replay(&self) -> Result<PetalPermutation> {
        let mut cur = self.initial.clone();
        for mv in &self.moves {
            cur = match *mv {
                Move::HeightPass { position, new_rank, cost } => {
                    let (next, actual) = cur.change_height(position, new_rank)?;
                    if actual != cost {
                        return Err(Error::Verification(format!(
                            "pass at {position} costs {actual}, certificate says {cost}"
                        )));
                    }
                    next
                }
                Move::CycleHeights { count } => cur.cycle_heights(count),
                Move::RemovePetal { position } => cur.remove_trivial_petal(position)?,
            };
        }
        Ok(cur)
    }

    /// Replays the certificate and checks its final permutation and total.
    pub fn verify(&self) -> Result<()> {
        let end = self.replay()?;
        if end != self.final_perm {
            return Err(Error::Verification(format!("replay ends at {end}, certificate says {}", self.final_perm)));
        }
        if end.p() != 3 {
            return Err(Error::Verification(format!("replay ends with {} petals", end.p())));
        }
        let sum: u32 = self
            .moves
            .iter()
            .map(|m| match m {
                Move::HeightPass { cost, .. } => *cost,
                _ => 0,
            })
            .sum();
        if sum != self.total_cost {
            return Err(Error::Verification(format!("costs sum to {sum}, certificate says {}", self.total_cost)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs the greedy procedure down to three petals.
pub fn unknotting_sequence(sigma: &PetalPermutation) -> UnknottingCertificate {
    let mut cur = sigma.clone();
    let mut moves = Vec::new();
    let mut total = 0;
    while cur.p() > 3 {
        let p = cur.p() as u32;
        let dist = |i: usize| cyclic_distance(p, cur.height(i), cur.height(i + 1)).expect("heights in range");
        let i = (0..cur.p()).min_by_key(|&i| (dist(i), i)).expect("nonempty");
        let d = dist(i);
        if d > 1 {
            let (a, b) = (cur.height(i), cur.height(i + 1));
            if a.abs_diff(b) != d {
                // the short way wraps past the top: cycle the lower of the two to the bottom
                let count = a.min(b);
                cur = cur.cycle_heights(count);
                moves.push(Move::CycleHeights { count });
            }
            let (a, b) = (cur.height(i), cur.height(i + 1));
            let new_rank = if a < b { b - 1 } else { b + 1 };
            let (next, cost) = cur.change_height(i, new_rank).expect("rank in range");
            debug_assert_eq!(cost, d - 1);
            moves.push(Move::HeightPass { position: i, new_rank, cost });
            total += cost;
            cur = next;
        }
        cur = cur.remove_trivial_petal(i).expect("pair is now a trivial petal");
        moves.push(Move::RemovePetal { position: i });
    }
    UnknottingCertificate { initial: sigma.clone(), moves, total_cost: total, final_perm: cur }
}
