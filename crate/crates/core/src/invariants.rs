//! Exact knot invariants: Kauffman bracket, Jones and Alexander polynomials,
//! determinant, and the identification fingerprint.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pd::PlanarDiagram;
use crate::poly::{bareiss_determinant, LaurentPolynomial, PolynomialJson};

/// Largest reduced crossing count accepted by the bracket computation.
pub const CROSSING_BUDGET: usize = 24;

type Matching = Vec<(u32, u32)>;

/// Joins the ends of labels `p` and `q` at the crossing being absorbed.
/// Returns `true` when the join closes a loop.
fn join(partner: &mut HashMap<u32, u32>, p: u32, q: u32) -> bool {
    if p == q {
        return true;
    }
    let ep = match partner.remove(&p) {
        Some(x) => {
            if x == q {
                partner.remove(&q);
                return true;
            }
            x
        }
        None => p,
    };
    let eq = match partner.remove(&q) {
        Some(y) => y,
        None => q,
    };
    partner.insert(ep, eq);
    partner.insert(eq, ep);
    false
}

fn to_key(partner: &HashMap<u32, u32>) -> Matching {
    let mut v: Matching = partner.iter().filter(|(a, b)| a < b).map(|(a, b)| (*a, *b)).collect();
    v.sort_unstable();
    v
}

/// Greedy order that keeps the open boundary small.
fn contraction_order(pd: &PlanarDiagram) -> Vec<usize> {
    let n = pd.crossings.len();
    let mut done = vec![false; n];
    let mut open: HashMap<u32, u32> = HashMap::new();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&c| !done[c])
            .max_by_key(|&c| {
                let shared = pd.crossings[c].iter().filter(|l| open.contains_key(l)).count();
                (shared, std::cmp::Reverse(c))
            })
            .expect("crossings remain");
        done[best] = true;
        order.push(best);
        for &l in &pd.crossings[best] {
            *open.entry(l).or_default() += 1;
        }
        open.retain(|_, k| *k < 2);
    }
    order
}

/// Kauffman bracket in the variable `A`, normalized so the unknot is 1.
///
/// The state sum runs on the Reidemeister I/II reduction; each removed kink
/// of sign `s` contributes a factor `(-A^3)^s`.
pub fn kauffman_bracket(pd: &PlanarDiagram) -> Result<LaurentPolynomial> {
    let reduced = pd.reduce_r1_r2();
    let n = reduced.crossing_count();
    if n > CROSSING_BUDGET {
        return Err(Error::BudgetExceeded { crossings: n, budget: CROSSING_BUDGET });
    }
    let kinks = pd.writhe() - reduced.writhe();
    let factor = LaurentPolynomial::monomial(if kinks % 2 == 0 { 1 } else { -1 }, 3 * kinks);
    Ok(&bracket_unreduced(&reduced) * &factor)
}

fn bracket_unreduced(pd: &PlanarDiagram) -> LaurentPolynomial {
    if pd.crossings.is_empty() {
        return LaurentPolynomial::one();
    }
    let d = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    let mut states: HashMap<Matching, LaurentPolynomial> = HashMap::new();
    states.insert(Vec::new(), LaurentPolynomial::one());
    for c in contraction_order(pd) {
        let [a, b, cc, dd] = pd.crossings[c];
        let mut next: HashMap<Matching, LaurentPolynomial> = HashMap::new();
        for (key, poly) in &states {
            for (arcs, exp) in [([(a, b), (cc, dd)], 1i64), ([(a, dd), (b, cc)], -1)] {
                let mut partner: HashMap<u32, u32> = HashMap::with_capacity(key.len() * 2 + 4);
                for &(x, y) in key {
                    partner.insert(x, y);
                    partner.insert(y, x);
                }
                let mut loops = 0u32;
                for (p, q) in arcs {
                    loops += join(&mut partner, p, q) as u32;
                }
                let mut term = poly.shift(exp);
                for _ in 0..loops {
                    term = &term * &d;
                }
                *next.entry(to_key(&partner)).or_default() += &term;
            }
        }
        next.retain(|_, p| !p.is_zero());
        states = next;
    }
    let total = states.remove(&Vec::new()).unwrap_or_default();
    total.div_exact(&d).expect("a closed diagram has at least one loop")
}

/// Jones polynomial with exponents of `t^(1/2)`.
pub fn jones(pd: &PlanarDiagram) -> Result<LaurentPolynomial> {
    let bracket = kauffman_bracket(pd)?;
    let w = pd.writhe();
    let sign: BigInt = if w.rem_euclid(2) == 0 { 1.into() } else { (-1).into() };
    let mut out = LaurentPolynomial::zero();
    for (e, c) in bracket.terms() {
        let e = e - 3 * w;
        if e % 4 != 0 {
            return Err(Error::Verification(format!("bracket exponent {e} is not a multiple of 4")));
        }
        out.add_term(-e / 2, c * &sign);
    }
    Ok(out)
}

/// Alexander polynomial from the overarc presentation, symmetrized under
/// `t <-> 1/t` with positive leading coefficient.
pub fn alexander(pd: &PlanarDiagram) -> Result<LaurentPolynomial> {
    let g = pd.gauss_code();
    let n = g.crossing_count();
    if n == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let passages = g.passages();
    let len = passages.len();
    let first_under = passages.iter().position(|p| !p.over).expect("a crossing has an under-passage");
    let (mut over_arc, mut in_arc, mut out_arc) = (vec![0; n], vec![0; n], vec![0; n]);
    let mut cur = 0;
    for k in 1..=len {
        let p = passages[(first_under + k) % len];
        if p.over {
            over_arc[p.crossing] = cur;
        } else {
            in_arc[p.crossing] = cur;
            cur = (cur + 1) % n;
            out_arc[p.crossing] = cur;
        }
    }
    let t = LaurentPolynomial::monomial(1, 1);
    let one = LaurentPolynomial::one();
    let mut m = vec![vec![LaurentPolynomial::zero(); n]; n];
    for c in 0..n {
        let (o, i, j) = (over_arc[c], in_arc[c], out_arc[c]);
        let (co, ci, cj) = if g.signs()[c] > 0 {
            (&one - &t, t.clone(), -&one)
        } else {
            (&t - &one, one.clone(), -&t)
        };
        m[c][o] += &co;
        m[c][i] += &ci;
        m[c][j] += &cj;
    }
    let minor: Vec<Vec<LaurentPolynomial>> = m[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
    let det = bareiss_determinant(minor)?;
    normalize_alexander(&det)
}

fn normalize_alexander(p: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    let (lo, hi) = match (p.min_exp(), p.max_exp()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::Verification("Alexander matrix is singular".into())),
    };
    if (lo + hi) % 2 != 0 {
        return Err(Error::Verification("Alexander polynomial has even degree span".into()));
    }
    let mut q = p.shift(-(lo + hi) / 2);
    if q.leading_coeff().is_some_and(|c| c.is_negative()) {
        q = -&q;
    }
    if q.substitute_power(-1) != q {
        return Err(Error::Verification("Alexander polynomial is not symmetric".into()));
    }
    Ok(q)
}

/// `|Δ(-1)|`.
pub fn determinant(pd: &PlanarDiagram) -> Result<u64> {
    let delta = alexander(pd)?;
    delta
        .eval_unit(-1)
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("determinant does not fit in 64 bits".into()))
}

/// The identification key: determinant, Alexander and Jones polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub determinant: u64,
    pub alexander: LaurentPolynomial,
    /// Exponents are powers of `t^(1/2)`.
    pub jones: LaurentPolynomial,
}

impl Fingerprint {
    pub fn unknot() -> Self {
        Self { determinant: 1, alexander: LaurentPolynomial::one(), jones: LaurentPolynomial::one() }
    }

    pub fn mirror(&self) -> Self {
        Self { jones: self.jones.substitute_power(-1), ..self.clone() }
    }

    /// Fingerprint of a connected sum.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            determinant: self.determinant * other.determinant,
            alexander: &self.alexander * &other.alexander,
            jones: &self.jones * &other.jones,
        }
    }

    pub fn to_json(&self) -> FingerprintJson {
        FingerprintJson {
            determinant: self.determinant,
            alexander: self.alexander.to_json("t"),
            jones: self.jones.to_json("t^1/2"),
        }
    }

    pub fn from_json(json: &FingerprintJson) -> Self {
        Self {
            determinant: json.determinant,
            alexander: LaurentPolynomial::from_json(&json.alexander),
            jones: LaurentPolynomial::from_json(&json.jones),
        }
    }
}

/// Wire form of a [`Fingerprint`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintJson {
    pub determinant: u64,
    pub alexander: PolynomialJson,
    pub jones: PolynomialJson,
}

pub fn fingerprint(pd: &PlanarDiagram) -> Result<Fingerprint> {
    let alexander = alexander(pd)?;
    let determinant = alexander
        .eval_unit(-1)
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("determinant does not fit in 64 bits".into()))?;
    if alexander.eval_unit(1).abs() != BigInt::from(1) {
        return Err(Error::Verification("Alexander polynomial does not evaluate to ±1 at 1".into()));
    }
    Ok(Fingerprint { determinant, alexander, jones: jones(pd)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::GaussCode;

    fn poly(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    fn trefoil() -> PlanarDiagram {
        PlanarDiagram::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]], vec![]).unwrap()
    }

    fn figure_eight() -> PlanarDiagram {
        PlanarDiagram::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]], vec![]).unwrap()
    }

    #[test]
    fn unknot_values() {
        let u = PlanarDiagram::unknot();
        assert_eq!(kauffman_bracket(&u).unwrap(), LaurentPolynomial::one());
        assert_eq!(fingerprint(&u).unwrap(), Fingerprint::unknot());
    }

    #[test]
    fn kink_bracket_depends_on_sign() {
        let pos = PlanarDiagram::new(vec![[1, 1, 2, 2]], vec![]).unwrap();
        let neg = PlanarDiagram::new(vec![[1, 2, 2, 1]], vec![]).unwrap();
        assert_eq!(bracket_unreduced(&pos), poly(&[(3, -1)]));
        assert_eq!(bracket_unreduced(&neg), poly(&[(-3, -1)]));
        assert_eq!(kauffman_bracket(&pos).unwrap(), poly(&[(3, -1)]));
        assert_eq!(kauffman_bracket(&neg).unwrap(), poly(&[(-3, -1)]));
        assert_eq!(jones(&pos).unwrap(), LaurentPolynomial::one());
    }

    #[test]
    fn unreduced_kink_jones_is_one() {
        for x in [[1, 1, 2, 2], [1, 2, 2, 1]] {
            let k = PlanarDiagram::new(vec![x], vec![]).unwrap();
            let b = bracket_unreduced(&k);
            let w = k.writhe();
            let mut j = LaurentPolynomial::zero();
            for (e, c) in b.terms() {
                j.add_term(-(e - 3 * w) / 2, if w % 2 == 0 { c.clone() } else { -c.clone() });
            }
            assert_eq!(j, LaurentPolynomial::one());
        }
    }

    #[test]
    fn trefoil_invariants() {
        let t = trefoil();
        // t + t^3 - t^4 in half-exponents
        assert_eq!(jones(&t).unwrap(), poly(&[(2, 1), (6, 1), (8, -1)]));
        assert_eq!(jones(&t.mirror()).unwrap(), poly(&[(-2, 1), (-6, 1), (-8, -1)]));
        assert_eq!(alexander(&t).unwrap(), poly(&[(-1, 1), (0, -1), (1, 1)]));
        assert_eq!(determinant(&t).unwrap(), 3);
    }

    #[test]
    fn figure_eight_invariants() {
        let f = figure_eight();
        assert_eq!(alexander(&f).unwrap(), poly(&[(-1, 1), (0, -3), (1, 1)]));
        assert_eq!(determinant(&f).unwrap(), 5);
        let j = jones(&f).unwrap();
        assert_eq!(j, j.substitute_power(-1));
        assert_eq!(j, poly(&[(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]));
    }

    #[test]
    fn budget_is_enforced() {
        // (2, 25) torus knot as a braid closure: 25 positive crossings, no R1/R2
        let text: Vec<String> =
            (0..50).map(|k| format!("{}{}+", if k % 2 == 0 { 'O' } else { 'U' }, k % 25 + 1)).collect();
        let g = GaussCode::parse(&text.join(" ")).unwrap();
        let pd = g.to_pd();
        assert!(matches!(kauffman_bracket(&pd), Err(Error::BudgetExceeded { crossings: 25, .. })));
        assert_eq!(determinant(&pd).unwrap(), 25);
    }

    #[test]
    fn fingerprint_json_round_trip() {
        let f = fingerprint(&trefoil()).unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let back: FingerprintJson = serde_json::from_str(&s).unwrap();
        assert_eq!(Fingerprint::from_json(&back), f);
    }
}
