//! Exact single-variable Laurent polynomials over the integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial `sum c_e x^e` with arbitrary-precision coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    /// Substitutes `x -> x^k` (k may be negative, `k = -1` is the mirror map).
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "x -> x^0 collapses the polynomial");
        Self { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at an integer; negative exponents require `x = ±1`.
    pub fn eval_unit(&self, x: i64) -> BigInt {
        assert!(x == 1 || x == -1, "only units can be substituted into a Laurent polynomial");
        self.terms
            .iter()
            .map(|(e, c)| if x == -1 && e.is_odd() { -c } else { c.clone() })
            .sum()
    }

    /// Exact division; `None` when `divisor` does not divide `self` in
    /// `Z[x, 1/x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_lo = divisor.min_exp().unwrap();
        let d_hi = divisor.max_exp().unwrap();
        let d_lead = divisor.terms[&d_hi].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let lo = self.min_exp().unwrap();
        while let Some(hi) = rem.max_exp() {
            if hi - (d_hi - d_lo) < lo {
                return None;
            }
            let (q, r) = rem.terms[&hi].div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(q, hi - d_hi);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Coefficients as machine integers, if they all fit.
    pub fn to_i64_terms(&self) -> Option<Vec<(i64, i64)>> {
        self.terms.iter().map(|(e, c)| c.to_i64().map(|c| (*e, c))).collect()
    }

    pub fn to_json(&self, var: &str) -> PolynomialJson {
        PolynomialJson {
            var: var.to_string(),
            terms: self.terms.iter().map(|(e, c)| (*e, Coefficient(c.clone()))).collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Self {
        Self::from_terms(json.terms.iter().map(|(e, c)| (*e, c.0.clone())))
    }

    /// Formats with the given variable name; exponents are divided by
    /// `exp_scale` when printing (2 for half-integer powers).
    pub fn display_with(&self, var: &str, exp_scale: i64) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let exp = if e % exp_scale == 0 { format!("{}", e / exp_scale) } else { format!("{}/{}", e, exp_scale) };
            match (*e, mag.is_one()) {
                (0, _) => out.push_str(&mag.to_string()),
                (_, true) => out.push_str(&format!("{var}^{exp}")),
                (_, false) => out.push_str(&format!("{mag}*{var}^{exp}")),
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x", 1))
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t", 1))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// An integer coefficient serialized as a JSON number when it fits in
/// `i64`, otherwise as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient(pub BigInt);

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Coefficient(BigInt::from(v))),
            Raw::Str(s) => s.parse().map(Coefficient).map_err(serde::de::Error::custom),
        }
    }
}

/// Wire form: `{"var": "t", "terms": [[exp, coeff], ...]}` sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub var: String,
    pub terms: Vec<(i64, Coefficient)>,
}

/// Determinant of a square matrix over `Z[x]` by fraction-free (Bareiss)
/// elimination. Entries may carry negative exponents; each divisor step
/// is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<LaurentPolynomial>>) -> Result<LaurentPolynomial> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let mut sign = 1i32;
    let mut prev = LaurentPolynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(LaurentPolynomial::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Verification("inexact Bareiss division".into()))?;
            }
            m[i][k] = LaurentPolynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = p(&[(1, 2), (0, 1)]);
        let b = p(&[(1, -2)]);
        assert_eq!(&a + &b, LaurentPolynomial::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[(-1, 1), (0, -1), (1, 1)]);
        let sq = &a * &a;
        assert_eq!(sq.div_exact(&a), Some(a.clone()));
        assert_eq!(p(&[(0, 1), (1, 1)]).div_exact(&p(&[(0, 2)])), None);
        assert_eq!(p(&[(2, 1)]).div_exact(&p(&[(0, 1), (1, 1)])), None);
    }

    #[test]
    fn unit_evaluation() {
        let a = p(&[(-1, 1), (0, -1), (1, 1)]);
        assert_eq!(a.eval_unit(1), BigInt::from(1));
        assert_eq!(a.eval_unit(-1), BigInt::from(-3));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        // [[1-x, x], [x, 2]]: det = 2 - 2x - x^2
        let m = vec![
            vec![p(&[(0, 1), (1, -1)]), p(&[(1, 1)])],
            vec![p(&[(1, 1)]), p(&[(0, 2)])],
        ];
        assert_eq!(bareiss_determinant(m).unwrap(), p(&[(0, 2), (1, -2), (2, -1)]));
        let needs_pivot = vec![
            vec![LaurentPolynomial::zero(), p(&[(0, 1)])],
            vec![p(&[(0, 1)]), LaurentPolynomial::zero()],
        ];
        assert_eq!(bareiss_determinant(needs_pivot).unwrap(), p(&[(0, -1)]));
    }

    #[test]
    fn json_round_trip_with_big_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let a = LaurentPolynomial::from_terms([(3, big), (-2, BigInt::from(-4))]);
        let text = serde_json::to_string(&a.to_json("t")).unwrap();
        let back: PolynomialJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LaurentPolynomial::from_json(&back), a);
    }
}
