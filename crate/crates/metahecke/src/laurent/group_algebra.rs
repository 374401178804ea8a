use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{self, MPoly, Mono};
use super::qlaurent::{forward_owned, QLaurent};
use super::{CoeffRow, LaurentError};

/// Element of Q[u, u^-1][Z^rank]: finite sums of lattice monomials Z_λ with
/// Laurent-in-u coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupAlgebraElement {
    rank: usize,
    terms: BTreeMap<Vec<i64>, QLaurent>,
}

impl GroupAlgebraElement {
    pub fn zero(rank: usize) -> Self {
        GroupAlgebraElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::scalar(rank, QLaurent::one())
    }

    pub fn scalar(rank: usize, c: QLaurent) -> Self {
        Self::monomial(vec![0; rank], c)
    }

    /// c·Z_λ.
    pub fn monomial(lambda: Vec<i64>, c: QLaurent) -> Self {
        let rank = lambda.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(lambda, c);
        }
        GroupAlgebraElement { rank, terms }
    }

    /// Z_λ.
    pub fn z(lambda: &[i64]) -> Self {
        Self::monomial(lambda.to_vec(), QLaurent::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QLaurent)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, lambda: &[i64]) -> QLaurent {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// The coefficient if this element is a scalar (supported at λ = 0).
    pub fn as_scalar(&self) -> Option<QLaurent> {
        if self.terms.keys().all(|k| k.iter().all(|&e| e == 0)) {
            Some(self.coeff(&vec![0; self.rank]))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, lambda: Vec<i64>, c: QLaurent) {
        assert_eq!(
            lambda.len(),
            self.rank,
            "lattice vector length must equal rank"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&lambda) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&lambda);
                }
            }
            None => {
                self.terms.insert(lambda, c);
            }
        }
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(self.rank);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&QLaurent::constant(c.clone()))
    }

    /// Applies a lattice map to every exponent (e.g. a Weyl group action).
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.rank);
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Multiplication by Z_λ.
    pub fn shift(&self, lambda: &[i64]) -> Self {
        self.map_exponents(|k| k.iter().zip(lambda).map(|(a, b)| a + b).collect())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let k: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, v1 * v2);
            }
        }
        Ok(out)
    }

    fn check_rank(&self, other: &Self) -> Result<(), LaurentError> {
        if self.rank != other.rank {
            return Err(LaurentError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub(crate) fn to_mpoly(&self) -> MPoly {
        let mut p = MPoly::zero(self.rank + 1);
        for (k, v) in &self.terms {
            for (e, c) in v.terms() {
                let mut m = k.clone();
                m.push(e);
                p.add_term(Mono(m), c.clone());
            }
        }
        p
    }

    pub(crate) fn from_mpoly(rank: usize, p: &MPoly) -> Self {
        debug_assert_eq!(p.nvars, rank + 1);
        let mut out = Self::zero(rank);
        for (m, c) in &p.terms {
            let (lam, u) = m.0.split_at(rank);
            out.add_term(lam.to_vec(), QLaurent::monomial(u[0], c.clone()));
        }
        out
    }

    /// True when the element is c·Z_λ·u^e for a nonzero rational c.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|v| v.len() == 1)
    }

    pub fn leading_coefficient_positive(&self) -> bool {
        poly::sign_of_leading(&self.to_mpoly())
    }

    /// Value with every Z-variable specialized: Z_λ ↦ Π x_i^{λ_i} (x_i nonzero
    /// when negative exponents occur).
    pub fn eval_lattice(&self, x: &[QLaurentPoint]) -> QLaurent {
        let mut acc = QLaurent::zero();
        for (k, v) in &self.terms {
            let mut term = v.clone();
            for (e, p) in k.iter().zip(x) {
                term = &term * &p.pow(*e);
            }
            acc = &acc + &term;
        }
        acc
    }
}

/// A specialization target for a lattice variable: c·u^e with c a nonzero
/// rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLaurentPoint {
    pub coeff: BigRational,
    pub u_exp: i64,
}

impl QLaurentPoint {
    pub fn pow(&self, n: i64) -> QLaurent {
        let c = if n >= 0 {
            num::pow(self.coeff.clone(), n as usize)
        } else {
            num::pow(self.coeff.recip(), (-n) as usize)
        };
        QLaurent::monomial(self.u_exp * n, c)
    }
}

/// Convolution product; fails on rank mismatch.
pub fn ga_mul(
    x: &GroupAlgebraElement,
    y: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement, LaurentError> {
    x.try_mul(y)
}

/// The g with den·g = num, if it exists in the Laurent ring.
pub fn exact_div(
    num: &GroupAlgebraElement,
    den: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement, LaurentError> {
    num.check_rank(den)?;
    if den.is_zero() {
        return Err(LaurentError::ZeroDenominator);
    }
    let q = poly::laurent_div_exact(&num.to_mpoly(), &den.to_mpoly())
        .ok_or(LaurentError::NotDivisible)?;
    Ok(GroupAlgebraElement::from_mpoly(num.rank, &q))
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        self.try_add(rhs).expect("rank mismatch in addition")
    }
}

impl Sub for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn sub(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        self.try_add(&-rhs).expect("rank mismatch in subtraction")
    }
}

impl Mul for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn mul(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        self.try_mul(rhs).expect("rank mismatch in multiplication")
    }
}

impl Neg for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        GroupAlgebraElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

forward_owned!(GroupAlgebraElement, Add add, Sub sub, Mul mul);

impl Neg for GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        -&self
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, v)| {
                let zero = k.iter().all(|&e| e == 0);
                match (zero, v.is_one()) {
                    (true, _) => format!("({v})"),
                    (false, true) => format!("Z{k:?}"),
                    (false, false) => format!("({v})*Z{k:?}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeffs: Vec<CoeffRow>,
}

#[derive(Serialize, Deserialize)]
struct GaJson {
    rank: usize,
    terms: Vec<TermJson>,
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GaJson {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| TermJson {
                    exp: k.clone(),
                    coeffs: v.terms().map(|(e, c)| CoeffRow::new(e, c)).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupAlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = GaJson::deserialize(d)?;
        let mut out = GroupAlgebraElement::zero(j.rank);
        for t in j.terms {
            if t.exp.len() != j.rank {
                return Err(D::Error::custom(format!(
                    "exponent {:?} has length {}, expected rank {}",
                    t.exp,
                    t.exp.len(),
                    j.rank
                )));
            }
            let mut c = QLaurent::zero();
            for row in t.coeffs {
                let (e, v) = row.into_parts().map_err(D::Error::custom)?;
                c = &c + &QLaurent::monomial(e, v);
            }
            out.add_term(t.exp, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> GroupAlgebraElement {
        GroupAlgebraElement::z(v)
    }

    #[test]
    fn monomial_product() {
        assert_eq!(ga_mul(&z(&[1, 0]), &z(&[0, 1])).unwrap(), z(&[1, 1]));
        assert!(ga_mul(&z(&[1, 0]), &GroupAlgebraElement::zero(2))
            .unwrap()
            .is_zero());
        assert!(matches!(
            ga_mul(&z(&[1]), &z(&[1, 0])),
            Err(LaurentError::RankMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn difference_of_squares_in_lattice() {
        let one = GroupAlgebraElement::one(2);
        let za = z(&[-1, 1]);
        let p = ga_mul(&(&one - &za), &(&one + &za)).unwrap();
        let keys: Vec<_> = p.terms().map(|(k, _)| k.clone()).collect();
        assert_eq!(keys, vec![vec![-2, 2], vec![0, 0]]);
    }

    #[test]
    fn geometric_quotients() {
        // alpha = (1,-1), lambda = (2,0)
        let one = GroupAlgebraElement::one(2);
        let zma = z(&[-1, 1]);
        let lam = [2, 0];
        let num = &z(&lam) - &z(&[0, 2]);
        let den = &one - &zma;
        let expect = z(&lam) * (&one + &zma);
        assert_eq!(exact_div(&num, &den).unwrap(), expect);
        assert!(exact_div(&(&z(&lam) - &z(&lam)), &den).unwrap().is_zero());
        assert_eq!(
            exact_div(&(&one + &zma), &den),
            Err(LaurentError::NotDivisible)
        );
    }

    #[test]
    fn json_roundtrip() {
        let x = &z(&[1, -2]).scale(&QLaurent::u_pow(3)) - &GroupAlgebraElement::one(2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"rank":2,"terms":[{"exp":[0,0],"coeffs":[[0,-1,1]]},{"exp":[1,-2],"coeffs":[[3,1,1]]}]}"#
        );
        assert_eq!(serde_json::from_str::<GroupAlgebraElement>(&s).unwrap(), x);
        assert!(serde_json::from_str::<GroupAlgebraElement>(
            r#"{"rank":2,"terms":[{"exp":[1],"coeffs":[]}]}"#
        )
        .is_err());
    }
}
