use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{MPoly, Mono};
use super::LaurentError;
use crate::exact::format_rational;

/// Laurent polynomial in u with rational coefficients, where q = u^4.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    coeffs: BTreeMap<i64, BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn qlp_arith(a: &QLaurent, b: &QLaurent, op: ArithOp) -> QLaurent {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn monomial(u_exp: i64, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(u_exp, c);
        }
        QLaurent { coeffs }
    }

    /// u^e.
    pub fn u_pow(e: i64) -> Self {
        Self::monomial(e, BigRational::one())
    }

    /// q^a for a in (1/4)Z.
    pub fn q_pow(a: &BigRational) -> Result<Self, LaurentError> {
        Ok(Self::u_pow(q_exponent_to_u(a)?))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, u_exp: i64) -> BigRational {
        self.coeffs
            .get(&u_exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The single (exponent, coefficient) pair of a monomial.
    pub fn as_monomial(&self) -> Option<(i64, &BigRational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QLaurent {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn shift(&self, by: i64) -> Self {
        QLaurent {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e + by, v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Embeds as a polynomial in `nvars` variables with u in the last slot and
    /// the given lattice exponent in the others.
    pub(crate) fn to_mpoly_at(&self, lattice: &[i64]) -> MPoly {
        let nvars = lattice.len() + 1;
        let mut p = MPoly::zero(nvars);
        for (e, c) in &self.coeffs {
            let mut m = lattice.to_vec();
            m.push(*e);
            p.add_term(Mono(m), c.clone());
        }
        p
    }

    /// Exact quotient, if one exists in Q[u, u^-1].
    pub fn div_exact(&self, den: &QLaurent) -> Result<QLaurent, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        let q = super::poly::laurent_div_exact(&self.to_mpoly_at(&[]), &den.to_mpoly_at(&[]))
            .ok_or(LaurentError::NotDivisible)?;
        let mut out = QLaurent::zero();
        for (m, c) in q.terms {
            out.add_term(m.0[0], c);
        }
        Ok(out)
    }

    /// Value at a rational point u = x (x nonzero when negative exponents
    /// occur).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 {
                num::pow(x.clone(), *e as usize)
            } else {
                num::pow(x.recip(), (-*e) as usize)
            };
            acc += c * p;
        }
        acc
    }
}

/// Converts a q-exponent a ∈ (1/4)Z to the matching u-exponent 4a.
pub fn q_exponent_to_u(a: &BigRational) -> Result<i64, LaurentError> {
    let four = a * BigRational::from_integer(BigInt::from(4));
    if !four.is_integer() {
        return Err(LaurentError::NotQuarterInteger(format_rational(a)));
    }
    num::ToPrimitive::to_i64(four.numer())
        .ok_or_else(|| LaurentError::NotQuarterInteger(format_rational(a)))
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut r = self.clone();
        for (e, c) in &rhs.coeffs {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut r = self.clone();
        for (e, c) in &rhs.coeffs {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut r = QLaurent::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(QLaurent, Add add, Sub sub, Mul mul);

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl fmt::Display for QLaurent {
    /// Terms in decreasing u-degree, e.g. `u^4 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = a.is_one();
            if *e == 0 {
                write!(f, "{}", format_rational(&a))?;
                continue;
            }
            if !unit {
                write!(f, "{}*", format_rational(&a))?;
            }
            if *e == 1 {
                f.write_str("u")?;
            } else {
                write!(f, "u^{e}")?;
            }
        }
        Ok(())
    }
}

/// JSON: a list of `[uexp, num, den]` triples.
impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<super::CoeffRow> = self
            .coeffs
            .iter()
            .map(|(e, c)| super::CoeffRow::new(*e, c))
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<super::CoeffRow> = Vec::deserialize(d)?;
        let mut out = QLaurent::zero();
        for r in rows {
            let (e, c) = r.into_parts().map_err(serde::de::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    #[test]
    fn spec_arith_examples() {
        let a = &QLaurent::one() + &QLaurent::u_pow(2);
        let b = &QLaurent::one() - &QLaurent::u_pow(2);
        assert_eq!(
            qlp_arith(&a, &b, ArithOp::Mul),
            &QLaurent::one() - &QLaurent::u_pow(4)
        );
        let qq = QLaurent::q_pow(&qi(1)).unwrap();
        let qinv = QLaurent::q_pow(&qi(-1)).unwrap();
        assert!(qlp_arith(&qq, &qinv, ArithOp::Mul).is_one());
        let qm1 = &qq - &QLaurent::one();
        assert_eq!(qlp_arith(&qm1, &QLaurent::one(), ArithOp::Add), qq);
    }

    #[test]
    fn quarter_exponents() {
        assert_eq!(QLaurent::q_pow(&q(3, 4)).unwrap(), QLaurent::u_pow(3));
        assert!(matches!(
            QLaurent::q_pow(&q(1, 3)),
            Err(LaurentError::NotQuarterInteger(_))
        ));
    }

    #[test]
    fn display_and_json() {
        let x = &QLaurent::u_pow(4) - &QLaurent::monomial(-1, q(1, 2));
        assert_eq!(x.to_string(), "u^4 - 1/2*u^-1");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[-1,-1,2],[4,1,1]]");
        assert_eq!(serde_json::from_str::<QLaurent>(&s).unwrap(), x);
    }

    #[test]
    fn univariate_division() {
        let num = &QLaurent::u_pow(8) - &QLaurent::one();
        let den = &QLaurent::u_pow(4) - &QLaurent::one();
        assert_eq!(
            num.div_exact(&den).unwrap(),
            &QLaurent::u_pow(4) + &QLaurent::one()
        );
        assert_eq!(den.div_exact(&num), Err(LaurentError::NotDivisible));
    }
}
