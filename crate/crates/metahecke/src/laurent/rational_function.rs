use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::group_algebra::{exact_div, GroupAlgebraElement};
use super::poly;
use super::qlaurent::QLaurent;
use super::LaurentError;

/// Quotient of two group-algebra elements.
///
/// In canonical form numerator and denominator are coprime, the denominator
/// is a polynomial not divisible by any variable, and its graded-lex leading
/// coefficient is 1. Two rational functions are equal iff their canonical
/// forms coincide.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFunction {
    num: GroupAlgebraElement,
    den: GroupAlgebraElement,
    canonical: bool,
}

/// Canonical form of num/den.
pub fn rf_normalize(
    num: &GroupAlgebraElement,
    den: &GroupAlgebraElement,
) -> Result<RationalFunction, LaurentError> {
    if num.rank() != den.rank() {
        return Err(LaurentError::RankMismatch {
            left: num.rank(),
            right: den.rank(),
        });
    }
    if den.is_zero() {
        return Err(LaurentError::ZeroDenominator);
    }
    let rank = num.rank();
    if num.is_zero() {
        return Ok(RationalFunction::zero(rank));
    }
    let pn = num.to_mpoly();
    let pd = den.to_mpoly();
    let g = poly::laurent_gcd(&pn, &pd);
    let n = poly::laurent_div_exact(&pn, &g).expect("gcd divides numerator");
    let d = poly::laurent_div_exact(&pd, &g).expect("gcd divides denominator");
    let (d, m) = d.strip_monomial();
    let neg: Vec<i64> = m.iter().map(|e| -e).collect();
    let n = n.shift(&neg);
    let lc = d.leading().expect("nonzero denominator").1.recip();
    Ok(RationalFunction {
        num: GroupAlgebraElement::from_mpoly(rank, &n.scale(&lc)),
        den: GroupAlgebraElement::from_mpoly(rank, &d.scale(&lc)),
        canonical: true,
    })
}

impl RationalFunction {
    /// Unreduced quotient; see [`rf_normalize`] for the canonical form.
    pub fn new(num: GroupAlgebraElement, den: GroupAlgebraElement) -> Result<Self, LaurentError> {
        if num.rank() != den.rank() {
            return Err(LaurentError::RankMismatch {
                left: num.rank(),
                right: den.rank(),
            });
        }
        if den.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        Ok(RationalFunction {
            num,
            den,
            canonical: false,
        })
    }

    pub fn from_ga(g: GroupAlgebraElement) -> Self {
        let rank = g.rank();
        RationalFunction {
            num: g,
            den: GroupAlgebraElement::one(rank),
            canonical: true,
        }
    }

    pub fn from_scalar(rank: usize, c: QLaurent) -> Self {
        Self::from_ga(GroupAlgebraElement::scalar(rank, c))
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_ga(GroupAlgebraElement::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_ga(GroupAlgebraElement::one(rank))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn numer(&self) -> &GroupAlgebraElement {
        &self.num
    }

    pub fn denom(&self) -> &GroupAlgebraElement {
        &self.den
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn canonical(&self) -> Self {
        if self.canonical {
            return self.clone();
        }
        rf_normalize(&self.num, &self.den).expect("validated at construction")
    }

    /// Equality of the represented functions (n1·d2 = n2·d1).
    pub fn equals(&self, other: &Self) -> bool {
        self.rank() == other.rank() && &self.num * &other.den == &other.num * &self.den
    }

    /// The Laurent polynomial this function equals, if it is one.
    pub fn as_laurent(&self) -> Option<GroupAlgebraElement> {
        let c = self.canonical();
        if c.den.is_unit() {
            exact_div(&c.num, &c.den).ok()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        rf_normalize(&self.den, &self.num)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, LaurentError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        rf_normalize(&self.num.scale(c), &self.den).expect("nonzero denominator")
    }

    /// Applies an invertible lattice map to numerator and denominator.
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        rf_normalize(&self.num.map_exponents(&f), &self.den.map_exponents(&f))
            .expect("invertible maps keep the denominator nonzero")
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for RationalFunction {}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        rf_normalize(&num, &(&self.den * &rhs.den)).expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        rf_normalize(&(&self.num * &rhs.num), &(&self.den * &rhs.den))
            .expect("nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
            canonical: self.canonical,
        }
    }
}

super::qlaurent::forward_owned!(RationalFunction, Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(e: i64) -> GroupAlgebraElement {
        GroupAlgebraElement::z(&[e])
    }

    fn one() -> GroupAlgebraElement {
        GroupAlgebraElement::one(1)
    }

    #[test]
    fn cancels_common_factor() {
        let r = rf_normalize(&(&one() - &x(2)), &(&one() - &x(1))).unwrap();
        assert_eq!(r.numer(), &(&one() + &x(1)));
        assert_eq!(r.denom(), &one());
    }

    #[test]
    fn zero_numerator() {
        let r = rf_normalize(&GroupAlgebraElement::zero(1), &(&one() - &x(1))).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.denom(), &one());
    }

    #[test]
    fn cancels_q_dependent_factor() {
        let qinv = GroupAlgebraElement::monomial(vec![1], QLaurent::u_pow(-4));
        let a = &one() - &x(1);
        let b = &one() - &qinv;
        let r = rf_normalize(&(&a * &b), &b).unwrap();
        assert_eq!(r.numer(), &a);
        assert_eq!(r.denom(), &one());
    }

    #[test]
    fn monomial_factors_move_to_numerator() {
        // (1 - X^-1) / (X - 1) = X^-1
        let r = rf_normalize(&(&one() - &x(-1)), &(&x(1) - &one())).unwrap();
        assert_eq!(r.numer(), &x(-1));
        assert_eq!(r.denom(), &one());
        assert_eq!(r.as_laurent(), Some(x(-1)));
    }

    #[test]
    fn denominator_is_monic() {
        let r = rf_normalize(&one(), &(&x(1).scale(&QLaurent::from_int(-3)) + &one())).unwrap();
        let lead = r.denom().terms().last().unwrap().1.clone();
        assert_eq!(lead, QLaurent::one());
        assert_eq!(
            r.numer(),
            &GroupAlgebraElement::scalar(1, QLaurent::constant(crate::exact::q(-1, 3)))
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            rf_normalize(&one(), &GroupAlgebraElement::zero(1)).unwrap_err(),
            LaurentError::ZeroDenominator
        );
    }
}
