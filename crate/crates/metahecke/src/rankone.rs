//! Rank-one intertwining algebra.
//!
//! Elements are f(X) + g(X)·J over rational functions in X = Z_{e}, with
//! J·h(X) = h(X⁻¹)·J and J² = c_s·μ⁻¹. The constant c′ in μ is fixed to 1, so
//! c_s = c″. To keep c_s^{1/2} exact, c_s is supplied as the square of a
//! positive rational `c_sqrt`.
//!
//! The relation (T + 1)(T − q^{a+b}) = 0 only sees g·g(X⁻¹), so it cannot
//! detect the sign choices (ε₁, ε₋₁). Those are tested through an explicit
//! realization J = φ(X)·σ (σ: h ↦ h(X⁻¹)), where T_s must map Laurent
//! polynomials to Laurent polynomials.

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, qi};
use crate::laurent::{
    q_exponent_to_u, GroupAlgebraElement, LaurentError, QLaurent, QLaurentPoint, RationalFunction,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankOneError {
    #[error("need a ≥ b ≥ 0, got a = {a}, b = {b}")]
    BadExponents { a: String, b: String },
    #[error("a = b = 0 makes q^(a+b) − 1 vanish")]
    Degenerate,
    #[error("signs must be ±1")]
    BadSign,
    #[error("c must be positive")]
    NonPositiveConstant,
    #[error("sign at X = {point} disagrees with the J realization")]
    InconsistentSigns { point: i8 },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

fn x_pow(k: i64) -> GroupAlgebraElement {
    GroupAlgebraElement::z(&[k])
}

fn cst(c: QLaurent) -> GroupAlgebraElement {
    GroupAlgebraElement::scalar(1, c)
}

fn rf(num: GroupAlgebraElement, den: GroupAlgebraElement) -> RationalFunction {
    crate::laurent::rf_normalize(&num, &den).expect("nonzero denominator")
}

/// h(X) ↦ h(X⁻¹).
pub fn sigma(h: &RationalFunction) -> RationalFunction {
    h.map_exponents(|v| vec![-v[0]])
}

fn check_exponents(a: &BigRational, b: &BigRational) -> Result<(), RankOneError> {
    if b.is_negative() || a < b {
        return Err(RankOneError::BadExponents {
            a: format_rational(a),
            b: format_rational(b),
        });
    }
    q_exponent_to_u(a)?;
    q_exponent_to_u(b)?;
    Ok(())
}

fn check_sign(e: i8) -> Result<(), RankOneError> {
    if e == 1 || e == -1 {
        Ok(())
    } else {
        Err(RankOneError::BadSign)
    }
}

fn q_pow(a: &BigRational) -> QLaurent {
    QLaurent::q_pow(a).expect("checked quarter-integral")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuFunction {
    #[serde(with = "crate::exact::rational")]
    pub a: BigRational,
    #[serde(with = "crate::exact::rational")]
    pub b: BigRational,
    #[serde(with = "crate::exact::rational")]
    pub c_prime: BigRational,
    pub value: RationalFunction,
}

/// μ = c′·(1−X)(1−X⁻¹)/((1−Xq^{−a})(1−X⁻¹q^{−a}))·(1+X)(1+X⁻¹)/((1+Xq^{−b})(1+X⁻¹q^{−b})).
pub fn mu_build(
    a: &BigRational,
    b: &BigRational,
    c_prime: &BigRational,
) -> Result<MuFunction, RankOneError> {
    check_exponents(a, b)?;
    if !c_prime.is_positive() {
        return Err(RankOneError::NonPositiveConstant);
    }
    let one = GroupAlgebraElement::one(1);
    let qa = q_pow(&-a);
    let qb = q_pow(&-b);
    let num = [
        &one - &x_pow(1),
        &one - &x_pow(-1),
        &one + &x_pow(1),
        &one + &x_pow(-1),
    ]
    .iter()
    .fold(cst(QLaurent::constant(c_prime.clone())), |acc, f| &acc * f);
    let den = [
        &one - &x_pow(1).scale(&qa),
        &one - &x_pow(-1).scale(&qa),
        &one + &x_pow(1).scale(&qb),
        &one + &x_pow(-1).scale(&qb),
    ]
    .iter()
    .fold(one.clone(), |acc, f| &acc * f);
    Ok(MuFunction {
        a: a.clone(),
        b: b.clone(),
        c_prime: c_prime.clone(),
        value: rf(num, den),
    })
}

/// A root X = sign·q^{exponent} with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPoint {
    pub sign: i8,
    #[serde(with = "crate::exact::rational")]
    pub q_exponent: BigRational,
    pub multiplicity: usize,
}

impl std::fmt::Display for XPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        if self.q_exponent.is_zero() {
            write!(f, "{s}1")
        } else {
            write!(f, "{s}q^{}", format_rational(&self.q_exponent))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZerosPoles {
    pub zeros: Vec<XPoint>,
    pub poles: Vec<XPoint>,
    /// Degrees of numerator/denominator factors without roots of the form ±q^k.
    pub unresolved: (usize, usize),
}

/// Coefficients (low to high) of the polynomial X^{-min}·p.
fn x_coeffs(p: &GroupAlgebraElement) -> Vec<QLaurent> {
    let exps: Vec<i64> = p.terms().map(|(k, _)| k[0]).collect();
    let (Some(&lo), Some(&hi)) = (exps.iter().min(), exps.iter().max()) else {
        return vec![];
    };
    let mut out = vec![QLaurent::zero(); (hi - lo + 1) as usize];
    for (k, c) in p.terms() {
        out[(k[0] - lo) as usize] = c.clone();
    }
    out
}

/// Divides by (X − r) if the remainder vanishes.
fn divide_linear(c: &[QLaurent], r: &QLaurent) -> Option<Vec<QLaurent>> {
    let n = c.len();
    if n < 2 {
        return None;
    }
    let mut out = vec![QLaurent::zero(); n - 1];
    let mut carry = QLaurent::zero();
    for j in (1..n).rev() {
        carry = &c[j] + &(&carry * r);
        out[j - 1] = carry.clone();
    }
    let rem = &c[0] + &(&carry * r);
    rem.is_zero().then_some(out)
}

fn roots_of(p: &GroupAlgebraElement) -> (Vec<XPoint>, usize) {
    let mut c = x_coeffs(p);
    while c.first().is_some_and(|x| x.is_zero()) {
        c.remove(0);
    }
    let span = c
        .iter()
        .flat_map(|x| x.terms().map(|(e, _)| e))
        .fold((0i64, 0i64), |(lo, hi), e| (lo.min(e), hi.max(e)));
    let bound = span.1 - span.0 + 4;
    let mut found = Vec::new();
    for k in -bound..=bound {
        for sign in [1i8, -1] {
            let r = QLaurent::monomial(k, qi(sign as i64));
            let mut mult = 0;
            while let Some(next) = divide_linear(&c, &r) {
                c = next;
                mult += 1;
            }
            if mult > 0 {
                found.push(XPoint {
                    sign,
                    q_exponent: BigRational::new(k.into(), 4.into()),
                    multiplicity: mult,
                });
            }
        }
    }
    (found, c.len().saturating_sub(1))
}

/// Zeros and poles of the canonical form.
pub fn mu_zeros_poles(m: &MuFunction) -> ZerosPoles {
    let c = m.value.canonical();
    let (zeros, zn) = roots_of(c.numer());
    let (poles, pn) = roots_of(c.denom());
    ZerosPoles {
        zeros,
        poles,
        unresolved: (zn, pn),
    }
}

/// f + g·J.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneElement {
    pub f: RationalFunction,
    pub g: RationalFunction,
}

impl RankOneElement {
    pub fn new(f: RationalFunction, g: RationalFunction) -> Self {
        RankOneElement { f, g }
    }

    pub fn scalar_part(f: RationalFunction) -> Self {
        RankOneElement {
            f,
            g: RationalFunction::zero(1),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RankOneElement {
            f: &self.f + &other.f,
            g: &self.g + &other.g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }
}

/// Rank-one algebra for fixed (a, b, c_s = c_sqrt²).
#[derive(Clone, Debug)]
pub struct RankOneAlgebra {
    pub a: BigRational,
    pub b: BigRational,
    pub c_sqrt: BigRational,
    mu: MuFunction,
    j_square: RationalFunction,
}

impl RankOneAlgebra {
    pub fn new(
        a: &BigRational,
        b: &BigRational,
        c_sqrt: &BigRational,
    ) -> Result<Self, RankOneError> {
        if !c_sqrt.is_positive() {
            return Err(RankOneError::NonPositiveConstant);
        }
        let mu = mu_build(a, b, &BigRational::one())?;
        let c = QLaurent::constant(c_sqrt * c_sqrt);
        let j_square = mu.value.inv()?.scale(&c);
        Ok(RankOneAlgebra {
            a: a.clone(),
            b: b.clone(),
            c_sqrt: c_sqrt.clone(),
            mu,
            j_square,
        })
    }

    pub fn mu(&self) -> &MuFunction {
        &self.mu
    }

    /// c_s·μ⁻¹.
    pub fn j_square(&self) -> &RationalFunction {
        &self.j_square
    }

    pub fn j(&self) -> RankOneElement {
        RankOneElement::new(RationalFunction::zero(1), RationalFunction::one(1))
    }

    pub fn x(&self, k: i64) -> RankOneElement {
        RankOneElement::scalar_part(RationalFunction::from_ga(x_pow(k)))
    }

    pub fn constant(&self, c: QLaurent) -> RankOneElement {
        RankOneElement::scalar_part(RationalFunction::from_scalar(1, c))
    }

    /// (f₁+g₁J)(f₂+g₂J) = (f₁f₂ + g₁g₂^σ c_sμ⁻¹) + (f₁g₂ + g₁f₂^σ)J.
    pub fn mul(&self, x: &RankOneElement, y: &RankOneElement) -> RankOneElement {
        let f = &(&x.f * &y.f) + &(&(&x.g * &sigma(&y.g)) * &self.j_square);
        let g = &(&x.f * &y.g) + &(&x.g * &sigma(&y.f));
        RankOneElement { f, g }
    }
}

/// T_s = f + g·J with f = (Q−1)·X(X − c)/(X² − 1), c = (q^b − q^a)/(Q − 1),
/// g = −ε₁·Q·c_s^{−1/2}·X^e, Q = q^{a+b}; e = 1 when ε₁b = ε₋₁b, else 0.
pub fn build_ts(
    a: &BigRational,
    b: &BigRational,
    eps1: i8,
    epsm1: i8,
    c_sqrt: &BigRational,
) -> Result<RankOneElement, RankOneError> {
    check_exponents(a, b)?;
    check_sign(eps1)?;
    check_sign(epsm1)?;
    if a.is_zero() && b.is_zero() {
        return Err(RankOneError::Degenerate);
    }
    if !c_sqrt.is_positive() {
        return Err(RankOneError::NonPositiveConstant);
    }
    let big_q = q_pow(&(a + b));
    let qm1 = &big_q - &QLaurent::one();
    let diff = &q_pow(b) - &q_pow(a);
    // X((Q−1)X − (q^b − q^a)) / (X² − 1)
    let num = &x_pow(2).scale(&qm1) - &x_pow(1).scale(&diff);
    let den = &x_pow(2) - &GroupAlgebraElement::one(1);
    let f = rf(num, den);
    let e = if b.is_zero() || eps1 == epsm1 { 1 } else { 0 };
    let g_coeff = big_q.scale(&(-qi(eps1 as i64) / c_sqrt));
    let g = RationalFunction::from_ga(x_pow(e).scale(&g_coeff));
    Ok(RankOneElement { f, g })
}

/// J = φ(X)·σ with φ = η·c_s^{1/2}·X^k·(X − q^{−a})(X + q^{−b})/((X − 1)(X + 1)),
/// so that φ·φ^σ = c_s·μ⁻¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JRealization {
    pub eta: i8,
    pub k: i64,
    #[serde(with = "crate::exact::rational")]
    pub c_sqrt: BigRational,
}

impl JRealization {
    /// The realization whose residues at X = 1 and X = −1 carry the signs
    /// ε₁ and ε₋₁: η = ε₁ and (−1)^k = −ε₋₁ε₁.
    pub fn from_signs(eps1: i8, epsm1: i8, c_sqrt: &BigRational) -> Self {
        JRealization {
            eta: eps1,
            k: if eps1 == epsm1 { 1 } else { 0 },
            c_sqrt: c_sqrt.clone(),
        }
    }

    pub fn phi(&self, a: &BigRational, b: &BigRational) -> RationalFunction {
        let one = GroupAlgebraElement::one(1);
        let coeff = QLaurent::constant(&self.c_sqrt * qi(self.eta as i64));
        let num = [&x_pow(1) - &cst(q_pow(&-a)), &x_pow(1) + &cst(q_pow(&-b))]
            .iter()
            .fold(x_pow(self.k).scale(&coeff), |acc, f| &acc * f);
        let den = &x_pow(2) - &one;
        rf(num, den)
    }
}

/// p(x) for a canonical rank-one function, as (numerator value, denominator value).
fn eval_at(h: &RationalFunction, x: i64) -> (QLaurent, QLaurent) {
    let pt = [QLaurentPoint {
        coeff: qi(x),
        u_exp: 0,
    }];
    let c = h.canonical();
    (c.numer().eval_lattice(&pt), c.denom().eval_lattice(&pt))
}

/// Checks that sp_{±1}((X ∓ 1)φ) = ε_{±1}·½c_s^{1/2}(1 ∓ q^{−a})(1 ± q^{−b}).
/// The squared identities hold for every sign pair; the signs themselves
/// are what is compared. At b = 0 the value at X = −1 vanishes and ε₋₁ is
/// unconstrained.
pub fn check_sign_consistency(
    a: &BigRational,
    b: &BigRational,
    eps1: i8,
    epsm1: i8,
    j: &JRealization,
) -> Result<(), RankOneError> {
    check_exponents(a, b)?;
    check_sign(eps1)?;
    check_sign(epsm1)?;
    let phi = j.phi(a, b);
    let half = QLaurent::constant(&j.c_sqrt / qi(2));
    let one = QLaurent::one();
    let qa = q_pow(&-a);
    let qb = q_pow(&-b);
    let points: [(i8, i8, GroupAlgebraElement, QLaurent); 2] = [
        (
            1,
            eps1,
            &x_pow(1) - &GroupAlgebraElement::one(1),
            &(&half * &(&one - &qa)) * &(&one + &qb),
        ),
        (
            -1,
            epsm1,
            &x_pow(1) + &GroupAlgebraElement::one(1),
            &(&half * &(&one + &qa)) * &(&one - &qb),
        ),
    ];
    for (x, eps, lin, magnitude) in points {
        let (n, d) = eval_at(&(&phi * &RationalFunction::from_ga(lin)), x as i64);
        let expected = magnitude.scale(&qi(eps as i64));
        let squared_ok = &n * &n == &(&magnitude * &magnitude) * &(&d * &d);
        if !squared_ok || n != &expected * &d {
            return Err(RankOneError::InconsistentSigns { point: x });
        }
    }
    Ok(())
}

/// Residue of (T+1)(T−Q) in both coordinates.
pub fn quadratic_residue(alg: &RankOneAlgebra, t: &RankOneElement) -> RankOneElement {
    let big_q = q_pow(&(&alg.a + &alg.b));
    let plus = t.add(&alg.constant(QLaurent::one()));
    let minus = t.add(&alg.constant(-big_q));
    alg.mul(&plus, &minus)
}

/// T = f + G·σ with G = g·φ maps Laurent polynomials to Laurent polynomials
/// iff f + G and G·(X − X⁻¹) are Laurent.
pub fn poles_cancel(t: &RankOneElement, phi: &RationalFunction) -> bool {
    let big_g = &t.g * phi;
    let sum = &t.f + &big_g;
    let antisym = RationalFunction::from_ga(&x_pow(1) - &x_pow(-1));
    sum.as_laurent().is_some() && (&big_g * &antisym).as_laurent().is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticReport {
    #[serde(with = "crate::exact::rational")]
    pub a: BigRational,
    #[serde(with = "crate::exact::rational")]
    pub b: BigRational,
    pub eps1: i8,
    pub epsm1: i8,
    pub quadratic_ok: bool,
    pub poles_cancel: bool,
    pub mu_zeros: Vec<String>,
    pub mu_poles: Vec<String>,
}

impl QuadraticReport {
    pub fn ok(&self) -> bool {
        self.quadratic_ok && self.poles_cancel
    }
}

fn expand_points(points: &[XPoint]) -> Vec<String> {
    points
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.to_string(), p.multiplicity))
        .collect()
}

/// Builds T_s from (ε₁, ε₋₁), checks it against the J realization `j`, and
/// reports both the quadratic relation and pole cancellation.
pub fn verify_quadratic_with_j(
    a: &BigRational,
    b: &BigRational,
    eps1: i8,
    epsm1: i8,
    j: &JRealization,
) -> Result<QuadraticReport, RankOneError> {
    let alg = RankOneAlgebra::new(a, b, &j.c_sqrt)?;
    let t = build_ts(a, b, eps1, epsm1, &j.c_sqrt)?;
    let quadratic_ok = quadratic_residue(&alg, &t).is_zero();
    let poles_cancel = poles_cancel(&t, &j.phi(a, b));
    let zp = mu_zeros_poles(alg.mu());
    Ok(QuadraticReport {
        a: a.clone(),
        b: b.clone(),
        eps1,
        epsm1,
        quadratic_ok,
        poles_cancel,
        mu_zeros: expand_points(&zp.zeros),
        mu_poles: expand_points(&zp.poles),
    })
}

/// Full report with c_s = 1 and the J realization determined by the signs.
pub fn verify_quadratic_report(
    a: &BigRational,
    b: &BigRational,
    eps1: i8,
    epsm1: i8,
) -> Result<QuadraticReport, RankOneError> {
    let j = JRealization::from_signs(eps1, epsm1, &BigRational::one());
    check_sign_consistency(a, b, eps1, epsm1, &j)?;
    verify_quadratic_with_j(a, b, eps1, epsm1, &j)
}

/// (T_s + 1)(T_s − q^{a+b}) = 0 and T_s preserves Laurent polynomials.
pub fn verify_quadratic(
    a: &BigRational,
    b: &BigRational,
    eps1: i8,
    epsm1: i8,
) -> Result<bool, RankOneError> {
    Ok(verify_quadratic_report(a, b, eps1, epsm1)?.ok())
}

/// J² = c_s μ⁻¹, (J·X)² = c_s μ⁻¹ and (X·J)² = c_s μ⁻¹.
pub fn j_square_check(a: &BigRational, b: &BigRational) -> Result<bool, RankOneError> {
    let alg = RankOneAlgebra::new(a, b, &BigRational::one())?;
    let target = RankOneElement::scalar_part(alg.j_square().clone());
    let j = alg.j();
    let jx = alg.mul(&j, &alg.x(1));
    let xj = alg.mul(&alg.x(1), &j);
    Ok([j, jx, xj].iter().all(|e| alg.mul(e, e) == target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn x(k: i64) -> RationalFunction {
        RationalFunction::from_ga(x_pow(k))
    }

    #[test]
    fn mu_symmetric_and_b_zero_cancels() {
        let m = mu_build(&qi(1), &qi(0), &qi(1)).unwrap();
        assert_eq!(sigma(&m.value), m.value);
        let one = GroupAlgebraElement::one(1);
        let qinv = QLaurent::u_pow(-4);
        let expect = rf(
            &(&one - &x_pow(1)) * &(&one - &x_pow(-1)),
            &(&one - &x_pow(1).scale(&qinv)) * &(&one - &x_pow(-1).scale(&qinv)),
        );
        assert_eq!(m.value, expect);
        assert_eq!(eval_at(&m.value, 1).0, QLaurent::zero());
        let m11 = mu_build(&qi(1), &qi(1), &qi(1)).unwrap();
        assert_eq!(eval_at(&m11.value, -1).0, QLaurent::zero());
        assert!(mu_build(&qi(0), &qi(1), &qi(1)).is_err());
    }

    #[test]
    fn zeros_and_poles() {
        let zp = mu_zeros_poles(&mu_build(&qi(1), &qi(0), &qi(1)).unwrap());
        assert_eq!(
            zp.zeros,
            vec![XPoint {
                sign: 1,
                q_exponent: qi(0),
                multiplicity: 2
            }]
        );
        let poles: Vec<String> = zp
            .poles
            .iter()
            .map(|p| format!("{p}x{}", p.multiplicity))
            .collect();
        assert_eq!(poles, vec!["q^-1x1", "q^1x1"]);
        let zp = mu_zeros_poles(&mu_build(&qi(2), &qi(1), &qi(1)).unwrap());
        let mut poles: Vec<String> = zp.poles.iter().map(|p| p.to_string()).collect();
        poles.sort();
        assert_eq!(poles, vec!["-q^-1", "-q^1", "q^-2", "q^2"]);
        assert!(zp.poles.iter().all(|p| p.multiplicity == 1));
        assert_eq!(zp.unresolved, (0, 0));
        let constant = mu_zeros_poles(&mu_build(&qi(0), &qi(0), &qi(1)).unwrap());
        assert!(constant.zeros.is_empty() && constant.poles.is_empty());
    }

    #[test]
    fn ts_f_parts() {
        let t = build_ts(&qi(1), &qi(0), 1, -1, &qi(1)).unwrap();
        let qm1 = &QLaurent::u_pow(4) - &QLaurent::one();
        let expect = &x(1)
            * &rf(
                GroupAlgebraElement::one(1),
                &x_pow(1) - &GroupAlgebraElement::one(1),
            );
        assert_eq!(t.f, expect.scale(&qm1));
        assert_eq!(t.g, x(1).scale(&-QLaurent::u_pow(4)));
        let t11 = build_ts(&qi(1), &qi(1), 1, 1, &qi(1)).unwrap();
        let qq = &QLaurent::u_pow(8) - &QLaurent::one();
        let expect = rf(
            x_pow(2).scale(&qq),
            &x_pow(2) - &GroupAlgebraElement::one(1),
        );
        assert_eq!(t11.f, expect);
        assert_eq!(
            build_ts(&qi(0), &qi(0), 1, 1, &qi(1)).unwrap_err(),
            RankOneError::Degenerate
        );
    }

    #[test]
    fn quadratic_holds_for_consistent_signs() {
        for (a, b) in [(qi(1), qi(0)), (qi(2), qi(1)), (q(3, 2), q(1, 2))] {
            for e1 in [1, -1] {
                for em1 in [1, -1] {
                    assert!(
                        verify_quadratic(&a, &b, e1, em1).unwrap(),
                        "{a} {b} {e1} {em1}"
                    );
                }
            }
        }
    }

    #[test]
    fn flipped_sign_is_detected() {
        let (a, b) = (qi(2), qi(1));
        let j = JRealization::from_signs(1, -1, &qi(1));
        let rep = verify_quadratic_with_j(&a, &b, 1, 1, &j).unwrap();
        assert!(rep.quadratic_ok);
        assert!(!rep.poles_cancel);
        assert_eq!(
            check_sign_consistency(&a, &b, 1, 1, &j).unwrap_err(),
            RankOneError::InconsistentSigns { point: -1 }
        );
        assert_eq!(
            check_sign_consistency(&a, &b, -1, -1, &j).unwrap_err(),
            RankOneError::InconsistentSigns { point: 1 }
        );
        // At b = 0 the value at X = −1 vanishes.
        let j0 = JRealization::from_signs(1, -1, &qi(1));
        assert!(check_sign_consistency(&qi(1), &qi(0), 1, 1, &j0).is_ok());
    }

    #[test]
    fn j_square_relations() {
        assert!(j_square_check(&qi(1), &qi(0)).unwrap());
        assert!(j_square_check(&q(3, 2), &q(1, 2)).unwrap());
    }

    #[test]
    fn nontrivial_c_is_carried() {
        let c = q(3, 2);
        let j = JRealization::from_signs(-1, 1, &c);
        check_sign_consistency(&qi(2), &qi(1), -1, 1, &j).unwrap();
        let rep = verify_quadratic_with_j(&qi(2), &qi(1), -1, 1, &j).unwrap();
        assert!(rep.ok());
        let alg = RankOneAlgebra::new(&qi(2), &qi(1), &c).unwrap();
        assert_eq!(
            &j.phi(&qi(2), &qi(1)) * &sigma(&j.phi(&qi(2), &qi(1))),
            *alg.j_square()
        );
    }
}
