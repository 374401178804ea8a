//! Affine Hecke algebras with unequal parameters in Bernstein normal form.
//!
//! Elements are stored as Σ_w P_w·U_w with P_w in the lattice group algebra
//! (lattice part on the left). Products are normalized with
//!
//! ```text
//! U_s Z_μ   = Z_{sμ} U_s − C(sμ),      C(λ) = Z_λ U_s − U_s Z_{sλ}
//! U_s U_x   = U_{sx}                   if ℓ(sx) > ℓ(x)
//!           = (q_α − 1) U_x + q_α U_{sx} otherwise
//! ```
//!
//! where C(λ) is the commutation correction computed by [`commute_zu`].

mod chamber;
mod extended;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::format_rational;
use crate::laurent::{q_exponent_to_u, GroupAlgebraElement, LaurentError, QLaurent};
use crate::rootdata::{
    braid_order, coroot_in_2lambda, reduced_word, BasedRootDatum, DatumSpec, RootDataError,
    WeylElement, ENUMERATION_GUARD,
};

pub use chamber::{
    chamber_report, sqint_check, tempered_check, ChamberReport, ExponentChar, ModuleExponents,
};
pub use extended::{ext_mul, CocycleEntry, ExtendedHeckeAlgebra, ExtendedHeckeElement, RGroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("elements belong to different Hecke algebras")]
    DatumMismatch,
    #[error("expected {expected} simple-root exponents, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("exponent for simple root {0} must be positive")]
    NonPositive(usize),
    #[error("simple roots {0} and {1} are conjugate but carry different exponents")]
    UnequalConjugate(usize, usize),
    #[error("component {0} has a simple root with coroot in 2Λ∨ but no q_i exponent")]
    MissingSpecial(usize),
    #[error("component {0} has no simple root with coroot in 2Λ∨ but a q_i exponent was given")]
    UnexpectedSpecial(usize),
    #[error("q_i exponent for component {0} must be nonnegative")]
    NegativeSpecial(usize),
    #[error("(a ± b)/2 not in (1/4)Z for simple root {0}")]
    HalfExponent(usize),
    #[error("simple root index {0} out of range")]
    BadSimpleIndex(usize),
    #[error("lattice vector has length {got}, rank is {rank}")]
    Dimension { rank: usize, got: usize },
    #[error("{0}")]
    RGroup(String),
    #[error("cocycle identity fails at ({0}, {1}, {2})")]
    Cocycle(usize, usize, usize),
}

/// q-exponent of the extra parameter q_i on one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialParam {
    pub component: usize,
    #[serde(with = "crate::exact::rational")]
    pub exponent: BigRational,
}

/// Exponents a(α) with q_α = q^{a(α)} per simple root (base order) and b(i)
/// with q_i = q^{b(i)} for components whose special simple root has coroot in
/// 2Λ∨.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeParams {
    #[serde(rename = "alpha_exponents", with = "crate::exact::rational_vec")]
    pub alpha: Vec<BigRational>,
    #[serde(default)]
    pub special: Vec<SpecialParam>,
}

impl HeckeParams {
    pub fn new(alpha: Vec<BigRational>, special: Vec<(usize, BigRational)>) -> Self {
        HeckeParams {
            alpha,
            special: special
                .into_iter()
                .map(|(component, exponent)| SpecialParam {
                    component,
                    exponent,
                })
                .collect(),
        }
    }

    pub fn special_for(&self, component: usize) -> Option<&BigRational> {
        self.special
            .iter()
            .find(|s| s.component == component)
            .map(|s| &s.exponent)
    }
}

/// JSON-level presentation: datum, parameters and optional R-group data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub datum: DatumSpec,
    pub params: HeckeParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended: Option<RGroupSpec>,
}

#[derive(Clone, Debug)]
struct TwoLambda {
    plus: QLaurent,
    minus: QLaurent,
}

/// Datum, validated parameters and precomputed constants.
#[derive(Debug)]
pub struct HeckeAlgebra {
    datum: BasedRootDatum,
    params: HeckeParams,
    reflections: Vec<WeylElement>,
    q_alpha: Vec<QLaurent>,
    two_lambda: Vec<Option<TwoLambda>>,
    flags: Vec<String>,
}

impl PartialEq for HeckeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.datum == other.datum && self.params == other.params
    }
}

impl HeckeAlgebra {
    pub fn new(datum: BasedRootDatum, params: HeckeParams) -> Result<Arc<Self>, HeckeError> {
        let n = datum.num_simple();
        if params.alpha.len() != n {
            return Err(HeckeError::ParamCount {
                expected: n,
                got: params.alpha.len(),
            });
        }
        for (i, a) in params.alpha.iter().enumerate() {
            if !a.is_positive() {
                return Err(HeckeError::NonPositive(i));
            }
        }
        // Simple roots joined by an odd braid relation are W-conjugate.
        for i in 0..n {
            for j in i + 1..n {
                if braid_order(i, j, &datum) == 3 && params.alpha[i] != params.alpha[j] {
                    return Err(HeckeError::UnequalConjugate(i, j));
                }
            }
        }
        let mut flags = Vec::new();
        let mut two_lambda = vec![None; n];
        let mut needs_special = BTreeSet::new();
        for (i, slot) in two_lambda.iter_mut().enumerate() {
            if coroot_in_2lambda(&datum.simple(i).root, &datum) != Some(true) {
                continue;
            }
            let comp = datum.component_of_simple(i);
            needs_special.insert(comp);
            let b = params
                .special_for(comp)
                .ok_or(HeckeError::MissingSpecial(comp))?;
            if b.is_negative() {
                return Err(HeckeError::NegativeSpecial(comp));
            }
            if b.is_zero() {
                flags.push(format!("q_i = q^0 on component {comp}"));
            }
            let a = &params.alpha[i];
            let half = BigRational::new(1.into(), 2.into());
            let plus =
                q_exponent_to_u(&((a + b) * &half)).map_err(|_| HeckeError::HalfExponent(i))?;
            let minus =
                q_exponent_to_u(&((a - b) * &half)).map_err(|_| HeckeError::HalfExponent(i))?;
            *slot = Some(TwoLambda {
                plus: QLaurent::u_pow(plus),
                minus: QLaurent::u_pow(minus),
            });
        }
        for s in &params.special {
            if !needs_special.contains(&s.component) {
                return Err(HeckeError::UnexpectedSpecial(s.component));
            }
        }
        let q_alpha = params
            .alpha
            .iter()
            .map(QLaurent::q_pow)
            .collect::<Result<Vec<_>, _>>()?;
        let reflections = (0..n).map(|i| datum.simple_reflection(i)).collect();
        Ok(Arc::new(HeckeAlgebra {
            datum,
            params,
            reflections,
            q_alpha,
            two_lambda,
            flags,
        }))
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Arc<Self>, HeckeError> {
        let datum = BasedRootDatum::from_spec(&spec.datum)?;
        Self::new(datum, spec.params.clone())
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn params(&self) -> &HeckeParams {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Notes about degenerate but accepted parameters (e.g. q_i = 1).
    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    pub fn q_alpha(&self, i: usize) -> &QLaurent {
        &self.q_alpha[i]
    }

    pub fn uses_two_lambda(&self, i: usize) -> bool {
        self.two_lambda[i].is_some()
    }
}

/// Normal-form element Σ_w P_w·U_w.
#[derive(Clone, Debug)]
pub struct HeckeElement {
    alg: Arc<HeckeAlgebra>,
    terms: BTreeMap<WeylElement, GroupAlgebraElement>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

fn same_algebra(a: &Arc<HeckeAlgebra>, b: &Arc<HeckeAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl HeckeElement {
    pub fn zero(alg: &Arc<HeckeAlgebra>) -> Self {
        HeckeElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<HeckeAlgebra>) -> Self {
        Self::lattice(alg, GroupAlgebraElement::one(alg.rank()))
    }

    /// P·U_e.
    pub fn lattice(alg: &Arc<HeckeAlgebra>, p: GroupAlgebraElement) -> Self {
        Self::term(alg, p, WeylElement::identity(alg.rank()))
    }

    /// Z_λ.
    pub fn z(alg: &Arc<HeckeAlgebra>, lambda: &[i64]) -> Self {
        Self::lattice(alg, GroupAlgebraElement::z(lambda))
    }

    /// U_w.
    pub fn u(alg: &Arc<HeckeAlgebra>, w: WeylElement) -> Self {
        Self::term(alg, GroupAlgebraElement::one(alg.rank()), w)
    }

    /// U_{s_i}.
    pub fn u_simple(alg: &Arc<HeckeAlgebra>, i: usize) -> Self {
        Self::u(alg, alg.reflections[i].clone())
    }

    /// P·U_w.
    pub fn term(alg: &Arc<HeckeAlgebra>, p: GroupAlgebraElement, w: WeylElement) -> Self {
        let mut x = Self::zero(alg);
        x.add_term(w, p);
        x
    }

    pub fn scalar(alg: &Arc<HeckeAlgebra>, c: QLaurent) -> Self {
        Self::lattice(alg, GroupAlgebraElement::scalar(alg.rank(), c))
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylElement, &GroupAlgebraElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &WeylElement) -> GroupAlgebraElement {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| GroupAlgebraElement::zero(self.alg.rank()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(|p| p.num_terms()).sum()
    }

    pub fn add_term(&mut self, w: WeylElement, p: GroupAlgebraElement) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = &*v + &p;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, p);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(w.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HeckeElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, p)| (w.clone(), -p)).collect(),
        }
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(&self.alg);
        for (w, p) in &self.terms {
            out.add_term(w.clone(), p.scale(c));
        }
        out
    }

    /// Left multiplication by a lattice element.
    pub fn lattice_mul(&self, p: &GroupAlgebraElement) -> Self {
        let mut out = Self::zero(&self.alg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), p * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HeckeError> {
        he_mul(self, other)
    }

    fn check(&self, other: &Self) -> Result<(), HeckeError> {
        if same_algebra(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(HeckeError::DatumMismatch)
        }
    }

    /// U_{s_i}·self in normal form.
    fn left_mul_simple(&self, i: usize) -> Self {
        let alg = &self.alg;
        let s = &alg.reflections[i];
        let alpha = &alg.datum.simple(i).root;
        let q = &alg.q_alpha[i];
        let qm1 = q - &QLaurent::one();
        let mut out = Self::zero(alg);
        for (x, p) in &self.terms {
            let sp = p.map_exponents(|k| s.act(k));
            let corr = correction_of(alg, i, &sp);
            let sx = s.compose(x);
            let ascent = alg.datum.root_sign(&x.inverse().act(alpha)) == Some(true);
            if ascent {
                out.add_term(sx, sp);
            } else {
                out.add_term(x.clone(), sp.scale(&qm1));
                out.add_term(sx, sp.scale(q));
            }
            out.add_term(x.clone(), -corr);
        }
        out
    }

    /// U_w·self.
    fn left_mul_u(&self, w: &WeylElement) -> Self {
        let word = reduced_word(w, &self.alg.datum).expect("terms are indexed by Weyl elements");
        word.iter()
            .rev()
            .fold(self.clone(), |acc, &i| acc.left_mul_simple(i))
    }

    /// Applies an automorphism of the datum: Z_λ ↦ Z_{rλ}, U_w ↦ U_{rwr⁻¹}.
    pub fn conjugate_by(&self, r: &WeylElement) -> Self {
        let rinv = r.inverse();
        let mut out = Self::zero(&self.alg);
        for (w, p) in &self.terms {
            out.add_term(r.compose(w).compose(&rinv), p.map_exponents(|k| r.act(k)));
        }
        out
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, p)| {
                if w.is_identity() {
                    format!("({p})")
                } else {
                    let word = reduced_word(w, &self.alg.datum).unwrap_or_default();
                    let word: Vec<String> = word.iter().map(|i| format!("s{}", i + 1)).collect();
                    format!("({p})*U[{}]", word.join(""))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// (Z_λ − Z_{λ−nβ}) / (1 − Z_{−β}) as an explicit geometric sum.
fn geometric(lambda: &[i64], beta: &[i64], n: i64) -> GroupAlgebraElement {
    let rank = lambda.len();
    let mut out = GroupAlgebraElement::zero(rank);
    let at = |j: i64| -> Vec<i64> { lambda.iter().zip(beta).map(|(l, b)| l - j * b).collect() };
    if n > 0 {
        for j in 0..n {
            out.add_term(at(j), QLaurent::one());
        }
    } else {
        for j in 1..=-n {
            out.add_term(at(-j), -QLaurent::one());
        }
    }
    out
}

fn correction_monomial(
    alg: &HeckeAlgebra,
    i: usize,
    lambda: &[i64],
) -> Result<GroupAlgebraElement, HeckeError> {
    let pair = alg.datum.simple(i);
    let pairing: i64 = lambda.iter().zip(&pair.coroot).map(|(a, b)| a * b).sum();
    if pairing == 0 {
        return Ok(GroupAlgebraElement::zero(alg.rank()));
    }
    let alpha = &pair.root;
    let qm1 = &alg.q_alpha[i] - &QLaurent::one();
    match &alg.two_lambda[i] {
        None => Ok(geometric(lambda, alpha, pairing).scale(&qm1)),
        Some(tl) => {
            if pairing % 2 != 0 {
                return Err(LaurentError::NotDivisible.into());
            }
            let two_alpha: Vec<i64> = alpha.iter().map(|x| 2 * x).collect();
            let quotient = geometric(lambda, &two_alpha, pairing / 2);
            let neg_alpha: Vec<i64> = alpha.iter().map(|x| -x).collect();
            let mut factor = GroupAlgebraElement::scalar(alg.rank(), qm1);
            factor.add_term(neg_alpha, &tl.plus - &tl.minus);
            Ok(&factor * &quotient)
        }
    }
}

/// Σ_μ c_μ·C(μ) for P = Σ_μ c_μ Z_μ.
fn correction_of(alg: &HeckeAlgebra, i: usize, p: &GroupAlgebraElement) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero(alg.rank());
    for (mu, c) in p.terms() {
        let corr =
            correction_monomial(alg, i, mu).expect("lattice vectors always give exact quotients");
        out = &out + &corr.scale(c);
    }
    out
}

/// The correction Z_λU_s − U_sZ_{sλ} for the i-th simple root, as a lattice
/// element.
pub fn commute_zu(
    lambda: &[i64],
    i: usize,
    alg: &Arc<HeckeAlgebra>,
) -> Result<HeckeElement, HeckeError> {
    if i >= alg.datum.num_simple() {
        return Err(HeckeError::BadSimpleIndex(i));
    }
    if lambda.len() != alg.rank() {
        return Err(HeckeError::Dimension {
            rank: alg.rank(),
            got: lambda.len(),
        });
    }
    Ok(HeckeElement::lattice(
        alg,
        correction_monomial(alg, i, lambda)?,
    ))
}

/// Product in normal form.
pub fn he_mul(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    x.check(y)?;
    let mut out = HeckeElement::zero(&x.alg);
    for (w, p) in &x.terms {
        let uy = y.left_mul_u(w);
        for (v, c) in uy.terms {
            out.add_term(v, p * &c);
        }
    }
    Ok(out)
}

/// Whether x commutes with every U_{s_α} and every Z_{e_i}.
pub fn is_central(x: &HeckeElement) -> Result<bool, HeckeError> {
    let alg = &x.alg;
    let order = alg.datum.weyl_order();
    if order > ENUMERATION_GUARD as u128 {
        return Err(RootDataError::TooLarge(order).into());
    }
    for i in 0..alg.datum.num_simple() {
        let u = HeckeElement::u_simple(alg, i);
        if he_mul(x, &u)? != he_mul(&u, x)? {
            return Ok(false);
        }
    }
    for j in 0..alg.rank() {
        let mut e = vec![0; alg.rank()];
        e[j] = 1;
        let z = HeckeElement::z(alg, &e);
        if he_mul(x, &z)? != he_mul(&z, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (U_s + 1)(U_s − q_α) for the i-th simple root; zero in a valid algebra.
pub fn quadratic_residue(alg: &Arc<HeckeAlgebra>, i: usize) -> HeckeElement {
    let u = HeckeElement::u_simple(alg, i);
    let one = HeckeElement::one(alg);
    let q = HeckeElement::scalar(alg, alg.q_alpha[i].clone());
    let a = u.add(&one).expect("same algebra");
    let b = u.sub(&q).expect("same algebra");
    he_mul(&a, &b).expect("same algebra")
}

/// U_sU_tU_s··· − U_tU_sU_t··· with m(s,t) factors each.
pub fn braid_residue(alg: &Arc<HeckeAlgebra>, i: usize, j: usize) -> HeckeElement {
    let m = braid_order(i, j, &alg.datum);
    let word = |a: usize, b: usize| {
        (0..m).fold(HeckeElement::one(alg), |acc, k| {
            let g = HeckeElement::u_simple(alg, if k % 2 == 0 { a } else { b });
            he_mul(&acc, &g).expect("same algebra")
        })
    };
    word(i, j).sub(&word(j, i)).expect("same algebra")
}

/// Exponent of q in a display such as `q^{3/2}`.
pub fn format_q_power(a: &BigRational) -> String {
    if a.is_zero() {
        "q^{0}".into()
    } else if *a == BigRational::from_integer(1.into()) {
        "q".into()
    } else {
        format!("q^{{{}}}", format_rational(a))
    }
}
