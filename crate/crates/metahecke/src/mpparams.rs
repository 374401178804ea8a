//! Langlands–Deligne parameter combinatorics for Mp_{2n}.
//!
//! Inertial classes are abstract records carrying only (d, t, self-duality,
//! type flags). From a normed parameter φ₀ we enumerate the admissible
//! choices S = (a₊, a₋, m_gl) per self-dual class, the resulting Jordan
//! data and alternating characters, and the Hecke presentation attached to
//! each Bernstein block, on the metaplectic side and on the matched
//! classical side.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::qi;
use crate::hecke::{
    format_q_power, ExtendedHeckeAlgebra, HeckeAlgebra, HeckeError, HeckeParams, RGroupSpec,
};
use crate::rootdata::{classical_datum, BasedRootDatum, ClassicalKind, RootDataError, TypeLabel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MpError {
    #[error("class {0}: d and t must be positive")]
    NonPositive(String),
    #[error("class {0}: ρ₋ of type while ρ is not; choose the base point of type")]
    BaseNotOfType(String),
    #[error("duplicate class label {0}")]
    DuplicateLabel(String),
    #[error("dimension mismatch: classes give {got}, expected 2n = {expected}")]
    Dimension { got: u64, expected: u64 },
    #[error("unknown class label {0}")]
    UnknownLabel(String),
    #[error("Jordan data has holes")]
    Holes,
    #[error("2x = {0} is not an integer")]
    NotHalfInteger(String),
    #[error("x must be nonnegative, got {0}")]
    NegativeX(String),
    #[error("m^ζ = {0} must be odd")]
    EvenM(u64),
    #[error("invalid S for class {label}: {reason}")]
    InvalidS { label: String, reason: String },
    #[error("sizes do not fit: N = {n}, m₊ + m₋ = {used}")]
    InconsistentSizes { n: u64, used: u64 },
    #[error("n must be at least 1")]
    ZeroRank,
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// An inertial class [ρ] of cuspidal representations of some GL_d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertialClass {
    pub label: String,
    pub d: u32,
    pub t: u32,
    pub self_dual: bool,
    #[serde(default)]
    pub type_plus: bool,
    #[serde(default)]
    pub type_minus: bool,
}

impl InertialClass {
    pub fn new(
        label: &str,
        d: u32,
        t: u32,
        self_dual: bool,
        type_plus: bool,
        type_minus: bool,
    ) -> Self {
        InertialClass {
            label: label.to_string(),
            d,
            t,
            self_dual,
            type_plus,
            type_minus,
        }
    }

    pub fn not_self_dual(label: &str, d: u32, t: u32) -> Self {
        Self::new(label, d, t, false, false, false)
    }

    /// The trivial character of GL_1.
    pub fn trivial() -> Self {
        Self::new("1", 1, 1, true, false, false)
    }

    pub fn validate(&self) -> Result<(), MpError> {
        if self.d == 0 || self.t == 0 {
            return Err(MpError::NonPositive(self.label.clone()));
        }
        if self.self_dual && !self.type_plus && self.type_minus {
            return Err(MpError::BaseNotOfType(self.label.clone()));
        }
        Ok(())
    }

    pub fn of_type(&self, member: Member) -> bool {
        self.self_dual
            && match member {
                Member::Base => self.type_plus,
                Member::Minus => self.type_minus,
            }
    }

    pub fn kappa(&self, member: Member) -> u32 {
        self.of_type(member) as u32
    }

    /// Re-base on ρ₋ when only ρ₋ is of type, so the base point is of type.
    pub fn as_base_point(mut self) -> Self {
        if self.self_dual && !self.type_plus && self.type_minus {
            std::mem::swap(&mut self.type_plus, &mut self.type_minus);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMultiplicity {
    #[serde(flatten)]
    pub class: InertialClass,
    pub multiplicity: u32,
}

/// φ₀ = ⊕ m(ρ;φ₀)·ρ with Σ d·m = 2n; a non-self-dual class also accounts
/// for its dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormedParameter {
    pub n: u32,
    pub classes: Vec<ClassMultiplicity>,
}

impl NormedParameter {
    pub fn new(n: u32, classes: Vec<(InertialClass, u32)>) -> Result<Self, MpError> {
        let p = NormedParameter {
            n,
            classes: classes
                .into_iter()
                .map(|(class, multiplicity)| ClassMultiplicity {
                    class,
                    multiplicity,
                })
                .collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MpError> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.classes {
            c.class.validate()?;
            if !seen.insert(c.class.label.as_str()) {
                return Err(MpError::DuplicateLabel(c.class.label.clone()));
            }
        }
        let got = self.dimension();
        let expected = 2 * self.n as u64;
        if got != expected {
            return Err(MpError::Dimension { got, expected });
        }
        Ok(())
    }

    pub fn dimension(&self) -> u64 {
        self.classes
            .iter()
            .map(|c| {
                let w = if c.class.self_dual { 1 } else { 2 };
                w * c.class.d as u64 * c.multiplicity as u64
            })
            .sum()
    }

    pub fn class(&self, label: &str) -> Result<&ClassMultiplicity, MpError> {
        self.classes
            .iter()
            .find(|c| c.class.label == label)
            .ok_or_else(|| MpError::UnknownLabel(label.to_string()))
    }

    pub fn self_dual_classes(&self) -> impl Iterator<Item = &ClassMultiplicity> {
        self.classes.iter().filter(|c| c.class.self_dual)
    }
}

/// Six inertial-class archetypes: one non-self-dual class and self-dual
/// classes over every type combination, with t ∈ {1, 2}.
pub fn archetype_pool() -> Vec<InertialClass> {
    vec![
        InertialClass::not_self_dual("chi", 1, 1),
        InertialClass::trivial(),
        InertialClass::new("sgn", 1, 2, true, false, false),
        InertialClass::new("rho_u", 1, 1, true, true, false),
        InertialClass::new("rho_minus", 1, 2, true, false, true).as_base_point(),
        InertialClass::new("rho_sp", 2, 1, true, true, true),
    ]
}

/// Every normed parameter of rank n built from `pool`.
pub fn normed_parameters(pool: &[InertialClass], n: u32) -> Vec<NormedParameter> {
    fn go(
        pool: &[InertialClass],
        left: u32,
        acc: &mut Vec<(InertialClass, u32)>,
        out: &mut Vec<Vec<(InertialClass, u32)>>,
    ) {
        let Some((c, rest)) = pool.split_first() else {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        };
        let w = c.d * if c.self_dual { 1 } else { 2 };
        for m in 0..=left / w {
            if m > 0 {
                acc.push((c.clone(), m));
            }
            go(rest, left - m * w, acc, out);
            if m > 0 {
                acc.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(pool, 2 * n, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter_map(|c| NormedParameter::new(n, c).ok())
        .collect()
}

/// ρ itself or ρ₋, the other self-dual twist in its unramified orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Member {
    Base,
    Minus,
}

/// One Jordan block (ρ_member, a), i.e. ρ_member ⊗ sp(a).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordEntry {
    pub rho: String,
    pub member: Member,
    pub of_type: bool,
    pub a: u32,
}

impl JordEntry {
    pub fn new(rho: &str, member: Member, of_type: bool, a: u32) -> Self {
        JordEntry {
            rho: rho.to_string(),
            member,
            of_type,
            a,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteParameter {
    pub jord: Vec<JordEntry>,
}

impl DiscreteParameter {
    pub fn new(jord: Vec<JordEntry>) -> Self {
        DiscreteParameter { jord }
    }

    /// Indices of `jord` grouped by (ρ, member), each group sorted by a.
    fn groups(&self) -> BTreeMap<(&str, Member), Vec<usize>> {
        let mut g: BTreeMap<(&str, Member), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.jord.iter().enumerate() {
            g.entry((e.rho.as_str(), e.member)).or_default().push(i);
        }
        for v in g.values_mut() {
            v.sort_by_key(|&i| self.jord[i].a);
        }
        g
    }
}

/// Each (ρ, member) has blocks exactly 2k − κ for k = 1..A.
pub fn without_holes(p: &DiscreteParameter) -> bool {
    p.groups().values().all(|idx| {
        let of_type = p.jord[idx[0]].of_type;
        let kappa = of_type as u32;
        idx.iter().enumerate().all(|(k, &i)| {
            let e = &p.jord[i];
            e.of_type == of_type && e.a == 2 * (k as u32 + 1) - kappa
        })
    })
}

/// Signs aligned with `DiscreteParameter::jord`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltChar {
    pub signs: Vec<i8>,
}

pub fn is_alternating(p: &DiscreteParameter, e: &AltChar) -> bool {
    if e.signs.len() != p.jord.len() || e.signs.iter().any(|&s| s != 1 && s != -1) {
        return false;
    }
    p.groups().values().all(|idx| {
        let first = e.signs[idx[0]];
        let forced_ok = p.jord[idx[0]].of_type || first == -1;
        forced_ok
            && idx
                .iter()
                .enumerate()
                .all(|(k, &i)| e.signs[i] == if k % 2 == 0 { first } else { -first })
    })
}

/// All alternating characters; one free sign per member of type present.
pub fn enumerate_alt_chars(p: &DiscreteParameter) -> Result<Vec<AltChar>, MpError> {
    if !without_holes(p) {
        return Err(MpError::Holes);
    }
    let groups: Vec<Vec<usize>> = p.groups().into_values().collect();
    let free: Vec<usize> = (0..groups.len())
        .filter(|&g| p.jord[groups[g][0]].of_type)
        .collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut signs = vec![0i8; p.jord.len()];
        for (g, idx) in groups.iter().enumerate() {
            let first = match free.iter().position(|&f| f == g) {
                Some(bit) if mask >> bit & 1 == 1 => -1,
                Some(_) => 1,
                None => -1,
            };
            for (k, &i) in idx.iter().enumerate() {
                signs[i] = if k % 2 == 0 { first } else { -first };
            }
        }
        out.push(AltChar { signs });
    }
    Ok(out)
}

/// ε(−1): the product of all signs.
pub fn epsilon_z(e: &AltChar) -> i8 {
    e.signs.iter().product()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SEntry {
    pub rho: String,
    pub a_plus: u32,
    pub a_minus: u32,
    pub m_gl: u32,
}

/// One (a₊, a₋, m_gl) per self-dual class of φ₀, in the order of φ₀.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SChoice {
    pub entries: Vec<SEntry>,
}

impl SChoice {
    pub fn entry(&self, rho: &str) -> Option<&SEntry> {
        self.entries.iter().find(|e| e.rho == rho)
    }
}

/// Σ_{k=1}^{a} (2k − κ).
pub fn block_mass(a: u32, kappa: u32) -> u64 {
    let a = a as u64;
    a * (a + 1) - kappa as u64 * a
}

/// m₊ + m₋ for the given class and (a₊, a₋).
pub fn m_orthogonal(class: &InertialClass, a_plus: u32, a_minus: u32) -> u64 {
    block_mass(a_plus, class.kappa(Member::Base)) + block_mass(a_minus, class.kappa(Member::Minus))
}

fn solutions_for(class: &InertialClass, m: u32) -> Vec<(u32, u32, u32)> {
    let m = m as u64;
    let bound = |kappa: u32| (0u32..).take_while(move |&a| block_mass(a, kappa) <= m);
    let mut out = Vec::new();
    for ap in bound(class.kappa(Member::Base)) {
        for am in bound(class.kappa(Member::Minus)) {
            let used = m_orthogonal(class, ap, am);
            if used <= m && (m - used).is_multiple_of(2) {
                out.push((ap, am, ((m - used) / 2) as u32));
            }
        }
    }
    out
}

/// Every S satisfying m − 2m_gl = m₊ + m₋ for each self-dual class.
pub fn enumerate_s(p0: &NormedParameter) -> Vec<SChoice> {
    let mut acc = vec![SChoice {
        entries: Vec::new(),
    }];
    for c in p0.self_dual_classes() {
        let sols = solutions_for(&c.class, c.multiplicity);
        acc = acc
            .into_iter()
            .flat_map(|s| {
                sols.iter().map(move |&(a_plus, a_minus, m_gl)| {
                    let mut e = s.entries.clone();
                    e.push(SEntry {
                        rho: c.class.label.clone(),
                        a_plus,
                        a_minus,
                        m_gl,
                    });
                    SChoice { entries: e }
                })
            })
            .collect();
    }
    acc
}

pub fn validate_s(p0: &NormedParameter, s: &SChoice) -> Result<(), MpError> {
    let sd: Vec<&ClassMultiplicity> = p0.self_dual_classes().collect();
    let invalid = |label: &str, reason: String| MpError::InvalidS {
        label: label.to_string(),
        reason,
    };
    if sd.len() != s.entries.len() {
        return Err(invalid(
            "*",
            format!(
                "{} entries for {} self-dual classes",
                s.entries.len(),
                sd.len()
            ),
        ));
    }
    for c in sd {
        let e = s
            .entry(&c.class.label)
            .ok_or_else(|| invalid(&c.class.label, "missing".into()))?;
        let lhs = c.multiplicity as i64 - 2 * e.m_gl as i64;
        let rhs = m_orthogonal(&c.class, e.a_plus, e.a_minus) as i64;
        if lhs != rhs {
            return Err(invalid(
                &c.class.label,
                format!("m − 2m_gl = {lhs} but m₊ + m₋ = {rhs}"),
            ));
        }
    }
    Ok(())
}

/// Jord(φ^S): ρ ⊗ sp(2k−κ) for k ≤ a₊ and ρ₋ ⊗ sp(2k−κ₋) for k ≤ a₋.
pub fn jord_from_s(p0: &NormedParameter, s: &SChoice) -> Result<DiscreteParameter, MpError> {
    validate_s(p0, s)?;
    let mut jord = Vec::new();
    for e in &s.entries {
        let c = &p0.class(&e.rho)?.class;
        for (member, a) in [(Member::Base, e.a_plus), (Member::Minus, e.a_minus)] {
            let kappa = c.kappa(member);
            for k in 1..=a {
                jord.push(JordEntry::new(
                    &c.label,
                    member,
                    c.of_type(member),
                    2 * k - kappa,
                ));
            }
        }
    }
    Ok(DiscreteParameter::new(jord))
}

fn half_integer_parts(x: &BigRational) -> Result<BigRational, MpError> {
    if x.is_negative() {
        return Err(MpError::NegativeX(crate::exact::format_rational(x)));
    }
    let two_x = x * qi(2);
    if !two_x.is_integer() {
        return Err(MpError::NotHalfInteger(crate::exact::format_rational(
            &two_x,
        )));
    }
    Ok(two_x)
}

/// Blocks (ρ, 2x+1−2ℓ) for ℓ = 1..⌊x⌋, tagged with ρ's own type flag.
pub fn jord_from_x(rho: &InertialClass, x: &BigRational) -> Result<Vec<JordEntry>, MpError> {
    let two_x = half_integer_parts(x)?
        .to_integer()
        .to_u32()
        .ok_or_else(|| MpError::NegativeX("overflow".into()))?;
    let floor = two_x / 2;
    Ok((1..=floor)
        .map(|l| JordEntry::new(&rho.label, Member::Base, rho.type_plus, two_x + 1 - 2 * l))
        .collect())
}

/// x_{ρ,φ} = (a + 1)/2 with a the largest ρ-block, or 0 / −1 when ρ is
/// absent and not of type / of type.
pub fn x_from_jord(rho: &InertialClass, p: &DiscreteParameter) -> BigRational {
    let a = p
        .jord
        .iter()
        .filter(|e| e.rho == rho.label && e.member == Member::Base)
        .map(|e| e.a as i64)
        .max()
        .unwrap_or(if rho.type_plus { -1 } else { 0 });
    BigRational::new((a + 1).into(), 2.into())
}

/// |½(2n − (m^ζ − 1) + 1)| for odd m^ζ.
pub fn first_occurrence_x(n: u64, m_zeta: u64) -> Result<BigRational, MpError> {
    if m_zeta.is_multiple_of(2) {
        return Err(MpError::EvenM(m_zeta));
    }
    let num = 2 * n as i64 - (m_zeta as i64 - 1) + 1;
    let x = BigRational::new(num.abs().into(), 2.into());
    debug_assert!((&x - BigRational::new(1.into(), 2.into())).is_integer());
    Ok(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatumKind {
    Gl,
    SoOdd,
    SoEvenExtended,
}

/// Root datum of the named size with q-exponents for its simple roots (the
/// special root last) and, for type B, the exponent of q_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckePresentation {
    pub group: String,
    pub datum_kind: DatumKind,
    pub size: u32,
    #[serde(with = "crate::exact::rational_vec")]
    pub param_exponents: Vec<BigRational>,
    #[serde(with = "crate::exact::rational_opt")]
    pub special_exponent: Option<BigRational>,
    #[serde(with = "crate::exact::rational_opt")]
    pub qi_exponent: Option<BigRational>,
    pub base_field_scale: u32,
}

impl HeckePresentation {
    fn gl(group: String, m: u32, e: BigRational, scale: u32) -> Self {
        HeckePresentation {
            group,
            datum_kind: DatumKind::Gl,
            size: m,
            param_exponents: vec![e; m.saturating_sub(1) as usize],
            special_exponent: None,
            qi_exponent: None,
            base_field_scale: scale,
        }
    }

    fn so_even_extended(group: String, rank: u32, e: BigRational, scale: u32) -> Self {
        let simple = if rank >= 2 { rank as usize } else { 0 };
        HeckePresentation {
            group,
            datum_kind: DatumKind::SoEvenExtended,
            size: 2 * rank,
            param_exponents: vec![e; simple],
            special_exponent: None,
            qi_exponent: None,
            base_field_scale: scale,
        }
    }

    fn so_odd(
        group: String,
        rank: u32,
        e: BigRational,
        special: BigRational,
        q_i: BigRational,
        scale: u32,
    ) -> Self {
        let (params, special, q_i) = if rank == 0 {
            (Vec::new(), None, None)
        } else {
            let mut v = vec![e; rank as usize - 1];
            v.push(special.clone());
            (v, Some(special), Some(q_i))
        };
        HeckePresentation {
            group,
            datum_kind: DatumKind::SoOdd,
            size: 2 * rank + 1,
            param_exponents: params,
            special_exponent: special,
            qi_exponent: q_i,
            base_field_scale: scale,
        }
    }

    /// q ↦ q^t on every exponent.
    pub fn scaled(&self, t: u32) -> Self {
        let f = BigRational::from_integer(t.into());
        HeckePresentation {
            param_exponents: self.param_exponents.iter().map(|x| x * &f).collect(),
            special_exponent: self.special_exponent.as_ref().map(|x| x * &f),
            qi_exponent: self.qi_exponent.as_ref().map(|x| x * &f),
            base_field_scale: self.base_field_scale * t,
            ..self.clone()
        }
    }

    /// Equality of the algebra data, ignoring the group label.
    pub fn same_algebra(&self, other: &HeckePresentation) -> bool {
        self.datum_kind == other.datum_kind
            && self.size == other.size
            && self.param_exponents == other.param_exponents
            && self.special_exponent == other.special_exponent
            && self.qi_exponent == other.qi_exponent
    }

    pub fn rank(&self) -> usize {
        match self.datum_kind {
            DatumKind::Gl => self.size as usize,
            DatumKind::SoOdd | DatumKind::SoEvenExtended => self.size as usize / 2,
        }
    }

    /// "q, q, q^{2}; q" style rendering.
    pub fn display_params(&self) -> String {
        let mut s = self
            .param_exponents
            .iter()
            .map(format_q_power)
            .collect::<Vec<_>>()
            .join(", ");
        if let Some(b) = &self.qi_exponent {
            s.push_str("; ");
            s.push_str(&format_q_power(b));
        }
        s
    }

    /// Instantiate the presentation as an (extended) affine Hecke algebra.
    pub fn build(&self) -> Result<Arc<ExtendedHeckeAlgebra>, MpError> {
        let rank = self.rank();
        let (datum, auto) = match (self.datum_kind, rank) {
            (_, 0) => (BasedRootDatum::from_components(0, &[])?, None),
            (DatumKind::Gl, _) => (classical_datum(ClassicalKind::Gl, rank)?.datum, None),
            (DatumKind::SoOdd, _) => (
                classical_datum(ClassicalKind::SoOdd, 2 * rank + 1)?.datum,
                None,
            ),
            (DatumKind::SoEvenExtended, _) => {
                let c = classical_datum(ClassicalKind::OEven, 2 * rank)?;
                (c.datum, c.automorphism)
            }
        };
        let special = match (&self.qi_exponent, datum.type_labels().first()) {
            (Some(b), Some(TypeLabel::B(_))) => vec![(0, b.clone())],
            _ => Vec::new(),
        };
        let base = HeckeAlgebra::new(
            datum,
            HeckeParams::new(self.param_exponents.clone(), special),
        )?;
        match auto {
            Some(a) => Ok(ExtendedHeckeAlgebra::new(
                base,
                RGroupSpec {
                    r_group: vec![a.map],
                    cocycle: None,
                },
            )?),
            None => Ok(ExtendedHeckeAlgebra::trivial(base)),
        }
    }
}

impl fmt::Display for HeckePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ext = if self.datum_kind == DatumKind::SoEvenExtended {
            "Z/2 ⋉ "
        } else {
            ""
        };
        write!(f, "{ext}{}: ({})", self.group, self.display_params())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The Hecke algebra of the Bernstein block of Mp_{2n} attached to ρ and S.
pub fn hecke_for_block(
    p0: &NormedParameter,
    s: &SChoice,
    rho: &str,
) -> Result<HeckePresentation, MpError> {
    validate_s(p0, s)?;
    let c = p0.class(rho)?;
    let (class, m) = (&c.class, c.multiplicity);
    let t = BigRational::from_integer(class.t.into());
    if !class.self_dual {
        return Ok(HeckePresentation::gl(format!("GL_{m}"), m, t, class.t));
    }
    let e = s.entry(rho).expect("validated");
    let (k, km) = (
        class.kappa(Member::Base) as i64,
        class.kappa(Member::Minus) as i64,
    );
    if k == 1 && km == 1 && e.a_plus == 0 && e.a_minus == 0 {
        return Ok(HeckePresentation::so_even_extended(
            format!("SO_{}", 2 * e.m_gl),
            e.m_gl,
            t,
            class.t,
        ));
    }
    let (ap, am) = (e.a_plus as i64, e.a_minus as i64);
    let special = &t * rat(2 * (ap + am + 1) - (k + km), 2);
    let q_i = (&t * rat(2 * (ap - am) + (km - k), 2)).abs();
    Ok(HeckePresentation::so_odd(
        format!("SO_{}", 2 * e.m_gl + 1),
        e.m_gl,
        t.clone(),
        special,
        q_i,
        class.t,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "n", rename_all = "snake_case")]
pub enum ClassicalGroup {
    /// GL_n.
    Gl(u32),
    /// SO_{2n+1}, given by 2n+1.
    SoOdd(u32),
    /// O_{2n}, given by 2n.
    OEven(u32),
    /// Sp_{2n}, given by 2n.
    Sp(u32),
    /// U_n.
    U(u32),
}

impl fmt::Display for ClassicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalGroup::Gl(n) => write!(f, "GL_{n}"),
            ClassicalGroup::SoOdd(n) => write!(f, "SO_{n}"),
            ClassicalGroup::OEven(n) => write!(f, "O_{n}"),
            ClassicalGroup::Sp(n) => write!(f, "Sp_{n}"),
            ClassicalGroup::U(n) => write!(f, "U_{n}"),
        }
    }
}

/// Hecke presentation of the block of `group` cut out by (a₊, a₋) for the
/// trivial inertial class, with q unscaled.
pub fn classical_hecke(
    group: ClassicalGroup,
    a_plus: u32,
    a_minus: u32,
) -> Result<HeckePresentation, MpError> {
    let one = BigRational::one();
    let (ap, am) = (a_plus as i64, a_minus as i64);
    // (N_L, κ(1), κ(1₋))
    let (n_l, k, km) = match group {
        ClassicalGroup::Gl(m) => return Ok(HeckePresentation::gl(group.to_string(), m, one, 1)),
        ClassicalGroup::SoOdd(n) => (n.saturating_sub(1), 0, 0),
        ClassicalGroup::OEven(n) => (n, 1, 1),
        ClassicalGroup::Sp(n) => (n + 1, 1, 1),
        ClassicalGroup::U(n) => {
            let k = n % 2;
            (n, k, 1 - k)
        }
    };
    if let ClassicalGroup::SoOdd(n) | ClassicalGroup::OEven(n) | ClassicalGroup::Sp(n) = group {
        let odd = matches!(group, ClassicalGroup::SoOdd(_));
        if (n % 2 == 1) != odd || (odd && n == 0) {
            return Err(MpError::InconsistentSizes {
                n: n as u64,
                used: 0,
            });
        }
    }
    let used = block_mass(a_plus, k) + block_mass(a_minus, km);
    let n_l = n_l as u64;
    if used > n_l || (n_l - used) % 2 == 1 {
        return Err(MpError::InconsistentSizes { n: n_l, used });
    }
    let rank = ((n_l - used) / 2) as u32;
    let label = format!("{group}");
    let (special, q_i) = match group {
        ClassicalGroup::OEven(_) if ap == 0 && am == 0 => {
            return Ok(HeckePresentation::so_even_extended(label, rank, one, 1));
        }
        ClassicalGroup::SoOdd(_) => (qi(ap + am + 1), qi((ap - am).abs())),
        ClassicalGroup::OEven(_) | ClassicalGroup::Sp(_) => (qi(ap + am), qi((ap - am).abs())),
        ClassicalGroup::U(n) => {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            (
                rat(2 * (ap + am) + 1, 2),
                rat(2 * (ap - am) + sign, 2).abs(),
            )
        }
        ClassicalGroup::Gl(_) => unreachable!(),
    };
    Ok(HeckePresentation::so_odd(label, rank, one, special, q_i, 1))
}

/// The classical group whose blocks match the ρ-part of Mp blocks of size m.
pub fn classical_match(rho: &InertialClass, m: u32) -> ClassicalGroup {
    if !rho.self_dual {
        return ClassicalGroup::Gl(m);
    }
    match (rho.type_plus, rho.type_minus) {
        (false, false) => ClassicalGroup::SoOdd(m + 1),
        (true, true) if m.is_multiple_of(2) => ClassicalGroup::OEven(m),
        (true, true) => ClassicalGroup::Sp(m - 1),
        _ => ClassicalGroup::U(m),
    }
}

/// Classical side for ρ and its S-entry: the matched group with (a₊, a₋),
/// swapped for U_m with m even, and q ↦ q^t.
pub fn classical_for_block(
    class: &InertialClass,
    m: u32,
    e: Option<&SEntry>,
) -> Result<HeckePresentation, MpError> {
    let g = classical_match(class, m);
    let (ap, am) = e.map(|e| (e.a_plus, e.a_minus)).unwrap_or((0, 0));
    let args = match g {
        ClassicalGroup::U(m) if m % 2 == 0 => (am, ap),
        _ => (ap, am),
    };
    Ok(classical_hecke(g, args.0, args.1)?.scaled(class.t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchCheck {
    pub rho: String,
    #[serde(rename = "S")]
    pub s: Option<SEntry>,
    pub group: String,
    pub mp: HeckePresentation,
    pub classical: Option<HeckePresentation>,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub checks: Vec<MatchCheck>,
    pub mismatches: usize,
}

impl MatchReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compare both sides for every S and every class of φ₀.
pub fn verify_match(p0: &NormedParameter) -> Result<MatchReport, MpError> {
    p0.validate()?;
    let mut checks = Vec::new();
    for s in enumerate_s(p0) {
        for c in &p0.classes {
            let e = s.entry(&c.class.label).cloned();
            if !c.class.self_dual && checks.iter().any(|x: &MatchCheck| x.rho == c.class.label) {
                continue;
            }
            let mp = hecke_for_block(p0, &s, &c.class.label)?;
            let group = classical_match(&c.class, c.multiplicity).to_string();
            let (classical, error) = match classical_for_block(&c.class, c.multiplicity, e.as_ref())
            {
                Ok(h) => (Some(h), None),
                Err(err) => (None, Some(err.to_string())),
            };
            let matches = classical.as_ref().is_some_and(|h| h.same_algebra(&mp));
            checks.push(MatchCheck {
                rho: c.class.label.clone(),
                s: e,
                group,
                mp,
                classical,
                matches,
                error,
            });
        }
    }
    let mismatches = checks.iter().filter(|c| !c.matches).count();
    Ok(MatchReport { checks, mismatches })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SEpsilon {
    #[serde(rename = "S")]
    pub s: SChoice,
    pub jord: DiscreteParameter,
    pub epsilon: AltChar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SoSplit {
    pub plus: Vec<SEpsilon>,
    pub minus: Vec<SEpsilon>,
}

impl SoSplit {
    pub fn total(&self) -> usize {
        self.plus.len() + self.minus.len()
    }
}

/// All (S, ε) pairs of φ₀, sorted by ε_Z into the SO⁺ and SO⁻ sides.
pub fn split_so(p0: &NormedParameter) -> Result<SoSplit, MpError> {
    p0.validate()?;
    let mut out = SoSplit::default();
    for s in enumerate_s(p0) {
        let jord = jord_from_s(p0, &s)?;
        for e in enumerate_alt_chars(&jord)? {
            let side = if epsilon_z(&e) == 1 {
                &mut out.plus
            } else {
                &mut out.minus
            };
            side.push(SEpsilon {
                s: s.clone(),
                jord: jord.clone(),
                epsilon: e,
            });
        }
    }
    Ok(out)
}

/// One Bernstein block with its computed Hecke presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub name: String,
    pub phi0: NormedParameter,
    #[serde(rename = "S")]
    pub s: SChoice,
    pub jord: DiscreteParameter,
    pub epsilon: AltChar,
    #[serde(rename = "epsilon_Z")]
    pub epsilon_z: i8,
    pub hecke: HeckePresentation,
    pub classical_match: String,
    pub reference_display: String,
    #[serde(with = "crate::exact::rational_vec")]
    pub reference_exponents: Vec<BigRational>,
    #[serde(with = "crate::exact::rational")]
    pub reference_qi: BigRational,
    pub matches_reference: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilReport {
    pub plus: BlockReport,
    pub minus: BlockReport,
}

fn weil_block(
    name: &str,
    n: u32,
    a_plus: u32,
    reference_display: String,
    reference_exponents: Vec<BigRational>,
    reference_qi: BigRational,
) -> Result<BlockReport, MpError> {
    let trivial = InertialClass::trivial();
    let phi0 = NormedParameter::new(n, vec![(trivial.clone(), 2 * n)])?;
    let m_gl = n - a_plus;
    let s = SChoice {
        entries: vec![SEntry {
            rho: trivial.label.clone(),
            a_plus,
            a_minus: 0,
            m_gl,
        }],
    };
    let jord = jord_from_s(&phi0, &s)?;
    let mut chars = enumerate_alt_chars(&jord)?;
    debug_assert_eq!(chars.len(), 1);
    let epsilon = chars.remove(0);
    let hecke = hecke_for_block(&phi0, &s, &trivial.label)?;
    let matches_reference = hecke.param_exponents == reference_exponents
        && hecke.qi_exponent.as_ref() == Some(&reference_qi);
    Ok(BlockReport {
        name: name.to_string(),
        epsilon_z: epsilon_z(&epsilon),
        classical_match: classical_match(&trivial, 2 * n).to_string(),
        phi0,
        s,
        jord,
        epsilon,
        hecke,
        reference_display,
        reference_exponents,
        reference_qi,
        matches_reference,
    })
}

/// The two blocks of Mp_{2n} containing the even and odd Weil
/// representations ω⁺ and ω⁻.
///
/// Each report also carries the reference display for the block. For ω⁻ the
/// reference shows n−1 copies of q followed by q² and is not what the
/// general formula yields (n−2 copies of q, special q², q_i = q); the
/// mismatch is surfaced through `matches_reference` rather than hidden.
pub fn weil_example(n: u32) -> Result<WeilReport, MpError> {
    if n == 0 {
        return Err(MpError::ZeroRank);
    }
    let plus = weil_block(
        "omega_plus",
        n,
        0,
        format!("SO_{}: q, …, q ({n}-times); q^{{0}}", 2 * n + 1),
        vec![BigRational::one(); n as usize],
        BigRational::zero(),
    )?;
    let minus = weil_block(
        "omega_minus",
        n,
        1,
        format!("SO_{}: q, …, q ({}-times); q^{{2}}", 2 * n - 1, n - 1),
        vec![BigRational::one(); n as usize - 1],
        qi(2),
    )?;
    Ok(WeilReport { plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q1(a: u32) -> JordEntry {
        JordEntry::new("rho", Member::Base, false, a)
    }

    fn t1(a: u32) -> JordEntry {
        JordEntry::new("rho", Member::Base, true, a)
    }

    // Doubles d when d·m would be odd, so that φ₀ has even dimension.
    fn single(mut class: InertialClass, m: u32) -> NormedParameter {
        if class.self_dual && class.d * m % 2 == 1 {
            class.d *= 2;
        }
        let dim = if class.self_dual {
            class.d * m
        } else {
            2 * class.d * m
        };
        NormedParameter::new(dim / 2, vec![(class, m)]).unwrap()
    }

    fn triples(p0: &NormedParameter) -> Vec<(u32, u32, u32)> {
        let mut v: Vec<_> = enumerate_s(p0)
            .iter()
            .map(|s| (s.entries[0].a_plus, s.entries[0].a_minus, s.entries[0].m_gl))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn holes() {
        assert!(without_holes(&DiscreteParameter::new(vec![q1(2), q1(4)])));
        assert!(!without_holes(&DiscreteParameter::new(vec![q1(4)])));
        assert!(without_holes(&DiscreteParameter::default()));
        assert!(!without_holes(&DiscreteParameter::new(vec![q1(2), q1(2)])));
        assert!(without_holes(&DiscreteParameter::new(vec![t1(3), t1(1)])));
    }

    #[test]
    fn alternating_characters() {
        let p = DiscreteParameter::new(vec![t1(1), t1(3)]);
        let chars = enumerate_alt_chars(&p).unwrap();
        assert_eq!(chars.len(), 2);
        for e in &chars {
            assert_eq!(e.signs[1], -e.signs[0]);
        }
        let forced = enumerate_alt_chars(&DiscreteParameter::new(vec![q1(2)])).unwrap();
        assert_eq!(forced, vec![AltChar { signs: vec![-1] }]);
        assert_eq!(epsilon_z(&forced[0]), -1);
        assert_eq!(
            enumerate_alt_chars(&DiscreteParameter::default())
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            enumerate_alt_chars(&DiscreteParameter::new(vec![q1(4)])),
            Err(MpError::Holes)
        );
    }

    #[test]
    fn s_enumeration() {
        let neither = InertialClass::new("rho", 1, 1, true, false, false);
        assert_eq!(
            triples(&single(neither, 4)),
            vec![(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
        );
        let both = InertialClass::new("rho", 1, 1, true, true, true);
        assert_eq!(
            triples(&single(both.clone(), 1)),
            vec![(0, 1, 0), (1, 0, 0)]
        );
        let empty =
            NormedParameter::new(1, vec![(both, 0), (InertialClass::trivial(), 2)]).unwrap();
        assert!(enumerate_s(&empty).iter().all(|s| s.entries[0]
            == SEntry {
                rho: "rho".into(),
                a_plus: 0,
                a_minus: 0,
                m_gl: 0
            }));
    }

    #[test]
    fn reducibility_points() {
        let r = InertialClass::new("rho", 1, 1, true, false, false);
        let blocks: Vec<u32> = jord_from_x(&r, &rat(5, 2))
            .unwrap()
            .iter()
            .map(|e| e.a)
            .collect();
        assert_eq!(blocks, vec![4, 2]);
        assert!(jord_from_x(&r, &rat(1, 2)).unwrap().is_empty());
        assert_eq!(
            jord_from_x(&r, &qi(1))
                .unwrap()
                .iter()
                .map(|e| e.a)
                .collect::<Vec<_>>(),
            vec![1]
        );
        assert!(matches!(
            jord_from_x(&r, &rat(1, 3)),
            Err(MpError::NotHalfInteger(_))
        ));

        assert_eq!(x_from_jord(&r, &DiscreteParameter::default()), rat(1, 2));
        let typed = InertialClass::new("rho", 1, 1, true, true, false);
        assert_eq!(x_from_jord(&typed, &DiscreteParameter::default()), qi(0));
        assert_eq!(
            x_from_jord(&r, &DiscreteParameter::new(vec![q1(2), q1(4)])),
            rat(5, 2)
        );

        assert_eq!(first_occurrence_x(3, 7).unwrap(), rat(1, 2));
        assert_eq!(first_occurrence_x(1, 1).unwrap(), rat(3, 2));
        assert_eq!(first_occurrence_x(1, 7).unwrap(), rat(3, 2));
        assert_eq!(first_occurrence_x(1, 4), Err(MpError::EvenM(4)));
    }

    #[test]
    fn block_presentations() {
        let nsd = single(InertialClass::not_self_dual("rho", 1, 2), 3);
        let h = hecke_for_block(&nsd, &SChoice { entries: vec![] }, "rho").unwrap();
        assert_eq!(h.datum_kind, DatumKind::Gl);
        assert_eq!(h.param_exponents, vec![qi(2), qi(2)]);

        let n = 3;
        let p0 = single(InertialClass::trivial(), 2 * n);
        let s = SChoice {
            entries: vec![SEntry {
                rho: "1".into(),
                a_plus: 0,
                a_minus: 0,
                m_gl: n,
            }],
        };
        let h = hecke_for_block(&p0, &s, "1").unwrap();
        assert_eq!((h.datum_kind, h.size), (DatumKind::SoOdd, 7));
        assert_eq!(h.param_exponents, vec![qi(1); 3]);
        assert_eq!(h.qi_exponent, Some(qi(0)));

        let both = single(InertialClass::new("rho", 1, 1, true, true, true), 4);
        let s = SChoice {
            entries: vec![SEntry {
                rho: "rho".into(),
                a_plus: 0,
                a_minus: 0,
                m_gl: 2,
            }],
        };
        let h = hecke_for_block(&both, &s, "rho").unwrap();
        assert_eq!((h.datum_kind, h.size), (DatumKind::SoEvenExtended, 4));
        assert_eq!(h.build().unwrap().r_group().len(), 2);

        let bad = SChoice {
            entries: vec![SEntry {
                rho: "rho".into(),
                a_plus: 1,
                a_minus: 0,
                m_gl: 2,
            }],
        };
        assert!(matches!(
            hecke_for_block(&both, &bad, "rho"),
            Err(MpError::InvalidS { .. })
        ));
    }

    #[test]
    fn classical_side() {
        let h = classical_hecke(ClassicalGroup::SoOdd(7), 0, 0).unwrap();
        assert_eq!(h.param_exponents, vec![qi(1); 3]);
        assert_eq!(h.qi_exponent, Some(qi(0)));
        let h = classical_hecke(ClassicalGroup::U(4), 0, 0).unwrap();
        assert_eq!(h.param_exponents, vec![qi(1), rat(1, 2)]);
        assert_eq!(h.qi_exponent, Some(rat(1, 2)));
        let h = classical_hecke(ClassicalGroup::OEven(4), 0, 0).unwrap();
        assert_eq!(h.datum_kind, DatumKind::SoEvenExtended);
        assert_eq!(h.param_exponents, vec![qi(1); 2]);
        assert!(classical_hecke(ClassicalGroup::Sp(2), 3, 0).is_err());

        let nsd = InertialClass::not_self_dual("rho", 2, 1);
        assert_eq!(classical_match(&nsd, 3), ClassicalGroup::Gl(3));
        let both = InertialClass::new("rho", 1, 1, true, true, true);
        assert_eq!(classical_match(&both, 5).to_string(), "Sp_4");
        let differ = InertialClass::new("rho", 1, 1, true, true, false);
        assert_eq!(classical_match(&differ, 3), ClassicalGroup::U(3));
    }

    #[test]
    fn matching_examples() {
        for class in [
            InertialClass::new("rho", 1, 1, true, false, false),
            InertialClass::new("rho", 1, 1, true, true, true),
            InertialClass::new("rho", 1, 2, true, true, false),
        ] {
            for m in 0..=4 {
                let r = verify_match(&single(class.clone(), m)).unwrap();
                assert!(
                    r.ok(),
                    "{class:?} m={m}: {:?}",
                    r.checks.iter().find(|c| !c.matches)
                );
            }
        }
        let r = verify_match(&single(
            InertialClass::new("rho", 1, 1, true, false, false),
            4,
        ))
        .unwrap();
        assert_eq!(r.checks.len(), 4);
        assert!(r.checks.iter().all(|c| c.group == "SO_5"));
    }

    #[test]
    fn weil() {
        let w = weil_example(2).unwrap();
        assert_eq!(w.plus.hecke.size, 5);
        assert_eq!(w.plus.hecke.param_exponents, vec![qi(1), qi(1)]);
        assert_eq!(w.plus.hecke.qi_exponent, Some(qi(0)));
        assert!(w.plus.matches_reference);
        assert_eq!(w.plus.epsilon_z, 1);

        assert_eq!(w.minus.hecke.size, 3);
        assert_eq!(w.minus.hecke.special_exponent, Some(qi(2)));
        assert_eq!(w.minus.hecke.qi_exponent, Some(qi(1)));
        assert_eq!(w.minus.epsilon_z, -1);
        assert!(!w.minus.matches_reference);

        let w1 = weil_example(1).unwrap();
        assert_eq!(w1.plus.hecke.size, 3);
        assert_eq!(w1.plus.hecke.param_exponents, vec![qi(1)]);
        assert_eq!(w1.plus.hecke.qi_exponent, Some(qi(0)));
        w1.plus.hecke.build().unwrap();
    }

    #[test]
    fn split_counts() {
        let p0 = single(InertialClass::trivial(), 4);
        let split = split_so(&p0).unwrap();
        let expected: usize = enumerate_s(&p0)
            .iter()
            .map(|s| {
                enumerate_alt_chars(&jord_from_s(&p0, s).unwrap())
                    .unwrap()
                    .len()
            })
            .sum();
        assert_eq!(split.total(), expected);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            NormedParameter::new(1, vec![(InertialClass::trivial(), 3)]),
            Err(MpError::Dimension {
                got: 3,
                expected: 2
            })
        ));
        assert!(
            NormedParameter::new(2, vec![(InertialClass::not_self_dual("chi", 1, 1), 2)]).is_ok()
        );
        assert_eq!(
            InertialClass::new("rho", 1, 1, true, false, true).validate(),
            Err(MpError::BaseNotOfType("rho".into()))
        );
    }
}
