//! Bernstein block classification from cuspidal-line descriptors.
//!
//! A descriptor lists the GL lines (d_i, k_i) of a decomposed Levi together
//! with the analytic flags of the relevant μ-functions. Each line occupies k_i
//! consecutive lattice coordinates; α_{i,j} = e_j − e_{j+1} for j < k_i and
//! α_{i,k_i} = e_{k_i} (2e_{k_i} for type C). From this the module produces
//! Σ_{O,μ} with its base, the R-group, the orders in W(M,O) = R(O) ⋉ W_O,
//! and the Hecke presentation attached to the block.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hecke::{HeckeAlgebra, HeckeError, HeckeParams, PresentationSpec, RGroupSpec};
use crate::rootdata::{
    build_o_datum, generate_group, BasedRootDatum, ComponentSpec, RootDataError, TypeLabel,
    WeylElement, ENUMERATION_GUARD,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("line {0}: a pole at the boundary root requires a self-conjugate cuspidal")]
    PoleWithoutSelfDual(usize),
    #[error("line {0}: d and k must be positive")]
    EmptyLine(usize),
    #[error("even special orthogonal ambient requires h_rank != 1")]
    EvenOrthogonalRankOne,
    #[error("line {0}: no pole is possible for d_i = 1 with trivial H factor in an even orthogonal ambient")]
    EvenOrthogonalPole(usize),
    #[error("general linear ambient has no H factor")]
    GlWithH,
    #[error("generator {0} does not normalize the root system")]
    NotNormalizing(String),
    #[error("expected {expected} invariants, got {got}")]
    InvariantCount { expected: usize, got: usize },
    #[error("expected {expected} scales, got {got}")]
    ScaleCount { expected: usize, got: usize },
    #[error("invalid invariants at simple root {index}: {reason}")]
    InvalidInvariants { index: usize, reason: String },
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Mp,
    Sp,
    SoOdd,
    SoEven,
    OEven,
    U,
    Gl,
}

impl Ambient {
    fn is_type_b(self) -> bool {
        self == Ambient::SoOdd
    }

    fn is_even_orthogonal(self) -> bool {
        matches!(self, Ambient::SoEven | Ambient::OEven)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspidalLine {
    pub d: usize,
    pub k: usize,
    pub gl_singular: bool,
    #[serde(default)]
    pub boundary_pole: bool,
    #[serde(default, rename = "self_dual_T")]
    pub self_dual_t: bool,
    #[serde(default, rename = "tau_T")]
    pub tau_t: bool,
}

impl CuspidalLine {
    pub fn new(
        d: usize,
        k: usize,
        gl_singular: bool,
        boundary_pole: bool,
        self_dual_t: bool,
        tau_t: bool,
    ) -> Self {
        CuspidalLine {
            d,
            k,
            gl_singular,
            boundary_pole,
            self_dual_t,
            tau_t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDescriptor {
    pub ambient: Ambient,
    pub h_rank: usize,
    pub lines: Vec<CuspidalLine>,
    /// Caller-supplied elements of R(O)_J (swaps across equal lines that
    /// preserve O); not derived here.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_r_generators: Vec<WeylElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedComponent {
    /// 1-based line index.
    pub line: usize,
    #[serde(rename = "type")]
    pub label: TypeLabel,
    pub offset: usize,
    pub size: usize,
    pub base: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedBlock {
    pub ambient: Ambient,
    pub rank: usize,
    pub components: Vec<ClassifiedComponent>,
    pub w_o_order: u128,
    pub r_generators: Vec<WeylElement>,
    pub r_order: u128,
    pub wmo_order: u128,
    /// `Some(true)` when |W(M,O)| was recomputed by enumeration and matched.
    pub semidirect_verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl ClassifiedBlock {
    fn specs(&self, t: Option<&[i64]>) -> Vec<ComponentSpec> {
        self.components
            .iter()
            .map(|c| ComponentSpec {
                label: c.label,
                size: c.size,
                t: t.map_or(1, |t| t[c.line - 1]),
                offset: Some(c.offset),
            })
            .collect()
    }

    /// Σ_{O,μ} with its base (type C kept as C).
    pub fn datum(&self) -> Result<BasedRootDatum, BlockError> {
        Ok(BasedRootDatum::from_components(
            self.rank,
            &self.specs(None),
        )?)
    }
}

fn push_component(
    out: &mut Vec<ClassifiedComponent>,
    line: usize,
    label: TypeLabel,
    offset: usize,
    size: usize,
    base: Vec<String>,
) {
    out.push(ClassifiedComponent {
        line,
        label,
        offset,
        size,
        base,
    });
}

fn alpha(i: usize, j: usize) -> String {
    format!("alpha[{i},{j}]")
}

fn classify_line(
    bd: &BlockDescriptor,
    idx: usize,
    line: &CuspidalLine,
    offset: usize,
    out: &mut Vec<ClassifiedComponent>,
) -> Result<(), BlockError> {
    let i = idx + 1;
    let k = line.k;
    if line.d == 0 || k == 0 {
        return Err(BlockError::EmptyLine(i));
    }
    let a_labels: Vec<String> = (1..k).map(|j| alpha(i, j)).collect();
    let empty = |out: &mut Vec<ClassifiedComponent>| {
        push_component(out, i, TypeLabel::Empty, offset, k, vec![])
    };
    if bd.ambient == Ambient::Gl {
        if line.gl_singular && k >= 2 {
            push_component(out, i, TypeLabel::A(k - 1), offset, k, a_labels);
        } else {
            empty(out);
        }
        return Ok(());
    }
    if line.boundary_pole && !line.self_dual_t {
        return Err(BlockError::PoleWithoutSelfDual(i));
    }
    if bd.ambient.is_even_orthogonal() && bd.h_rank == 0 && line.d == 1 && line.boundary_pole {
        return Err(BlockError::EvenOrthogonalPole(i));
    }
    let type_c = bd.h_rank == 0 && !bd.ambient.is_type_b();
    let tau_ok =
        !(bd.h_rank > 0 && bd.ambient.is_even_orthogonal() && line.d % 2 == 1) || line.tau_t;
    if k >= 2 && !line.gl_singular {
        // Only the conjugates of the boundary root survive.
        if line.boundary_pole {
            for j in 1..=k {
                let (label, name) = if type_c {
                    (
                        TypeLabel::C(1),
                        if j == k {
                            format!("2{}", alpha(i, k))
                        } else {
                            format!("2e[{i},{j}]")
                        },
                    )
                } else {
                    (
                        TypeLabel::B(1),
                        if j == k {
                            alpha(i, k)
                        } else {
                            format!("e[{i},{j}]")
                        },
                    )
                };
                push_component(out, i, label, offset + j - 1, 1, vec![name]);
            }
        } else {
            empty(out);
        }
        return Ok(());
    }
    if line.boundary_pole {
        let mut base = a_labels;
        if type_c {
            base.push(format!("2{}", alpha(i, k)));
            push_component(out, i, TypeLabel::C(k), offset, k, base);
        } else {
            base.push(alpha(i, k));
            push_component(out, i, TypeLabel::B(k), offset, k, base);
        }
    } else if line.self_dual_t && tau_ok {
        let mut base = a_labels;
        if k >= 2 {
            base.push(format!("{}+2{}", alpha(i, k - 1), alpha(i, k)));
        }
        push_component(out, i, TypeLabel::D(k), offset, k, base);
    } else if k >= 2 {
        push_component(out, i, TypeLabel::A(k - 1), offset, k, a_labels);
    } else {
        empty(out);
    }
    Ok(())
}

/// Σ_{O,μ} per line, then the R-group and the semidirect orders.
pub fn classify(bd: &BlockDescriptor) -> Result<ClassifiedBlock, BlockError> {
    if bd.ambient == Ambient::SoEven && bd.h_rank == 1 {
        return Err(BlockError::EvenOrthogonalRankOne);
    }
    if bd.ambient == Ambient::Gl && bd.h_rank != 0 {
        return Err(BlockError::GlWithH);
    }
    let mut components = Vec::new();
    let mut offset = 0;
    for (idx, line) in bd.lines.iter().enumerate() {
        classify_line(bd, idx, line, offset, &mut components)?;
        offset += line.k;
    }
    let mut cb = ClassifiedBlock {
        ambient: bd.ambient,
        rank: offset,
        components,
        w_o_order: 1,
        r_generators: vec![],
        r_order: 1,
        wmo_order: 1,
        semidirect_verified: None,
        flags: vec![],
    };
    let r = r_group(bd, &cb)?;
    cb.r_generators = r.generators;
    cb.r_order = r.order;
    cb.flags = r.flags;
    let (w, rr, wmo) = semidirect_orders(&cb)?;
    cb.w_o_order = w;
    cb.r_order = rr;
    cb.wmo_order = wmo;
    cb.semidirect_verified = verify_semidirect(&cb)?;
    Ok(cb)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RGroupReport {
    pub generators: Vec<WeylElement>,
    pub order: u128,
    pub flags: Vec<String>,
}

fn line_offsets(bd: &BlockDescriptor) -> Vec<usize> {
    bd.lines
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.k;
            Some(o)
        })
        .collect()
}

/// Replaces w by the element of W_O·w that maps Σ⁺_O to itself.
fn project(w: &WeylElement, d: &BasedRootDatum) -> WeylElement {
    let mut cur = w.clone();
    'outer: loop {
        for i in 0..d.num_simple() {
            if d.root_sign(&cur.inverse().act(&d.simple(i).root)) == Some(false) {
                cur = d.simple_reflection(i).compose(&cur);
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Generators of R(O) = {w ∈ W(M,O) : w Σ⁺_O = Σ⁺_O} with its order.
pub fn r_group(bd: &BlockDescriptor, cb: &ClassifiedBlock) -> Result<RGroupReport, BlockError> {
    let rank = cb.rank;
    let offsets = line_offsets(bd);
    let mut raw: Vec<WeylElement> = Vec::new();
    let mut flags = Vec::new();
    let flip = |o: usize, l: &CuspidalLine| WeylElement::flip(rank, o + l.k - 1);
    let so_even = bd.ambient == Ambient::SoEven;
    let in_i_prime = |l: &CuspidalLine| {
        so_even && l.d % 2 == 1 && (bd.h_rank != 0 || l.d != 1) && l.self_dual_t && !l.tau_t
    };
    for (idx, (line, &o)) in bd.lines.iter().zip(&offsets).enumerate() {
        let is_d = cb
            .components
            .iter()
            .any(|c| c.line == idx + 1 && matches!(c.label, TypeLabel::D(_)));
        if bd.ambient == Ambient::Gl {
            if !line.gl_singular {
                raw.extend(
                    (0..line.k.saturating_sub(1))
                        .map(|j| WeylElement::swap(rank, o + j, o + j + 1)),
                );
            }
            continue;
        }
        // In SO_even a lone flip of an odd block needs the outer twist on H
        // to fix τ; otherwise it enters only through even products below.
        let flip_allowed = !(so_even && line.d % 2 == 1) || (bd.h_rank > 0 && line.tau_t);
        if line.gl_singular || line.k == 1 {
            if is_d && flip_allowed {
                raw.push(flip(o, line));
            }
            continue;
        }
        raw.extend((0..line.k - 1).map(|j| WeylElement::swap(rank, o + j, o + j + 1)));
        if line.self_dual_t {
            let f = flip(o, line);
            let t = WeylElement::swap(rank, o + line.k - 2, o + line.k - 1);
            raw.push(f.compose(&t).compose(&f));
            if !line.boundary_pole && flip_allowed {
                raw.push(f);
            }
        }
    }
    if so_even {
        let primes: Vec<usize> = (0..bd.lines.len())
            .filter(|&i| in_i_prime(&bd.lines[i]))
            .collect();
        for w in primes.windows(2) {
            let (a, b) = (w[0], w[1]);
            raw.push(flip(offsets[a], &bd.lines[a]).compose(&flip(offsets[b], &bd.lines[b])));
        }
        if primes.len() == 1 {
            flags.push(format!(
                "line {} alone in I': no even products",
                primes[0] + 1
            ));
        }
    }
    if !bd.extra_r_generators.is_empty() {
        flags.push("R(O)_J generators supplied by caller".into());
        raw.extend(bd.extra_r_generators.iter().cloned());
    }
    let d = cb.datum()?;
    let mut gens = BTreeSet::new();
    for g in &raw {
        if g.rank() != rank || !d.normalizes(g) {
            return Err(BlockError::NotNormalizing(g.to_string()));
        }
        let p = project(g, &d);
        if !p.is_identity() {
            gens.insert(p);
        }
    }
    let generators: Vec<WeylElement> = gens.into_iter().collect();
    let order = generate_group(rank, &generators, ENUMERATION_GUARD)?.len() as u128;
    Ok(RGroupReport {
        generators,
        order,
        flags,
    })
}

/// (|W_O|, |R(O)|, |W(M,O)|) with |W(M,O)| = |W_O|·|R(O)|.
pub fn semidirect_orders(cb: &ClassifiedBlock) -> Result<(u128, u128, u128), BlockError> {
    let mut w = 1u128;
    for c in &cb.components {
        let o = c.label.weyl_order();
        if o > ENUMERATION_GUARD as u128 {
            return Err(RootDataError::TooLarge(o).into());
        }
        w = w.saturating_mul(o);
    }
    Ok((w, cb.r_order, w.saturating_mul(cb.r_order)))
}

/// Enumerates ⟨W_O, R(O)⟩ directly when it fits under the guard.
fn verify_semidirect(cb: &ClassifiedBlock) -> Result<Option<bool>, BlockError> {
    if cb.wmo_order > ENUMERATION_GUARD as u128 {
        return Ok(None);
    }
    let d = cb.datum()?;
    let mut gens: Vec<WeylElement> = (0..d.num_simple())
        .map(|i| d.simple_reflection(i))
        .collect();
    gens.extend(cb.r_generators.iter().cloned());
    match generate_group(cb.rank, &gens, ENUMERATION_GUARD) {
        Ok(all) => Ok(Some(all.len() as u128 == cb.wmo_order)),
        Err(RootDataError::TooLarge(_)) => Ok(Some(false)),
        Err(e) => Err(e.into()),
    }
}

/// (a_s, a_{s,−}) for one simple root of Σ_{O,μ}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInvariant {
    #[serde(with = "crate::exact::rational")]
    pub a: BigRational,
    #[serde(with = "crate::exact::rational", default = "BigRational::zero")]
    pub b: BigRational,
}

impl RootInvariant {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        RootInvariant { a, b }
    }
}

#[derive(Clone, Debug)]
pub struct BlockPresentation {
    pub spec: PresentationSpec,
    pub algebra: Arc<HeckeAlgebra>,
}

/// Datum over Σ_{O,μ} with C components read as B, q_α = q^{a+b} and
/// q_i = q^{a−b} on B components, extended by the R-group with trivial η.
pub fn hecke_from_block(
    cb: &ClassifiedBlock,
    invariants: &[RootInvariant],
    t: &[i64],
) -> Result<BlockPresentation, BlockError> {
    let lines = cb.components.iter().map(|c| c.line).max().unwrap_or(0);
    if t.len() < lines {
        return Err(BlockError::ScaleCount {
            expected: lines,
            got: t.len(),
        });
    }
    let specs = cb.specs(Some(t));
    let datum = build_o_datum(&specs, cb.rank)?;
    let n = datum.num_simple();
    if invariants.len() != n {
        return Err(BlockError::InvariantCount {
            expected: n,
            got: invariants.len(),
        });
    }
    let mut alpha = Vec::with_capacity(n);
    let mut special = Vec::new();
    for (ci, comp) in datum.components().iter().enumerate() {
        let is_b = matches!(comp.label, TypeLabel::B(_));
        for (pos, &s) in comp.base.iter().enumerate() {
            let inv = &invariants[s];
            let bad = |reason: &str| BlockError::InvalidInvariants {
                index: s,
                reason: reason.into(),
            };
            if inv.b.is_negative() {
                return Err(bad("a_{s,-} < 0"));
            }
            if inv.a < inv.b {
                return Err(bad("a_s < a_{s,-}"));
            }
            let is_special = is_b && pos + 1 == comp.base.len();
            if !inv.b.is_zero() && !is_special {
                return Err(bad(
                    "a_{s,-} must vanish off the short root of a type B component",
                ));
            }
            alpha.push(&inv.a + &inv.b);
            if is_special {
                special.push((ci, &inv.a - &inv.b));
            }
        }
    }
    let params = HeckeParams::new(alpha, special);
    let algebra = HeckeAlgebra::new(datum.clone(), params.clone())?;
    let extended = (!cb.r_generators.is_empty()).then(|| RGroupSpec {
        r_group: cb.r_generators.clone(),
        cocycle: None,
    });
    if let Some(ext) = &extended {
        crate::hecke::ExtendedHeckeAlgebra::new(algebra.clone(), ext.clone())?;
    }
    Ok(BlockPresentation {
        spec: PresentationSpec {
            datum: datum.spec().clone(),
            params,
            extended,
        },
        algebra,
    })
}
