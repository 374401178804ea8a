//! Temperedness and square-integrability from module exponents.

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rootdata::BasedRootDatum;

/// λ ↦ ζ(λ)·q^{⟨λ,ν⟩} with ζ(λ) = exp(2πi⟨λ,θ⟩). Only −ν (the real part in
/// units of log q) and θ are stored; ζ is unitary by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentChar {
    #[serde(with = "crate::exact::rational_vec", default)]
    pub tag: Vec<BigRational>,
    #[serde(with = "crate::exact::rational_vec")]
    pub real_part: Vec<BigRational>,
}

impl ExponentChar {
    /// Character with trivial tag and the given real part.
    pub fn real(real_part: Vec<BigRational>) -> Self {
        ExponentChar {
            tag: vec![BigRational::zero(); real_part.len()],
            real_part,
        }
    }

    pub fn nu(&self) -> Vec<BigRational> {
        self.real_part.iter().map(|x| -x).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleExponents {
    pub chars: Vec<ExponentChar>,
}

impl ModuleExponents {
    pub fn new(chars: Vec<ExponentChar>) -> Self {
        ModuleExponents { chars }
    }
}

/// Per-character Δ∨-coordinates of the real part (`None` when outside the
/// span) and the two verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberReport {
    pub coefficients: Vec<Option<Vec<String>>>,
    pub tempered: bool,
    pub square_integrable: bool,
}

fn coroot_coordinates(c: &ExponentChar, d: &BasedRootDatum) -> Option<Vec<BigRational>> {
    if c.real_part.len() != d.rank() {
        return None;
    }
    let basis: Vec<Vec<BigRational>> = d
        .base_roots()
        .iter()
        .map(|p| linalg::to_q(&p.coroot))
        .collect();
    linalg::solve_in_basis(&basis, &c.real_part)
}

/// Every real part lies in the closed negative cone spanned by Δ∨.
pub fn tempered_check(e: &ModuleExponents, d: &BasedRootDatum) -> bool {
    e.chars
        .iter()
        .all(|c| coroot_coordinates(c, d).is_some_and(|v| v.iter().all(|x| !x.is_positive())))
}

/// Z ∪ Δ has full rank, every real part lies in the open negative cone, and
/// ν vanishes on Z.
pub fn sqint_check(e: &ModuleExponents, z: &[Vec<i64>], d: &BasedRootDatum) -> bool {
    if z.iter().any(|v| v.len() != d.rank()) {
        return false;
    }
    let mut span: Vec<Vec<BigRational>> = z.iter().map(|v| linalg::to_q(v)).collect();
    span.extend(d.base_roots().iter().map(|p| linalg::to_q(&p.root)));
    if linalg::rank(&span) != d.rank() {
        return false;
    }
    e.chars.iter().all(|c| {
        let strict = coroot_coordinates(c, d).is_some_and(|v| v.iter().all(|x| x.is_negative()));
        let orthogonal = z.iter().all(|zv| {
            zv.iter()
                .zip(&c.real_part)
                .map(|(a, b)| b * BigRational::from_integer((*a).into()))
                .sum::<BigRational>()
                .is_zero()
        });
        strict && orthogonal
    })
}

pub fn chamber_report(e: &ModuleExponents, z: &[Vec<i64>], d: &BasedRootDatum) -> ChamberReport {
    ChamberReport {
        coefficients: e
            .chars
            .iter()
            .map(|c| {
                coroot_coordinates(c, d)
                    .map(|v| v.iter().map(crate::exact::format_rational).collect())
            })
            .collect(),
        tempered: tempered_check(e, d),
        square_integrable: sqint_check(e, z, d),
    }
}
