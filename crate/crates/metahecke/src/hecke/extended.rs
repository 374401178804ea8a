//! The semidirect product H ⋊ C[R, η] with J_r h J_r⁻¹ = r·h.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use super::{he_mul, HeckeAlgebra, HeckeElement, HeckeError};
use crate::laurent::QLaurent;
use crate::rootdata::{
    coroot_in_2lambda, generate_group, DiagramAutomorphism, WeylElement, ENUMERATION_GUARD,
};

/// One non-default value η(left, right).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub left: WeylElement,
    pub right: WeylElement,
    #[serde(with = "crate::exact::rational")]
    pub value: BigRational,
}

/// JSON form: generators of R and the nontrivial cocycle values (others are 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGroupSpec {
    pub r_group: Vec<WeylElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<CocycleEntry>>,
}

#[derive(Debug)]
pub struct ExtendedHeckeAlgebra {
    base: Arc<HeckeAlgebra>,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    eta: Vec<Vec<BigRational>>,
    spec: RGroupSpec,
}

impl PartialEq for ExtendedHeckeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.elements == other.elements && self.eta == other.eta
    }
}

impl ExtendedHeckeAlgebra {
    pub fn new(base: Arc<HeckeAlgebra>, spec: RGroupSpec) -> Result<Arc<Self>, HeckeError> {
        let d = base.datum();
        for g in &spec.r_group {
            let auto = DiagramAutomorphism::new(g.clone(), d)?;
            for (i, &j) in auto.base_perm.iter().enumerate() {
                if base.params().alpha[i] != base.params().alpha[j] {
                    return Err(HeckeError::RGroup(format!(
                        "{g} does not preserve the parameter of simple root {i}"
                    )));
                }
                if coroot_in_2lambda(&d.simple(i).root, d) == Some(true) {
                    let bi = base.params().special_for(d.component_of_simple(i));
                    let bj = base.params().special_for(d.component_of_simple(j));
                    if bi != bj {
                        return Err(HeckeError::RGroup(format!("{g} does not preserve q_i")));
                    }
                }
            }
        }
        let mut elements = generate_group(d.rank(), &spec.r_group, ENUMERATION_GUARD)?;
        elements.sort();
        let index: HashMap<WeylElement, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let n = elements.len();
        let mut eta = vec![vec![BigRational::one(); n]; n];
        for e in spec.cocycle.iter().flatten() {
            let (Some(&i), Some(&j)) = (index.get(&e.left), index.get(&e.right)) else {
                return Err(HeckeError::RGroup(
                    "cocycle entry outside the R-group".into(),
                ));
            };
            if e.value.is_zero() {
                return Err(HeckeError::RGroup("cocycle values must be nonzero".into()));
            }
            eta[i][j] = e.value.clone();
        }
        let mul = |i: usize, j: usize| index[&elements[i].compose(&elements[j])];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = &eta[a][b] * &eta[mul(a, b)][c];
                    let rhs = &eta[a][mul(b, c)] * &eta[b][c];
                    if lhs != rhs {
                        return Err(HeckeError::Cocycle(a, b, c));
                    }
                }
            }
        }
        Ok(Arc::new(ExtendedHeckeAlgebra {
            base,
            elements,
            index,
            eta,
            spec,
        }))
    }

    /// R = {1}.
    pub fn trivial(base: Arc<HeckeAlgebra>) -> Arc<Self> {
        Self::new(
            base,
            RGroupSpec {
                r_group: vec![],
                cocycle: None,
            },
        )
        .expect("trivial group is valid")
    }

    pub fn base(&self) -> &Arc<HeckeAlgebra> {
        &self.base
    }

    pub fn r_group(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn spec(&self) -> &RGroupSpec {
        &self.spec
    }

    pub fn eta(&self, r: &WeylElement, s: &WeylElement) -> Option<&BigRational> {
        Some(&self.eta[*self.index.get(r)?][*self.index.get(s)?])
    }
}

/// Σ_r h_r·J_r.
#[derive(Clone, Debug)]
pub struct ExtendedHeckeElement {
    alg: Arc<ExtendedHeckeAlgebra>,
    terms: BTreeMap<WeylElement, HeckeElement>,
}

impl PartialEq for ExtendedHeckeElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg) && self.terms == other.terms
    }
}

impl ExtendedHeckeElement {
    pub fn zero(alg: &Arc<ExtendedHeckeAlgebra>) -> Self {
        ExtendedHeckeElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// h·J_r.
    pub fn term(
        alg: &Arc<ExtendedHeckeAlgebra>,
        h: HeckeElement,
        r: WeylElement,
    ) -> Result<Self, HeckeError> {
        if !alg.index.contains_key(&r) {
            return Err(HeckeError::RGroup(format!("{r} is not in the R-group")));
        }
        if !Arc::ptr_eq(h.algebra(), &alg.base) && **h.algebra() != *alg.base {
            return Err(HeckeError::DatumMismatch);
        }
        let mut out = Self::zero(alg);
        out.add_term(r, h);
        Ok(out)
    }

    pub fn from_hecke(
        alg: &Arc<ExtendedHeckeAlgebra>,
        h: HeckeElement,
    ) -> Result<Self, HeckeError> {
        Self::term(alg, h, WeylElement::identity(alg.base.rank()))
    }

    /// J_r.
    pub fn j(alg: &Arc<ExtendedHeckeAlgebra>, r: WeylElement) -> Result<Self, HeckeError> {
        Self::term(alg, HeckeElement::one(&alg.base), r)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylElement, &HeckeElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, r: WeylElement, h: HeckeElement) {
        if h.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&r) {
            Some(v) => v.add(&h).expect("same algebra"),
            None => h,
        };
        if !sum.is_zero() {
            self.terms.insert(r, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        if self.alg != other.alg {
            return Err(HeckeError::RGroup("incompatible R-data".into()));
        }
        let mut out = self.clone();
        for (r, h) in &other.terms {
            out.add_term(r.clone(), h.clone());
        }
        Ok(out)
    }
}

/// (hJ_r)(h′J_{r′}) = η(r,r′)·h·(r·h′)·J_{rr′}.
pub fn ext_mul(
    x: &ExtendedHeckeElement,
    y: &ExtendedHeckeElement,
) -> Result<ExtendedHeckeElement, HeckeError> {
    if !Arc::ptr_eq(&x.alg, &y.alg) && *x.alg != *y.alg {
        return Err(HeckeError::RGroup("incompatible R-data".into()));
    }
    let mut out = ExtendedHeckeElement::zero(&x.alg);
    for (r, h) in &x.terms {
        for (r2, h2) in &y.terms {
            let eta = x.alg.eta(r, r2).expect("stored elements lie in R").clone();
            let prod = he_mul(h, &h2.conjugate_by(r))?;
            out.add_term(r.compose(r2), prod.scale(&QLaurent::constant(eta)));
        }
    }
    Ok(out)
}

impl fmt::Display for ExtendedHeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, h)| format!("[{h}]*J[{r}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;
    use crate::hecke::HeckeParams;
    use crate::rootdata::{classical_datum, ClassicalKind};

    fn o_even(n: usize) -> (Arc<ExtendedHeckeAlgebra>, WeylElement) {
        let c = classical_datum(ClassicalKind::OEven, 2 * n).unwrap();
        let r = c.automorphism.unwrap().map;
        let k = c.datum.num_simple();
        let base = HeckeAlgebra::new(c.datum, HeckeParams::new(vec![qi(1); k], vec![])).unwrap();
        let ext = ExtendedHeckeAlgebra::new(
            base,
            RGroupSpec {
                r_group: vec![r.clone()],
                cocycle: None,
            },
        )
        .unwrap();
        (ext, r)
    }

    #[test]
    fn j_squared_is_identity() {
        let (ext, r) = o_even(3);
        let j = ExtendedHeckeElement::j(&ext, r).unwrap();
        let one = ExtendedHeckeElement::j(&ext, WeylElement::identity(3)).unwrap();
        assert_eq!(ext_mul(&j, &j).unwrap(), one);
    }

    #[test]
    fn j_conjugates_lattice_and_u() {
        for n in [2, 3] {
            let (ext, r) = o_even(n);
            let base = ext.base().clone();
            let j = ExtendedHeckeElement::j(&ext, r.clone()).unwrap();
            let lam: Vec<i64> = (1..=n as i64).collect();
            let z = ExtendedHeckeElement::from_hecke(&ext, HeckeElement::z(&base, &lam)).unwrap();
            let expect =
                ExtendedHeckeElement::term(&ext, HeckeElement::z(&base, &r.act(&lam)), r.clone())
                    .unwrap();
            assert_eq!(ext_mul(&j, &z).unwrap(), expect);
            for i in 0..base.datum().num_simple() {
                let w = base.datum().simple_reflection(i);
                let u = ExtendedHeckeElement::from_hecke(&ext, HeckeElement::u(&base, w.clone()))
                    .unwrap();
                let conj = r.compose(&w).compose(&r.inverse());
                let expect =
                    ExtendedHeckeElement::term(&ext, HeckeElement::u(&base, conj), r.clone())
                        .unwrap();
                assert_eq!(ext_mul(&j, &u).unwrap(), expect);
            }
        }
    }

    #[test]
    fn cocycle_validation() {
        let c = classical_datum(ClassicalKind::OEven, 4).unwrap();
        let r = c.automorphism.unwrap().map;
        let base = HeckeAlgebra::new(c.datum, HeckeParams::new(vec![qi(1); 2], vec![])).unwrap();
        let id = WeylElement::identity(2);
        // η(1, r) = 2 alone breaks the identity at (1, 1, r).
        let bad = RGroupSpec {
            r_group: vec![r.clone()],
            cocycle: Some(vec![CocycleEntry {
                left: id,
                right: r.clone(),
                value: qi(2),
            }]),
        };
        assert!(matches!(
            ExtendedHeckeAlgebra::new(base.clone(), bad),
            Err(HeckeError::Cocycle(..))
        ));
        let sign = RGroupSpec {
            r_group: vec![r.clone()],
            cocycle: Some(vec![CocycleEntry {
                left: r.clone(),
                right: r.clone(),
                value: qi(-1),
            }]),
        };
        let ext = ExtendedHeckeAlgebra::new(base, sign).unwrap();
        let j = ExtendedHeckeElement::j(&ext, r).unwrap();
        let sq = ext_mul(&j, &j).unwrap();
        let minus_one = ExtendedHeckeElement::from_hecke(
            &ext,
            HeckeElement::scalar(ext.base(), QLaurent::from_int(-1)),
        )
        .unwrap();
        assert_eq!(sq, minus_one);
    }

    #[test]
    fn parameter_breaking_automorphism_rejected() {
        let c = classical_datum(ClassicalKind::Gl, 2).unwrap();
        let base = HeckeAlgebra::new(c.datum, HeckeParams::new(vec![qi(1)], vec![])).unwrap();
        let swap = WeylElement::swap(2, 0, 1);
        assert!(ExtendedHeckeAlgebra::new(
            base,
            RGroupSpec {
                r_group: vec![swap],
                cocycle: None
            }
        )
        .is_err());
    }
}
