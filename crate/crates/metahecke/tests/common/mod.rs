#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use metahecke::exact::{q, qi};
use metahecke::hecke::{HeckeAlgebra, HeckeElement, HeckeParams};
use metahecke::laurent::{GroupAlgebraElement, QLaurent};
use metahecke::mpparams::{DiscreteParameter, InertialClass, JordEntry, Member, NormedParameter};
use metahecke::rootdata::{
    classical_datum, word_to_element, BasedRootDatum, ClassicalKind, ComponentSpec, TypeLabel,
};
use num::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn datum(label: TypeLabel, rank: usize) -> BasedRootDatum {
    BasedRootDatum::from_components(
        rank,
        &[ComponentSpec::new(label, label.coordinates().unwrap(), 1)],
    )
    .unwrap()
}

/// GL_2 with q_α = q^{3/2}.
pub fn a1() -> Arc<HeckeAlgebra> {
    HeckeAlgebra::new(
        classical_datum(ClassicalKind::Gl, 2).unwrap().datum,
        HeckeParams::new(vec![q(3, 2)], vec![]),
    )
    .unwrap()
}

pub fn a2() -> Arc<HeckeAlgebra> {
    HeckeAlgebra::new(
        classical_datum(ClassicalKind::Gl, 3).unwrap().datum,
        HeckeParams::new(vec![qi(1), qi(1)], vec![]),
    )
    .unwrap()
}

/// SO_5: the short root e₂ has coroot 2e₂ ∈ 2Λ∨, so q_i enters.
pub fn b2_two_lambda() -> Arc<HeckeAlgebra> {
    HeckeAlgebra::new(
        classical_datum(ClassicalKind::SoOdd, 5).unwrap().datum,
        HeckeParams::new(vec![qi(1), qi(3)], vec![(0, qi(1))]),
    )
    .unwrap()
}

/// Sp_4: long root 2e₂ with coroot e₂.
pub fn c2() -> Arc<HeckeAlgebra> {
    HeckeAlgebra::new(
        classical_datum(ClassicalKind::Sp, 4).unwrap().datum,
        HeckeParams::new(vec![qi(1), qi(2)], vec![]),
    )
    .unwrap()
}

/// A1 × A1 on Z⁴ with unequal parameters.
pub fn a1xa1() -> Arc<HeckeAlgebra> {
    let mut second = ComponentSpec::new(TypeLabel::A(1), 2, 1);
    second.offset = Some(2);
    let mut first = ComponentSpec::new(TypeLabel::A(1), 2, 1);
    first.offset = Some(0);
    let d = BasedRootDatum::from_components(4, &[first, second]).unwrap();
    HeckeAlgebra::new(d, HeckeParams::new(vec![q(1, 2), qi(2)], vec![])).unwrap()
}

pub fn random_element(alg: &Arc<HeckeAlgebra>, rng: &mut ChaCha8Rng) -> HeckeElement {
    let d = alg.datum();
    let mut x = HeckeElement::zero(alg);
    for _ in 0..rng.gen_range(1..=3) {
        let word: Vec<usize> = (0..rng.gen_range(0..=3))
            .map(|_| rng.gen_range(0..d.num_simple()))
            .collect();
        let lambda: Vec<i64> = (0..alg.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let c = QLaurent::monomial(
            rng.gen_range(-3..=3),
            BigRational::from_integer(rng.gen_range(-3i64..=3).into()),
        );
        x.add_term(
            word_to_element(&word, d),
            GroupAlgebraElement::monomial(lambda, c),
        );
    }
    x
}

/// Every alternating sign function, by filtering all 2^|jord| candidates
/// against the definition directly.
pub fn brute_force_alt_chars(p: &DiscreteParameter) -> usize {
    let n = p.jord.len();
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        let sign = |i: usize| if mask >> i & 1 == 1 { -1i8 } else { 1 };
        let ok = (0..n).all(|i| {
            let e = &p.jord[i];
            let same: Vec<usize> = (0..n)
                .filter(|&j| p.jord[j].rho == e.rho && p.jord[j].member == e.member)
                .collect();
            let min_a = same.iter().map(|&j| p.jord[j].a).min().unwrap();
            let first = same
                .iter()
                .copied()
                .find(|&j| p.jord[j].a == min_a)
                .unwrap();
            let k = (e.a + if e.of_type { 1 } else { 0 }) / 2;
            let parity_ok = if k % 2 == 1 {
                sign(i) == sign(first)
            } else {
                sign(i) == -sign(first)
            };
            let forced_ok = e.of_type || sign(first) == -1;
            parity_ok && forced_ok
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Solutions (a₊, a₋, m_gl) of m − 2m_gl = m₊ + m₋ by direct scan.
pub fn brute_force_s(class: &InertialClass, m: u32) -> BTreeSet<(u32, u32, u32)> {
    let mass = |a: u32, of_type: bool| -> u32 { (1..=a).map(|k| 2 * k - of_type as u32).sum() };
    let mut out = BTreeSet::new();
    for ap in 0..=m {
        for am in 0..=m {
            for m_gl in 0..=m / 2 {
                if mass(ap, class.type_plus) + mass(am, class.type_minus) + 2 * m_gl == m {
                    out.insert((ap, am, m_gl));
                }
            }
        }
    }
    out
}

/// Without-holes parameters for a single class in a given member/type,
/// with staircase length up to `max_len`.
pub fn staircase(rho: &str, member: Member, of_type: bool, len: u32) -> Vec<JordEntry> {
    (1..=len)
        .map(|k| JordEntry::new(rho, member, of_type, 2 * k - of_type as u32))
        .collect()
}

pub fn single_class(class: InertialClass, m: u32) -> Option<NormedParameter> {
    let w = if class.self_dual { 1 } else { 2 };
    let dim = w * class.d * m;
    if dim % 2 == 1 {
        return None;
    }
    NormedParameter::new(dim / 2, vec![(class, m)]).ok()
}
