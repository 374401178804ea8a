//! Sparse multivariate Laurent polynomials over Q.
//!
//! This is the workhorse behind exact division and gcd for the public
//! coefficient types. Monomials are ordered graded-lexicographically, so the
//! last entry of the term map is always the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigRational, Integer, One, Signed, Zero};

use super::modgcd::modular_gcd;

pub(crate) type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mono(pub Vec<i64>);

impl Mono {
    fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn sub(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn add(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(exps: Vec<i64>, c: Q) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(exps), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e == 0))
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.add(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn shift(&self, by: &[i64]) -> MPoly {
        let by = Mono(by.to_vec());
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.add(&by), v.clone()))
                .collect(),
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.last_key_value()
    }

    /// Componentwise minimum exponent; zeros for the zero polynomial.
    pub fn min_exps(&self) -> Vec<i64> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut mins = first.0.clone();
        for m in it {
            for (a, b) in mins.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        mins
    }

    /// Splits off the largest monomial factor: returns (p', m) with p = m·p'
    /// and p' a polynomial with no variable dividing it.
    pub fn strip_monomial(&self) -> (MPoly, Vec<i64>) {
        let mins = self.min_exps();
        let neg: Vec<i64> = mins.iter().map(|e| -e).collect();
        (self.shift(&neg), mins)
    }

    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficients with respect to variable `v`, indexed by its exponent.
    /// Only meaningful for polynomials (nonnegative exponents).
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let deg = self.degree_in(v).max(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut k = m.0.clone();
            k[v] = 0;
            out[e].add_term(Mono(k), c.clone());
        }
        out
    }
}

/// Long division of polynomials under the graded-lex order. A single divisor
/// is a Groebner basis of the ideal it generates, so a nonzero remainder means
/// no exact quotient exists.
pub(crate) fn poly_div_exact(num: &MPoly, den: &MPoly) -> Option<MPoly> {
    let (lm, lc) = den.leading()?;
    let (lm, lc_inv) = (lm.clone(), lc.recip());
    let mut p = num.clone();
    let mut q = MPoly::zero(num.nvars);
    while let Some((m, c)) = p.leading() {
        if !lm.divides(m) {
            return None;
        }
        let t = MPoly::monomial(m.sub(&lm).0, c * &lc_inv);
        p = p.sub(&t.mul(den));
        q = q.add(&t);
    }
    Some(q)
}

/// Exact division in the Laurent ring.
pub(crate) fn laurent_div_exact(num: &MPoly, den: &MPoly) -> Option<MPoly> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(MPoly::zero(num.nvars));
    }
    let (n, mn) = num.strip_monomial();
    let (d, md) = den.strip_monomial();
    let q = poly_div_exact(&n, &d)?;
    let shift: Vec<i64> = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
    Some(q.shift(&shift))
}

/// Substitutes x_v -> x_v^(1/g) where every exponent of x_v is divisible by g.
fn compress(p: &MPoly, g: &[i64]) -> MPoly {
    MPoly {
        nvars: p.nvars,
        terms: p
            .terms
            .iter()
            .map(|(m, c)| {
                let k = m.0.iter().zip(g).map(|(e, d)| e / d).collect();
                (Mono(k), c.clone())
            })
            .collect(),
    }
}

fn expand(p: &MPoly, g: &[i64]) -> MPoly {
    MPoly {
        nvars: p.nvars,
        terms: p
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    Mono(m.0.iter().zip(g).map(|(e, d)| e * d).collect()),
                    c.clone(),
                )
            })
            .collect(),
    }
}

/// Monic gcd of two polynomials (nonnegative exponents), computed with a
/// recursive primitive polynomial remainder sequence.
pub(crate) fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.nvars);
    }
    let nvars = a.nvars;
    let mut g = vec![0i64; nvars];
    for m in a.terms.keys().chain(b.terms.keys()) {
        for (acc, e) in g.iter_mut().zip(&m.0) {
            *acc = acc.gcd(e);
        }
    }
    let g: Vec<i64> = g.into_iter().map(|x| x.max(1)).collect();
    if g.iter().any(|&x| x > 1) {
        return expand(&poly_gcd(&compress(a, &g), &compress(b, &g)), &g).monic();
    }
    // If one side is free of x_w, the gcd divides every x_w-coefficient of
    // the other side.
    for w in 0..nvars {
        let (da, db) = (a.degree_in(w), b.degree_in(w));
        let (free, other) = match (da, db) {
            (0, d) if d > 0 => (a, b),
            (d, 0) if d > 0 => (b, a),
            _ => continue,
        };
        let mut g = free.clone();
        for c in other.coeffs_in(w) {
            if g.is_constant() {
                break;
            }
            if !c.is_zero() {
                g = poly_gcd(&g, &c);
            }
        }
        return g.monic();
    }
    if poly_div_exact(b, a).is_some() {
        return a.monic();
    }
    if poly_div_exact(a, b).is_some() {
        return b.monic();
    }
    modular_gcd(a, b)
}

/// Gcd in the Laurent ring, normalized to a monic polynomial with no
/// monomial factor.
pub(crate) fn laurent_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let (a, _) = a.strip_monomial();
    let (b, _) = b.strip_monomial();
    poly_gcd(&a, &b)
}

pub(crate) fn sign_of_leading(p: &MPoly) -> bool {
    p.leading().map(|(_, c)| c.is_positive()).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn p2(terms: &[((i64, i64), i64)]) -> MPoly {
        let mut p = MPoly::zero(2);
        for &((a, b), c) in terms {
            p.add_term(Mono(vec![a, b]), q(c));
        }
        p
    }

    #[test]
    fn graded_lex_leading_term() {
        let p = p2(&[((3, 0), 1), ((1, 3), 1), ((0, 0), 5)]);
        assert_eq!(p.leading().unwrap().0 .0, vec![1, 3]);
    }

    #[test]
    fn division_exact_and_not() {
        let x_minus_1 = p2(&[((1, 0), 1), ((0, 0), -1)]);
        let x2_minus_1 = p2(&[((2, 0), 1), ((0, 0), -1)]);
        let x_plus_1 = p2(&[((1, 0), 1), ((0, 0), 1)]);
        assert_eq!(
            poly_div_exact(&x2_minus_1, &x_minus_1),
            Some(x_plus_1.clone())
        );
        assert_eq!(poly_div_exact(&x_plus_1, &x_minus_1), None);
    }

    #[test]
    fn laurent_division_handles_negative_exponents() {
        // (X - X^-1) / (1 - X^-2) = X
        let num = p2(&[((1, 0), 1), ((-1, 0), -1)]);
        let den = p2(&[((0, 0), 1), ((-2, 0), -1)]);
        assert_eq!(laurent_div_exact(&num, &den), Some(p2(&[((1, 0), 1)])));
    }

    #[test]
    fn bivariate_gcd() {
        // gcd((x-y)(x+1), (x-y)(y+2)) = x - y
        let xy = p2(&[((1, 0), 1), ((0, 1), -1)]);
        let a = xy.mul(&p2(&[((1, 0), 1), ((0, 0), 1)]));
        let b = xy.mul(&p2(&[((0, 1), 1), ((0, 0), 2)]));
        assert_eq!(poly_gcd(&a, &b), xy.monic());
    }

    #[test]
    fn gcd_with_compressed_exponents() {
        // gcd(x^4 - 1, x^8 - 1) = x^4 - 1
        let a = p2(&[((4, 0), 1), ((0, 0), -1)]);
        let b = p2(&[((8, 0), 1), ((0, 0), -1)]);
        assert_eq!(poly_gcd(&a, &b), a);
        // gcd(x^2 - y^4, x - y^2) = x - y^2
        let c = p2(&[((2, 0), 1), ((0, 4), -1)]);
        let d = p2(&[((1, 0), 1), ((0, 2), -1)]);
        assert_eq!(poly_gcd(&c, &d), d.monic());
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = p2(&[((1, 0), 1), ((0, 1), 1)]);
        let b = p2(&[((1, 0), 1), ((0, 1), -1), ((0, 0), 3)]);
        assert_eq!(poly_gcd(&a, &b), MPoly::one(2));
    }
}
