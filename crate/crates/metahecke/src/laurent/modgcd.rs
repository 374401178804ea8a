//! Polynomial gcd over Q by reduction modulo word-size primes.
//!
//! Modulo each prime, all variables but the first are eliminated by
//! evaluation and dense interpolation. Images are lifted by Chinese
//! remaindering until they stabilize, and the candidate is accepted only
//! after exact trial division over Q.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};

use super::poly::{poly_div_exact, MPoly, Mono};

type Exps = Vec<i64>;
/// Keys ordered lexicographically, first variable most significant.
type ModPoly = BTreeMap<Exps, u64>;
/// Dense univariate polynomial, constant term first.
type Uni = Vec<u64>;

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.0 - 2)
    }

    fn reduce(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.0))
            .to_u64()
            .expect("residue fits")
    }

    // Univariate helpers.

    fn trim(mut a: Uni) -> Uni {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn eval(self, a: &[u64], x: u64) -> u64 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn monic(self, a: Uni) -> Uni {
        match a.last() {
            Some(&lc) if lc != 1 => {
                let inv = self.inv(lc);
                a.into_iter().map(|c| self.mul(c, inv)).collect()
            }
            _ => a,
        }
    }

    /// (quotient, remainder) of a by a nonzero b.
    fn divrem(self, a: &[u64], b: &[u64]) -> (Uni, Uni) {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        if r.len() <= db {
            return (vec![], Self::trim(r));
        }
        let mut q = vec![0; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            for (j, &bj) in b.iter().enumerate() {
                let k = i - db + j;
                r[k] = self.sub(r[k], self.mul(c, bj));
            }
        }
        (Self::trim(q), Self::trim(r))
    }

    fn gcd(self, a: &[u64], b: &[u64]) -> Uni {
        let (mut x, mut y) = (Self::trim(a.to_vec()), Self::trim(b.to_vec()));
        while !y.is_empty() {
            let (_, r) = self.divrem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(x)
    }

    // Multivariate helpers.

    fn scale(self, a: &ModPoly, c: u64) -> ModPoly {
        a.iter()
            .map(|(m, &v)| (m.clone(), self.mul(v, c)))
            .filter(|(_, v)| *v != 0)
            .collect()
    }

    fn monic_lex(self, a: ModPoly) -> ModPoly {
        match a.last_key_value() {
            Some((_, &lc)) if lc != 1 => self.scale(&a, self.inv(lc)),
            _ => a,
        }
    }

    fn add_term(self, a: &mut ModPoly, m: Exps, c: u64) {
        if c == 0 {
            return;
        }
        let s = self.add(a.get(&m).copied().unwrap_or(0), c);
        if s == 0 {
            a.remove(&m);
        } else {
            a.insert(m, s);
        }
    }

    fn eval_var(self, a: &ModPoly, y: usize, x: u64) -> ModPoly {
        let mut out = ModPoly::new();
        for (m, &c) in a {
            let mut k = m.clone();
            let e = std::mem::replace(&mut k[y], 0);
            self.add_term(&mut out, k, self.mul(c, self.pow(x, e as u64)));
        }
        out
    }

    /// Exact quotient a / b under lex order, if it exists.
    fn div_exact(self, a: &ModPoly, b: &ModPoly) -> Option<ModPoly> {
        let (lm, &lc) = b.last_key_value()?;
        let inv = self.inv(lc);
        let mut r = a.clone();
        let mut q = ModPoly::new();
        while let Some((m, &c)) = r.last_key_value() {
            if m.iter().zip(lm).any(|(x, y)| x < y) {
                return None;
            }
            let t: Exps = m.iter().zip(lm).map(|(x, y)| x - y).collect();
            let tc = self.mul(c, inv);
            for (bm, &bc) in b {
                let k: Exps = t.iter().zip(bm).map(|(x, y)| x + y).collect();
                let e = r.entry(k.clone()).or_insert(0);
                *e = self.sub(*e, self.mul(tc, bc));
                if *e == 0 {
                    r.remove(&k);
                }
            }
            q.insert(t, tc);
        }
        Some(q)
    }

    /// Coefficients with respect to x_y, keyed by the remaining exponents.
    fn split(a: &ModPoly, y: usize) -> BTreeMap<Exps, Uni> {
        let mut out: BTreeMap<Exps, Uni> = BTreeMap::new();
        for (m, &c) in a {
            let mut k = m.clone();
            let e = std::mem::replace(&mut k[y], 0) as usize;
            let u = out.entry(k).or_default();
            if u.len() <= e {
                u.resize(e + 1, 0);
            }
            u[e] = c;
        }
        out
    }

    fn unsplit(s: &BTreeMap<Exps, Uni>, y: usize) -> ModPoly {
        let mut out = ModPoly::new();
        for (k, u) in s {
            for (e, &c) in u.iter().enumerate() {
                if c != 0 {
                    let mut m = k.clone();
                    m[y] = e as i64;
                    out.insert(m, c);
                }
            }
        }
        out
    }

    /// Content in x_y and the primitive part.
    fn primitive(self, a: &ModPoly, y: usize) -> (Uni, BTreeMap<Exps, Uni>) {
        let s = Self::split(a, y);
        let cont = s.values().fold(Uni::new(), |g, u| self.gcd(&g, u));
        let prim = s
            .into_iter()
            .map(|(k, u)| (k, self.divrem(&u, &cont).0))
            .collect();
        (cont, prim)
    }

    /// Newton interpolation of each coefficient through (x_i, image_i).
    fn interpolate(self, points: &[(u64, ModPoly)], y: usize) -> ModPoly {
        let mut keys: Vec<&Exps> = points.iter().flat_map(|(_, g)| g.keys()).collect();
        keys.sort();
        keys.dedup();
        let xs: Vec<u64> = points.iter().map(|(x, _)| *x).collect();
        let mut out = ModPoly::new();
        for k in keys {
            let mut c: Vec<u64> = points
                .iter()
                .map(|(_, g)| g.get(k).copied().unwrap_or(0))
                .collect();
            for j in 1..c.len() {
                for i in (j..c.len()).rev() {
                    let num = self.sub(c[i], c[i - 1]);
                    let den = self.sub(xs[i], xs[i - j]);
                    c[i] = self.mul(num, self.inv(den));
                }
            }
            let mut poly: Uni = vec![*c.last().unwrap()];
            for i in (0..c.len() - 1).rev() {
                // poly ← poly·(x − x_i) + c_i
                let mut next = vec![0; poly.len() + 1];
                for (d, &v) in poly.iter().enumerate() {
                    next[d + 1] = self.add(next[d + 1], v);
                    next[d] = self.sub(next[d], self.mul(v, xs[i]));
                }
                next[0] = self.add(next[0], c[i]);
                poly = next;
            }
            for (e, &v) in poly.iter().enumerate() {
                if v != 0 {
                    let mut m = k.clone();
                    m[y] = e as i64;
                    out.insert(m, v);
                }
            }
        }
        out
    }

    /// Monic gcd (lex leading coefficient 1) in F_p[x_vars].
    fn mgcd(self, a: &ModPoly, b: &ModPoly, vars: &[usize]) -> ModPoly {
        if a.is_empty() {
            return self.monic_lex(b.clone());
        }
        if b.is_empty() {
            return self.monic_lex(a.clone());
        }
        let y = *vars.last().expect("at least one variable");
        let rest = &vars[..vars.len() - 1];
        if rest.is_empty() {
            let zero = vec![0; a.keys().next().unwrap().len()];
            let ua = Self::split(a, y).remove(&zero).unwrap_or_default();
            let ub = Self::split(b, y).remove(&zero).unwrap_or_default();
            return Self::unsplit(&BTreeMap::from([(zero, self.gcd(&ua, &ub))]), y);
        }
        let (ca, pa) = self.primitive(a, y);
        let (cb, pb) = self.primitive(b, y);
        let cont = self.gcd(&ca, &cb);
        let zero_key = vec![0; a.keys().next().unwrap().len()];
        let cont_poly = Self::unsplit(&BTreeMap::from([(zero_key, cont)]), y);
        let lca = pa.last_key_value().unwrap().1.clone();
        let lcb = pb.last_key_value().unwrap().1.clone();
        let g = self.gcd(&lca, &lcb);
        let deg = |s: &BTreeMap<Exps, Uni>| s.values().map(|u| u.len() - 1).max().unwrap_or(0);
        let bound = deg(&pa).min(deg(&pb)) + g.len() - 1;
        let (pa, pb) = (Self::unsplit(&pa, y), Self::unsplit(&pb, y));
        let mut points: Vec<(u64, ModPoly)> = Vec::new();
        let mut lead: Option<Exps> = None;
        for x in 1..self.0 {
            if self.eval(&lca, x) == 0 || self.eval(&lcb, x) == 0 {
                continue;
            }
            let image = self.mgcd(&self.eval_var(&pa, y, x), &self.eval_var(&pb, y, x), rest);
            let lm = image.last_key_value().unwrap().0.clone();
            if lm.iter().all(|&e| e == 0) {
                return self.monic_lex(cont_poly);
            }
            match lead.as_ref().map(|l| lm.cmp(l)) {
                Some(Ordering::Greater) => continue,
                Some(Ordering::Equal) => {}
                _ => {
                    points.clear();
                    lead = Some(lm);
                }
            }
            points.push((x, self.scale(&image, self.eval(&g, x))));
            if points.len() > bound {
                let h = self.interpolate(&points, y);
                let (_, hp) = self.primitive(&h, y);
                let hp = Self::unsplit(&hp, y);
                if self.div_exact(&pa, &hp).is_some() && self.div_exact(&pb, &hp).is_some() {
                    return self.monic_lex(mul(self, &cont_poly, &hp));
                }
                points.clear();
                lead = None;
            }
        }
        unreachable!("evaluation points exhausted")
    }
}

fn mul(f: Fp, a: &ModPoly, b: &ModPoly) -> ModPoly {
    let mut out = ModPoly::new();
    for (m1, &c1) in a {
        for (m2, &c2) in b {
            let m: Exps = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
            f.add_term(&mut out, m, f.mul(c1, c2));
        }
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Integer polynomial with coprime coefficients, keyed lexicographically.
fn integer_primitive(a: &MPoly) -> BTreeMap<Exps, BigInt> {
    let lcm = a
        .terms
        .values()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: BTreeMap<Exps, BigInt> = a
        .terms
        .iter()
        .map(|(m, c)| (m.0.clone(), c.numer() * (&lcm / c.denom())))
        .collect();
    let g = ints.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|(m, c)| (m, c / &g)).collect()
}

/// Gcd of two nonzero polynomials (nonnegative exponents) over Q, monic in
/// the graded-lex order of [`MPoly`].
pub(crate) fn modular_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let nvars = a.nvars;
    let ia = integer_primitive(a);
    let ib = integer_primitive(b);
    let vars: Vec<usize> = (0..nvars)
        .filter(|&v| ia.keys().chain(ib.keys()).any(|m| m[v] > 0))
        .collect();
    if vars.is_empty() {
        return MPoly::one(nvars);
    }
    let lca = ia.last_key_value().unwrap().1;
    let lcb = ib.last_key_value().unwrap().1;
    let gamma = lca.gcd(lcb);
    let mut lead: Option<Exps> = None;
    let mut acc: BTreeMap<Exps, BigInt> = BTreeMap::new();
    let mut modulus = BigInt::one();
    let mut p = (1u64 << 31) - 1;
    loop {
        p -= 2;
        if !is_prime(p) {
            continue;
        }
        let f = Fp(p);
        if f.reduce(lca) == 0 || f.reduce(lcb) == 0 {
            continue;
        }
        let reduce = |m: &BTreeMap<Exps, BigInt>| -> ModPoly {
            m.iter()
                .map(|(k, c)| (k.clone(), f.reduce(c)))
                .filter(|(_, c)| *c != 0)
                .collect()
        };
        let image = f.mgcd(&reduce(&ia), &reduce(&ib), &vars);
        let lm = image.last_key_value().unwrap().0.clone();
        if lm.iter().all(|&e| e == 0) {
            return MPoly::one(nvars);
        }
        let image = f.scale(&image, f.reduce(&gamma));
        match lead.as_ref().map(|l| lm.cmp(l)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {}
            _ => {
                lead = Some(lm);
                acc.clear();
                modulus = BigInt::one();
            }
        }
        // Chinese remaindering onto the symmetric range.
        let bp = BigInt::from(p);
        let m_inv = BigInt::from(f.inv(f.reduce(&modulus)));
        let new_modulus = &modulus * &bp;
        let half = &new_modulus / 2;
        let mut keys: Vec<Exps> = acc.keys().chain(image.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        let mut next = BTreeMap::new();
        for k in keys {
            let old = acc.get(&k).cloned().unwrap_or_default();
            let r = BigInt::from(image.get(&k).copied().unwrap_or(0));
            let t = ((r - &old) * &m_inv).mod_floor(&bp);
            let mut x = (old + &modulus * t).mod_floor(&new_modulus);
            if x > half {
                x -= &new_modulus;
            }
            if !x.is_zero() {
                next.insert(k, x);
            }
        }
        let stable = next == acc;
        acc = next;
        modulus = new_modulus;
        if stable {
            let cand = MPoly {
                nvars,
                terms: acc
                    .iter()
                    .map(|(k, c)| (Mono(k.clone()), BigRational::from_integer(c.clone())))
                    .collect(),
            };
            if poly_div_exact(a, &cand).is_some() && poly_div_exact(b, &cand).is_some() {
                return cand.monic();
            }
        }
    }
}
