//! Based root data of classical type and their Weyl groups.
//!
//! Lattices are always Z^rank with the standard pairing. Weyl group elements
//! are signed permutations of the coordinate basis, so lengths, actions and
//! reduced words are integer computations.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg;

/// Upper bound on Weyl group sizes that are enumerated explicitly.
pub const ENUMERATION_GUARD: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid size {size} for {kind}")]
    InvalidSize { kind: String, size: usize },
    #[error("component {index} ({label}) does not fit: needs {needed} coordinates, {available} available")]
    DoesNotFit {
        index: usize,
        label: String,
        needed: usize,
        available: usize,
    },
    #[error("components {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("label {label} requires size {expected}, got {got}")]
    LabelSize {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("scale t must be positive, got {0}")]
    BadScale(i64),
    #[error("root/coroot pair {0} has pairing {1}, expected 2")]
    BadPairing(usize, i64),
    #[error("root {0} is not a nonnegative or nonpositive integer combination of the base")]
    NotInBaseCone(usize),
    #[error("base roots are linearly dependent")]
    DependentBase,
    #[error("root system is not reduced: root {0} is twice root {1}")]
    NotReduced(usize, usize),
    #[error("reflection in root {0} is not a signed permutation")]
    NotSignedPermutation(usize),
    #[error("roots are not closed under reflection {0}")]
    NotClosed(usize),
    #[error("explicit roots require an explicit base")]
    MissingBase,
    #[error("vector length {got} does not match rank {rank}")]
    Dimension { rank: usize, got: usize },
    #[error("Weyl group of order {0} exceeds the enumeration guard")]
    TooLarge(u128),
    #[error("element does not lie in the Weyl group")]
    NotInWeylGroup,
    #[error("lattice map does not permute the base")]
    NotDiagramAutomorphism,
    #[error("unknown type label {0:?}")]
    UnknownLabel(String),
}

/// Cartan type of one component. `A(k)` has k+1 coordinates; the others have
/// k. Degenerate labels (`B(1)`, `C(1)`, `D(1)`, `D(2)`) are kept as labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLabel {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    Empty,
}

impl TypeLabel {
    /// Number of lattice coordinates the component occupies, if determined
    /// by the label.
    pub fn coordinates(self) -> Option<usize> {
        match self {
            TypeLabel::A(k) => Some(k + 1),
            TypeLabel::B(k) | TypeLabel::C(k) | TypeLabel::D(k) => Some(k),
            TypeLabel::Empty => None,
        }
    }

    pub fn weyl_order(self) -> u128 {
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        match self {
            TypeLabel::A(k) => fact(k + 1),
            TypeLabel::B(k) | TypeLabel::C(k) => (1u128 << k) * fact(k),
            TypeLabel::D(0) | TypeLabel::D(1) => 1,
            TypeLabel::D(k) => (1u128 << (k - 1)) * fact(k),
            TypeLabel::Empty => 1,
        }
    }

    pub fn num_positive_roots(self) -> usize {
        match self {
            TypeLabel::A(k) => k * (k + 1) / 2,
            TypeLabel::B(k) | TypeLabel::C(k) => k * k,
            TypeLabel::D(k) => k * k.saturating_sub(1),
            TypeLabel::Empty => 0,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A(k) => write!(f, "A{k}"),
            TypeLabel::B(k) => write!(f, "B{k}"),
            TypeLabel::C(k) => write!(f, "C{k}"),
            TypeLabel::D(k) => write!(f, "D{k}"),
            TypeLabel::Empty => f.write_str("empty"),
        }
    }
}

impl FromStr for TypeLabel {
    type Err = RootDataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("empty") {
            return Ok(TypeLabel::Empty);
        }
        let bad = || RootDataError::UnknownLabel(s.to_string());
        let mut chars = t.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str().trim_start_matches('_');
        let k: usize = rest.parse().map_err(|_| bad())?;
        match head.to_ascii_uppercase() {
            'A' => Ok(TypeLabel::A(k)),
            'B' if k >= 1 => Ok(TypeLabel::B(k)),
            'C' if k >= 1 => Ok(TypeLabel::C(k)),
            'D' if k >= 1 => Ok(TypeLabel::D(k)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A signed permutation: e_i ↦ signs[i]·e_{perm[i]}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            perm: (0..rank).collect(),
            signs: vec![1; rank],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Option<Self> {
        let n = perm.len();
        if signs.len() != n || signs.iter().any(|s| *s != 1 && *s != -1) {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(WeylElement { perm, signs })
    }

    /// Transposition of coordinates i and j.
    pub fn swap(rank: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(rank);
        w.perm.swap(i, j);
        w
    }

    /// Sign change of coordinate i.
    pub fn flip(rank: usize, i: usize) -> Self {
        let mut w = Self::identity(rank);
        w.signs[i] = -1;
        w
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// w∘v.
    pub fn compose(&self, v: &WeylElement) -> WeylElement {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = v.perm[i];
            perm[i] = self.perm[j];
            signs[i] = v.signs[i] * self.signs[j];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }

    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = self.signs[i] as i64 * x;
        }
        out
    }

    pub fn act_q(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = if self.signs[i] < 0 {
                -x.clone()
            } else {
                x.clone()
            };
        }
        out
    }

    /// Order as a group element.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.rank())
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                format!("e{}->{s}e{}", i + 1, self.perm[i] + 1)
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Signed-permutation action of w on λ.
pub fn act(w: &WeylElement, lambda: &[i64]) -> Result<Vec<i64>, RootDataError> {
    if w.rank() != lambda.len() {
        return Err(RootDataError::Dimension {
            rank: w.rank(),
            got: lambda.len(),
        });
    }
    Ok(w.act(lambda))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootPair {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "type")]
    pub label: TypeLabel,
    pub offset: usize,
    pub size: usize,
    pub t: i64,
    /// Indices into the datum's base, in Bourbaki order.
    pub base: Vec<usize>,
}

/// One requested component of a datum: label, number of coordinates, scale t,
/// and an optional fixed starting coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    #[serde(rename = "type")]
    pub label: TypeLabel,
    pub size: usize,
    #[serde(default = "one_i64")]
    pub t: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
}

fn one_i64() -> i64 {
    1
}

impl ComponentSpec {
    pub fn new(label: TypeLabel, size: usize, t: i64) -> Self {
        ComponentSpec {
            label,
            size,
            t,
            offset: None,
        }
    }
}

/// JSON form: `{rank, components: [{type, size, t}], roots?, base?}`. Explicit
/// `roots` (positive roots only) override the generated ones; `base` then
/// indexes into that list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub rank: usize,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<usize>>,
}

/// (Λ, Λ∨, Σ, Σ∨, Δ) with Λ = Λ∨ = Z^rank.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    rank: usize,
    components: Vec<Component>,
    roots: Vec<RootPair>,
    positive: Vec<bool>,
    base: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
    spec: DatumSpec,
}

impl PartialEq for BasedRootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.components == other.components
            && self.base_roots() == other.base_roots()
            && self.roots.iter().collect::<HashSet<_>>()
                == other.roots.iter().collect::<HashSet<_>>()
    }
}

impl Eq for BasedRootDatum {}

fn unit(rank: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = c;
    v
}

fn combo(rank: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; rank];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

/// Positive roots and ordered base of one standard component.
fn component_roots(label: TypeLabel, o: usize, rank: usize) -> (Vec<RootPair>, Vec<RootPair>) {
    let pair = |r: Vec<i64>, c: Vec<i64>| RootPair { root: r, coroot: c };
    let same = |r: Vec<i64>| RootPair {
        coroot: r.clone(),
        root: r,
    };
    let mut pos = Vec::new();
    let mut base = Vec::new();
    let k = match label {
        TypeLabel::A(k) => k + 1,
        TypeLabel::B(k) | TypeLabel::C(k) | TypeLabel::D(k) => k,
        TypeLabel::Empty => 0,
    };
    if matches!(label, TypeLabel::Empty) || (matches!(label, TypeLabel::D(_)) && k < 2) {
        return (pos, base);
    }
    for i in 0..k {
        for j in i + 1..k {
            pos.push(same(combo(rank, &[(o + i, 1), (o + j, -1)])));
            if !matches!(label, TypeLabel::A(_)) {
                pos.push(same(combo(rank, &[(o + i, 1), (o + j, 1)])));
            }
        }
    }
    match label {
        TypeLabel::B(_) => {
            for i in 0..k {
                pos.push(pair(unit(rank, o + i, 1), unit(rank, o + i, 2)));
            }
        }
        TypeLabel::C(_) => {
            for i in 0..k {
                pos.push(pair(unit(rank, o + i, 2), unit(rank, o + i, 1)));
            }
        }
        _ => {}
    }
    let simple_len = if matches!(label, TypeLabel::A(_)) {
        k - 1
    } else {
        k.saturating_sub(1)
    };
    for i in 0..simple_len {
        base.push(same(combo(rank, &[(o + i, 1), (o + i + 1, -1)])));
    }
    match label {
        TypeLabel::B(_) => base.push(pair(unit(rank, o + k - 1, 1), unit(rank, o + k - 1, 2))),
        TypeLabel::C(_) => base.push(pair(unit(rank, o + k - 1, 2), unit(rank, o + k - 1, 1))),
        TypeLabel::D(_) => base.push(same(combo(rank, &[(o + k - 2, 1), (o + k - 1, 1)]))),
        _ => {}
    }
    (pos, base)
}

fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

impl BasedRootDatum {
    /// Builds a datum from components placed on consecutive (or explicitly
    /// offset) coordinates. Coordinates not covered by a component are
    /// central.
    pub fn from_components(rank: usize, comps: &[ComponentSpec]) -> Result<Self, RootDataError> {
        let spec = DatumSpec {
            rank,
            components: comps.to_vec(),
            roots: None,
            base: None,
        };
        let mut cursor = 0;
        let mut placed: Vec<(usize, usize)> = Vec::new();
        let mut components = Vec::new();
        let mut pos_roots = Vec::new();
        let mut base_roots = Vec::new();
        for (idx, c) in comps.iter().enumerate() {
            if c.t <= 0 {
                return Err(RootDataError::BadScale(c.t));
            }
            if let Some(n) = c.label.coordinates() {
                if n != c.size {
                    return Err(RootDataError::LabelSize {
                        label: c.label.to_string(),
                        expected: n,
                        got: c.size,
                    });
                }
            }
            let offset = c.offset.unwrap_or(cursor);
            if offset + c.size > rank {
                return Err(RootDataError::DoesNotFit {
                    index: idx,
                    label: c.label.to_string(),
                    needed: c.size,
                    available: rank.saturating_sub(offset),
                });
            }
            for (j, &(o, s)) in placed.iter().enumerate() {
                if offset < o + s && o < offset + c.size {
                    return Err(RootDataError::Overlap(j, idx));
                }
            }
            placed.push((offset, c.size));
            cursor = offset + c.size;
            let (pos, base) = component_roots(c.label, offset, rank);
            let first = base_roots.len();
            base_roots.extend(base);
            components.push(Component {
                label: c.label,
                offset,
                size: c.size,
                t: c.t,
                base: (first..base_roots.len()).collect(),
            });
            pos_roots.extend(pos);
        }
        let base_idx: Vec<usize> = base_roots
            .iter()
            .map(|b| {
                pos_roots
                    .iter()
                    .position(|r| r == b)
                    .expect("simple roots are positive")
            })
            .collect();
        Self::assemble(rank, components, pos_roots, base_idx, spec)
    }

    /// Builds from a JSON-level description, honoring an explicit root override.
    pub fn from_spec(spec: &DatumSpec) -> Result<Self, RootDataError> {
        match &spec.roots {
            None => Self::from_components(spec.rank, &spec.components),
            Some(roots) => {
                let base = spec.base.clone().ok_or(RootDataError::MissingBase)?;
                let shell = Self::from_components(spec.rank, &spec.components)?;
                let mut d = Self::assemble(
                    spec.rank,
                    shell.components,
                    roots.clone(),
                    base,
                    spec.clone(),
                )?;
                // Component bases are recomputed against the explicit base by support.
                for c in d.components.iter_mut() {
                    c.base = d
                        .base
                        .iter()
                        .enumerate()
                        .filter(|(_, &r)| {
                            d.roots[r]
                                .root
                                .iter()
                                .enumerate()
                                .any(|(i, &x)| x != 0 && i >= c.offset && i < c.offset + c.size)
                        })
                        .map(|(j, _)| j)
                        .collect();
                }
                Ok(d)
            }
        }
    }

    fn assemble(
        rank: usize,
        components: Vec<Component>,
        pos_roots: Vec<RootPair>,
        base_idx: Vec<usize>,
        spec: DatumSpec,
    ) -> Result<Self, RootDataError> {
        for r in &pos_roots {
            if r.root.len() != rank || r.coroot.len() != rank {
                return Err(RootDataError::Dimension {
                    rank,
                    got: r.root.len().max(r.coroot.len()),
                });
            }
        }
        let mut roots = Vec::with_capacity(2 * pos_roots.len());
        for r in &pos_roots {
            roots.push(r.clone());
        }
        for r in &pos_roots {
            roots.push(RootPair {
                root: neg(&r.root),
                coroot: neg(&r.coroot),
            });
        }
        let mut index = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            index.insert(r.root.clone(), i);
        }
        for (i, r) in roots.iter().enumerate() {
            let p = pairing(&r.root, &r.coroot);
            if p != 2 {
                return Err(RootDataError::BadPairing(i, p));
            }
        }
        if base_idx.iter().any(|&b| b >= pos_roots.len()) {
            return Err(RootDataError::NotInBaseCone(0));
        }
        let basis: Vec<_> = base_idx
            .iter()
            .map(|&b| linalg::to_q(&roots[b].root))
            .collect();
        if linalg::rank(&basis) != basis.len() {
            return Err(RootDataError::DependentBase);
        }
        let mut positive = vec![false; roots.len()];
        for (i, r) in roots.iter().enumerate() {
            let c = linalg::solve_in_basis(&basis, &linalg::to_q(&r.root))
                .ok_or(RootDataError::NotInBaseCone(i))?;
            if c.iter().any(|x| !x.is_integer()) {
                return Err(RootDataError::NotInBaseCone(i));
            }
            let nonneg = c.iter().all(|x| !x.is_negative());
            let nonpos = c.iter().all(|x| !x.is_positive());
            if !(nonneg || nonpos) {
                return Err(RootDataError::NotInBaseCone(i));
            }
            positive[i] = nonneg;
            if i < pos_roots.len() && !nonneg {
                return Err(RootDataError::NotInBaseCone(i));
            }
        }
        for (i, r) in roots.iter().enumerate() {
            let doubled: Vec<i64> = r.root.iter().map(|x| 2 * x).collect();
            if let Some(&j) = index.get(&doubled) {
                return Err(RootDataError::NotReduced(j, i));
            }
        }
        let d = BasedRootDatum {
            rank,
            components,
            roots,
            positive,
            base: base_idx,
            index,
            spec,
        };
        for i in 0..d.roots.len() {
            let s = d
                .reflection(i)
                .ok_or(RootDataError::NotSignedPermutation(i))?;
            for r in &d.roots {
                let img = s.act(&r.root);
                match d.index.get(&img) {
                    Some(&j) if d.roots[j].coroot == s.act(&r.coroot) => {}
                    _ => return Err(RootDataError::NotClosed(i)),
                }
            }
        }
        Ok(d)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn spec(&self) -> &DatumSpec {
        &self.spec
    }

    pub fn roots(&self) -> &[RootPair] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RootPair> {
        self.roots
            .iter()
            .zip(&self.positive)
            .filter(|(_, p)| **p)
            .map(|(r, _)| r)
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive.iter().filter(|p| **p).count()
    }

    /// Simple root pairs, in base order.
    pub fn base_roots(&self) -> Vec<&RootPair> {
        self.base.iter().map(|&i| &self.roots[i]).collect()
    }

    pub fn simple(&self, i: usize) -> &RootPair {
        &self.roots[self.base[i]]
    }

    pub fn num_simple(&self) -> usize {
        self.base.len()
    }

    /// Component owning simple root i.
    pub fn component_of_simple(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.base.contains(&i))
            .expect("every simple root lies in a component")
    }

    /// Labels per component.
    pub fn type_labels(&self) -> Vec<TypeLabel> {
        self.components.iter().map(|c| c.label).collect()
    }

    /// `Some(true)` for positive roots, `Some(false)` for negative ones, `None`
    /// when v is not a root.
    pub fn root_sign(&self, v: &[i64]) -> Option<bool> {
        self.index.get(v).map(|&i| self.positive[i])
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn coroot_of(&self, v: &[i64]) -> Option<&[i64]> {
        self.index.get(v).map(|&i| self.roots[i].coroot.as_slice())
    }

    /// The reflection x ↦ x − ⟨x, α∨⟩α for root index i, when it is a signed
    /// permutation.
    fn reflection(&self, i: usize) -> Option<WeylElement> {
        let r = &self.roots[i];
        let mut perm = vec![0; self.rank];
        let mut signs = vec![1; self.rank];
        for j in 0..self.rank {
            let mut img = unit(self.rank, j, 1);
            let c = r.coroot[j];
            for (x, a) in img.iter_mut().zip(&r.root) {
                *x -= c * a;
            }
            let nz: Vec<usize> = (0..self.rank).filter(|&k| img[k] != 0).collect();
            if nz.len() != 1 || img[nz[0]].abs() != 1 {
                return None;
            }
            perm[j] = nz[0];
            signs[j] = img[nz[0]] as i8;
        }
        WeylElement::new(perm, signs)
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        self.reflection(self.base[i])
            .expect("validated at construction")
    }

    /// Reflection in an arbitrary root vector of this datum.
    pub fn reflection_in(&self, v: &[i64]) -> Option<WeylElement> {
        self.index.get(v).and_then(|&i| self.reflection(i))
    }

    /// Ambient realization of root i: α̃ = t·α on the component's scale.
    pub fn ambient_root(&self, i: usize) -> (Vec<BigRational>, Vec<BigRational>) {
        let r = &self.roots[i];
        let support = r.root.iter().position(|&x| x != 0).unwrap_or(0);
        let t = self
            .components
            .iter()
            .find(|c| support >= c.offset && support < c.offset + c.size)
            .map_or(1, |c| c.t);
        let t = BigRational::from_integer(BigInt::from(t));
        let root = linalg::to_q(&r.root).into_iter().map(|x| x * &t).collect();
        let coroot = linalg::to_q(&r.coroot)
            .into_iter()
            .map(|x| x / &t)
            .collect();
        (root, coroot)
    }

    pub fn weyl_order(&self) -> u128 {
        if self.spec.roots.is_some() {
            return self
                .enumerate_unbounded(usize::MAX)
                .map_or(u128::MAX, |v| v.len() as u128);
        }
        self.components
            .iter()
            .map(|c| c.label.weyl_order())
            .product()
    }

    fn enumerate_unbounded(&self, cap: usize) -> Result<Vec<WeylElement>, RootDataError> {
        let gens: Vec<WeylElement> = (0..self.num_simple())
            .map(|i| self.simple_reflection(i))
            .collect();
        generate_group(self.rank, &gens, cap)
    }

    /// Does w map every root to a root?
    pub fn normalizes(&self, w: &WeylElement) -> bool {
        w.rank() == self.rank
            && self.roots.iter().all(|r| {
                self.index
                    .get(&w.act(&r.root))
                    .is_some_and(|&j| self.roots[j].coroot == w.act(&r.coroot))
            })
    }
}

/// Closure of a generating set of signed permutations, with a size cap.
pub fn generate_group(
    rank: usize,
    gens: &[WeylElement],
    cap: usize,
) -> Result<Vec<WeylElement>, RootDataError> {
    let id = WeylElement::identity(rank);
    let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let x = w.compose(g);
            if seen.insert(x.clone()) {
                if out.len() >= cap {
                    return Err(RootDataError::TooLarge(out.len() as u128 + 1));
                }
                out.push(x.clone());
                queue.push_back(x);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Number of positive roots sent to negative roots.
pub fn weyl_length(w: &WeylElement, d: &BasedRootDatum) -> usize {
    d.positive_roots()
        .filter(|r| d.root_sign(&w.act(&r.root)) == Some(false))
        .count()
}

/// A reduced expression for w, as base indices (0-based), so that the product
/// of the simple reflections in order equals w.
pub fn reduced_word(w: &WeylElement, d: &BasedRootDatum) -> Result<Vec<usize>, RootDataError> {
    let mut cur = w.clone();
    let mut rev = Vec::new();
    'outer: loop {
        for i in 0..d.num_simple() {
            if d.root_sign(&cur.act(&d.simple(i).root)) == Some(false) {
                cur = cur.compose(&d.simple_reflection(i));
                rev.push(i);
                continue 'outer;
            }
        }
        break;
    }
    if !cur.is_identity() {
        return Err(RootDataError::NotInWeylGroup);
    }
    rev.reverse();
    Ok(rev)
}

/// Product of simple reflections in the given order.
pub fn word_to_element(word: &[usize], d: &BasedRootDatum) -> WeylElement {
    word.iter()
        .fold(WeylElement::identity(d.rank()), |acc, &i| {
            acc.compose(&d.simple_reflection(i))
        })
}

/// Order of s_i s_j.
pub fn braid_order(i: usize, j: usize, d: &BasedRootDatum) -> usize {
    d.simple_reflection(i)
        .compose(&d.simple_reflection(j))
        .order()
}

/// Whether the coroot of the root α lies in 2Λ∨.
pub fn coroot_in_2lambda(alpha: &[i64], d: &BasedRootDatum) -> Option<bool> {
    d.coroot_of(alpha).map(|c| c.iter().all(|x| x % 2 == 0))
}

/// All elements of W, sorted; refuses groups above [`ENUMERATION_GUARD`].
pub fn weyl_enumerate(d: &BasedRootDatum) -> Result<Vec<WeylElement>, RootDataError> {
    if d.spec.roots.is_none() {
        let order = d.weyl_order();
        if order > ENUMERATION_GUARD as u128 {
            return Err(RootDataError::TooLarge(order));
        }
    }
    d.enumerate_unbounded(ENUMERATION_GUARD)
}

/// Lattice automorphism permuting the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    pub map: WeylElement,
    /// base_perm[i] = j when the map sends simple root i to simple root j.
    pub base_perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(map: WeylElement, d: &BasedRootDatum) -> Result<Self, RootDataError> {
        if map.rank() != d.rank() {
            return Err(RootDataError::Dimension {
                rank: d.rank(),
                got: map.rank(),
            });
        }
        let mut base_perm = Vec::with_capacity(d.num_simple());
        for i in 0..d.num_simple() {
            let img = map.act(&d.simple(i).root);
            let img_co = map.act(&d.simple(i).coroot);
            let j = (0..d.num_simple())
                .find(|&j| d.simple(j).root == img && d.simple(j).coroot == img_co)
                .ok_or(RootDataError::NotDiagramAutomorphism)?;
            base_perm.push(j);
        }
        Ok(DiagramAutomorphism { map, base_perm })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    /// GL_m.
    Gl,
    /// SO_{2n+1}.
    SoOdd,
    /// Sp_{2n}.
    Sp,
    /// SO_{2n}.
    SoEven,
    /// O_{2n}: the SO_{2n} datum together with the outer flip.
    OEven,
}

#[derive(Clone, Debug)]
pub struct ClassicalDatum {
    pub datum: BasedRootDatum,
    pub automorphism: Option<DiagramAutomorphism>,
}

/// Standard based root datum of a classical group, `size` being the matrix
/// size (m for GL_m, 2n+1 for SO_{2n+1}, 2n otherwise).
pub fn classical_datum(kind: ClassicalKind, size: usize) -> Result<ClassicalDatum, RootDataError> {
    let bad = || RootDataError::InvalidSize {
        kind: format!("{kind:?}"),
        size,
    };
    let (label, rank) = match kind {
        ClassicalKind::Gl => {
            if size == 0 {
                return Err(bad());
            }
            (TypeLabel::A(size - 1), size)
        }
        ClassicalKind::SoOdd => {
            if size.is_multiple_of(2) {
                return Err(bad());
            }
            let n = size / 2;
            (
                if n == 0 {
                    TypeLabel::Empty
                } else {
                    TypeLabel::B(n)
                },
                n,
            )
        }
        ClassicalKind::Sp => {
            if size % 2 == 1 {
                return Err(bad());
            }
            let n = size / 2;
            (
                if n == 0 {
                    TypeLabel::Empty
                } else {
                    TypeLabel::C(n)
                },
                n,
            )
        }
        ClassicalKind::SoEven | ClassicalKind::OEven => {
            if size % 2 == 1 || size == 0 {
                return Err(bad());
            }
            (TypeLabel::D(size / 2), size / 2)
        }
    };
    let datum = BasedRootDatum::from_components(rank, &[ComponentSpec::new(label, rank, 1)])?;
    let automorphism = match kind {
        ClassicalKind::OEven => Some(DiagramAutomorphism::new(
            WeylElement::flip(rank, rank - 1),
            &datum,
        )?),
        _ => None,
    };
    Ok(ClassicalDatum {
        datum,
        automorphism,
    })
}

/// Σ_O from classified components: type C is emitted as type B, components
/// sit on consecutive coordinates unless offsets are given.
pub fn build_o_datum(
    components: &[ComponentSpec],
    ambient_rank: usize,
) -> Result<BasedRootDatum, RootDataError> {
    let converted: Vec<ComponentSpec> = components
        .iter()
        .map(|c| ComponentSpec {
            label: match c.label {
                TypeLabel::C(k) => TypeLabel::B(k),
                l => l,
            },
            ..c.clone()
        })
        .collect();
    BasedRootDatum::from_components(ambient_rank, &converted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(label: TypeLabel) -> BasedRootDatum {
        let n = label.coordinates().unwrap();
        BasedRootDatum::from_components(n, &[ComponentSpec::new(label, n, 1)]).unwrap()
    }

    #[test]
    fn classical_bases() {
        let gl2 = classical_datum(ClassicalKind::Gl, 2).unwrap().datum;
        assert_eq!(gl2.base_roots()[0].root, vec![1, -1]);
        assert_eq!(gl2.roots().len(), 2);
        let so5 = classical_datum(ClassicalKind::SoOdd, 5).unwrap().datum;
        let b: Vec<_> = so5.base_roots().iter().map(|r| r.root.clone()).collect();
        assert_eq!(b, vec![vec![1, -1], vec![0, 1]]);
        let sp4 = classical_datum(ClassicalKind::Sp, 4).unwrap().datum;
        let b: Vec<_> = sp4.base_roots().iter().map(|r| r.root.clone()).collect();
        assert_eq!(b, vec![vec![1, -1], vec![0, 2]]);
        assert!(classical_datum(ClassicalKind::SoOdd, 4).is_err());
        let o4 = classical_datum(ClassicalKind::OEven, 4).unwrap();
        assert_eq!(o4.automorphism.unwrap().base_perm, vec![1, 0]);
    }

    #[test]
    fn lengths() {
        let b2 = datum(TypeLabel::B(2));
        let id = WeylElement::identity(2);
        assert_eq!(weyl_length(&id, &b2), 0);
        assert_eq!(weyl_length(&b2.simple_reflection(0), &b2), 1);
        let w0 = WeylElement::new(vec![0, 1], vec![-1, -1]).unwrap();
        assert_eq!(weyl_length(&w0, &b2), 4);
        let word = reduced_word(&w0, &b2).unwrap();
        assert_eq!(word.len(), 4);
        assert_eq!(word_to_element(&word, &b2), w0);
    }

    #[test]
    fn a2_word() {
        let a2 = datum(TypeLabel::A(2));
        let w = a2.simple_reflection(0).compose(&a2.simple_reflection(1));
        assert_eq!(weyl_length(&w, &a2), 2);
        assert_eq!(reduced_word(&w, &a2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn actions() {
        assert_eq!(WeylElement::flip(2, 1).act(&[3, 5]), vec![3, -5]);
        let gl2 = classical_datum(ClassicalKind::Gl, 2).unwrap().datum;
        assert_eq!(gl2.simple_reflection(0).act(&[1, 0]), vec![0, 1]);
        assert_eq!(
            act(&WeylElement::identity(3), &[1, 2, 3]).unwrap(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn braid_orders() {
        assert_eq!(braid_order(0, 1, &datum(TypeLabel::A(2))), 3);
        assert_eq!(braid_order(0, 1, &datum(TypeLabel::B(2))), 4);
        assert_eq!(braid_order(0, 1, &datum(TypeLabel::C(3))), 3);
        assert_eq!(braid_order(1, 2, &datum(TypeLabel::C(3))), 4);
        assert_eq!(braid_order(0, 1, &datum(TypeLabel::D(2))), 2);
        assert_eq!(braid_order(1, 2, &datum(TypeLabel::D(3))), 2);
        assert_eq!(braid_order(0, 2, &datum(TypeLabel::D(3))), 3);
    }

    #[test]
    fn coroots_in_two_lambda() {
        let b2 = datum(TypeLabel::B(2));
        assert_eq!(coroot_in_2lambda(&[0, 1], &b2), Some(true));
        assert_eq!(coroot_in_2lambda(&[1, -1], &b2), Some(false));
        let gl2 = classical_datum(ClassicalKind::Gl, 2).unwrap().datum;
        assert_eq!(coroot_in_2lambda(&[1, -1], &gl2), Some(false));
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(weyl_enumerate(&datum(TypeLabel::A(2))).unwrap().len(), 6);
        assert_eq!(weyl_enumerate(&datum(TypeLabel::B(2))).unwrap().len(), 8);
        assert_eq!(weyl_enumerate(&datum(TypeLabel::D(2))).unwrap().len(), 4);
        let big = BasedRootDatum::from_components(8, &[ComponentSpec::new(TypeLabel::B(8), 8, 1)])
            .unwrap();
        assert!(matches!(
            weyl_enumerate(&big),
            Err(RootDataError::TooLarge(_))
        ));
    }

    #[test]
    fn o_datum_conversion_and_scaling() {
        let d = build_o_datum(&[ComponentSpec::new(TypeLabel::C(3), 3, 1)], 3).unwrap();
        assert_eq!(d.type_labels(), vec![TypeLabel::B(3)]);
        assert_eq!(d.simple(2).coroot, vec![0, 0, 2]);
        let a = build_o_datum(&[ComponentSpec::new(TypeLabel::A(2), 3, 2)], 3).unwrap();
        for i in 0..a.roots().len() {
            let (r, c) = a.ambient_root(i);
            let p: BigRational = r.iter().zip(&c).map(|(x, y)| x * y).sum();
            assert_eq!(p, crate::exact::qi(2));
            assert!(r
                .iter()
                .all(|x| x.is_integer() && (x.numer() % BigInt::from(2)).is_zero()));
        }
        let e = build_o_datum(&[], 4).unwrap();
        assert_eq!(e.rank(), 4);
        assert!(e.roots().is_empty());
    }

    #[test]
    fn placement_errors() {
        let mut c1 = ComponentSpec::new(TypeLabel::B(2), 2, 1);
        c1.offset = Some(0);
        let mut c2 = ComponentSpec::new(TypeLabel::A(1), 2, 1);
        c2.offset = Some(1);
        assert_eq!(
            build_o_datum(&[c1, c2], 4).unwrap_err(),
            RootDataError::Overlap(0, 1)
        );
        assert!(matches!(
            build_o_datum(&[ComponentSpec::new(TypeLabel::B(3), 3, 1)], 2),
            Err(RootDataError::DoesNotFit { .. })
        ));
    }

    #[test]
    fn degenerate_d_labels() {
        let d1 = BasedRootDatum::from_components(1, &[ComponentSpec::new(TypeLabel::D(1), 1, 1)])
            .unwrap();
        assert!(d1.roots().is_empty());
        assert_eq!(d1.type_labels(), vec![TypeLabel::D(1)]);
        let d2 = datum(TypeLabel::D(2));
        assert_eq!(d2.num_positive_roots(), 2);
    }

    #[test]
    fn explicit_override() {
        let spec = DatumSpec {
            rank: 2,
            components: vec![ComponentSpec::new(TypeLabel::A(1), 2, 1)],
            roots: Some(vec![RootPair {
                root: vec![1, -1],
                coroot: vec![1, -1],
            }]),
            base: Some(vec![0]),
        };
        let d = BasedRootDatum::from_spec(&spec).unwrap();
        assert_eq!(d.num_simple(), 1);
        let bad = DatumSpec {
            roots: Some(vec![RootPair {
                root: vec![1, -1],
                coroot: vec![1, 0],
            }]),
            ..spec.clone()
        };
        assert!(matches!(
            BasedRootDatum::from_spec(&bad),
            Err(RootDataError::BadPairing(..))
        ));
        let nonreduced = DatumSpec {
            rank: 1,
            components: vec![],
            roots: Some(vec![
                RootPair {
                    root: vec![1],
                    coroot: vec![2],
                },
                RootPair {
                    root: vec![2],
                    coroot: vec![1],
                },
            ]),
            base: Some(vec![0]),
        };
        assert!(BasedRootDatum::from_spec(&nonreduced).is_err());
    }

    #[test]
    fn label_roundtrip() {
        for s in ["A0", "B3", "C1", "D4", "empty"] {
            assert_eq!(s.parse::<TypeLabel>().unwrap().to_string(), s);
        }
        assert!("E8".parse::<TypeLabel>().is_err());
    }
}
