//! Root data presets, their Weyl groups, Bruhat order and inversion sets, and
//! the Weyl action on points of `E^n × E`.
//!
//! Cocharacters live in `Z^n` and act on points of `E^n`; characters live in
//! the dual `Z^n` and pair with cocharacters by the dot product. A Weyl
//! element is stored by its matrix on cocharacters; characters transform by
//! the inverse transpose.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::elliptic::{CurveParams, CurvePoint};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default closure cap for [`weyl_enumerate`].
pub const WEYL_CAP: usize = 100_000;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    n: usize,
    data: Vec<i64>,
}

impl IMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "square matrix expected");
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, o: &IMat) -> IMat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        IMat { n, data }
    }

    pub fn transpose(&self) -> IMat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        IMat { n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    GL(usize),
    SL2,
    A2,
    B2,
    G2,
}

impl Preset {
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "sl2" => Ok(Preset::SL2),
            "a2" => Ok(Preset::A2),
            "b2" => Ok(Preset::B2),
            "g2" => Ok(Preset::G2),
            _ => lower
                .strip_prefix("gl")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (1..=6).contains(n))
                .map(Preset::GL)
                .ok_or_else(|| Error::UnknownDatum(name.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Preset::GL(n) => format!("gl{n}"),
            Preset::SL2 => "sl2".into(),
            Preset::A2 => "a2".into(),
            Preset::B2 => "b2".into(),
            Preset::G2 => "g2".into(),
        }
    }
}

/// A root of the datum together with its coroot and its coordinates in the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub vector: Vec<i64>,
    pub coroot: Vec<i64>,
    pub simple_coords: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.simple_coords.iter().all(|&c| c >= 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootDatum {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    pub preset: Preset,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    pub fn preset(p: Preset) -> Result<Self> {
        match p {
            Preset::GL(n) => {
                if !(1..=6).contains(&n) {
                    return Err(Error::UnknownDatum(p.name()));
                }
                let simple: Vec<Vec<i64>> = (0..n.saturating_sub(1))
                    .map(|i| {
                        let mut v = vec![0; n];
                        v[i] = 1;
                        v[i + 1] = -1;
                        v
                    })
                    .collect();
                Self::build(n, simple.clone(), simple, p)
            }
            Preset::SL2 => Self::simply_connected(vec![vec![2]], p),
            Preset::A2 => Self::simply_connected(vec![vec![2, -1], vec![-1, 2]], p),
            Preset::B2 => Self::simply_connected(vec![vec![2, -1], vec![-2, 2]], p),
            Preset::G2 => Self::simply_connected(vec![vec![2, -1], vec![-3, 2]], p),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::preset(Preset::parse(name)?)
    }

    /// Cocharacters in the simple-coroot basis, characters in the fundamental-weight basis.
    fn simply_connected(cartan: Vec<Vec<i64>>, p: Preset) -> Result<Self> {
        let r = cartan.len();
        let roots = (0..r).map(|j| (0..r).map(|i| cartan[i][j]).collect()).collect();
        let coroots = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                v
            })
            .collect();
        Self::build(r, roots, coroots, p)
    }

    fn build(rank: usize, simple_roots: Vec<Vec<i64>>, simple_coroots: Vec<Vec<i64>>, preset: Preset) -> Result<Self> {
        let k = simple_roots.len();
        let cartan: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| dot(&simple_roots[j], &simple_coroots[i])).collect())
            .collect();
        for i in 0..k {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidConfig(format!("Cartan diagonal entry {i} is not 2")));
            }
            for j in 0..k {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::InvalidConfig(format!("Cartan entry ({i},{j}) is not admissible")));
                }
            }
        }
        let mut d = Self {
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            preset,
            roots: Vec::new(),
            root_index: HashMap::new(),
        };
        d.close_roots();
        Ok(d)
    }

    /// Orbit of the simple (root, coroot) pairs under the simple reflections.
    fn close_roots(&mut self) {
        let k = self.simple_roots.len();
        let mut queue = VecDeque::new();
        for i in 0..k {
            let mut c = vec![0; k];
            c[i] = 1;
            queue.push_back(Root {
                vector: self.simple_roots[i].clone(),
                coroot: self.simple_coroots[i].clone(),
                simple_coords: c,
            });
        }
        while let Some(r) = queue.pop_front() {
            if self.root_index.contains_key(&r.vector) {
                continue;
            }
            self.root_index.insert(r.vector.clone(), self.roots.len());
            self.roots.push(r.clone());
            for i in 0..k {
                let pair = dot(&r.vector, &self.simple_coroots[i]);
                let copair = dot(&self.simple_roots[i], &r.coroot);
                let vector = r.vector.iter().zip(&self.simple_roots[i]).map(|(a, b)| a - pair * b).collect();
                let coroot = r.coroot.iter().zip(&self.simple_coroots[i]).map(|(a, b)| a - copair * b).collect();
                let mut simple_coords = r.simple_coords.clone();
                simple_coords[i] -= pair;
                queue.push_back(Root { vector, coroot, simple_coords });
            }
        }
        self.roots.sort_by(|a, b| {
            let ha: i64 = a.simple_coords.iter().sum();
            let hb: i64 = b.simple_coords.iter().sum();
            (b.is_positive(), ha.abs(), &a.simple_coords).cmp(&(a.is_positive(), hb.abs(), &b.simple_coords))
        });
        self.root_index = self.roots.iter().enumerate().map(|(i, r)| (r.vector.clone(), i)).collect();
    }

    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<&Root> {
        self.roots.iter().filter(|r| r.is_positive()).collect()
    }

    pub fn root(&self, vector: &[i64]) -> Option<&Root> {
        self.root_index.get(vector).map(|&i| &self.roots[i])
    }

    /// Matrix of `s_i` on cocharacters: `μ ↦ μ - ⟨α_i, μ⟩ α_i∨`.
    pub fn reflection(&self, i: usize) -> IMat {
        let n = self.rank;
        let mut m = IMat::identity(n);
        let a = &self.simple_roots[i];
        let c = &self.simple_coroots[i];
        for r in 0..n {
            for s in 0..n {
                m.data[r * n + s] -= c[r] * a[s];
            }
        }
        m
    }

    /// Coxeter exponent `m_ij` from `C_ij C_ji ∈ {0, 1, 2, 3}`.
    pub fn braid_order(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => 0,
        }
    }
}

/// An element of the Weyl group. Equality compares matrices only.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: IMat,
    pub length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, o: &Self) -> bool {
        self.matrix == o.matrix
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.matrix.hash(h)
    }
}

impl WeylElement {
    pub fn identity(d: &RootDatum) -> Self {
        Self { word: Vec::new(), matrix: IMat::identity(d.rank), length: 0 }
    }

    /// The product of the simple reflections of `word`, with the word reduced
    /// by the descent algorithm.
    pub fn from_word(word: &[usize], d: &RootDatum) -> Self {
        let mut m = IMat::identity(d.rank);
        for &i in word {
            m = m.mul(&d.reflection(i));
        }
        Self::from_matrix(m, d)
    }

    pub fn from_matrix(matrix: IMat, d: &RootDatum) -> Self {
        let word = reduced_word(&matrix, d);
        let length = word.len();
        Self { word, matrix, length }
    }

    pub fn simple(i: usize, d: &RootDatum) -> Self {
        Self::from_word(&[i], d)
    }

    pub fn mul(&self, o: &Self, d: &RootDatum) -> Self {
        Self::from_matrix(self.matrix.mul(&o.matrix), d)
    }

    pub fn inverse(&self, d: &RootDatum) -> Self {
        let mut m = IMat::identity(d.rank);
        for &i in self.word.iter().rev() {
            m = m.mul(&d.reflection(i));
        }
        Self::from_matrix(m, d)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// `w(λ)` for a character `λ`: `(M_{w⁻¹})^T λ`.
    pub fn act_character(&self, lambda: &[i64], d: &RootDatum) -> Vec<i64> {
        let mut out = lambda.to_vec();
        for &i in self.word.iter().rev() {
            out = act_simple_character(i, &out, d);
        }
        out
    }

    /// `w(μ)` for a cocharacter `μ`.
    pub fn act_cocharacter(&self, mu: &[i64]) -> Vec<i64> {
        self.matrix.apply(mu)
    }

    /// Number of positive roots sent to negative roots.
    pub fn recompute_length(&self, d: &RootDatum) -> usize {
        d.positive_roots()
            .into_iter()
            .filter(|r| {
                let img = self.act_character(&r.vector, d);
                !d.root(&img).expect("roots are permuted").is_positive()
            })
            .count()
    }
}

fn act_simple_character(i: usize, lambda: &[i64], d: &RootDatum) -> Vec<i64> {
    let pair = dot(lambda, &d.simple_coroots[i]);
    lambda.iter().zip(&d.simple_roots[i]).map(|(l, a)| l - pair * a).collect()
}

/// Whether `w(α_i)` is negative, where `w(α_i)` is the root `λ` with `λ^T M_w = α_i^T`.
fn sends_simple_negative(m: &IMat, i: usize, d: &RootDatum) -> bool {
    let target = &d.simple_roots[i];
    let root = d
        .roots()
        .iter()
        .find(|r| {
            (0..d.rank).all(|col| (0..d.rank).map(|row| r.vector[row] * m.get(row, col)).sum::<i64>() == target[col])
        })
        .expect("Weyl elements permute roots");
    !root.is_positive()
}

/// Descent algorithm: strip the smallest right descent until the identity remains.
fn reduced_word(m: &IMat, d: &RootDatum) -> Vec<usize> {
    let mut word = Vec::new();
    let mut cur = m.clone();
    while !cur.is_identity() {
        let i = (0..d.num_simple())
            .find(|&i| sends_simple_negative(&cur, i, d))
            .expect("non-identity element has a right descent");
        word.push(i);
        cur = cur.mul(&d.reflection(i));
    }
    word.reverse();
    word
}

/// All elements of `W`, by breadth-first closure on right multiplication by
/// the simple reflections, capped at `cap` elements.
pub fn weyl_enumerate_capped(d: &RootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let gens: Vec<IMat> = (0..d.num_simple()).map(|i| d.reflection(i)).collect();
    let mut seen: HashSet<IMat> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([IMat::identity(d.rank)]);
    seen.insert(IMat::identity(d.rank));
    while let Some(m) = queue.pop_front() {
        order.push(m.clone());
        for g in &gens {
            let next = m.mul(g);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::Overflow { cap });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(order.into_iter().map(|m| WeylElement::from_matrix(m, d)).collect())
}

pub fn weyl_enumerate(d: &RootDatum) -> Result<Vec<WeylElement>> {
    weyl_enumerate_capped(d, WEYL_CAP)
}

/// `Σ(w) = wΣ⁻ ∩ Σ⁺`, as positive roots in the datum's order.
pub fn inversion_set(w: &WeylElement, d: &RootDatum) -> Vec<Root> {
    let mut out: Vec<Root> = d
        .roots()
        .iter()
        .filter(|r| !r.is_positive())
        .map(|r| d.root(&w.act_character(&r.vector, d)).expect("roots are permuted").clone())
        .filter(|r| r.is_positive())
        .collect();
    out.sort_by_key(|r| d.root_index[&r.vector]);
    out
}

/// Subword criterion against the stored reduced word of `w`.
pub fn bruhat_leq(v: &WeylElement, w: &WeylElement, d: &RootDatum) -> bool {
    if v.length > w.length {
        return false;
    }
    let mut products: HashSet<IMat> = HashSet::from([IMat::identity(d.rank)]);
    for &i in &w.word {
        let s = d.reflection(i);
        let extended: Vec<IMat> = products.iter().map(|m| m.mul(&s)).collect();
        products.extend(extended);
    }
    products.contains(&v.matrix)
}

/// `w·p`: the matrix acts on `(z_1, …, z_n)` and fixes the trailing `z_γ`.
pub fn act_point<R: Real>(w: &WeylElement, p: &[Complex<R>]) -> Vec<Complex<R>> {
    let n = w.matrix.dim();
    assert_eq!(p.len(), n + 1, "point needs n coordinates plus the gamma slot");
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut acc = Complex::new(R::zero(), R::zero());
        for j in 0..n {
            let m = w.matrix.get(i, j);
            if m != 0 {
                acc = acc + p[j] * R::from_i64(m).unwrap();
            }
        }
        out.push(acc);
    }
    out.push(p[n]);
    out
}

/// `χ_λ(p) + m·z_γ` on representatives, unreduced.
pub fn character_value<R: Real>(lambda: &[i64], m: i64, p: &[Complex<R>]) -> Complex<R> {
    let n = lambda.len();
    let mut acc = p[n] * R::from_i64(m).unwrap();
    for (l, z) in lambda.iter().zip(p) {
        if *l != 0 {
            acc = acc + *z * R::from_i64(*l).unwrap();
        }
    }
    acc
}

/// `χ_λ(p) + m·z_γ` as a reduced point of `E`.
pub fn character_eval<R: Real>(lambda: &[i64], m: i64, p: &[Complex<R>], c: &CurveParams<R>) -> CurvePoint<R> {
    CurvePoint::from_complex(character_value(lambda, m, p), c).reduce()
}

/// The Weyl group with elements sorted by `(length, reduced word)`.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub datum: RootDatum,
    elements: Vec<WeylElement>,
    index: HashMap<IMat, usize>,
    inverses: Vec<usize>,
}

impl WeylGroup {
    pub fn new(datum: RootDatum) -> Result<Self> {
        let mut elements = weyl_enumerate(&datum)?;
        elements.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        let index: HashMap<IMat, usize> = elements.iter().enumerate().map(|(i, e)| (e.matrix.clone(), i)).collect();
        let inverses = elements.iter().map(|e| index[&e.inverse(&datum).matrix]).collect();
        Ok(Self { datum, elements, index, inverses })
    }

    pub fn from_preset(p: Preset) -> Result<Self> {
        Self::new(RootDatum::preset(p)?)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[&w.matrix]
    }

    pub fn index_of_matrix(&self, m: &IMat) -> usize {
        self.index[m]
    }

    pub fn simple(&self, i: usize) -> usize {
        self.index[&self.datum.reflection(i)]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].matrix.mul(&self.elements[b].matrix)]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// The reflection `s_β` of a root, by conjugating a simple reflection.
    pub fn reflection_of(&self, root: &Root) -> usize {
        let n = self.datum.rank;
        let mut m = IMat::identity(n);
        for r in 0..n {
            for s in 0..n {
                m.data[r * n + s] -= root.coroot[r] * root.vector[s];
            }
        }
        self.index[&m]
    }

    pub fn bruhat_leq(&self, v: usize, w: usize) -> bool {
        bruhat_leq(&self.elements[v], &self.elements[w], &self.datum)
    }

    pub fn inversion_set(&self, w: usize) -> Vec<Root> {
        inversion_set(&self.elements[w], &self.datum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_presets() -> Vec<Preset> {
        let mut v: Vec<Preset> = (1..=5).map(Preset::GL).collect();
        v.extend([Preset::SL2, Preset::A2, Preset::B2, Preset::G2]);
        v
    }

    #[test]
    fn group_orders() {
        let expect = |p: Preset| match p {
            Preset::GL(n) => (1..=n).product::<usize>(),
            Preset::SL2 => 2,
            Preset::A2 => 6,
            Preset::B2 => 8,
            Preset::G2 => 12,
        };
        for p in all_presets() {
            let d = RootDatum::preset(p).unwrap();
            assert_eq!(weyl_enumerate(&d).unwrap().len(), expect(p), "{p:?}");
        }
    }

    #[test]
    fn overflow_cap() {
        let d = RootDatum::preset(Preset::GL(4)).unwrap();
        assert_eq!(weyl_enumerate_capped(&d, 10).unwrap_err(), Error::Overflow { cap: 10 });
    }

    #[test]
    fn dihedral_presentation_g2() {
        let d = RootDatum::preset(Preset::G2).unwrap();
        let s12 = d.reflection(0).mul(&d.reflection(1));
        let mut m = IMat::identity(2);
        for k in 1..=6 {
            m = m.mul(&s12);
            assert_eq!(m.is_identity(), k == 6);
        }
        // Oracle: dihedral group of order 12 is {(s1 s2)^k, (s1 s2)^k s1}.
        let mut dihedral = HashSet::new();
        let mut m = IMat::identity(2);
        for _ in 0..6 {
            dihedral.insert(m.clone());
            dihedral.insert(m.mul(&d.reflection(0)));
            m = m.mul(&s12);
        }
        let bfs: HashSet<IMat> = weyl_enumerate(&d).unwrap().into_iter().map(|w| w.matrix).collect();
        assert_eq!(bfs, dihedral);
    }

    #[test]
    fn cartan_and_braids() {
        for p in all_presets() {
            let d = RootDatum::preset(p).unwrap();
            let k = d.num_simple();
            for i in 0..k {
                assert!(d.reflection(i).mul(&d.reflection(i)).is_identity());
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    let m = d.braid_order(i, j);
                    let sij = d.reflection(i).mul(&d.reflection(j));
                    let mut acc = IMat::identity(d.rank);
                    for step in 1..=m {
                        acc = acc.mul(&sij);
                        assert_eq!(acc.is_identity(), step == m);
                    }
                }
            }
        }
        let g2 = RootDatum::preset(Preset::G2).unwrap();
        assert_eq!(g2.cartan, vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(RootDatum::preset(Preset::B2).unwrap().positive_roots().len(), 4);
    }

    #[test]
    fn gl_reflections_permute() {
        let d = RootDatum::preset(Preset::GL(3)).unwrap();
        let s1 = WeylElement::simple(0, &d);
        let p: Vec<Complex<f64>> = (0..4).map(|i| Complex::new(i as f64 * 0.1, 0.05 * i as f64)).collect();
        assert_eq!(act_point(&s1, &p), vec![p[1], p[0], p[2], p[3]]);
        assert_eq!(act_point(&WeylElement::identity(&d), &p), p);
    }

    #[test]
    fn sl2_reflection_negates() {
        let d = RootDatum::preset(Preset::SL2).unwrap();
        let s = WeylElement::simple(0, &d);
        let p = vec![Complex::new(0.2, 0.3), Complex::new(0.7, 0.1)];
        assert_eq!(act_point(&s, &p), vec![-p[0], p[1]]);
        assert_eq!(d.simple_roots, vec![vec![2]]);
    }

    #[test]
    fn lengths_match_inversion_sets() {
        for p in all_presets() {
            let d = RootDatum::preset(p).unwrap();
            for w in weyl_enumerate(&d).unwrap() {
                assert_eq!(w.length, w.recompute_length(&d));
                assert_eq!(inversion_set(&w, &d).len(), w.length);
                assert_eq!(WeylElement::from_word(&w.word, &d), w);
            }
        }
    }

    #[test]
    fn inversion_sets_of_simple_reflections() {
        let d = RootDatum::preset(Preset::A2).unwrap();
        assert!(inversion_set(&WeylElement::identity(&d), &d).is_empty());
        for i in 0..2 {
            let inv = inversion_set(&WeylElement::simple(i, &d), &d);
            assert_eq!(inv.len(), 1);
            assert_eq!(inv[0].vector, d.simple_roots[i]);
        }
    }

    #[test]
    fn bruhat_examples_a2() {
        let d = RootDatum::preset(Preset::A2).unwrap();
        let s1 = WeylElement::simple(0, &d);
        let s2 = WeylElement::simple(1, &d);
        let s12 = s1.mul(&s2, &d);
        let s21 = s2.mul(&s1, &d);
        assert!(bruhat_leq(&s1, &s12, &d));
        assert!(bruhat_leq(&s2, &s12, &d));
        assert!(!bruhat_leq(&s12, &s21, &d));
        // Oracle: brute force over all subwords of every word of length <= 3.
        let all = weyl_enumerate(&d).unwrap();
        for v in &all {
            for w in &all {
                let n = w.word.len();
                let brute = (0..1u32 << n).any(|mask| {
                    let sub: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| w.word[k]).collect();
                    WeylElement::from_word(&sub, &d) == *v
                });
                assert_eq!(bruhat_leq(v, w, &d), brute);
            }
            assert!(bruhat_leq(v, v, &d));
            assert!(bruhat_leq(&WeylElement::identity(&d), v, &d));
        }
    }

    #[test]
    fn reduced_words_are_descent_words() {
        let d = RootDatum::preset(Preset::A2).unwrap();
        let w0 = WeylElement::from_word(&[1, 0, 1], &d);
        assert_eq!(w0.word, vec![0, 1, 0]);
        assert_eq!(WeylElement::from_word(&[0, 0], &d).word, Vec::<usize>::new());
    }

    #[test]
    fn character_compatibility() {
        use rand::{Rng, SeedableRng};
        let c = CurveParams::<f64>::default_curve();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in all_presets() {
            let d = RootDatum::preset(p).unwrap();
            let all = weyl_enumerate(&d).unwrap();
            for _ in 0..50 {
                let w = &all[rng.gen_range(0..all.len())];
                let lambda: Vec<i64> = (0..d.rank).map(|_| rng.gen_range(-3..=3)).collect();
                let pt: Vec<Complex<f64>> =
                    (0..=d.rank).map(|_| CurvePoint::new(rng.gen(), rng.gen()).to_complex(&c)).collect();
                let lhs = character_eval(&w.act_character(&lambda, &d), 0, &pt, &c);
                let rhs = character_eval(&lambda, 0, &act_point(&w.inverse(&d), &pt), &c);
                let diff = lhs.sub(&rhs);
                assert!(diff.distance_to_lattice(&c) < 1e-9, "{p:?}");
            }
        }
    }

    #[test]
    fn group_index_operations() {
        let g = WeylGroup::from_preset(Preset::B2).unwrap();
        assert!(g.element(g.identity()).is_identity());
        for a in 0..g.len() {
            assert_eq!(g.mul(a, g.inverse(a)), g.identity());
            for b in 0..g.len() {
                let ab = g.mul(a, b);
                assert_eq!(g.element(ab).matrix, g.element(a).matrix.mul(&g.element(b).matrix));
            }
        }
        for r in g.datum.positive_roots() {
            let s = g.reflection_of(r);
            assert_eq!(g.mul(s, s), g.identity());
            assert_eq!(g.element(s).act_character(&r.vector, &g.datum), r.vector.iter().map(|x| -x).collect::<Vec<_>>());
        }
    }
}
