//! Type-A parameter enumeration at non-torsion `t`: eigenvalue strings,
//! multisegments, and a finite-field orbit-count oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::elliptic::{is_torsion, CurvePoint};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest order searched when certifying that `t` is non-torsion.
pub const TORSION_SEARCH: u32 = 64;
/// Largest total dimension accepted by the enumeration.
pub const ENUMERATION_CAP: usize = 8;
/// Largest total dimension accepted by the orbit oracle.
pub const ORACLE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenData<R> {
    pub points: Vec<CurvePoint<R>>,
    pub t: CurvePoint<R>,
}

#[derive(Debug, Clone, Deserialize)]
struct EigenInput {
    points: Vec<[f64; 2]>,
    t: [f64; 2],
}

impl<R: Real> EigenData<R> {
    pub fn new(points: Vec<CurvePoint<R>>, t: CurvePoint<R>, tol: R) -> Result<Self> {
        if let Some(order) = is_torsion(t, TORSION_SEARCH, tol) {
            return Err(Error::NonTorsionRequired { order });
        }
        if points.len() > ENUMERATION_CAP {
            return Err(Error::TooLarge(format!("{} points (limit {ENUMERATION_CAP})", points.len())));
        }
        Ok(Self { points, t })
    }

    /// Parse `{ "points": [[a, b], ...], "t": [a, b] }` in lattice coordinates.
    pub fn from_json(s: &str, tol: R) -> Result<Self> {
        let inp: EigenInput = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let pt = |p: [f64; 2]| CurvePoint::new(R::lit(p[0]), R::lit(p[1]));
        Self::new(inp.points.into_iter().map(pt).collect(), pt(inp.t), tol)
    }
}

/// One `t`-string: a base point and multiplicities at integer offsets from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TString {
    pub base: [f64; 2],
    pub multiplicities: BTreeMap<i64, usize>,
}

impl TString {
    pub fn dimension(&self) -> usize {
        self.multiplicities.values().sum()
    }

    /// Ordered multiplicities of the maximal runs of consecutive occupied positions.
    pub fn runs(&self) -> Vec<(i64, Vec<usize>)> {
        let mut out: Vec<(i64, Vec<usize>)> = Vec::new();
        for (&p, &m) in &self.multiplicities {
            match out.last_mut() {
                Some((start, ms)) if *start + ms.len() as i64 == p => ms.push(m),
                _ => out.push((p, vec![m])),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentQuiver {
    pub strings: Vec<TString>,
}

impl SegmentQuiver {
    pub fn dimension(&self) -> usize {
        self.strings.iter().map(TString::dimension).sum()
    }

    pub fn from_dims(dims: &[usize]) -> Self {
        let multiplicities = dims.iter().enumerate().filter(|(_, &m)| m > 0).map(|(p, &m)| (p as i64, m)).collect();
        Self { strings: vec![TString { base: [0.0, 0.0], multiplicities }] }
    }
}

/// Interval `[start, end]` of positions on string `string`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Segment {
    pub string: usize,
    pub start: i64,
    pub end: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Multisegment {
    pub segments: Vec<Segment>,
}

fn near_int<R: Real>(x: R, tol: R) -> bool {
    (x - x.round()).abs() <= tol
}

/// Group the points into `t`-strings.
pub fn build_strings<R: Real>(e: &EigenData<R>, tol: R) -> Result<SegmentQuiver> {
    let n = e.points.len();
    let range = 2 * n as i64;
    // offset[j][k] = m with a_j - a_k = m t (mod lattice)
    let mut rel: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for j in 0..n {
        for k in 0..n {
            let d = e.points[j].sub(&e.points[k]);
            let hits: Vec<i64> = (-range..=range)
                .filter(|&m| {
                    let r = d.sub(&e.t.scale(m));
                    near_int(r.a, tol) && near_int(r.b, tol)
                })
                .collect();
            if hits.len() > 1 {
                return Err(Error::AmbiguousString { first: j, second: k, offsets: hits });
            }
            rel[j][k] = hits.first().copied();
        }
    }
    let mut assigned: Vec<Option<(usize, i64)>> = vec![None; n];
    let mut groups: Vec<Vec<(usize, i64)>> = Vec::new();
    for root in 0..n {
        if assigned[root].is_some() {
            continue;
        }
        let gid = groups.len();
        let mut members = vec![(root, 0i64)];
        assigned[root] = Some((gid, 0));
        let mut stack = vec![root];
        while let Some(j) = stack.pop() {
            let pj = assigned[j].unwrap().1;
            for k in 0..n {
                if assigned[k].is_none() {
                    if let Some(m) = rel[k][j] {
                        assigned[k] = Some((gid, pj + m));
                        members.push((k, pj + m));
                        stack.push(k);
                    }
                }
            }
        }
        groups.push(members);
    }
    let mut strings: Vec<TString> = groups
        .into_iter()
        .map(|members| {
            let lo = members.iter().map(|&(_, p)| p).min().unwrap_or(0);
            let (j0, p0) = members.iter().copied().find(|&(_, p)| p == lo).unwrap();
            let base = e.points[j0].sub(&e.t.scale(p0 - lo)).reduce();
            let mut multiplicities = BTreeMap::new();
            for (_, p) in members {
                *multiplicities.entry(p - lo).or_insert(0) += 1;
            }
            TString { base: [base.a.to_f64_lossy(), base.b.to_f64_lossy()], multiplicities }
        })
        .collect();
    strings.sort_by(|x, y| {
        (x.base[0], x.base[1], &x.multiplicities)
            .partial_cmp(&(y.base[0], y.base[1], &y.multiplicities))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SegmentQuiver { strings })
}

fn segments_on_string(mults: &BTreeMap<i64, usize>) -> Vec<Vec<(i64, i64)>> {
    let mut left = mults.clone();
    let mut out = Vec::new();
    let mut acc = Vec::new();
    multisegment_rec(&mut left, &mut acc, &mut out);
    out
}

fn multisegment_rec(left: &mut BTreeMap<i64, usize>, acc: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
    let Some((&p, _)) = left.iter().find(|(_, &m)| m > 0) else {
        let mut s = acc.clone();
        s.sort();
        out.push(s);
        return;
    };
    // Every remaining segment covering p starts at p; pick the longest one's end
    // not exceeding the previous pick at p to avoid repeats.
    let cap = acc.iter().rev().take_while(|s| s.0 == p).map(|s| s.1).next().unwrap_or(i64::MAX);
    let mut e = p;
    while e <= cap && left.get(&e).copied().unwrap_or(0) > 0 {
        e += 1;
    }
    for end in (p..e).rev() {
        for q in p..=end {
            *left.get_mut(&q).unwrap() -= 1;
        }
        acc.push((p, end));
        multisegment_rec(left, acc, out);
        acc.pop();
        for q in p..=end {
            *left.get_mut(&q).unwrap() += 1;
        }
    }
}

/// All multisegments with the given content, in canonical sorted order.
pub fn enumerate_multisegments(sq: &SegmentQuiver) -> Result<Vec<Multisegment>> {
    if sq.dimension() > ENUMERATION_CAP {
        return Err(Error::TooLarge(format!("total dimension {} (limit {ENUMERATION_CAP})", sq.dimension())));
    }
    let mut acc: Vec<Vec<Segment>> = vec![Vec::new()];
    for (sid, s) in sq.strings.iter().enumerate() {
        let options = segments_on_string(&s.multiplicities);
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for a in &acc {
            for o in &options {
                let mut v = a.clone();
                v.extend(o.iter().map(|&(start, end)| Segment { string: sid, start, end }));
                next.push(v);
            }
        }
        acc = next;
    }
    let mut out: Vec<Multisegment> = acc.into_iter().map(|mut s| {
        s.sort();
        Multisegment { segments: s }
    }).collect();
    out.sort();
    Ok(out)
}

/// Square matrix over `F_p`, row-major.
type Mat = Vec<u8>;

fn mat_mul(a: &[u8], ar: usize, ac: usize, b: &[u8], bc: usize, p: u8) -> Mat {
    let mut out = vec![0u8; ar * bc];
    for i in 0..ar {
        for j in 0..bc {
            let mut s = 0u32;
            for k in 0..ac {
                s += a[i * ac + k] as u32 * b[k * bc + j] as u32;
            }
            out[i * bc + j] = (s % p as u32) as u8;
        }
    }
    out
}

/// Generators of `GL(m, F_p)` paired with their inverses: transvections and a diagonal unit.
fn gl_generators(m: usize, p: u8) -> Vec<(Mat, Mat)> {
    let id = |m: usize| -> Mat { (0..m * m).map(|k| u8::from(k / m == k % m)).collect() };
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = id(m);
                e[i * m + j] = 1;
                let mut inv = id(m);
                inv[i * m + j] = p - 1;
                out.push((e, inv));
            }
        }
    }
    if p > 2 && m > 0 {
        // 2 generates F_3^*
        let mut d = id(m);
        d[0] = 2;
        out.push((d.clone(), d));
    }
    out
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Number of `∏ GL(m_pos, F_p)`-orbits on `⊕ Hom(F_p^{m_pos}, F_p^{m_{pos+1}})`,
/// by union-find over the group generators.
pub fn orbit_count_oracle(sq: &SegmentQuiver, fieldsize: u8) -> Result<usize> {
    if fieldsize != 2 && fieldsize != 3 {
        return Err(Error::InvalidConfig(format!("field size must be 2 or 3, got {fieldsize}")));
    }
    if sq.dimension() > ORACLE_CAP {
        return Err(Error::TooLarge(format!("total dimension {} (oracle limit {ORACLE_CAP})", sq.dimension())));
    }
    let p = fieldsize;
    let dims: Vec<usize> = sq.strings.iter().flat_map(|s| s.runs()).flat_map(|(_, ms)| {
        let mut v = ms;
        v.push(0);
        v
    }).collect();
    // arrows k -> k+1 whenever both are part of one run; a run's trailing 0 breaks chains
    let arrows: Vec<usize> = (0..dims.len().saturating_sub(1)).filter(|&k| dims[k] > 0 && dims[k + 1] > 0).collect();
    let sizes: Vec<usize> = arrows.iter().map(|&k| dims[k + 1] * dims[k]).collect();
    let total: usize = sizes.iter().sum();
    let npoints = (p as usize).pow(total as u32);
    let decode = |mut x: usize| -> Vec<Mat> {
        sizes.iter().map(|&s| {
            (0..s).map(|_| {
                let d = (x % p as usize) as u8;
                x /= p as usize;
                d
            }).collect()
        }).collect()
    };
    let encode = |ms: &[Mat]| -> usize {
        let mut x = 0usize;
        let mut place = 1usize;
        for m in ms {
            for &d in m {
                x += d as usize * place;
                place *= p as usize;
            }
        }
        x
    };
    let mut dsu = Dsu { parent: (0..npoints).collect() };
    for (v, &m) in dims.iter().enumerate() {
        for (g, ginv) in gl_generators(m, p) {
            for x in 0..npoints {
                let mut ms = decode(x);
                for (ai, &k) in arrows.iter().enumerate() {
                    if k + 1 == v {
                        ms[ai] = mat_mul(&g, m, m, &ms[ai], dims[k], p);
                    }
                    if k == v {
                        ms[ai] = mat_mul(&ms[ai], dims[k + 1], m, &ginv, m, p);
                    }
                }
                dsu.union(x, encode(&ms));
            }
        }
    }
    Ok((0..npoints).filter(|&x| dsu.find(x) == x).count())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsReport {
    pub strings: Vec<TString>,
    pub dim_vectors: Vec<Vec<usize>>,
    pub count: usize,
    pub oracle_counts: Option<[usize; 2]>,
    pub parameters: Vec<Multisegment>,
}

/// Strings, multisegments and, at small dimension, the two field-size oracles.
pub fn classify<R: Real>(e: &EigenData<R>, tol: R) -> Result<ParamsReport> {
    let sq = build_strings(e, tol)?;
    let parameters = enumerate_multisegments(&sq)?;
    let count = parameters.len();
    let oracle_counts = if sq.dimension() <= ORACLE_CAP {
        let c2 = orbit_count_oracle(&sq, 2)?;
        let c3 = orbit_count_oracle(&sq, 3)?;
        if c2 != count || c3 != count {
            return Err(Error::Mismatch { enumerated: count, oracle: vec![c2, c3] });
        }
        Some([c2, c3])
    } else {
        None
    };
    let dim_vectors = sq.strings.iter().map(|s| s.multiplicities.values().copied().collect()).collect();
    Ok(ParamsReport { strings: sq.strings, dim_vectors, count, oracle_counts, parameters })
}
