use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::elliptic::CurvePoint;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;

/// Exact rational polynomials used for closed-form relation data.
pub type ClosedForm = Poly<Ratio<i64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaMeta {
    pub n1: i64,
    pub n2: i64,
    pub d: i64,
    pub l: i64,
}

/// A quiver without loops given by arrow counts `arrows[i][j]` from `i` to `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub labels: Vec<(i64, i64)>,
    pub arrows: Vec<Vec<u32>>,
    pub gamma: Option<GammaMeta>,
}

impl Quiver {
    pub fn new(labels: Vec<(i64, i64)>, arrows: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if arrows.len() != n || arrows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidConfig("arrow matrix shape does not match vertex count".into()));
        }
        if (0..n).any(|i| arrows[i][i] != 0) {
            return Err(Error::InvalidConfig("loops are not allowed".into()));
        }
        Ok(Self { labels, arrows, gamma: None })
    }

    pub fn single_vertex() -> Self {
        Self { labels: vec![(0, 0)], arrows: vec![vec![0]], gamma: None }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn arrows(&self, i: usize, j: usize) -> u32 {
        self.arrows[i][j]
    }

    /// Number of connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    if !seen[w] && (self.arrows[v][w] > 0 || self.arrows[w][v] > 0) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// The point `u/n1 + v τ/n2` attached to a vertex of `Γ_{d,l}`.
    pub fn label_point<R: Real>(&self, i: usize) -> Option<CurvePoint<R>> {
        let g = self.gamma?;
        let (u, v) = self.labels[i];
        Some(CurvePoint::new(R::lit(u as f64 / g.n1 as f64), R::lit(v as f64 / g.n2 as f64)))
    }

    /// `P_ij(x_first, x_second)` as a polynomial in `n` variables.
    pub fn p_at(&self, i: usize, j: usize, first: usize, second: usize, n: usize) -> ClosedForm {
        if i == j {
            return Poly::zero(n);
        }
        Poly::var(n, second).sub(&Poly::var(n, first)).pow(self.arrows[i][j])
    }

    /// `P_ij(u, v)` in the two variables `(u, v)`.
    pub fn p_poly(&self, i: usize, j: usize) -> ClosedForm {
        self.p_at(i, j, 0, 1, 2)
    }

    /// The factor `P_ab(x_{k+1}, x_k) P_ba(x_k, x_{k+1})` produced by a double
    /// crossing of distinct strands coloured `(a, b)` at positions `(k, k+1)`.
    pub fn tau_squared(&self, a: usize, b: usize, k: usize, n: usize) -> ClosedForm {
        self.p_at(a, b, k + 1, k, n).mul(&self.p_at(b, a, k, k + 1, n))
    }

    /// Braid defect `τ_kτ_{k+1}τ_k - τ_{k+1}τ_kτ_{k+1}` on colour pattern `(a, b, a)`.
    pub fn braid_correction(&self, a: usize, b: usize, k: usize, n: usize) -> ClosedForm {
        if a == b {
            return Poly::zero(n);
        }
        let q_first = self.tau_squared(a, b, k, n);
        let q_last = q_first.swap(k, k + 2);
        q_last.sub(&q_first).div_difference(k, k + 2, 0.0).expect("difference quotient of a polynomial")
    }
}

/// `Γ_{d,l}`: vertices `(u mod n1, v mod n2)`, arrows `(u, v) → (u+1, v+1)`.
pub fn build_gamma(n1: i64, n2: i64) -> Result<Quiver> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidConfig(format!("build_gamma needs n1, n2 >= 2, got ({n1}, {n2})")));
    }
    let d = n1.lcm(&n2);
    let l = n1 * n2 / d;
    let labels: Vec<(i64, i64)> = (0..n1).flat_map(|u| (0..n2).map(move |v| (u, v))).collect();
    let idx = |u: i64, v: i64| (u.rem_euclid(n1) * n2 + v.rem_euclid(n2)) as usize;
    let n = labels.len();
    let mut arrows = vec![vec![0u32; n]; n];
    for &(u, v) in &labels {
        arrows[idx(u, v)][idx(u + 1, v + 1)] += 1;
    }
    Ok(Quiver { labels, arrows, gamma: Some(GammaMeta { n1, n2, d, l }) })
}
