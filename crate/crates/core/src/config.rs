//! Run configuration shared by the suites and the command line.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::elliptic::{CurveParams, CurvePoint, FParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// `[re, im]` of the period `τ`.
    pub tau: [f64; 2],
    pub trunc: usize,
    pub tol: f64,
    pub scale_tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub degree_cap: u32,
    /// Lattice coordinates of the poles `a`, `b` of `f`.
    pub fparams: [[f64; 2]; 2],
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tau: [0.3, 1.1],
            trunc: 40,
            tol: 1e-9,
            scale_tol: 1e-7,
            seed: 42,
            samples: 30,
            degree_cap: 6,
            fparams: [[0.23, 0.31], [0.57, 0.11]],
        }
    }
}

impl Config {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.tol > 0.0 && self.tol.is_finite()) || !(self.scale_tol > 0.0 && self.scale_tol.is_finite()) {
            return bad("tolerances must be positive and finite".into());
        }
        if self.samples == 0 || self.samples > 10_000 {
            return bad(format!("samples must lie in 1..=10000, got {}", self.samples));
        }
        if !(2..=12).contains(&self.degree_cap) {
            return bad(format!("degree_cap must lie in 2..=12, got {}", self.degree_cap));
        }
        let c = self.curve()?;
        self.fparams_value(&c)?;
        Ok(())
    }

    pub fn curve(&self) -> Result<CurveParams<f64>> {
        CurveParams::new(Complex::new(self.tau[0], self.tau[1]), self.trunc, self.tol, self.scale_tol)
    }

    pub fn fparams_value(&self, c: &CurveParams<f64>) -> Result<FParams<f64>> {
        let [a, b] = self.fparams;
        FParams::new(CurvePoint::new(a[0], a[1]), CurvePoint::new(b[0], b[1]), c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let c = Config::default();
        c.validate().unwrap();
        assert_eq!(Config::from_json("{}").unwrap(), c);
        let j = r#"{"seed": 7, "samples": 5}"#;
        assert_eq!(Config::from_json(j).unwrap().seed, 7);
        assert!(matches!(Config::from_json(r#"{"trunc": 5, "tau": [0.0, 0.2]}"#), Err(Error::InvalidCurve(_))));
        assert!(matches!(Config::from_json(r#"{"bogus": 1}"#), Err(Error::Parse(_))));
        assert!(matches!(Config::from_json(r#"{"samples": 0}"#), Err(Error::InvalidConfig(_))));
        assert!(Config::from_json(r#"{"fparams": [[0.0, 0.0], [0.5, 0.5]]}"#).is_err());
    }
}
