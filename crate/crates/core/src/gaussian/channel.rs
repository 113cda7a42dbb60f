use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::TwoModeCovariance;
use crate::error::{Error, Result};

/// Squeezing and added-noise parameters of the noisy two-mode squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub r: f64,
    pub b0: f64,
}

impl ChannelParams {
    pub fn new(r: f64, b0: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("squeezing r must be >= 0, got {r}")));
        }
        if !(b0.is_finite() && b0 >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise b0 must be >= 0, got {b0}")));
        }
        Ok(Self { r, b0 })
    }

    /// Squeezing below which a damping map on Bob's side beats every
    /// symplectic operation, `-ln(1 - b0) / 2`. `None` for `b0 >= 1`.
    pub fn threshold_squeezing(b0: f64) -> Option<f64> {
        (b0 < 1.0).then(|| -(1.0 - b0).ln() / 2.0)
    }
}

/// Two-mode squeezed vacuum with thermal noise `b0` added to Bob's mode.
pub fn make_tmsv_noisy(params: ChannelParams) -> TwoModeCovariance {
    let ChannelParams { r, b0 } = params;
    let sh = r.sinh();
    let a = 1.0 + 2.0 * sh * sh;
    let c = (2.0 * r).sinh();
    TwoModeCovariance::standard(a, a + b0, -c, c)
}

/// JSON description of a channel.
///
/// `{"kind":"tmsv_noisy","r":0.5,"b0":0.5}` or
/// `{"kind":"explicit","gamma":[[..],[..],[..],[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    TmsvNoisy { r: f64, b0: f64 },
    Explicit { gamma: [[f64; 4]; 4] },
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        // syntax errors carry "at line L column C"; field errors name the field
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("channel JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel spec serializes")
    }

    /// Builds the covariance matrix and checks that it is physical.
    pub fn covariance(&self) -> Result<TwoModeCovariance> {
        let gamma = match *self {
            ChannelSpec::TmsvNoisy { r, b0 } => make_tmsv_noisy(ChannelParams::new(r, b0)?),
            ChannelSpec::Explicit { gamma } => {
                let m = Matrix4::from_fn(|i, j| gamma[i][j]);
                TwoModeCovariance::new(m)?
            }
        };
        gamma.require_physical()?;
        Ok(gamma)
    }

    pub fn explicit(gamma: &TwoModeCovariance) -> Self {
        let m = gamma.matrix();
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[(i, j)];
            }
        }
        ChannelSpec::Explicit { gamma: rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::Covariance;

    #[test]
    fn zero_squeezing_gives_two_vacua() {
        let g = make_tmsv_noisy(ChannelParams::new(0.0, 0.0).unwrap());
        assert_eq!(*g.matrix(), Matrix4::identity());
    }

    #[test]
    fn matrix_elements() {
        let g = make_tmsv_noisy(ChannelParams::new(0.5, 0.0).unwrap());
        assert!((g.matrix()[(0, 0)] - 1.0f64.cosh()).abs() < 1e-14);
        assert!((g.matrix()[(1, 3)] - 1.0f64.sinh()).abs() < 1e-14);
        assert!((g.matrix()[(0, 2)] + 1.0f64.sinh()).abs() < 1e-14);
        assert!((g.matrix()[(0, 0)] - 1.5430806348152437).abs() < 1e-7);
        assert!((g.matrix()[(1, 3)] - 1.1752011936438014).abs() < 1e-7);

        let g = make_tmsv_noisy(ChannelParams::new(0.2, 0.5).unwrap());
        assert!((g.matrix()[(2, 2)] - (0.4f64.cosh() + 0.5)).abs() < 1e-14);
        assert!((g.matrix()[(3, 3)] - 1.5810723718).abs() < 1e-7);
    }

    #[test]
    fn family_is_physical() {
        for &(r, b0) in &[(0.0, 0.0), (0.5, 0.0), (1.0, 0.3), (2.0, 1.0), (0.1, 5.0)] {
            let g = make_tmsv_noisy(ChannelParams::new(r, b0).unwrap());
            assert!(g.is_physical(), "r={r} b0={b0}");
        }
        // pure TMSV saturates the uncertainty relation
        let g = make_tmsv_noisy(ChannelParams::new(1.0, 0.0).unwrap());
        assert!(g.uncertainty_margin().abs() < 1e-9);
    }

    #[test]
    fn invalid_params() {
        assert!(ChannelParams::new(-0.1, 0.0).is_err());
        assert!(ChannelParams::new(0.1, -1.0).is_err());
        assert!(ChannelParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn threshold() {
        let r_th = ChannelParams::threshold_squeezing(0.5).unwrap();
        assert!((r_th - 2f64.ln() / 2.0).abs() < 1e-15);
        assert_eq!(ChannelParams::threshold_squeezing(0.0), Some(0.0));
        assert_eq!(ChannelParams::threshold_squeezing(1.0), None);
    }

    #[test]
    fn json_specs() {
        let s = ChannelSpec::from_json(r#"{"kind":"tmsv_noisy","r":0.5,"b0":0.5}"#).unwrap();
        assert_eq!(s, ChannelSpec::TmsvNoisy { r: 0.5, b0: 0.5 });
        let g = s.covariance().unwrap();
        let back = ChannelSpec::explicit(&g);
        assert_eq!(back.covariance().unwrap(), g);
        let reparsed = ChannelSpec::from_json(&back.to_json()).unwrap();
        assert_eq!(reparsed, back);

        let e = ChannelSpec::from_json(r#"{"kind":"tmsv_noisy","r":0.5}"#).unwrap_err();
        assert!(e.to_string().contains("b0"));
        let e = ChannelSpec::from_json("{\"kind\":\n  \"tmsv_noisy\",").unwrap_err();
        assert!(e.to_string().contains("line 2"));
        assert!(ChannelSpec::from_json(r#"{"kind":"nope"}"#).is_err());

        let bad = r#"{"kind":"explicit","gamma":[[0.5,0,0,0],[0,0.5,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        let err = ChannelSpec::from_json(bad).unwrap().covariance().unwrap_err();
        assert!(matches!(err, Error::NotPhysical { .. }));
    }
}
