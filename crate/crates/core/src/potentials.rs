//! Left-right symmetric scalar potentials in the radial variables
//! `sL = |Phi_L|^2`, `sR = |Phi_R|^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance for marginal (degenerate) classifications.
pub const MARGINAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeParams {
    pub mu2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl TreeParams {
    pub fn new(mu2: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let p = TreeParams {
            mu2,
            lambda1,
            lambda2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 > 0.0) || !self.lambda1.is_finite() {
            return Err(Error::Config(format!(
                "lambda1 must be positive, got {}",
                self.lambda1
            )));
        }
        if !self.mu2.is_finite() || !self.lambda2.is_finite() {
            return Err(Error::Config("parameters must be finite".into()));
        }
        Ok(())
    }
}

fn check_radial(s_l: f64, s_r: f64) -> Result<()> {
    if !(s_l >= 0.0) || !(s_r >= 0.0) {
        return Err(Error::Domain(format!(
            "radial variables must be non-negative, got ({s_l}, {s_r})"
        )));
    }
    Ok(())
}

pub fn tree_potential(s_l: f64, s_r: f64, p: &TreeParams) -> Result<f64> {
    check_radial(s_l, s_r)?;
    Ok(-p.mu2 * (s_l + s_r) + p.lambda1 * (s_l * s_l + s_r * s_r) + p.lambda2 * s_l * s_r)
}

/// `(dV/dsL, dV/dsR)`
pub fn tree_gradient(s_l: f64, s_r: f64, p: &TreeParams) -> [f64; 2] {
    [
        -p.mu2 + 2.0 * p.lambda1 * s_l + p.lambda2 * s_r,
        -p.mu2 + 2.0 * p.lambda1 * s_r + p.lambda2 * s_l,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Minimum,
    Saddle,
    Maximum,
    Marginal,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryPoint {
    pub label: &'static str,
    pub s_l: f64,
    pub s_r: f64,
    pub value: f64,
    pub kind: PointKind,
    /// `sqrt(sR)` at the right-handed asymmetric point.
    pub u_r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Only the origin is stationary in the quadrant.
    Unbroken,
    ParityViolating,
    Symmetric,
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeAnalysis {
    pub params: TreeParams,
    pub points: Vec<StationaryPoint>,
    /// Labels of the points attaining the lowest value among minima.
    pub global_minimum: Vec<&'static str>,
    pub regime: Regime,
}

fn sign_kind(a: f64, b: f64, scale: f64) -> PointKind {
    let tol = MARGINAL_TOL * scale.max(f64::MIN_POSITIVE);
    if a.abs() <= tol || b.abs() <= tol {
        PointKind::Marginal
    } else if a > 0.0 && b > 0.0 {
        PointKind::Minimum
    } else if a < 0.0 && b < 0.0 {
        PointKind::Maximum
    } else {
        PointKind::Saddle
    }
}

/// Stationary points on the closed quadrant, classified with the boundary
/// multipliers (outward gradient components) and the curvature along the free direction.
pub fn tree_stationary_points(p: &TreeParams) -> Result<TreeAnalysis> {
    p.validate()?;
    let scale = p.mu2.abs() + 2.0 * p.lambda1 + p.lambda2.abs();
    let mut points = Vec::new();

    // At the corner both coordinates are constrained; the multipliers are the gradient.
    points.push(StationaryPoint {
        label: "origin",
        s_l: 0.0,
        s_r: 0.0,
        value: 0.0,
        kind: sign_kind(-p.mu2, -p.mu2, scale),
        u_r: None,
    });

    if p.mu2 > 0.0 {
        let s = p.mu2 / (2.0 * p.lambda1);
        let multiplier = -p.mu2 + p.lambda2 * s;
        let kind = sign_kind(multiplier, 2.0 * p.lambda1, scale);
        let value = -p.mu2 * p.mu2 / (4.0 * p.lambda1);
        points.push(StationaryPoint {
            label: "asymmetric_r",
            s_l: 0.0,
            s_r: s,
            value,
            kind,
            u_r: Some(s.sqrt()),
        });
        points.push(StationaryPoint {
            label: "asymmetric_l",
            s_l: s,
            s_r: 0.0,
            value,
            kind,
            u_r: None,
        });
    }

    let denom = 2.0 * p.lambda1 + p.lambda2;
    if denom != 0.0 && p.mu2 / denom > 0.0 {
        let v = p.mu2 / denom;
        points.push(StationaryPoint {
            label: "symmetric",
            s_l: v,
            s_r: v,
            value: -p.mu2 * p.mu2 / denom,
            kind: sign_kind(
                2.0 * p.lambda1 + p.lambda2,
                2.0 * p.lambda1 - p.lambda2,
                scale,
            ),
            u_r: None,
        });
    }

    let minima: Vec<&StationaryPoint> = points
        .iter()
        .filter(|s| matches!(s.kind, PointKind::Minimum | PointKind::Marginal))
        .collect();
    let best = minima.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let tol = MARGINAL_TOL * scale * scale / p.lambda1;
    let global_minimum: Vec<&'static str> = minima
        .iter()
        .filter(|s| s.value <= best + tol)
        .map(|s| s.label)
        .collect();
    let regime = if points.len() == 1 {
        Regime::Unbroken
    } else if global_minimum.contains(&"symmetric") && global_minimum.contains(&"asymmetric_r") {
        Regime::Degenerate
    } else if global_minimum.contains(&"asymmetric_r") {
        Regime::ParityViolating
    } else if global_minimum.contains(&"symmetric") {
        Regime::Symmetric
    } else {
        Regime::Unbroken
    };
    Ok(TreeAnalysis {
        params: *p,
        points,
        global_minimum,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub g: f64,
    /// Renormalization scale `M`.
    pub m_scale: f64,
}

impl LoopParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0) || !(self.m_scale > 0.0) {
            return Err(Error::Config(format!(
                "g and M must be positive, got g = {}, M = {}",
                self.g, self.m_scale
            )));
        }
        if !self.lambda1.is_finite() || !self.lambda2.is_finite() {
            return Err(Error::Config("couplings must be finite".into()));
        }
        Ok(())
    }

    /// Coefficient `3 g^4 / (64 pi^2)` of the logarithmic terms.
    pub fn loop_coefficient(&self) -> f64 {
        3.0 * self.g.powi(4) / (64.0 * PI * PI)
    }
}

/// `s^2 (ln(s / M^2) - 25/6)` with the `s -> 0` limit.
fn log_term(s: f64, m2: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s * s * ((s / m2).ln() - 25.0 / 6.0)
    }
}

fn log_term_derivative(s: f64, m2: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s * (2.0 * (s / m2).ln() - 25.0 / 3.0 + 1.0)
    }
}

pub fn one_loop_potential(s_l: f64, s_r: f64, p: &LoopParams) -> Result<f64> {
    check_radial(s_l, s_r)?;
    let m2 = p.m_scale * p.m_scale;
    let c = p.loop_coefficient();
    Ok(p.lambda1 * (s_l * s_l + s_r * s_r)
        + p.lambda2 * s_l * s_r
        + c * (log_term(s_l, m2) + log_term(s_r, m2)))
}

pub fn one_loop_gradient(s_l: f64, s_r: f64, p: &LoopParams) -> Result<[f64; 2]> {
    check_radial(s_l, s_r)?;
    let m2 = p.m_scale * p.m_scale;
    let c = p.loop_coefficient();
    Ok([
        2.0 * p.lambda1 * s_l + p.lambda2 * s_r + c * log_term_derivative(s_l, m2),
        2.0 * p.lambda1 * s_r + p.lambda2 * s_l + c * log_term_derivative(s_r, m2),
    ])
}

/// `v_R^2 = M^2 exp(25/6 - 1/2 - lambda1 / c)` with `c = 3 g^4 / (64 pi^2)`.
pub fn one_loop_vr2(p: &LoopParams) -> f64 {
    p.m_scale * p.m_scale * (25.0 / 6.0 - 0.5 - p.lambda1 / p.loop_coefficient()).exp()
}

/// Symmetric stationary point `sL = sR = s`, `ln(s / M^2) = 11/3 - (2 lambda1 + lambda2) / (2c)`.
pub fn one_loop_symmetric(p: &LoopParams) -> f64 {
    let c = p.loop_coefficient();
    p.m_scale * p.m_scale * (11.0 / 3.0 - (2.0 * p.lambda1 + p.lambda2) / (2.0 * c)).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct LoopVacuum {
    pub params: LoopParams,
    pub v_r2: f64,
    pub radial_curvature: f64,
    /// `dV/dsL` at `(0, v_R^2)`; positive means the boundary holds.
    pub boundary_gradient: f64,
    pub is_local_minimum: bool,
    pub symmetric_s: f64,
    pub value_asymmetric: f64,
    pub value_symmetric: f64,
    pub asymmetric_is_lower: bool,
    /// `c ln 2`, the exact threshold in `lambda2` for the ordering above.
    pub ordering_threshold: f64,
    /// `3 g^2 / (64 pi^2)`, the printed regime bound.
    pub printed_bound: f64,
    pub printed_condition_holds: bool,
    pub printed_condition_agrees: bool,
}

pub fn one_loop_vacuum(p: &LoopParams) -> Result<LoopVacuum> {
    p.validate()?;
    let c = p.loop_coefficient();
    let v = one_loop_vr2(p);
    let s = one_loop_symmetric(p);
    let m2 = p.m_scale * p.m_scale;
    let radial_curvature = 2.0 * p.lambda1 + c * (2.0 * (v / m2).ln() - 25.0 / 3.0 + 3.0);
    let boundary_gradient = one_loop_gradient(0.0, v, p)?[0];
    let value_asymmetric = one_loop_potential(0.0, v, p)?;
    let value_symmetric = one_loop_potential(s, s, p)?;
    let printed_bound = 3.0 * p.g * p.g / (64.0 * PI * PI);
    let asymmetric_is_lower = value_asymmetric < value_symmetric;
    let printed_condition_holds = p.lambda2 > printed_bound;
    Ok(LoopVacuum {
        params: *p,
        v_r2: v,
        radial_curvature,
        boundary_gradient,
        is_local_minimum: radial_curvature > 0.0 && boundary_gradient > 0.0,
        symmetric_s: s,
        value_asymmetric,
        value_symmetric,
        asymmetric_is_lower,
        ordering_threshold: c * std::f64::consts::LN_2,
        printed_bound,
        printed_condition_holds,
        printed_condition_agrees: printed_condition_holds == asymmetric_is_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_values() {
        let p = TreeParams::new(2.0, 1.0, 3.0).unwrap();
        assert_eq!(tree_potential(0.0, 0.0, &p).unwrap(), 0.0);
        assert!((tree_potential(0.0, 1.0, &p).unwrap() + 1.0).abs() < 1e-15);
        assert!(tree_potential(-1.0, 0.0, &p).is_err());
        // lambda2 = 2 lambda1: V(s, s) = -2 mu2 s + 4 lambda1 s^2 = V_single(2s).
        let q = TreeParams::new(2.0, 1.0, 2.0).unwrap();
        for s in [0.1, 0.7, 2.0] {
            let single = -2.0 * (2.0 * s) + 1.0 * (2.0 * s) * (2.0 * s);
            assert!((tree_potential(s, s, &q).unwrap() - single).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_regimes() {
        let a = tree_stationary_points(&TreeParams::new(2.0, 1.0, 3.0).unwrap()).unwrap();
        assert_eq!(a.regime, Regime::ParityViolating);
        let r = a.points.iter().find(|p| p.label == "asymmetric_r").unwrap();
        assert_eq!(r.s_r, 1.0);
        assert_eq!(r.kind, PointKind::Minimum);
        assert_eq!(a.global_minimum, vec!["asymmetric_r", "asymmetric_l"]);

        let b = tree_stationary_points(&TreeParams::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(b.regime, Regime::Symmetric);
        assert_eq!(b.global_minimum, vec!["symmetric"]);

        let c = tree_stationary_points(&TreeParams::new(-1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].kind, PointKind::Minimum);

        let d = tree_stationary_points(&TreeParams::new(2.0, 1.0, 2.0).unwrap()).unwrap();
        assert!(d
            .points
            .iter()
            .all(|p| p.label == "origin" || p.kind == PointKind::Marginal));
        assert_eq!(d.regime, Regime::Degenerate);
    }

    #[test]
    fn one_loop_example() {
        let g = 1.0;
        let p = LoopParams {
            lambda1: g * g / (16.0 * PI * PI),
            lambda2: 0.1,
            g,
            m_scale: 1.0,
        };
        let v = one_loop_vacuum(&p).unwrap();
        assert!((v.v_r2 - (7.0f64 / 3.0).exp()).abs() < 1e-12);
        assert!(v.is_local_minimum && v.asymmetric_is_lower);
        let grad = one_loop_gradient(0.0, v.v_r2, &p).unwrap()[1];
        assert!(grad.abs() < 1e-14);
        assert!((one_loop_potential(0.0, 0.0, &p).unwrap()).abs() == 0.0);
        assert_eq!(
            one_loop_potential(0.3, 1.1, &p).unwrap(),
            one_loop_potential(1.1, 0.3, &p).unwrap()
        );
    }

    #[test]
    fn ordering_threshold_is_sharp() {
        let base = LoopParams {
            lambda1: 0.005,
            lambda2: 0.0,
            g: 1.0,
            m_scale: 1.0,
        };
        let t = base.loop_coefficient() * std::f64::consts::LN_2;
        let above = one_loop_vacuum(&LoopParams {
            lambda2: t * 1.01,
            ..base
        })
        .unwrap();
        let below = one_loop_vacuum(&LoopParams {
            lambda2: t * 0.99,
            ..base
        })
        .unwrap();
        assert!(above.asymmetric_is_lower);
        assert!(!below.asymmetric_is_lower);
    }

    #[test]
    fn scale_covariance() {
        let p = LoopParams {
            lambda1: 0.004,
            lambda2: 0.02,
            g: 0.9,
            m_scale: 1.0,
        };
        let q = LoopParams {
            m_scale: 3.0f64.sqrt(),
            ..p
        };
        assert!((one_loop_vr2(&q) / one_loop_vr2(&p) - 3.0).abs() < 1e-12);
    }
}
