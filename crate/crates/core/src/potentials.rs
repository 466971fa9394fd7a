//! Laurent-polynomial disk potentials, evaluation at unitary local systems,
//! logarithmic gradients and critical-locus verification.

use crate::novikov::NovikovNum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A logarithmic partial is considered zero when the leading coefficient of
/// its value falls below this magnitude.
pub const CRIT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("local system has {got} holonomies but the potential has {want} variables")]
    ArityMismatch { want: usize, got: usize },
    #[error("holonomy {0} is not unitary (valuation must be 0)")]
    NotUnitary(usize),
}

/// Laurent polynomial in `arity ≤ 3` variables over the Novikov field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub arity: usize,
    /// Distinct exponent tuples with their coefficients.
    pub terms: Vec<(Vec<i32>, NovikovNum)>,
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> Self {
        LaurentPoly { arity, terms: vec![] }
    }

    pub fn new(arity: usize, terms: Vec<(Vec<i32>, NovikovNum)>) -> Self {
        let mut out: Vec<(Vec<i32>, NovikovNum)> = Vec::new();
        for (e, c) in terms {
            assert_eq!(e.len(), arity);
            if let Some((_, acc)) = out.iter_mut().find(|(f, _)| *f == e) {
                *acc = acc.add(&c);
            } else {
                out.push((e, c));
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { arity, terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitute the holonomies of a local system for the variables.
    pub fn eval(&self, xi: &LocalSystem) -> Result<NovikovNum, PotentialError> {
        if xi.holonomies.len() != self.arity {
            return Err(PotentialError::ArityMismatch {
                want: self.arity,
                got: xi.holonomies.len(),
            });
        }
        let mut acc = NovikovNum::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, x) in e.iter().zip(&xi.holonomies) {
                let p = x.powi(*k).map_err(|_| PotentialError::NotUnitary(0))?;
                term = term.mul(&p);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Logarithmic partial derivative `xᵢ ∂W/∂xᵢ` (torus-invariant form).
    pub fn log_partial(&self, i: usize) -> LaurentPoly {
        assert!(i < self.arity);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.scale(Complex64::new(e[i] as f64, 0.0))))
            .collect();
        LaurentPoly::new(self.arity, terms)
    }
}

/// Unitary holonomy assignment, one per basis loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalSystem {
    pub holonomies: Vec<NovikovNum>,
}

impl LocalSystem {
    pub fn new(holonomies: Vec<NovikovNum>) -> Result<Self, PotentialError> {
        for (i, h) in holonomies.iter().enumerate() {
            if !h.is_unitary() {
                return Err(PotentialError::NotUnitary(i));
            }
        }
        Ok(LocalSystem { holonomies })
    }

    /// Constant complex holonomies of modulus 1.
    pub fn from_phases(phases: &[f64]) -> Self {
        LocalSystem {
            holonomies: phases
                .iter()
                .map(|&t| NovikovNum::from_complex(Complex64::from_polar(1.0, t)))
                .collect(),
        }
    }
}

/// Disk potential of the L_C family: `x₁(1+x₂)²` when n = 2, zero for n > 2.
pub fn potential_lc(n: u32) -> LaurentPoly {
    assert!(n >= 2);
    if n > 2 {
        return LaurentPoly::zero(2);
    }
    LaurentPoly::new(
        2,
        vec![
            (vec![1, 0], NovikovNum::one()),
            (vec![1, 1], NovikovNum::from_real(2.0)),
            (vec![1, 2], NovikovNum::one()),
        ],
    )
}

/// Disk potential of the T_C family: `x₁(1+x₂)(1+x₃)`.
pub fn potential_tc() -> LaurentPoly {
    LaurentPoly::new(
        3,
        vec![
            (vec![1, 0, 0], NovikovNum::one()),
            (vec![1, 1, 0], NovikovNum::one()),
            (vec![1, 0, 1], NovikovNum::one()),
            (vec![1, 1, 1], NovikovNum::one()),
        ],
    )
}

/// All logarithmic partials vanish at ξ (leading coefficient below `CRIT_TOL`).
pub fn is_critical(w: &LaurentPoly, xi: &LocalSystem) -> Result<bool, PotentialError> {
    for i in 0..w.arity {
        let v = w.log_partial(i).eval(xi)?;
        if v.leading_mag() >= CRIT_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalLocusReport {
    pub description: String,
    /// Grid sampling of the unitary torus agrees with the description.
    pub verified: bool,
    pub grid_points_checked: usize,
    /// Every critical point found had potential value 0.
    pub potential_vanishes_at_critical: bool,
}

/// Sample the unitary torus on a grid of roots of unity (plus the exact
/// locus) and verify the closed-form critical locus of the two catalog
/// potentials: `x₂ = −1` for x₁(1+x₂)², and `x₂ = x₃ = −1` for
/// x₁(1+x₂)(1+x₃).
pub fn critical_locus_check(w: &LaurentPoly, grid: usize) -> CriticalLocusReport {
    let phases: Vec<f64> = (0..grid)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / grid as f64)
        .collect();
    let mut checked = 0usize;
    let mut ok = true;
    let mut vanish = true;
    let mut points: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..w.arity {
        points = points
            .iter()
            .flat_map(|p| {
                phases.iter().map(move |&t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    // Add the exact expected loci so the "iff" direction is exercised even
    // when π is not a grid phase.
    let pi = std::f64::consts::PI;
    if w.arity == 2 {
        points.push(vec![0.9, pi]);
        points.push(vec![2.1, pi]);
    } else if w.arity == 3 {
        points.push(vec![0.9, pi, pi]);
        points.push(vec![2.1, pi, pi]);
        points.push(vec![0.9, pi, 1.0]);
    }
    for p in &points {
        let xi = LocalSystem::from_phases(p);
        let crit = is_critical(w, &xi).unwrap();
        let expected = match w.arity {
            2 => phase_is_pi(p[1]),
            3 => phase_is_pi(p[1]) && phase_is_pi(p[2]),
            _ => crit,
        };
        if crit != expected {
            ok = false;
        }
        if crit {
            let v = w.eval(&xi).unwrap();
            if v.leading_mag() >= CRIT_TOL {
                vanish = false;
            }
        }
        checked += 1;
    }
    let description = match w.arity {
        2 => "critical on the unitary torus iff x2 = -1".to_string(),
        3 => "critical on the unitary torus iff x2 = x3 = -1".to_string(),
        _ => "no closed-form locus known".to_string(),
    };
    CriticalLocusReport {
        description,
        verified: ok,
        grid_points_checked: checked,
        potential_vanishes_at_critical: vanish,
    }
}

fn phase_is_pi(t: f64) -> bool {
    let d = (t - std::f64::consts::PI).abs();
    d < 1e-9 || (d - 2.0 * std::f64::consts::PI).abs() < 1e-9
}

/// Finite-difference oracle for the logarithmic gradient: derivative of
/// `θ ↦ W(…, xᵢe^{iθ}, …)` at 0 equals `i · (xᵢ ∂ᵢW)(ξ)`.
pub fn log_gradient_fd(w: &LaurentPoly, xi: &LocalSystem, i: usize) -> NovikovNum {
    let h = 1e-6;
    let mut plus = xi.clone();
    plus.holonomies[i] = plus.holonomies[i].scale(Complex64::from_polar(1.0, h));
    let mut minus = xi.clone();
    minus.holonomies[i] = minus.holonomies[i].scale(Complex64::from_polar(1.0, -h));
    let num = w.eval(&plus).unwrap().sub(&w.eval(&minus).unwrap());
    // Divide by 2ih.
    num.scale(Complex64::new(0.0, -1.0 / (2.0 * h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(re: f64, im: f64) -> NovikovNum {
        NovikovNum::from_complex(Complex64::new(re, im))
    }

    #[test]
    fn lc_expansion() {
        let w = potential_lc(2);
        assert_eq!(w.terms.len(), 3);
        assert!(potential_lc(3).is_zero());
        assert!(potential_lc(5).is_zero());
    }

    #[test]
    fn tc_expansion_and_eval() {
        let w = potential_tc();
        assert_eq!(w.terms.len(), 4);
        let ones = LocalSystem::new(vec![unit(1.0, 0.0); 3]).unwrap();
        assert!(w.eval(&ones).unwrap().approx_eq(&NovikovNum::from_real(4.0), 1e-8));
        // x₂ = −1 kills the potential regardless of x₁, x₃.
        let xi = LocalSystem::new(vec![unit(0.6, 0.8), unit(-1.0, 0.0), unit(0.0, 1.0)]).unwrap();
        assert!(w.eval(&xi).unwrap().is_zero());
    }

    #[test]
    fn critical_points() {
        let w1 = potential_lc(2);
        // ξ = (U, −1) is critical and W vanishes there.
        let xi = LocalSystem::new(vec![unit(0.0, 1.0), unit(-1.0, 0.0)]).unwrap();
        assert!(is_critical(&w1, &xi).unwrap());
        assert!(w1.eval(&xi).unwrap().is_zero());
        // (1, i) is not critical.
        let bad = LocalSystem::new(vec![unit(1.0, 0.0), unit(0.0, 1.0)]).unwrap();
        assert!(!is_critical(&w1, &bad).unwrap());

        let w2 = potential_tc();
        let xi2 = LocalSystem::new(vec![unit(1.0, 0.0), unit(-1.0, 0.0), unit(-1.0, 0.0)]).unwrap();
        assert!(is_critical(&w2, &xi2).unwrap());
        assert!(w2.eval(&xi2).unwrap().is_zero());
    }

    #[test]
    fn locus_reports() {
        let r1 = critical_locus_check(&potential_lc(2), 8);
        assert!(r1.verified, "{}", r1.description);
        assert!(r1.potential_vanishes_at_critical);
        let r2 = critical_locus_check(&potential_tc(), 4);
        assert!(r2.verified, "{}", r2.description);
        assert!(r2.potential_vanishes_at_critical);
    }

    #[test]
    fn log_gradient_matches_fd() {
        let w = potential_tc();
        let xi = LocalSystem::new(vec![unit(0.6, 0.8), unit(0.0, 1.0), unit(1.0, 0.0)]).unwrap();
        for i in 0..3 {
            let sym = w.log_partial(i).eval(&xi).unwrap();
            let fd = log_gradient_fd(&w, &xi, i);
            assert!(sym.approx_eq(&fd, 1e-6), "partial {i}: {sym} vs {fd}");
        }
    }

    #[test]
    fn arity_mismatch() {
        let w = potential_tc();
        let xi = LocalSystem::new(vec![unit(1.0, 0.0)]).unwrap();
        assert!(matches!(w.eval(&xi), Err(PotentialError::ArityMismatch { .. })));
    }

    #[test]
    fn unitary_enforced() {
        assert!(matches!(
            LocalSystem::new(vec![NovikovNum::t_pow(1, 1)]),
            Err(PotentialError::NotUnitary(0))
        ));
    }
}
