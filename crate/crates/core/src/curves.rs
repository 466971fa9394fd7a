//! Plane-curve geometry in ℂ∖{±1}: winding numbers, σ/σ′ densities and
//! areas, boundary-integral cross-checks, monotonicity constants τ and the
//! inverse problem τ ↦ curve.
//!
//! The σ density has the closed form `1 + |z|²/|1−z²|`; the σ′ density is
//! defined per fibration factor as `1 + 1/(2|z+1|) + 1/(2|z−1|)`. Both are
//! validated in tests against finite-difference Jacobian oracles of the
//! defining maps, and both area computations are cross-checked against a
//! boundary-integral formulation and a seeded Monte Carlo oracle.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum allowed distance from the critical values ±1.
pub const MIN_CRITICAL_DIST: f64 = 1e-6;
/// Absolute error target for the adaptive area quadrature.
pub const QUAD_ABS_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve passes within {0:.2e} of a critical value ±1")]
    TooCloseToCritical(f64),
    #[error("operation requires a closed curve")]
    NotClosed,
    #[error("curve segments do not join continuously")]
    Disconnected,
    #[error("curve is self-intersecting at sample resolution")]
    SelfIntersecting,
    #[error("density evaluated at a critical value ±1")]
    AtCriticalValue,
    #[error("adaptive quadrature did not converge (residual {0:.2e})")]
    QuadratureNotConverged(f64),
    #[error("square-root branch continuation failed near t = {0}")]
    BranchContinuationFailed(f64),
    #[error("tau {0} is outside the representable family range")]
    TauOutOfRange(f64),
}

/// One smooth parametrized arc `γ: [0,1] → ℂ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "snake_case")]
pub enum Segment {
    /// Arc of a circle: `center + radius·e^{i((1−t)θ₀ + tθ₁)}`.
    CircleArc { center: (f64, f64), radius: f64, theta0: f64, theta1: f64 },
    /// Piecewise-linear interpolation through the listed points.
    Polyline { points: Vec<(f64, f64)> },
    /// Trigonometric curve `Σ_k c_k e^{2πikt}`, coefficients as `(k, re, im)`.
    Fourier { coeffs: Vec<(i32, f64, f64)> },
}

impl Segment {
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Segment::CircleArc { center, radius, theta0, theta1 } => {
                let th = theta0 + (theta1 - theta0) * t;
                Complex64::new(center.0, center.1) + Complex64::from_polar(*radius, th)
            }
            Segment::Polyline { points } => {
                if points.len() < 2 {
                    return points
                        .first()
                        .map_or(Complex64::default(), |p| Complex64::new(p.0, p.1));
                }
                let nseg = (points.len() - 1) as f64;
                let x = (t.clamp(0.0, 1.0) * nseg).min(nseg - 1e-12);
                let i = x.floor() as usize;
                let f = x - i as f64;
                let a = Complex64::new(points[i].0, points[i].1);
                let b = Complex64::new(points[i + 1].0, points[i + 1].1);
                a + (b - a) * f
            }
            Segment::Fourier { coeffs } => coeffs
                .iter()
                .map(|(k, re, im)| {
                    Complex64::new(*re, *im)
                        * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * *k as f64 * t)
                })
                .sum(),
        }
    }

    pub fn deriv(&self, t: f64) -> Complex64 {
        match self {
            Segment::CircleArc { radius, theta0, theta1, .. } => {
                let th = theta0 + (theta1 - theta0) * t;
                Complex64::new(0.0, theta1 - theta0) * Complex64::from_polar(*radius, th)
            }
            Segment::Polyline { points } => {
                if points.len() < 2 {
                    return Complex64::default();
                }
                let nseg = (points.len() - 1) as f64;
                let x = (t.clamp(0.0, 1.0) * nseg).min(nseg - 1e-12);
                let i = x.floor() as usize;
                let a = Complex64::new(points[i].0, points[i].1);
                let b = Complex64::new(points[i + 1].0, points[i + 1].1);
                (b - a) * nseg
            }
            Segment::Fourier { coeffs } => coeffs
                .iter()
                .map(|(k, re, im)| {
                    let w = 2.0 * std::f64::consts::PI * *k as f64;
                    Complex64::new(*re, *im)
                        * Complex64::new(0.0, w)
                        * Complex64::from_polar(1.0, w * t)
                })
                .sum(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub segments: Vec<Segment>,
    pub closed: bool,
}

/// On-disk JSON schema for curve files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub schema: u32,
    pub closed: bool,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaVariant {
    Sigma,
    SigmaPrime,
}

/// Plane density selector: σ (base T*Sⁿ fibration) or σ′ (the n = 3
/// fiber-product fibration).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaDensity {
    pub variant: SigmaVariant,
}

impl SigmaDensity {
    pub fn sigma() -> Self {
        SigmaDensity { variant: SigmaVariant::Sigma }
    }

    pub fn sigma_prime() -> Self {
        SigmaDensity { variant: SigmaVariant::SigmaPrime }
    }
}

/// Which torus family a curve bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// S¹ × S^{n−1} torus over the curve; Maslov index 2(n−1).
    LC,
    /// T³ ⊂ T*S³; Maslov index 2.
    TC,
}

impl Family {
    pub fn density(self) -> SigmaDensity {
        match self {
            Family::LC => SigmaDensity::sigma(),
            Family::TC => SigmaDensity::sigma_prime(),
        }
    }
}

impl PlaneCurve {
    pub fn new(segments: Vec<Segment>, closed: bool) -> Result<Self, CurveError> {
        let c = PlaneCurve { segments, closed };
        c.validate()?;
        Ok(c)
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self, CurveError> {
        Self::new(
            vec![Segment::CircleArc {
                center: (center.re, center.im),
                radius,
                theta0: 0.0,
                theta1: 2.0 * std::f64::consts::PI,
            }],
            true,
        )
    }

    /// Confocal ellipse with foci ±1: `cosh(ρ + iθ)`, θ ∈ [0, 2π).
    pub fn confocal_ellipse(rho: f64) -> Result<Self, CurveError> {
        Self::new(
            vec![Segment::Fourier {
                coeffs: vec![(1, (rho.exp()) / 2.0, 0.0), (-1, (-rho).exp() / 2.0, 0.0)],
            }],
            true,
        )
    }

    fn validate(&self) -> Result<(), CurveError> {
        if self.segments.is_empty() {
            return Err(CurveError::Disconnected);
        }
        let mut min_dist = f64::INFINITY;
        for seg in &self.segments {
            for k in 0..=512 {
                let z = seg.eval(k as f64 / 512.0);
                for c in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)] {
                    min_dist = min_dist.min((z - c).norm());
                }
            }
        }
        if min_dist <= MIN_CRITICAL_DIST {
            return Err(CurveError::TooCloseToCritical(min_dist));
        }
        // Continuity of joins.
        let joins = self.segments.len() - if self.closed { 0 } else { 1 };
        for i in 0..joins {
            let a = self.segments[i].eval(1.0);
            let b = self.segments[(i + 1) % self.segments.len()].eval(0.0);
            if (a - b).norm() > 1e-6 {
                return Err(CurveError::Disconnected);
            }
        }
        Ok(())
    }

    /// Global parametrization over [0,1], uniform across segments.
    pub fn eval(&self, t: f64) -> Complex64 {
        let (i, local) = self.locate(t);
        self.segments[i].eval(local)
    }

    pub fn deriv(&self, t: f64) -> Complex64 {
        let (i, local) = self.locate(t);
        self.segments[i].deriv(local) * self.segments.len() as f64
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.segments.len() as f64;
        let x = (t.clamp(0.0, 1.0) * n).min(n - 1e-12);
        let i = x.floor() as usize;
        (i, x - i as f64)
    }

    /// Winding numbers around (−1, +1) by the discretized argument principle.
    pub fn winding_numbers(&self) -> Result<(i64, i64), CurveError> {
        if !self.closed {
            return Err(CurveError::NotClosed);
        }
        let n = 512 * self.segments.len();
        let mut w = [0.0f64; 2];
        let centers = [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut prev = [0.0f64; 2];
        for k in 0..=n {
            let z = self.eval(k as f64 / n as f64);
            for (j, c) in centers.iter().enumerate() {
                let a = (z - c).arg();
                if k > 0 {
                    let mut d = a - prev[j];
                    while d > std::f64::consts::PI {
                        d -= 2.0 * std::f64::consts::PI;
                    }
                    while d < -std::f64::consts::PI {
                        d += 2.0 * std::f64::consts::PI;
                    }
                    w[j] += d;
                }
                prev[j] = a;
            }
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        Ok(((w[0] / two_pi).round() as i64, (w[1] / two_pi).round() as i64))
    }

    /// Embeddedness check at sample resolution.
    pub fn is_simple(&self) -> bool {
        let n = (256 * self.segments.len()).min(1024);
        let pts: Vec<Complex64> = (0..n).map(|k| self.eval(k as f64 / n as f64)).collect();
        for i in 0..n {
            let a1 = pts[i];
            let a2 = pts[(i + 1) % n];
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let b1 = pts[j];
                let b2 = pts[(j + 1) % n];
                if segments_cross(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    /// A point inside the region (vertex centroid), used as the star center.
    pub fn centroid(&self) -> Complex64 {
        let n = 64 * self.segments.len();
        let sum: Complex64 = (0..n).map(|k| self.eval(k as f64 / n as f64)).sum();
        sum / n as f64
    }

    /// Signed Lebesgue area enclosed (shoelace via Green's theorem).
    pub fn lebesgue_area(&self) -> f64 {
        let n = 4096 * self.segments.len();
        let mut acc = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) / n as f64;
            let z = self.eval(t);
            let dz = self.deriv(t);
            acc += 0.5 * (z.conj() * dz).im;
        }
        acc / n as f64
    }
}

fn segments_cross(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let d1 = cross(b2 - b1, a1 - b1);
    let d2 = cross(b2 - b1, a2 - b1);
    let d3 = cross(a2 - a1, b1 - a1);
    let d4 = cross(a2 - a1, b2 - a1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

/// Pointwise density of the selected measure relative to Lebesgue measure.
pub fn sigma_density_at(z: Complex64, d: SigmaDensity) -> Result<f64, CurveError> {
    let d1 = (z - 1.0).norm();
    let d2 = (z + 1.0).norm();
    if d1 <= MIN_CRITICAL_DIST || d2 <= MIN_CRITICAL_DIST {
        return Err(CurveError::AtCriticalValue);
    }
    Ok(match d.variant {
        SigmaVariant::Sigma => 1.0 + z.norm_sqr() / (Complex64::new(1.0, 0.0) - z * z).norm(),
        SigmaVariant::SigmaPrime => 1.0 + 0.5 / d2 + 0.5 / d1,
    })
}

/// Independent density oracle: 1 + finite-difference Jacobian determinant of
/// the defining fibration map(s).
pub fn sigma_density_oracle(z: Complex64, d: SigmaDensity) -> f64 {
    let h = 1e-5;
    match d.variant {
        SigmaVariant::Sigma => {
            // f(z) = (1 − z²)/√(2|1 − z²|)
            let f = |z: Complex64| {
                let w = Complex64::new(1.0, 0.0) - z * z;
                w / (2.0 * w.norm()).sqrt()
            };
            1.0 + jac_det(f, z, h)
        }
        SigmaVariant::SigmaPrime => {
            // Two fibration factors u_i v_i = z ∓ 1, each contributing the
            // radial map w ↦ w/√|w|.
            let f1 = |z: Complex64| {
                let w = z + 1.0;
                w / w.norm().sqrt()
            };
            let f2 = |z: Complex64| {
                let w = z - 1.0;
                w / w.norm().sqrt()
            };
            1.0 + jac_det(f1, z, h) + jac_det(f2, z, h)
        }
    }
}

fn jac_det(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> f64 {
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    fx.re * fy.im - fx.im * fy.re
}

// ---------------------------------------------------------------------------
// Region quadrature
// ---------------------------------------------------------------------------

const GAUSS4_X: [f64; 4] = [
    0.069431844202973714,
    0.33000947820757187,
    0.66999052179242813,
    0.93056815579702629,
];
const GAUSS4_W: [f64; 4] = [
    0.17392742256872693,
    0.32607257743127307,
    0.32607257743127307,
    0.17392742256872693,
];

struct StarMap<'a> {
    curve: &'a PlaneCurve,
    center: Complex64,
    density: SigmaDensity,
}

impl StarMap<'_> {
    /// Integrand over (s,t) ∈ [0,1]²: density(z)·s·Im(conj(γ−c)·γ′).
    /// Integrating this gives ∫ density·winding dA, i.e. the enclosed area
    /// for a simple positively-oriented curve.
    fn integrand(&self, s: f64, t: f64) -> f64 {
        let g = self.curve.eval(t);
        let dg = self.curve.deriv(t);
        let r = g - self.center;
        let z = self.center + r * s;
        let jac = s * (r.conj() * dg).im;
        let dens = match sigma_density_at(z, self.density) {
            Ok(d) => d,
            // Quadrature nodes never sit exactly on ±1; if one gets within
            // the guard radius, use the guard value (integrable anyway).
            Err(_) => match self.density.variant {
                SigmaVariant::Sigma => 1.0 + z.norm_sqr() / (2.0 * MIN_CRITICAL_DIST),
                SigmaVariant::SigmaPrime => 1.0 + 1.0 / (2.0 * MIN_CRITICAL_DIST),
            },
        };
        dens * jac
    }

    fn cell_gauss(&self, s0: f64, s1: f64, t0: f64, t1: f64) -> f64 {
        let mut acc = 0.0;
        for (xi, wi) in GAUSS4_X.iter().zip(GAUSS4_W) {
            let s = s0 + (s1 - s0) * xi;
            for (xj, wj) in GAUSS4_X.iter().zip(GAUSS4_W) {
                let t = t0 + (t1 - t0) * xj;
                acc += wi * wj * self.integrand(s, t);
            }
        }
        acc * (s1 - s0) * (t1 - t0)
    }
}

/// σ- or σ′-area of the region enclosed by a closed curve, by adaptive
/// tensor-Gauss quadrature over a star-shaped parametrization with dyadic
/// refinement near the (integrable) singularities at ±1.
pub fn sigma_area(curve: &PlaneCurve, d: SigmaDensity) -> Result<f64, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let star = StarMap { curve, center: curve.centroid(), density: d };
    // (s0, s1, t0, t1, coarse estimate)
    let mut stack: Vec<(f64, f64, f64, f64, f64, u32)> = Vec::new();
    let init = 8;
    for i in 0..init {
        for j in 0..init {
            let s0 = i as f64 / init as f64;
            let s1 = (i + 1) as f64 / init as f64;
            let t0 = j as f64 / init as f64;
            let t1 = (j + 1) as f64 / init as f64;
            stack.push((s0, s1, t0, t1, star.cell_gauss(s0, s1, t0, t1), 0));
        }
    }
    let mut total = 0.0f64;
    let mut residual = 0.0f64;
    let mut cells = 0usize;
    while let Some((s0, s1, t0, t1, coarse, depth)) = stack.pop() {
        cells += 1;
        if cells > 400_000 {
            return Err(CurveError::QuadratureNotConverged(residual.max(1.0)));
        }
        let sm = 0.5 * (s0 + s1);
        let tm = 0.5 * (t0 + t1);
        let fine = star.cell_gauss(s0, sm, t0, tm)
            + star.cell_gauss(sm, s1, t0, tm)
            + star.cell_gauss(s0, sm, tm, t1)
            + star.cell_gauss(sm, s1, tm, t1);
        let err = (fine - coarse).abs();
        if err < QUAD_ABS_TOL * 0.1 || depth >= 24 {
            total += fine;
            if depth >= 24 {
                residual += err;
            }
            continue;
        }
        for (a0, a1, b0, b1) in [
            (s0, sm, t0, tm),
            (sm, s1, t0, tm),
            (s0, sm, tm, t1),
            (sm, s1, tm, t1),
        ] {
            stack.push((a0, a1, b0, b1, star.cell_gauss(a0, a1, b0, b1), depth + 1));
        }
    }
    if residual > QUAD_ABS_TOL * 100.0 {
        return Err(CurveError::QuadratureNotConverged(residual));
    }
    Ok(total)
}

/// Monte Carlo oracle for `sigma_area`: uniform samples over the (s,t)
/// parametrization square with the same Jacobian-weighted integrand.
pub fn sigma_area_monte_carlo(
    curve: &PlaneCurve,
    d: SigmaDensity,
    samples: u64,
    seed: u64,
) -> Result<f64, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let star = StarMap { curve, center: curve.centroid(), density: d };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0f64;
    for _ in 0..samples {
        let s: f64 = rng.gen();
        let t: f64 = rng.gen();
        acc += star.integrand(s, t);
    }
    Ok(acc / samples as f64)
}

// ---------------------------------------------------------------------------
// Boundary integral
// ---------------------------------------------------------------------------

/// Continuously track `√(w(t))` along the curve starting from the principal
/// branch; fails if a phase jump exceeds π/2 between consecutive samples.
fn branch_sqrt(
    w: &[Complex64],
    t_of: impl Fn(usize) -> f64,
) -> Result<Vec<Complex64>, CurveError> {
    let mut out = Vec::with_capacity(w.len());
    let mut prev = w[0].sqrt();
    out.push(prev);
    for (k, &wk) in w.iter().enumerate().skip(1) {
        let mut g = wk.sqrt();
        if (g - prev).norm() > (g + prev).norm() {
            g = -g;
        }
        // Phase-jump rejection.
        let dot = (g * prev.conj()).arg().abs();
        if dot > std::f64::consts::FRAC_PI_2 {
            return Err(CurveError::BranchContinuationFailed(t_of(k)));
        }
        out.push(g);
        prev = g;
    }
    Ok(out)
}

/// σ- or σ′-area via the boundary formulation: Lebesgue area plus square-root
/// lift correction integrals, evaluated by the periodic trapezoid rule with
/// analytic branch continuation.
pub fn area_via_boundary(curve: &PlaneCurve, d: SigmaDensity) -> Result<f64, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let n = 8192 * curve.segments.len();
    let ts: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let gamma: Vec<Complex64> = ts.iter().map(|&t| curve.eval(t)).collect();
    let dgamma: Vec<Complex64> = ts.iter().map(|&t| curve.deriv(t)).collect();
    let lebesgue: f64 = gamma
        .iter()
        .zip(&dgamma)
        .map(|(z, dz)| 0.5 * (z.conj() * dz).im)
        .sum::<f64>()
        / n as f64;
    let correction = match d.variant {
        SigmaVariant::Sigma => {
            // g = √(1 − γ²), g′ = −γγ′/g; correction = ½∮ Im(ḡ g′) dt.
            let w: Vec<Complex64> = gamma.iter().map(|z| Complex64::new(1.0, 0.0) - z * z).collect();
            let g = branch_sqrt(&w, |k| ts[k])?;
            let mut acc = 0.0;
            for k in 0..n {
                let gp = -gamma[k] * dgamma[k] / g[k];
                acc += 0.5 * (g[k].conj() * gp).im;
            }
            acc / n as f64
        }
        SigmaVariant::SigmaPrime => {
            // Per factor: gᵢ = √(γ ± 1), gᵢ′ = γ′/(2gᵢ);
            // correction = ∮ Im(ḡᵢ gᵢ′) dt (the (uᵢ,vᵢ) chart doubles ½).
            let mut acc = 0.0;
            for sign in [1.0, -1.0] {
                let w: Vec<Complex64> = gamma.iter().map(|z| z + sign).collect();
                let g = branch_sqrt(&w, |k| ts[k])?;
                for k in 0..n {
                    let gp = dgamma[k] / (2.0 * g[k]);
                    acc += (g[k].conj() * gp).im;
                }
            }
            acc / n as f64
        }
    };
    Ok(lebesgue + correction)
}

// ---------------------------------------------------------------------------
// Monotonicity constants
// ---------------------------------------------------------------------------

/// Maslov index of the basic disk class: 2(n−1) for the L_C family, 2 for T_C.
pub fn maslov_index(n: u32, family: Family) -> u32 {
    match family {
        Family::LC => 2 * (n - 1),
        Family::TC => 2,
    }
}

/// Monotonicity constant of the torus over a closed simple curve of winding
/// (1,1): enclosed measure divided by the Maslov index.
pub fn tau_of_curve(curve: &PlaneCurve, n: u32, family: Family) -> Result<f64, CurveError> {
    let area = sigma_area(curve, family.density())?;
    Ok(area / maslov_index(n, family) as f64)
}

/// Inverse problem: a closed curve of the given monotonicity constant.
///
/// Uses the confocal-ellipse family `cosh(ρ + iθ)` (foci ±1) and bisects on
/// ρ; the enclosed measure is strictly increasing in ρ and tends to 0 as the
/// ellipse collapses onto [−1, 1], so small τ are reachable.
pub fn curve_of_tau(tau: f64, n: u32, family: Family) -> Result<PlaneCurve, CurveError> {
    if !(tau > 0.0) {
        return Err(CurveError::TauOutOfRange(tau));
    }
    let tau_at = |rho: f64| -> Result<f64, CurveError> {
        tau_of_curve(&PlaneCurve::confocal_ellipse(rho)?, n, family)
    };
    let mut lo = 0.002f64;
    let mut hi = 5.0f64;
    let f_lo = tau_at(lo)?;
    let f_hi = tau_at(hi)?;
    if tau < f_lo || tau > f_hi {
        return Err(CurveError::TauOutOfRange(tau));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let f_mid = tau_at(mid)?;
        if f_mid < tau {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-12 * hi {
            break;
        }
    }
    PlaneCurve::confocal_ellipse(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// SVG plotting
// ---------------------------------------------------------------------------

/// Render the curve (and the critical values ±1) to a standalone SVG string.
pub fn plot_svg(curve: &PlaneCurve) -> String {
    let n = 512 * curve.segments.len();
    let pts: Vec<Complex64> = (0..=n).map(|k| curve.eval(k as f64 / n as f64)).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (-1.5f64, 1.5f64, -1.0f64, 1.0f64);
    for p in &pts {
        xmin = xmin.min(p.re);
        xmax = xmax.max(p.re);
        ymin = ymin.min(p.im);
        ymax = ymax.max(p.im);
    }
    let pad = 0.1 * ((xmax - xmin).max(ymax - ymin));
    xmin -= pad;
    xmax += pad;
    ymin -= pad;
    ymax += pad;
    let w = 640.0;
    let h = w * (ymax - ymin) / (xmax - xmin);
    let sx = |x: f64| (x - xmin) / (xmax - xmin) * w;
    let sy = |y: f64| h - (y - ymin) / (ymax - ymin) * h;
    let mut path = String::new();
    for (k, p) in pts.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        path.push_str(&format!("{}{:.2} {:.2} ", cmd, sx(p.re), sy(p.im)));
    }
    if curve.closed {
        path.push('Z');
    }
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" ",
            "viewBox=\"0 0 {w:.0} {h:.0}\">\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "<path d=\"{path}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n",
            "<circle cx=\"{c1x:.2}\" cy=\"{c1y:.2}\" r=\"4\" fill=\"#d62728\"/>\n",
            "<circle cx=\"{c2x:.2}\" cy=\"{c2y:.2}\" r=\"4\" fill=\"#d62728\"/>\n",
            "</svg>\n"
        ),
        w = w,
        h = h,
        path = path,
        c1x = sx(-1.0),
        c1y = sy(0.0),
        c2x = sx(1.0),
        c2y = sy(0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(cx: f64, cy: f64, r: f64) -> PlaneCurve {
        PlaneCurve::circle(Complex64::new(cx, cy), r).unwrap()
    }

    #[test]
    fn winding_examples() {
        assert_eq!(circle(0.0, 0.0, 3.0).winding_numbers().unwrap(), (1, 1));
        assert_eq!(circle(1.0, 0.0, 0.5).winding_numbers().unwrap(), (0, 1));
        // Clockwise traversal.
        let cw = PlaneCurve::new(
            vec![Segment::CircleArc {
                center: (0.0, 0.0),
                radius: 3.0,
                theta0: 2.0 * std::f64::consts::PI,
                theta1: 0.0,
            }],
            true,
        )
        .unwrap();
        assert_eq!(cw.winding_numbers().unwrap(), (-1, -1));
    }

    #[test]
    fn density_closed_forms() {
        assert!((sigma_density_at(Complex64::new(0.0, 0.0), SigmaDensity::sigma()).unwrap() - 1.0).abs() < 1e-12);
        // z = 2i: 1 + 4/5
        let v = sigma_density_at(Complex64::new(0.0, 2.0), SigmaDensity::sigma()).unwrap();
        assert!((v - 1.8).abs() < 1e-12);
        // z = 0, σ′: 1 + 1/2 + 1/2 = 2
        let v = sigma_density_at(Complex64::new(0.0, 0.0), SigmaDensity::sigma_prime()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn density_matches_oracle() {
        let pts = [
            Complex64::new(0.3, 0.4),
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.5, 1.0),
            Complex64::new(0.9, 0.2),
            Complex64::new(4.0, -3.0),
        ];
        for d in [SigmaDensity::sigma(), SigmaDensity::sigma_prime()] {
            for &z in &pts {
                let closed = sigma_density_at(z, d).unwrap();
                let oracle = sigma_density_oracle(z, d);
                assert!(
                    (closed - oracle).abs() / oracle < 1e-5,
                    "density mismatch at {z}: {closed} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn area_small_disk_mean_value() {
        // area/(πR²) → density at center for small R.
        let c = Complex64::new(0.0, 2.0);
        let r = 1e-3;
        let curve = circle(c.re, c.im, r);
        let area = sigma_area(&curve, SigmaDensity::sigma()).unwrap();
        let dens = sigma_density_at(c, SigmaDensity::sigma()).unwrap();
        assert!((area / (std::f64::consts::PI * r * r) - dens).abs() < 1e-4);
    }

    #[test]
    fn area_vs_monte_carlo() {
        let curve = circle(0.0, 0.0, 2.0);
        let a = sigma_area(&curve, SigmaDensity::sigma()).unwrap();
        let mc = sigma_area_monte_carlo(&curve, SigmaDensity::sigma(), 2_000_000, 0).unwrap();
        assert!((a - mc).abs() / a < 2e-3, "quad {a} vs mc {mc}");
    }

    #[test]
    fn boundary_matches_quadrature() {
        for r in [2.0, 3.0] {
            let curve = circle(0.0, 0.0, r);
            for d in [SigmaDensity::sigma(), SigmaDensity::sigma_prime()] {
                let a = sigma_area(&curve, d).unwrap();
                let b = area_via_boundary(&curve, d).unwrap();
                assert!((a - b).abs() / a < 1e-6, "r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn area_exceeds_lebesgue() {
        let curve = circle(0.0, 0.0, 2.5);
        let leb = curve.lebesgue_area();
        for d in [SigmaDensity::sigma(), SigmaDensity::sigma_prime()] {
            assert!(sigma_area(&curve, d).unwrap() > leb);
        }
    }

    #[test]
    fn tau_round_trip() {
        for tau in [0.5, 1.0] {
            let c = curve_of_tau(tau, 3, Family::LC).unwrap();
            let got = tau_of_curve(&c, 3, Family::LC).unwrap();
            assert!((got - tau).abs() / tau < 1e-6, "tau {tau} vs {got}");
        }
    }

    #[test]
    fn tau_monotone_in_rho() {
        let t1 = tau_of_curve(&PlaneCurve::confocal_ellipse(0.5).unwrap(), 3, Family::TC).unwrap();
        let t2 = tau_of_curve(&PlaneCurve::confocal_ellipse(1.0).unwrap(), 3, Family::TC).unwrap();
        assert!(t1 < t2);
    }

    #[test]
    fn maslov_values() {
        assert_eq!(maslov_index(3, Family::LC), 4);
        assert_eq!(maslov_index(2, Family::LC), 2);
        assert_eq!(maslov_index(3, Family::TC), 2);
    }

    #[test]
    fn simple_flag() {
        assert!(circle(0.0, 0.0, 2.0).is_simple());
        // Figure-eight-ish Fourier curve is self-intersecting.
        let fig8 = PlaneCurve::new(
            vec![Segment::Fourier { coeffs: vec![(1, 2.0, 0.0), (-2, 0.0, 1.5)] }],
            true,
        )
        .unwrap();
        assert!(!fig8.is_simple());
    }

    #[test]
    fn construction_guard() {
        assert!(matches!(
            PlaneCurve::circle(Complex64::new(1.0, 0.0), 2.0),
            Err(CurveError::TooCloseToCritical(_))
        ));
    }

    #[test]
    fn curve_json_roundtrip() {
        let f = CurveFile {
            schema: 1,
            closed: true,
            segments: vec![Segment::CircleArc {
                center: (0.0, 0.0),
                radius: 2.0,
                theta0: 0.0,
                theta1: 6.283185307179586,
            }],
        };
        let s = serde_json::to_string(&f).unwrap();
        let g: CurveFile = serde_json::from_str(&s).unwrap();
        assert_eq!(g.schema, 1);
        let c = PlaneCurve::new(g.segments, g.closed).unwrap();
        assert_eq!(c.winding_numbers().unwrap(), (1, 1));
    }

    #[test]
    fn svg_emission() {
        let svg = plot_svg(&circle(0.0, 0.0, 2.0));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("path"));
    }
}
