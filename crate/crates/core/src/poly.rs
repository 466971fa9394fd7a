//! Univariate polynomials over the Novikov field: characteristic
//! polynomials, and root finding by the Newton-polygon / Puiseux method
//! with valuation-order Newton refinement.

use crate::linalg::{prune_rel, NovMatrix};
use crate::novikov::{Exp, NovikovNum};
use num_complex::Complex64;
use num_traits::Zero;

/// Dense polynomial `c[0] + c[1] x + … + c[d] x^d`.
#[derive(Debug, Clone)]
pub struct NovPoly {
    pub coeffs: Vec<NovikovNum>,
}

impl NovPoly {
    pub fn new(coeffs: Vec<NovikovNum>) -> Self {
        let mut p = NovPoly { coeffs };
        p.trim();
        p
    }

    pub fn monomial_sub_const(alpha: &NovikovNum) -> Self {
        // x - α
        Self::new(vec![alpha.neg(), NovikovNum::one()])
    }

    fn trim(&mut self) {
        let scale = self.scale_mag().max(1.0);
        while self.coeffs.len() > 1 {
            let last = self.coeffs.last().unwrap();
            if last.leading_mag() > 1e-10 * scale {
                break;
            }
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(NovikovNum::zero());
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale_mag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.leading_mag()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &NovikovNum) -> NovikovNum {
        let mut acc = NovikovNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![NovikovNum::zero()]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(Complex64::new(i as f64, 0.0)))
            .collect();
        Self::new(coeffs)
    }

    /// Taylor shift: returns `q(y) = p(a + y)`.
    pub fn shift(&self, a: &NovikovNum) -> Self {
        let d = self.degree();
        let mut out = vec![NovikovNum::zero(); d + 1];
        // Horner on p while tracking the expansion in y: repeatedly
        // out = out * (a + y) + c, done coefficient-wise.
        for c in self.coeffs.iter().rev() {
            for k in (1..=d).rev() {
                let v = out[k].mul(a).add(&out[k - 1]);
                out[k] = v;
            }
            out[0] = out[0].mul(a).add(c);
        }
        // The loop above multiplies by (a + y) with the y-part implemented
        // by the k-1 shift; verify degree bookkeeping via trim.
        Self::new(out)
    }

    /// Characteristic polynomial of a square matrix by Faddeev–LeVerrier.
    /// Returns the monic polynomial `det(x·I − A)`.
    pub fn charpoly(a: &NovMatrix) -> Self {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut coeffs = vec![NovikovNum::zero(); n + 1];
        coeffs[n] = NovikovNum::one();
        let mut m = NovMatrix::identity(n); // M_0
        for k in 1..=n {
            let am = a.mul(&m);
            let tr = trace(&am);
            let c = tr.scale(Complex64::new(-1.0 / k as f64, 0.0));
            coeffs[n - k] = c.clone();
            let mut next = am;
            for i in 0..n {
                let v = next.get(i, i).add(&c);
                next.set(i, i, v);
            }
            m = next;
        }
        let scale = coeffs.iter().map(|c| c.leading_mag()).fold(0.0, f64::max);
        Self::new(coeffs.into_iter().map(|c| prune_rel(&c, scale)).collect())
    }

    /// All roots with multiplicity, to the given exponent precision.
    ///
    /// Newton polygon → residual complex polynomial per slope →
    /// valuation-order Newton refinement; clustered residual roots recurse
    /// by Taylor shift (Puiseux). Roots indistinguishable within the
    /// precision window are merged with summed multiplicity.
    pub fn roots(&self, precision: Exp) -> Vec<(NovikovNum, usize)> {
        let mut out = Vec::new();
        self.roots_rec(precision, 8, &mut out);
        merge_roots(out, precision)
    }

    fn roots_rec(&self, precision: Exp, depth: usize, out: &mut Vec<(NovikovNum, usize)>) {
        let scale = self.scale_mag().max(1e-300);
        let tol = 1e-10 * scale;
        // Strip zero roots.
        let mut low = 0usize;
        while low < self.coeffs.len() && self.coeffs[low].leading_mag() <= tol {
            low += 1;
        }
        if low >= self.coeffs.len() {
            return; // zero polynomial
        }
        if low > 0 {
            out.push((NovikovNum::zero(), low));
        }
        let p = NovPoly::new(self.coeffs[low..].to_vec());
        if p.degree() == 0 {
            return;
        }
        // Newton polygon: lower hull of (i, val(c_i)).
        let pts: Vec<(usize, Exp)> = p
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.leading_mag() > tol)
            .map(|(i, c)| (i, c.val().unwrap()))
            .collect();
        let hull = lower_hull(&pts);
        for w in hull.windows(2) {
            let (i0, v0) = w[0];
            let (i1, v1) = w[1];
            let mu = (v0 - v1) / Exp::from_integer((i1 - i0) as i128); // root valuation
            // Residual polynomial in the residue field.
            let mut res = vec![Complex64::zero(); i1 - i0 + 1];
            for (i, c) in p.coeffs.iter().enumerate() {
                if i < i0 || i > i1 || c.leading_mag() <= tol {
                    continue;
                }
                let expect = v0 - mu * Exp::from_integer((i - i0) as i128);
                if c.val().unwrap() == expect {
                    res[i - i0] = c.leading().unwrap().1;
                }
            }
            for (z0, m) in complex_roots_clustered(&res) {
                let lead = NovikovNum::monomial(mu, z0);
                if m == 1 {
                    out.push((p.newton_refine(lead, precision), 1));
                } else if depth == 0 {
                    out.push((lead, m));
                } else {
                    // Cluster of m roots sharing the leading term: shift and
                    // keep only the branches that gained valuation.
                    let q = p.shift(&lead);
                    let mut sub = Vec::new();
                    q.roots_rec(precision, depth - 1, &mut sub);
                    let mut taken = 0usize;
                    for (r, k) in sub {
                        let v = r.val();
                        if taken < m && v.map_or(true, |v| v > mu) {
                            let take = k.min(m - taken);
                            out.push((lead.add(&r).with_cutoff(Some(precision)), take));
                            taken += take;
                        }
                    }
                    if taken < m {
                        out.push((lead, m - taken));
                    }
                }
            }
        }
    }

    fn newton_refine(&self, mut x: NovikovNum, precision: Exp) -> NovikovNum {
        let dp = self.derivative();
        x = x.with_cutoff(Some(precision));
        for _ in 0..64 {
            let fx = self.eval(&x);
            if fx.is_zero() {
                break;
            }
            let dfx = dp.eval(&x);
            let Ok(inv) = dfx.invert() else { break };
            let step = fx.mul(&inv);
            let done = match step.val() {
                None => true,
                Some(v) => v >= precision,
            };
            x = x.sub(&step).with_cutoff(Some(precision));
            if done {
                break;
            }
        }
        x
    }
}

fn trace(m: &NovMatrix) -> NovikovNum {
    let mut acc = NovikovNum::zero();
    for i in 0..m.rows {
        acc = acc.add(m.get(i, i));
    }
    acc
}

/// Lower convex hull of points with strictly increasing x.
fn lower_hull(pts: &[(usize, Exp)]) -> Vec<(usize, Exp)> {
    let mut hull: Vec<(usize, Exp)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Keep b only if it is strictly below segment a–p.
            let lhs = (b.1 - a.1) * Exp::from_integer((p.0 - a.0) as i128);
            let rhs = (p.1 - a.1) * Exp::from_integer((b.0 - a.0) as i128);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Roots of a complex polynomial by Durand–Kerner, clustered into
/// (root, multiplicity) pairs. Each cluster center is polished by Newton
/// iteration on the (m−1)-th derivative, where the root is simple; this
/// recovers full precision lost to multiple-root conditioning.
pub fn complex_roots_clustered(coeffs: &[Complex64]) -> Vec<(Complex64, usize)> {
    let roots = complex_roots(coeffs);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    // A root of multiplicity m is only located to ~eps^{1/m} by the global
    // iteration, so naive fixed-tolerance clustering falsely splits multiple
    // roots. Strategy: fine-cluster first, then hierarchically merge nearby
    // clusters, accepting a merge only when the jointly-polished center
    // annihilates all derivatives below the joint multiplicity down to
    // evaluation-noise level.
    let mut clusters: Vec<(Complex64, usize)> = cluster(&roots, 1e-7 * scale)
        .into_iter()
        .map(|(z, k)| (polish(coeffs, z, k), k))
        .collect();
    // A merged pair may itself be a fragment of a higher-multiplicity root,
    // so gate candidates by the noise floor of the full degree; the
    // verification step rejects spurious merges.
    let deg = roots.len().max(1);
    let tol = 50.0 * scale * 1e-13f64.powf(1.0 / deg as f64);
    'merge: loop {
        // Candidate pairs by distance.
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let d = (clusters[i].0 - clusters[j].0).norm();
                if d < tol {
                    pairs.push((i, j, d));
                }
            }
        }
        pairs.sort_by(|a, b| a.2.total_cmp(&b.2));
        for (i, j, _) in pairs {
            let m = clusters[i].1 + clusters[j].1;
            let mid = (clusters[i].0 * clusters[i].1 as f64
                + clusters[j].0 * clusters[j].1 as f64)
                / m as f64;
            let z = polish(coeffs, mid, m);
            if derivatives_vanish(coeffs, z, m) {
                clusters[i] = (z, m);
                clusters.remove(j);
                continue 'merge;
            }
        }
        break;
    }
    clusters
}

/// All derivatives p^{(j)}, j < m, vanish at z within the floating-point
/// evaluation noise of the respective derivative polynomial.
fn derivatives_vanish(coeffs: &[Complex64], z: Complex64, m: usize) -> bool {
    let mut p = coeffs.to_vec();
    for _ in 0..m {
        let noise: f64 = p
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * z.norm().max(1e-6).powi(i as i32))
            .sum();
        let pv = complex_eval(&p, z).norm();
        if pv > 1e-10 * noise.max(1e-300) {
            return false;
        }
        p = complex_derivative(&p);
    }
    true
}

fn cluster(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in roots {
        if let Some((c, k)) = clusters
            .iter_mut()
            .find(|(c, k)| (*c / (*k as f64) - z).norm() < tol)
        {
            *c += z;
            *k += 1;
        } else {
            clusters.push((z, 1));
        }
    }
    clusters.into_iter().map(|(c, k)| (c / k as f64, k)).collect()
}

/// Newton-polish a root of assumed multiplicity `k`: iterate on the
/// (k−1)-th derivative, where the root is simple.
fn polish(coeffs: &[Complex64], mut z: Complex64, k: usize) -> Complex64 {
    let mut p = coeffs.to_vec();
    for _ in 1..k {
        p = complex_derivative(&p);
    }
    let dp = complex_derivative(&p);
    // Near a root of multiplicity > k the residual bottoms out at evaluation
    // noise and further Newton steps random-walk; keep the best iterate seen.
    let mut best = z;
    let mut best_res = complex_eval(&p, z).norm();
    for _ in 0..120 {
        let f = complex_eval(&p, z);
        let d = complex_eval(&dp, z);
        if d.norm() < 1e-300 {
            break;
        }
        let step = f / d;
        z -= step;
        let res = complex_eval(&p, z).norm();
        if res < best_res {
            best_res = res;
            best = z;
        }
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    best
}

fn complex_derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

fn complex_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All roots of `c[0] + c[1] z + … + c[d] z^d` (Durand–Kerner iteration).
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() < 1e-14 {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return vec![];
    }
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Initial guesses on a non-symmetric circle.
    let r = 1.0
        + monic[..d]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r.powf(0.8), 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    let eval = |zs: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for cc in monic.iter().rev() {
            acc = acc * zs + cc;
        }
        acc
    };
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-13 * r.max(1.0) {
            break;
        }
    }
    z
}

fn merge_roots(roots: Vec<(NovikovNum, usize)>, precision: Exp) -> Vec<(NovikovNum, usize)> {
    // Roots whose difference has valuation beyond (precision − 4) cannot be
    // distinguished at working precision; merge toward larger multiplicity.
    let merge_val = precision - Exp::from_integer(4);
    let mut out: Vec<(NovikovNum, usize)> = Vec::new();
    for (r, k) in roots {
        let mut merged = false;
        for (s, m) in out.iter_mut() {
            let d = s.sub(&r);
            let indist = match d.val() {
                None => true,
                Some(v) => v > merge_val,
            };
            if indist {
                *m += k;
                merged = true;
                break;
            }
        }
        if !merged {
            out.push((r, k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov;

    fn prec() -> Exp {
        Exp::from_integer(24)
    }

    #[test]
    fn shift_is_composition() {
        // p(x) = x^2 + 3x + 1, p(2 + y) = y^2 + 7y + 11.
        let p = NovPoly::new(vec![
            NovikovNum::from_real(1.0),
            NovikovNum::from_real(3.0),
            NovikovNum::from_real(1.0),
        ]);
        let q = p.shift(&NovikovNum::from_real(2.0));
        assert!(q.coeffs[0].approx_eq(&NovikovNum::from_real(11.0), 1e-8));
        assert!(q.coeffs[1].approx_eq(&NovikovNum::from_real(7.0), 1e-8));
        assert!(q.coeffs[2].approx_eq(&NovikovNum::from_real(1.0), 1e-8));
    }

    #[test]
    fn charpoly_of_diag() {
        let t = NovikovNum::t_pow(1, 1);
        let mut m = NovMatrix::zeros(2, 2);
        m.set(0, 0, NovikovNum::from_real(2.0));
        m.set(1, 1, t.clone());
        let p = NovPoly::charpoly(&m);
        // (x−2)(x−T) = x² − (2+T)x + 2T
        assert_eq!(p.degree(), 2);
        let want1 = NovikovNum::from_real(-2.0).sub(&t);
        assert!(p.coeffs[1].approx_eq(&want1, 1e-8));
        assert!(p.coeffs[0].approx_eq(&t.scale(num_complex::Complex64::new(2.0, 0.0)), 1e-8));
    }

    #[test]
    fn roots_distinct_valuations() {
        // (x − T⁻¹)(x − 3) : roots at valuations −1 and 0.
        let a = NovikovNum::t_pow(-1, 1);
        let b = NovikovNum::from_real(3.0);
        let p = NovPoly::new(vec![
            a.mul(&b),
            a.add(&b).neg(),
            NovikovNum::one(),
        ]);
        let roots = p.roots(prec());
        assert_eq!(roots.len(), 2);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            assert!(r.approx_eq(&a, 1e-6) || r.approx_eq(&b, 1e-6));
        }
    }

    #[test]
    fn roots_same_valuation_distinct_leading() {
        // (x − 1)(x − 2)(x + T): three roots, two at valuation 0.
        let one = NovikovNum::one();
        let two = NovikovNum::from_real(2.0);
        let mt = NovikovNum::t_pow(1, 1).neg();
        let p = NovPoly::monomial_sub_const(&one);
        let p = mul_poly(&p, &NovPoly::monomial_sub_const(&two));
        let p = mul_poly(&p, &NovPoly::monomial_sub_const(&mt));
        let roots = p.roots(prec());
        assert_eq!(roots.iter().map(|(_, m)| m).sum::<usize>(), 3);
        assert!(roots.iter().any(|(r, _)| r.approx_eq(&one, 1e-6)));
        assert!(roots.iter().any(|(r, _)| r.approx_eq(&two, 1e-6)));
        assert!(roots.iter().any(|(r, _)| r.approx_eq(&mt, 1e-6)));
    }

    #[test]
    fn double_root_detected() {
        // (x − (1+T))² : one root of multiplicity 2.
        let a = NovikovNum::one().add(&NovikovNum::t_pow(1, 1));
        let f = NovPoly::monomial_sub_const(&a);
        let p = mul_poly(&f, &f);
        let roots = p.roots(prec());
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1, 2);
        assert!(roots[0].0.approx_eq(&a, 1e-5));
    }

    #[test]
    fn cluster_splits_after_shift() {
        // (x − 1)(x − 1 − T): same leading term, distinct roots.
        let a = NovikovNum::one();
        let b = NovikovNum::one().add(&NovikovNum::t_pow(1, 1));
        let p = mul_poly(&NovPoly::monomial_sub_const(&a), &NovPoly::monomial_sub_const(&b));
        let roots = p.roots(prec());
        assert_eq!(roots.iter().map(|(_, m)| m).sum::<usize>(), 2);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|(r, _)| r.approx_eq(&a, 1e-6)));
        assert!(roots.iter().any(|(r, _)| r.approx_eq(&b, 1e-6)));
    }

    #[test]
    fn zero_roots_counted() {
        // x²(x − 5)
        let p = NovPoly::new(vec![
            NovikovNum::zero(),
            NovikovNum::zero(),
            NovikovNum::from_real(-5.0),
            NovikovNum::one(),
        ]);
        let roots = p.roots(prec());
        let zero_mult: usize = roots.iter().filter(|(r, _)| r.is_zero()).map(|(_, m)| *m).sum();
        assert_eq!(zero_mult, 2);
        assert!(roots
            .iter()
            .any(|(r, _)| r.approx_eq(&NovikovNum::from_real(5.0), novikov::COEFF_REL_TOL)));
    }

    pub fn mul_poly(a: &NovPoly, b: &NovPoly) -> NovPoly {
        let mut out = vec![NovikovNum::zero(); a.degree() + b.degree() + 1];
        for (i, ca) in a.coeffs.iter().enumerate() {
            for (j, cb) in b.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&ca.mul(cb));
            }
        }
        NovPoly::new(out)
    }
}
