//! Dense matrices over the Novikov field.
//!
//! Elimination pivots by least valuation first and largest leading
//! coefficient second, which is the numerically meaningful pivot choice over
//! a valued field: the pivot dominates every entry it eliminates.

use crate::novikov::{Exp, NovikovNum};
use num_complex::Complex64;

/// Leading coefficients smaller than this (relative to the working scale)
/// are treated as numerical zeros produced by cancellation.
pub const ZERO_REL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NovMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<NovikovNum>,
}

impl NovMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        NovMatrix { rows, cols, data: vec![NovikovNum::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, NovikovNum::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NovikovNum) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        NovMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<NovikovNum>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        NovMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &NovikovNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NovikovNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[NovikovNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&NovikovNum) -> NovikovNum) -> Self {
        NovMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &NovikovNum) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = NovikovNum::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    /// Apply to a row vector: `v ↦ v · self`.
    pub fn apply_row(&self, v: &[NovikovNum]) -> Vec<NovikovNum> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = NovikovNum::zero();
                for (i, vi) in v.iter().enumerate() {
                    acc = acc.add(&vi.mul(self.get(i, j)));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        let s = self.scale_mag().max(1.0);
        self.data.iter().all(|x| x.leading_mag() <= ZERO_REL * s)
    }

    /// Largest leading-coefficient magnitude over all entries.
    pub fn scale_mag(&self) -> f64 {
        self.data.iter().map(|x| x.leading_mag()).fold(0.0, f64::max)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                NovikovNum::zero()
            }
        })
    }

    /// Reduced row echelon form. Returns the reduced matrix and the pivot
    /// columns in order.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = m.scale_mag().max(1.0);
        let zero_tol = ZERO_REL * scale;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r >= m.rows {
                break;
            }
            // Pivot choice: least valuation, then largest leading magnitude.
            let mut best: Option<(usize, Exp, f64)> = None;
            for i in r..m.rows {
                let e = m.get(i, col);
                let mag = e.leading_mag();
                if mag <= zero_tol {
                    continue;
                }
                let v = e.val().unwrap();
                let better = match &best {
                    None => true,
                    Some((_, bv, bm)) => v < *bv || (v == *bv && mag > *bm),
                };
                if better {
                    best = Some((i, v, mag));
                }
            }
            let Some((pi, _, _)) = best else { continue };
            m.swap_rows(r, pi);
            let inv = m.get(r, col).invert().expect("pivot invertible");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, prune_rel(&v, scale));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if factor.leading_mag() <= zero_tol * 1e-2 {
                    continue;
                }
                for j in 0..m.cols {
                    let prod = factor.mul(m.get(r, j));
                    let v = m.get(i, j).sub(&prod);
                    // A cancellation that raises the valuation by many orders
                    // leaves only roundoff residue (float error amplified by
                    // growing series coefficients); genuine eliminations move
                    // the leading exponent by a few orders at most.
                    let vin = match (m.get(i, j).val(), prod.val()) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                    let v = match (v.val(), vin) {
                        (Some(out), Some(inn)) if out - inn >= Exp::from_integer(10) => {
                            v.with_cutoff(Some(out))
                        }
                        _ => v,
                    };
                    m.set(i, j, prune_rel(&v, scale));
                }
                m.set(i, col, NovikovNum::zero());
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self · x = 0}` (column vectors,
    /// returned as rows of the result).
    pub fn kernel_basis(&self) -> Vec<Vec<NovikovNum>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![NovikovNum::zero(); self.cols];
            v[fc] = NovikovNum::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(prow, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left kernel `{v : v · self = 0}` (row vectors).
    pub fn left_kernel_basis(&self) -> Vec<Vec<NovikovNum>> {
        self.transpose().kernel_basis()
    }

    /// Solve `x · self = b` for a row vector `x`; `None` if inconsistent.
    pub fn solve_row(&self, b: &[NovikovNum]) -> Option<Vec<NovikovNum>> {
        // x · A = b  ⇔  Aᵀ xᵀ = bᵀ.
        let at = self.transpose();
        let bt = NovMatrix::from_fn(at.rows, 1, |i, _| b[i].clone());
        let aug = at.hstack(&bt);
        let (r, pivots) = aug.rref();
        if pivots.contains(&at.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![NovikovNum::zero(); self.rows];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(prow, at.cols).clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Random matrix with entries of the given term count and valuation range.
    pub fn random<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize, val_min: i128) -> Self {
        Self::from_fn(rows, cols, |_, _| NovikovNum::random(rng, 2, val_min, 4, 2))
    }

    /// Random invertible matrix: identity plus a random perturbation,
    /// retried until the rank is full.
    pub fn random_invertible<R: rand::Rng>(rng: &mut R, n: usize) -> Self {
        loop {
            let p = Self::from_fn(n, n, |_, _| {
                if rng.gen_bool(0.6) {
                    NovikovNum::from_complex(Complex64::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ))
                } else {
                    NovikovNum::zero()
                }
            });
            let m = Self::identity(n).add(&p);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Inverse of a square matrix; `None` if singular at working precision.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

/// Drop coefficients that are negligible relative to a working scale;
/// keeps exact zeros exact after catastrophic cancellation.
pub fn prune_rel(x: &NovikovNum, scale: f64) -> NovikovNum {
    let tol = ZERO_REL * 1e-2 * scale.max(1.0);
    let terms: Vec<_> = x
        .terms()
        .iter()
        .copied()
        .filter(|(_, c)| c.norm() > tol)
        .collect();
    NovikovNum::from_terms(terms, x.cutoff())
}
