//! Finite-dimensional ℤ/2-graded right modules over 𝕂[u] with deg u = 1−n:
//! construction, Jordan decomposition over the Novikov field, Ext via the
//! two-term Koszul/Sylvester complex, cones and split-generation.
//!
//! Modules are right modules throughout; a vector is a row and u acts by
//! `v ↦ v·U`, so the "transposed" Jordan and companion matrices below match
//! their usual displays verbatim.

use crate::linalg::{NovMatrix, ZERO_REL};
use crate::novikov::{Exp, NovikovNum};
use crate::poly::NovPoly;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KuError {
    #[error("u-action matrix dimensions are inconsistent with the grading")]
    BadDimensions,
    #[error("u-action does not respect the parity forced by n = {0}")]
    BadParity(u32),
    #[error("modules are defined over different n ({0} vs {1})")]
    MixedN(u32, u32),
    #[error("eigenvalue clusters unresolvable at working precision")]
    IllConditioned,
    #[error("map is not a module homomorphism")]
    NotAHomomorphism,
    #[error("operation requires a nonzero module")]
    NonzeroModuleRequired,
}

/// ℤ/2-graded right 𝕂[u]-module. Basis vectors 0..dim_even are even,
/// dim_even..dim_even+dim_odd are odd; `u` is the full square matrix in that
/// basis. When n is odd u preserves parity (block diagonal); when n is even
/// u swaps parity (block anti-diagonal).
#[derive(Debug, Clone)]
pub struct GradedKuModule {
    pub n: u32,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub u: NovMatrix,
}

impl GradedKuModule {
    pub fn new(n: u32, dim_even: usize, dim_odd: usize, u: NovMatrix) -> Result<Self, KuError> {
        let d = dim_even + dim_odd;
        if u.rows != d || u.cols != d {
            return Err(KuError::BadDimensions);
        }
        let m = GradedKuModule { n, dim_even, dim_odd, u };
        let scale = m.u.scale_mag().max(1.0);
        for i in 0..d {
            for j in 0..d {
                let same_par = m.parity(i) == m.parity(j);
                let allowed = if m.u_parity() == 0 { same_par } else { !same_par };
                if !allowed && m.u.get(i, j).leading_mag() > ZERO_REL * scale {
                    return Err(KuError::BadParity(n));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim_even + self.dim_odd
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Parity of the basis vector at `i` (0 = even, 1 = odd).
    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.dim_even)
    }

    /// Parity of the operator u: 0 when n is odd, 1 when n is even.
    pub fn u_parity(&self) -> u8 {
        u8::from(self.n % 2 == 0)
    }

    /// Block of u acting within the even part (n odd).
    pub fn u_even(&self) -> NovMatrix {
        NovMatrix::from_fn(self.dim_even, self.dim_even, |i, j| self.u.get(i, j).clone())
    }

    /// Block of u acting within the odd part (n odd).
    pub fn u_odd(&self) -> NovMatrix {
        let de = self.dim_even;
        NovMatrix::from_fn(self.dim_odd, self.dim_odd, |i, j| self.u.get(de + i, de + j).clone())
    }

    /// Block odd→even of u (n even): rows indexed by odd basis.
    pub fn r_mat(&self) -> NovMatrix {
        let de = self.dim_even;
        NovMatrix::from_fn(self.dim_odd, self.dim_even, |i, j| self.u.get(de + i, j).clone())
    }

    /// Block even→odd of u (n even): rows indexed by even basis.
    pub fn s_mat(&self) -> NovMatrix {
        let de = self.dim_even;
        NovMatrix::from_fn(self.dim_even, self.dim_odd, |i, j| self.u.get(i, de + j).clone())
    }

    /// Random module for stress tests: the parity-allowed entries of u are
    /// random Novikov numbers with valuation ≥ 0 (denominator 2).
    pub fn random<R: rand::Rng>(n: u32, dim_even: usize, dim_odd: usize, rng: &mut R) -> Self {
        let d = dim_even + dim_odd;
        let u_par = u8::from(n % 2 == 0);
        let u = NovMatrix::from_fn(d, d, |i, j| {
            let same_par = (i >= dim_even) == (j >= dim_even);
            let allowed = if u_par == 0 { same_par } else { !same_par };
            if allowed {
                // Cap the valuation support so downstream arithmetic (char-
                // polys, kernels) does not accumulate unbounded tails.
                NovikovNum::random(rng, 2, 0, 3, 2).with_cutoff(Some(Exp::from_integer(16)))
            } else {
                NovikovNum::zero()
            }
        });
        GradedKuModule::new(n, dim_even, dim_odd, u).expect("parity pattern is valid")
    }

    /// Action of u² restricted to the even part.
    pub fn u_squared_even(&self) -> NovMatrix {
        let uu = self.u.mul(&self.u);
        NovMatrix::from_fn(self.dim_even, self.dim_even, |i, j| uu.get(i, j).clone())
    }

    /// Grading shift [1]: swaps even and odd.
    pub fn shift(&self) -> Self {
        let d = self.dim();
        let old = |i: usize| -> usize {
            if i < self.dim_odd {
                self.dim_even + i
            } else {
                i - self.dim_odd
            }
        };
        let u = NovMatrix::from_fn(d, d, |i, j| self.u.get(old(i), old(j)).clone());
        GradedKuModule { n: self.n, dim_even: self.dim_odd, dim_odd: self.dim_even, u }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, KuError> {
        if self.n != other.n {
            return Err(KuError::MixedN(self.n, other.n));
        }
        let de = self.dim_even + other.dim_even;
        let dod = self.dim_odd + other.dim_odd;
        // Map combined index → (which module, its index).
        let locate = |i: usize| -> (bool, usize) {
            if i < self.dim_even {
                (false, i)
            } else if i < de {
                (true, i - self.dim_even)
            } else if i < de + self.dim_odd {
                (false, self.dim_even + (i - de))
            } else {
                (true, other.dim_even + (i - de - self.dim_odd))
            }
        };
        let u = NovMatrix::from_fn(de + dod, de + dod, |i, j| {
            let (bi, ii) = locate(i);
            let (bj, jj) = locate(j);
            if bi != bj {
                NovikovNum::zero()
            } else if bi {
                other.u.get(ii, jj).clone()
            } else {
                self.u.get(ii, jj).clone()
            }
        });
        GradedKuModule::new(self.n, de, dod, u)
    }
}

/// The simple module S_α: one-dimensional, u acts by α. Requires n odd.
pub fn make_s(n: u32, alpha: &NovikovNum, parity: u8) -> GradedKuModule {
    assert!(n % 2 == 1, "S_alpha exists for odd n");
    let mut u = NovMatrix::zeros(1, 1);
    u.set(0, 0, alpha.clone());
    let (de, dod) = if parity == 0 { (1, 0) } else { (0, 1) };
    GradedKuModule { n, dim_even: de, dim_odd: dod, u }
}

/// The module S̃_α for even n: dims (1,1), u = [[0,1],[α,0]]
/// (e·u = o, o·u = α·e).
pub fn make_s_tilde(n: u32, alpha: &NovikovNum) -> GradedKuModule {
    assert!(n % 2 == 0, "S-tilde exists for even n");
    let mut u = NovMatrix::zeros(2, 2);
    u.set(0, 1, NovikovNum::one());
    u.set(1, 0, alpha.clone());
    GradedKuModule { n, dim_even: 1, dim_odd: 1, u }
}

/// The transposed Jordan module M_α^k: u = α on the diagonal with ones on
/// the subdiagonal, i.e. e_i·u = α e_i + e_{i−1}. Requires n odd.
pub fn make_m(n: u32, alpha: &NovikovNum, k: usize, parity: u8) -> GradedKuModule {
    assert!(n % 2 == 1 && k >= 1);
    let mut u = NovMatrix::zeros(k, k);
    for i in 0..k {
        u.set(i, i, alpha.clone());
        if i > 0 {
            u.set(i, i - 1, NovikovNum::one());
        }
    }
    let (de, dod) = if parity == 0 { (k, 0) } else { (0, k) };
    GradedKuModule { n, dim_even: de, dim_odd: dod, u }
}

// ---------------------------------------------------------------------------
// Jordan decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanBlock {
    pub alpha: NovikovNum,
    pub size: usize,
    /// Parity of the block's home summand (for n even: always 0, blocks of
    /// the u²-action on the even part with paired odd bases).
    pub parity: u8,
}

#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    pub n: u32,
    pub blocks: Vec<JordanBlock>,
    /// Leading magnitude of `Q·U − J·Q` over the found chain basis Q,
    /// relative to the matrix scale.
    pub residual: f64,
}

impl JordanDecomposition {
    /// Normal-form module with the same block multiset.
    pub fn reconstruct(&self) -> GradedKuModule {
        if self.n % 2 == 1 {
            let mut acc: Option<GradedKuModule> = None;
            for b in &self.blocks {
                let m = make_m(self.n, &b.alpha, b.size, b.parity);
                acc = Some(match acc {
                    None => m,
                    Some(a) => a.direct_sum(&m).unwrap(),
                });
            }
            acc.unwrap_or(GradedKuModule {
                n: self.n,
                dim_even: 0,
                dim_odd: 0,
                u: NovMatrix::zeros(0, 0),
            })
        } else {
            // Jordan blocks of u² of size k pair even/odd bases; realize each
            // as the 2k-dimensional module with u=[[0,I],[J_α^k,0]].
            let mut acc: Option<GradedKuModule> = None;
            for b in &self.blocks {
                let k = b.size;
                let mut u = NovMatrix::zeros(2 * k, 2 * k);
                for i in 0..k {
                    u.set(i, k + i, NovikovNum::one());
                    u.set(k + i, i, b.alpha.clone());
                    if i > 0 {
                        u.set(k + i, i - 1, NovikovNum::one());
                    }
                }
                let m = GradedKuModule { n: self.n, dim_even: k, dim_odd: k, u };
                acc = Some(match acc {
                    None => m,
                    Some(a) => a.direct_sum(&m).unwrap(),
                });
            }
            acc.unwrap_or(GradedKuModule {
                n: self.n,
                dim_even: 0,
                dim_odd: 0,
                u: NovMatrix::zeros(0, 0),
            })
        }
    }

    /// Multiset of (eigenvalue-as-text to merged precision, size, parity),
    /// sorted, for display.
    pub fn block_signature(&self) -> Vec<(String, usize, u8)> {
        let mut sig: Vec<(String, usize, u8)> = self
            .blocks
            .iter()
            .map(|b| (format!("{}", b.alpha.with_cutoff(Some(Exp::from_integer(8)))), b.size, b.parity))
            .collect();
        sig.sort();
        sig
    }

    /// Same block multiset as `other`, with eigenvalues compared to
    /// coefficient tolerance (greedy matching).
    pub fn same_blocks(&self, other: &JordanDecomposition) -> bool {
        if self.blocks.len() != other.blocks.len() {
            return false;
        }
        let mut used = vec![false; other.blocks.len()];
        'outer: for b in &self.blocks {
            for (i, c) in other.blocks.iter().enumerate() {
                if !used[i]
                    && b.size == c.size
                    && b.parity == c.parity
                    && b.alpha.approx_eq(&c.alpha, 1e-6)
                {
                    used[i] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

/// Eigenvalues and Jordan structure of the u-action (n odd, per parity) or
/// of the u²-action on the even part (n even).
pub fn jordan_decompose(m: &GradedKuModule) -> Result<JordanDecomposition, KuError> {
    let mut blocks = Vec::new();
    let mut residual = 0.0f64;
    if m.n % 2 == 1 {
        for (mat, par) in [(m.u_even(), 0u8), (m.u_odd(), 1u8)] {
            if mat.rows == 0 {
                continue;
            }
            let (mut b, r) = jordan_of_matrix(&mat, par)?;
            blocks.append(&mut b);
            residual = residual.max(r);
        }
    } else {
        let mat = m.u_squared_even();
        if mat.rows > 0 {
            let (mut b, r) = jordan_of_matrix(&mat, 0)?;
            blocks.append(&mut b);
            residual = residual.max(r);
        }
    }
    Ok(JordanDecomposition { n: m.n, blocks, residual })
}

/// Working exponent precision for eigenvalue computations.
fn working_precision(mat: &NovMatrix) -> Exp {
    let mut minval = Exp::from_integer(0);
    for i in 0..mat.rows {
        for j in 0..mat.cols {
            if let Some(v) = mat.get(i, j).val() {
                minval = minval.min(v);
            }
        }
    }
    // Roots have valuation ≥ minval (Newton polygon of the characteristic
    // polynomial); keep ~28 orders past that.
    Exp::from_integer(28) + minval
}

fn jordan_of_matrix(a: &NovMatrix, parity: u8) -> Result<(Vec<JordanBlock>, f64), KuError> {
    let dim = a.rows;
    let prec = working_precision(a);
    let charpoly = NovPoly::charpoly(a);
    let roots = charpoly.roots(prec + Exp::from_integer(4));
    let found: usize = roots.iter().map(|(_, k)| k).sum();
    if found != dim {
        return Err(KuError::IllConditioned);
    }
    let mut blocks = Vec::new();
    let mut q_rows: Vec<Vec<NovikovNum>> = Vec::new();
    let mut j_diag: Vec<(NovikovNum, usize)> = Vec::new();
    for (alpha, mult) in &roots {
        // N = A − αI; kernel dims of powers give block counts.
        let mut n_mat = a.clone();
        for i in 0..dim {
            n_mat.set(i, i, a.get(i, i).sub(alpha));
        }
        // Powers of N lose relative precision: N is accurate to O(T^prec), so
        // N^j is only accurate to O(T^{prec + (j−1)·minval}). Truncate each
        // power there so that truncation residue beyond the accurate range is
        // not mistaken for rank.
        let minval = (prec - Exp::from_integer(28)).min(Exp::from_integer(0));
        let cap = |j: usize| Some(prec + Exp::from_integer(j as i128 - 1) * minval);
        let mut d = vec![0usize]; // d[j] = dim ker N^j (row action)
        let mut p = NovMatrix::identity(dim);
        loop {
            p = p.mul(&n_mat).map(|x| x.with_cutoff(cap(d.len())));
            let dj = dim - p.rank();
            d.push(dj);
            if dj >= *mult || d.len() > dim + 1 {
                break;
            }
        }
        if *d.last().unwrap() != *mult {
            return Err(KuError::IllConditioned);
        }
        let jmax = d.len() - 1;
        let d_at = |j: usize| -> usize {
            if j >= d.len() {
                *d.last().unwrap()
            } else {
                d[j]
            }
        };
        // Chains via the column convention: B = Nᵀ.
        let b = n_mat.transpose();
        let mut b_pows = vec![NovMatrix::identity(dim)];
        for j in 0..jmax {
            let next = b.mul(&b_pows[j]).map(|x| x.with_cutoff(cap(j + 1)));
            b_pows.push(next);
        }
        // Chain heads, longest first.
        let mut chains: Vec<Vec<Vec<NovikovNum>>> = Vec::new(); // chain = [B^{k-1}x, …, x]
        let mut span: Vec<Vec<NovikovNum>> = Vec::new(); // rows spanning picked space
        for j in (1..=jmax).rev() {
            let want = 2 * d_at(j) - d_at(j + 1) - d_at(j.saturating_sub(1));
            if want == 0 {
                // Still push down the tails of longer chains into the span at
                // this level (handled when chains were created).
                continue;
            }
            // Candidates: ker B^j.
            let ker = b_pows[j].kernel_basis();
            // Forbidden span: ker B^{j−1} plus B·(level-j+1 members of longer chains).
            let mut forbidden: Vec<Vec<NovikovNum>> = b_pows[j - 1].kernel_basis();
            for ch in &chains {
                if ch.len() > j {
                    // chain[i] ∈ ker B^{i+1} exactly; the member of a longer
                    // chain at level j is chain[j−1]
                    forbidden.push(ch[j - 1].clone());
                }
            }
            let mut picked = 0usize;
            for cand in ker {
                if picked == want {
                    break;
                }
                if !increases_rank(&forbidden, &cand) {
                    continue;
                }
                // Build the chain down from the head.
                let mut chain = Vec::with_capacity(j);
                for step in (0..j).rev() {
                    let col = NovMatrix::from_fn(dim, 1, |r, _| cand[r].clone());
                    let v = b_pows[step].mul(&col);
                    chain.push((0..dim).map(|r| v.get(r, 0).clone()).collect::<Vec<_>>());
                }
                forbidden.push(cand.clone());
                chains.push(chain);
                picked += 1;
            }
            if picked != want {
                return Err(KuError::IllConditioned);
            }
        }
        for ch in &chains {
            blocks.push(JordanBlock { alpha: alpha.clone(), size: ch.len(), parity });
            j_diag.push((alpha.clone(), ch.len()));
            for v in ch {
                q_rows.push(v.clone());
            }
        }
        let _ = &mut span;
    }
    // Residual of Q·A − J·Q.
    let q = NovMatrix::from_rows(q_rows);
    let mut j_mat = NovMatrix::zeros(dim, dim);
    let mut off = 0usize;
    for (alpha, k) in &j_diag {
        for i in 0..*k {
            j_mat.set(off + i, off + i, alpha.clone());
            if i > 0 {
                j_mat.set(off + i, off + i - 1, NovikovNum::one());
            }
        }
        off += k;
    }
    let res_mat = q.mul(a).sub(&j_mat.mul(&q));
    let scale = q.scale_mag().max(1.0) * a.scale_mag().max(1.0);
    let residual = res_mat.scale_mag() / scale;
    Ok((blocks, residual))
}

fn increases_rank(span: &[Vec<NovikovNum>], cand: &[NovikovNum]) -> bool {
    if span.is_empty() {
        return cand.iter().any(|x| x.leading_mag() > ZERO_REL);
    }
    let mut rows = span.to_vec();
    let base = NovMatrix::from_rows(rows.clone()).rank();
    rows.push(cand.to_vec());
    NovMatrix::from_rows(rows).rank() > base
}

// ---------------------------------------------------------------------------
// Ext via the graded Sylvester operator
// ---------------------------------------------------------------------------

/// Hom_𝕂(|M|,|N|) split by parity; the Sylvester differential
/// `D(Φ) = Φ·U_N − (−1)^{|Φ||u|} U_M·Φ` maps Hom-parity p to p + |u|.
/// Ext⁰ = ker D; Ext¹ = coker D, recorded at parity p + |u| + 1 (sign and
/// shift convention pinned by ext(S_β,S_β) = (1,1)).
pub fn ext(m1: &GradedKuModule, m2: &GradedKuModule) -> Result<(usize, usize), KuError> {
    if m1.n != m2.n {
        return Err(KuError::MixedN(m1.n, m2.n));
    }
    let u_par = m1.u_parity();
    let mut out = [0usize; 2];
    for p in 0..2u8 {
        let (hom_p, d_p) = sylvester_block(m1, m2, p);
        let target = hom_dim(m1, m2, (p + u_par) % 2);
        let rank = if hom_p == 0 || target == 0 { d_p.rank().min(hom_p) } else { d_p.rank() };
        let ker = hom_p - rank;
        let coker = target - rank;
        out[p as usize] += ker;
        out[((p + u_par + 1) % 2) as usize] += coker;
    }
    Ok((out[0], out[1]))
}

fn hom_dim(m1: &GradedKuModule, m2: &GradedKuModule, p: u8) -> usize {
    let mut c = 0;
    for i in 0..m1.dim() {
        for j in 0..m2.dim() {
            if (m1.parity(i) + m2.parity(j)) % 2 == p {
                c += 1;
            }
        }
    }
    c
}

/// Matrix of D restricted to Hom-parity p, in matrix-unit coordinates
/// (row-vector convention: a Hom element is a coefficient row, D is applied
/// as row·matrix). Returns (dim Hom_p, the dim Hom_p × dim Hom_{p+|u|} matrix).
fn sylvester_block(m1: &GradedKuModule, m2: &GradedKuModule, p: u8) -> (usize, NovMatrix) {
    let u_par = m1.u_parity();
    let src: Vec<(usize, usize)> = hom_basis(m1, m2, p);
    let dst: Vec<(usize, usize)> = hom_basis(m1, m2, (p + u_par) % 2);
    let dst_index = |i: usize, j: usize| dst.iter().position(|&x| x == (i, j));
    let sign = if p == 1 && u_par == 1 { -1.0 } else { 1.0 };
    let mut d = NovMatrix::zeros(src.len(), dst.len());
    for (row, &(i, j)) in src.iter().enumerate() {
        // D(E_{ij}) = E_{ij}·U_N − sign·U_M·E_{ij}
        // (E_{ij} maps m1-basis i to m2-basis j.)
        // First term: column j of E flows through U_N: contributes to (i, j′)
        // with coefficient U_N[j][j′].
        for jp in 0..m2.dim() {
            if let Some(col) = dst_index(i, jp) {
                let v = d.get(row, col).add(m2.u.get(j, jp));
                d.set(row, col, v);
            }
        }
        // Second term: precomposition with u on M: contributes to (i′, j)
        // with coefficient U_M[i′][i].
        for ip in 0..m1.dim() {
            if let Some(col) = dst_index(ip, j) {
                let v = d
                    .get(row, col)
                    .sub(&m1.u.get(ip, i).scale(num_complex::Complex64::new(sign, 0.0)));
                d.set(row, col, v);
            }
        }
    }
    (src.len(), d)
}

fn hom_basis(m1: &GradedKuModule, m2: &GradedKuModule, p: u8) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m1.dim() {
        for j in 0..m2.dim() {
            if (m1.parity(i) + m2.parity(j)) % 2 == p {
                out.push((i, j));
            }
        }
    }
    out
}

/// Basis of degree-preserving module homomorphisms M → N, as matrices
/// applied on the right of row vectors.
pub fn hom_modules(m1: &GradedKuModule, m2: &GradedKuModule) -> Result<Vec<NovMatrix>, KuError> {
    if m1.n != m2.n {
        return Err(KuError::MixedN(m1.n, m2.n));
    }
    let (hom_dim0, d0) = sylvester_block(m1, m2, 0);
    let basis = hom_basis(m1, m2, 0);
    let ker = d0.transpose().kernel_basis();
    debug_assert_eq!(hom_dim0, basis.len());
    Ok(ker
        .into_iter()
        .map(|coeffs| {
            let mut phi = NovMatrix::zeros(m1.dim(), m2.dim());
            for (c, &(i, j)) in coeffs.iter().zip(&basis) {
                phi.set(i, j, c.clone());
            }
            phi
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

/// Homology of the cone on a module homomorphism φ: M → N, i.e.
/// ker φ [1] ⊕ coker φ with the induced u-actions.
pub fn cone(m1: &GradedKuModule, m2: &GradedKuModule, phi: &NovMatrix) -> Result<GradedKuModule, KuError> {
    if m1.n != m2.n {
        return Err(KuError::MixedN(m1.n, m2.n));
    }
    // φ must commute with u (tolerance relative to the input scale).
    let comm = m1.u.mul(phi).sub(&phi.mul(&m2.u));
    let scale = (m1.u.scale_mag().max(m2.u.scale_mag()) * phi.scale_mag()).max(1.0);
    if comm.scale_mag() > ZERO_REL * scale {
        return Err(KuError::NotAHomomorphism);
    }
    // Kernel of φ under row action.
    let ker_rows = phi.left_kernel_basis();
    let ker_part = induced_submodule(m1, &ker_rows)?;
    // Cokernel: representatives completing the row space of φ.
    let image_rows: Vec<Vec<NovikovNum>> = (0..m1.dim()).map(|i| phi.row(i).to_vec()).collect();
    let mut reps: Vec<Vec<NovikovNum>> = Vec::new();
    let mut rep_idx: Vec<usize> = Vec::new();
    {
        let mut current: Vec<Vec<NovikovNum>> = image_rows.clone();
        for j in 0..m2.dim() {
            let mut e = vec![NovikovNum::zero(); m2.dim()];
            e[j] = NovikovNum::one();
            if increases_rank_rows(&current, &e) {
                current.push(e.clone());
                reps.push(e);
                rep_idx.push(j);
            }
        }
    }
    let coker_part = induced_quotient(m2, &image_rows, &reps, &rep_idx)?;
    ker_part.shift().direct_sum(&coker_part)
}

fn increases_rank_rows(rows: &[Vec<NovikovNum>], cand: &[NovikovNum]) -> bool {
    let mut all = rows.to_vec();
    let base = if all.is_empty() { 0 } else { NovMatrix::from_rows(all.clone()).rank() };
    all.push(cand.to_vec());
    NovMatrix::from_rows(all).rank() > base
}

/// Module structure on a u-invariant row subspace, in the given basis,
/// with the basis reordered even-first. Basis rows must be parity-pure.
fn induced_submodule(m: &GradedKuModule, rows: &[Vec<NovikovNum>]) -> Result<GradedKuModule, KuError> {
    if rows.is_empty() {
        return GradedKuModule::new(m.n, 0, 0, NovMatrix::zeros(0, 0));
    }
    // Split each basis row into parity-pure components (u-invariance holds
    // componentwise because u has pure parity).
    let mut pure: Vec<(u8, Vec<NovikovNum>)> = Vec::new();
    for r in rows {
        for p in 0..2u8 {
            let comp: Vec<NovikovNum> = r
                .iter()
                .enumerate()
                .map(|(i, x)| if m.parity(i) == p { x.clone() } else { NovikovNum::zero() })
                .collect();
            if comp.iter().any(|x| x.leading_mag() > ZERO_REL)
                && increases_rank_rows(
                    &pure.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
                    &comp,
                )
            {
                pure.push((p, comp));
            }
        }
    }
    pure.sort_by_key(|(p, _)| *p);
    let de = pure.iter().filter(|(p, _)| *p == 0).count();
    let k = pure.len();
    let basis = NovMatrix::from_rows(pure.iter().map(|(_, v)| v.clone()).collect());
    let mut u = NovMatrix::zeros(k, k);
    for (i, (_, v)) in pure.iter().enumerate() {
        let img = m.u.apply_row(v);
        let coords = basis
            .solve_row(&img)
            .ok_or(KuError::NotAHomomorphism)?;
        for (j, c) in coords.into_iter().enumerate() {
            u.set(i, j, c);
        }
    }
    GradedKuModule::new(m.n, de, k - de, u)
}

/// Module structure on the quotient of m by the row space `image`, using the
/// standard-basis representatives `reps` (indices `rep_idx`).
fn induced_quotient(
    m: &GradedKuModule,
    image: &[Vec<NovikovNum>],
    reps: &[Vec<NovikovNum>],
    rep_idx: &[usize],
) -> Result<GradedKuModule, KuError> {
    let k = reps.len();
    if k == 0 {
        return GradedKuModule::new(m.n, 0, 0, NovMatrix::zeros(0, 0));
    }
    // Order representatives even-first.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| m.parity(rep_idx[i]));
    let de = rep_idx.iter().filter(|&&j| m.parity(j) == 0).count();
    // Solve w·U expressed as combination of reps modulo image: stack
    // [reps; image] and read the first k coordinates.
    let mut stacked: Vec<Vec<NovikovNum>> = order.iter().map(|&i| reps[i].clone()).collect();
    let nonzero_image: Vec<Vec<NovikovNum>> = image
        .iter()
        .filter(|r| r.iter().any(|x| x.leading_mag() > ZERO_REL))
        .cloned()
        .collect();
    stacked.extend(nonzero_image);
    let a = NovMatrix::from_rows(stacked);
    let mut u = NovMatrix::zeros(k, k);
    for (new_i, &oi) in order.iter().enumerate() {
        let img = m.u.apply_row(&reps[oi]);
        let coords = a.solve_row(&img).ok_or(KuError::NotAHomomorphism)?;
        for j in 0..k {
            u.set(new_i, j, coords[j].clone());
        }
    }
    GradedKuModule::new(m.n, de, k - de, u)
}

/// The canonical projection φ_α^k : M_α^k → S_α onto the last coordinate.
pub fn phi_projection(n: u32, alpha: &NovikovNum, k: usize, parity: u8) -> (GradedKuModule, GradedKuModule, NovMatrix) {
    let m = make_m(n, alpha, k, parity);
    let s = make_s(n, alpha, parity);
    let mut phi = NovMatrix::zeros(k, 1);
    phi.set(k - 1, 0, NovikovNum::one());
    (m, s, phi)
}

/// Module presented as Cone on a monic polynomial p(u): u acts by the
/// transpose of the companion matrix of p. Grading: for n odd all basis
/// vectors are even; for n even parities alternate along the basis.
pub fn cone_of_polynomial(n: u32, p: &NovPoly) -> Result<GradedKuModule, KuError> {
    let d = p.degree();
    assert!(d >= 1, "polynomial must be non-constant");
    let lead = p.coeffs[d].clone();
    let lead_inv = lead.invert().map_err(|_| KuError::NonzeroModuleRequired)?;
    let mut u = NovMatrix::zeros(d, d);
    for i in 0..d - 1 {
        u.set(i, i + 1, NovikovNum::one());
    }
    for j in 0..d {
        u.set(d - 1, j, p.coeffs[j].mul(&lead_inv).neg());
    }
    if n % 2 == 1 {
        GradedKuModule::new(n, d, 0, u)
    } else {
        // Alternating parities: reorder basis even-first (evens 0,2,4,…).
        let evens: Vec<usize> = (0..d).step_by(2).collect();
        let odds: Vec<usize> = (1..d).step_by(2).collect();
        let perm: Vec<usize> = evens.iter().chain(odds.iter()).copied().collect();
        let up = NovMatrix::from_fn(d, d, |i, j| u.get(perm[i], perm[j]).clone());
        GradedKuModule::new(n, evens.len(), odds.len(), up)
    }
}

// ---------------------------------------------------------------------------
// Split decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Generator {
    /// S_α at the given parity; modules M_α^k are expressed through S_α by a
    /// cone tower of depth `tower_depth`.
    S { alpha: NovikovNum, parity: u8, tower_depth: usize },
    /// S̃_α (n even), α an eigenvalue of the u²-action.
    STilde { alpha: NovikovNum, tower_depth: usize },
}

/// Express the module through the split-generators: S_α summands (n odd) or
/// S̃_α summands after balancing (n even). Each Jordan block (α, k)
/// contributes one generator with tower depth k.
pub fn split_decompose(m: &GradedKuModule) -> Result<Vec<(Generator, usize)>, KuError> {
    if m.is_zero() {
        return Err(KuError::NonzeroModuleRequired);
    }
    // For n even first balance dims by adding a trivial-u summand; the
    // u²-action Jordan data is unchanged on the even part except for
    // eigenvalue 0 blocks added by balancing, which is the documented
    // completion step.
    let jd = jordan_decompose(m)?;
    let mut out: Vec<(Generator, usize)> = Vec::new();
    for b in &jd.blocks {
        let gen = if m.n % 2 == 1 {
            Generator::S { alpha: b.alpha.clone(), parity: b.parity, tower_depth: b.size }
        } else {
            Generator::STilde { alpha: b.alpha.clone(), tower_depth: b.size }
        };
        // Merge identical generators into multiplicity.
        let key = format!("{gen:?}");
        if let Some((_, mult)) = out.iter_mut().find(|(g, _)| format!("{g:?}") == key) {
            *mult += 1;
        } else {
            out.push((gen, 1));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    n: u32,
    dim_even: usize,
    dim_odd: usize,
    u: UJson,
}

/// Block form of the u-action on disk: `even`/`odd` for n odd (parity
/// preserving), `r`/`s` for n even (parity swapping).
#[derive(Serialize, Deserialize, Default)]
struct UJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    even: Option<Vec<Vec<NovikovNum>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd: Option<Vec<Vec<NovikovNum>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<Vec<Vec<NovikovNum>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<Vec<Vec<NovikovNum>>>,
}

impl Serialize for GradedKuModule {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let to_rows = |m: &NovMatrix| -> Vec<Vec<NovikovNum>> {
            (0..m.rows).map(|i| m.row(i).to_vec()).collect()
        };
        let u = if self.u_parity() == 0 {
            UJson {
                even: Some(to_rows(&self.u_even())),
                odd: Some(to_rows(&self.u_odd())),
                ..Default::default()
            }
        } else {
            UJson {
                r: Some(to_rows(&self.r_mat())),
                s: Some(to_rows(&self.s_mat())),
                ..Default::default()
            }
        };
        ModuleJson { n: self.n, dim_even: self.dim_even, dim_odd: self.dim_odd, u }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GradedKuModule {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = ModuleJson::deserialize(de)?;
        let (de_, do_) = (j.dim_even, j.dim_odd);
        let d = de_ + do_;
        let mut u = NovMatrix::zeros(d, d);
        match (j.n % 2, &j.u.even, &j.u.odd, &j.u.r, &j.u.s) {
            (1, Some(even), Some(odd), None, None) => {
                fill(&mut u, even, 0, 0, de_, de_).map_err(D::Error::custom)?;
                fill(&mut u, odd, de_, de_, do_, do_).map_err(D::Error::custom)?;
            }
            (0, None, None, Some(r), Some(s)) => {
                fill(&mut u, r, de_, 0, do_, de_).map_err(D::Error::custom)?;
                fill(&mut u, s, 0, de_, de_, do_).map_err(D::Error::custom)?;
            }
            _ => return Err(D::Error::custom("u-action block form does not match parity of n")),
        }
        GradedKuModule::new(j.n, de_, do_, u).map_err(D::Error::custom)
    }
}

fn fill(
    u: &mut NovMatrix,
    rows: &[Vec<NovikovNum>],
    r0: usize,
    c0: usize,
    nr: usize,
    nc: usize,
) -> Result<(), String> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err("u-action block has wrong dimensions".into());
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            u.set(r0 + i, c0 + j, x.clone());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn beta(re: f64) -> NovikovNum {
        NovikovNum::from_real(re)
    }

    #[test]
    fn ext_pinning() {
        let b = NovikovNum::from_terms(
            vec![(Exp::new(-3, 2), Complex64::new(1.5, 0.5))],
            None,
        );
        let s = make_s(3, &b, 0);
        assert_eq!(ext(&s, &s).unwrap(), (1, 1));
        let s2 = make_s(3, &beta(2.0), 0);
        assert_eq!(ext(&s, &s2).unwrap(), (0, 0));
    }

    #[test]
    fn ext_jordan_pair() {
        // ext(M_α², S_α) = (1,1)
        let a = beta(1.5);
        let m = make_m(3, &a, 2, 0);
        let s = make_s(3, &a, 0);
        assert_eq!(ext(&m, &s).unwrap(), (1, 1));
    }

    #[test]
    fn ext_additive_and_euler() {
        let a = beta(1.0);
        let b = beta(-2.0);
        let sa = make_s(3, &a, 0);
        let sb = make_s(3, &b, 1);
        let sum = sa.direct_sum(&sb).unwrap();
        let (e0, e1) = ext(&sum, &sa).unwrap();
        let (a0, a1) = ext(&sa, &sa).unwrap();
        let (b0, b1) = ext(&sb, &sa).unwrap();
        assert_eq!((e0, e1), (a0 + b0, a1 + b1));
        assert_eq!(e0 as i64 - e1 as i64, 0);
    }

    #[test]
    fn ext_s_tilde_self() {
        let st = make_s_tilde(2, &beta(3.0));
        let (e0, e1) = ext(&st, &st).unwrap();
        assert_eq!((e0, e1), (2, 2));
        let st2 = make_s_tilde(2, &beta(-1.0));
        assert_eq!(ext(&st, &st2).unwrap(), (0, 0));
    }

    #[test]
    fn jordan_normal_forms() {
        let a = beta(2.0);
        let m = make_m(3, &a, 3, 0);
        let jd = jordan_decompose(&m).unwrap();
        assert_eq!(jd.blocks.len(), 1);
        assert_eq!(jd.blocks[0].size, 3);
        assert!(jd.residual < 1e-8);

        let d = make_s(3, &beta(1.0), 0).direct_sum(&make_s(3, &beta(4.0), 0)).unwrap();
        let jd = jordan_decompose(&d).unwrap();
        assert_eq!(jd.blocks.len(), 2);
        assert!(jd.blocks.iter().all(|b| b.size == 1));
    }

    #[test]
    fn jordan_random_conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = NovikovNum::t_pow(-1, 1);
        let m = make_m(3, &a, 2, 0)
            .direct_sum(&make_s(3, &beta(3.0), 0))
            .unwrap()
            .direct_sum(&make_s(3, &a, 1))
            .unwrap();
        for _ in 0..5 {
            let d = m.dim_even;
            let p = NovMatrix::random_invertible(&mut rng, d);
            let pinv = p.inverse().unwrap();
            let conj_even = pinv.mul(&m.u_even()).mul(&p);
            let u = NovMatrix::block_diag(&conj_even, &m.u_odd());
            let cm = GradedKuModule::new(3, m.dim_even, m.dim_odd, u).unwrap();
            let jd = jordan_decompose(&cm).unwrap();
            let want = jordan_decompose(&m).unwrap();
            assert!(jd.same_blocks(&want), "{:?} vs {:?}", jd.block_signature(), want.block_signature());
            assert!(jd.residual < 1e-6, "residual {}", jd.residual);
        }
    }

    #[test]
    fn cone_tower() {
        let a = beta(2.5);
        for k in 1..=5usize {
            let (m, s, phi) = phi_projection(3, &a, k, 0);
            let c = cone(&m, &s, &phi).unwrap();
            // Expect M_α^{k−1}[1].
            let want = if k == 1 {
                GradedKuModule::new(3, 0, 0, NovMatrix::zeros(0, 0)).unwrap()
            } else {
                make_m(3, &a, k - 1, 0).shift()
            };
            assert_eq!((c.dim_even, c.dim_odd), (want.dim_even, want.dim_odd));
            if !c.is_zero() {
                let jc = jordan_decompose(&c).unwrap();
                let jw = jordan_decompose(&want).unwrap();
                assert!(jc.same_blocks(&jw), "{:?} vs {:?}", jc.block_signature(), jw.block_signature());
            }
        }
    }

    #[test]
    fn cone_zero_and_identity() {
        let a = beta(1.0);
        let b = beta(2.0);
        let sa = make_s(3, &a, 0);
        let sb = make_s(3, &b, 0);
        let zero = NovMatrix::zeros(1, 1);
        let c = cone(&sa, &sb, &zero).unwrap();
        assert_eq!((c.dim_even, c.dim_odd), (1, 1)); // S_α[1] ⊕ S_β
        let id = NovMatrix::identity(1);
        let c2 = cone(&sa, &sa, &id).unwrap();
        assert!(c2.is_zero());
    }

    #[test]
    fn cone_dimension_law() {
        // dim H*Cone = dim m1 + dim m2 − 2 rank φ.
        let a = beta(2.0);
        let (m, s, phi) = phi_projection(3, &a, 3, 0);
        let c = cone(&m, &s, &phi).unwrap();
        assert_eq!(c.dim(), m.dim() + s.dim() - 2 * phi.rank());
    }

    #[test]
    fn hom_module_bases() {
        let a = beta(2.0);
        let (m, s, _) = phi_projection(3, &a, 2, 0);
        let homs = hom_modules(&m, &s).unwrap();
        assert_eq!(homs.len(), 1);
        // The hom is proportional to last-coordinate projection.
        assert!(homs[0].get(0, 0).leading_mag() < 1e-8);
        assert!(homs[0].get(1, 0).leading_mag() > 1e-8);
        assert!(hom_modules(&make_s(3, &a, 0), &make_s(3, &beta(5.0), 0)).unwrap().is_empty());
        let ss = make_s(3, &a, 0).direct_sum(&make_s(3, &a, 0)).unwrap();
        assert_eq!(hom_modules(&ss, &make_s(3, &a, 0)).unwrap().len(), 2);
    }

    #[test]
    fn companion_cones() {
        let a = beta(3.0);
        // p = u − α → S_α.
        let p = NovPoly::monomial_sub_const(&a);
        let c = cone_of_polynomial(3, &p).unwrap();
        assert_eq!((c.dim_even, c.dim_odd), (1, 0));
        assert!(c.u.get(0, 0).approx_eq(&a, 1e-8));
        // p = u² − α, n odd → S_{√α} ⊕ S_{−√α}.
        let p2 = NovPoly::new(vec![a.neg(), NovikovNum::zero(), NovikovNum::one()]);
        let c2 = cone_of_polynomial(3, &p2).unwrap();
        let jd = jordan_decompose(&c2).unwrap();
        assert_eq!(jd.blocks.len(), 2);
        let roots = a.nth_roots(2).unwrap();
        for b in &jd.blocks {
            assert!(roots.iter().any(|r| b.alpha.approx_eq(r, 1e-6) || b.alpha.approx_eq(&r.neg(), 1e-6)));
        }
        // p = u² − α, n even → S̃-shaped module.
        let c3 = cone_of_polynomial(2, &p2).unwrap();
        assert_eq!((c3.dim_even, c3.dim_odd), (1, 1));
        assert!(c3.s_mat().get(0, 0).approx_eq(&NovikovNum::one(), 1e-8));
        assert!(c3.r_mat().get(0, 0).approx_eq(&a, 1e-8));
    }

    #[test]
    fn split_decomposition() {
        let a = beta(2.0);
        let m = make_m(3, &a, 3, 0);
        let gens = split_decompose(&m).unwrap();
        assert_eq!(gens.len(), 1);
        match &gens[0].0 {
            Generator::S { tower_depth, .. } => assert_eq!(*tower_depth, 3),
            _ => panic!("expected S generator"),
        }
        let st = make_s_tilde(2, &a);
        let gens = split_decompose(&st).unwrap();
        assert!(matches!(gens[0].0, Generator::STilde { .. }));
    }

    #[test]
    fn even_n_unbalanced() {
        // dims (2,1): u = [[0,S],[R,0]] with S: 2×1, R: 1×2.
        let mut u = NovMatrix::zeros(3, 3);
        u.set(0, 2, NovikovNum::one()); // e0·u = o0
        u.set(2, 0, beta(4.0)); // o0·u = 4 e0
        let m = GradedKuModule::new(2, 2, 1, u).unwrap();
        // u² on even part = diag(4, 0): blocks (4,1) and (0,1).
        let jd = jordan_decompose(&m).unwrap();
        assert_eq!(jd.blocks.len(), 2);
        assert!(jd.blocks.iter().any(|b| b.alpha.approx_eq(&beta(4.0), 1e-8)));
        assert!(jd.blocks.iter().any(|b| b.alpha.is_zero()));
        let gens = split_decompose(&m).unwrap();
        assert_eq!(gens.iter().map(|(_, m)| m).sum::<usize>(), 2);
    }

    #[test]
    fn module_json_roundtrip() {
        let s = make_s(3, &NovikovNum::t_pow(-2, 1), 0);
        let j = serde_json::to_string(&s).unwrap();
        let back: GradedKuModule = serde_json::from_str(&j).unwrap();
        assert_eq!(ext(&s, &back).unwrap(), (1, 1));

        let st = make_s_tilde(2, &beta(2.0));
        let j = serde_json::to_string(&st).unwrap();
        let back: GradedKuModule = serde_json::from_str(&j).unwrap();
        assert_eq!(ext(&st, &back).unwrap(), (2, 2));
    }

    #[test]
    fn shift_involution() {
        let a = beta(2.0);
        let m = make_m(3, &a, 2, 0).direct_sum(&make_s(3, &a, 1)).unwrap();
        let mm = m.shift().shift();
        assert_eq!((m.dim_even, m.dim_odd), (mm.dim_even, mm.dim_odd));
        assert!(m.u.sub(&mm.u).is_zero());
    }
}
