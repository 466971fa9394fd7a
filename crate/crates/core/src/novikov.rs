//! Arithmetic in the Novikov field over the complex numbers.
//!
//! Elements are finite truncated series `Σ aᵢ T^{λᵢ}` with strictly
//! increasing exact rational exponents and complex coefficients. Every
//! element carries a cutoff: terms with exponent at or above the cutoff are
//! unknown and discarded. An element with no stored terms is zero at its
//! working precision, and `val(0) = ∞`.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Exact rational exponent of the formal variable `T`.
pub type Exp = Ratio<i128>;

/// Absolute magnitude below which stored coefficients are pruned.
pub const COEFF_ABS_TOL: f64 = 1e-12;
/// Relative tolerance for coefficient equality tests.
pub const COEFF_REL_TOL: f64 = 1e-8;
/// Default number of exponent orders kept past the valuation for series
/// produced by expansions (inversion, roots).
pub const DEFAULT_ORDERS: i128 = 32;
/// Default denominator used when quantizing real areas to exact exponents.
pub const DEFAULT_QUANTIZE_DENOM: i128 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NovikovError {
    #[error("division by an element with no terms below its cutoff")]
    ZeroDivision,
    #[error("n-th root of the zero element")]
    ZeroInput,
    #[error("root order must be positive")]
    BadRootOrder,
    #[error("parse error: {0}")]
    Parse(String),
}

fn exp(num: i128, den: i128) -> Exp {
    Ratio::new(num, den)
}

/// Quantize a real number to an exact rational with the given denominator.
pub fn quantize(x: f64, denom: i128) -> Exp {
    let num = (x * denom as f64).round() as i128;
    Ratio::new(num, denom)
}

fn exp_to_f64(e: Exp) -> f64 {
    e.to_f64().unwrap_or(f64::NAN)
}

/// A truncated Novikov series.
#[derive(Debug, Clone)]
pub struct NovikovNum {
    /// Sorted by strictly increasing exponent, all below `cutoff`.
    terms: Vec<(Exp, Complex64)>,
    /// `None` means `+∞` (exact element).
    cutoff: Option<Exp>,
}

impl NovikovNum {
    /// Build from raw terms; merges duplicates, sorts, prunes and truncates.
    pub fn from_terms(terms: Vec<(Exp, Complex64)>, cutoff: Option<Exp>) -> Self {
        let mut t = terms;
        t.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Exp, Complex64)> = Vec::with_capacity(t.len());
        for (e, c) in t {
            if let Some(last) = merged.last_mut() {
                if last.0 == e {
                    last.1 += c;
                    continue;
                }
            }
            merged.push((e, c));
        }
        merged.retain(|(e, c)| c.norm() > COEFF_ABS_TOL && cutoff.map_or(true, |cut| *e < cut));
        NovikovNum { terms: merged, cutoff }
    }

    pub fn zero() -> Self {
        NovikovNum { terms: vec![], cutoff: None }
    }

    pub fn one() -> Self {
        Self::from_complex(Complex64::new(1.0, 0.0))
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::from_terms(vec![(Exp::zero(), c)], None)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// The monomial `c · T^e`.
    pub fn monomial(e: Exp, c: Complex64) -> Self {
        Self::from_terms(vec![(e, c)], None)
    }

    /// `T^{num/den}` with coefficient 1.
    pub fn t_pow(num: i128, den: i128) -> Self {
        Self::monomial(exp(num, den), Complex64::new(1.0, 0.0))
    }

    pub fn terms(&self) -> &[(Exp, Complex64)] {
        &self.terms
    }

    pub fn cutoff(&self) -> Option<Exp> {
        self.cutoff
    }

    /// Zero at working precision: no terms below the cutoff.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation: least exponent, or `None` (`+∞`) for zero.
    pub fn val(&self) -> Option<Exp> {
        self.terms.first().map(|(e, _)| *e)
    }

    /// Leading term `(exponent, coefficient)`.
    pub fn leading(&self) -> Option<(Exp, Complex64)> {
        self.terms.first().copied()
    }

    /// Magnitude of the leading coefficient; 0 for the zero element.
    pub fn leading_mag(&self) -> f64 {
        self.terms.first().map_or(0.0, |(_, c)| c.norm())
    }

    /// `val(x) = 0`.
    pub fn is_unitary(&self) -> bool {
        self.val() == Some(Exp::zero())
    }

    /// `val(x) ≥ 0`; the zero element lies in the Novikov ring.
    pub fn in_k0(&self) -> bool {
        self.val().map_or(true, |v| v >= Exp::zero())
    }

    /// `val(x) > 0`; zero counts as a member of the maximal ideal.
    pub fn in_k_plus(&self) -> bool {
        self.val().map_or(true, |v| v > Exp::zero())
    }

    pub fn with_cutoff(&self, cutoff: Option<Exp>) -> Self {
        Self::from_terms(self.terms.clone(), min_cut(self.cutoff, cutoff))
    }

    pub fn neg(&self) -> Self {
        NovikovNum {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn conj(&self) -> Self {
        NovikovNum {
            terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)).collect(), self.cutoff)
    }

    pub fn add(&self, other: &Self) -> Self {
        let cut = min_cut(self.cutoff, other.cutoff);
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(terms, cut)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Truncation rule: cutoff = min(cut_x + val_y, cut_y + val_x).
        let cut = min_cut(
            add_cut(self.cutoff, other.val()),
            add_cut(other.cutoff, self.val()),
        );
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if cut.map_or(true, |cu| e < cu) {
                    terms.push((e, c1 * c2));
                }
            }
        }
        Self::from_terms(terms, cut)
    }

    /// Multiplicative inverse, by factoring the leading term and expanding a
    /// geometric series up to the working cutoff.
    pub fn invert(&self) -> Result<Self, NovikovError> {
        let (v, lead) = self.leading().ok_or(NovikovError::ZeroDivision)?;
        // x = lead*T^v * (1 + y), val(y) > 0.
        let lead_inv = Self::monomial(-v, 1.0 / lead);
        let y = self.mul(&lead_inv).sub(&Self::one());
        // Relative precision of the result: inherited from x, default 32 orders.
        let orders = match self.cutoff {
            Some(c) => c - v,
            None => Exp::from_integer(DEFAULT_ORDERS),
        };
        let cut = Some(-v + orders);
        let mut sum = Self::one().with_cutoff(cut.map(|c| c + v + v));
        let mut pow = Self::one();
        loop {
            pow = pow.mul(&y).neg();
            if pow.is_zero() {
                break;
            }
            let pv = pow.val().unwrap();
            if pv >= orders {
                break;
            }
            sum = sum.add(&pow);
        }
        Ok(sum.mul(&lead_inv).with_cutoff(cut))
    }

    /// Integer power (negative allowed for invertible elements).
    pub fn powi(&self, k: i32) -> Result<Self, NovikovError> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// All `n` distinct n-th roots, each with valuation `val(x)/n`.
    ///
    /// The leading term contributes its `n` complex branches; each branch is
    /// then refined by Newton iteration, which converges in valuation order.
    pub fn nth_roots(&self, n: u32) -> Result<Vec<Self>, NovikovError> {
        if n == 0 {
            return Err(NovikovError::BadRootOrder);
        }
        let (v, lead) = self.leading().ok_or(NovikovError::ZeroInput)?;
        let root_val = v / Exp::from_integer(n as i128);
        let orders = match self.cutoff {
            Some(c) => (c - v) / Exp::from_integer(1),
            None => Exp::from_integer(DEFAULT_ORDERS),
        };
        let cut = Some(root_val + orders);
        let (r, theta) = lead.to_polar();
        let rr = r.powf(1.0 / n as f64);
        let nf = Exp::from_integer(n as i128);
        let mut out = Vec::with_capacity(n as usize);
        for k in 0..n {
            let th = (theta + 2.0 * std::f64::consts::PI * k as f64) / n as f64;
            let c0 = Complex64::from_polar(rr, th);
            let mut root = Self::monomial(root_val, c0).with_cutoff(cut);
            // Newton: r <- r - (r^n - x)/(n r^{n-1}).
            for _ in 0..64 {
                let mut pow = Self::one();
                for _ in 0..(n - 1) {
                    pow = pow.mul(&root);
                }
                let f = pow.mul(&root).sub(self);
                if f.is_zero() {
                    break;
                }
                let denom = pow.scale(Complex64::new(n as f64, 0.0));
                let step = f.mul(&denom.invert()?);
                // Converged once the correction falls past the cutoff window.
                let done = match (step.val(), cut) {
                    (None, _) => true,
                    (Some(sv), Some(c)) => sv >= c,
                    (Some(sv), None) => sv - root_val >= Exp::from_integer(DEFAULT_ORDERS),
                };
                // Rebuild with the target cutoff rather than min-ing: the
                // pessimistic cutoff propagated through `sub`/`mul` would
                // shrink every iteration, but Newton re-derives validity of
                // all orders below `cut` on each pass.
                root = Self::from_terms(root.sub(&step).terms().to_vec(), cut);
                if done {
                    break;
                }
            }
            // Keep n distinct branches; leading coefficients differ by
            // n-th roots of unity so no dedup is needed.
            let _ = nf;
            out.push(root);
        }
        Ok(out)
    }

    /// Coefficient-wise approximate equality up to the common cutoff.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let cut = min_cut(self.cutoff, other.cutoff);
        let scale = self.max_mag().max(other.max_mag()).max(1.0);
        let mut i = 0;
        let mut j = 0;
        let below = |e: Exp| cut.map_or(true, |c| e < c);
        while i < self.terms.len() || j < other.terms.len() {
            let (ea, ca) = self.terms.get(i).copied().unwrap_or((Exp::from_integer(i128::MAX / 2), Complex64::default()));
            let (eb, cb) = other.terms.get(j).copied().unwrap_or((Exp::from_integer(i128::MAX / 2), Complex64::default()));
            if ea == eb {
                if i >= self.terms.len() && j >= other.terms.len() {
                    break;
                }
                if below(ea) && (ca - cb).norm() > rel_tol * scale {
                    return false;
                }
                i += 1;
                j += 1;
            } else if ea < eb {
                if below(ea) && ca.norm() > rel_tol * scale {
                    return false;
                }
                i += 1;
            } else {
                if below(eb) && cb.norm() > rel_tol * scale {
                    return false;
                }
                j += 1;
            }
        }
        true
    }

    /// Largest coefficient magnitude.
    pub fn max_mag(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluate the series at `T = t` (real `t > 0`).
    pub fn eval_at(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * t.powf(exp_to_f64(*e)))
            .sum()
    }

    /// Random element for stress tests: `k` terms with exponents drawn from
    /// multiples of `1/den` in `[val_min, val_min + spread)`.
    pub fn random<R: rand::Rng>(rng: &mut R, k: usize, val_min: i128, spread: i128, den: i128) -> Self {
        let mut terms = Vec::with_capacity(k);
        for _ in 0..k {
            let num = rng.gen_range((val_min * den)..((val_min + spread) * den));
            let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            terms.push((exp(num, den), c));
        }
        Self::from_terms(terms, None)
    }

    /// Random unitary element: leading term `e^{iθ} T^0` plus positive tail.
    pub fn random_unitary<R: rand::Rng>(rng: &mut R, tail_terms: usize) -> Self {
        let theta = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
        let mut terms = vec![(Exp::zero(), Complex64::from_polar(1.0, theta))];
        for _ in 0..tail_terms {
            let num = rng.gen_range(1..=8i128);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            terms.push((exp(num, 2), c));
        }
        Self::from_terms(terms, None)
    }
}

fn min_cut(a: Option<Exp>, b: Option<Exp>) -> Option<Exp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// `cutoff + valuation` with `∞` absorbing.
fn add_cut(cut: Option<Exp>, val: Option<Exp>) -> Option<Exp> {
    match (cut, val) {
        (Some(c), Some(v)) => Some(c + v),
        _ => None,
    }
}

impl PartialEq for NovikovNum {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, COEFF_REL_TOL)
    }
}

// ---------------------------------------------------------------------------
// Text form: `3*T^(-2) + (1+2i)*T^(0)`
// ---------------------------------------------------------------------------

fn fmt_rational(e: Exp) -> String {
    if e.denom() == &1 {
        format!("{}", e.numer())
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im.abs() <= COEFF_ABS_TOL {
        fmt_f64(c.re)
    } else {
        let im = if c.im < 0.0 {
            format!("-{}i", fmt_f64(-c.im))
        } else {
            format!("+{}i", fmt_f64(c.im))
        };
        format!("({}{})", fmt_f64(c.re), im)
    }
}

fn fmt_f64(x: f64) -> String {
    if x == x.round() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{}", x)
    }
}

impl fmt::Display for NovikovNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{}*T^({})", fmt_coeff(*c), fmt_rational(*e))?;
            }
        }
        if let Some(cut) = self.cutoff {
            write!(f, " + O(T^({}))", fmt_rational(cut))?;
        }
        Ok(())
    }
}

/// Parse the text grammar. Accepts `a*T^(p)`, `a*T^(p/q)`, bare complex
/// coefficients in parentheses, an optional trailing `+ O(T^(r))` cutoff and
/// `-` between terms.
pub fn parse(input: &str) -> Result<NovikovNum, NovikovError> {
    let s = input.trim();
    if s == "0" {
        return Ok(NovikovNum::zero());
    }
    let mut terms = Vec::new();
    let mut cutoff = None;
    // Split on top-level +/- (not inside parentheses).
    let mut pieces: Vec<(f64, String)> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    let mut sign = 1.0;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && i > 0 && !cur.trim().is_empty() => {
                pieces.push((sign, cur.trim().to_string()));
                sign = if ch == '-' { -1.0 } else { 1.0 };
                cur = String::new();
            }
            '-' if depth == 0 && cur.trim().is_empty() => {
                sign = -sign;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        pieces.push((sign, cur.trim().to_string()));
    }
    for (sgn, piece) in pieces {
        if let Some(rest) = piece.strip_prefix("O(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| NovikovError::Parse(piece.clone()))?;
            let e = parse_t_power(inner)?;
            cutoff = Some(cutoff.map_or(e, |c: Exp| c.min(e)));
            continue;
        }
        let (coeff_str, exp_str) = match piece.find("*T^") {
            Some(pos) => (&piece[..pos], Some(&piece[pos + 3..])),
            None => match piece.strip_prefix("T^") {
                Some(rest) => ("1", Some(rest)),
                None => (piece.as_str(), None),
            },
        };
        let c = parse_coeff(coeff_str.trim())?;
        let e = match exp_str {
            Some(es) => parse_paren_rational(es.trim())?,
            None => Exp::zero(),
        };
        terms.push((e, c * sgn));
    }
    Ok(NovikovNum::from_terms(terms, cutoff))
}

fn parse_t_power(s: &str) -> Result<Exp, NovikovError> {
    let rest = s
        .trim()
        .strip_prefix("T^")
        .ok_or_else(|| NovikovError::Parse(s.to_string()))?;
    parse_paren_rational(rest)
}

fn parse_paren_rational(s: &str) -> Result<Exp, NovikovError> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    let inner = inner.trim();
    let (n, d) = match inner.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (inner, "1"),
    };
    let num: i128 = n.parse().map_err(|_| NovikovError::Parse(inner.to_string()))?;
    let den: i128 = d.parse().map_err(|_| NovikovError::Parse(inner.to_string()))?;
    if den == 0 {
        return Err(NovikovError::Parse(inner.to_string()));
    }
    Ok(Ratio::new(num, den))
}

fn parse_coeff(s: &str) -> Result<Complex64, NovikovError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|u| u.strip_suffix(')'))
        .unwrap_or(t)
        .replace(' ', "");
    if inner.is_empty() {
        return Err(NovikovError::Parse(s.to_string()));
    }
    // Pure imaginary or real or a+bi.
    if let Ok(re) = inner.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(im_str) = inner.strip_suffix('i') {
        // Forms: "2i", "-i", "1+2i", "1-i".
        let bytes = im_str.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(k) => (&im_str[..k], &im_str[k..]),
            None => ("0", im_str),
        };
        let re: f64 = if re_part.is_empty() { 0.0 } else { re_part.parse().map_err(|_| NovikovError::Parse(s.into()))? };
        let im: f64 = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| NovikovError::Parse(s.into()))?,
        };
        return Ok(Complex64::new(re, im));
    }
    Err(NovikovError::Parse(s.to_string()))
}

// ---------------------------------------------------------------------------
// JSON form: {"terms":[[exp_num,exp_den,re,im],...],"cutoff":[num,den]|null}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NovikovJson {
    terms: Vec<(i128, i128, f64, f64)>,
    cutoff: Option<(i128, i128)>,
}

impl Serialize for NovikovNum {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let j = NovikovJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e.numer(), *e.denom(), c.re, c.im))
                .collect(),
            cutoff: self.cutoff.map(|c| (*c.numer(), *c.denom())),
        };
        j.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NovikovNum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = NovikovJson::deserialize(de)?;
        for &(_, d, _, _) in &j.terms {
            if d == 0 {
                return Err(D::Error::custom("zero exponent denominator"));
            }
        }
        let terms = j
            .terms
            .into_iter()
            .map(|(n, d, re, im)| (Ratio::new(n, d), Complex64::new(re, im)))
            .collect();
        let cutoff = match j.cutoff {
            Some((_, 0)) => return Err(D::Error::custom("zero cutoff denominator")),
            Some((n, d)) => Some(Ratio::new(n, d)),
            None => None,
        };
        Ok(NovikovNum::from_terms(terms, cutoff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> NovikovNum {
        NovikovNum::t_pow(1, 1)
    }

    #[test]
    fn val_examples() {
        // val(3T^-2 + T^0) = -2
        let x = NovikovNum::from_terms(
            vec![(exp(-2, 1), Complex64::new(3.0, 0.0)), (Exp::zero(), Complex64::new(1.0, 0.0))],
            None,
        );
        assert_eq!(x.val(), Some(exp(-2, 1)));
        // val(0) = ∞
        assert_eq!(NovikovNum::zero().val(), None);
        // val(T^{1/2} · T^{1/3}) = 5/6
        let p = NovikovNum::t_pow(1, 2).mul(&NovikovNum::t_pow(1, 3));
        assert_eq!(p.val(), Some(exp(5, 6)));
    }

    #[test]
    fn add_mul_examples() {
        let one = NovikovNum::one();
        // (1 + T) + (-1) = T
        let s = one.add(&t()).add(&one.neg());
        assert_eq!(s, t());
        // T^{-1} * T = 1
        assert_eq!(NovikovNum::t_pow(-1, 1).mul(&t()), one);
        // (1+T)(1-T) = 1 - T^2
        let p = one.add(&t()).mul(&one.sub(&t()));
        let want = one.sub(&NovikovNum::t_pow(2, 1));
        assert_eq!(p, want);
    }

    #[test]
    fn invert_examples() {
        let one = NovikovNum::one();
        // invert(T^2) = T^-2
        assert_eq!(NovikovNum::t_pow(2, 1).invert().unwrap(), NovikovNum::t_pow(-2, 1));
        // invert(1 - T) = 1 + T + T^2 + ...
        let inv = one.sub(&t()).invert().unwrap();
        for k in 0..5i128 {
            let c = inv.terms().iter().find(|(e, _)| *e == exp(k, 1)).unwrap().1;
            assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
        // invert(2 T^{-1} (1+T)): check x * invert(x) = 1 up to cutoff.
        let x = NovikovNum::monomial(exp(-1, 1), Complex64::new(2.0, 0.0)).mul(&one.add(&t()));
        let xi = x.invert().unwrap();
        assert_eq!(x.mul(&xi), one);
    }

    #[test]
    fn invert_zero_is_error() {
        assert_eq!(NovikovNum::zero().invert(), Err(NovikovError::ZeroDivision));
    }

    #[test]
    fn nth_roots_examples() {
        // sqrt(T^-2) = ±T^-1
        let roots = NovikovNum::t_pow(-2, 1).nth_roots(2).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.val(), Some(exp(-1, 1)));
            assert_eq!(r.mul(r), NovikovNum::t_pow(-2, 1));
        }
        // sqrt(1+T) = ±(1 + T/2 - T^2/8 + ...)
        let x = NovikovNum::one().add(&t());
        let roots = x.nth_roots(2).unwrap();
        let principal = roots
            .iter()
            .find(|r| (r.leading().unwrap().1 - Complex64::new(1.0, 0.0)).norm() < 1e-6)
            .unwrap();
        let c1 = principal.terms().iter().find(|(e, _)| *e == exp(1, 1)).unwrap().1;
        let c2 = principal.terms().iter().find(|(e, _)| *e == exp(2, 1)).unwrap().1;
        assert!((c1 - Complex64::new(0.5, 0.0)).norm() < 1e-9);
        assert!((c2 - Complex64::new(-0.125, 0.0)).norm() < 1e-9);
        for r in &roots {
            assert_eq!(r.mul(r), x);
        }
    }

    #[test]
    fn sqrt_of_unitary_scaled_monomial() {
        // sqrt(T^-4 U^-1) = ±T^-2 (sqrt U)^-1 for unitary U.
        let u = NovikovNum::from_terms(
            vec![(Exp::zero(), Complex64::from_polar(1.0, 0.7)), (exp(1, 1), Complex64::new(0.3, -0.2))],
            None,
        );
        let x = NovikovNum::t_pow(-4, 1).mul(&u.invert().unwrap());
        let roots = x.nth_roots(2).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.val(), Some(exp(-2, 1)));
            assert_eq!(r.mul(r), x);
        }
        // Each root equals ±T^-2 (sqrt U)^-1 for one of the square roots of U.
        let su = u.nth_roots(2).unwrap();
        let expect = NovikovNum::t_pow(-2, 1).mul(&su[0].invert().unwrap());
        assert!(roots.iter().any(|r| *r == expect || *r == expect.neg()));
    }

    #[test]
    fn unitary_predicates() {
        let one_plus_t = NovikovNum::one().add(&t());
        assert!(one_plus_t.is_unitary());
        assert!(!NovikovNum::t_pow(-1, 1).is_unitary());
        let x = NovikovNum::from_real(3.0).add(&NovikovNum::t_pow(2, 1));
        assert!(x.in_k0());
        assert!(!NovikovNum::t_pow(-1, 1).in_k0());
    }

    #[test]
    fn text_roundtrip() {
        let x = NovikovNum::from_terms(
            vec![(exp(-2, 1), Complex64::new(3.0, 0.0)), (Exp::zero(), Complex64::new(1.0, 2.0))],
            None,
        );
        let s = x.to_string();
        assert_eq!(s, "3*T^(-2) + (1+2i)*T^(0)");
        let y = parse(&s).unwrap();
        assert_eq!(x, y);
        let z = parse("T^(1/2) - 2*T^(3)").unwrap();
        assert_eq!(z.val(), Some(exp(1, 2)));
    }

    #[test]
    fn json_roundtrip() {
        let x = NovikovNum::from_terms(
            vec![(exp(-1, 2), Complex64::new(0.5, -1.0))],
            Some(exp(10, 1)),
        );
        let s = serde_json::to_string(&x).unwrap();
        let y: NovikovNum = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.cutoff(), Some(exp(10, 1)));
    }

    #[test]
    fn mul_cutoff_propagation() {
        // x = 1 + O(T^4), y = T^-2: product cutoff should be 2.
        let x = NovikovNum::one().with_cutoff(Some(exp(4, 1)));
        let y = NovikovNum::t_pow(-2, 1);
        let p = x.mul(&y);
        assert_eq!(p.cutoff(), Some(exp(2, 1)));
    }
}
