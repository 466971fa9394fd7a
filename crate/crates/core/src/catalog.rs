//! Catalog of Lagrangian objects in T*Sⁿ: their modules over 𝕂[u],
//! Floer-cohomology dimensions, non-displaceability verdicts,
//! generator-matching from module data, and the endomorphism algebra of the
//! conormal object N ⊂ T*S³.

use crate::kumod::{self, Generator, GradedKuModule, KuError};
use crate::novikov::{Exp, NovikovNum};
use crate::poly::NovPoly;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("object is not proper (no finite-dimensional module)")]
    NotProper,
    #[error(transparent)]
    Module(#[from] KuError),
    #[error("novikov arithmetic failed")]
    Arithmetic,
}

/// The kinds of Lagrangians the catalog knows, with their defining data.
/// Zero-section cochain parameters live in the Novikov ring (val ≥ 0); torus
/// holonomies are unitary (valuation 0).
#[derive(Debug, Clone, PartialEq)]
pub enum LagrangianKind {
    /// (Sⁿ, α[pt]) for n odd.
    ZeroSectionOdd { alpha: NovikovNum },
    /// (Sⁿ, b_{α,β}) for n even.
    ZeroSectionEven { alpha: NovikovNum, beta: NovikovNum },
    /// Monotone S¹ × S^{n−1} torus-like Lagrangian at monotonicity constant
    /// τ, with holonomy U around the S¹ factor.
    LTorus { tau: Exp, holonomy: NovikovNum },
    /// The monotone 3-torus in T*S³.
    T3Torus { tau: Exp, holonomy: NovikovNum },
    /// A cotangent fiber; its module is free of rank one (non-proper).
    Fiber,
    /// The conormal N ≅ F ⊕ F[1] in T*S³ (non-proper).
    ConormalN,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianObject {
    pub n: u32,
    pub kind: LagrangianKind,
}

impl LagrangianObject {
    pub fn new(n: u32, kind: LagrangianKind) -> Result<Self, CatalogError> {
        if n < 2 {
            return Err(CatalogError::InvalidObject("n must be at least 2".into()));
        }
        match &kind {
            LagrangianKind::ZeroSectionOdd { alpha } => {
                if n % 2 == 0 {
                    return Err(CatalogError::InvalidObject(
                        "ZeroSectionOdd requires odd n".into(),
                    ));
                }
                if !alpha.in_k0() {
                    return Err(CatalogError::InvalidObject(
                        "zero-section parameter must have val >= 0".into(),
                    ));
                }
            }
            LagrangianKind::ZeroSectionEven { alpha, beta } => {
                if n % 2 == 1 {
                    return Err(CatalogError::InvalidObject(
                        "ZeroSectionEven requires even n".into(),
                    ));
                }
                if !alpha.in_k0() || !beta.in_k0() {
                    return Err(CatalogError::InvalidObject(
                        "zero-section parameters must have val >= 0".into(),
                    ));
                }
            }
            LagrangianKind::LTorus { tau, holonomy } => {
                check_torus(tau, holonomy)?;
            }
            LagrangianKind::T3Torus { tau, holonomy } => {
                if n != 3 {
                    return Err(CatalogError::InvalidObject("T3Torus requires n = 3".into()));
                }
                check_torus(tau, holonomy)?;
            }
            LagrangianKind::Fiber => {}
            LagrangianKind::ConormalN => {
                if n != 3 {
                    return Err(CatalogError::InvalidObject("ConormalN requires n = 3".into()));
                }
            }
        }
        Ok(LagrangianObject { n, kind })
    }

    /// Proper objects have finite-dimensional modules; Fiber and ConormalN
    /// do not.
    pub fn is_proper(&self) -> bool {
        !matches!(self.kind, LagrangianKind::Fiber | LagrangianKind::ConormalN)
    }
}

fn check_torus(tau: &Exp, holonomy: &NovikovNum) -> Result<(), CatalogError> {
    if *tau <= Exp::zero() {
        return Err(CatalogError::InvalidObject("tau must be positive".into()));
    }
    if !holonomy.is_unitary() {
        return Err(CatalogError::InvalidObject(
            "torus holonomy must be unitary (valuation 0)".into(),
        ));
    }
    Ok(())
}

/// Module image of an object; the non-proper objects are symbolic markers.
#[derive(Debug, Clone)]
pub enum YonedaImage {
    Module(GradedKuModule),
    /// Cotangent fiber: the free module of rank one.
    FreeRankOne,
    /// Conormal N: F ⊕ F[1].
    FreeSumShifted,
}

/// The defining Novikov parameter `α = T^{−2(n−1)τ} U^{−1}` of an L-type
/// torus (acting as u² on its module).
pub fn l_torus_alpha(n: u32, tau: &Exp, holonomy: &NovikovNum) -> Result<NovikovNum, CatalogError> {
    let e = *tau * Ratio::from_integer(-2 * (n as i128 - 1));
    let hol_inv = holonomy.invert().map_err(|_| CatalogError::Arithmetic)?;
    Ok(NovikovNum::monomial(e, Complex64::new(1.0, 0.0)).mul(&hol_inv))
}

/// The parameter `α = T^{−2τ} U^{−1}` of the 3-torus (acting as u).
pub fn t3_torus_alpha(tau: &Exp, holonomy: &NovikovNum) -> Result<NovikovNum, CatalogError> {
    let e = *tau * Ratio::from_integer(-2);
    let hol_inv = holonomy.invert().map_err(|_| CatalogError::Arithmetic)?;
    Ok(NovikovNum::monomial(e, Complex64::new(1.0, 0.0)).mul(&hol_inv))
}

/// The module of an object. Sign ambiguities are resolved to "+" throughout
/// (our spin convention: changing the spin structure replaces α by −α, so the
/// choice is a relabeling).
pub fn yoneda_module(obj: &LagrangianObject) -> Result<YonedaImage, CatalogError> {
    let n = obj.n;
    match &obj.kind {
        LagrangianKind::ZeroSectionOdd { alpha } => {
            Ok(YonedaImage::Module(kumod::make_s(n, alpha, 0)))
        }
        LagrangianKind::ZeroSectionEven { alpha, beta } => {
            let mut u = crate::linalg::NovMatrix::zeros(2, 2);
            u.set(0, 1, beta.clone());
            u.set(1, 0, alpha.clone());
            Ok(YonedaImage::Module(GradedKuModule::new(n, 1, 1, u)?))
        }
        LagrangianKind::LTorus { tau, holonomy } => {
            let alpha = l_torus_alpha(n, tau, holonomy)?;
            if n % 2 == 1 {
                // Cone(u² − α) splits as S_{√α} ⊕ S_{−√α}.
                let roots = alpha.nth_roots(2).map_err(|_| CatalogError::Arithmetic)?;
                let s1 = kumod::make_s(n, &roots[0], 0);
                let s2 = kumod::make_s(n, &roots[1], 0);
                Ok(YonedaImage::Module(s1.direct_sum(&s2)?))
            } else {
                let p = NovPoly::new(vec![alpha.neg(), NovikovNum::zero(), NovikovNum::one()]);
                Ok(YonedaImage::Module(kumod::cone_of_polynomial(n, &p)?))
            }
        }
        LagrangianKind::T3Torus { tau, holonomy } => {
            let alpha = t3_torus_alpha(tau, holonomy)?;
            let even = kumod::make_s(3, &alpha, 0);
            let odd = kumod::make_s(3, &alpha, 1);
            Ok(YonedaImage::Module(even.direct_sum(&odd)?))
        }
        LagrangianKind::Fiber => Ok(YonedaImage::FreeRankOne),
        LagrangianKind::ConormalN => Ok(YonedaImage::FreeSumShifted),
    }
}

fn proper_module(obj: &LagrangianObject) -> Result<GradedKuModule, CatalogError> {
    match yoneda_module(obj)? {
        YonedaImage::Module(m) => Ok(m),
        _ => Err(CatalogError::NotProper),
    }
}

/// Floer-cohomology dimensions (even, odd) between two proper objects,
/// computed as Ext of their modules.
pub fn hf_dims(
    a: &LagrangianObject,
    b: &LagrangianObject,
) -> Result<(usize, usize), CatalogError> {
    let ma = proper_module(a)?;
    let mb = proper_module(b)?;
    Ok(kumod::ext(&ma, &mb)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisplaceabilityReport {
    pub dims: (usize, usize),
    pub verdict: String,
    /// Always false: a vanishing obstruction never certifies displaceability.
    pub displaceability_certified: bool,
}

/// Non-displaceability verdict: nonzero Floer cohomology obstructs
/// Hamiltonian displacement; zero proves nothing.
pub fn displaceability_report(
    a: &LagrangianObject,
    b: &LagrangianObject,
) -> Result<DisplaceabilityReport, CatalogError> {
    let dims = hf_dims(a, b)?;
    let verdict = if dims.0 + dims.1 > 0 {
        "not displaceable".to_string()
    } else {
        "no obstruction found (Floer-theoretically inconclusive)".to_string()
    };
    Ok(DisplaceabilityReport { dims, verdict, displaceability_certified: false })
}

/// Map the split-generation data of a nonzero module back to catalog objects:
/// eigenvalues of valuation ≥ 0 come from zero sections, eigenvalues of
/// negative valuation from monotone tori (L-type by default; the 3-torus
/// alternative when `prefer_t3` and n = 3). Every emitted object is verified
/// to pair nontrivially with the input.
pub fn match_generators(
    m: &GradedKuModule,
    prefer_t3: bool,
) -> Result<Vec<LagrangianObject>, CatalogError> {
    let n = m.n;
    let gens = kumod::split_decompose(m)?;
    let mut out: Vec<LagrangianObject> = Vec::new();
    for (g, _mult) in &gens {
        let obj = match g {
            Generator::S { alpha, .. } => {
                let val = alpha.val().ok_or(CatalogError::Arithmetic)?;
                if val >= Exp::zero() {
                    LagrangianObject::new(n, LagrangianKind::ZeroSectionOdd { alpha: alpha.clone() })?
                } else if prefer_t3 && n == 3 {
                    // α = T^{−2τ}U^{−1} with τ = −val(α)/2.
                    let tau = -val / Ratio::from_integer(2);
                    let hol = NovikovNum::monomial(val, Complex64::new(1.0, 0.0))
                        .mul(&alpha.invert().map_err(|_| CatalogError::Arithmetic)?);
                    LagrangianObject::new(n, LagrangianKind::T3Torus { tau, holonomy: hol })?
                } else {
                    // The module eigenvalue is ±√α_L, so α_L = α² and
                    // τ = −val(α)/(n−1); principal-branch recovery of the
                    // holonomy (the other branch relabels the local system).
                    let tau = -val / Ratio::from_integer(n as i128 - 1);
                    let alpha_l = alpha.mul(alpha);
                    let hol = NovikovNum::monomial(val + val, Complex64::new(1.0, 0.0))
                        .mul(&alpha_l.invert().map_err(|_| CatalogError::Arithmetic)?);
                    LagrangianObject::new(n, LagrangianKind::LTorus { tau, holonomy: hol })?
                }
            }
            Generator::STilde { alpha, .. } => {
                let val = alpha.val().ok_or(CatalogError::Arithmetic)?;
                if val >= Exp::zero() {
                    LagrangianObject::new(
                        n,
                        LagrangianKind::ZeroSectionEven { alpha: alpha.clone(), beta: NovikovNum::one() },
                    )?
                } else {
                    // u² acts by α on S̃_α, so α = T^{−2(n−1)τ}U^{−1}.
                    let tau = -val / Ratio::from_integer(2 * (n as i128 - 1));
                    let hol = NovikovNum::monomial(val, Complex64::new(1.0, 0.0))
                        .mul(&alpha.invert().map_err(|_| CatalogError::Arithmetic)?);
                    LagrangianObject::new(n, LagrangianKind::LTorus { tau, holonomy: hol })?
                }
            }
        };
        if !out.iter().any(|o| objects_close(o, &obj)) {
            out.push(obj);
        }
    }
    // Faithfulness of the matching: everything emitted pairs nontrivially.
    for obj in &out {
        let (e0, e1) = kumod::ext(&proper_module(obj)?, m)?;
        if e0 + e1 == 0 {
            return Err(CatalogError::InvalidObject(
                "matched object does not pair with the module".into(),
            ));
        }
    }
    Ok(out)
}

fn objects_close(a: &LagrangianObject, b: &LagrangianObject) -> bool {
    use LagrangianKind::*;
    if a.n != b.n {
        return false;
    }
    match (&a.kind, &b.kind) {
        (ZeroSectionOdd { alpha: x }, ZeroSectionOdd { alpha: y }) => x.approx_eq(y, 1e-8),
        (ZeroSectionEven { alpha: x, beta: bx }, ZeroSectionEven { alpha: y, beta: by }) => {
            x.approx_eq(y, 1e-8) && bx.approx_eq(by, 1e-8)
        }
        (LTorus { tau: s, holonomy: hx }, LTorus { tau: t, holonomy: hy })
        | (T3Torus { tau: s, holonomy: hx }, T3Torus { tau: t, holonomy: hy }) => {
            s == t && hx.approx_eq(hy, 1e-8)
        }
        (Fiber, Fiber) | (ConormalN, ConormalN) => true,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Endomorphism algebra of N
// ---------------------------------------------------------------------------

/// Degree table and multiplication rules of the endomorphism algebra
/// B = End(F ⊕ F[1]): matrix units over 𝕂[u] with u central of degree 1 − n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndAlgebraTable {
    pub u_degree: i32,
    /// Rows (degree, generators in that degree), highest degree first.
    pub degrees: Vec<(i32, Vec<String>)>,
    /// Matrix-unit products a·b = c (absent pairs multiply to zero).
    pub products: Vec<(String, String, String)>,
    pub u_central: bool,
}

/// The table for n = 3 (deg u = −2), generators listed down to degree −3.
pub fn b_algebra_table() -> EndAlgebraTable {
    // Matrix units as index pairs: e₁ = (1,1), e₂ = (2,2), e₂₁ = (2,1),
    // e₁₂ = (1,2); products computed by the matrix-unit rule
    // e_{ij} e_{kl} = δ_{jk} e_{il}.
    let units = [("e1", (1, 1)), ("e2", (2, 2)), ("e21", (2, 1)), ("e12", (1, 2))];
    let name_of = |p: (u8, u8)| units.iter().find(|(_, q)| *q == p).map(|(s, _)| s.to_string());
    let mut products = Vec::new();
    for (na, (i, j)) in units {
        for (nb, (k, l)) in units {
            if j == k {
                products.push((na.to_string(), nb.to_string(), name_of((i, l)).unwrap()));
            }
        }
    }
    EndAlgebraTable {
        u_degree: -2,
        degrees: vec![
            (1, vec!["e21".into()]),
            (0, vec!["e1".into(), "e2".into()]),
            (-1, vec!["e12".into(), "u e21".into()]),
            (-2, vec!["u e1".into(), "u e2".into()]),
            (-3, vec!["u e12".into(), "u^2 e21".into()]),
        ],
        products,
        u_central: true,
    }
}

// ---------------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ObjectJson {
    kind: String,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<(i128, i128)>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    u: Option<NovikovNum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<NovikovNum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<NovikovNum>,
}

impl Serialize for LagrangianObject {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut j = ObjectJson { kind: String::new(), n: self.n, tau: None, u: None, alpha: None, beta: None };
        match &self.kind {
            LagrangianKind::ZeroSectionOdd { alpha } => {
                j.kind = "ZeroSectionOdd".into();
                j.alpha = Some(alpha.clone());
            }
            LagrangianKind::ZeroSectionEven { alpha, beta } => {
                j.kind = "ZeroSectionEven".into();
                j.alpha = Some(alpha.clone());
                j.beta = Some(beta.clone());
            }
            LagrangianKind::LTorus { tau, holonomy } => {
                j.kind = "LTorus".into();
                j.tau = Some((*tau.numer(), *tau.denom()));
                j.u = Some(holonomy.clone());
            }
            LagrangianKind::T3Torus { tau, holonomy } => {
                j.kind = "T3Torus".into();
                j.tau = Some((*tau.numer(), *tau.denom()));
                j.u = Some(holonomy.clone());
            }
            LagrangianKind::Fiber => j.kind = "Fiber".into(),
            LagrangianKind::ConormalN => j.kind = "ConormalN".into(),
        }
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LagrangianObject {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ObjectJson::deserialize(d)?;
        let tau = |t: Option<(i128, i128)>| -> Result<Exp, D::Error> {
            let (num, den) = t.ok_or_else(|| D::Error::custom("missing tau"))?;
            if den == 0 {
                return Err(D::Error::custom("tau denominator is zero"));
            }
            Ok(Ratio::new(num, den))
        };
        let kind = match j.kind.as_str() {
            "ZeroSectionOdd" => LagrangianKind::ZeroSectionOdd {
                alpha: j.alpha.ok_or_else(|| D::Error::custom("missing alpha"))?,
            },
            "ZeroSectionEven" => LagrangianKind::ZeroSectionEven {
                alpha: j.alpha.ok_or_else(|| D::Error::custom("missing alpha"))?,
                beta: j.beta.ok_or_else(|| D::Error::custom("missing beta"))?,
            },
            "LTorus" => LagrangianKind::LTorus {
                tau: tau(j.tau)?,
                holonomy: j.u.ok_or_else(|| D::Error::custom("missing U"))?,
            },
            "T3Torus" => LagrangianKind::T3Torus {
                tau: tau(j.tau)?,
                holonomy: j.u.ok_or_else(|| D::Error::custom("missing U"))?,
            },
            "Fiber" => LagrangianKind::Fiber,
            "ConormalN" => LagrangianKind::ConormalN,
            other => return Err(D::Error::custom(format!("unknown kind {other:?}"))),
        };
        LagrangianObject::new(j.n, kind).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ltorus(n: u32, tau: (i128, i128), hol: NovikovNum) -> LagrangianObject {
        LagrangianObject::new(
            n,
            LagrangianKind::LTorus { tau: Ratio::new(tau.0, tau.1), holonomy: hol },
        )
        .unwrap()
    }

    fn t3(tau: (i128, i128), hol: NovikovNum) -> LagrangianObject {
        LagrangianObject::new(
            3,
            LagrangianKind::T3Torus { tau: Ratio::new(tau.0, tau.1), holonomy: hol },
        )
        .unwrap()
    }

    #[test]
    fn invariants_enforced() {
        assert!(LagrangianObject::new(
            4,
            LagrangianKind::ZeroSectionOdd { alpha: NovikovNum::one() }
        )
        .is_err());
        assert!(LagrangianObject::new(
            3,
            LagrangianKind::ZeroSectionOdd { alpha: NovikovNum::t_pow(-1, 1) }
        )
        .is_err());
        assert!(LagrangianObject::new(
            5,
            LagrangianKind::T3Torus { tau: Ratio::new(1, 1), holonomy: NovikovNum::one() }
        )
        .is_err());
        assert!(LagrangianObject::new(
            3,
            LagrangianKind::LTorus { tau: Ratio::new(1, 1), holonomy: NovikovNum::t_pow(1, 1) }
        )
        .is_err());
    }

    #[test]
    fn zero_section_module() {
        let a = crate::novikov::parse("2*T^(0) + 1*T^(1)").unwrap();
        let obj =
            LagrangianObject::new(3, LagrangianKind::ZeroSectionOdd { alpha: a.clone() }).unwrap();
        let YonedaImage::Module(m) = yoneda_module(&obj).unwrap() else { panic!() };
        assert_eq!((m.dim_even, m.dim_odd), (1, 0));
        assert!(m.u.get(0, 0).approx_eq(&a, 1e-10));
    }

    #[test]
    fn l_torus_splits_into_sqrt_branches() {
        let obj = ltorus(3, (1, 1), NovikovNum::one());
        let YonedaImage::Module(m) = yoneda_module(&obj).unwrap() else { panic!() };
        assert_eq!((m.dim_even, m.dim_odd), (2, 0));
        // Eigenvalues ±T^{−2}.
        let want = NovikovNum::t_pow(-2, 1);
        let e0 = m.u.get(0, 0);
        let e1 = m.u.get(1, 1);
        assert!(e0.approx_eq(&want, 1e-8) || e0.approx_eq(&want.neg(), 1e-8));
        assert!(e1.approx_eq(&want, 1e-8) || e1.approx_eq(&want.neg(), 1e-8));
        assert!(!e0.approx_eq(e1, 1e-8));
    }

    #[test]
    fn t3_module_and_self_pairing() {
        let obj = t3((1, 1), NovikovNum::one());
        let YonedaImage::Module(m) = yoneda_module(&obj).unwrap() else { panic!() };
        assert_eq!((m.dim_even, m.dim_odd), (1, 1));
        // rank H*(T³) = 8.
        assert_eq!(hf_dims(&obj, &obj).unwrap(), (4, 4));
    }

    #[test]
    fn l_torus_self_pairing() {
        let obj = ltorus(3, (1, 2), NovikovNum::one());
        let (e0, e1) = hf_dims(&obj, &obj).unwrap();
        // rank H*(S¹ × S²) = 4.
        assert_eq!(e0 + e1, 4);
    }

    #[test]
    fn tau_classification() {
        let taus = [(1, 2), (1, 1), (3, 2)];
        for &ta in &taus {
            for &tb in &taus {
                let a = ltorus(3, ta, NovikovNum::one());
                let b = t3(tb, NovikovNum::one());
                let (e0, e1) = hf_dims(&a, &b).unwrap();
                assert_eq!(e0 + e1 > 0, ta == tb, "tau {ta:?} vs {tb:?}");
            }
        }
    }

    #[test]
    fn zero_section_never_meets_torus() {
        let zs = LagrangianObject::new(
            3,
            LagrangianKind::ZeroSectionOdd { alpha: NovikovNum::from_real(5.0) },
        )
        .unwrap();
        let lt = ltorus(3, (1, 1), NovikovNum::one());
        assert_eq!(hf_dims(&zs, &lt).unwrap(), (0, 0));
    }

    #[test]
    fn verdicts() {
        let a = ltorus(3, (1, 1), NovikovNum::one());
        let r = displaceability_report(&a, &a).unwrap();
        assert_eq!(r.verdict, "not displaceable");
        assert!(!r.displaceability_certified);
        let b = ltorus(3, (3, 2), NovikovNum::one());
        let r2 = displaceability_report(&a, &b).unwrap();
        assert!(r2.verdict.contains("no obstruction"));
        assert_eq!(r2.dims, (0, 0));
    }

    #[test]
    fn matched_s1xs2_and_t3_not_displaceable() {
        let lt = ltorus(3, (1, 1), NovikovNum::one());
        let tt = t3((1, 1), NovikovNum::one());
        assert_eq!(displaceability_report(&lt, &tt).unwrap().verdict, "not displaceable");
    }

    #[test]
    fn match_zero_section() {
        let m = kumod::make_s(3, &NovikovNum::from_real(5.0), 0);
        let objs = match_generators(&m, false).unwrap();
        assert_eq!(objs.len(), 1);
        assert!(matches!(objs[0].kind, LagrangianKind::ZeroSectionOdd { .. }));
    }

    #[test]
    fn match_torus_both_ways() {
        let m = kumod::make_s(3, &NovikovNum::t_pow(-2, 1), 0);
        let objs = match_generators(&m, false).unwrap();
        assert_eq!(objs.len(), 1);
        let LagrangianKind::LTorus { tau, .. } = &objs[0].kind else { panic!() };
        assert_eq!(*tau, Ratio::new(1, 1));

        let objs2 = match_generators(&m, true).unwrap();
        let LagrangianKind::T3Torus { tau, .. } = &objs2[0].kind else { panic!() };
        assert_eq!(*tau, Ratio::new(1, 1));
    }

    #[test]
    fn match_even_n() {
        let m = kumod::make_s_tilde(2, &NovikovNum::from_real(3.0));
        let objs = match_generators(&m, false).unwrap();
        assert_eq!(objs.len(), 1);
        let LagrangianKind::ZeroSectionEven { alpha, beta } = &objs[0].kind else { panic!() };
        assert!(alpha.approx_eq(&NovikovNum::from_real(3.0), 1e-8));
        assert!(beta.approx_eq(&NovikovNum::one(), 1e-8));
    }

    #[test]
    fn ext_additive_over_split_forms() {
        let a = ltorus(3, (1, 1), NovikovNum::one());
        let b = t3((1, 1), NovikovNum::one());
        let ma = proper_module(&a).unwrap();
        let mb = proper_module(&b).unwrap();
        let whole = kumod::ext(&ma, &mb).unwrap();
        let parts = kumod::split_decompose(&ma).unwrap();
        let mut total = (0, 0);
        for (g, mult) in parts {
            let Generator::S { alpha, parity, .. } = g else { panic!() };
            let sm = kumod::make_s(3, &alpha, parity);
            let (e0, e1) = kumod::ext(&sm, &mb).unwrap();
            total.0 += e0 * mult;
            total.1 += e1 * mult;
        }
        assert_eq!(whole, total);
    }

    #[test]
    fn b_table_contents() {
        let t = b_algebra_table();
        assert_eq!(t.u_degree, -2);
        assert!(t.u_central);
        let deg = |g: &str| t.degrees.iter().find(|(_, v)| v.iter().any(|x| x == g)).unwrap().0;
        assert_eq!(deg("e21"), 1);
        assert_eq!(deg("e12"), -1);
        assert_eq!(deg("u e1"), -2);
        assert_eq!(deg("u e2"), -2);
        assert!(t
            .products
            .contains(&("e12".to_string(), "e21".to_string(), "e1".to_string())));
        assert!(t
            .products
            .contains(&("e1".to_string(), "e1".to_string(), "e1".to_string())));
        // e21·e21 = 0: no product entry.
        assert!(!t.products.iter().any(|(a, b, _)| a == "e21" && b == "e21"));
    }

    #[test]
    fn json_roundtrip() {
        let obj = ltorus(3, (1, 1), NovikovNum::one());
        let s = serde_json::to_string(&obj).unwrap();
        assert!(s.contains("\"kind\":\"LTorus\""));
        assert!(s.contains("\"tau\":[1,1]"));
        assert!(s.contains("\"U\""));
        let back: LagrangianObject = serde_json::from_str(&s).unwrap();
        assert_eq!(back, obj);

        let bad = "{\"kind\":\"T3Torus\",\"n\":5,\"tau\":[1,1],\"U\":{\"terms\":[[0,1,1.0,0.0]],\"cutoff\":null}}";
        assert!(serde_json::from_str::<LagrangianObject>(bad).is_err());
    }
}
