//! Norm-attainment verdicts for dual truncated Toeplitz operators.
//!
//! Symbolic verdicts come from Blaschke factorizations of the symbol; numeric
//! evidence comes from finite sections and never turns into a proof on its
//! own.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{coefficients_from_samples, norm_sqr_on_arcs, ArcSet, FourierVector};
use crate::inner::{is_inner_rational, BlaschkeProduct, RationalFunction, INNER_GRID, UNIMODULAR_TOL};
use crate::operators::{
    block_to_laurent, dtto_block, dtto_direct, extremal_space, project_model, CLUSTER_TOL, U_EPS,
};
use crate::par::Execution;
use crate::C64;

/// Grid used to classify the modulus of analytic symbols.
pub const CLASS_GRID: usize = 8192;
/// Pointwise tolerance for witness identities on the circle.
pub const WITNESS_TOL: f64 = 1e-10;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn circle_point(m: usize, j: usize) -> (f64, C64) {
    let t = 2.0 * PI * j as f64 / m as f64;
    (t, C64::from_polar(1.0, t))
}

/// The symbol classes the decision layer understands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    /// `c · num / den` with coprime Blaschke products of constant 1.
    RationalUnimodular { c: C64, num: BlaschkeProduct, den: BlaschkeProduct },
    /// Rational function with poles outside the closed disk.
    RationalAnalytic { f: RationalFunction },
    /// Indicator of a finite union of arcs.
    ArcIndicator { arcs: ArcSet },
}

impl SymbolSpec {
    /// Quotient in lowest terms; constants of `num` and `den` fold into `c`.
    pub fn unimodular(c: C64, num: BlaschkeProduct, den: BlaschkeProduct) -> Result<Self> {
        if (c.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidBlaschke(format!("constant {c} is not unimodular")));
        }
        let c = c * num.constant() / den.constant();
        let g = num.gcd(&den);
        Ok(SymbolSpec::RationalUnimodular { c, num: num.divide(&g)?, den: den.divide(&g)? })
    }

    pub fn blaschke(b: BlaschkeProduct) -> Self {
        let c = b.constant();
        SymbolSpec::RationalUnimodular { c, num: b.normalized(), den: BlaschkeProduct::unit() }
    }

    pub fn analytic(f: RationalFunction) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        f.check_analytic()?;
        Ok(SymbolSpec::RationalAnalytic { f })
    }

    /// The full circle collapses to the constant symbol 1.
    pub fn arc(arcs: ArcSet) -> Self {
        if arcs.is_full_circle() {
            return SymbolSpec::blaschke(BlaschkeProduct::unit());
        }
        SymbolSpec::ArcIndicator { arcs }
    }

    /// `φ̄`, when it stays in a supported class. Conjugating a Blaschke
    /// quotient swaps numerator and denominator and conjugates the constant.
    pub fn conj(&self) -> Option<Self> {
        match self {
            SymbolSpec::RationalUnimodular { c, num, den } => {
                Some(SymbolSpec::RationalUnimodular { c: c.conj(), num: den.clone(), den: num.clone() })
            }
            SymbolSpec::ArcIndicator { .. } => Some(self.clone()),
            SymbolSpec::RationalAnalytic { f } => {
                (f.numerator().degree() == 0 && f.denominator().degree() == 0).then(|| SymbolSpec::RationalAnalytic {
                    f: RationalFunction::constant(f.eval(ONE).conj()),
                })
            }
        }
    }

    /// Boundary value at `e^{it}`.
    pub fn eval(&self, t: f64) -> C64 {
        let z = C64::from_polar(1.0, t);
        match self {
            SymbolSpec::RationalUnimodular { c, num, den } => c * num.eval(z) / den.eval(z),
            SymbolSpec::RationalAnalytic { f } => f.eval(z),
            SymbolSpec::ArcIndicator { arcs } => {
                if arcs.contains(t.rem_euclid(2.0 * PI)) {
                    ONE
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            SymbolSpec::RationalAnalytic { f } => f.sup_norm(),
            _ => 1.0,
        }
    }

    /// Fourier coefficients on `[-n, n]`.
    pub fn fourier_window(&self, n: usize) -> FourierVector {
        let ni = n as i64;
        match self {
            SymbolSpec::RationalUnimodular { c, num, den } => {
                let r = num.max_zero_modulus().max(den.max_zero_modulus());
                // coefficients decay like k^{deg} r^{|k|}; pad past the 1e-18 level
                let pad = if r == 0.0 {
                    0
                } else {
                    (1.5 * (1e-18f64).ln() / r.ln()).ceil() as usize + 16
                };
                let span = (num.degree() + den.degree()) as usize;
                let m = (2 * (n + pad + span) + 2).next_power_of_two().max(64);
                let samples: Vec<C64> = (0..m)
                    .map(|j| {
                        let (_, z) = circle_point(m, j);
                        c * num.eval(z) / den.eval(z)
                    })
                    .collect();
                let coeffs = coefficients_from_samples(&samples);
                FourierVector::from_fn(-ni, ni, |k| coeffs[k.rem_euclid(m as i64) as usize])
            }
            SymbolSpec::RationalAnalytic { f } => {
                let t = f.taylor_coeffs(1e-17).expect("analytic symbols are checked at construction");
                FourierVector::from_fn(-ni, ni, |k| t.coeff(k))
            }
            SymbolSpec::ArcIndicator { arcs } => FourierVector::from_fn(-ni, ni, |k| arcs.coefficient(k)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnimodularityClass {
    /// `|φ| = ‖φ‖_∞` almost everywhere.
    #[serde(rename = "unimodular_ae")]
    UnimodularAE,
    /// `|φ| < ‖φ‖_∞` almost everywhere.
    #[serde(rename = "strictly_less_ae")]
    StrictlyLessAE,
    /// `|φ| = ‖φ‖_∞` on a set of positive measure that is not everything.
    Mixed,
}

pub fn unimodularity_class(phi: &SymbolSpec) -> UnimodularityClass {
    match phi {
        SymbolSpec::RationalUnimodular { .. } => UnimodularityClass::UnimodularAE,
        SymbolSpec::ArcIndicator { arcs } if arcs.is_full_circle() => UnimodularityClass::UnimodularAE,
        SymbolSpec::ArcIndicator { .. } => UnimodularityClass::Mixed,
        SymbolSpec::RationalAnalytic { f } => {
            let s = f.sup_norm();
            let (lo, hi) = f.modulus_range(CLASS_GRID);
            if hi - lo <= 1e-9 * s {
                return UnimodularityClass::UnimodularAE;
            }
            // a rational modulus that is not constant meets its max at
            // finitely many points; a fat level set would show up here
            let near_max = (0..CLASS_GRID)
                .filter(|&j| f.eval(circle_point(CLASS_GRID, j).1).norm() >= s * (1.0 - 1e-9))
                .count();
            if near_max > CLASS_GRID / 64 {
                UnimodularityClass::Mixed
            } else {
                UnimodularityClass::StrictlyLessAE
            }
        }
    }
}

/// `φ = ū ψ̄₊ χ₊`, with extremals `u ψ₊ u₁ H² ⊕ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticWitness {
    pub psi_plus: BlaschkeProduct,
    pub chi_plus: BlaschkeProduct,
    pub d: BlaschkeProduct,
    pub u1: BlaschkeProduct,
    pub extremal_generator: BlaschkeProduct,
    /// `max |φ u ψ₊ - χ₊|` on the witness grid.
    pub grid_residual: f64,
}

/// `φ = u ψ₋ χ̄₋`, with extremals `0 ⊕ ψ̄₋ ū₁ H²₋`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoanalyticWitness {
    pub psi_minus: BlaschkeProduct,
    pub chi_minus: BlaschkeProduct,
    pub u1: BlaschkeProduct,
    /// `ψ₋ u₁`; the extremals are its conjugate times `H²₋`.
    pub extremal_generator_conj: BlaschkeProduct,
    /// `max |φ - u ψ₋ χ̄₋|` on the witness grid.
    pub grid_residual: f64,
}

fn unimodular_parts(phi: &SymbolSpec) -> Result<(C64, &BlaschkeProduct, &BlaschkeProduct)> {
    match phi {
        SymbolSpec::RationalUnimodular { c, num, den } => Ok((*c, num, den)),
        _ => Err(Error::UnsupportedCombination("factorization witnesses need a Blaschke quotient".into())),
    }
}

fn grid_max(f: impl Fn(f64, C64) -> f64) -> f64 {
    (0..INNER_GRID)
        .map(|j| {
            let (t, z) = circle_point(INNER_GRID, j);
            f(t, z)
        })
        .fold(0.0, f64::max)
}

/// Analytic factorization with the minimal `ψ₊ = den / gcd(u, den)`.
pub fn analytic_na(phi: &SymbolSpec, u: &BlaschkeProduct) -> Result<AnalyticWitness> {
    let (c, num, den) = unimodular_parts(phi)?;
    let g = u.gcd(den);
    let psi_plus = den.divide(&g)?;
    let chi_plus = num.multiply(&u.divide(&g)?).with_constant(c * u.constant());
    let d = u.gcd(&chi_plus);
    let u1 = u.divide(&d)?;
    let extremal_generator = u.multiply(&psi_plus).multiply(&u1);
    let grid_residual = grid_max(|t, z| (phi.eval(t) * u.eval(z) * psi_plus.eval(z) - chi_plus.eval(z)).norm());
    Ok(AnalyticWitness { psi_plus, chi_plus, d, u1, extremal_generator, grid_residual })
}

/// Coanalytic factorization, obtained from the analytic one for `φ̄`.
pub fn coanalytic_na(phi: &SymbolSpec, u: &BlaschkeProduct) -> Result<CoanalyticWitness> {
    let conj = phi.conj().ok_or_else(|| Error::UnsupportedCombination("symbol has no conjugate in class".into()))?;
    let w = analytic_na(&conj, u)?;
    let grid_residual = grid_max(|t, z| {
        (phi.eval(t) - u.eval(z) * w.psi_plus.eval(z) * w.chi_plus.eval(z).conj()).norm()
    });
    Ok(CoanalyticWitness {
        extremal_generator_conj: w.psi_plus.multiply(&w.u1),
        psi_minus: w.psi_plus,
        chi_minus: w.chi_plus,
        u1: w.u1,
        grid_residual,
    })
}

/// `φ = ‖φ‖_∞ Θ₁ Θ̄₂` with coprime inner `Θ₁, Θ₂`, when the symbol has one.
pub fn yoshino_na(phi: &SymbolSpec) -> Option<(BlaschkeProduct, BlaschkeProduct)> {
    match phi {
        SymbolSpec::RationalUnimodular { c, num, den } => Some((num.with_constant(*c), den.clone())),
        SymbolSpec::RationalAnalytic { f } => {
            let s = f.sup_norm();
            match is_inner_rational(&f.scale(C64::new(1.0 / s, 0.0)), 1e-9) {
                (true, Some(theta)) => Some((theta, BlaschkeProduct::unit())),
                _ => None,
            }
        }
        SymbolSpec::ArcIndicator { .. } => None,
    }
}

/// Extremal family `u Θ₂ H² ⊂ uH²` inherited from a Toeplitz extremal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeFamily {
    pub generator: BlaschkeProduct,
    /// `1 - ‖D_φ v‖/‖v‖` for the truncated generator, once checked.
    pub extremality_defect: Option<f64>,
}

pub fn toeplitz_to_dtto_bridge(_theta1: &BlaschkeProduct, theta2: &BlaschkeProduct, u: &BlaschkeProduct) -> BridgeFamily {
    BridgeFamily { generator: u.multiply(theta2), extremality_defect: None }
}

/// Whether two extremal generators agree up to phase and a divisor of `u`.
pub fn generators_agree(analytic: &BlaschkeProduct, bridge: &BlaschkeProduct, u: &BlaschkeProduct) -> bool {
    if analytic.eq_up_to_phase(bridge) {
        return true;
    }
    let refines = |a: &BlaschkeProduct, b: &BlaschkeProduct| a.divide(b).map(|q| q.divides(u)).unwrap_or(false);
    refines(analytic, bridge) || refines(bridge, analytic)
}

/// A proof that `D_φ` does not attain its norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotNaProof {
    pub rule: String,
    pub sup_norm: f64,
    pub grid_min_modulus: f64,
}

/// `|φ| < ‖φ‖_∞` a.e. gives `‖M_φ h‖ < ‖φ‖_∞ ‖h‖` for every `h ≠ 0`.
pub fn non_na_rule(phi: &SymbolSpec) -> Option<NotNaProof> {
    if unimodularity_class(phi) != UnimodularityClass::StrictlyLessAE {
        return None;
    }
    let SymbolSpec::RationalAnalytic { f } = phi else {
        return None;
    };
    Some(NotNaProof {
        rule: "modulus strictly below the sup norm almost everywhere".into(),
        sup_norm: f.sup_norm(),
        grid_min_modulus: f.modulus_range(CLASS_GRID).0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summand {
    A,
    B,
    Either,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectSumVerdict {
    pub na: bool,
    pub side: Option<Summand>,
}

/// Norm attainment of `A ⊕ B` from `‖A‖ = α`, `‖B‖ = β` and the summands' own verdicts.
pub fn direct_sum_na(alpha: f64, beta: f64, na_a: bool, na_b: bool) -> DirectSumVerdict {
    let side = if alpha > beta {
        na_a.then_some(Summand::A)
    } else if beta > alpha {
        na_b.then_some(Summand::B)
    } else {
        match (na_a, na_b) {
            (true, true) => Some(Summand::Either),
            (true, false) => Some(Summand::A),
            (false, true) => Some(Summand::B),
            (false, false) => None,
        }
    };
    DirectSumVerdict { na: side.is_some(), side }
}

/// Numerical kernel of a finite section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    /// Number of input slots.
    pub window: usize,
    pub dim: usize,
    /// Singular values in descending order (padded with zeros to `window`).
    pub singular_values: Vec<f64>,
    /// Right singular vectors with `σ < tol`, in input-slot coordinates.
    pub basis: Vec<Vec<C64>>,
}

fn kernel_of_columns(columns: Vec<FourierVector>, tol: f64) -> KernelEstimate {
    let n = columns.len();
    let lo = columns.iter().map(|c| c.lo()).min().unwrap_or(0);
    let hi = columns.iter().map(|c| c.hi()).max().unwrap_or(0);
    let rows = ((hi - lo + 1) as usize).max(n);
    let m = DMatrix::from_fn(rows, n, |i, j| columns[j].coeff(lo + i as i64));
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut singular_values = Vec::with_capacity(n);
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        singular_values.push(s);
        if s < tol {
            basis.push(v_t.row(i).iter().map(|c| c.conj()).collect());
        }
    }
    KernelEstimate { window: n, dim: basis.len(), singular_values, basis }
}

fn symbol_pad(n: usize) -> usize {
    n + 64
}

/// Kernel of `h ↦ P_{K_u}(φ u h)` on `Hplus(N)`.
pub fn kernel_mplus(phi: &SymbolSpec, u: &BlaschkeProduct, n: usize, tol: f64) -> KernelEstimate {
    let w = phi.fourier_window(symbol_pad(n));
    let uc = u.coeffs(U_EPS);
    let wu = crate::fourier::convolve(&w, &uc);
    let cols = (0..=n as i64)
        .map(|k| project_model(&uc, &wu.shift(k)))
        .collect();
    kernel_of_columns(cols, tol)
}

/// Kernel of `g ↦ P_{K_u}(φ g)` on `Hminus(N)`.
pub fn kernel_mminus(phi: &SymbolSpec, u: &BlaschkeProduct, n: usize, tol: f64) -> KernelEstimate {
    let w = phi.fourier_window(symbol_pad(n));
    let uc = u.coeffs(U_EPS);
    let cols = (1..=n as i64).map(|j| project_model(&uc, &w.shift(-j))).collect();
    kernel_of_columns(cols, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NA_analytic")]
    NaAnalytic,
    #[serde(rename = "NA_coanalytic")]
    NaCoanalytic,
    #[serde(rename = "NA_both")]
    NaBoth,
    #[serde(rename = "NA_mixed_evidence_only")]
    NaMixedEvidenceOnly,
    #[serde(rename = "NotNA")]
    NotNa,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NaAnalytic => "NA_analytic",
            Verdict::NaCoanalytic => "NA_coanalytic",
            Verdict::NaBoth => "NA_both",
            Verdict::NaMixedEvidenceOnly => "NA_mixed_evidence_only",
            Verdict::NotNa => "NotNA",
            Verdict::Undecided => "Undecided",
        }
    }

    /// Analytic-side extremals exist.
    pub fn has_analytic(&self) -> bool {
        matches!(self, Verdict::NaAnalytic | Verdict::NaBoth)
    }

    pub fn has_coanalytic(&self) -> bool {
        matches!(self, Verdict::NaCoanalytic | Verdict::NaBoth)
    }
}

/// Finite-section settings for the evidence part of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub n_values: Vec<usize>,
    pub u_eps: f64,
    pub cluster_tol: f64,
    pub execution: Execution,
    /// Skip all finite sections when false.
    pub evidence: bool,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self { n_values: vec![16, 32, 64], u_eps: U_EPS, cluster_tol: CLUSTER_TOL, execution: Execution::default(), evidence: true }
    }
}

impl NumericConfig {
    pub fn with_n(n_values: Vec<usize>) -> Self {
        Self { n_values, ..Self::default() }
    }
}

/// One finite-section measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericEvidence {
    pub n: usize,
    /// Norm of the `KuPerpBlock(N)` section.
    pub sigma_max: f64,
    /// `1 - ‖D_φ v‖ / (‖φ‖_∞ ‖v‖)` for the candidate extremal `v`.
    pub extremal_defect: f64,
    /// `‖P_{K_u}(φ v)‖ / ‖v‖`.
    pub membership_residual: f64,
}

/// Explicit extremal `h = χ_{E₁} - (m(E₁)/m(E₂)) χ_{E₂}` of an arc symbol with `u = z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcExtremal {
    pub e1: (f64, f64),
    pub e2: (f64, f64),
    pub ratio: f64,
    /// `(N, ‖D_φ h_N - h_N‖ / ‖h_N‖)`.
    pub residuals: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NAReport {
    pub verdict: Verdict,
    pub class: UnimodularityClass,
    pub analytic: Option<AnalyticWitness>,
    pub coanalytic: Option<CoanalyticWitness>,
    pub yoshino: Option<(BlaschkeProduct, BlaschkeProduct)>,
    pub bridge: Option<BridgeFamily>,
    pub routes_agree: Option<bool>,
    pub not_na: Option<NotNaProof>,
    pub arc_extremal: Option<ArcExtremal>,
    pub numeric_evidence: Vec<NumericEvidence>,
    pub notes: Vec<String>,
}

impl NAReport {
    fn new(verdict: Verdict, class: UnimodularityClass) -> Self {
        Self {
            verdict,
            class,
            analytic: None,
            coanalytic: None,
            yoshino: None,
            bridge: None,
            routes_agree: None,
            not_na: None,
            arc_extremal: None,
            numeric_evidence: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// `D_φ v` and the two evidence residuals for a window vector `v ∈ K_u^⊥`.
fn candidate_evidence(phi_w: &FourierVector, uc: &FourierVector, v: &FourierVector, sup: f64) -> (f64, f64) {
    let vn = v.norm();
    let dv = dtto_direct(phi_w, uc, v);
    let defect = 1.0 - dv.norm() / (sup * vn);
    let member = project_model(uc, &crate::fourier::convolve(phi_w, v)).norm() / vn;
    (defect, member)
}

/// Section norm and residuals at one `N`. The candidate is the given
/// generator truncated to `[0, N]`, or the top singular vector.
pub fn section_evidence(
    phi: &SymbolSpec,
    u: &BlaschkeProduct,
    n: usize,
    generator: Option<&BlaschkeProduct>,
    u_eps: f64,
) -> NumericEvidence {
    let uc = u.coeffs(u_eps);
    let phi_w = phi.fourier_window(2 * n + 16);
    let sup = phi.sup_norm();
    let block = dtto_block(&phi_w, &uc, n);
    let top = extremal_space(&block, 0.0);
    let v = match generator {
        Some(g) => {
            let gc = g.coeffs(u_eps);
            FourierVector::from_fn(0, n as i64, |k| gc.coeff(k))
        }
        None => block_to_laurent(&top.vector(0), &uc, n),
    };
    let (extremal_defect, membership_residual) = candidate_evidence(&phi_w, &uc, &v, sup);
    NumericEvidence { n, sigma_max: top.sigma_max, extremal_defect, membership_residual }
}

fn evidence_trajectory(
    phi: &SymbolSpec,
    u: &BlaschkeProduct,
    generator: Option<&BlaschkeProduct>,
    cfg: &NumericConfig,
) -> Vec<NumericEvidence> {
    if !cfg.evidence {
        return Vec::new();
    }
    cfg.execution.map(&cfg.n_values, |&n| section_evidence(phi, u, n, generator, cfg.u_eps))
}

/// Splits the longest arc in half.
pub fn arc_split(arcs: &ArcSet) -> ((f64, f64), (f64, f64)) {
    let &(s, e) = arcs
        .arcs()
        .iter()
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
        .expect("arc sets are non-empty");
    let mid = 0.5 * (s + e);
    ((s, mid), (mid, e))
}

/// `‖D_φ h_N - h_N‖ / ‖h_N‖` for `φ = χ_E`, `u = z` and the window `[-N, N]`
/// of `h = χ_{E₁} - (m(E₁)/m(E₂)) χ_{E₂}`.
///
/// With `K_z` the constants and `ĥ(0) = 0`,
/// `‖D_φ h_N - h_N‖² = ∫_{E^c} |h_N|² - |⟨φ h_N, 1⟩|²`.
pub fn chi_e_residual(arcs: &ArcSet, e1: (f64, f64), e2: (f64, f64), n: usize) -> Result<f64> {
    let a1 = ArcSet::new(vec![e1])?;
    let a2 = ArcSet::new(vec![e2])?;
    let ratio = (e1.1 - e1.0) / (e2.1 - e2.0);
    let ni = n as i64;
    let h = FourierVector::from_fn(-ni, ni, |k| a1.coefficient(k) - a2.coefficient(k) * ratio);
    let total = h.norm_sqr();
    let outside = (total - norm_sqr_on_arcs(&h, arcs)).max(0.0);
    let c0: C64 = (-ni..=ni).map(|k| h.coeff(k) * arcs.coefficient(-k)).sum();
    Ok((outside - c0.norm_sqr()).max(0.0).sqrt() / total.sqrt())
}

fn is_z(u: &BlaschkeProduct) -> bool {
    u.power() == 1 && u.zeros().is_empty()
}

fn arc_construction(arcs: &ArcSet, u: &BlaschkeProduct, cfg: &NumericConfig) -> Result<ArcExtremal> {
    if !is_z(u) {
        return Err(Error::UnsupportedCombination(format!(
            "explicit arc extremal needs u = z, got degree {}",
            u.degree()
        )));
    }
    let (e1, e2) = arc_split(arcs);
    let ns = if cfg.evidence { cfg.n_values.clone() } else { Vec::new() };
    let residuals = cfg
        .execution
        .map(&ns, |&n| chi_e_residual(arcs, e1, e2, n).map(|r| (n, r)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ArcExtremal { e1, e2, ratio: (e1.1 - e1.0) / (e2.1 - e2.0), residuals })
}

fn decide_unimodular(phi: &SymbolSpec, u: &BlaschkeProduct, cfg: &NumericConfig, report: &mut NAReport) -> Result<()> {
    let a = analytic_na(phi, u)?;
    let c = coanalytic_na(phi, u)?;
    let mut verdict_ok = true;
    if a.grid_residual > WITNESS_TOL {
        report.notes.push(format!("analytic witness grid residual {:.3e} above tolerance", a.grid_residual));
        verdict_ok = false;
    }
    if c.grid_residual > WITNESS_TOL {
        report.notes.push(format!("coanalytic witness grid residual {:.3e} above tolerance", c.grid_residual));
        verdict_ok = false;
    }
    if let Some((t1, t2)) = yoshino_na(phi) {
        let mut bridge = toeplitz_to_dtto_bridge(&t1, &t2, u);
        report.routes_agree = Some(generators_agree(&a.extremal_generator, &bridge.generator, u));
        if cfg.evidence {
            if let Some(&n) = cfg.n_values.last() {
                bridge.extremality_defect = Some(section_evidence(phi, u, n, Some(&bridge.generator), cfg.u_eps).extremal_defect);
            }
        }
        report.yoshino = Some((t1, t2));
        report.bridge = Some(bridge);
    }
    report.numeric_evidence = evidence_trajectory(phi, u, Some(&a.extremal_generator), cfg);
    report.verdict = if verdict_ok { Verdict::NaBoth } else { Verdict::Undecided };
    report.analytic = Some(a);
    report.coanalytic = Some(c);
    Ok(())
}

/// Full decision pipeline.
pub fn decide(phi: &SymbolSpec, u: &BlaschkeProduct, cfg: &NumericConfig) -> NAReport {
    let class = unimodularity_class(phi);
    let mut report = NAReport::new(Verdict::Undecided, class);

    if let Some(proof) = non_na_rule(phi) {
        report.verdict = Verdict::NotNa;
        report.not_na = Some(proof);
        report.numeric_evidence = evidence_trajectory(phi, u, None, cfg);
        return report;
    }

    match (phi, class) {
        (SymbolSpec::RationalUnimodular { .. }, _) => {
            if let Err(e) = decide_unimodular(phi, u, cfg, &mut report) {
                report.notes.push(format!("factorization failed: {e}"));
            }
        }
        (SymbolSpec::RationalAnalytic { f }, UnimodularityClass::UnimodularAE) => match yoshino_na(phi) {
            Some((theta, _)) => {
                let s = f.sup_norm();
                report.notes.push(format!("symbol is {s} times an inner function; witnesses are for the inner part"));
                let inner = SymbolSpec::blaschke(theta);
                if let Err(e) = decide_unimodular(&inner, u, cfg, &mut report) {
                    report.notes.push(format!("factorization failed: {e}"));
                }
            }
            None => {
                report.notes.push("constant modulus but no Blaschke form found".into());
                report.numeric_evidence = evidence_trajectory(phi, u, None, cfg);
            }
        },
        (SymbolSpec::ArcIndicator { arcs }, _) => match arc_construction(arcs, u, cfg) {
            Ok(ext) => {
                report.verdict = Verdict::NaMixedEvidenceOnly;
                report.arc_extremal = Some(ext);
            }
            Err(e) => {
                report.notes.push(e.to_string());
                report.numeric_evidence = evidence_trajectory(phi, u, None, cfg);
            }
        },
        _ => {
            report.notes.push("no symbolic rule applies; finite sections only".into());
            report.numeric_evidence = evidence_trajectory(phi, u, None, cfg);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ba(a: f64) -> BlaschkeProduct {
        BlaschkeProduct::factor(c(a, 0.0)).unwrap()
    }

    fn z() -> BlaschkeProduct {
        BlaschkeProduct::z()
    }

    fn unit() -> BlaschkeProduct {
        BlaschkeProduct::unit()
    }

    fn quotient(num: BlaschkeProduct, den: BlaschkeProduct) -> SymbolSpec {
        SymbolSpec::unimodular(ONE, num, den).unwrap()
    }

    fn half_plus_half_z() -> SymbolSpec {
        SymbolSpec::analytic(RationalFunction::from_poly(Poly::from_real(&[0.5, 0.5]))).unwrap()
    }

    #[test]
    fn classes() {
        assert_eq!(unimodularity_class(&quotient(ba(-0.3), ba(0.5))), UnimodularityClass::UnimodularAE);
        assert_eq!(unimodularity_class(&half_plus_half_z()), UnimodularityClass::StrictlyLessAE);
        let arc = SymbolSpec::arc(ArcSet::new(vec![(0.0, PI)]).unwrap());
        assert_eq!(unimodularity_class(&arc), UnimodularityClass::Mixed);
        let z2 = SymbolSpec::analytic(RationalFunction::from_poly(Poly::monomial(2, ONE))).unwrap();
        assert_eq!(unimodularity_class(&z2), UnimodularityClass::UnimodularAE);
    }

    #[test]
    fn quotients_are_reduced() {
        let s = SymbolSpec::unimodular(ONE, z().multiply(&ba(0.5)), ba(0.5).with_constant(c(0.0, 1.0))).unwrap();
        let SymbolSpec::RationalUnimodular { c: k, num, den } = s else { unreachable!() };
        assert!(num.eq_with_phase(&z()));
        assert!(den.eq_with_phase(&unit()));
        assert!((k - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn fourier_window_matches_values() {
        let s = SymbolSpec::unimodular(c(0.6, 0.8), ba(-0.3), ba(0.5)).unwrap();
        let w = s.fourier_window(80);
        for t in [0.0, 1.0, 2.5, 5.0] {
            assert!((w.eval(t) - s.eval(t)).norm() < 1e-13);
        }
        // z̄ has a single coefficient
        let zb = quotient(unit(), z());
        let w = zb.fourier_window(5);
        assert!((w.coeff(-1) - ONE).norm() < 1e-15);
        assert!(w.coeffs().iter().map(|c| c.norm()).sum::<f64>() - 1.0 < 1e-14);
    }

    #[test]
    fn analytic_examples() {
        let w = analytic_na(&quotient(ba(-0.3), ba(0.5)), &z()).unwrap();
        assert!(w.psi_plus.eq_up_to_phase(&ba(0.5)));
        assert!(w.chi_plus.eq_up_to_phase(&z().multiply(&ba(-0.3))));
        assert!(w.d.eq_up_to_phase(&z()));
        assert!(w.u1.eq_up_to_phase(&unit()));
        assert!(w.extremal_generator.eq_up_to_phase(&z().multiply(&ba(0.5))));
        assert!(w.grid_residual < 1e-12);

        let w = analytic_na(&quotient(unit(), z()), &z()).unwrap();
        assert!(w.psi_plus.eq_with_phase(&unit()));
        assert!(w.chi_plus.eq_with_phase(&unit()));
        assert!(w.d.eq_with_phase(&unit()));
        assert!(w.u1.eq_with_phase(&z()));
        assert!(w.extremal_generator.eq_with_phase(&BlaschkeProduct::monomial(2)));

        let w = analytic_na(&quotient(unit(), unit()), &z()).unwrap();
        assert!(w.chi_plus.eq_with_phase(&z()));
        assert!(w.d.eq_with_phase(&z()));
        assert!(w.extremal_generator.eq_with_phase(&z()));
    }

    #[test]
    fn coanalytic_examples() {
        let w = coanalytic_na(&quotient(z(), unit()), &z()).unwrap();
        assert!(w.psi_minus.eq_with_phase(&unit()));
        assert!(w.chi_minus.eq_with_phase(&unit()));
        assert!(w.u1.eq_with_phase(&z()));
        assert!(w.grid_residual < 1e-13);

        let w = coanalytic_na(&quotient(ba(0.5), ba(-0.3)), &z()).unwrap();
        let mirror = analytic_na(&quotient(ba(-0.3), ba(0.5)), &z()).unwrap();
        assert!(w.psi_minus.eq_up_to_phase(&mirror.psi_plus));
        assert!(w.chi_minus.eq_up_to_phase(&mirror.chi_plus));

        let b = ba(0.4);
        let w = coanalytic_na(&SymbolSpec::blaschke(b.clone()), &b).unwrap();
        assert!(w.psi_minus.eq_with_phase(&unit()));
        assert!(w.chi_minus.eq_up_to_phase(&unit()));
        assert!(w.u1.eq_with_phase(&b));
        assert!(w.grid_residual < 1e-13);
    }

    #[test]
    fn yoshino_and_bridge() {
        let (t1, t2) = yoshino_na(&quotient(ba(-0.3), ba(0.5))).unwrap();
        assert!(t1.eq_up_to_phase(&ba(-0.3)) && t2.eq_up_to_phase(&ba(0.5)));
        let z2 = SymbolSpec::analytic(RationalFunction::from_poly(Poly::monomial(2, ONE))).unwrap();
        let (t1, t2) = yoshino_na(&z2).unwrap();
        assert_eq!((t1.power(), t2.degree()), (2, 0));
        assert!(yoshino_na(&half_plus_half_z()).is_none());

        let b = toeplitz_to_dtto_bridge(&ba(-0.3), &ba(0.5), &z());
        assert!(b.generator.eq_up_to_phase(&z().multiply(&ba(0.5))));
        let b = toeplitz_to_dtto_bridge(&unit(), &z(), &z());
        assert_eq!(b.generator.power(), 2);
        let u = ba(0.2).multiply(&z());
        assert!(toeplitz_to_dtto_bridge(&unit(), &unit(), &u).generator.eq_with_phase(&u));
    }

    #[test]
    fn non_na_examples() {
        assert!(non_na_rule(&half_plus_half_z()).is_some());
        assert!(non_na_rule(&SymbolSpec::arc(ArcSet::new(vec![(0.0, PI)]).unwrap())).is_none());
        assert!(non_na_rule(&quotient(ba(-0.3), ba(0.5))).is_none());
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(direct_sum_na(2.0, 1.0, true, false), DirectSumVerdict { na: true, side: Some(Summand::A) });
        assert_eq!(direct_sum_na(1.0, 1.0, false, false), DirectSumVerdict { na: false, side: None });
        assert_eq!(direct_sum_na(1.0, 2.0, false, true), DirectSumVerdict { na: true, side: Some(Summand::B) });
        assert_eq!(direct_sum_na(1.0, 1.0, true, true).side, Some(Summand::Either));
    }

    /// Diagonal operator `diag(a_k)`: finitely many listed entries and a
    /// tail increasing to `limit` without reaching it.
    struct Diagonal {
        entries: Vec<f64>,
        limit: f64,
    }

    impl Diagonal {
        fn norm(&self) -> f64 {
            self.entries.iter().copied().fold(self.limit, f64::max)
        }
        fn na(&self) -> bool {
            let n = self.norm();
            self.entries.contains(&n)
        }
        fn direct_sum(&self, other: &Self) -> Self {
            let mut entries = self.entries.clone();
            entries.extend(&other.entries);
            Self { entries, limit: self.limit.max(other.limit) }
        }
    }

    #[test]
    fn direct_sum_matches_diagonal_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let levels = [0.5, 1.0, 2.0];
        for _ in 0..500 {
            let make = |rng: &mut ChaCha8Rng| Diagonal {
                entries: (0..rng.random_range(0..4)).map(|_| levels[rng.random_range(0..3)]).collect(),
                limit: levels[rng.random_range(0..3)],
            };
            let a = make(&mut rng);
            let b = make(&mut rng);
            let v = direct_sum_na(a.norm(), b.norm(), a.na(), b.na());
            assert_eq!(v.na, a.direct_sum(&b).na());
        }
    }

    #[test]
    fn kernels() {
        let k = kernel_mplus(&quotient(unit(), z()), &z(), 12, 1e-8);
        assert_eq!((k.window, k.dim), (13, 12));
        let k = kernel_mplus(&quotient(unit(), unit()), &ba(0.3).multiply(&z()), 10, 1e-8);
        assert_eq!(k.dim, 11);
        let k = kernel_mminus(&quotient(unit(), unit()), &z(), 10, 1e-8);
        assert_eq!(k.dim, 10);

        // B_a H² lies in M₊ for φ = B_b / B_a, u = z
        let phi = quotient(ba(-0.3), ba(0.5));
        let w = phi.fourier_window(80);
        let v = ba(0.5).coeffs(1e-16).shift(1);
        let h = FourierVector::from_real(0, &[0.3, -0.2, 0.7]);
        let v = crate::fourier::convolve(&v, &h);
        let r = project_model(&FourierVector::basis(1), &crate::fourier::convolve(&w, &v)).norm();
        assert!(r < 1e-10);
    }

    #[test]
    fn decide_examples() {
        let cfg = NumericConfig::with_n(vec![16, 32]);
        let r = decide(&quotient(ba(-0.3), ba(0.5)), &z(), &cfg);
        assert_eq!(r.verdict, Verdict::NaBoth);
        assert_eq!(r.routes_agree, Some(true));
        assert!(r.numeric_evidence.iter().all(|e| e.extremal_defect < 1e-8 && e.membership_residual < 1e-8));

        let r = decide(&half_plus_half_z(), &z(), &cfg);
        assert_eq!(r.verdict, Verdict::NotNa);
        assert!(r.numeric_evidence.iter().all(|e| e.sigma_max < 1.0));

        let arc = SymbolSpec::arc(ArcSet::new(vec![(0.0, PI)]).unwrap());
        let r = decide(&arc, &z(), &NumericConfig::with_n(vec![64, 128]));
        assert_eq!(r.verdict, Verdict::NaMixedEvidenceOnly);
        let res = &r.arc_extremal.unwrap().residuals;
        assert!(res[1].1 < res[0].1);

        let r = decide(&arc, &ba(0.5), &cfg);
        assert_eq!(r.verdict, Verdict::Undecided);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = c(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
            let u = BlaschkeProduct::factor(a).unwrap().multiply(&z());
            let r = decide(&quotient(ba(0.2), z()), &u, &NumericConfig { evidence: false, ..cfg.clone() });
            assert_eq!(r.verdict, Verdict::NaBoth);
        }
    }

    #[test]
    fn chi_e_residual_decays() {
        let arcs = ArcSet::new(vec![(0.0, PI)]).unwrap();
        let (e1, e2) = arc_split(&arcs);
        assert_eq!((e1, e2), ((0.0, PI / 2.0), (PI / 2.0, PI)));
        let r64 = chi_e_residual(&arcs, e1, e2, 64).unwrap();
        let r256 = chi_e_residual(&arcs, e1, e2, 256).unwrap();
        assert!(r256 < r64 && r256 < 0.1);
    }
}
