//! Certificate-producing checks of the asymptotic sufficiency criteria:
//! profile decay (Troyanov), the curvature/growth contrast (McKean), the
//! Ahmed-Stroock inequalities for U = r^a on model ends, the Gong-Wang
//! finite-mass conditions, and an aggregating dashboard.
//!
//! Every check reports fitted constants on pass and a witness radius on
//! fail. Conditions that a finite range can never refute (their failure is
//! in the exponents) return the `AsymptoticFail` verdict with the estimated
//! crossing radius as witness.

use crate::dec::{self, MeshComplex};
use crate::error::{Error, Result};
use crate::geometry::{self, CompatibleTriple, Profile, ProfileKind, WeightSpec};
use crate::hodge;
use crate::quad::{self, TailClass};

/// Model of one complete end, reduced to its radial data: Δr in closed form,
/// |∇r| = 1, and a lower bound for the Hessian of r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndModel {
    /// Product end [0, ∞) x Y: Δr = 0.
    Cylindrical,
    /// Cone over an (n-1)-manifold: Δr = (n-1)/r.
    Conic { n: usize },
    /// Fibered boundary: conic in k base directions, cylindrical in l fiber
    /// directions: Δr = k/r.
    Fibered { k: usize, l: usize },
    /// Quasi-asymptotically conic, modeled by its radial decay Δr = c/r.
    Qac { n: usize, c: f64 },
}

impl EndModel {
    pub fn dimension(&self) -> usize {
        match *self {
            EndModel::Cylindrical => 2,
            EndModel::Conic { n } => n,
            EndModel::Fibered { k, l } => 1 + k + l,
            EndModel::Qac { n, .. } => n,
        }
    }

    /// Closed-form Δr.
    pub fn laplacian_r(&self, r: f64) -> f64 {
        match *self {
            EndModel::Cylindrical => 0.0,
            EndModel::Conic { n } => (n as f64 - 1.0) / r,
            EndModel::Fibered { k, .. } => k as f64 / r,
            EndModel::Qac { c, .. } => c / r,
        }
    }

    /// Lower bound for ∇²r; zero for every builtin kind.
    pub fn hess_r_lower(&self) -> f64 {
        0.0
    }

    /// Radial volume density v(r) with v' / v = Δr, normalized v(1) = 1.
    pub fn volume_density(&self, r: f64) -> f64 {
        match *self {
            EndModel::Cylindrical => 1.0,
            EndModel::Conic { n } => r.powi(n as i32 - 1),
            EndModel::Fibered { k, .. } => r.powi(k as i32),
            EndModel::Qac { c, .. } => r.powf(c),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            EndModel::Cylindrical => "cylindrical".into(),
            EndModel::Conic { n } => format!("conic:{n}"),
            EndModel::Fibered { k, l } => format!("fibered:{k},{l}"),
            EndModel::Qac { n, c } => format!("qac:{n},{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionVerdict {
    Pass,
    /// Violated at a concrete radius inside the checked range.
    Fail,
    /// Cannot hold at infinity (exponent comparison); the witness is the
    /// estimated crossing radius.
    AsymptoticFail,
}

impl CriterionVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CriterionVerdict::Pass)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CriterionVerdict::Pass => "pass",
            CriterionVerdict::Fail => "fail",
            CriterionVerdict::AsymptoticFail => "asymptotic-fail",
        }
    }
}

/// One criterion outcome with its certificate data.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: String,
    pub verdict: CriterionVerdict,
    /// Set when the fitted quantity sits within the decision band around the
    /// threshold; such verdicts should not be asserted.
    pub boundary: bool,
    /// Cleared when the fit behind the verdict is untrustworthy (e.g. a
    /// non-monotone tail).
    pub reliable: bool,
    /// Fitted constants, in a fixed order for deterministic output.
    pub constants: Vec<(&'static str, f64)>,
    pub r_range: (f64, f64),
    pub witness_r: Option<f64>,
    pub note: String,
}

impl CriterionReport {
    fn pass(id: &str, r_range: (f64, f64), constants: Vec<(&'static str, f64)>) -> Self {
        debug_assert!(!constants.is_empty(), "pass requires fitted constants");
        CriterionReport {
            id: id.into(),
            verdict: CriterionVerdict::Pass,
            boundary: false,
            reliable: true,
            constants,
            r_range,
            witness_r: None,
            note: String::new(),
        }
    }

    fn fail(
        id: &str,
        verdict: CriterionVerdict,
        r_range: (f64, f64),
        witness: f64,
        constants: Vec<(&'static str, f64)>,
        note: &str,
    ) -> Self {
        debug_assert!(!verdict.passed());
        CriterionReport {
            id: id.into(),
            verdict,
            boundary: false,
            reliable: true,
            constants,
            r_range,
            witness_r: Some(witness),
            note: note.into(),
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = note;
        self
    }

    fn flagged_boundary(mut self, yes: bool) -> Self {
        self.boundary = yes;
        self
    }

    fn flagged_unreliable(mut self, unreliable: bool) -> Self {
        self.reliable = !unreliable;
        self
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
    }
}

/// Sample count for tail fits.
const FIT_SAMPLES: usize = 64;

/// Decision band half-width around the decay-exponent threshold 1/3. Inside
/// the band the doubling probe cannot resolve the integral's behaviour
/// (power-law divergence slower than ratio 1.5 per doubling escapes it), so
/// such verdicts carry the boundary flag and are reported, not asserted.
const TROYANOV_BOUNDARY_BAND: f64 = 0.12;

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (llo + (lhi - llo) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Least-squares slope of y against x.
fn lsq_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

fn check_range(r_range: (f64, f64)) -> Result<()> {
    if !(r_range.0 > 0.0 && r_range.1 > r_range.0) {
        return Err(Error::Criterion(format!(
            "invalid radial range [{}, {}]",
            r_range.0, r_range.1
        )));
    }
    Ok(())
}

/// Profile-decay criterion: fits the exponent k in f ~ C r^{-k} on the tail
/// third of the range and passes when k > 1/3. Cross-checked against the
/// doubling probe for ∫ f³ dr.
pub fn troyanov_check(profile: &Profile, r_range: (f64, f64)) -> Result<CriterionReport> {
    check_range(r_range)?;
    if profile.kind() != ProfileKind::PlaneLike {
        return Err(Error::Criterion(
            "the decay criterion applies to plane-like profiles".into(),
        ));
    }
    let tail_lo = r_range.0 + 2.0 * (r_range.1 - r_range.0) / 3.0;
    let radii = log_spaced(tail_lo, r_range.1, FIT_SAMPLES);
    let logs: Vec<f64> = radii.iter().map(|&r| profile.f(r).ln()).collect();
    let log_r: Vec<f64> = radii.iter().map(|&r| r.ln()).collect();
    let slope = lsq_slope(&log_r, &logs);
    let k = -slope;
    // monotone tail check for fit reliability
    let monotone = radii
        .windows(2)
        .all(|w| profile.f(w[1]) <= profile.f(w[0]) + 1e-14)
        || radii
            .windows(2)
            .all(|w| profile.f(w[1]) >= profile.f(w[0]) - 1e-14);
    let c_fit = radii
        .iter()
        .map(|&r| profile.f(r) * r.powf(k))
        .fold(0.0f64, f64::max);
    let probe = geometry::xi_norm_probe(profile, &WeightSpec::zero(), r_range.1);
    let divergent = probe.is_divergent();
    let boundary = (k - 1.0 / 3.0).abs() <= TROYANOV_BOUNDARY_BAND;
    let consistent = (k > 1.0 / 3.0) == !divergent;
    let note = format!(
        "fitted f ~ C r^-k on tail third; norm probe {}; detectors {}",
        if divergent { "divergent" } else { "convergent" },
        if consistent { "agree" } else { "disagree" }
    );
    let report = if k > 1.0 / 3.0 {
        CriterionReport::pass(
            "troyanov",
            r_range,
            vec![("k", k), ("C", c_fit), ("norm_divergent", divergent as i64 as f64)],
        )
    } else {
        // witness: first tail radius where the local slope is too shallow
        let witness = radii
            .windows(2)
            .find(|w| {
                let local =
                    (profile.f(w[1]).ln() - profile.f(w[0]).ln()) / (w[1].ln() - w[0].ln());
                local > -1.0 / 3.0
            })
            .map(|w| w[0])
            .unwrap_or(tail_lo);
        CriterionReport::fail(
            "troyanov",
            CriterionVerdict::AsymptoticFail,
            r_range,
            witness,
            vec![("k", k), ("norm_divergent", divergent as i64 as f64)],
            "decay exponent at or below 1/3",
        )
    };
    Ok(report
        .with_note(note)
        .flagged_boundary(boundary)
        .flagged_unreliable(!monotone))
}

/// Curvature/growth contrast: verifies K ≤ -1 on the range, and if so
/// certifies the exponential growth of f and the divergence of ∫ f³ — the
/// curvature bound is incompatible with a finite generator norm.
pub fn mckean_contrast(profile: &Profile, r_range: (f64, f64)) -> Result<CriterionReport> {
    check_range(r_range)?;
    if profile.kind() != ProfileKind::PlaneLike {
        return Err(Error::Criterion(
            "the curvature contrast applies to plane-like profiles".into(),
        ));
    }
    let radii = log_spaced(r_range.0, r_range.1, FIT_SAMPLES);
    let mut k_max = f64::NEG_INFINITY;
    for &r in &radii {
        let k = profile.gaussian_curvature(r)?;
        if k > -1.0 + 1e-12 {
            return Ok(CriterionReport::fail(
                "mckean",
                CriterionVerdict::Fail,
                r_range,
                r,
                vec![("K_max", k)],
                "curvature bound K <= -1 fails; contrast not applicable",
            ));
        }
        k_max = k_max.max(k);
    }
    // exponential growth: slope of log f against r on the tail
    let tail_lo = r_range.0 + 2.0 * (r_range.1 - r_range.0) / 3.0;
    let tail: Vec<f64> = (0..FIT_SAMPLES)
        .map(|j| tail_lo + (r_range.1 - tail_lo) * j as f64 / (FIT_SAMPLES - 1) as f64)
        .collect();
    let logs: Vec<f64> = tail.iter().map(|&r| profile.f(r).ln()).collect();
    let growth = lsq_slope(&tail, &logs);
    // K <= -1 forces growth rate at least 1
    let growth_ok = growth >= 1.0 - 1e-6;
    let probe = geometry::xi_norm_probe(profile, &WeightSpec::zero(), r_range.1.min(10.0));
    let divergent = probe.is_divergent();
    let report = CriterionReport::pass(
        "mckean",
        r_range,
        vec![
            ("K_max", k_max),
            ("growth_rate", growth),
            ("norm_divergent", divergent as i64 as f64),
        ],
    )
    .with_note(
        "curvature bound holds; profile grows exponentially, so the generator norm diverges \
         and the spectral route cannot help here"
            .into(),
    )
    .flagged_unreliable(!(growth_ok && divergent));
    Ok(report)
}

/// Estimated radius where ε r^p overtakes (1 + a²) r^q (p > q): the witness
/// for an asymptotically infeasible exponent condition.
fn crossing_radius(eps: f64, a: f64, p: f64, q: f64) -> f64 {
    if p <= q {
        return f64::INFINITY;
    }
    let coeff = 2.0 * (1.0 + a * a) / eps;
    let log_r = coeff.ln() / (p - q);
    if log_r > 700.0 {
        f64::INFINITY
    } else {
        log_r.exp()
    }
}

/// The weighted-measure inequalities for U = r^a on a model end. Emits one
/// report per condition:
///   - `as.condition_i`:   ΔU ≤ C (1 + U)
///   - `as.condition_ii`:  ε U^{1+ε} ≤ 1 + |∇U|² for some ε in (0, 1]
///   - `as.condition_iii`: ∇²U ≥ -B
///   - `as.gradient_exp`:  |∇U|² ≤ C e^{θ U} with θ in (0, 1)
///   - `as.curvature`:     records the user-supplied bounds κ₁, κ₂
pub fn ahmed_stroock_check(
    end: &EndModel,
    a: f64,
    r_range: (f64, f64),
    ricci_lower: f64,
    curv_op_upper: f64,
) -> Result<Vec<CriterionReport>> {
    check_range(r_range)?;
    if !(a > 0.0) {
        return Err(Error::Criterion(format!(
            "the weight exponent must be positive, got a = {a}"
        )));
    }
    let radii = log_spaced(r_range.0, r_range.1, FIT_SAMPLES);
    let du = |r: f64| a * r.powf(a - 1.0); // |∇U|, |∇r| = 1
    let lap_u = |r: f64| a * (a - 1.0) * r.powf(a - 2.0) + a * r.powf(a - 1.0) * end.laplacian_r(r);
    let mut out = Vec::with_capacity(5);

    // condition i: ΔU ≤ C (1 + r^a); ΔU grows like r^{a-2}, so a finite C
    // always exists; report the minimal one on the range.
    let c_min = radii
        .iter()
        .map(|&r| lap_u(r) / (1.0 + r.powf(a)))
        .fold(0.0f64, f64::max);
    out.push(
        CriterionReport::pass("as.condition_i", r_range, vec![("C", c_min), ("a", a)]).with_note(
            format!("laplacian drift {} keeps ΔU two orders below U", end.name()),
        ),
    );

    // condition ii: feasible exactly when a (1 + ε) ≤ 2a - 2 admits ε > 0,
    // i.e. a > 2; confirmed numerically on the tail for the grid of ε.
    let eps_theoretical = (a - 2.0) / a;
    let mut best_eps: Option<f64> = None;
    for j in 1..=100 {
        let eps = 0.01 * j as f64;
        if a * (1.0 + eps) > 2.0 * a - 2.0 + 1e-12 {
            continue; // asymptotically infeasible
        }
        let ok = radii
            .iter()
            .all(|&r| eps * r.powf(a * (1.0 + eps)) <= 1.0 + du(r) * du(r) + 1e-12);
        if ok {
            best_eps = Some(eps);
        }
    }
    match best_eps {
        Some(eps) => out.push(CriterionReport::pass(
            "as.condition_ii",
            r_range,
            vec![
                ("eps", eps),
                ("eps_theoretical", eps_theoretical),
                ("a", a),
            ],
        )),
        None => {
            let witness = crossing_radius(0.01, a, a * 1.01, (2.0 * a - 2.0).max(0.0));
            out.push(CriterionReport::fail(
                "as.condition_ii",
                CriterionVerdict::AsymptoticFail,
                r_range,
                witness,
                vec![("a", a), ("eps_theoretical", eps_theoretical)],
                "no ε > 0 satisfies a(1+ε) <= 2a-2; requires a > 2",
            ));
        }
    }

    // condition iii: Hessian lower bound from the radial data
    let hess_min = radii
        .iter()
        .map(|&r| a * r.powf(a - 1.0) * end.hess_r_lower() + a * (a - 1.0) * r.powf(a - 2.0))
        .fold(f64::INFINITY, f64::min);
    let b = (-hess_min).max(0.0);
    out.push(CriterionReport::pass(
        "as.condition_iii",
        r_range,
        vec![("B", b), ("a", a)],
    ));

    // gradient-exponential bound: polynomial against exponential, any θ
    let theta = 0.5;
    let c_grad = radii
        .iter()
        .map(|&r| du(r) * du(r) * (-theta * r.powf(a)).exp())
        .fold(0.0f64, f64::max);
    out.push(CriterionReport::pass(
        "as.gradient_exp",
        r_range,
        vec![("theta", theta), ("C", c_grad)],
    ));

    // curvature bounds are geometric inputs, recorded as given
    if ricci_lower < 0.0 || curv_op_upper < 0.0 {
        return Err(Error::Criterion(
            "curvature bounds κ₁, κ₂ must be nonnegative".into(),
        ));
    }
    out.push(
        CriterionReport::pass(
            "as.curvature",
            r_range,
            vec![("kappa1", ricci_lower), ("kappa2", curv_op_upper)],
        )
        .with_note("user-supplied geometric bounds".into()),
    );
    Ok(out)
}

/// What the finite-mass checks run against: a full surface profile or a
/// radial end model.
#[derive(Debug, Clone, Copy)]
pub enum RadialSource<'a> {
    Surface(&'a Profile),
    End(&'a EndModel),
}

impl<'a> RadialSource<'a> {
    fn laplacian_r(&self, r: f64) -> f64 {
        match self {
            RadialSource::Surface(p) => p.laplacian_drift(r),
            RadialSource::End(e) => e.laplacian_r(r),
        }
    }

    fn volume_density(&self, r: f64) -> f64 {
        match self {
            RadialSource::Surface(p) => p.f(r),
            RadialSource::End(e) => e.volume_density(r),
        }
    }

    fn name(&self) -> String {
        match self {
            RadialSource::Surface(p) => p.family_name(),
            RadialSource::End(e) => e.name(),
        }
    }
}

/// The finite-mass conditions with the convention V = -U:
///   - `gw.finite_mass`:     ∫ e^V dV_g < ∞
///   - `gw.u_plus_v`:        U + V bounded (identically zero here)
///   - `gw.gradient_infty`:  |∇U| → ∞ along the tail
///   - `gw.laplacian_ratio`: limsup ΔU / |∇U|² < 1
///   - `gw.ricci_hessian`:   Ric - Hess(V) ≥ -C, C recorded
pub fn gong_wang_check(
    source: RadialSource<'_>,
    weight: &WeightSpec,
    r_range: (f64, f64),
    ricci_hess_bound: f64,
) -> Result<Vec<CriterionReport>> {
    check_range(r_range)?;
    let mut out = Vec::with_capacity(5);

    // finite total mass of e^V dV = e^{-U} v(r) dr
    let probe = quad::probe_improper(
        |r| source.volume_density(r) * weight.density(r),
        0.0_f64.max(r_range.0 * 1e-3),
        r_range.1,
    );
    match probe {
        TailClass::Convergent { value, .. } => out.push(
            CriterionReport::pass("gw.finite_mass", r_range, vec![("mass", value)])
                .with_note(format!("radial mass of {}", source.name())),
        ),
        TailClass::Divergent { partials, .. } => out.push(CriterionReport::fail(
            "gw.finite_mass",
            CriterionVerdict::AsymptoticFail,
            r_range,
            r_range.1,
            vec![("partial_mass", partials[3])],
            "total measure diverges under doubling",
        )),
    }

    // U + V = 0 by the stored convention
    out.push(
        CriterionReport::pass("gw.u_plus_v", r_range, vec![("bound", 0.0)])
            .with_note("V = -U convention: the sum vanishes identically".into()),
    );

    // |∇U| → ∞: growth of |U'| on the tail
    let radii = log_spaced(r_range.0, r_range.1, FIT_SAMPLES);
    let grads: Vec<f64> = radii.iter().map(|&r| weight.du(r).abs()).collect();
    let log_r: Vec<f64> = radii.iter().map(|&r| r.ln()).collect();
    let log_g: Vec<f64> = grads.iter().map(|&g| (g + 1e-300).ln()).collect();
    let slope = lsq_slope(&log_r, &log_g);
    let grad_hi = *grads.last().unwrap();
    if weight.is_proper() && slope > 0.05 {
        out.push(CriterionReport::pass(
            "gw.gradient_infty",
            r_range,
            vec![("growth_exponent", slope), ("grad_at_r_max", grad_hi)],
        ));
    } else {
        // witness: first tail radius where the gradient stops growing
        let witness = radii
            .windows(2)
            .zip(grads.windows(2))
            .find(|(_, g)| g[1] <= g[0] * 1.0000001)
            .map(|(w, _)| w[1])
            .unwrap_or(r_range.1);
        out.push(CriterionReport::fail(
            "gw.gradient_infty",
            CriterionVerdict::AsymptoticFail,
            r_range,
            witness,
            vec![("growth_exponent", slope), ("grad_at_r_max", grad_hi)],
            "|∇U| does not grow without bound",
        ));
    }

    // limsup ΔU / |∇U|² on the tail
    let tail_lo = r_range.0 + 2.0 * (r_range.1 - r_range.0) / 3.0;
    let ratio_max = log_spaced(tail_lo, r_range.1, FIT_SAMPLES)
        .iter()
        .map(|&r| {
            let num = weight.d2u(r) + source.laplacian_r(r) * weight.du(r);
            let den = weight.du(r) * weight.du(r);
            if den == 0.0 {
                f64::INFINITY
            } else {
                num / den
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    if ratio_max < 1.0 {
        out.push(CriterionReport::pass(
            "gw.laplacian_ratio",
            r_range,
            vec![("limsup", ratio_max)],
        ));
    } else {
        out.push(CriterionReport::fail(
            "gw.laplacian_ratio",
            CriterionVerdict::Fail,
            r_range,
            r_range.1,
            vec![("limsup", ratio_max)],
            "ΔU / |∇U|² does not stay below 1",
        ));
    }

    // Ric - Hess(V) >= -C: computed from curvature for surfaces, recorded as
    // supplied for end models
    let c = match source {
        RadialSource::Surface(p) => {
            let mut min_eig = f64::INFINITY;
            for &r in &radii {
                let k = p.gaussian_curvature(r)?;
                // V = -U: Hess(V) eigenvalues are -U'' and -(f'/f) U'
                let radial = k + weight.d2u(r);
                let angular = k + p.laplacian_drift(r) * weight.du(r);
                min_eig = min_eig.min(radial.min(angular));
            }
            (-min_eig).max(0.0)
        }
        RadialSource::End(_) => ricci_hess_bound,
    };
    out.push(
        CriterionReport::pass("gw.ricci_hessian", r_range, vec![("C", c)]).with_note(
            match source {
                RadialSource::Surface(_) => "computed from the surface curvature".into(),
                RadialSource::End(_) => "user-supplied bound".into(),
            },
        ),
    );
    Ok(out)
}

/// Overall status of the decomposition hypotheses for a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisStatus {
    Satisfied,
    NotSatisfied,
    Partial,
}

impl HypothesisStatus {
    pub fn name(&self) -> &'static str {
        match self {
            HypothesisStatus::Satisfied => "yes",
            HypothesisStatus::NotSatisfied => "no",
            HypothesisStatus::Partial => "partial",
        }
    }
}

/// Inputs for the aggregated dashboard.
#[derive(Debug, Clone)]
pub struct DashboardCase {
    pub profile: Profile,
    pub weight: WeightSpec,
    pub end: Option<EndModel>,
    pub r_range: (f64, f64),
    /// Optional mesh (n_r, n_theta, r_max) on which to measure the
    /// J-invariance defect of the harmonic space.
    pub grid: Option<(usize, usize, f64)>,
    pub ricci_lower: f64,
    pub curv_op_upper: f64,
}

#[derive(Debug)]
pub struct DashboardReport {
    /// The criterion family that applies: "unweighted", "ahmed-stroock",
    /// "gong-wang" (the weighted families are both reported when an end
    /// model is present).
    pub family: String,
    pub xi_norm_finite: bool,
    pub xi_norm_estimate: Option<f64>,
    pub criteria: Vec<CriterionReport>,
    pub j_defect: Option<f64>,
    pub harmonic_dimension: Option<usize>,
    pub status: HypothesisStatus,
    /// Whether running the decomposition pipeline is worthwhile.
    pub recommend_pipeline: bool,
    pub summary: String,
}

/// J-invariance defect threshold above which the rotation hypothesis is
/// considered failed.
pub const J_DEFECT_LIMIT: f64 = 0.1;

/// Aggregates the generator-norm diagnostic, the applicable criterion
/// family, and (when a grid is supplied) the measured J-invariance defect
/// into a single hypotheses verdict.
pub fn hypothesis_dashboard(case: &DashboardCase) -> Result<DashboardReport> {
    check_range(case.r_range)?;
    let probe = geometry::xi_norm_probe(&case.profile, &case.weight, case.r_range.1);
    let (xi_finite, xi_estimate) = match probe {
        TailClass::Convergent { value, .. } => (true, Some(value)),
        TailClass::Divergent { .. } => (false, None),
    };

    let mut criteria = Vec::new();
    let weighted = case.weight.is_proper();
    let family = if !weighted {
        if case.profile.kind() == ProfileKind::PlaneLike {
            criteria.push(troyanov_check(&case.profile, case.r_range)?);
            criteria.push(mckean_contrast(&case.profile, case.r_range)?);
        }
        "unweighted".to_string()
    } else {
        let mut families = vec!["gong-wang"];
        criteria.extend(gong_wang_check(
            match &case.end {
                Some(end) => RadialSource::End(end),
                None => RadialSource::Surface(&case.profile),
            },
            &case.weight,
            case.r_range,
            0.0,
        )?);
        if let (Some(end), crate::geometry::WeightFamily::Power { a }) =
            (&case.end, case.weight.family())
        {
            criteria.extend(ahmed_stroock_check(
                end,
                a,
                case.r_range,
                case.ricci_lower,
                case.curv_op_upper,
            )?);
            families.insert(0, "ahmed-stroock");
        }
        families.join("+")
    };

    // discriminating criteria: the contrast report documents an
    // incompatibility rather than a hypothesis, so it never gates
    let gating: Vec<&CriterionReport> = criteria
        .iter()
        .filter(|c| c.id != "mckean")
        .collect();
    let criteria_ok = gating.iter().all(|c| c.verdict.passed());

    let (mut j_defect, mut harmonic_dimension) = (None, None);
    if let Some((n_r, n_theta, r_max)) = case.grid {
        let triple = CompatibleTriple::standard(case.profile);
        let topology = match case.profile.kind() {
            ProfileKind::PlaneLike => dec::Topology::Disk,
            ProfileKind::CylinderLike => dec::Topology::Cylinder,
            ProfileKind::TorusFlat => dec::Topology::Torus,
        };
        let mesh = MeshComplex::build(topology, n_r, n_theta, r_max)?;
        let mass = dec::assemble(&mesh, &triple, &case.weight)?;
        let basis = hodge::harmonic_basis(&mesh, &mass)?;
        harmonic_dimension = Some(basis.dimension);
        j_defect = Some(hodge::j_invariance_defect(&mesh, &mass, &triple, &basis)?);
    }

    let j_ok = j_defect.map(|d| d <= J_DEFECT_LIMIT).unwrap_or(true);
    let (status, recommend, summary) = if !xi_finite {
        (
            HypothesisStatus::NotSatisfied,
            false,
            "generator norm diverges: hypotheses fail, pipeline skipped".to_string(),
        )
    } else if criteria_ok && j_ok {
        (
            HypothesisStatus::Satisfied,
            true,
            format!("{family} criteria satisfied, generator norm finite"),
        )
    } else if criteria_ok {
        (
            HypothesisStatus::Partial,
            true,
            format!(
                "partial: {family} criteria hold but the J-invariance hypothesis fails \
                 (defect {:.3})",
                j_defect.unwrap_or(f64::NAN)
            ),
        )
    } else {
        (
            HypothesisStatus::Partial,
            true,
            format!("partial: generator norm finite but a {family} criterion fails"),
        )
    };

    Ok(DashboardReport {
        family,
        xi_norm_finite: xi_finite,
        xi_norm_estimate: xi_estimate,
        criteria,
        j_defect,
        harmonic_dimension,
        status,
        recommend_pipeline: recommend,
        summary,
    })
}
