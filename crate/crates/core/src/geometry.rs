//! Closed-form geometry of rotationally symmetric surfaces: warped-product
//! profiles f(r), radial weights U(r) for the measure e^{-U} dV_g, the
//! compatible (metric, area form, rotation) triple, curvature, the analytic
//! momentum potential, and the generator-norm integral.

use crate::error::{Error, Result};
use crate::quad::{self, TailClass};

/// Topological class of the model surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// f vanishes at r = 0, surface is a plane; r ranges over [0, ∞).
    PlaneLike,
    /// f strictly positive, surface is an infinite cylinder; r over all of ℝ.
    CylinderLike,
    /// f ≡ 1 with r itself periodic: a flat torus.
    TorusFlat,
}

/// Builtin profile families. Each carries closed-form derivatives and a
/// closed-form momentum antiderivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileFamily {
    /// f = r (flat plane).
    Plane,
    /// f = sinh(c r) (hyperbolic plane scaled so K = -c^2).
    Hyperbolic { c: f64 },
    /// f = 1 (flat cylinder).
    Cylinder,
    /// f = r (1 + r^2)^{-s}, s > 0 (decaying plane-like profile).
    Decaying { s: f64 },
    /// f = 1 with r periodic of the given circumference.
    FlatTorus { circumference: f64 },
}

/// A rotationally symmetric warping profile with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    family: ProfileFamily,
}

impl Profile {
    pub fn new(family: ProfileFamily) -> Result<Self> {
        if let ProfileFamily::Decaying { s } = family {
            if !(s > 0.0) {
                return Err(Error::Profile(format!(
                    "decaying profile needs s > 0, got {s}"
                )));
            }
        }
        if let ProfileFamily::FlatTorus { circumference } = family {
            if !(circumference > 0.0) {
                return Err(Error::Profile(format!(
                    "torus circumference must be positive, got {circumference}"
                )));
            }
        }
        Ok(Profile { family })
    }

    pub fn plane() -> Self {
        Profile {
            family: ProfileFamily::Plane,
        }
    }

    pub fn hyperbolic() -> Self {
        Profile {
            family: ProfileFamily::Hyperbolic { c: 1.0 },
        }
    }

    pub fn hyperbolic_scaled(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::Profile(format!(
                "hyperbolic scale must be positive, got {c}"
            )));
        }
        Ok(Profile {
            family: ProfileFamily::Hyperbolic { c },
        })
    }

    pub fn cylinder() -> Self {
        Profile {
            family: ProfileFamily::Cylinder,
        }
    }

    pub fn decaying(s: f64) -> Result<Self> {
        Profile::new(ProfileFamily::Decaying { s })
    }

    pub fn flat_torus(circumference: f64) -> Result<Self> {
        Profile::new(ProfileFamily::FlatTorus { circumference })
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    pub fn kind(&self) -> ProfileKind {
        match self.family {
            ProfileFamily::Plane
            | ProfileFamily::Hyperbolic { .. }
            | ProfileFamily::Decaying { .. } => ProfileKind::PlaneLike,
            ProfileFamily::Cylinder => ProfileKind::CylinderLike,
            ProfileFamily::FlatTorus { .. } => ProfileKind::TorusFlat,
        }
    }

    /// Warping function f(r).
    pub fn f(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Plane => r,
            ProfileFamily::Hyperbolic { c } => (c * r).sinh(),
            ProfileFamily::Cylinder | ProfileFamily::FlatTorus { .. } => 1.0,
            ProfileFamily::Decaying { s } => r * (1.0 + r * r).powf(-s),
        }
    }

    /// First derivative f'(r).
    pub fn df(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Plane => 1.0,
            ProfileFamily::Hyperbolic { c } => c * (c * r).cosh(),
            ProfileFamily::Cylinder | ProfileFamily::FlatTorus { .. } => 0.0,
            ProfileFamily::Decaying { s } => {
                // (1+r^2)^{-s-1} (1 + (1-2s) r^2)
                (1.0 + r * r).powf(-s - 1.0) * (1.0 + (1.0 - 2.0 * s) * r * r)
            }
        }
    }

    /// Second derivative f''(r).
    pub fn d2f(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Plane => 0.0,
            ProfileFamily::Hyperbolic { c } => c * c * (c * r).sinh(),
            ProfileFamily::Cylinder | ProfileFamily::FlatTorus { .. } => 0.0,
            ProfileFamily::Decaying { s } => {
                // -2 s r (1+r^2)^{-s-2} (3 + (1-2s) r^2)
                -2.0 * s * r * (1.0 + r * r).powf(-s - 2.0) * (3.0 + (1.0 - 2.0 * s) * r * r)
            }
        }
    }

    /// Limit of -f''/f at the apex, where it exists in closed form.
    fn curvature_apex_limit(&self) -> Option<f64> {
        match self.family {
            ProfileFamily::Plane => Some(0.0),
            ProfileFamily::Hyperbolic { c } => Some(-c * c),
            // f'' ~ -6 s r, f ~ r near 0
            ProfileFamily::Decaying { s } => Some(6.0 * s),
            _ => None,
        }
    }

    /// Gauss curvature K = -f''(r) / f(r). At a zero of f the builtin
    /// families supply the limit value; otherwise this is an error.
    pub fn gaussian_curvature(&self, r: f64) -> Result<f64> {
        let f = self.f(r);
        if f.abs() < 1e-300 {
            return self
                .curvature_apex_limit()
                .ok_or(Error::CurvatureAtApex { r });
        }
        Ok(-self.d2f(r) / f)
    }

    /// Momentum potential mu(r) = -∫_0^r f(s) ds, normalized mu(0) = 0.
    /// Closed form for every builtin family.
    pub fn momentum(&self, r: f64) -> f64 {
        match self.family {
            ProfileFamily::Plane => -0.5 * r * r,
            ProfileFamily::Hyperbolic { c } => (1.0 - (c * r).cosh()) / c,
            ProfileFamily::Cylinder | ProfileFamily::FlatTorus { .. } => -r,
            ProfileFamily::Decaying { s } => {
                if (s - 1.0).abs() < 1e-14 {
                    -0.5 * (1.0 + r * r).ln()
                } else {
                    -((1.0 + r * r).powf(1.0 - s) - 1.0) / (2.0 * (1.0 - s))
                }
            }
        }
    }

    /// Radial part of the Laplacian acting on radial functions: Δh = h'' + (f'/f) h'.
    /// Returns the drift coefficient f'/f.
    pub fn laplacian_drift(&self, r: f64) -> f64 {
        self.df(r) / self.f(r)
    }

    /// Human-readable family tag for reports.
    pub fn family_name(&self) -> String {
        match self.family {
            ProfileFamily::Plane => "plane".into(),
            ProfileFamily::Hyperbolic { c } => {
                if (c - 1.0).abs() < 1e-14 {
                    "hyperbolic".into()
                } else {
                    format!("hyperbolic:{c}")
                }
            }
            ProfileFamily::Cylinder => "cylinder".into(),
            ProfileFamily::Decaying { s } => format!("decaying:{s}"),
            ProfileFamily::FlatTorus { circumference } => format!("torus:{circumference}"),
        }
    }
}

/// Builtin radial weight families for the measure e^{-U} dV_g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    /// U = 0 (unweighted).
    Zero,
    /// U = c r^2.
    Gaussian { c: f64 },
    /// U = |r|^a.
    Power { a: f64 },
    /// U = ln(1 + r^2); gradient decays, a deliberate failure case.
    LogGrowth,
}

/// Radial weight exponent U with derivatives. The measure convention is
/// fixed crate-wide: dλ = e^{-U} dV_g, and the alternate sign convention
/// used by the finite-mass criteria is represented as V = -U.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    family: WeightFamily,
}

impl WeightSpec {
    pub fn new(family: WeightFamily) -> Result<Self> {
        match family {
            WeightFamily::Gaussian { c } if !(c > 0.0) => Err(Error::Profile(format!(
                "gaussian weight needs c > 0, got {c}"
            ))),
            WeightFamily::Power { a } if !(a > 0.0) => Err(Error::Profile(format!(
                "power weight needs a > 0, got {a}"
            ))),
            _ => Ok(WeightSpec { family }),
        }
    }

    pub fn zero() -> Self {
        WeightSpec {
            family: WeightFamily::Zero,
        }
    }

    pub fn gaussian(c: f64) -> Result<Self> {
        WeightSpec::new(WeightFamily::Gaussian { c })
    }

    pub fn power(a: f64) -> Result<Self> {
        WeightSpec::new(WeightFamily::Power { a })
    }

    pub fn log_growth() -> Self {
        WeightSpec {
            family: WeightFamily::LogGrowth,
        }
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    /// U(r) >= 0 for every builtin family.
    pub fn u(&self, r: f64) -> f64 {
        match self.family {
            WeightFamily::Zero => 0.0,
            WeightFamily::Gaussian { c } => c * r * r,
            WeightFamily::Power { a } => r.abs().powf(a),
            WeightFamily::LogGrowth => (1.0 + r * r).ln(),
        }
    }

    /// U'(r).
    pub fn du(&self, r: f64) -> f64 {
        match self.family {
            WeightFamily::Zero => 0.0,
            WeightFamily::Gaussian { c } => 2.0 * c * r,
            WeightFamily::Power { a } => a * r.abs().powf(a - 1.0) * r.signum(),
            WeightFamily::LogGrowth => 2.0 * r / (1.0 + r * r),
        }
    }

    /// U''(r).
    pub fn d2u(&self, r: f64) -> f64 {
        match self.family {
            WeightFamily::Zero => 0.0,
            WeightFamily::Gaussian { c } => 2.0 * c,
            WeightFamily::Power { a } => a * (a - 1.0) * r.abs().powf(a - 2.0),
            WeightFamily::LogGrowth => 2.0 * (1.0 - r * r) / (1.0 + r * r).powi(2),
        }
    }

    /// Weight density e^{-U(r)} of dλ against dV_g.
    pub fn density(&self, r: f64) -> f64 {
        (-self.u(r)).exp()
    }

    /// Whether U is proper (U → ∞ with |r|), which is what makes automatic
    /// truncation radii meaningful.
    pub fn is_proper(&self) -> bool {
        !matches!(self.family, WeightFamily::Zero)
    }

    /// The finite-mass-side potential V = -U.
    pub fn gong_wang_v(&self, r: f64) -> f64 {
        -self.u(r)
    }

    pub fn family_name(&self) -> String {
        match self.family {
            WeightFamily::Zero => "none".into(),
            WeightFamily::Gaussian { c } => format!("gauss:{c}"),
            WeightFamily::Power { a } => format!("poly:{a}"),
            WeightFamily::LogGrowth => "loggrowth".into(),
        }
    }
}

/// Compatible (area form, metric, rotation) triple on a model surface:
/// omega = f dr ∧ dθ, g = dr^2 + f^2 dθ^2, and J rotating the orthonormal
/// coframe (dr, f dθ) by the orientation sign sigma.
#[derive(Debug, Clone, Copy)]
pub struct CompatibleTriple {
    pub profile: Profile,
    /// Orientation sign: J dr = sigma (f dθ)-direction. The identity
    /// g(X, Y) = omega(X, J Y) holds only for sigma = +1.
    pub sigma: f64,
}

impl CompatibleTriple {
    pub fn standard(profile: Profile) -> Self {
        CompatibleTriple {
            profile,
            sigma: 1.0,
        }
    }

    pub fn with_sigma(profile: Profile, sigma: f64) -> Self {
        CompatibleTriple { profile, sigma }
    }

    /// Metric matrix in the coordinate basis (∂r, ∂θ).
    pub fn metric(&self, r: f64) -> [[f64; 2]; 2] {
        let f = self.profile.f(r);
        [[1.0, 0.0], [0.0, f * f]]
    }

    /// Area form evaluated on coordinate vectors: omega(∂r, ∂θ) = f.
    pub fn omega(&self, r: f64) -> [[f64; 2]; 2] {
        let f = self.profile.f(r);
        [[0.0, f], [-f, 0.0]]
    }

    /// J in the coordinate basis: J ∂r = (sigma/f) ∂θ, J ∂θ = -sigma f ∂r.
    pub fn j_matrix(&self, r: f64) -> [[f64; 2]; 2] {
        let f = self.profile.f(r);
        [[0.0, -self.sigma * f], [self.sigma / f, 0.0]]
    }

    /// Max over samples and coordinate vector pairs of
    /// |g(X, Y) - omega(X, J Y)|.
    pub fn compatibility_defect(&self, sample_radii: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for &r in sample_radii {
            let g = self.metric(r);
            let om = self.omega(r);
            let j = self.j_matrix(r);
            for x in 0..2 {
                for y in 0..2 {
                    // omega(e_x, J e_y) with J e_y = sum_k j[k][y] e_k
                    let mut o = 0.0;
                    for k in 0..2 {
                        o += om[x][k] * j[k][y];
                    }
                    worst = worst.max((g[x][y] - o).abs());
                }
            }
        }
        worst
    }
}

/// Squared weighted norm of the rotation generator up to radius `r_max`:
/// 2π ∫_0^{r_max} f^3 e^{-U} dr.
pub fn xi_norm_sq(profile: &Profile, weight: &WeightSpec, r_max: f64) -> f64 {
    xi_norm_sq_on(profile, weight, 0.0, r_max)
}

/// Same integral over an arbitrary radial interval (cylinders integrate over
/// [-R, R]).
pub fn xi_norm_sq_on(profile: &Profile, weight: &WeightSpec, lo: f64, hi: f64) -> f64 {
    2.0 * std::f64::consts::PI
        * quad::integrate_default(|r| profile.f(r).powi(3) * weight.density(r), lo, hi)
}

/// Doubling probe for finiteness of the full generator norm
/// 2π ∫_0^∞ f^3 e^{-U} dr.
pub fn xi_norm_probe(profile: &Profile, weight: &WeightSpec, r_max: f64) -> TailClass {
    quad::probe_improper(
        |r| 2.0 * std::f64::consts::PI * profile.f(r).powi(3) * weight.density(r),
        0.0,
        r_max,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn all_profiles() -> Vec<Profile> {
        vec![
            Profile::plane(),
            Profile::hyperbolic(),
            Profile::cylinder(),
            Profile::decaying(1.0).unwrap(),
            Profile::decaying(0.5).unwrap(),
            Profile::decaying(2.0).unwrap(),
            Profile::flat_torus(2.0 * PI).unwrap(),
        ]
    }

    /// Centered finite differences agree with the closed-form derivatives at
    /// second order: the error must drop by ~100x when h drops by 10x.
    #[test]
    fn derivatives_match_centered_differences() {
        for p in all_profiles() {
            for &r in &[0.3, 0.9, 1.7, 2.6] {
                let mut errs_df = [0.0f64; 2];
                let mut errs_d2f = [0.0f64; 2];
                for (k, &h) in [1e-2, 1e-3].iter().enumerate() {
                    let fd1 = (p.f(r + h) - p.f(r - h)) / (2.0 * h);
                    let fd2 = (p.f(r + h) - 2.0 * p.f(r) + p.f(r - h)) / (h * h);
                    errs_df[k] = (fd1 - p.df(r)).abs();
                    errs_d2f[k] = (fd2 - p.d2f(r)).abs();
                }
                for errs in [errs_df, errs_d2f] {
                    if errs[0] < 1e-12 {
                        continue; // exact family (linear or constant f)
                    }
                    let order = (errs[0] / errs[1]).log10();
                    assert!(
                        order > 1.7,
                        "{}: FD order {order:.2} at r={r} (errs {errs:?})",
                        p.family_name()
                    );
                }
            }
        }
    }

    #[test]
    fn hyperbolic_curvature_is_minus_one() {
        let p = Profile::hyperbolic();
        for &r in &[1e-3, 0.5, 1.0, 3.0, 7.5] {
            let k = p.gaussian_curvature(r).unwrap();
            assert!((k + 1.0).abs() < 1e-10, "K({r}) = {k}");
        }
    }

    #[test]
    fn plane_curvature_is_zero() {
        assert_eq!(Profile::plane().gaussian_curvature(2.0).unwrap(), 0.0);
    }

    /// Closed-form second derivative of the decaying family, cross-checked
    /// against a 4th-order finite-difference oracle.
    #[test]
    fn decaying_curvature_matches_fd_oracle() {
        let p = Profile::decaying(1.0).unwrap();
        let r = 1.0;
        let h = 1e-3;
        let fd2 = (-p.f(r + 2.0 * h) + 16.0 * p.f(r + h) - 30.0 * p.f(r) + 16.0 * p.f(r - h)
            - p.f(r - 2.0 * h))
            / (12.0 * h * h);
        let k_oracle = -fd2 / p.f(r);
        let k = p.gaussian_curvature(r).unwrap();
        assert!((k - k_oracle).abs() < 1e-8, "K={k} oracle={k_oracle}");
        // frozen value: f'' (1) = -1/2, f(1) = 1/2, so K = 1
        assert!((k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn curvature_at_apex_uses_family_limit() {
        assert_eq!(Profile::plane().gaussian_curvature(0.0).unwrap(), 0.0);
        assert_eq!(Profile::hyperbolic().gaussian_curvature(0.0).unwrap(), -1.0);
        let d = Profile::decaying(1.0).unwrap();
        assert_eq!(d.gaussian_curvature(0.0).unwrap(), 6.0);
    }

    #[test]
    fn momentum_closed_forms() {
        assert!((Profile::plane().momentum(2.0) + 2.0).abs() < 1e-14);
        assert!((Profile::cylinder().momentum(3.0) + 3.0).abs() < 1e-14);
        let d = Profile::decaying(1.0).unwrap();
        assert!((d.momentum(1.0) + 0.5 * 2.0f64.ln()).abs() < 1e-14);
    }

    /// Closed-form momentum agrees with direct quadrature of -f.
    #[test]
    fn momentum_matches_quadrature() {
        for p in all_profiles() {
            for &r in &[0.7, 1.9, 4.2] {
                let by_quad = -quad::integrate_default(|s| p.f(s), 0.0, r);
                assert!(
                    (p.momentum(r) - by_quad).abs() < 1e-9,
                    "{} at r={r}",
                    p.family_name()
                );
            }
        }
    }

    #[test]
    fn momentum_is_non_increasing() {
        for p in all_profiles() {
            let mut prev = p.momentum(0.0);
            for k in 1..=40 {
                let cur = p.momentum(0.1 * k as f64);
                assert!(cur <= prev + 1e-12, "{}", p.family_name());
                prev = cur;
            }
        }
    }

    #[test]
    fn xi_norm_cylinder_unit_interval() {
        let v = xi_norm_sq(&Profile::cylinder(), &WeightSpec::zero(), 1.0);
        assert!((v - 2.0 * PI).abs() < 1e-10);
    }

    /// Decaying family at s = 1: the antiderivative of r^3 (1+r^2)^{-3} gives
    /// 2π (1/4 - 1/(2u) + 1/(4u^2)) with u = 1 + R^2, limiting to π/2.
    #[test]
    fn xi_norm_decaying_limit() {
        let p = Profile::decaying(1.0).unwrap();
        let w = WeightSpec::zero();
        let at = |rm: f64| {
            let u = 1.0 + rm * rm;
            2.0 * PI * (0.25 - 0.5 / u + 0.25 / (u * u))
        };
        for &rm in &[3.0, 10.0, 50.0] {
            let v = xi_norm_sq(&p, &w, rm);
            assert!((v - at(rm)).abs() < 1e-8, "r_max={rm}: {v} vs {}", at(rm));
        }
        assert!((xi_norm_sq(&p, &w, 200.0) - PI / 2.0).abs() < 1e-4);
        assert!(!xi_norm_probe(&p, &w, 5.0).is_divergent());
    }

    /// Hyperbolic profile: partial norms grow like e^{3 r_max}/24 and the
    /// probe certifies divergence.
    #[test]
    fn xi_norm_hyperbolic_diverges() {
        let p = Profile::hyperbolic();
        let w = WeightSpec::zero();
        let closed = |rm: f64| {
            let c = rm.cosh();
            2.0 * PI * (c * c * c / 3.0 - c + 2.0 / 3.0)
        };
        let mut prev = 0.0;
        for &rm in &[5.0, 10.0, 15.0] {
            let v = xi_norm_sq(&p, &w, rm);
            let rel = (v - closed(rm)).abs() / closed(rm);
            assert!(rel < 1e-9, "r_max={rm} rel={rel}");
            assert!(v > prev * 100.0, "expected steep growth");
            prev = v;
        }
        // slope of log of the leading-order law: log(I) ~ 3 r_max - log 24
        let slope = (xi_norm_sq(&p, &w, 15.0) / xi_norm_sq(&p, &w, 10.0)).ln() / 5.0;
        assert!((slope - 3.0).abs() < 0.05, "growth rate {slope}");
        assert!(xi_norm_probe(&p, &w, 5.0).is_divergent());
    }

    #[test]
    fn xi_norm_monotone_in_radius() {
        let p = Profile::decaying(0.8).unwrap();
        let w = WeightSpec::zero();
        let mut prev = 0.0;
        for k in 1..=20 {
            let v = xi_norm_sq(&p, &w, 0.5 * k as f64);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn compatible_triple_identity_holds() {
        // deterministic pseudo-random radii in (0, 5]
        let mut radii = Vec::new();
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            radii.push(0.05 + 4.95 * ((state >> 11) as f64 / (1u64 << 53) as f64));
        }
        for p in [Profile::plane(), Profile::cylinder()] {
            let t = CompatibleTriple::standard(p);
            assert!(t.compatibility_defect(&radii) <= 1e-12);
        }
    }

    #[test]
    fn flipped_orientation_fails_compatibility() {
        let radii: Vec<f64> = (1..=20).map(|k| 0.25 * k as f64).collect();
        let t = CompatibleTriple::with_sigma(Profile::plane(), -1.0);
        let max_g = radii.iter().map(|&r| r * r).fold(0.0f64, f64::max);
        let defect = t.compatibility_defect(&radii);
        // defect reaches 2 |g| at the largest radius
        assert!(defect >= 2.0 * max_g - 1e-9, "defect {defect}");
    }

    #[test]
    fn weight_derivative_consistency() {
        let weights = vec![
            WeightSpec::zero(),
            WeightSpec::gaussian(1.0).unwrap(),
            WeightSpec::power(3.0).unwrap(),
            WeightSpec::log_growth(),
        ];
        for w in weights {
            for &r in &[0.4, 1.3, 2.7] {
                let h = 1e-5;
                let fd1 = (w.u(r + h) - w.u(r - h)) / (2.0 * h);
                let fd2 = (w.u(r + h) - 2.0 * w.u(r) + w.u(r - h)) / (h * h);
                assert!((fd1 - w.du(r)).abs() < 1e-6, "{}", w.family_name());
                assert!((fd2 - w.d2u(r)).abs() < 1e-4, "{}", w.family_name());
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(Profile::decaying(0.0).is_err());
        assert!(Profile::decaying(-1.0).is_err());
        assert!(WeightSpec::power(-2.0).is_err());
        assert!(Profile::flat_torus(0.0).is_err());
    }
}
