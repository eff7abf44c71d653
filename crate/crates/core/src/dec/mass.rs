//! Diagonal weighted mass matrices realizing the L²_λ inner products on
//! cochains. Per-cell radial integrals use a fixed 4-point Gauss–Legendre
//! rule; the θ direction is exact by symmetry.
//!
//! The weights are chosen so that for smooth forms sampled to cochains the
//! discrete quadratic form is a second-order approximation of
//! ∫ ⟨⟨·,·⟩⟩ e^{-U} dV_g with dV_g = f dr dθ:
//!   - vertices: dual annulus mass ∫ f e^{-U} dr · dθ,
//!   - radial edges: dθ ∫ f e^{-U} dr / Δr²  (dr component, |dr| = 1),
//!   - angular edges: ∫ e^{-U}/f dr / dθ     (dθ component, |dθ| = 1/f),
//!   - faces: ∫ f e^{-U} dr / (dθ (∫ f dr)²), exact for multiples of the
//!     area form, which keeps the apex cells finite where f vanishes.

use crate::dec::mesh::{EdgeKind, MeshComplex, Topology};
use crate::error::{Error, Result};
use crate::geometry::{CompatibleTriple, WeightSpec};
use crate::quad;

/// Acceptable truncation-tail mass for automatically chosen radii.
pub const TAIL_MASS_LIMIT: f64 = 1e-8;

/// Diagonal L²_λ mass matrices for 0-, 1- and 2-cochains.
#[derive(Debug, Clone)]
pub struct WeightedMass {
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
    /// ∫_{r_max}^∞ f e^{-U} dr when the weight is proper.
    pub tail_estimate: Option<f64>,
    /// Set when a proper weight leaves more than [`TAIL_MASS_LIMIT`] outside
    /// the mesh.
    pub tail_warning: bool,
}

impl WeightedMass {
    pub fn inner(&self, degree: u8, x: &[f64], y: &[f64]) -> f64 {
        let m = self.diag(degree);
        debug_assert_eq!(m.len(), x.len());
        debug_assert_eq!(m.len(), y.len());
        m.iter()
            .zip(x.iter().zip(y))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn norm(&self, degree: u8, x: &[f64]) -> f64 {
        self.inner(degree, x, x).sqrt()
    }

    pub fn diag(&self, degree: u8) -> &[f64] {
        match degree {
            0 => &self.m0,
            1 => &self.m1,
            2 => &self.m2,
            _ => unreachable!("no cells of degree {degree}"),
        }
    }
}

/// Assembles the weighted masses for a mesh and a compatible triple. Errors
/// if the profile is non-positive anywhere a quadrature node lands, or if a
/// torus is paired with a non-constant weight (the r coordinate is periodic
/// there, so only the unweighted measure is well defined).
pub fn assemble(
    mesh: &MeshComplex,
    triple: &CompatibleTriple,
    weight: &WeightSpec,
) -> Result<WeightedMass> {
    if mesh.topology == Topology::Torus && weight.is_proper() {
        return Err(Error::Mesh(
            "torus meshes require the unweighted measure: U(r) is not periodic".into(),
        ));
    }
    let profile = &triple.profile;
    let fe = |r: f64| profile.f(r) * weight.density(r);
    let ge = |r: f64| weight.density(r) / profile.f(r);
    let check_positive = |lo: f64, hi: f64| -> Result<()> {
        // probe the same nodes the 4-point rule uses plus the midpoint
        for t in [0.069431844202974, 0.330009478207572, 0.5, 0.669990521792428, 0.930568155797026]
        {
            let r = lo + (hi - lo) * t;
            let v = profile.f(r);
            if v <= 0.0 {
                return Err(Error::NonPositiveProfile { r, value: v });
            }
        }
        Ok(())
    };

    let dr = mesh.dr();
    let dtheta = mesh.dtheta();
    let (dom_lo, dom_hi) = domain(mesh);

    // vertices: dual interval [r - dr/2, r + dr/2] clamped to the domain;
    // the apex dual is the full disk of radius dr/2.
    let mut m0 = vec![0.0; mesh.n_vertices()];
    for (v, w) in m0.iter_mut().enumerate() {
        let r = mesh.vertex_radius(v);
        if mesh.topology == Topology::Disk && v == 0 {
            *w = 2.0 * std::f64::consts::PI * quad::gauss4(fe, 0.0, 0.5 * dr);
        } else {
            let (lo, hi) = dual_interval(mesh, r, dr, dom_lo, dom_hi);
            *w = dtheta * quad::gauss4(fe, lo, hi);
        }
    }

    let mut m1 = vec![0.0; mesh.n_edges()];
    for (e, w) in m1.iter_mut().enumerate() {
        let geom = mesh.edge_geometry(e);
        match geom.kind {
            EdgeKind::Radial => {
                check_positive(geom.r_lo.max(dom_lo), geom.r_hi)?;
                *w = dtheta * quad::gauss4(fe, geom.r_lo, geom.r_hi) / (dr * dr);
            }
            EdgeKind::Angular => {
                let (lo, hi) = dual_interval(mesh, geom.r_lo, dr, dom_lo, dom_hi);
                check_positive(lo, hi)?;
                *w = quad::gauss4(ge, lo, hi) / dtheta;
            }
        }
    }

    let mut m2 = vec![0.0; mesh.n_faces()];
    for (f, w) in m2.iter_mut().enumerate() {
        let (r_lo, r_hi, _) = mesh.face_geometry(f);
        let area_weight = quad::gauss4(fe, r_lo, r_hi);
        let area_flat = quad::gauss4(|r| profile.f(r), r_lo, r_hi);
        *w = area_weight / (dtheta * area_flat * area_flat);
    }

    for (deg, m) in [(0u8, &m0), (1, &m1), (2, &m2)] {
        if let Some((idx, &v)) = m
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0) || !v.is_finite())
        {
            return Err(Error::Mesh(format!(
                "mass matrix M{deg} has non-positive entry {v:.3e} at cell {idx}"
            )));
        }
    }

    // truncation-tail diagnostic for proper weights
    let (tail_estimate, tail_warning) = if weight.is_proper() {
        let outer = dom_hi;
        let t = quad::tail_integral(fe, outer);
        (Some(t), !(t < TAIL_MASS_LIMIT))
    } else {
        (None, false)
    };

    Ok(WeightedMass {
        m0,
        m1,
        m2,
        tail_estimate,
        tail_warning,
    })
}

fn domain(mesh: &MeshComplex) -> (f64, f64) {
    match mesh.topology {
        Topology::Disk => (0.0, mesh.r_max),
        Topology::Cylinder => (-mesh.r_max, mesh.r_max),
        // periodic: duals never clamp
        Topology::Torus => (f64::NEG_INFINITY, f64::INFINITY),
    }
}

fn dual_interval(mesh: &MeshComplex, r: f64, dr: f64, lo: f64, hi: f64) -> (f64, f64) {
    match mesh.topology {
        Topology::Torus => (r - 0.5 * dr, r + 0.5 * dr),
        _ => ((r - 0.5 * dr).max(lo), (r + 0.5 * dr).min(hi)),
    }
}

/// Finds the smallest radius R with ∫_R^∞ f e^{-U} dr below the tail limit;
/// used by the `auto` grid rule. Only meaningful for proper weights.
pub fn auto_r_max(profile: &crate::geometry::Profile, weight: &WeightSpec) -> Result<f64> {
    if !weight.is_proper() {
        return Err(Error::Config(
            "r_max = auto needs a proper weight; give an explicit radius for unweighted runs"
                .into(),
        ));
    }
    let fe = |r: f64| profile.f(r) * weight.density(r);
    let mut lo = 0.5f64;
    let mut hi = 1.0f64;
    let mut guard = 0;
    while quad::tail_integral(fe, hi) >= TAIL_MASS_LIMIT {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 40 {
            return Err(Error::Config(
                "could not find a truncation radius with small tail mass".into(),
            ));
        }
    }
    // bisect to ~1% and round up a touch for margin
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if quad::tail_integral(fe, mid) < TAIL_MASS_LIMIT {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi * 1.02)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Profile;
    use std::f64::consts::PI;

    #[test]
    fn flat_torus_masses_are_isotropic() {
        let mesh = MeshComplex::build(Topology::Torus, 8, 8, 2.0 * PI).unwrap();
        let triple = CompatibleTriple::standard(Profile::flat_torus(2.0 * PI).unwrap());
        let mass = assemble(&mesh, &triple, &WeightSpec::zero()).unwrap();
        let w_rad = mesh.dtheta() / mesh.dr();
        let w_ang = mesh.dr() / mesh.dtheta();
        for e in 0..mesh.n_edges() {
            let expect = match mesh.edge_geometry(e).kind {
                EdgeKind::Radial => w_rad,
                EdgeKind::Angular => w_ang,
            };
            assert!((mass.m1[e] - expect).abs() < 1e-12);
        }
        // square cells here, so the two weights agree: identity pattern
        assert!((w_rad - w_ang).abs() < 1e-12);
        let w_face = 1.0 / (mesh.dr() * mesh.dtheta());
        for f in 0..mesh.n_faces() {
            assert!((mass.m2[f] - w_face).abs() < 1e-12);
        }
    }

    #[test]
    fn total_vertex_mass_matches_area() {
        // unweighted disk of radius 2: area 2 pi int_0^2 r dr = 4 pi
        let mesh = MeshComplex::build(Topology::Disk, 32, 32, 2.0).unwrap();
        let triple = CompatibleTriple::standard(Profile::plane());
        let mass = assemble(&mesh, &triple, &WeightSpec::zero()).unwrap();
        let total: f64 = mass.m0.iter().sum();
        assert!((total - 4.0 * PI).abs() < 1e-8, "total {total}");
    }

    #[test]
    fn gaussian_disk_tail_is_accepted() {
        let mesh = MeshComplex::build(Topology::Disk, 16, 8, 6.0).unwrap();
        let triple = CompatibleTriple::standard(Profile::plane());
        let mass = assemble(&mesh, &triple, &WeightSpec::gaussian(1.0).unwrap()).unwrap();
        // oracle: int_6^ooo r e^{-r^2} dr = e^{-36}/2 ~ 1.2e-16
        let t = mass.tail_estimate.unwrap();
        assert!((t - 0.5 * (-36.0f64).exp()).abs() < 1e-18);
        assert!(!mass.tail_warning);
    }

    #[test]
    fn short_truncation_warns() {
        let mesh = MeshComplex::build(Topology::Disk, 8, 8, 1.5).unwrap();
        let triple = CompatibleTriple::standard(Profile::plane());
        let mass = assemble(&mesh, &triple, &WeightSpec::gaussian(1.0).unwrap()).unwrap();
        assert!(mass.tail_warning);
    }

    #[test]
    fn torus_rejects_proper_weight() {
        let mesh = MeshComplex::build(Topology::Torus, 8, 8, 2.0 * PI).unwrap();
        let triple = CompatibleTriple::standard(Profile::flat_torus(2.0 * PI).unwrap());
        assert!(assemble(&mesh, &triple, &WeightSpec::gaussian(1.0).unwrap()).is_err());
    }

    #[test]
    fn all_masses_positive_on_weighted_cylinder() {
        let mesh = MeshComplex::build(Topology::Cylinder, 16, 8, 4.0).unwrap();
        let triple = CompatibleTriple::standard(Profile::cylinder());
        let mass = assemble(&mesh, &triple, &WeightSpec::gaussian(1.0).unwrap()).unwrap();
        assert!(mass.m0.iter().all(|&v| v > 0.0));
        assert!(mass.m1.iter().all(|&v| v > 0.0));
        assert!(mass.m2.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn auto_radius_satisfies_tail_rule() {
        let p = Profile::plane();
        let w = WeightSpec::gaussian(1.0).unwrap();
        let r = auto_r_max(&p, &w).unwrap();
        // oracle: tail(R) = e^{-R^2}/2 < 1e-8 needs R > 4.208
        assert!(r > 4.2 && r < 4.6, "auto r_max {r}");
        assert!(auto_r_max(&p, &WeightSpec::zero()).is_err());
    }
}
