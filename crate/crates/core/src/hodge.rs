//! Weighted Hodge decomposition of closed 1-cochains, extraction of the
//! λ-harmonic space, and the discrete action of the complex structure J on
//! 1-cochains.
//!
//! The 0-form normal equations (d0^T M1 d0) φ = d0^T M1 α and the shifted
//! 1-form Laplacian are solved directly (banded Cholesky, ring-major
//! ordering) on disk and cylinder meshes, and by Jacobi-preconditioned CG on
//! the doubly periodic torus where the band structure wraps around.

use crate::dec::cochain::{self, Cochain};
use crate::dec::mass::WeightedMass;
use crate::dec::mesh::{EdgeKind, MeshComplex, Topology};
use crate::error::{Error, Result};
use crate::geometry::CompatibleTriple;
use crate::linalg::{pcg, sym_eig_small, BandCholesky, BandMatrix, Xorshift64};

/// Inputs must be discretely closed to this relative tolerance.
pub const CLOSEDNESS_LIMIT: f64 = 1e-8;

/// Harmonicity threshold relative to the largest eigenvalue.
pub const SPECTRAL_REL_THRESHOLD: f64 = 1e-10;

/// Retained/discarded eigenvalue ratio above which the harmonic dimension is
/// flagged unreliable.
pub const AMBIGUOUS_GAP_RATIO: f64 = 1e-3;

/// Result of splitting a closed 1-cochain α = d φ + χ.
#[derive(Debug, Clone)]
pub struct HodgeSplit {
    /// Potential φ, published in the M0-weighted mean-zero gauge.
    pub potential: Cochain,
    /// d of the raw solved potential (gauge shifts never touch this).
    pub exact_part: Cochain,
    /// χ = α - exact_part, the λ-harmonic remainder.
    pub harmonic_part: Cochain,
    pub residuals: SplitResiduals,
    pub norms: SplitNorms,
}

#[derive(Debug, Clone, Copy)]
pub struct SplitResiduals {
    /// |d χ|_{M2}.
    pub closedness: f64,
    /// |δ_λ χ|_{M0}.
    pub coclosedness: f64,
    /// |⟨d φ, χ⟩_{M1}|.
    pub orthogonality: f64,
    /// |α - d φ - χ|_{M1}; zero by construction.
    pub reconstruction: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SplitNorms {
    pub alpha: f64,
    pub exact: f64,
    pub harmonic: f64,
}

impl HodgeSplit {
    /// |χ| / |α|, the harmonic residual ρ.
    pub fn harmonic_ratio(&self) -> f64 {
        if self.norms.alpha == 0.0 {
            0.0
        } else {
            self.norms.harmonic / self.norms.alpha
        }
    }

    /// |α|² - |dφ|² - |χ|², relative; the orthogonality identity.
    pub fn pythagoras_defect(&self) -> f64 {
        let a2 = self.norms.alpha * self.norms.alpha;
        if a2 == 0.0 {
            return 0.0;
        }
        (a2 - self.norms.exact * self.norms.exact - self.norms.harmonic * self.norms.harmonic)
            .abs()
            / a2
    }
}

/// M1-orthonormal basis of the discrete λ-harmonic 1-forms.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub dimension: usize,
    pub basis: Vec<Cochain>,
    pub retained_eigenvalues: Vec<f64>,
    /// Smallest eigenvalue above the harmonicity threshold.
    pub smallest_discarded: f64,
    pub largest_retained: Option<f64>,
    /// smallest_discarded / largest_retained; infinite when nothing is
    /// retained.
    pub gap_ratio: f64,
    pub lambda_max: f64,
    pub threshold: f64,
    pub ambiguous: bool,
}

/// Shared solver context: factorizations are built once and reused across
/// decompositions on the same mesh.
pub struct HodgeSolver<'m> {
    mesh: &'m MeshComplex,
    mass: &'m WeightedMass,
    l0: ZeroFormSolver,
    /// (edge, ±1) incidence per vertex.
    vertex_stars: Vec<Vec<(usize, i8)>>,
}

enum ZeroFormSolver {
    /// Pinned banded Cholesky (vertex 0 fixed to zero).
    Band(BandCholesky),
    /// Jacobi-preconditioned CG (torus).
    Cg { diag: Vec<f64> },
}

impl<'m> HodgeSolver<'m> {
    pub fn new(mesh: &'m MeshComplex, mass: &'m WeightedMass) -> Result<Self> {
        let vertex_stars = build_vertex_stars(mesh);
        let l0 = match mesh.topology {
            Topology::Torus => {
                let mut diag = vec![0.0; mesh.n_vertices()];
                for e in 0..mesh.n_edges() {
                    let (t, h) = mesh.edge_ends(e);
                    diag[t] += mass.m1[e];
                    diag[h] += mass.m1[e];
                }
                ZeroFormSolver::Cg { diag }
            }
            _ => {
                let bw = mesh.n_theta;
                let mut l0 = BandMatrix::zeros(mesh.n_vertices(), bw);
                for e in 0..mesh.n_edges() {
                    let (t, h) = mesh.edge_ends(e);
                    let w = mass.m1[e];
                    l0.add(t, t, w);
                    l0.add(h, h, w);
                    l0.add(t, h, -w);
                }
                // pin vertex 0 to remove the constant null space: keep its
                // diagonal, cut its couplings
                for i in 1..=bw {
                    let v = l0.get(i, 0);
                    if v != 0.0 {
                        l0.add(i, 0, -v);
                    }
                }
                ZeroFormSolver::Band(l0.cholesky().map_err(|e| {
                    Error::Solver(format!("0-form normal equations not SPD: {e}"))
                })?)
            }
        };
        Ok(HodgeSolver {
            mesh,
            mass,
            l0,
            vertex_stars,
        })
    }

    fn l0_matvec(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for e in 0..self.mesh.n_edges() {
            let (t, h) = self.mesh.edge_ends(e);
            let flux = self.mass.m1[e] * (x[h] - x[t]);
            out[h] += flux;
            out[t] -= flux;
        }
    }

    /// Solves (d0^T M1 d0) φ = rhs for a rhs orthogonal to constants.
    fn solve_l0(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match &self.l0 {
            ZeroFormSolver::Band(chol) => {
                let mut b = rhs.to_vec();
                b[0] = 0.0;
                let mut x = chol.solve(&b);
                // one step of iterative refinement to tame weighted
                // conditioning
                let mut r = vec![0.0; x.len()];
                self.l0_matvec(&x, &mut r);
                for (ri, bi) in r.iter_mut().zip(rhs) {
                    *ri = bi - *ri;
                }
                r[0] = 0.0;
                let dx = chol.solve(&r);
                for (xi, di) in x.iter_mut().zip(&dx) {
                    *xi += di;
                }
                Ok(x)
            }
            ZeroFormSolver::Cg { diag } => {
                let n = rhs.len();
                let (mut x, rel, _iters) = pcg(
                    |p, out| self.l0_matvec(p, out),
                    diag,
                    rhs,
                    1e-13,
                    60 * n,
                );
                if rel > 1e-9 {
                    return Err(Error::Solver(format!(
                        "0-form CG stalled at relative residual {rel:.3e}"
                    )));
                }
                let mean = x.iter().sum::<f64>() / n as f64;
                for xi in &mut x {
                    *xi -= mean;
                }
                Ok(x)
            }
        }
    }

    /// Weighted Hodge decomposition of a closed 1-cochain.
    pub fn decompose(&self, alpha: &Cochain) -> Result<HodgeSplit> {
        alpha.check_against(self.mesh)?;
        if alpha.degree != 1 {
            return Err(Error::Degree {
                got: alpha.degree,
                context: "hodge decomposition acts on 1-cochains",
            });
        }
        let alpha_norm = self.mass.norm(1, &alpha.values);
        let d_alpha = cochain::d(self.mesh, alpha)?;
        let d_alpha_norm = self.mass.norm(2, &d_alpha.values);
        if alpha_norm > 0.0 && d_alpha_norm > CLOSEDNESS_LIMIT * alpha_norm {
            return Err(Error::NotClosed {
                ratio: d_alpha_norm / alpha_norm,
                limit: CLOSEDNESS_LIMIT,
            });
        }

        // rhs = d0^T M1 alpha
        let weighted: Vec<f64> = alpha
            .values
            .iter()
            .zip(&self.mass.m1)
            .map(|(v, w)| v * w)
            .collect();
        let rhs = cochain::d0_transpose(self.mesh, &weighted);
        let phi_raw = self.solve_l0(&rhs)?;

        let phi_cochain = Cochain {
            degree: 0,
            values: phi_raw,
        };
        let exact_part = cochain::d(self.mesh, &phi_cochain)?;
        let harmonic_values: Vec<f64> = alpha
            .values
            .iter()
            .zip(&exact_part.values)
            .map(|(a, e)| a - e)
            .collect();
        let harmonic_part = Cochain {
            degree: 1,
            values: harmonic_values,
        };

        // publish the potential in the M0-weighted mean-zero gauge
        let mass_total: f64 = self.mass.m0.iter().sum();
        let mean = self.mass.inner(0, &phi_cochain.values, &vec![1.0; phi_cochain.len()])
            / mass_total;
        let potential = Cochain {
            degree: 0,
            values: phi_cochain.values.iter().map(|v| v - mean).collect(),
        };

        let d_chi = cochain::d(self.mesh, &harmonic_part)?;
        let delta_chi = cochain::codifferential(self.mesh, self.mass, &harmonic_part)?;
        let recon: Vec<f64> = alpha
            .values
            .iter()
            .zip(exact_part.values.iter().zip(&harmonic_part.values))
            .map(|(a, (e, h))| a - e - h)
            .collect();

        let residuals = SplitResiduals {
            closedness: self.mass.norm(2, &d_chi.values),
            coclosedness: self.mass.norm(0, &delta_chi.values),
            orthogonality: self
                .mass
                .inner(1, &exact_part.values, &harmonic_part.values)
                .abs(),
            reconstruction: self.mass.norm(1, &recon),
        };
        let norms = SplitNorms {
            alpha: alpha_norm,
            exact: self.mass.norm(1, &exact_part.values),
            harmonic: self.mass.norm(1, &harmonic_part.values),
        };
        Ok(HodgeSplit {
            potential,
            exact_part,
            harmonic_part,
            residuals,
            norms,
        })
    }

    /// Extracts the λ-harmonic space at the default spectral threshold.
    pub fn harmonic_basis(&self) -> Result<HarmonicBasis> {
        self.harmonic_basis_with(SPECTRAL_REL_THRESHOLD)
    }

    /// Extracts the λ-harmonic space as the numerical null space of the
    /// 1-form Laplacian d δ_λ + δ_λ d, by shift-inverted subspace iteration
    /// on the symmetric pencil (K, M1) with
    /// K = M1 d0 M0^{-1} d0^T M1 + d1^T M2 d1. Eigenvalues below
    /// `rel_threshold * lambda_max` count as harmonic.
    pub fn harmonic_basis_with(&self, rel_threshold: f64) -> Result<HarmonicBasis> {
        if !(rel_threshold > 0.0) {
            return Err(Error::Config(format!(
                "spectral threshold must be positive, got {rel_threshold}"
            )));
        }
        let lap = OneFormLaplacian::new(self.mesh, self.mass, &self.vertex_stars);
        let n = self.mesh.n_edges();
        let block = 5.min(n);

        let lambda_max = lap.estimate_lambda_max();
        let threshold = rel_threshold * lambda_max;
        let direct = self.mesh.topology != Topology::Torus;
        let sigma = if direct { 1e-6 } else { 1e-3 } * lambda_max;
        let shifted = lap.shifted_context(sigma)?;

        let mut rng = Xorshift64::new(0x5eed_1234_abcd_ef01);
        let mut x: Vec<Vec<f64>> = (0..block)
            .map(|_| (0..n).map(|_| rng.next_signed()).collect())
            .collect();
        m1_orthonormalize(self.mass, &mut x)?;

        let mut ritz = vec![f64::INFINITY; block];
        let max_outer = 40;
        for outer in 0..max_outer {
            let mut y: Vec<Vec<f64>> = Vec::with_capacity(block);
            for xi in &x {
                let mut b = vec![0.0; n];
                for (bi, (v, w)) in b.iter_mut().zip(xi.iter().zip(&self.mass.m1)) {
                    *bi = v * w;
                }
                y.push(shifted.solve(&lap, sigma, &b)?);
            }
            m1_orthonormalize(self.mass, &mut y)?;
            // Rayleigh-Ritz on the block
            let ky: Vec<Vec<f64>> = y.iter().map(|yi| lap.apply(yi)).collect();
            let mut small = vec![vec![0.0; block]; block];
            for i in 0..block {
                for j in 0..=i {
                    let v = crate::linalg::dot(&y[i], &ky[j]);
                    small[i][j] = v;
                    small[j][i] = v;
                }
            }
            let (vals, vecs) = sym_eig_small(&small);
            let mut x_new: Vec<Vec<f64>> = vec![vec![0.0; n]; block];
            for (k, xk) in x_new.iter_mut().enumerate() {
                for (i, yi) in y.iter().enumerate() {
                    let c = vecs[i][k];
                    for (xv, yv) in xk.iter_mut().zip(yi) {
                        *xv += c * yv;
                    }
                }
            }
            x = x_new;
            let change = vals
                .iter()
                .zip(&ritz)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            ritz = vals;
            if outer >= 3 && change < 1e-9 * lambda_max {
                break;
            }
        }

        // final Rayleigh quotients and classification
        let mut eigen: Vec<(f64, Vec<f64>)> = Vec::with_capacity(block);
        for xi in &x {
            let kx = lap.apply(xi);
            let num = crate::linalg::dot(xi, &kx);
            let den = self.mass.inner(1, xi, xi);
            eigen.push((num / den, xi.clone()));
        }
        eigen.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let mut basis = Vec::new();
        let mut retained = Vec::new();
        let mut smallest_discarded = f64::INFINITY;
        for (val, vec) in &eigen {
            if *val < threshold {
                retained.push(*val);
                basis.push(Cochain {
                    degree: 1,
                    values: vec.clone(),
                });
            } else {
                smallest_discarded = smallest_discarded.min(*val);
            }
        }
        let largest_retained = retained.last().copied();
        let gap_ratio = match largest_retained {
            Some(lr) if lr > 0.0 => smallest_discarded / lr,
            Some(_) => f64::INFINITY,
            None => f64::INFINITY,
        };
        let ambiguous = match largest_retained {
            Some(lr) => lr / smallest_discarded > AMBIGUOUS_GAP_RATIO,
            None => false,
        };
        Ok(HarmonicBasis {
            dimension: basis.len(),
            basis,
            retained_eigenvalues: retained,
            smallest_discarded,
            largest_retained,
            gap_ratio,
            lambda_max,
            threshold,
            ambiguous,
        })
    }

    pub fn mesh(&self) -> &MeshComplex {
        self.mesh
    }

    pub fn mass(&self) -> &WeightedMass {
        self.mass
    }
}

fn build_vertex_stars(mesh: &MeshComplex) -> Vec<Vec<(usize, i8)>> {
    let mut stars = vec![Vec::new(); mesh.n_vertices()];
    for e in 0..mesh.n_edges() {
        let (t, h) = mesh.edge_ends(e);
        stars[t].push((e, -1));
        stars[h].push((e, 1));
    }
    stars
}

/// M1-modified Gram-Schmidt with one re-orthogonalization pass.
fn m1_orthonormalize(mass: &WeightedMass, vectors: &mut [Vec<f64>]) -> Result<()> {
    let k = vectors.len();
    for i in 0..k {
        for _pass in 0..2 {
            for j in 0..i {
                let (vi_slice, vj_slice) = {
                    let (a, b) = vectors.split_at_mut(i);
                    (&mut b[0], &a[j])
                };
                let c = mass.inner(1, vi_slice, vj_slice);
                for (x, y) in vi_slice.iter_mut().zip(vj_slice) {
                    *x -= c * y;
                }
            }
        }
        let nrm = mass.norm(1, &vectors[i]);
        if nrm < 1e-300 {
            return Err(Error::Solver(
                "subspace collapse during orthonormalization".into(),
            ));
        }
        vectors[i].iter_mut().for_each(|v| *v /= nrm);
    }
    Ok(())
}

/// The 1-form Laplacian as the symmetric quadratic form
/// K = M1 d0 M0^{-1} d0^T M1 + d1^T M2 d1 on edge values.
struct OneFormLaplacian<'a> {
    mesh: &'a MeshComplex,
    mass: &'a WeightedMass,
    stars: &'a [Vec<(usize, i8)>],
    diag: Vec<f64>,
}

enum ShiftedContext {
    Band {
        chol: BandCholesky,
        perm: Vec<usize>,
        inv_perm: Vec<usize>,
    },
    Cg,
}

impl<'a> OneFormLaplacian<'a> {
    fn new(
        mesh: &'a MeshComplex,
        mass: &'a WeightedMass,
        stars: &'a [Vec<(usize, i8)>],
    ) -> Self {
        let mut diag = vec![0.0; mesh.n_edges()];
        for (v, star) in stars.iter().enumerate() {
            for &(e, _s) in star {
                let w = mass.m1[e];
                diag[e] += w * w / mass.m0[v];
            }
        }
        for f in 0..mesh.n_faces() {
            for (e, _s) in mesh.face_boundary(f).iter() {
                diag[e] += mass.m2[f];
            }
        }
        OneFormLaplacian {
            mesh,
            mass,
            stars,
            diag,
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.apply_into(x, &mut out);
        out
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        // vertex term: M1 d0 M0^{-1} d0^T M1
        for (v, star) in self.stars.iter().enumerate() {
            let mut acc = 0.0;
            for &(e, s) in star {
                acc += s as f64 * self.mass.m1[e] * x[e];
            }
            acc /= self.mass.m0[v];
            for &(e, s) in star {
                out[e] += s as f64 * self.mass.m1[e] * acc;
            }
        }
        // face term: d1^T M2 d1
        for f in 0..self.mesh.n_faces() {
            let mut acc = 0.0;
            for (e, s) in self.mesh.face_boundary(f).iter() {
                acc += s as f64 * x[e];
            }
            acc *= self.mass.m2[f];
            for (e, s) in self.mesh.face_boundary(f).iter() {
                out[e] += s as f64 * acc;
            }
        }
    }

    /// Power iteration estimate of the largest eigenvalue of (K, M1).
    fn estimate_lambda_max(&self) -> f64 {
        let n = self.mesh.n_edges();
        let mut rng = Xorshift64::new(0x1a3bda_f00d);
        let mut z: Vec<f64> = (0..n).map(|_| rng.next_signed()).collect();
        let mut lambda = 1.0;
        for _ in 0..80 {
            let kz = self.apply(&z);
            let mut y: Vec<f64> = kz
                .iter()
                .zip(&self.mass.m1)
                .map(|(v, w)| v / w)
                .collect();
            let nrm = self.mass.norm(1, &y);
            if nrm == 0.0 {
                break;
            }
            y.iter_mut().for_each(|v| *v /= nrm);
            let ky = self.apply(&y);
            lambda = crate::linalg::dot(&y, &ky) / self.mass.inner(1, &y, &y);
            z = y;
        }
        lambda.max(1e-300)
    }

    /// Banded factorization of K + sigma M1 in an interleaved ring order, or
    /// a CG marker on the torus.
    fn shifted_context(&self, sigma: f64) -> Result<ShiftedContext> {
        if self.mesh.topology == Topology::Torus {
            return Ok(ShiftedContext::Cg);
        }
        let n = self.mesh.n_edges();
        let perm = edge_band_order(self.mesh);
        let mut inv_perm = vec![0usize; n];
        for (pos, &e) in perm.iter().enumerate() {
            inv_perm[e] = pos;
        }
        let bw = 2 * self.mesh.n_theta;
        let mut band = BandMatrix::zeros(n, bw);
        // vertex outer products
        for (v, star) in self.stars.iter().enumerate() {
            let inv_m0 = 1.0 / self.mass.m0[v];
            for (ai, &(ea, sa)) in star.iter().enumerate() {
                let ga = sa as f64 * self.mass.m1[ea];
                for &(eb, sb) in star.iter().skip(ai) {
                    let gb = sb as f64 * self.mass.m1[eb];
                    band.add(inv_perm[ea], inv_perm[eb], ga * gb * inv_m0);
                }
            }
        }
        // face outer products
        for f in 0..self.mesh.n_faces() {
            let m2 = self.mass.m2[f];
            let edges: Vec<(usize, i8)> = self.mesh.face_boundary(f).iter().collect();
            for (ai, &(ea, sa)) in edges.iter().enumerate() {
                for &(eb, sb) in edges.iter().skip(ai) {
                    band.add(
                        inv_perm[ea],
                        inv_perm[eb],
                        sa as f64 * sb as f64 * m2,
                    );
                }
            }
        }
        for e in 0..n {
            band.add(inv_perm[e], inv_perm[e], sigma * self.mass.m1[e]);
        }
        let chol = band
            .cholesky()
            .map_err(|e| Error::Solver(format!("shifted 1-form operator not SPD: {e}")))?;
        Ok(ShiftedContext::Band {
            chol,
            perm,
            inv_perm,
        })
    }
}

impl ShiftedContext {
    fn solve(&self, lap: &OneFormLaplacian<'_>, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            ShiftedContext::Band {
                chol,
                perm,
                inv_perm,
            } => {
                let pb: Vec<f64> = perm.iter().map(|&e| b[e]).collect();
                let px = chol.solve(&pb);
                Ok((0..b.len()).map(|e| px[inv_perm[e]]).collect())
            }
            ShiftedContext::Cg => {
                let diag: Vec<f64> = lap
                    .diag
                    .iter()
                    .zip(&lap.mass.m1)
                    .map(|(d, w)| d + sigma * w)
                    .collect();
                let n = b.len();
                let (x, rel, _) = pcg(
                    |p, out| {
                        lap.apply_into(p, out);
                        for (o, (pi, w)) in out.iter_mut().zip(p.iter().zip(&lap.mass.m1)) {
                            *o += sigma * w * pi;
                        }
                    },
                    &diag,
                    b,
                    1e-11,
                    80 * n,
                );
                if rel > 1e-6 {
                    return Err(Error::Solver(format!(
                        "shifted 1-form CG stalled at {rel:.3e}"
                    )));
                }
                Ok(x)
            }
        }
    }
}

/// Interleaved ring-major edge ordering that keeps the 1-form operator
/// banded on disk and cylinder meshes.
fn edge_band_order(mesh: &MeshComplex) -> Vec<usize> {
    let n_t = mesh.n_theta;
    let mut order = Vec::with_capacity(mesh.n_edges());
    match mesh.topology {
        Topology::Disk => {
            // rad(0) | ang(1) | rad(1) | ang(2) | ...
            for i in 0..mesh.n_r {
                for j in 0..n_t {
                    order.push(mesh.radial_edge_id(i, j));
                }
                for j in 0..n_t {
                    order.push(mesh.angular_edge_id(i + 1, j));
                }
            }
        }
        Topology::Cylinder => {
            // ang(0) | rad(0) | ang(1) | rad(1) | ... | ang(n_r)
            for i in 0..mesh.n_r {
                for j in 0..n_t {
                    order.push(mesh.angular_edge_id(i, j));
                }
                for j in 0..n_t {
                    order.push(mesh.radial_edge_id(i, j));
                }
            }
            for j in 0..n_t {
                order.push(mesh.angular_edge_id(mesh.n_r, j));
            }
        }
        Topology::Torus => {
            order.extend(0..mesh.n_edges());
        }
    }
    order
}

/// Per-face orthonormal-coframe components reconstructed from edge values by
/// least squares: α ≈ p dr + q (f dθ) on each face.
pub fn face_coframe_components(
    mesh: &MeshComplex,
    triple: &CompatibleTriple,
    c: &Cochain,
) -> Vec<(f64, f64)> {
    let dr = mesh.dr();
    let dtheta = mesh.dtheta();
    let mut out = Vec::with_capacity(mesh.n_faces());
    for f in 0..mesh.n_faces() {
        let mut p_num = 0.0;
        let mut p_den = 0.0;
        let mut q_num = 0.0;
        let mut q_den = 0.0;
        for (e, _sign) in mesh.face_boundary(f).iter() {
            let geom = mesh.edge_geometry(e);
            match geom.kind {
                EdgeKind::Radial => {
                    p_num += c.values[e] * dr;
                    p_den += dr * dr;
                }
                EdgeKind::Angular => {
                    let fr = triple.profile.f(geom.r_lo);
                    q_num += c.values[e] * fr * dtheta;
                    q_den += fr * fr * dtheta * dtheta;
                }
            }
        }
        out.push((p_num / p_den, q_num / q_den));
    }
    out
}

/// Applies the complex structure J to a 1-cochain: reconstructs the
/// orthonormal coframe components per face, rotates (p, q) -> (-σ q, σ p),
/// and resamples to edges by averaging adjacent faces. Second-order accurate
/// away from the apex and the free boundary; apex faces use the one-sided
/// triangle reconstruction.
pub fn j_apply(mesh: &MeshComplex, triple: &CompatibleTriple, c: &Cochain) -> Result<Cochain> {
    c.check_against(mesh)?;
    if c.degree != 1 {
        return Err(Error::Degree {
            got: c.degree,
            context: "J acts on 1-cochains",
        });
    }
    let comps = face_coframe_components(mesh, triple, c);
    let sigma = triple.sigma;
    let dr = mesh.dr();
    let dtheta = mesh.dtheta();
    let mut values = vec![0.0; mesh.n_edges()];
    for (e, value) in values.iter_mut().enumerate() {
        let geom = mesh.edge_geometry(e);
        let faces = mesh.edge_faces(e);
        let inv = 1.0 / faces.len() as f64;
        match geom.kind {
            EdgeKind::Radial => {
                // new p = -sigma q
                let q_avg: f64 = faces.iter().map(|&f| comps[f].1).sum::<f64>() * inv;
                *value = -sigma * q_avg * dr;
            }
            EdgeKind::Angular => {
                // new q = sigma p
                let p_avg: f64 = faces.iter().map(|&f| comps[f].0).sum::<f64>() * inv;
                *value = sigma * p_avg * triple.profile.f(geom.r_lo) * dtheta;
            }
        }
    }
    Ok(Cochain { degree: 1, values })
}

/// Worst-case relative defect of J-invariance of the harmonic space:
/// max_i |J χ_i - proj(J χ_i)| / |J χ_i| with the M1-orthogonal projection
/// onto span(basis). An empty basis has defect 0.
pub fn j_invariance_defect(
    mesh: &MeshComplex,
    mass: &WeightedMass,
    triple: &CompatibleTriple,
    basis: &HarmonicBasis,
) -> Result<f64> {
    if basis.basis.is_empty() {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for chi in &basis.basis {
        let j_chi = j_apply(mesh, triple, chi)?;
        let j_norm = mass.norm(1, &j_chi.values);
        if j_norm == 0.0 {
            continue;
        }
        let mut residual = j_chi.values.clone();
        for b in &basis.basis {
            let coeff = mass.inner(1, &j_chi.values, &b.values);
            for (r, bv) in residual.iter_mut().zip(&b.values) {
                *r -= coeff * bv;
            }
        }
        worst = worst.max(mass.norm(1, &residual) / j_norm);
    }
    Ok(worst)
}

/// One-shot convenience: build the solver and decompose.
pub fn hodge_decompose(
    mesh: &MeshComplex,
    mass: &WeightedMass,
    alpha: &Cochain,
) -> Result<HodgeSplit> {
    HodgeSolver::new(mesh, mass)?.decompose(alpha)
}

/// One-shot convenience: build the solver and extract the harmonic basis.
pub fn harmonic_basis(mesh: &MeshComplex, mass: &WeightedMass) -> Result<HarmonicBasis> {
    HodgeSolver::new(mesh, mass)?.harmonic_basis()
}
