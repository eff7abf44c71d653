//! Truncated structured cell complex on (r, θ): disk (apex vertex plus an
//! annulus grid), cylinder (periodic θ, bounded r) and torus (doubly
//! periodic). Incidence is stored exactly as integers; all geometry is
//! derived from the ring radii.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Disk,
    Cylinder,
    Torus,
}

impl Topology {
    pub fn expected_euler_characteristic(&self) -> i64 {
        match self {
            Topology::Disk => 1,
            Topology::Cylinder | Topology::Torus => 0,
        }
    }

    /// First Betti number of the underlying surface.
    pub fn betti_1(&self) -> usize {
        match self {
            Topology::Disk => 0,
            Topology::Cylinder => 1,
            Topology::Torus => 2,
        }
    }

    pub fn has_fixed_point(&self) -> bool {
        matches!(self, Topology::Disk)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Topology::Disk => "disk",
            Topology::Cylinder => "cylinder",
            Topology::Torus => "torus",
        }
    }
}

/// Which coordinate direction an edge runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Radial,
    Angular,
}

/// Geometric footprint of an edge: radial edges span [r_lo, r_hi] at fixed
/// θ; angular edges sit at fixed r and span Δθ starting at θ_lo.
#[derive(Debug, Clone, Copy)]
pub struct EdgeGeometry {
    pub kind: EdgeKind,
    pub r_lo: f64,
    pub r_hi: f64,
    pub theta_lo: f64,
}

impl EdgeGeometry {
    pub fn r_mid(&self) -> f64 {
        0.5 * (self.r_lo + self.r_hi)
    }
}

/// One face's oriented boundary: up to four (edge, sign) pairs.
#[derive(Debug, Clone, Copy)]
pub struct FaceBoundary {
    pub edges: [(usize, i8); 4],
    pub len: u8,
}

impl FaceBoundary {
    pub fn iter(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.edges.iter().take(self.len as usize).copied()
    }
}

#[derive(Debug, Clone)]
pub struct MeshComplex {
    pub topology: Topology,
    pub n_r: usize,
    pub n_theta: usize,
    /// Disk: outer radius. Cylinder: half-width (domain [-r_max, r_max]).
    /// Torus: circumference of the r circle.
    pub r_max: f64,
    dr: f64,
    dtheta: f64,
    n_vertices: usize,
    n_edges: usize,
    n_radial_edges: usize,
    n_faces: usize,
    /// d0 incidence: per edge (tail, head).
    edge_ends: Vec<(usize, usize)>,
    edge_geom: Vec<EdgeGeometry>,
    face_boundary: Vec<FaceBoundary>,
    /// Face footprint (r_lo, r_hi, theta_lo); apex faces are triangles.
    face_geom: Vec<(f64, f64, f64)>,
}

impl MeshComplex {
    pub fn build(topology: Topology, n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        if n_r < 4 || n_theta < 4 {
            return Err(Error::Mesh(format!(
                "grid must be at least 4x4, got {n_r}x{n_theta}"
            )));
        }
        if !(r_max > 0.0) {
            return Err(Error::Mesh(format!("r_max must be positive, got {r_max}")));
        }
        let dtheta = 2.0 * PI / n_theta as f64;
        let dr = match topology {
            Topology::Disk => r_max / n_r as f64,
            Topology::Cylinder => 2.0 * r_max / n_r as f64,
            Topology::Torus => r_max / n_r as f64,
        };
        let mut mesh = MeshComplex {
            topology,
            n_r,
            n_theta,
            r_max,
            dr,
            dtheta,
            n_vertices: 0,
            n_edges: 0,
            n_radial_edges: 0,
            n_faces: 0,
            edge_ends: Vec::new(),
            edge_geom: Vec::new(),
            face_boundary: Vec::new(),
            face_geom: Vec::new(),
        };
        mesh.assemble_tables();
        let chi = mesh.euler_characteristic();
        if chi != topology.expected_euler_characteristic() {
            return Err(Error::Mesh(format!(
                "euler characteristic {chi} does not match topology {}",
                topology.name()
            )));
        }
        debug_assert!(mesh.d1_after_d0_is_zero());
        Ok(mesh)
    }

    /// Radius of ring `i` (disk rings run 1..=n_r; the apex is ring 0).
    pub fn ring_radius(&self, i: usize) -> f64 {
        match self.topology {
            Topology::Disk | Topology::Torus => i as f64 * self.dr,
            Topology::Cylinder => -self.r_max + i as f64 * self.dr,
        }
    }

    fn assemble_tables(&mut self) {
        let (n_r, n_t) = (self.n_r, self.n_theta);
        let (n_v, n_rad, n_ang, n_f) = match self.topology {
            Topology::Disk => (1 + n_r * n_t, n_r * n_t, n_r * n_t, n_r * n_t),
            Topology::Cylinder => ((n_r + 1) * n_t, n_r * n_t, (n_r + 1) * n_t, n_r * n_t),
            Topology::Torus => (n_r * n_t, n_r * n_t, n_r * n_t, n_r * n_t),
        };
        self.n_vertices = n_v;
        self.n_radial_edges = n_rad;
        self.n_edges = n_rad + n_ang;
        self.n_faces = n_f;

        self.edge_ends = Vec::with_capacity(self.n_edges);
        self.edge_geom = Vec::with_capacity(self.n_edges);
        // radial edges: block of n_r * n_theta, index i * n_theta + j
        for i in 0..n_r {
            for j in 0..n_t {
                let (tail, head) = match self.topology {
                    Topology::Disk => {
                        if i == 0 {
                            (0, self.vertex_id(1, j))
                        } else {
                            (self.vertex_id(i, j), self.vertex_id(i + 1, j))
                        }
                    }
                    Topology::Cylinder => (self.vertex_id(i, j), self.vertex_id(i + 1, j)),
                    Topology::Torus => (self.vertex_id(i, j), self.vertex_id((i + 1) % n_r, j)),
                };
                self.edge_ends.push((tail, head));
                let r_lo = self.radial_edge_r_lo(i);
                self.edge_geom.push(EdgeGeometry {
                    kind: EdgeKind::Radial,
                    r_lo,
                    r_hi: r_lo + self.dr,
                    theta_lo: j as f64 * self.dtheta,
                });
            }
        }
        // angular edges
        for a in 0..n_ang {
            let (ring, j) = (a / n_t, a % n_t);
            let ring = self.angular_ring_from_block(ring);
            let v0 = self.vertex_id(ring, j);
            let v1 = self.vertex_id(ring, (j + 1) % n_t);
            self.edge_ends.push((v0, v1));
            self.edge_geom.push(EdgeGeometry {
                kind: EdgeKind::Angular,
                r_lo: self.ring_radius(ring),
                r_hi: self.ring_radius(ring),
                theta_lo: j as f64 * self.dtheta,
            });
        }

        self.face_boundary = Vec::with_capacity(n_f);
        self.face_geom = Vec::with_capacity(n_f);
        for i in 0..n_r {
            for j in 0..n_t {
                let jp = (j + 1) % n_t;
                let rad = |ii: usize, jj: usize| ii * n_t + jj;
                let boundary = if self.topology == Topology::Disk && i == 0 {
                    // apex triangle: spoke out, arc, spoke back
                    FaceBoundary {
                        edges: [
                            (rad(0, j), 1),
                            (self.angular_edge_id(1, j), 1),
                            (rad(0, jp), -1),
                            (0, 0),
                        ],
                        len: 3,
                    }
                } else {
                    let ring_above = match self.topology {
                        Topology::Torus => (i + 1) % n_r,
                        _ => i + 1,
                    };
                    FaceBoundary {
                        edges: [
                            (rad(i, j), 1),
                            (self.angular_edge_id(ring_above, j), 1),
                            (rad(i, jp), -1),
                            (self.angular_edge_id(i, j), -1),
                        ],
                        len: 4,
                    }
                };
                self.face_boundary.push(boundary);
                let r_lo = self.radial_edge_r_lo(i);
                self.face_geom
                    .push((r_lo, r_lo + self.dr, j as f64 * self.dtheta));
            }
        }
    }

    fn radial_edge_r_lo(&self, i: usize) -> f64 {
        match self.topology {
            Topology::Disk | Topology::Torus => i as f64 * self.dr,
            Topology::Cylinder => -self.r_max + i as f64 * self.dr,
        }
    }

    fn angular_ring_from_block(&self, block: usize) -> usize {
        match self.topology {
            Topology::Disk => block + 1, // rings 1..=n_r carry angular edges
            _ => block,
        }
    }

    /// Id of the angular edge at `ring` starting at angle index `j`.
    pub fn angular_edge_id(&self, ring: usize, j: usize) -> usize {
        let block = match self.topology {
            Topology::Disk => ring - 1,
            Topology::Torus => ring % self.n_r,
            Topology::Cylinder => ring,
        };
        self.n_radial_edges + block * self.n_theta + j
    }

    pub fn radial_edge_id(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    pub fn vertex_id(&self, ring: usize, j: usize) -> usize {
        match self.topology {
            Topology::Disk => {
                if ring == 0 {
                    0
                } else {
                    1 + (ring - 1) * self.n_theta + j
                }
            }
            Topology::Cylinder => ring * self.n_theta + j,
            Topology::Torus => (ring % self.n_r) * self.n_theta + j,
        }
    }

    /// Ring index and angle index of a vertex (apex reports ring 0, j 0).
    pub fn vertex_ring_angle(&self, v: usize) -> (usize, usize) {
        match self.topology {
            Topology::Disk => {
                if v == 0 {
                    (0, 0)
                } else {
                    (1 + (v - 1) / self.n_theta, (v - 1) % self.n_theta)
                }
            }
            _ => (v / self.n_theta, v % self.n_theta),
        }
    }

    pub fn vertex_radius(&self, v: usize) -> f64 {
        let (ring, _) = self.vertex_ring_angle(v);
        self.ring_radius(ring)
    }

    pub fn vertex_theta(&self, v: usize) -> f64 {
        let (_, j) = self.vertex_ring_angle(v);
        j as f64 * self.dtheta
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn n_radial_edges(&self) -> usize {
        self.n_radial_edges
    }

    pub fn n_angular_edges(&self) -> usize {
        self.n_edges - self.n_radial_edges
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.edge_ends[e]
    }

    pub fn edge_geometry(&self, e: usize) -> &EdgeGeometry {
        &self.edge_geom[e]
    }

    pub fn face_boundary(&self, f: usize) -> &FaceBoundary {
        &self.face_boundary[f]
    }

    /// Face footprint (r_lo, r_hi, theta_lo); the θ span is always dθ.
    pub fn face_geometry(&self, f: usize) -> (f64, f64, f64) {
        self.face_geom[f]
    }

    pub fn face_is_triangle(&self, f: usize) -> bool {
        self.face_boundary[f].len == 3
    }

    /// Faces adjacent to an edge, in no particular order.
    pub fn edge_faces(&self, e: usize) -> Vec<usize> {
        // structured grid: derive adjacency from indices
        let n_t = self.n_theta;
        if e < self.n_radial_edges {
            let (i, j) = (e / n_t, e % n_t);
            let jm = (j + n_t - 1) % n_t;
            vec![i * n_t + jm, i * n_t + j]
        } else {
            let a = e - self.n_radial_edges;
            let (block, j) = (a / n_t, a % n_t);
            match self.topology {
                Topology::Disk => {
                    // block b is ring b+1; faces below (ring b) and above (b+1)
                    let ring = block + 1;
                    let mut out = vec![(ring - 1) * n_t + j];
                    if ring < self.n_r {
                        out.push(ring * n_t + j);
                    }
                    out
                }
                Topology::Cylinder => {
                    let ring = block;
                    let mut out = Vec::new();
                    if ring > 0 {
                        out.push((ring - 1) * n_t + j);
                    }
                    if ring < self.n_r {
                        out.push(ring * n_t + j);
                    }
                    out
                }
                Topology::Torus => {
                    let ring = block;
                    let below = (ring + self.n_r - 1) % self.n_r;
                    vec![below * n_t + j, ring * n_t + j]
                }
            }
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges as i64 + self.n_faces as i64
    }

    /// Exact integer check that the composite face-of-edge-of-vertex
    /// incidence vanishes.
    pub fn d1_after_d0_is_zero(&self) -> bool {
        for f in 0..self.n_faces {
            let mut acc = vec![0i64; self.n_vertices];
            for (e, sign) in self.face_boundary[f].iter() {
                let (tail, head) = self.edge_ends[e];
                acc[head] += sign as i64;
                acc[tail] -= sign as i64;
            }
            if acc.iter().any(|&v| v != 0) {
                return false;
            }
        }
        true
    }

    /// Index of the same-kind edge rotated by `steps` angle increments; the
    /// pullback by the discrete rotation reads values through this map.
    pub fn rotate_edge(&self, e: usize, steps: usize) -> usize {
        let n_t = self.n_theta;
        if e < self.n_radial_edges {
            let (i, j) = (e / n_t, e % n_t);
            i * n_t + (j + steps) % n_t
        } else {
            let a = e - self.n_radial_edges;
            let (block, j) = (a / n_t, a % n_t);
            self.n_radial_edges + block * n_t + (j + steps) % n_t
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        let m = MeshComplex::build(Topology::Torus, 8, 8, 2.0 * PI).unwrap();
        assert_eq!(m.n_vertices(), 64);
        assert_eq!(m.n_edges(), 128);
        assert_eq!(m.n_faces(), 64);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn disk_counts() {
        let m = MeshComplex::build(Topology::Disk, 4, 8, 1.0).unwrap();
        assert_eq!(m.n_vertices(), 33); // apex + 4 rings of 8
        assert_eq!(m.n_edges(), 64);
        assert_eq!(m.n_faces(), 32);
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn cylinder_counts() {
        let m = MeshComplex::build(Topology::Cylinder, 6, 10, 3.0).unwrap();
        assert_eq!(m.n_vertices(), 70);
        assert_eq!(m.n_edges(), 60 + 70);
        assert_eq!(m.n_faces(), 60);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn composite_incidence_vanishes_everywhere() {
        for (topo, r_max) in [
            (Topology::Disk, 2.0),
            (Topology::Cylinder, 3.0),
            (Topology::Torus, 2.0 * PI),
        ] {
            let m = MeshComplex::build(topo, 5, 7, r_max).unwrap();
            assert!(m.d1_after_d0_is_zero(), "{:?}", topo);
        }
    }

    #[test]
    fn face_orientation_row_sums() {
        // quads have two +1 and two -1 entries; apex triangles two +1, one -1
        let m = MeshComplex::build(Topology::Disk, 4, 8, 1.0).unwrap();
        for f in 0..m.n_faces() {
            let b = m.face_boundary(f);
            let sum: i64 = b.iter().map(|(_, s)| s as i64).sum();
            if m.face_is_triangle(f) {
                assert_eq!(sum, 1);
            } else {
                assert_eq!(sum, 0);
            }
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(MeshComplex::build(Topology::Torus, 3, 8, 1.0).is_err());
        assert!(MeshComplex::build(Topology::Torus, 8, 3, 1.0).is_err());
        assert!(MeshComplex::build(Topology::Disk, 8, 8, -1.0).is_err());
    }

    #[test]
    fn edge_faces_are_mutual() {
        for (topo, r_max) in [
            (Topology::Disk, 2.0),
            (Topology::Cylinder, 3.0),
            (Topology::Torus, 2.0 * PI),
        ] {
            let m = MeshComplex::build(topo, 5, 6, r_max).unwrap();
            for f in 0..m.n_faces() {
                for (e, _) in m.face_boundary(f).iter() {
                    assert!(
                        m.edge_faces(e).contains(&f),
                        "{:?}: face {f} missing from edge {e} adjacency",
                        topo
                    );
                }
            }
        }
    }

    #[test]
    fn cylinder_rings_span_symmetric_interval() {
        let m = MeshComplex::build(Topology::Cylinder, 8, 8, 2.5).unwrap();
        assert!((m.ring_radius(0) + 2.5).abs() < 1e-14);
        assert!((m.ring_radius(8) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn rotation_map_preserves_kind_and_ring() {
        let m = MeshComplex::build(Topology::Torus, 6, 8, 2.0 * PI).unwrap();
        for e in 0..m.n_edges() {
            let r = m.rotate_edge(e, 3);
            assert_eq!(m.edge_geometry(e).kind, m.edge_geometry(r).kind);
            assert!((m.edge_geometry(e).r_lo - m.edge_geometry(r).r_lo).abs() < 1e-14);
        }
    }
}
