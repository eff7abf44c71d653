//! One-dimensional quadrature used throughout the crate: an adaptive
//! Gauss–Kronrod 7/15 rule for profile integrals and a doubling probe that
//! classifies improper integrals as convergent or divergent.

/// Kronrod-15 abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded Gauss-7 weights (applied at XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Default absolute tolerance for adaptive integration.
pub const QUAD_ABS_TOL: f64 = 1e-10;

/// Growth-ratio threshold for the divergence probe.
pub const DIVERGENCE_RATIO: f64 = 1.5;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b] to absolute
/// tolerance `abs_tol`. Returns the integral estimate; panics never, but
/// stops refining after a generous subdivision budget (smooth radial
/// integrands converge in a handful of splits).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };
    // (lo, hi, value, err)
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v0, e0) = gk15(&f, lo, hi);
    stack.push((lo, hi, v0, e0));
    let mut total = v0;
    let mut total_err = e0;
    let mut splits = 0usize;
    const MAX_SPLITS: usize = 4000;
    while total_err > abs_tol && splits < MAX_SPLITS {
        // split the interval with the largest error estimate
        let (idx, _) = stack
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (ia, ib, iv, ie) = stack.swap_remove(idx);
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // interval exhausted at machine precision
            stack.push((ia, ib, iv, ie));
            break;
        }
        let (vl, el) = gk15(&f, ia, mid);
        let (vr, er) = gk15(&f, mid, ib);
        total += vl + vr - iv;
        total_err += el + er - ie;
        stack.push((ia, mid, vl, el));
        stack.push((mid, ib, vr, er));
        splits += 1;
    }
    sign * total
}

/// Convenience wrapper at the crate default tolerance.
pub fn integrate_default<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate(f, a, b, QUAD_ABS_TOL)
}

/// 4-point Gauss–Legendre rule over [a, b]; the fixed per-cell rule used by
/// mass-matrix assembly.
pub fn gauss4<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 2] = [0.3399810435848563, 0.8611363115940526];
    const W: [f64; 2] = [0.6521451548625461, 0.3478548451374538];
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for k in 0..2 {
        acc += W[k] * (f(center - half * X[k]) + f(center + half * X[k]));
    }
    acc * half
}

/// Outcome of the doubling probe for the improper integral of `f` on
/// `[lo, infinity)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TailClass {
    /// Partial integrals grow geometrically: certified divergent.
    Divergent {
        /// Partial integrals at r_max, 2 r_max, 4 r_max, 8 r_max.
        partials: [f64; 4],
        /// Successive ratios (all exceed [`DIVERGENCE_RATIO`]).
        ratios: [f64; 3],
    },
    /// Partial integrals stabilize; `value` is the widest-range estimate.
    Convergent {
        value: f64,
        /// Relative growth of the last doubling, a rough tail bound.
        last_increment: f64,
    },
}

impl TailClass {
    pub fn is_divergent(&self) -> bool {
        matches!(self, TailClass::Divergent { .. })
    }
}

/// Classifies ∫_{lo}^{∞} f dr by comparing partial integrals over
/// [lo, r_max], [lo, 2 r_max], [lo, 4 r_max], [lo, 8 r_max]: geometric growth
/// of the partials (every ratio above 1.5) certifies divergence.
pub fn probe_improper<F: Fn(f64) -> f64>(f: F, lo: f64, r_max: f64) -> TailClass {
    assert!(r_max > lo, "probe range must be nonempty");
    let mut partials = [0.0f64; 4];
    let mut acc = integrate(&f, lo, r_max, QUAD_ABS_TOL);
    partials[0] = acc;
    let mut hi = r_max;
    for p in partials.iter_mut().skip(1) {
        acc += integrate(&f, hi, 2.0 * hi, QUAD_ABS_TOL);
        hi *= 2.0;
        *p = acc;
    }
    let mut ratios = [0.0f64; 3];
    for k in 0..3 {
        ratios[k] = if partials[k] != 0.0 {
            partials[k + 1] / partials[k]
        } else {
            f64::INFINITY
        };
    }
    if ratios.iter().all(|&r| r > DIVERGENCE_RATIO) {
        TailClass::Divergent { partials, ratios }
    } else {
        let last = partials[3];
        let prev = partials[2];
        let last_increment = if last != 0.0 {
            ((last - prev) / last).abs()
        } else {
            0.0
        };
        TailClass::Convergent {
            value: last,
            last_increment,
        }
    }
}

/// Estimates ∫_{lo}^{∞} f dr for an integrand that decays (proper weights):
/// accumulates octaves until their contribution is negligible. Returns
/// `f64::INFINITY` when contributions keep growing.
pub fn tail_integral<F: Fn(f64) -> f64>(f: F, lo: f64) -> f64 {
    let mut total = 0.0f64;
    let mut a = lo;
    let mut width = lo.abs().max(1.0);
    let mut prev = f64::INFINITY;
    for _ in 0..60 {
        let piece = integrate(&f, a, a + width, QUAD_ABS_TOL * 1e-3);
        total += piece;
        if piece.abs() < 1e-18 || piece.abs() < 1e-14 * total.abs().max(1e-300) {
            return total;
        }
        if piece.abs() > prev.abs() * 4.0 && total.abs() > 1e6 {
            return f64::INFINITY;
        }
        prev = piece;
        a += width;
        width *= 2.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_default(|x| 3.0 * x * x, 0.0, 2.0);
        assert!((v - 8.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn gaussian_tail() {
        // erf-complement scaled: int_0^ ooo e^{-x^2} = sqrt(pi)/2
        let v = integrate_default(|x| (-x * x).exp(), 0.0, 12.0);
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_default(|x| x.cos(), 0.0, 1.0);
        let b = integrate_default(|x| x.cos(), 1.0, 0.0);
        assert!((a + b).abs() < 1e-13);
    }

    #[test]
    fn gauss4_exact_on_cubics() {
        let v = gauss4(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0);
        // antiderivative x^4/4 - x^2 + x over [-1, 3]
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn probe_flags_power_growth() {
        // integrand r^3 grows: partials ~ R^4, ratio 16 per doubling
        let class = probe_improper(|r| r * r * r, 0.0, 5.0);
        assert!(class.is_divergent());
    }

    #[test]
    fn probe_accepts_decaying_integrand() {
        let class = probe_improper(|r| (1.0 + r * r).powi(-2), 0.0, 5.0);
        match class {
            TailClass::Convergent { value, .. } => {
                // int_0^ooo (1+r^2)^{-2} = pi/4
                assert!((value - std::f64::consts::PI / 4.0).abs() < 1e-4);
            }
            TailClass::Divergent { .. } => panic!("decaying integrand flagged divergent"),
        }
    }

    #[test]
    fn tail_integral_of_gaussian_mass() {
        // int_6^ooo r e^{-r^2} dr = e^{-36}/2
        let t = tail_integral(|r| r * (-r * r).exp(), 6.0);
        assert!((t - 0.5 * (-36.0f64).exp()).abs() < 1e-18);
        assert!(t < 1e-8);
    }
}
