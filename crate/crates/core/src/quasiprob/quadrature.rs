use std::f64::consts::{FRAC_PI_4, PI};

use super::filter::lambda_nm;
use crate::fock_core::special::bessel_j_orders_into;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the three-term recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                dp = legendre_with_derivative(order, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[order - 1 - i] = -x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=order {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (1.0, 0.0);
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Radial quadrature for the P-function elements. With `z = cos θ` the
/// filter kernel `acos z - z sqrt(1-z²)` becomes `θ - sin θ cos θ`, which
/// removes the `(1-z)^{3/2}` endpoint singularity, so Gauss-Legendre in `θ`
/// converges spectrally.
#[derive(Debug, Clone)]
pub(crate) struct RadialRule {
    pub w: f64,
    /// `z_j = cos θ_j`.
    pub z: Vec<f64>,
    /// Every factor of the integrand except `Λ_nm(2wz)` and `J_d(4w|α|z)`,
    /// including the `16 w²/π²` prefactor.
    pub weight: Vec<f64>,
}

impl RadialRule {
    pub fn new(w: f64, order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        let scale = 16.0 * w * w / (PI * PI);
        let mut z = Vec::with_capacity(order);
        let mut weight = Vec::with_capacity(order);
        for (x, gw) in nodes.iter().zip(&weights) {
            let theta = FRAC_PI_4 * (x + 1.0);
            let (s, c) = theta.sin_cos();
            z.push(c);
            weight.push(scale * FRAC_PI_4 * gw * s * c * (theta - s * c));
        }
        RadialRule { w, z, weight }
    }

    pub fn order(&self) -> usize {
        self.z.len()
    }

    /// `∫₀¹ (16w²/π²) Λ(2wz) z J_d(4w|α|z)[acos z - z sqrt(1-z²)] dz` for an
    /// arbitrary radial function `lambda`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, d: usize, alpha_abs: f64, lambda: F) -> f64 {
        let mut bessel = vec![0.0; d + 1];
        let mut total = 0.0;
        for (z, wt) in self.z.iter().zip(&self.weight) {
            bessel_j_orders_into(4.0 * self.w * alpha_abs * z, &mut bessel);
            total += wt * lambda(2.0 * self.w * z) * bessel[d];
        }
        total
    }

    /// Radial integrals of all pairs `n <= m <= n_max` at once, given
    /// `lambda_table` from [`RadialRule::lambda_table`].
    pub fn integrate_pairs(
        &self,
        n_max: usize,
        alpha_abs: f64,
        lambda_table: &[f64],
        out: &mut [f64],
    ) {
        let pairs = out.len();
        out.fill(0.0);
        let mut bessel = vec![0.0; n_max + 1];
        for (j, (z, wt)) in self.z.iter().zip(&self.weight).enumerate() {
            bessel_j_orders_into(4.0 * self.w * alpha_abs * z, &mut bessel);
            let lam = &lambda_table[j * pairs..(j + 1) * pairs];
            let mut p = 0;
            for n in 0..=n_max {
                for m in n..=n_max {
                    out[p] += wt * lam[p] * bessel[m - n];
                    p += 1;
                }
            }
        }
    }

    /// `Λ_mn(2w z_j)` for every node and every pair `n <= m <= n_max`.
    /// With the larger index first, `Λ_mn J_{m-n}` equals `Λ_nm J_{n-m}`, so
    /// one non-negative Bessel order serves both orderings.
    pub fn lambda_table(&self, n_max: usize) -> Vec<f64> {
        let pairs = pair_count(n_max);
        let mut table = Vec::with_capacity(self.order() * pairs);
        for z in &self.z {
            for n in 0..=n_max {
                for m in n..=n_max {
                    table.push(lambda_nm(m, n, 2.0 * self.w * z));
                }
            }
        }
        table
    }
}

pub(crate) fn pair_count(n_max: usize) -> usize {
    (n_max + 1) * (n_max + 2) / 2
}

/// Position of `(n, m)`, `n <= m`, in the row-major upper triangle.
pub(crate) fn pair_index(n_max: usize, n: usize, m: usize) -> usize {
    debug_assert!(n <= m && m <= n_max);
    n * (2 * n_max + 3 - n) / 2 + (m - n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        for order in [1, 2, 5, 64, 200, 400] {
            let (x, w) = gauss_legendre(order);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let degree = (2 * order - 1).min(30);
            for d in 0..=degree {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "order {order}, degree {d}");
            }
        }
    }

    #[test]
    fn pair_indexing_is_dense() {
        let n_max = 7;
        let mut p = 0;
        for n in 0..=n_max {
            for m in n..=n_max {
                assert_eq!(pair_index(n_max, n, m), p);
                p += 1;
            }
        }
        assert_eq!(p, pair_count(n_max));
    }

    #[test]
    fn vacuum_element_at_origin() {
        for w in [0.5, 1.0, 1.7, 3.0] {
            let rule = RadialRule::new(w, 200);
            let value = rule.integrate(0, 0.0, |b| lambda_nm(0, 0, b));
            assert_relative_eq!(value, w * w / PI, max_relative = 1e-13);
        }
    }
}
