//! Special functions: log-factorials, generalized Laguerre polynomials and
//! integer-order Bessel functions of the first kind.

use std::sync::OnceLock;

const FACTORIAL_TABLE_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; FACTORIAL_TABLE_LEN];
        let mut fact = 1.0f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= n as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`. Table of exact factorials below 171, Stirling series above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < FACTORIAL_TABLE_LEN {
        return ln_factorial_table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `ln((n + k)! / n!)`.
pub fn ln_rising_ratio(n: usize, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        ln_factorial(n + k) - ln_factorial(n)
    }
}

/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by forward three-term
/// recurrence in `n`.
pub fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let alpha = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Bessel function of the first kind `J_order(x)` for integer order.
///
/// Negative orders use `J_{-n} = (-1)^n J_n`, negative arguments use
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(order: i64, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let mut value = bessel_j_orders(n, x.abs())[n];
    let odd = n % 2 == 1;
    if order < 0 && odd {
        value = -value;
    }
    if x < 0.0 && odd {
        value = -value;
    }
    value
}

/// `J_0(x) ..= J_max_order(x)` for `x >= 0` in one sweep of Miller's
/// backward recurrence, normalized with `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_orders(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order + 1];
    bessel_j_orders_into(x, &mut out);
    out
}

/// Same as [`bessel_j_orders`] but writes into `out` (length = orders + 1).
pub fn bessel_j_orders_into(x: f64, out: &mut [f64]) {
    debug_assert!(x >= 0.0);
    let max_order = out.len().saturating_sub(1);
    if x == 0.0 {
        out.fill(0.0);
        if let Some(first) = out.first_mut() {
            *first = 1.0;
        }
        return;
    }
    if x < 1e-5 {
        // Three terms of the power series are exact to rounding here.
        let half = 0.5 * x;
        let q = -half * half;
        let mut lead = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                lead *= half / n as f64;
            }
            let nf = n as f64;
            *slot = lead * (1.0 + q / (nf + 1.0) + q * q / (2.0 * (nf + 1.0) * (nf + 2.0)));
        }
        return;
    }

    let top = (max_order as f64).max(x);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    const BIG: f64 = 1e150;
    let two_over_x = 2.0 / x;
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    out.fill(0.0);
    for j in (1..=start).rev() {
        // cur = J_j (unnormalized), compute J_{j-1}
        let below = j as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        let idx = j - 1;
        if idx <= max_order {
            out[idx] = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            above /= BIG;
            norm /= BIG;
            for v in out.iter_mut() {
                *v /= BIG;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
}
