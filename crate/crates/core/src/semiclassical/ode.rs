//! Dormand-Prince 5(4) with the 4th-order continuous extension, for
//! complex linear systems `y' = f(t, y)`.

use crate::error::{Error, Result};
use crate::C64;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 {
            rtol: tol,
            atol: tol,
            max_steps: 10_000_000,
        }
    }

    fn error_norm(&self, err: &[C64], y_old: &[C64], y_new: &[C64]) -> f64 {
        err.iter()
            .zip(y_old.iter().zip(y_new))
            .map(|(e, (a, b))| e.norm() / (self.atol + self.rtol * a.norm().max(b.norm())))
            .fold(0.0, f64::max)
    }

    /// Integrates from `(t0, y0)` and samples the solution at each entry of
    /// `t_out` (non-decreasing, all `>= t0`).
    pub fn integrate<F>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[C64],
        t_out: &[f64],
    ) -> Result<(Vec<Vec<C64>>, StepStats)>
    where
        F: FnMut(f64, &[C64], &mut [C64]),
    {
        let dim = y0.len();
        let zero = C64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(t_out.len());
        let mut stats = StepStats::default();
        let Some(&t_end) = t_out.last() else {
            return Ok((out, stats));
        };
        debug_assert!(t_out.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(t_out.first().map_or(true, |&t| t >= t0));

        let mut next_out = 0;
        while next_out < t_out.len() && t_out[next_out] <= t0 {
            out.push(y0.to_vec());
            next_out += 1;
        }
        if next_out == t_out.len() {
            return Ok((out, stats));
        }

        let mut y = y0.to_vec();
        let mut k1 = vec![zero; dim];
        let mut k2 = vec![zero; dim];
        let mut k3 = vec![zero; dim];
        let mut k4 = vec![zero; dim];
        let mut k5 = vec![zero; dim];
        let mut k6 = vec![zero; dim];
        let mut k7 = vec![zero; dim];
        let mut stage = vec![zero; dim];
        let mut y_new = vec![zero; dim];
        let mut err = vec![zero; dim];
        let mut dense = vec![[zero; 5]; dim];

        let mut t = t0;
        f(t, &y, &mut k1);
        let mut h = self.initial_step(&mut f, t, &y, &k1, t_end - t0);
        let mut reject_streak = false;

        while next_out < t_out.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::StepFailure { tau: t, step: h });
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepFailure { tau: t, step: h });
            }
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }

            for i in 0..dim {
                stage[i] = y[i] + h * (A21 * k1[i]);
            }
            f(t + C2 * h, &stage, &mut k2);
            for i in 0..dim {
                stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t + C3 * h, &stage, &mut k3);
            for i in 0..dim {
                stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t + C4 * h, &stage, &mut k4);
            for i in 0..dim {
                stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t + C5 * h, &stage, &mut k5);
            for i in 0..dim {
                stage[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            f(t + h, &stage, &mut k6);
            for i in 0..dim {
                y_new[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            let t_new = if last { t_end } else { t + h };
            f(t_new, &y_new, &mut k7);
            for i in 0..dim {
                err[i] = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
            }

            let err_norm = self.error_norm(&err, &y, &y_new);
            if !err_norm.is_finite() {
                stats.rejected += 1;
                h *= 0.2;
                reject_streak = true;
                continue;
            }
            if err_norm > 1.0 {
                stats.rejected += 1;
                let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
                h *= fac;
                reject_streak = true;
                continue;
            }
            stats.accepted += 1;

            for i in 0..dim {
                let diff = y_new[i] - y[i];
                let bspl = h * k1[i] - diff;
                dense[i] = [
                    y[i],
                    diff,
                    bspl,
                    diff - h * k7[i] - bspl,
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]),
                ];
            }
            while next_out < t_out.len() && t_out[next_out] <= t_new {
                let theta = (t_out[next_out] - t) / h;
                let theta1 = 1.0 - theta;
                out.push(
                    dense
                        .iter()
                        .map(|c| c[0] + theta * (c[1] + theta1 * (c[2] + theta * (c[3] + theta1 * c[4]))))
                        .collect(),
                );
                next_out += 1;
            }

            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;

            let mut fac = (0.9 * err_norm.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
            if reject_streak {
                fac = fac.min(1.0);
            }
            reject_streak = false;
            h *= fac;
        }
        Ok((out, stats))
    }

    fn initial_step<F>(&self, f: &mut F, t: f64, y: &[C64], f0: &[C64], span: f64) -> f64
    where
        F: FnMut(f64, &[C64], &mut [C64]),
    {
        let scale = |v: &C64, base: &C64| v.norm() / (self.atol + self.rtol * base.norm());
        let rms = |v: &[C64]| {
            (v.iter().zip(y).map(|(a, b)| scale(a, b).powi(2)).sum::<f64>() / v.len().max(1) as f64)
                .sqrt()
        };
        let d0 = rms(y);
        let d1 = rms(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: Vec<C64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
        let mut f1 = vec![C64::new(0.0, 0.0); y.len()];
        f(t + h0, &y1, &mut f1);
        let diff: Vec<C64> = f1.iter().zip(f0).map(|(a, b)| (a - b) / h0).collect();
        let d2 = rms(&diff);
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span.max(f64::MIN_POSITIVE))
    }
}
