//! Adaptive Dormand-Prince 5(4) integration for fixed-size states.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on `|h|`; also the spacing cap of the recorded samples.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.05,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(domain("integrator tolerances and max_step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(domain("max_steps must be positive"));
        }
        Ok(())
    }
}

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

// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = field(tau, y)` from `tau_span.0` to `tau_span.1`
/// (either direction) and returns every accepted step, starting with the
/// initial point and ending exactly at `tau_span.1`.
///
/// A field evaluation error inside a trial step shrinks the step; the run
/// fails with [`Error::StepFailure`] once the step underflows.
pub fn rk_integrate<const N: usize, F>(
    field: F,
    y0: [f64; N],
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, [f64; N])>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    match rk_integrate_partial(field, y0, tau_span, cfg)? {
        (out, None) => Ok(out),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`rk_integrate`], but a step failure is returned next to the samples
/// accepted before it. The outer error only reports invalid settings.
#[allow(clippy::type_complexity)]
pub fn rk_integrate_partial<const N: usize, F>(
    field: F,
    y0: [f64; N],
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<(Vec<(f64, [f64; N])>, Option<Error>)>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    rk_integrate_until(field, |_, _| None, y0, tau_span, cfg)
}

/// Like [`rk_integrate_partial`]; after every accepted step `stop` may end
/// the run, and its error is returned as the reason.
#[allow(clippy::type_complexity)]
pub fn rk_integrate_until<const N: usize, F, S>(
    mut field: F,
    mut stop: S,
    y0: [f64; N],
    tau_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<(Vec<(f64, [f64; N])>, Option<Error>)>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    S: FnMut(f64, &[f64; N]) -> Option<Error>,
{
    cfg.validate()?;
    let (t0, t1) = tau_span;
    let mut out = vec![(t0, y0)];
    if t1 == t0 {
        return Ok((out, None));
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();

    let mut t = t0;
    let mut y = y0;
    let mut k1 = match field(t, &y) {
        Ok(k) => k,
        Err(e) => {
            let err = Error::StepFailure {
                tau: t,
                reason: e.to_string(),
            };
            return Ok((out, Some(err)));
        }
    };

    // Initial step from the derivative scale.
    let norm_y = rms_scaled(&y, &y, &y, cfg);
    let norm_f = rms_scaled(&k1, &y, &y, cfg);
    let mut h = if norm_y < 1e-5 || norm_f < 1e-5 {
        1e-6
    } else {
        0.01 * norm_y / norm_f
    };
    h = h.min(cfg.max_step).min(span);

    let mut steps = 0usize;
    let mut last_error = String::new();
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        if steps >= cfg.max_steps {
            let err = Error::StepFailure {
                tau: t,
                reason: format!("exceeded {} steps", cfg.max_steps),
            };
            return Ok((out, Some(err)));
        }
        let min_step = 1e-14 * t.abs().max(1.0);
        if h < min_step {
            let err = Error::StepFailure {
                tau: t,
                reason: if last_error.is_empty() {
                    "step size underflow".to_string()
                } else {
                    format!("step size underflow ({last_error})")
                },
            };
            return Ok((out, Some(err)));
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h } * dir;

        match dopri_step(&mut field, t, &y, &k1, hs) {
            Ok((y_new, k7, err_vec)) => {
                let err = rms_scaled(&err_vec, &y, &y_new, cfg);
                if err <= 1.0 {
                    t = if last { t1 } else { t + hs };
                    y = y_new;
                    k1 = k7;
                    steps += 1;
                    out.push((t, y));
                    last_error.clear();
                    if let Some(e) = stop(t, &y) {
                        return Ok((out, Some(e)));
                    }
                    let factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                    };
                    h = (hs.abs() * factor).min(cfg.max_step);
                    if last {
                        break;
                    }
                } else {
                    let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                    h = hs.abs() * factor;
                }
            }
            Err(e) => {
                last_error = e.to_string();
                h = hs.abs() * 0.25;
            }
        }
    }
    Ok((out, None))
}

type StepOutput<const N: usize> = ([f64; N], [f64; N], [f64; N]);

fn dopri_step<const N: usize, F>(
    field: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<StepOutput<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k2 = field(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = field(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = field(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = field(
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = field(
        t + h,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = field(t + h, &y_new)?;
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    if y_new.iter().chain(&k7).any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite state".into()));
    }
    Ok((y_new, k7, err))
}

fn rms_scaled<const N: usize>(e: &[f64; N], y0: &[f64; N], y1: &[f64; N], cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        acc += (e[i] / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}
