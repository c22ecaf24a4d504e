//! Closed-form work and wall-time model for probabilistic subdivision.
//!
//! The model compares two ways of resolving an `n x n` domain where every
//! element costs `A` work units:
//!
//! * **Exhaustive**: evaluate all elements, `W_E = n^2 * A`.
//! * **Subdivision**: start from `g x g` regions and refine. At level `i`
//!   a region pays a boundary test `Q_i`, then either subdivides into
//!   `r x r` children (probability `P`, overhead `S = lambda * A`) or is
//!   resolved wholesale at one unit per element (`T_i`). Regions that reach
//!   the deepest level pay full per-element work.
//!
//! With `G = g^2`, `R = r^2`, and `tau` levels (see [`depth_tau`]), the
//! expected level population is `G * R^i * P^i`, giving
//!
//! ```text
//! W = sum_{i=0}^{tau-2} (Q_i + P*S + (1-P)*T_i) * G * R^i * P^i
//!   + n^2 * A * P^(tau-1)
//! ```
//!
//! For the perimeter-tested workload modeled here, `Q_i = 4*n*A / (g*r^i)`
//! (four region sides of dwell evaluations) and `T_i = n^2 / (G*R^i)` (one
//! write per element of the region).
//!
//! Wall-time estimates divide the same terms across a machine that runs `q`
//! regions concurrently, each processing `c` elements concurrently. Ceilings
//! model batch rounding: a machine pass happens even for a partially filled
//! batch. Two schedules are modeled: one task per region (`sbr`), and
//! region work further split into tiles so no batch slot idles (`mbr`).
//!
//! Work and time values are `f64`. For power-of-two parameters every term is
//! a dyadic rational well below 2^53, so the sums here are exact; tests rely
//! on that.

use crate::error::{Error, Result};
use crate::params::{ModelParams, ProbProfile};

/// Work and time predictions for one parameter bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub params: ModelParams,
    /// Number of levels in the subdivision process.
    pub tau: u32,
    /// Expected work per subdividing level (`tau - 1` entries).
    pub per_level_work: Vec<f64>,
    /// Expected work of the deepest level.
    pub last_level_work: f64,
    pub w_exhaustive: f64,
    pub w_subdivision: f64,
    /// Work-reduction factor `W_E / W`.
    pub omega: f64,
    pub t_exhaustive: f64,
    pub t_sbr: f64,
    pub t_mbr: f64,
    /// Speedup `T_Ex / T_SBR`.
    pub s_sbr: f64,
    /// Speedup `T_Ex / T_MBR`.
    pub s_mbr: f64,
}

/// Expected subdivision work split into per-level terms.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkBreakdown {
    /// Term for each level `0 ..= tau - 2`.
    pub per_level: Vec<f64>,
    /// Term for level `tau - 1`.
    pub last_level: f64,
    /// Sum of all terms.
    pub total: f64,
}

/// Number of levels of the subdivision process, at least 1.
///
/// The refinement chain `g -> g*r -> ...` reaches regions of side `B` after
/// `log_r(n / (g*B))` steps; together with the initial grid that makes
/// `log + 1` levels of existence, and this function returns the integer part
/// of the logarithm clamped to a minimum of 1. `g * B <= n` is enforced by
/// [`ModelParams::validate`], so the quotient is a positive integer.
#[must_use]
pub fn depth_tau(params: &ModelParams) -> u32 {
    let quotient = params.n / (params.g * params.b);
    let mut tau = 0u32;
    let mut reach = params.r as u128;
    while reach <= quotient as u128 {
        tau += 1;
        reach *= params.r as u128;
    }
    tau.max(1)
}

/// Exhaustive work `n^2 * A`.
pub fn exhaustive_work(n: u64, a: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooSmall {
            name: "n",
            min: 1,
            value: 0,
        });
    }
    if !a.is_finite() || a < 1.0 {
        return Err(Error::FloatTooSmall {
            name: "A",
            min: 1.0,
            value: a,
        });
    }
    Ok((n as u128 * n as u128) as f64 * a)
}

/// Shared level summation behind [`ssd_work`] and [`general_subdivision_work`].
///
/// `probs[i]` is the level-`i` subdivision probability; `q_at` and `t_at`
/// give the boundary-test and wholesale-resolution costs per level. Keeping
/// one code path guarantees the two public forms agree bit-for-bit whenever
/// their per-level costs coincide.
fn subdivision_terms(
    params: &ModelParams,
    probs: &[f64],
    s: f64,
    q_at: impl Fn(u32) -> f64,
    t_at: impl Fn(u32) -> f64,
) -> WorkBreakdown {
    let g2 = (params.g * params.g) as f64;
    let r2 = (params.r * params.r) as f64;
    let n2 = (params.n as u128 * params.n as u128) as f64;

    let mut per_level = Vec::with_capacity(probs.len());
    let mut population = g2; // G * R^i
    let mut survive = 1.0; // product of probs below level i
    for (i, &p) in probs.iter().enumerate() {
        let u = q_at(i as u32) + p * s + (1.0 - p) * t_at(i as u32);
        per_level.push(u * population * survive);
        population *= r2;
        survive *= p;
    }
    let last_level = n2 * params.a * survive;
    let total = per_level.iter().sum::<f64>() + last_level;
    WorkBreakdown {
        per_level,
        last_level,
        total,
    }
}

/// Expected subdivision work with caller-supplied constant per-region costs.
///
/// `probs` must hold one entry per subdividing level, `tau - 1` in total.
/// Costs `q`, `s`, `t` apply identically at every level; level dependence is
/// the business of [`ssd_work`].
pub fn general_subdivision_work(
    params: &ModelParams,
    probs: &ProbProfile,
    q: f64,
    s: f64,
    t: f64,
) -> Result<f64> {
    let tau = depth_tau(params);
    let want = tau as usize - 1;
    if probs.len() != want {
        return Err(Error::ProfileLength {
            got: probs.len(),
            tau,
            want,
        });
    }
    Ok(subdivision_terms(params, probs.as_slice(), s, |_| q, |_| t).total)
}

/// Expected subdivision work for the perimeter-tested dwell workload.
///
/// Instantiates the general form with `Q_i = 4*n*A / (g*r^i)`,
/// `T_i = n^2 / (G*R^i)`, `S = lambda * A`, and the constant probability
/// `params.p` at every level.
#[must_use]
pub fn ssd_work(params: &ModelParams) -> WorkBreakdown {
    let tau = depth_tau(params);
    let probs = vec![params.p; tau as usize - 1];
    let s = params.lambda * params.a;
    let n2 = (params.n as u128 * params.n as u128) as f64;
    let perimeter0 = 4.0 * params.n as f64 * params.a / params.g as f64;
    let region0 = n2 / (params.g * params.g) as f64;
    let r = params.r as f64;
    let r2 = r * r;
    subdivision_terms(
        params,
        &probs,
        s,
        |i| perimeter0 / r.powi(i as i32),
        |i| region0 / r2.powi(i as i32),
    )
}

/// Work-reduction factor `Omega = W_E / W`, at most `A`.
#[must_use]
pub fn work_reduction_factor(params: &ModelParams) -> f64 {
    let n2 = (params.n as u128 * params.n as u128) as f64;
    n2 * params.a / ssd_work(params).total
}

fn ceil_div(num: u128, den: u128) -> f64 {
    (num.div_ceil(den)) as f64
}

/// Exhaustive wall time `ceil(n^2 / (q*c)) * A`.
#[must_use]
pub fn exhaustive_time(params: &ModelParams) -> f64 {
    let n2 = params.n as u128 * params.n as u128;
    ceil_div(n2, params.q as u128 * params.c as u128) * params.a
}

/// Wall time for one-task-per-region scheduling.
///
/// Per level, `ceil(G*R^i / q)` machine passes each pay the full region cost:
/// the perimeter test in `ceil(4*n / (g*r^i*c))` element batches, plus the
/// subdivision or wholesale-resolution outcome. Every ceiling argument is
/// positive, so each batch factor is at least 1.
#[must_use]
pub fn sbr_time(params: &ModelParams) -> f64 {
    let tau = depth_tau(params);
    let n = params.n as u128;
    let (q, c) = (params.q as u128, params.c as u128);
    let a = params.a;
    let s = params.lambda * params.a;
    let r = params.r as u128;
    let r2 = r * r;

    let mut t = 0.0;
    let mut side_div = params.g as u128; // g * r^i
    let mut population = side_div * side_div; // G * R^i
    let mut survive = 1.0; // P^i
    for _ in 0..tau - 1 {
        let perimeter = ceil_div(4 * n, side_div * c) * a;
        let wholesale = (1.0 - params.p) * ceil_div(n * n, population * c);
        let batches = ceil_div(population, q);
        t += (perimeter + params.p * s + wholesale) * batches * survive;
        side_div *= r;
        population *= r2;
        survive *= params.p;
    }
    t + a * ceil_div(n * n, population * c) * ceil_div(population, q) * survive
}

/// Wall time for tile-split scheduling.
///
/// Perimeter tests still run per region, but subdivision overhead and all
/// per-element work are packed across the machine width, so the wholesale
/// and deepest-level terms round `n^2`-sized totals rather than per-region
/// ones. The wholesale term's probability factor sits inside the ceiling and
/// vanishes at `P = 1`.
#[must_use]
pub fn mbr_time(params: &ModelParams) -> f64 {
    let tau = depth_tau(params);
    let n = params.n as u128;
    let (q, c) = (params.q as u128, params.c as u128);
    let a = params.a;
    let s = params.lambda * params.a;
    let r = params.r as u128;
    let r2 = r * r;
    let n2f = (n * n) as f64;
    let qcf = (q * c) as f64;

    let mut t = 0.0;
    let mut side_div = params.g as u128;
    let mut population = side_div * side_div;
    let mut survive = 1.0;
    for _ in 0..tau - 1 {
        let batches = ceil_div(population, q);
        t += ceil_div(4 * n, side_div * c) * batches * a * survive;
        t += batches * s * survive * params.p;
        t += (n2f * survive * (1.0 - params.p) / qcf).ceil();
        side_div *= r;
        population *= r2;
        survive *= params.p;
    }
    t + a * ceil_div(n * n, q * c) * survive
}

/// Speedups `(T_Ex / T_SBR, T_Ex / T_MBR)`, each at most `A`.
#[must_use]
pub fn speedups(params: &ModelParams) -> (f64, f64) {
    let t_ex = exhaustive_time(params);
    (t_ex / sbr_time(params), t_ex / mbr_time(params))
}

/// Evaluates the whole model for one parameter bundle.
#[must_use]
pub fn report(params: &ModelParams) -> CostReport {
    let tau = depth_tau(params);
    let work = ssd_work(params);
    let n2 = (params.n as u128 * params.n as u128) as f64;
    let w_exhaustive = n2 * params.a;
    let t_exhaustive = exhaustive_time(params);
    let t_sbr = sbr_time(params);
    let t_mbr = mbr_time(params);
    CostReport {
        params: *params,
        tau,
        w_exhaustive,
        omega: w_exhaustive / work.total,
        w_subdivision: work.total,
        per_level_work: work.per_level,
        last_level_work: work.last_level,
        t_exhaustive,
        s_sbr: t_exhaustive / t_sbr,
        s_mbr: t_exhaustive / t_mbr,
        t_sbr,
        t_mbr,
    }
}
