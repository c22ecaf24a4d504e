//! Parameter sweeps over subdivision shapes `(g, r, B)`.
//!
//! Two search backends share one landscape format: [`grid_search_model`]
//! scores each shape with the closed-form cost model, and
//! [`grid_search_empirical`] times real renders. Both walk the requested
//! sets in sorted `(g, r, B)` order, skip infeasible combinations (the
//! landscape still records them), and return the first strict minimum, so
//! ties resolve to the lexicographically smallest shape and results never
//! depend on iteration scheduling.
//!
//! Feasibility is stricter than what the renderers accept: a sweep point
//! must tile exactly, `n = g * B * r^k` with integer `k >= 0`, so that every
//! scored shape drives leaves to side exactly `B` and model and render
//! agree on the subdivision depth.

use std::fmt;
use std::time::Instant;

use crate::ask::{ask_render, AskConfig, Scheme};
use crate::cost_model::{mbr_time, sbr_time, ssd_work};
use crate::error::{Error, Result};
use crate::fractal::Viewport;
use crate::params::ModelParams;
use crate::recursive::recursive_render;

/// Quantity a sweep minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Total model work of the subdivision scheme.
    MinWork,
    /// Model wall time of the one-task-per-region scheme.
    MinTimeSbr,
    /// Model wall time of the tiled scheme.
    MinTimeMbr,
    /// Measured render time; only [`grid_search_empirical`] supports it.
    MinWallTime,
}

impl Objective {
    #[must_use]
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::MinWork => "MIN_WORK",
            Objective::MinTimeSbr => "MIN_TIME_SBR",
            Objective::MinTimeMbr => "MIN_TIME_MBR",
            Objective::MinWallTime => "MIN_WALL_TIME",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which renderer an empirical sweep times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Level-by-level table-driven renderer.
    Ask,
    /// Fork-join renderer.
    Recursive,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Ask => "ASK",
            Engine::Recursive => "REC",
        })
    }
}

/// Model parameters a sweep holds fixed while `(g, r, B)` vary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub n: u64,
    pub p: f64,
    pub a: f64,
    pub lambda: f64,
    pub q: u64,
    pub c: u64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams {
            n: 65536,
            p: 0.5,
            a: 512.0,
            lambda: 10.0,
            q: 128,
            c: 64,
        }
    }
}

impl FixedParams {
    fn shaped(&self, g: u64, r: u64, b: u64) -> ModelParams {
        ModelParams {
            n: self.n,
            g,
            r,
            b,
            p: self.p,
            a: self.a,
            lambda: self.lambda,
            q: self.q,
            c: self.c,
        }
    }
}

/// A model-driven sweep: the Cartesian product of the three sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub g_set: Vec<u64>,
    pub r_set: Vec<u64>,
    pub b_set: Vec<u64>,
    pub objective: Objective,
    pub fixed: FixedParams,
}

/// A measurement-driven sweep over real renders.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSweep {
    pub n: u32,
    pub viewport: Viewport,
    pub d_max: u32,
    pub engine: Engine,
    pub scheme: Scheme,
    pub tile: u32,
    pub workers: usize,
    /// Timed repetitions per shape (after one untimed warm-up render).
    pub reps: u32,
    pub g_set: Vec<u32>,
    pub r_set: Vec<u32>,
    pub b_set: Vec<u32>,
}

/// One evaluated point of a sweep. Infeasible shapes keep `value: None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapePoint {
    pub g: u64,
    pub r: u64,
    pub b: u64,
    pub feasible: bool,
    pub value: Option<f64>,
}

fn sorted_dedup<T: Ord + Copy>(set: &[T]) -> Vec<T> {
    let mut out = set.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

/// True when `n = g * B * r^k` for some integer `k >= 0`.
fn tiles_exactly(n: u64, g: u64, r: u64, b: u64) -> bool {
    let Some(gb) = g.checked_mul(b) else {
        return false;
    };
    if gb == 0 || !n.is_multiple_of(gb) {
        return false;
    }
    let quotient = n / gb;
    // All validated parameters are powers of two, so `quotient` is a power
    // of r exactly when its bit position is a multiple of r's.
    quotient.is_power_of_two()
        && r.is_power_of_two()
        && r >= 2
        && quotient.trailing_zeros().is_multiple_of(r.trailing_zeros())
}

/// Minimizes a model objective over the sweep's shapes.
///
/// Returns the winning parameters, the objective value there, and the full
/// landscape in sorted `(g, r, B)` order.
pub fn grid_search_model(spec: &SweepSpec) -> Result<(ModelParams, f64, Vec<LandscapePoint>)> {
    let score: fn(&ModelParams) -> f64 = match spec.objective {
        Objective::MinWork => |p| ssd_work(p).total,
        Objective::MinTimeSbr => sbr_time,
        Objective::MinTimeMbr => mbr_time,
        Objective::MinWallTime => {
            return Err(Error::UnsupportedObjective {
                objective: "MIN_WALL_TIME",
                engine: "model",
            })
        }
    };
    let mut landscape = Vec::new();
    let mut best: Option<(ModelParams, f64)> = None;
    for &g in &sorted_dedup(&spec.g_set) {
        for &r in &sorted_dedup(&spec.r_set) {
            for &b in &sorted_dedup(&spec.b_set) {
                let params = spec.fixed.shaped(g, r, b);
                let feasible = params.validate().is_ok() && tiles_exactly(spec.fixed.n, g, r, b);
                if !feasible {
                    landscape.push(LandscapePoint {
                        g,
                        r,
                        b,
                        feasible: false,
                        value: None,
                    });
                    continue;
                }
                let value = score(&params);
                landscape.push(LandscapePoint {
                    g,
                    r,
                    b,
                    feasible: true,
                    value: Some(value),
                });
                if best.is_none_or(|(_, incumbent)| value < incumbent) {
                    best = Some((params, value));
                }
            }
        }
    }
    let (params, value) = best.ok_or(Error::NoFeasiblePoint)?;
    Ok((params, value, landscape))
}

/// Times `f` for `reps` runs and returns `(mean_ms, stderr_ms)`.
///
/// Pure measurement: callers wanting a warm-up run `f` once beforehand.
/// The standard error is the sample standard deviation over `sqrt(reps)`,
/// zero for a single rep.
pub fn time_runs(mut f: impl FnMut(), reps: u32) -> Result<(f64, f64)> {
    if reps == 0 {
        return Err(Error::TooSmall {
            name: "reps",
            min: 1,
            value: 0,
        });
    }
    let mut samples = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let start = Instant::now();
        f();
        samples.push(start.elapsed().as_secs_f64() * 1e3);
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let stderr = if samples.len() > 1 {
        let var =
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        (var / samples.len() as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

/// Minimizes measured render time over the sweep's shapes.
///
/// Each feasible shape is rendered once untimed, then `reps` timed runs are
/// averaged. Returns the winning configuration, its mean milliseconds, and
/// the landscape.
pub fn grid_search_empirical(
    spec: &EmpiricalSweep,
) -> Result<(AskConfig, f64, Vec<LandscapePoint>)> {
    let mut landscape = Vec::new();
    let mut best: Option<(AskConfig, f64)> = None;
    for &g in &sorted_dedup(&spec.g_set) {
        for &r in &sorted_dedup(&spec.r_set) {
            for &b in &sorted_dedup(&spec.b_set) {
                let config = AskConfig {
                    g,
                    r,
                    b,
                    scheme: spec.scheme,
                    tile: spec.tile,
                    workers: spec.workers,
                };
                let feasible = config.validate(spec.n).is_ok()
                    && tiles_exactly(spec.n as u64, g as u64, r as u64, b as u64);
                if !feasible {
                    landscape.push(LandscapePoint {
                        g: g as u64,
                        r: r as u64,
                        b: b as u64,
                        feasible: false,
                        value: None,
                    });
                    continue;
                }
                let render = || -> Result<()> {
                    match spec.engine {
                        Engine::Ask => {
                            ask_render(spec.n, &spec.viewport, spec.d_max, &config)?;
                        }
                        Engine::Recursive => {
                            recursive_render(spec.n, &spec.viewport, spec.d_max, &config)?;
                        }
                    }
                    Ok(())
                };
                render()?; // warm-up, and surfaces any render error
                let (mean_ms, _) = time_runs(
                    || render().expect("validated configuration renders"),
                    spec.reps,
                )?;
                landscape.push(LandscapePoint {
                    g: g as u64,
                    r: r as u64,
                    b: b as u64,
                    feasible: true,
                    value: Some(mean_ms),
                });
                if best.is_none_or(|(_, incumbent)| mean_ms < incumbent) {
                    best = Some((config, mean_ms));
                }
            }
        }
    }
    let (config, value) = best.ok_or(Error::NoFeasiblePoint)?;
    Ok((config, value, landscape))
}
