//! `ssdiv optimize`: sweep (g, r, B) against the closed-form model or
//! against measured wall time, emitting the full landscape as CSV.

use ssdiv_core::{
    grid_search_empirical, grid_search_model, EmpiricalSweep, Engine, FixedParams, LandscapePoint,
    ModelParams, Objective, SweepSpec,
};

use crate::{
    fmt_f64, resolve_workers, write_output, CmdResult, EngineArg, Failure, ObjectiveArg,
    OptimizeArgs,
};

pub const LANDSCAPE_HEADER: &str = "g,r,B,feasible,value";

/// Default candidate set for each shape axis: powers of two from 2 to 1024.
#[must_use]
pub fn default_candidates() -> Vec<u64> {
    (1..=10).map(|k| 1u64 << k).collect()
}

#[must_use]
pub fn landscape_csv(points: &[LandscapePoint]) -> String {
    let mut csv = String::from(LANDSCAPE_HEADER);
    csv.push('\n');
    for p in points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.g,
            p.r,
            p.b,
            p.feasible,
            p.value.map(fmt_f64).unwrap_or_default()
        ));
    }
    csv
}

fn core_objective(arg: ObjectiveArg) -> Objective {
    match arg {
        ObjectiveArg::MinWork => Objective::MinWork,
        ObjectiveArg::MinTimeSbr => Objective::MinTimeSbr,
        ObjectiveArg::MinTimeMbr => Objective::MinTimeMbr,
        ObjectiveArg::MinWallTime => Objective::MinWallTime,
    }
}

fn candidate_sets(args: &OptimizeArgs) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let pick = |set: &Option<Vec<u64>>| set.clone().unwrap_or_else(default_candidates);
    (pick(&args.g), pick(&args.r), pick(&args.b))
}

fn narrow_set(name: &'static str, set: Vec<u64>) -> Result<Vec<u32>, Failure> {
    set.into_iter()
        .map(|v| {
            u32::try_from(v)
                .map_err(|_| Failure::Usage(format!("{name} candidate {v} is out of range")))
        })
        .collect()
}

/// Where the best-shape summary line goes: standard output when the CSV
/// went to a file, standard error otherwise (the CSV owns standard output).
fn announce_best(args: &OptimizeArgs, line: &str) {
    if args.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn run_model(args: &OptimizeArgs) -> CmdResult {
    let objective = core_objective(args.objective);
    if objective == Objective::MinWallTime {
        return Err(Failure::Usage(
            "MIN_WALL_TIME is measured, not modeled; use --engine ASK or REC".into(),
        ));
    }
    let fixed = FixedParams {
        n: args.n,
        p: args.p,
        a: args.a,
        lambda: args.lambda,
        q: args.q,
        c: args.c,
    };
    // Surface bad scalars as usage errors up front; the sweep itself would
    // only report that nothing was feasible.
    ModelParams {
        n: args.n,
        g: 1,
        r: 2,
        b: 1,
        p: args.p,
        a: args.a,
        lambda: args.lambda,
        q: args.q,
        c: args.c,
    }
    .validate()
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let (g_set, r_set, b_set) = candidate_sets(args);
    let spec = SweepSpec {
        g_set,
        r_set,
        b_set,
        objective,
        fixed,
    };
    let (best, value, landscape) =
        grid_search_model(&spec).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_output(&args.out, landscape_csv(&landscape).as_bytes())?;
    announce_best(
        args,
        &format!(
            "best g={} r={} B={} {}={}",
            best.g,
            best.r,
            best.b,
            objective,
            fmt_f64(value)
        ),
    );
    Ok(())
}

fn run_empirical(args: &OptimizeArgs, engine: Engine) -> CmdResult {
    if args.objective != ObjectiveArg::MinWallTime {
        return Err(Failure::Usage(format!(
            "{} is a model objective; measured sweeps take --objective MIN_WALL_TIME",
            core_objective(args.objective)
        )));
    }
    let n = u32::try_from(args.n)
        .map_err(|_| Failure::Usage(format!("n={} is out of range for rendering", args.n)))?;
    let (g_set, r_set, b_set) = candidate_sets(args);
    let spec = EmpiricalSweep {
        n,
        viewport: args.viewport,
        d_max: args.dwell,
        engine,
        scheme: args.scheme.into(),
        tile: args.tile,
        workers: resolve_workers(args.workers)?,
        reps: args.reps,
        g_set: narrow_set("g", g_set)?,
        r_set: narrow_set("r", r_set)?,
        b_set: narrow_set("B", b_set)?,
    };
    if spec.reps == 0 {
        return Err(Failure::Usage(
            "--reps needs at least one repetition".into(),
        ));
    }
    let (best, value, landscape) =
        grid_search_empirical(&spec).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_output(&args.out, landscape_csv(&landscape).as_bytes())?;
    announce_best(
        args,
        &format!(
            "best g={} r={} B={} MIN_WALL_TIME={}ms",
            best.g,
            best.r,
            best.b,
            fmt_f64(value)
        ),
    );
    Ok(())
}

pub fn run(args: &OptimizeArgs) -> CmdResult {
    match args.engine {
        EngineArg::Model => run_model(args),
        EngineArg::Ask => run_empirical(args, Engine::Ask),
        EngineArg::Rec => run_empirical(args, Engine::Recursive),
    }
}
