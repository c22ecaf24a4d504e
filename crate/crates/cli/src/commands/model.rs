//! `ssdiv model`: closed-form cost rows, optionally cross-checked against
//! the Monte Carlo simulator.

use ssdiv_core::{report, simulate_subdivision_work, ModelParams};

use crate::{fmt_f64, write_output, CmdResult, Failure, ModelArgs};

pub const CSV_HEADER: &str = "n,g,r,B,P,A,lambda,q,c,W_E,W_SSD,Omega,T_Ex,T_SBR,T_MBR,S_SBR,S_MBR";

/// Maximum relative deviation tolerated between the closed form and the
/// simulator mean under `--check-mc`.
pub const MC_TOLERANCE: f64 = 0.01;

fn params_for(args: &ModelArgs, n: u64) -> Result<ModelParams, Failure> {
    ModelParams {
        n,
        g: args.g,
        r: args.r,
        b: args.b,
        p: args.p,
        a: args.a,
        lambda: args.lambda,
        q: args.q,
        c: args.c,
    }
    .validated()
    .map_err(|e| Failure::Usage(e.to_string()))
}

#[must_use]
pub fn csv_row(params: &ModelParams) -> String {
    let rep = report(params);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        params.n,
        params.g,
        params.r,
        params.b,
        fmt_f64(params.p),
        fmt_f64(params.a),
        fmt_f64(params.lambda),
        params.q,
        params.c,
        fmt_f64(rep.w_exhaustive),
        fmt_f64(rep.w_subdivision),
        fmt_f64(rep.omega),
        fmt_f64(rep.t_exhaustive),
        fmt_f64(rep.t_sbr),
        fmt_f64(rep.t_mbr),
        fmt_f64(rep.s_sbr),
        fmt_f64(rep.s_mbr),
    )
}

pub fn run(args: &ModelArgs) -> CmdResult {
    if args.n.is_empty() {
        return Err(Failure::Usage("--n needs at least one size".into()));
    }
    if args.check_mc == Some(0) {
        return Err(Failure::Usage("--check-mc needs at least one trial".into()));
    }
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut bundles = Vec::with_capacity(args.n.len());
    for &n in &args.n {
        let params = params_for(args, n)?;
        csv.push_str(&csv_row(&params));
        csv.push('\n');
        bundles.push(params);
    }
    if let Some(trials) = args.check_mc {
        for params in &bundles {
            let expected = report(params).w_subdivision;
            let sim = simulate_subdivision_work(params, trials, args.seed)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            let rel = (sim.mean - expected).abs() / expected;
            if rel > MC_TOLERANCE {
                return Err(Failure::Runtime(format!(
                    "simulated work for n={} strays {:.4}% from the closed form \
                     (simulated {}, expected {}, {} trials, seed {})",
                    params.n,
                    rel * 100.0,
                    sim.mean,
                    expected,
                    trials,
                    args.seed
                )));
            }
        }
    }
    write_output(&args.out, csv.as_bytes())
}
