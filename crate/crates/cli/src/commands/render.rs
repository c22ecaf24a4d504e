//! `ssdiv render`: produce a PGM image with any engine, plus per-level
//! stats for the level-by-level one.

use ssdiv_core::{ask_render, exhaustive_render, recursive_render, AskConfig, LevelStats};

use crate::{pgm, resolve_workers, ApproachArg, CmdResult, Failure, RenderArgs};

pub const STATS_HEADER: &str =
    "level,regions_in,filled,subdivided,leaf_processed,q_pixels,t_pixels,a_pixels";

#[must_use]
pub fn stats_csv(stats: &[LevelStats]) -> String {
    let mut csv = String::from(STATS_HEADER);
    csv.push('\n');
    for s in stats {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.level,
            s.regions_in,
            s.filled,
            s.subdivided,
            s.leaf_processed,
            s.q_pixels,
            s.t_pixels,
            s.a_pixels
        ));
    }
    csv
}

pub fn run(args: &RenderArgs) -> CmdResult {
    if args.stats.is_some() && args.approach != ApproachArg::Ask {
        return Err(Failure::Usage(
            "--stats is only produced by --approach ASK".into(),
        ));
    }
    let workers = resolve_workers(args.workers)?;
    let usage = |e: ssdiv_core::Error| Failure::Usage(e.to_string());
    let (grid, stats) = match args.approach {
        ApproachArg::Ex => (
            exhaustive_render(args.n, &args.viewport, args.dwell, workers).map_err(usage)?,
            Vec::new(),
        ),
        ApproachArg::Ask | ApproachArg::Rec => {
            let config = AskConfig {
                g: args.g,
                r: args.r,
                b: args.b,
                scheme: args.scheme.into(),
                tile: args.tile,
                workers,
            };
            if args.approach == ApproachArg::Ask {
                ask_render(args.n, &args.viewport, args.dwell, &config).map_err(usage)?
            } else {
                let (grid, _tree) =
                    recursive_render(args.n, &args.viewport, args.dwell, &config).map_err(usage)?;
                (grid, Vec::new())
            }
        }
    };
    std::fs::write(&args.out, pgm::encode(&grid))
        .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", args.out.display())))?;
    if let Some(path) = &args.stats {
        std::fs::write(path, stats_csv(&stats))
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
