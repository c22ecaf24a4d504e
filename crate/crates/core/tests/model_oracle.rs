//! Independent oracles for the closed-form model.
//!
//! Everything here recomputes model quantities through a different code
//! path than the library: Monte Carlo estimates of expected work, and an
//! integer-arithmetic evaluation of the time formulas. For power-of-two
//! probabilities every intermediate below 2^53 is an exact dyadic rational,
//! so the integer oracle and the library's floating-point evaluation must
//! agree bit for bit, not just approximately.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssdiv_core::{
    depth_tau, exhaustive_time, general_subdivision_work, mbr_time, sbr_time,
    simulate_subdivision_work, ssd_work, ModelParams, ProbProfile,
};

fn params(n: u64, g: u64, r: u64, b: u64, p: f64, a: f64, lambda: f64) -> ModelParams {
    ModelParams {
        n,
        g,
        r,
        b,
        p,
        a,
        lambda,
        q: 128,
        c: 64,
    }
    .validated()
    .unwrap()
}

#[test]
fn monte_carlo_confirms_expected_work_at_intermediate_probabilities() {
    for p in [0.25, 0.5, 0.75] {
        let params = params(4096, 16, 2, 32, p, 512.0, 10.0);
        let closed = ssd_work(&params).total;
        let stats = simulate_subdivision_work(&params, 40_000, 7).unwrap();
        let rel = (stats.mean - closed).abs() / closed;
        assert!(
            rel <= 0.01,
            "P = {p}: simulated {} vs closed form {closed} ({rel:.4} relative)",
            stats.mean
        );
        assert!(
            (stats.mean - closed).abs() <= 6.0 * stats.stderr.max(1e-9),
            "P = {p}: deviation exceeds 6 standard errors"
        );
    }
}

/// Test-side Monte Carlo for the general per-level work form, written
/// against the process description: every live region pays its boundary
/// probe, subdividers add the subdivision overhead and spawn r^2 children,
/// the rest pay the wholesale term, and final-level regions pay their cell
/// count times the per-cell cost.
#[test]
fn monte_carlo_confirms_the_general_work_form() {
    let params = params(64, 2, 2, 8, 0.5, 4.0, 3.0);
    assert_eq!(
        depth_tau(&params),
        2,
        "one classification level, then leaves"
    );
    let probs = ProbProfile::new(vec![0.5]).unwrap();
    let (q, s, t) = (10.0, 2.0, 16.0);
    let closed = general_subdivision_work(&params, &probs, q, s, t).unwrap();
    assert_eq!(
        closed,
        4.0 * (q + 0.5 * s + 0.5 * t) + 4096.0 * 4.0 * 0.5,
        "hand-expanded two-level value"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let trials = 200_000u32;
    let mut total = 0.0f64;
    for _ in 0..trials {
        let g2 = (params.g * params.g) as f64;
        let mut subdividers = 0u64;
        for _ in 0..params.g * params.g {
            if rng.gen_bool(0.5) {
                subdividers += 1;
            }
        }
        let level0 = g2 * q + subdividers as f64 * s + (g2 - subdividers as f64) * t;
        let children = subdividers * params.r * params.r;
        let cells_per_child = (params.n * params.n) / (params.g * params.g * params.r * params.r);
        let leaf = children as f64 * cells_per_child as f64 * params.a;
        total += level0 + leaf;
    }
    let mean = total / trials as f64;
    let rel = (mean - closed).abs() / closed;
    assert!(
        rel <= 0.01,
        "independent simulation {mean} vs closed form {closed} ({rel:.4} relative)"
    );
}

/// Integer/dyadic evaluation of the exhaustive wall-time formula.
fn oracle_exhaustive_time(p: &ModelParams) -> f64 {
    let batches = (p.n as u128 * p.n as u128).div_ceil(p.q as u128 * p.c as u128);
    batches as f64 * p.a
}

/// Integer/dyadic evaluation of the one-task-per-region wall time:
/// for each classification level, (boundary batches * A + P * lambda * A +
/// (1 - P) * wholesale batches) per region round, times the region rounds
/// ceil(G R^i / q), times the survival probability P^i; then the final
/// level's direct evaluation term.
fn oracle_sbr_time(p: &ModelParams) -> f64 {
    let tau = depth_tau(p);
    let (n, g, q, c) = (p.n as u128, p.g as u128, p.q as u128, p.c as u128);
    let big_g = g * g;
    let big_r = (p.r as u128) * (p.r as u128);
    let mut terms = Vec::new();
    for i in 0..tau.saturating_sub(1) {
        let ri = (p.r as u128).pow(i);
        let boundary_batches = (4 * n).div_ceil(g * ri * c);
        let wholesale_batches = (n * n).div_ceil(big_g * big_r.pow(i) * c);
        let per_round = boundary_batches as f64 * p.a
            + p.p * p.lambda * p.a
            + (1.0 - p.p) * wholesale_batches as f64;
        let rounds = (big_g * big_r.pow(i)).div_ceil(q);
        terms.push(per_round * rounds as f64 * p.p.powi(i as i32));
    }
    let last = big_r.pow(tau - 1);
    let eval_batches = (n * n).div_ceil(big_g * last * c);
    terms.push(
        p.a * eval_batches as f64 * (big_g * last).div_ceil(q) as f64 * p.p.powi(tau as i32 - 1),
    );
    // Reverse-order summation: exact dyadic terms make order irrelevant,
    // which is exactly what this oracle is checking.
    terms.iter().rev().sum()
}

/// Integer/dyadic evaluation of the tiled wall time: per level, boundary
/// rounds at full width, the subdivision overhead on survivors, and one
/// combined wholesale batch term over the whole level's expected pixels;
/// then the final direct-evaluation term at machine width.
fn oracle_mbr_time(p: &ModelParams) -> f64 {
    let tau = depth_tau(p);
    let (n, g, q, c) = (p.n as u128, p.g as u128, p.q as u128, p.c as u128);
    let big_g = g * g;
    let big_r = (p.r as u128) * (p.r as u128);
    let mut terms = Vec::new();
    for i in 0..tau.saturating_sub(1) {
        let ri = (p.r as u128).pow(i);
        let rounds = (big_g * big_r.pow(i)).div_ceil(q) as f64;
        let boundary_batches = (4 * n).div_ceil(g * ri * c) as f64;
        terms.push(boundary_batches * rounds * p.a * p.p.powi(i as i32));
        terms.push(rounds * p.lambda * p.a * p.p.powi(i as i32 + 1));
        let wholesale = (n * n) as f64 * p.p.powi(i as i32) * (1.0 - p.p) / (q as f64 * c as f64);
        terms.push(wholesale.ceil());
    }
    let eval_batches = (n * n).div_ceil(q * c);
    terms.push(p.a * eval_batches as f64 * p.p.powi(tau as i32 - 1));
    terms.iter().rev().sum()
}

#[test]
fn dyadic_time_formulas_match_the_integer_oracle_exactly() {
    let shapes: [(u64, u64, u64, u64); 4] = [
        (1024, 16, 2, 8),
        (4096, 16, 2, 32),
        (65536, 16, 2, 32),
        (4096, 4, 4, 16),
    ];
    let machines: [(u64, u64); 3] = [(128, 64), (1, 1), (512, 8)];
    let mut checked = 0;
    for (n, g, r, b) in shapes {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for (a, lambda) in [(512.0, 10.0), (16.0, 0.0)] {
                for (q, c) in machines {
                    let params = ModelParams {
                        n,
                        g,
                        r,
                        b,
                        p,
                        a,
                        lambda,
                        q,
                        c,
                    }
                    .validated()
                    .unwrap();
                    assert_eq!(
                        exhaustive_time(&params),
                        oracle_exhaustive_time(&params),
                        "exhaustive time at {params:?}"
                    );
                    assert_eq!(
                        sbr_time(&params),
                        oracle_sbr_time(&params),
                        "one-task-per-region time at {params:?}"
                    );
                    assert_eq!(
                        mbr_time(&params),
                        oracle_mbr_time(&params),
                        "tiled time at {params:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 4 * 5 * 2 * 3, "every combination exercised");
}

#[test]
fn non_dyadic_probabilities_agree_within_float_tolerance() {
    for p in [0.1, 0.3, 0.9] {
        let params = params(4096, 16, 2, 32, p, 512.0, 10.0);
        for (have, want, what) in [
            (sbr_time(&params), oracle_sbr_time(&params), "sbr"),
            (mbr_time(&params), oracle_mbr_time(&params), "mbr"),
        ] {
            let rel = (have - want).abs() / want.abs().max(1.0);
            assert!(rel <= 1e-12, "{what} at P = {p}: {have} vs {want}");
        }
    }
}

#[test]
fn random_walk_of_valid_shapes_never_breaks_the_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_816);
    for _ in 0..2000 {
        let n = 1u64 << rng.gen_range(6..=14);
        let r = 1u64 << rng.gen_range(1..=2);
        let g = 1u64 << rng.gen_range(1..=4);
        let max_b_shift = (n / g).trailing_zeros();
        let b = 1u64 << rng.gen_range(0..=max_b_shift);
        let params = ModelParams {
            n,
            g,
            r,
            b,
            p: rng.gen_range(0.0..=1.0),
            a: rng.gen_range(1.0..=4096.0),
            lambda: rng.gen_range(0.0..=128.0),
            q: 1 << rng.gen_range(0..=9),
            c: 1 << rng.gen_range(0..=9),
        }
        .validated()
        .unwrap();
        let work = ssd_work(&params);
        let n2 = (params.n * params.n) as f64;
        assert!(
            work.total >= n2 * (1.0 - 1e-12),
            "work {} below the n^2 floor at {params:?}",
            work.total
        );
        let omega = n2 * params.a / work.total;
        assert!(
            omega <= params.a * (1.0 + 1e-12),
            "reduction factor {omega} exceeds A at {params:?}"
        );
        let t_ex = exhaustive_time(&params);
        for t in [sbr_time(&params), mbr_time(&params)] {
            assert!(t >= 1.0, "time {t} below one step at {params:?}");
            assert!(
                t_ex / t <= params.a * (1.0 + 1e-12),
                "speedup {} exceeds A at {params:?}",
                t_ex / t
            );
        }
    }
}
