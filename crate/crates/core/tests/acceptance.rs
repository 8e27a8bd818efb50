//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every stochastic criterion is run twice, with one and with four workers;
//! criterion 11 requires the two runs to agree bit for bit.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use pickands::doublesum::{
    bivariate_normal_below, borell_bound, brute_force_union, exceedance_bracketing,
    joint_exceedance_constant, mc_joint_exceedance, mc_sup_exceedance, slepian_check, FiniteSpace,
    SupEnsemble,
};
use pickands::gauss::{gamma_fn, std_normal_tail};
use pickands::pickands::{
    alpha1_sup_tail, estimate_h_interval, estimate_h_rect, estimate_pickands_constant,
    h_exact_alpha2, h_quadrature_alpha1, pickands_lower_bound,
};
use pickands::process::{CovarianceModel, Grid, PickandsSampler};
use pickands::quad::{integrate, Tolerance};
use pickands::{Estimate, ExactProb, Replication, RngStream};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// Bit patterns of every reported number, for the determinism check.
    fingerprint: Vec<u64>,
    elapsed: Duration,
}

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
    fingerprint: Vec<u64>,
}

impl Check {
    fn require(&mut self, ok: bool, what: String) {
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn note(&mut self, what: String) {
        self.notes.push(what);
    }

    fn record(&mut self, xs: &[f64]) {
        self.fingerprint.extend(xs.iter().map(|x| x.to_bits()));
    }

    fn estimate(&mut self, e: &Estimate) {
        self.record(&[
            e.mean,
            e.stderr,
            e.grid_step,
            e.quantile_999.unwrap_or(f64::NAN),
        ]);
    }

    fn finish(self, started: Instant) -> Outcome {
        let pass = self.failures.is_empty();
        let detail = if pass {
            self.notes.join("; ")
        } else {
            self.failures.join("; ")
        };
        Outcome {
            pass,
            detail,
            fingerprint: self.fingerprint,
            elapsed: started.elapsed(),
        }
    }
}

fn rep(seed: u64, workers: usize) -> Replication {
    Replication::from_seed(seed).with_workers(workers)
}

fn alpha2_exactness(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    for (k, t) in [1.0, 0.5, 2.0].into_iter().enumerate() {
        let run = Instant::now();
        let e = estimate_h_interval(2.0, t, 0.01, 200_000, &rep(1001 + k as u64, workers)).unwrap();
        let exact = h_exact_alpha2(t).unwrap();
        c.estimate(&e);
        c.require(
            (e.mean - exact).abs() <= 3.0 * e.stderr,
            format!("T={t}: {:.6} vs {:.6} (se {:.2e})", e.mean, exact, e.stderr),
        );
        if t == 1.0 {
            c.require(
                (exact - 1.564190).abs() < 5e-7,
                format!("H(1) = {exact:.7}"),
            );
            c.require(
                e.stderr < 0.01,
                format!("se at T=1 {:.2e} < 0.01", e.stderr),
            );
        }
        c.require(
            run.elapsed() < Duration::from_secs(60),
            format!("T={t} in {:.2?}", run.elapsed()),
        );
    }
    c.finish(started)
}

/// `E exp(sup)` over `[0,T]` for `α = 1`, with the supremum between grid
/// points drawn exactly from the Brownian-bridge maximum law.
fn bridge_corrected_sups(t: f64, step: f64, n: usize, r: &Replication) -> Vec<f64> {
    let grid = Grid::covering(0.0, t, step).unwrap();
    let sampler = PickandsSampler::new(1.0, grid).unwrap();
    let h = grid.step();
    // √2·W has variance 2 per unit time
    let var = 2.0 * h;
    r.collect(n, |rng, count, out| {
        let mut ws = sampler.workspace();
        let mut path = vec![0.0; grid.count()];
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut path);
            let mut m = 0.0f64;
            for w in path.windows(2) {
                let (a, b) = (w[0], w[1]);
                let top =
                    0.5 * (a + b + ((a - b) * (a - b) - 2.0 * var * rng.uniform().ln()).sqrt());
                m = m.max(top);
            }
            out.push(m);
        }
        Ok(())
    })
    .unwrap()
}

fn alpha1_oracle(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let q1 = h_quadrature_alpha1(1.0).unwrap();
    let q2 = h_quadrature_alpha1(2.0).unwrap();
    c.record(&[q1, q2]);

    let sups = bridge_corrected_sups(1.0, 1e-3, 200_000, &rep(2001, workers));
    let exp: Vec<f64> = sups.iter().map(|s| s.exp()).collect();
    let bridge = Estimate::from_samples(&exp, 1e-3).unwrap();
    c.estimate(&bridge);
    c.require(
        (bridge.mean - q1).abs() <= 0.01 * q1,
        format!(
            "dense-grid MC at T=1 {:.4} vs quadrature {:.4} (within 1%)",
            bridge.mean, q1
        ),
    );
    for x in [0.5, 1.0, 2.0] {
        let hits = sups.iter().filter(|&&s| s >= x).count() as u64;
        let p = Estimate::from_count(hits, sups.len() as u64, 1e-3).unwrap();
        let exact = alpha1_sup_tail(1.0, x).unwrap();
        c.estimate(&p);
        c.require(
            (p.mean - exact).abs() <= 4.0 * p.stderr,
            format!("tail at {x}: {:.5} vs {:.5}", p.mean, exact),
        );
    }
    let plain = estimate_h_interval(1.0, 1.0, 1e-3, 200_000, &rep(2002, workers)).unwrap();
    c.estimate(&plain);
    c.note(format!(
        "plain grid at T=1 {:.4} ({:+.2}%)",
        plain.mean,
        100.0 * (plain.mean / q1 - 1.0)
    ));
    c.require(
        plain.mean <= q1 + 4.0 * plain.stderr,
        "plain grid estimate is not above the quadrature".into(),
    );

    let e = estimate_h_interval(1.0, 2.0, 5e-4, 100_000, &rep(2003, workers)).unwrap();
    c.estimate(&e);
    c.require(
        (e.mean - q2).abs() <= 4.0 * e.stderr + 0.02 * q2,
        format!(
            "H(2) {:.4} vs quadrature {:.4} (se {:.1e})",
            e.mean, q2, e.stderr
        ),
    );
    c.finish(started)
}

fn lower_bound(_workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    for (alpha, expected) in [
        (1.0, 0.0625),
        (2.0, 2.0 / (8.0 * PI.sqrt())),
        (0.5, 0.0078125),
    ] {
        let v: f64 = pickands_lower_bound(alpha).unwrap();
        c.record(&[v]);
        c.require(
            ((v - expected) / expected).abs() < 1e-9,
            format!("alpha={alpha}: {v:.9}"),
        );
    }
    c.require(
        ((2.0 / (8.0 * PI.sqrt())) - 0.1410474f64).abs() < 5e-8,
        "0.1410474".into(),
    );
    // Γ(x) = (1/x)∫₀^∞ exp(−s^{1/x}) ds
    let tol = Tolerance::new(1e-15, 1e-14);
    for x in [1.0, 2.0, 0.5, 1.0 / 1.5, 3.0] {
        let oracle = integrate(|s: f64| (-s.powf(1.0 / x)).exp(), 0.0, 1.0, tol).unwrap()
            + integrate(|s: f64| (-s.powf(1.0 / x)).exp(), 1.0, 60f64.powf(x), tol).unwrap();
        let oracle = oracle / x;
        let g: f64 = gamma_fn(x).unwrap();
        c.require(
            ((g - oracle) / oracle).abs() < 1e-12,
            format!("Γ({x:.4}) {g:.12} vs {oracle:.12}"),
        );
    }
    c.finish(started)
}

fn trend(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let table =
        estimate_pickands_constant(2.0, &[5.0, 10.0, 20.0], 0.01, 200_000, &rep(4001, workers))
            .unwrap();
    for row in &table.rows {
        c.estimate(&row.estimate);
        let exact = h_exact_alpha2(row.t).unwrap() / row.t;
        let se = row.estimate.stderr / row.t;
        c.require(
            (row.ratio - exact).abs() <= 3.0 * se,
            format!(
                "alpha=2 T={}: ratio {:.4} vs {:.4} (se {:.1e})",
                row.t, row.ratio, exact, se
            ),
        );
    }
    let decreasing = table.rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    c.require(decreasing, "alpha=2 ratios strictly decreasing".into());
    let last = table.pickands_constant();
    c.require(
        last >= 1.0 / PI.sqrt() - 4.0 * table.rows[2].estimate.stderr / 20.0,
        format!("alpha=2 last ratio {last:.4} toward 0.5642"),
    );

    let one =
        estimate_pickands_constant(1.0, &[40.0], 0.025, 100_000, &rep(4002, workers)).unwrap();
    let row = &one.rows[0];
    c.estimate(&row.estimate);
    c.require(
        row.ratio > 0.7 && row.ratio < 1.1,
        format!("alpha=1 T=40 ratio {:.4} in (0.7, 1.1)", row.ratio),
    );
    let floor = pickands_lower_bound(1.0).unwrap();
    let all_rows = table.rows.iter().chain(&one.rows);
    c.require(
        all_rows.clone().all(|r| r.ratio >= floor),
        "every ratio ≥ 0.0625".into(),
    );
    c.finish(started)
}

fn square_h(alpha: f64, workers: usize) -> (Estimate, Estimate) {
    let step = if alpha == 2.0 { 0.01 } else { 0.02 };
    let square = estimate_h_rect(
        alpha,
        1.0,
        1.0,
        step,
        step,
        100_000,
        &rep(5001 + alpha as u64, workers),
    )
    .unwrap();
    let line = estimate_h_interval(
        alpha,
        1.0,
        step,
        100_000,
        &rep(5101 + alpha as u64, workers),
    )
    .unwrap();
    (square, line)
}

fn factorization(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    for alpha in [1.0, 2.0] {
        let (square, line) = square_h(alpha, workers);
        c.estimate(&square);
        c.estimate(&line);
        let combined = square.stderr.hypot(2.0 * line.mean * line.stderr);
        c.require(
            (square.mean - line.mean * line.mean).abs() <= 4.0 * combined,
            format!(
                "alpha={alpha}: {:.4} vs {:.4}² = {:.4} (se {:.1e})",
                square.mean,
                line.mean,
                line.mean * line.mean,
                combined
            ),
        );
    }
    c.finish(started)
}

fn bonferroni(_workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let mut rng = RngStream::new(6001, 0);
    let mut bad = 0;
    for _ in 0..1000 {
        let atoms = rng.random_range(1..=16usize);
        let weights: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..=30)).collect();
        let total: i64 = weights.iter().sum();
        let space =
            FiniteSpace::new(weights.iter().map(|&w| ExactProb::new(w, total)).collect()).unwrap();
        let events: Vec<Vec<usize>> = (0..rng.random_range(0..=6usize))
            .map(|_| (0..atoms).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let r = brute_force_union(&space, &events).unwrap();
        if !(r.bonferroni_lower() <= r.exact_union && r.exact_union <= r.sum_singles()) {
            bad += 1;
        }
    }
    c.record(&[bad as f64]);
    c.require(bad == 0, format!("{bad} violations in 1000 exact spaces"));
    c.finish(started)
}

fn bracketing(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let model = CovarianceModel::exp_alpha(1.0).unwrap();
    let r = exceedance_bracketing(
        &model,
        1.0,
        3.0,
        5.0,
        Some(0.005),
        1_000_000,
        1.0,
        &rep(7001, workers),
    )
    .unwrap();
    c.estimate(&r.mc);
    c.record(&[r.bonferroni_lower, r.union_upper, r.pickands_value]);
    c.fingerprint
        .extend([r.counts.full, r.counts.upper, r.counts.lower as u64]);
    c.require(
        r.counts.lower <= r.counts.full as i64 && r.counts.full <= r.counts.upper,
        format!(
            "counts {} ≤ {} ≤ {} (N_p = {})",
            r.counts.lower, r.counts.full, r.counts.upper, r.n_p
        ),
    );
    c.require(r.mc.mean > 0.0, format!("P ≈ {:.5}", r.mc.mean));
    c.note(format!("asymptotic {:.5}", r.pickands_value));
    c.require(
        started.elapsed() < Duration::from_secs(600),
        format!("{:.2?}", started.elapsed()),
    );
    c.finish(started)
}

fn stabilization(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let model = CovarianceModel::exp_alpha(1.0).unwrap();
    let mut ratios = Vec::new();
    for (k, u) in [3.0f64, 3.5].into_iter().enumerate() {
        let step = u.powi(-2) / 20.0;
        let e = mc_sup_exceedance(
            &model,
            1.0,
            u,
            step,
            1_000_000,
            &rep(8001 + k as u64, workers),
        )
        .unwrap();
        c.estimate(&e);
        let ratio = e.mean / (u * u * std_normal_tail(u).unwrap());
        c.require(
            (0.25..=2.0).contains(&ratio),
            format!("u={u}: ratio {ratio:.3}"),
        );
        ratios.push(ratio);
    }
    let change = (ratios[1] / ratios[0] - 1.0).abs();
    c.require(change < 0.25, format!("change {:.1}%", 100.0 * change));
    c.finish(started)
}

fn ou_matrix(rate: f64) -> DMatrix<f64> {
    DMatrix::from_fn(10, 10, |i, j| {
        (-rate * 0.1 * (i as f64 - j as f64).abs()).exp()
    })
}

fn borell_slepian(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let model = CovarianceModel::exp_alpha(1.0).unwrap();
    let grid = Grid::covering(0.0, 1.0, 0.01).unwrap();
    let ens = SupEnsemble::generate(&model, grid, 200_000, &rep(9001, workers)).unwrap();
    let m = ens.mean().unwrap();
    c.estimate(&m);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..10 {
        let w = m.mean + 0.3 * k as f64;
        let tail = ens.exceedance(w).unwrap();
        let bound = borell_bound(m.mean, 1.0, w).unwrap();
        c.estimate(&tail);
        worst = worst.max(tail.mean - bound - 4.0 * tail.stderr);
    }
    c.require(
        worst <= 0.0,
        format!("Borell at 10 levels (worst margin {worst:.3})"),
    );

    let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 1.0]);
    let y = DMatrix::from_row_slice(2, 2, &[1.0, 0.8, 0.8, 1.0]);
    let pair = slepian_check(&x, &y, &[0.0, 0.0], 1.0, 1_000_000, &rep(9002, workers)).unwrap();
    let (ox, oy) = (
        bivariate_normal_below(0.2, 1.0).unwrap(),
        bivariate_normal_below(0.8, 1.0).unwrap(),
    );
    c.estimate(&pair.p_x);
    c.estimate(&pair.p_y);
    c.require(
        pair.consistent && ox < oy,
        format!(
            "pair: {:.4} ≤ {:.4}, oracle {ox:.4} < {oy:.4}",
            pair.p_x.mean, pair.p_y.mean
        ),
    );
    c.require(
        (pair.p_x.mean - ox).abs() <= 4.0 * pair.p_x.stderr
            && (pair.p_y.mean - oy).abs() <= 4.0 * pair.p_y.stderr,
        "pair estimates match the quadrature".into(),
    );
    let ou = slepian_check(
        &ou_matrix(1.0),
        &ou_matrix(0.5),
        &[0.0; 10],
        2.0,
        1_000_000,
        &rep(9003, workers),
    )
    .unwrap();
    c.estimate(&ou.p_x);
    c.estimate(&ou.p_y);
    c.require(
        ou.consistent,
        format!("ten-point grids: {:.4} ≤ {:.4}", ou.p_x.mean, ou.p_y.mean),
    );
    c.finish(started)
}

fn joint_constant(workers: usize) -> Outcome {
    let started = Instant::now();
    let mut c = Check::default();
    let mut seed = 10_001;
    for alpha in [1.0f64, 2.0] {
        let (square, _) = square_h(alpha, workers);
        let model = CovarianceModel::exp_alpha(alpha).unwrap();
        for t0 in [3.0, 5.0] {
            for u in [4.0f64, 5.0] {
                seed += 1;
                let scale = u.powf(-2.0 / alpha);
                let r = mc_joint_exceedance(
                    &model,
                    (0.0, scale),
                    (scale * t0, scale * (t0 + 1.0)),
                    u,
                    scale / 20.0,
                    500_000,
                    &rep(seed, workers),
                )
                .unwrap();
                c.estimate(&r.joint);
                let ratio = r.joint.mean / std_normal_tail(u).unwrap();
                let rel = if r.joint.mean > 0.0 {
                    r.joint.relative_stderr()
                } else {
                    0.0
                };
                let bound = joint_exceedance_constant(alpha, t0, 1.0, square.mean).unwrap();
                c.require(
                    ratio <= bound * (1.0 + 4.0 * rel),
                    format!(
                        "alpha={alpha} t0={t0} u={u}: {ratio:.3} ≤ {bound:.1}{}",
                        if r.joint.flags.low_hit_count {
                            " (low hits)"
                        } else {
                            ""
                        }
                    ),
                );
            }
        }
    }
    c.finish(started)
}

type Criterion = (u8, &'static str, fn(usize) -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "alpha=2 exactness", alpha2_exactness),
        (2, "alpha=1 oracle agreement", alpha1_oracle),
        (3, "lower-bound formula", lower_bound),
        (4, "Pickands-constant trend", trend),
        (5, "factorization", factorization),
        (6, "Bonferroni oracle", bonferroni),
        (7, "bracketing theorem check", bracketing),
        (8, "asymptotic ratio stabilization", stabilization),
        (9, "Borell/Slepian suites", borell_slepian),
        (10, "joint-exceedance constant", joint_constant),
    ];
    let mut failed = 0;
    let mut mismatched = Vec::new();
    for (id, title, run) in criteria {
        let single = run(1);
        let parallel = run(4);
        if single.fingerprint != parallel.fingerprint {
            mismatched.push(id);
        }
        let tag = if single.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!single.pass);
        println!(
            "{tag} criterion {id:>2} {title} [{:.1?}]: {}",
            single.elapsed, single.detail
        );
    }
    let det = mismatched.is_empty();
    failed += usize::from(!det);
    println!(
        "{} criterion 11 determinism across worker counts: {}",
        if det { "PASS" } else { "FAIL" },
        if det {
            "criteria 1-10 bit-identical with 1 and 4 workers".to_string()
        } else {
            format!("differs for {mismatched:?}")
        }
    );
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
