//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p microgarch --test acceptance`.

mod common;

use std::time::Instant;

use common::*;
use microgarch::cli::commands::cmd_simulate;
use microgarch::cli::Overrides;
use microgarch::garch::{
    garch_path, micro_to_garch, reduce_noise_ai, reduce_noise_fundamental, reduce_noise_only,
    GarchParams,
};
use microgarch::market_model::{ai_utility, fundamental_utility};
use microgarch::pricing::{order_volumes, step_return, step_return_closed_form};
use microgarch::sim::{median, simulate, simulate_batch, sweep, RunSettings, SweepAxis};
use microgarch::stats::{
    evaluate_stylized_facts, ks_statistic, kurtosis, normal_cdf, skewness, sq_autocorrelation,
    variance, verify_lemma_risk_monotonicity, Utility,
};
use microgarch::{FundamentalFn, MicroParams, PredictorFn};
use rand::{Rng, SeedableRng};
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};
use rand_distr::StandardNormal;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn random_params(rng: &mut impl Rng) -> MicroParams {
    loop {
        let p = MicroParams {
            rho: rng.random_range(0.1..8.0),
            k: rng.random_range(0.01..1.0),
            s_liquidity: 10f64.powf(rng.random_range(-3.0..3.0)),
            p1: if rng.random_bool(0.15) {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            },
            p2: if rng.random_bool(0.15) {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            },
            lambda: rng.random_range(0.01..3.0),
            gamma: rng.random_range(0.01..3.0),
            g_fn: if rng.random_bool(0.7) {
                FundamentalFn::Log
            } else {
                FundamentalFn::Identity
            },
            h_fn: match rng.random_range(0..3) {
                0 => PredictorFn::default(),
                1 => PredictorFn::Ar {
                    coef: rng.random_range(-1.0..1.0),
                },
                _ => PredictorFn::Zero,
            },
        };
        if p.validate().is_ok() {
            return p;
        }
    }
}

fn oracle_g(f: FundamentalFn, x: f64) -> f64 {
    match f {
        FundamentalFn::Log => (1.0 + x.max(-0.99)).ln(),
        FundamentalFn::Identity => x,
    }
}

fn oracle_h(h: PredictorFn, x: f64) -> f64 {
    match h {
        PredictorFn::Ar { coef } => coef * x,
        PredictorFn::Zero => 0.0,
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut reductions = 0;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let x: f64 = rng.sample::<f64, _>(StandardNormal) * 1.5;
        let u: f64 = rng.sample::<f64, _>(StandardNormal) * 2.0;
        let sigma: f64 = rng.random_range(0.0..5.0);
        let got = micro_to_garch(&p, x, u, sigma).unwrap();
        let (omega, f, alpha, beta) = oracle_garch(
            p.rho,
            p.k,
            p.p1,
            p.p2,
            p.lambda,
            p.gamma,
            oracle_g(p.g_fn, x),
            oracle_h(p.h_fn, x),
            sigma,
            u,
        );
        for (a, b) in [
            (got.omega, omega),
            (got.f_value, f),
            (got.alpha, alpha),
            (got.beta, beta),
        ] {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }

        let nf = MicroParams { p2: 0.0, ..p };
        let na = MicroParams { p1: 0.0, ..p };
        let n0 = MicroParams {
            p1: 0.0,
            p2: 0.0,
            ..p
        };
        let exact = reduce_noise_fundamental(&nf, x, sigma).unwrap()
            == micro_to_garch(&nf, x, u, sigma).unwrap()
            && reduce_noise_ai(&na, x, u).unwrap() == micro_to_garch(&na, x, u, sigma).unwrap()
            && reduce_noise_only(&n0).unwrap() == micro_to_garch(&n0, x, u, sigma).unwrap();
        if !exact {
            return (
                false,
                format!("reduction mismatch at {p:?}, x={x}, u={u}, sigma={sigma}"),
            );
        }
        reductions += 3;
    }
    (
        worst <= 1e-12,
        format!("1000 draws, max rel err {worst:.2e} (tol 1e-12); {reductions} reductions bit-identical"),
    )
}

fn criterion_2() -> Outcome {
    let p = MicroParams::default();
    let g = micro_to_garch(&p, 0.0, 0.0, 0.0).unwrap();
    let margin = microgarch::stationarity_margin(&p);
    // by hand: rho^2 k^2 = 2.56; alpha = 2.56 * 0.16 * 1.44; beta = 2.56 * 0.04 * 1.44
    let checks = [
        ("alpha", g.alpha, 0.589824),
        ("beta", g.beta, 0.147456),
        ("omega", g.omega, 2.56),
        ("margin", margin, 0.26272),
    ];
    let ok = checks.iter().all(|(_, a, b)| (a - b).abs() <= 1e-12);
    let detail = checks
        .iter()
        .map(|(n, a, _)| format!("{n}={a:.12}"))
        .collect::<Vec<_>>()
        .join(", ");
    (ok, detail)
}

fn criterion_3() -> Outcome {
    let seeds: Vec<u64> = (1..=30).collect();
    let batch = simulate_batch(&MicroParams::default(), RunSettings::default(), &seeds).unwrap();
    let n = batch.len() as f64;
    let (mut skew, mut kurt, mut ks, mut acf) = (0, 0, 0, 0);
    for s in &batch {
        let r = evaluate_stylized_facts(&s.returns, 0.01).unwrap();
        skew += (r.skewness.value < 0.0) as usize;
        kurt += (r.kurtosis.value > 3.0) as usize;
        ks += r.ks.present as usize;
        acf += (r.lag1().value > 0.0 && r.lag1().present) as usize;
    }
    let rate = |c: usize| c as f64 / n;
    let ok = rate(skew) >= 0.8 && rate(kurt) >= 0.9 && rate(ks) >= 0.9 && rate(acf) >= 0.8;
    (
        ok,
        format!(
            "30 seeds, T=1000: skew<0 {skew}/30 (>=24), kurt>3 {kurt}/30 (>=27), KS rejects {ks}/30 (>=27), acf1 sig {acf}/30 (>=24)"
        ),
    )
}

fn criterion_4() -> Outcome {
    let p = MicroParams {
        p1: 0.0,
        p2: 0.0,
        ..MicroParams::default()
    };
    let t = 100_000;
    let s = simulate(&p, t, 4).unwrap();
    let m2 = variance(&s.returns);
    let mean = s.returns.iter().sum::<f64>() / t as f64;
    let m4 = s.returns.iter().map(|r| (r - mean).powi(4)).sum::<f64>() / t as f64;
    let se = ((m4 - m2 * m2) / t as f64).sqrt();
    let target = p.rho * p.rho * p.k * p.k;
    let z_var = (m2 - target) / se;

    let seeds: Vec<u64> = (1..=30).collect();
    let batch = simulate_batch(&p, RunSettings::default(), &seeds).unwrap();
    let acfs: Vec<f64> = batch
        .iter()
        .map(|s| sq_autocorrelation(&s.returns, 1).unwrap())
        .collect();
    let med = median(&acfs);
    let p_value = normal_cdf(-med * (RunSettings::default().length as f64).sqrt());
    (
        z_var.abs() <= 3.0 && p_value >= 0.05,
        format!(
            "var {m2:.5} vs {target} ({z_var:+.2} SE); median acf1 over 30 seeds {med:+.4}, p={p_value:.3} (>=0.05)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let base = MicroParams {
        k: 0.2,
        ..MicroParams::default()
    };
    let settings = RunSettings {
        length: 200,
        burn_in: 50,
    };
    let p2 = sweep(
        &base,
        SweepAxis::P2,
        &[0.0, 0.2, 0.4, 0.6],
        settings,
        &[1, 2],
        0.01,
    )
    .unwrap();
    let p1 = sweep(
        &base,
        SweepAxis::P1,
        &[0.0, 0.2, 0.4],
        settings,
        &[1, 2],
        0.01,
    )
    .unwrap();
    let alphas: Vec<f64> = p2.rows.iter().map(|r| r.alpha).collect();
    let betas: Vec<f64> = p1.rows.iter().map(|r| r.beta).collect();
    let inc = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let formula = p2.rows.iter().all(|r| {
        rel_close(
            r.alpha,
            base.rho.powi(2) * base.k.powi(2) * r.axis_value.powi(2) * base.gamma.powi(2),
            1e-12,
        )
    }) && p1.rows.iter().all(|r| {
        rel_close(
            r.beta,
            base.rho.powi(2) * base.k.powi(2) * r.axis_value.powi(2) * base.lambda.powi(2),
            1e-12,
        )
    });
    (
        inc(&alphas) && inc(&betas) && formula,
        format!("base k=0.2; alpha over p2 {alphas:.6?}; beta over p1 {betas:.6?}"),
    )
}

fn criterion_6() -> Outcome {
    let g = GarchParams::new(0.1, 0.0, 0.5, 0.3).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let t = 1_000_000;
    let r = garch_path(&g, t, || rng.sample(StandardNormal)).unwrap();
    let v = variance(&r);
    // fourth moment is infinite here, so the SE comes from batch means
    let batches = 100;
    let len = t / batches;
    let means: Vec<f64> = r
        .chunks(len)
        .map(|c| {
            let m = c.iter().sum::<f64>() / len as f64;
            c.iter().map(|x| (x - m).powi(2)).sum::<f64>() / len as f64
        })
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let sd = (means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64).sqrt();
    let se = sd / (batches as f64).sqrt();
    let target = g.unconditional_variance();
    let z = (v - target) / se;
    (
        z.abs() <= 3.0,
        format!("T=1e6: var {v:.5} vs {target} (SE {se:.5} from 100 batch means, {z:+.2} SE)"),
    )
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    for v in random_small_inputs(200, 7) {
        let mut pairs = vec![
            (skewness(&v).unwrap(), oracle_skewness(&v)),
            (kurtosis(&v).unwrap(), oracle_kurtosis(&v)),
            (ks_statistic(&v).unwrap(), oracle_ks(&v)),
        ];
        for lag in 1..=5.min(v.len() - 1) {
            pairs.push((
                sq_autocorrelation(&v, lag).unwrap(),
                oracle_sq_autocorr(&v, lag),
            ));
        }
        for (a, b) in pairs {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    (
        worst <= 1e-12,
        format!("200 inputs, max rel err {worst:.2e} (tol 1e-12)"),
    )
}

fn criterion_8() -> Outcome {
    let catalog = [
        Utility::Exponential { a: 0.5 },
        Utility::Exponential { a: 1.0 },
        Utility::Exponential { a: 2.0 },
        Utility::Log { shift: 12.0 },
        Utility::Power {
            eta: 0.5,
            shift: 12.0,
        },
        Utility::Power {
            eta: 2.0,
            shift: 12.0,
        },
        Utility::Power {
            eta: 3.0,
            shift: 15.0,
        },
    ];
    let sigmas: Vec<f64> = (1..=10).map(|i| i as f64 * 0.1).collect();
    let mut worst = 0.0f64;
    for u in catalog {
        for mu in [-0.5, 0.0, 0.5] {
            let rep = verify_lemma_risk_monotonicity(u, mu, &sigmas, 4000).unwrap();
            if !rep.monotone_decreasing {
                return (false, format!("{u} at mu={mu} not monotone"));
            }
            for row in &rep.rows {
                if let Some(c) = row.closed_form {
                    worst = worst.max((row.expected_utility - c).abs());
                }
            }
        }
    }
    let linear_rejected =
        verify_lemma_risk_monotonicity(Utility::Linear, 0.0, &sigmas, 4000).is_err();
    (
        worst <= 1e-6 && linear_rejected,
        format!(
            "{} utilities x 3 mu monotone; exp max abs err vs closed form {worst:.2e} (tol 1e-6)",
            catalog.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst_ratio, mut worst_scale) = (0.0f64, 0.0f64);
    let (mut nonneg, mut nonneg_exact, mut unit_exact) = (0, 0, 0);
    let (mut neg, mut neg_exact) = (0, 0);
    let n = 10_000;
    for _ in 0..n {
        let p = random_params(&mut rng);
        let x: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.sample::<f64, _>(StandardNormal) * 2.0;
        let sigma: f64 = rng.random_range(0.0..3.0);
        let eps: f64 = rng.sample(StandardNormal);
        let uf = fundamental_utility(x, sigma, &p).unwrap();
        let ua = ai_utility(x, u, &p);

        let v = order_volumes(uf, ua, eps, &p);
        let closed = step_return_closed_form(uf, ua, eps, &p);
        if let Ok(r) = step_return(v, &p) {
            worst_ratio = worst_ratio.max((r - closed).abs() / closed.abs().max(1.0));
        }
        let scaled = MicroParams {
            s_liquidity: p.s_liquidity * rng.random_range(0.01..100.0),
            ..p
        };
        if let (Ok(a), Ok(b)) = (
            step_return(v, &p),
            step_return(order_volumes(uf, ua, eps, &scaled), &scaled),
        ) {
            worst_scale = worst_scale.max((a - b).abs() / b.abs().max(1.0));
        }

        if v.has_negative() {
            neg += 1;
            neg_exact += (v.buy + v.sell == p.s_liquidity) as usize;
        } else {
            nonneg += 1;
            nonneg_exact += (v.buy + v.sell == p.s_liquidity) as usize;
        }
        let unit = MicroParams {
            s_liquidity: 1.0,
            ..p
        };
        let w = order_volumes(uf, ua, eps, &unit);
        unit_exact += (w.buy + w.sell == 1.0) as usize;
    }
    (
        worst_ratio <= 1e-12 && worst_scale <= 1e-12 && nonneg_exact == nonneg && unit_exact == n,
        format!(
            "{n} inputs: ratio vs closed {worst_ratio:.2e}, S-invariance {worst_scale:.2e} (tol 1e-12); \
             buy+sell==S exact {nonneg_exact}/{nonneg} non-negative, {unit_exact}/{n} at S=1 \
             (negative volumes, random S: {neg_exact}/{neg}, not gated)"
        ),
    )
}

fn criterion_10() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = Overrides {
            seeds: Some(vec![42]),
            out_dir: Some(d.path().to_path_buf()),
            ..Overrides::default()
        };
        cmd_simulate(&o, &mut std::io::sink()).unwrap();
    }
    let read =
        |d: &tempfile::TempDir| std::fs::read(d.path().join("trajectory_seed42.csv")).unwrap();
    let (x, y) = (read(&a), read(&b));
    (
        x == y && !x.is_empty(),
        format!("{} bytes, identical: {}", x.len(), x == y),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("micro-to-GARCH mapping vs oracle; reductions", criterion_1),
        ("reference-parameter constants", criterion_2),
        ("stylized facts over 30 seeds", criterion_3),
        ("noise-only market Monte Carlo", criterion_4),
        ("sweep monotonicity of alpha and beta", criterion_5),
        ("GARCH reference generator variance", criterion_6),
        ("statistics vs brute-force oracles", criterion_7),
        ("expected utility falls with risk", criterion_8),
        ("pricing identities", criterion_9),
        ("determinism of simulate output", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f();
        failed += !ok as usize;
        println!(
            "[{}] {:>2}. {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
