//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p chanent --test acceptance`.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chanent::channel::{check_unital, classical_embed, state_channel, Channel, DensityOperator};
use chanent::choi::{is_extremal_choi, reconstruct, representative_operator, verify_properties, EXTREMAL_TOL};
use chanent::decomposition::channel_entropy_classical;
use chanent::entropy::ohya_entropy;
use chanent::exec::{map_collect, Execution};
use chanent::harness::{run_random, RandomConfig};
use chanent::kernel::hermitian_eig;
use chanent::sampling::{
    random_density, random_hermitian, random_mixed_state, random_pure_state, random_stochastic, random_ucp_channel,
};
use chanent::{state_channel_entropy_upper, StochasticMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {elapsed:.2?}"))
}

fn binary_entropy(p: f64) -> f64 {
    let q = 1.0 - p;
    -p * p.ln() - q * q.ln()
}

fn example_reproduction() -> Check {
    timed(Duration::from_secs(1), || {
        let mut worst: f64 = 0.0;
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let s = StochasticMatrix::binary(p, 1.0 - p).map_err(|e| e.to_string())?;
            let h = channel_entropy_classical(&s).map_err(|e| e.to_string())?.h_channel.nats();
            let err = (h - binary_entropy(p)).abs();
            ensure(err <= 1e-9, || format!("p={p}: H={h}, closed form {}", binary_entropy(p)))?;
            worst = worst.max(err);
        }
        Ok(format!("max |H - closed form| = {worst:.1e}"))
    })
}

fn strict_inequality_at_half() -> Check {
    let s = StochasticMatrix::binary(0.5, 0.5).map_err(|e| e.to_string())?;
    let r = channel_entropy_classical(&s).map_err(|e| e.to_string())?;
    let (h, d) = (r.h_channel.nats(), r.d_choi.nats());
    ensure((h - LN_2).abs() <= 1e-9, || format!("H = {h}"))?;
    ensure((d - 2.0 * LN_2).abs() <= 1e-9, || format!("d = {d}"))?;
    ensure((r.gap - LN_2).abs() <= 1e-9, || format!("gap = {}", r.gap))?;
    Ok(format!("H = {h:.12}, d = {d:.12}, gap = {:.12}", r.gap))
}

fn random_inequality_suite() -> Check {
    timed(Duration::from_secs(30), || {
        let mut parts = Vec::new();
        for (n, count) in [(2, 1000), (3, 200)] {
            let cfg = RandomConfig { n, count, seed: 42, deterministic: false };
            let s = run_random(&cfg, Execution::default()).map_err(|e| e.to_string())?;
            ensure(s.failures == 0 && s.min_gap >= -1e-9, || {
                format!("n={n}: {} failures, min gap {}", s.failures, s.min_gap)
            })?;
            parts.push(format!("n={n}: {count} trials, min gap {:.3e}", s.min_gap));
        }
        Ok(parts.join("; "))
    })
}

fn test_channels() -> Result<Vec<Channel>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    for k in 0..50 {
        out.push(classical_embed(random_stochastic(&mut rng, 2 + k % 2)));
    }
    for k in 0..20 {
        out.push(random_ucp_channel(&mut rng, 2, 1 + k % 4).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn round_trip() -> Check {
    let channels = test_channels()?;
    let mut worst = (0.0f64, f64::INFINITY, 0.0f64);
    for (k, t) in channels.iter().enumerate() {
        let rho = representative_operator(t).map_err(|e| e.to_string())?;
        let back = reconstruct(&rho).map_err(|e| e.to_string())?;
        let dev = t.max_deviation(&back).map_err(|e| e.to_string())?;
        let min_eig = rho.spectrum().min();
        let pt = rho.partial_trace_deviation();
        ensure(dev < 1e-10 && min_eig > -1e-9 && pt < 1e-10, || {
            format!("channel {k}: deviation {dev:.2e}, min eigenvalue {min_eig:.2e}, partial trace {pt:.2e}")
        })?;
        worst = (worst.0.max(dev), worst.1.min(min_eig), worst.2.max(pt));
    }
    Ok(format!(
        "{} channels; max deviation {:.1e}, min eigenvalue {:.1e}, partial trace {:.1e}",
        channels.len(),
        worst.0,
        worst.1,
        worst.2
    ))
}

fn defining_properties() -> Check {
    let mut channels = test_channels()?;
    channels.push(Channel::identity(3));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    channels.push(state_channel(random_density(&mut rng, 3).map_err(|e| e.to_string())?));
    let mut worst_c: f64 = 0.0;
    for (k, t) in channels.iter().enumerate() {
        ensure(check_unital(t).unwrap_or(false), || format!("channel {k} is not unital"))?;
        let r = verify_properties(t).map_err(|e| e.to_string())?;
        ensure(r.all() && r.c_deviation < 1e-10, || format!("channel {k}: {r:?}"))?;
        worst_c = worst_c.max(r.c_deviation);
    }
    Ok(format!("{} channels; max C deviation {worst_c:.1e}", channels.len()))
}

fn state_channel_extremality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..20 {
        let n = 2 + k % 2;
        let pure = random_pure_state(&mut rng, n);
        ensure(is_extremal_choi(&state_channel(pure), EXTREMAL_TOL) == Ok(true), || {
            format!("pure state {k} (n={n}) not extremal")
        })?;
        let mixed = random_mixed_state(&mut rng, n, 0.05).map_err(|e| e.to_string())?;
        ensure(is_extremal_choi(&state_channel(mixed), EXTREMAL_TOL) == Ok(false), || {
            format!("mixed state {k} (n={n}) reported extremal")
        })?;
    }
    Ok("20 pure extremal, 20 mixed non-extremal".into())
}

fn state_channel_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 1 + k % 4;
        let phi = random_density(&mut rng, n).map_err(|e| e.to_string())?;
        let upper = state_channel_entropy_upper(&phi).map_err(|e| e.to_string())?.nats();
        let ohya = ohya_entropy(&phi).map_err(|e| e.to_string())?.nats();
        ensure((upper - ohya).abs() <= 1e-12, || format!("state {k}: {upper} vs {ohya}"))?;
        worst = worst.max((upper - ohya).abs());
    }
    for n in 2..=4 {
        let h = ohya_entropy(&DensityOperator::maximally_mixed(n)).map_err(|e| e.to_string())?.nats();
        ensure((h - (n as f64).ln()).abs() <= 1e-10, || format!("ohya(I/{n}) = {h}"))?;
    }
    Ok(format!("50 states, max difference {worst:.1e}; ln n reproduced for n = 2, 3, 4"))
}

fn eigensolver_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let h = random_hermitian(&mut rng, 2);
        let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let spec = hermitian_eig(&h).map_err(|e| e.to_string())?;
        let err = (spec.values[0] - (mean + radius)).abs().max((spec.values[1] - (mean - radius)).abs());
        ensure(err <= 1e-10, || format!("instance {k}: {:?} vs {}", spec.values, mean + radius))?;
        worst = worst.max(err);
    }
    let mut residual: f64 = 0.0;
    for k in 0..200 {
        let n = 1 + k % 4;
        let h = random_hermitian(&mut rng, n);
        let r = hermitian_eig(&h).map_err(|e| e.to_string())?.reconstruct().max_abs_diff(&h);
        ensure(r < 1e-9, || format!("n={n}: reconstruction residual {r:.2e}"))?;
        residual = residual.max(r);
    }
    Ok(format!("2x2 max error {worst:.1e}; n <= 4 max residual {residual:.1e}"))
}

/// Minimum of the decomposition entropy on a 1e-6 grid of the free weight.
fn grid_minimum(p: f64, q: f64) -> f64 {
    let lo = (p + q - 1.0).max(0.0);
    let hi = p.min(q);
    let xlogx = |w: f64| if w > 0.0 { -w * w.ln() } else { 0.0 };
    let f = |d: f64| xlogx(d) + xlogx(p - d) + xlogx(q - d) + xlogx(1.0 - p - q + d);
    let steps = ((hi - lo) / 1e-6).floor() as usize;
    (0..=steps).map(|k| f(lo + k as f64 * 1e-6)).fold(f(hi), f64::min)
}

fn vertex_vs_grid() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pairs: Vec<(f64, f64)> = (0..100).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let results = map_collect(&pairs, Execution::default(), |&(p, q)| {
        let s = StochasticMatrix::binary(p, q).map_err(|e| e.to_string())?;
        let h = channel_entropy_classical(&s).map_err(|e| e.to_string())?.h_channel.nats();
        Ok::<_, String>((p, q, h, grid_minimum(p, q)))
    });
    let mut worst: f64 = 0.0;
    for r in results {
        let (p, q, h, grid) = r?;
        ensure((h - grid).abs() <= 1e-5, || format!("p={p}, q={q}: vertex {h}, grid {grid}"))?;
        worst = worst.max((h - grid).abs());
    }
    Ok(format!("100 matrices, max |vertex - grid| = {worst:.1e}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("example reproduction, p = 0.1..0.9", example_reproduction),
        ("strict inequality at p = q = 1/2", strict_inequality_at_half),
        ("d(rho_T) >= H(T) on random stochastic matrices", random_inequality_suite),
        ("channel -> rho_T -> channel round trip", round_trip),
        ("properties A, B, C", defining_properties),
        ("state channel extremality", state_channel_extremality),
        ("state channel entropy bound", state_channel_bound),
        ("eigensolver oracle", eigensolver_oracle),
        ("vertex enumeration vs grid oracle", vertex_vs_grid),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
