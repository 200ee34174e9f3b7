use deformed_pb::deformed::{exp_q, log_q, Regime};
use deformed_pb::ensemble::random_positive;
use deformed_pb::entropy::{tsallis_lower_bound, tsallis_relative_entropy};
use deformed_pb::harness::{run, GridPoint, RunConfig, Suite};
use deformed_pb::rng::TrialRng;

pub const MAX_POINTS: usize = 4096;
pub const MAX_TRIALS: u32 = 5000;
pub const MAX_DIM: usize = 16;

pub fn deformed_curves(q: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.clamp(2, MAX_POINTS);
    let mut out = Vec::with_capacity(3 * n);
    for k in 0..n {
        let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        out.push(x);
        out.push(exp_q(x, q).unwrap_or(f64::NAN));
        out.push(log_q(x, q).unwrap_or(f64::NAN));
    }
    out
}

pub fn slack_sweep(case: &str, q: f64, r: f64, dim: usize, trials: u32, seed: u64) -> Result<Vec<f64>, String> {
    let case = Regime::parse(case).ok_or_else(|| format!("unknown case `{case}`"))?;
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(format!("dimension must be between 1 and {MAX_DIM}"));
    }
    let mut cfg = RunConfig::new(Suite::Main(case));
    cfg.grid = vec![GridPoint::new(case.label(), q, r)];
    cfg.grid_name = "custom".into();
    cfg.dims = vec![dim];
    cfg.trials = u64::from(trials.min(MAX_TRIALS));
    cfg.seed = seed;
    let outcome = run(&cfg).map_err(|e| e.to_string())?;
    Ok(outcome
        .outcomes
        .iter()
        .map(|o| o.as_ref().map_or(f64::NAN, |rep| rep.slack))
        .collect())
}

pub fn tsallis_bound_curve(q: f64, dim: usize, seed: u64, n: usize) -> Result<Vec<f64>, String> {
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(format!("dimension must be between 1 and {MAX_DIM}"));
    }
    let n = n.clamp(2, MAX_POINTS);
    let mut rng = TrialRng::new(seed, 0, "demo-bound");
    let x = random_positive(dim, 0.05, 3.0, &mut rng);
    let y = random_positive(dim, 0.05, 3.0, &mut rng).scale(2.0);
    let d = tsallis_relative_entropy(&x, &y, q).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(1 + 2 * n);
    out.push(d);
    for k in 0..n {
        let p = q - 2.0 + 2.0 * k as f64 / (n - 1) as f64;
        out.push(p);
        out.push(tsallis_lower_bound(&x, &y, q, p).map_err(|e| e.to_string())?);
    }
    Ok(out)
}
