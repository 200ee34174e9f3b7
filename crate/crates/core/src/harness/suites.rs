use rand::Rng;

use super::{EntropySuite, FrechetMethod, GridPoint, RunConfig, Suite, EXPLORATORY_NOTE};
use crate::convexity::Target;
use crate::deformed::{DomainConstraint, Regime};
use crate::ensemble::{gaussian_hermitian, general, generate, random_positive, random_state, EnsembleSpec};
use crate::entropy::{
    state_overlap_bound, tsallis_lower_bound, tsallis_relative_entropy, umegaki_relative_entropy, DensityPair,
};
use crate::error::{Error, Result};
use crate::frechet::{
    dfrechet_divided_difference, dfrechet_exp_q, dfrechet_finite_difference, dfrechet_log, dfrechet_log_q,
    dfrechet_power_integral, DeformedExp, DeformedLog, FnPair, FrechetResult, Power, SpectralFn,
};
use crate::matrix::{relative_frobenius, HermitianMatrix};
use crate::rng::TrialRng;
use crate::trace::{main_theorem_slack, variant_pb_slack, InequalityReport, PositiveFunctional};

type QuadratureRoute<'a> = Box<dyn Fn() -> Result<FrechetResult> + 'a>;

/// Pairwise relative Frobenius agreement required between Fréchet methods.
pub const FRECHET_TOL: f64 = 1e-5;
/// Size of the central finite-difference step, in the norm of `h`.
pub const FRECHET_STEP: f64 = 1e-4;

/// Evaluates trial `trial` of `cfg` from scratch.
pub fn evaluate_trial(cfg: &RunConfig, trial: u64) -> Result<InequalityReport> {
    let (pt, dim) = cfg.layout(trial);
    let mut rng = TrialRng::new(cfg.seed, trial, &cfg.suite.stream_tag());
    let rep = match cfg.suite {
        Suite::Main(case) => main_trial(cfg, case, pt, dim, trial, &mut rng)?,
        Suite::Variant(d) => {
            let a = random_positive(dim, 0.05, 5.0, &mut rng);
            let b = random_positive(dim, 0.05, 5.0, &mut rng);
            variant_pb_slack(d, &a, &b, pt.q, pt.r)?.with_tolerance(cfg.tol)
        }
        Suite::Convexity(kind) => {
            let target = Target::new(kind, pt.q, pt.r);
            let rep = target.midpoint_sample(dim, &mut rng)?.with_tolerance(cfg.tol);
            if target.row().is_none_or(|row| row.is_exploratory()) {
                rep.with_note(EXPLORATORY_NOTE)
            } else {
                rep
            }
        }
        Suite::Entropy(EntropySuite::Lemma) => lemma_trial(cfg, dim, &mut rng)?,
        Suite::Entropy(EntropySuite::Bound) => bound_trial(cfg, pt, dim, &mut rng)?,
        Suite::Entropy(EntropySuite::Limits) => limits_trial(cfg, dim, &mut rng)?,
        Suite::Frechet(method) => frechet_trial(cfg, method, pt, dim, &mut rng)?,
    };
    let mut rep = rep.with_trial(dim, cfg.seed, trial);
    rep.dim = dim;
    Ok(rep)
}

fn main_trial(
    cfg: &RunConfig,
    case: Regime,
    pt: &GridPoint,
    dim: usize,
    trial: u64,
    rng: &mut TrialRng,
) -> Result<InequalityReport> {
    let spec = EnsembleSpec::new(cfg.ensemble, DomainConstraint::for_q(pt.q));
    let a = generate(&spec, dim, rng);
    let c = generate(&spec, dim, rng);
    // A + B = (1 − t)A + tC stays in the (convex) domain
    let t = rng.random_range(1e-3f64.ln()..=0.0).exp();
    let b = &(&c - &a) * t;
    let phi = if case.trace_only() || trial.is_multiple_of(4) {
        PositiveFunctional::Trace
    } else {
        PositiveFunctional::Conjugated(general(dim, rng))
    };
    Ok(main_theorem_slack(case, &a, &b, pt.q, pt.r, &phi, &cfg.quadrature)?.with_tolerance(cfg.tol))
}

const LEMMA_POINTS: usize = 21;

fn random_pair(dim: usize, rng: &mut TrialRng) -> Result<DensityPair> {
    let rho = random_state(dim, rng);
    let sigma = random_state(dim, rng);
    DensityPair::new(rho, sigma)
}

fn lemma_trial(cfg: &RunConfig, dim: usize, rng: &mut TrialRng) -> Result<InequalityReport> {
    let pair = random_pair(dim, rng)?;
    let mut worst = (0.0, f64::NEG_INFINITY);
    for k in 0..LEMMA_POINTS {
        let p = k as f64 / (LEMMA_POINTS - 1) as f64;
        let v = state_overlap_bound(&pair, p)?;
        if v > worst.1 {
            worst = (p, v);
        }
    }
    Ok(InequalityReport::new("state-overlap", "lemma", worst.0, 0.0, 1.0, worst.1, false)
        .with_absolute_tolerance(cfg.tol))
}

fn bound_trial(cfg: &RunConfig, pt: &GridPoint, dim: usize, rng: &mut TrialRng) -> Result<InequalityReport> {
    let q = pt.q;
    let sx = rng.random_range(0.1f64.ln()..=10f64.ln()).exp();
    let sy = rng.random_range(0.1f64.ln()..=10f64.ln()).exp();
    let x = random_positive(dim, 0.05, 3.0, rng).scale(sx);
    let y = random_positive(dim, 0.05, 3.0, rng).scale(sy);
    let p = rng.random_range(q - 1.0..=q);
    let d = tsallis_relative_entropy(&x, &y, q)?;
    let bound = tsallis_lower_bound(&x, &y, q, p)?;
    Ok(InequalityReport::new("tsallis-lower-bound", "bound", q, p, d, bound, false).with_tolerance(cfg.tol))
}

/// `|D_p − U|` must decrease along `p = 0.9, 0.99, 0.999`.
fn limits_trial(cfg: &RunConfig, dim: usize, rng: &mut TrialRng) -> Result<InequalityReport> {
    let pair = random_pair(dim, rng)?;
    let u = umegaki_relative_entropy(pair.rho(), pair.sigma())?;
    let errs = [0.9, 0.99, 0.999]
        .iter()
        .map(|&p| tsallis_relative_entropy(pair.rho(), pair.sigma(), p).map(|d| (d - u).abs()))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = InequalityReport::new("tsallis-limit", "limits", 0.999, 1.0, errs[0], errs[2], false);
    rep.slack = (errs[0] - errs[1]).min(errs[1] - errs[2]);
    Ok(rep.with_absolute_tolerance(cfg.tol))
}

fn frechet_trial(
    cfg: &RunConfig,
    method: FrechetMethod,
    pt: &GridPoint,
    dim: usize,
    rng: &mut TrialRng,
) -> Result<InequalityReport> {
    let param = pt.q;
    let label = pt.label.as_str();
    let x = match label {
        "exp_q" => generate(&EnsembleSpec::new(cfg.ensemble, DomainConstraint::for_q(param)), dim, rng),
        _ => random_positive(dim, 0.1, 4.0, rng),
    };
    let h = gaussian_hermitian(dim, rng);
    let spec = &cfg.quadrature;
    let (f, quad): (Box<dyn SpectralFn>, QuadratureRoute) = match label {
        "power" => (Box::new(Power(param)), Box::new(|| dfrechet_power_integral(&x, &h, param, spec))),
        "log" => (
            Box::new(FnPair(f64::ln, |t: f64| 1.0 / t)),
            Box::new(|| dfrechet_log(&x, &h, spec)),
        ),
        "log_q" => (Box::new(DeformedLog(param)), Box::new(|| dfrechet_log_q(&x, &h, param, spec))),
        "exp_q" => (Box::new(DeformedExp(param)), Box::new(|| dfrechet_exp_q(&x, &h, param, spec))),
        other => return Err(Error::Invalid(format!("unknown Fréchet grid function `{other}`"))),
    };
    let fd = dfrechet_finite_difference(&x, &h, f.as_ref(), FRECHET_STEP)?;
    let mut note = None;
    let err = match method {
        FrechetMethod::DividedDifference => {
            relative_frobenius(&dfrechet_divided_difference(&x, &h, f.as_ref())?.value, &fd)
        }
        FrechetMethod::Quadrature => {
            let q = quad()?;
            note = Some(format!("{:?}", q.method));
            relative_frobenius(&q.value, &fd)
        }
        FrechetMethod::Both => {
            let dd = dfrechet_divided_difference(&x, &h, f.as_ref())?.value;
            let q = quad()?;
            note = Some(format!("{:?}", q.method));
            relative_frobenius(&dd, &fd)
                .max(relative_frobenius(&q.value, &fd))
                .max(relative_frobenius(&q.value, &dd))
        }
    };
    let rep = InequalityReport::new(&format!("frechet-{label}"), method.label(), param, 0.0, err, cfg.tol, true)
        .with_absolute_tolerance(0.0);
    Ok(match note {
        Some(n) => rep.with_note(n),
        None => rep,
    })
}

/// Evaluates `cfg`'s inequality once per grid point on the given matrices,
/// with the trace as positive functional.
pub fn run_single(cfg: &RunConfig, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Vec<InequalityReport>> {
    cfg.validate()?;
    cfg.grid
        .iter()
        .map(|pt| {
            let rep = match cfg.suite {
                Suite::Main(case) => {
                    main_theorem_slack(case, a, b, pt.q, pt.r, &PositiveFunctional::Trace, &cfg.quadrature)?
                }
                Suite::Variant(d) => variant_pb_slack(d, a, b, pt.q, pt.r)?,
                _ => {
                    return Err(Error::Invalid(
                        "single-instance checks are available for the main and variant suites".into(),
                    ))
                }
            };
            Ok(rep.with_tolerance(cfg.tol).with_trial(a.dim(), cfg.seed, 0))
        })
        .collect()
}
