//! Verification suites.
//!
//! Without `--scenario` each suite runs on the qubit presets and, where the
//! suite is statistical, on scenarios drawn from a seeded generator.

use clap::ValueEnum;

use quncert::dynamics::{check_conservation, default_fd_step, ehrenfest_residual_with, offset_invariance_check};
use quncert::hilbert::{HermitianObservable, QuantumState};
use quncert::random;
use quncert::toymodel::PRESET_NAMES;
use quncert::uncertainty::{
    ml_bounds, ml_tau_perp_default, qsl_tau, robertson, schrodinger, Extended, MtContext, Orthogonalization,
};
use quncert::{evolve_with_states, Error, Scenario};

use crate::error::CliError;
use crate::report::{Check, ReportDocument, Verdict};
use crate::scenario_file::{load_preset, sha256_hex, LoadedScenario};

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "QUNCERT_SEED";

pub const CONSERVATION_TOL: f64 = 1e-10;
pub const OFFSET_TOL: f64 = 1e-10;
pub const OFFSETS: [f64; 3] = [-5.0, 0.5, 7.3];
pub const EHRENFEST_TOL: f64 = 1e-8;
pub const EHRENFEST_RATIO: (f64, f64) = (3.5, 4.5);
/// Below this the residual is rounding, not truncation, and the halving
/// ratio carries no information.
pub const EHRENFEST_RATIO_FLOOR: f64 = 1e-10;
pub const SLACK_TOL: f64 = 1e-10;
pub const QSL_TOL: f64 = 1e-9;
pub const RANDOM_SCENARIOS: usize = 50;
pub const OFFSET_RANDOM_SCENARIOS: usize = 10;
pub const TRIPLES_PER_DIM: usize = 1000;
pub const RANDOM_DIMS: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    Conservation,
    Offset,
    Ehrenfest,
    Robertson,
    Schrodinger,
    Mt,
    Ml,
    Qsl,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Conservation,
        Suite::Offset,
        Suite::Ehrenfest,
        Suite::Robertson,
        Suite::Schrodinger,
        Suite::Mt,
        Suite::Ml,
        Suite::Qsl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conservation => "conservation",
            Suite::Offset => "offset",
            Suite::Ehrenfest => "ehrenfest",
            Suite::Robertson => "robertson",
            Suite::Schrodinger => "schrodinger",
            Suite::Mt => "mt",
            Suite::Ml => "ml",
            Suite::Qsl => "qsl",
            Suite::All => "all",
        }
    }
}

/// `--seed`, else `QUNCERT_SEED`, else 42.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(seed), _) => Ok(seed),
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{raw}`"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

struct Target {
    label: String,
    scenario: Scenario,
}

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    notes: Vec<String>,
}

fn preset_targets() -> Result<Vec<Target>, CliError> {
    PRESET_NAMES.iter().map(|name| load_preset(name).map(|l| Target { label: l.label, scenario: l.scenario })).collect()
}

fn random_targets(seed: u64, count: usize, observables: usize) -> Result<Vec<Target>, CliError> {
    let mut rng = random::rng(seed);
    let dims: Vec<usize> = RANDOM_DIMS.collect();
    (0..count)
        .map(|k| {
            let dim = dims[k % dims.len()];
            let h = random::hermitian(&mut rng, dim);
            let psi = random::state(&mut rng, dim);
            let obs = (0..observables).map(|j| (format!("a{j}"), random::hermitian(&mut rng, dim))).collect();
            let scenario = Scenario::with_default_grid(1.0, h, psi, obs)?;
            Ok(Target { label: format!("random{k}(dim={dim})"), scenario })
        })
        .collect()
}

fn targets(
    loaded: Option<&LoadedScenario>,
    seed: u64,
    random_count: usize,
    observables: usize,
) -> Result<Vec<Target>, CliError> {
    if let Some(l) = loaded {
        return Ok(vec![Target { label: l.label.clone(), scenario: l.scenario.clone() }]);
    }
    let mut all = preset_targets()?;
    all.extend(random_targets(seed, random_count, observables)?);
    Ok(all)
}

fn conservation(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        let report = check_conservation(&quncert::evolve(&t.scenario)?);
        for (name, drift) in report.drifts() {
            out.checks.push(Check::limit(format!("{}/{name}_drift", t.label), drift, CONSERVATION_TOL));
        }
    }
    Ok(out)
}

fn offset(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        for e0 in OFFSETS {
            let r = offset_invariance_check(&t.scenario, e0)?;
            out.checks.push(Check::limit(
                format!("{}/E0={e0}/series_difference", t.label),
                r.max_stat_difference,
                OFFSET_TOL,
            ));
            out.checks.push(Check::limit(
                format!("{}/E0={e0}/overlap_deviation", t.label),
                r.max_overlap_deviation,
                OFFSET_TOL,
            ));
        }
    }
    Ok(out)
}

fn ehrenfest(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        let s = &t.scenario;
        if s.observables().is_empty() {
            out.notes.push(format!("{}: no observables to check", t.label));
        }
        let evo = s.evolution()?;
        let h = default_fd_step(evo.spectrum(), s.hbar());
        let times = s.grid().times();
        for (name, a) in s.observables() {
            let (mut worst, mut worst_half) = (0.0f64, 0.0f64);
            for &time in &times {
                worst = worst.max(ehrenfest_residual_with(a, s, &evo, time, h)?);
                worst_half = worst_half.max(ehrenfest_residual_with(a, s, &evo, time, h / 2.0)?);
            }
            let base = format!("{}/{name}", t.label);
            out.checks
                .push(Check::limit(format!("{base}/residual"), worst, EHRENFEST_TOL).detail(format!("fd_step {h:e}")));
            if worst > EHRENFEST_RATIO_FLOOR {
                let ratio = worst / worst_half;
                out.checks.push(Check::bound(format!("{base}/halving_ratio_low"), ratio, EHRENFEST_RATIO.0, 0.0));
                out.checks.push(Check::bound(format!("{base}/halving_ratio_high"), EHRENFEST_RATIO.1, ratio, 0.0));
            } else {
                out.notes.push(format!("{base}: residual {worst:e} is at rounding level; halving ratio skipped"));
            }
        }
    }
    Ok(out)
}

struct Worst {
    robertson: Option<(f64, f64)>,
    schrodinger: Option<(f64, f64)>,
    ordering: Option<(f64, f64)>,
    violations: usize,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Self { robertson: None, schrodinger: None, ordering: None, violations: 0, count: 0 }
    }

    fn add(
        &mut self,
        a: &HermitianObservable<f64>,
        b: &HermitianObservable<f64>,
        psi: &QuantumState<f64>,
    ) -> Result<(), CliError> {
        let r = robertson(a, b, psi)?;
        let s = schrodinger(a, b, psi)?;
        let keep = |slot: &mut Option<(f64, f64)>, lhs: f64, rhs: f64| {
            if slot.map_or(true, |(l, r)| lhs - rhs < l - r) {
                *slot = Some((lhs, rhs));
            }
        };
        keep(&mut self.robertson, r.lhs, r.rhs);
        keep(&mut self.schrodinger, s.lhs, s.rhs);
        keep(&mut self.ordering, s.rhs, r.rhs);
        self.violations += usize::from(!r.satisfied) + usize::from(!s.satisfied);
        self.count += 1;
        Ok(())
    }

    fn checks(&self, base: &str, schrodinger_suite: bool) -> Vec<Check> {
        let detail = format!("worst of {} cases, {} violations", self.count, self.violations);
        let mut out = Vec::new();
        if schrodinger_suite {
            if let Some((l, r)) = self.schrodinger {
                out.push(Check::bound(format!("{base}/schrodinger"), l, r, SLACK_TOL).detail(detail));
            }
            if let Some((l, r)) = self.ordering {
                out.push(Check::bound(format!("{base}/schrodinger_rhs>=robertson_rhs"), l, r, 0.0));
            }
        } else if let Some((l, r)) = self.robertson {
            out.push(Check::bound(format!("{base}/robertson"), l, r, SLACK_TOL).detail(detail));
        }
        out
    }
}

fn uncertainty_pairs(loaded: Option<&LoadedScenario>, seed: u64, schrodinger_suite: bool) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match loaded {
        Some(l) => {
            let s = &l.scenario;
            let mut ops: Vec<(String, HermitianObservable<f64>)> = vec![("H".into(), s.hamiltonian().clone())];
            ops.extend(s.observables().iter().cloned());
            if ops.len() < 2 {
                out.notes.push(format!("{}: only H available; pairs are trivial", l.label));
            }
            let states = evolve_with_states(s)?.states.unwrap_or_default();
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    let mut w = Worst::new();
                    for psi in &states {
                        w.add(&ops[i].1, &ops[j].1, psi)?;
                    }
                    out.checks.extend(w.checks(&format!("{}/{},{}", l.label, ops[i].0, ops[j].0), schrodinger_suite));
                }
            }
        }
        None => {
            let mut rng = random::rng(seed);
            for dim in RANDOM_DIMS {
                let mut w = Worst::new();
                for _ in 0..TRIPLES_PER_DIM {
                    let a = random::hermitian(&mut rng, dim);
                    let b = random::hermitian(&mut rng, dim);
                    let psi = random::state(&mut rng, dim);
                    w.add(&a, &b, &psi)?;
                }
                out.checks.extend(w.checks(&format!("random(dim={dim})"), schrodinger_suite));
            }
        }
    }
    Ok(out)
}

fn mandelstam_tamm(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        let s = &t.scenario;
        for (name, a) in s.observables() {
            let base = format!("{}/{name}", t.label);
            let ctx = match MtContext::new(a, s) {
                Ok(ctx) => ctx,
                Err(e @ Error::EnergyEigenstate { .. }) => {
                    out.notes.push(format!("{base}: {e}"));
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            let mut min_product = f64::INFINITY;
            let mut flagged = 0usize;
            for time in s.grid().times() {
                match ctx.sample(time)?.product {
                    Extended::Finite(p) => min_product = min_product.min(p),
                    Extended::Infinite => flagged += 1,
                }
            }
            if min_product.is_finite() {
                out.checks.push(
                    Check::bound(format!("{base}/min_dE_dT>=hbar/2"), min_product, s.hbar() / 2.0, SLACK_TOL)
                        .detail(format!("{flagged} samples with vanishing rate")),
                );
            } else {
                out.notes.push(format!("{base}: expectation value is static; no finite time uncertainty"));
            }
        }
    }
    Ok(out)
}

enum TauPerp {
    Found(f64),
    Never(f64),
    Inconclusive { horizon: f64, min_overlap: f64 },
}

fn tau_perp(s: &Scenario) -> Result<TauPerp, CliError> {
    let evo = s.evolution()?;
    match ml_tau_perp_default(evo.spectrum(), evo.amplitudes(), s.hbar()) {
        Ok(r) => Ok(match r.kind {
            Orthogonalization::Found { tau_perp } => TauPerp::Found(tau_perp),
            Orthogonalization::NeverOrthogonal { min_overlap_bound } => TauPerp::Never(min_overlap_bound),
        }),
        Err(Error::Inconclusive { horizon, min_observed_overlap }) => {
            Ok(TauPerp::Inconclusive { horizon, min_overlap: min_observed_overlap })
        }
        Err(e) => Err(e.into()),
    }
}

fn inconclusive_check(name: String, horizon: f64, rhs: f64, min_overlap: f64) -> Check {
    Check::with_verdict(name, horizon, rhs, Verdict::Inconclusive)
        .detail(format!("no orthogonality up to t = {horizon}; smallest overlap seen {min_overlap:e}"))
}

fn margolus_levitin(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        let s = &t.scenario;
        let evo = s.evolution()?;
        let b = ml_bounds(evo.spectrum(), evo.amplitudes(), s.hbar())?;
        let (levi1, levi2) = (b.levi1.to_scalar(), b.levi2.to_scalar());
        let note = format!("levi2 with unshifted H = {}", b.levi2_unshifted);
        match tau_perp(s)? {
            TauPerp::Found(tau) => {
                out.checks.push(Check::bound(format!("{}/tau_perp>=levi1", t.label), tau, levi1, SLACK_TOL));
                out.checks
                    .push(Check::bound(format!("{}/tau_perp>=levi2", t.label), tau, levi2, SLACK_TOL).detail(note));
            }
            TauPerp::Never(bound) => out.checks.push(
                Check::with_verdict(
                    format!("{}/tau_perp", t.label),
                    f64::INFINITY,
                    levi1.max(levi2),
                    Verdict::NeverOrthogonal,
                )
                .detail(format!("overlap stays >= {bound}; {note}")),
            ),
            TauPerp::Inconclusive { horizon, min_overlap } => out.checks.push(inconclusive_check(
                format!("{}/tau_perp", t.label),
                horizon,
                levi1.max(levi2),
                min_overlap,
            )),
        }
    }
    Ok(out)
}

fn speed_limit(ts: &[Target]) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for t in ts {
        let s = &t.scenario;
        let evo = s.evolution()?;
        let qsl = qsl_tau(evo.spectrum(), evo.amplitudes(), s.hbar())?.to_scalar();
        let name = format!("{}/tau_perp>=tau_qsl", t.label);
        match tau_perp(s)? {
            TauPerp::Found(tau) => out.checks.push(Check::bound(name, tau, qsl, QSL_TOL)),
            TauPerp::Never(bound) => out.checks.push(
                Check::with_verdict(name, f64::INFINITY, qsl, Verdict::NeverOrthogonal)
                    .detail(format!("overlap stays >= {bound}")),
            ),
            TauPerp::Inconclusive { horizon, min_overlap } => {
                out.checks.push(inconclusive_check(name, horizon, qsl, min_overlap))
            }
        }
    }
    Ok(out)
}

fn run_one(suite: Suite, loaded: Option<&LoadedScenario>, seed: u64) -> Result<Outcome, CliError> {
    match suite {
        Suite::Conservation => conservation(&targets(loaded, seed, RANDOM_SCENARIOS, 0)?),
        Suite::Offset => offset(&targets(loaded, seed, OFFSET_RANDOM_SCENARIOS, 2)?),
        Suite::Ehrenfest => ehrenfest(&targets(loaded, seed, 0, 0)?),
        Suite::Robertson => uncertainty_pairs(loaded, seed, false),
        Suite::Schrodinger => uncertainty_pairs(loaded, seed, true),
        Suite::Mt => mandelstam_tamm(&targets(loaded, seed, 0, 0)?),
        Suite::Ml => margolus_levitin(&targets(loaded, seed, 0, 0)?),
        Suite::Qsl => speed_limit(&targets(loaded, seed, 0, 0)?),
        Suite::All => {
            let mut all = Outcome::default();
            for s in Suite::EACH {
                let o = run_one(s, loaded, seed)?;
                all.checks.extend(o.checks.into_iter().map(|mut c| {
                    c.name = format!("{}:{}", s.name(), c.name);
                    c
                }));
                all.notes.extend(o.notes.into_iter().map(|n| format!("{}: {n}", s.name())));
            }
            Ok(all)
        }
    }
}

/// Runs `suite` on `loaded`, or on the defaults when `None`.
pub fn run(suite: Suite, loaded: Option<&LoadedScenario>, seed: u64) -> Result<ReportDocument, CliError> {
    let outcome = run_one(suite, loaded, seed)?;
    let digest = match loaded {
        Some(l) => l.digest.clone(),
        None => sha256_hex(b"defaults"),
    };
    Ok(ReportDocument::new(suite.name(), digest, seed, outcome.checks, outcome.notes))
}
