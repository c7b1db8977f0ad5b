use std::path::Path;
use std::time::Instant;

use temporal_bell::classical::{
    brute_force_search_resumable, classical_bound, reduced_search, BRUTE_FORCE_LONG_MAX_N, BRUTE_FORCE_MAX_N,
};
use temporal_bell::game::{fidelity_monte_carlo, EXACT_FIDELITY_MAX_N};
use temporal_bell::inequalities::{
    dot_correlator, maximize_chsh, maximize_mermin_temporal, violation_ratio, TSIRELSON,
};
use temporal_bell::quantum::{
    analytic_correlator, correlator, quantum_fidelity_exact, run_protocol, BlochState, Direction,
};
use temporal_bell::{Dyadic, Error};

use crate::output::{CorrelatorReport, GameReport, ProtocolReport, Record, SearchMode, VerifyReport};

/// Largest `n` a sweep reports on: the exact quantum fidelity is the binding
/// limit.
pub const SWEEP_MAX_N: usize = EXACT_FIDELITY_MAX_N;

/// Tolerance on `violation_ratio = quantum_fidelity / classical_bound`.
const RATIO_TOL: f64 = 1e-12;
/// Tolerance on the closed-form correlators.
const CORRELATOR_TOL: f64 = 1e-12;
/// Tolerance on the numerically located CHSH maximum.
const CHSH_TOL: f64 = 1e-6;

/// A command that could not run to completion.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Capacity(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            Error::NonDeterministic(_) | Error::Checkpoint(_) => CliError::Runtime(e.to_string()),
        }
    }
}

/// Records plus the verdicts of every check made while producing them.
#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub failures: Vec<String>,
    pub capacity_exceeded: bool,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Timing(pub bool);

impl Timing {
    fn ms(self, start: Instant) -> u64 {
        if self.0 {
            start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

fn game_report(
    n: usize,
    classical_max: Dyadic,
    mode: SearchMode,
    argmax: String,
    ms: u64,
) -> Result<GameReport, CliError> {
    Ok(GameReport {
        n,
        classical_max,
        classical_bound: classical_bound(n)?,
        quantum_fidelity: quantum_fidelity_exact(n)?.to_f64(),
        violation_ratio: violation_ratio(n)?,
        search_mode: mode,
        elapsed_ms: ms,
        argmax,
    })
}

fn check_game(out: &mut Outcome, g: &GameReport) {
    out.check(g.classical_max == g.classical_bound, || {
        format!(
            "n = {}: classical max {} differs from bound {}",
            g.n, g.classical_max, g.classical_bound
        )
    });
    let ratio = g.quantum_fidelity / g.classical_bound.to_f64();
    out.check((ratio - g.violation_ratio.to_f64()).abs() <= RATIO_TOL, || {
        format!(
            "n = {}: violation ratio {} but fidelity / bound = {ratio}",
            g.n, g.violation_ratio
        )
    });
}

pub fn bound_sweep(n_min: usize, n_max: usize, timing: Timing) -> Result<Outcome, CliError> {
    if n_min == 0 || n_min > n_max {
        return Err(CliError::Usage(format!(
            "need 1 <= n-min <= n-max, got {n_min}..{n_max}"
        )));
    }
    let mut out = Outcome::default();
    for n in n_min..=n_max {
        if n > SWEEP_MAX_N {
            out.capacity_exceeded = true;
            out.records.push(Record::CapacityError {
                n,
                message: format!("n = {n} exceeds the sweep capacity {SWEEP_MAX_N}"),
            });
            continue;
        }
        let start = Instant::now();
        let search = reduced_search(n)?;
        let g = game_report(n, search.max_fidelity, SearchMode::Reduced, search.argmax_hex(), 0)?;
        let g = GameReport {
            elapsed_ms: timing.ms(start),
            ..g
        };
        check_game(&mut out, &g);
        out.records.push(Record::Game(g));
    }
    Ok(out)
}

pub fn verify(n: usize, allow_long: bool, checkpoint: Option<&Path>, timing: Timing) -> Result<Outcome, CliError> {
    let limit = if allow_long {
        BRUTE_FORCE_LONG_MAX_N
    } else {
        BRUTE_FORCE_MAX_N
    };
    if n > limit {
        let hint = if allow_long {
            ""
        } else {
            " (pass --allow-long for n = 4)"
        };
        return Err(CliError::Capacity(format!(
            "brute force is limited to n <= {limit}{hint}, got {n}"
        )));
    }
    let start = Instant::now();
    let brute = brute_force_search_resumable(n, checkpoint)?;
    let reduced = reduced_search(n)?;
    let game = game_report(n, brute.max_fidelity, SearchMode::BruteForce, brute.argmax_hex(), 0)?;
    let game = GameReport {
        elapsed_ms: timing.ms(start),
        ..game
    };
    let mut out = Outcome::default();
    check_game(&mut out, &game);
    out.check(reduced.max_fidelity == brute.max_fidelity, || {
        format!(
            "n = {n}: reduced max {} differs from brute-force max {}",
            reduced.max_fidelity, brute.max_fidelity
        )
    });
    let pass = out.failures.is_empty();
    out.records.push(Record::Verify(VerifyReport {
        game,
        reduced_max: reduced.max_fidelity,
        pass,
    }));
    Ok(out)
}

pub fn protocol(n: usize, samples: u64, seed: u64) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let quantum = quantum_fidelity_exact(n)?;
    let best = reduced_search(n)?;
    let strategy = best.reduced_argmax().expect("reduced search yields a reduced strategy");
    let classical_answer = |s: &_| strategy.answer(s).expect("matching length");
    let quantum_answer = |s: &_| run_protocol(s).expect("samples satisfy the promise");

    let mut out = Outcome::default();
    let mut report = ProtocolReport {
        n,
        samples,
        seed,
        quantum_exact: quantum.to_string(),
        quantum_exact_f64: quantum.to_f64(),
        classical_exact: best.max_fidelity.to_string(),
        classical_exact_f64: best.max_fidelity.to_f64(),
        classical_strategy: best.argmax_hex(),
        quantum_empirical: None,
        classical_empirical: None,
        classical_std_error: None,
        tolerance: None,
        pass: true,
    };
    if samples > 0 {
        // Same seed, hence the same input stream, for both answers.
        let q = fidelity_monte_carlo(quantum_answer, n, samples, seed)?;
        let c = fidelity_monte_carlo(classical_answer, n, samples, seed)?;
        let tol = 5.0 / (samples as f64).sqrt();
        out.check(q.mean == quantum.to_f64(), || {
            format!("quantum empirical fidelity {} is not exact", q.mean)
        });
        out.check((c.mean - best.max_fidelity.to_f64()).abs() <= tol, || {
            format!(
                "classical empirical fidelity {} outside {tol} of {}",
                c.mean, best.max_fidelity
            )
        });
        report.quantum_empirical = Some(q.mean);
        report.classical_empirical = Some(c.mean);
        report.classical_std_error = Some(c.std_error);
        report.tolerance = Some(tol);
        report.pass = out.failures.is_empty();
    }
    out.records.push(Record::Protocol(report));
    Ok(out)
}

pub fn correlators(s: &BlochState, dirs: &[Direction]) -> Result<Outcome, CliError> {
    let exact = correlator(s, dirs)?;
    let analytic = analytic_correlator(s, dirs)?;
    let difference = exact - analytic;
    let mut out = Outcome::default();
    out.check(difference.abs() <= CORRELATOR_TOL, || {
        format!("chain and closed form differ by {difference}")
    });
    out.records.push(Record::Correlator(CorrelatorReport {
        s: s.vector(),
        dirs: dirs.iter().map(Direction::vector).collect(),
        exact,
        analytic,
        difference,
        pass: out.failures.is_empty(),
    }));
    Ok(out)
}

/// Locates the two-time maximum and the three-time maximum. The three-time
/// expression is checked not to exceed the two-time one: the chain-rule
/// correlator reaches the same `2√2`, no more.
pub fn chsh() -> Result<Outcome, CliError> {
    let two = maximize_chsh(dot_correlator);
    let three = maximize_mermin_temporal();
    let mut out = Outcome::default();
    out.check((two.lhs - TSIRELSON).abs() <= CHSH_TOL, || {
        format!("two-time maximum {} is not 2√2 within {CHSH_TOL}", two.lhs)
    });
    out.check(three.lhs <= two.lhs + CHSH_TOL, || {
        format!(
            "three-time maximum {} exceeds the two-time maximum {}",
            three.lhs, two.lhs
        )
    });
    out.records.push(Record::Inequality(two));
    out.records.push(Record::Inequality(three));
    Ok(out)
}
