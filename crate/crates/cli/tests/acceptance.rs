//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Expected values come from the closed forms below, not
//! from the library.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temporal_bell::classical::{brute_force_search, reduced_fidelity, reduced_search, ReducedStrategy};
use temporal_bell::game::fidelity_monte_carlo;
use temporal_bell::inequalities::{
    dot_correlator, general_bound_search, general_lhs, maximize_chsh, maximize_mermin_temporal, violation_ratio,
    BoundMode, SignChoice,
};
use temporal_bell::quantum::{correlator, quantum_fidelity, run_protocol, BlochState, Direction, Vec3};
use temporal_bell::{Dyadic, InputSequence, Sign};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// `⌈n/2⌉`.
fn half_up(n: usize) -> u32 {
    n.div_ceil(2) as u32
}

/// `2^(1 - ⌈n/2⌉)`.
fn bound_oracle(n: usize) -> Dyadic {
    Dyadic::new(1, half_up(n) - 1)
}

/// Decodes input index bits as `(x_k, y'_k)` pairs and evaluates
/// `∏(-1)^y'_k · cos(π/2 Σx)` in floating point.
fn task_oracle(n: usize, index: u64) -> Option<i64> {
    let (mut xsum, mut ysign) = (0u32, 1i64);
    for k in 0..n {
        let code = (index >> (2 * k)) & 3;
        xsum += (code & 1) as u32;
        if code >> 1 == 1 {
            ysign = -ysign;
        }
    }
    (xsum % 2 == 0).then(|| ysign * (FRAC_PI_2 * xsum as f64).cos().round() as i64)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=12 {
        let r = reduced_search(n).expect("in capacity");
        if r.max_fidelity != bound_oracle(n) {
            bad.push(format!("n={n}: {} != {}", r.max_fidelity, bound_oracle(n)));
        }
    }
    let t = start.elapsed();
    let in_time = t < Duration::from_secs(60);
    verdict(
        bad.is_empty() && in_time,
        format!(
            "reduced max = 2^(1-⌈n/2⌉) for n = 1..12 in {:.2} s (< 60 s) {}",
            t.as_secs_f64(),
            bad.join("; ")
        ),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let brute = brute_force_search(n).expect("in capacity");
        let reduced = reduced_search(n).expect("in capacity");
        ok &= brute.max_fidelity == reduced.max_fidelity && brute.strategies_scanned == 2 << (8 * n);
        parts.push(format!(
            "n={n}: {} vs {} over {} machines",
            brute.max_fidelity, reduced.max_fidelity, brute.strategies_scanned
        ));
    }
    verdict(
        ok,
        format!("{} [{:.2} s]", parts.join(", "), start.elapsed().as_secs_f64()),
    )
}

fn criterion_3() -> Verdict {
    let worst = (1..=12)
        .map(|n| (quantum_fidelity(n).expect("in capacity") - 1.0).abs())
        .fold(0.0, f64::max);
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for n in 1..=10 {
        for index in 0..1u64 << (2 * n) {
            let Some(t) = task_oracle(n, index) else { continue };
            let seq = InputSequence::from_index(n, index).expect("valid index");
            checked += 1;
            if run_protocol(&seq).map(|s| s.value() as i64) != Ok(t) {
                mismatches += 1;
            }
        }
    }
    verdict(
        worst <= 1e-12 && mismatches == 0,
        format!(
            "max |F_q - 1| = {worst:.1e} (≤ 1e-12) for n = 1..12; protocol = task on {checked} promise inputs, {mismatches} mismatches"
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=12 {
        let expected = Dyadic::from_int(1 << (half_up(n) - 1));
        let got = violation_ratio(n).expect("in capacity");
        if got != expected {
            bad.push(format!("n={n}: {got} != {expected}"));
        }
    }
    let (r3, r11) = (violation_ratio(3).unwrap(), violation_ratio(11).unwrap());
    let ok = bad.is_empty() && r3 == Dyadic::from_int(2) && r11 == Dyadic::from_int(32);
    verdict(
        ok,
        format!(
            "ratio = 2^(⌈n/2⌉-1) for n = 1..12; n=3 → {r3}, n=11 → {r11} {}",
            bad.join("; ")
        ),
    )
}

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn random_ball(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v: Vec3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if dot3(&v, &v) <= 1.0 {
            return v;
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    loop {
        let v = random_ball(rng);
        if dot3(&v, &v) > 1e-4 {
            return Direction::normalized(v).expect("nonzero");
        }
    }
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut worst2, mut worst3, mut worst0) = (0.0f64, 0.0f64, 0.0f64);
    let zero = BlochState::new([0.0; 3]).unwrap();
    for _ in 0..1000 {
        let s = BlochState::new(random_ball(&mut rng)).unwrap();
        let [a, b, c] = [(); 3].map(|_| random_direction(&mut rng));
        let (av, bv, cv) = (a.vector(), b.vector(), c.vector());
        worst2 = worst2.max((correlator(&s, &[a, b]).unwrap() - dot3(&av, &bv)).abs());
        worst3 = worst3.max((correlator(&s, &[a, b, c]).unwrap() - dot3(&s.vector(), &av) * dot3(&bv, &cv)).abs());
        worst0 = worst0.max(correlator(&zero, &[a, b, c]).unwrap().abs());
    }
    verdict(
        worst2 <= 1e-12 && worst3 <= 1e-12 && worst0 <= 1e-12,
        format!("1000 instances: max |E2 - a·b| = {worst2:.1e}, max |E3 - (s·a)(b·c)| = {worst3:.1e}, max |E3(s=0)| = {worst0:.1e} (all ≤ 1e-12)"),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let chsh = maximize_chsh(dot_correlator);
    let mermin = maximize_mermin_temporal();
    let t = start.elapsed();
    let chsh_ok = (chsh.lhs - 2.0 * SQRT_2).abs() <= 1e-6;
    let mermin_ok = mermin.lhs <= 2.0 + 1e-6;
    let in_time = t < Duration::from_secs(300);
    verdict(
        chsh_ok && mermin_ok && in_time,
        format!(
            "CHSH max = {:.12} (2√2 ± 1e-6: {}); three-time max = {:.12} (≤ 2 + 1e-6: {}); {:.2} s (< 300 s)",
            chsh.lhs,
            if chsh_ok { "ok" } else { "no" },
            mermin.lhs,
            if mermin_ok { "ok" } else { "no" },
            t.as_secs_f64()
        ),
    )
}

/// Left-hand side for a reduced strategy `(s0, c)` with the signs carried by
/// the sign choice, summed over every input of length `n`.
fn lhs_oracle(s0: i64, c: &[[i64; 2]], n: usize) -> i64 {
    (0..1u64 << (2 * n))
        .filter_map(|index| {
            let t = task_oracle(n, index)?;
            let (mut signs, mut ys) = (1, 1);
            for (k, ck) in c.iter().enumerate() {
                let code = (index >> (2 * k)) & 3;
                signs *= ck[(code & 1) as usize];
                ys *= if code >> 1 == 1 { -1 } else { 1 };
            }
            Some(t * signs * s0 * ys)
        })
        .sum()
}

fn criterion_7() -> Verdict {
    let n = 3;
    let expected = 1i64 << ((n - 1) / 2 + n);
    let joint = general_bound_search(n, BoundMode::Joint).expect("in capacity");
    let mut identity_failures = 0;
    for enc in 0..1u64 << (2 * n + 1) {
        let r = ReducedStrategy::from_encoding(n, enc).unwrap();
        let bare = ReducedStrategy::new(r.s0(), vec![[Sign::Plus; 2]; n]).unwrap();
        let signs = SignChoice::new(r.signs().to_vec()).unwrap();
        let lhs = general_lhs(|s| bare.answer(s).unwrap(), &signs, n).unwrap();
        let scaled = reduced_fidelity(&r).unwrap().mul_pow2((2 * n - 1) as i32);
        let c: Vec<[i64; 2]> = r.signs().iter().map(|p| p.map(|s| s.value() as i64)).collect();
        if Dyadic::from_int(lhs) != scaled || lhs != lhs_oracle(r.s0().value() as i64, &c, n) {
            identity_failures += 1;
        }
    }
    verdict(
        joint.max_lhs == expected && identity_failures == 0,
        format!(
            "n=3: max over machines and signs = {} (expected {expected}); lhs = 2^n·2^(n-1)·F for all 128 reduced strategies: {} failures",
            joint.max_lhs, identity_failures
        ),
    )
}

fn criterion_8() -> Verdict {
    let (n, samples, seed) = (5, 100_000u64, 2024);
    let tol = 5.0 / (samples as f64).sqrt();
    let best = reduced_search(n).unwrap().reduced_argmax().unwrap();
    let q = fidelity_monte_carlo(|s| run_protocol(s).unwrap(), n, samples, seed).unwrap();
    let c = fidelity_monte_carlo(|s| best.answer(s).unwrap(), n, samples, seed).unwrap();
    let (q_exact, c_exact) = (1.0, bound_oracle(n).to_f64());
    verdict(
        (q.mean - q_exact).abs() <= tol && (c.mean - c_exact).abs() <= tol,
        format!(
            "n=5, 1e5 samples: quantum {} vs {q_exact}, classical {} vs {c_exact} (tol {tol:.4})",
            q.mean, c.mean
        ),
    )
}

fn run_cli(args: &[&str], threads: Option<&str>, env_threads: Option<&str>) -> (Vec<u8>, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_temporal-bell"));
    cmd.args(args)
        .args(["--seed", "12345", "--no-timing"])
        .env_remove("TEMPORAL_BELL_THREADS");
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    if let Some(t) = env_threads {
        cmd.env("TEMPORAL_BELL_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_9() -> Verdict {
    let runs: [&[&str]; 7] = [
        &["bound-sweep", "--n-min", "1", "--n-max", "9"],
        &["bound-sweep", "--n-min", "1", "--n-max", "9", "--format", "csv"],
        &["verify", "--n", "3"],
        &["protocol", "--n", "5", "--samples", "100000"],
        &["protocol", "--n", "7", "--samples", "50000", "--format", "csv"],
        &["correlators", "--s", "0.1,-0.2,0.3", "--dirs", "0,0,1;0.6,0,0.8;1,0,0"],
        &["chsh"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let reference = run_cli(args, Some("1"), None);
        let others = [
            run_cli(args, Some("2"), None),
            run_cli(args, Some("7"), None),
            run_cli(args, None, Some("3")),
        ];
        if reference.0.is_empty() || others.iter().any(|o| *o != reference) {
            differing.push(args.join(" "));
        }
    }
    verdict(
        differing.is_empty(),
        format!(
            "{} commands × threads 1/2/7/env 3: {}",
            runs.len(),
            if differing.is_empty() {
                "byte-identical".into()
            } else {
                format!("differ: {}", differing.join(", "))
            }
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Verdict;
    let criteria: [(&str, Check); 9] = [
        ("classical bound reproduction", criterion_1),
        ("reduction lemma by brute force", criterion_2),
        ("quantum fidelity", criterion_3),
        ("exponential violation", criterion_4),
        ("sequential correlators", criterion_5),
        ("CHSH landscape", criterion_6),
        ("odd-n inequality consistency", criterion_7),
        ("statistical consistency", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "{} {} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail.trim_end()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
