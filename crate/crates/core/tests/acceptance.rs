//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Run alone with `cargo test -p flexdist --test acceptance`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use flexdist::bench::{loglog_slope, time_measures};
use flexdist::classify::{evaluate, knn_classify};
use flexdist::discord::{find_discord, matrix_profile, matrix_profile_all_pairs, DayMatrix};
use flexdist::lsap::{solve, solve_with_duals};
use flexdist::schedule::{rank_scenarios, ScenarioSet};
use flexdist::{dtw, euclidean, fd_cost_matrix, flexibility_distance, CostMatrix, FdWeights, Measure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fd_default(x: &[f64], y: &[f64]) -> (f64, Vec<usize>) {
    let (d, a) = flexibility_distance(x, y, &FdWeights::default()).unwrap();
    (d, a.target_of().to_vec())
}

/// FD under the default weights equals exhaustive search, bit for bit.
fn fd_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut pairs = 0;
    for m in 2..=8 {
        for _ in 0..500 {
            let x = uniform_vec(&mut r, m, 0.0, 20.0);
            let y = uniform_vec(&mut r, m, 0.0, 20.0);
            let c = fd_cost_matrix(&x, &y, &FdWeights::default()).unwrap();
            let (want, want_perm) = brute_force_lsap(&c);
            let (got, got_perm) = fd_default(&x, &y);
            ensure!(got == want, "m={m}: FD {got:e} != oracle {want:e} for x={x:?} y={y:?}");
            ensure!(got_perm == want_perm, "m={m}: assignment {got_perm:?} != oracle {want_perm:?}");
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s (limit 60s)");
    Ok(format!("{pairs} pairs, m in 2..=8, exact equality, {secs:.2}s"))
}

/// Non-negativity, identity, symmetry, bijection, temporal sensitivity,
/// optimality and (constant-weight) triangle inequality.
fn metric_axioms() -> Outcome {
    let mut r = rng(2);
    let w = FdWeights::default();
    let trials = 1000;
    for t in 0..trials {
        let m = r.gen_range(1..=32);
        let x = uniform_vec(&mut r, m, 0.0, 20.0);
        // every fourth pair is a light perturbation of x, some exactly equal
        let y = if t % 4 == 0 {
            let mut y = x.clone();
            if t % 8 == 0 {
                let k = r.gen_range(0..m);
                y[k] += r.gen_range(-1.0..1.0);
            }
            y
        } else {
            uniform_vec(&mut r, m, 0.0, 20.0)
        };

        let (dxy, a) = flexibility_distance(&x, &y, &w).unwrap();
        let (dyx, _) = flexibility_distance(&y, &x, &w).unwrap();
        ensure!(dxy >= 0.0, "negative FD {dxy}");
        ensure!((dxy - dyx).abs() <= 1e-9, "asymmetric: {dxy} vs {dyx}");
        let (dxx, axx) = flexibility_distance(&x, &x, &w).unwrap();
        ensure!(dxx == 0.0 && axx.is_identity(), "FD(x,x) = {dxx}");
        if dxy < 1e-12 {
            ensure!(x == y, "FD = {dxy} for distinct series");
        }
        let mut seen = vec![false; m];
        for &j in a.target_of() {
            ensure!(j < m && !seen[j], "assignment is not a bijection: {:?}", a.target_of());
            seen[j] = true;
        }

        // temporal sensitivity: a unique nonzero sample moved elsewhere
        if m >= 2 {
            let v = r.gen_range(0.1..20.0);
            let from = r.gen_range(0..m);
            let to = (from + r.gen_range(1..m)) % m;
            let mut p = vec![0.0; m];
            let mut q = vec![0.0; m];
            p[from] = v;
            q[to] = v;
            let (d, _) = flexibility_distance(&p, &q, &w).unwrap();
            ensure!(d > 0.0, "impulse moved {from}->{to} has FD 0");
        }
    }

    // optimality against exhaustive search on small sizes
    for _ in 0..trials {
        let m = r.gen_range(1..=7);
        let x = uniform_vec(&mut r, m, 0.0, 20.0);
        let y = uniform_vec(&mut r, m, 0.0, 20.0);
        let (want, _) = brute_force_lsap(&fd_cost_matrix(&x, &y, &w).unwrap());
        ensure!(fd_default(&x, &y).0 == want, "not optimal for x={x:?} y={y:?}");
    }

    // triangle inequality, constant temporal weight
    let mut maxmin_violations = 0;
    for _ in 0..trials {
        let m = r.gen_range(1..=24);
        let wc = FdWeights::constant_temporal(r.gen_range(0.0..3.0)).unwrap();
        let x = uniform_vec(&mut r, m, 0.0, 20.0);
        let y = uniform_vec(&mut r, m, 0.0, 20.0);
        let z = uniform_vec(&mut r, m, 0.0, 20.0);
        let f = |a: &[f64], b: &[f64], w: &FdWeights| flexibility_distance(a, b, w).unwrap().0;
        let (xy, xz, zy) = (f(&x, &y, &wc), f(&x, &z, &wc), f(&z, &y, &wc));
        ensure!(xy <= xz + zy + 1e-9, "triangle violated: {xy} > {xz} + {zy}");
        if f(&x, &y, &w) > f(&x, &z, &w) + f(&z, &y, &w) + 1e-9 {
            maxmin_violations += 1;
        }
    }
    Ok(format!(
        "{trials} instances per axiom; max-min mode triangle violations (informational): {maxmin_violations}/{trials}"
    ))
}

/// Shifted impulse: DTW blind, ED sqrt(288), FD 6 with the swap assignment.
fn baseline_defects() -> Outcome {
    let x = [0.0, 12.0, 0.0, 0.0];
    let y = [0.0, 0.0, 12.0, 0.0];
    let d = dtw(&x, &y).unwrap().distance;
    ensure!(d == 0.0 && x != y, "DTW = {d}");
    let e = euclidean(&x, &y).unwrap();
    ensure!(e == 288f64.sqrt(), "ED = {e}");
    let (f, a) = fd_default(&x, &y);
    ensure!(f == 6.0, "FD = {f}");
    ensure!(a == [0, 2, 1, 3], "assignment {a:?}");
    Ok(format!("DTW 0, ED {e:.4}, FD 6 via 0→0 1→2 2→1 3→3"))
}

fn sorted_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    xs.iter().zip(&ys).map(|(a, b)| (a - b).abs()).sum()
}

fn zero_temporal_reduction() -> Outcome {
    let mut r = rng(4);
    let w = FdWeights::constant_temporal(0.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let m = r.gen_range(1..=64);
        let x = uniform_vec(&mut r, m, 0.0, 20.0);
        let y = uniform_vec(&mut r, m, 0.0, 20.0);
        let (d, _) = flexibility_distance(&x, &y, &w).unwrap();
        let want = sorted_abs_diff(&x, &y);
        worst = worst.max((d - want).abs());
        ensure!((d - want).abs() <= 1e-9, "m={m}: FD {d} vs sorted {want}");
    }
    Ok(format!("500 pairs, m <= 64, max deviation {worst:.1e}"))
}

fn flat_series_reduction() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for t in 0..200 {
        let m = r.gen_range(1..=48);
        let x = uniform_vec(&mut r, m, 0.0, 20.0);
        let c = r.gen_range(0.0..20.0);
        let y = vec![c; m];
        let (a, b) = if t % 2 == 0 { (&x, &y) } else { (&y, &x) };
        let (d, _) = fd_default(a, b);
        let want: f64 = x.iter().map(|v| (v - c).abs()).sum();
        worst = worst.max((d - want).abs());
        ensure!((d - want).abs() <= 1e-9, "m={m}: FD {d} vs diagonal {want}");
    }
    Ok(format!("200 instances, max deviation {worst:.1e}"))
}

fn lsap_solver() -> Outcome {
    let mut r = rng(6);
    let mut n = 0;
    for k in 0..600 {
        let m = r.gen_range(1..=8);
        // a third of the matrices use small integers so ties are common
        let entries: Vec<f64> = if k % 3 == 0 {
            (0..m * m).map(|_| r.gen_range(0..4) as f64).collect()
        } else {
            (0..m * m).map(|_| r.gen_range(0.0..100.0)).collect()
        };
        let c = CostMatrix::from_row_major(m, entries).unwrap();
        let (want, want_perm) = brute_force_lsap(&c);
        let sol = solve_with_duals(&c).unwrap();
        ensure!(sol.assignment.total_cost() == want, "cost {} != {want}", sol.assignment.total_cost());
        ensure!(
            sol.assignment.target_of() == want_perm.as_slice(),
            "tie-break {:?} != {want_perm:?}",
            sol.assignment.target_of()
        );
        for i in 0..m {
            for j in 0..m {
                let slack = c.get(i, j) - sol.row_potentials[i] - sol.col_potentials[j];
                ensure!(slack >= -1e-9, "dual infeasible at ({i},{j}): {slack}");
                if sol.assignment.target_of()[i] == j {
                    ensure!(slack.abs() <= 1e-9, "selected ({i},{j}) not tight: {slack}");
                }
            }
        }
        n += 1;
    }
    for m in 1..=12 {
        let a = solve(&CostMatrix::from_fn(m, |_, _| 7.0).unwrap()).unwrap();
        ensure!(a.is_identity() && a.total_cost() == 7.0 * m as f64, "all-equal m={m}: {:?}", a.target_of());
    }
    Ok(format!("{n} matrices match exhaustive search incl. tie-break; duals certify; all-equal → identity"))
}

fn discord_detection() -> Outcome {
    let corpus = duck_corpus(&mut rng(7));
    let days = DayMatrix::from_days(corpus.days.iter().map(|d| ts(d.clone())).collect()).unwrap();
    ensure!(days.len() == 31, "corpus has {} days", days.len());
    let fd = Measure::fd();
    let profile = matrix_profile(&days, &fd).unwrap();
    let (want_d, want_i) = naive_profile(&corpus.days, &fd);
    ensure!(profile.nn_distance == want_d, "profile distances differ from all-pairs oracle");
    ensure!(profile.nn_index == want_i, "profile indices differ from all-pairs oracle");
    ensure!(matrix_profile_all_pairs(&days, &fd).unwrap() == profile, "symmetric shortcut changed the profile");
    let discord = find_discord(&profile).unwrap();
    ensure!(discord.day == corpus.flat_day, "FD discord is day {} (flat day is {})", discord.day, corpus.flat_day);
    let (a, b) = corpus.duplicate_of;
    ensure!(profile.nn_index[a] == b && profile.nn_index[b] == a, "near-duplicate days are not mutual neighbours");
    Ok(format!("31-day corpus: FD discord = day {} (nn distance {:.3})", discord.day, discord.nn_distance))
}

fn knn_classification() -> Outcome {
    let mut r = rng(8);
    let measures = [Measure::Euclidean, Measure::Dtw, Measure::fd()];
    let train: Vec<(String, Vec<f64>)> =
        (0..30).map(|i| (format!("c{}", i % 4), uniform_vec(&mut r, 12, 0.0, 5.0))).collect();
    let set = labeled(&train);
    for q in 0..200 {
        let query = uniform_vec(&mut r, 12, 0.0, 5.0);
        let measure = &measures[q % 3];
        let got = knn_classify(&query, &set, 5, measure).unwrap().label;
        let want = naive_knn(&query, &train, 5, measure);
        ensure!(got == want, "query {q} ({measure}): {got} vs oracle {want}");
    }

    let train = shifted_pulse_set(&mut r, 6);
    let test = shifted_pulse_set(&mut r, 30);
    let (train_set, test_set) = (labeled(&train), labeled(&test));
    let acc = |m: &Measure| evaluate(&test_set, &train_set, 5, m).unwrap().confusion.accuracy();
    let (fd_acc, ed_acc) = (acc(&Measure::fd()), acc(&Measure::Euclidean));
    // cross-check the headline accuracies with the oracle classifier
    for (m, a) in [(Measure::fd(), fd_acc), (Measure::Euclidean, ed_acc)] {
        let hits = test.iter().filter(|(l, v)| naive_knn(v, &train, 5, &m) == *l).count();
        ensure!(hits as f64 / test.len() as f64 == a, "{m} accuracy disagrees with oracle");
    }
    ensure!(fd_acc > ed_acc, "FD accuracy {fd_acc:.3} not above ED {ed_acc:.3}");
    Ok(format!("200 queries match oracle; shifted pulses k=5: FD {fd_acc:.3} > ED {ed_acc:.3}"))
}

fn scheduling() -> Outcome {
    let (original, ideal, scenarios) = two_pulse_fixture();
    let set = ScenarioSet::new(
        ts(original),
        ts(ideal.clone()),
        scenarios.iter().map(|(n, v)| (n.clone(), ts(v.clone()))).collect(),
    )
    .unwrap();

    let ed = rank_scenarios(&set, &Measure::Euclidean).unwrap();
    let ed_a = ed.rows.iter().find(|r| r.name.starts_with('A')).unwrap().distance;
    let ed_b = ed.rows.iter().find(|r| r.name.starts_with('B')).unwrap().distance;
    ensure!(ed_a == ed_b, "ED does not tie: A {ed_a} vs B {ed_b}");

    let fd = rank_scenarios(&set, &Measure::fd()).unwrap();
    let fd_of = |p: char| fd.rows.iter().find(|r| r.name.starts_with(p)).unwrap().distance;
    let (fd_a, fd_b) = (fd_of('A'), fd_of('B'));
    ensure!(fd_b < fd_a, "FD does not prefer B: A {fd_a} vs B {fd_b}");
    ensure!(fd.rows[0].name.starts_with('B'), "FD rank 1 is {}", fd.rows[0].name);

    // independent check: A's dual bound already exceeds B's achieved cost
    let dual_bound = |v: &[f64]| {
        let sol = solve_with_duals(&fd_cost_matrix(v, &ideal, &FdWeights::default()).unwrap()).unwrap();
        sol.row_potentials.iter().sum::<f64>() + sol.col_potentials.iter().sum::<f64>()
    };
    let a_bound = dual_bound(&scenarios[0].1);
    ensure!(fd_b < a_bound - 1e-9, "dual bound for A ({a_bound}) does not exceed FD(B) ({fd_b})");
    ensure!((a_bound - fd_a).abs() <= 1e-9, "A's dual bound {a_bound} is not tight with FD {fd_a}");
    Ok(format!("ED ties A = B = {ed_a:.4}; FD prefers B ({fd_b:.4}) over A ({fd_a:.4})"))
}

fn performance() -> Outcome {
    let fd = Measure::fd();
    let at96 = time_measures(&[fd, Measure::Dtw, Measure::Euclidean], &[96], 41, 10).unwrap();
    let (t_fd, t_dtw, t_ed) = (at96[0].median_ms, at96[1].median_ms, at96[2].median_ms);
    ensure!(t_fd <= 100.0, "FD median {t_fd:.3} ms > 100 ms");
    ensure!(t_dtw <= 50.0, "DTW median {t_dtw:.3} ms > 50 ms");
    ensure!(t_ed <= 5.0, "ED median {t_ed:.4} ms > 5 ms");
    ensure!(t_ed <= t_fd, "ED slower than FD");

    let scaling = time_measures(&[fd], &[24, 48, 96, 192], 21, 11).unwrap();
    let pts: Vec<(usize, f64)> = scaling.iter().map(|t| (t.size, t.median_ms)).collect();
    let slope = loglog_slope(&pts);
    ensure!(slope <= 3.5, "FD log-log slope {slope:.2} > 3.5");
    Ok(format!("m=96 medians: FD {t_fd:.3} ms, DTW {t_dtw:.3} ms, ED {t_ed:.4} ms; FD slope {slope:.2}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("FD-oracle equivalence", fd_oracle_equivalence),
        ("metric-axiom suite", metric_axioms),
        ("baseline-defect fixtures", baseline_defects),
        ("zero-temporal-weight reduction", zero_temporal_reduction),
        ("flat-series reduction", flat_series_reduction),
        ("LSAP solver", lsap_solver),
        ("discord detection", discord_detection),
        ("KNN classification", knn_classification),
        ("scenario scheduling", scheduling),
        ("performance gate", performance),
    ];

    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
