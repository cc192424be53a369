//! Brute-force oracles and synthetic fixtures shared by the integration tests.
//!
//! The oracles deliberately avoid the library's solvers: permutations are
//! enumerated exhaustively, DTW paths are enumerated explicitly and nearest
//! neighbours come from a full sort.
#![allow(dead_code)]

use flexdist::numeric::exact_sum;
use flexdist::{distance, CostMatrix, Measure, TimeSeries};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Minimum-cost permutation by exhaustive search in lexicographic order.
///
/// Totals are compared exactly: candidates whose naive sums are close to the
/// incumbent are settled by the sign of the exact difference, so the first
/// (lexicographically smallest) permutation of exactly minimal cost wins.
pub fn brute_force_lsap(c: &CostMatrix) -> (f64, Vec<usize>) {
    let m = c.dim();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm = Vec::with_capacity(m);
    let mut used = vec![false; m];
    dfs(c, &mut perm, &mut used, 0.0, &mut best);
    let (_, p) = best.expect("at least one permutation");
    let total = exact_sum(p.iter().enumerate().map(|(i, &j)| c.get(i, j)));
    (total, p)
}

fn dfs(c: &CostMatrix, perm: &mut Vec<usize>, used: &mut [bool], naive: f64, best: &mut Option<(f64, Vec<usize>)>) {
    let m = c.dim();
    let row = perm.len();
    if row == m {
        let better = match best {
            None => true,
            Some((b, bp)) => {
                let margin = 1e-9 * (1.0 + b.abs());
                if naive < *b - margin {
                    true
                } else if naive > *b + margin {
                    false
                } else {
                    let diff = exact_sum(
                        perm.iter()
                            .enumerate()
                            .map(|(i, &j)| c.get(i, j))
                            .chain(bp.iter().enumerate().map(|(i, &j)| -c.get(i, j))),
                    );
                    diff < 0.0
                }
            }
        };
        if better {
            *best = Some((naive, perm.clone()));
        }
        return;
    }
    for j in 0..m {
        if !used[j] {
            used[j] = true;
            perm.push(j);
            dfs(c, perm, used, naive + c.get(row, j), best);
            perm.pop();
            used[j] = false;
        }
    }
}

/// Minimum over all monotone warping paths of the accumulated squared
/// differences, summed from the start of the path.
pub fn brute_force_dtw(x: &[f64], y: &[f64]) -> f64 {
    fn walk(x: &[f64], y: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let d = x[i] - y[j];
        let acc = acc + d * d;
        let (m, n) = (x.len(), y.len());
        if i == m - 1 && j == n - 1 {
            *best = best.min(acc);
            return;
        }
        if i + 1 < m && j + 1 < n {
            walk(x, y, i + 1, j + 1, acc, best);
        }
        if i + 1 < m {
            walk(x, y, i + 1, j, acc, best);
        }
        if j + 1 < n {
            walk(x, y, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(x, y, 0, 0, 0.0, &mut best);
    best.sqrt()
}

/// KNN by sorting every training distance; same tie rules as the library.
pub fn naive_knn(query: &[f64], train: &[(String, Vec<f64>)], k: usize, measure: &Measure) -> String {
    let mut all: Vec<(f64, usize)> =
        train.iter().enumerate().map(|(i, (_, v))| (distance(measure, query, v).unwrap(), i)).collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut classes: Vec<&str> = Vec::new();
    for (l, _) in train {
        if !classes.contains(&l.as_str()) {
            classes.push(l);
        }
    }
    let mut tally: Vec<(usize, f64)> = vec![(0, 0.0); classes.len()];
    for &(d, i) in &all[..k] {
        let c = classes.iter().position(|&c| c == train[i].0).unwrap();
        tally[c].0 += 1;
        tally[c].1 += d;
    }
    let mut best = 0;
    for c in 1..classes.len() {
        let (n, s) = tally[c];
        let (bn, bs) = tally[best];
        if n > bn || (n == bn && s < bs) {
            best = c;
        }
    }
    classes[best].to_owned()
}

/// Nearest-neighbour profile by a plain double loop.
pub fn naive_profile(days: &[Vec<f64>], measure: &Measure) -> (Vec<f64>, Vec<usize>) {
    let n = days.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut idx = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let d = distance(measure, &days[a], &days[b]).unwrap();
            if d < dist[a] {
                dist[a] = d;
                idx[a] = b;
            }
        }
    }
    (dist, idx)
}

pub type Named = (String, Vec<f64>);

pub fn uniform_vec(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn ts(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new(values).unwrap()
}

fn bell(t: f64, centre: f64, width: f64) -> f64 {
    (-0.5 * ((t - centre) / width).powi(2)).exp()
}

/// Net load of a PV household on a half-hourly grid, with a midday export
/// trough between morning and evening peaks.
pub fn duck_day(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let shift = rng.gen_range(-0.5..0.5);
    let solar = rng.gen_range(0.85..1.1);
    let evening = rng.gen_range(2.2..2.8);
    (0..48)
        .map(|k| {
            let h = k as f64 / 2.0;
            0.6 + 1.2 * bell(h, 7.5 + shift, 1.0) + evening * bell(h, 19.0 + shift, 1.5)
                - 2.0 * solar * bell(h, 12.5, 2.5)
                + rng.gen_range(-0.1..0.1)
        })
        .collect()
}

pub struct DuckCorpus {
    pub days: Vec<Vec<f64>>,
    pub flat_day: usize,
    pub duplicate_of: (usize, usize),
}

/// 29 jittered duck days, one flat day at index 17, and a near-copy of day 3
/// appended as day 30.
pub fn duck_corpus(rng: &mut ChaCha8Rng) -> DuckCorpus {
    let mut days: Vec<Vec<f64>> = (0..29).map(|_| duck_day(rng)).collect();
    let mean = days[0].iter().sum::<f64>() / 48.0;
    days.insert(17, vec![mean; 48]);
    let dup: Vec<f64> = days[3].iter().map(|v| v + rng.gen_range(-1e-3..1e-3)).collect();
    days.push(dup);
    DuckCorpus { days, flat_day: 17, duplicate_of: (3, 30) }
}

/// Three classes of 24-slot days carrying the same one-slot pulse, centred
/// near slot 6, 12 or 18 with ±3 slots of positional jitter and additive
/// noise. Pulses of different days rarely overlap, which is where ED stops
/// seeing how far apart they are.
pub fn shifted_pulse_set(rng: &mut ChaCha8Rng, per_class: usize) -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::new();
    for _ in 0..per_class {
        for (c, centre) in [6usize, 12, 18].into_iter().enumerate() {
            let pos = (centre as i64 + rng.gen_range(-3..=3)) as usize;
            let v: Vec<f64> = (0..24)
                .map(|k| {
                    let pulse = if k == pos { 3.0 } else { 0.0 };
                    0.3 + pulse + rng.gen_range(-0.15..0.15)
                })
                .collect();
            out.push((format!("class_{c}"), v));
        }
    }
    out
}

pub fn labeled(rows: &[(String, Vec<f64>)]) -> flexdist::classify::LabeledSet {
    flexdist::classify::LabeledSet::new(rows.iter().map(|(l, v)| ts(v.clone()).with_label(l.clone())).collect())
        .unwrap()
}

pub fn pulse_day(slots: &[usize]) -> Vec<f64> {
    (0..24).map(|k| if slots.contains(&k) { 2.5 } else { 0.5 }).collect()
}

/// Original, ideal and three rescheduling scenarios on a 24-slot day.
///
/// The original has pulses at slots 4 and 16; the ideal moves the slot-16
/// pulse to slot 8. Scenario A moves the slot-4 pulse to slot 8 instead.
/// Scenarios B and C move the slot-16 pulse towards slot 8 but stop at slot
/// 11 and slot 13. Every scenario leaves exactly two slots mismatched against
/// the ideal, so ED cannot tell them apart.
pub fn two_pulse_fixture() -> (Vec<f64>, Vec<f64>, Vec<Named>) {
    let original = pulse_day(&[4, 16]);
    let ideal = pulse_day(&[4, 8]);
    let scenarios = vec![
        ("A_wrong_pulse".to_owned(), pulse_day(&[8, 16])),
        ("B_shift_to_11".to_owned(), pulse_day(&[4, 11])),
        ("C_shift_to_13".to_owned(), pulse_day(&[4, 13])),
    ];
    (original, ideal, scenarios)
}
