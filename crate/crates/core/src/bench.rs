//! Wall-clock timing of the distance measures on random series.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{distance, Measure};

pub const DEFAULT_SIZES: &[usize] = &[24, 48, 96, 192];
pub const DEFAULT_REPETITIONS: usize = 21;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub measure: String,
    pub size: usize,
    pub repetitions: usize,
    pub median_ms: f64,
}

/// Median milliseconds per distance call for each `(measure, size)`.
///
/// Every repetition draws a fresh pair with values uniform in `[0, 10)` kW.
pub fn time_measures(measures: &[Measure], sizes: &[usize], repetitions: usize, seed: u64) -> Result<Vec<Timing>> {
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &size in sizes {
        if size == 0 {
            return Err(Error::InvalidParameter("sizes must be positive".into()));
        }
        for measure in measures {
            let mut samples = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let x: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..10.0)).collect();
                let y: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..10.0)).collect();
                let t = Instant::now();
                let d = distance(measure, &x, &y)?;
                samples.push(t.elapsed().as_secs_f64() * 1e3);
                std::hint::black_box(d);
            }
            out.push(Timing {
                measure: measure.short_name().to_owned(),
                size,
                repetitions,
                median_ms: median(&mut samples),
            });
        }
    }
    Ok(out)
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// Least-squares slope of `ln(time)` against `ln(size)`.
pub fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(s, _)| (s as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
