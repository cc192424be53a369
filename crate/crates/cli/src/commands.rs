use std::path::Path;
use std::time::Instant;

use flexdist::bench::time_measures;
use flexdist::classify::{evaluate, leave_one_out, LabeledSet};
use flexdist::discord::{find_discord, matrix_profile, segment_days};
use flexdist::ingest::{read_bundle, read_labeled_set, read_series, Format, ReadOptions, SeriesFile, TIMESTAMP_OUT};
use flexdist::reshaping::plan;
use flexdist::schedule::{rank_scenarios, ScenarioSet};
use flexdist::{distance, fd_cost_matrix, Error, Measure, Result, TimeSeries};
use serde_json::{json, Value};

use crate::report::{Report, Table};
use crate::InputArgs;

pub struct Input {
    options: ReadOptions,
}

impl Input {
    pub fn new(args: &InputArgs) -> Result<Self> {
        if !args.delimiter.is_ascii() {
            return Err(Error::InvalidParameter(format!("delimiter must be ASCII, got {:?}", args.delimiter)));
        }
        let mut options = ReadOptions::new(Format::Long);
        options.delimiter = args.delimiter as u8;
        options.header = args.header.into();
        options.interval_minutes = args.interval;
        Ok(Self { options })
    }

    fn file(&self, path: &Path, format: Format) -> SeriesFile {
        SeriesFile { path: path.to_owned(), options: ReadOptions { format, ..self.options.clone() } }
    }

    fn single(&self, path: &Path) -> Result<TimeSeries> {
        Ok(read_series(&self.file(path, Format::Long))?.remove(0))
    }

    fn labeled(&self, path: &Path) -> Result<LabeledSet> {
        read_labeled_set(&self.file(path, Format::Labeled))
    }
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialise")
}

fn series_summary(path: &Path, s: &TimeSeries) -> Value {
    json!({
        "path": path.display().to_string(),
        "length": s.len(),
        "interval_minutes": s.interval_minutes(),
        "start": s.start().map(|t| t.format(TIMESTAMP_OUT).to_string()),
    })
}

pub fn dist(
    input: &Input,
    x_path: &Path,
    y_path: &Path,
    measure: &Measure,
    with_plan: bool,
    with_matrix: bool,
) -> Result<Report> {
    let x = input.single(x_path)?;
    let y = input.single(y_path)?;
    if (with_plan || with_matrix) && !matches!(measure, Measure::Flexibility { .. }) {
        return Err(Error::InvalidParameter("--plan and --matrix need --measure fd".into()));
    }

    let t = Instant::now();
    let d = distance(measure, x.values(), y.values())?;
    let reshape = match measure {
        Measure::Flexibility { weights } if with_plan => Some(plan(x.values(), y.values(), weights)?),
        _ => None,
    };
    let matrix = match measure {
        Measure::Flexibility { weights } if with_matrix => Some(fd_cost_matrix(x.values(), y.values(), weights)?),
        _ => None,
    };
    let timing = ms_since(t);

    let mut results = json!({ "distance": d });
    let mut table = Table::new(&["measure", "distance"]);
    table.push(vec![measure.short_name().into(), d.to_string()]);
    if let Some(p) = &reshape {
        results["plan"] = to_value(p);
        table = Table::new(&[
            "from_index",
            "to_index",
            "source_value",
            "target_value",
            "amplitude_cost",
            "temporal_cost",
            "total_cost",
        ]);
        for mv in &p.moves {
            table.push(vec![
                mv.from_index.to_string(),
                mv.to_index.to_string(),
                mv.source_value.to_string(),
                mv.target_value.to_string(),
                mv.amplitude_cost.to_string(),
                mv.temporal_cost.to_string(),
                mv.total_cost.to_string(),
            ]);
        }
    }
    if let Some(c) = &matrix {
        let rows: Vec<&[f64]> = c.rows().collect();
        results["matrix"] = to_value(&rows);
        table = Table::new(&["row", "column", "cost"]);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                table.push(vec![i.to_string(), j.to_string(), v.to_string()]);
            }
        }
    }

    let inputs = json!({
        "x": series_summary(x_path, &x),
        "y": series_summary(y_path, &y),
        "measure": measure,
    });
    Ok(Report::new(inputs, results, timing, table))
}

pub fn discord(input: &Input, path: &Path, samples_per_day: usize, measure: &Measure) -> Result<Report> {
    let series = input.single(path)?;
    let days = segment_days(&series, samples_per_day)?;

    let t = Instant::now();
    let profile = matrix_profile(&days, measure)?;
    let timing = ms_since(t);
    let found = find_discord(&profile).expect("at least two days");

    let date = |d: usize| days.days[d].start().map(|t| t.date().to_string());
    let mut table = Table::new(&["day", "date", "nn_distance", "nn_index", "is_discord"]);
    let mut rows = Vec::with_capacity(days.len());
    for d in 0..days.len() {
        let (dist, nn) = (profile.nn_distance[d], profile.nn_index[d]);
        table.push(vec![
            d.to_string(),
            date(d).unwrap_or_default(),
            dist.to_string(),
            nn.to_string(),
            (d == found.day).to_string(),
        ]);
        rows.push(json!({ "day": d, "date": date(d), "nn_distance": dist, "nn_index": nn }));
    }

    let results = json!({
        "discord": { "day": found.day, "date": date(found.day), "nn_distance": found.nn_distance },
        "profile": rows,
        "days": days.len(),
        "samples_per_day": samples_per_day,
        "dropped_tail": days.dropped_tail,
    });
    let inputs = json!({ "series": series_summary(path, &series), "measure": measure });
    Ok(Report::new(inputs, results, timing, table))
}

pub fn knn(
    input: &Input,
    train_path: &Path,
    test_path: Option<&Path>,
    k: usize,
    loo: bool,
    measure: &Measure,
) -> Result<Report> {
    let train = input.labeled(train_path)?;
    let test = match test_path {
        Some(p) => Some(input.labeled(p)?),
        None => None,
    };

    let t = Instant::now();
    let eval = match (&test, loo) {
        (_, true) => leave_one_out(&train, k, measure)?,
        (Some(test), false) => evaluate(test, &train, k, measure)?,
        (None, false) => evaluate(&train, &train, k, measure)?,
    };
    let timing = ms_since(t);

    let queries = test.as_ref().unwrap_or(&train);
    let mut preds = Vec::with_capacity(eval.predictions.len());
    for (i, (p, q)) in eval.predictions.iter().zip(queries.patterns()).enumerate() {
        let truth = q.label().unwrap_or_default();
        preds.push(json!({ "query": i, "truth": truth, "predicted": p.label, "neighbors": p.neighbors }));
    }
    let c = &eval.confusion;
    // confusion matrix, one row per true class
    let header: Vec<&str> = std::iter::once("truth").chain(c.classes.iter().map(String::as_str)).collect();
    let mut table = Table::new(&header);
    for (class, counts) in c.classes.iter().zip(&c.counts) {
        table.push(std::iter::once(class.clone()).chain(counts.iter().map(usize::to_string)).collect());
    }
    let results = json!({
        "predictions": preds,
        "confusion": { "classes": c.classes, "counts": c.counts },
        "accuracy": c.accuracy(),
        "precision": c.precision(),
    });

    let inputs = json!({
        "train": { "path": train_path.display().to_string(), "patterns": train.len(), "pattern_length": train.pattern_len() },
        "test": test.as_ref().map(|t| json!({
            "path": test_path.map(|p| p.display().to_string()),
            "patterns": t.len(),
            "pattern_length": t.pattern_len(),
        })),
        "k": k,
        "leave_one_out": loo,
        "measure": measure,
    });
    Ok(Report::new(inputs, results, timing, table))
}

pub fn rank(input: &Input, bundle: &Path, ideal: &str, original: &str, measure: &Measure) -> Result<Report> {
    let mut series = read_bundle(bundle, &input.options)?;
    let mut take = |name: &str| {
        let pos =
            series.iter().position(|s| s.label() == Some(name)).ok_or_else(|| Error::UnknownSeries(name.to_owned()))?;
        Ok::<_, Error>(series.remove(pos))
    };
    let ideal_s = take(ideal)?;
    let original_s = take(original)?;
    let names: Vec<String> = series.iter().map(|s| s.label().unwrap_or_default().to_owned()).collect();
    let m = ideal_s.len();
    let set = ScenarioSet::new(original_s, ideal_s, names.iter().cloned().zip(series).collect())?;

    let t = Instant::now();
    let report = rank_scenarios(&set, measure)?;
    let timing = ms_since(t);

    let mut table = Table::new(&["rank", "name", "distance", "improvement", "worse_than_baseline", "baseline"]);
    for r in &report.rows {
        table.push(vec![
            r.rank.to_string(),
            r.name.clone(),
            r.distance.to_string(),
            r.improvement.to_string(),
            r.worse_than_baseline.to_string(),
            report.baseline.to_string(),
        ]);
    }
    let results = json!({ "baseline": report.baseline, "rows": report.rows });
    let inputs = json!({
        "bundle": bundle.display().to_string(),
        "ideal": ideal,
        "original": original,
        "scenarios": names,
        "length": m,
        "measure": measure,
    });
    Ok(Report::new(inputs, results, timing, table))
}

pub fn bench(sizes: &[usize], repetitions: usize, seed: u64, fd: Measure) -> Result<Report> {
    let measures = [Measure::Euclidean, Measure::Dtw, fd];
    let t = Instant::now();
    let timings = time_measures(&measures, sizes, repetitions, seed)?;
    let timing = ms_since(t);

    let mut table = Table::new(&["measure", "size", "repetitions", "median_ms"]);
    for r in &timings {
        table.push(vec![r.measure.clone(), r.size.to_string(), r.repetitions.to_string(), r.median_ms.to_string()]);
    }
    let inputs = json!({ "sizes": sizes, "repetitions": repetitions, "seed": seed, "measures": measures });
    Ok(Report::new(inputs, json!({ "timings": timings }), timing, table))
}
