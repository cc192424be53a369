//! K-nearest-neighbour classification of daily load patterns.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{distance, Measure};
use crate::types::TimeSeries;

pub const DEFAULT_K: usize = 5;

/// Equal-length labelled patterns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledSet {
    patterns: Vec<TimeSeries>,
    classes: Vec<String>,
}

impl LabeledSet {
    /// Classes are ordered by first appearance.
    pub fn new(patterns: Vec<TimeSeries>) -> Result<Self> {
        let mut classes: Vec<String> = Vec::new();
        for (i, p) in patterns.iter().enumerate() {
            let label = p
                .label()
                .filter(|l| !l.is_empty())
                .ok_or_else(|| Error::InvalidParameter(format!("pattern {i} has no label")))?;
            if !classes.iter().any(|c| c == label) {
                classes.push(label.to_owned());
            }
        }
        if let Some(first) = patterns.first() {
            if let Some(bad) = patterns.iter().find(|p| p.len() != first.len()) {
                return Err(Error::LengthMismatch(first.len(), bad.len()));
            }
        }
        Ok(Self { patterns, classes })
    }

    /// Uses `classes` as the class order; every label must appear in it.
    pub fn with_classes(patterns: Vec<TimeSeries>, classes: Vec<String>) -> Result<Self> {
        let mut set = Self::new(patterns)?;
        if let Some(missing) = set.classes.iter().find(|c| !classes.contains(c)) {
            return Err(Error::InvalidParameter(format!("label {missing:?} not in class list")));
        }
        set.classes = classes;
        Ok(set)
    }

    pub fn patterns(&self) -> &[TimeSeries] {
        &self.patterns
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Sample count per pattern, if the set is non-empty.
    pub fn pattern_len(&self) -> Option<usize> {
        self.patterns.first().map(TimeSeries::len)
    }

    fn label(&self, i: usize) -> &str {
        self.patterns[i].label().unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub label: String,
    pub neighbors: Vec<Neighbor>,
}

/// Majority label among the `k` nearest training patterns.
///
/// Neighbours are ordered by `(distance, index)`. A vote tie goes to the class
/// with the smallest summed neighbour distance, then to the earlier class.
pub fn knn_classify(query: &[f64], train: &LabeledSet, k: usize, measure: &Measure) -> Result<Prediction> {
    classify_excluding(query, train, k, measure, None)
}

fn classify_excluding(
    query: &[f64],
    train: &LabeledSet,
    k: usize,
    measure: &Measure,
    exclude: Option<usize>,
) -> Result<Prediction> {
    let available = train.len().saturating_sub(usize::from(exclude.is_some()));
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if k > available {
        return Err(Error::KTooLarge { k, available });
    }

    let mut neighbors = Vec::with_capacity(available);
    for (index, p) in train.patterns.iter().enumerate() {
        if Some(index) == exclude {
            continue;
        }
        neighbors.push(Neighbor { index, distance: distance(measure, query, p.values())? });
    }
    neighbors.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index)));
    neighbors.truncate(k);

    let mut votes: HashMap<&str, (usize, f64)> = HashMap::new();
    for n in &neighbors {
        let v = votes.entry(train.label(n.index)).or_insert((0, 0.0));
        v.0 += 1;
        v.1 += n.distance;
    }
    let rank = |c: &str| train.classes.iter().position(|x| x == c).unwrap_or(usize::MAX);
    let (label, _) = votes
        .into_iter()
        .min_by(|(ca, (na, sa)), (cb, (nb, sb))| nb.cmp(na).then(sa.total_cmp(sb)).then(rank(ca).cmp(&rank(cb))))
        .expect("k >= 1 neighbours");

    Ok(Prediction { label: label.to_owned(), neighbors })
}

/// Counts with rows as true class and columns as predicted class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Trace over total; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.correct() as f64 / t as f64,
        }
    }

    pub fn row_totals(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    /// Diagonal over column sum; `None` for classes never predicted.
    pub fn precision(&self) -> Vec<Option<f64>> {
        (0..self.classes.len())
            .map(|j| {
                let col: usize = self.counts.iter().map(|r| r[j]).sum();
                (col > 0).then(|| self.counts[j][j] as f64 / col as f64)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub predictions: Vec<Prediction>,
    pub confusion: ConfusionMatrix,
}

/// Classifies every test pattern against `train`.
///
/// Class order is the training order followed by any test-only classes.
pub fn evaluate(test: &LabeledSet, train: &LabeledSet, k: usize, measure: &Measure) -> Result<Evaluation> {
    if let (Some(a), Some(b)) = (test.pattern_len(), train.pattern_len()) {
        if a != b {
            return Err(Error::LengthMismatch(a, b));
        }
    }
    let predictions =
        test.patterns.par_iter().map(|p| knn_classify(p.values(), train, k, measure)).collect::<Result<Vec<_>>>()?;
    Ok(tally(test, train, predictions))
}

/// Classifies each training pattern against all the others.
pub fn leave_one_out(train: &LabeledSet, k: usize, measure: &Measure) -> Result<Evaluation> {
    let predictions = (0..train.len())
        .into_par_iter()
        .map(|i| classify_excluding(train.patterns[i].values(), train, k, measure, Some(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(train, train, predictions))
}

fn tally(test: &LabeledSet, train: &LabeledSet, predictions: Vec<Prediction>) -> Evaluation {
    let mut classes = train.classes.clone();
    for c in &test.classes {
        if !classes.contains(c) {
            classes.push(c.clone());
        }
    }
    let idx = |c: &str| classes.iter().position(|x| x == c).expect("known class");
    let mut counts = vec![vec![0; classes.len()]; classes.len()];
    for (i, pred) in predictions.iter().enumerate() {
        counts[idx(test.label(i))][idx(&pred.label)] += 1;
    }
    Evaluation { predictions, confusion: ConfusionMatrix { classes, counts } }
}
