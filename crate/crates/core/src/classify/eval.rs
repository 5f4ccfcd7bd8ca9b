use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{ClassifyError, LabeledExample, TopicClassifier, TopicLabel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: TopicLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Held-out evaluation. `confusion[gold][predicted]`, indexed by
/// [`TopicLabel::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: u64,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: [[u64; 6]; 6],
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    pub fn from_confusion(confusion: [[u64; 6]; 6]) -> Self {
        let n: u64 = confusion.iter().flatten().sum();
        let trace: u64 = (0..6).map(|i| confusion[i][i]).sum();
        let per_class = TopicLabel::ALL
            .iter()
            .map(|&label| {
                let c = label.index();
                let tp = confusion[c][c];
                let predicted: u64 = (0..6).map(|g| confusion[g][c]).sum();
                let support: u64 = confusion[c].iter().sum();
                let precision = ratio(tp, predicted);
                let recall = ratio(tp, support);
                let f1 = if precision + recall > 0.0 {
                    2.0 * precision * recall / (precision + recall)
                } else {
                    0.0
                };
                ClassMetrics { label, precision, recall, f1, support }
            })
            .collect();
        EvalReport {
            n,
            accuracy: ratio(trace, n),
            per_class,
            confusion,
        }
    }
}

pub fn evaluate<C: TopicClassifier + ?Sized>(
    classifier: &C,
    heldout: &[LabeledExample],
) -> Result<EvalReport, ClassifyError> {
    if heldout.is_empty() {
        return Err(ClassifyError::EmptySet);
    }
    let mut confusion = [[0u64; 6]; 6];
    for ex in heldout {
        let predicted = classifier.classify(&ex.tweet).label;
        confusion[ex.label.index()][predicted.index()] += 1;
    }
    Ok(EvalReport::from_confusion(confusion))
}

/// Cohen's kappa between two annotations of the same items.
///
/// Computed from integer counts as `(n·agree − Σ a_k·b_k) / (n² − Σ a_k·b_k)`,
/// which is `(p_o − p_e) / (1 − p_e)` without intermediate rounding. When
/// chance agreement is total (both annotators used one identical label) the
/// result is 1.
pub fn cohen_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64, ClassifyError> {
    if a.len() != b.len() {
        return Err(ClassifyError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(ClassifyError::EmptySet);
    }
    let n = a.len() as u128;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as u128;
    let mut marginals: HashMap<&T, (u128, u128)> = HashMap::new();
    for x in a {
        marginals.entry(x).or_default().0 += 1;
    }
    for y in b {
        marginals.entry(y).or_default().1 += 1;
    }
    let chance: u128 = marginals.values().map(|(ca, cb)| ca * cb).sum();
    if chance == n * n {
        return Ok(if agree == n { 1.0 } else { 0.0 });
    }
    let num = (n * agree) as i128 - chance as i128;
    let den = (n * n - chance) as i128;
    Ok(num as f64 / den as f64)
}
