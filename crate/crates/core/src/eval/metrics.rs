use crate::error::{Error, Result};
use crate::loss::sign_of;
use crate::types::BinaryLabel;

/// Fraction of `sign_of(score) == label`.
pub fn accuracy(scores: &[(f64, BinaryLabel)]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Usage("accuracy of an empty score list".into()));
    }
    let mut correct = 0usize;
    for &(s, y) in scores {
        if sign_of(s)? == y {
            correct += 1;
        }
    }
    Ok(correct as f64 / scores.len() as f64)
}

/// Area under the ROC curve: `P(s+ > s-) + P(s+ == s-) / 2`.
///
/// Rank-sum (Mann-Whitney) form with midranks for ties, accumulated in
/// integers so the only rounding is the final division.
pub fn roc_auc(scores: &[(f64, BinaryLabel)]) -> Result<f64> {
    if let Some((s, _)) = scores.iter().find(|(s, _)| !s.is_finite()) {
        return Err(Error::Data(format!("non-finite score {s}")));
    }
    let n_pos = scores
        .iter()
        .filter(|(_, y)| *y == BinaryLabel::Positive)
        .count() as u128;
    let n_neg = scores.len() as u128 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::MetricUndefined(
            "ROC-AUC needs both classes present".into(),
        ));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].0.total_cmp(&scores[b].0));

    // sum of doubled (1-based) midranks of the positives
    let mut doubled_rank_sum: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]].0 == scores[order[i]].0 {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the midrank (i + j + 2) / 2
        let doubled_mid = (i + j + 2) as u128;
        let pos_in_group = order[i..=j]
            .iter()
            .filter(|&&k| scores[k].1 == BinaryLabel::Positive)
            .count() as u128;
        doubled_rank_sum += doubled_mid * pos_in_group;
        i = j + 1;
    }
    let numerator = doubled_rank_sum - n_pos * (n_pos + 1);
    Ok(numerator as f64 / (2 * n_pos * n_neg) as f64)
}
