//! The exponential criterion GentleBoost minimises, and the sign rule used
//! for every prediction.

use crate::error::{Error, Result};
use crate::types::{BinaryLabel, Margin};

/// Mean of `exp(-m)` over the margins.
pub fn exponential_loss(margins: &[Margin]) -> Result<f64> {
    if margins.is_empty() {
        return Err(Error::Usage(
            "exponential loss of an empty margin sequence".into(),
        ));
    }
    let mut total = 0.0;
    for m in margins {
        let v = m.value();
        if !v.is_finite() {
            return Err(Error::Data(format!("non-finite margin {v}")));
        }
        total += (-v).exp();
    }
    Ok(total / margins.len() as f64)
}

/// Predicted label for a real score. Zero resolves to `+1`.
pub fn sign_of(score: f64) -> Result<BinaryLabel> {
    if !score.is_finite() {
        return Err(Error::Internal(format!("sign of non-finite score {score}")));
    }
    Ok(if score < 0.0 {
        BinaryLabel::Negative
    } else {
        BinaryLabel::Positive
    })
}

pub(crate) fn clamp_unit(score: f64) -> f64 {
    score.clamp(-1.0, 1.0)
}
