use crate::error::{Error, Result};

/// Maps a class probability `P(y = +1 | x)` to a real stage score `2p - 1`.
pub fn classifier_margin_adapter(p_plus: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(Error::Internal(format!(
            "probability {p_plus} outside [0, 1]"
        )));
    }
    Ok(2.0 * p_plus - 1.0)
}
