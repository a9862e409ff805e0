//! Stability along the cyclotomic Z2-extension from two consecutive layers.

use serde::Serialize;

use crate::error::ClassifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LayerValue {
    H2 { layer: u32, h2: u64 },
    Rank { layer: u32, rank: u32 },
}

impl LayerValue {
    fn layer(&self) -> u32 {
        match *self {
            LayerValue::H2 { layer, .. } | LayerValue::Rank { layer, .. } => layer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stability {
    H2StableFrom(u32),
    RankStableFrom(u32),
    NoVerdict,
}

/// First layer `n` in `values` with equal value at `n` and `n + 1`.
///
/// Valid only when every prime ramified in the tower is totally ramified from
/// the first listed layer on; the caller is responsible for that.
pub fn fukuda_stable(values: &[LayerValue]) -> Result<Stability, ClassifyError> {
    for w in values.windows(2) {
        if w[1].layer() != w[0].layer() + 1 {
            return Err(ClassifyError::Malformed(format!(
                "layers {} and {} are not consecutive",
                w[0].layer(),
                w[1].layer()
            )));
        }
        match (w[0], w[1]) {
            (LayerValue::H2 { .. }, LayerValue::H2 { .. }) | (LayerValue::Rank { .. }, LayerValue::Rank { .. }) => {}
            _ => return Err(ClassifyError::Malformed("mixed class numbers and ranks".into())),
        }
    }
    for w in values.windows(2) {
        match (w[0], w[1]) {
            (LayerValue::H2 { layer, h2: a }, LayerValue::H2 { h2: b, .. }) if a == b => {
                return Ok(Stability::H2StableFrom(layer))
            }
            (LayerValue::Rank { layer, rank: a }, LayerValue::Rank { rank: b, .. }) if a == b => {
                return Ok(Stability::RankStableFrom(layer))
            }
            _ => {}
        }
    }
    Ok(Stability::NoVerdict)
}
