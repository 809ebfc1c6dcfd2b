use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders within this distance of 1 use the von Neumann branch.
pub const LIMIT_SNAP: f64 = 1e-9;

/// A Rényi order `α`, with exact tags for the limit cases 0, 1 and ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenyiOrder {
    Zero,
    Finite(f64),
    One,
    Infinity,
}

impl RenyiOrder {
    /// Classifies a real order, snapping to the limit tags.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() {
            return Err(Error::InvalidOrder("NaN".into()));
        }
        if alpha == f64::INFINITY {
            return Ok(Self::Infinity);
        }
        if alpha == 0.0 {
            return Ok(Self::Zero);
        }
        if alpha < 0.0 {
            return Err(Error::InvalidOrder(format!("{alpha} is negative")));
        }
        if (alpha - 1.0).abs() < LIMIT_SNAP {
            return Ok(Self::One);
        }
        Ok(Self::Finite(alpha))
    }

    /// The order as a real number (`∞` for the infinite tag).
    pub fn value(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Finite(a) => a,
            Self::One => 1.0,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Finite order in the sandwiched domain `[1/2, 1) ∪ (1, ∞)`.
    pub fn sandwiched(self) -> Result<f64> {
        match self {
            Self::Finite(a) if a >= 0.5 => Ok(a),
            other => Err(Error::InvalidOrder(format!(
                "{other} is outside [1/2, 1) ∪ (1, ∞)"
            ))),
        }
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Finite(a) => write!(f, "{a}"),
            Self::One => write!(f, "1"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for RenyiOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Infinity => s.serialize_str("inf"),
            other => s.serialize_f64(other.value()),
        }
    }
}

impl<'de> Deserialize<'de> for RenyiOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let alpha = match Raw::deserialize(d)? {
            Raw::Num(v) => v,
            Raw::Text(t) => t.parse::<f64>().map_err(serde::de::Error::custom)?,
        };
        RenyiOrder::new(alpha).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: f64 = match s.trim() {
            "inf" | "infinity" | "Infinity" => f64::INFINITY,
            t => t.parse().map_err(|_| Error::Parse(format!("bad order {t:?}")))?,
        };
        Self::new(v)
    }
}

/// Conditional entropy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyFamily {
    /// Sandwiched, optimized over the conditioning state.
    SandwichedUp,
    /// Sandwiched, conditioned on the true marginal.
    SandwichedDown,
    /// Petz, conditioned on the true marginal (cq states only).
    PetzDown,
}

impl EntropyFamily {
    /// Order `γ` of the source entropy in the closed forms:
    /// `α/(2α−1)` for the optimized family, `1/α` for the marginal one.
    pub fn source_order(self, alpha: RenyiOrder) -> Result<RenyiOrder> {
        match (self, alpha) {
            (Self::SandwichedUp, RenyiOrder::One) | (Self::SandwichedDown, RenyiOrder::One) => {
                Ok(RenyiOrder::One)
            }
            (Self::SandwichedUp, RenyiOrder::Infinity) => RenyiOrder::new(0.5),
            (Self::SandwichedDown, RenyiOrder::Infinity) => Ok(RenyiOrder::Zero),
            (Self::SandwichedUp, RenyiOrder::Finite(a)) if a > 1.0 => {
                RenyiOrder::new(a / (2.0 * a - 1.0))
            }
            (Self::SandwichedDown, RenyiOrder::Finite(a)) if a >= 0.5 => RenyiOrder::new(1.0 / a),
            (Self::PetzDown, _) => Err(Error::Unsupported(
                "closed forms exist only for the sandwiched families".into(),
            )),
            (family, alpha) => Err(Error::InvalidOrder(format!(
                "order {alpha} is outside the domain of {family:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping() {
        assert_eq!(RenyiOrder::new(1.0 + 1e-10).unwrap(), RenyiOrder::One);
        assert_eq!(RenyiOrder::new(1.0 + 1e-6).unwrap(), RenyiOrder::Finite(1.0 + 1e-6));
        assert_eq!(RenyiOrder::new(0.0).unwrap(), RenyiOrder::Zero);
        assert_eq!(RenyiOrder::new(f64::INFINITY).unwrap(), RenyiOrder::Infinity);
        assert!(RenyiOrder::new(-0.5).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!("inf".parse::<RenyiOrder>().unwrap(), RenyiOrder::Infinity);
        assert_eq!("2".parse::<RenyiOrder>().unwrap(), RenyiOrder::Finite(2.0));
        let json = serde_json::to_string(&RenyiOrder::Infinity).unwrap();
        assert_eq!(json, "\"inf\"");
        let back: RenyiOrder = serde_json::from_str("1.5").unwrap();
        assert_eq!(back, RenyiOrder::Finite(1.5));
    }

    #[test]
    fn family_domains() {
        let up = EntropyFamily::SandwichedUp;
        let down = EntropyFamily::SandwichedDown;
        assert!(up.source_order(RenyiOrder::Finite(0.7)).is_err());
        assert_eq!(up.source_order(RenyiOrder::Finite(2.0)).unwrap().value(), 2.0 / 3.0);
        assert_eq!(down.source_order(RenyiOrder::Finite(0.5)).unwrap().value(), 2.0);
        assert!(down.source_order(RenyiOrder::Finite(0.4)).is_err());
        assert_eq!(down.source_order(RenyiOrder::Infinity).unwrap(), RenyiOrder::Zero);
    }
}
