//! Exact rational helpers shared by the density and threshold code.

use num_integer::Integer;
use num_rational::Rational64;

pub type Ratio = Rational64;

pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(num, den)
}

/// Smallest integer `>= r`.
pub fn ceil(r: Ratio) -> i64 {
    r.numer().div_ceil(r.denom())
}

/// Serialize a rational as the string `"p/q"` (or `"p"` for integers).
pub mod as_str {
    use super::Ratio;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<Ratio>().map_err(D::Error::custom)
    }
}

pub mod opt_as_str {
    use super::Ratio;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| t.parse::<Ratio>().map_err(D::Error::custom))
            .transpose()
    }
}
