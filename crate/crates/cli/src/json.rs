//! Serialized forms of exact values. Rationals become `"p/q"` strings and
//! degrees carry both the reduced fraction and the scaled integer.

use serde::Serialize;
use shl_core::{DegreeIndex, Rational, WeightSystem};

pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degree {
    pub num: String,
    pub den: String,
    pub scaled: i64,
}

impl Degree {
    pub fn from_index(d: DegreeIndex) -> Self {
        let r = d.value();
        Degree {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            scaled: d.scaled,
        }
    }

    pub fn from_scaled(scaled: i64, w: &WeightSystem) -> Self {
        Self::from_index(DegreeIndex::new(scaled, w))
    }
}

/// Renders a JSON value the same way `analyze --json` does.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report values are always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use shl_core::rat;

    #[test]
    fn rationals_keep_denominator() {
        assert_eq!(rational(&rat(11, 12)), "11/12");
        assert_eq!(rational(&rat(2, 1)), "2/1");
        assert_eq!(rational(&rat(-3, 6)), "-1/2");
    }

    #[test]
    fn degree_fields() {
        let w = WeightSystem::parse("1/6,1/4,1/4,1/4").unwrap();
        let d = Degree::from_scaled(37, &w);
        assert_eq!((d.num.as_str(), d.den.as_str(), d.scaled), ("37", "12", 37));
        let d = Degree::from_scaled(36, &w);
        assert_eq!((d.num.as_str(), d.den.as_str()), ("3", "1"));
    }
}
