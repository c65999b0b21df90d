use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::RationalSeries;
use crate::error::{Error, Result};

/// Canonical JSON form of a [`RationalSeries`].
///
/// `order_num` is `null` for an exact series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub denominator: i64,
    pub order_num: Option<i64>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp_num: i64,
    pub coeff: String,
}

impl From<&RationalSeries> for SeriesJson {
    fn from(s: &RationalSeries) -> Self {
        SeriesJson {
            denominator: s.denominator(),
            order_num: s.order_num(),
            terms: s
                .scaled_terms()
                .iter()
                .map(|(&e, c)| TermJson {
                    exp_num: e,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for RationalSeries {
    type Error = Error;

    fn try_from(j: &SeriesJson) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for t in &j.terms {
            let c = parse_fraction(&t.coeff)?;
            if terms.insert(t.exp_num, c).is_some() {
                return Err(Error::Input(format!("duplicate exponent {}", t.exp_num)));
            }
        }
        RationalSeries::from_scaled(j.denominator, terms, j.order_num)
    }
}

/// Parses an exact fraction string such as `"-3/7"` or `"196884"`.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Input(format!("not a fraction: {s:?}")))
}

impl RationalSeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("series JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        RationalSeries::try_from(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{frac, int};
    use num_rational::Rational64;

    #[test]
    fn canonical_rendering() {
        let s = RationalSeries::from_terms(
            [(Rational64::new(1, 8), int(2)), (Rational64::new(9, 8), frac(-4, 3))],
            Some(Rational64::new(3, 1)),
        );
        assert_eq!(
            s.to_json_string(),
            r#"{"denominator":8,"order_num":24,"terms":[{"exp_num":1,"coeff":"2"},{"exp_num":9,"coeff":"-4/3"}]}"#
        );
        assert_eq!(RationalSeries::from_json_str(&s.to_json_string()).unwrap(), s);
    }

    #[test]
    fn malformed_input_rejected() {
        assert!(RationalSeries::from_json_str(r#"{"denominator":0,"order_num":1,"terms":[]}"#).is_err());
        assert!(RationalSeries::from_json_str(
            r#"{"denominator":1,"order_num":5,"terms":[{"exp_num":1,"coeff":"x"}]}"#
        )
        .is_err());
    }
}
