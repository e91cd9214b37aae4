//! Scalar values on the wire: rationals as `"p/q"` or `"p"`, floats as
//! decimal literals.

use std::str::FromStr;

use clap::ValueEnum;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use velojet::{Rational, Scalar};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float,
}

/// A value parsed in its declared mode, before conversion.
#[derive(Debug, Clone, PartialEq)]
pub enum WireValue {
    Exact(Rational),
    Float(f64),
}

impl WireValue {
    pub fn parse(text: &str, mode: ScalarMode) -> Result<Self, CliError> {
        match mode {
            ScalarMode::Rational => Rational::from_str(text)
                .map(WireValue::Exact)
                .map_err(|_| CliError::Parse(format!("`{text}` is not a rational literal"))),
            ScalarMode::Float => match text.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(WireValue::Float(x)),
                _ => Err(CliError::Parse(format!(
                    "`{text}` is not a finite decimal literal"
                ))),
            },
        }
    }
}

/// Scalars that can be read from and written to documents.
pub trait WireScalar: Scalar {
    const MODE: ScalarMode;

    fn from_wire(value: &WireValue) -> Result<Self, CliError>;

    fn to_wire(&self) -> String;

    fn parse_wire(text: &str, mode: ScalarMode) -> Result<Self, CliError> {
        Self::from_wire(&WireValue::parse(text, mode)?)
    }
}

impl WireScalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_wire(value: &WireValue) -> Result<Self, CliError> {
        match value {
            WireValue::Exact(q) => Ok(q.clone()),
            WireValue::Float(x) => Rational::from_float(*x)
                .ok_or_else(|| CliError::Parse(format!("{x} has no rational value"))),
        }
    }

    fn to_wire(&self) -> String {
        self.to_string()
    }
}

impl WireScalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_wire(value: &WireValue) -> Result<Self, CliError> {
        match value {
            WireValue::Float(x) => Ok(*x),
            WireValue::Exact(q) => q
                .to_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Parse(format!("{q} does not fit in a float"))),
        }
    }

    fn to_wire(&self) -> String {
        format!("{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        let q = Rational::parse_wire("-3/6", ScalarMode::Rational).unwrap();
        assert_eq!(q, Rational::from_ratio(-1, 2));
        assert_eq!(q.to_wire(), "-1/2");
        assert_eq!(Rational::from_i64(4).to_wire(), "4");
        assert!(Rational::parse_wire("1.5", ScalarMode::Rational).is_err());
        assert!(Rational::parse_wire("1/0", ScalarMode::Rational).is_err());
        assert!(Rational::parse_wire("", ScalarMode::Rational).is_err());
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_wire("0.25", ScalarMode::Float).unwrap(), 0.25);
        assert!(f64::parse_wire("inf", ScalarMode::Float).is_err());
        assert!(f64::parse_wire("1/2", ScalarMode::Float).is_err());
        assert_eq!(f64::parse_wire("1/4", ScalarMode::Rational).unwrap(), 0.25);
        assert_eq!(
            Rational::parse_wire("0.5", ScalarMode::Float).unwrap(),
            Rational::from_ratio(1, 2)
        );
        assert_eq!(
            f64::parse_wire(&0.1f64.to_wire(), ScalarMode::Float).unwrap(),
            0.1
        );
    }
}
