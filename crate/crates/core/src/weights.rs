//! Exact rational weight vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a rational number (expected an integer or p/q)")]
pub struct RationalParseError {
    pub input: String,
}

/// Parses `"7"`, `"-3/4"` and the like. Zero denominators are rejected.
pub fn parse_rational(input: &str) -> Result<BigRational, RationalParseError> {
    let err = || RationalParseError {
        input: input.to_string(),
    };
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A weight `w_i` for every ground element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<BigRational>);

impl WeightVector {
    pub fn zeros(n: usize) -> Self {
        WeightVector(vec![BigRational::zero(); n])
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        WeightVector(
            values
                .into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    /// Parses a comma separated list such as `"1,0,-1/2"`.
    pub fn parse_list(input: &str) -> Result<Self, RationalParseError> {
        input
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map(WeightVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    /// `scale * w + shift * (1, .., 1)`.
    pub fn affine(&self, scale: &BigRational, shift: &BigRational) -> Self {
        WeightVector(self.0.iter().map(|w| w * scale + shift).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for WeightVector {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WeightVector::parse_list(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        let w = WeightVector::parse_list("1, -3/6,0,7/1").unwrap();
        assert_eq!(w.to_string(), "(1,-1/2,0,7)");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(WeightVector::parse_list("1,,2").is_err());
    }
}
