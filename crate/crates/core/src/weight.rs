//! Exact non-negative fixed-point edge weights with six fractional digits.

use std::fmt;
use std::iter::Sum;
use std::str::FromStr;

use thiserror::Error;

/// Number of fractional decimal digits carried by a [`Weight`].
pub const FRACTION_DIGITS: u32 = 6;
/// Raw units per whole weight unit.
pub const SCALE: u64 = 1_000_000;

/// A non-negative edge weight stored as an integer count of millionths.
///
/// Arithmetic is exact; overflow is reported rather than wrapped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(u64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight overflow")]
    Overflow,
    #[error("invalid weight `{0}`")]
    Invalid(String),
    #[error("weight `{0}` has more than 6 fractional digits")]
    TooPrecise(String),
}

impl Weight {
    pub const ZERO: Weight = Weight(0);
    pub const ONE: Weight = Weight(SCALE);

    pub const fn from_micros(micros: u64) -> Self {
        Weight(micros)
    }

    pub fn from_units(units: u64) -> Result<Self, WeightError> {
        units
            .checked_mul(SCALE)
            .map(Weight)
            .ok_or(WeightError::Overflow)
    }

    pub const fn micros(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, rhs: Weight) -> Result<Weight, WeightError> {
        self.0
            .checked_add(rhs.0)
            .map(Weight)
            .ok_or(WeightError::Overflow)
    }

    pub fn checked_mul_int(self, factor: u64) -> Result<Weight, WeightError> {
        self.0
            .checked_mul(factor)
            .map(Weight)
            .ok_or(WeightError::Overflow)
    }

    /// Sums weights, reporting overflow.
    pub fn try_sum<I: IntoIterator<Item = Weight>>(iter: I) -> Result<Weight, WeightError> {
        iter.into_iter().try_fold(Weight::ZERO, Weight::checked_add)
    }

    /// Lossy conversion for ratios and reports.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

/// Panics on overflow. Graph construction bounds the total weight, so sums of
/// edge weights drawn from one graph never overflow.
impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        Weight::try_sum(iter).expect("weight sum overflow")
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        iter.copied().sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / SCALE;
        let frac = self.0 % SCALE;
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || WeightError::Invalid(s.to_string());
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        if s.contains('.') && frac.is_empty() {
            return Err(invalid());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        if frac.len() > FRACTION_DIGITS as usize {
            return Err(WeightError::TooPrecise(s.to_string()));
        }
        let whole: u64 = whole.parse().map_err(|_| WeightError::Overflow)?;
        let mut frac_micros: u64 = 0;
        for (i, b) in frac.bytes().enumerate() {
            frac_micros += u64::from(b - b'0') * 10u64.pow(FRACTION_DIGITS - 1 - i as u32);
        }
        whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(frac_micros))
            .map(Weight)
            .ok_or(WeightError::Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_formats_epsilon_weights() {
        let w: Weight = "1.01".parse().unwrap();
        assert_eq!(w.micros(), 1_010_000);
        assert_eq!(w.to_string(), "1.01");
        assert_eq!(
            "12".parse::<Weight>().unwrap(),
            Weight::from_units(12).unwrap()
        );
        assert_eq!("0.000001".parse::<Weight>().unwrap().micros(), 1);
        assert_eq!(Weight::from_micros(5_050_000).to_string(), "5.05");
        assert_eq!(Weight::ZERO.to_string(), "0");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", ".5", "1.", "-1", "1e3", "1.2.3", "abc", " 1"] {
            assert!(bad.parse::<Weight>().is_err(), "{bad:?} accepted");
        }
        assert!(matches!(
            "1.0000001".parse::<Weight>(),
            Err(WeightError::TooPrecise(_))
        ));
        assert_eq!(
            "99999999999999999999".parse::<Weight>(),
            Err(WeightError::Overflow)
        );
    }

    #[test]
    fn overflow_is_reported() {
        let max = Weight::from_micros(u64::MAX);
        assert_eq!(
            max.checked_add(Weight::from_micros(1)),
            Err(WeightError::Overflow)
        );
        assert!(Weight::try_sum([max, Weight::ONE]).is_err());
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(micros in any::<u64>()) {
            let w = Weight::from_micros(micros);
            prop_assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
        }
    }
}
