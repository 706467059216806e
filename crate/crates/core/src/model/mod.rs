//! Instance and schedule data model.
//!
//! Time is discrete: every interval occupies the integer steps
//! `start, start + 1, .., end - 1`. Sizes are exact rationals, and each
//! [`Instance`] converts them to integer multiples of a common unit so that
//! load sums and capacity checks never round.

mod instance;
mod intersect;
mod interval;
mod load;
mod schedule;
mod validate;

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub use instance::Instance;
pub use intersect::select_intersecting_interval;
pub(crate) use intersect::{pick_intersecting, Candidate};
pub use interval::Interval;
pub use load::{compute_load_vector, LoadMode, LoadVector};
pub(crate) use load::load_units;
pub use schedule::{schedule_cost, Machine, Schedule, Span};
pub(crate) use schedule::MachinePool;
pub use validate::{validate_schedule, Violation};

use crate::error::{Error, Result};

/// Exact rational used for sizes, loads and bounds.
pub type Rational = num_rational::Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineId(pub u32);

impl fmt::Display for IntervalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn ceil_int(value: &Rational) -> i128 {
    value.ceil().to_integer()
}

/// Parses `num/den`, an integer, or a plain decimal such as `0.25` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i128 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let den = 10i128.pow(frac.len() as u32);
        let frac: i128 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * den + frac;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, den));
    }
    let num: i128 = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Largest common unit we allow; keeps per-step load sums far from overflow.
const MAX_SCALE: i128 = 1 << 62;

pub(crate) fn common_scale<'a>(sizes: impl IntoIterator<Item = &'a Rational>) -> Result<i128> {
    let mut scale: i128 = 4;
    for size in sizes {
        let den = size.denom().abs();
        scale = scale.lcm(&den);
        if scale > MAX_SCALE {
            return Err(Error::UnitOverflow);
        }
    }
    Ok(scale)
}

pub(crate) fn to_units(size: &Rational, scale: i128) -> i128 {
    debug_assert!((scale % size.denom()).is_zero());
    size.numer() * (scale / size.denom())
}

pub(crate) fn from_units(units: i128, scale: i128) -> Rational {
    Rational::new(units, scale)
}
