use num_traits::{One, Zero};

use super::{IntervalId, Rational, Span};
use crate::error::{Error, Result};

/// One VM request: occupies `[start, end)` with a fixed share of a machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    id: IntervalId,
    start: i64,
    end: i64,
    size: Rational,
}

impl Interval {
    pub fn new(id: u32, start: i64, end: i64, size: Rational) -> Result<Self> {
        let id = IntervalId(id);
        if end <= start {
            return Err(Error::EmptySpan { id, start, end });
        }
        if size <= Rational::zero() || size > Rational::one() {
            return Err(Error::SizeOutOfRange { id, size });
        }
        Ok(Interval {
            id,
            start,
            end,
            size,
        })
    }

    pub fn id(&self) -> IntervalId {
        self.id
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    pub fn size(&self) -> &Rational {
        &self.size
    }

    pub fn len(&self) -> i64 {
        self.end - self.start
    }

    pub fn span(&self) -> Span {
        Span::new(self.start, self.end)
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t < self.end
    }

    /// Same request with a different size, used when rounding sizes up.
    pub(crate) fn with_size(&self, size: Rational) -> Self {
        Interval {
            size,
            ..self.clone()
        }
    }
}
