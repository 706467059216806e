use num_traits::{One, Zero};

use super::{check_size, BinId, BoundedSpacePacker, Placement};
use crate::error::Result;
use crate::model::Rational;

/// Keeps a single open bin and closes it as soon as an item does not fit.
#[derive(Debug, Clone, Default)]
pub struct NextFit {
    current: Option<(BinId, Rational)>,
    opened: usize,
}

impl NextFit {
    pub fn new() -> Self {
        NextFit::default()
    }
}

impl BoundedSpacePacker for NextFit {
    fn bound(&self) -> usize {
        1
    }

    fn place(&mut self, size: &Rational) -> Result<Placement> {
        check_size(size)?;
        let mut closed = Vec::new();
        if let Some((bin, load)) = &mut self.current {
            if *load + size <= Rational::one() {
                *load += size;
                return Ok(Placement {
                    bin: *bin,
                    opened: None,
                    closed,
                });
            }
            closed.push(*bin);
        }
        let bin = BinId(self.opened as u32);
        self.opened += 1;
        self.current = Some((bin, Rational::zero() + size));
        Ok(Placement {
            bin,
            opened: Some(bin),
            closed,
        })
    }

    fn active_bins(&self) -> Vec<BinId> {
        self.current.iter().map(|&(b, _)| b).collect()
    }

    fn bins_opened(&self) -> usize {
        self.opened
    }
}
