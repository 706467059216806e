use num_traits::{One, ToPrimitive};

use super::{check_size, BinId, BoundedSpacePacker, Placement};
use crate::error::{Error, Result};
use crate::model::Rational;

/// Class of `size` under Harmonic(k): `j` when `size ∈ (1/(j+1), 1/j]` for
/// `j < k`, otherwise `k`.
pub fn harmonic_class(size: &Rational, k: usize) -> usize {
    let inv = (Rational::one() / size).floor().to_integer();
    inv.to_usize().map_or(k, |j| j.clamp(1, k))
}

#[derive(Debug, Clone)]
struct OpenBin {
    id: BinId,
    count: usize,
    load: Rational,
}

/// Splits items into `k` size classes, each packed Next-Fit style into its
/// own open bin. Classes `j < k` hold exactly `j` items per bin; class `k`
/// packs by capacity.
#[derive(Debug, Clone)]
pub struct Harmonic {
    k: usize,
    open: Vec<Option<OpenBin>>,
    opened: usize,
}

impl Harmonic {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "harmonic packer needs k >= 2, got {k}"
            )));
        }
        Ok(Harmonic {
            k,
            open: vec![None; k],
            opened: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl BoundedSpacePacker for Harmonic {
    fn bound(&self) -> usize {
        self.k
    }

    fn place(&mut self, size: &Rational) -> Result<Placement> {
        check_size(size)?;
        let j = harmonic_class(size, self.k);
        let slot = &mut self.open[j - 1];
        let mut closed = Vec::new();
        if let Some(bin) = slot {
            let fits = if j < self.k {
                bin.count < j
            } else {
                bin.load + size <= Rational::one()
            };
            if fits {
                bin.count += 1;
                bin.load += size;
                return Ok(Placement {
                    bin: bin.id,
                    opened: None,
                    closed,
                });
            }
            closed.push(bin.id);
        }
        let id = BinId(self.opened as u32);
        self.opened += 1;
        *slot = Some(OpenBin {
            id,
            count: 1,
            load: *size,
        });
        Ok(Placement {
            bin: id,
            opened: Some(id),
            closed,
        })
    }

    fn active_bins(&self) -> Vec<BinId> {
        let mut bins: Vec<BinId> = self.open.iter().flatten().map(|b| b.id).collect();
        bins.sort();
        bins
    }

    fn bins_opened(&self) -> usize {
        self.opened
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    #[test]
    fn classes_are_half_open() {
        assert_eq!(harmonic_class(&ratio(9, 10), 3), 1);
        assert_eq!(harmonic_class(&ratio(1, 2), 3), 2);
        assert_eq!(harmonic_class(&ratio(1, 2), 2), 2);
        assert_eq!(harmonic_class(&ratio(51, 100), 2), 1);
        assert_eq!(harmonic_class(&ratio(1, 3), 3), 3);
        assert_eq!(harmonic_class(&ratio(1, 100), 6), 6);
        assert_eq!(harmonic_class(&ratio(1, 1), 6), 1);
    }

    #[test]
    fn mixed_stream_with_three_classes() {
        let mut h = Harmonic::new(3).unwrap();
        let sizes = [ratio(9, 10), ratio(3, 5), ratio(2, 5), ratio(3, 10), ratio(1, 10)];
        let bins: Vec<u32> = sizes.iter().map(|s| h.place(s).unwrap().bin.0).collect();
        assert_eq!(bins, vec![0, 1, 2, 3, 3]);
        assert_eq!(h.bins_opened(), 4);
        assert!(h.active_bins().len() <= 3);
    }

    #[test]
    fn items_of_exactly_one_over_k() {
        let mut h = Harmonic::new(4).unwrap();
        for _ in 0..9 {
            h.place(&ratio(1, 4)).unwrap();
        }
        assert_eq!(h.bins_opened(), 3);
    }

    #[test]
    fn halves_with_k_two_pair_up() {
        let mut h = Harmonic::new(2).unwrap();
        for _ in 0..4 {
            h.place(&ratio(1, 2)).unwrap();
        }
        assert_eq!(h.bins_opened(), 2);
    }

    #[test]
    fn rejects_small_k() {
        assert!(Harmonic::new(1).is_err());
    }
}
