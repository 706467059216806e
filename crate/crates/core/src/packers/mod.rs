//! Machine-level dynamic First-Fit and the bounded-space static packers
//! (Next-Fit, Harmonic) that the static-to-dynamic transform wraps.

mod first_fit;
mod harmonic;
mod next_fit;

use std::fmt;

use num_traits::{One, Zero};

pub use first_fit::first_fit_dynamic;
pub use first_fit::OnlineFirstFit;
pub(crate) use first_fit::{first_fit_positions, FirstFit};
pub use harmonic::{harmonic_class, Harmonic};
pub use next_fit::NextFit;

use crate::error::{Error, Result};
use crate::model::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinId(pub u32);

impl fmt::Display for BinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One static item to pack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticItem {
    pub id: u32,
    pub size: Rational,
}

impl StaticItem {
    pub fn new(id: u32, size: Rational) -> Result<Self> {
        check_size(&size)?;
        Ok(StaticItem { id, size })
    }
}

pub(crate) fn check_size(size: &Rational) -> Result<()> {
    if *size <= Rational::zero() || *size > Rational::one() {
        return Err(Error::ItemTooLarge(*size));
    }
    Ok(())
}

/// Effect of one placement. Bins listed in `closed` are closed before
/// `opened` is opened, and the item goes into `bin`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub bin: BinId,
    pub opened: Option<BinId>,
    pub closed: Vec<BinId>,
}

/// Online static packer that never keeps more than `bound()` bins open and
/// never reopens a closed bin.
pub trait BoundedSpacePacker {
    fn bound(&self) -> usize;

    fn place(&mut self, size: &Rational) -> Result<Placement>;

    /// Currently open bins, in ascending id order.
    fn active_bins(&self) -> Vec<BinId>;

    fn bins_opened(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackEvent {
    Opened(BinId),
    Placed { item: u32, bin: BinId },
    Closed(BinId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackLog {
    pub bins: usize,
    pub events: Vec<PackEvent>,
}

/// Feeds `items` in order and records every open, place and close event.
pub fn static_pack<P: BoundedSpacePacker + ?Sized>(
    items: &[StaticItem],
    packer: &mut P,
) -> Result<PackLog> {
    let mut events = Vec::with_capacity(items.len() * 2);
    for item in items {
        let placement = packer.place(&item.size)?;
        events.extend(placement.closed.iter().map(|&b| PackEvent::Closed(b)));
        if let Some(b) = placement.opened {
            events.push(PackEvent::Opened(b));
        }
        events.push(PackEvent::Placed {
            item: item.id,
            bin: placement.bin,
        });
    }
    Ok(PackLog {
        bins: packer.bins_opened(),
        events,
    })
}

/// Replays an event log and returns the largest number of simultaneously
/// open bins.
pub fn peak_open_bins(events: &[PackEvent]) -> usize {
    let mut open = std::collections::BTreeSet::new();
    let mut peak = 0;
    for e in events {
        match *e {
            PackEvent::Opened(b) => {
                open.insert(b);
                peak = peak.max(open.len());
            }
            PackEvent::Closed(b) => {
                open.remove(&b);
            }
            PackEvent::Placed { .. } => {}
        }
    }
    peak
}

/// Which bounded-space packer to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackerKind {
    NextFit,
    Harmonic(usize),
}

impl PackerKind {
    pub fn build(self) -> Result<Box<dyn BoundedSpacePacker + Send>> {
        Ok(match self {
            PackerKind::NextFit => Box::new(NextFit::new()),
            PackerKind::Harmonic(k) => Box::new(Harmonic::new(k)?),
        })
    }

    pub fn bound(self) -> usize {
        match self {
            PackerKind::NextFit => 1,
            PackerKind::Harmonic(k) => k,
        }
    }
}

impl std::str::FromStr for PackerKind {
    type Err = Error;

    /// `next-fit` or `harmonic-<k>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "next-fit" {
            return Ok(PackerKind::NextFit);
        }
        let k = s
            .strip_prefix("harmonic-")
            .and_then(|k| k.parse::<usize>().ok())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown packer {s:?}")))?;
        if k < 2 {
            return Err(Error::InvalidParameter(format!("harmonic needs k >= 2, got {k}")));
        }
        Ok(PackerKind::Harmonic(k))
    }
}

impl fmt::Display for PackerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackerKind::NextFit => write!(f, "next-fit"),
            PackerKind::Harmonic(k) => write!(f, "harmonic-{k}"),
        }
    }
}
