use crate::error::{Error, Result};
use crate::model::{common_scale, to_units, Rational};
use crate::packers::check_size;

pub const STATIC_OPT_CAP: usize = 10;

fn search(items: &[i128], idx: usize, bins: &mut Vec<i128>, cap: i128, best: &mut usize, lower: usize) {
    if bins.len() >= *best || *best == lower {
        return;
    }
    if idx == items.len() {
        *best = bins.len();
        return;
    }
    let w = items[idx];
    for b in 0..bins.len() {
        // Bins with equal load are interchangeable; try only the first.
        if bins[b] + w > cap || bins[..b].contains(&bins[b]) {
            continue;
        }
        bins[b] += w;
        search(items, idx + 1, bins, cap, best, lower);
        bins[b] -= w;
    }
    bins.push(w);
    search(items, idx + 1, bins, cap, best, lower);
    bins.pop();
}

/// Fewest unit bins that hold all `sizes`, for at most [`STATIC_OPT_CAP`]
/// items.
pub fn brute_force_static_opt(sizes: &[Rational]) -> Result<usize> {
    if sizes.len() > STATIC_OPT_CAP {
        return Err(Error::TooLarge {
            len: sizes.len(),
            cap: STATIC_OPT_CAP,
        });
    }
    for s in sizes {
        check_size(s)?;
    }
    let scale = common_scale(sizes.iter())?;
    let mut units: Vec<i128> = sizes.iter().map(|s| to_units(s, scale)).collect();
    units.sort_unstable_by(|a, b| b.cmp(a));
    let total: i128 = units.iter().sum();
    let lower = ((total + scale - 1) / scale) as usize;
    let mut best = units.len();
    search(&units, 0, &mut Vec::new(), scale, &mut best, lower);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    #[test]
    fn known_optima() {
        assert_eq!(brute_force_static_opt(&[ratio(3, 5), ratio(3, 5), ratio(3, 10)]).unwrap(), 2);
        assert_eq!(brute_force_static_opt(&[]).unwrap(), 0);
        assert_eq!(brute_force_static_opt(&[ratio(1, 1); 10]).unwrap(), 10);
        // Next-Fit needs 3 bins here; pairing 0.7+0.3 twice needs 2.
        let sizes = [ratio(7, 10), ratio(7, 10), ratio(3, 10), ratio(3, 10)];
        assert_eq!(brute_force_static_opt(&sizes).unwrap(), 2);
    }

    #[test]
    fn rejects_large_inputs() {
        assert!(brute_force_static_opt(&[ratio(1, 2); 11]).is_err());
        assert!(brute_force_static_opt(&[ratio(3, 2)]).is_err());
    }
}
