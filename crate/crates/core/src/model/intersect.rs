use super::{common_scale, to_units, Interval, Rational};
use crate::error::{Error, Result};

/// An interval reduced to what the peeling selector needs, with its size in
/// integer units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub key: usize,
    pub id: super::IntervalId,
    pub start: i64,
    pub end: i64,
    pub units: i128,
}

/// Index into `cands` of an interval along which the family's load stays
/// above `alpha_units / 2`. Every candidate must contain some common step
/// and the family's total must exceed `alpha_units`; returns `None` otherwise.
///
/// Peels the longest start-ordered prefix and the longest end-ordered suffix
/// each weighing at most half of alpha; any survivor works, the smallest id
/// is returned.
pub(crate) fn pick_intersecting(cands: &[Candidate], alpha_units: i128) -> Option<usize> {
    let total: i128 = cands.iter().map(|c| c.units).sum();
    if total <= alpha_units {
        return None;
    }
    let mut peeled = vec![false; cands.len()];

    let mut by_start: Vec<usize> = (0..cands.len()).collect();
    by_start.sort_by_key(|&i| (cands[i].start, cands[i].id));
    let mut cum = 0i128;
    for &i in &by_start {
        if 2 * (cum + cands[i].units) > alpha_units {
            break;
        }
        cum += cands[i].units;
        peeled[i] = true;
    }

    let mut by_end: Vec<usize> = (0..cands.len()).collect();
    by_end.sort_by_key(|&i| (std::cmp::Reverse(cands[i].end), std::cmp::Reverse(cands[i].id)));
    let mut cum = 0i128;
    for &i in &by_end {
        if 2 * (cum + cands[i].units) > alpha_units {
            break;
        }
        cum += cands[i].units;
        peeled[i] = true;
    }

    (0..cands.len())
        .filter(|&i| !peeled[i])
        .min_by_key(|&i| cands[i].id)
}

/// Picks an interval from `active` (all containing step `t`) such that the
/// load of `active` exceeds `alpha / 2` at every step of the picked interval.
/// Requires the load of `active` at `t` to exceed `alpha`.
pub fn select_intersecting_interval(
    active: &[Interval],
    t: i64,
    alpha: &Rational,
) -> Result<Interval> {
    if let Some(iv) = active.iter().find(|iv| !iv.contains(t)) {
        return Err(Error::Precondition(format!(
            "interval {} does not contain t={t}",
            iv.id()
        )));
    }
    let scale = common_scale(active.iter().map(Interval::size).chain([alpha]))?;
    let alpha_units = to_units(alpha, scale);
    let cands: Vec<Candidate> = active
        .iter()
        .enumerate()
        .map(|(key, iv)| Candidate {
            key,
            id: iv.id(),
            start: iv.start(),
            end: iv.end(),
            units: to_units(iv.size(), scale),
        })
        .collect();
    let pick = pick_intersecting(&cands, alpha_units).ok_or_else(|| {
        Error::Precondition(format!("load at t={t} does not exceed alpha={alpha}"))
    })?;
    Ok(active[pick].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn k_family() -> Vec<Interval> {
        vec![
            Interval::new(1, 0, 6, ratio(1, 1)).unwrap(),
            Interval::new(2, 2, 8, ratio(1, 1)).unwrap(),
            Interval::new(3, 4, 10, ratio(1, 1)).unwrap(),
        ]
    }

    fn family_load(family: &[Interval], t: i64) -> Rational {
        family
            .iter()
            .filter(|iv| iv.contains(t))
            .map(|iv| *iv.size())
            .sum()
    }

    #[test]
    fn picks_middle_of_staggered_family() {
        let fam = k_family();
        let alpha = ratio(2, 1);
        let pick = select_intersecting_interval(&fam, 4, &alpha).unwrap();
        assert_eq!(pick.id().0, 2);
        for t in pick.start()..pick.end() {
            assert!(family_load(&fam, t) > alpha / 2);
        }
    }

    #[test]
    fn singleton_family() {
        let fam = vec![Interval::new(7, 0, 3, ratio(1, 1)).unwrap()];
        let pick = select_intersecting_interval(&fam, 1, &ratio(1, 2)).unwrap();
        assert_eq!(pick.id().0, 7);
    }

    #[test]
    fn load_equal_to_alpha_is_rejected() {
        let fam = k_family();
        assert!(matches!(
            select_intersecting_interval(&fam, 4, &ratio(3, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interval_missing_t_is_rejected() {
        let fam = k_family();
        assert!(select_intersecting_interval(&fam, 1, &ratio(1, 2)).is_err());
    }
}
