use proptest::prelude::*;

use dynbin::harness::{emit_trace, parse_trace, run_algorithm, Algorithm, Predictions};
use dynbin::model::ratio;
use dynbin::packers::{static_pack, PackEvent, PackerKind, StaticItem};
use dynbin::{validate_schedule, Instance, Interval, LoadMode, Rational};

fn instance() -> impl Strategy<Value = Instance> {
    let den = prop::sample::select(vec![1i128, 2, 3, 4, 5, 8, 12]);
    (den, prop::bool::ANY).prop_flat_map(|(den, uniform)| {
        let item = (0i64..20, 1i64..9, 1i128..=den);
        prop::collection::vec(item, 0..25).prop_map(move |items| {
            let intervals = items
                .into_iter()
                .enumerate()
                .map(|(i, (s, l, k))| {
                    let size = if uniform { ratio(1, den) } else { ratio(k, den) };
                    Interval::new(i as u32 + 1, s, s + l, size).unwrap()
                })
                .collect();
            Instance::new(intervals).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_scheduler_is_valid_and_above_the_load(inst in instance()) {
        let preds = Predictions::exact(&inst);
        let l1 = inst.load_vector(LoadMode::Raw).norm1();
        for alg in Algorithm::all() {
            let s = run_algorithm(alg, &inst, &preds).unwrap();
            prop_assert!(validate_schedule(&inst, &s).is_ok(), "{}", alg);
            prop_assert!(Rational::from_integer(s.cost().unwrap() as i128) >= l1, "{}", alg);
        }
    }

    #[test]
    fn load_norm_is_size_times_length(inst in instance()) {
        let direct: Rational = inst
            .intervals()
            .iter()
            .map(|iv| iv.size() * Rational::from_integer(iv.len() as i128))
            .sum();
        prop_assert_eq!(inst.load_vector(LoadMode::Raw).norm1(), direct);
        let ceiled = inst.load_vector(LoadMode::Ceiled);
        let raw = inst.load_vector(LoadMode::Raw);
        for ((_, c), (_, r)) in ceiled.iter().zip(raw.iter()) {
            prop_assert!(c >= r && c - r < ratio(1, 1));
        }
    }

    #[test]
    fn trace_round_trip(inst in instance()) {
        prop_assert_eq!(parse_trace(&emit_trace(&inst, None)).unwrap().instance, inst);
    }

    #[test]
    fn static_packers_respect_capacity(sizes in prop::collection::vec((1i128..=12, 12i128..=12), 0..40)) {
        let items: Vec<StaticItem> = sizes
            .iter()
            .enumerate()
            .map(|(i, &(n, d))| StaticItem::new(i as u32, ratio(n, d)).unwrap())
            .collect();
        for kind in [PackerKind::NextFit, PackerKind::Harmonic(3), PackerKind::Harmonic(6)] {
            let mut packer = kind.build().unwrap();
            let log = static_pack(&items, packer.as_mut()).unwrap();
            let mut load = std::collections::BTreeMap::new();
            for ev in &log.events {
                if let PackEvent::Placed { item, bin } = ev {
                    *load.entry(*bin).or_insert(ratio(0, 1)) += items[*item as usize].size;
                }
            }
            prop_assert!(load.values().all(|l| *l <= ratio(1, 1)));
        }
    }
}
