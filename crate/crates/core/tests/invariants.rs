use proptest::prelude::*;

use tilepar_core::corpus::theorem_checks;
use tilepar_core::count::{count_via_matching, enumerate_tilings};
use tilepar_core::reduce::{reduce_to_trace, Strategy as Plan};
use tilepar_core::trace::{verify_record, TraceRecord};
use tilepar_core::{
    count_tilings, find_corners, parity_tilings, Cell, CountOptions, Region, Symmetry,
};

/// Subsets of a small box, given as a bit mask.
fn boxed_region(rows: i32, cols: i32) -> impl Strategy<Value = Region> {
    let n = (rows * cols) as u32;
    (0u64..(1u64 << n)).prop_map(move |mask| {
        (0..rows * cols)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| Cell::new(i % cols, i / cols))
            .collect()
    })
}

fn any_region() -> impl Strategy<Value = Region> {
    prop_oneof![boxed_region(4, 4), boxed_region(3, 6), boxed_region(5, 4)]
}

fn leg_shapes(region: &Region) -> Vec<(usize, usize, usize)> {
    let mut shapes: Vec<_> = find_corners(region)
        .iter()
        .map(|c| (c.s.min(c.t), c.s.max(c.t), c.p))
        .collect();
    shapes.sort();
    shapes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn three_counts_agree(region in any_region()) {
        let dp = count_tilings(&region).unwrap();
        let matched = count_via_matching(&region).unwrap();
        prop_assert_eq!(&dp, &matched);
        let listed = enumerate_tilings(&region, 100_000).unwrap();
        prop_assert!(!listed.truncated);
        prop_assert_eq!(dp.to_string(), listed.tilings.len().to_string());
        for t in &listed.tilings {
            prop_assert!(t.is_tiling_of(&region));
        }
        prop_assert_eq!(parity_tilings(&region).unwrap(), dp.parity());
    }

    #[test]
    fn count_is_invariant_under_symmetry(region in any_region(), index in 0u8..8) {
        let g = Symmetry::from_index(index).unwrap();
        let moved = region.transform(g);
        prop_assert_eq!(count_tilings(&region).unwrap(), count_tilings(&moved).unwrap());
    }

    #[test]
    fn corners_move_with_the_region(region in any_region(), index in 0u8..8) {
        let g = Symmetry::from_index(index).unwrap();
        prop_assert_eq!(leg_shapes(&region), leg_shapes(&region.transform(g)));
    }

    #[test]
    fn disjoint_pieces_multiply(a in boxed_region(3, 4), b in boxed_region(4, 3)) {
        let far = b.translate((10, 0));
        let both = a.union(&far);
        let product = count_tilings(&a).unwrap().into_inner() * count_tilings(&far).unwrap().into_inner();
        prop_assert_eq!(count_tilings(&both).unwrap().into_inner(), product);
    }

    #[test]
    fn parity_identity_holds_on_every_complete_corner(region in any_region()) {
        let report = theorem_checks(&region, &CountOptions::default()).unwrap();
        prop_assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn greedy_traces_replay(region in any_region()) {
        let trace = reduce_to_trace(&region, &Plan::WallGreedy).unwrap();
        prop_assert_eq!(trace.parity, parity_tilings(&region).unwrap());
        prop_assert_eq!(&trace, &reduce_to_trace(&region, &Plan::WallGreedy).unwrap());
        for step in &trace.steps {
            let strip = Region::new(step.removed.iter().copied());
            prop_assert_eq!(strip.len() % 2, 0);
            prop_assert_eq!(strip.color_imbalance(), 0);
        }
        let text = trace.to_record("region").to_text();
        let record = TraceRecord::parse(&text).unwrap();
        let report = verify_record(&region, &record);
        prop_assert!(report.all_pass(), "{}", report.to_text());
    }
}

#[test]
fn tampered_terminal_is_reported() {
    let region = tilepar_core::region::rectangle(4, 6).unwrap();
    let trace = reduce_to_trace(&region, &Plan::WallGreedy).unwrap();
    let mut record = trace.to_record("rect:4,6");
    record.terminal = Some("##/##".into());
    let report = verify_record(&region, &record);
    assert!(!report.all_pass());
}
