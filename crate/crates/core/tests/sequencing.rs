mod common;

use ellgood_core::analysis::{expected_type_counts, is_ell_good, refined_bound, type_counts};
use ellgood_core::design::{admissible_order, construct, fixtures, skolem_construction, Construction};
use ellgood_core::search::{search_sequencing, SearchConfig, SearchVerdict};
use ellgood_core::sequencer::{compute_layout, sequence, Layout, SequencingParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// No window may touch two cores, and no window may hold a core position
/// together with a pinned position.
fn assert_window_separation(layout: &Layout) {
    let ell = layout.ell;
    let mut core_of = vec![None; layout.v];
    let mut pinned = vec![false; layout.v];
    for seg in &layout.segments {
        for p in seg.core.clone() {
            core_of[p] = Some(seg.index);
        }
        for &p in &seg.pinned {
            pinned[p] = true;
        }
    }
    for start in 0..=layout.v - ell {
        let window = start..start + ell;
        let cores: std::collections::BTreeSet<usize> = window.clone().filter_map(|p| core_of[p]).collect();
        assert!(cores.len() <= 1, "window {start} touches cores {cores:?}");
        if !cores.is_empty() {
            assert!(!window.clone().any(|p| pinned[p]), "window {start} mixes core and pin");
        }
    }
}

fn assert_layout_shape(layout: &Layout) {
    let ell = layout.ell;
    let mut cursor = 0;
    for (k, seg) in layout.segments.iter().enumerate() {
        assert_eq!(seg.index, k + 1);
        assert_eq!(seg.left_buffer.start, cursor);
        assert_eq!(seg.left_buffer.len(), if k == 0 { 0 } else { ell - 1 });
        assert_eq!(seg.core.start, seg.left_buffer.end);
        assert_eq!(seg.core.len(), k + 1);
        assert_eq!(seg.right_buffer.start, seg.core.end);
        assert_eq!(seg.right_buffer.len(), ell - 1);
        assert_eq!(seg.overflow.start, seg.right_buffer.end);
        assert!(seg.pinned.iter().all(|p| seg.overflow.contains(p)));
        cursor = seg.overflow.end;
    }
    assert_eq!(layout.gap.start, cursor);
    assert_eq!(layout.tail.start, layout.gap.end);
    assert_eq!(layout.tail.end, layout.v);
    assert_eq!(layout.tail.len(), (ell - 1) * (ell - 2) / 2);
}

#[test]
fn worst_case_layouts_are_separated() {
    for ell in 3..=7 {
        let params = SequencingParams::new(ell).unwrap();
        let lo = refined_bound(ell) as usize;
        for v in [lo, lo + 1, lo + 37] {
            let layout = compute_layout(v, params).unwrap();
            assert_layout_shape(&layout);
            assert_window_separation(&layout);
            let gap_min = if ell % 2 == 0 { ell - 2 } else { ell - 1 };
            assert!(layout.gap.len() >= gap_min);
        }
        assert!(compute_layout(lo - 1, params).is_err());
    }
}

#[test]
fn sweep_three_four_five() {
    for ell in [3usize, 4, 5] {
        let lo = refined_bound(ell) as usize;
        for v in (lo..=lo + 300).filter(|&v| admissible_order(v)) {
            let sts = construct(v, Construction::Auto).unwrap();
            let s = sequence(&sts, ell).unwrap_or_else(|e| panic!("ell {ell} v {v}: {e}"));
            assert!(is_ell_good(&sts, &s.permutation, ell).unwrap().is_good());
            assert_layout_shape(&s.layout);
            assert_window_separation(&s.layout);
            assert_eq!(
                Some(type_counts(&sts, &s.permutation, ell).unwrap()),
                expected_type_counts(v, ell)
            );
        }
    }
}

#[test]
fn relabelled_systems_and_core_swaps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut core_swaps = 0;
    for ell in [3usize, 4] {
        let lo = refined_bound(ell) as usize;
        for v in (lo..=lo + 60).filter(|&v| admissible_order(v)) {
            let base = construct(v, Construction::Auto).unwrap();
            for _ in 0..10 {
                let sts = common::relabel(&base, &mut rng);
                let s = sequence(&sts, ell).unwrap();
                let perm = s.permutation.as_slice();
                assert!(common::window_scan_good(&sts, perm, ell));
                for (rec, seg) in s.swaps.iter().zip(&s.layout.segments) {
                    if matches!(rec.action, ellgood_core::sequencer::SwapAction::WithCore(_)) {
                        core_swaps += 1;
                        assert_eq!(common::window_scan_range(&sts, perm, seg.span(), ell), None);
                    }
                }
            }
        }
    }
    assert!(core_swaps > 0);
}

#[test]
fn sequencer_agrees_with_search() {
    let sts = fixtures::cyclic13();
    let s = sequence(&sts, 3).unwrap();
    assert!(is_ell_good(&sts, &s.permutation, 3).unwrap().is_good());
    let found = search_sequencing(&sts, 3, &SearchConfig::default()).unwrap();
    assert!(matches!(found.verdict, SearchVerdict::Found(_)));
}

#[test]
fn sequence_121_is_four_good() {
    let sts = skolem_construction(121).unwrap();
    let s = sequence(&sts, 4).unwrap();
    assert!(common::window_scan_good(&sts, s.permutation.as_slice(), 4));
    assert!(common::window_scan_good(&sts, s.permutation.as_slice(), 3));
}

#[test]
fn search_matches_naive_enumeration_on_fano() {
    let fano = fixtures::fano();
    for ell in [3usize, 4] {
        for fix in [false, true] {
            let cfg = SearchConfig {
                symmetry_fixing: fix,
                ..SearchConfig::default()
            };
            let pruned = search_sequencing(&fano, ell, &cfg).unwrap();
            let naive = common::naive_search(&fano, ell, fix);
            assert_eq!(
                pruned.found().map(|p| p.as_slice().to_vec()),
                naive,
                "ell {ell} fix {fix}"
            );
        }
    }
}

#[test]
fn fixing_is_refused_for_non_transitive_systems() {
    let sts = skolem_construction(19).unwrap();
    assert!(!ellgood_core::search::is_point_transitive(&sts));
    let out = search_sequencing(&sts, 3, &SearchConfig::default()).unwrap();
    assert!(!out.symmetry_applied);
    assert!(out.found().is_some());
}
