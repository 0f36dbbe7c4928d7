//! Segment and report invariants on random inputs.

use kahler::io::{from_json, parse_document, run_document, to_json};
use kahler::oracle::{random_group, segment_bruteforce, GridWindow, RawSegment, SegmentOp, Verdict};
use kahler::ordgrp::ValueInf;
use kahler::segment::{annihilator_segment, module_report};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn annihilator_of_a_segment_with_itself_contains_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng);
        let s = RawSegment::random(&g, &mut rng).build(&g).unwrap();
        let ann = annihilator_segment(&g, &s, &s).unwrap();
        prop_assert!(ann.member(&g, &ValueInf::Finite(g.zero())).unwrap());
    }

    #[test]
    fn translation_is_invertible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng);
        let s = RawSegment::random(&g, &mut rng).build(&g).unwrap();
        let t = g.basis(g.rank() - 1);
        let back = s.translate(&g, &t).unwrap().translate(&g, &-&t).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn module_is_zero_iff_segments_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng);
        let a = RawSegment::random(&g, &mut rng).build(&g).unwrap();
        let b = RawSegment::random(&g, &mut rng).build(&g).unwrap();
        let (alpha, beta) = if b.is_subset(&a) { (a, b) } else if a.is_subset(&b) { (b, a) } else { return Ok(()) };
        let m = module_report(&g, &alpha, &beta).unwrap();
        prop_assert_eq!(m.is_zero, alpha == beta);
        prop_assert!(!m.fin_pres || m.fin_gen);
        if m.is_zero {
            prop_assert!(m.ann.member(&g, &ValueInf::Finite(g.zero())).unwrap());
        }
    }

    #[test]
    fn annihilators_agree_with_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng);
        let w = GridWindow::for_group(&g, 2);
        let op = SegmentOp::AnnihilatorSegment {
            alpha: RawSegment::random(&g, &mut rng),
            beta: RawSegment::random(&g, &mut rng),
        };
        let v = segment_bruteforce(&op, &w).unwrap();
        prop_assert!(!matches!(v, Verdict::Disagree { .. }), "{:?}: {:?}", op, v);
    }

    #[test]
    fn defect_reports_round_trip(sup in -6i64..6, p in prop::sample::select(vec![2u64, 3, 5]), kummer in any::<bool>()) {
        let kind = if kummer { "kummer" } else { "artin_schreier" };
        let text = format!(
            r#"{{"case":"pure_defect","n":{p},"p":{p},"group":[{{"gen":"1","div":{p}}}],
                "v_eta_K":{{"kind":"inc_to_sup","sup":"{sup}","attained":false}},"kind":"{kind}"}}"#
        );
        // Specs outside the defect range are rejected, never mis-reported.
        let Ok(r) = parse_document(&text).and_then(|d| run_document(&d)) else { return Ok(()) };
        prop_assert!(!r.inconsistent);
        prop_assert_eq!(to_json(&from_json(&to_json(&r)).unwrap()), to_json(&r));
        prop_assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }
}
