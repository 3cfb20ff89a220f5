mod common;

use proptest::prelude::*;
use qpretzel::braid_core::BraidWord;
use qpretzel::braidzel::Braidzel;
use qpretzel::moves::{apply_move, Move, MoveTrace};
use qpretzel::qp::{decide, necessary_condition, sufficient_condition, QpStatus, Witness};

use common::{braidzel, orientable_twists, word};

fn two_band() -> impl Strategy<Value = Braidzel> {
    (-6i64..=6, orientable_twists(2, 7))
        .prop_map(|(m, t)| Braidzel::new(BraidWord::generator_power(2, 1, m).unwrap(), t).unwrap())
}

/// Non-negative braids with nearly negative twists.
fn sufficient_instance() -> impl Strategy<Value = Braidzel> {
    (2usize..=5).prop_flat_map(|k| {
        let positive = prop::collection::vec(1..k as i64, 0..=10);
        let odd = prop::collection::vec(prop::sample::select(vec![-1i64, -3, -5]), k);
        let even = (0..k, prop::collection::vec(prop::sample::select(vec![-2i64, -4]), k)).prop_map(|(z, mut t)| {
            t[z] = 0;
            t
        });
        (positive, prop_oneof![odd, even])
            .prop_map(move |(w, t)| Braidzel::new(BraidWord::from_signed(k, &w).unwrap(), t).unwrap())
    })
}

proptest! {
    #[test]
    fn boundary_count_is_bounded(bz in braidzel(6, 12, 5)) {
        let b = bz.boundary_components();
        prop_assert!(b >= 1 && b <= bz.k() + 1);
        let rest = 2 - bz.euler_characteristic() - b as i64;
        prop_assert!(rest >= 0 && rest % 2 == 0);
    }

    #[test]
    fn sub_braidzel_keeps_crossing_counts(bz in braidzel(6, 12, 5), mask in 1u32..64) {
        let k = bz.k();
        let subset: Vec<usize> = (1..=k).filter(|b| mask & (1 << (b - 1)) != 0).collect();
        prop_assume!(!subset.is_empty());
        let sub = bz.sub_braidzel(&subset).unwrap();
        for (a, &i) in subset.iter().enumerate() {
            prop_assert_eq!(sub.twists()[a], bz.twists()[i - 1]);
            for (b, &j) in subset.iter().enumerate().skip(a + 1) {
                prop_assert_eq!(sub.braid().crossing_count(a + 1, b + 1).unwrap(), bz.braid().crossing_count(i, j).unwrap());
            }
        }
    }

    #[test]
    fn moves_preserve_profile(bz in braidzel(6, 12, 5)) {
        for m in Move::ALL {
            prop_assert_eq!(apply_move(&bz, m).profile(), bz.profile(), "{}", m);
        }
    }

    #[test]
    fn inverse_moves_undo(bz in braidzel(6, 12, 5)) {
        for m in Move::ALL {
            let back = apply_move(&apply_move(&bz, m), m.inverse());
            prop_assert_eq!(back.twists(), bz.twists());
            prop_assert!(back.braid().words_equal(bz.braid()).unwrap());
        }
    }

    #[test]
    fn random_traces_verify_and_round_trip(bz in braidzel(5, 8, 5), idx in prop::collection::vec(0usize..12, 0..8)) {
        let moves: Vec<Move> = idx.iter().map(|&i| Move::ALL[i]).collect();
        let tr = MoveTrace::replay(bz, &moves);
        prop_assert!(tr.verify());
        let back = MoveTrace::from_jsonl(&tr.to_jsonl()).unwrap();
        prop_assert_eq!(back, tr);
    }

    #[test]
    fn annulus_quantity_and_verdict_are_move_invariant(bz in two_band()) {
        let quantity = |b: &Braidzel| b.twists()[0] + b.twists()[1] - 2 * b.braid().crossing_count(1, 2).unwrap();
        let status = decide(&bz, None).unwrap().status;
        for m in Move::ALL {
            let after = apply_move(&bz, m);
            prop_assert_eq!(quantity(&after), quantity(&bz));
            prop_assert_eq!(decide(&after, None).unwrap().status, status);
        }
    }

    #[test]
    fn sufficient_implies_no_obstruction(bz in sufficient_instance()) {
        prop_assert!(sufficient_condition(&bz));
        prop_assert_eq!(necessary_condition(&bz).unwrap(), None);
        prop_assert!(decide(&bz, Some(0)).unwrap().status.is_quasipositive());
    }

    #[test]
    fn verdicts_re_verify(bz in braidzel(4, 6, 4)) {
        let v = decide(&bz, Some(2)).unwrap();
        prop_assert!(v.check(&bz), "{:?}", v);
        match (&v.status, &v.witness) {
            (QpStatus::NotQuasipositive, Witness::Obstruction(_)) | (QpStatus::Unknown, Witness::None) => {}
            (s, Witness::Certificate(_)) => prop_assert!(s.is_quasipositive()),
            other => prop_assert!(false, "inconsistent verdict {:?}", other),
        }
    }

    #[test]
    fn obstruction_is_move_invariant(k in 2usize..=5, w in word(5, 8), t in orientable_twists(5, 5), m in 0usize..12) {
        let w: Vec<i64> = w.into_iter().filter(|x| (x.unsigned_abs() as usize) < k).collect();
        let bz = Braidzel::new(BraidWord::from_signed(k, &w).unwrap(), t[..k].to_vec()).unwrap();
        let after = apply_move(&bz, Move::ALL[m]);
        prop_assert_eq!(necessary_condition(&bz).unwrap().is_some(), necessary_condition(&after).unwrap().is_some());
    }
}

#[test]
fn exhaustive_pretzel_knots() {
    for k in 2..=6 {
        common::each_orientable(k, 5, |t| {
            let p = Braidzel::pretzel(t).unwrap();
            let knot = p.boundary_components() == 1;
            assert_eq!(knot, k % 2 == 1 && t.iter().all(|x| x % 2 != 0), "{t:?}");
        });
    }
}
