mod common;

use std::sync::LazyLock;

use common::*;
use dlab_core::inverse;
use dlab_core::product::{self, SolverConfig, SpacerChoice, PairCheck, PairState};
use dlab_core::recurrence::{self, EscapeSide, WindowPoint};
use dlab_core::Block;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

static BUILT: LazyLock<Vec<PairState>> = LazyLock::new(|| {
    let cfg = SolverConfig::default();
    let mut v = vec![PairState::initial()];
    while v.len() < 4 {
        let next = product::solve_spacers(v.last().unwrap(), &cfg).unwrap().next;
        v.push(next);
    }
    v
});

fn d(p: &WindowPoint<'_>, q: &WindowPoint<'_>) -> BigRational {
    recurrence::window_distance(p, q).unwrap()
}

fn wide_pair() -> impl Strategy<Value = (Block, Block)> {
    (prop::collection::vec(sparse_symbol(2), 41), prop::collection::vec(sparse_symbol(2), 41))
        .prop_map(|(a, b)| (Block::centered(a).unwrap(), Block::centered(b).unwrap()))
}

proptest! {
    #[test]
    fn window_distance_is_a_metric((a, b) in wide_pair(), c in prop::collection::vec(sparse_symbol(2), 41), w in 0u32..10) {
        let c = Block::centered(c).unwrap();
        let (p, q, r) = (
            WindowPoint::two_sided(&a, 0, w),
            WindowPoint::two_sided(&b, 0, w),
            WindowPoint::two_sided(&c, 0, w),
        );
        prop_assert!(d(&p, &p).is_zero());
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r));
    }

    #[test]
    fn wider_windows_move_by_at_most_the_tail((a, b) in wide_pair(), w in 0u32..10, extra in 1u32..10) {
        let near = d(&WindowPoint::two_sided(&a, 0, w), &WindowPoint::two_sided(&b, 0, w));
        let far = d(&WindowPoint::two_sided(&a, 0, w + extra), &WindowPoint::two_sided(&b, 0, w + extra));
        prop_assert!(near <= far);
        prop_assert!(far <= near + recurrence::tail_bound(w));
    }

    #[test]
    fn recurrence_times_match_scan(a in prop::collection::vec(sparse_symbol(1), 61), w in 0u32..4, eps_den in 1i64..6) {
        let b = Block::centered(a).unwrap();
        let p = WindowPoint::two_sided(&b, -20, w);
        let eps = ratio(1, eps_den);
        let times = recurrence::epsilon_recurrence_times(&[p], &eps, 30).unwrap();
        let scan: Vec<u64> = (1..=30u64)
            .filter(|&n| {
                (-(w as i64)..=w as i64).all(|i| {
                    let diff = big(b.get_or_zero(-20 + n as i64 + i)) - big(b.get_or_zero(-20 + i));
                    let diff = if diff < BigRational::zero() { -diff } else { diff };
                    diff * recurrence::pow2_inv(i.unsigned_abs() as u32) < eps
                })
            })
            .collect();
        prop_assert_eq!(times, scan);
    }
}

#[test]
fn distance_examples() {
    let zeros = Block::zeros(-4, 9).unwrap();
    let one_mid = zeros.with_symbol(0, dlab_core::Symbol::one()).unwrap();
    let one_two = zeros.with_symbol(2, dlab_core::Symbol::one()).unwrap();
    let z = WindowPoint::two_sided(&zeros, 0, 2);
    assert_eq!(d(&z, &WindowPoint::two_sided(&one_mid, 0, 2)), ratio(1, 1));
    assert_eq!(d(&WindowPoint::two_sided(&one_two, 0, 2), &z), ratio(1, 4));
}

#[test]
fn second_rigidity_time_recurs_on_the_prefix() {
    // radius 1 around the start of x; data from stage 4 so every shift up to 60 is in range
    let st = inverse::build(4).unwrap();
    let p = WindowPoint::one_sided(st.prefix(), 0, 1);
    let eps = ratio(1, 2) + recurrence::tail_bound(1);
    let times = recurrence::epsilon_recurrence_times(&[p], &eps, 60).unwrap();
    assert!(times.contains(&12), "{times:?}");
}

#[test]
fn shift_rigidity_restated_with_the_metric() {
    let st = inverse::build(5).unwrap();
    let x = st.prefix();
    for k in 1..=4usize {
        let n = st.lengths()[k - 1];
        let w = k as u32 - 1;
        let eps = ratio(1, k as i64) + recurrence::tail_bound(w);
        let last = x.end() - n as i64 - w as i64;
        for i in (x.base()..=last).filter(|&i| x.has_nonzero_in(i, i + w as i64)) {
            let p = WindowPoint::one_sided(x, i - x.base(), w);
            let q = p.shifted(n as i64);
            assert!(d(&q, &p) < eps, "k={k} i={i}");
        }
    }
}

#[test]
fn pair_never_returns_on_any_stage() {
    for st in BUILT.iter() {
        let r = recurrence::pair_separation_check(st, st.half_width() as u64).unwrap();
        assert!(r.passed(), "{r}");
    }
    let st = &BUILT[1];
    let h = st.half_width() as u64;
    let pair = [WindowPoint::two_sided(st.x(), 0, 0), WindowPoint::two_sided(st.y(), 0, 0)];
    assert!(recurrence::epsilon_recurrence_times(&pair, &ratio(1, 1), h).unwrap().is_empty());
}

#[test]
fn escape_matches_scan() {
    let st = &BUILT[2];
    for (side, k, w) in [(EscapeSide::XatN, 1, 1), (EscapeSide::YatM, 2, 2), (EscapeSide::XatN, 2, 0)] {
        let map = recurrence::escape_witness(st, k, w, side).unwrap();
        assert!(map.passed());
        let (block, scale) = match side {
            EscapeSide::XatN => (st.x(), st.n(k).unwrap() as i64),
            EscapeSide::YatM => (st.y(), st.m(k).unwrap() as i64),
        };
        let w = w as i64;
        for (j, r) in map.centers() {
            let clear = |r: i64| (-w..=w).all(|i| block.at(j + r * scale + i).unwrap().is_zero());
            let first = (1..=3).find(|&r| clear(r)).unwrap();
            assert_eq!(first, r as i64, "center {j}");
        }
    }
}

#[test]
fn rigidity_and_escape_give_cross_witnesses() {
    for st in BUILT.iter().skip(1) {
        for k in 1..=st.times_defined() {
            let m = st.m(k).unwrap();
            for w in (0..=k as u64).filter(|&w| w < m) {
                let rigid = product::verify(st, PairCheck::RigidityX(k)).unwrap().passed()
                    && product::verify(st, PairCheck::RigidityY(k)).unwrap().passed();
                let x_esc = recurrence::escape_witness(st, k, w, EscapeSide::XatN).unwrap().passed();
                let y_esc = recurrence::escape_witness(st, k, w, EscapeSide::YatM).unwrap().passed();
                let (r, _) = recurrence::cross_omega_witness(st, k, w).unwrap();
                if rigid && x_esc && y_esc {
                    assert!(r.passed(), "stage {} {r}", st.stage());
                }
            }
        }
    }
}

#[test]
fn third_stage_cross_witness() {
    let (r, choices) = recurrence::cross_omega_witness(&BUILT[2], 2, 1).unwrap();
    assert!(r.passed(), "{r}");
    assert!(choices.iter().all(|&(_, rx, ry)| (1..=3).contains(&rx) && (1..=3).contains(&ry)));
}

#[test]
fn hand_instance_recurrence() {
    let st = product::build_stage(&PairState::initial(), &SpacerChoice { s: 2, t: 24, sp: 8, tp: 18 }).unwrap();
    assert!(recurrence::pair_separation_check(&st, 27).unwrap().passed());
    assert!(recurrence::escape_witness(&st, 1, 1, EscapeSide::XatN).unwrap().passed());
    assert!(recurrence::escape_witness(&st, 1, 0, EscapeSide::YatM).unwrap().passed());
    assert!(recurrence::cross_omega_witness(&st, 1, 0).unwrap().0.passed());
}
