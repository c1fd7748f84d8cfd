use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randwave::moments::*;

#[test]
fn enumeration_matches_multinomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 1..=10 {
        for p in [2, 4, 6, 8] {
            for _ in 0..5 {
                let c: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let a = enumerated_moment(&c, p).unwrap();
                let b = multinomial_moment(&c, p).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "K = {k}, p = {p}");
            }
        }
    }
}

#[test]
fn largest_exact_instance() {
    let c: Vec<f64> = (1..=24).map(|i| 1.0 / i as f64).collect();
    let m = exact_moment(&c, 4).unwrap();
    let l2: f64 = c.iter().map(|x| x * x).sum();
    let l4: f64 = c.iter().map(|x| x.powi(4)).sum();
    // E(sum eps c)^4 = 3 (sum c^2)^2 - 2 sum c^4
    let want = 3.0 * l2 * l2 - 2.0 * l4;
    assert!((m - want).abs() <= 1e-12 * want);
}

#[test]
fn khinchine_ratio_at_most_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let k = rng.gen_range(1..=10);
        let c: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for p in [2, 4, 6, 8, 10, 12] {
            let r = khinchine_ratio(&c, p as f64, 0).unwrap();
            assert!(r <= 1.0, "{c:?}, p = {p}: {r}");
        }
    }
}

#[test]
fn khinchine_fractional_moment() {
    let c = [1.0, 0.5, -0.25, 2.0];
    let r = khinchine_ratio(&c, 3.0, 9).unwrap();
    // sandwiched by the exact p = 2 and p = 4 norms
    let l2: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n2 = exact_moment(&c, 2).unwrap().sqrt();
    let n4 = exact_moment(&c, 4).unwrap().powf(0.25);
    let n3 = r * 3f64.sqrt() * l2;
    assert!(n2 <= n3 + 1e-3 && n3 <= n4 + 1e-3, "{n2} {n3} {n4}");
    assert!(r <= 1.0);
}

#[test]
fn decoupled_uniform_coefficients() {
    let v = decoupled_moment_check(
        |rng, b| b.iter_mut().for_each(|x| *x = rng.gen::<f64>()),
        8,
        4,
        100_000,
        3,
    )
    .unwrap();
    assert!(v.holds_with(1.2), "{v:?}");
    assert!(v.std_err < 0.01);
}

#[test]
fn decoupled_deterministic_reduces_to_khinchine() {
    let c = [0.3, -1.0, 0.7, 0.2, 1.1];
    let v = decoupled_moment_check(|_, b| b.copy_from_slice(&c), 5, 4, 20_000, 1).unwrap();
    let exact = khinchine_ratio(&c, 4.0, 0).unwrap();
    assert!((v.constant - exact).abs() < 5.0 * v.std_err.max(1e-3));
    assert!(v.holds_with(1.0));
}

#[test]
fn normconstant_random_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let len = rng.gen_range(1..=8);
        let j = rng.gen_range(1..=10);
        let ks = random_multi_index(&mut rng, len, j);
        assert!(normconstant_term(&ks).unwrap().holds(), "{ks:?}");
    }
}

#[test]
fn stirling_suite() {
    let table = stirling2_table(30).unwrap();
    for j in 0..=30u32 {
        for r in 0..=j {
            assert_eq!(stirling2(j, r).unwrap(), table[j as usize][r as usize]);
        }
    }
    assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
    assert_eq!(surjection_count(4, 2).unwrap().count, BigUint::from(14u32));
    for n in 1..=20 {
        for r in 1..=n {
            assert!(surjection_count(n, r).unwrap().holds(), "N = {n}, r = {r}");
            assert!(stirling_refined_bound_check(n, r).unwrap().holds(), "j = {n}, r = {r}");
        }
    }
}

#[test]
fn partition_classes_reconcile() {
    let bells = bell_numbers(12);
    for j in 1..=12u32 {
        let classes = partition_classes(j).unwrap();
        for r in 1..=j {
            let total: BigUint = classes.iter().filter(|c| c.r() == r).map(|c| c.count.clone()).sum();
            assert_eq!(total, stirling2(j, r).unwrap(), "j = {j}, r = {r}");
        }
        assert!(classes.iter().all(|c| c.alphas.iter().sum::<u32>() == j && c.alphas.iter().all(|&a| a >= 1)));
        let all: BigUint = classes.iter().map(|c| c.count.clone()).sum();
        assert_eq!(all, bells[j as usize]);
    }
}

fn growth(c: f64, n: f64) -> MomentGrowth {
    MomentGrowth {
        c,
        alpha: 1.0,
        n,
        k: 2.0,
        p0: 2.0,
    }
}

proptest! {
    #[test]
    fn exact_moment_is_sign_and_order_invariant(c in prop::collection::vec(-3.0f64..3.0, 1..8), p in prop::sample::select(vec![2u32, 4, 6])) {
        let a = exact_moment(&c, p).unwrap();
        let mut d: Vec<f64> = c.iter().rev().map(|x| -x).collect();
        d.rotate_left(1);
        let b = exact_moment(&d, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn tail_monotone(lambda in 0.01f64..50.0, dl in 0.01f64..10.0, c in 0.1f64..5.0, dc in 0.01f64..5.0, n in 0.1f64..10.0) {
        let b0 = tail_from_moments(&growth(c, n), lambda).unwrap().bound;
        let b1 = tail_from_moments(&growth(c, n), lambda + dl).unwrap().bound;
        let b2 = tail_from_moments(&growth(c + dc, n), lambda).unwrap().bound;
        prop_assert!(b1 <= b0);
        prop_assert!(b2 >= b0);
    }

    #[test]
    fn tail_scale_invariance(lambda in 0.01f64..50.0, n in 0.1f64..10.0) {
        let a = tail_from_moments(&growth(1.3, n), lambda).unwrap().bound;
        let b = tail_from_moments(&growth(1.3, 2.0 * n), lambda / 2.0).unwrap().bound;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }
}

#[test]
fn tail_vanishes_at_infinity() {
    let m = growth(1.0, 1.0);
    let mut prev = f64::INFINITY;
    for e in 0..12 {
        let b = tail_from_moments(&m, 10f64.powi(e)).unwrap().bound;
        assert!(b <= prev);
        prev = b;
    }
    assert!(prev < 1e-100);
}

#[test]
fn verdict_csv() {
    let v = Verdict::new("stirling2", "j=4,r=2", "7", true);
    assert_eq!(v.to_csv(), "stirling2,\"j=4,r=2\",7,pass");
}
