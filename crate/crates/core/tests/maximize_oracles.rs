mod support;

use evinf_core::maximize::select_greedy_naive_with_stats;
use evinf_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

#[test]
fn celf_equals_naive_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let n = rng.gen_range(1..=30);
        let k = rng.gen_range(1..=5);
        let p = rng.gen_range(0.02..0.3);
        let (g, w) = random_instance(&mut rng, n, p);
        let f = InfluenceField::from_weights(&g, w).unwrap();
        let (celf, celf_stats) =
            select_celf_with(&f, k, |st| g.users().map(|u| st.gain(u)).collect()).unwrap();
        let (naive, naive_stats) = select_greedy_naive_with_stats(&f, k).unwrap();
        assert_eq!(celf, naive);
        assert_eq!(celf, select_celf(&f, k).unwrap());
        assert!(celf_stats.gain_evaluations <= naive_stats.gain_evaluations);
        assert_eq!(celf.len(), k.min(n));
    }
}

#[test]
fn selection_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..60 {
        let n = rng.gen_range(2..=25);
        let (g, w) = random_instance(&mut rng, n, 0.2);
        let f = InfluenceField::from_weights(&g, w).unwrap();
        let sel = select_celf(&f, 6).unwrap();
        let mut prev = 0.0;
        let mut users = std::collections::BTreeSet::new();
        for (i, s) in sel.seeds.iter().enumerate() {
            assert_eq!(s.rank, i + 1);
            assert!(users.insert(s.user));
            assert!(s.cumulative_sigma >= prev);
            assert!(close(s.cumulative_sigma, prev + s.marginal_gain, 1e-6));
            // the gain a seed was committed with is its true gain at that point
            let before: Vec<UserId> = sel.seeds[..i].iter().map(|x| x.user).collect();
            assert!(close(
                s.marginal_gain,
                f.marginal_gain(&before, s.user).unwrap(),
                1e-9
            ));
            prev = s.cumulative_sigma;
        }
        assert!(close(sel.sigma(), f.sigma(&sel.users()).unwrap(), 1e-6));
    }
}

#[test]
fn greedy_within_one_minus_inv_e_of_optimum() {
    let bound = 1.0 - (-1.0f64).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let k = rng.gen_range(1..=3);
        let p = rng.gen_range(0.1..0.6);
        let (g, w) = random_instance(&mut rng, n, p);
        let f = InfluenceField::from_weights(&g, w).unwrap();
        let greedy = select_greedy_naive(&f, k).unwrap();
        let opt = select_exhaustive(&f, k).unwrap();
        let opt_sigma = f.sigma(&opt).unwrap();
        assert!(f.sigma(&greedy.users()).unwrap() >= bound * opt_sigma - 1e-9);
        assert!(opt_sigma >= f.sigma(&greedy.users()).unwrap() - 1e-9);
    }
}

#[test]
fn k_one_is_argmax_of_singletons() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..50 {
        let n = rng.gen_range(1..=15);
        let (g, w) = random_instance(&mut rng, n, 0.3);
        let f = InfluenceField::from_weights(&g, w).unwrap();
        let mut best = (f64::NEG_INFINITY, UserId(0));
        for u in g.users() {
            let s = f.sigma(&[u]).unwrap();
            if s > best.0 {
                best = (s, u);
            }
        }
        assert_eq!(select_celf(&f, 1).unwrap().seeds[0].user, best.1);
    }
}

#[test]
fn full_selection_reaches_user_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let (g, w) = random_instance(&mut rng, 9, 0.4);
    let f = InfluenceField::from_weights(&g, w).unwrap();
    let sel = select_celf(&f, 9).unwrap();
    assert_eq!(sel.len(), 9);
    assert!(close(sel.sigma(), 9.0, 1e-9));
}

#[test]
fn repeated_runs_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let (g, w) = random_instance(&mut rng, 20, 0.2);
    let f = InfluenceField::from_weights(&g, w).unwrap();
    assert_eq!(
        select_greedy_naive(&f, 5).unwrap(),
        select_greedy_naive(&f, 5).unwrap()
    );
    assert_eq!(select_celf(&f, 5).unwrap(), select_celf(&f, 5).unwrap());
}
