//! Independent reference implementations and random instance generators
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use evinf_core::{
    GraphBuilder, InfluenceField, MassFunction, SocialGraph, SpreadRule, Subset, UserId,
};
use rand::Rng;

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// The four focal sets spelled out as explicit hypothesis sets.
pub fn explicit_sets() -> Vec<(Subset, BTreeSet<char>)> {
    vec![
        (Subset::Empty, BTreeSet::new()),
        (Subset::Influence, BTreeSet::from(['I'])),
        (Subset::Passive, BTreeSet::from(['P'])),
        (Subset::Frame, BTreeSet::from(['I', 'P'])),
    ]
}

fn slot_of(set: &BTreeSet<char>) -> Subset {
    explicit_sets()
        .into_iter()
        .find(|(_, s)| s == set)
        .map(|(sub, _)| sub)
        .unwrap()
}

/// Dempster's rule by enumerating all 16 focal-set pairs with explicit
/// set intersections. Returns `None` on total conflict.
pub fn brute_dempster(a: &MassFunction, b: &MassFunction) -> Option<[f64; 4]> {
    let sets = explicit_sets();
    let mut joint: BTreeMap<Subset, f64> = BTreeMap::new();
    let mut conflict = 0.0;
    for (sa, xa) in &sets {
        for (sb, xb) in &sets {
            let inter: BTreeSet<char> = xa.intersection(xb).copied().collect();
            let product = a.mass(*sa) * b.mass(*sb);
            if inter.is_empty() {
                conflict += product;
            } else {
                *joint.entry(slot_of(&inter)).or_default() += product;
            }
        }
    }
    if conflict >= 1.0 - 1e-12 {
        return None;
    }
    let mut out = [0.0; 4];
    for (sub, v) in joint {
        out[sub as usize] = v / (1.0 - conflict);
    }
    Some(out)
}

/// Jousselme distance with the similarity matrix built from explicit sets.
pub fn brute_jousselme(a: &MassFunction, b: &MassFunction) -> f64 {
    let sets = explicit_sets();
    let d = |x: &BTreeSet<char>, y: &BTreeSet<char>| {
        let union = x.union(y).count();
        if union == 0 {
            1.0
        } else {
            x.intersection(y).count() as f64 / union as f64
        }
    };
    let diff: Vec<f64> = sets.iter().map(|(s, _)| a.mass(*s) - b.mass(*s)).collect();
    let mut q = 0.0;
    for (i, (_, x)) in sets.iter().enumerate() {
        for (j, (_, y)) in sets.iter().enumerate() {
            q += diff[i] * d(x, y) * diff[j];
        }
    }
    (0.5 * q).max(0.0).sqrt()
}

/// Random mass function; a quarter of draws have some zero components so
/// categorical and Bayesian shapes show up.
pub fn random_bba<R: Rng>(rng: &mut R) -> MassFunction {
    let mut w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    if rng.gen_bool(0.25) {
        let k = rng.gen_range(0..3);
        w[k] = 0.0;
        if rng.gen_bool(0.3) {
            w[(k + 1) % 3] = 0.0;
        }
    }
    let sum: f64 = w.iter().sum();
    if sum == 0.0 {
        return MassFunction::vacuous();
    }
    let i = w[0] / sum;
    let p = w[1] / sum;
    MassFunction::new(i, p, (1.0 - i - p).max(0.0)).unwrap()
}

/// Random mass function with strictly positive mass on Ω, so no two of
/// them can be in total conflict.
pub fn random_open_bba<R: Rng>(rng: &mut R) -> MassFunction {
    let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen_range(0.05..1.0)];
    let sum: f64 = w.iter().sum();
    let i = w[0] / sum;
    let p = w[1] / sum;
    MassFunction::new(i, p, 1.0 - i - p).unwrap()
}

pub fn bayes(i: f64) -> MassFunction {
    MassFunction::new(i, 1.0 - i, 0.0).unwrap()
}

/// Random directed graph on `n` users named `v00..` with each ordered pair
/// present with probability `p`, plus uniform edge weights.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, p: f64) -> (SocialGraph, Vec<f64>) {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_user(&format!("v{i:02}"));
    }
    for s in 0..n {
        for d in 0..n {
            if s != d && rng.gen_bool(p) {
                b.add_follow_edge(&format!("v{s:02}"), &format!("v{d:02}"));
            }
        }
    }
    let g = b.build().0;
    let weights = (0..g.edge_count()).map(|_| rng.gen::<f64>()).collect();
    (g, weights)
}

fn weight_table(g: &SocialGraph, weights: &[f64]) -> BTreeMap<(UserId, UserId), f64> {
    g.edges()
        .iter()
        .zip(weights)
        .map(|(e, w)| ((e.src, e.dst), *w))
        .collect()
}

/// `Inf(S, v)` by a double loop over every seed and every user `x`, with
/// `Inf(v, v) = 1` and zero off the edge set.
pub fn brute_influence_on(
    g: &SocialGraph,
    weights: &[f64],
    rule: SpreadRule,
    seeds: &[UserId],
    v: UserId,
) -> f64 {
    if seeds.contains(&v) {
        return 1.0;
    }
    let table = weight_table(g, weights);
    let inf = |a: UserId, b: UserId| {
        if a == b {
            1.0
        } else {
            table.get(&(a, b)).copied().unwrap_or(0.0)
        }
    };
    let unique: BTreeSet<UserId> = seeds.iter().copied().collect();
    let mut raw = 0.0;
    for &u in &unique {
        for x in g.users() {
            let x_counts = x == v || table.contains_key(&(x, v));
            if x_counts {
                raw += inf(u, x) * inf(x, v);
            }
        }
    }
    match rule {
        SpreadRule::Capped => raw.min(1.0),
        SpreadRule::Literal => raw,
    }
}

pub fn brute_sigma(g: &SocialGraph, weights: &[f64], rule: SpreadRule, seeds: &[UserId]) -> f64 {
    g.users()
        .map(|v| brute_influence_on(g, weights, rule, seeds, v))
        .sum()
}

/// σ of every subset, indexed by bitmask over user ids.
pub fn sigma_table(field: &InfluenceField<'_>) -> Vec<f64> {
    let n = field.graph().user_count();
    (0..1usize << n)
        .map(|mask| {
            let seeds: Vec<UserId> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| UserId(i as u32))
                .collect();
            field.sigma(&seeds).unwrap()
        })
        .collect()
}

pub fn mask_users(mask: usize, n: usize) -> Vec<UserId> {
    (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| UserId(i as u32))
        .collect()
}
