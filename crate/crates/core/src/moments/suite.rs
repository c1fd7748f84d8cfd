use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Result;
use crate::seeds::{derive, Domain};

/// Exact identities, combinatorial bounds and Monte Carlo moment checks.
pub fn moment_suite(seed: u64) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for (c, want) in [(vec![1.0, 1.0], 8.0), (vec![1.0, 1.0, 1.0], 21.0)] {
        let got = exact_moment(&c, 4)?;
        out.push(Verdict::new("exact_moment", format!("c={c:?},p=4"), got.to_string(), got == want));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, Domain::Coefficients, 0));
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        for p in [2, 4, 6, 8] {
            let c: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = enumerated_moment(&c, p)?;
            let b = multinomial_moment(&c, p)?;
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    out.push(Verdict::new("multinomial_identity", "K<=10,p<=8", format!("{worst:.3e}"), worst <= EXACT_AGREEMENT));
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=10);
        let c: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for p in [2, 4, 6, 8, 10, 12] {
            worst_ratio = worst_ratio.max(khinchine_ratio(&c, p as f64, seed)?);
        }
    }
    out.push(Verdict::new("khinchine_ratio", "200 vectors,p<=12", format!("{worst_ratio:.6}"), worst_ratio <= 1.0));
    let d = decoupled_moment_check(
        |r, b| b.iter_mut().for_each(|x| *x = r.gen::<f64>()),
        8,
        4,
        100_000,
        seed,
    )?;
    out.push(Verdict::new(
        "decoupled_moment",
        "uniform,K=8,p=4",
        format!("{:.4}+-{:.4}", d.constant, d.std_err),
        d.holds_with(1.2),
    ));
    let mut nc_ok = true;
    for _ in 0..500 {
        let len = rng.gen_range(1..=8);
        let j = rng.gen_range(1..=10);
        nc_ok &= normconstant_term(&random_multi_index(&mut rng, len, j))?.holds();
    }
    out.push(Verdict::new("normconstant", "500 multi-indices", nc_ok.to_string(), nc_ok));
    let s42 = stirling2(4, 2)?;
    out.push(Verdict::new("stirling2", "j=4,r=2", s42.to_string(), s42 == 7u32.into()));
    let table = stirling2_table(MAX_STIRLING)?;
    let formula_ok = (0..=MAX_STIRLING).all(|j| (0..=j).all(|r| stirling2(j, r).ok().as_ref() == Some(&table[j as usize][r as usize])));
    out.push(Verdict::new("stirling_recurrence", "j<=30", formula_ok.to_string(), formula_ok));
    let mut surj_ok = true;
    let mut refined_ok = true;
    for n in 1..=20 {
        for r in 1..=n {
            surj_ok &= surjection_count(n, r)?.holds();
            refined_ok &= stirling_refined_bound_check(n, r)?.holds();
        }
    }
    out.push(Verdict::new("surjection_bounds", "r<=N<=20", surj_ok.to_string(), surj_ok));
    out.push(Verdict::new("refined_stirling_bound", "r<=j<=20", refined_ok.to_string(), refined_ok));
    let bells = bell_numbers(12);
    let mut classes_ok = true;
    for j in 1..=MAX_PARTITION_J {
        let classes = partition_classes(j)?;
        for r in 1..=j {
            let total: num_bigint::BigUint = classes.iter().filter(|c| c.r() == r).map(|c| c.count.clone()).sum();
            classes_ok &= total == stirling2(j, r)?;
        }
        let all: num_bigint::BigUint = classes.iter().map(|c| c.count.clone()).sum();
        classes_ok &= all == bells[j as usize];
    }
    out.push(Verdict::new("partition_classes", "j<=12", classes_ok.to_string(), classes_ok));
    let growth = MomentGrowth {
        c: 1.0,
        alpha: 1.0,
        n: 1.0,
        k: 1.0,
        p0: 1.0,
    };
    let t = tail_from_moments(&growth, 4.0 * std::f64::consts::E)?;
    out.push(Verdict::new(
        "tail_plug_in",
        "k=1,C=1,N=1,lambda=4e",
        format!("p*={}", t.p_star),
        (t.p_star - 16.0).abs() < 1e-12,
    ));
    Ok(out)
}
