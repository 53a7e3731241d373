use std::time::{Duration, Instant};

use rayon::prelude::*;
use wd_exponents::bounds::{max_plus_check, sharpness_suite, Theorem};
use wd_exponents::exponents::{indec_tensor_kernel, tensor_exponents};
use wd_exponents::generator::{gen_model, GenParams, SplitMix64};
use wd_exponents::jordan::{nilpotent_rank, tensor_partition, unramified_oracle_artin, unramified_reps, Partition};
use wd_exponents::maxplus::{mp_vee, pair_upper_bound, MaxPlusElem};
use wd_exponents::sweep::{run_sweep, SweepConfig};
use wd_exponents::{ModelInstance, Rational};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn unramified_oracle() -> Outcome {
    let m = ModelInstance::unit_only();
    let reps = unramified_reps(3, 8);
    let bad: usize = reps
        .par_iter()
        .map(|x| {
            reps.iter()
                .filter(|y| {
                    let formula = tensor_exponents(x, y, &m).unwrap().ar;
                    formula != unramified_oracle_artin(x, y).unwrap()
                })
                .count()
        })
        .sum();
    outcome(bad == 0, format!("{} pairs, {bad} mismatches", reps.len() * reps.len()))
}

fn single_block_laws() -> Outcome {
    let mut bad = 0;
    for a in 1..=12u32 {
        for b in 1..=12u32 {
            let rank = nilpotent_rank(&Partition::new(vec![a]), &Partition::new(vec![b]));
            if rank != (a * b - a.min(b)) as usize {
                bad += 1;
            }
            if tensor_partition(a, b).len() != a.min(b) as usize {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("144 pairs, {bad} failures"))
}

fn theorem_sweep() -> (Outcome, Outcome) {
    let theorems = vec![
        Theorem::A,
        Theorem::AS,
        Theorem::B,
        Theorem::BS,
        Theorem::C,
        Theorem::CS,
        Theorem::SwanBridge,
    ];
    let report = run_sweep(&SweepConfig::new(theorems, 200, 50, 0)).unwrap();
    let count = |th| report.row(th).map_or(0, |r| r.samples);
    let bridge = report.row(Theorem::SwanBridge).unwrap();
    let main_violations = report.violations() - bridge.violations;
    let (a, as_) = (count(Theorem::A), count(Theorem::AS));
    let mut detail = String::new();
    for r in &report.summary {
        if r.theorem != "SW_BRIDGE" {
            detail.push_str(&format!("{}:{}/{} ", r.theorem, r.violations, r.samples));
        }
    }
    detail.push_str(&format!("rounds={}", report.generator_rounds));
    let sweep = outcome(main_violations == 0 && a >= 500 && as_ >= 500, detail);
    let bridge = outcome(
        bridge.violations == 0,
        format!("{} samples, {} violations", bridge.samples, bridge.violations),
    );
    (sweep, bridge)
}

fn kernel_cross_check() -> Outcome {
    let parts: Vec<Vec<Vec<u32>>> = (0..=8u32)
        .map(|r| (0..=r).map(|s| if s == 0 { vec![] } else { tensor_partition(r, s).parts().to_vec() }).collect())
        .collect();
    let (checked, bad): (usize, usize) = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let m = gen_model(&GenParams::default().with_seed(seed)).unwrap();
            let (mut checked, mut bad) = (0, 0);
            for (i, ci) in m.classes().iter().enumerate() {
                for (j, cj) in m.classes().iter().enumerate() {
                    let mm = (ci.dim * cj.dim) as u64;
                    let d = if m.dual(i) == j { ci.deg as u64 } else { 0 };
                    let pair_swan = m.s(i, j) * Rational::from(mm);
                    let pair_swan = pair_swan.to_i64().unwrap() as u64;
                    for r in 1..=8u32 {
                        for s in 1..=r {
                            let (mut ar, mut sw) = (0u64, 0u64);
                            for &rk in &parts[r as usize][s as usize] {
                                let rk = rk as u64;
                                ar += rk * (pair_swan + mm - d) + d * (rk - 1);
                                sw += rk * pair_swan;
                            }
                            let k = indec_tensor_kernel(r, &ci.id, s, &cj.id, &m).unwrap();
                            checked += 1;
                            if k.ar != ar || k.sw != sw || k.dim != r as u64 * s as u64 * mm {
                                bad += 1;
                            }
                        }
                    }
                }
            }
            (checked, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    outcome(bad == 0, format!("{checked} kernels, {bad} mismatches"))
}

fn sharpness() -> Outcome {
    let rows = sharpness_suite().unwrap();
    let labels: Vec<&str> = rows.iter().map(|r| r.theorem.label()).collect();
    let suite_ok = rows.iter().all(|r| r.holds && r.equality)
        && ["A", "B", "C", "SELF_SLOPE", "MP"].iter().all(|l| labels.contains(l));
    let mut rng = SplitMix64::new(2024);
    let mut random_ok = 0;
    for _ in 0..100 {
        let d1 = rng.between(1, 9);
        let d2 = rng.between(1, 9);
        let v1 = Rational::new(rng.between(0, 60), rng.between(1, 12));
        let v2 = Rational::new(rng.between(0, 60), rng.between(1, 12));
        let r = max_plus_check(d1, &v1, d2, &v2).unwrap();
        if r.holds && r.equality {
            random_ok += 1;
        }
    }
    outcome(
        suite_ok && random_ok == 100,
        format!("{} witnesses, {random_ok}/100 optimal quadruples", rows.len()),
    )
}

fn max_plus_laws() -> Outcome {
    let mut rng = SplitMix64::new(51);
    let draw = |rng: &mut SplitMix64| {
        let n = rng.between(1, 6);
        MaxPlusElem::from_terms((0..n).map(|_| (rng.between(1, 5), Rational::new(rng.between(0, 72), 12))))
    };
    let mut bad = 0;
    for _ in 0..10_000 {
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        let vee = mp_vee(&x, &y);
        if vee.weight() > pair_upper_bound(x.degree(), &x.weight(), y.degree(), &y.weight()) {
            bad += 1;
        }
        if vee != mp_vee(&y, &x) || vee.degree() != x.degree() * y.degree() {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("10000 pairs, {bad} failures"))
}

fn determinism() -> Outcome {
    let run = || -> Vec<String> {
        (0..20u64)
            .map(|s| gen_model(&GenParams::default().with_seed(s)).unwrap().digest())
            .collect()
    };
    let (a, b) = (run(), run());
    let same = a == b;
    let distinct = a.iter().collect::<std::collections::BTreeSet<_>>().len();
    outcome(same, format!("20 seeds, {distinct} distinct digests"))
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

#[test]
fn acceptance() {
    let mut rows: Vec<(&str, Outcome, Duration)> = Vec::new();
    let (o, t) = timed(unramified_oracle);
    rows.push(("1 unramified oracle", o, t));
    let (o, t) = timed(single_block_laws);
    rows.push(("2 single-block laws", o, t));
    let t0 = Instant::now();
    let (sweep, bridge) = theorem_sweep();
    let sweep_time = t0.elapsed();
    rows.push(("3 theorem sweep", sweep, sweep_time));
    let (o, t) = timed(kernel_cross_check);
    rows.push(("4 kernel cross-check", o, t));
    let (o, t) = timed(sharpness);
    rows.push(("5 sharpness", o, t));
    let (mut o, t) = timed(max_plus_laws);
    o.ok &= bridge.ok;
    o.detail = format!("{}; swan bridge {}", o.detail, bridge.detail);
    rows.push(("6 max-plus laws", o, t));
    let (o, t) = timed(determinism);
    rows.push(("7 determinism", o, t));

    for (name, o, t) in &rows {
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {name:<22} {:>8.2}s  {}", t.as_secs_f64(), o.detail);
    }
    let failed: Vec<&str> = rows.iter().filter(|r| !r.1.ok).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
