//! Fast cross-validation of the counting, semilinear, and recognizer layers
//! against brute-force enumeration. Every check runs in well under a second;
//! together they are the `check` command.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::Config;
use crate::counting::{count_series, tail_series};
use crate::ordinal::{enumerate_by_norm, matula_decode, matula_encode, Ordinal, Segment};
use crate::recognizer::{
    asymptotic_probability, builtin_catalog, combine, eval_finite, eval_recognizer, spectrum,
    BoolOp,
};
use crate::semilinear::{
    decompose_beta, semilinear_count_series, LinearSet, SemilinearSet, TailMode,
};
use crate::tauberian::{LimitKind, LimitValue};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs every self check. A failing entry carries the first counterexample
/// in its detail text.
pub fn run_all(config: &Config) -> Vec<CheckResult> {
    let checks: [(&'static str, fn(&Config) -> Result<String, String>); 10] = [
        ("counting-vs-enumeration", counting_vs_enumeration),
        ("matula-round-trip", matula_round_trip),
        ("natural-sum-algebra", natural_sum_algebra),
        ("tail-telescoping", tail_telescoping),
        ("intersection-membership", intersection_membership),
        ("union-counting", union_counting),
        ("segment-decomposition", segment_decomposition),
        ("catalog-axioms", catalog_axioms),
        ("catalog-finite-agreement", catalog_finite_agreement),
        ("spectrum-densities", spectrum_densities),
    ];
    checks
        .into_iter()
        .map(|(name, run)| match run(config) {
            Ok(detail) => CheckResult { name, passed: true, detail },
            Err(detail) => CheckResult { name, passed: false, detail },
        })
        .collect()
}

fn seg(s: &str) -> Segment {
    Segment::parse(s).expect("self-check segments parse")
}

/// Counting series must match brute-force enumeration slice by slice.
fn counting_vs_enumeration(config: &Config) -> Result<String, String> {
    let segments = ["w", "w^2", "w^3", "w^2*2+w", "w^3+w*2+1", "w^w", "e0"];
    let n_max = 9usize;
    let mut slices = 0;
    for name in segments {
        let segment = seg(name);
        let series = count_series(&segment, n_max, config).map_err(|e| format!("{}", e))?;
        for n in 0..=n_max {
            let listed = enumerate_by_norm(&segment, n as u64, config)
                .map_err(|e| format!("{}", e))?
                .len();
            if series.values[n] != listed.into() {
                return Err(format!(
                    "{} at norm {}: series says {}, enumeration finds {}",
                    name, n, series.values[n], listed
                ));
            }
            slices += 1;
        }
    }
    Ok(format!("{} norm slices across {} segments", slices, segments.len()))
}

/// Encoding into prime towers and decoding back is the identity.
fn matula_round_trip(config: &Config) -> Result<String, String> {
    let mut checked = 0;
    for n in 0..=8u64 {
        for x in enumerate_by_norm(&seg("e0"), n, config).map_err(|e| format!("{}", e))? {
            let code = matula_encode(&x);
            let back = matula_decode(&code);
            if back != x {
                return Err(format!("{} encodes to {} which decodes to {}", x, code, back));
            }
            checked += 1;
        }
    }
    for (x, want) in [("1", 2u32), ("w", 3), ("w^w", 5), ("w^2", 7)] {
        let code = matula_encode(&x.parse().unwrap());
        if code != want.into() {
            return Err(format!("{} encodes to {}, expected {}", x, code, want));
        }
    }
    Ok(format!("{} ordinals of norm <= 8, plus the pinned small codes", checked))
}

/// The natural sum is commutative and associative, and the norm is additive
/// over it.
fn natural_sum_algebra(config: &Config) -> Result<String, String> {
    let mut sample: Vec<Ordinal> = Vec::new();
    for n in 0..=5u64 {
        sample.extend(enumerate_by_norm(&seg("e0"), n, config).map_err(|e| format!("{}", e))?);
    }
    let mut pairs = 0;
    for a in &sample {
        for b in &sample {
            let ab = a.natural_sum(b);
            if ab != b.natural_sum(a) {
                return Err(format!("{} + {} is not commutative", a, b));
            }
            if ab.norm() != a.norm() + b.norm() {
                return Err(format!("norm not additive at {} + {}", a, b));
            }
            pairs += 1;
        }
    }
    for a in sample.iter().take(12) {
        for b in sample.iter().take(12) {
            for c in sample.iter().take(12) {
                if a.natural_sum(b).natural_sum(c) != a.natural_sum(&b.natural_sum(c)) {
                    return Err(format!("associativity fails at {}, {}, {}", a, b, c));
                }
            }
        }
    }
    Ok(format!("{} commutativity pairs, 1728 associativity triples", pairs))
}

/// Above level 0 every ordinal is tail + finite part, so the tail series
/// telescopes the full counting series.
fn tail_telescoping(config: &Config) -> Result<String, String> {
    let segments = ["w^w", "w^(w^2)", "e0", "G0"];
    let n_max = 24usize;
    for name in segments {
        let segment = seg(name);
        let full = count_series(&segment, n_max, config).map_err(|e| format!("{}", e))?;
        let tails = tail_series(&segment, 0, n_max, config).map_err(|e| format!("{}", e))?;
        for n in 1..=n_max {
            let want = &full.values[n] - &full.values[n - 1];
            if tails[n] != want {
                return Err(format!(
                    "{} at norm {}: tail series {} differs from difference {}",
                    name, n, tails[n], want
                ));
            }
        }
    }
    Ok(format!("{} segments telescoped to norm {}", segments.len(), n_max))
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

/// Pairwise intersections evaluated against membership of both operands on
/// every ordinal of norm <= 8 below w^w.
fn intersection_membership(config: &Config) -> Result<String, String> {
    let ambient = seg("w^w");
    let mut rng = XorShift(0x5eed_1e55_0ddb_a11);
    let tails = [TailMode::None, TailMode::Any, TailMode::Positive];
    let mut sets: Vec<LinearSet> = Vec::new();
    for _ in 0..8 {
        let r = (rng.next() % 3) as usize;
        let offsets: Vec<u64> = (0..=r).map(|_| rng.next() % 4).collect();
        let periods: Vec<u64> = (0..=r).map(|_| rng.next() % 4).collect();
        let tail = tails[(rng.next() % 3) as usize];
        sets.push(
            LinearSet::new(ambient.clone(), offsets, periods, tail)
                .map_err(|e| format!("{}", e))?,
        );
    }
    let mut points: Vec<Ordinal> = Vec::new();
    for n in 0..=8u64 {
        points.extend(enumerate_by_norm(&ambient, n, config).map_err(|e| format!("{}", e))?);
    }
    let mut compared = 0;
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            let both = SemilinearSet::new(ambient.clone(), [a.clone()].into())
                .unwrap()
                .intersect(&SemilinearSet::new(ambient.clone(), [b.clone()].into()).unwrap())
                .map_err(|e| format!("{}", e))?;
            for x in &points {
                let want = a.member(x).unwrap() && b.member(x).unwrap();
                let got = both.member(x).unwrap();
                if got != want {
                    return Err(format!(
                        "intersection wrong at {}: operands say {}, intersection says {}",
                        x, want, got
                    ));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{} membership comparisons over {} seeded sets", compared, sets.len()))
}

/// Union counting by inclusion-exclusion against direct enumeration.
fn union_counting(config: &Config) -> Result<String, String> {
    let ambient = seg("w^w");
    let two = LinearSet::new(ambient.clone(), [0].into(), [2].into(), TailMode::Any).unwrap();
    let three = LinearSet::new(ambient.clone(), [0].into(), [3].into(), TailMode::Any).unwrap();
    let union = SemilinearSet::new(ambient.clone(), [two, three].into()).unwrap();
    let n_max = 10usize;
    let counted = semilinear_count_series(&union, n_max, config).map_err(|e| format!("{}", e))?;
    for n in 0..=n_max {
        let listed = enumerate_by_norm(&ambient, n as u64, config)
            .map_err(|e| format!("{}", e))?
            .into_iter()
            .filter(|x| union.member(x).unwrap())
            .count();
        if counted[n] != listed.into() {
            return Err(format!(
                "norm {}: inclusion-exclusion says {}, enumeration finds {}",
                n, counted[n], listed
            ));
        }
    }
    Ok(format!("counts agree to norm {}", n_max))
}

/// The canonical pieces of a segment cover it exactly once.
fn segment_decomposition(config: &Config) -> Result<String, String> {
    let betas = ["w", "w^2", "w*3", "w^2*2+w", "w^3+w*2+1"];
    for name in betas {
        let beta: Ordinal = name.parse().unwrap();
        let pieces = decompose_beta(&beta).map_err(|e| format!("{}", e))?;
        for n in 0..=8u64 {
            for x in enumerate_by_norm(&seg("e0"), n, config).map_err(|e| format!("{}", e))? {
                let inside = x < beta;
                let mut hits = 0;
                for p in &pieces {
                    if p.ambient().contains(&x) && p.member(&x).unwrap() {
                        hits += 1;
                    }
                }
                if hits != u32::from(inside) {
                    return Err(format!(
                        "{} is covered {} times by the pieces of {}",
                        x, hits, name
                    ));
                }
            }
        }
    }
    Ok(format!("{} segments partitioned, checked to norm 8", betas.len()))
}

/// Every built-in recognizer satisfies the absorption axioms, as do pairwise
/// combinations.
fn catalog_axioms(_config: &Config) -> Result<String, String> {
    let catalog = builtin_catalog();
    for e in &catalog {
        let violations = e.recognizer.validate();
        if !violations.is_empty() {
            return Err(format!("{} violates: {}", e.name, violations[0]));
        }
    }
    let mut combined = 0;
    for a in &catalog {
        for b in &catalog {
            for op in [BoolOp::And, BoolOp::Or] {
                let c = combine(op, &a.recognizer, Some(&b.recognizer))
                    .map_err(|e| format!("{} with {}: {}", a.name, b.name, e))?;
                let violations = c.validate();
                if !violations.is_empty() {
                    return Err(format!(
                        "{} with {} violates: {}",
                        a.name, b.name, violations[0]
                    ));
                }
                combined += 1;
            }
        }
    }
    Ok(format!("{} entries and {} products pass", catalog.len(), combined))
}

/// Formulas and recognizers agree on all finite orders up to the domain
/// bound (capped at 8 here to stay fast).
fn catalog_finite_agreement(config: &Config) -> Result<String, String> {
    let n_top = config.mso_domain_bound.min(8);
    for e in builtin_catalog() {
        for n in 0..=n_top {
            let by_formula = eval_finite(&e.formula, n, config.mso_domain_bound)
                .map_err(|n| format!("domain {} over the bound", n))?;
            let by_rec = eval_recognizer(&e.recognizer, &Ordinal::from_nat(n as u64));
            if by_formula != by_rec {
                return Err(format!(
                    "{} at n={}: formula says {}, recognizer says {}",
                    e.name, n, by_formula, by_rec
                ));
            }
        }
    }
    Ok(format!("6 properties agree on orders 0..={}", n_top))
}

/// Spectra match pointwise acceptance, densities stay in [0,1], and the even
/// coefficient property has its known limits.
fn spectrum_densities(config: &Config) -> Result<String, String> {
    let ambient = seg("w^w");
    for e in builtin_catalog() {
        let set = spectrum(&e.recognizer, &ambient, config).map_err(|err| format!("{}", err))?;
        for n in 0..=9u64 {
            for x in enumerate_by_norm(&ambient, n, config).map_err(|e| format!("{}", e))? {
                let by_set = set.member(&x).unwrap();
                let by_rec = eval_recognizer(&e.recognizer, &x);
                if by_set != by_rec {
                    return Err(format!(
                        "{}: spectrum and recognizer disagree at {}",
                        e.name, x
                    ));
                }
            }
        }
    }
    let even = builtin_catalog()
        .into_iter()
        .find(|e| e.name == "even-last-coefficient")
        .unwrap()
        .recognizer;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let below_omega = asymptotic_probability(&even, &seg("w"), 24, config)
        .map_err(|e| format!("{}", e))?;
    if below_omega.limit != LimitValue::Exact(half.clone())
        || below_omega.limit_kind != Some(LimitKind::Cesaro)
        || below_omega.grid != 2
    {
        return Err(format!(
            "even coefficients below w: expected Cesaro 1/2 on grid 2, got {:?}",
            below_omega.limit
        ));
    }
    let below_power = asymptotic_probability(&even, &ambient, 24, config)
        .map_err(|e| format!("{}", e))?;
    if below_power.limit != LimitValue::Exact(half) {
        return Err(format!(
            "even coefficients below w^w: expected 1/2, got {:?}",
            below_power.limit
        ));
    }
    for report in [&below_omega, &below_power] {
        for v in report.values.iter().flatten() {
            if v < &BigRational::zero() || v > &BigRational::one() {
                return Err(format!("density {} out of [0,1]", v));
            }
        }
    }
    Ok(String::from("6 spectra match acceptance to norm 9; even-coefficient limits check out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let results = run_all(&Config::default());
        assert_eq!(results.len(), 10);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
            assert!(!r.detail.is_empty());
        }
    }
}
