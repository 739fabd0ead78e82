//! Counting series: the number of ordinals of each norm in a segment.
//!
//! Segments `[0, w^gamma)` have series given by the Euler product over their
//! additive primes `prod_m (1 - x^m)^(-p(m))` with `p(m) = c_gamma(m-1)`;
//! general segments decompose into shifted power segments. The symbolic
//! segments use the same product with their own prime-count supplies.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::Config;
use crate::ordinal::{MatulaCoder, Ordinal, Segment, SymbolicSegment};

mod euler;

pub(crate) use euler::convolve;
use euler::euler_product;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountError {
    /// Requested truncation exceeds `Config::truncation_cap`.
    TruncationCap { requested: usize, cap: usize },
    /// The series is too short for the requested analysis.
    SeriesTooShort { needed: usize, len: usize },
    /// A ratio in the estimation window divides by, or into, zero.
    ZeroInWindow { index: usize },
    /// The segment (or segment/parameter combination) has no series of the
    /// requested kind.
    Unsupported { segment: &'static str, reason: &'static str },
    /// Census range exceeds `Config::census_cap`.
    CensusCap { requested: u64, cap: u64 },
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::TruncationCap { requested, cap } => {
                write!(f, "truncation {} exceeds cap {}", requested, cap)
            }
            CountError::SeriesTooShort { needed, len } => {
                write!(f, "series of length {} is shorter than the required {}", len, needed)
            }
            CountError::ZeroInWindow { index } => {
                write!(f, "zero coefficient at index {} inside the ratio window", index)
            }
            CountError::Unsupported { segment, reason } => {
                write!(f, "unsupported for {}: {}", segment, reason)
            }
            CountError::CensusCap { requested, cap } => {
                write!(f, "census range {} exceeds cap {}", requested, cap)
            }
        }
    }
}

impl core::error::Error for CountError {}

/// Counting series of a segment: `values[n]` is the number of its elements
/// of norm exactly `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub segment: Segment,
    pub values: Vec<BigUint>,
}

impl CountSeries {
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }
}

/// Ratio-based estimate of the radius of convergence.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub rho: f64,
    /// The consecutive-coefficient ratios the mean was taken over.
    pub window: Vec<f64>,
    /// Max minus min of the window.
    pub spread: f64,
}

/// One row of a Matula census: among codes `1..=n`, how many decode into the
/// segment, and how many of those satisfy the predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: u64,
    pub below: u64,
    pub hits: u64,
}

/// `values[n] = #{ x in segment : N(x) = n }` for `n <= n_max`.
pub fn count_series(
    segment: &Segment,
    n_max: usize,
    config: &Config,
) -> Result<CountSeries, CountError> {
    if n_max > config.truncation_cap {
        return Err(CountError::TruncationCap { requested: n_max, cap: config.truncation_cap });
    }
    let values = match segment {
        Segment::Cnf(beta) => {
            let mut memo = PowerMemo::new(n_max);
            memo.segment_series(beta)
        }
        Segment::Symbolic(sym) => symbolic_series(*sym, n_max),
    };
    Ok(CountSeries { segment: segment.clone(), values })
}

/// Memoized counting series, keyed by the exponent of a power segment.
struct PowerMemo {
    n_max: usize,
    powers: BTreeMap<Ordinal, Vec<BigUint>>,
}

impl PowerMemo {
    fn new(n_max: usize) -> Self {
        PowerMemo { n_max, powers: BTreeMap::new() }
    }

    /// Series of `[0, beta)` by splitting off each leading term: the elements
    /// with CNF prefix `w^g1*c1 + .. + w^gj*(dj - k)` form a copy of
    /// `[0, w^gj)` shifted by the prefix norm.
    fn segment_series(&mut self, beta: &Ordinal) -> Vec<BigUint> {
        let mut values = alloc::vec![BigUint::zero(); self.n_max + 1];
        let mut prefix_norm = 0u64;
        for (exponent, coefficient) in beta.terms() {
            let unit = 1 + exponent.norm();
            let power = self.power_series(exponent).clone();
            for k in 1..=coefficient {
                let shift = prefix_norm + (coefficient - k) * unit;
                if shift > self.n_max as u64 {
                    continue;
                }
                for n in shift as usize..=self.n_max {
                    values[n] += &power[n - shift as usize];
                }
            }
            prefix_norm += coefficient * unit;
        }
        values
    }

    /// Series of `[0, w^gamma)`: Euler product whose norm-m prime supply is
    /// the number of exponents of norm m-1 below gamma.
    fn power_series(&mut self, gamma: &Ordinal) -> &Vec<BigUint> {
        if !self.powers.contains_key(gamma) {
            let series = if gamma.is_zero() {
                let mut one = alloc::vec![BigUint::zero(); self.n_max + 1];
                one[0] = BigUint::one();
                one
            } else {
                let exps = self.segment_series(gamma);
                euler_product(self.n_max, |m, _| exps[m - 1].clone())
            };
            self.powers.insert(gamma.clone(), series);
        }
        &self.powers[gamma]
    }
}

fn symbolic_series(sym: SymbolicSegment, n_max: usize) -> Vec<BigUint> {
    match sym {
        // additive primes of norm m are the w^xi with N(xi) = m - 1, and
        // below epsilon_0 those xi range over the whole segment
        SymbolicSegment::EpsilonZero => euler_product(n_max, |m, a| a[m - 1].clone()),
        // exponents are pairs (Veblen position, argument), both in the segment
        SymbolicSegment::GammaZero => euler_product(n_max, |m, a| {
            (0..m).map(|i| &a[i] * &a[m - 1 - i]).sum()
        }),
        // exponents carry two extra norm units
        SymbolicSegment::BachmannHowardOt => euler_product(n_max, |m, a| {
            if m >= 2 { a[m - 2].clone() } else { BigUint::zero() }
        }),
        SymbolicSegment::BachmannHowardCt => {
            let ot = symbolic_series(SymbolicSegment::BachmannHowardOt, n_max);
            euler_product(n_max, |m, _| ot[m - 1].clone())
        }
    }
}

/// Norm-m prime supply of the segment's Euler product, `m = 1..=n_max`.
/// `None` marks segments that are not a single Euler product over a prime
/// supply (general normal forms below epsilon_0 that are not powers).
fn prime_supply(segment: &Segment, n_max: usize) -> Option<Vec<BigUint>> {
    let counts: Vec<BigUint> = match segment {
        Segment::Cnf(beta) => {
            if !beta.is_omega_power() {
                return None;
            }
            let gamma = beta.leading_exponent().unwrap();
            let mut memo = PowerMemo::new(n_max);
            let exps = memo.segment_series(gamma);
            (1..=n_max).map(|m| exps[m - 1].clone()).collect()
        }
        Segment::Symbolic(sym) => {
            let base = symbolic_series(*sym, n_max);
            match sym {
                SymbolicSegment::EpsilonZero => {
                    (1..=n_max).map(|m| base[m - 1].clone()).collect()
                }
                SymbolicSegment::GammaZero => (1..=n_max)
                    .map(|m| (0..m).map(|i| &base[i] * &base[m - 1 - i]).sum())
                    .collect(),
                SymbolicSegment::BachmannHowardOt => (1..=n_max)
                    .map(|m| if m >= 2 { base[m - 2].clone() } else { BigUint::zero() })
                    .collect(),
                SymbolicSegment::BachmannHowardCt => {
                    let ot = symbolic_series(SymbolicSegment::BachmannHowardOt, n_max);
                    (1..=n_max).map(|m| ot[m - 1].clone()).collect()
                }
            }
        }
    };
    Some(counts)
}

/// Series counting the tails above level `r`: elements of the segment whose
/// normal form uses no exponent of norm `<= r`. Defined for power segments
/// `[0, w^gamma)` and for the symbolic segments; the factor contributed by
/// `alpha_0` in a split at level `r`.
pub fn tail_series(
    segment: &Segment,
    r: usize,
    n_max: usize,
    config: &Config,
) -> Result<Vec<BigUint>, CountError> {
    if n_max > config.truncation_cap {
        return Err(CountError::TruncationCap { requested: n_max, cap: config.truncation_cap });
    }
    if let Segment::Cnf(beta) = segment {
        if !beta.is_omega_power() {
            return Err(CountError::Unsupported {
                segment: "general normal form",
                reason: "tail series need a power segment or a symbolic segment",
            });
        }
        // a power w^gamma with gamma <= r + 1 has no exponents above level r:
        // the only tail is 0
        if let Some(g) = beta.leading_exponent().unwrap().as_nat() {
            if g <= (r as u64) + 1 {
                let mut one = alloc::vec![BigUint::zero(); n_max + 1];
                one[0] = BigUint::one();
                return Ok(one);
            }
        }
    }
    let name = segment_name(segment);
    let mut supply = prime_supply(segment, n_max).expect("power segment checked above");
    for m in 1..=core::cmp::min(r + 1, n_max) {
        if supply[m - 1].is_zero() {
            // removing the norm-m exponent is impossible when the segment
            // has none; the split at level r is not defined here
            return Err(CountError::Unsupported {
                segment: name,
                reason: "segment has no additive prime at a norm the split removes",
            });
        }
        supply[m - 1] -= BigUint::one();
    }
    Ok(euler_product(n_max, |m, _| supply[m - 1].clone()))
}

fn segment_name(segment: &Segment) -> &'static str {
    match segment {
        Segment::Cnf(_) => "normal-form segment",
        Segment::Symbolic(sym) => sym.name(),
    }
}

/// Mean of the trailing consecutive-coefficient ratios `c(n) / c(n+1)`.
/// Needs a truncation of at least 32; every coefficient in the window must
/// be nonzero.
pub fn radius_estimate(
    series: &CountSeries,
    config: &Config,
) -> Result<RadiusEstimate, CountError> {
    let t = series.truncation();
    if t < 32 {
        return Err(CountError::SeriesTooShort { needed: 32, len: t });
    }
    let w = config.ratio_window;
    let mut window = Vec::with_capacity(w);
    for n in (t - w)..t {
        let num = &series.values[n];
        let den = &series.values[n + 1];
        if num.is_zero() {
            return Err(CountError::ZeroInWindow { index: n });
        }
        if den.is_zero() {
            return Err(CountError::ZeroInWindow { index: n + 1 });
        }
        window.push(big_ratio_f64(num, den));
    }
    let rho = window.iter().sum::<f64>() / window.len() as f64;
    let spread = window.iter().cloned().fold(f64::MIN, f64::max)
        - window.iter().cloned().fold(f64::MAX, f64::min);
    Ok(RadiusEstimate { rho, window, spread })
}

/// `a / b` in f64, scaling both down when they exceed the exponent range.
fn big_ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let bits = core::cmp::max(a.bits(), b.bits());
    if bits <= 900 {
        return a.to_f64().unwrap() / b.to_f64().unwrap();
    }
    let shift = bits - 900;
    (a >> shift).to_f64().unwrap() / (b >> shift).to_f64().unwrap()
}

/// For each `n <= n_max`: how many of the codes `1..=n` decode to an ordinal
/// inside the segment, and how many of those satisfy `pred`.
pub fn matula_census(
    segment: &Segment,
    n_max: u64,
    pred: Option<&dyn Fn(&Ordinal) -> bool>,
    config: &Config,
) -> Result<Vec<CensusRow>, CountError> {
    if n_max > config.census_cap {
        return Err(CountError::CensusCap { requested: n_max, cap: config.census_cap });
    }
    match segment {
        Segment::Cnf(_) | Segment::Symbolic(SymbolicSegment::EpsilonZero) => {}
        Segment::Symbolic(sym) => {
            return Err(CountError::Unsupported {
                segment: sym.name(),
                reason: "codes decode to normal forms below epsilon_0",
            })
        }
    }
    // exponent codes stay below pi(n_max), so a memo over the small codes
    // covers every recursive decode
    let memo_len = core::cmp::min(n_max + 1, 100_000) as usize;
    let mut decoder = MemoDecoder {
        coder: MatulaCoder::new(),
        memo: alloc::vec![None; memo_len],
    };
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut below = 0u64;
    let mut hits = 0u64;
    for n in 1..=n_max {
        let x = decoder.decode(n);
        if segment.contains(&x) {
            below += 1;
            if pred.map(|p| p(&x)).unwrap_or(false) {
                hits += 1;
            }
        }
        rows.push(CensusRow { n, below, hits });
    }
    Ok(rows)
}

struct MemoDecoder {
    coder: MatulaCoder,
    memo: Vec<Option<Ordinal>>,
}

impl MemoDecoder {
    fn decode(&mut self, n: u64) -> Ordinal {
        let slot = n as usize;
        if slot < self.memo.len() {
            if let Some(x) = &self.memo[slot] {
                return x.clone();
            }
        }
        let pairs: Vec<(Ordinal, u64)> = self
            .coder
            .factor_indices(n)
            .into_iter()
            .map(|(idx, mult)| (self.decode(idx), mult))
            .collect();
        let x = Ordinal::from_terms(pairs);
        if slot < self.memo.len() {
            self.memo[slot] = Some(x.clone());
        }
        x
    }
}
