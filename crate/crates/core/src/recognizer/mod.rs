//! Finite-state recognizers for ordinal properties, their semilinear
//! acceptance spectra, and closed-form asymptotic probabilities.
//!
//! A recognizer of level `r` reads the split `x = tail * w^(r+1) + sum w^i k_i`
//! from the top down: the sign map is applied once when the tail is nonzero,
//! then the level maps `F_r, .., F_0`, each as many times as its coefficient.
//! Acceptance depends only on the final state, so each coefficient can be
//! reduced along the eventual period of its map. That reduction is what turns
//! the accepted set into a finite union of linear sets.

pub mod mso;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::ordinal::{Ordinal, Segment, SymbolicSegment};
use crate::semilinear::{LinearSet, SemilinearSet, SemilinearError, TailMode};
use crate::tauberian::{density_series, semilinear_limit, DensityError, DensityReport};

pub use mso::{eval_finite, parse_formula, FormulaError, MsoFormula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecognizerError {
    /// Shape problem in the raw data: a map of the wrong length, an out of
    /// range state, or too few maps.
    Structural(&'static str),
    AxiomViolations(Vec<AxiomViolation>),
    StateCap { states: usize, cap: usize },
    /// The reduced exponent grid is too large to enumerate.
    TupleGuard { tuples: usize, cap: usize },
    UnsupportedSegment(&'static str),
    BadCombine(&'static str),
    Formula(FormulaError),
    DomainBound { requested: usize, bound: usize },
    Density(DensityError),
    Semilinear(SemilinearError),
}

impl fmt::Display for RecognizerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecognizerError::Structural(m) => write!(f, "malformed recognizer: {}", m),
            RecognizerError::AxiomViolations(v) => {
                write!(f, "recognizer violates {} axiom instance(s), first: {}", v.len(), v[0])
            }
            RecognizerError::StateCap { states, cap } => {
                write!(f, "{} states exceeds the lasso cap {}", states, cap)
            }
            RecognizerError::TupleGuard { tuples, cap } => {
                write!(f, "spectrum needs {} exponent tuples, cap is {}", tuples, cap)
            }
            RecognizerError::UnsupportedSegment(m) => write!(f, "unsupported segment: {}", m),
            RecognizerError::BadCombine(m) => write!(f, "bad combination: {}", m),
            RecognizerError::Formula(e) => write!(f, "{}", e),
            RecognizerError::DomainBound { requested, bound } => {
                write!(f, "finite domain {} exceeds the bound {}", requested, bound)
            }
            RecognizerError::Density(e) => write!(f, "{}", e),
            RecognizerError::Semilinear(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for RecognizerError {}

impl From<FormulaError> for RecognizerError {
    fn from(e: FormulaError) -> Self {
        RecognizerError::Formula(e)
    }
}

impl From<DensityError> for RecognizerError {
    fn from(e: DensityError) -> Self {
        RecognizerError::Density(e)
    }
}

impl From<SemilinearError> for RecognizerError {
    fn from(e: SemilinearError) -> Self {
        RecognizerError::Semilinear(e)
    }
}

/// One failed instance of the recognizer axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The sign map is not idempotent at `state`.
    SignIdempotence { state: usize },
    /// `F_upper(F_lower(state)) != F_upper(state)`: reading a lower level
    /// before a higher one must be absorbed, mirroring `w^i + w^j = w^j`.
    Collapse { lower: usize, upper: usize, state: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::SignIdempotence { state } => {
                write!(f, "sign map not idempotent at state {}", state)
            }
            AxiomViolation::Collapse { lower, upper, state } => {
                write!(
                    f,
                    "map {} after map {} differs from map {} alone at state {}",
                    upper, lower, upper, state
                )
            }
        }
    }
}

/// Deterministic recognizer: states `0..state_count`, a start state, an
/// accepting set, and maps `F_0 ..= F_{r+1}` where the last one is the sign
/// map for the part of the input above level `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognizer {
    state_count: usize,
    start: usize,
    accepting: Vec<bool>,
    maps: Vec<Vec<usize>>,
}

impl Recognizer {
    /// Builds a recognizer after structural checks only; [`Recognizer::validate`]
    /// reports axiom violations separately.
    pub fn new(
        state_count: usize,
        start: usize,
        accepting: &[usize],
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, RecognizerError> {
        if state_count == 0 {
            return Err(RecognizerError::Structural("need at least one state"));
        }
        if start >= state_count {
            return Err(RecognizerError::Structural("start state out of range"));
        }
        if maps.len() < 2 {
            return Err(RecognizerError::Structural("need maps F_0 and the sign map"));
        }
        if maps.iter().any(|m| m.len() != state_count) {
            return Err(RecognizerError::Structural("every map must cover all states"));
        }
        if maps.iter().any(|m| m.iter().any(|&s| s >= state_count)) {
            return Err(RecognizerError::Structural("map target out of range"));
        }
        if accepting.iter().any(|&s| s >= state_count) {
            return Err(RecognizerError::Structural("accepting state out of range"));
        }
        let mut acc = vec![false; state_count];
        for &s in accepting {
            acc[s] = true;
        }
        Ok(Recognizer { state_count, start, accepting: acc, maps })
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Split level: the maps cover coefficients of `w^0 ..= w^r` plus the sign.
    pub fn level(&self) -> usize {
        self.maps.len() - 2
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.state_count).filter(|&s| self.accepting[s]).collect()
    }

    /// All axiom violations: the sign map must be idempotent, and for
    /// `i < j` applying `F_i` before `F_j` must equal `F_j` alone.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let sign = &self.maps[self.maps.len() - 1];
        for s in 0..self.state_count {
            if sign[sign[s]] != sign[s] {
                out.push(AxiomViolation::SignIdempotence { state: s });
            }
        }
        for j in 1..self.maps.len() {
            for i in 0..j {
                for s in 0..self.state_count {
                    if self.maps[j][self.maps[i][s]] != self.maps[j][s] {
                        out.push(AxiomViolation::Collapse { lower: i, upper: j, state: s });
                    }
                }
            }
        }
        out
    }
}

/// Minimal `preperiod` and `period` with
/// `map^preperiod = map^(preperiod + period)` as transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub preperiod: u64,
    pub period: u64,
}

/// Lasso of the transformation semigroup generated by one map, found by
/// iterating compositions until the first repeat.
pub fn transformation_lasso(map: &[usize]) -> Lasso {
    let mut seen: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut current: Vec<usize> = (0..map.len()).collect();
    let mut t = 0u64;
    loop {
        if let Some(&first) = seen.get(&current) {
            return Lasso { preperiod: first, period: t - first };
        }
        seen.insert(current.clone(), t);
        current = current.iter().map(|&s| map[s]).collect();
        t += 1;
    }
}

/// `map^k(start)`, reducing along the cycle the orbit falls into. At most
/// one pass over the orbit regardless of `k`.
fn apply_pow(map: &[usize], k: u64, start: usize) -> usize {
    let mut seen: Vec<Option<u64>> = vec![None; map.len()];
    let mut state = start;
    let mut t = 0u64;
    while t < k {
        if let Some(t0) = seen[state] {
            let cycle = t - t0;
            for _ in 0..(k - t) % cycle {
                state = map[state];
            }
            return state;
        }
        seen[state] = Some(t);
        state = map[state];
        t += 1;
    }
    state
}

/// Whether the recognizer accepts `x`: the sign map fires once when the
/// split tail is nonzero, then each level map fires coefficient-many times,
/// high level first.
pub fn eval_recognizer(rec: &Recognizer, x: &Ordinal) -> bool {
    let r = rec.level();
    let (tail, coeffs) = x.cnf_split(r);
    let mut state = rec.start;
    if !tail.is_zero() {
        state = rec.maps[r + 1][state];
    }
    for i in (0..=r).rev() {
        state = apply_pow(&rec.maps[i], coeffs[i], state);
    }
    rec.accepting[state]
}

/// The accepted subset of `segment` as a semilinear set: one linear piece
/// per accepting combination of reduced exponents and tail sign.
///
/// Supported segments are infinite `w`-powers and the symbolic segments with
/// an `w`-power shape. Over `w^g` with finite `g`, coefficients at positions
/// `>= g` are pinned to zero and a nonzero tail needs `g > r+1`.
pub fn spectrum(
    rec: &Recognizer,
    segment: &Segment,
    config: &Config,
) -> Result<SemilinearSet, RecognizerError> {
    if rec.state_count > config.lasso_state_cap {
        return Err(RecognizerError::StateCap {
            states: rec.state_count,
            cap: config.lasso_state_cap,
        });
    }
    let finite_exponent: Option<u64> = match segment {
        Segment::Cnf(beta) if beta.is_omega_power() => {
            let gamma = beta.leading_exponent().expect("omega power has a term");
            gamma.as_nat()
        }
        Segment::Cnf(_) => {
            return Err(RecognizerError::UnsupportedSegment(
                "spectra need an w-power segment",
            ))
        }
        Segment::Symbolic(SymbolicSegment::EpsilonZero)
        | Segment::Symbolic(SymbolicSegment::GammaZero) => None,
        Segment::Symbolic(_) => {
            return Err(RecognizerError::UnsupportedSegment(
                "no semilinear spectra over Bachmann-Howard segments",
            ))
        }
    };
    let r = rec.level();
    let has_tail_room = finite_exponent.is_none_or(|g| g > (r as u64) + 1);

    let lassos: Vec<Lasso> =
        (0..=r).map(|i| transformation_lasso(&rec.maps[i])).collect();
    // position i is forced to coefficient 0 when the ambient is w^g, g <= i
    let clamped = |i: usize| finite_exponent.is_some_and(|g| i as u64 >= g);
    let domain: Vec<u64> = (0..=r)
        .map(|i| {
            if clamped(i) {
                1
            } else {
                lassos[i].preperiod + lassos[i].period
            }
        })
        .collect();

    let signs: &[bool] = if has_tail_room { &[false, true] } else { &[false] };
    let mut tuples = signs.len();
    for &d in &domain {
        tuples = tuples.saturating_mul(d as usize);
    }
    if tuples > config.spectrum_guard {
        return Err(RecognizerError::TupleGuard { tuples, cap: config.spectrum_guard });
    }

    let mut parts = Vec::new();
    let mut ks = vec![0u64; r + 1];
    for &sign in signs {
        loop {
            let mut state = rec.start;
            if sign {
                state = rec.maps[r + 1][state];
            }
            for i in (0..=r).rev() {
                state = apply_pow(&rec.maps[i], ks[i], state);
            }
            if rec.accepting[state] {
                let mut offsets = Vec::with_capacity(r + 1);
                let mut periods = Vec::with_capacity(r + 1);
                for i in 0..=r {
                    if clamped(i) || ks[i] < lassos[i].preperiod {
                        offsets.push(ks[i]);
                        periods.push(0);
                    } else {
                        offsets.push(ks[i]);
                        periods.push(lassos[i].period);
                    }
                }
                let tail = if sign { TailMode::Positive } else { TailMode::None };
                parts.push(LinearSet::new(segment.clone(), offsets, periods, tail)?);
            }
            // odometer over the reduced exponent grid
            let mut i = 0;
            loop {
                if i > r {
                    break;
                }
                ks[i] += 1;
                if ks[i] < domain[i] {
                    break;
                }
                ks[i] = 0;
                i += 1;
            }
            if i > r {
                break;
            }
        }
    }
    Ok(SemilinearSet::new(segment.clone(), parts)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Not,
    And,
    Or,
}

/// Pads with copies of the sign map so the recognizer reads splits at a
/// deeper level. The old sign map absorbs everything above the old level,
/// so acceptance is unchanged.
fn pad_to(rec: &Recognizer, map_count: usize) -> Recognizer {
    let mut maps = rec.maps.clone();
    let sign = maps.last().expect("constructor guarantees maps").clone();
    while maps.len() < map_count {
        maps.push(sign.clone());
    }
    Recognizer {
        state_count: rec.state_count,
        start: rec.start,
        accepting: rec.accepting.clone(),
        maps,
    }
}

/// Boolean combination by complement or product construction. Operands of
/// different levels are padded to the deeper one first; padding preserves
/// acceptance only for recognizers satisfying the axioms, so violations in
/// the padded operands are an error here.
pub fn combine(
    op: BoolOp,
    first: &Recognizer,
    second: Option<&Recognizer>,
) -> Result<Recognizer, RecognizerError> {
    match op {
        BoolOp::Not => {
            if second.is_some() {
                return Err(RecognizerError::BadCombine("negation takes a single recognizer"));
            }
            let mut out = first.clone();
            for b in &mut out.accepting {
                *b = !*b;
            }
            Ok(out)
        }
        BoolOp::And | BoolOp::Or => {
            let second = second
                .ok_or(RecognizerError::BadCombine("binary combination needs two recognizers"))?;
            let map_count = first.maps.len().max(second.maps.len());
            let a = pad_to(first, map_count);
            let b = pad_to(second, map_count);
            for padded in [&a, &b] {
                let violations = padded.validate();
                if !violations.is_empty() {
                    return Err(RecognizerError::AxiomViolations(violations));
                }
            }
            let k2 = b.state_count;
            let state_count = a
                .state_count
                .checked_mul(k2)
                .ok_or(RecognizerError::Structural("state product overflows"))?;
            let maps = (0..map_count)
                .map(|l| {
                    let mut m = Vec::with_capacity(state_count);
                    for s1 in 0..a.state_count {
                        for s2 in 0..k2 {
                            m.push(a.maps[l][s1] * k2 + b.maps[l][s2]);
                        }
                    }
                    m
                })
                .collect();
            let mut accepting = vec![false; state_count];
            for (s1, acc) in accepting.chunks_mut(k2).enumerate() {
                for (s2, slot) in acc.iter_mut().enumerate() {
                    *slot = match op {
                        BoolOp::And => a.accepting[s1] && b.accepting[s2],
                        BoolOp::Or => a.accepting[s1] || b.accepting[s2],
                        BoolOp::Not => unreachable!(),
                    };
                }
            }
            Ok(Recognizer { state_count, start: a.start * k2 + b.start, accepting, maps })
        }
    }
}

/// Density report for the spectrum of `rec` inside `segment`: exact densities
/// up to `n_max` merged with the closed-form limit.
pub fn asymptotic_probability(
    rec: &Recognizer,
    segment: &Segment,
    n_max: usize,
    config: &Config,
) -> Result<DensityReport, RecognizerError> {
    let set = spectrum(rec, segment, config)?;
    let series = density_series(&set, n_max, config)?;
    let closed = semilinear_limit(&set, config)?;
    Ok(DensityReport {
        values: series.values,
        skipped: series.skipped,
        cesaro: series.cesaro,
        ..closed
    })
}

/// A named property with both faces: the sentence evaluated on finite
/// orders and the recognizer evaluated on ordinals.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub formula: MsoFormula,
    pub recognizer: Recognizer,
}

/// The built-in properties. Every entry's recognizer passes the axioms, and
/// its formula agrees with it on all finite orders.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let limit_formula = "(exists x. x = x) & !(exists x. forall y. (y < x | y = x))";
    // a limit element, or a nonempty order without a maximum
    let infinite_formula = "(exists x. ((exists y. y < x) & !(exists y. (y < x & !(exists z. (y < z & z < x)))))) \
         | ((exists x. x = x) & !(exists x. forall y. (y < x | y = x)))";
    // a subset alternating along successors from the minimum, avoiding the maximum
    let even_formula = "!(exists x. x = x) | (existsS X. (\
         (forall x. (!(exists y. y < x) -> x in X)) \
         & (forall x. forall y. ((x < y & !(exists z. (x < z & z < y))) -> \
             ((x in X -> !(y in X)) & (!(x in X) -> y in X)))) \
         & (forall x. (!(exists y. x < y) -> !(x in X)))))";
    let entry = |name, summary, formula: &str, rec: Recognizer| {
        debug_assert!(rec.validate().is_empty(), "{}", name);
        CatalogEntry {
            name,
            summary,
            formula: parse_formula(formula).expect("catalog formulas parse"),
            recognizer: rec,
        }
    };
    vec![
        entry(
            "zero",
            "the empty order",
            "!(exists x. x = x)",
            Recognizer::new(2, 0, &[0], vec![vec![1, 1], vec![1, 1]]).unwrap(),
        ),
        entry(
            "successor",
            "orders with a maximum element",
            "exists x. forall y. (y < x | y = x)",
            Recognizer::new(2, 0, &[1], vec![vec![1, 1], vec![0, 0]]).unwrap(),
        ),
        entry(
            "at-least-omega",
            "orders of type w or longer",
            infinite_formula,
            Recognizer::new(2, 0, &[1], vec![vec![0, 1], vec![1, 1]]).unwrap(),
        ),
        entry(
            "even-last-coefficient",
            "orders whose finite part has even length",
            even_formula,
            Recognizer::new(2, 0, &[0], vec![vec![1, 0], vec![0, 0]]).unwrap(),
        ),
        entry(
            "limit",
            "nonempty orders without a maximum",
            limit_formula,
            Recognizer::new(3, 0, &[1], vec![vec![2, 2, 2], vec![1, 1, 1]]).unwrap(),
        ),
        entry(
            "divisible-by-omega-squared",
            "orders of type w^2 * q",
            "!(exists x. x = x)",
            Recognizer::new(2, 0, &[0], vec![vec![1, 1], vec![1, 1], vec![0, 0]]).unwrap(),
        ),
    ]
}
