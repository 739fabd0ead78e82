//! Semilinear subsets of a segment, described through the coordinate split
//! `x = alpha_0 + w^r*k_r + ... + w*k_1 + k_0` at a level `r`: each
//! coordinate `k_i` is constrained to an arithmetic progression (or fixed),
//! and the tail `alpha_0` to one of three modes. Unions of such linear sets
//! are closed under intersection and support exact counting by norm.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::config::Config;
use crate::counting::{convolve, tail_series, CountError};
use crate::ordinal::{Ordinal, Segment, SymbolicSegment};

/// Constraint on the tail `alpha_0` of the coordinate split.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum TailMode {
    /// `alpha_0 = 0`.
    None,
    /// `alpha_0` unconstrained.
    Any,
    /// `alpha_0 > 0`.
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemilinearError {
    /// Operands live in different segments.
    AmbientMismatch,
    /// Malformed description (empty or mismatched coordinate vectors, or a
    /// padding target below the current level).
    BadShape(&'static str),
    /// The segment cannot carry coordinate splits.
    InvalidAmbient(&'static str),
    /// The description would contain elements outside its segment.
    InvalidSet(&'static str),
    /// Membership was asked for an ordinal outside the segment.
    OutOfRange,
    /// `intersect_linear` cannot pad a positive tail across levels; the
    /// set-level intersection can.
    PositivePadding,
    /// Arithmetic outside u64 during coordinate intersection.
    Overflow,
    /// Too many parts for inclusion-exclusion.
    PartCap { len: usize, cap: usize },
    /// Segment shape not supported by this decomposition.
    Unsupported(&'static str),
    Count(CountError),
}

impl fmt::Display for SemilinearError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemilinearError::AmbientMismatch => f.write_str("operands have different ambient segments"),
            SemilinearError::BadShape(r) => write!(f, "malformed linear set: {}", r),
            SemilinearError::InvalidAmbient(r) => write!(f, "invalid ambient: {}", r),
            SemilinearError::InvalidSet(r) => write!(f, "set escapes its ambient: {}", r),
            SemilinearError::OutOfRange => f.write_str("ordinal lies outside the ambient segment"),
            SemilinearError::PositivePadding => {
                f.write_str("positive tails cannot be padded pairwise; use the set-level operation")
            }
            SemilinearError::Overflow => f.write_str("coordinate arithmetic overflowed"),
            SemilinearError::PartCap { len, cap } => {
                write!(f, "{} parts exceed the inclusion-exclusion cap {}", len, cap)
            }
            SemilinearError::Unsupported(r) => write!(f, "unsupported: {}", r),
            SemilinearError::Count(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for SemilinearError {}

impl From<CountError> for SemilinearError {
    fn from(e: CountError) -> Self {
        SemilinearError::Count(e)
    }
}

/// One linear piece: fixed or periodic coordinates up to level `r`, plus a
/// tail mode. `offsets[i]` and `periods[i]` constrain the coefficient of
/// `w^i`; period 0 means the coordinate is fixed at its offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSet {
    ambient: Segment,
    offsets: Vec<u64>,
    periods: Vec<u64>,
    tail: TailMode,
}

impl LinearSet {
    pub fn new(
        ambient: Segment,
        offsets: Vec<u64>,
        periods: Vec<u64>,
        tail: TailMode,
    ) -> Result<Self, SemilinearError> {
        if offsets.is_empty() || offsets.len() != periods.len() {
            return Err(SemilinearError::BadShape("need equal, nonempty coordinate vectors"));
        }
        let set = LinearSet { ambient, offsets, periods, tail };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<(), SemilinearError> {
        let r = self.r();
        match &self.ambient {
            Segment::Symbolic(SymbolicSegment::BachmannHowardOt) => {
                return Err(SemilinearError::InvalidAmbient(
                    "BH-OT has no additive prime of norm 1, so no coordinate split",
                ));
            }
            Segment::Symbolic(SymbolicSegment::BachmannHowardCt) => {
                if r > 0 {
                    return Err(SemilinearError::InvalidAmbient(
                        "BH-CT has no additive prime of norm 2; only level 0 splits",
                    ));
                }
            }
            Segment::Symbolic(_) => {}
            Segment::Cnf(beta) => {
                if beta.is_finite() {
                    return Err(SemilinearError::InvalidAmbient(
                        "coordinate splits need a segment of at least w",
                    ));
                }
                if beta.is_omega_power() {
                    let gamma = beta.leading_exponent().unwrap();
                    if let Some(g) = gamma.as_nat() {
                        for i in 0..=r {
                            if i as u64 >= g && (self.offsets[i] != 0 || self.periods[i] != 0) {
                                return Err(SemilinearError::InvalidSet(
                                    "coordinates at or above the segment exponent must be fixed zero",
                                ));
                            }
                        }
                        if self.tail != TailMode::None && g <= r as u64 + 1 {
                            return Err(SemilinearError::InvalidSet(
                                "tail constraints need exponents above the split level",
                            ));
                        }
                    }
                } else {
                    if self.tail != TailMode::None {
                        return Err(SemilinearError::InvalidSet(
                            "tail constraints need a power segment or a symbolic segment",
                        ));
                    }
                    self.check_bound(beta)?;
                }
            }
        }
        Ok(())
    }

    /// Every member must stay below `beta`. With `h` the highest periodic
    /// position, the supremum of the members is
    /// `(fixed part above h) + w^(h+1)`; without periodic positions the
    /// single member itself must lie below.
    fn check_bound(&self, beta: &Ordinal) -> Result<(), SemilinearError> {
        let h = (0..=self.r()).rev().find(|&i| self.periods[i] > 0);
        let above = match h {
            Some(h) => h + 1,
            None => 0,
        };
        let mut sup = Ordinal::from_terms(
            (above..=self.r()).map(|i| (Ordinal::from_nat(i as u64), self.offsets[i])),
        );
        let strict = match h {
            Some(h) => {
                sup = sup.natural_sum(&Ordinal::omega_pow(Ordinal::from_nat(h as u64 + 1)));
                false
            }
            None => true,
        };
        let ok = if strict { &sup < beta } else { &sup <= beta };
        if ok {
            Ok(())
        } else {
            Err(SemilinearError::InvalidSet("members would reach the end of the segment"))
        }
    }

    pub fn ambient(&self) -> &Segment {
        &self.ambient
    }

    /// Split level: coordinates cover `w^0 ..= w^r`.
    pub fn r(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `offsets[i]` constrains the coefficient of `w^i`.
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn tail(&self) -> TailMode {
        self.tail
    }

    /// Whether `x` belongs to the set. `x` must lie in the ambient segment.
    pub fn member(&self, x: &Ordinal) -> Result<bool, SemilinearError> {
        if !self.ambient.contains(x) {
            return Err(SemilinearError::OutOfRange);
        }
        let (tail, coeffs) = x.cnf_split(self.r());
        let tail_ok = match self.tail {
            TailMode::None => tail.is_zero(),
            TailMode::Any => true,
            TailMode::Positive => !tail.is_zero(),
        };
        if !tail_ok {
            return Ok(false);
        }
        Ok((0..=self.r()).all(|i| {
            let (a, b, k) = (self.offsets[i], self.periods[i], coeffs[i]);
            if b == 0 {
                k == a
            } else {
                k >= a && (k - a) % b == 0
            }
        }))
    }

    /// The same set described at a higher level. Fixed-zero coordinates are
    /// appended under a `None` tail and free coordinates under an `Any` tail;
    /// a `Positive` tail splits by the highest nonzero piece above the old
    /// level, so the result can be several disjoint sets.
    pub fn padded_to(&self, target: usize) -> Result<Vec<LinearSet>, SemilinearError> {
        let r = self.r();
        if target < r {
            return Err(SemilinearError::BadShape("padding target below current level"));
        }
        if target == r {
            return Ok(alloc::vec![self.clone()]);
        }
        // finite power exponent, when the ambient constrains high coordinates
        let g = match &self.ambient {
            Segment::Cnf(beta) if beta.is_omega_power() => {
                beta.leading_exponent().unwrap().as_nat()
            }
            _ => None,
        };
        let position_free = |i: usize| -> (u64, u64) {
            match g {
                Some(g) if i as u64 >= g => (0, 0),
                _ => (0, 1),
            }
        };
        let has_room_above = |level: usize| -> bool {
            match g {
                Some(g) => g > level as u64 + 1,
                None => true,
            }
        };
        let mut out = Vec::new();
        match self.tail {
            TailMode::None => {
                let mut offsets = self.offsets.clone();
                let mut periods = self.periods.clone();
                offsets.resize(target + 1, 0);
                periods.resize(target + 1, 0);
                out.push(LinearSet::new(self.ambient.clone(), offsets, periods, TailMode::None)?);
            }
            TailMode::Any => {
                let mut offsets = self.offsets.clone();
                let mut periods = self.periods.clone();
                for i in r + 1..=target {
                    let (a, b) = position_free(i);
                    offsets.push(a);
                    periods.push(b);
                }
                let tail = if has_room_above(target) { TailMode::Any } else { TailMode::None };
                out.push(LinearSet::new(self.ambient.clone(), offsets, periods, tail)?);
            }
            TailMode::Positive => {
                // highest nonzero piece above level r: either the tail above
                // the target is nonzero, or some new coordinate is the top one
                if has_room_above(target) {
                    let mut offsets = self.offsets.clone();
                    let mut periods = self.periods.clone();
                    for i in r + 1..=target {
                        let (a, b) = position_free(i);
                        offsets.push(a);
                        periods.push(b);
                    }
                    out.push(LinearSet::new(
                        self.ambient.clone(),
                        offsets,
                        periods,
                        TailMode::Positive,
                    )?);
                }
                for w in r + 1..=target {
                    if let Some(g) = g {
                        if w as u64 >= g {
                            break;
                        }
                    }
                    let mut offsets = self.offsets.clone();
                    let mut periods = self.periods.clone();
                    for i in r + 1..=target {
                        let (a, b) = if i == w {
                            (1, 1)
                        } else if i < w {
                            position_free(i)
                        } else {
                            (0, 0)
                        };
                        offsets.push(a);
                        periods.push(b);
                    }
                    out.push(LinearSet::new(
                        self.ambient.clone(),
                        offsets,
                        periods,
                        TailMode::None,
                    )?);
                }
            }
        }
        Ok(out)
    }
}

/// Intersection of two coordinate constraints, as `(offset, period)`.
fn coord_intersect(
    a1: u64,
    b1: u64,
    a2: u64,
    b2: u64,
) -> Result<Option<(u64, u64)>, SemilinearError> {
    let in_set = |a: u64, b: u64, v: u64| v == a || (b > 0 && v > a && (v - a) % b == 0);
    match (b1, b2) {
        (0, 0) => Ok((a1 == a2).then_some((a1, 0))),
        (0, _) => Ok(in_set(a2, b2, a1).then_some((a1, 0))),
        (_, 0) => Ok(in_set(a1, b1, a2).then_some((a2, 0))),
        _ => {
            let g = b1.gcd(&b2);
            let l = (b1 as u128 / g as u128) * b2 as u128;
            let Ok(l) = u64::try_from(l) else {
                return Err(SemilinearError::Overflow);
            };
            if a1.abs_diff(a2) % g != 0 {
                return Ok(None);
            }
            // minimal solution of k = a1 (mod b1), k = a2 (mod b2); with the
            // combined period inside u64, every intermediate fits u128
            let b1g = b1 / g;
            let b2g = b2 / g;
            let diff = (a2 as i128 - a1 as i128) / g as i128;
            let ext = (b1g as i128).extended_gcd(&(b2g as i128));
            debug_assert_eq!(ext.gcd, 1);
            let dm = diff.rem_euclid(b2g as i128) as u128;
            let xm = ext.x.rem_euclid(b2g as i128) as u128;
            let t = dm * xm % b2g as u128;
            let mut k = a1 as u128 + b1 as u128 * t;
            let lo = core::cmp::max(a1, a2) as u128;
            if k < lo {
                k += (lo - k).div_ceil(l as u128) * l as u128;
            }
            let k = u64::try_from(k).map_err(|_| SemilinearError::Overflow)?;
            Ok(Some((k, l)))
        }
    }
}

fn tail_intersect(t1: TailMode, t2: TailMode) -> Option<TailMode> {
    use TailMode::*;
    match (t1, t2) {
        (None, Positive) | (Positive, None) => Option::None,
        (None, _) | (_, None) => Some(None),
        (Positive, _) | (_, Positive) => Some(Positive),
        (Any, Any) => Some(Any),
    }
}

/// Intersection of two linear sets over the same segment; `None` when empty.
/// Levels may differ unless the lower set has a positive tail (then the
/// result is not linear; intersect the sets instead).
pub fn intersect_linear(
    l1: &LinearSet,
    l2: &LinearSet,
) -> Result<Option<LinearSet>, SemilinearError> {
    if l1.ambient != l2.ambient {
        return Err(SemilinearError::AmbientMismatch);
    }
    let target = core::cmp::max(l1.r(), l2.r());
    let pad = |l: &LinearSet| -> Result<LinearSet, SemilinearError> {
        if l.r() == target {
            return Ok(l.clone());
        }
        if l.tail == TailMode::Positive {
            return Err(SemilinearError::PositivePadding);
        }
        Ok(l.padded_to(target)?.pop().unwrap())
    };
    let p1 = pad(l1)?;
    let p2 = pad(l2)?;
    let Some(tail) = tail_intersect(p1.tail, p2.tail) else {
        return Ok(Option::None);
    };
    let mut offsets = Vec::with_capacity(target + 1);
    let mut periods = Vec::with_capacity(target + 1);
    for i in 0..=target {
        match coord_intersect(p1.offsets[i], p1.periods[i], p2.offsets[i], p2.periods[i])? {
            Some((a, b)) => {
                offsets.push(a);
                periods.push(b);
            }
            Option::None => return Ok(Option::None),
        }
    }
    Ok(Some(LinearSet::new(l1.ambient.clone(), offsets, periods, tail)?))
}

/// Finite union of linear sets over one segment. May be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearSet {
    ambient: Segment,
    parts: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn new(ambient: Segment, parts: Vec<LinearSet>) -> Result<Self, SemilinearError> {
        if parts.iter().any(|p| p.ambient != ambient) {
            return Err(SemilinearError::AmbientMismatch);
        }
        Ok(SemilinearSet { ambient, parts })
    }

    pub fn ambient(&self) -> &Segment {
        &self.ambient
    }

    pub fn parts(&self) -> &[LinearSet] {
        &self.parts
    }

    pub fn member(&self, x: &Ordinal) -> Result<bool, SemilinearError> {
        for p in &self.parts {
            if p.member(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet, SemilinearError> {
        if self.ambient != other.ambient {
            return Err(SemilinearError::AmbientMismatch);
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(SemilinearSet { ambient: self.ambient.clone(), parts })
    }

    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet, SemilinearError> {
        if self.ambient != other.ambient {
            return Err(SemilinearError::AmbientMismatch);
        }
        let target = self
            .parts
            .iter()
            .chain(&other.parts)
            .map(|p| p.r())
            .max()
            .unwrap_or(0);
        let mut mine = Vec::new();
        for p in &self.parts {
            mine.extend(p.padded_to(target)?);
        }
        let mut theirs = Vec::new();
        for p in &other.parts {
            theirs.extend(p.padded_to(target)?);
        }
        let mut parts = Vec::new();
        for a in &mine {
            for b in &theirs {
                if let Some(c) = intersect_linear(a, b)? {
                    parts.push(c);
                }
            }
        }
        Ok(SemilinearSet { ambient: self.ambient.clone(), parts })
    }

    /// All parts rewritten at the common maximal level.
    fn normalized_parts(&self) -> Result<Vec<LinearSet>, SemilinearError> {
        let target = self.parts.iter().map(|p| p.r()).max().unwrap_or(0);
        let mut out = Vec::new();
        for p in &self.parts {
            out.extend(p.padded_to(target)?);
        }
        Ok(out)
    }
}

/// Inclusion-exclusion form of a union: signed linear pieces whose counting
/// series add up to the union's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPieces {
    pub terms: Vec<(i8, LinearSet)>,
}

/// Expands a union into signed intersection pieces, pruning empty branches.
pub fn signed_pieces(s: &SemilinearSet, config: &Config) -> Result<SignedPieces, SemilinearError> {
    let parts = s.normalized_parts()?;
    if parts.len() > config.part_cap {
        return Err(SemilinearError::PartCap { len: parts.len(), cap: config.part_cap });
    }
    let mut terms: Vec<(i8, LinearSet)> = Vec::new();
    // depth-first subset extension; a branch dies as soon as its
    // intersection empties, which keeps the blowup near the count of
    // actually-overlapping subfamilies
    fn extend(
        parts: &[LinearSet],
        from: usize,
        current: &LinearSet,
        sign: i8,
        terms: &mut Vec<(i8, LinearSet)>,
    ) -> Result<(), SemilinearError> {
        for i in from..parts.len() {
            if let Some(next) = intersect_linear(current, &parts[i])? {
                terms.push((sign, next.clone()));
                extend(parts, i + 1, &next, -sign, terms)?;
            }
        }
        Ok(())
    }
    for i in 0..parts.len() {
        terms.push((1, parts[i].clone()));
        extend(&parts, i + 1, &parts[i], -1, &mut terms)?;
    }
    Ok(SignedPieces { terms })
}

/// Counting series of one linear set: convolution of a factor per
/// coordinate (weight `i + 1` per unit at position `i`) with the tail factor.
pub fn linear_count_series(
    l: &LinearSet,
    n_max: usize,
    config: &Config,
) -> Result<Vec<BigUint>, SemilinearError> {
    if n_max > config.truncation_cap {
        return Err(SemilinearError::Count(CountError::TruncationCap {
            requested: n_max,
            cap: config.truncation_cap,
        }));
    }
    let mut acc = alloc::vec![BigUint::zero(); n_max + 1];
    acc[0] = BigUint::one();
    for i in 0..=l.r() {
        let weight = (i + 1) as u128;
        let (a, b) = (l.offsets[i], l.periods[i]);
        let base = weight * a as u128;
        let mut factor = alloc::vec![BigUint::zero(); n_max + 1];
        if base > n_max as u128 {
            return Ok(alloc::vec![BigUint::zero(); n_max + 1]);
        }
        let mut pos = base;
        loop {
            factor[pos as usize] = BigUint::one();
            if b == 0 {
                break;
            }
            pos += weight * b as u128;
            if pos > n_max as u128 {
                break;
            }
        }
        acc = convolve(&acc, &factor, n_max);
    }
    match l.tail {
        TailMode::None => {}
        TailMode::Any | TailMode::Positive => {
            let mut t = tail_series(&l.ambient, l.r(), n_max, config)?;
            if l.tail == TailMode::Positive {
                t[0] -= BigUint::one();
            }
            acc = convolve(&acc, &t, n_max);
        }
    }
    Ok(acc)
}

/// Counting series of a union, through inclusion-exclusion.
pub fn semilinear_count_series(
    s: &SemilinearSet,
    n_max: usize,
    config: &Config,
) -> Result<Vec<BigUint>, SemilinearError> {
    let pieces = signed_pieces(s, config)?;
    let mut acc = alloc::vec![BigInt::zero(); n_max + 1];
    for (sign, piece) in &pieces.terms {
        let series = linear_count_series(piece, n_max, config)?;
        for (slot, v) in acc.iter_mut().zip(series) {
            let v = BigInt::from(v);
            if *sign > 0 {
                *slot += v;
            } else {
                *slot -= v;
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|v| {
            debug_assert!(!v.is_negative(), "inclusion-exclusion must stay nonnegative");
            v.to_biguint().unwrap_or_default()
        })
        .collect())
}

/// Writes `[0, beta)` itself as disjoint linear pieces: one piece per way of
/// lowering a leading coefficient, free below, plus a single free piece when
/// `beta` is a power with an infinite exponent. Segments `>= w^w` that are
/// not powers would need coordinates at infinite positions and are rejected.
pub fn decompose_beta(beta: &Ordinal) -> Result<Vec<LinearSet>, SemilinearError> {
    if beta.is_finite() {
        return Err(SemilinearError::InvalidAmbient(
            "coordinate splits need a segment of at least w",
        ));
    }
    let ambient = Segment::Cnf(beta.clone());
    if beta.is_omega_power() && !beta.leading_exponent().unwrap().is_finite() {
        return Ok(alloc::vec![LinearSet::new(
            ambient,
            alloc::vec![0],
            alloc::vec![1],
            TailMode::Any,
        )?]);
    }
    let top = match beta.leading_exponent().unwrap().as_nat() {
        Some(g) => g as usize,
        None => {
            return Err(SemilinearError::Unsupported(
                "a non-power segment above w^w needs coordinates at infinite positions",
            ))
        }
    };
    let mut coeff = alloc::vec![0u64; top + 1];
    for (exponent, c) in beta.terms() {
        coeff[exponent.as_nat().unwrap() as usize] = c;
    }
    let mut out = Vec::new();
    for j in (0..=top).rev() {
        for k in 1..=coeff[j] {
            let mut offsets = alloc::vec![0u64; top + 1];
            let mut periods = alloc::vec![0u64; top + 1];
            for i in 0..=top {
                if i > j {
                    offsets[i] = coeff[i];
                } else if i == j {
                    offsets[i] = coeff[j] - k;
                } else {
                    periods[i] = 1;
                }
            }
            out.push(LinearSet::new(ambient.clone(), offsets, periods, TailMode::None)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn seg(s: &str) -> Segment {
        Segment::parse(s).unwrap()
    }

    fn lset(ambient: &str, offsets: &[u64], periods: &[u64], tail: TailMode) -> LinearSet {
        LinearSet::new(seg(ambient), offsets.to_vec(), periods.to_vec(), tail).unwrap()
    }

    #[test]
    fn constructor_validations() {
        let bad = LinearSet::new(seg("w"), alloc::vec![0, 0], alloc::vec![1], TailMode::None);
        assert!(matches!(bad, Err(SemilinearError::BadShape(_))));
        let finite = LinearSet::new(seg("5"), alloc::vec![0], alloc::vec![1], TailMode::None);
        assert!(matches!(finite, Err(SemilinearError::InvalidAmbient(_))));
        // coordinate at the exponent of w^1 must be fixed zero
        let high = LinearSet::new(seg("w"), alloc::vec![0, 0], alloc::vec![1, 1], TailMode::None);
        assert!(matches!(high, Err(SemilinearError::InvalidSet(_))));
        let ok = LinearSet::new(seg("w"), alloc::vec![0, 0], alloc::vec![1, 0], TailMode::None);
        assert!(ok.is_ok());
        // no tail room below w^2 at level 1
        let tail = LinearSet::new(seg("w^2"), alloc::vec![0, 0], alloc::vec![1, 1], TailMode::Any);
        assert!(matches!(tail, Err(SemilinearError::InvalidSet(_))));
        // general segments carry no tails
        let gen = LinearSet::new(seg("w^2+w"), alloc::vec![0], alloc::vec![1], TailMode::Any);
        assert!(matches!(gen, Err(SemilinearError::InvalidSet(_))));
        // members would reach w^2*2 + w
        let wide =
            LinearSet::new(seg("w^2*2+w"), alloc::vec![0, 0, 2], alloc::vec![1, 1, 0], TailMode::None);
        assert!(matches!(wide, Err(SemilinearError::InvalidSet(_))));
        // one level lower is fine
        let slim =
            LinearSet::new(seg("w^2*2+w"), alloc::vec![0, 0, 2], alloc::vec![1, 0, 0], TailMode::None);
        assert!(slim.is_ok());
        let bh = LinearSet::new(seg("BH-OT"), alloc::vec![0], alloc::vec![1], TailMode::None);
        assert!(matches!(bh, Err(SemilinearError::InvalidAmbient(_))));
        let ct1 = LinearSet::new(seg("BH-CT"), alloc::vec![0, 0], alloc::vec![1, 1], TailMode::Any);
        assert!(matches!(ct1, Err(SemilinearError::InvalidAmbient(_))));
        assert!(LinearSet::new(seg("BH-CT"), alloc::vec![0], alloc::vec![2], TailMode::Any).is_ok());
    }

    #[test]
    fn member_even_coefficient() {
        let even = lset("w^2", &[0, 0], &[2, 1], TailMode::None);
        assert!(even.member(&ord("0")).unwrap());
        assert!(even.member(&ord("w*5+4")).unwrap());
        assert!(!even.member(&ord("w*5+3")).unwrap());
        assert!(matches!(even.member(&ord("w^2")), Err(SemilinearError::OutOfRange)));
    }

    #[test]
    fn member_tail_modes() {
        let pos = lset("w^3", &[0], &[1], TailMode::Positive);
        assert!(pos.member(&ord("w*5+3")).unwrap());
        assert!(pos.member(&ord("w^2+7")).unwrap());
        assert!(!pos.member(&ord("3")).unwrap());
        let any = lset("w^3", &[0], &[1], TailMode::Any);
        assert!(any.member(&ord("3")).unwrap());
        let none = lset("w^3", &[5], &[0], TailMode::None);
        assert!(none.member(&ord("5")).unwrap());
        assert!(!none.member(&ord("w+5")).unwrap());
        assert!(!none.member(&ord("6")).unwrap());
    }

    #[test]
    fn coordinate_intersections() {
        assert_eq!(coord_intersect(0, 2, 0, 3).unwrap(), Some((0, 6)));
        assert_eq!(coord_intersect(1, 2, 0, 3).unwrap(), Some((3, 6)));
        assert_eq!(coord_intersect(0, 2, 1, 2).unwrap(), None);
        assert_eq!(coord_intersect(2, 4, 3, 5).unwrap(), Some((18, 20)));
        assert_eq!(coord_intersect(5, 0, 1, 2).unwrap(), Some((5, 0)));
        assert_eq!(coord_intersect(5, 0, 0, 2).unwrap(), None);
        assert_eq!(coord_intersect(7, 0, 7, 0).unwrap(), Some((7, 0)));
        assert_eq!(coord_intersect(5, 3, 0, 1).unwrap(), Some((5, 3)));
        // offsets push the minimal common value past the congruence base
        assert_eq!(coord_intersect(9, 2, 0, 3).unwrap(), Some((9, 6)));
        assert!(matches!(
            coord_intersect(0, u64::MAX - 1, 0, u64::MAX - 2),
            Err(SemilinearError::Overflow)
        ));
    }

    #[test]
    fn tail_lattice() {
        use TailMode::*;
        assert_eq!(tail_intersect(None, Positive), Option::None);
        assert_eq!(tail_intersect(None, Any), Some(None));
        assert_eq!(tail_intersect(Positive, Any), Some(Positive));
        assert_eq!(tail_intersect(Any, Any), Some(Any));
    }

    #[test]
    fn intersect_respects_members() {
        let even = lset("w^2", &[0, 0], &[2, 1], TailMode::None);
        let ones = lset("w^2", &[1, 0], &[3, 2], TailMode::None);
        let both = intersect_linear(&even, &ones).unwrap().unwrap();
        for k0 in 0..30 {
            for k1 in 0..6 {
                let x = Ordinal::from_terms([
                    (Ordinal::one(), k1),
                    (Ordinal::zero(), k0),
                ]);
                let want = even.member(&x).unwrap() && ones.member(&x).unwrap();
                assert_eq!(both.member(&x).unwrap(), want, "k1={} k0={}", k1, k0);
            }
        }
    }

    #[test]
    fn intersect_mixed_levels() {
        let low = lset("w^3", &[0], &[2], TailMode::None);
        let high = lset("w^3", &[0, 0], &[3, 2], TailMode::None);
        let both = intersect_linear(&low, &high).unwrap().unwrap();
        // low fixes everything above level 0 to zero
        assert_eq!(both.offsets(), &[0, 0]);
        assert_eq!(both.periods(), &[6, 0]);
        assert!(both.member(&ord("6")).unwrap());
        // odd coefficient of w fails the padded constraint
        assert!(intersect_linear(&low, &lset("w^3", &[0, 1], &[3, 0], TailMode::None))
            .unwrap()
            .is_none());
    }

    #[test]
    fn intersect_positive_padding_is_refused() {
        let pos = lset("w^3", &[0], &[1], TailMode::Positive);
        let wide = lset("w^3", &[0, 0], &[1, 1], TailMode::Any);
        assert!(matches!(
            intersect_linear(&pos, &wide),
            Err(SemilinearError::PositivePadding)
        ));
    }

    #[test]
    fn padding_preserves_membership() {
        let samples: Vec<Ordinal> = [
            "0", "1", "2", "3", "7", "w", "w+1", "w+2", "w*2", "w*2+1", "w*3+2", "w^2", "w^2+w",
            "w^2+w+1", "w^2*2", "w^2*4+w*3+2", "w^3", "w^3+w^2", "w^3*2+w*5+1",
        ]
        .iter()
        .map(|s| ord(s))
        .collect();
        let sets = [
            lset("w^4", &[0], &[2], TailMode::None),
            lset("w^4", &[1], &[2], TailMode::Any),
            lset("w^4", &[0], &[1], TailMode::Positive),
            lset("w^4", &[2, 1], &[3, 0], TailMode::Positive),
            lset("w^4", &[0, 0], &[1, 2], TailMode::Any),
        ];
        for l in &sets {
            for target in l.r()..=3 {
                let padded = l.padded_to(target).unwrap();
                for x in &samples {
                    let want = l.member(x).unwrap();
                    let got = padded
                        .iter()
                        .map(|p| p.member(x).unwrap())
                        .filter(|&b| b)
                        .count();
                    assert_eq!(got > 0, want, "{} at level {}", x, target);
                    // pieces stay disjoint
                    assert!(got <= 1, "{} hit {} pieces", x, got);
                }
            }
        }
    }

    #[test]
    fn padding_respects_finite_room() {
        // below w^2 the level-1 coordinate exists but level 2 does not
        let pos = lset("w^2", &[0], &[1], TailMode::Positive);
        let padded = pos.padded_to(1).unwrap();
        // the pure-tail piece is empty below w^2 at level 1, leaving the
        // single piece with k_1 >= 1
        assert_eq!(padded.len(), 1);
        assert_eq!(padded[0].offsets(), &[0, 1]);
        assert_eq!(padded[0].periods(), &[1, 1]);
        assert_eq!(padded[0].tail(), TailMode::None);
        let any = lset("w^2", &[0], &[1], TailMode::Any);
        let padded = any.padded_to(1).unwrap();
        assert_eq!(padded.len(), 1);
        assert_eq!(padded[0].tail(), TailMode::None);
    }

    #[test]
    fn linear_count_even_set() {
        let even = lset("w", &[0], &[2], TailMode::None);
        let series = linear_count_series(&even, 6, &Config::default()).unwrap();
        let got: Vec<u64> = series.iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, [1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn linear_count_with_tail() {
        // all of [0, w^w): free coordinate plus any tail above level 0
        let all = lset("w^w", &[0], &[1], TailMode::Any);
        let series = linear_count_series(&all, 8, &Config::default()).unwrap();
        let got: Vec<u64> = series.iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn signed_pieces_of_overlapping_union() {
        let a = lset("w", &[0], &[2], TailMode::None);
        let b = lset("w", &[0], &[3], TailMode::None);
        let s = SemilinearSet::new(seg("w"), alloc::vec![a, b]).unwrap();
        let pieces = signed_pieces(&s, &Config::default()).unwrap();
        assert_eq!(pieces.terms.len(), 3);
        let counts = semilinear_count_series(&s, 12, &Config::default()).unwrap();
        let got: Vec<u64> = counts.iter().map(|v| v.to_u64().unwrap()).collect();
        // multiples of 2 or 3
        assert_eq!(got, [1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1]);
    }

    #[test]
    fn part_cap_is_enforced() {
        let parts: Vec<LinearSet> =
            (0..21).map(|i| lset("w", &[i], &[0], TailMode::None)).collect();
        let s = SemilinearSet::new(seg("w"), parts).unwrap();
        assert!(matches!(
            signed_pieces(&s, &Config::default()),
            Err(SemilinearError::PartCap { len: 21, cap: 20 })
        ));
    }

    #[test]
    fn decompose_small_segments() {
        let pieces = decompose_beta(&ord("w")).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].offsets(), &[0, 0]);
        assert_eq!(pieces[0].periods(), &[1, 0]);

        let pieces = decompose_beta(&ord("w^2*2+w")).unwrap();
        assert_eq!(pieces.len(), 3);

        let pieces = decompose_beta(&ord("w^w")).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].tail(), TailMode::Any);

        assert!(matches!(
            decompose_beta(&ord("w^w*2")),
            Err(SemilinearError::Unsupported(_))
        ));
        assert!(matches!(
            decompose_beta(&ord("7")),
            Err(SemilinearError::InvalidAmbient(_))
        ));
    }

    #[test]
    fn decompose_covers_disjointly() {
        let cfg = Config::default();
        for beta in ["w", "w*3", "w^2", "w^2*2+w", "w^3+w^2*2+5", "w^w"] {
            let beta = ord(beta);
            let pieces = decompose_beta(&beta).unwrap();
            for n in 0..=8u64 {
                for x in crate::ordinal::enumerate_by_norm(
                    &Segment::Symbolic(SymbolicSegment::EpsilonZero),
                    n,
                    &cfg,
                )
                .unwrap()
                {
                    if x >= beta {
                        continue;
                    }
                    let hits = pieces
                        .iter()
                        .filter(|p| p.member(&x).unwrap())
                        .count();
                    assert_eq!(hits, 1, "{} in [0,{})", x, beta);
                }
            }
        }
    }
}
