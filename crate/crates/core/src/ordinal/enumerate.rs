//! Exhaustive enumeration of ordinals by norm. The brute-force ground truth
//! that the generating-function code is checked against.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;

use super::{Ordinal, Segment, SymbolicSegment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumerateError {
    /// `n` exceeds `Config::enum_norm_bound`.
    NormBound { requested: u64, bound: u64 },
    /// Elements of this segment are not representable, so they cannot be
    /// listed (only counted).
    UnsupportedSegment(SymbolicSegment),
}

impl fmt::Display for EnumerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerateError::NormBound { requested, bound } => {
                write!(f, "norm {} exceeds enumeration bound {}", requested, bound)
            }
            EnumerateError::UnsupportedSegment(sym) => {
                write!(f, "cannot enumerate elements of {}", sym.name())
            }
        }
    }
}

impl core::error::Error for EnumerateError {}

/// Every ordinal of norm exactly `n` inside the segment, ascending.
///
/// Ordinals below epsilon_0 of a given norm form a finite set; the segment
/// then filters it. Symbolic segments other than `e0` have members that are
/// not Cantor normal forms, so they are rejected.
pub fn enumerate_by_norm(
    segment: &Segment,
    n: u64,
    config: &Config,
) -> Result<Vec<Ordinal>, EnumerateError> {
    if n > config.enum_norm_bound {
        return Err(EnumerateError::NormBound { requested: n, bound: config.enum_norm_bound });
    }
    match segment {
        Segment::Symbolic(SymbolicSegment::EpsilonZero) | Segment::Cnf(_) => {}
        Segment::Symbolic(sym) => return Err(EnumerateError::UnsupportedSegment(*sym)),
    }
    let mut catalog = Catalog::new();
    let mut out = catalog.of_norm(n as usize).clone();
    if let Segment::Cnf(beta) = segment {
        out.retain(|x| x < beta);
    }
    out.sort();
    Ok(out)
}

/// Catalogs of all normal forms of each norm, built bottom-up.
struct Catalog {
    by_norm: Vec<Vec<Ordinal>>,
}

impl Catalog {
    fn new() -> Self {
        Catalog { by_norm: Vec::new() }
    }

    fn of_norm(&mut self, n: usize) -> &Vec<Ordinal> {
        while self.by_norm.len() <= n {
            let k = self.by_norm.len();
            let next = self.build(k);
            self.by_norm.push(next);
        }
        &self.by_norm[n]
    }

    fn build(&mut self, n: usize) -> Vec<Ordinal> {
        // exponent catalogs up to norm n-1 must exist before term lists of
        // total norm n can be formed
        for k in 0..n {
            self.of_norm(k);
        }
        self.term_lists(n, None)
            .into_iter()
            .map(|pairs| Ordinal::from_terms(pairs))
            .collect()
    }

    /// All descending term lists of total norm `total` with every exponent
    /// strictly below `bound` (no bound when `None`).
    fn term_lists(&self, total: usize, bound: Option<&Ordinal>) -> Vec<Vec<(Ordinal, u64)>> {
        if total == 0 {
            return alloc::vec![Vec::new()];
        }
        let mut out = Vec::new();
        for m in 1..=total {
            for exponent in &self.by_norm[m - 1] {
                if let Some(b) = bound {
                    if exponent >= b {
                        continue;
                    }
                }
                for c in 1..=(total / m) as u64 {
                    let rest_norm = total - (c as usize) * m;
                    for mut rest in self.term_lists(rest_norm, Some(exponent)) {
                        rest.push((exponent.clone(), c));
                        out.push(rest);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(segment: &str, n: u64) -> Vec<alloc::string::String> {
        let seg = Segment::parse(segment).unwrap();
        enumerate_by_norm(&seg, n, &Config::default())
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect()
    }

    #[test]
    fn norm_zero_is_just_zero() {
        assert_eq!(names("e0", 0), ["0"]);
        assert_eq!(names("w", 0), ["0"]);
    }

    #[test]
    fn below_omega_squared_norm_four() {
        assert_eq!(names("w^2", 4), ["4", "w+2", "w*2"]);
    }

    #[test]
    fn all_of_norm_four() {
        assert_eq!(
            names("e0", 4),
            ["4", "w+2", "w*2", "w^2+1", "w^3", "w^w+1", "w^(w+1)", "w^(w^2)", "w^(w^w)"]
        );
    }

    #[test]
    fn counts_match_rooted_trees() {
        // ordinals below epsilon_0 of norm n are counted by the rooted trees
        // with n edges: 1, 1, 2, 4, 9, 20, 48
        let sizes: Vec<usize> = (0..=6)
            .map(|n| names("e0", n).len())
            .collect();
        assert_eq!(sizes, [1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn segment_filter() {
        assert_eq!(names("w", 3), ["3"]);
        assert_eq!(names("w*2+1", 3), ["3", "w+1"]);
    }

    #[test]
    fn bound_is_enforced() {
        let seg = Segment::parse("w").unwrap();
        let err = enumerate_by_norm(&seg, 15, &Config::default()).unwrap_err();
        assert_eq!(err, EnumerateError::NormBound { requested: 15, bound: 14 });
    }

    #[test]
    fn symbolic_segments_not_listable() {
        let seg = Segment::parse("G0").unwrap();
        assert!(matches!(
            enumerate_by_norm(&seg, 2, &Config::default()),
            Err(EnumerateError::UnsupportedSegment(SymbolicSegment::GammaZero))
        ));
    }
}
