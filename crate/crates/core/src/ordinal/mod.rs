//! Ordinals below epsilon_0 in Cantor normal form.
//!
//! An ordinal is stored as its normal form `w^e1*c1 + ... + w^ek*ck` with
//! strictly decreasing exponents (themselves ordinals) and positive finite
//! coefficients; the empty sum is 0. All constructors normalize, so equal
//! ordinals are structurally equal and the derived lexicographic order on the
//! term list coincides with the ordinal order.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

mod enumerate;
mod matula;
mod parse;

pub use enumerate::{enumerate_by_norm, EnumerateError};
pub use matula::{matula_decode, matula_encode, MatulaCoder};
pub use parse::ParseError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Term {
    // field order matters: exponent before coefficient makes the derived
    // lexicographic order on terms the ordinal order
    exponent: Ordinal,
    coefficient: u64,
}

/// An ordinal `< epsilon_0`, always in Cantor normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1)
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: alloc::vec![Term { exponent: Ordinal::zero(), coefficient: n }],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::omega_pow_times(exponent, 1)
    }

    /// `w^exponent * coefficient`; zero coefficient gives 0.
    pub fn omega_pow_times(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: alloc::vec![Term { exponent, coefficient }],
        }
    }

    /// Builds the normal form of the natural sum of `w^e * c` for every pair.
    /// Pairs with zero coefficient vanish; equal exponents merge.
    pub fn from_terms<I: IntoIterator<Item = (Ordinal, u64)>>(pairs: I) -> Self {
        let mut terms: Vec<Term> = pairs
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .map(|(exponent, coefficient)| Term { exponent, coefficient })
            .collect();
        terms.sort_by(|s, t| t.exponent.cmp(&s.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(m) if m.exponent == t.exponent => {
                    m.coefficient = m
                        .coefficient
                        .checked_add(t.coefficient)
                        .expect("coefficient overflow");
                }
                _ => merged.push(t),
            }
        }
        Ordinal { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// The value as a natural number, when finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// Terms of the normal form, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, u64)> {
        self.terms.iter().map(|t| (&t.exponent, t.coefficient))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    pub fn leading_coefficient(&self) -> Option<u64> {
        self.terms.first().map(|t| t.coefficient)
    }

    /// True for `w^gamma` with coefficient 1 and `gamma > 0`.
    pub fn is_omega_power(&self) -> bool {
        matches!(self.terms.as_slice(),
            [t] if t.coefficient == 1 && !t.exponent.is_zero())
    }

    /// Natural (Hessenberg) sum: merges the two normal forms termwise.
    pub fn natural_sum(&self, other: &Ordinal) -> Ordinal {
        Ordinal::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(e, c)| (e.clone(), c)),
        )
    }

    /// Term-complexity norm: `N(0) = 0` and
    /// `N(sum w^ei*ci) = sum ci * (1 + N(ei))`.
    pub fn norm(&self) -> u64 {
        self.terms.iter().fold(0u64, |acc, t| {
            let per = 1u64
                .checked_add(t.exponent.norm())
                .expect("norm overflow");
            acc.checked_add(t.coefficient.checked_mul(per).expect("norm overflow"))
                .expect("norm overflow")
        })
    }

    /// Splits off the coefficients of `w^0 .. w^r`. Returns the coefficient
    /// vector (index `i` is the coefficient of `w^i`) together with the tail:
    /// the remaining terms with every finite exponent lowered by `r + 1`,
    /// infinite exponents unchanged.
    pub fn cnf_split(&self, r: usize) -> (Ordinal, Vec<u64>) {
        let r64 = r as u64;
        let mut coeffs = alloc::vec![0u64; r + 1];
        let mut tail_terms: Vec<Term> = Vec::new();
        for t in &self.terms {
            match t.exponent.as_nat() {
                Some(j) if j <= r64 => coeffs[j as usize] = t.coefficient,
                Some(j) => tail_terms.push(Term {
                    exponent: Ordinal::from_nat(j - (r64 + 1)),
                    coefficient: t.coefficient,
                }),
                None => tail_terms.push(t.clone()),
            }
        }
        (Ordinal { terms: tail_terms }, coeffs)
    }
}

/// `w^k * x`: raises every finite exponent of `x` by `k`, the inverse of the
/// tail direction of [`Ordinal::cnf_split`]. Infinite exponents are absorbing
/// and stay put.
pub fn omega_pow_mul(k: usize, x: &Ordinal) -> Ordinal {
    if k == 0 {
        return x.clone();
    }
    let k64 = k as u64;
    let terms = x
        .terms
        .iter()
        .map(|t| Term {
            exponent: match t.exponent.as_nat() {
                Some(j) => Ordinal::from_nat(j.checked_add(k64).expect("exponent overflow")),
                None => t.exponent.clone(),
            },
            coefficient: t.coefficient,
        })
        .collect();
    Ordinal { terms }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            match t.exponent.as_nat() {
                Some(1) => {}
                Some(j) => write!(f, "^{}", j)?,
                None => {
                    if t.exponent == Ordinal::omega() {
                        f.write_str("^w")?;
                    } else {
                        write!(f, "^({})", t.exponent)?;
                    }
                }
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({})", self)
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse::parse_ordinal(s)
    }
}

/// Named segments that extend past epsilon_0. Their elements are not
/// representable here, only counted through their term-complexity series.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SymbolicSegment {
    /// `[0, epsilon_0)`.
    EpsilonZero,
    /// `[0, Gamma_0)`.
    GammaZero,
    /// Bachmann-Howard terms counted over ordinal-indexed exponents.
    BachmannHowardOt,
    /// Bachmann-Howard terms counted over collapsed exponents.
    BachmannHowardCt,
}

impl SymbolicSegment {
    pub fn name(self) -> &'static str {
        match self {
            SymbolicSegment::EpsilonZero => "e0",
            SymbolicSegment::GammaZero => "G0",
            SymbolicSegment::BachmannHowardOt => "BH-OT",
            SymbolicSegment::BachmannHowardCt => "BH-CT",
        }
    }
}

/// A counting domain: either a concrete segment `[0, beta)` with
/// `beta < epsilon_0`, or one of the symbolic segments.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Segment {
    Cnf(Ordinal),
    Symbolic(SymbolicSegment),
}

impl Segment {
    /// Parses either a symbolic segment name (case-insensitive) or an
    /// ordinal in the `w^..` syntax.
    pub fn parse(s: &str) -> Result<Segment, ParseError> {
        let t = s.trim();
        for sym in [
            SymbolicSegment::EpsilonZero,
            SymbolicSegment::GammaZero,
            SymbolicSegment::BachmannHowardOt,
            SymbolicSegment::BachmannHowardCt,
        ] {
            if t.eq_ignore_ascii_case(sym.name()) {
                return Ok(Segment::Symbolic(sym));
            }
        }
        Ok(Segment::Cnf(t.parse()?))
    }

    /// Whether `x` lies inside the segment. Every representable ordinal lies
    /// below each symbolic segment.
    pub fn contains(&self, x: &Ordinal) -> bool {
        match self {
            Segment::Cnf(beta) => x < beta,
            Segment::Symbolic(_) => true,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Cnf(beta) => write!(f, "{}", beta),
            Segment::Symbolic(sym) => f.write_str(sym.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn norm_base_cases() {
        assert_eq!(Ordinal::zero().norm(), 0);
        assert_eq!(Ordinal::from_nat(1).norm(), 1);
        assert_eq!(Ordinal::from_nat(7).norm(), 7);
        assert_eq!(Ordinal::omega().norm(), 2);
        assert_eq!(ord("w^2*2+3").norm(), 9);
        assert_eq!(ord("w^w").norm(), 3);
        assert_eq!(ord("w^(w+1)").norm(), 4);
    }

    #[test]
    fn natural_sum_merges_and_orders() {
        let a = ord("w+1");
        let b = ord("w");
        assert_eq!(a.natural_sum(&b), ord("w*2+1"));
        let c = ord("w^2+3");
        assert_eq!(c.natural_sum(&ord("w*4")), ord("w^2+w*4+3"));
        assert_eq!(Ordinal::zero().natural_sum(&c), c);
    }

    #[test]
    fn natural_sum_norm_additive() {
        let a = ord("w^2*2+3");
        let b = ord("w^w+w");
        assert_eq!(a.natural_sum(&b).norm(), a.norm() + b.norm());
    }

    #[test]
    fn order_chain() {
        let chain = ["0", "1", "2", "w", "w+1", "w*2", "w^2", "w^2+w", "w^w", "w^(w^w)"];
        for pair in chain.windows(2) {
            assert!(ord(pair[0]) < ord(pair[1]), "{} < {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn order_examples() {
        assert!(ord("w^2") > ord("w*5+3"));
        assert!(ord("w^w") > ord("w^3*9"));
        assert!(ord("w^(w+1)") > ord("w^w*7"));
    }

    #[test]
    fn cnf_split_finite_exponents_shift() {
        let x = ord("w^3*2+w*5+7");
        let (tail, coeffs) = x.cnf_split(1);
        assert_eq!(coeffs, alloc::vec![7, 5]);
        assert_eq!(tail, ord("w*2"));
    }

    #[test]
    fn cnf_split_infinite_exponent_kept() {
        let x = ord("w^w");
        let (tail, coeffs) = x.cnf_split(3);
        assert_eq!(coeffs, alloc::vec![0, 0, 0, 0]);
        assert_eq!(tail, ord("w^w"));
    }

    #[test]
    fn cnf_split_zero() {
        let (tail, coeffs) = Ordinal::zero().cnf_split(2);
        assert!(tail.is_zero());
        assert_eq!(coeffs, alloc::vec![0, 0, 0]);
    }

    #[test]
    fn omega_pow_mul_inverts_split_tail() {
        let x = ord("w^5*2+w^4+w^w*3");
        let (tail, _) = x.cnf_split(2);
        assert_eq!(omega_pow_mul(3, &tail), ord("w^5*2+w^4+w^w*3"));
        assert_eq!(omega_pow_mul(0, &tail), tail);
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "5", "w", "w*3", "w+1", "w^2*2+3", "w^w", "w^(w+1)*2+w^3+4", "w^(w^w)"] {
            let x = ord(s);
            assert_eq!(alloc::format!("{}", x), *s);
        }
    }

    #[test]
    fn from_terms_drops_zero_coefficients() {
        let x = Ordinal::from_terms([(Ordinal::omega(), 0), (Ordinal::zero(), 2)]);
        assert_eq!(x, Ordinal::from_nat(2));
    }

    #[test]
    fn segment_parse_names() {
        assert_eq!(
            Segment::parse("E0").unwrap(),
            Segment::Symbolic(SymbolicSegment::EpsilonZero)
        );
        assert_eq!(
            Segment::parse("bh-ot").unwrap(),
            Segment::Symbolic(SymbolicSegment::BachmannHowardOt)
        );
        assert_eq!(Segment::parse("w^w").unwrap(), Segment::Cnf(ord("w^w")));
    }

    #[test]
    fn segment_contains() {
        let seg = Segment::Cnf(ord("w^2"));
        assert!(seg.contains(&ord("w*9+5")));
        assert!(!seg.contains(&ord("w^2")));
        assert!(Segment::Symbolic(SymbolicSegment::GammaZero).contains(&ord("w^(w^w)")));
    }
}
