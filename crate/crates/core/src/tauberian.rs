//! Densities of semilinear sets and their limiting behavior.
//!
//! The ambient segment decides the regime. Below `w^w` counting series grow
//! polynomially and densities settle only in Cesaro mean, on a residue grid.
//! Power segments from `w^w` up have smooth superpolynomial growth and plain
//! limits. The symbolic segments have a finite radius of convergence `rho`,
//! and limits become rational expressions in `rho`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::Config;
use crate::counting::{count_series, radius_estimate, CountError, RadiusEstimate};
use crate::ordinal::Segment;
use crate::semilinear::{
    semilinear_count_series, signed_pieces, LinearSet, SemilinearError, SemilinearSet, TailMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `w <= beta < w^w`: polynomial growth, Cesaro limits on a grid.
    A,
    /// Power segments from `w^w` below `epsilon_0`: plain limits.
    B,
    /// Symbolic segments: plain limits, rational in the radius `rho`.
    C,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::A => "A",
            Regime::B => "B",
            Regime::C => "C",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Plain,
    Cesaro,
}

/// A value of the form `num(rho) / den(rho)`, polynomials with integer
/// coefficients (constant term first) in the segment's radius of
/// convergence, together with its estimated numeric value.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoExpr {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitValue {
    Exact(BigRational),
    Rho(RhoExpr),
    NotComputed,
}

/// Exact density data of a semilinear set, with the limit when one was
/// computed in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub ambient: Segment,
    pub regime: Regime,
    /// `values[n]` is the share of norm-n elements in the set; `None` where
    /// the segment has no elements of norm n.
    pub values: Vec<Option<BigRational>>,
    /// Indices where `values` is undefined.
    pub skipped: Vec<usize>,
    /// Running averages of the defined values.
    pub cesaro: Vec<BigRational>,
    pub limit: LimitValue,
    pub limit_kind: Option<LimitKind>,
    /// Residue grid along which the plain limit exists in regime A; 1 when
    /// the limit needs no grid.
    pub grid: u64,
    /// The radius estimate behind a `Rho` limit value.
    pub rho_used: Option<RadiusEstimate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityError {
    /// Finite segments have no density theory here.
    FiniteAmbient,
    /// Ambient shape without a closed form.
    UnsupportedAmbient(&'static str),
    Count(CountError),
    Semilinear(SemilinearError),
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::FiniteAmbient => f.write_str("finite segments have no limit density"),
            DensityError::UnsupportedAmbient(r) => write!(f, "unsupported ambient: {}", r),
            DensityError::Count(e) => write!(f, "{}", e),
            DensityError::Semilinear(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for DensityError {}

impl From<CountError> for DensityError {
    fn from(e: CountError) -> Self {
        DensityError::Count(e)
    }
}

impl From<SemilinearError> for DensityError {
    fn from(e: SemilinearError) -> Self {
        DensityError::Semilinear(e)
    }
}

/// Which limit regime the segment falls into.
pub fn regime_of(ambient: &Segment) -> Result<Regime, DensityError> {
    match ambient {
        Segment::Symbolic(_) => Ok(Regime::C),
        Segment::Cnf(beta) => match beta.leading_exponent() {
            None => Err(DensityError::FiniteAmbient),
            Some(e) if e.is_zero() => Err(DensityError::FiniteAmbient),
            Some(e) if e.is_finite() => Ok(Regime::A),
            Some(_) => Ok(Regime::B),
        },
    }
}

/// Exact densities `|S restricted to norm n| / c(n)` for `n <= n_max`,
/// with running Cesaro averages. The limit field stays `NotComputed`; see
/// [`semilinear_limit`] for closed forms.
pub fn density_series(
    s: &SemilinearSet,
    n_max: usize,
    config: &Config,
) -> Result<DensityReport, DensityError> {
    let regime = regime_of(s.ambient())?;
    let ambient_counts = count_series(s.ambient(), n_max, config)?;
    let set_counts = semilinear_count_series(s, n_max, config)?;
    let mut values: Vec<Option<BigRational>> = Vec::with_capacity(n_max + 1);
    let mut skipped = Vec::new();
    let mut cesaro = Vec::with_capacity(n_max + 1);
    let mut running = BigRational::zero();
    let mut defined = 0u64;
    for n in 0..=n_max {
        let total = &ambient_counts.values[n];
        if total.is_zero() {
            debug_assert!(set_counts[n].is_zero());
            values.push(None);
            skipped.push(n);
        } else {
            let v = BigRational::new(
                BigInt::from(set_counts[n].clone()),
                BigInt::from(total.clone()),
            );
            running += &v;
            defined += 1;
            values.push(Some(v));
        }
        let denom = if defined == 0 { 1 } else { defined };
        cesaro.push(&running / BigRational::from_integer(BigInt::from(denom)));
    }
    Ok(DensityReport {
        ambient: s.ambient().clone(),
        regime,
        values,
        skipped,
        cesaro,
        limit: LimitValue::NotComputed,
        limit_kind: None,
        grid: 1,
        rho_used: None,
    })
}

/// Closed-form limit density of a single linear set.
pub fn closed_form_limit(l: &LinearSet, config: &Config) -> Result<DensityReport, DensityError> {
    let regime = regime_of(l.ambient())?;
    let (limit, kind, grid, rho_used) = match regime {
        Regime::A => {
            let (value, grid) = limit_a(l)?;
            (LimitValue::Exact(value), LimitKind::Cesaro, grid, None)
        }
        Regime::B => (LimitValue::Exact(limit_b(l)?), LimitKind::Plain, 1, None),
        Regime::C => {
            if l.tail() == TailMode::None {
                (LimitValue::Exact(BigRational::zero()), LimitKind::Plain, 1, None)
            } else {
                let est = ambient_radius(l.ambient(), config)?;
                let (num, den) = limit_c_fraction(l)?;
                let expr = rho_expr(num, den, &est);
                (LimitValue::Rho(expr), LimitKind::Plain, 1, Some(est))
            }
        }
    };
    Ok(DensityReport {
        ambient: l.ambient().clone(),
        regime,
        values: Vec::new(),
        skipped: Vec::new(),
        cesaro: Vec::new(),
        limit,
        limit_kind: Some(kind),
        grid,
        rho_used,
    })
}

/// Closed-form limit density of a union, through inclusion-exclusion over
/// its signed pieces.
pub fn semilinear_limit(s: &SemilinearSet, config: &Config) -> Result<DensityReport, DensityError> {
    let regime = regime_of(s.ambient())?;
    let pieces = signed_pieces(s, config)?;
    let (limit, kind, grid, rho_used) = match regime {
        Regime::A => {
            let mut total = BigRational::zero();
            let mut grid: Option<u64> = None;
            for (sign, piece) in &pieces.terms {
                let (value, d) = limit_a(piece)?;
                if !value.is_zero() {
                    grid = Some(match grid {
                        Some(g) => gcd_u64(g, d),
                        None => d,
                    });
                }
                total += signed(*sign, value);
            }
            (LimitValue::Exact(total), LimitKind::Cesaro, grid.unwrap_or(1), None)
        }
        Regime::B => {
            let mut total = BigRational::zero();
            for (sign, piece) in &pieces.terms {
                total += signed(*sign, limit_b(piece)?);
            }
            (LimitValue::Exact(total), LimitKind::Plain, 1, None)
        }
        Regime::C => {
            // rational-function accumulation over the tail-carrying pieces;
            // pieces without a tail vanish in the limit
            let mut num = alloc::vec![BigInt::zero()];
            let mut den = alloc::vec![BigInt::one()];
            let mut touched = false;
            for (sign, piece) in &pieces.terms {
                if piece.tail() == TailMode::None {
                    continue;
                }
                touched = true;
                let (pn, pd) = limit_c_fraction(piece)?;
                // num/den +- pn/pd
                let mut new_num = poly_mul(&num, &pd);
                let cross = poly_mul(&pn, &den);
                new_num = poly_add(&new_num, &cross, *sign > 0);
                num = new_num;
                den = poly_mul(&den, &pd);
            }
            if touched {
                let est = ambient_radius(s.ambient(), config)?;
                let expr = rho_expr(num, den, &est);
                (LimitValue::Rho(expr), LimitKind::Plain, 1, Some(est))
            } else {
                (LimitValue::Exact(BigRational::zero()), LimitKind::Plain, 1, None)
            }
        }
    };
    Ok(DensityReport {
        ambient: s.ambient().clone(),
        regime,
        values: Vec::new(),
        skipped: Vec::new(),
        cesaro: Vec::new(),
        limit,
        limit_kind: Some(kind),
        grid,
        rho_used,
    })
}

fn signed(sign: i8, v: BigRational) -> BigRational {
    if sign > 0 {
        v
    } else {
        -v
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

/// Regime A: with `beta = w^R * d + lower`, a piece whose coordinates below
/// `R` are all periodic has Cesaro density `1 / (d * prod b_i)` on the grid
/// `gcd((i+1) b_i)`; any fixed coordinate below `R` kills the density. The
/// limit is guaranteed in the Cesaro sense only, so callers tag it Cesaro
/// even when the value is 0 and the plain limit happens to exist.
fn limit_a(l: &LinearSet) -> Result<(BigRational, u64), DensityError> {
    let Segment::Cnf(beta) = l.ambient() else { unreachable!("regime A is concrete") };
    let top = beta.leading_exponent().unwrap().as_nat().unwrap() as usize;
    let d = beta.leading_coefficient().unwrap();
    let target = core::cmp::max(l.r(), top);
    let mut total = BigRational::zero();
    let mut any_cesaro = false;
    let mut grid: Option<u64> = None;
    for piece in l.padded_to(target).map_err(DensityError::Semilinear)? {
        debug_assert_eq!(piece.tail(), TailMode::None);
        debug_assert!(piece.periods().get(top).is_none_or(|&b| b == 0));
        if (0..top).all(|i| piece.periods()[i] > 0) {
            let mut denom = BigUint::from(d);
            let mut g = 0u64;
            for i in 0..top {
                denom *= piece.periods()[i];
                g = gcd_u64(g, (i as u64 + 1) * piece.periods()[i]);
            }
            total += BigRational::new(BigInt::one(), BigInt::from(denom));
            any_cesaro = true;
            grid = Some(match grid {
                Some(old) => gcd_u64(old, g),
                None => g,
            });
        }
    }
    if any_cesaro {
        Ok((total, grid.unwrap()))
    } else {
        Ok((BigRational::zero(), 1))
    }
}

/// Regime B: each periodic coordinate thins by its period; fixed coordinates
/// and missing tails are negligible against the segment.
fn limit_b(l: &LinearSet) -> Result<BigRational, DensityError> {
    let Segment::Cnf(beta) = l.ambient() else { unreachable!("regime B is concrete") };
    if !beta.is_omega_power() {
        return Err(DensityError::UnsupportedAmbient(
            "no closed form over a non-power segment above w^w",
        ));
    }
    if l.tail() == TailMode::None {
        return Ok(BigRational::zero());
    }
    let mut denom = BigUint::one();
    for i in 0..=l.r() {
        if l.periods()[i] == 0 {
            return Ok(BigRational::zero());
        }
        denom *= l.periods()[i];
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(denom)))
}

/// Regime C: the density converges to
/// `rho^shift * prod_fixed (1 - rho^(i+1)) / prod_periodic (1 + .. + rho^((i+1)(b_i-1)))`
/// with `shift = sum (i+1) a_i`. Returned as numerator and denominator
/// polynomials, constant term first.
fn limit_c_fraction(l: &LinearSet) -> Result<(Vec<BigInt>, Vec<BigInt>), DensityError> {
    debug_assert_ne!(l.tail(), TailMode::None);
    let mut shift: u128 = 0;
    for i in 0..=l.r() {
        shift += (i as u128 + 1) * l.offsets()[i] as u128;
    }
    let shift = usize::try_from(shift)
        .map_err(|_| DensityError::Semilinear(SemilinearError::Overflow))?;
    let mut num = alloc::vec![BigInt::zero(); shift + 1];
    num[shift] = BigInt::one();
    let mut den = alloc::vec![BigInt::one()];
    for i in 0..=l.r() {
        let w = i + 1;
        let b = l.periods()[i];
        if b == 0 {
            // (1 - x^w)
            let mut f = alloc::vec![BigInt::zero(); w + 1];
            f[0] = BigInt::one();
            f[w] = -BigInt::one();
            num = poly_mul(&num, &f);
        } else {
            // 1 + x^w + ... + x^(w (b-1))
            let b = usize::try_from(b)
                .map_err(|_| DensityError::Semilinear(SemilinearError::Overflow))?;
            let mut f = alloc::vec![BigInt::zero(); w * (b - 1) + 1];
            for j in 0..b {
                f[w * j] = BigInt::one();
            }
            den = poly_mul(&den, &f);
        }
    }
    Ok((num, den))
}

fn ambient_radius(ambient: &Segment, config: &Config) -> Result<RadiusEstimate, DensityError> {
    let series = count_series(ambient, config.rho_series_len, config)?;
    Ok(radius_estimate(&series, config)?)
}

fn rho_expr(num: Vec<BigInt>, den: Vec<BigInt>, est: &RadiusEstimate) -> RhoExpr {
    let value = poly_eval(&num, est.rho) / poly_eval(&den, est.rho);
    RhoExpr { numerator: num, denominator: den, value }
}

fn poly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = alloc::vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    poly_trim(out)
}

fn poly_add(a: &[BigInt], b: &[BigInt], add: bool) -> Vec<BigInt> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        if add {
            out[i] += bi;
        } else {
            out[i] -= bi;
        }
    }
    poly_trim(out)
}

fn poly_eval(p: &[BigInt], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::LinearSet;

    fn seg(s: &str) -> Segment {
        Segment::parse(s).unwrap()
    }

    fn lset(ambient: &str, offsets: &[u64], periods: &[u64], tail: TailMode) -> LinearSet {
        LinearSet::new(seg(ambient), offsets.to_vec(), periods.to_vec(), tail).unwrap()
    }

    fn rational(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn regimes() {
        assert_eq!(regime_of(&seg("w")).unwrap(), Regime::A);
        assert_eq!(regime_of(&seg("w^5+w*2")).unwrap(), Regime::A);
        assert_eq!(regime_of(&seg("w^w")).unwrap(), Regime::B);
        assert_eq!(regime_of(&seg("w^(w^2+1)")).unwrap(), Regime::B);
        assert_eq!(regime_of(&seg("e0")).unwrap(), Regime::C);
        assert!(matches!(regime_of(&seg("17")), Err(DensityError::FiniteAmbient)));
    }

    #[test]
    fn density_series_even_below_omega() {
        let even = lset("w", &[0], &[2], TailMode::None);
        let s = SemilinearSet::new(seg("w"), alloc::vec![even]).unwrap();
        let report = density_series(&s, 9, &Config::default()).unwrap();
        assert_eq!(report.regime, Regime::A);
        assert!(report.skipped.is_empty());
        for n in 0..=9 {
            let want = if n % 2 == 0 { rational(1, 1) } else { rational(0, 1) };
            assert_eq!(report.values[n].clone().unwrap(), want);
        }
        assert_eq!(report.cesaro[9], rational(5, 10));
        assert_eq!(report.cesaro[8], rational(5, 9));
        assert_eq!(report.limit, LimitValue::NotComputed);
    }

    #[test]
    fn closed_form_even_below_omega() {
        let even = lset("w", &[0], &[2], TailMode::None);
        let report = closed_form_limit(&even, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 2)));
        assert_eq!(report.limit_kind, Some(LimitKind::Cesaro));
        assert_eq!(report.grid, 2);
    }

    #[test]
    fn closed_form_below_omega_squared() {
        let l = lset("w^2", &[0, 0], &[2, 1], TailMode::None);
        let report = closed_form_limit(&l, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 2)));
        assert_eq!(report.grid, 2);
        // fixed coordinate kills the density; the tag stays Cesaro because
        // that is all the regime guarantees
        let fixed = lset("w^2", &[3, 0], &[0, 1], TailMode::None);
        let report = closed_form_limit(&fixed, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(0, 1)));
        assert_eq!(report.limit_kind, Some(LimitKind::Cesaro));
        assert_eq!(report.grid, 1);
    }

    #[test]
    fn closed_form_general_segment() {
        let l = lset("w^2*2+w", &[0, 0, 0], &[3, 2, 0], TailMode::None);
        let report = closed_form_limit(&l, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 12)));
        assert_eq!(report.limit_kind, Some(LimitKind::Cesaro));
        assert_eq!(report.grid, gcd_u64(3, 4));
    }

    #[test]
    fn regime_b_limits() {
        let l = lset("w^w", &[1], &[2], TailMode::Any);
        let report = closed_form_limit(&l, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 2)));
        assert_eq!(report.limit_kind, Some(LimitKind::Plain));

        let fixed = lset("w^w", &[5], &[0], TailMode::Any);
        let report = closed_form_limit(&fixed, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(0, 1)));

        let none = lset("w^w", &[0], &[2], TailMode::None);
        let report = closed_form_limit(&none, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(0, 1)));

        let positive = lset("w^w", &[0, 1], &[2, 3], TailMode::Positive);
        let report = closed_form_limit(&positive, &Config::default()).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 6)));
    }

    #[test]
    fn regime_c_expression() {
        let cfg = Config::default();
        let l = lset("e0", &[0], &[2], TailMode::Any);
        let report = closed_form_limit(&l, &cfg).unwrap();
        let LimitValue::Rho(expr) = &report.limit else { panic!("expected rho expression") };
        // 1 / (1 + rho)
        assert_eq!(expr.numerator, alloc::vec![BigInt::one()]);
        assert_eq!(
            expr.denominator,
            alloc::vec![BigInt::one(), BigInt::one()]
        );
        let rho = report.rho_used.as_ref().unwrap().rho;
        assert!((expr.value - 1.0 / (1.0 + rho)).abs() < 1e-12);

        // fixed coordinate at 2: rho^2 (1 - rho)
        let l = lset("e0", &[2], &[0], TailMode::Any);
        let report = closed_form_limit(&l, &cfg).unwrap();
        let LimitValue::Rho(expr) = &report.limit else { panic!("expected rho expression") };
        assert_eq!(
            expr.numerator,
            alloc::vec![BigInt::zero(), BigInt::zero(), BigInt::one(), -BigInt::one()]
        );
        assert_eq!(expr.denominator, alloc::vec![BigInt::one()]);

        let none = lset("e0", &[0], &[2], TailMode::None);
        let report = closed_form_limit(&none, &cfg).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(0, 1)));
    }

    #[test]
    fn union_limits_add_up() {
        let cfg = Config::default();
        // even union odd below w
        let even = lset("w", &[0], &[2], TailMode::None);
        let odd = lset("w", &[1], &[2], TailMode::None);
        let s = SemilinearSet::new(seg("w"), alloc::vec![even, odd]).unwrap();
        let report = semilinear_limit(&s, &cfg).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(1, 1)));
        assert_eq!(report.limit_kind, Some(LimitKind::Cesaro));

        // multiples of 2 or 3 over w^w with tails
        let two = lset("w^w", &[0], &[2], TailMode::Any);
        let three = lset("w^w", &[0], &[3], TailMode::Any);
        let s = SemilinearSet::new(seg("w^w"), alloc::vec![two, three]).unwrap();
        let report = semilinear_limit(&s, &cfg).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(2, 3)));
    }

    #[test]
    fn union_limit_rho_combination() {
        let cfg = Config::default();
        let two = lset("e0", &[0], &[2], TailMode::Any);
        let three = lset("e0", &[0], &[3], TailMode::Any);
        let s = SemilinearSet::new(seg("e0"), alloc::vec![two, three]).unwrap();
        let report = semilinear_limit(&s, &cfg).unwrap();
        let LimitValue::Rho(expr) = &report.limit else { panic!("expected rho expression") };
        let rho = report.rho_used.as_ref().unwrap().rho;
        // the lcm-6 intersection is subtracted once
        let inter = 1.0 / (0..6).map(|k| rho.powi(k)).sum::<f64>();
        let want = 1.0 / (1.0 + rho) + 1.0 / (1.0 + rho + rho * rho) - inter;
        assert!((expr.value - want).abs() < 1e-12, "{} vs {}", expr.value, want);
    }

    #[test]
    fn empty_union_has_zero_limit() {
        let cfg = Config::default();
        let s = SemilinearSet::new(seg("e0"), alloc::vec![]).unwrap();
        let report = semilinear_limit(&s, &cfg).unwrap();
        assert_eq!(report.limit, LimitValue::Exact(rational(0, 1)));
    }

    #[test]
    fn non_power_above_omega_omega_is_unsupported() {
        let l = lset("w^w*2", &[0], &[2], TailMode::None);
        assert!(matches!(
            closed_form_limit(&l, &Config::default()),
            Err(DensityError::UnsupportedAmbient(_))
        ));
    }
}
