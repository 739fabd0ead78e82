//! JSON wire formats and the shared text renderings.
//!
//! Coordinate vectors travel highest exponent first (`a = [a_r .. a_0]`),
//! the reverse of the in-memory order. Counting values and rationals are
//! decimal strings (`"48"`, `"1/2"`) so exactness survives any JSON reader;
//! floats carry ten significant digits.

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use ordlaw_core::counting::RadiusEstimate;
use ordlaw_core::recognizer::Recognizer;
use ordlaw_core::semilinear::{LinearSet, SemilinearSet, TailMode};
use ordlaw_core::tauberian::{DensityReport, LimitKind, LimitValue, RhoExpr};
use ordlaw_core::Segment;

/// Ten significant digits, scientific notation.
pub fn sig10(x: f64) -> String {
    format!("{:.9e}", x)
}

pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_segment(s: &str) -> Result<Segment> {
    Segment::parse(s).with_context(|| format!("segment {:?}", s))
}

fn tail_mode(s: &str) -> Result<TailMode> {
    match s {
        "none" => Ok(TailMode::None),
        "any" => Ok(TailMode::Any),
        "positive" => Ok(TailMode::Positive),
        other => bail!("unknown tail mode {:?}, expected none|any|positive", other),
    }
}

fn tail_name(t: TailMode) -> &'static str {
    match t {
        TailMode::None => "none",
        TailMode::Any => "any",
        TailMode::Positive => "positive",
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSetWire {
    pub r: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub tail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
}

/// A semilinear set on disk: the ambient may sit on the set, on every part,
/// or both (parts win).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    pub parts: Vec<LinearSetWire>,
}

impl SetWire {
    pub fn into_set(self) -> Result<SemilinearSet> {
        let top = match &self.ambient {
            Some(s) => Some(parse_segment(s)?),
            None => None,
        };
        let mut parts = Vec::with_capacity(self.parts.len());
        for (i, p) in self.parts.iter().enumerate() {
            let ambient = match (&p.ambient, &top) {
                (Some(s), _) => parse_segment(s)?,
                (None, Some(a)) => a.clone(),
                (None, None) => bail!("part {}: no ambient on the part or the set", i),
            };
            if p.a.len() != p.r + 1 || p.b.len() != p.r + 1 {
                bail!(
                    "part {}: r = {} needs {} coordinates, got {} offsets and {} periods",
                    i,
                    p.r,
                    p.r + 1,
                    p.a.len(),
                    p.b.len()
                );
            }
            let offsets = p.a.iter().rev().copied().collect();
            let periods = p.b.iter().rev().copied().collect();
            let part = LinearSet::new(ambient, offsets, periods, tail_mode(&p.tail)?)
                .with_context(|| format!("part {}", i))?;
            parts.push(part);
        }
        let ambient = match (top, parts.first()) {
            (Some(a), _) => a,
            (None, Some(p)) => p.ambient().clone(),
            (None, None) => bail!("empty set needs an explicit ambient"),
        };
        Ok(SemilinearSet::new(ambient, parts)?)
    }
}

pub fn set_to_wire(s: &SemilinearSet) -> SetWire {
    SetWire {
        ambient: Some(s.ambient().to_string()),
        parts: s.parts().iter().map(part_to_wire).collect(),
    }
}

fn part_to_wire(l: &LinearSet) -> LinearSetWire {
    LinearSetWire {
        r: l.r(),
        a: l.offsets().iter().rev().copied().collect(),
        b: l.periods().iter().rev().copied().collect(),
        tail: tail_name(l.tail()).to_owned(),
        ambient: Some(l.ambient().to_string()),
    }
}

/// One linear part as a CSV row: `index,a,b,tail` with the coordinate
/// vectors semicolon-joined, highest exponent first.
pub fn part_csv_row(index: usize, l: &LinearSet) -> String {
    let join = |v: &[u64]| {
        v.iter()
            .rev()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    format!(
        "{},{},{},{}",
        index,
        join(l.offsets()),
        join(l.periods()),
        tail_name(l.tail())
    )
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecWire {
    #[serde(rename = "K")]
    pub k: usize,
    pub a: usize,
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<usize>>,
}

impl RecWire {
    /// Structural checks, then the evaluation axioms; both are schema
    /// violations for a file input.
    pub fn into_recognizer(self) -> Result<Recognizer> {
        let rec = Recognizer::new(self.k, self.a, &self.w, self.f)?;
        let violations = rec.validate();
        if !violations.is_empty() {
            let mut msg = String::from("recognizer breaks the evaluation axioms:");
            for v in &violations {
                msg.push_str("\n  ");
                msg.push_str(&v.to_string());
            }
            bail!(msg);
        }
        Ok(rec)
    }
}

pub fn rec_to_wire(r: &Recognizer) -> RecWire {
    RecWire {
        k: r.state_count(),
        a: r.start(),
        w: r.accepting_states(),
        f: r.maps().to_vec(),
    }
}

#[derive(Serialize)]
pub struct RhoUsedWire {
    pub rho: String,
    pub spread: String,
    pub window: Vec<String>,
}

fn rho_used_wire(e: &RadiusEstimate) -> RhoUsedWire {
    RhoUsedWire {
        rho: sig10(e.rho),
        spread: sig10(e.spread),
        window: e.window.iter().map(|r| sig10(*r)).collect(),
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum LimitWire {
    Exact {
        value: String,
    },
    Rho {
        numerator: Vec<String>,
        denominator: Vec<String>,
        value: String,
    },
    NotComputed,
}

#[derive(Serialize)]
pub struct ReportWire {
    pub ambient: String,
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Option<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cesaro: Option<Vec<String>>,
    pub limit: LimitWire,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_kind: Option<&'static str>,
    pub grid: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_used: Option<RhoUsedWire>,
}

pub fn kind_name(k: LimitKind) -> &'static str {
    match k {
        LimitKind::Plain => "plain",
        LimitKind::Cesaro => "cesaro",
    }
}

pub fn report_to_wire(rep: &DensityReport, with_series: bool) -> ReportWire {
    let limit = match &rep.limit {
        LimitValue::Exact(q) => LimitWire::Exact { value: rational(q) },
        LimitValue::Rho(e) => LimitWire::Rho {
            numerator: e.numerator.iter().map(|c| c.to_string()).collect(),
            denominator: e.denominator.iter().map(|c| c.to_string()).collect(),
            value: sig10(e.value),
        },
        LimitValue::NotComputed => LimitWire::NotComputed,
    };
    ReportWire {
        ambient: rep.ambient.to_string(),
        regime: rep.regime.to_string(),
        values: with_series.then(|| {
            rep.values
                .iter()
                .map(|v| v.as_ref().map(rational))
                .collect()
        }),
        skipped: with_series.then(|| rep.skipped.clone()),
        cesaro: with_series.then(|| rep.cesaro.iter().map(rational).collect()),
        limit,
        limit_kind: rep.limit_kind.map(kind_name),
        grid: rep.grid,
        rho_used: rep.rho_used.as_ref().map(rho_used_wire),
    }
}

/// `1 - 2*rho + rho^2` from constant-first coefficients.
pub fn poly_text(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let need_coeff = i == 0 || !mag.is_one();
        if need_coeff {
            out.push_str(&mag.to_string());
        }
        if i > 0 {
            if need_coeff {
                out.push('*');
            }
            out.push_str("rho");
            if i > 1 {
                out.push_str(&format!("^{}", i));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn rho_expr_text(e: &RhoExpr) -> String {
    format!("({}) / ({})", poly_text(&e.numerator), poly_text(&e.denominator))
}

/// Trailer rows shared by the `limit` and `prob` CSV outputs.
pub fn limit_csv_rows(rep: &DensityReport) -> Vec<String> {
    let mut rows = vec![format!("regime,{}", rep.regime)];
    match &rep.limit {
        LimitValue::Exact(q) => rows.push(format!("limit,{}", rational(q))),
        LimitValue::Rho(e) => {
            rows.push(format!("limit,{}", rho_expr_text(e)));
            rows.push(format!("value,{}", sig10(e.value)));
        }
        LimitValue::NotComputed => rows.push("limit,not-computed".to_owned()),
    }
    if let Some(kind) = rep.limit_kind {
        rows.push(format!("kind,{}", kind_name(kind)));
    }
    rows.push(format!("grid,{}", rep.grid));
    if let Some(est) = &rep.rho_used {
        rows.push(format!("rho,{}", sig10(est.rho)));
        rows.push(format!("spread,{}", sig10(est.spread)));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_render_readably() {
        let p = |v: &[i64]| poly_text(&v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        assert_eq!(p(&[1, 1]), "1 + rho");
        assert_eq!(p(&[0, 0, 1]), "rho^2");
        assert_eq!(p(&[2, -3, 0, 4]), "2 - 3*rho + 4*rho^3");
        assert_eq!(p(&[0]), "0");
        assert_eq!(p(&[-1, 1]), "-1 + rho");
    }

    #[test]
    fn floats_carry_ten_digits() {
        assert_eq!(sig10(0.5), "5.000000000e-1");
        assert_eq!(sig10(1.0), "1.000000000e0");
    }

    #[test]
    fn set_wire_round_trips() {
        let ambient = Segment::parse("w^w").unwrap();
        let part = LinearSet::new(ambient.clone(), vec![0, 1], vec![2, 0], TailMode::Positive)
            .unwrap();
        let set = SemilinearSet::new(ambient, vec![part]).unwrap();
        let wire = set_to_wire(&set);
        assert_eq!(wire.parts[0].a, vec![1, 0]);
        assert_eq!(wire.parts[0].b, vec![0, 2]);
        let back = serde_json::from_str::<SetWire>(&serde_json::to_string(&wire).unwrap())
            .unwrap()
            .into_set()
            .unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn recognizer_wire_rejects_axiom_breakers() {
        // sign map not idempotent
        let wire = RecWire {
            k: 2,
            a: 0,
            w: vec![0],
            f: vec![vec![0, 1], vec![1, 0]],
        };
        let err = wire.into_recognizer().unwrap_err().to_string();
        assert!(err.contains("axioms"), "{}", err);
    }
}
