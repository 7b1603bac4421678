//! Plain-text formats.
//!
//! Fan and polytope files hold one integer pair per line, `#` starts a
//! comment and blank lines are ignored. Heights files hold `x y h` triples.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fan::Fan2D;
use crate::lattice::IntVec2;
use crate::polytope::{LatticePolytope, ObstructionReport, SupportHeights};
use crate::poly::RationalPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ParseError: line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 for whole-file problems.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }

    pub fn name(&self) -> &'static str {
        "ParseError"
    }
}

fn records(text: &str, width: usize) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != width {
            return Err(ParseError::at(
                idx + 1,
                format!("expected {width} integers, found {} fields", fields.len()),
            ));
        }
        let nums = fields
            .iter()
            .map(|f| BigInt::from_str(f).map_err(|_| ParseError::at(idx + 1, format!("`{f}` is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(nums);
    }
    Ok(out)
}

fn pairs(text: &str) -> Result<Vec<IntVec2>, ParseError> {
    Ok(records(text, 2)?
        .into_iter()
        .map(|mut r| {
            let y = r.pop().unwrap_or_default();
            let x = r.pop().unwrap_or_default();
            IntVec2 { x, y }
        })
        .collect())
}

/// Ray list of a fan file, unvalidated.
pub fn parse_fan(text: &str) -> Result<Vec<IntVec2>, ParseError> {
    pairs(text)
}

/// Vertex list of a polytope file, unvalidated beyond needing three vertices.
pub fn parse_polytope(text: &str) -> Result<Vec<IntVec2>, ParseError> {
    let vs = pairs(text)?;
    if vs.len() < 3 {
        return Err(ParseError::at(0, format!("a polygon needs at least 3 vertices, found {}", vs.len())));
    }
    Ok(vs)
}

/// `(ray, height)` entries of a heights file.
pub fn parse_heights(text: &str) -> Result<Vec<(IntVec2, BigInt)>, ParseError> {
    Ok(records(text, 3)?
        .into_iter()
        .map(|mut r| {
            let h = r.pop().unwrap_or_default();
            let y = r.pop().unwrap_or_default();
            let x = r.pop().unwrap_or_default();
            (IntVec2 { x, y }, h)
        })
        .collect())
}

pub fn serialize_fan(fan: &Fan2D) -> String {
    let mut s = String::new();
    for r in fan.rays() {
        let _ = writeln!(s, "{} {}", r.x(), r.y());
    }
    s
}

pub fn serialize_polytope(p: &LatticePolytope) -> String {
    let mut s = String::new();
    for v in p.vertices() {
        let _ = writeln!(s, "{} {}", v.x, v.y);
    }
    s
}

pub fn serialize_heights(h: &SupportHeights) -> String {
    let mut s = String::new();
    for (r, b) in h.pairs() {
        let _ = writeln!(s, "{} {} {}", r.x(), r.y(), b);
    }
    s
}

fn coeff_list(p: &RationalPoly, len: usize) -> String {
    (0..len).map(|i| p.coeff(i).to_string()).collect::<Vec<_>>().join(" ")
}

/// `key: value` lines; rationals are written `p/q`, polynomials as
/// coefficient lists in increasing degree.
pub fn serialize_report(r: &ObstructionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "volume: {}", r.volume);
    let _ = writeln!(s, "moment: {} {}", r.moment.x, r.moment.y);
    let _ = writeln!(s, "ehrhart: {}", coeff_list(&r.ehrhart, 3));
    let _ = writeln!(s, "weight_sum_x: {}", coeff_list(&r.weight_sum[0], 4));
    let _ = writeln!(s, "weight_sum_y: {}", coeff_list(&r.weight_sum[1], 4));
    for (i, f) in r.f_coeffs.iter().enumerate() {
        let _ = writeln!(s, "F{i}: {} {}", f.x, f.y);
    }
    let _ = writeln!(s, "futaki_vanishes: {}", r.futaki_vanishes);
    let _ = writeln!(s, "mabuchi_vanishes: {}", r.mabuchi_vanishes);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::ExecMode;
    use crate::polytope::{obstruction, polytope_from_heights};
    use crate::lattice::RayVec;

    #[test]
    fn fan_round_trip() {
        let text = "# F2\n0 -1\n1 0\n\n0 1   # top\n-1 -2\n";
        let fan = Fan2D::validate(&parse_fan(text).unwrap()).unwrap();
        assert_eq!(fan, Fan2D::hirzebruch(2));
        let out = serialize_fan(&fan);
        assert_eq!(out, "-1 -2\n0 -1\n1 0\n0 1\n");
        assert_eq!(Fan2D::validate(&parse_fan(&out).unwrap()).unwrap(), fan);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(parse_fan("1 0\n1 2 3\n").unwrap_err().line, 2);
        assert_eq!(parse_fan("1 x\n").unwrap_err().line, 1);
        assert!(parse_polytope("0 0\n1 0\n").is_err());
        assert_eq!(parse_heights("1 0\n").unwrap_err().line, 1);
    }

    #[test]
    fn heights_and_report() {
        let fan = Fan2D::hirzebruch(1);
        let entries = parse_heights("0 -1 0\n1 0 0\n0 1 1\n-1 -1 2\n").unwrap();
        let pairs: Vec<(RayVec, BigInt)> = entries
            .into_iter()
            .map(|(v, h)| (RayVec::try_from(v).unwrap(), h))
            .collect();
        let h = SupportHeights::new(&fan, &pairs).unwrap();
        let text = serialize_heights(&h);
        assert_eq!(parse_heights(&text).unwrap().len(), 4);
        let p = polytope_from_heights(&h).unwrap();
        let report = serialize_report(&obstruction(&p, ExecMode::Sequential).unwrap());
        assert!(report.contains("volume: 5/2\n"));
        assert!(report.contains("F1: 1/6 -1/3\n"));
        assert!(report.contains("futaki_vanishes: false\n"));
    }
}
