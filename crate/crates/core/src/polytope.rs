//! Moment polygons of polarized toric surfaces and the obstruction
//! polynomial
//!
//! ```text
//! Vol(P) s_P(k) - k E_P(k) ∫_P x dv = F_0 + F_1 k + F_2 k^2 + F_3 k^3
//! ```
//!
//! where `E_P(k)` counts the lattice points of `kP` and `s_P(k)` is their
//! coordinate sum. `F_1` is the toric Futaki invariant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exec::{self, ExecMode};
use crate::fan::{positive_axis_crossings, Fan2D};
use crate::lattice::{IntVec2, RayVec, Rational2, UnimodularMap};
use crate::poly::RationalPoly;

/// Largest `j` accepted by [`delta_j`].
pub const DELTA_CAP: u32 = 6;

/// Largest `|k * coordinate|` the row sweep accepts.
const SWEEP_LIMIT: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("TooFewVertices: a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("DuplicateVertex: vertex {0} repeats its predecessor")]
    DuplicateVertex(usize),
    #[error("Clockwise: vertices are listed clockwise; reverse vertex order")]
    Clockwise,
    #[error("Collinear: vertex {0} lies on the segment joining its neighbours")]
    Collinear(usize),
    #[error("NotConvex: the vertex list does not bound a convex polygon")]
    NotConvex,
    #[error("NotDelzant: the edge normals at vertex {vertex} have determinant {det}, expected 1")]
    NotDelzant { vertex: usize, det: BigInt },
    #[error("HeightsMismatch: {0}")]
    HeightsMismatch(String),
    #[error("NotAmple: the inequalities are not strict at the vertex of cone {0}")]
    NotAmple(usize),
    #[error("EmptyPolytope: the inequalities have no common solution")]
    EmptyPolytope,
    #[error("CapExceeded: j = {j} exceeds the cap {cap}")]
    CapExceeded { j: u64, cap: u32 },
    #[error("InterpolationInconsistent: the k = 4 lattice count does not match the interpolated polynomial")]
    InterpolationInconsistent,
    #[error("StructuralZero: coefficient F_{0} is nonzero")]
    StructuralZero(usize),
    #[error("TooLarge: the dilate {0}P is too large to enumerate")]
    TooLarge(u64),
}

impl PolytopeError {
    pub fn name(&self) -> &'static str {
        match self {
            PolytopeError::TooFewVertices(_) => "TooFewVertices",
            PolytopeError::DuplicateVertex(_) => "DuplicateVertex",
            PolytopeError::Clockwise => "Clockwise",
            PolytopeError::Collinear(_) => "Collinear",
            PolytopeError::NotConvex => "NotConvex",
            PolytopeError::NotDelzant { .. } => "NotDelzant",
            PolytopeError::HeightsMismatch(_) => "HeightsMismatch",
            PolytopeError::NotAmple(_) => "NotAmple",
            PolytopeError::EmptyPolytope => "EmptyPolytope",
            PolytopeError::CapExceeded { .. } => "CapExceeded",
            PolytopeError::InterpolationInconsistent => "InterpolationInconsistent",
            PolytopeError::StructuralZero(_) => "StructuralZero",
            PolytopeError::TooLarge(_) => "TooLarge",
        }
    }
}

/// A convex lattice polygon whose normal fan is smooth, with vertices listed
/// counterclockwise from the lexicographically smallest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    vertices: Vec<IntVec2>,
}

fn cross(a: &IntVec2, b: &IntVec2) -> BigInt {
    a.det(b)
}

/// Inward primitive normal of the edge from `a` to `b` of a ccw polygon.
fn inward_normal(a: &IntVec2, b: &IntVec2) -> RayVec {
    let e = b.sub(a);
    let g = e.x.gcd(&e.y);
    RayVec::new_unchecked(-&e.y / &g, &e.x / &g)
}

impl LatticePolytope {
    pub fn new(mut vertices: Vec<IntVec2>) -> Result<Self, PolytopeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolytopeError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(PolytopeError::DuplicateVertex((i + 1) % n));
            }
        }
        let turns: Vec<BigInt> = (0..n)
            .map(|i| {
                let e0 = vertices[i].sub(&vertices[(i + n - 1) % n]);
                let e1 = vertices[(i + 1) % n].sub(&vertices[i]);
                cross(&e0, &e1)
            })
            .collect();
        if let Some(i) = turns.iter().position(|t| t.is_zero()) {
            return Err(PolytopeError::Collinear(i));
        }
        if turns.iter().all(|t| t.is_negative()) {
            // Clockwise only if the reversed list is a genuine convex polygon.
            let mut rev = vertices.clone();
            rev.reverse();
            return match LatticePolytope::new(rev) {
                Ok(_) => Err(PolytopeError::Clockwise),
                Err(_) => Err(PolytopeError::NotConvex),
            };
        }
        if turns.iter().any(|t| t.is_negative()) {
            return Err(PolytopeError::NotConvex);
        }
        let normals: Vec<RayVec> = (0..n)
            .map(|i| inward_normal(&vertices[i], &vertices[(i + 1) % n]))
            .collect();
        if positive_axis_crossings(&normals) != 1 {
            return Err(PolytopeError::NotConvex);
        }
        for i in 0..n {
            let det = normals[(i + n - 1) % n].det(&normals[i]);
            if !det.is_one() {
                return Err(PolytopeError::NotDelzant { vertex: i, det });
            }
        }
        let start = (0..n).min_by(|&a, &b| vertices[a].cmp(&vertices[b])).unwrap_or(0);
        vertices.rotate_left(start);
        Ok(LatticePolytope { vertices })
    }

    pub fn from_i64(pairs: &[(i64, i64)]) -> Result<Self, PolytopeError> {
        LatticePolytope::new(pairs.iter().map(|&(x, y)| IntVec2::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[IntVec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Inward primitive normals of the edges, edge `i` joining vertices
    /// `i` and `i + 1`.
    pub fn edge_normals(&self) -> Vec<RayVec> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| inward_normal(&self.vertices[i], &self.vertices[(i + 1) % n]))
            .collect()
    }

    pub fn normal_fan(&self) -> Fan2D {
        Fan2D::from_rays_unchecked(self.edge_normals())
    }

    /// The heights `b` with `P = { x : <x, v> >= -b(v) }`.
    pub fn support_heights(&self) -> SupportHeights {
        let n = self.vertices.len();
        let normals = self.edge_normals();
        let pairs: Vec<(RayVec, BigInt)> = (0..n)
            .map(|i| {
                let h = -self.vertices[i].dot(&normals[i].to_vec());
                (normals[i].clone(), h)
            })
            .collect();
        SupportHeights::new(&self.normal_fan(), &pairs).expect("heights of a valid polygon")
    }

    pub fn transform(&self, m: &UnimodularMap) -> LatticePolytope {
        let mut vs: Vec<IntVec2> = self.vertices.iter().map(|v| m.apply_vec(v)).collect();
        if !m.is_orientation_preserving() {
            vs.reverse();
        }
        LatticePolytope::new(vs).expect("unimodular image of a valid polygon")
    }

    pub fn translate(&self, t: &IntVec2) -> LatticePolytope {
        LatticePolytope {
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
        }
    }

    pub fn contains(&self, p: &IntVec2) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let e = self.vertices[(i + 1) % n].sub(&self.vertices[i]);
            !cross(&e, &p.sub(&self.vertices[i])).is_negative()
        })
    }
}

/// Integer heights `b_v` on the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportHeights {
    fan: Fan2D,
    heights: Vec<BigInt>,
}

impl SupportHeights {
    /// Matches `(ray, height)` pairs to the rays of `fan`; every ray must
    /// appear exactly once.
    pub fn new(fan: &Fan2D, pairs: &[(RayVec, BigInt)]) -> Result<Self, PolytopeError> {
        let mut map: HashMap<&RayVec, &BigInt> = HashMap::with_capacity(pairs.len());
        for (r, h) in pairs {
            if !fan.contains(r) {
                return Err(PolytopeError::HeightsMismatch(format!("{r} is not a ray of the fan")));
            }
            if map.insert(r, h).is_some() {
                return Err(PolytopeError::HeightsMismatch(format!("{r} has two heights")));
            }
        }
        let heights = fan
            .rays()
            .iter()
            .map(|r| {
                map.get(r)
                    .map(|h| (*h).clone())
                    .ok_or_else(|| PolytopeError::HeightsMismatch(format!("{r} has no height")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SupportHeights {
            fan: fan.clone(),
            heights,
        })
    }

    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    /// Heights aligned with `fan().rays()`.
    pub fn heights(&self) -> &[BigInt] {
        &self.heights
    }

    pub fn height(&self, v: &RayVec) -> Option<&BigInt> {
        self.fan.position(v).map(|i| &self.heights[i])
    }

    pub fn pairs(&self) -> Vec<(RayVec, BigInt)> {
        self.fan.rays().iter().cloned().zip(self.heights.iter().cloned()).collect()
    }
}

/// Solves `<x, u> = -bu`, `<x, v> = -bv`; returns `(X, D)` with `x = X / D`.
fn line_meet(u: &RayVec, bu: &BigInt, v: &RayVec, bv: &BigInt) -> (IntVec2, BigInt) {
    let x = -bu * v.y() + bv * u.y();
    let y = bu * v.x() - bv * u.x();
    (IntVec2 { x, y }, u.det(v))
}

fn is_empty_region(rays: &[RayVec], b: &[BigInt]) -> bool {
    let n = rays.len();
    for i in 0..n {
        for j in i + 1..n {
            let (p, d) = line_meet(&rays[i], &b[i], &rays[j], &b[j]);
            if d.is_zero() {
                continue;
            }
            let sign = if d.is_negative() { -BigInt::one() } else { BigInt::one() };
            let feasible = (0..n).all(|t| {
                let val = p.dot(&rays[t].to_vec()) + &b[t] * &d;
                !(val * &sign).is_negative()
            });
            if feasible {
                return false;
            }
        }
    }
    true
}

/// The polygon `{ x : <x, v> >= -b_v for every ray v }`.
pub fn polytope_from_heights(h: &SupportHeights) -> Result<LatticePolytope, PolytopeError> {
    let rays = h.fan.rays();
    let b = &h.heights;
    let n = rays.len();
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let (w, d) = line_meet(&rays[i], &b[i], &rays[j], &b[j]);
        debug_assert!(d.is_one());
        vertices.push(w);
    }
    for (i, w) in vertices.iter().enumerate() {
        let strict = (0..n)
            .filter(|&t| t != i && t != (i + 1) % n)
            .all(|t| (w.dot(&rays[t].to_vec()) + &b[t]).is_positive());
        if !strict {
            return Err(if is_empty_region(rays, b) {
                PolytopeError::EmptyPolytope
            } else {
                PolytopeError::NotAmple(i)
            });
        }
    }
    // Strictness makes the vertex i the corner between facets i and i + 1,
    // so the vertex list is convex, counterclockwise, with normal fan `h.fan`.
    let p = LatticePolytope::new(vertices)?;
    debug_assert_eq!(&p.normal_fan(), h.fan());
    Ok(p)
}

/// Heights of the corner-chopped square with normal fan `X_j`: `scale * 4^j`
/// on the axes and, for a ray `a + b` born at generation `g`,
/// `h(a) + h(b) - 4^(j-g)`.
fn delta_heights(j: u32, scale: &BigInt) -> Vec<(RayVec, BigInt)> {
    let four = BigInt::from(4);
    let side = scale * four.pow(j);
    let mut rays: Vec<(RayVec, BigInt)> = [RayVec::e1(), RayVec::e2(), RayVec::e1().neg(), RayVec::e2().neg()]
        .into_iter()
        .map(|r| (r, side.clone()))
        .collect();
    for g in 1..=j {
        let cut = four.pow(j - g);
        let n = rays.len();
        let mut next = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (a, ha) = &rays[i];
            let (b, hb) = &rays[(i + 1) % n];
            next.push((a.clone(), ha.clone()));
            next.push((a.unimodular_sum(b), ha + hb - &cut));
        }
        rays = next;
    }
    rays
}

/// The symmetric moment polygon `Delta_j` of `X_j`.
///
/// Starts from the square of half-side `4^j` and at generation `g` chops every
/// corner at lattice depth `4^(j-g)`. If the result fails validation the
/// square is doubled with the same cuts, which halves the cuts relative to
/// the square. `Delta_0` is the square with vertices `(±1, ±1)`.
pub fn delta_j(j: u64) -> Result<LatticePolytope, PolytopeError> {
    if j > u64::from(DELTA_CAP) {
        return Err(PolytopeError::CapExceeded { j, cap: DELTA_CAP });
    }
    let j = j as u32;
    let mut scale = BigInt::one();
    let mut last = PolytopeError::NotAmple(0);
    for _ in 0..8 {
        let pairs = delta_heights(j, &scale);
        let rays: Vec<RayVec> = pairs.iter().map(|(r, _)| r.clone()).collect();
        let fan = Fan2D::from_rays_unchecked(rays);
        let h = SupportHeights::new(&fan, &pairs)?;
        match polytope_from_heights(&h) {
            Ok(p) if p.support_heights() == h => return Ok(p),
            Ok(_) => last = PolytopeError::NotAmple(0),
            Err(e) => last = e,
        }
        scale *= 2;
    }
    Err(last)
}

/// Number of lattice points of `kP` and their coordinate sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeCount {
    pub count: BigInt,
    pub sum: IntVec2,
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// Enumerates `kP ∩ Z^2` row by row.
pub fn lattice_count(p: &LatticePolytope, k: u64, mode: ExecMode) -> Result<LatticeCount, PolytopeError> {
    if k == 0 {
        return Ok(LatticeCount {
            count: BigInt::one(),
            sum: IntVec2::new(0, 0),
        });
    }
    let kb = BigInt::from(k);
    let limit = BigInt::from(SWEEP_LIMIT);
    let mut pts: Vec<(i128, i128)> = Vec::with_capacity(p.len());
    for v in p.vertices() {
        let (x, y) = (&v.x * &kb, &v.y * &kb);
        if x.abs() > limit || y.abs() > limit {
            return Err(PolytopeError::TooLarge(k));
        }
        pts.push((x.to_i128().unwrap_or_default(), y.to_i128().unwrap_or_default()));
    }
    // Edge i: a x + b y >= c with (a, b) the inward normal.
    let n = pts.len();
    let edges: Vec<(i128, i128, i128)> = (0..n)
        .map(|i| {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            let (a, b) = (y0 - y1, x1 - x0);
            (a, b, a * x0 + b * y0)
        })
        .collect();
    let ymin = pts.iter().map(|q| q.1).min().unwrap_or(0) as i64;
    let ymax = pts.iter().map(|q| q.1).max().unwrap_or(0) as i64;
    let row = |y: i64| -> (i128, i128, i128) {
        let y = y as i128;
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for &(a, b, c) in &edges {
            let r = c - b * y;
            if a > 0 {
                lo = lo.max(ceil_div(r, a));
            } else if a < 0 {
                hi = hi.min(Integer::div_floor(&r, &a));
            } else if r > 0 {
                return (0, 0, 0);
            }
        }
        if hi < lo {
            return (0, 0, 0);
        }
        let cnt = hi - lo + 1;
        ((cnt), (lo + hi) * cnt / 2, y * cnt)
    };
    let (count, sx, sy) = exec::range_reduce(
        mode,
        ymin,
        ymax + 1,
        (0i128, 0i128, 0i128),
        row,
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    Ok(LatticeCount {
        count: BigInt::from(count),
        sum: IntVec2::new(sx, sy),
    })
}

/// Area and first moment `∫_P x dv`, both exact.
pub fn geometry(p: &LatticePolytope) -> (BigRational, Rational2) {
    let vs = p.vertices();
    let n = vs.len();
    let mut twice_area = BigInt::zero();
    let mut mx = BigInt::zero();
    let mut my = BigInt::zero();
    for i in 0..n {
        let (a, b) = (&vs[i], &vs[(i + 1) % n]);
        let c = cross(a, b);
        mx += &c * (&a.x + &b.x);
        my += &c * (&a.y + &b.y);
        twice_area += c;
    }
    let six = BigInt::from(6);
    (
        BigRational::new(twice_area, BigInt::from(2)),
        Rational2::new(BigRational::new(mx, six.clone()), BigRational::new(my, six)),
    )
}

/// Exact data of the obstruction polynomial of a lattice polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObstructionReport {
    pub volume: BigRational,
    pub moment: Rational2,
    /// `E_P(k)`, degree 2.
    pub ehrhart: RationalPoly,
    /// Components of `s_P(k)`, degree at most 3.
    pub weight_sum: [RationalPoly; 2],
    /// `F_0, ..., F_3`.
    pub f_coeffs: Vec<Rational2>,
    pub futaki_vanishes: bool,
    pub mabuchi_vanishes: bool,
}

impl ObstructionReport {
    fn assemble(
        volume: BigRational,
        moment: Rational2,
        ehrhart: RationalPoly,
        weight_sum: [RationalPoly; 2],
    ) -> Result<Self, PolytopeError> {
        let ke = ehrhart.shift();
        let fx = weight_sum[0].scale(&volume).sub(&ke.scale(&moment.x));
        let fy = weight_sum[1].scale(&volume).sub(&ke.scale(&moment.y));
        let f_coeffs: Vec<Rational2> = (0..4).map(|i| Rational2::new(fx.coeff(i), fy.coeff(i))).collect();
        if fx.degree().is_some_and(|d| d > 3) || fy.degree().is_some_and(|d| d > 3) {
            return Err(PolytopeError::InterpolationInconsistent);
        }
        for i in [0, 3] {
            if !f_coeffs[i].is_zero() {
                return Err(PolytopeError::StructuralZero(i));
            }
        }
        let futaki_vanishes = f_coeffs[1].is_zero();
        let mabuchi_vanishes = f_coeffs.iter().all(Rational2::is_zero);
        Ok(ObstructionReport {
            volume,
            moment,
            ehrhart,
            weight_sum,
            f_coeffs,
            futaki_vanishes,
            mabuchi_vanishes,
        })
    }

    /// Coefficient of `k^i` in `s_P(k)`.
    pub fn weight_sum_coeff(&self, i: usize) -> Rational2 {
        Rational2::new(self.weight_sum[0].coeff(i), self.weight_sum[1].coeff(i))
    }

    /// The report of `M P`, predicted from this one.
    pub fn transform(&self, m: &UnimodularMap) -> ObstructionReport {
        let map_poly = |ps: &[RationalPoly; 2]| -> [RationalPoly; 2] {
            let len = ps[0].coeffs().len().max(ps[1].coeffs().len());
            let mapped: Vec<Rational2> = (0..len)
                .map(|i| m.apply_rational(&Rational2::new(ps[0].coeff(i), ps[1].coeff(i))))
                .collect();
            [
                RationalPoly::new(mapped.iter().map(|c| c.x.clone()).collect()),
                RationalPoly::new(mapped.iter().map(|c| c.y.clone()).collect()),
            ]
        };
        ObstructionReport {
            volume: self.volume.clone(),
            moment: m.apply_rational(&self.moment),
            ehrhart: self.ehrhart.clone(),
            weight_sum: map_poly(&self.weight_sum),
            f_coeffs: self.f_coeffs.iter().map(|f| m.apply_rational(f)).collect(),
            futaki_vanishes: self.futaki_vanishes,
            mabuchi_vanishes: self.mabuchi_vanishes,
        }
    }

    /// The report of `P + t`, predicted from this one.
    pub fn translate(&self, t: &IntVec2) -> Result<ObstructionReport, PolytopeError> {
        let t = t.to_rational();
        let ke = self.ehrhart.shift();
        let weight_sum = [
            self.weight_sum[0].add(&ke.scale(&t.x)),
            self.weight_sum[1].add(&ke.scale(&t.y)),
        ];
        let moment = self.moment.add(&t.scale(&self.volume));
        ObstructionReport::assemble(self.volume.clone(), moment, self.ehrhart.clone(), weight_sum)
    }
}

/// Recovers `E_P` and `s_P` from lattice counts at `k = 0..3`, checks them at
/// `k = 4`, and assembles `F_0..F_3`. The five counts run concurrently in
/// parallel mode.
pub fn obstruction(p: &LatticePolytope, mode: ExecMode) -> Result<ObstructionReport, PolytopeError> {
    let ks: Vec<u64> = (0..5).collect();
    let counts = exec::map_collect(mode, &ks, |&k| lattice_count(p, k, mode))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let pts = |f: &dyn Fn(&LatticeCount) -> BigRational| -> Vec<(BigRational, BigRational)> {
        counts[..4]
            .iter()
            .enumerate()
            .map(|(k, c)| (BigRational::from_integer(BigInt::from(k)), f(c)))
            .collect()
    };
    let ehrhart = RationalPoly::interpolate(&pts(&|c| q(&c.count)));
    let sx = RationalPoly::interpolate(&pts(&|c| q(&c.sum.x)));
    let sy = RationalPoly::interpolate(&pts(&|c| q(&c.sum.y)));
    let c4 = &counts[4];
    if ehrhart.degree() != Some(2)
        || ehrhart.eval_int(4) != q(&c4.count)
        || sx.eval_int(4) != q(&c4.sum.x)
        || sy.eval_int(4) != q(&c4.sum.y)
    {
        return Err(PolytopeError::InterpolationInconsistent);
    }
    let (volume, moment) = geometry(p);
    ObstructionReport::assemble(volume, moment, ehrhart, [sx, sy])
}
