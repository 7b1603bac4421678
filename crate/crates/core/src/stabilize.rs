//! Explicit blow-up sequences from any smooth complete fan to one of the
//! reference fans `X_j`.
//!
//! `X_0` is the fan of `P1 x P1`; `X_{j+1}` blows up every torus-fixed point of
//! `X_j`. Its rays are exactly the primitive vectors of Stern–Brocot depth at
//! most `j`, `2^{j+2}` of them.
//!
//! The construction runs in two stages:
//!
//! 1. [`reduce_to_f0`] lowers the Hirzebruch index of a witness description
//!    one unit at a time by blowing up (at most once per unit) the fixed point
//!    of a cone between the fibre and a section, until the fan is an iterated
//!    blow-up of `F_0`.
//! 2. [`symmetrize`] then adds, in standard coordinates for that `F_0`, every
//!    missing ray of `X_j` for the smallest possible `j`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::classify::{self, hirzebruch_bases, ClassifyError, HirzebruchBase};
use crate::exec::{self, ExecMode};
use crate::fan::{BlowupSequence, BlowupStep, Fan2D, FanError};
use crate::lattice::{sb_depth, sb_parents, RayVec, UnimodularMap};

/// Largest `j` accepted by [`xj_fan`] (`2^12` rays).
pub const XJ_CAP: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizeError {
    #[error("CapExceeded: j = {j} exceeds the cap {cap}")]
    CapExceeded { j: u64, cap: u32 },
    #[error("MissingAxisRays: the fan must contain (1,0), (0,1), (-1,0) and (0,-1)")]
    MissingAxisRays,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("LandingCheckFailed: the blown-up fan is not isomorphic to X_{0}")]
    LandingCheckFailed(u64),
}

impl StabilizeError {
    pub fn name(&self) -> &'static str {
        match self {
            StabilizeError::CapExceeded { .. } => "CapExceeded",
            StabilizeError::MissingAxisRays => "MissingAxisRays",
            StabilizeError::Classify(e) => e.name(),
            StabilizeError::Fan(e) => e.name(),
            StabilizeError::LandingCheckFailed(_) => "LandingCheckFailed",
        }
    }
}

fn xj_rays(j: u64) -> Vec<RayVec> {
    let mut rays = vec![
        RayVec::e1(),
        RayVec::e2(),
        RayVec::e1().neg(),
        RayVec::e2().neg(),
    ];
    for _ in 0..j {
        let n = rays.len();
        let mut next = Vec::with_capacity(2 * n);
        for i in 0..n {
            next.push(rays[i].clone());
            next.push(rays[i].unimodular_sum(&rays[(i + 1) % n]));
        }
        rays = next;
    }
    rays
}

fn xj_unbounded(j: u64) -> Fan2D {
    Fan2D::from_rays_unchecked(xj_rays(j))
}

/// The reference fan `X_j`, with `2^{j+2}` rays.
pub fn xj_fan(j: u64) -> Result<Fan2D, StabilizeError> {
    if j > u64::from(XJ_CAP) {
        return Err(StabilizeError::CapExceeded { j, cap: XJ_CAP });
    }
    Ok(xj_unbounded(j))
}

fn depth_u64(v: &RayVec) -> Result<u64, StabilizeError> {
    sb_depth(v)
        .to_u64()
        .ok_or(StabilizeError::Classify(ClassifyError::TooLarge("depth")))
}

/// Steps inserting `rays` in the given order, each between its two
/// Stern–Brocot parents.
fn mediant_steps(rays: &[RayVec]) -> Vec<BlowupStep> {
    rays.iter()
        .map(|v| {
            let (left, right) = sb_parents(v).expect("inserted rays are off the axes");
            BlowupStep {
                left,
                right,
                inserted: v.clone(),
            }
        })
        .collect()
}

fn sort_by_depth(rays: &mut Vec<RayVec>) {
    let mut keyed: Vec<(BigUint, RayVec)> = rays.drain(..).map(|r| (sb_depth(&r), r)).collect();
    keyed.sort();
    rays.extend(keyed.into_iter().map(|(_, r)| r));
}

/// Blows up a refinement of the standard `X_0` until it equals `X_j`, where
/// `j` is the largest Stern–Brocot depth among its rays.
///
/// Insertions come in two passes: first the images of existing rays under the
/// reflections `(x,y) -> (±x,±y)`, then everything else missing from `X_j`.
/// Within a pass rays are added by increasing depth, ties broken by
/// lexicographic order. Each pass keeps the ray set closed under taking
/// Stern–Brocot parents, so both parents of every inserted ray are present
/// and adjacent when it is inserted.
pub fn symmetrize(fan: &Fan2D) -> Result<(BlowupSequence, u64), StabilizeError> {
    let axes = [
        RayVec::e1(),
        RayVec::e2(),
        RayVec::e1().neg(),
        RayVec::e2().neg(),
    ];
    if !axes.iter().all(|a| fan.contains(a)) {
        return Err(StabilizeError::MissingAxisRays);
    }
    let mut j = 0;
    for v in fan.rays() {
        j = j.max(depth_u64(v)?);
    }
    let mut present: HashSet<RayVec> = fan.rays().iter().cloned().collect();

    let reflections = [
        UnimodularMap::new(-1, 0, 0, 1).expect("reflection"),
        UnimodularMap::new(1, 0, 0, -1).expect("reflection"),
        UnimodularMap::new(-1, 0, 0, -1).expect("rotation"),
    ];
    let mut mirrored: Vec<RayVec> = fan
        .rays()
        .iter()
        .flat_map(|v| reflections.iter().map(move |m| m.apply_ray(v)))
        .filter(|v| !present.contains(v))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    sort_by_depth(&mut mirrored);
    present.extend(mirrored.iter().cloned());

    let mut remaining: Vec<RayVec> = xj_rays(j).into_iter().filter(|v| !present.contains(v)).collect();
    sort_by_depth(&mut remaining);

    let mut order = mirrored;
    order.extend(remaining);
    let seq = BlowupSequence::from_steps(fan.clone(), mediant_steps(&order))?;
    debug_assert_eq!(seq.result, xj_unbounded(j));
    Ok((seq, j))
}

/// One reduction `F_n -> F_{n-1}` on a witness subfan. The blow-up is at the
/// cone between the fibre and the left section, or the right section when
/// `mirror` is set. Returns the new witness and the blow-up it needed, if any.
fn reduce_once(
    current: &Fan2D,
    base: &HirzebruchBase,
    mirror: bool,
) -> Result<(HirzebruchBase, Option<(Fan2D, BlowupStep)>), FanError> {
    let (lo, hi) = if mirror {
        (&base.right, &base.fiber)
    } else {
        (&base.fiber, &base.left)
    };
    let mediant = lo.unimodular_sum(hi);
    let step = if current.contains(&mediant) {
        // A blow-up inside the cone already happened, necessarily at its
        // fixed point; re-read the description from F_{n-1}.
        None
    } else {
        Some(current.blow_up_pair(lo, hi)?)
    };
    let (right, left) = if mirror {
        (mediant, base.left.clone())
    } else {
        (base.right.clone(), mediant)
    };
    let next = HirzebruchBase {
        fiber: base.fiber.clone(),
        right,
        left,
        n: &base.n - 1u32,
    };
    Ok((next, step))
}

/// Reduces along a fixed witness, carrying its coordinates through each step.
fn reduce_with_base(
    fan: &Fan2D,
    base: &HirzebruchBase,
    mirror: bool,
) -> Result<(BlowupSequence, HirzebruchBase), StabilizeError> {
    let mut current = fan.clone();
    let mut base = base.clone();
    let mut steps = Vec::new();
    while !base.n.is_zero() {
        let (next_base, blown) = reduce_once(&current, &base, mirror)?;
        if let Some((next_fan, step)) = blown {
            steps.push(step);
            current = next_fan;
        }
        base = next_base;
    }
    Ok((
        BlowupSequence {
            base: fan.clone(),
            steps,
            result: current,
        },
        base,
    ))
}

struct Reduction {
    sequence: BlowupSequence,
    f0_base: HirzebruchBase,
    depth: BigUint,
}

/// Runs the reduction from every `F_{n_min}` witness of least generation, in
/// both mirror images, and keeps the result with the shallowest `F_0`
/// description, then the fewest blow-ups. Trying both images makes the
/// outcome independent of the orientation of the input coordinates.
fn best_reduction(fan: &Fan2D) -> Result<Reduction, StabilizeError> {
    let scored = classify::minimal_bases(fan)?;
    let least = scored.iter().map(|(_, g)| g.clone()).min().expect("nonempty");
    let mut best: Option<Reduction> = None;
    for (base, _) in scored.into_iter().filter(|(_, g)| *g == least) {
        let mirrors: &[bool] = if base.n.is_zero() { &[false] } else { &[false, true] };
        for &mirror in mirrors {
            let (sequence, _) = reduce_with_base(fan, &base, mirror)?;
            let (f0_base, depth) = hirzebruch_bases(&sequence.result)
                .into_iter()
                .filter(|b| b.n.is_zero())
                .map(|b| {
                    let g = b.max_generation(&sequence.result);
                    (b, g)
                })
                .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)))
                .expect("the reduction ends on a refinement of F0");
            let better = best
                .as_ref()
                .is_none_or(|b| (&depth, sequence.len()) < (&b.depth, b.sequence.len()));
            if better {
                best = Some(Reduction {
                    sequence,
                    f0_base,
                    depth,
                });
            }
        }
    }
    Ok(best.expect("at least one witness"))
}

/// Blow-ups turning `fan` into an iterated blow-up of `F_0`.
pub fn reduce_to_f0(fan: &Fan2D) -> Result<BlowupSequence, StabilizeError> {
    Ok(best_reduction(fan)?.sequence)
}

/// A blow-up sequence landing on `X_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub sequence: BlowupSequence,
    pub j: u64,
    /// Maps `sequence.result` onto `xj_fan(j)`.
    pub landing: UnimodularMap,
    /// How many of the steps come from the reduction to `F_0` (including the
    /// preliminary blow-up of the projective plane).
    pub reduction_steps: usize,
}

impl Stabilization {
    pub fn step_count(&self) -> usize {
        self.sequence.len()
    }
}

/// Blows `fan` up to a fan isomorphic to some `X_j`, with `j` as small as the
/// method allows.
pub fn stabilize(fan: &Fan2D) -> Result<Stabilization, StabilizeError> {
    let mut prefix = BlowupSequence::empty(fan.clone());
    if fan.len() == 3 {
        let (f1, step) = fan.blow_up(0)?;
        prefix = BlowupSequence {
            base: fan.clone(),
            steps: vec![step],
            result: f1,
        };
    }
    let start = prefix.result.clone();
    let reduction = best_reduction(&start)?;
    let reduced = reduction.sequence.result.clone();
    let to_std = reduction.f0_base.to_standard();
    let (sym_std, j) = symmetrize(&reduced.transform(&to_std))?;
    let back = to_std.inverse();
    let sym_steps: Vec<BlowupStep> = sym_std.steps.iter().map(|s| s.transform(&back)).collect();
    let symmetrized = BlowupSequence::from_steps(reduced, sym_steps)?;

    let reduction_steps = prefix.len() + reduction.sequence.len();
    let sequence = prefix.concat(reduction.sequence)?.concat(symmetrized)?;
    if sequence.result.transform(&to_std) != xj_unbounded(j) {
        return Err(StabilizeError::LandingCheckFailed(j));
    }
    Ok(Stabilization {
        sequence,
        j,
        landing: to_std,
        reduction_steps,
    })
}

/// `2^{n + l0 + 1} - #rays`, the upper bound on the number of blow-ups. For
/// the projective plane it is one more than the bound for `F_1`, matching the
/// preliminary blow-up made by [`stabilize`].
pub fn bound(fan: &Fan2D) -> Result<BigInt, StabilizeError> {
    if fan.len() == 3 {
        return Ok(bound(&fan.blow_up(0)?.0)? + 1);
    }
    let report = classify::iteration_invariants(fan)?;
    let exponent = report
        .n_min
        .checked_add(report.l0 + 1)
        .and_then(|e| usize::try_from(e).ok())
        .ok_or(StabilizeError::Classify(ClassifyError::TooLarge("bound exponent")))?;
    Ok((BigInt::from(1) << exponent) - BigInt::from(fan.len()))
}

/// Result of checking the blow-up count of one fan against its bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundAudit {
    pub steps: usize,
    pub bound: BigInt,
    pub j: u64,
    pub n_min: u64,
    pub l0: u64,
}

impl BoundAudit {
    pub fn holds(&self) -> bool {
        BigInt::from(self.steps) <= self.bound
    }
}

pub fn audit_bound(fan: &Fan2D) -> Result<BoundAudit, StabilizeError> {
    let s = stabilize(fan)?;
    let bound = bound(fan)?;
    let (n_min, l0) = if fan.len() == 3 {
        (1, 1)
    } else {
        let report = classify::iteration_invariants(fan)?;
        (report.n_min, report.l0)
    };
    Ok(BoundAudit {
        steps: s.step_count(),
        bound,
        j: s.j,
        n_min,
        l0,
    })
}

/// [`audit_bound`] over a batch of fans.
pub fn audit_bounds(fans: &[Fan2D], mode: ExecMode) -> Vec<Result<BoundAudit, StabilizeError>> {
    exec::map_collect(mode, fans, audit_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(pairs: &[(i64, i64)]) -> Fan2D {
        Fan2D::from_i64(pairs).unwrap()
    }

    fn ray(x: i64, y: i64) -> RayVec {
        RayVec::new(x, y).unwrap()
    }

    fn f0_chain() -> Fan2D {
        fan(&[(1, 0), (1, 1), (1, 2), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1)])
    }

    fn x1_refinement() -> Fan2D {
        fan(&[
            (1, 0),
            (1, 1),
            (1, 2),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (-1, -2),
            (0, -1),
            (1, -1),
        ])
    }

    #[test]
    fn xj_examples() {
        assert_eq!(xj_fan(0).unwrap(), fan(&[(1, 0), (0, 1), (-1, 0), (0, -1)]));
        let x1 = xj_fan(1).unwrap();
        assert_eq!(x1.len(), 8);
        for (x, y) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
            assert!(x1.contains(&ray(x, y)));
        }
        let x2 = xj_fan(2).unwrap();
        assert_eq!(x2.len(), 16);
        for (x, y) in [(1, 2), (2, 1), (-1, 2), (-2, 1), (-1, -2), (-2, -1), (1, -2), (2, -1)] {
            assert!(x2.contains(&ray(x, y)));
        }
        assert!(matches!(
            xj_fan(11).unwrap_err(),
            StabilizeError::CapExceeded { j: 11, .. }
        ));
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce_to_f0(&Fan2D::hirzebruch(0)).unwrap().is_empty());

        let seq = reduce_to_f0(&Fan2D::hirzebruch(2)).unwrap();
        let inserted: Vec<RayVec> = seq.steps.iter().map(|s| s.inserted.clone()).collect();
        assert_eq!(inserted, vec![ray(-1, -1), ray(-1, 0)]);
        assert_eq!(seq.result.len(), 6);
        assert!(classify::minimal_models(&seq.result)
            .iter()
            .any(|m| m.tag == classify::ModelTag::Hirzebruch(0u32.into())));

        let fig2 = fan(&[(0, -1), (1, 0), (0, 1), (-1, -1), (-1, -2)]);
        assert_eq!(reduce_to_f0(&fig2).unwrap().len(), 1);

        assert!(matches!(
            reduce_to_f0(&Fan2D::projective_plane()).unwrap_err(),
            StabilizeError::Classify(ClassifyError::IsProjectivePlane)
        ));
    }

    #[test]
    fn symmetrize_examples() {
        let (seq, j) = symmetrize(&xj_fan(0).unwrap()).unwrap();
        assert!(seq.is_empty());
        assert_eq!(j, 0);

        let (seq, j) = symmetrize(&f0_chain()).unwrap();
        assert_eq!(j, 2);
        assert_eq!(seq.len(), 8);
        assert_eq!(seq.result, xj_fan(2).unwrap());
        let first: HashSet<RayVec> = seq.steps[..4].iter().map(|s| s.inserted.clone()).collect();
        let expected: HashSet<RayVec> = [ray(1, -1), ray(-1, 2), ray(-1, -2), ray(1, -2)].into();
        assert_eq!(first, expected);

        let (seq, j) = symmetrize(&x1_refinement()).unwrap();
        assert_eq!((seq.len(), j), (6, 2));
        assert_eq!(seq.result, xj_fan(2).unwrap());

        assert_eq!(
            symmetrize(&Fan2D::hirzebruch(2)).unwrap_err(),
            StabilizeError::MissingAxisRays
        );
    }

    #[test]
    fn stabilize_hirzebruch() {
        for n in 0..5u32 {
            let s = stabilize(&Fan2D::hirzebruch(n)).unwrap();
            assert_eq!(s.step_count(), (1usize << (n + 2)) - 4, "F{n}");
            assert_eq!(s.j, u64::from(n));
            assert!(s.sequence.result.is_isomorphic(&xj_fan(n.into()).unwrap()).is_some());
            assert_eq!(BigInt::from(s.step_count()), bound(&Fan2D::hirzebruch(n)).unwrap());
        }
    }

    #[test]
    fn stabilize_projective_plane() {
        let s = stabilize(&Fan2D::projective_plane()).unwrap();
        assert_eq!(s.sequence.steps.len(), 5);
        assert_eq!(s.j, 1);
        s.sequence.verify().unwrap();
    }

    #[test]
    fn stabilize_is_idempotent_on_xj() {
        for j in 0..4 {
            let s = stabilize(&xj_fan(j).unwrap()).unwrap();
            assert!(s.sequence.is_empty());
            assert_eq!(s.j, j);
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound(&f0_chain()).unwrap(), BigInt::from(8));
        assert_eq!(bound(&x1_refinement()).unwrap(), BigInt::from(6));
        assert_eq!(bound(&Fan2D::hirzebruch(3)).unwrap(), BigInt::from(28));
        assert_eq!(bound(&Fan2D::projective_plane()).unwrap(), BigInt::from(5));
        assert!(audit_bound(&Fan2D::projective_plane()).unwrap().holds());
    }
}
