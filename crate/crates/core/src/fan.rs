//! Complete smooth fans in the plane.
//!
//! A [`Fan2D`] is the cyclic, counterclockwise list of its primitive ray
//! generators; the two-dimensional cones are the adjacent pairs. Smoothness
//! and orientation are both captured by requiring every adjacent determinant
//! to be exactly `+1`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{det2, IntVec2, LatticeError, RayVec, UnimodularMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("TooFewRays: a complete fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("NonPrimitiveRay: ray {index} ({x}, {y}) is not primitive")]
    NonPrimitiveRay { index: usize, x: BigInt, y: BigInt },
    #[error("DuplicateRay: ray {index} {ray} appears twice")]
    DuplicateRay { index: usize, ray: RayVec },
    #[error("Clockwise: rays are listed clockwise; reverse ray order")]
    Clockwise,
    #[error("NotUnimodular: det(ray {0}, next ray) = {1}, expected 1")]
    NotUnimodular(usize, BigInt),
    #[error("NotComplete: the rays wind {0} times around the origin")]
    NotComplete(usize),
    #[error("IndexOutOfRange: index {index} but the fan has {len} rays")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("NotContractible: ray {index} {ray} is not the sum of its neighbours")]
    NotContractible { index: usize, ray: RayVec },
    #[error("NotAdjacent: {left} and {right} are not adjacent rays")]
    NotAdjacent { left: RayVec, right: RayVec },
    #[error("ReplayMismatch: replaying the steps does not reproduce the recorded result")]
    ReplayMismatch,
}

impl FanError {
    /// Stable error name, used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            FanError::TooFewRays(_) => "TooFewRays",
            FanError::NonPrimitiveRay { .. } => "NonPrimitiveRay",
            FanError::DuplicateRay { .. } => "DuplicateRay",
            FanError::Clockwise => "Clockwise",
            FanError::NotUnimodular(..) => "NotUnimodular",
            FanError::NotComplete(_) => "NotComplete",
            FanError::IndexOutOfRange { .. } => "IndexOutOfRange",
            FanError::NotContractible { .. } => "NotContractible",
            FanError::NotAdjacent { .. } => "NotAdjacent",
            FanError::ReplayMismatch => "ReplayMismatch",
        }
    }
}

/// A smooth complete fan, rotated so that its lexicographically smallest ray
/// comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan2D {
    rays: Vec<RayVec>,
}

/// One toric blow-up: `inserted = left + right` between the adjacent pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupStep {
    pub left: RayVec,
    pub right: RayVec,
    pub inserted: RayVec,
}

impl BlowupStep {
    pub fn transform(&self, m: &UnimodularMap) -> BlowupStep {
        let (left, right) = (m.apply_ray(&self.left), m.apply_ray(&self.right));
        // Orientation-reversing maps swap which neighbour is counterclockwise.
        let (left, right) = if m.is_orientation_preserving() {
            (left, right)
        } else {
            (right, left)
        };
        BlowupStep {
            left,
            right,
            inserted: m.apply_ray(&self.inserted),
        }
    }
}

impl fmt::Display for BlowupStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "blowup {}+{} -> {}", self.left, self.right, self.inserted)
    }
}

/// An ordered record of blow-ups taking `base` to `result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSequence {
    pub base: Fan2D,
    pub steps: Vec<BlowupStep>,
    pub result: Fan2D,
}

impl BlowupSequence {
    pub fn empty(base: Fan2D) -> Self {
        BlowupSequence {
            result: base.clone(),
            base,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Builds a sequence by replaying `steps` on `base`.
    pub fn from_steps(base: Fan2D, steps: Vec<BlowupStep>) -> Result<Self, FanError> {
        let result = base.replay(&steps)?;
        Ok(BlowupSequence {
            base,
            steps,
            result,
        })
    }

    /// Re-applies every step to `base` and checks the recorded result.
    pub fn verify(&self) -> Result<(), FanError> {
        if self.base.replay(&self.steps)? == self.result {
            Ok(())
        } else {
            Err(FanError::ReplayMismatch)
        }
    }

    /// Appends `other`, whose base must equal this sequence's result.
    pub fn concat(mut self, other: BlowupSequence) -> Result<Self, FanError> {
        if other.base != self.result {
            return Err(FanError::ReplayMismatch);
        }
        self.steps.extend(other.steps);
        self.result = other.result;
        Ok(self)
    }
}

/// Integer winding count of a cyclic ray list with all adjacent determinants
/// positive: the number of counterclockwise crossings of the positive x-axis.
pub(crate) fn positive_axis_crossings(rays: &[RayVec]) -> usize {
    let n = rays.len();
    (0..n)
        .filter(|&i| {
            let (a, b) = (&rays[i], &rays[(i + 1) % n]);
            let b_on_axis = b.y().is_zero() && b.x().is_positive();
            b_on_axis || (a.y().is_negative() && b.y().is_positive())
        })
        .count()
}

fn canonical_rotation(mut rays: Vec<RayVec>) -> Vec<RayVec> {
    let start = rays
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    rays.rotate_left(start);
    rays
}

impl Fan2D {
    /// Validates a cyclic list of integer pairs.
    pub fn validate(pairs: &[IntVec2]) -> Result<Fan2D, FanError> {
        if pairs.len() < 3 {
            return Err(FanError::TooFewRays(pairs.len()));
        }
        let mut rays = Vec::with_capacity(pairs.len());
        for (index, p) in pairs.iter().enumerate() {
            match RayVec::new(p.x.clone(), p.y.clone()) {
                Ok(r) => rays.push(r),
                Err(LatticeError::ZeroVector | LatticeError::NonPrimitive(..)) => {
                    return Err(FanError::NonPrimitiveRay {
                        index,
                        x: p.x.clone(),
                        y: p.y.clone(),
                    })
                }
                Err(LatticeError::NotUnimodular(_)) => unreachable!(),
            }
        }
        Fan2D::from_rays(rays)
    }

    /// Validates a cyclic list of primitive rays.
    pub fn from_rays(rays: Vec<RayVec>) -> Result<Fan2D, FanError> {
        let n = rays.len();
        if n < 3 {
            return Err(FanError::TooFewRays(n));
        }
        let mut seen = HashSet::with_capacity(n);
        for (index, r) in rays.iter().enumerate() {
            if !seen.insert(r) {
                return Err(FanError::DuplicateRay {
                    index,
                    ray: r.clone(),
                });
            }
        }
        let dets: Vec<BigInt> = (0..n).map(|i| det2(&rays[i], &rays[(i + 1) % n])).collect();
        let minus_one = -BigInt::one();
        if dets.iter().all(|d| *d == minus_one) {
            return Err(FanError::Clockwise);
        }
        if let Some(i) = dets.iter().position(|d| !d.is_one()) {
            return Err(FanError::NotUnimodular(i, dets[i].clone()));
        }
        let winding = positive_axis_crossings(&rays);
        if winding != 1 {
            return Err(FanError::NotComplete(winding));
        }
        Ok(Fan2D {
            rays: canonical_rotation(rays),
        })
    }

    /// Fans built by this crate from already valid data.
    pub(crate) fn from_rays_unchecked(rays: Vec<RayVec>) -> Fan2D {
        debug_assert!(Fan2D::from_rays(rays.clone()).is_ok());
        Fan2D {
            rays: canonical_rotation(rays),
        }
    }

    pub fn rays(&self) -> &[RayVec] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, i: usize) -> &RayVec {
        &self.rays[i % self.rays.len()]
    }

    pub fn contains(&self, v: &RayVec) -> bool {
        self.rays.contains(v)
    }

    pub fn position(&self, v: &RayVec) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// The projective plane `{(1,0), (0,1), (-1,-1)}`.
    pub fn projective_plane() -> Fan2D {
        Fan2D::from_i64(&[(1, 0), (0, 1), (-1, -1)]).expect("valid fan")
    }

    /// The Hirzebruch surface `{(0,-1), (1,0), (0,1), (-1,-n)}`.
    pub fn hirzebruch(n: impl Into<BigInt>) -> Fan2D {
        let n = n.into();
        let rays = vec![
            RayVec::new(0, -1).unwrap(),
            RayVec::e1(),
            RayVec::e2(),
            RayVec::new(-1, -n).expect("(-1,-n) is primitive"),
        ];
        Fan2D::from_rays(rays).expect("Hirzebruch fan is valid")
    }

    /// Convenience constructor for small literal fans.
    pub fn from_i64(pairs: &[(i64, i64)]) -> Result<Fan2D, FanError> {
        let pairs: Vec<IntVec2> = pairs.iter().map(|&(x, y)| IntVec2::new(x, y)).collect();
        Fan2D::validate(&pairs)
    }

    /// Blows up the torus-fixed point of the cone `(rays[cone], rays[cone+1])`.
    pub fn blow_up(&self, cone: usize) -> Result<(Fan2D, BlowupStep), FanError> {
        let n = self.len();
        if cone >= n {
            return Err(FanError::IndexOutOfRange {
                index: cone,
                len: n,
            });
        }
        let left = self.rays[cone].clone();
        let right = self.rays[(cone + 1) % n].clone();
        let inserted = left.unimodular_sum(&right);
        let mut rays = self.rays.clone();
        rays.insert(cone + 1, inserted.clone());
        Ok((
            Fan2D::from_rays_unchecked(rays),
            BlowupStep {
                left,
                right,
                inserted,
            },
        ))
    }

    /// Blows up the cone spanned by the adjacent pair `(left, right)`.
    pub fn blow_up_pair(&self, left: &RayVec, right: &RayVec) -> Result<(Fan2D, BlowupStep), FanError> {
        let n = self.len();
        let not_adjacent = || FanError::NotAdjacent {
            left: left.clone(),
            right: right.clone(),
        };
        let i = self.position(left).ok_or_else(not_adjacent)?;
        if self.rays[(i + 1) % n] != *right {
            return Err(not_adjacent());
        }
        self.blow_up(i)
    }

    /// Contracts the ray at `index`, which must equal the sum of its
    /// neighbours.
    pub fn blow_down(&self, index: usize) -> Result<(Fan2D, BlowupStep), FanError> {
        let n = self.len();
        if index >= n {
            return Err(FanError::IndexOutOfRange { index, len: n });
        }
        if n == 3 {
            return Err(FanError::TooFewRays(n));
        }
        let prev = &self.rays[(index + n - 1) % n];
        let next = &self.rays[(index + 1) % n];
        let v = &self.rays[index];
        if !v.equals_vec(&prev.sum(next)) {
            return Err(FanError::NotContractible {
                index,
                ray: v.clone(),
            });
        }
        let step = BlowupStep {
            left: prev.clone(),
            right: next.clone(),
            inserted: v.clone(),
        };
        let mut rays = self.rays.clone();
        rays.remove(index);
        Ok((Fan2D::from_rays_unchecked(rays), step))
    }

    /// Applies a recorded step; the pair must be adjacent here.
    pub fn apply_step(&self, step: &BlowupStep) -> Result<Fan2D, FanError> {
        let (fan, applied) = self.blow_up_pair(&step.left, &step.right)?;
        debug_assert_eq!(applied, *step);
        Ok(fan)
    }

    pub fn replay(&self, steps: &[BlowupStep]) -> Result<Fan2D, FanError> {
        // Insert into a working vector and canonicalize once at the end.
        let mut rays = self.rays.clone();
        for step in steps {
            let n = rays.len();
            let i = rays
                .iter()
                .position(|r| *r == step.left)
                .filter(|&i| rays[(i + 1) % n] == step.right)
                .ok_or_else(|| FanError::NotAdjacent {
                    left: step.left.clone(),
                    right: step.right.clone(),
                })?;
            if !step.inserted.equals_vec(&step.left.sum(&step.right)) {
                return Err(FanError::ReplayMismatch);
            }
            rays.insert(i + 1, step.inserted.clone());
        }
        Ok(Fan2D::from_rays_unchecked(rays))
    }

    /// The integers `a_i` with `v_{i-1} + v_{i+1} = a_i v_i`.
    pub fn neighbour_coefficients(&self) -> Vec<BigInt> {
        let n = self.len();
        (0..n)
            .map(|i| det2(&self.rays[(i + n - 1) % n], &self.rays[(i + 1) % n]))
            .collect()
    }

    /// Self-intersection numbers `-a_i` of the torus-invariant curves, aligned
    /// with [`Fan2D::rays`].
    pub fn self_intersections(&self) -> Vec<BigInt> {
        self.neighbour_coefficients().into_iter().map(|a| -a).collect()
    }

    /// Indices of rays that can be blown down.
    pub fn contractible_rays(&self) -> Vec<usize> {
        if self.len() <= 3 {
            return Vec::new();
        }
        self.neighbour_coefficients()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_one())
            .map(|(i, _)| i)
            .collect()
    }

    /// Image of this fan under a unimodular map.
    pub fn transform(&self, m: &UnimodularMap) -> Fan2D {
        let mut rays: Vec<RayVec> = self.rays.iter().map(|r| m.apply_ray(r)).collect();
        if !m.is_orientation_preserving() {
            rays.reverse();
        }
        Fan2D::from_rays_unchecked(rays)
    }

    /// Finds a unimodular map taking this fan's rays onto `other`'s.
    pub fn is_isomorphic(&self, other: &Fan2D) -> Option<UnimodularMap> {
        self.isomorphisms(other, true).into_iter().next()
    }

    /// All unimodular maps sending the ray set to itself.
    pub fn symmetry_group(&self) -> Vec<UnimodularMap> {
        self.isomorphisms(self, false)
    }

    fn isomorphisms(&self, other: &Fan2D, first_only: bool) -> Vec<UnimodularMap> {
        let n = self.len();
        if n != other.len() {
            return Vec::new();
        }
        let a_self = self.neighbour_coefficients();
        let a_other = other.neighbour_coefficients();
        let targets: HashSet<&RayVec> = other.rays.iter().collect();
        let mut found = Vec::new();
        for reversed in [false, true] {
            for j in 0..n {
                // The neighbour coefficients are intrinsic, so the cyclic
                // sequences must match before any matrix is tried.
                let coeffs_match = (0..n).all(|i| {
                    let k = if reversed { (j + n - i) % n } else { (j + i) % n };
                    a_self[i] == a_other[k]
                });
                if !coeffs_match {
                    continue;
                }
                let (d0, d1) = if reversed {
                    (&other.rays[j], &other.rays[(j + n - 1) % n])
                } else {
                    (&other.rays[j], &other.rays[(j + 1) % n])
                };
                let m = UnimodularMap::from_basis_pair((&self.rays[0], &self.rays[1]), (d0, d1))
                    .expect("adjacent rays of a smooth fan form a basis");
                if self.rays.iter().all(|r| targets.contains(&m.apply_ray(r))) {
                    found.push(m);
                    if first_only {
                        return found;
                    }
                }
            }
        }
        found
    }
}

impl fmt::Display for Fan2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
