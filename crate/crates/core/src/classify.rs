//! Minimal models and the blow-up invariants `n`, `l`, `l0`.
//!
//! Every smooth complete fan other than the projective plane refines at least
//! one four-ray Hirzebruch subfan built from its own rays, and refining a
//! smooth fan is the same as iterated blow-up. Two routes compute the minimal
//! models: an exhaustive memoized blow-down search ([`minimal_models`]) and a
//! direct enumeration of subfans ([`models_from_subfans`]). The invariants use
//! the subfan route, which stays polynomial in the number of rays.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{BlowupSequence, BlowupStep, Fan2D};
use crate::lattice::{det2, sb_depth, RayVec, UnimodularMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("IsProjectivePlane: blow up one fixed point first (F1 = Bl(P2))")]
    IsProjectivePlane,
    #[error("TooLarge: {0} does not fit in 64 bits")]
    TooLarge(&'static str),
}

impl ClassifyError {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifyError::IsProjectivePlane => "IsProjectivePlane",
            ClassifyError::TooLarge(_) => "TooLarge",
        }
    }
}

/// A minimal smooth complete toric surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelTag {
    ProjectivePlane,
    Hirzebruch(BigUint),
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelTag::ProjectivePlane => write!(f, "P2"),
            ModelTag::Hirzebruch(n) => write!(f, "F{n}"),
        }
    }
}

/// A minimal model with one blow-up sequence from the model (as a subfan of
/// the input, in the input's coordinates) back to the input fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub tag: ModelTag,
    pub witness: BlowupSequence,
}

/// A four-ray Hirzebruch subfan `{right, fiber, left, -fiber}`, listed
/// counterclockwise, with `right + left = -n * fiber`.
///
/// In the coordinates where `right = (1,0)` and `fiber = (0,1)` this is the
/// standard fan `{(0,-1), (1,0), (0,1), (-1,-n)}`. The reduction step blows
/// up the cone `(fiber, left)` or its mirror image `(right, fiber)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HirzebruchBase {
    pub fiber: RayVec,
    pub right: RayVec,
    pub left: RayVec,
    pub n: BigUint,
}

impl HirzebruchBase {
    /// Rays in counterclockwise order starting at `right`.
    pub fn rays(&self) -> [RayVec; 4] {
        [
            self.right.clone(),
            self.fiber.clone(),
            self.left.clone(),
            self.fiber.neg(),
        ]
    }

    pub fn fan(&self) -> Fan2D {
        Fan2D::from_rays_unchecked(self.rays().to_vec())
    }

    /// The map to standard coordinates: `right -> (1,0)`, `fiber -> (0,1)`.
    pub fn to_standard(&self) -> UnimodularMap {
        UnimodularMap::from_columns(&self.right, &self.fiber)
            .expect("base rays form a basis")
            .inverse()
    }

    /// Blow-up generation of `v` relative to this base: 0 on the base rays,
    /// otherwise the Stern–Brocot depth of `v` inside the base cone that
    /// contains it.
    pub fn generation(&self, v: &RayVec) -> BigUint {
        let rays = self.rays();
        for i in 0..4 {
            let (p, q) = (&rays[i], &rays[(i + 1) % 4]);
            let alpha = det2(v, q);
            let beta = det2(p, v);
            if !alpha.is_negative() && !beta.is_negative() {
                return sb_depth(&RayVec::new_unchecked(alpha, beta));
            }
        }
        unreachable!("the base cones cover the plane")
    }

    /// Largest generation over the rays of `fan`, which must refine the base.
    pub fn max_generation(&self, fan: &Fan2D) -> BigUint {
        fan.rays()
            .iter()
            .map(|v| self.generation(v))
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for HirzebruchBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.rays();
        write!(f, "F{} on [{a}, {b}, {c}, {d}]", self.n)
    }
}

/// All four-ray Hirzebruch subfans of `fan`, sorted.
pub fn hirzebruch_bases(fan: &Fan2D) -> Vec<HirzebruchBase> {
    let rays = fan.rays();
    let present: HashSet<&RayVec> = rays.iter().collect();
    let one = BigInt::one();
    let mut by_set: BTreeMap<Vec<RayVec>, HirzebruchBase> = BTreeMap::new();
    for u in rays {
        if !present.contains(&u.neg()) {
            continue;
        }
        let rights: Vec<&RayVec> = rays.iter().filter(|b| det2(b, u) == one).collect();
        let lefts: Vec<&RayVec> = rays.iter().filter(|c| det2(u, c) == one).collect();
        for b in &rights {
            for c in &lefts {
                // det(b + c, u) = 0, so b + c = k u.
                let s = b.sum(c);
                let k = if u.x().is_zero() {
                    &s.y / u.y()
                } else {
                    &s.x / u.x()
                };
                if k.is_positive() {
                    // Seen with the opposite fibre orientation.
                    continue;
                }
                let base = HirzebruchBase {
                    fiber: u.clone(),
                    right: (*b).clone(),
                    left: (*c).clone(),
                    n: (-k).to_biguint().expect("nonnegative"),
                };
                let mut key: Vec<RayVec> = base.rays().to_vec();
                key.sort();
                by_set
                    .entry(key)
                    .and_modify(|old| {
                        if base < *old {
                            *old = base.clone();
                        }
                    })
                    .or_insert(base);
            }
        }
    }
    let mut out: Vec<HirzebruchBase> = by_set.into_values().collect();
    out.sort();
    out
}

/// All three-ray projective-plane subfans, each listed counterclockwise from
/// its smallest ray.
pub fn projective_plane_subfans(fan: &Fan2D) -> Vec<[RayVec; 3]> {
    let rays = fan.rays();
    let present: HashSet<&RayVec> = rays.iter().collect();
    let one = BigInt::one();
    let mut out = Vec::new();
    for a in rays {
        for b in rays {
            if a >= b || det2(a, b) != one {
                continue;
            }
            let c = a.unimodular_sum(b).neg();
            if present.contains(&c) && *a < c {
                out.push([a.clone(), b.clone(), c]);
            }
        }
    }
    out.sort();
    out
}

/// Blow-down sequence from `fan` to the subfan on `keep`, returned as the
/// forward blow-up sequence from the subfan to `fan`.
///
/// Any smooth refinement of a smooth fan has a contractible ray outside the
/// coarser fan, so the greedy contraction never stalls.
fn witness_to_subfan(fan: &Fan2D, keep: &[RayVec]) -> BlowupSequence {
    let keep: HashSet<&RayVec> = keep.iter().collect();
    let mut current = fan.clone();
    let mut steps = Vec::new();
    while current.len() > keep.len() {
        let i = current
            .contractible_rays()
            .into_iter()
            .find(|&i| !keep.contains(current.ray(i)))
            .expect("a refinement of a smooth fan has a contractible extra ray");
        let (next, step) = current.blow_down(i).expect("contractible");
        steps.push(step);
        current = next;
    }
    steps.reverse();
    BlowupSequence {
        base: current,
        steps,
        result: fan.clone(),
    }
}

fn hirzebruch_index(four: &Fan2D) -> BigUint {
    four.neighbour_coefficients()
        .into_iter()
        .map(|a| a.abs().to_biguint().expect("nonnegative"))
        .max()
        .unwrap_or_default()
}

/// Minimal models by enumerating the minimal subfans directly. Returns the
/// same set of tags as [`minimal_models`].
pub fn models_from_subfans(fan: &Fan2D) -> Vec<MinimalModel> {
    if fan.len() == 3 {
        return vec![MinimalModel {
            tag: ModelTag::ProjectivePlane,
            witness: BlowupSequence::empty(fan.clone()),
        }];
    }
    let mut found: BTreeMap<ModelTag, Vec<RayVec>> = BTreeMap::new();
    if let Some(p2) = projective_plane_subfans(fan).into_iter().next() {
        found.insert(ModelTag::ProjectivePlane, p2.to_vec());
    }
    for base in hirzebruch_bases(fan) {
        if base.n.is_one() {
            continue;
        }
        found
            .entry(ModelTag::Hirzebruch(base.n.clone()))
            .or_insert_with(|| base.rays().to_vec());
    }
    found
        .into_iter()
        .map(|(tag, keep)| MinimalModel {
            witness: witness_to_subfan(fan, &keep),
            tag,
        })
        .collect()
}

/// Fixed-capacity ray subset, used as the memo key of the blow-down search.
#[derive(Clone, PartialEq, Eq, Hash)]
struct RaySet(Vec<u64>);

impl RaySet {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        RaySet(words)
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1u64 << (i % 64));
    }

    fn members(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let t = bits.trailing_zeros() as usize;
                out.push(w * 64 + t);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Contractions on a path: (ray, prev, next).
type Contractions = Vec<(usize, usize, usize)>;

struct BlowDownSearch<'a> {
    rays: &'a [RayVec],
    /// `parents[i]` holds the index pairs `(p, q)` with `rays[p] + rays[q] = rays[i]`.
    parents: Vec<HashSet<(usize, usize)>>,
    seen: HashSet<RaySet>,
    /// Contractions on the current path: (ray, prev, next).
    path: Contractions,
    leaves: BTreeMap<ModelTag, (Vec<usize>, Contractions)>,
}

impl<'a> BlowDownSearch<'a> {
    fn new(fan: &'a Fan2D) -> Self {
        let rays = fan.rays();
        let index: HashMap<&RayVec, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut parents = vec![HashSet::new(); rays.len()];
        for (p, a) in rays.iter().enumerate() {
            for (q, b) in rays.iter().enumerate() {
                if det2(a, b).is_one() {
                    if let Some(&i) = index.get(&a.unimodular_sum(b)) {
                        parents[i].insert((p, q));
                    }
                }
            }
        }
        BlowDownSearch {
            rays,
            parents,
            seen: HashSet::new(),
            path: Vec::new(),
            leaves: BTreeMap::new(),
        }
    }

    fn visit(&mut self, set: RaySet) {
        if !self.seen.insert(set.clone()) {
            return;
        }
        let active = set.members();
        let m = active.len();
        let mut moves = Vec::new();
        if m > 3 {
            for t in 0..m {
                let (prev, k, next) = (active[(t + m - 1) % m], active[t], active[(t + 1) % m]);
                if self.parents[k].contains(&(prev, next)) {
                    moves.push((k, prev, next));
                }
            }
        }
        if moves.is_empty() {
            let sub = Fan2D::from_rays_unchecked(active.iter().map(|&i| self.rays[i].clone()).collect());
            let tag = match m {
                3 => ModelTag::ProjectivePlane,
                4 => ModelTag::Hirzebruch(hirzebruch_index(&sub)),
                _ => unreachable!("a smooth complete fan with {m} rays has a contractible ray"),
            };
            self.leaves
                .entry(tag)
                .or_insert_with(|| (active.clone(), self.path.clone()));
            return;
        }
        for (k, prev, next) in moves {
            let mut child = set.clone();
            child.remove(k);
            self.path.push((k, prev, next));
            self.visit(child);
            self.path.pop();
        }
    }
}

/// Exhaustive depth-first blow-down search: contracts every contractible ray
/// in every order, memoizing on the remaining ray set, and returns each
/// distinct minimal model with the first witness found.
///
/// The number of visited states equals the number of smooth complete subfans,
/// which grows exponentially with the depth of the fan; this is meant for
/// small fans and for cross-checking [`models_from_subfans`].
pub fn minimal_models(fan: &Fan2D) -> Vec<MinimalModel> {
    let mut search = BlowDownSearch::new(fan);
    search.visit(RaySet::full(fan.len()));
    let rays = fan.rays();
    search
        .leaves
        .into_iter()
        .map(|(tag, (active, path))| {
            let base = Fan2D::from_rays_unchecked(active.iter().map(|&i| rays[i].clone()).collect());
            let steps = path
                .iter()
                .rev()
                .map(|&(k, prev, next)| BlowupStep {
                    left: rays[prev].clone(),
                    right: rays[next].clone(),
                    inserted: rays[k].clone(),
                })
                .collect();
            MinimalModel {
                tag,
                witness: BlowupSequence {
                    base,
                    steps,
                    result: fan.clone(),
                },
            }
        })
        .collect()
}

fn to_u64(v: &BigUint, what: &'static str) -> Result<u64, ClassifyError> {
    v.to_u64().ok_or(ClassifyError::TooLarge(what))
}

/// The least `n` such that `fan` is an iterated blow-up of `F_n`.
pub fn minimal_n(fan: &Fan2D) -> Result<u64, ClassifyError> {
    if fan.len() == 3 {
        return Err(ClassifyError::IsProjectivePlane);
    }
    let n = hirzebruch_bases(fan)
        .into_iter()
        .map(|b| b.n)
        .min()
        .expect("a fan with at least four rays refines a Hirzebruch subfan");
    to_u64(&n, "n")
}

/// `n`, `l` and `l0 = l + 1` together with the minimal models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub minimal_models: Vec<MinimalModel>,
    pub n_min: u64,
    /// Longest chain of blow-ups each centred on the previous exceptional
    /// curve, for the best description from `F_{n_min}`.
    pub l: u64,
    pub l0: u64,
    /// The `F_{n_min}` subfan realizing `l`.
    pub witness: HirzebruchBase,
    /// `(min, max)` of the chain length over all `F_{n_min}` subfans.
    pub l_range: (u64, u64),
}

impl ClassificationReport {
    /// True when different descriptions from `F_{n_min}` give different chain
    /// lengths.
    pub fn witnesses_disagree(&self) -> bool {
        self.l_range.0 != self.l_range.1
    }

    pub fn model_tags(&self) -> Vec<ModelTag> {
        self.minimal_models.iter().map(|m| m.tag.clone()).collect()
    }
}

/// The `F_{n_min}` subfans, each paired with its largest ray generation.
pub(crate) fn minimal_bases(fan: &Fan2D) -> Result<Vec<(HirzebruchBase, BigUint)>, ClassifyError> {
    if fan.len() == 3 {
        return Err(ClassifyError::IsProjectivePlane);
    }
    let bases = hirzebruch_bases(fan);
    let n_min = bases.iter().map(|b| b.n.clone()).min().expect("nonempty");
    Ok(bases
        .into_iter()
        .filter(|b| b.n == n_min)
        .map(|b| {
            let g = b.max_generation(fan);
            (b, g)
        })
        .collect())
}

/// Computes the classification report.
///
/// The chain length of a description from a subfan `B` is the largest blow-up
/// generation of a ray of `fan` relative to `B`: each ray's longest chain of
/// exceptional-curve parents is exactly its generation. `l` is the smallest
/// such value over the `F_{n_min}` subfans.
pub fn iteration_invariants(fan: &Fan2D) -> Result<ClassificationReport, ClassifyError> {
    let scored = minimal_bases(fan)?;
    let (witness, l_min) = scored
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)))
        .cloned()
        .expect("nonempty");
    let l_max = scored.iter().map(|(_, g)| g.clone()).max().expect("nonempty");
    let l = to_u64(&l_min, "l")?;
    Ok(ClassificationReport {
        minimal_models: models_from_subfans(fan),
        n_min: to_u64(&witness.n, "n")?,
        l,
        l0: l.checked_add(1).ok_or(ClassifyError::TooLarge("l0"))?,
        witness,
        l_range: (l, to_u64(&l_max, "l")?),
    })
}
