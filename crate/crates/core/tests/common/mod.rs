#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use rand::Rng;
use toric_stab::{Fan2D, IntVec2, LatticePolytope, RayVec, SupportHeights, UnimodularMap};
use toric_stab::polytope::polytope_from_heights;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fan_fixture(name: &str) -> Fan2D {
    let pairs = toric_stab::format::parse_fan(&fixture(name)).unwrap();
    Fan2D::validate(&pairs).unwrap()
}

pub fn fan(pairs: &[(i64, i64)]) -> Fan2D {
    Fan2D::from_i64(pairs).unwrap()
}

pub fn ray(x: i64, y: i64) -> RayVec {
    RayVec::new(x, y).unwrap()
}

/// `base` blown up `len` times at uniformly chosen cones.
pub fn random_blowups<R: Rng>(rng: &mut R, base: Fan2D, len: usize) -> Fan2D {
    let mut f = base;
    for _ in 0..len {
        let cone = rng.random_range(0..f.len());
        f = f.blow_up(cone).unwrap().0;
    }
    f
}

/// A random fan: `F_n` with `n < 4` blown up at most `max_len` times.
pub fn random_fan<R: Rng>(rng: &mut R, max_len: usize) -> Fan2D {
    let n: i64 = rng.random_range(0..4);
    let len = rng.random_range(0..=max_len);
    random_blowups(rng, Fan2D::hirzebruch(n), len)
}

/// A product of a few elementary generators of `GL(2, Z)`.
pub fn random_map<R: Rng>(rng: &mut R, allow_reflection: bool) -> UnimodularMap {
    let gens = [
        UnimodularMap::new(0, -1, 1, 0).unwrap(),
        UnimodularMap::new(1, 1, 0, 1).unwrap(),
        UnimodularMap::new(1, -1, 0, 1).unwrap(),
        UnimodularMap::new(1, 0, 1, 1).unwrap(),
        UnimodularMap::new(1, 0, -1, 1).unwrap(),
    ];
    let mut m = UnimodularMap::identity();
    for _ in 0..rng.random_range(1..=4) {
        m = gens[rng.random_range(0..gens.len())].compose(&m);
    }
    if allow_reflection && rng.random_bool(0.5) {
        m = UnimodularMap::new(1, 0, 0, -1).unwrap().compose(&m);
    }
    m
}

/// A random Delzant lattice polygon with every vertex in `[-r, r]^2`, found
/// by rejection sampling over random fans and heights.
pub fn random_polytope<R: Rng>(rng: &mut R, r: i64) -> LatticePolytope {
    loop {
        let base = if rng.random_bool(0.2) {
            Fan2D::projective_plane()
        } else {
            Fan2D::hirzebruch(rng.random_range(0..4i64))
        };
        let len = rng.random_range(0..=3);
        let f = random_blowups(rng, base, len);
        let pairs: Vec<(RayVec, BigInt)> = f
            .rays()
            .iter()
            .map(|v| (v.clone(), BigInt::from(rng.random_range(-2..=8i64))))
            .collect();
        let h = SupportHeights::new(&f, &pairs).unwrap();
        let Ok(p) = polytope_from_heights(&h) else { continue };
        let t = IntVec2::new(rng.random_range(-3..=3i64), rng.random_range(-3..=3i64));
        let p = p.translate(&t);
        let lim = BigInt::from(r);
        if p.vertices().iter().all(|v| v.x.magnitude() <= lim.magnitude() && v.y.magnitude() <= lim.magnitude()) {
            return p;
        }
    }
}

/// Point count and coordinate sum of `kP ∩ Z^2` by testing every point of
/// the bounding box against every edge.
pub fn brute_count(p: &LatticePolytope, k: i64) -> (i64, i64, i64) {
    let vs: Vec<(i64, i64)> = p
        .vertices()
        .iter()
        .map(|v| (k * i64::try_from(&v.x).unwrap(), k * i64::try_from(&v.y).unwrap()))
        .collect();
    let (x0, x1) = (vs.iter().map(|v| v.0).min().unwrap(), vs.iter().map(|v| v.0).max().unwrap());
    let (y0, y1) = (vs.iter().map(|v| v.1).min().unwrap(), vs.iter().map(|v| v.1).max().unwrap());
    let n = vs.len();
    let (mut c, mut sx, mut sy) = (0, 0, 0);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let inside = (0..n).all(|i| {
                let (a, b) = (vs[i], vs[(i + 1) % n]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= 0
            });
            if inside {
                c += 1;
                sx += x;
                sy += y;
            }
        }
    }
    (c, sx, sy)
}
