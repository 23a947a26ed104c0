//! Point sets in `[0,1]^d` and the plane, with halfspace and disk ranges.

use std::f64::consts::TAU;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rng;
use crate::system::{PointCloud, Provenance, SetSystem};

fn uniform_cube(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = rng::seeded(seed);
    let coords = (0..n * d).map(|_| rng.random::<f64>()).collect();
    PointCloud { dim: d, coords }
}

/// Smallest `s` with `s^d >= n`, i.e. `⌈n^{1/d}⌉` without rounding trouble.
pub fn levels_per_axis(n: usize, d: usize) -> usize {
    let fits = |s: usize| match u32::try_from(d).ok().and_then(|d| s.checked_pow(d)) {
        Some(p) => p >= n,
        None => true,
    };
    let mut s = (n as f64).powf(1.0 / d as f64).round().max(1.0) as usize;
    while s > 1 && fits(s - 1) {
        s -= 1;
    }
    while !fits(s) {
        s += 1;
    }
    s
}

/// Axis-aligned threshold ranges over uniform points in the unit cube.
///
/// With `s = ⌈n^{1/d}⌉`, axis `j` contributes `s` ranges: level `q` in
/// `1..=s` holds the points whose `j`-th coordinate is at least `q/(s+1)`.
/// Ranges are ordered axis-major, then by increasing level, so consecutive
/// ranges on one axis are nested.
pub fn gen_grid(n: usize, d: usize, seed: u64) -> Result<SetSystem> {
    if n == 0 || d == 0 {
        return Err(Error::arg("grid needs n >= 1 and d >= 1"));
    }
    let points = uniform_cube(n, d, rng::split(seed, 0));
    let s = levels_per_axis(n, d);
    let mut ranges = Vec::with_capacity(d * s);
    for axis in 0..d {
        for q in 1..=s {
            let threshold = q as f64 / (s + 1) as f64;
            ranges.push(BitSet::from_indices(n, (0..n).filter(|&i| points.point(i)[axis] >= threshold)));
        }
    }
    let provenance = Provenance {
        family: "grid".into(),
        params: vec![("n".into(), n.to_string()), ("d".into(), d.to_string()), ("seed".into(), seed.to_string())],
        points: Some(points),
    };
    Ok(SetSystem::from_bitsets(n, ranges)?.with_provenance(provenance))
}

/// Points `p` with `normal · p >= offset`.
pub fn halfspace_range(points: &PointCloud, normal: &[f64], offset: f64) -> BitSet {
    BitSet::from_indices(points.len(), (0..points.len()).filter(|&i| dot(points.point(i), normal) >= offset))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Uniform points in the unit cube cut by `m` random halfspaces.
///
/// Each halfspace has a normal drawn uniformly from the sphere and a bounding
/// hyperplane through a fresh uniform point of the cube.
pub fn gen_random_halfspaces(n: usize, d: usize, m: usize, seed: u64) -> Result<SetSystem> {
    if n == 0 || d == 0 || m == 0 {
        return Err(Error::arg("random halfspaces need n, d, m >= 1"));
    }
    let points = uniform_cube(n, d, rng::split(seed, 0));
    let mut rng = rng::seeded(rng::split(seed, 1));
    let mut ranges = Vec::with_capacity(m);
    let mut normal = vec![0.0; d];
    for _ in 0..m {
        loop {
            for c in normal.iter_mut() {
                *c = rng.sample(StandardNormal);
            }
            let norm = dot(&normal, &normal).sqrt();
            if norm > 1e-12 {
                normal.iter_mut().for_each(|c| *c /= norm);
                break;
            }
        }
        let anchor: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        let offset = dot(&normal, &anchor);
        ranges.push(halfspace_range(&points, &normal, offset));
    }
    let provenance = Provenance {
        family: "random-halfspaces".into(),
        params: vec![
            ("n".into(), n.to_string()),
            ("d".into(), d.to_string()),
            ("m".into(), m.to_string()),
            ("seed".into(), seed.to_string()),
        ],
        points: Some(points),
    };
    Ok(SetSystem::from_bitsets(n, ranges)?.with_provenance(provenance))
}

/// Points strictly inside the disk of the given center and radius.
pub fn disk_range(points: &PointCloud, center: [f64; 2], radius: f64) -> BitSet {
    let r2 = radius * radius;
    BitSet::from_indices(
        points.len(),
        (0..points.len()).filter(|&i| {
            let p = points.point(i);
            let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
            dx * dx + dy * dy < r2
        }),
    )
}

/// `n` points on `circles` concentric circles around the origin, cut by
/// `m` random disks.
///
/// Circle `q` (1-based) has radius `q/circles`; points are dealt out in
/// contiguous blocks, the first `n % circles` circles taking one extra.
/// Disk centers are uniform in `[-1,1]^2` and radii uniform in `(0,1]`.
pub fn gen_circle_disks(n: usize, circles: usize, m: usize, seed: u64) -> Result<SetSystem> {
    if n == 0 || circles == 0 || m == 0 {
        return Err(Error::arg("circle disks need n, circles, m >= 1"));
    }
    let mut rng = rng::seeded(rng::split(seed, 0));
    let mut coords = Vec::with_capacity(2 * n);
    let (per, extra) = (n / circles, n % circles);
    for q in 0..circles {
        let radius = (q + 1) as f64 / circles as f64;
        for _ in 0..per + usize::from(q < extra) {
            let angle = rng.random::<f64>() * TAU;
            coords.push(radius * angle.cos());
            coords.push(radius * angle.sin());
        }
    }
    let points = PointCloud { dim: 2, coords };
    let mut rng = rng::seeded(rng::split(seed, 1));
    let ranges = (0..m)
        .map(|_| {
            let center = [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)];
            let radius = 1.0 - rng.random::<f64>();
            disk_range(&points, center, radius)
        })
        .collect();
    let provenance = Provenance {
        family: "circle-disks".into(),
        params: vec![
            ("n".into(), n.to_string()),
            ("circles".into(), circles.to_string()),
            ("m".into(), m.to_string()),
            ("seed".into(), seed.to_string()),
        ],
        points: Some(points),
    };
    Ok(SetSystem::from_bitsets(n, ranges)?.with_provenance(provenance))
}
