//! Finite projective planes over the prime field GF(a).

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::system::{Provenance, SetSystem};

pub fn is_prime(a: u64) -> bool {
    if a < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= a {
        if a.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Normalized representatives of the 1-dimensional subspaces of GF(a)^3:
/// the first nonzero coordinate is 1.
fn projective_points(a: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::with_capacity((a * a + a + 1) as usize);
    for y in 0..a {
        for z in 0..a {
            out.push([1, y, z]);
        }
    }
    for z in 0..a {
        out.push([0, 1, z]);
    }
    out.push([0, 0, 1]);
    out
}

/// The projective plane of prime order `a`: `a²+a+1` points and lines,
/// point `x` on line `L` iff `x · L ≡ 0 (mod a)`.
pub fn gen_projective_plane(a: u64) -> Result<SetSystem> {
    if !is_prime(a) {
        return Err(Error::arg(format!("projective planes are only built for prime orders, got {a}")));
    }
    let points = projective_points(a);
    let n = points.len();
    let ranges = points
        .iter()
        .map(|line| {
            BitSet::from_indices(
                n,
                points.iter().enumerate().filter_map(|(i, p)| {
                    let dot = (p[0] * line[0] + p[1] * line[1] + p[2] * line[2]) % a;
                    (dot == 0).then_some(i)
                }),
            )
        })
        .collect();
    let provenance = Provenance {
        family: "projective-plane".into(),
        params: vec![("order".into(), a.to_string())],
        points: None,
    };
    Ok(SetSystem::from_bitsets(n, ranges)?.with_provenance(provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&a| is_prime(a)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn fano_plane() {
        let s = gen_projective_plane(2).unwrap();
        assert_eq!((s.n(), s.m()), (7, 7));
        assert!(s.ranges().iter().all(|r| r.count() == 3));
        for x in 0..7 {
            assert_eq!((0..7).filter(|&f| s.contains(f, x)).count(), 3);
        }
    }

    #[test]
    fn order_three() {
        let s = gen_projective_plane(3).unwrap();
        assert_eq!((s.n(), s.m()), (13, 13));
        assert!(s.ranges().iter().all(|r| r.count() == 4));
    }

    #[test]
    fn plane_axioms_hold() {
        for a in [2u64, 3, 5, 7, 11, 13] {
            let s = gen_projective_plane(a).unwrap();
            let n = (a * a + a + 1) as usize;
            let k = a as usize + 1;
            assert_eq!((s.n(), s.m()), (n, n));
            for f in 0..n {
                assert_eq!(s.range(f).count(), k);
                for g in f + 1..n {
                    assert_eq!(s.range(f).intersection_count(s.range(g)), 1, "lines {f},{g} of order {a}");
                }
            }
            for x in 0..n {
                assert_eq!((0..n).filter(|&f| s.contains(f, x)).count(), k);
            }
        }
    }

    #[test]
    fn non_prime_rejected() {
        for a in [0, 1, 4, 6, 9] {
            assert!(matches!(gen_projective_plane(a), Err(Error::Argument(_))));
        }
    }
}
