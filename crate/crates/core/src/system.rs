//! Set systems, partitions and the crossing arithmetic on top of them.

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Generator-level sidecar data. Never consulted by the algorithms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub family: String,
    pub params: Vec<(String, String)>,
    pub points: Option<PointCloud>,
}

/// Row-major coordinates of the elements of a geometric set system.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
}

impl PointCloud {
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A ground set `0..n` together with `m` ranges over it.
///
/// Each range is a bitset over the elements. The incidence is fixed once the
/// system is built. Equality compares the incidence only, not provenance.
#[derive(Clone)]
pub struct SetSystem {
    n: usize,
    ranges: Vec<BitSet>,
    provenance: Option<Provenance>,
}

impl SetSystem {
    /// Builds a system from per-range member lists. Duplicate members are
    /// accepted and collapse.
    pub fn new<R, I>(n: usize, ranges: R) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if n == 0 {
            return Err(Error::arg("a set system needs at least one element"));
        }
        let mut out = Vec::new();
        for (f, members) in ranges.into_iter().enumerate() {
            let mut set = BitSet::new(n);
            for x in members {
                if x >= n {
                    return Err(Error::arg(format!("range {f} references element {x} but n = {n}")));
                }
                set.insert(x);
            }
            out.push(set);
        }
        Ok(SetSystem { n, ranges: out, provenance: None })
    }

    pub fn from_bitsets(n: usize, ranges: Vec<BitSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("a set system needs at least one element"));
        }
        if let Some(f) = ranges.iter().position(|r| r.capacity() != n) {
            return Err(Error::arg(format!("range {f} has universe {} but n = {n}", ranges[f].capacity())));
        }
        Ok(SetSystem { n, ranges, provenance: None })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.ranges.len()
    }

    #[inline]
    pub fn range(&self, f: usize) -> &BitSet {
        &self.ranges[f]
    }

    #[inline]
    pub fn ranges(&self) -> &[BitSet] {
        &self.ranges
    }

    #[inline]
    pub fn contains(&self, f: usize, x: usize) -> bool {
        self.ranges[f].contains(x)
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    fn check_range(&self, f: usize) -> Result<()> {
        if f >= self.m() {
            return Err(Error::arg(format!("range {f} out of bounds (m = {})", self.m())));
        }
        Ok(())
    }
}

impl PartialEq for SetSystem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ranges == other.ranges
    }
}

impl Eq for SetSystem {}

impl fmt::Debug for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetSystem")
            .field("n", &self.n)
            .field("m", &self.m())
            .field("family", &self.provenance.as_ref().map(|p| p.family.as_str()))
            .finish()
    }
}

/// Marker for an element that no part claims.
pub const UNASSIGNED: u32 = u32::MAX;

/// An assignment of elements to parts `0..t`.
///
/// The final part is whatever the earlier parts leave over. Elements may be
/// left [`UNASSIGNED`] only by [`Partition::from_parts`]; such a partition is
/// reported by [`validate_partition`] and rejected by [`crossing_number`].
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    part_of: Vec<u32>,
    t: usize,
    sizes: Vec<usize>,
}

impl Partition {
    /// Builds a partition from an element → part map.
    pub fn new(part_of: Vec<u32>, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::arg("a partition needs at least one part"));
        }
        if t >= UNASSIGNED as usize {
            return Err(Error::arg(format!("too many parts: {t}")));
        }
        let mut sizes = vec![0; t];
        for (x, &p) in part_of.iter().enumerate() {
            if p as usize >= t {
                return Err(Error::arg(format!("element {x} assigned to part {p} but t = {t}")));
            }
            sizes[p as usize] += 1;
        }
        Ok(Partition { part_of, t, sizes })
    }

    /// Builds a partition of `0..n` from explicit part lists. Elements that
    /// appear in no list stay unassigned; overlapping lists are an error.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::arg("a partition needs at least one part"));
        }
        let mut part_of = vec![UNASSIGNED; n];
        let mut sizes = vec![0; parts.len()];
        for (i, part) in parts.iter().enumerate() {
            for &x in part {
                if x >= n {
                    return Err(Error::arg(format!("part {i} references element {x} but n = {n}")));
                }
                if part_of[x] != UNASSIGNED {
                    return Err(Error::arg(format!(
                        "element {x} is in both part {} and part {i}",
                        part_of[x]
                    )));
                }
                part_of[x] = i as u32;
                sizes[i] += 1;
            }
        }
        Ok(Partition { part_of, t: parts.len(), sizes })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t
    }

    /// Part of element `x`, or `None` if unassigned.
    #[inline]
    pub fn part_of(&self, x: usize) -> Option<usize> {
        match self.part_of[x] {
            UNASSIGNED => None,
            p => Some(p as usize),
        }
    }

    pub fn assignment(&self) -> &[u32] {
        &self.part_of
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_complete(&self) -> bool {
        self.sizes.iter().sum::<usize>() == self.part_of.len()
    }

    /// Member lists of every part, each in increasing order.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (x, &p) in self.part_of.iter().enumerate() {
            if p != UNASSIGNED {
                parts[p as usize].push(x);
            }
        }
        parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Partition").field("n", &self.n()).field("t", &self.t).field("sizes", &self.sizes).finish()
    }
}

/// Crossing counts of every range against a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    pub kappa: u32,
    pub per_range: Vec<u32>,
    /// Smallest-index range attaining `kappa`; `None` when there are no ranges.
    pub argmax_range: Option<usize>,
}

/// Whether range `f` contains some but not all elements of `subset`.
pub fn crosses(system: &SetSystem, f: usize, subset: &[usize]) -> Result<bool> {
    system.check_range(f)?;
    if subset.is_empty() {
        return Err(Error::arg("crossing test needs a nonempty subset"));
    }
    if let Some(&x) = subset.iter().find(|&&x| x >= system.n()) {
        return Err(Error::arg(format!("element {x} out of bounds (n = {})", system.n())));
    }
    let range = system.range(f);
    let inside = subset.iter().filter(|&&x| range.contains(x)).count();
    Ok(inside > 0 && inside < subset.len())
}

/// Crossing test on bitsets: `range` crosses `part` iff it holds some but
/// not all of its `part_size` members.
#[inline]
pub fn crosses_set(range: &BitSet, part: &BitSet, part_size: usize) -> bool {
    let inside = range.intersection_count(part);
    inside > 0 && inside < part_size
}

/// For each range, the number of parts it crosses, and the maximum of those.
pub fn crossing_number(system: &SetSystem, partition: &Partition) -> Result<CrossingReport> {
    if partition.n() != system.n() {
        return Err(Error::arg(format!(
            "partition covers {} elements but the system has {}",
            partition.n(),
            system.n()
        )));
    }
    if !partition.is_complete() {
        return Err(Error::arg("partition leaves elements unassigned"));
    }
    let sizes = partition.part_sizes();
    let mut hits = vec![0usize; partition.t()];
    let mut touched = Vec::new();
    let mut per_range = Vec::with_capacity(system.m());
    for range in system.ranges() {
        for x in range.iter() {
            let p = partition.part_of[x] as usize;
            if hits[p] == 0 {
                touched.push(p);
            }
            hits[p] += 1;
        }
        let mut crossed = 0u32;
        for &p in &touched {
            if hits[p] < sizes[p] {
                crossed += 1;
            }
            hits[p] = 0;
        }
        touched.clear();
        per_range.push(crossed);
    }
    let mut kappa = 0;
    let mut argmax_range = None;
    for (f, &c) in per_range.iter().enumerate() {
        if argmax_range.is_none() || c > kappa {
            kappa = c;
            argmax_range = Some(f);
        }
    }
    Ok(CrossingReport { kappa, per_range, argmax_range })
}

/// One violated condition of a balanced partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The partition and the system disagree on the number of elements.
    ElementCount { partition: usize, system: usize },
    /// More parts than elements; no balanced partition exists.
    TooManyParts { t: usize, n: usize },
    /// Elements not covered by any part (coverage).
    Unassigned { count: usize, first: usize },
    /// An element listed in two parts (disjointness).
    Overlap { element: usize },
    /// A non-final part whose size is not `⌊n/t⌋`.
    PartSize { part: usize, size: usize, expected: usize },
    /// The final part is outside `[n/t, 2n/t]`.
    LastPartSize { size: usize, n: usize, t: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ElementCount { partition, system } => {
                write!(f, "partition has {partition} elements, system has {system}")
            }
            Violation::TooManyParts { t, n } => write!(f, "t = {t} exceeds n = {n}"),
            Violation::Unassigned { count, first } => {
                write!(f, "{count} element(s) assigned to no part (first: {first})")
            }
            Violation::Overlap { element } => write!(f, "element {element} belongs to more than one part"),
            Violation::PartSize { part, size, expected } => {
                write!(f, "part {part} has size {size}, expected {expected}")
            }
            Violation::LastPartSize { size, n, t } => {
                write!(f, "last part has size {size}, outside [{n}/{t}, 2*{n}/{t}]")
            }
        }
    }
}

/// Lists every balance, coverage and disjointness condition the partition
/// violates. An empty list means the partition is valid.
pub fn validate_partition(system: &SetSystem, partition: &Partition) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = system.n();
    if partition.n() != n {
        out.push(Violation::ElementCount { partition: partition.n(), system: n });
    }
    if let Some(first) = partition.part_of.iter().position(|&p| p == UNASSIGNED) {
        let count = partition.part_of.iter().filter(|&&p| p == UNASSIGNED).count();
        out.push(Violation::Unassigned { count, first });
    }
    check_sizes(n, partition.part_sizes(), &mut out);
    out
}

/// Like [`validate_partition`], for raw part lists that may overlap.
pub fn validate_parts(system: &SetSystem, parts: &[Vec<usize>]) -> Vec<Violation> {
    let n = system.n();
    let mut out = Vec::new();
    let mut seen = vec![false; n];
    let mut overlapping = BitSet::new(n);
    let mut foreign = 0;
    for part in parts {
        for &x in part {
            if x >= n {
                foreign += 1;
            } else if seen[x] {
                overlapping.insert(x);
            } else {
                seen[x] = true;
            }
        }
    }
    if foreign > 0 {
        out.push(Violation::ElementCount { partition: n + foreign, system: n });
    }
    out.extend(overlapping.iter().map(|element| Violation::Overlap { element }));
    if let Some(first) = seen.iter().position(|&s| !s) {
        let count = seen.iter().filter(|&&s| !s).count();
        out.push(Violation::Unassigned { count, first });
    }
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    check_sizes(n, &sizes, &mut out);
    out
}

fn check_sizes(n: usize, sizes: &[usize], out: &mut Vec<Violation>) {
    let t = sizes.len();
    if t == 0 {
        return;
    }
    if t > n {
        out.push(Violation::TooManyParts { t, n });
        return;
    }
    let base = n / t;
    for (part, &size) in sizes[..t - 1].iter().enumerate() {
        if size != base {
            out.push(Violation::PartSize { part, size, expected: base });
        }
    }
    let last = sizes[t - 1];
    if last * t < n || last * t > 2 * n {
        out.push(Violation::LastPartSize { size: last, n, t });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, ranges: &[&[usize]]) -> SetSystem {
        SetSystem::new(n, ranges.iter().map(|r| r.iter().copied())).unwrap()
    }

    #[test]
    fn crosses_examples() {
        let s = sys(6, &[&[1, 2], &[0, 1, 2, 3, 4, 5]]);
        assert!(crosses(&s, 0, &[1, 3]).unwrap());
        assert!(!crosses(&s, 0, &[5]).unwrap());
        assert!(!crosses(&s, 1, &[5]).unwrap());
        assert!(!crosses(&s, 0, &[1, 2]).unwrap());
        assert!(!crosses(&s, 1, &[0, 3, 4]).unwrap());
        assert!(!crosses(&s, 0, &[0, 3]).unwrap());
    }

    #[test]
    fn crosses_rejects_bad_input() {
        let s = sys(3, &[&[0]]);
        assert!(matches!(crosses(&s, 1, &[0]), Err(Error::Argument(_))));
        assert!(matches!(crosses(&s, 0, &[3]), Err(Error::Argument(_))));
        assert!(matches!(crosses(&s, 0, &[]), Err(Error::Argument(_))));
    }

    #[test]
    fn system_rejects_foreign_elements() {
        assert!(SetSystem::new(3, [vec![0, 3]]).is_err());
        assert!(SetSystem::new(0, Vec::<Vec<usize>>::new()).is_err());
        let empty = SetSystem::new(2, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(empty.m(), 0);
    }

    #[test]
    fn singletons_have_zero_kappa() {
        let s = sys(4, &[&[0, 1], &[1, 2, 3]]);
        let p = Partition::new(vec![0, 1, 2, 3], 4).unwrap();
        let r = crossing_number(&s, &p).unwrap();
        assert_eq!(r.kappa, 0);
        assert_eq!(r.per_range, vec![0, 0]);
    }

    #[test]
    fn single_part_crossed_once() {
        let s = sys(4, &[&[0, 1], &[0, 1, 2, 3], &[]]);
        let p = Partition::new(vec![0; 4], 1).unwrap();
        let r = crossing_number(&s, &p).unwrap();
        assert_eq!(r.kappa, 1);
        assert_eq!(r.per_range, vec![1, 0, 0]);
        assert_eq!(r.argmax_range, Some(0));
    }

    #[test]
    fn no_ranges_means_no_argmax() {
        let s = SetSystem::new(3, Vec::<Vec<usize>>::new()).unwrap();
        let p = Partition::new(vec![0, 0, 1], 2).unwrap();
        let r = crossing_number(&s, &p).unwrap();
        assert_eq!((r.kappa, r.argmax_range), (0, None));
    }

    #[test]
    fn crossing_number_size_mismatch() {
        let s = sys(4, &[&[0]]);
        let p = Partition::new(vec![0, 0, 0], 1).unwrap();
        assert!(matches!(crossing_number(&s, &p), Err(Error::Argument(_))));
        let partial = Partition::from_parts(4, &[vec![0, 1], vec![2]]).unwrap();
        assert!(crossing_number(&s, &partial).is_err());
    }

    #[test]
    fn validate_examples() {
        let s = sys(10, &[]);
        let ok = Partition::from_parts(10, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8, 9]]).unwrap();
        assert!(validate_partition(&s, &ok).is_empty());

        let bad = Partition::from_parts(10, &[vec![0, 1], vec![2, 3, 4, 5], vec![6, 7, 8, 9]]).unwrap();
        let v = validate_partition(&s, &bad);
        assert!(v.contains(&Violation::PartSize { part: 0, size: 2, expected: 3 }));

        let missing = Partition::from_parts(10, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap();
        let v = validate_partition(&s, &missing);
        assert!(v.contains(&Violation::Unassigned { count: 1, first: 9 }));
    }

    #[test]
    fn validate_last_part_bounds() {
        let s = sys(10, &[]);
        // last part of 1 < 10/3
        let small = Partition::from_parts(10, &[vec![0, 1, 2], vec![3, 4, 5], vec![6]]).unwrap();
        assert!(validate_partition(&s, &small).iter().any(|v| matches!(v, Violation::LastPartSize { .. })));
        let t_eq_n = Partition::new((0..10).collect(), 10).unwrap();
        assert!(validate_partition(&s, &t_eq_n).is_empty());
    }

    #[test]
    fn validate_parts_reports_overlap() {
        let s = sys(4, &[]);
        let v = validate_parts(&s, &[vec![0, 1], vec![1, 2, 3]]);
        assert!(v.contains(&Violation::Overlap { element: 1 }));
        assert!(Partition::from_parts(4, &[vec![0, 1], vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn partition_rejects_bad_ids() {
        assert!(Partition::new(vec![0, 2], 2).is_err());
        assert!(Partition::new(vec![0], 0).is_err());
    }
}
