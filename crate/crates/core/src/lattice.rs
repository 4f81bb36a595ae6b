//! Lattice geometry on Z^d: coordinates and finite supports.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;

/// A point of Z^d. In Z^3 the third entry is the height `z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    dim: u8,
    c: [i32; MAX_DIM],
}

impl Coord {
    pub fn new(entries: &[i32]) -> Self {
        assert!(
            !entries.is_empty() && entries.len() <= MAX_DIM,
            "coordinate dimension must be 1..={MAX_DIM}"
        );
        let mut c = [0; MAX_DIM];
        c[..entries.len()].copy_from_slice(entries);
        Coord { dim: entries.len() as u8, c }
    }

    pub fn zero(d: usize) -> Self {
        Coord::new(&vec![0; d])
    }

    /// Unit vector along `axis`.
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut v = vec![0; d];
        v[axis] = 1;
        Coord::new(&v)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn entries(&self) -> &[i32] {
        &self.c[..self.dim as usize]
    }

    pub fn with(&self, axis: usize, value: i32) -> Self {
        let mut out = *self;
        out.c[axis] = value;
        out
    }

    pub fn linf(&self) -> u32 {
        self.entries().iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn l1(&self) -> u32 {
        self.entries().iter().map(|v| v.unsigned_abs()).sum()
    }

    /// Componentwise reduction into `[0, p_i)`.
    pub fn wrap(&self, periods: &[u32]) -> Self {
        let mut out = *self;
        for (i, &p) in periods.iter().enumerate() {
            out.c[i] = self.c[i].rem_euclid(p as i32);
        }
        out
    }
}

impl Index<usize> for Coord {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        assert!(i < self.dim as usize, "axis {i} out of range");
        &self.c[i]
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries().cmp(other.entries())
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        debug_assert_eq!(self.dim, o.dim);
        let mut out = self;
        for i in 0..self.dim as usize {
            out.c[i] += o.c[i];
        }
        out
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        self + (-o)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        let mut out = self;
        for i in 0..self.dim as usize {
            out.c[i] = -out.c[i];
        }
        out
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        if v.is_empty() || v.len() > MAX_DIM {
            return Err(serde::de::Error::custom("bad coordinate dimension"));
        }
        Ok(Coord::new(&v))
    }
}

impl std::str::FromStr for Coord {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v: Result<Vec<i32>, _> = s.split(',').map(|t| t.trim().parse::<i32>()).collect();
        match v {
            Ok(v) if !v.is_empty() && v.len() <= MAX_DIM => Ok(Coord::new(&v)),
            _ => Err(format!("bad coordinate `{s}`")),
        }
    }
}

/// A finite set of cells kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Support {
    dim: usize,
    cells: Vec<Coord>,
}

impl Support {
    pub fn new(dim: usize, cells: impl IntoIterator<Item = Coord>) -> Self {
        let mut cells: Vec<Coord> = cells.into_iter().collect();
        for c in &cells {
            assert_eq!(c.dim(), dim, "cell {c} has wrong dimension");
        }
        cells.sort_unstable();
        cells.dedup();
        Support { dim, cells }
    }

    pub fn empty(dim: usize) -> Self {
        Support { dim, cells: Vec::new() }
    }

    /// The product of closed intervals `[lo_i, hi_i]`.
    pub fn rect(lo: &[i32], hi: &[i32]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let d = lo.len();
        let mut cells = Vec::new();
        if lo.iter().zip(hi).all(|(a, b)| a <= b) {
            let mut cur = lo.to_vec();
            loop {
                cells.push(Coord::new(&cur));
                let mut axis = d;
                loop {
                    if axis == 0 {
                        return Support { dim: d, cells };
                    }
                    axis -= 1;
                    if cur[axis] < hi[axis] {
                        cur[axis] += 1;
                        for a in axis + 1..d {
                            cur[a] = lo[a];
                        }
                        break;
                    }
                }
            }
        }
        Support { dim: d, cells }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Coord> {
        self.cells.iter()
    }

    pub fn index_of(&self, c: &Coord) -> Option<usize> {
        self.cells.binary_search(c).ok()
    }

    pub fn contains(&self, c: &Coord) -> bool {
        self.index_of(c).is_some()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }

    pub fn translate(&self, v: Coord) -> Support {
        // translation preserves lexicographic order
        Support { dim: self.dim, cells: self.cells.iter().map(|&c| c + v).collect() }
    }

    /// Minkowski sum with `box(d, m)`.
    pub fn dilate(&self, m: u32) -> Support {
        if m == 0 {
            return self.clone();
        }
        let b = box_support(self.dim, m);
        Support::new(self.dim, self.cells.iter().flat_map(|&c| b.iter().map(move |&o| c + o)))
    }

    /// Minkowski sum with an arbitrary box given per axis.
    pub fn dilate_aniso(&self, radius: &[u32]) -> Support {
        let lo: Vec<i32> = radius.iter().map(|&r| -(r as i32)).collect();
        let hi: Vec<i32> = radius.iter().map(|&r| r as i32).collect();
        let b = Support::rect(&lo, &hi);
        Support::new(self.dim, self.cells.iter().flat_map(|&c| b.iter().map(move |&o| c + o)))
    }

    pub fn union(&self, other: &Support) -> Support {
        Support::new(self.dim, self.cells.iter().chain(other.cells.iter()).copied())
    }

    pub fn difference(&self, other: &Support) -> Support {
        Support {
            dim: self.dim,
            cells: self.cells.iter().filter(|c| !other.contains(c)).copied().collect(),
        }
    }

    /// Componentwise min and max, or `None` when empty.
    pub fn bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let first = self.cells.first()?;
        let mut lo = first.entries().to_vec();
        let mut hi = lo.clone();
        for c in &self.cells {
            for i in 0..self.dim {
                lo[i] = lo[i].min(c[i]);
                hi[i] = hi[i].max(c[i]);
            }
        }
        Some((lo, hi))
    }
}

impl<'a> IntoIterator for &'a Support {
    type Item = &'a Coord;
    type IntoIter = std::slice::Iter<'a, Coord>;
    fn into_iter(self) -> Self::IntoIter {
        self.cells.iter()
    }
}

/// The Følner box `[-n, n]^d`.
pub fn box_support(d: usize, n: u32) -> Support {
    let n = n as i32;
    Support::rect(&vec![-n; d], &vec![n; d])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_sizes() {
        assert_eq!(box_support(1, 0).cells(), &[Coord::new(&[0])]);
        assert_eq!(box_support(2, 1).len(), 9);
        assert_eq!(box_support(3, 2).len(), 125);
        let b = box_support(2, 1);
        assert!(b.cells().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.cells()[0], Coord::new(&[-1, -1]));
    }

    #[test]
    fn dilate_is_box_sum() {
        let s = Support::new(1, [Coord::new(&[0]), Coord::new(&[5])]);
        assert_eq!(s.dilate(1).len(), 6);
        assert_eq!(box_support(2, 1).dilate(2), box_support(2, 3));
    }

    #[test]
    fn coord_parse_and_wrap() {
        let c: Coord = "-1,7".parse().unwrap();
        assert_eq!(c.wrap(&[3, 5]), Coord::new(&[2, 2]));
        assert_eq!(c.to_string(), "-1,7");
        assert_eq!(c.linf(), 7);
        assert_eq!(c.l1(), 8);
    }
}
