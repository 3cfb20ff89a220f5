//! Braidzels: two disks joined by `k` twisted bands that follow the strands
//! of a braid. A pretzel surface is the braidzel with trivial braiding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid_core::{parse_braid, BraidError, BraidParseError, BraidWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("a surface needs at least one band")]
    NoBands,
    #[error("braid has {strands} strands but {twists} twists were given")]
    LengthMismatch { strands: usize, twists: usize },
    #[error("band subset must be nonempty")]
    EmptySubset,
    #[error("band {band} is out of range for {bands} bands")]
    BandOutOfRange { band: usize, bands: usize },
    #[error("surface is not orientable: twists {first} and {second} differ in parity")]
    NonOrientable { first: usize, second: usize },
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("braid field: {0}")]
    BraidText(#[from] BraidParseError),
}

/// P(β, t): band `x` (1-based start position) carries `twists[x - 1]`
/// counterclockwise half-twists and follows the strand of β starting at `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Braidzel {
    braid: BraidWord,
    twists: Vec<i64>,
}

impl Braidzel {
    pub fn new(braid: BraidWord, twists: Vec<i64>) -> Result<Self, SurfaceError> {
        if braid.strands() != twists.len() {
            return Err(SurfaceError::LengthMismatch { strands: braid.strands(), twists: twists.len() });
        }
        Ok(Braidzel { braid, twists })
    }

    pub fn pretzel(twists: &[i64]) -> Result<Self, SurfaceError> {
        if twists.is_empty() {
            return Err(SurfaceError::NoBands);
        }
        Ok(Braidzel { braid: BraidWord::identity(twists.len())?, twists: twists.to_vec() })
    }

    /// P(-t_k, …, -t_1), the mirror image of P(t_1, …, t_k).
    pub fn mirror_pretzel(twists: &[i64]) -> Result<Self, SurfaceError> {
        Self::pretzel(&mirror_twists(twists))
    }

    pub fn k(&self) -> usize {
        self.twists.len()
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn into_parts(self) -> (BraidWord, Vec<i64>) {
        (self.braid, self.twists)
    }

    /// Literally trivial braid word.
    pub fn is_literal_pretzel(&self) -> bool {
        self.braid.is_empty()
    }

    /// Braid represents the identity, so the surface is a pretzel up to isotopy.
    pub fn is_pretzel(&self) -> bool {
        self.braid.represents_identity()
    }

    pub fn is_orientable(&self) -> bool {
        self.orientability_violation().is_none()
    }

    pub fn orientability_violation(&self) -> Option<(usize, usize)> {
        let first = self.twists[0].rem_euclid(2);
        self.twists.iter().position(|t| t.rem_euclid(2) != first).map(|j| (1, j + 1))
    }

    pub fn require_orientable(&self) -> Result<(), SurfaceError> {
        match self.orientability_violation() {
            Some((first, second)) => Err(SurfaceError::NonOrientable { first, second }),
            None => Ok(()),
        }
    }

    /// Two 0-handles and `k` 1-handles.
    pub fn euler_characteristic(&self) -> i64 {
        2 - self.k() as i64
    }

    /// Number of boundary circles.
    ///
    /// Each band has a left and a right edge with endpoints on both disks.
    /// An odd twist count exchanges the edges between the bottom and the top;
    /// braid crossings never do. Along each disk the boundary runs from the
    /// right edge of the band at position `q` to the left edge of the band at
    /// `q + 1`, and from the last band back around to the first.
    pub fn boundary_components(&self) -> usize {
        let k = self.k();
        let top = self.braid.permutation();
        // endpoint ids: 4x + {0: bottom L, 1: bottom R, 2: top L, 3: top R}
        let mut dsu = DisjointSets::new(4 * k);
        for (x, t) in self.twists.iter().enumerate() {
            if t.rem_euclid(2) == 0 {
                dsu.union(4 * x, 4 * x + 2);
                dsu.union(4 * x + 1, 4 * x + 3);
            } else {
                dsu.union(4 * x, 4 * x + 3);
                dsu.union(4 * x + 1, 4 * x + 2);
            }
        }
        let at_top = top.inverse();
        for q in 0..k {
            let next = (q + 1) % k;
            dsu.union(4 * q + 1, 4 * next);
            let here = at_top.as_zero_based()[q];
            let there = at_top.as_zero_based()[next];
            dsu.union(4 * here + 3, 4 * there + 2);
        }
        dsu.count()
    }

    pub fn profile(&self) -> SurfaceProfile {
        let euler = self.euler_characteristic();
        let boundary_components = self.boundary_components();
        let orientable = self.is_orientable();
        let genus = if orientable {
            let g2 = 2 - euler - boundary_components as i64;
            debug_assert!(g2 >= 0 && g2 % 2 == 0);
            Genus::Orientable(g2 / 2)
        } else {
            Genus::NonOrientable
        };
        SurfaceProfile { euler, orientable, boundary_components, genus }
    }

    /// P(β|_X′, t|_X′) for a set of 1-based band indices.
    pub fn sub_braidzel(&self, subset: &[usize]) -> Result<Braidzel, SurfaceError> {
        let mut bands = subset.to_vec();
        bands.sort_unstable();
        bands.dedup();
        if bands.is_empty() {
            return Err(SurfaceError::EmptySubset);
        }
        if let Some(&b) = bands.iter().find(|&&b| b == 0 || b > self.k()) {
            return Err(SurfaceError::BandOutOfRange { band: b, bands: self.k() });
        }
        let braid = self.braid.restrict(&bands)?;
        let twists = bands.iter().map(|&b| self.twists[b - 1]).collect();
        Braidzel::new(braid, twists)
    }

    pub fn to_record(&self) -> BraidzelRecord {
        BraidzelRecord { k: self.k(), braid: self.braid.to_string(), twists: self.twists.clone() }
    }
}

pub fn mirror_twists(twists: &[i64]) -> Vec<i64> {
    twists.iter().rev().map(|t| -t).collect()
}

/// Pretzel shorthand `P(3,-5,-7)` when the braid word is empty, the
/// structured record otherwise.
impl fmt::Display for Braidzel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_literal_pretzel() {
            f.write_str("P(")?;
            for (i, t) in self.twists.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        } else {
            let json = serde_json::to_string(&self.to_record()).map_err(|_| fmt::Error)?;
            f.write_str(&json)
        }
    }
}

impl fmt::Debug for Braidzel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Braidzel({:?}, {:?})", self.braid, self.twists)
    }
}

/// Structured surface record: `{ "k": 3, "braid": "s1 s2'", "twists": [3,-5,-7] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidzelRecord {
    pub k: usize,
    pub braid: String,
    pub twists: Vec<i64>,
}

impl TryFrom<&BraidzelRecord> for Braidzel {
    type Error = SurfaceError;

    fn try_from(r: &BraidzelRecord) -> Result<Self, Self::Error> {
        if r.k == 0 {
            return Err(SurfaceError::NoBands);
        }
        let braid = parse_braid(&r.braid, Some(r.k))?;
        Braidzel::new(braid, r.twists.clone())
    }
}

impl Serialize for Braidzel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Braidzel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BraidzelRecord::deserialize(d)?;
        Braidzel::try_from(&r).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genus {
    Orientable(i64),
    NonOrientable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceProfile {
    pub euler: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    pub genus: Genus,
}

struct DisjointSets {
    parent: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), sets: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }

    fn count(&self) -> usize {
        self.sets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[i64]) -> Braidzel {
        Braidzel::pretzel(t).unwrap()
    }

    #[test]
    fn pretzel_construction() {
        let s = p(&[3, -5, -7]);
        assert_eq!(s.k(), 3);
        assert!(s.braid().is_empty());
        assert_eq!(p(&[-1]).k(), 1);
        assert_eq!(Braidzel::pretzel(&[]), Err(SurfaceError::NoBands));
        let annulus = p(&[4, 4]).profile();
        assert_eq!((annulus.euler, annulus.boundary_components), (0, 2));
        assert!(Braidzel::new(BraidWord::identity(3).unwrap(), vec![1, 1]).is_err());
    }

    #[test]
    fn orientability() {
        assert!(p(&[3, -5, -7]).is_orientable());
        assert!(!p(&[1, 2]).is_orientable());
        assert!(p(&[0, -2, -2]).is_orientable());
        assert_eq!(p(&[1, 3, 4]).orientability_violation(), Some((1, 3)));
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(p(&[5]).euler_characteristic(), 1);
        assert_eq!(p(&[3, -5, -7]).euler_characteristic(), -1);
        assert_eq!(p(&[1, 2]).euler_characteristic(), 0);
    }

    #[test]
    fn boundary_small_cases() {
        assert_eq!(p(&[-1, -1, -1]).boundary_components(), 1);
        assert_eq!(p(&[0, 0]).boundary_components(), 2);
        assert_eq!(p(&[1, 2]).boundary_components(), 1);
        assert_eq!(p(&[0]).boundary_components(), 1);
        assert_eq!(p(&[7]).boundary_components(), 1);
        // k even bands: orientable even twists give k boundary circles
        assert_eq!(p(&[0, 0, 0]).boundary_components(), 3);
    }

    #[test]
    fn profiles() {
        let tre = p(&[-1, -1, -1]).profile();
        assert_eq!(tre, SurfaceProfile { euler: -1, orientable: true, boundary_components: 1, genus: Genus::Orientable(1) });
        for t in -3..=3 {
            let a = p(&[t, t]).profile();
            assert_eq!((a.euler, a.boundary_components, a.genus), (0, 2, Genus::Orientable(0)));
        }
        let five = p(&[1, 1, 1, 1, 1]).profile();
        assert_eq!((five.boundary_components, five.genus), (1, Genus::Orientable(2)));
        assert_eq!(p(&[1, 2]).profile().genus, Genus::NonOrientable);
    }

    #[test]
    fn sub_braidzels() {
        let s = p(&[3, -5, -7]);
        assert_eq!(s.sub_braidzel(&[1, 2, 3]).unwrap(), s);
        assert_eq!(s.sub_braidzel(&[3, 2]).unwrap(), p(&[-5, -7]));
        assert_eq!(s.sub_braidzel(&[]), Err(SurfaceError::EmptySubset));
        assert!(s.sub_braidzel(&[4]).is_err());

        let braid = BraidWord::from_signed(4, &[1, 2, -3, 2, 1, 1]).unwrap();
        let b = Braidzel::new(braid.clone(), vec![1, 3, 5, 7]).unwrap();
        for i in 1..=4 {
            for j in i + 1..=4 {
                let sub = b.sub_braidzel(&[i, j]).unwrap();
                let c = braid.crossing_count(i, j).unwrap();
                assert!(sub.braid().words_equal(&BraidWord::generator_power(2, 1, c).unwrap()).unwrap());
                assert_eq!(sub.twists(), &[b.twists()[i - 1], b.twists()[j - 1]]);
            }
        }
    }

    #[test]
    fn mirrors() {
        assert_eq!(Braidzel::mirror_pretzel(&[3, -5, -7]).unwrap(), p(&[7, 5, -3]));
        assert_eq!(Braidzel::mirror_pretzel(&[-1, -1, -1]).unwrap(), p(&[1, 1, 1]));
        assert_eq!(mirror_twists(&mirror_twists(&[2, 0, -4])), vec![2, 0, -4]);
    }

    #[test]
    fn text_forms() {
        assert_eq!(p(&[3, -5, -7]).to_string(), "P(3,-5,-7)");
        let b = Braidzel::new(BraidWord::from_signed(3, &[1, -2]).unwrap(), vec![3, -5, -7]).unwrap();
        assert_eq!(b.to_string(), r#"{"k":3,"braid":"s1 s2'","twists":[3,-5,-7]}"#);
        let back: Braidzel = serde_json::from_str(&b.to_string()).unwrap();
        assert_eq!(back, b);
    }
}
