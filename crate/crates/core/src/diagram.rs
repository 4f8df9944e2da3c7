//! Arc diagrams: oriented arcs carrying marked points, paired up by a matching.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;
use crate::half::HalfInt;

/// Global index of a marked point, starting at 1.
pub type Point = u8;

/// Index of a match-class (a pair of matched points), starting at 1.
pub type MatchClass = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcDiagram {
    arcs: Vec<Vec<Point>>,
    matching: Vec<MatchClass>,
    n_classes: u8,
    // (arc index, position on the arc) for every point, indexed by point - 1
    location: Vec<(usize, usize)>,
    elementary: Vec<ReebChord>,
}

/// A Reeb chord: an upward interval between two marked points on one arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReebChord {
    pub start: Point,
    pub end: Point,
}

impl ReebChord {
    pub const fn new(start: Point, end: Point) -> Self {
        ReebChord { start, end }
    }
}

impl fmt::Display for ReebChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}->a{}", self.start, self.end)
    }
}

impl ArcDiagram {
    /// Builds a diagram from the ordered point lists of each arc and the
    /// match-class of every point (`matching[p - 1]`).
    pub fn new(arcs: Vec<Vec<Point>>, matching: Vec<MatchClass>) -> Result<Self, DiagramError> {
        let n_points = matching.len();
        if n_points == 0 || n_points > 64 {
            return Err(DiagramError::PointCount(n_points));
        }
        let mut location = vec![(usize::MAX, usize::MAX); n_points];
        for (a, arc) in arcs.iter().enumerate() {
            for (i, &p) in arc.iter().enumerate() {
                let slot = (p as usize)
                    .checked_sub(1)
                    .and_then(|idx| location.get_mut(idx))
                    .ok_or(DiagramError::UnknownPoint(p))?;
                if slot.0 != usize::MAX {
                    return Err(DiagramError::RepeatedPoint(p));
                }
                *slot = (a, i);
            }
        }
        if let Some(idx) = location.iter().position(|l| l.0 == usize::MAX) {
            return Err(DiagramError::UnplacedPoint(idx as Point + 1));
        }
        let n_classes = matching.iter().copied().max().unwrap_or(0);
        if n_classes as usize > 15 {
            return Err(DiagramError::TooManyClasses(n_classes));
        }
        for c in 1..=n_classes {
            let count = matching.iter().filter(|&&m| m == c).count();
            if count != 2 {
                return Err(DiagramError::ClassSize { class: c, count });
            }
        }
        if matching.contains(&0) {
            return Err(DiagramError::ClassSize { class: 0, count: 1 });
        }
        let elementary = arcs.iter().flat_map(|arc| arc.windows(2).map(|w| ReebChord::new(w[0], w[1]))).collect();
        Ok(ArcDiagram { arcs, matching, n_classes, location, elementary })
    }

    pub fn n_points(&self) -> usize {
        self.matching.len()
    }

    pub fn n_classes(&self) -> u8 {
        self.n_classes
    }

    pub fn arcs(&self) -> &[Vec<Point>] {
        &self.arcs
    }

    pub fn class_of(&self, p: Point) -> MatchClass {
        self.matching[p as usize - 1]
    }

    /// The two points of a match-class, lower index first.
    pub fn class_points(&self, c: MatchClass) -> [Point; 2] {
        let mut it = (1..=self.n_points() as Point).filter(|&p| self.class_of(p) == c);
        let first = it.next().expect("match-class has two points");
        let second = it.next().expect("match-class has two points");
        [first, second]
    }

    pub fn arc_of(&self, p: Point) -> usize {
        self.location[p as usize - 1].0
    }

    pub fn position(&self, p: Point) -> usize {
        self.location[p as usize - 1].1
    }

    /// `true` when `p` and `q` sit on the same arc and `p` lies strictly below `q`.
    pub fn below(&self, p: Point, q: Point) -> bool {
        self.arc_of(p) == self.arc_of(q) && self.position(p) < self.position(q)
    }

    /// The intervals between consecutive points of an arc, numbered in arc order.
    pub fn elementary_chords(&self) -> &[ReebChord] {
        &self.elementary
    }

    /// Number of independent chord classes, i.e. the rank of H1(Z, a).
    pub fn chord_rank(&self) -> usize {
        self.elementary.len()
    }

    /// Every Reeb chord of the diagram, sorted.
    pub fn reeb_chords(&self) -> Vec<ReebChord> {
        let mut out = Vec::new();
        for arc in &self.arcs {
            for i in 0..arc.len() {
                for j in i + 1..arc.len() {
                    out.push(ReebChord::new(arc[i], arc[j]));
                }
            }
        }
        out.sort();
        out
    }

    pub fn check_chord(&self, chord: ReebChord) -> Result<(), DiagramError> {
        for p in [chord.start, chord.end] {
            if p == 0 || p as usize > self.n_points() {
                return Err(DiagramError::UnknownPoint(p));
            }
        }
        if self.below(chord.start, chord.end) {
            Ok(())
        } else {
            Err(DiagramError::NotAChord(chord))
        }
    }

    /// Resolves a chord label such as `"45"`: a run of consecutive elementary
    /// chord numbers on one arc.
    pub fn chord_by_label(&self, label: &str) -> Result<ReebChord, DiagramError> {
        let bad = || DiagramError::BadLabel(label.to_string());
        let digits: Vec<usize> =
            label.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_, _>>()?;
        let first = *digits.first().ok_or_else(bad)?;
        let mut chord = *self.elementary.get(first.wrapping_sub(1)).ok_or_else(bad)?;
        for pair in digits.windows(2) {
            if pair[1] != pair[0] + 1 {
                return Err(bad());
            }
            let next = *self.elementary.get(pair[1] - 1).ok_or_else(bad)?;
            if next.start != chord.end {
                return Err(bad());
            }
            chord.end = next.end;
        }
        Ok(chord)
    }

    /// The elementary-chord label of a Reeb chord, e.g. `"456"`.
    pub fn label_of(&self, chord: ReebChord) -> String {
        self.chord_class(chord)
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| (i + 1).to_string())
            .collect()
    }

    pub fn zero_class(&self) -> ChordClass {
        ChordClass(vec![0; self.chord_rank()])
    }

    pub fn elementary_class(&self, i: usize) -> ChordClass {
        let mut c = self.zero_class();
        c.0[i - 1] = 1;
        c
    }

    pub fn chord_class(&self, chord: ReebChord) -> ChordClass {
        let mut c = self.zero_class();
        for (i, e) in self.elementary.iter().enumerate() {
            if self.arc_of(e.start) == self.arc_of(chord.start)
                && self.position(e.start) >= self.position(chord.start)
                && self.position(e.end) <= self.position(chord.end)
            {
                c.0[i] = 1;
            }
        }
        c
    }

    /// The class of a labelled chord, e.g. `"456"` gives [ρ4]+[ρ5]+[ρ6].
    pub fn class_by_label(&self, label: &str) -> Result<ChordClass, DiagramError> {
        Ok(self.chord_class(self.chord_by_label(label)?))
    }

    /// Average multiplicity of the class on the two sides of `p`.
    pub fn avg_multiplicity(&self, p: Point, class: &ChordClass) -> HalfInt {
        let mut twice = 0;
        for (i, e) in self.elementary.iter().enumerate() {
            if e.start == p || e.end == p {
                twice += class.0[i];
            }
        }
        HalfInt::from_twice(twice)
    }

    /// Signed boundary as a 0-chain on points (index `p - 1`): end minus start.
    pub fn boundary(&self, class: &ChordClass) -> Vec<i64> {
        let mut out = vec![0; self.n_points()];
        for (i, e) in self.elementary.iter().enumerate() {
            out[e.end as usize - 1] += class.0[i];
            out[e.start as usize - 1] -= class.0[i];
        }
        out
    }

    /// Boundary pushed forward to match-classes (index `c - 1`).
    pub fn class_boundary(&self, class: &ChordClass) -> Vec<i64> {
        let mut out = vec![0; self.n_classes as usize];
        for (idx, v) in self.boundary(class).into_iter().enumerate() {
            out[self.matching[idx] as usize - 1] += v;
        }
        out
    }

    /// The four-arc, twelve-point diagram parametrizing the 4-punctured sphere
    /// around an elementary crossing.
    pub fn four_punctured_sphere() -> Self {
        ArcDiagram::new(
            vec![vec![1], vec![2, 3, 4, 5], vec![6, 7, 8, 9], vec![10, 11, 12]],
            vec![1, 2, 1, 3, 2, 4, 3, 5, 4, 6, 5, 6],
        )
        .expect("fixed diagram is valid")
    }
}

/// A class in H1(Z, a), in the basis of elementary chords.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChordClass(pub Vec<i64>);

impl ChordClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> ChordClass {
        ChordClass(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for ChordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}[r{}]", i + 1)?;
            } else {
                write!(f, "{sign}{mag}[r{}]", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &ChordClass {
    type Output = ChordClass;
    fn add(self, rhs: &ChordClass) -> ChordClass {
        ChordClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ChordClass {
    type Output = ChordClass;
    fn sub(self, rhs: &ChordClass) -> ChordClass {
        ChordClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ChordClass {
    type Output = ChordClass;
    fn neg(self) -> ChordClass {
        self.scale(-1)
    }
}

impl AddAssign<&ChordClass> for ChordClass {
    fn add_assign(&mut self, rhs: &ChordClass) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_diagram_shape() {
        let z = ArcDiagram::four_punctured_sphere();
        assert_eq!(z.n_points(), 12);
        assert_eq!(z.n_classes(), 6);
        assert_eq!(z.class_of(10), 6);
        assert_eq!(z.class_of(12), 6);
        assert_eq!(z.chord_rank(), 8);
        assert_eq!(z.reeb_chords().len(), 15);
        // elementary chords: none on Z1, 3 on Z2, 3 on Z3, 2 on Z4
        let per_arc: Vec<usize> =
            (0..4).map(|a| z.elementary_chords().iter().filter(|c| z.arc_of(c.start) == a).count()).collect();
        assert_eq!(per_arc, vec![0, 3, 3, 2]);
        assert_eq!(z.chord_by_label("7").unwrap(), ReebChord::new(10, 11));
    }

    #[test]
    fn chord_rank_matches_points_minus_arcs() {
        let z = ArcDiagram::four_punctured_sphere();
        let occupied_arcs = z.arcs().iter().filter(|a| !a.is_empty()).count();
        assert_eq!(z.chord_rank(), z.n_points() - occupied_arcs);
    }

    #[test]
    fn labels_round_trip() {
        let z = ArcDiagram::four_punctured_sphere();
        for label in ["1", "2", "3", "12", "23", "123", "4", "5", "6", "45", "56", "456", "7", "8", "78"] {
            let c = z.chord_by_label(label).unwrap();
            assert_eq!(z.label_of(c), label);
        }
        assert!(z.chord_by_label("34").is_err());
        assert!(z.chord_by_label("13").is_err());
        assert!(z.chord_by_label("9").is_err());
        assert!(z.chord_by_label("").is_err());
    }

    #[test]
    fn matching_must_pair_points() {
        let err = ArcDiagram::new(vec![vec![1, 2, 3]], vec![1, 1, 1]).unwrap_err();
        assert!(matches!(err, DiagramError::ClassSize { class: 1, count: 3 }));
        let err = ArcDiagram::new(vec![vec![1, 2], vec![2]], vec![1, 1]).unwrap_err();
        assert!(matches!(err, DiagramError::RepeatedPoint(2)));
    }

    #[test]
    fn boundary_of_elementary_chord() {
        let z = ArcDiagram::four_punctured_sphere();
        let b = z.boundary(&z.elementary_class(1));
        assert_eq!(b[2], 1);
        assert_eq!(b[1], -1);
        assert_eq!(b.iter().sum::<i64>(), 0);
    }
}
