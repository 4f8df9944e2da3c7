//! The strands algebra A(Z, k) over F2.
//!
//! A generator records the horizontally occupied match-classes and the moving
//! Reeb chords. Products and differentials are computed on the "big" strands
//! diagrams obtained by picking one point in every occupied class, then read
//! back through the canonical representative (horizontal strand at the lower
//! point of its class).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcDiagram, MatchClass, Point, ReebChord};
use crate::error::AlgebraError;

/// A set of match-classes, bit `c - 1` for class `c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSet(pub u16);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub fn single(c: MatchClass) -> Self {
        ClassSet(1 << (c - 1))
    }

    pub fn from_classes(classes: impl IntoIterator<Item = MatchClass>) -> Self {
        ClassSet(classes.into_iter().fold(0, |acc, c| acc | 1 << (c - 1)))
    }

    pub fn contains(self, c: MatchClass) -> bool {
        self.0 >> (c - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn classes(self) -> Vec<MatchClass> {
        (1..=16).filter(|&c| self.contains(c)).collect()
    }

    pub fn union(self, other: ClassSet) -> ClassSet {
        ClassSet(self.0 | other.0)
    }

    pub fn intersects(self, other: ClassSet) -> bool {
        self.0 & other.0 != 0
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes().iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// One strands diagram: horizontal pairs plus moving chords, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "GeneratorJson", try_from = "GeneratorJson")]
pub struct StrandsGenerator {
    pub occupied: ClassSet,
    pub moving: Vec<ReebChord>,
}

impl StrandsGenerator {
    pub fn new(occupied: ClassSet, mut moving: Vec<ReebChord>) -> Self {
        moving.sort();
        StrandsGenerator { occupied, moving }
    }

    pub fn idempotent(occupied: ClassSet) -> Self {
        StrandsGenerator { occupied, moving: Vec::new() }
    }

    pub fn is_idempotent(&self) -> bool {
        self.moving.is_empty()
    }

    pub fn strand_count(&self) -> usize {
        self.occupied.len() + self.moving.len()
    }
}

impl fmt::Display for StrandsGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.occupied)?;
        for c in &self.moving {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    occupied: Vec<MatchClass>,
    moving: Vec<[Point; 2]>,
}

impl From<StrandsGenerator> for GeneratorJson {
    fn from(g: StrandsGenerator) -> Self {
        GeneratorJson { occupied: g.occupied.classes(), moving: g.moving.iter().map(|c| [c.start, c.end]).collect() }
    }
}

impl TryFrom<GeneratorJson> for StrandsGenerator {
    type Error = String;
    fn try_from(j: GeneratorJson) -> Result<Self, String> {
        if let Some(c) = j.occupied.iter().find(|&&c| c == 0 || c > 16) {
            return Err(format!("match-class {c} out of range"));
        }
        Ok(StrandsGenerator::new(
            ClassSet::from_classes(j.occupied),
            j.moving.iter().map(|&[s, e]| ReebChord::new(s, e)).collect(),
        ))
    }
}

/// An F2 linear combination of generators; inserting a generator twice cancels it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement {
    terms: BTreeSet<StrandsGenerator>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_generator(g: StrandsGenerator) -> Self {
        let mut e = Self::zero();
        e.toggle(g);
        e
    }

    pub fn toggle(&mut self, g: StrandsGenerator) {
        if !self.terms.remove(&g) {
            self.terms.insert(g);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &StrandsGenerator> {
        self.terms.iter()
    }

    pub fn contains(&self, g: &StrandsGenerator) -> bool {
        self.terms.contains(g)
    }
}

impl FromIterator<StrandsGenerator> for AlgebraElement {
    fn from_iter<T: IntoIterator<Item = StrandsGenerator>>(iter: T) -> Self {
        let mut e = Self::zero();
        for g in iter {
            e.toggle(g);
        }
        e
    }
}

impl IntoIterator for AlgebraElement {
    type Item = StrandsGenerator;
    type IntoIter = std::collections::btree_set::IntoIter<StrandsGenerator>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl AddAssign<&AlgebraElement> for AlgebraElement {
    fn add_assign(&mut self, rhs: &AlgebraElement) {
        for g in &rhs.terms {
            self.toggle(g.clone());
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|g| format!("[{g}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type Strand = (Point, Point);

/// The summand A(Z, k) with precomputed point tables.
#[derive(Clone, Debug)]
pub struct StrandsAlgebra {
    diagram: ArcDiagram,
    k: usize,
    // indexed by point id; slot 0 unused
    arc: Vec<usize>,
    pos: Vec<usize>,
    class: Vec<MatchClass>,
    // the two points of each class, indexed by class id
    pair: Vec<[Point; 2]>,
}

impl StrandsAlgebra {
    pub fn new(diagram: ArcDiagram, k: usize) -> Self {
        let n = diagram.n_points();
        let mut arc = vec![0; n + 1];
        let mut pos = vec![0; n + 1];
        let mut class = vec![0; n + 1];
        for p in 1..=n as Point {
            arc[p as usize] = diagram.arc_of(p);
            pos[p as usize] = diagram.position(p);
            class[p as usize] = diagram.class_of(p);
        }
        let mut pair = vec![[0, 0]; diagram.n_classes() as usize + 1];
        for c in 1..=diagram.n_classes() {
            pair[c as usize] = diagram.class_points(c);
        }
        StrandsAlgebra { diagram, k, arc, pos, class, pair }
    }

    /// A(Z, 5) for the four-punctured-sphere diagram.
    pub fn skein() -> Self {
        StrandsAlgebra::new(ArcDiagram::four_punctured_sphere(), 5)
    }

    pub fn diagram(&self) -> &ArcDiagram {
        &self.diagram
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn all_classes(&self) -> ClassSet {
        ClassSet((1u16 << self.diagram.n_classes()) - 1)
    }

    pub fn left_idem(&self, g: &StrandsGenerator) -> ClassSet {
        g.moving.iter().fold(g.occupied, |acc, c| acc.union(ClassSet::single(self.class[c.start as usize])))
    }

    pub fn right_idem(&self, g: &StrandsGenerator) -> ClassSet {
        g.moving.iter().fold(g.occupied, |acc, c| acc.union(ClassSet::single(self.class[c.end as usize])))
    }

    /// The idempotent whose horizontal strands fill every class except `i`.
    pub fn occ(&self, i: MatchClass) -> StrandsGenerator {
        let all = self.all_classes();
        StrandsGenerator::idempotent(ClassSet(all.0 & !ClassSet::single(i).0))
    }

    /// Name of a k = n-1 idempotent by its missing class.
    pub fn occ_index(&self, idem: ClassSet) -> Option<MatchClass> {
        let missing = ClassSet(self.all_classes().0 & !idem.0);
        (missing.len() == 1).then(|| missing.classes()[0])
    }

    pub fn check_generator(&self, g: &StrandsGenerator) -> Result<(), AlgebraError> {
        if g.occupied.0 & !self.all_classes().0 != 0 {
            let c = (1..=16).find(|&c| g.occupied.contains(c) && c > self.diagram.n_classes());
            return Err(AlgebraError::UnknownClass(c.unwrap_or(0)));
        }
        let mut starts = ClassSet::EMPTY;
        let mut ends = ClassSet::EMPTY;
        for &chord in &g.moving {
            self.diagram.check_chord(chord)?;
            let (cs, ce) = (self.class[chord.start as usize], self.class[chord.end as usize]);
            if starts.contains(cs) || g.occupied.contains(cs) {
                return Err(AlgebraError::ClassReused(cs));
            }
            if ends.contains(ce) || g.occupied.contains(ce) {
                return Err(AlgebraError::ClassReused(ce));
            }
            starts = starts.union(ClassSet::single(cs));
            ends = ends.union(ClassSet::single(ce));
        }
        if g.strand_count() != self.k {
            return Err(AlgebraError::WrongSummand { expected: self.k, found: g.strand_count() });
        }
        Ok(())
    }

    pub fn check_element(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        a.iter().try_for_each(|g| self.check_generator(g))
    }

    /// One minimal idempotent per k-subset of match-classes.
    pub fn idempotents(&self) -> Vec<StrandsGenerator> {
        let n = self.diagram.n_classes() as u32;
        (0u16..1 << n)
            .filter(|m| m.count_ones() as usize == self.k)
            .map(|m| StrandsGenerator::idempotent(ClassSet(m)))
            .collect()
    }

    /// The unit: the sum of all idempotents of the summand.
    pub fn unit(&self) -> AlgebraElement {
        self.idempotents().into_iter().collect()
    }

    /// a_k(ρ): the sum over all completions of the chord set.
    pub fn associated_element(&self, chords: &[ReebChord]) -> Result<AlgebraElement, AlgebraError> {
        let mut used = ClassSet::EMPTY;
        let mut starts = ClassSet::EMPTY;
        let mut ends = ClassSet::EMPTY;
        for &chord in chords {
            self.diagram.check_chord(chord)?;
            let (cs, ce) = (self.class[chord.start as usize], self.class[chord.end as usize]);
            if starts.contains(cs) || ends.contains(ce) {
                return Ok(AlgebraElement::zero());
            }
            starts = starts.union(ClassSet::single(cs));
            ends = ends.union(ClassSet::single(ce));
            used = used.union(ClassSet::single(cs)).union(ClassSet::single(ce));
        }
        if chords.len() > self.k {
            return Ok(AlgebraElement::zero());
        }
        let free = ClassSet(self.all_classes().0 & !used.0);
        let need = self.k - chords.len();
        Ok(subsets_of(free, need).into_iter().map(|s| StrandsGenerator::new(s, chords.to_vec())).collect())
    }

    /// The element `(j1, …, jl)`: a product of single-chord associated elements.
    pub fn chord_word<S: AsRef<str>>(&self, labels: &[S]) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.unit();
        for label in labels {
            let chord = self.diagram.chord_by_label(label.as_ref())?;
            let factor = self.associated_element(&[chord])?;
            acc = self.mul_unchecked(&acc, &factor);
        }
        Ok(acc)
    }

    /// Parses `"I"` or a comma-separated word such as `"4,6,7,8,5"`, with or
    /// without parentheses.
    pub fn parse_word(&self, text: &str) -> Result<AlgebraElement, AlgebraError> {
        let t = text.trim();
        if t == "I" || t == "()" {
            return Ok(self.unit());
        }
        let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
        let labels: Vec<&str> = inner.split(',').map(str::trim).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(AlgebraError::BadWord(text.to_string()));
        }
        self.chord_word(&labels)
    }

    /// Product with operand validation.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    /// Product of elements already known to belong to this summand.
    pub fn mul_unchecked(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for g in a.iter() {
            for h in b.iter() {
                out += &self.mul_gens(g, h);
            }
        }
        out
    }

    pub fn mul_gens(&self, g: &StrandsGenerator, h: &StrandsGenerator) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        if self.right_idem(g) != self.left_idem(h) {
            return out;
        }
        for left in self.expansions(g) {
            let Some(right) = self.forced_partner(&left, h) else { continue };
            let Some(composite) = self.concatenate(&left, &right) else { continue };
            if self.inv(&left) + self.inv(&right) != self.inv(&composite) {
                continue;
            }
            if let Some(gen) = self.canonical(&composite) {
                out.toggle(gen);
            }
        }
        out
    }

    pub fn diff(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for g in a.iter() {
            out += &self.diff_gen(g);
        }
        out
    }

    pub fn diff_gen(&self, g: &StrandsGenerator) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for strands in self.expansions(g) {
            let base = self.inv(&strands);
            for i in 0..strands.len() {
                for j in 0..strands.len() {
                    if !self.crosses(strands[i], strands[j]) || strands[i].0 > strands[j].0 {
                        continue;
                    }
                    let mut resolved = strands.clone();
                    resolved[i].1 = strands[j].1;
                    resolved[j].1 = strands[i].1;
                    if self.inv(&resolved) + 1 != base {
                        continue;
                    }
                    if let Some(gen) = self.canonical(&resolved) {
                        out.toggle(gen);
                    }
                }
            }
        }
        out
    }

    /// Every generator of the summand, sorted.
    pub fn enumerate_basis(&self) -> Vec<StrandsGenerator> {
        let chords = self.diagram.reeb_chords();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.extend_basis(&chords, 0, &mut chosen, ClassSet::EMPTY, ClassSet::EMPTY, &mut out);
        out.sort();
        out
    }

    fn extend_basis(
        &self,
        chords: &[ReebChord],
        from: usize,
        chosen: &mut Vec<ReebChord>,
        starts: ClassSet,
        ends: ClassSet,
        out: &mut Vec<StrandsGenerator>,
    ) {
        if chosen.len() <= self.k {
            let free = ClassSet(self.all_classes().0 & !(starts.0 | ends.0));
            for s in subsets_of(free, self.k - chosen.len()) {
                out.push(StrandsGenerator::new(s, chosen.clone()));
            }
        }
        if chosen.len() == self.k {
            return;
        }
        for idx in from..chords.len() {
            let c = chords[idx];
            let (cs, ce) = (self.class[c.start as usize], self.class[c.end as usize]);
            if starts.contains(cs) || ends.contains(ce) {
                continue;
            }
            chosen.push(c);
            self.extend_basis(
                chords,
                idx + 1,
                chosen,
                starts.union(ClassSet::single(cs)),
                ends.union(ClassSet::single(ce)),
                out,
            );
            chosen.pop();
        }
    }

    /// The 2^|occupied| strand diagrams of a generator, one per choice of
    /// horizontal points.
    pub fn expansions(&self, g: &StrandsGenerator) -> Vec<Vec<Strand>> {
        let classes = g.occupied.classes();
        let mut out = Vec::with_capacity(1 << classes.len());
        for choice in 0u32..1 << classes.len() {
            let mut strands: Vec<Strand> = g.moving.iter().map(|c| (c.start, c.end)).collect();
            for (bit, &c) in classes.iter().enumerate() {
                let p = self.pair[c as usize][(choice >> bit & 1) as usize];
                strands.push((p, p));
            }
            out.push(strands);
        }
        out
    }

    /// The unique expansion of `h` whose start points equal the end points of `left`.
    fn forced_partner(&self, left: &[Strand], h: &StrandsGenerator) -> Option<Vec<Strand>> {
        let mut strands: Vec<Strand> = Vec::with_capacity(left.len());
        for c in &h.moving {
            if !left.iter().any(|s| s.1 == c.start) {
                return None;
            }
            strands.push((c.start, c.end));
        }
        for c in h.occupied.classes() {
            let p = left.iter().map(|s| s.1).find(|&e| self.class[e as usize] == c)?;
            strands.push((p, p));
        }
        Some(strands)
    }

    fn concatenate(&self, left: &[Strand], right: &[Strand]) -> Option<Vec<Strand>> {
        right.iter().map(|&(t, u)| left.iter().find(|s| s.1 == t).map(|&(s, _)| (s, u))).collect()
    }

    fn crosses(&self, a: Strand, b: Strand) -> bool {
        self.arc[a.0 as usize] == self.arc[b.0 as usize]
            && (self.pos[a.0 as usize] < self.pos[b.0 as usize]) != (self.pos[a.1 as usize] < self.pos[b.1 as usize])
    }

    /// Crossing count of a strands diagram, horizontal strands included.
    pub fn inv(&self, strands: &[Strand]) -> usize {
        let mut n = 0;
        for i in 0..strands.len() {
            for j in i + 1..strands.len() {
                if self.crosses(strands[i], strands[j]) {
                    n += 1;
                }
            }
        }
        n
    }

    fn canonical(&self, strands: &[Strand]) -> Option<StrandsGenerator> {
        let mut occupied = ClassSet::EMPTY;
        let mut moving = Vec::new();
        for &(s, t) in strands {
            if s == t {
                let c = self.class[s as usize];
                if self.pair[c as usize][0] != s {
                    return None;
                }
                occupied = occupied.union(ClassSet::single(c));
            } else {
                moving.push(ReebChord::new(s, t));
            }
        }
        Some(StrandsGenerator::new(occupied, moving))
    }

    /// Crossing count of a generator (any expansion gives the same value).
    pub fn inv_generator(&self, g: &StrandsGenerator) -> usize {
        self.inv(&self.expansions(g)[0])
    }

    /// Renders a generator in chord-label form, e.g. `I3·{ρ45, ρ6}`.
    pub fn describe(&self, g: &StrandsGenerator) -> String {
        let idem = match self.occ_index(self.left_idem(g)) {
            Some(i) => format!("I{i}"),
            None => format!("I{}", self.left_idem(g)),
        };
        if g.moving.is_empty() {
            return idem;
        }
        let chords: Vec<String> = g.moving.iter().map(|&c| format!("r{}", self.diagram.label_of(c))).collect();
        format!("{idem}.{{{}}}", chords.join(","))
    }

    pub fn describe_element(&self, a: &AlgebraElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.iter().map(|g| self.describe(g)).collect::<Vec<_>>().join(" + ")
    }
}

/// All subsets of `set` of the given size, in increasing bitmask order.
fn subsets_of(set: ClassSet, size: usize) -> Vec<ClassSet> {
    let mut out = Vec::new();
    let mut sub = set.0;
    // enumerate submasks, then sort for determinism
    loop {
        if sub.count_ones() as usize == size {
            out.push(ClassSet(sub));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & set.0;
    }
    out.sort();
    out
}
