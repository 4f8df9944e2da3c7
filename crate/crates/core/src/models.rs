//! The transcribed skein data, from which every fixture is built.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{ClassSet, StrandsAlgebra};
use crate::dmod::{DMorphism, GradedAssignment, TermSpec, TypeDStructure};
use crate::error::{GradingError, ModuleError};
use crate::grading::{GradingElement, GradingGroup, RefinedBasis, RefinementData};
use crate::half::{HalfInt, Quarter};
use crate::lattice::{quotient_invariants, AbelianLattice, GroupInvariants};

/// One of the three tangles, with cyclic successor 1 → ∞ → 0 → 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkeinIndex {
    One,
    Infty,
    Zero,
}

impl SkeinIndex {
    pub const ALL: [SkeinIndex; 3] = [SkeinIndex::One, SkeinIndex::Infty, SkeinIndex::Zero];

    pub fn succ(self) -> SkeinIndex {
        match self {
            SkeinIndex::One => SkeinIndex::Infty,
            SkeinIndex::Infty => SkeinIndex::Zero,
            SkeinIndex::Zero => SkeinIndex::One,
        }
    }

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn tag(self) -> &'static str {
        match self {
            SkeinIndex::One => "1",
            SkeinIndex::Infty => "infty",
            SkeinIndex::Zero => "0",
        }
    }
}

impl fmt::Display for SkeinIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SkeinIndex {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(SkeinIndex::One),
            "infty" | "inf" | "∞" => Ok(SkeinIndex::Infty),
            "0" => Ok(SkeinIndex::Zero),
            _ => Err(format!("unknown skein index {s:?} (expected 1, infty or 0)")),
        }
    }
}

/// A transcribed term: `from ↦ word ⊗ to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub from: &'static str,
    pub word: &'static str,
    pub to: &'static str,
}

const fn row(from: &'static str, word: &'static str, to: &'static str) -> Row {
    Row { from, word, to }
}

/// Which table a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Delta(SkeinIndex),
    /// Map f_{k,i}.
    Map(SkeinIndex, u8),
    /// Homotopy φ_{k,ij}, with `ij` encoded as 10 i + j.
    Homotopy(SkeinIndex, u8),
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table::Delta(k) => write!(f, "delta:{k}"),
            Table::Map(k, i) => write!(f, "f{k},{i}"),
            Table::Homotopy(k, ij) => write!(f, "phi{k},{ij:02}"),
        }
    }
}

/// The data exactly as displayed, before any algebra is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcription {
    pub generators: Vec<(SkeinIndex, &'static str, u8)>,
    pub rows: Vec<(Table, Row)>,
    /// (occupied-arc index, doubled Maslov, chord labels) for r(I_occ(i)).
    pub refinement: Vec<(u8, i64, Vec<&'static str>)>,
    pub gradings: Vec<(SkeinIndex, &'static str, [i64; 4])>,
    pub stabilizers: Vec<(SkeinIndex, [i64; 4])>,
}

impl Transcription {
    pub fn standard() -> Self {
        use SkeinIndex::{Infty, One, Zero};
        let generators =
            vec![(One, "x", 3), (Infty, "y1", 5), (Infty, "y2", 3), (Infty, "y3", 1), (Zero, "z1", 5), (Zero, "z2", 1)];
        let mut rows = Vec::new();
        let mut add = |t: Table, rs: &[Row]| rows.extend(rs.iter().map(|r| (t, r.clone())));
        add(Table::Delta(One), &[row("x", "4,6,7,8,5", "x")]);
        add(
            Table::Delta(Infty),
            &[row("y1", "5", "y2"), row("y1", "7,8,5,12,3", "y2"), row("y1", "7,8,5,2", "y3"), row("y3", "1,3", "y2")],
        );
        add(
            Table::Delta(Zero),
            &[
                row("z1", "5,12,3,4,6", "z1"),
                row("z1", "5,2", "z2"),
                row("z1", "5,12,3,4,56,2", "z2"),
                row("z2", "1,3,4,6", "z1"),
                row("z2", "1,3,4,56,2", "z2"),
            ],
        );
        add(
            Table::Map(One, 0),
            &[row("x", "4,6", "y1"), row("x", "12,3", "y2"), row("x", "4,56", "y2"), row("x", "2", "y3")],
        );
        add(Table::Map(One, 1), &[row("x", "4,6,7,8", "y1"), row("x", "I", "y2")]);
        add(
            Table::Map(Infty, 0),
            &[
                row("y1", "45,6", "z1"),
                row("y1", "7,8", "z1"),
                row("y2", "4,6", "z1"),
                row("y2", "4,56,2", "z2"),
                row("y3", "I", "z2"),
            ],
        );
        add(
            Table::Map(Infty, 1),
            &[
                row("y1", "I", "z1"),
                row("y2", "12,3,4,6", "z1"),
                row("y2", "2", "z2"),
                row("y2", "12,3,4,56,2", "z2"),
                row("y3", "1,23", "z2"),
            ],
        );
        add(
            Table::Map(Zero, 0),
            &[
                row("z1", "5", "x"),
                row("z1", "5,12,3,4,56", "x"),
                row("z1", "45,6,7,8,5", "x"),
                row("z2", "1,3,4,56", "x"),
            ],
        );
        add(Table::Map(Zero, 1), &[row("z1", "5,12,3", "x"), row("z1", "7,8,5", "x"), row("z2", "1,3", "x")]);
        add(Table::Homotopy(Infty, 0), &[row("y2", "4,56", "x")]);
        add(Table::Homotopy(Infty, 10), &[row("y2", "I", "x")]);
        add(Table::Homotopy(Infty, 11), &[row("y2", "12,3", "x")]);
        add(Table::Homotopy(Zero, 0), &[row("z1", "45,6", "y1")]);
        add(Table::Homotopy(Zero, 1), &[row("z1", "I", "y1")]);
        add(Table::Homotopy(Zero, 11), &[row("z1", "7,8", "y1"), row("z2", "I", "y3")]);
        add(Table::Homotopy(Zero, 10), &[row("z2", "1,23", "y3")]);
        let refinement = vec![
            (1, -1, vec!["2", "5", "8"]),
            (2, -1, vec!["1", "2", "5", "8"]),
            (3, 0, vec!["5", "8"]),
            (4, 0, vec!["4", "5", "8"]),
            (5, -1, vec!["8"]),
            (6, 0, vec![]),
        ];
        let gradings = vec![
            (One, "x", [0, 0, 0, 0]),
            (Infty, "y1", [0, 0, 0, 1]),
            (Infty, "y2", [0, -1, 0, 0]),
            (Infty, "y3", [0, 0, 0, 0]),
            (Zero, "z1", [0, 0, 0, 0]),
            (Zero, "z2", [0, 0, 0, 0]),
        ];
        let stabilizers = vec![(One, [0, 0, -1, -1]), (Infty, [0, -1, 0, -1]), (Zero, [0, -1, -1, 0])];
        Transcription { generators, rows, refinement, gradings, stabilizers }
    }

    /// Every row position, in table order, as candidates for deletion.
    pub fn row_ids(&self) -> Vec<String> {
        let mut seen: BTreeMap<Table, usize> = BTreeMap::new();
        self.rows
            .iter()
            .map(|(t, r)| {
                let n = seen.entry(*t).or_insert(0);
                *n += 1;
                format!("{t}:{}:{}#{}", r.from, r.word, n)
            })
            .collect()
    }

    pub fn without_row(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.rows.remove(index);
        out
    }
}

/// A seeded fault in the transcription.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    DeleteRow(usize),
    /// Replaces r(I_occ(i)) by the given (doubled Maslov, labels).
    Refinement(u8, i64, Vec<&'static str>),
    /// Replaces the grading coordinates of one generator.
    Grading(&'static str, [i64; 4]),
}

impl Mutation {
    pub fn apply(&self, t: &Transcription) -> Transcription {
        let mut out = t.clone();
        match self {
            Mutation::DeleteRow(i) => out = t.without_row(*i),
            Mutation::Refinement(i, m2, labels) => {
                for entry in out.refinement.iter_mut().filter(|e| e.0 == *i) {
                    *entry = (*i, *m2, labels.clone());
                }
            }
            Mutation::Grading(name, coords) => {
                for entry in out.gradings.iter_mut().filter(|e| e.1 == *name) {
                    entry.2 = *coords;
                }
            }
        }
        out
    }
}

/// The standard catalogue: every single-row deletion, a wrong r(I_occ(5)),
/// and a wrong grading of y1.
pub fn mutation_catalogue(t: &Transcription) -> Vec<(String, Mutation)> {
    let mut out: Vec<(String, Mutation)> =
        t.row_ids().into_iter().enumerate().map(|(i, id)| (format!("delete:{id}"), Mutation::DeleteRow(i))).collect();
    out.push(("refinement:occ5".into(), Mutation::Refinement(5, -1, vec!["7"])));
    out.push(("grading:y1".into(), Mutation::Grading("y1", [1, 0, 0, 1])));
    out
}

/// Everything needed to run the checks, built from a transcription.
#[derive(Clone, Debug)]
pub struct SkeinFixtures {
    pub alg: StrandsAlgebra,
    pub basis: RefinedBasis,
    pub refinement: Result<RefinementData, GradingError>,
    modules: [Arc<TypeDStructure>; 3],
    map_parts: BTreeMap<(SkeinIndex, u8), DMorphism>,
    homotopy_parts: BTreeMap<(SkeinIndex, u8), DMorphism>,
    gradings: [GradedAssignment; 3],
}

impl SkeinFixtures {
    pub fn standard() -> Self {
        Self::build(&Transcription::standard()).expect("transcribed data is consistent")
    }

    pub fn build(t: &Transcription) -> Result<Self, ModuleError> {
        let alg = StrandsAlgebra::skein();
        let basis = RefinedBasis::skein();
        let group = basis.group().clone();
        let terms = |table: Table| -> Result<Vec<TermSpec>, ModuleError> {
            t.rows
                .iter()
                .filter(|(tb, _)| *tb == table)
                .map(|(_, r)| {
                    Ok(TermSpec { from: r.from.to_string(), coef: alg.parse_word(r.word)?, to: r.to.to_string() })
                })
                .collect()
        };
        let mut modules = Vec::new();
        for k in SkeinIndex::ALL {
            let gens: Vec<(String, ClassSet)> =
                t.generators.iter().filter(|g| g.0 == k).map(|g| (g.1.to_string(), alg.occ(g.2).occupied)).collect();
            modules.push(Arc::new(TypeDStructure::new(&alg, gens, &terms(Table::Delta(k))?)?));
        }
        let modules: [Arc<TypeDStructure>; 3] = modules.try_into().expect("three modules");
        let mut map_parts = BTreeMap::new();
        let mut homotopy_parts = BTreeMap::new();
        for k in SkeinIndex::ALL {
            let (src, mid, dst) = (&modules[k.slot()], &modules[k.succ().slot()], &modules[k.succ().succ().slot()]);
            for i in [0, 1] {
                let f = DMorphism::new(&alg, src.clone(), mid.clone(), &terms(Table::Map(k, i))?)?;
                map_parts.insert((k, i), f);
            }
            for ij in [0, 1, 10, 11] {
                let h = DMorphism::new(&alg, src.clone(), dst.clone(), &terms(Table::Homotopy(k, ij))?)?;
                homotopy_parts.insert((k, ij), h);
            }
        }
        let refinement = refinement_from(&group, &alg, &t.refinement);
        let gradings = SkeinIndex::ALL.map(|k| {
            let stab = t.stabilizers.iter().filter(|s| s.0 == k).map(|s| s.1.to_vec()).collect();
            GradedAssignment {
                stabilizer: AbelianLattice::new(4, stab),
                grades: t.gradings.iter().filter(|g| g.0 == k).map(|g| (g.1.to_string(), g.2.to_vec())).collect(),
            }
        });
        Ok(SkeinFixtures { alg, basis, refinement, modules, map_parts, homotopy_parts, gradings })
    }

    pub fn group(&self) -> &GradingGroup {
        self.basis.group()
    }

    pub fn bsd(&self, k: SkeinIndex) -> &Arc<TypeDStructure> {
        &self.modules[k.slot()]
    }

    pub fn skein_map_part(&self, k: SkeinIndex, i: u8) -> &DMorphism {
        &self.map_parts[&(k, i)]
    }

    pub fn skein_map(&self, k: SkeinIndex) -> DMorphism {
        self.map_parts[&(k, 0)].add(&self.map_parts[&(k, 1)]).expect("parts share shape")
    }

    pub fn skein_homotopy_part(&self, k: SkeinIndex, ij: u8) -> &DMorphism {
        &self.homotopy_parts[&(k, ij)]
    }

    pub fn skein_homotopy(&self, k: SkeinIndex) -> DMorphism {
        [0, 1, 10, 11]
            .iter()
            .map(|ij| &self.homotopy_parts[&(k, *ij)])
            .try_fold(DMorphism::zero(self.bsd(k).clone(), self.bsd(k.succ().succ()).clone()), |acc, h| acc.add(h))
            .expect("parts share shape")
    }

    pub fn kappa(&self, k: SkeinIndex) -> DMorphism {
        DMorphism::zero(self.bsd(k).clone(), self.bsd(k).clone())
    }

    pub fn gradings(&self, k: SkeinIndex) -> &GradedAssignment {
        &self.gradings[k.slot()]
    }

    pub fn stabilizer(&self, k: SkeinIndex) -> &AbelianLattice {
        &self.gradings[k.slot()].stabilizer
    }
}

fn refinement_from(
    group: &GradingGroup,
    alg: &StrandsAlgebra,
    data: &[(u8, i64, Vec<&'static str>)],
) -> Result<RefinementData, GradingError> {
    let z = group.diagram();
    let mut assignment = BTreeMap::new();
    for (i, m2, labels) in data {
        let mut h = z.zero_class();
        for l in labels {
            h += &z.class_by_label(l).map_err(|e| GradingError::Refinement(e.to_string()))?;
        }
        assignment.insert(alg.occ(*i).occupied, group.element(HalfInt::from_twice(*m2), h)?);
    }
    RefinementData::new(group, alg.occ(6).occupied, assignment)
}

/// The transcribed refinement data, unwrapped.
pub fn refinement() -> RefinementData {
    SkeinFixtures::standard().refinement.expect("transcribed refinement data is valid")
}

/// A row of the refined algebra-grading table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingRow {
    pub word: &'static str,
    pub maslov: &'static str,
    pub classes: &'static [&'static str],
    pub skein: i64,
}

const fn grow(word: &'static str, maslov: &'static str, classes: &'static [&'static str], skein: i64) -> GradingRow {
    GradingRow { word, maslov, classes, skein }
}

/// The nineteen displayed refined gradings of algebra elements.
pub const GRADING_TABLE: [GradingRow; 19] = [
    grow("I", "0", &[], 0),
    grow("4,6", "-1/2", &["456"], 0),
    grow("4,6,7,8", "-2", &["456", "78"], 0),
    grow("4,56", "-1/2", &["456"], 0),
    grow("12,3", "-1/2", &["123"], 0),
    grow("2", "0", &[], 0),
    grow("45,6", "-1/2", &["456"], 0),
    grow("7,8", "-3/2", &["78"], 0),
    grow("12,3,4,6", "-1", &["123", "456"], 0),
    grow("4,56,2", "-1/2", &["456"], 0),
    grow("12,3,4,56,2", "-1", &["123", "456"], 0),
    grow("1,23", "-1/2", &["123"], 0),
    grow("45,6,7,8,5", "-3", &["456", "78"], -1),
    grow("7,8,5", "-5/2", &["78"], -1),
    grow("5", "-1", &[], -1),
    grow("5,12,3", "-3/2", &["123"], -1),
    grow("5,12,3,4,56", "-2", &["123", "456"], -1),
    grow("1,3", "-3/2", &["123"], -1),
    grow("1,3,4,56", "-2", &["123", "456"], -1),
];

impl GradingRow {
    pub fn expected(&self, group: &GradingGroup) -> GradingElement {
        let z = group.diagram();
        let h = self.classes.iter().fold(z.zero_class(), |acc, l| &acc + &z.class_by_label(l).expect("fixed label"));
        GradingElement { maslov2: HalfInt::parse(self.maslov).expect("fixed literal").twice(), h }
    }
}

/// A periodic or connecting domain, with its source and target idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainFixture {
    pub name: &'static str,
    pub euler: Quarter,
    pub n_first: Quarter,
    pub n_second: Quarter,
    pub boundary: Vec<&'static str>,
    pub boundary_sign: i64,
    pub start_occ: u8,
    pub end_occ: u8,
    pub expected_coords: [i64; 4],
}

/// The periodic domain R of the one-generator diagram.
pub fn periodic_domain_x() -> DomainFixture {
    DomainFixture {
        name: "R",
        euler: Quarter::from_quarters(-8),
        n_first: Quarter::from_quarters(2),
        n_second: Quarter::from_quarters(2),
        boundary: vec!["456", "78"],
        boundary_sign: -1,
        start_occ: 3,
        end_occ: 3,
        expected_coords: [0, 0, -1, -1],
    }
}

impl DomainFixture {
    pub fn boundary_class(&self, group: &GradingGroup) -> crate::diagram::ChordClass {
        let z = group.diagram();
        self.boundary
            .iter()
            .fold(z.zero_class(), |acc, l| &acc + &z.class_by_label(l).expect("fixed label"))
            .scale(self.boundary_sign)
    }

    pub fn unrefined(&self, group: &GradingGroup) -> Result<GradingElement, GradingError> {
        group.domain_grading(self.euler, self.n_first, self.n_second, self.boundary_class(group))
    }

    pub fn refined(
        &self,
        group: &GradingGroup,
        alg: &StrandsAlgebra,
        r: &RefinementData,
    ) -> Result<GradingElement, GradingError> {
        let g = self.unrefined(group)?;
        r.conjugate(group, alg.occ(self.end_occ).occupied, &g, alg.occ(self.start_occ).occupied)
    }
}

/// The refined grading of the connecting class from y2 to y3, as displayed:
/// (1/2, −[ρ123]).
pub fn connecting_class_y2() -> GradingElement {
    let group = GradingGroup::skein();
    let h = group.diagram().class_by_label("123").expect("fixed label").scale(-1);
    GradingElement { maslov2: 1, h }
}

/// A hypothetical base stabilizer together with the expected quotients for
/// each side and for the skein reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeExample {
    pub name: &'static str,
    pub base: Vec<[i64; 4]>,
    /// Expected (free rank, torsion) for k = 1, ∞, 0 and then the skein side.
    pub expected: [(usize, Vec<i64>); 4],
}

pub fn lattice_examples() -> Vec<LatticeExample> {
    vec![
        LatticeExample {
            name: "meridional",
            base: vec![[0, 1, 0, 1]],
            expected: [(2, vec![]), (3, vec![]), (2, vec![]), (1, vec![])],
        },
        LatticeExample {
            name: "torsion",
            base: vec![[12, 1, 1, 0], [18, 1, 0, 1]],
            expected: [(1, vec![2]), (1, vec![18]), (1, vec![12]), (0, vec![6])],
        },
    ]
}

/// Relators A1, A2, A3 of the skein reduction.
pub fn skein_relators() -> AbelianLattice {
    AbelianLattice::new(4, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
}

impl LatticeExample {
    /// Quotient invariants of ℤ⁴ by the base joined with `side`.
    pub fn quotient(&self, side: &AbelianLattice) -> Option<GroupInvariants> {
        let full = AbelianLattice::new(4, (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect());
        let base = AbelianLattice::new(4, self.base.iter().map(|r| r.to_vec()).collect());
        quotient_invariants(&full, &base.join(side))
    }
}

/// Canonical JSON for a morphism or module, for golden comparison.
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

/// Golden artefacts keyed by file name.
pub fn golden_files(fx: &SkeinFixtures) -> BTreeMap<String, String> {
    let alg = &fx.alg;
    let mut out = BTreeMap::new();
    for k in SkeinIndex::ALL {
        out.insert(format!("bsd_{k}.json"), canonical_json(&fx.bsd(k).to_json(alg)));
        let mut map = fx.skein_map(k).to_json(alg);
        map["parts"] = json!({
            "0": fx.skein_map_part(k, 0).to_json(alg)["table"],
            "1": fx.skein_map_part(k, 1).to_json(alg)["table"],
        });
        out.insert(format!("map_f{k}.json"), canonical_json(&map));
        out.insert(format!("homotopy_phi{k}.json"), canonical_json(&fx.skein_homotopy(k).to_json(alg)));
    }
    let rows: Vec<Value> = GRADING_TABLE
        .iter()
        .map(|r| {
            let g = r.expected(fx.group());
            json!({"word": r.word, "grading": serde_json::to_value(&g).expect("serializes"), "skein": r.skein})
        })
        .collect();
    out.insert("grading_table.json".into(), canonical_json(&Value::Array(rows)));
    out
}
