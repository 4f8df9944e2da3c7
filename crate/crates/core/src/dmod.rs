//! Type-D structures over A(Z, k) with their morphisms and mapping cones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, ClassSet, StrandsAlgebra, StrandsGenerator};
use crate::error::ModuleError;
use crate::grading::{RefinedBasis, RefinementData};
use crate::lattice::AbelianLattice;

/// A finite F2 sum of terms a ⊗ y, with y a generator index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tensor {
    terms: BTreeSet<(StrandsGenerator, usize)>,
}

impl Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn toggle(&mut self, a: StrandsGenerator, y: usize) {
        let key = (a, y);
        if !self.terms.remove(&key) {
            self.terms.insert(key);
        }
    }

    pub fn add_element(&mut self, a: &AlgebraElement, y: usize) {
        for g in a.iter() {
            self.toggle(g.clone(), y);
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

    pub fn iter(&self) -> impl Iterator<Item = &(StrandsGenerator, usize)> {
        self.terms.iter()
    }

    pub fn contains(&self, a: &StrandsGenerator, y: usize) -> bool {
        self.terms.contains(&(a.clone(), y))
    }

    /// Terms grouped by target, as algebra elements.
    pub fn by_target(&self) -> BTreeMap<usize, AlgebraElement> {
        let mut out: BTreeMap<usize, AlgebraElement> = BTreeMap::new();
        for (a, y) in &self.terms {
            out.entry(*y).or_default().toggle(a.clone());
        }
        out
    }
}

impl std::ops::AddAssign<&Tensor> for Tensor {
    fn add_assign(&mut self, rhs: &Tensor) {
        for (a, y) in &rhs.terms {
            self.toggle(a.clone(), *y);
        }
    }
}

/// Left multiplication of every term by `a`.
pub fn left_mul(alg: &StrandsAlgebra, a: &StrandsGenerator, t: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (b, y) in t.iter() {
        for c in alg.mul_gens(a, b) {
            out.toggle(c, *y);
        }
    }
    out
}

/// A type-D structure on named generators, each over an idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDStructure {
    names: Vec<String>,
    idems: Vec<ClassSet>,
    delta: Vec<Tensor>,
}

/// One declared term `from -> coef ⊗ to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSpec {
    pub from: String,
    pub coef: AlgebraElement,
    pub to: String,
}

fn index_of(names: &[String], name: &str) -> Result<usize, ModuleError> {
    names.iter().position(|n| n == name).ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
}

/// Projects `coef` to I(from)·coef·I(to) and adds it, rejecting terms the
/// projection kills.
#[allow(clippy::too_many_arguments)]
fn add_projected(
    alg: &StrandsAlgebra,
    table: &mut [Tensor],
    from: usize,
    from_idem: ClassSet,
    coef: &AlgebraElement,
    to: usize,
    to_idem: ClassSet,
    labels: (&str, &str),
) -> Result<(), ModuleError> {
    let kept: AlgebraElement =
        coef.iter().filter(|g| alg.left_idem(g) == from_idem && alg.right_idem(g) == to_idem).cloned().collect();
    if kept.is_zero() {
        return Err(ModuleError::Idempotent {
            from: labels.0.to_string(),
            coef: alg.describe_element(coef),
            to: labels.1.to_string(),
        });
    }
    table[from].add_element(&kept, to);
    Ok(())
}

impl TypeDStructure {
    pub fn new(
        alg: &StrandsAlgebra,
        generators: Vec<(String, ClassSet)>,
        terms: &[TermSpec],
    ) -> Result<Self, ModuleError> {
        let mut names = Vec::new();
        let mut idems = Vec::new();
        for (name, idem) in generators {
            if names.contains(&name) {
                return Err(ModuleError::DuplicateGenerator(name));
            }
            alg.check_generator(&StrandsGenerator::idempotent(idem))?;
            names.push(name);
            idems.push(idem);
        }
        let mut delta = vec![Tensor::zero(); names.len()];
        for t in terms {
            let (i, j) = (index_of(&names, &t.from)?, index_of(&names, &t.to)?);
            alg.check_element(&t.coef)?;
            add_projected(alg, &mut delta, i, idems[i], &t.coef, j, idems[j], (&t.from, &t.to))?;
        }
        Ok(TypeDStructure { names, idems, delta })
    }

    /// Assembles a structure from parts without any checks.
    pub fn from_parts(names: Vec<String>, idems: Vec<ClassSet>, delta: Vec<Tensor>) -> Self {
        TypeDStructure { names, idems, delta }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize, ModuleError> {
        index_of(&self.names, name)
    }

    pub fn idem(&self, i: usize) -> ClassSet {
        self.idems[i]
    }

    pub fn delta(&self, i: usize) -> &Tensor {
        &self.delta[i]
    }

    pub fn term_count(&self) -> usize {
        self.delta.iter().map(Tensor::len).sum()
    }

    pub fn to_json(&self, alg: &StrandsAlgebra) -> Value {
        json!({
            "generators": generators_json(self, alg),
            "delta": table_json(self, self, &self.delta),
        })
    }

    /// Readable listing, one generator per line.
    pub fn render(&self, alg: &StrandsAlgebra) -> String {
        render_table(alg, self, self, &self.delta, "δ")
    }
}

fn generators_json(m: &TypeDStructure, alg: &StrandsAlgebra) -> Value {
    Value::Array(
        m.names
            .iter()
            .zip(&m.idems)
            .map(|(n, i)| json!({"name": n, "idem": i.classes(), "occ": alg.occ_index(*i)}))
            .collect(),
    )
}

fn table_json(source: &TypeDStructure, target: &TypeDStructure, table: &[Tensor]) -> Value {
    let mut rows = Vec::new();
    for (i, t) in table.iter().enumerate() {
        for (j, coef) in t.by_target() {
            rows.push(json!({
                "from": source.names[i],
                "coef": serde_json::to_value(&coef).expect("algebra elements serialize"),
                "to": target.names[j],
            }));
        }
    }
    Value::Array(rows)
}

fn render_table(
    alg: &StrandsAlgebra,
    source: &TypeDStructure,
    target: &TypeDStructure,
    table: &[Tensor],
    symbol: &str,
) -> String {
    let mut out = String::new();
    for (i, t) in table.iter().enumerate() {
        let rhs: Vec<String> = t
            .by_target()
            .into_iter()
            .map(|(j, coef)| format!("({}) ⊗ {}", alg.describe_element(&coef), target.names[j]))
            .collect();
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
        out.push_str(&format!("{symbol}({}) = {rhs}\n", source.names[i]));
    }
    out
}

/// Outcome of a verification, with readable witnesses for every failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

fn describe_tensor(alg: &StrandsAlgebra, target: &TypeDStructure, t: &Tensor) -> String {
    let parts: Vec<String> = t
        .by_target()
        .into_iter()
        .map(|(j, coef)| format!("({}) ⊗ {}", alg.describe_element(&coef), target.names[j]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Idempotent compatibility of every δ term plus the structure equation.
pub fn structure_check(alg: &StrandsAlgebra, m: &TypeDStructure) -> CheckReport {
    let mut report = CheckReport::default();
    for i in 0..m.len() {
        for (a, y) in m.delta[i].iter() {
            if alg.left_idem(a) != m.idems[i] || alg.right_idem(a) != m.idems[*y] {
                report.violations.push(format!(
                    "δ({}) term {} ⊗ {} breaks idempotents",
                    m.names[i],
                    alg.describe(a),
                    m.names[*y]
                ));
            }
        }
        let lhs = delta_squared(alg, m, i);
        if !lhs.is_zero() {
            report.violations.push(format!(
                "structure equation fails at {}: {}",
                m.names[i],
                describe_tensor(alg, m, &lhs)
            ));
        }
    }
    report
}

/// (μ ⊗ id)(id ⊗ δ)δ(x) + (d ⊗ id)δ(x).
pub fn delta_squared(alg: &StrandsAlgebra, m: &TypeDStructure, i: usize) -> Tensor {
    let mut out = Tensor::zero();
    for (a, y) in m.delta[i].iter() {
        out += &left_mul(alg, a, &m.delta[*y]);
        for da in alg.diff_gen(a) {
            out.toggle(da, *y);
        }
    }
    out
}

/// A morphism M → A ⊗ N, stored per source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMorphism {
    source: Arc<TypeDStructure>,
    target: Arc<TypeDStructure>,
    table: Vec<Tensor>,
}

impl DMorphism {
    pub fn new(
        alg: &StrandsAlgebra,
        source: Arc<TypeDStructure>,
        target: Arc<TypeDStructure>,
        terms: &[TermSpec],
    ) -> Result<Self, ModuleError> {
        let mut table = vec![Tensor::zero(); source.len()];
        for t in terms {
            let (i, j) = (source.index(&t.from)?, target.index(&t.to)?);
            alg.check_element(&t.coef)?;
            add_projected(alg, &mut table, i, source.idems[i], &t.coef, j, target.idems[j], (&t.from, &t.to))?;
        }
        Ok(DMorphism { source, target, table })
    }

    pub fn from_table(source: Arc<TypeDStructure>, target: Arc<TypeDStructure>, table: Vec<Tensor>) -> Self {
        assert_eq!(table.len(), source.len(), "one table row per source generator");
        DMorphism { source, target, table }
    }

    pub fn zero(source: Arc<TypeDStructure>, target: Arc<TypeDStructure>) -> Self {
        let table = vec![Tensor::zero(); source.len()];
        DMorphism { source, target, table }
    }

    pub fn identity(m: Arc<TypeDStructure>) -> Self {
        let table = (0..m.len())
            .map(|i| {
                let mut t = Tensor::zero();
                t.toggle(StrandsGenerator::idempotent(m.idems[i]), i);
                t
            })
            .collect();
        DMorphism { source: m.clone(), target: m, table }
    }

    pub fn source(&self) -> &Arc<TypeDStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TypeDStructure> {
        &self.target
    }

    pub fn image(&self, i: usize) -> &Tensor {
        &self.table[i]
    }

    pub fn table(&self) -> &[Tensor] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Tensor::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.table.iter().map(Tensor::len).sum()
    }

    fn same_shape(&self, other: &DMorphism) -> bool {
        self.source == other.source && self.target == other.target
    }

    pub fn add(&self, other: &DMorphism) -> Result<DMorphism, ModuleError> {
        if !self.same_shape(other) {
            return Err(ModuleError::Shape);
        }
        let mut out = self.clone();
        for (t, o) in out.table.iter_mut().zip(&other.table) {
            *t += o;
        }
        Ok(out)
    }

    pub fn to_json(&self, alg: &StrandsAlgebra) -> Value {
        json!({
            "source": generators_json(&self.source, alg),
            "target": generators_json(&self.target, alg),
            "table": table_json(&self.source, &self.target, &self.table),
        })
    }

    pub fn render(&self, alg: &StrandsAlgebra, symbol: &str) -> String {
        render_table(alg, &self.source, &self.target, &self.table, symbol)
    }

    pub fn describe_image(&self, alg: &StrandsAlgebra, i: usize) -> String {
        describe_tensor(alg, &self.target, &self.table[i])
    }
}

impl fmt::Display for DMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({} terms)", self.source.names.join(","), self.target.names.join(","), self.term_count())
    }
}

/// ∂f = (μ⊗id)(id⊗δ_N)f + (μ⊗id)(id⊗f)δ_M + (d⊗id)f.
pub fn morphism_boundary(alg: &StrandsAlgebra, f: &DMorphism) -> DMorphism {
    let mut table = vec![Tensor::zero(); f.source.len()];
    for (i, row) in table.iter_mut().enumerate() {
        for (a, y) in f.table[i].iter() {
            *row += &left_mul(alg, a, &f.target.delta[*y]);
            for da in alg.diff_gen(a) {
                row.toggle(da, *y);
            }
        }
        for (b, y) in f.source.delta[i].iter() {
            *row += &left_mul(alg, b, &f.table[*y]);
        }
    }
    DMorphism { source: f.source.clone(), target: f.target.clone(), table }
}

/// g ∘ f = (μ⊗id)(id⊗g)f.
pub fn compose(alg: &StrandsAlgebra, g: &DMorphism, f: &DMorphism) -> Result<DMorphism, ModuleError> {
    if f.target != g.source {
        return Err(ModuleError::Shape);
    }
    let table = f
        .table
        .iter()
        .map(|row| {
            let mut out = Tensor::zero();
            for (a, y) in row.iter() {
                out += &left_mul(alg, a, &g.table[*y]);
            }
            out
        })
        .collect();
    Ok(DMorphism { source: f.source.clone(), target: g.target.clone(), table })
}

/// Generator names of a direct sum, source first; target names get a prime
/// when they collide with a source name.
pub fn sum_names(a: &TypeDStructure, b: &TypeDStructure) -> Vec<String> {
    let mut names = a.names.clone();
    for n in &b.names {
        let mut candidate = n.clone();
        while names.contains(&candidate) {
            candidate.push('\'');
        }
        names.push(candidate);
    }
    names
}

/// Cone(f): generators of the source then the target, δ(u) = δu + f(u).
pub fn mapping_cone(alg: &StrandsAlgebra, f: &DMorphism) -> Result<TypeDStructure, ModuleError> {
    let boundary = morphism_boundary(alg, f);
    if !boundary.is_zero() {
        return Err(ModuleError::NotACycle(boundary.term_count()));
    }
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked(f: &DMorphism) -> TypeDStructure {
    let (m, n) = (&f.source, &f.target);
    let shift = m.len();
    let names = sum_names(m, n);
    let mut idems = m.idems.clone();
    idems.extend(n.idems.iter().copied());
    let mut delta = Vec::with_capacity(names.len());
    for i in 0..m.len() {
        let mut t = m.delta[i].clone();
        for (a, y) in f.table[i].iter() {
            t.toggle(a.clone(), y + shift);
        }
        delta.push(t);
    }
    for j in 0..n.len() {
        let mut t = Tensor::zero();
        for (a, y) in n.delta[j].iter() {
            t.toggle(a.clone(), y + shift);
        }
        delta.push(t);
    }
    TypeDStructure { names, idems, delta }
}

/// Refined gradings of the generators, as coordinates (λ, A1, …), each
/// defined modulo the stabilizer lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAssignment {
    pub stabilizer: AbelianLattice,
    pub grades: BTreeMap<String, Vec<i64>>,
}

impl GradedAssignment {
    fn grade(&self, name: &str) -> Result<&Vec<i64>, ModuleError> {
        self.grades.get(name).ok_or_else(|| ModuleError::MissingGrading(name.to_string()))
    }

    /// The skein-reduced grading: the λ-coordinate, which the stabilizer
    /// must not change.
    pub fn skein(&self, name: &str) -> Result<i64, ModuleError> {
        if self.stabilizer.generators().iter().any(|g| g[0] != 0) {
            return Err(ModuleError::NotHomogeneous("stabilizer moves the λ-coordinate".into()));
        }
        Ok(self.grade(name)?[0])
    }
}

/// Checks gr̄(a) + gr̄(y) ≡ gr̄(x) − λ modulo the stabilizer for every δ term.
pub fn graded_check(
    alg: &StrandsAlgebra,
    m: &TypeDStructure,
    gradings: &GradedAssignment,
    r: &RefinementData,
    basis: &RefinedBasis,
) -> CheckReport {
    let mut report = CheckReport::default();
    for i in 0..m.len() {
        let gx = match gradings.grade(&m.names[i]) {
            Ok(g) => g.clone(),
            Err(e) => {
                report.violations.push(e.to_string());
                continue;
            }
        };
        for (a, y) in m.delta[i].iter() {
            let witness = |why: String| format!("δ({}) term {} ⊗ {}: {why}", m.names[i], alg.describe(a), m.names[*y]);
            let ga = match r.refine_generator(basis.group(), alg, a).and_then(|g| basis.coords(&g)) {
                Ok(c) => c,
                Err(e) => {
                    report.violations.push(witness(e.to_string()));
                    continue;
                }
            };
            let gy = match gradings.grade(&m.names[*y]) {
                Ok(g) => g,
                Err(e) => {
                    report.violations.push(witness(e.to_string()));
                    continue;
                }
            };
            let mut diff: Vec<i64> = (0..ga.len()).map(|k| ga[k] + gy[k] - gx[k]).collect();
            diff[0] += 1;
            if !gradings.stabilizer.contains(&diff) {
                report
                    .violations
                    .push(witness(format!("offset {} not in stabilizer", RefinedBasis::format_coords(&diff))));
            }
        }
    }
    report
}

/// Gradings forced by δ from `base` ↦ 0: a term a ⊗ y of δ(x) gives
/// gr̄(y) = gr̄(x) − gr̄(a) − λ. Generators unreachable from the base are
/// left out.
pub fn propagate_gradings(
    alg: &StrandsAlgebra,
    m: &TypeDStructure,
    base: &str,
    r: &RefinementData,
    basis: &RefinedBasis,
) -> Result<BTreeMap<String, Vec<i64>>, ModuleError> {
    let start = m.index(base)?;
    let mut grades: Vec<Option<Vec<i64>>> = vec![None; m.len()];
    grades[start] = Some(vec![0; basis.rank() + 1]);
    let mut queue = vec![start];
    while let Some(i) = queue.pop() {
        let gi = grades[i].clone().expect("queued generators are graded");
        for j in 0..m.len() {
            for (a, y) in m.delta[j].iter() {
                // forward along x → y, or backward when i is the target
                let (unknown, sign) = match (j == i, *y == i) {
                    (true, _) if grades[*y].is_none() => (*y, -1),
                    (_, true) if grades[j].is_none() => (j, 1),
                    _ => continue,
                };
                let ga = basis.coords(&r.refine_generator(basis.group(), alg, a)?)?;
                let mut g: Vec<i64> = gi.iter().zip(&ga).map(|(x, a)| x + sign * a).collect();
                g[0] += sign;
                grades[unknown] = Some(g);
                queue.push(unknown);
            }
        }
    }
    Ok(grades.into_iter().enumerate().filter_map(|(i, g)| g.map(|g| (m.names[i].clone(), g))).collect())
}

/// The common skein-reduced shift s of all terms of f, `None` for f = 0.
pub fn morphism_shift(
    alg: &StrandsAlgebra,
    f: &DMorphism,
    source: &GradedAssignment,
    target: &GradedAssignment,
    r: &RefinementData,
    basis: &RefinedBasis,
) -> Result<Option<i64>, ModuleError> {
    let mut shifts: BTreeMap<i64, String> = BTreeMap::new();
    for i in 0..f.source.len() {
        let sx = source.skein(&f.source.names[i])?;
        for (a, y) in f.table[i].iter() {
            let sa = basis.skein_reduce(&r.refine_generator(basis.group(), alg, a)?)?;
            let sy = target.skein(&f.target.names[*y])?;
            shifts.entry(sa + sy - sx).or_insert_with(|| {
                format!("{} ⊗ {} in the image of {}", alg.describe(a), f.target.names[*y], f.source.names[i])
            });
        }
    }
    match shifts.len() {
        0 => Ok(None),
        1 => Ok(shifts.keys().next().copied()),
        _ => {
            let detail: Vec<String> = shifts.iter().map(|(s, w)| format!("shift {s} from {w}")).collect();
            Err(ModuleError::NotHomogeneous(detail.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> StrandsAlgebra {
        StrandsAlgebra::skein()
    }

    fn term(a: &StrandsAlgebra, from: &str, word: &str, to: &str) -> TermSpec {
        TermSpec { from: from.into(), coef: a.parse_word(word).unwrap(), to: to.into() }
    }

    fn loop_module(a: &StrandsAlgebra) -> TypeDStructure {
        TypeDStructure::new(a, vec![("x".into(), a.occ(3).occupied)], &[term(a, "x", "4,6,7,8,5", "x")]).unwrap()
    }

    #[test]
    fn loop_module_is_a_structure() {
        let a = alg();
        let m = loop_module(&a);
        assert!(structure_check(&a, &m).passed());
        assert_eq!(m.term_count(), 1);
    }

    #[test]
    fn identity_is_a_cycle_and_unit() {
        let a = alg();
        let m = Arc::new(loop_module(&a));
        let id = DMorphism::identity(m.clone());
        assert!(morphism_boundary(&a, &id).is_zero());
        assert_eq!(compose(&a, &id, &id).unwrap(), id);
    }

    #[test]
    fn killed_terms_are_rejected() {
        let a = alg();
        let err = TypeDStructure::new(&a, vec![("x".into(), a.occ(3).occupied)], &[term(&a, "x", "7", "x")]);
        assert!(matches!(err, Err(ModuleError::Idempotent { .. })));
        let dup = TypeDStructure::new(&a, vec![("x".into(), a.occ(3).occupied), ("x".into(), a.occ(1).occupied)], &[]);
        assert!(matches!(dup, Err(ModuleError::DuplicateGenerator(_))));
    }

    #[test]
    fn cone_of_zero_is_direct_sum() {
        let a = alg();
        let m = Arc::new(loop_module(&a));
        let zero = DMorphism::zero(m.clone(), m.clone());
        let cone = mapping_cone(&a, &zero).unwrap();
        assert_eq!(cone.names(), &["x".to_string(), "x'".to_string()]);
        assert_eq!(cone.term_count(), 2);
        assert!(structure_check(&a, &cone).passed());
    }

    #[test]
    fn broken_structure_has_witness() {
        let a = alg();
        let m = TypeDStructure::new(
            &a,
            vec![("p".into(), a.occ(3).occupied), ("q".into(), a.occ(4).occupied)],
            &[term(&a, "p", "4", "q"), term(&a, "q", "6,7,8,5", "p")],
        )
        .unwrap();
        let report = structure_check(&a, &m);
        assert!(!report.passed());
        assert!(report.first().unwrap().contains("structure equation"));
    }

    #[test]
    fn json_lists_generators_and_terms() {
        let a = alg();
        let v = loop_module(&a).to_json(&a);
        assert_eq!(v["generators"][0]["name"], "x");
        assert_eq!(v["generators"][0]["occ"], 3);
        assert_eq!(v["delta"].as_array().unwrap().len(), 1);
        assert_eq!(v["delta"][0]["to"], "x");
    }
}
