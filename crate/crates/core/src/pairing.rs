//! Right DG modules over the strands algebra and the box tensor product with
//! type-D structures.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{ClassSet, StrandsAlgebra, StrandsGenerator};
use crate::axioms::ProductTable;
use crate::dmod::{mapping_cone, CheckReport, DMorphism, TypeDStructure};
use crate::error::PairingError;
use crate::homlab::{BitMatrix, BitVec};

/// An F2 sum of type-A generators.
pub type ASum = BTreeSet<usize>;

fn toggle(s: &mut ASum, n: usize) {
    if !s.remove(&n) {
        s.insert(n);
    }
}

#[derive(Clone, Debug)]
enum Ops {
    /// A over itself: m1 = d, m2 = μ.
    Regular(Arc<ProductTable>),
    /// Listed operations m_{1+j}(n, a1, …, aj); absent entries are zero.
    Explicit { m1: Vec<ASum>, higher: HashMap<(usize, Vec<StrandsGenerator>), ASum> },
}

/// A right A∞ module with finitely many nonzero operations.
#[derive(Clone, Debug)]
pub struct TypeAStructure {
    names: Vec<String>,
    idems: Vec<ClassSet>,
    ops: Ops,
    max_arity: usize,
}

pub fn regular_module(alg: &StrandsAlgebra) -> TypeAStructure {
    regular_module_from(alg, Arc::new(ProductTable::new(alg)))
}

/// The regular module over an already computed product table.
pub fn regular_module_from(alg: &StrandsAlgebra, table: Arc<ProductTable>) -> TypeAStructure {
    let names = table.basis.iter().map(|g| alg.describe(g)).collect();
    let idems = table.basis.iter().map(|g| alg.right_idem(g)).collect();
    TypeAStructure { names, idems, ops: Ops::Regular(table), max_arity: 2 }
}

impl TypeAStructure {
    /// Builds an explicit module, rejecting operations above arity `bound`.
    pub fn explicit(
        names: Vec<String>,
        idems: Vec<ClassSet>,
        m1: Vec<ASum>,
        higher: HashMap<(usize, Vec<StrandsGenerator>), ASum>,
        bound: usize,
    ) -> Result<Self, PairingError> {
        let n = names.len();
        if let Some(bad) = m1.iter().flatten().chain(higher.values().flatten()).find(|&&t| t >= n) {
            return Err(PairingError::UnknownGenerator(*bad));
        }
        if let Some((src, _)) = higher.keys().find(|(src, _)| *src >= n) {
            return Err(PairingError::UnknownGenerator(*src));
        }
        let found = higher.keys().map(|(_, a)| a.len() + 1).max().unwrap_or(1);
        if found > bound {
            return Err(PairingError::Unbounded { bound, found });
        }
        Ok(TypeAStructure { names, idems, ops: Ops::Explicit { m1, higher }, max_arity: found })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, n: usize) -> &str {
        &self.names[n]
    }

    pub fn idem(&self, n: usize) -> ClassSet {
        self.idems[n]
    }

    /// Largest arity with a nonzero operation.
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// The regular module's generator for a basis element.
    pub fn generator_of(&self, g: &StrandsGenerator) -> Option<usize> {
        match &self.ops {
            Ops::Regular(table) => table.index(g),
            Ops::Explicit { .. } => None,
        }
    }

    /// m_{1+j}(n, a1, …, aj).
    pub fn op(&self, n: usize, args: &[StrandsGenerator]) -> ASum {
        let mut out = ASum::new();
        match &self.ops {
            Ops::Regular(table) => match args {
                [] => return table.diff_of(n).clone(),
                [a] => {
                    if let Some(p) = table.index(a).and_then(|j| table.product(n, j)) {
                        return p.clone();
                    }
                }
                _ => {}
            },
            Ops::Explicit { m1, higher } => {
                if args.is_empty() {
                    return m1[n].clone();
                }
                if let Some(s) = higher.get(&(n, args.to_vec())) {
                    out = s.clone();
                }
            }
        }
        out
    }

    fn op_sum(&self, ns: &ASum, args: &[StrandsGenerator]) -> ASum {
        let mut out = ASum::new();
        for &n in ns {
            for t in self.op(n, args) {
                toggle(&mut out, t);
            }
        }
        out
    }
}

/// DG relations on the given generator/argument samples: m1² = 0,
/// Leibniz of m2 over m1 and d, associativity of m2 over μ, and
/// idempotent compatibility.
pub fn check_dg_relations(
    alg: &StrandsAlgebra,
    n: &TypeAStructure,
    pairs: &[(usize, StrandsGenerator)],
    triples: &[(usize, StrandsGenerator, StrandsGenerator)],
) -> CheckReport {
    let mut report = CheckReport::default();
    if n.max_arity() > 2 {
        report.violations.push(format!("operations up to arity {} are not DG", n.max_arity()));
    }
    for i in 0..n.len() {
        if !n.op_sum(&n.op(i, &[]), &[]).is_empty() {
            report.violations.push(format!("m1∘m1 ≠ 0 at {}", n.name(i)));
        }
        if n.op(i, &[]).iter().any(|&t| n.idem(t) != n.idem(i)) {
            report.violations.push(format!("m1({}) changes idempotent", n.name(i)));
        }
    }
    let mut cache: HashMap<&StrandsGenerator, (ClassSet, Vec<StrandsGenerator>)> = HashMap::new();
    for (i, a) in pairs {
        let (right, da) =
            cache.entry(a).or_insert_with(|| (alg.right_idem(a), alg.diff_gen(a).iter().cloned().collect())).clone();
        let one = [a.clone()];
        let image = n.op(*i, &one);
        if image.iter().any(|&t| n.idem(t) != right) {
            report.violations.push(format!("m2({}, {}) has the wrong idempotent", n.name(*i), alg.describe(a)));
        }
        let mut lhs = n.op_sum(&image, &[]);
        for t in n.op_sum(&n.op(*i, &[]), &one) {
            toggle(&mut lhs, t);
        }
        for d in &da {
            for t in n.op(*i, std::slice::from_ref(d)) {
                toggle(&mut lhs, t);
            }
        }
        if !lhs.is_empty() {
            report.violations.push(format!("Leibniz fails at ({}, {})", n.name(*i), alg.describe(a)));
        }
    }
    for (i, a, b) in triples {
        let left = n.op_sum(&n.op(*i, std::slice::from_ref(a)), std::slice::from_ref(b));
        let mut right = ASum::new();
        for ab in alg.mul_gens(a, b).iter() {
            for t in n.op(*i, std::slice::from_ref(ab)) {
                toggle(&mut right, t);
            }
        }
        if left != right {
            report.violations.push(format!(
                "associativity fails at ({}, {}, {})",
                n.name(*i),
                alg.describe(a),
                alg.describe(b)
            ));
        }
    }
    report
}

/// Every idempotent-compatible (n, a) of the regular module.
pub fn regular_pairs(alg: &StrandsAlgebra, n: &TypeAStructure) -> Vec<(usize, StrandsGenerator)> {
    let basis = alg.enumerate_basis();
    (0..n.len())
        .flat_map(|i| basis.iter().filter(move |a| alg.left_idem(a) == n.idem(i)).map(move |a| (i, a.clone())))
        .collect()
}

/// `count` compatible triples drawn with a fixed seed.
pub fn sampled_triples(
    alg: &StrandsAlgebra,
    n: &TypeAStructure,
    count: usize,
    seed: u64,
) -> Vec<(usize, StrandsGenerator, StrandsGenerator)> {
    let mut by_left: HashMap<ClassSet, Vec<StrandsGenerator>> = HashMap::new();
    for b in alg.enumerate_basis() {
        by_left.entry(alg.left_idem(&b)).or_default().push(b);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = regular_pairs(alg, n);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (i, a) = pairs.choose(&mut rng).expect("nonempty").clone();
        let b = by_left[&alg.right_idem(&a)].choose(&mut rng).expect("idempotent is compatible").clone();
        out.push((i, a, b));
    }
    out
}

/// A finite F2 chain complex N ⊠ M with generators n ⊗ x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxComplex {
    /// (type-A generator, type-D generator) pairs.
    pub generators: Vec<(usize, usize)>,
    pub labels: Vec<String>,
    /// Column j holds ∂ of generator j.
    pub boundary: BitMatrix,
}

impl BoxComplex {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.boundary.mul(&self.boundary).is_zero()
    }

    pub fn index(&self, n: usize, x: usize) -> Option<usize> {
        self.generators.iter().position(|&g| g == (n, x))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<[usize; 2]> = (0..self.len())
            .flat_map(|j| self.boundary.column(j).ones().map(move |i| [i, j]).collect::<Vec<_>>())
            .collect();
        json!({"generators": self.labels, "boundary": entries})
    }
}

fn box_generators(n: &TypeAStructure, m: &TypeDStructure) -> Vec<(usize, usize)> {
    (0..m.len()).flat_map(|x| (0..n.len()).filter(move |&i| n.idem(i) == m.idem(x)).map(move |i| (i, x))).collect()
}

type Steps<'a> = &'a dyn Fn(usize, bool) -> Vec<(StrandsGenerator, usize)>;

/// Sums m_{1+j}(n, a1, …, aj) ⊗ y over sequences x → a1 ⊗ x1 → … → aj ⊗ y.
/// With `need_mark`, exactly one step is taken from the marked map (f) and
/// the others from δ.
struct Walk<'a> {
    n: &'a TypeAStructure,
    start: usize,
    steps: Steps<'a>,
    need_mark: bool,
    out: BTreeSet<(usize, usize)>,
}

impl Walk<'_> {
    fn run(n: &TypeAStructure, start: usize, x: usize, steps: Steps<'_>, need_mark: bool) -> BTreeSet<(usize, usize)> {
        let mut w = Walk { n, start, steps, need_mark, out: BTreeSet::new() };
        w.go(x, &mut Vec::new(), false);
        w.out
    }

    fn go(&mut self, x: usize, args: &mut Vec<StrandsGenerator>, marked: bool) {
        if marked == self.need_mark {
            for t in self.n.op(self.start, args) {
                let key = (t, x);
                if !self.out.remove(&key) {
                    self.out.insert(key);
                }
            }
        }
        if args.len() + 1 >= self.n.max_arity() {
            return;
        }
        let mut options: Vec<(bool, StrandsGenerator, usize)> =
            (self.steps)(x, false).into_iter().map(|(a, y)| (false, a, y)).collect();
        if self.need_mark && !marked {
            options.extend((self.steps)(x, true).into_iter().map(|(a, y)| (true, a, y)));
        }
        for (is_mark, a, y) in options {
            args.push(a);
            self.go(y, args, marked || is_mark);
            args.pop();
        }
    }
}

fn check_bound(n: &TypeAStructure, bound: usize) -> Result<(), PairingError> {
    if n.max_arity() > bound {
        Err(PairingError::Unbounded { bound, found: n.max_arity() })
    } else {
        Ok(())
    }
}

/// N ⊠ M with ∂(n⊗x) = Σ m_{1+j}(n, a1, …, aj) ⊗ y; `bound` caps the arity
/// of N so the sum is finite.
pub fn box_tensor(n: &TypeAStructure, m: &TypeDStructure, bound: usize) -> Result<BoxComplex, PairingError> {
    check_bound(n, bound)?;
    let generators = box_generators(n, m);
    let index: HashMap<(usize, usize), usize> = generators.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let steps = |x: usize, _: bool| m.delta(x).iter().cloned().collect::<Vec<_>>();
    let mut boundary = BitMatrix::zeros(generators.len(), generators.len());
    for (j, &(i, x)) in generators.iter().enumerate() {
        for key in Walk::run(n, i, x, &steps, false) {
            boundary.set(index[&key], j, true);
        }
    }
    let labels = generators.iter().map(|&(i, x)| format!("{}⊗{}", n.name(i), m.name(x))).collect();
    Ok(BoxComplex { generators, labels, boundary })
}

/// Id ⊠ f as a matrix from N ⊠ source to N ⊠ target.
pub fn box_morphism(
    n: &TypeAStructure,
    f: &DMorphism,
    bound: usize,
) -> Result<(BoxComplex, BoxComplex, BitMatrix), PairingError> {
    let src = box_tensor(n, f.source(), bound)?;
    let tgt = box_tensor(n, f.target(), bound)?;
    let split = f.source().len();
    let tindex: HashMap<(usize, usize), usize> = tgt.generators.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    // positions ≥ split walk in the target; the marked step crosses over
    let steps = |x: usize, mark: bool| -> Vec<(StrandsGenerator, usize)> {
        match (x < split, mark) {
            (true, false) => f.source().delta(x).iter().cloned().collect(),
            (true, true) => f.image(x).iter().map(|(a, y)| (a.clone(), y + split)).collect(),
            (false, false) => f.target().delta(x - split).iter().map(|(a, y)| (a.clone(), y + split)).collect(),
            (false, true) => Vec::new(),
        }
    };
    let mut matrix = BitMatrix::zeros(tgt.len(), src.len());
    for (j, &(i, x)) in src.generators.iter().enumerate() {
        for (t, y) in Walk::run(n, i, x, &steps, true) {
            matrix.set(tindex[&(t, y - split)], j, true);
        }
    }
    Ok((src, tgt, matrix))
}

/// ∂_target ∘ F = F ∘ ∂_source.
pub fn is_chain_map(src: &BoxComplex, tgt: &BoxComplex, map: &BitMatrix) -> bool {
    tgt.boundary.mul(map) == map.mul(&src.boundary)
}

/// Cone(Id⊠f) against N ⊠ Cone(f) under (n, x) ↦ (n, x), (n, y) ↦ (n, y').
/// Returns the number of mismatched matrix entries.
pub fn cone_commutation_defect(
    alg: &StrandsAlgebra,
    n: &TypeAStructure,
    f: &DMorphism,
    bound: usize,
) -> Result<usize, PairingError> {
    let (src, tgt, map) = box_morphism(n, f, bound)?;
    let (a, b) = (src.len(), tgt.len());
    let mut left = BitMatrix::zeros(a + b, a + b);
    for j in 0..a {
        for i in src.boundary.column(j).ones() {
            left.set(i, j, true);
        }
        for i in map.column(j).ones() {
            left.set(a + i, j, true);
        }
    }
    for j in 0..b {
        for i in tgt.boundary.column(j).ones() {
            left.set(a + i, a + j, true);
        }
    }
    let cone = mapping_cone(alg, f)?;
    let right = box_tensor(n, &cone, bound)?;
    let split = f.source().len();
    let position = |(t, x): (usize, usize)| -> Option<usize> {
        if x < split {
            src.generators.iter().position(|&g| g == (t, x))
        } else {
            tgt.generators.iter().position(|&g| g == (t, x - split)).map(|p| a + p)
        }
    };
    if right.len() != a + b {
        return Ok(usize::MAX);
    }
    let perm: Vec<usize> = match right.generators.iter().map(|&g| position(g)).collect::<Option<Vec<_>>>() {
        Some(p) => p,
        None => return Ok(usize::MAX),
    };
    let mut defect = 0;
    for j in 0..right.len() {
        let col: BitVec = right.boundary.column(j);
        for i in 0..right.len() {
            if col.get(i) != left.get(perm[i], perm[j]) {
                defect += 1;
            }
        }
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmod::TermSpec;

    #[test]
    fn regular_action() {
        let alg = StrandsAlgebra::skein();
        let n = regular_module(&alg);
        let i3 = n.generator_of(&alg.occ(3)).unwrap();
        let four = alg.parse_word("4").unwrap();
        let a = four.iter().find(|g| alg.left_idem(g) == alg.occ(3).occupied).unwrap().clone();
        let image = n.op(i3, std::slice::from_ref(&a));
        assert_eq!(image, [n.generator_of(&a).unwrap()].into());
    }

    #[test]
    fn orthogonal_idempotents_give_zero() {
        let alg = StrandsAlgebra::skein();
        let idem = alg.occ(6).occupied;
        let n = TypeAStructure::explicit(vec!["n".into()], vec![idem], vec![ASum::new()], HashMap::new(), 2).unwrap();
        let m = TypeDStructure::new(
            &alg,
            vec![("x".into(), alg.occ(3).occupied)],
            &[TermSpec { from: "x".into(), coef: alg.parse_word("4,6,7,8,5").unwrap(), to: "x".into() }],
        )
        .unwrap();
        assert!(box_tensor(&n, &m, 2).unwrap().is_empty());
    }

    #[test]
    fn arity_above_bound_is_rejected() {
        let alg = StrandsAlgebra::skein();
        let idem = alg.occ(6).occupied;
        let mut higher = HashMap::new();
        higher.insert((0, vec![alg.occ(6), alg.occ(6)]), ASum::from([0]));
        let err = TypeAStructure::explicit(vec!["n".into()], vec![idem], vec![ASum::new()], higher, 2).unwrap_err();
        assert_eq!(err, PairingError::Unbounded { bound: 2, found: 3 });
        assert!(box_tensor(&regular_module(&alg), &TypeDStructure::from_parts(vec![], vec![], vec![]), 1).is_err());
    }
}
