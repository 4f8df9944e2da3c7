//! Exhaustive checks of the algebra axioms over an enumerated basis, using a
//! precomputed multiplication table.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{AlgebraElement, ClassSet, StrandsAlgebra, StrandsGenerator};
use crate::dmod::CheckReport;

type Sum = BTreeSet<usize>;

fn add_into(acc: &mut Sum, s: &Sum) {
    for &t in s {
        if !acc.remove(&t) {
            acc.insert(t);
        }
    }
}

/// The basis with its differential and every nonzero product of basis elements.
#[derive(Clone, Debug)]
pub struct ProductTable {
    pub basis: Vec<StrandsGenerator>,
    index: HashMap<StrandsGenerator, usize>,
    diff: Vec<Sum>,
    products: HashMap<(usize, usize), Sum>,
    /// Basis elements grouped by left idempotent.
    by_left: HashMap<ClassSet, Vec<usize>>,
    by_right: HashMap<ClassSet, Vec<usize>>,
    compatible_pairs: usize,
}

impl ProductTable {
    pub fn new(alg: &StrandsAlgebra) -> Self {
        let basis = alg.enumerate_basis();
        let index: HashMap<StrandsGenerator, usize> = basis.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let to_sum = |e: &AlgebraElement| -> Sum { e.iter().map(|g| index[g]).collect() };
        let diff = basis.iter().map(|g| to_sum(&alg.diff_gen(g))).collect();
        let mut by_left: HashMap<_, Vec<usize>> = HashMap::new();
        let mut by_right: HashMap<_, Vec<usize>> = HashMap::new();
        for (i, g) in basis.iter().enumerate() {
            by_left.entry(alg.left_idem(g)).or_default().push(i);
            by_right.entry(alg.right_idem(g)).or_default().push(i);
        }
        let mut products = HashMap::new();
        let mut compatible_pairs = 0;
        for (i, a) in basis.iter().enumerate() {
            for &j in &by_left[&alg.right_idem(a)] {
                compatible_pairs += 1;
                let p = to_sum(&alg.mul_gens(a, &basis[j]));
                if !p.is_empty() {
                    products.insert((i, j), p);
                }
            }
        }
        ProductTable { basis, index, diff, products, by_left, by_right, compatible_pairs }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index(&self, g: &StrandsGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn compatible_pairs(&self) -> usize {
        self.compatible_pairs
    }

    pub fn nonzero_products(&self) -> usize {
        self.products.len()
    }

    pub fn product(&self, i: usize, j: usize) -> Option<&Sum> {
        self.products.get(&(i, j))
    }

    pub fn diff_of(&self, i: usize) -> &Sum {
        &self.diff[i]
    }

    fn mul_sum_right(&self, s: &Sum, j: usize) -> Sum {
        let mut out = Sum::new();
        for &i in s {
            if let Some(p) = self.product(i, j) {
                add_into(&mut out, p);
            }
        }
        out
    }

    fn mul_sum_left(&self, i: usize, s: &Sum) -> Sum {
        let mut out = Sum::new();
        for &j in s {
            if let Some(p) = self.product(i, j) {
                add_into(&mut out, p);
            }
        }
        out
    }

    fn diff_sum(&self, s: &Sum) -> Sum {
        let mut out = Sum::new();
        for &i in s {
            add_into(&mut out, &self.diff[i]);
        }
        out
    }

    fn right_partners<'a>(&'a self, alg: &StrandsAlgebra, i: usize) -> &'a [usize] {
        self.by_left.get(&alg.right_idem(&self.basis[i])).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn d_squared(t: &ProductTable) -> CheckReport {
    let mut r = CheckReport::default();
    for i in 0..t.len() {
        if !t.diff_sum(&t.diff[i]).is_empty() {
            r.violations.push(format!("d² ≠ 0 on basis element {}", t.basis[i]));
        }
    }
    r
}

/// d(ab) = d(a) b + a d(b) for every compatible pair.
pub fn leibniz(alg: &StrandsAlgebra, t: &ProductTable) -> CheckReport {
    let mut r = CheckReport::default();
    for i in 0..t.len() {
        for &j in t.right_partners(alg, i) {
            let mut lhs = t.product(i, j).map(|p| t.diff_sum(p)).unwrap_or_default();
            add_into(&mut lhs, &t.mul_sum_right(&t.diff[i], j));
            add_into(&mut lhs, &t.mul_sum_left(i, &t.diff[j]));
            if !lhs.is_empty() {
                r.violations.push(format!("Leibniz fails at ({}, {})", t.basis[i], t.basis[j]));
            }
        }
    }
    r
}

/// (ab)c = a(bc) for every compatible triple; triples where both ab and bc
/// vanish are trivially fine and skipped.
pub fn associativity(alg: &StrandsAlgebra, t: &ProductTable) -> CheckReport {
    let mut r = CheckReport::default();
    let check = |i: usize, j: usize, k: usize, r: &mut CheckReport| {
        let left = t.product(i, j).map(|p| t.mul_sum_right(p, k)).unwrap_or_default();
        let right = t.product(j, k).map(|p| t.mul_sum_left(i, p)).unwrap_or_default();
        if left != right {
            r.violations.push(format!("associativity fails at ({}, {}, {})", t.basis[i], t.basis[j], t.basis[k]));
        }
    };
    let mut keys: Vec<(usize, usize)> = t.products.keys().copied().collect();
    keys.sort();
    for &(i, j) in &keys {
        for &k in t.right_partners(alg, j) {
            check(i, j, k, &mut r);
        }
    }
    // remaining triples have ab = 0, so only bc ≠ 0 matters
    for &(j, k) in &keys {
        for &i in t.by_right.get(&alg.left_idem(&t.basis[j])).map(Vec::as_slice).unwrap_or(&[]) {
            if t.product(i, j).is_none() {
                check(i, j, k, &mut r);
            }
        }
    }
    r
}

/// I_occ(i)·I_occ(j) = δ_ij I_occ(i) and I·a = a = a·I.
pub fn idempotent_laws(alg: &StrandsAlgebra) -> CheckReport {
    let mut r = CheckReport::default();
    let idems = alg.idempotents();
    for e in &idems {
        for f in &idems {
            let p = alg.mul_gens(e, f);
            let expected = if e == f { AlgebraElement::from_generator(e.clone()) } else { AlgebraElement::zero() };
            if p != expected {
                r.violations.push(format!("{e}·{f} = {}", alg.describe_element(&p)));
            }
        }
    }
    let unit = alg.unit();
    for g in alg.enumerate_basis() {
        let a = AlgebraElement::from_generator(g.clone());
        if alg.mul_unchecked(&unit, &a) != a || alg.mul_unchecked(&a, &unit) != a {
            r.violations.push(format!("I does not act as identity on {g}"));
        }
    }
    r
}

/// Digits of a chord label, e.g. "456" → [4, 5, 6].
fn digits(label: &str) -> Vec<u32> {
    label.chars().filter_map(|c| c.to_digit(10)).collect()
}

fn digit_rule_holds(word: &[&str]) -> bool {
    let mut count = [0u32; 10];
    for l in word {
        for d in digits(l) {
            count[d as usize] += 1;
        }
    }
    (1..=8).all(|d| count[d] <= if d == 2 || d == 5 { 2 } else { 1 })
}

/// All nonzero chord words over the given labels, found by extending only
/// nonzero prefixes.
pub fn nonzero_words(alg: &StrandsAlgebra, labels: &[&'static str]) -> Vec<(Vec<&'static str>, AlgebraElement)> {
    let singles: Vec<AlgebraElement> =
        labels.iter().map(|l| alg.chord_word(&[*l]).expect("label from the diagram")).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<&'static str>, AlgebraElement)> = vec![(Vec::new(), alg.unit())];
    while let Some((word, value)) = stack.pop() {
        for (l, s) in labels.iter().zip(&singles) {
            let next = alg.mul_unchecked(&value, s);
            if next.is_zero() {
                continue;
            }
            let mut w = word.clone();
            w.push(l);
            out.push((w.clone(), next.clone()));
            stack.push((w, next));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every nonzero word uses the digits 1, 3, 4, 6, 7, 8 at most once and
/// 2, 5 at most twice.
pub fn digit_rule(alg: &StrandsAlgebra, labels: &[&'static str]) -> (usize, CheckReport) {
    let words = nonzero_words(alg, labels);
    let mut r = CheckReport::default();
    for (w, _) in &words {
        if !digit_rule_holds(w) {
            r.violations.push(format!("({}) is nonzero but breaks the digit rule", w.join(",")));
        }
    }
    (words.len(), r)
}

/// (i, j) and (j, i) vanish when i ∈ {123, 456, 78} and j shares one of the
/// digits 1, 3, 4, 6, 7, 8 with it.
pub fn overlap_rule(alg: &StrandsAlgebra, labels: &[&'static str]) -> (usize, CheckReport) {
    let mut r = CheckReport::default();
    let mut pairs = 0;
    for i in ["123", "456", "78"] {
        for j in labels {
            let shared = digits(i).into_iter().filter(|d| ![2, 5].contains(d)).any(|d| digits(j).contains(&d));
            if !shared {
                continue;
            }
            for word in [[i, *j], [*j, i]] {
                pairs += 1;
                match alg.chord_word(&word) {
                    Ok(v) if v.is_zero() => {}
                    Ok(v) => {
                        r.violations.push(format!("({}) = {} should vanish", word.join(","), alg.describe_element(&v)))
                    }
                    Err(e) => r.violations.push(e.to_string()),
                }
            }
        }
    }
    (pairs, r)
}

/// The fifteen chord labels of J′.
pub const J_PRIME: [&str; 15] = ["1", "2", "3", "4", "5", "6", "7", "8", "12", "23", "45", "56", "123", "456", "78"];
