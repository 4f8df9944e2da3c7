//! F2 linear algebra on morphism complexes: solving ∂H = c, checking the
//! exact-triangle identities and certifying the cone equivalence.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{StrandsAlgebra, StrandsGenerator};
use crate::dmod::{compose, mapping_cone, morphism_boundary, DMorphism, Tensor, TypeDStructure};
use crate::error::HomError;
use crate::models::SkeinIndex;

/// A bit-packed F2 vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// A dense F2 matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix { ncols, rows: vec![BitVec::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            v.set(r, row.get(c));
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &BitVec) {
        for r in 0..self.nrows() {
            self.rows[r].set(c, v.get(r));
        }
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            out.set(r, row.dot(v));
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows(), "inner dimensions must agree");
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for k in row.ones() {
                out.rows[r].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(self.ncols).len()
    }

    /// Gauss–Jordan on the first `upto` columns, lowest-index pivots.
    /// Returns the pivot columns in row order.
    fn eliminate(&mut self, upto: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..upto {
            let Some(p) = (r..self.nrows()).find(|&i| self.rows[i].get(c)) else { continue };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for i in 0..self.nrows() {
                if i != r && self.rows[i].get(c) {
                    self.rows[i].xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Some x with A x = b, or the ranks of A and [A | b] when none exists.
    pub fn solve(&self, b: &BitVec) -> Result<BitVec, RankCertificate> {
        let n = self.ncols;
        let mut aug = BitMatrix::zeros(self.nrows(), n + 1);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                aug.rows[r].set(c, true);
            }
            aug.rows[r].set(n, b.get(r));
        }
        let pivots = aug.eliminate(n);
        let rank = pivots.len();
        if aug.rows[rank..].iter().any(|row| row.get(n)) {
            return Err(RankCertificate { rank, augmented_rank: rank + 1 });
        }
        let mut x = BitVec::zeros(n);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, aug.rows[r].get(n));
        }
        Ok(x)
    }
}

/// Proof of unsolvability: rank A < rank [A | c].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub augmented_rank: usize,
}

/// One elementary morphism: source generator ↦ a ⊗ target generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elementary {
    pub from: usize,
    pub coef: StrandsGenerator,
    pub to: usize,
}

/// Mor(M, N) with its elementary basis and boundary matrix.
#[derive(Clone, Debug)]
pub struct MorComplex {
    source: Arc<TypeDStructure>,
    target: Arc<TypeDStructure>,
    basis: Vec<Elementary>,
    index: HashMap<(usize, StrandsGenerator, usize), usize>,
    boundary: BitMatrix,
}

pub fn mor_basis(alg: &StrandsAlgebra, source: Arc<TypeDStructure>, target: Arc<TypeDStructure>) -> MorComplex {
    let algebra_basis = alg.enumerate_basis();
    let mut basis = Vec::new();
    for i in 0..source.len() {
        for j in 0..target.len() {
            for a in &algebra_basis {
                if alg.left_idem(a) == source.idem(i) && alg.right_idem(a) == target.idem(j) {
                    basis.push(Elementary { from: i, coef: a.clone(), to: j });
                }
            }
        }
    }
    let index = basis.iter().enumerate().map(|(n, e)| ((e.from, e.coef.clone(), e.to), n)).collect();
    let mut complex = MorComplex { source, target, basis, index, boundary: BitMatrix::zeros(0, 0) };
    let dim = complex.dim();
    let mut boundary = BitMatrix::zeros(dim, dim);
    for n in 0..dim {
        let d = morphism_boundary(alg, &complex.elementary(n));
        let col = complex.decompose(&d).expect("the boundary of a compatible morphism stays compatible");
        boundary.set_column(n, &col);
    }
    complex.boundary = boundary;
    complex
}

impl MorComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Elementary] {
        &self.basis
    }

    pub fn source(&self) -> &Arc<TypeDStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TypeDStructure> {
        &self.target
    }

    pub fn boundary_matrix(&self) -> &BitMatrix {
        &self.boundary
    }

    pub fn squares_to_zero(&self) -> bool {
        self.boundary.mul(&self.boundary).is_zero()
    }

    pub fn elementary(&self, n: usize) -> DMorphism {
        let e = &self.basis[n];
        let mut table = vec![Tensor::zero(); self.source.len()];
        table[e.from].toggle(e.coef.clone(), e.to);
        DMorphism::from_table(self.source.clone(), self.target.clone(), table)
    }

    /// Coordinates of `f` in the elementary basis.
    pub fn decompose(&self, f: &DMorphism) -> Result<BitVec, HomError> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(HomError::Module(crate::error::ModuleError::Shape));
        }
        let mut v = BitVec::zeros(self.dim());
        for (i, row) in f.table().iter().enumerate() {
            for (a, j) in row.iter() {
                let n = self.index.get(&(i, a.clone(), *j)).ok_or_else(|| {
                    HomError::OutsideBasis(format!("{} -> {} ⊗ {}", self.source.name(i), a, self.target.name(*j)))
                })?;
                v.flip(*n);
            }
        }
        Ok(v)
    }

    pub fn assemble(&self, v: &BitVec) -> DMorphism {
        let mut table = vec![Tensor::zero(); self.source.len()];
        for n in v.ones() {
            let e = &self.basis[n];
            table[e.from].toggle(e.coef.clone(), e.to);
        }
        DMorphism::from_table(self.source.clone(), self.target.clone(), table)
    }

    pub fn boundary_of(&self, f: &DMorphism) -> Result<DMorphism, HomError> {
        Ok(self.assemble(&self.boundary.mul_vec(&self.decompose(f)?)))
    }
}

/// Outcome of solving ∂H = c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(DMorphism),
    NoSolution(RankCertificate),
}

impl Solution {
    pub fn witness(&self) -> Option<&DMorphism> {
        match self {
            Solution::Solved(h) => Some(h),
            Solution::NoSolution(_) => None,
        }
    }
}

pub fn solve_boundary(complex: &MorComplex, c: &DMorphism) -> Result<Solution, HomError> {
    let target = complex.decompose(c)?;
    Ok(match complex.boundary.solve(&target) {
        Ok(x) => Solution::Solved(complex.assemble(&x)),
        Err(cert) => Solution::NoSolution(cert),
    })
}

/// One checked identity with its witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub checks: Vec<IdentityCheck>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    /// Condition numbers (1, 2 or 3) that fail for some k.
    pub fn failed_conditions(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.failures().filter_map(|c| c.identity.as_bytes().get(4).map(|b| b - b'0')).collect();
        out.dedup();
        out
    }
}

fn describe_nonzero(alg: &StrandsAlgebra, f: &DMorphism) -> Option<String> {
    let parts: Vec<String> = (0..f.source().len())
        .filter(|&i| !f.image(i).is_zero())
        .map(|i| format!("{} ↦ {}", f.source().name(i), f.describe_image(alg, i)))
        .collect();
    (!parts.is_empty()).then(|| parts.join("; "))
}

fn check(identity: String, lhs: Result<DMorphism, HomError>, alg: &StrandsAlgebra) -> IdentityCheck {
    match lhs {
        Ok(d) => {
            let witness = describe_nonzero(alg, &d);
            IdentityCheck { identity, holds: witness.is_none(), witness }
        }
        Err(e) => IdentityCheck { identity, holds: false, witness: Some(e.to_string()) },
    }
}

/// The triple (f, φ, κ) indexed by [`SkeinIndex::slot`].
#[derive(Clone, Debug)]
pub struct TriangleData {
    pub fs: [DMorphism; 3],
    pub phis: [DMorphism; 3],
    pub kappas: [DMorphism; 3],
}

impl TriangleData {
    fn f(&self, k: SkeinIndex) -> &DMorphism {
        &self.fs[k.slot()]
    }

    fn phi(&self, k: SkeinIndex) -> &DMorphism {
        &self.phis[k.slot()]
    }

    fn kappa(&self, k: SkeinIndex) -> &DMorphism {
        &self.kappas[k.slot()]
    }
}

fn sum(a: &DMorphism, b: &DMorphism) -> Result<DMorphism, HomError> {
    Ok(a.add(b)?)
}

/// (1) ∂f_k = 0, (2) f_{k+1}∘f_k + ∂φ_k = 0,
/// (3) f_{k+2}∘φ_k + φ_{k+1}∘f_k + ∂κ_k = Id for every k.
pub fn verify_triangle(alg: &StrandsAlgebra, t: &TriangleData) -> TriangleReport {
    let mut report = TriangleReport::default();
    for k in SkeinIndex::ALL {
        let lhs = Ok(morphism_boundary(alg, t.f(k)));
        report.checks.push(check(format!("cond1:k={k}"), lhs, alg));
    }
    for k in SkeinIndex::ALL {
        let lhs = compose(alg, t.f(k.succ()), t.f(k))
            .map_err(HomError::from)
            .and_then(|ff| sum(&ff, &morphism_boundary(alg, t.phi(k))));
        report.checks.push(check(format!("cond2:k={k}"), lhs, alg));
    }
    for k in SkeinIndex::ALL {
        let lhs = (|| {
            let a = compose(alg, t.f(k.succ().succ()), t.phi(k))?;
            let b = compose(alg, t.phi(k.succ()), t.f(k))?;
            let id = DMorphism::identity(t.f(k).source().clone());
            sum(&sum(&sum(&a, &b)?, &morphism_boundary(alg, t.kappa(k)))?, &id)
        })();
        report.checks.push(check(format!("cond3:k={k}"), lhs, alg));
    }
    report
}

/// Id_M is not null-homotopic: the rank certificate for ∂H = Id.
pub fn identity_obstruction(alg: &StrandsAlgebra, m: Arc<TypeDStructure>) -> Result<Solution, HomError> {
    let complex = mor_basis(alg, m.clone(), m.clone());
    solve_boundary(&complex, &DMorphism::identity(m))
}

/// Certified maps between BSD(B_k) and Cone(f_{k+1}).
#[derive(Clone, Debug)]
pub struct ConeEquivalence {
    pub k: SkeinIndex,
    pub cone: Arc<TypeDStructure>,
    pub g: DMorphism,
    pub psi: DMorphism,
    pub h: DMorphism,
    pub certificates: Vec<IdentityCheck>,
}

fn embed(alg_rows: &[Tensor], offset: usize, into: &mut [Tensor]) {
    for (row, out) in alg_rows.iter().zip(into.iter_mut()) {
        for (a, y) in row.iter() {
            out.toggle(a.clone(), y + offset);
        }
    }
}

/// G(w) = (f_k w, φ_k w) and Ψ(u, v) = φ_{k+1} u + f_{k+2} v.
pub fn skein_equivalence(alg: &StrandsAlgebra, t: &TriangleData, k: SkeinIndex) -> Result<ConeEquivalence, HomError> {
    let (k1, k2) = (k.succ(), k.succ().succ());
    let bk = t.f(k).source().clone();
    let cone = Arc::new(mapping_cone(alg, t.f(k1))?);
    let split = t.f(k1).source().len();

    let mut g_table = vec![Tensor::zero(); bk.len()];
    embed(t.f(k).table(), 0, &mut g_table);
    embed(t.phi(k).table(), split, &mut g_table);
    let g = DMorphism::from_table(bk.clone(), cone.clone(), g_table);

    let mut psi_table: Vec<Tensor> = t.phi(k1).table().to_vec();
    psi_table.extend(t.f(k2).table().iter().cloned());
    let psi = DMorphism::from_table(cone.clone(), bk.clone(), psi_table);

    let mut certificates = Vec::new();
    let mut demand = |name: &str, lhs: Result<DMorphism, HomError>| -> Result<(), HomError> {
        let c = check(format!("{name}:k={k}"), lhs, alg);
        let failed = (!c.holds).then(|| format!("{}: {}", c.identity, c.witness.clone().unwrap_or_default()));
        certificates.push(c);
        match failed {
            Some(msg) => Err(HomError::Certificate(msg)),
            None => Ok(()),
        }
    };
    demand("dG", Ok(morphism_boundary(alg, &g)))?;
    demand("dPsi", Ok(morphism_boundary(alg, &psi)))?;
    demand(
        "PsiG+Id+dkappa",
        compose(alg, &psi, &g)
            .map_err(HomError::from)
            .and_then(|pg| sum(&sum(&pg, &DMorphism::identity(bk.clone()))?, &morphism_boundary(alg, t.kappa(k)))),
    )?;
    let target = sum(&compose(alg, &g, &psi)?, &DMorphism::identity(cone.clone()))?;
    let complex = mor_basis(alg, cone.clone(), cone.clone());
    let h = match solve_boundary(&complex, &target)? {
        Solution::Solved(h) => h,
        Solution::NoSolution(cert) => {
            return Err(HomError::Certificate(format!(
                "GPsi+Id is not a boundary on Cone(f{k1}): rank {} < {}",
                cert.rank, cert.augmented_rank
            )))
        }
    };
    demand("dH=GPsi+Id", Ok(sum(&morphism_boundary(alg, &h), &target)?))?;
    Ok(ConeEquivalence { k, cone, g, psi, h, certificates })
}

/// A certificate bundle entry: {identity, status, witness-morphism}.
pub fn certificate_json(alg: &StrandsAlgebra, identity: &str, status: bool, witness: Option<&DMorphism>) -> Value {
    serde_json::json!({
        "identity": identity,
        "status": if status { "pass" } else { "fail" },
        "witness": witness.map(|w| w.to_json(alg)),
    })
}
