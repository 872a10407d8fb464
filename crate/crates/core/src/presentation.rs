//! Relations between two commuting nilpotent operators: the kernel of
//! `K[u, w] -> K[d1, d2]`, computed slice by slice.
//!
//! Slices are graded by a weighted degree. For `δ1`, `δ2` on the sections of
//! `a E∞ + b F0` the weights are `deg u = 1`, `deg w = n + 1`: on `x^k y^m`
//! of weight `k + (n+1) m` both operators are homogeneous, so the kernel is
//! the direct sum of its slices.

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{delta_matrices, DerivationError};
use crate::exactlin::{Matrix, Rational, Subspace};
use crate::hirzebruch::HDivisor;
use crate::poly::{Polynomial, TermOrder};

pub type BiPoly = Polynomial;

pub const VARIABLES: [&str; 2] = ["u", "w"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("operators do not commute")]
    NonCommuting,
    #[error("operators must be square of one common size")]
    ShapeMismatch,
    #[error("polynomial must be in 2 variables, found {0}")]
    NotBivariate(usize),
    #[error("relation check needs b >= 2a >= 2, got a = {a}, b = {b}")]
    Precondition { a: u32, b: u32 },
    #[error("grading weights must be positive")]
    ZeroWeight,
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

pub fn display(p: &BiPoly) -> String {
    p.to_string_with(&VARIABLES, TermOrder::Lex)
}

/// Weights `(deg u, deg w)` making `δ1`, `δ2` homogeneous on the surface of index `n`.
pub fn grading_weights(n: u32) -> (u32, u32) {
    (1, n + 1)
}

/// `u^i w^j` of the given weighted degree, `u`-degree descending.
pub fn monomials_of_weight(degree: u32, weights: (u32, u32)) -> Vec<(u32, u32)> {
    let (wu, ww) = weights;
    (0..=degree / ww)
        .filter(|j| (degree - j * ww).is_multiple_of(wu))
        .map(|j| ((degree - j * ww) / wu, j))
        .collect()
}

fn check_pair(d1: &Matrix, d2: &Matrix) -> Result<(), PresentationError> {
    if !d1.is_square() || !d2.is_square() || d1.rows() != d2.rows() {
        return Err(PresentationError::ShapeMismatch);
    }
    if !d1.commutes_with(d2) {
        return Err(PresentationError::NonCommuting);
    }
    Ok(())
}

/// `sum c_ij d1^i d2^j`.
pub fn evaluate(p: &BiPoly, d1: &Matrix, d2: &Matrix) -> Result<Matrix, PresentationError> {
    if p.nvars() != 2 {
        return Err(PresentationError::NotBivariate(p.nvars()));
    }
    check_pair(d1, d2)?;
    let mut total = Matrix::zeros(d1.rows(), d1.cols());
    for (e, c) in p.terms() {
        total = &total + &(&d1.pow(e[0]) * &d2.pow(e[1])).scale(c);
    }
    Ok(total)
}

/// Caches powers of the two operators.
struct Evaluator {
    d1_pows: Vec<Matrix>,
    d2_pows: Vec<Matrix>,
}

impl Evaluator {
    fn new(d1: &Matrix, d2: &Matrix) -> Self {
        Evaluator { d1_pows: vec![Matrix::identity(d1.rows()), d1.clone()], d2_pows: vec![Matrix::identity(d2.rows()), d2.clone()] }
    }

    fn power(pows: &mut Vec<Matrix>, k: usize) -> &Matrix {
        while pows.len() <= k {
            let next = &pows[pows.len() - 1] * &pows[1];
            pows.push(next);
        }
        &pows[k]
    }

    fn monomial(&mut self, i: u32, j: u32) -> Vec<Rational> {
        let a = Evaluator::power(&mut self.d1_pows, i as usize).clone();
        let b = Evaluator::power(&mut self.d2_pows, j as usize);
        (&a * b).into_entries()
    }

    fn relations(&mut self, monomials: &[(u32, u32)]) -> Subspace {
        let columns: Vec<Vec<Rational>> = monomials.iter().map(|&(i, j)| self.monomial(i, j)).collect();
        let rows = self.d1_pows[0].rows();
        Matrix::from_columns(rows * rows, &columns).expect("flattened operators").kernel_basis()
    }
}

fn to_bipoly(monomials: &[(u32, u32)], coeffs: &[Rational]) -> BiPoly {
    Polynomial::from_terms(2, monomials.iter().zip(coeffs).map(|(&(i, j), c)| (vec![i, j], c.clone())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSlice {
    pub degree: u32,
    pub monomials: Vec<(u32, u32)>,
    /// Row-reduced basis of the relations against `monomials`.
    pub relations: Subspace,
}

impl KernelSlice {
    pub fn dim(&self) -> usize {
        self.relations.dim()
    }

    pub fn basis(&self) -> Vec<BiPoly> {
        self.relations.basis().iter().map(|v| to_bipoly(&self.monomials, v)).collect()
    }

    pub fn contains(&self, p: &BiPoly) -> bool {
        let coords: Vec<Rational> = self.monomials.iter().map(|&(i, j)| p.coeff(&[i, j])).collect();
        let covered = p.terms().all(|(e, _)| self.monomials.contains(&(e[0], e[1])));
        covered && self.relations.member(&coords).unwrap_or(false)
    }
}

/// Relations of each weighted degree `0..=max_degree`.
pub fn kernel_slices(
    d1: &Matrix,
    d2: &Matrix,
    max_degree: u32,
    weights: (u32, u32),
) -> Result<Vec<KernelSlice>, PresentationError> {
    check_pair(d1, d2)?;
    if weights.0 == 0 || weights.1 == 0 {
        return Err(PresentationError::ZeroWeight);
    }
    let mut eval = Evaluator::new(d1, d2);
    Ok((0..=max_degree)
        .map(|degree| {
            let monomials = monomials_of_weight(degree, weights);
            let relations = eval.relations(&monomials);
            KernelSlice { degree, monomials, relations }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorEntry {
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationChecks {
    pub item1: bool,
    pub item2: bool,
    pub item3: bool,
    pub item4: bool,
    pub generators_vanish: bool,
    pub quotient_dim_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCount {
    pub l: u32,
    pub relations: usize,
    pub expected: usize,
    pub tail_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationsReport {
    pub a: u32,
    pub b: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(skip)]
    pub generator_polys: Vec<BiPoly>,
    pub families: Vec<FamilyCount>,
    pub checks: RelationChecks,
    pub quotient_dim: usize,
    pub expected_dim: usize,
    pub failures: Vec<String>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `w^(a+1)`, the monomials of weight above `a + b`, and the
/// relations inside each family `{u^(a+b-l-2s) w^s}` generate the kernel for
/// `δ1`, `δ2` on the surface of index 1.
pub fn verify_allrelations(a: u32, b: u32) -> Result<RelationsReport, PresentationError> {
    if a < 1 || b < 2 * a {
        return Err(PresentationError::Precondition { a, b });
    }
    let (d1, d2) = delta_matrices(1, i64::from(a), i64::from(b))?;
    let (d1, d2) = (d1.matrix, d2.matrix);
    let weights = grading_weights(1);
    let top = a + b;
    let slices = kernel_slices(&d1, &d2, top + 2, weights)?;
    let mut eval = Evaluator::new(&d1, &d2);
    let mut failures = Vec::new();

    let w_top = Polynomial::monomial(2, vec![0, a + 1], Rational::from_integer(1.into()));
    let item1 = evaluate(&w_top, &d1, &d2)?.is_zero();
    if !item1 {
        failures.push(format!("w^{} is not a relation", a + 1));
    }

    let mut item2 = true;
    for degree in [top + 1, top + 2] {
        let slice = &slices[degree as usize];
        if slice.dim() != slice.monomials.len() {
            item2 = false;
            failures.push(format!("not every monomial of weight {degree} is a relation"));
        }
    }

    let mut generators = vec![w_top.clone()];
    for &(i, j) in &slices[(top + 1) as usize].monomials {
        if j < a + 1 {
            generators.push(Polynomial::monomial(2, vec![i, j], Rational::from_integer(1.into())));
        }
    }

    let mut families = Vec::new();
    let mut item3 = true;
    for l in 0..=a {
        let family: Vec<(u32, u32)> = (0..=a).map(|s| (top - l - 2 * s, s)).collect();
        let rels = eval.relations(&family);
        let tail = &family[(a - l) as usize..];
        let tail_independent = eval.relations(tail).is_zero();
        let count = FamilyCount { l, relations: rels.dim(), expected: (a - l) as usize, tail_independent };
        if count.relations != count.expected || !tail_independent {
            item3 = false;
            failures.push(format!("family l = {l}: {} relations, expected {}", count.relations, count.expected));
        }
        generators.extend(rels.basis().iter().map(|v| to_bipoly(&family, v)));
        families.push(count);
    }

    let mut generators_vanish = true;
    for g in &generators {
        if !evaluate(g, &d1, &d2)?.is_zero() {
            generators_vanish = false;
            failures.push(format!("generator {} does not vanish", display(g)));
        }
    }

    let weight = |p: &BiPoly| p.terms().next().map_or(0, |(e, _)| e[0] * weights.0 + e[1] * weights.1);
    let mut item4 = true;
    for slice in slices.iter().take((top + 2) as usize) {
        let mut products = Vec::new();
        for g in &generators {
            let wg = weight(g);
            if wg > slice.degree {
                continue;
            }
            for (i, j) in monomials_of_weight(slice.degree - wg, weights) {
                let m = Polynomial::monomial(2, vec![i, j], Rational::from_integer(1.into()));
                let p = &m * g;
                products.push(slice.monomials.iter().map(|&(i, j)| p.coeff(&[i, j])).collect::<Vec<_>>());
            }
        }
        let span = Subspace::span(slice.monomials.len(), &products).expect("slice coordinates");
        if span != slice.relations {
            item4 = false;
            failures.push(format!("generators do not span the relations of weight {}", slice.degree));
        }
    }

    let quotient_dim: usize = slices.iter().map(|s| s.monomials.len() - s.dim()).sum();
    let expected_dim = HDivisor::new(1, i64::from(a), i64::from(b)).section_count_formula() as usize;
    let quotient_dim_matches = quotient_dim == expected_dim;
    if !quotient_dim_matches {
        failures.push(format!("quotient dimension {quotient_dim}, expected {expected_dim}"));
    }

    Ok(RelationsReport {
        a,
        b,
        generators: generators.iter().map(|g| GeneratorEntry { poly: display(g) }).collect(),
        generator_polys: generators,
        families,
        checks: RelationChecks { item1, item2, item3, item4, generators_vanish, quotient_dim_matches },
        quotient_dim,
        expected_dim,
        failures,
    })
}
