//! Isomorphism certificates between local algebras and a monomiality
//! decision for 2-generated algebras.
//!
//! The decision uses the derivation algebra. Its image `h` in
//! `gl(m/m^2)` has toral rank 2 exactly when the automorphism group contains
//! a two-dimensional torus, which is the case exactly for monomial algebras.
//! When such a torus splits over the rationals its weight vectors give
//! monomial generators, and the resulting isomorphism is handed to the
//! independent certificate checker.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{closure_table, local_view, span_closure, AlgebraError, AlgebraTable, Closure, LocalView};
use crate::exactlin::{is_zero_vec, rat, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::format::{algebra_to_json, vector_to_json};
use crate::monomial::{
    dedup_swap, enumerate_quotients_2v, monomial_label, MonomialError, MonomialQuotient, DEFAULT_ENUMERATION_BOUND,
};

pub const DEFAULT_BOUND: usize = DEFAULT_ENUMERATION_BOUND;

#[derive(Debug, Error, PartialEq)]
pub enum IsomorphyError {
    #[error("the algebra needs {0} generators, expected 2")]
    NotTwoGenerated(usize),
    #[error("dimension {dim} exceeds the bound {bound}")]
    BoundExceeded { dim: usize, bound: usize },
    #[error("substitution leaves the leading coefficients singular")]
    SingularSubstitution,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("{side} algebra is not a valid local algebra: {reason}")]
    InvalidAlgebra { side: &'static str, reason: String },
    #[error("element for {label} has length {found}, expected {expected}")]
    ElementLength { label: String, expected: usize, found: usize },
    #[error("source generators span a subalgebra of dimension {generated}, not {dim}")]
    NotGenerating { generated: usize, dim: usize },
    #[error("image of {label} disagrees with its expression in the other generators")]
    InconsistentGenerator { label: String },
    #[error("relation violated at {relation}")]
    RelationViolated { relation: String },
    #[error("source has dimension {source_dim}, target has dimension {target_dim}")]
    DimensionMismatch { source_dim: usize, target_dim: usize },
    #[error("induced linear map has rank {rank}, expected {dim}")]
    RankDefect { rank: usize, dim: usize },
    #[error("the image of U1 is not U2")]
    SubspaceMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorImage {
    pub label: String,
    /// The generator in the source basis.
    pub element: Vec<Rational>,
    /// Its image in the target basis.
    pub image: Vec<Rational>,
}

/// Bases of `U1` in the source and `U2` in the target.
pub type SubspacePair = (Vec<Vec<Rational>>, Vec<Vec<Rational>>);

/// A proposed isomorphism, given on algebra generators of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoCertificate {
    pub source: AlgebraTable,
    pub target: AlgebraTable,
    pub generator_images: Vec<GeneratorImage>,
    pub u_data: Option<SubspacePair>,
}

impl IsoCertificate {
    /// Sends each listed source basis element to the given target element.
    pub fn on_basis(source: AlgebraTable, target: AlgebraTable, images: &[(usize, Vec<Rational>)]) -> Self {
        let generator_images = images
            .iter()
            .map(|(i, image)| GeneratorImage {
                label: source.basis_labels()[*i].clone(),
                element: source.basis_element(*i),
                image: image.clone(),
            })
            .collect();
        IsoCertificate { source, target, generator_images, u_data: None }
    }

    pub fn to_json(&self) -> Value {
        let images: Vec<Value> = self
            .generator_images
            .iter()
            .map(|g| json!({"label": g.label, "element": vector_to_json(&g.element), "image": vector_to_json(&g.image)}))
            .collect();
        let mut doc = json!({
            "source": algebra_to_json(&self.source),
            "target": algebra_to_json(&self.target),
            "generator_images": images,
        });
        if let Some((u1, u2)) = &self.u_data {
            doc["U1"] = Value::Array(u1.iter().map(|u| vector_to_json(u)).collect());
            doc["U2"] = Value::Array(u2.iter().map(|u| vector_to_json(u)).collect());
        }
        doc
    }
}

/// Checks a certificate and returns the induced linear map, target
/// coordinates of the images of the source basis.
pub fn induced_map(c: &IsoCertificate) -> Result<Matrix, CertificateViolation> {
    for (side, table) in [("source", &c.source), ("target", &c.target)] {
        local_view(table).map_err(|e| CertificateViolation::InvalidAlgebra { side, reason: e.to_string() })?;
    }
    let (n, m) = (c.source.dim(), c.target.dim());
    for g in &c.generator_images {
        for (v, expected) in [(&g.element, n), (&g.image, m)] {
            if v.len() != expected {
                return Err(CertificateViolation::ElementLength { label: g.label.clone(), expected, found: v.len() });
            }
        }
    }
    let gens: Vec<Vec<Rational>> = c.generator_images.iter().map(|g| g.element.clone()).collect();
    let labels: Vec<String> = c.generator_images.iter().map(|g| g.label.clone()).collect();
    let closure = span_closure(&c.source, &gens, &labels);
    if closure.basis.len() != n {
        return Err(CertificateViolation::NotGenerating { generated: closure.basis.len(), dim: n });
    }
    let images: Vec<Vec<Rational>> = closure
        .words
        .iter()
        .map(|w| {
            w.iter().zip(&c.generator_images).fold(c.target.one(), |acc, (&k, g)| {
                if k == 0 {
                    acc
                } else {
                    c.target.mul(&acc, &c.target.pow(&g.image, k))
                }
            })
        })
        .collect();
    let words = Matrix::from_columns(n, &closure.basis).expect("closure vectors");
    let inverse = words.inverse().expect("closure basis is a basis");
    let map = &Matrix::from_columns(m, &images).expect("image vectors") * &inverse;

    for g in &c.generator_images {
        if map.mul_vec(&g.element) != g.image {
            return Err(CertificateViolation::InconsistentGenerator { label: g.label.clone() });
        }
    }
    let degree = |i: usize| closure.words[i].iter().sum::<u32>();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (degree(i) + degree(j), i, j));
    for (i, j) in pairs {
        let lhs = map.mul_vec(&c.source.mul(&closure.basis[i], &closure.basis[j]));
        if lhs != c.target.mul(&images[i], &images[j]) {
            return Err(CertificateViolation::RelationViolated {
                relation: format!("{}*{}", closure.labels[i], closure.labels[j]),
            });
        }
    }
    if n != m {
        return Err(CertificateViolation::DimensionMismatch { source_dim: n, target_dim: m });
    }
    let rank = map.rank();
    if rank != n {
        return Err(CertificateViolation::RankDefect { rank, dim: n });
    }
    if let Some((u1, u2)) = &c.u_data {
        let mapped: Vec<Vec<Rational>> = u1.iter().map(|u| map.mul_vec(u)).collect();
        let same = match (Subspace::span(m, &mapped), Subspace::span(m, u2)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        if !same {
            return Err(CertificateViolation::SubspaceMismatch);
        }
    }
    Ok(map)
}

pub fn verify_certificate(c: &IsoCertificate) -> Result<(), CertificateViolation> {
    induced_map(c).map(|_| ())
}

/// Common zeros, over an algebraic closure, of the squaring map
/// `m/m^2 -> m^2/m^3` read as a family of binary quadratic forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareZeroLocus {
    Everywhere,
    Points(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SqZeroType {
    /// Dimension of the span of the component forms.
    pub rank: usize,
    pub zeros: SquareZeroLocus,
}

impl SqZeroType {
    pub fn has_square_zero_direction(&self) -> bool {
        self.zeros != SquareZeroLocus::Points(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub hilbert_samuel: Vec<usize>,
    pub socle_dim: usize,
    pub nilpotency_index: usize,
    pub sq_zero_type: Option<SqZeroType>,
}

impl Fingerprint {
    /// Names of the entries in which two fingerprints differ.
    pub fn differences(&self, other: &Fingerprint) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.hilbert_samuel != other.hilbert_samuel {
            out.push("hilbert_samuel");
        }
        if self.socle_dim != other.socle_dim {
            out.push("socle_dim");
        }
        if self.nilpotency_index != other.nilpotency_index {
            out.push("nilpotency_index");
        }
        if self.sq_zero_type != other.sq_zero_type {
            out.push("sq_zero_type");
        }
        out
    }
}

/// Coordinates of `x` in `basis` modulo `rest`, assuming `x` lies in their sum.
fn coordinates_modulo(n: usize, basis: &[Vec<Rational>], rest: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    let mut columns = basis.to_vec();
    columns.extend(rest.iter().cloned());
    let m = Matrix::from_columns(n, &columns).expect("vectors of the algebra");
    let full = m.solve(x).expect("element lies in the given subspace");
    full[..basis.len()].to_vec()
}

fn square_zero_type(view: &LocalView) -> Option<SqZeroType> {
    if view.embedding_dimension() != 2 {
        return None;
    }
    let n = view.algebra().dim();
    let g = view.layer_basis(1);
    let layer = view.layer_basis(2);
    let cube = view.power(3);
    let coords = |x: Vec<Rational>| coordinates_modulo(n, &layer, cube.basis(), &x);
    let table = view.algebra();
    let (p11, p12, p22) = (coords(table.mul(&g[0], &g[0])), coords(table.mul(&g[0], &g[1])), coords(table.mul(&g[1], &g[1])));
    // Component i is the form p11[i] x^2 + 2 p12[i] xy + p22[i] y^2.
    let forms: Vec<Vec<Rational>> =
        (0..layer.len()).map(|i| vec![p11[i].clone(), rat(2) * &p12[i], p22[i].clone()]).collect();
    let span = Subspace::span(3, &forms).expect("three coefficients");
    let zeros = match span.dim() {
        0 => SquareZeroLocus::Everywhere,
        1 => {
            let f = &span.basis()[0];
            let disc = &f[1] * &f[1] - rat(4) * &f[0] * &f[2];
            SquareZeroLocus::Points(if disc.is_zero() { 1 } else { 2 })
        }
        2 => {
            let rows = Matrix::from_rows(3, span.basis()).expect("three coefficients");
            let normal = rows.kernel_basis().basis()[0].clone();
            // (x^2, xy, y^2) must be proportional to the normal vector.
            let on_conic = &normal[1] * &normal[1] == &normal[0] * &normal[2];
            SquareZeroLocus::Points(usize::from(on_conic))
        }
        _ => SquareZeroLocus::Points(0),
    };
    Some(SqZeroType { rank: span.dim(), zeros })
}

pub fn fingerprint(view: &LocalView) -> Fingerprint {
    Fingerprint {
        hilbert_samuel: view.hilbert_samuel(),
        socle_dim: view.socle().dim(),
        nilpotency_index: view.nilpotency_index(),
        sq_zero_type: square_zero_type(view),
    }
}

/// A local algebra presented by two generators and the word basis they span.
struct TwoGenerated {
    n: usize,
    gens: Vec<Vec<Rational>>,
    closure: Closure,
    inverse: Matrix,
    powers: BTreeMap<(u32, u32), Vec<Rational>>,
    mult: BTreeMap<(u32, u32), Matrix>,
}

impl TwoGenerated {
    fn new(table: &AlgebraTable, gens: Vec<Vec<Rational>>) -> Self {
        let n = table.dim();
        let names = vec!["g1".to_string(), "g2".to_string()];
        let closure = span_closure(table, &gens, &names);
        let words = Matrix::from_columns(n, &closure.basis).expect("closure vectors");
        let inverse = words.inverse().expect("generators generate the algebra");
        TwoGenerated { n, gens, closure, inverse, powers: BTreeMap::new(), mult: BTreeMap::new() }
    }

    fn power(&mut self, table: &AlgebraTable, a: u32, b: u32) -> Vec<Rational> {
        if let Some(v) = self.powers.get(&(a, b)) {
            return v.clone();
        }
        let v = if a > 0 {
            let lower = self.power(table, a - 1, b);
            table.mul(&lower, &self.gens[0])
        } else if b > 0 {
            let lower = self.power(table, a, b - 1);
            table.mul(&lower, &self.gens[1])
        } else {
            table.one()
        };
        self.powers.insert((a, b), v.clone());
        v
    }

    fn mult_by_power(&mut self, table: &AlgebraTable, a: u32, b: u32) -> Matrix {
        if let Some(m) = self.mult.get(&(a, b)) {
            return m.clone();
        }
        let m = table.mult_operator(&self.power(table, a, b));
        self.mult.insert((a, b), m.clone());
        m
    }

    /// Relations `g^(w+e) - sum c_l g^(w_l)` for each word `w` and generator `e`.
    /// They generate the kernel of the presentation.
    fn border_relations(&mut self, table: &AlgebraTable) -> Vec<Vec<((u32, u32), Rational)>> {
        let words: Vec<(u32, u32)> = self.closure.words.iter().map(|w| (w[0], w[1])).collect();
        let mut out = Vec::new();
        for &(a, b) in &words {
            for next in [(a + 1, b), (a, b + 1)] {
                if words.contains(&next) {
                    continue;
                }
                let value = self.power(table, next.0, next.1);
                let coords = self.inverse.mul_vec(&value);
                let mut rel = vec![(next, Rational::one())];
                rel.extend(words.iter().zip(coords).filter(|(_, c)| !c.is_zero()).map(|(&w, c)| (w, -c)));
                out.push(rel);
            }
        }
        out
    }

    /// Derivations as pairs `(D g1, D g2)`: the images must annihilate every
    /// border relation under the Leibniz rule.
    fn derivations(&mut self, table: &AlgebraTable) -> Vec<(Vec<Rational>, Vec<Rational>)> {
        let n = self.n;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for rel in self.border_relations(table) {
            let mut block = Matrix::zeros(n, 2 * n);
            for ((a, b), c) in &rel {
                for (slot, k, lower) in [(0, *a, (a.wrapping_sub(1), *b)), (1, *b, (*a, b.wrapping_sub(1)))] {
                    if k == 0 {
                        continue;
                    }
                    let op = self.mult_by_power(table, lower.0, lower.1);
                    let factor = c * rat(i64::from(k));
                    for r in 0..n {
                        for col in 0..n {
                            let x = op.get(r, col);
                            if !x.is_zero() {
                                let cur = block.get(r, slot * n + col) + &factor * x;
                                block.set(r, slot * n + col, cur);
                            }
                        }
                    }
                }
            }
            rows.extend(block.row_vectors().into_iter().filter(|r| !is_zero_vec(r)));
        }
        let kernel = if rows.is_empty() {
            Subspace::full(2 * n)
        } else {
            Matrix::from_rows(2 * n, &rows).expect("rows of length 2n").kernel_basis()
        };
        kernel.basis().iter().map(|v| (v[..n].to_vec(), v[n..].to_vec())).collect()
    }

    /// Matrix of the derivation with the given generator images.
    fn derivation_matrix(&mut self, table: &AlgebraTable, dx: &[Rational], dy: &[Rational]) -> Matrix {
        let words: Vec<(u32, u32)> = self.closure.words.iter().map(|w| (w[0], w[1])).collect();
        let images: Vec<Vec<Rational>> = words
            .iter()
            .map(|&(a, b)| {
                let mut v = zero_vec(self.n);
                if a > 0 {
                    let t = table.mul(&self.power(table, a - 1, b), dx);
                    crate::exactlin::axpy(&mut v, &rat(i64::from(a)), &t);
                }
                if b > 0 {
                    let t = table.mul(&self.power(table, a, b - 1), dy);
                    crate::exactlin::axpy(&mut v, &rat(i64::from(b)), &t);
                }
                v
            })
            .collect();
        &Matrix::from_columns(self.n, &images).expect("image vectors") * &self.inverse
    }
}

/// Basis of the Lie algebra of derivations, as matrices on the algebra basis.
pub fn derivation_algebra(view: &LocalView) -> Vec<Matrix> {
    let table = view.algebra();
    if view.embedding_dimension() != 2 {
        return general_derivations(table);
    }
    let mut pres = TwoGenerated::new(table, view.layer_basis(1));
    pres.derivations(table).into_iter().map(|(dx, dy)| pres.derivation_matrix(table, &dx, &dy)).collect()
}

/// Derivations from the Leibniz rule on all basis pairs.
fn general_derivations(table: &AlgebraTable) -> Vec<Matrix> {
    let n = table.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            for l in 0..n {
                let mut row = zero_vec(n * n);
                for k in 0..n {
                    row[l * n + k] += &table.structure(i, j)[k];
                }
                for k in 0..n {
                    row[k * n + i] -= &table.structure(k, j)[l];
                    row[k * n + j] -= &table.structure(i, k)[l];
                }
                if !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Subspace::full(n * n)
    } else {
        Matrix::from_rows(n * n, &rows).expect("rows of length n^2").kernel_basis()
    };
    kernel.basis().iter().map(|v| Matrix::from_flat(n, n, v.clone()).expect("n^2 entries")).collect()
}

fn det2(x: &[Rational]) -> Rational {
    &x[0] * &x[3] - &x[1] * &x[2]
}

fn trace2(x: &[Rational]) -> Rational {
    &x[0] + &x[3]
}

fn discriminant2(x: &[Rational]) -> Rational {
    let t = trace2(x);
    &t * &t - rat(4) * det2(x)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (num, den) = (q.numer().sqrt(), q.denom().sqrt());
    (&num * &num == *q.numer() && &den * &den == *q.denom()).then(|| Rational::new(num, den))
}

/// Whether a quadratic function vanishes on a whole subspace, tested on the
/// basis and on pairwise sums.
fn vanishes_on(basis: &[Vec<Rational>], f: impl Fn(&[Rational]) -> Rational) -> bool {
    (0..basis.len()).all(|i| {
        f(&basis[i]).is_zero()
            && (i + 1..basis.len()).all(|j| {
                let sum: Vec<Rational> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                f(&sum).is_zero()
            })
    })
}

/// Dimension of a maximal torus of the group with Lie algebra `h ⊆ gl2`.
fn toral_rank(h: &Subspace) -> usize {
    let identity = vec![rat(1), rat(0), rat(0), rat(1)];
    if vanishes_on(h.basis(), trace2) && vanishes_on(h.basis(), det2) {
        0
    } else if h.member(&identity).unwrap_or(false) && !vanishes_on(h.basis(), discriminant2) {
        2
    } else {
        1
    }
}

/// An element of `h` with distinct rational eigenvalues, searched over small
/// integer combinations of the basis.
fn split_element(h: &Subspace) -> Option<(Vec<Rational>, Rational, Rational)> {
    let basis = h.basis();
    let d = basis.len();
    let range: Vec<i64> = vec![0, 1, -1, 2, -2];
    let total = range.len().pow(d as u32);
    for index in 1..total {
        let mut x = zero_vec(4);
        let mut rest = index;
        for b in basis {
            crate::exactlin::axpy(&mut x, &rat(range[rest % range.len()]), b);
            rest /= range.len();
        }
        let disc = discriminant2(&x);
        if disc.is_zero() {
            continue;
        }
        if let Some(root) = rational_sqrt(&disc) {
            let t = trace2(&x);
            let half = Rational::new(1.into(), 2.into());
            return Some((x, (&t + &root) * &half, (&t - &root) * &half));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Monomial,
    NonMonomial,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub candidate: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialityVerdict {
    pub kind: VerdictKind,
    pub certificate: Option<IsoCertificate>,
    /// The staircase the certificate maps onto.
    pub candidate: Option<MonomialQuotient>,
    pub candidates: Vec<String>,
    pub refutations: Vec<Refutation>,
    pub toral_rank: usize,
    pub notes: Vec<String>,
}

impl MonomialityVerdict {
    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "verdict": self.kind,
            "candidates": self.candidates,
            "refutations": self.refutations,
            "toral_rank": self.toral_rank,
            "notes": self.notes,
        });
        if let (Some(c), Some(q)) = (&self.certificate, &self.candidate) {
            doc["certificate"] = c.to_json();
            doc["certificate"]["target_ideal"] = Value::String(ideal_display(q));
        }
        doc
    }
}

/// `(z^4, z*w, w^2)`, generators by descending first exponent.
pub fn ideal_display(q: &MonomialQuotient) -> String {
    let mut gens = q.generators().to_vec();
    gens.sort_by(|a, b| b.cmp(a));
    let parts: Vec<String> = gens.iter().map(|e| monomial_label(q.vars(), e)).collect();
    format!("({})", parts.join(", "))
}

const FIELD_NOTE: &str = "refutations hold over every field extension; undecided means a torus exists but does not split over the rationals";

fn generator_label(table: &AlgebraTable, v: &[Rational], fallback: &str) -> String {
    (0..table.dim())
        .find(|&i| unit_vec(table.dim(), i) == v)
        .map(|i| table.basis_labels()[i].clone())
        .unwrap_or_else(|| fallback.to_string())
}

/// Decides whether a 2-generated local algebra is isomorphic to a monomial
/// quotient of `K[z, w]`.
pub fn decide_monomial_2gen(view: &LocalView, bound: usize) -> Result<MonomialityVerdict, IsomorphyError> {
    let table = view.algebra();
    let edim = view.embedding_dimension();
    if edim != 2 {
        return Err(IsomorphyError::NotTwoGenerated(edim));
    }
    if table.dim() > bound {
        return Err(IsomorphyError::BoundExceeded { dim: table.dim(), bound });
    }
    let hs = view.hilbert_samuel();
    let vars = vec!["z".to_string(), "w".to_string()];
    let candidates: Vec<MonomialQuotient> = dedup_swap(&enumerate_quotients_2v(&hs, bound)?)
        .iter()
        .map(|q| q.with_vars(vars.clone()))
        .collect::<Result<_, _>>()?;
    let own = fingerprint(view);
    let mut refutations = Vec::new();
    let mut survivors = Vec::new();
    for q in &candidates {
        let other = fingerprint(&local_view(&q.to_algebra_table())?);
        let diff = own.differences(&other);
        if diff.is_empty() {
            survivors.push(q.clone());
        } else {
            refutations.push(Refutation { candidate: ideal_display(q), reason: format!("fingerprint differs in {}", diff.join(", ")) });
        }
    }

    let gens = view.layer_basis(1);
    let mut pres = TwoGenerated::new(table, gens.clone());
    let derivations = pres.derivations(table);
    let n = table.dim();
    let square = view.power(2);
    let rho: Vec<Vec<Rational>> = derivations
        .iter()
        .map(|(dx, dy)| {
            let cx = coordinates_modulo(n, &gens, square.basis(), dx);
            let cy = coordinates_modulo(n, &gens, square.basis(), dy);
            vec![cx[0].clone(), cy[0].clone(), cx[1].clone(), cy[1].clone()]
        })
        .collect();
    let h = Subspace::span(4, &rho).expect("2x2 matrices");
    let rank = toral_rank(&h);
    let mut verdict = MonomialityVerdict {
        kind: VerdictKind::NonMonomial,
        certificate: None,
        candidate: None,
        candidates: candidates.iter().map(ideal_display).collect(),
        refutations,
        toral_rank: rank,
        notes: vec![FIELD_NOTE.to_string()],
    };
    if rank < 2 {
        for q in survivors {
            verdict.refutations.push(Refutation {
                candidate: ideal_display(&q),
                reason: format!("derivation torus has rank {rank}, a monomial algebra has rank 2"),
            });
        }
        return Ok(verdict);
    }
    verdict.kind = VerdictKind::Undecided;
    let Some((x, mu1, mu2)) = split_element(&h) else {
        verdict.notes.push("the maximal torus of the derivation algebra does not split over the rationals".into());
        return Ok(verdict);
    };

    let rho_matrix = Matrix::from_columns(4, &rho).expect("2x2 matrices");
    let lift = |target: &[Rational]| -> (Vec<Rational>, Vec<Rational>) {
        let coeffs = rho_matrix.solve(target).expect("element of the image");
        let mut dx = zero_vec(n);
        let mut dy = zero_vec(n);
        for (c, (a, b)) in coeffs.iter().zip(&derivations) {
            crate::exactlin::axpy(&mut dx, c, a);
            crate::exactlin::axpy(&mut dy, c, b);
        }
        (dx, dy)
    };
    let (xdx, xdy) = lift(&x);
    let (idx, idy) = lift(&[rat(1), rat(0), rat(0), rat(1)]);
    let top = hs.len() as u32;
    let cells: Vec<(u32, u32)> = (0..top).flat_map(|i| (0..top - i).map(move |j| (i, j))).collect();
    let shift = (0..)
        .map(|c: i64| rat(c))
        .find(|c| {
            let weights: std::collections::BTreeSet<Rational> = cells
                .iter()
                .map(|&(i, j)| (&mu1 + c) * rat(i64::from(i)) + (&mu2 + c) * rat(i64::from(j)))
                .collect();
            weights.len() == cells.len()
        })
        .expect("a generic shift separates the weights");
    let dx: Vec<Rational> = xdx.iter().zip(&idx).map(|(a, b)| a + &shift * b).collect();
    let dy: Vec<Rational> = xdy.iter().zip(&idy).map(|(a, b)| a + &shift * b).collect();
    let d = pres.derivation_matrix(table, &dx, &dy);
    let eigenvector = |mu: &Rational| -> Option<Vec<Rational>> {
        let shifted = &d - &Matrix::identity(n).scale(mu);
        let space = shifted.pow(n as u32).kernel_basis();
        (space.dim() == 1).then(|| space.basis()[0].clone())
    };
    let (Some(mut p), Some(mut q)) = (eigenvector(&(&mu1 + &shift)), eigenvector(&(&mu2 + &shift))) else {
        verdict.notes.push("weight spaces of the torus generators are not one-dimensional".into());
        return Ok(verdict);
    };

    let mut weight_gens = TwoGenerated::new(table, vec![p.clone(), q.clone()]);
    let staircase: Vec<Vec<u32>> = cells
        .iter()
        .filter(|&&(i, j)| !is_zero_vec(&weight_gens.power(table, i, j)))
        .map(|&(i, j)| vec![i, j])
        .collect();
    let found = MonomialQuotient::from_staircase(vars.clone(), &staircase)?;
    let mut matched = None;
    for cand in &survivors {
        if cand.staircase() == found.staircase() {
            matched = Some(cand.clone());
        } else if found.swapped().is_some_and(|s| s.staircase() == cand.staircase()) {
            std::mem::swap(&mut p, &mut q);
            matched = Some(cand.clone());
        }
    }
    let Some(cand) = matched else {
        verdict.notes.push(format!("torus weight vectors give the staircase {}, which is not a candidate", ideal_display(&found)));
        return Ok(verdict);
    };

    let mut weight_gens = TwoGenerated::new(table, vec![p, q]);
    let columns: Vec<Vec<Rational>> = cand.staircase().iter().map(|e| weight_gens.power(table, e[0], e[1])).collect();
    let psi = Matrix::from_columns(n, &columns).expect("monomial images");
    let Some(psi_inverse) = psi.inverse() else {
        verdict.notes.push("torus weight monomials are not a basis".into());
        return Ok(verdict);
    };
    let generator_images = gens
        .iter()
        .enumerate()
        .map(|(i, g)| GeneratorImage {
            label: generator_label(table, g, &format!("g{}", i + 1)),
            element: g.clone(),
            image: psi_inverse.mul_vec(g),
        })
        .collect();
    let certificate =
        IsoCertificate { source: table.clone(), target: cand.to_algebra_table(), generator_images, u_data: None };
    if let Err(violation) = verify_certificate(&certificate) {
        verdict.notes.push(format!("candidate certificate rejected: {violation}"));
        return Ok(verdict);
    }
    for other in survivors.iter().filter(|s| s.staircase() != cand.staircase()) {
        verdict.refutations.push(Refutation {
            candidate: ideal_display(other),
            reason: format!("torus weight vectors give the staircase of {}", ideal_display(&cand)),
        });
    }
    verdict.kind = VerdictKind::Monomial;
    verdict.certificate = Some(certificate);
    verdict.candidate = Some(cand);
    Ok(verdict)
}

/// Re-presents a 2-variable monomial algebra on the generators
/// `l0 x + l1 y + ...` and `l2 y + ...`, whose tails cycle through `tails`
/// on the monomials of degree at least 2. Returns the table in the word
/// basis of the new generators and those generators in the original basis.
pub fn triangular_substitution(
    q: &MonomialQuotient,
    lead: &[Rational; 3],
    tails: &[Rational],
) -> Result<(AlgebraTable, Vec<Vec<Rational>>), IsomorphyError> {
    if q.num_vars() != 2 {
        return Err(MonomialError::NotTwoVariables(q.num_vars()).into());
    }
    if lead[0].is_zero() || lead[2].is_zero() {
        return Err(IsomorphyError::SingularSubstitution);
    }
    let table = q.to_algebra_table();
    let n = q.dim();
    let basis = |e: &[u32]| q.index_of(e).map(|i| unit_vec(n, i)).ok_or(IsomorphyError::NotTwoGenerated(1));
    let (x, y) = (basis(&[1, 0])?, basis(&[0, 1])?);
    let mut g1: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| &lead[0] * a + &lead[1] * b).collect();
    let mut g2: Vec<Rational> = y.iter().map(|b| &lead[2] * b).collect();
    let higher = q.staircase().iter().filter(|e| e[0] + e[1] >= 2);
    if !tails.is_empty() {
        for (k, e) in higher.enumerate() {
            let h = basis(e)?;
            crate::exactlin::axpy(&mut g1, &tails[(2 * k) % tails.len()], &h);
            crate::exactlin::axpy(&mut g2, &tails[(2 * k + 1) % tails.len()], &h);
        }
    }
    let gens = vec![g1, g2];
    let closure = span_closure(&table, &gens, &["u".to_string(), "v".to_string()]);
    Ok((closure_table(&table, &closure)?, gens))
}
