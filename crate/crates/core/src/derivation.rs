//! The derivations `δ1 = ∂x + x^n ∂y` and `δ2 = ∂y` restricted to the
//! section space of a Hirzebruch divisor.
//!
//! Matrices act on column vectors: column `j` is the image of basis monomial
//! `j`, and a product `PQ` applies `Q` first.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{binomial, factorial, Matrix, Rational};
use crate::hirzebruch::HDivisor;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("divisor ({a}, {b}) on the surface of index {n} is not ample")]
    NotAmple { n: u32, a: i64, b: i64 },
    #[error("{label} sends x^{k} y^{m} outside the section space")]
    Truncation { label: OperatorLabel, k: u32, m: u32 },
    #[error("span dimension needs b >= 2a and 0 <= l <= a, got a = {a}, b = {b}, l = {l}")]
    SpanPrecondition { a: u32, b: u32, l: u32 },
    #[error("power must be at least 1")]
    ZeroPower,
}

/// Monomials `x^k y^m` with `0 <= m <= a`, `k >= 0`, `k + n m <= b`,
/// ordered by `m`, then `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    n: u32,
    a: i64,
    b: i64,
    monomials: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), usize>,
}

impl SectionBasis {
    pub fn new(n: u32, a: i64, b: i64) -> Self {
        let mut monomials = Vec::new();
        if a >= 0 {
            for m in 0..=a {
                let top = b - i64::from(n) * m;
                for k in 0..=top {
                    monomials.push((k as u32, m as u32));
                }
            }
        }
        let index = monomials.iter().enumerate().map(|(i, &km)| (km, i)).collect();
        SectionBasis { n, a, b, monomials, index }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn monomials(&self) -> &[(u32, u32)] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, k: u32, m: u32) -> Option<usize> {
        self.index.get(&(k, m)).copied()
    }

    pub fn label(&self, i: usize) -> String {
        let (k, m) = self.monomials[i];
        let part = |v: &str, e: u32| match e {
            0 => None,
            1 => Some(v.to_string()),
            _ => Some(format!("{v}^{e}")),
        };
        let parts: Vec<String> = [part("x", k), part("y", m)].into_iter().flatten().collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorLabel {
    Delta1,
    Delta2,
    Dx,
    XNDy,
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorLabel::Delta1 => "delta1",
            OperatorLabel::Delta2 => "delta2",
            OperatorLabel::Dx => "dx",
            OperatorLabel::XNDy => "x_n_dy",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub basis: SectionBasis,
    pub matrix: Matrix,
    pub label: OperatorLabel,
}

/// Terms `(coefficient, k', m')` of the image of `x^k y^m`.
fn image(label: OperatorLabel, n: u32, k: u32, m: u32) -> Vec<(u32, u32, u32)> {
    let dx = (k > 0).then(|| (k, k - 1, m));
    let xndy = (m > 0).then(|| (m, k + n, m - 1));
    let dy = (m > 0).then(|| (m, k, m - 1));
    match label {
        OperatorLabel::Delta1 => [dx, xndy].into_iter().flatten().collect(),
        OperatorLabel::Delta2 => dy.into_iter().collect(),
        OperatorLabel::Dx => dx.into_iter().collect(),
        OperatorLabel::XNDy => xndy.into_iter().collect(),
    }
}

pub fn operator_matrix(basis: &SectionBasis, label: OperatorLabel) -> Result<OperatorMatrix, DerivationError> {
    let d = basis.len();
    let mut matrix = Matrix::zeros(d, d);
    for (j, &(k, m)) in basis.monomials().iter().enumerate() {
        for (c, k2, m2) in image(label, basis.n(), k, m) {
            let i = basis.index_of(k2, m2).ok_or(DerivationError::Truncation { label, k, m })?;
            matrix.set(i, j, matrix.get(i, j) + Rational::from_integer(c.into()));
        }
    }
    Ok(OperatorMatrix { basis: basis.clone(), matrix, label })
}

/// `δ1` and `δ2` on the sections of an ample divisor.
pub fn delta_matrices(n: u32, a: i64, b: i64) -> Result<(OperatorMatrix, OperatorMatrix), DerivationError> {
    if !HDivisor::new(n, a, b).is_ample() {
        return Err(DerivationError::NotAmple { n, a, b });
    }
    let basis = SectionBasis::new(n, a, b);
    Ok((operator_matrix(&basis, OperatorLabel::Delta1)?, operator_matrix(&basis, OperatorLabel::Delta2)?))
}

fn ample_index_one(a: u32, b: u32) -> Result<SectionBasis, DerivationError> {
    let (a, b) = (i64::from(a), i64::from(b));
    if !HDivisor::new(1, a, b).is_ample() {
        return Err(DerivationError::NotAmple { n: 1, a, b });
    }
    Ok(SectionBasis::new(1, a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BchReport {
    pub power: u32,
    pub holds: bool,
    pub a_commutes_with_c: bool,
    pub b_commutes_with_c: bool,
}

/// Right side of the power identity for `(A + B)^N` when `C = [A, B]`
/// commutes with `A` and `B`.
pub fn bch_power_formula(a: &Matrix, b: &Matrix, power: u32) -> Matrix {
    let c = a.commutator(b);
    let half_neg_c = c.scale(&(-Rational::one() / Rational::from_integer(2.into())));
    let mut total = Matrix::zeros(a.rows(), a.cols());
    for k in (0..=power).rev().step_by(2) {
        let j = (power - k) / 2;
        let coeff = Rational::new(factorial(power), factorial(k) * factorial(j));
        let mut inner = Matrix::zeros(a.rows(), a.cols());
        for r in 0..=k {
            let term = &a.pow(r) * &b.pow(k - r);
            inner = &inner + &term.scale(&Rational::from_integer(binomial(k, r)));
        }
        total = &total + &(&half_neg_c.pow(j) * &inner).scale(&coeff);
    }
    total
}

/// Compares `δ1^N` with the power identity for `A = x∂y`, `B = ∂x` (n = 1).
pub fn bch_power_check(a: u32, b: u32, power: u32) -> Result<BchReport, DerivationError> {
    if power == 0 {
        return Err(DerivationError::ZeroPower);
    }
    let basis = ample_index_one(a, b)?;
    let delta1 = operator_matrix(&basis, OperatorLabel::Delta1)?.matrix;
    let op_a = operator_matrix(&basis, OperatorLabel::XNDy)?.matrix;
    let op_b = operator_matrix(&basis, OperatorLabel::Dx)?.matrix;
    let c = op_a.commutator(&op_b);
    Ok(BchReport {
        power,
        holds: delta1.pow(power) == bch_power_formula(&op_a, &op_b, power),
        a_commutes_with_c: op_a.commutes_with(&c),
        b_commutes_with_c: op_b.commutes_with(&c),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub a: u32,
    pub b: u32,
    pub delta2_top_vanishes: bool,
    /// Pairs `(l1, l2)` with `l1 + 2 l2 = a + b + 1`, `l2 <= a`, where the
    /// product fails to vanish.
    pub counterexamples: Vec<(u32, u32)>,
    pub boundary_checked: usize,
    pub delta1_top_nonzero: bool,
    /// Nonvanishing products among `l1 + 2 l2 <= a + b`, `l2 <= a`.
    pub interior_nonzero: usize,
    pub interior_total: usize,
}

impl VanishingReport {
    pub fn holds(&self) -> bool {
        self.delta2_top_vanishes
            && self.counterexamples.is_empty()
            && (self.b < 2 * self.a || self.delta1_top_nonzero)
    }
}

pub fn vanishing_check(a: u32, b: u32) -> Result<VanishingReport, DerivationError> {
    let basis = ample_index_one(a, b)?;
    let d1 = operator_matrix(&basis, OperatorLabel::Delta1)?.matrix;
    let d2 = operator_matrix(&basis, OperatorLabel::Delta2)?.matrix;
    let top = a + b;
    let d1_pows: Vec<Matrix> = (0..=top + 1).map(|k| d1.pow(k)).collect();
    let d2_pows: Vec<Matrix> = (0..=a + 1).map(|k| d2.pow(k)).collect();
    let mut counterexamples = Vec::new();
    let mut boundary_checked = 0;
    let mut interior_nonzero = 0;
    let mut interior_total = 0;
    for l2 in 0..=a {
        if 2 * l2 <= top + 1 {
            let l1 = top + 1 - 2 * l2;
            boundary_checked += 1;
            if !(&d1_pows[l1 as usize] * &d2_pows[l2 as usize]).is_zero() {
                counterexamples.push((l1, l2));
            }
        }
        for l1 in 0..=top.saturating_sub(2 * l2) {
            if l1 + 2 * l2 <= top {
                interior_total += 1;
                if !(&d1_pows[l1 as usize] * &d2_pows[l2 as usize]).is_zero() {
                    interior_nonzero += 1;
                }
            }
        }
    }
    Ok(VanishingReport {
        a,
        b,
        delta2_top_vanishes: d2_pows[(a + 1) as usize].is_zero(),
        counterexamples,
        boundary_checked,
        delta1_top_nonzero: !d1_pows[top as usize].is_zero(),
        interior_nonzero,
        interior_total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub a: u32,
    pub b: u32,
    pub l: u32,
    pub dim: usize,
    pub expected: usize,
    pub tail_independent: bool,
}

impl SpanReport {
    pub fn holds(&self) -> bool {
        self.dim == self.expected && self.tail_independent
    }
}

/// Rank of `{δ1^(a+b-l-2s) δ2^s : s = 0..a}` and independence of the
/// members with `s >= a - l`.
pub fn span_dims(a: u32, b: u32, l: u32) -> Result<SpanReport, DerivationError> {
    if b < 2 * a || l > a {
        return Err(DerivationError::SpanPrecondition { a, b, l });
    }
    let basis = ample_index_one(a, b)?;
    let d1 = operator_matrix(&basis, OperatorLabel::Delta1)?.matrix;
    let d2 = operator_matrix(&basis, OperatorLabel::Delta2)?.matrix;
    let family: Vec<Vec<Rational>> =
        (0..=a).map(|s| (&d1.pow(a + b - l - 2 * s) * &d2.pow(s)).into_entries()).collect();
    let width = basis.len() * basis.len();
    let rank = |rows: &[Vec<Rational>]| Matrix::from_rows(width, rows).expect("flattened operators").rank();
    let tail = &family[(a - l) as usize..];
    Ok(SpanReport {
        a,
        b,
        l,
        dim: rank(&family),
        expected: (l + 1) as usize,
        tail_independent: rank(tail) == tail.len() && tail.iter().all(|v| v.iter().any(|x| !x.is_zero())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn column(m: &Matrix, basis: &SectionBasis, k: u32, mono: u32) -> Vec<Rational> {
        m.column(basis.index_of(k, mono).unwrap())
    }

    fn vec_of(basis: &SectionBasis, terms: &[(i64, u32, u32)]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis.len()];
        for &(c, k, m) in terms {
            v[basis.index_of(k, m).unwrap()] += rat(c);
        }
        v
    }

    #[test]
    fn delta_images_on_smallest_case() {
        let (d1, d2) = delta_matrices(1, 1, 2).unwrap();
        let basis = &d1.basis;
        assert_eq!(basis.monomials(), &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]);
        assert_eq!(column(&d2.matrix, basis, 0, 1), vec_of(basis, &[(1, 0, 0)]));
        assert_eq!(column(&d2.matrix, basis, 1, 1), vec_of(basis, &[(1, 1, 0)]));
        for (k, m) in [(0, 0), (1, 0), (2, 0)] {
            assert!(column(&d2.matrix, basis, k, m).iter().all(Zero::is_zero));
        }
        assert_eq!(column(&d1.matrix, basis, 1, 1), vec_of(basis, &[(1, 0, 1), (1, 2, 0)]));
        assert!(delta_matrices(1, 1, 1).is_err());
    }

    #[test]
    fn delta2_squares_to_zero_when_a_is_one() {
        for (n, b) in [(1, 2), (1, 5), (2, 3), (3, 7)] {
            let (_, d2) = delta_matrices(n, 1, b).unwrap();
            assert!(d2.matrix.pow(2).is_zero());
        }
    }

    #[test]
    fn bch_small_powers() {
        let basis = SectionBasis::new(1, 1, 3);
        let a = operator_matrix(&basis, OperatorLabel::XNDy).unwrap().matrix;
        let b = operator_matrix(&basis, OperatorLabel::Dx).unwrap().matrix;
        assert_eq!(bch_power_formula(&a, &b, 1), &a + &b);
        let c = a.commutator(&b);
        let expected = &(&(&a.pow(2) + &(&a * &b).scale(&rat(2))) + &b.pow(2)) - &c;
        assert_eq!(bch_power_formula(&a, &b, 2), expected);
        for power in 1..=5 {
            let r = bch_power_check(1, 3, power).unwrap();
            assert!(r.holds && r.a_commutes_with_c && r.b_commutes_with_c, "{r:?}");
        }
    }

    #[test]
    fn vanishing_on_smallest_case() {
        let (d1, d2) = delta_matrices(1, 1, 2).unwrap();
        let (d1, d2) = (d1.matrix, d2.matrix);
        assert!(d1.pow(4).is_zero());
        assert!((&d1.pow(2) * &d2).is_zero());
        assert!(d2.pow(2).is_zero());
        let cube = d1.pow(3);
        let basis = SectionBasis::new(1, 1, 2);
        assert_eq!(column(&cube, &basis, 1, 1), vec_of(&basis, &[(3, 0, 0)]));
        let report = vanishing_check(1, 2).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.boundary_checked, 2);
    }

    #[test]
    fn span_dimension_examples() {
        assert_eq!(span_dims(1, 2, 0).unwrap().dim, 1);
        let r = span_dims(1, 2, 1).unwrap();
        assert!(r.holds());
        let (d1, d2) = delta_matrices(1, 1, 2).unwrap();
        let pair = Matrix::from_rows(25, &[d1.matrix.pow(2).into_entries(), d2.matrix.into_entries()]).unwrap();
        assert_eq!(pair.rank(), 2);
        assert_eq!(span_dims(2, 4, 2).unwrap().dim, 3);
        assert!(span_dims(2, 3, 0).is_err());
    }

    #[test]
    fn operators_close_and_commute_on_grid() {
        for n in 0..=3u32 {
            for a in 1..=3i64 {
                for b in (i64::from(n) * a + 1)..=(i64::from(n) * a + 3) {
                    let (d1, d2) = delta_matrices(n, a, b).unwrap();
                    assert!(d1.matrix.commutes_with(&d2.matrix));
                    assert!(d1.matrix.is_nilpotent() && d2.matrix.is_nilpotent());
                }
            }
        }
    }
}
