//! Divisors on the Hirzebruch surface of index `n`, written as
//! `a E∞ + b F0`, and the two S-pairs attached to an ample divisor.

use std::ops::{Add, Mul};

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{delta_matrices, DerivationError, SectionBasis};
use crate::monomial::{MonomialError, MonomialQuotient};
use crate::spair::{spair_from_operators, SPair, SPairError};

#[derive(Debug, Error, PartialEq)]
pub enum HirzebruchError {
    #[error("divisor ({a}, {b}) on the surface of index {n} is not ample")]
    NotAmple { n: u32, a: i64, b: i64 },
    #[error("the surface of index 0 carries a single additive action, there is no twisted pair")]
    NZero,
    #[error("divisors live on surfaces of index {left} and {right}")]
    SurfaceMismatch { left: u32, right: u32 },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    SPair(#[from] SPairError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HDivisor {
    pub n: u32,
    pub a: i64,
    pub b: i64,
}

impl HDivisor {
    pub fn new(n: u32, a: i64, b: i64) -> Self {
        HDivisor { n, a, b }
    }

    pub fn e_infinity(n: u32) -> Self {
        HDivisor::new(n, 1, 0)
    }

    pub fn f_zero(n: u32) -> Self {
        HDivisor::new(n, 0, 1)
    }

    /// `E0 = E∞ + n F0`.
    pub fn e_zero(n: u32) -> Self {
        HDivisor::new(n, 1, i64::from(n))
    }

    /// `F∞ = F0`.
    pub fn f_infinity(n: u32) -> Self {
        HDivisor::f_zero(n)
    }

    /// Bilinear form with `F0^2 = 0`, `F0 E∞ = 1`, `E∞^2 = -n`.
    pub fn intersection(&self, other: &HDivisor) -> Result<i64, HirzebruchError> {
        if self.n != other.n {
            return Err(HirzebruchError::SurfaceMismatch { left: self.n, right: other.n });
        }
        Ok(-i64::from(self.n) * self.a * other.a + self.a * other.b + self.b * other.a)
    }

    pub fn is_ample(&self) -> bool {
        self.a > 0 && self.b > self.a * i64::from(self.n)
    }

    pub fn sections(&self) -> SectionBasis {
        SectionBasis::new(self.n, self.a, self.b)
    }

    /// `(a+1)(b+1) - n a (a+1) / 2`.
    pub fn section_count_formula(&self) -> i64 {
        (self.a + 1) * (self.b + 1) - i64::from(self.n) * self.a * (self.a + 1) / 2
    }

    fn require_ample(&self) -> Result<(), HirzebruchError> {
        if self.is_ample() {
            Ok(())
        } else {
            Err(HirzebruchError::NotAmple { n: self.n, a: self.a, b: self.b })
        }
    }

    /// The monomial quotient whose staircase is the section space.
    pub fn normalized_quotient(&self) -> Result<MonomialQuotient, HirzebruchError> {
        self.require_ample()?;
        let cells: Vec<Vec<u32>> = self.sections().monomials().iter().map(|&(k, m)| vec![k, m]).collect();
        Ok(MonomialQuotient::from_staircase(vec!["x".into(), "y".into()], &cells)?)
    }
}

impl Add for HDivisor {
    type Output = HDivisor;

    fn add(self, rhs: HDivisor) -> HDivisor {
        assert_eq!(self.n, rhs.n, "divisors on different surfaces");
        HDivisor::new(self.n, self.a + rhs.a, self.b + rhs.b)
    }
}

impl Mul<HDivisor> for i64 {
    type Output = HDivisor;

    fn mul(self, rhs: HDivisor) -> HDivisor {
        HDivisor::new(rhs.n, self * rhs.a, self * rhs.b)
    }
}

/// The monomial S-pair `(A_{n,a,b}, span{x, y})`.
pub fn normalized_spair(n: u32, a: i64, b: i64) -> Result<SPair, HirzebruchError> {
    let q = HDivisor::new(n, a, b).normalized_quotient()?;
    Ok(SPair::from_monomial(&q)?)
}

/// The S-pair generated by `δ1, δ2` acting on the section space.
pub fn twisted_spair(n: u32, a: i64, b: i64) -> Result<SPair, HirzebruchError> {
    HDivisor::new(n, a, b).require_ample()?;
    if n == 0 {
        return Err(HirzebruchError::NZero);
    }
    let (d1, d2) = delta_matrices(n, a, b)?;
    Ok(spair_from_operators(&[d1.matrix, d2.matrix], &["d1".to_string(), "d2".to_string()])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_numbers() {
        let e = HDivisor::e_infinity(2);
        assert_eq!(e.intersection(&e), Ok(-2));
        let f = HDivisor::f_zero(3);
        assert_eq!(f.intersection(&f), Ok(0));
        for n in 0..5 {
            let e0 = HDivisor::e_zero(n);
            assert_eq!(e0, HDivisor::e_infinity(n) + i64::from(n) * HDivisor::f_zero(n));
            assert_eq!(e0.intersection(&e0), Ok(i64::from(n)));
            assert_eq!(HDivisor::e_infinity(n).intersection(&HDivisor::f_infinity(n)), Ok(1));
        }
        assert_eq!(e.intersection(&f), Err(HirzebruchError::SurfaceMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn ampleness() {
        assert!(HDivisor::new(1, 1, 2).is_ample());
        assert!(!HDivisor::new(1, 1, 1).is_ample());
        assert!(HDivisor::new(0, 1, 1).is_ample());
        assert!(!HDivisor::new(0, 0, 3).is_ample());
    }

    #[test]
    fn section_examples() {
        assert_eq!(HDivisor::new(1, 1, 2).sections().monomials(), &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]);
        let row = HDivisor::new(3, 0, 4).sections();
        assert_eq!(row.monomials(), &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
        assert!(HDivisor::new(1, -1, 3).sections().is_empty());
        for n in 0..=4u32 {
            for a in 0..=4i64 {
                for b in (i64::from(n) * a)..=(i64::from(n) * a + 4) {
                    let d = HDivisor::new(n, a, b);
                    assert_eq!(d.sections().len() as i64, d.section_count_formula(), "{d:?}");
                }
            }
        }
    }

    #[test]
    fn normalized_examples() {
        let p = normalized_spair(1, 1, 2).unwrap();
        assert_eq!(p.dim(), 5);
        let q = p.origin().unwrap();
        let mut gens = q.generators().to_vec();
        gens.sort();
        assert_eq!(gens, vec![vec![0, 2], vec![2, 1], vec![3, 0]]);
        let boxed = normalized_spair(0, 2, 3).unwrap();
        assert_eq!(boxed.origin().unwrap().is_box(), Some(vec![3, 2]));
        assert_eq!(p.view().hilbert_samuel().iter().sum::<usize>(), 5);
        assert!(matches!(normalized_spair(1, 1, 1), Err(HirzebruchError::NotAmple { .. })));
    }

    #[test]
    fn twisted_examples() {
        let p = twisted_spair(1, 1, 2).unwrap();
        assert_eq!(p.view().hilbert_samuel(), vec![1, 2, 1, 1]);
        let p = twisted_spair(1, 1, 3).unwrap();
        assert_eq!(p.dim(), 7);
        assert_eq!(p.view().hilbert_samuel(), vec![1, 2, 2, 1, 1]);
        assert_eq!(twisted_spair(0, 1, 2), Err(HirzebruchError::NZero));
        assert!(matches!(twisted_spair(2, 1, 2), Err(HirzebruchError::NotAmple { .. })));
    }
}
