//! Degree-bounded implicitization of orbit parametrizations and Jacobian
//! rank sampling.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{rat, Matrix, Rational, Subspace};
use crate::monomial::MonomialQuotient;
use crate::poly::{monomials_of_degree, Exponents, Polynomial, TermOrder};
use crate::spair::{ParametrizedOrbit, SPair, SPairError};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("form {index} does not vanish at the point")]
    PointNotOnVariety { index: usize },
    #[error(transparent)]
    SPair(#[from] SPairError),
}

/// Homogeneous forms of one degree vanishing on a parametrized orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpace {
    pub num_coords: usize,
    pub degree: u32,
    /// Column order of `relations`: graded reverse lexicographic, descending.
    pub monomials: Vec<Exponents>,
    pub relations: Subspace,
}

pub fn coordinate_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("z{i}")).collect()
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.relations.dim()
    }

    pub fn forms(&self) -> Vec<Polynomial> {
        self.relations
            .basis()
            .iter()
            .map(|v| Polynomial::from_terms(self.num_coords, self.monomials.iter().cloned().zip(v.iter().cloned())))
            .collect()
    }

    pub fn display_forms(&self) -> Vec<String> {
        let names = coordinate_names(self.num_coords);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.forms().iter().map(|f| f.to_string_with(&refs, TermOrder::GradedRevLex)).collect()
    }

    pub fn contains(&self, form: &Polynomial) -> bool {
        let coords: Vec<Rational> = self.monomials.iter().map(|m| form.coeff(m)).collect();
        let covered = form.terms().all(|(e, _)| self.monomials.contains(e));
        covered && self.relations.member(&coords).unwrap_or(false)
    }
}

/// Forms of degree `degree` in the orbit coordinates whose pullback vanishes.
pub fn implicitize(orbit: &ParametrizedOrbit, degree: u32) -> Result<FormSpace, GeometryError> {
    if degree == 0 {
        return Err(GeometryError::ZeroDegree);
    }
    let n = orbit.coords.len();
    let monomials = monomials_of_degree(n, degree, TermOrder::GradedRevLex);
    let pullbacks: Vec<Polynomial> = monomials
        .iter()
        .map(|e| {
            let mut p = Polynomial::one(orbit.num_params);
            for (coord, &k) in orbit.coords.iter().zip(e) {
                if k > 0 {
                    p = &p * &coord.pow(k);
                }
            }
            p
        })
        .collect();
    let mut rows: BTreeMap<Exponents, usize> = BTreeMap::new();
    for p in &pullbacks {
        for (e, _) in p.terms() {
            let next = rows.len();
            rows.entry(e.clone()).or_insert(next);
        }
    }
    let mut matrix = Matrix::zeros(rows.len(), monomials.len());
    for (j, p) in pullbacks.iter().enumerate() {
        for (e, c) in p.terms() {
            matrix.set(rows[e], j, c.clone());
        }
    }
    let relations = if rows.is_empty() { Subspace::full(monomials.len()) } else { matrix.kernel_basis() };
    Ok(FormSpace { num_coords: n, degree, monomials, relations })
}

/// Rank of the Jacobian of the basis forms at a point of their zero set.
pub fn jacobian_rank_at(forms: &FormSpace, point: &[Rational]) -> Result<usize, GeometryError> {
    if point.len() != forms.num_coords {
        return Err(GeometryError::DimensionMismatch { expected: forms.num_coords, found: point.len() });
    }
    if point.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroPoint);
    }
    let basis = forms.forms();
    if let Some(index) = basis.iter().position(|f| !f.eval(point).is_zero()) {
        return Err(GeometryError::PointNotOnVariety { index });
    }
    if basis.is_empty() {
        return Ok(0);
    }
    let rows: Vec<Vec<Rational>> =
        basis.iter().map(|f| (0..forms.num_coords).map(|i| f.partial(i).eval(point)).collect()).collect();
    Ok(Matrix::from_rows(forms.num_coords, &rows).expect("jacobian rows").rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankSample {
    pub point: Vec<String>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonNormalReport {
    pub quadrics: Vec<String>,
    pub quadric_dim: usize,
    pub line_samples: Vec<RankSample>,
    pub singular_samples: usize,
    pub orbit_samples: Vec<RankSample>,
    pub smooth_samples: usize,
    pub cubic_dim: usize,
    pub cubic_multiples_dim: usize,
    pub cubic_contains_multiples: bool,
    pub passed: bool,
}

pub const ORBIT_SAMPLE_SEED: u64 = 0x5eed;

/// The surface cut out by two quadrics from the orbit of
/// `(K[t,s]/(t^3, ts, s^3), span{t, s})`, with its Jacobian rank dropping
/// along the line `z0 = z1 = z2 = 0`.
pub fn verify_nonnormal_example() -> Result<NonNormalReport, GeometryError> {
    let q = MonomialQuotient::from_generators(
        vec!["t".into(), "s".into()],
        &[vec![3, 0], vec![1, 1], vec![0, 3]],
    )
    .expect("cofinite ideal");
    let pair = SPair::from_monomial(&q)?;
    let orbit = pair.parametrize_orbit();
    let quadrics = implicitize(&orbit, 2)?;

    let mut line_samples = Vec::new();
    for z4 in [0, 1, 2, 3, 5] {
        let point = vec![rat(0), rat(0), rat(0), rat(1), rat(z4)];
        let rank = jacobian_rank_at(&quadrics, &point)?;
        line_samples.push(RankSample { point: point.iter().map(ToString::to_string).collect(), rank });
    }
    let singular_samples = line_samples.iter().filter(|s| s.rank <= 1).count();

    let mut rng = ChaCha8Rng::seed_from_u64(ORBIT_SAMPLE_SEED);
    let mut orbit_samples = Vec::new();
    for _ in 0..5 {
        let params = vec![
            Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into()),
            Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into()),
        ];
        let point = orbit.eval(&params);
        let rank = jacobian_rank_at(&quadrics, &point)?;
        orbit_samples.push(RankSample { point: point.iter().map(ToString::to_string).collect(), rank });
    }
    let smooth_samples = orbit_samples.iter().filter(|s| s.rank == 2).count();

    let cubics = implicitize(&orbit, 3)?;
    let multiples: Vec<Polynomial> = quadrics
        .forms()
        .iter()
        .flat_map(|f| (0..5).map(move |i| &Polynomial::var(5, i) * f))
        .collect();
    let cubic_contains_multiples = multiples.iter().all(|m| cubics.contains(m));
    let coords: Vec<Vec<Rational>> =
        multiples.iter().map(|m| cubics.monomials.iter().map(|e| m.coeff(e)).collect()).collect();
    let cubic_multiples_dim = Subspace::span(cubics.monomials.len(), &coords).expect("cubic coordinates").dim();

    let passed = quadrics.dim() == 2
        && singular_samples == line_samples.len()
        && smooth_samples == orbit_samples.len()
        && cubic_contains_multiples;
    Ok(NonNormalReport {
        quadrics: quadrics.display_forms(),
        quadric_dim: quadrics.dim(),
        line_samples,
        singular_samples,
        orbit_samples,
        smooth_samples,
        cubic_dim: cubics.dim(),
        cubic_multiples_dim,
        cubic_contains_multiples,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;
    use crate::hirzebruch::normalized_spair;

    fn quadric_orbit() -> ParametrizedOrbit {
        let q = MonomialQuotient::from_generators(vec!["t".into(), "s".into()], &[vec![3, 0], vec![1, 1], vec![0, 3]])
            .unwrap();
        SPair::from_monomial(&q).unwrap().parametrize_orbit()
    }

    #[test]
    fn quadrics_of_the_example() {
        let forms = implicitize(&quadric_orbit(), 2).unwrap();
        assert_eq!(forms.display_forms(), vec!["z1^2 - 2*z0*z3", "z2^2 - 2*z0*z4"]);
        let orbit = quadric_orbit();
        for f in forms.forms() {
            assert!(f.substitute(&orbit.coords).is_zero());
        }
    }

    #[test]
    fn nondegenerate_orbits_have_no_linear_forms() {
        let line = ParametrizedOrbit {
            num_params: 1,
            coords: vec![Polynomial::one(1), Polynomial::var(1, 0)],
            labels: vec!["1".into(), "x".into()],
        };
        assert_eq!(implicitize(&line, 1).unwrap().dim(), 0);
        let orbit = normalized_spair(1, 1, 2).unwrap().parametrize_orbit();
        assert_eq!(implicitize(&orbit, 1).unwrap().dim(), 0);
        assert_eq!(implicitize(&orbit, 0), Err(GeometryError::ZeroDegree));
    }

    #[test]
    fn jacobian_ranks() {
        let forms = implicitize(&quadric_orbit(), 2).unwrap();
        let smooth = vec![rat(1), rat(1), rat(1), ratio(1, 2), ratio(1, 2)];
        assert_eq!(jacobian_rank_at(&forms, &smooth), Ok(2));
        assert!(jacobian_rank_at(&forms, &[rat(0), rat(0), rat(0), rat(1), rat(0)]).unwrap() <= 1);
        assert!(jacobian_rank_at(&forms, &[rat(0), rat(0), rat(0), rat(1), rat(5)]).unwrap() <= 1);
        assert_eq!(
            jacobian_rank_at(&forms, &[rat(1), rat(0), rat(0), rat(1), rat(0)]),
            Err(GeometryError::PointNotOnVariety { index: 0 })
        );
        assert_eq!(jacobian_rank_at(&forms, &vec![rat(0); 5]), Err(GeometryError::ZeroPoint));
    }

    #[test]
    fn nonnormal_report() {
        let r = verify_nonnormal_example().unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.quadric_dim, 2);
        assert_eq!(r.singular_samples, 5);
        assert_eq!(r.cubic_multiples_dim, 10);
        assert!(r.cubic_dim >= r.cubic_multiples_dim);
    }

    #[test]
    fn higher_degree_contains_multiples() {
        let orbit = normalized_spair(1, 1, 2).unwrap().parametrize_orbit();
        let quad = implicitize(&orbit, 2).unwrap();
        let cubic = implicitize(&orbit, 3).unwrap();
        for f in quad.forms() {
            for i in 0..orbit.coords.len() {
                assert!(cubic.contains(&(&Polynomial::var(orbit.coords.len(), i) * &f)));
            }
        }
    }
}
