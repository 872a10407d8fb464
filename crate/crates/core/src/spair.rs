//! S-pairs: a local algebra with a generating subspace of its maximal ideal,
//! and the passage to and from commuting nilpotent operators.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{closure_table, local_view, span_closure, AlgebraError, AlgebraTable, LocalView, MatrixAlgebra};
use crate::exactlin::{factorial, unit_vec, Echelon, Matrix, Rational};
use crate::monomial::MonomialQuotient;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SPairDefect {
    NotInMaximalIdeal { index: usize },
    Dependent,
    DoesNotGenerate { generated_dim: usize, dim: usize },
}

impl fmt::Display for SPairDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SPairDefect::NotInMaximalIdeal { index } => write!(f, "U element {index} is not in the maximal ideal"),
            SPairDefect::Dependent => write!(f, "U elements are linearly dependent"),
            SPairDefect::DoesNotGenerate { generated_dim, dim } => {
                write!(f, "U generates a subalgebra of dimension {generated_dim}, not {dim}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SPairError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not an S-pair: {0}")]
    Invalid(SPairDefect),
    #[error("operators {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("operator {i} is not nilpotent")]
    NotNilpotent { i: usize },
    #[error("operators are linearly dependent")]
    GenerationDefect,
    #[error("operators must be square of one common size")]
    ShapeMismatch,
    #[error("S-pair does not come from a monomial quotient with U spanned by the variables")]
    NotMonomialSPair,
    #[error("element has length {found}, expected {expected}")]
    ElementLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SPair {
    view: LocalView,
    u_basis: Vec<Vec<Rational>>,
    origin: Option<MonomialQuotient>,
}

/// Checks that `u` lies in the maximal ideal, is independent, and generates.
pub fn validate(view: &LocalView, u: &[Vec<Rational>]) -> Result<(), SPairDefect> {
    let n = view.algebra().dim();
    for (index, x) in u.iter().enumerate() {
        if !view.maximal_ideal().member(x).unwrap_or(false) {
            return Err(SPairDefect::NotInMaximalIdeal { index });
        }
    }
    let mut echelon = Echelon::new(n);
    if !u.iter().all(|x| echelon.insert(x)) {
        return Err(SPairDefect::Dependent);
    }
    let generated_dim = crate::algebra::subalgebra_generated(view.algebra(), u).dim();
    if generated_dim != n {
        return Err(SPairDefect::DoesNotGenerate { generated_dim, dim: n });
    }
    Ok(())
}

impl SPair {
    pub fn new(view: LocalView, u_basis: Vec<Vec<Rational>>) -> Result<Self, SPairError> {
        let n = view.algebra().dim();
        if let Some(bad) = u_basis.iter().find(|x| x.len() != n) {
            return Err(SPairError::ElementLength { expected: n, found: bad.len() });
        }
        validate(&view, &u_basis).map_err(SPairError::Invalid)?;
        Ok(SPair { view, u_basis, origin: None })
    }

    /// The monomial S-pair of a quotient, with `U` spanned by the variables.
    pub fn from_monomial(q: &MonomialQuotient) -> Result<Self, SPairError> {
        let view = local_view(&q.to_algebra_table())?;
        let n = q.dim();
        let mut u = Vec::new();
        for i in 0..q.num_vars() {
            let mut e = vec![0u32; q.num_vars()];
            e[i] = 1;
            match q.index_of(&e) {
                Some(k) => u.push(unit_vec(n, k)),
                None => return Err(SPairError::NotMonomialSPair),
            }
        }
        let mut p = SPair::new(view, u)?;
        p.origin = Some(q.clone());
        Ok(p)
    }

    pub fn view(&self) -> &LocalView {
        &self.view
    }

    pub fn algebra(&self) -> &AlgebraTable {
        self.view.algebra()
    }

    pub fn u_basis(&self) -> &[Vec<Rational>] {
        &self.u_basis
    }

    pub fn origin(&self) -> Option<&MonomialQuotient> {
        self.origin.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.algebra().dim()
    }

    /// Multiplication by each `u_i` in the algebra basis.
    pub fn ht_matrices(&self) -> Vec<Matrix> {
        self.u_basis.iter().map(|u| self.algebra().mult_operator(u)).collect()
    }

    /// Coordinates of `exp(a_1 u_1 + ... + a_m u_m)` as polynomials in the `a_i`.
    pub fn parametrize_orbit(&self) -> ParametrizedOrbit {
        let m = self.u_basis.len();
        let table = self.algebra();
        let n = table.dim();
        let mut x = vec![Polynomial::zero(m); n];
        for (i, u) in self.u_basis.iter().enumerate() {
            for (k, c) in u.iter().enumerate() {
                if !c.is_zero() {
                    x[k] = &x[k] + &Polynomial::var(m, i).scale(c);
                }
            }
        }
        let one: Vec<Polynomial> =
            table.one().iter().map(|c| Polynomial::constant(m, c.clone())).collect();
        let mut acc = one.clone();
        let mut term = one;
        for k in 1..self.view.nilpotency_index().max(1) {
            term = poly_mul(table, &term, &x);
            let inv = Rational::one() / Rational::from_integer(factorial(k as u32));
            for (a, t) in acc.iter_mut().zip(&term) {
                *a = &*a + &t.scale(&inv);
            }
        }
        ParametrizedOrbit { num_params: m, coords: acc, labels: table.basis_labels().to_vec() }
    }

    /// For a monomial S-pair, checks `P_e(t_1 a_1, ..., t_n a_n) = t^e P_e(a)`
    /// coordinatewise as a polynomial identity.
    pub fn torus_equivariance_check(&self) -> Result<bool, SPairError> {
        let q = self.origin.as_ref().ok_or(SPairError::NotMonomialSPair)?;
        let orbit = self.parametrize_orbit();
        let m = orbit.num_params;
        // variables 0..m are the torus weights t, m..2m the parameters a
        let scaled: Vec<Polynomial> =
            (0..m).map(|i| &Polynomial::var(2 * m, i) * &Polynomial::var(2 * m, m + i)).collect();
        let params: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(2 * m, m + i)).collect();
        for (coord, e) in orbit.coords.iter().zip(q.staircase()) {
            let lhs = coord.substitute(&scaled);
            let mut weight = vec![0u32; 2 * m];
            weight[..m].copy_from_slice(e);
            let rhs = &Polynomial::monomial(2 * m, weight, Rational::one()) * &coord.substitute(&params);
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Product in `table` of elements whose coordinates are polynomials.
pub fn poly_mul(table: &AlgebraTable, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let n = table.dim();
    let nvars = a.first().map_or(0, Polynomial::nvars);
    let mut out = vec![Polynomial::zero(nvars); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let xy = x * y;
            for (k, c) in table.structure(i, j).iter().enumerate() {
                if !c.is_zero() {
                    out[k] = &out[k] + &xy.scale(c);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParametrizedOrbit {
    pub num_params: usize,
    pub coords: Vec<Polynomial>,
    pub labels: Vec<String>,
}

impl ParametrizedOrbit {
    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.coords.iter().map(|p| p.eval(point)).collect()
    }

    /// `P(a + b) = P(a) * P(b)` as a polynomial identity in `2m` variables.
    pub fn group_law_holds(&self, table: &AlgebraTable) -> bool {
        let m = self.num_params;
        let sum: Vec<Polynomial> =
            (0..m).map(|i| &Polynomial::var(2 * m, i) + &Polynomial::var(2 * m, m + i)).collect();
        let first: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(2 * m, i)).collect();
        let second: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(2 * m, m + i)).collect();
        let lhs: Vec<Polynomial> = self.coords.iter().map(|p| p.substitute(&sum)).collect();
        let pa: Vec<Polynomial> = self.coords.iter().map(|p| p.substitute(&first)).collect();
        let pb: Vec<Polynomial> = self.coords.iter().map(|p| p.substitute(&second)).collect();
        lhs == poly_mul(table, &pa, &pb)
    }
}

/// The S-pair of commuting nilpotent operators: the unital algebra they
/// generate, in its first-seen word basis, with `U` spanned by the operators.
pub fn spair_from_operators(ops: &[Matrix], names: &[String]) -> Result<SPair, SPairError> {
    let size = ops.first().map_or(1, Matrix::rows);
    if ops.iter().any(|m| !m.is_square() || m.rows() != size) || names.len() != ops.len() {
        return Err(SPairError::ShapeMismatch);
    }
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            if !ops[i].commutes_with(&ops[j]) {
                return Err(SPairError::NonCommuting { i, j });
            }
        }
    }
    if let Some(i) = ops.iter().position(|m| !m.is_nilpotent()) {
        return Err(SPairError::NotNilpotent { i });
    }
    let flat: Vec<Vec<Rational>> = ops.iter().map(MatrixAlgebra::flatten).collect();
    let mut echelon = Echelon::new(size * size);
    if !flat.iter().all(|v| echelon.insert(v)) {
        return Err(SPairError::GenerationDefect);
    }
    let space = MatrixAlgebra { n: size };
    let closure = span_closure(&space, &flat, names);
    let table = closure_table(&space, &closure)?;
    let view = local_view(&table)?;
    let u = (1..=ops.len()).map(|i| unit_vec(table.dim(), i)).collect();
    SPair::new(view, u)
}

/// Operator names `T1, ..., Tm`.
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("T{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::subalgebra_generated;
    use crate::exactlin::{rat, ratio};

    fn quotient(vars: &[&str], gens: &[Vec<u32>]) -> MonomialQuotient {
        MonomialQuotient::from_generators(vars.iter().map(|s| s.to_string()).collect(), gens).unwrap()
    }

    #[test]
    fn validation_examples() {
        let line = SPair::from_monomial(&quotient(&["x"], &[vec![3]])).unwrap();
        assert_eq!(line.u_basis().len(), 1);
        let sq = quotient(&["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let view = local_view(&sq.to_algebra_table()).unwrap();
        let x = unit_vec(3, sq.index_of(&[1, 0]).unwrap());
        assert_eq!(
            SPair::new(view.clone(), vec![x]),
            Err(SPairError::Invalid(SPairDefect::DoesNotGenerate { generated_dim: 2, dim: 3 }))
        );
        assert_eq!(
            SPair::new(view, vec![unit_vec(3, 0)]),
            Err(SPairError::Invalid(SPairDefect::NotInMaximalIdeal { index: 0 }))
        );
        let a112 = quotient(&["x", "y"], &[vec![3, 0], vec![2, 1], vec![0, 2]]);
        assert_eq!(a112.dim(), 5);
        assert!(SPair::from_monomial(&a112).is_ok());
    }

    #[test]
    fn ht_matrices_examples() {
        let p = SPair::from_monomial(&quotient(&["x"], &[vec![2]])).unwrap();
        assert_eq!(p.ht_matrices(), vec![Matrix::from_integers(2, 2, &[0, 0, 1, 0])]);
        let q = quotient(&["t", "s"], &[vec![3, 0], vec![1, 1], vec![0, 3]]);
        let p = SPair::from_monomial(&q).unwrap();
        let t = p.ht_matrices();
        assert!(t.iter().all(Matrix::is_nilpotent));
        assert!((&t[0] * &t[1]).is_zero());
        let flat: Vec<_> = t.iter().map(MatrixAlgebra::flatten).collect();
        assert_eq!(subalgebra_generated(&MatrixAlgebra { n: 5 }, &flat).dim(), 5);
    }

    #[test]
    fn orbit_examples() {
        let q = quotient(&["t", "s"], &[vec![3, 0], vec![1, 1], vec![0, 3]]);
        let p = SPair::from_monomial(&q).unwrap();
        let orbit = p.parametrize_orbit();
        let a = rat(3);
        let b = rat(-2);
        assert_eq!(
            orbit.eval(&[a.clone(), b.clone()]),
            vec![rat(1), a.clone(), b.clone(), &a * &a * ratio(1, 2), &b * &b * ratio(1, 2)]
        );
        assert_eq!(orbit.eval(&[rat(0), rat(0)]), unit_vec(5, 0));
        assert!(orbit.group_law_holds(p.algebra()));

        let a112 = quotient(&["x", "y"], &[vec![3, 0], vec![2, 1], vec![0, 2]]);
        let p = SPair::from_monomial(&a112).unwrap();
        let orbit = p.parametrize_orbit();
        for (coord, e) in orbit.coords.iter().zip(a112.staircase()) {
            let multinomial = Rational::from_integer(factorial(e[0] + e[1]))
                / Rational::from_integer(factorial(e[0]) * factorial(e[1]));
            // exp carries 1/|e|! on top of the multinomial coefficient
            let rescaled = coord.scale(&Rational::from_integer(factorial(e[0] + e[1])));
            assert_eq!(rescaled, Polynomial::monomial(2, e.clone(), multinomial));
        }
    }

    #[test]
    fn equivariance_examples() {
        for q in [
            quotient(&["x", "y"], &[vec![3, 0], vec![2, 1], vec![0, 2]]),
            quotient(&["x"], &[vec![3]]),
            quotient(&["x", "y"], &[vec![2, 0], vec![0, 2]]),
        ] {
            assert_eq!(SPair::from_monomial(&q).unwrap().torus_equivariance_check(), Ok(true));
        }
        let view = local_view(&AlgebraTable::truncated_polynomial(3)).unwrap();
        let p = SPair::new(view, vec![unit_vec(3, 1)]).unwrap();
        assert_eq!(p.torus_equivariance_check(), Err(SPairError::NotMonomialSPair));
    }

    #[test]
    fn operators_to_spair() {
        let j2 = Matrix::from_integers(2, 2, &[0, 1, 0, 0]);
        let p = spair_from_operators(&[j2], &default_names(1)).unwrap();
        assert_eq!(p.view().hilbert_samuel(), vec![1, 1]);
        assert_eq!(p.algebra().basis_labels(), &["1", "T1"]);

        let a = Matrix::from_integers(2, 2, &[0, 1, 0, 0]);
        let b = Matrix::from_integers(2, 2, &[0, 0, 1, 0]);
        assert_eq!(
            spair_from_operators(&[a.clone(), b], &default_names(2)),
            Err(SPairError::NonCommuting { i: 0, j: 1 })
        );
        assert_eq!(
            spair_from_operators(&[Matrix::identity(2)], &default_names(1)),
            Err(SPairError::NotNilpotent { i: 0 })
        );
        assert_eq!(
            spair_from_operators(&[a.clone(), a.scale(&rat(2))], &default_names(2)),
            Err(SPairError::GenerationDefect)
        );
    }
}
