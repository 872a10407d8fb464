//! Cofinite monomial ideals and their staircases of standard monomials.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::algebra::AlgebraTable;
use crate::exactlin::{unit_vec, zero_vec};

pub type Exponent = Vec<u32>;

pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("quotient is infinite: no pure power of {var} lies in the ideal")]
    InfiniteQuotient { var: String },
    #[error("ideal contains 1, the quotient is the zero ring")]
    ZeroRing,
    #[error("exponent {exponent:?} has {found} entries, expected {expected}")]
    VariableCount { exponent: Exponent, expected: usize, found: usize },
    #[error("staircase is not downward closed at {0:?}")]
    NotDownwardClosed(Exponent),
    #[error("staircase is empty")]
    EmptyStaircase,
    #[error("dimension {dim} exceeds the enumeration bound {bound}")]
    BoundExceeded { dim: usize, bound: usize },
    #[error("expected 2 variables, found {0}")]
    NotTwoVariables(usize),
}

/// Graded order, ties broken by descending exponent of the earlier variables:
/// `1, x, y, x^2, x*y, y^2, ...`.
pub fn graded_order(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

pub fn monomial_label(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_by(|a, b| graded_order(a, b));
    gens.dedup();
    let mut out: Vec<Exponent> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialQuotient {
    vars: Vec<String>,
    generators: Vec<Exponent>,
    staircase: Vec<Exponent>,
}

impl MonomialQuotient {
    pub fn from_generators(vars: Vec<String>, gens: &[Exponent]) -> Result<Self, MonomialError> {
        let n = vars.len();
        for g in gens {
            if g.len() != n {
                return Err(MonomialError::VariableCount { exponent: g.clone(), expected: n, found: g.len() });
            }
            if g.iter().all(|&k| k == 0) {
                return Err(MonomialError::ZeroRing);
            }
        }
        let mut sides = Vec::with_capacity(n);
        for (i, var) in vars.iter().enumerate() {
            let pure = gens
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, &k)| j == i || k == 0))
                .map(|g| g[i])
                .min();
            match pure {
                Some(k) => sides.push(k),
                None => return Err(MonomialError::InfiniteQuotient { var: var.clone() }),
            }
        }
        let mut staircase = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            if !gens.iter().any(|g| divides(g, &e)) {
                staircase.push(e.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    staircase.sort_by(|a, b| graded_order(a, b));
                    return Ok(MonomialQuotient { vars, generators: minimalize(gens.to_vec()), staircase });
                }
                e[i] += 1;
                if e[i] < sides[i] {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    pub fn from_staircase(vars: Vec<String>, staircase: &[Exponent]) -> Result<Self, MonomialError> {
        let n = vars.len();
        if staircase.is_empty() {
            return Err(MonomialError::EmptyStaircase);
        }
        let set: BTreeSet<Exponent> = staircase.iter().cloned().collect();
        for s in &set {
            if s.len() != n {
                return Err(MonomialError::VariableCount { exponent: s.clone(), expected: n, found: s.len() });
            }
            for i in 0..n {
                if s[i] > 0 {
                    let mut t = s.clone();
                    t[i] -= 1;
                    if !set.contains(&t) {
                        return Err(MonomialError::NotDownwardClosed(s.clone()));
                    }
                }
            }
        }
        let mut gens = Vec::new();
        for s in &set {
            for i in 0..n {
                let mut g = s.clone();
                g[i] += 1;
                if set.contains(&g) {
                    continue;
                }
                let minimal = (0..n).filter(|&j| g[j] > 0).all(|j| {
                    let mut t = g.clone();
                    t[j] -= 1;
                    set.contains(&t)
                });
                if minimal {
                    gens.push(g);
                }
            }
        }
        let mut staircase: Vec<Exponent> = set.into_iter().collect();
        staircase.sort_by(|a, b| graded_order(a, b));
        Ok(MonomialQuotient { vars, generators: minimalize(gens), staircase })
    }

    /// Two-variable staircase whose column `i` holds `x^i y^0, ..., x^i y^(h_i - 1)`.
    pub fn from_heights(vars: Vec<String>, heights: &[u32]) -> Result<Self, MonomialError> {
        if vars.len() != 2 {
            return Err(MonomialError::NotTwoVariables(vars.len()));
        }
        let cells: Vec<Exponent> = heights
            .iter()
            .enumerate()
            .flat_map(|(i, &h)| (0..h).map(move |j| vec![i as u32, j]))
            .collect();
        MonomialQuotient::from_staircase(vars, &cells)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn staircase(&self) -> &[Exponent] {
        &self.staircase
    }

    pub fn dim(&self) -> usize {
        self.staircase.len()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.staircase.iter().position(|s| s.as_slice() == e)
    }

    pub fn labels(&self) -> Vec<String> {
        self.staircase.iter().map(|e| monomial_label(&self.vars, e)).collect()
    }

    pub fn with_vars(&self, vars: Vec<String>) -> Result<Self, MonomialError> {
        if vars.len() != self.vars.len() {
            return Err(MonomialError::VariableCount {
                exponent: Vec::new(),
                expected: self.vars.len(),
                found: vars.len(),
            });
        }
        Ok(MonomialQuotient { vars, ..self.clone() })
    }

    /// Product of standard monomials is their exponent sum when standard, else 0.
    pub fn to_algebra_table(&self) -> AlgebraTable {
        let n = self.dim();
        let index: HashMap<&Exponent, usize> = self.staircase.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let unit = index[&vec![0; self.num_vars()]];
        AlgebraTable::from_fn(self.labels(), unit, |i, j| {
            let sum: Exponent = self.staircase[i].iter().zip(&self.staircase[j]).map(|(a, b)| a + b).collect();
            match index.get(&sum) {
                Some(&k) => unit_vec(n, k),
                None => zero_vec(n),
            }
        })
        .expect("staircase table is well formed")
    }

    /// Side lengths `k` when the staircase is `{e : e_j <= k_j}`.
    pub fn is_box(&self) -> Option<Vec<u32>> {
        let sides: Vec<u32> =
            (0..self.num_vars()).map(|j| self.staircase.iter().map(|e| e[j]).max().unwrap_or(0)).collect();
        let volume: usize = sides.iter().map(|&k| k as usize + 1).product();
        (volume == self.dim()).then_some(sides)
    }

    /// Number of standard monomials of each total degree.
    pub fn graded_sequence(&self) -> Vec<usize> {
        let top = self.staircase.iter().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
        let mut out = vec![0; top + 1];
        for e in &self.staircase {
            out[e.iter().sum::<u32>() as usize] += 1;
        }
        out
    }

    /// Column heights of a two-variable staircase.
    pub fn heights(&self) -> Option<Vec<u32>> {
        if self.num_vars() != 2 {
            return None;
        }
        let width = self.staircase.iter().map(|e| e[0]).max().unwrap_or(0) + 1;
        Some((0..width).map(|i| self.staircase.iter().filter(|e| e[0] == i).count() as u32).collect())
    }

    /// The same staircase with the two variables exchanged.
    pub fn swapped(&self) -> Option<MonomialQuotient> {
        if self.num_vars() != 2 {
            return None;
        }
        let cells: Vec<Exponent> = self.staircase.iter().map(|e| vec![e[1], e[0]]).collect();
        MonomialQuotient::from_staircase(self.vars.clone(), &cells).ok()
    }
}

fn partitions(n: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for p in (1..=max_part.min(n)).rev() {
        prefix.push(p);
        partitions(n - p, p, prefix, out);
        prefix.pop();
    }
}

/// Every two-variable staircase of the given size, in descending order of
/// column-height vectors.
pub fn staircases_2v(dim: usize, vars: &[String; 2]) -> Vec<MonomialQuotient> {
    let mut parts = Vec::new();
    partitions(dim as u32, dim as u32, &mut Vec::new(), &mut parts);
    parts
        .iter()
        .map(|h| MonomialQuotient::from_heights(vars.to_vec(), h).expect("partitions give staircases"))
        .collect()
}

/// All labelled two-variable staircases with Hilbert–Samuel sequence `hs`.
pub fn enumerate_quotients_2v(hs: &[usize], bound: usize) -> Result<Vec<MonomialQuotient>, MonomialError> {
    let dim: usize = hs.iter().sum();
    if dim > bound {
        return Err(MonomialError::BoundExceeded { dim, bound });
    }
    if hs.first() != Some(&1) {
        return Ok(Vec::new());
    }
    let vars = ["x".to_string(), "y".to_string()];
    Ok(staircases_2v(dim, &vars).into_iter().filter(|q| q.graded_sequence() == hs).collect())
}

/// Keeps one staircase per orbit of the variable swap: the orientation whose
/// column-height vector is lexicographically smaller. Representatives are
/// returned in descending order of that vector.
pub fn dedup_swap(quotients: &[MonomialQuotient]) -> Vec<MonomialQuotient> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for q in quotients {
        let canonical = match (q.heights(), q.swapped()) {
            (Some(h), Some(s)) => {
                if s.heights().is_some_and(|hs| hs < h) {
                    s
                } else {
                    q.clone()
                }
            }
            _ => q.clone(),
        };
        if seen.insert(canonical.staircase.clone()) {
            out.push(canonical);
        }
    }
    out.sort_by_key(|q| std::cmp::Reverse(q.heights()));
    out
}
