//! The reproduction suite: one check per claim, each returning a
//! pass/fail result with a short detail line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::local_view;
use crate::derivation::{bch_power_check, operator_matrix, span_dims, vanishing_check, OperatorLabel, SectionBasis};
use crate::exactlin::{add_vec, rat, Matrix, Rational};
use crate::geometry::verify_nonnormal_example;
use crate::hirzebruch::{normalized_spair, twisted_spair, HDivisor};
use crate::isomorphy::{
    decide_monomial_2gen, fingerprint, ideal_display, triangular_substitution, verify_certificate, IsoCertificate,
    VerdictKind, DEFAULT_BOUND,
};
use crate::monomial::{staircases_2v, MonomialQuotient};
use crate::presentation::verify_allrelations;
use crate::spair::{default_names, spair_from_operators, SPair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub key: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Criterion {
    pub id: u32,
    pub key: &'static str,
    pub name: &'static str,
    run: fn() -> Result<String, String>,
}

impl Criterion {
    pub fn run(&self) -> CriterionResult {
        let (passed, detail) = match (self.run)() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CriterionResult { id: self.id, key: self.key, name: self.name, passed, detail }
    }
}

pub const PROPERTY_CASES: usize = 200;

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, key: "sections", name: "section count formula", run: sections },
        Criterion { id: 2, key: "operator-dim", name: "operator algebra dimension", run: operator_dim },
        Criterion { id: 3, key: "bch", name: "power identity for delta1", run: bch },
        Criterion { id: 4, key: "vanishing", name: "vanishing products", run: vanishing },
        Criterion { id: 5, key: "span-dims", name: "span dimensions", run: span },
        Criterion { id: 6, key: "relations", name: "relation structure", run: relations },
        Criterion { id: 7, key: "nonnormal", name: "non-normal example", run: nonnormal },
        Criterion { id: 8, key: "monomiality", name: "monomiality decisions", run: monomiality },
        Criterion { id: 9, key: "gorenstein-box", name: "Gorenstein iff box", run: gorenstein_box },
        Criterion { id: 10, key: "torus", name: "torus equivariance", run: torus },
        Criterion { id: 11, key: "properties", name: "randomized properties", run: properties },
    ]
}

/// Runs the criteria whose key or id contains `filter`, in order.
pub fn run_all(filter: Option<&str>) -> Vec<CriterionResult> {
    criteria()
        .iter()
        .filter(|c| filter.is_none_or(|f| c.key.contains(f) || c.id.to_string() == f))
        .map(Criterion::run)
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn section_grid() -> Vec<(u32, i64, i64)> {
    let mut out = Vec::new();
    for n in 0..=4u32 {
        for a in 1..=4i64 {
            let base = i64::from(n) * a;
            for b in base + 1..=base + 4 {
                out.push((n, a, b));
            }
        }
    }
    out
}

fn operator_grid() -> Vec<(u32, i64, i64)> {
    let mut out = Vec::new();
    for n in 1..=2u32 {
        for a in 1..=3i64 {
            let base = i64::from(n) * a;
            for b in base + 1..=base + 3 {
                out.push((n, a, b));
            }
        }
    }
    out
}

const INDEX_ONE_PAIRS: [(u32, u32); 5] = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6)];

fn sections() -> Result<String, String> {
    let grid = section_grid();
    for &(n, a, b) in &grid {
        let d = HDivisor::new(n, a, b);
        let count = d.sections().len() as i64;
        ensure(count == d.section_count_formula(), || format!("({n},{a},{b}): {count} sections, formula {}", d.section_count_formula()))?;
    }
    Ok(format!("{} divisors", grid.len()))
}

fn operator_dim() -> Result<String, String> {
    let grid = operator_grid();
    for &(n, a, b) in &grid {
        let p = twisted_spair(n, a, b).map_err(|e| format!("({n},{a},{b}): {e}"))?;
        let expected = HDivisor::new(n, a, b).section_count_formula() as usize;
        ensure(p.dim() == expected, || format!("({n},{a},{b}): dim {} expected {expected}", p.dim()))?;
    }
    Ok(format!("{} divisors", grid.len()))
}

fn bch() -> Result<String, String> {
    let mut checked = 0;
    for (a, b) in INDEX_ONE_PAIRS {
        let basis = SectionBasis::new(1, i64::from(a), i64::from(b));
        let delta1 = operator_matrix(&basis, OperatorLabel::Delta1).map_err(|e| e.to_string())?.matrix;
        let top = delta1.nilpotency_index().ok_or_else(|| format!("({a},{b}): delta1 not nilpotent"))?;
        for power in 1..=top {
            let r = bch_power_check(a, b, power).map_err(|e| e.to_string())?;
            ensure(r.holds && r.a_commutes_with_c && r.b_commutes_with_c, || format!("({a},{b}) N={power}: {r:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} powers over {} divisors", INDEX_ONE_PAIRS.len()))
}

fn vanishing() -> Result<String, String> {
    let mut boundary = 0;
    for (a, b) in INDEX_ONE_PAIRS {
        let r = vanishing_check(a, b).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("({a},{b}): {r:?}"))?;
        boundary += r.boundary_checked;
    }
    Ok(format!("{boundary} boundary products vanish"))
}

fn span() -> Result<String, String> {
    let mut cases = 0;
    for a in 1..=3u32 {
        for b in 2 * a..=2 * a + 3 {
            for l in 0..=a {
                let r = span_dims(a, b, l).map_err(|e| e.to_string())?;
                ensure(r.holds(), || format!("(a,b,l)=({a},{b},{l}): {r:?}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} spans of dimension l+1"))
}

fn relations() -> Result<String, String> {
    for (a, b) in INDEX_ONE_PAIRS {
        let r = verify_allrelations(a, b).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("({a},{b}): {}", r.failures.join("; ")))?;
    }
    Ok(format!("{} divisors, items (i)-(iv) and quotient dimension", INDEX_ONE_PAIRS.len()))
}

fn nonnormal() -> Result<String, String> {
    let r = verify_nonnormal_example().map_err(|e| e.to_string())?;
    let expected = vec!["z1^2 - 2*z0*z3".to_string(), "z2^2 - 2*z0*z4".to_string()];
    ensure(r.quadrics == expected, || format!("quadrics {:?}", r.quadrics))?;
    ensure(r.passed, || format!("{r:?}"))?;
    Ok(format!(
        "{}; rank <= 1 at {}/{} line points, rank 2 at {}/{} orbit points",
        r.quadrics.join(", "),
        r.singular_samples,
        r.line_samples.len(),
        r.smooth_samples,
        r.orbit_samples.len()
    ))
}

fn monomiality() -> Result<String, String> {
    let a12 = twisted_spair(1, 1, 2).map_err(|e| e.to_string())?;
    let v = decide_monomial_2gen(a12.view(), DEFAULT_BOUND).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::Monomial, || format!("(1,2): {:?}", v.kind))?;
    let target = v.candidate.as_ref().map(ideal_display).unwrap_or_default();
    ensure(target == "(z^4, z*w, w^2)", || format!("(1,2): certificate onto {target}"))?;
    let cert = v.certificate.as_ref().ok_or("(1,2): missing certificate")?;
    verify_certificate(cert).map_err(|e| format!("(1,2): {e}"))?;

    let a13 = twisted_spair(1, 1, 3).map_err(|e| e.to_string())?;
    let hs = a13.view().hilbert_samuel();
    ensure(hs == [1, 2, 2, 1, 1], || format!("(1,3): Hilbert-Samuel {hs:?}"))?;
    let v = decide_monomial_2gen(a13.view(), DEFAULT_BOUND).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::NonMonomial, || format!("(1,3): {:?}", v.kind))?;
    let refuted: Vec<&str> = v.refutations.iter().map(|r| r.candidate.as_str()).collect();
    ensure(refuted == ["(z^5, z*w, w^3)", "(z^5, z^2*w, w^2)"], || format!("(1,3): refuted {refuted:?}"))?;
    let reasons: Vec<&str> = v.refutations.iter().map(|r| r.reason.as_str()).collect();
    Ok(format!("(1,2) -> {target}; (1,3) non-monomial [{}]", reasons.join("; ")))
}

/// Corners of a staircase: cells with no upper neighbour in either direction.
fn staircase_corners(q: &MonomialQuotient) -> usize {
    q.staircase()
        .iter()
        .filter(|e| q.index_of(&[e[0] + 1, e[1]]).is_none() && q.index_of(&[e[0], e[1] + 1]).is_none())
        .count()
}

fn gorenstein_box() -> Result<String, String> {
    let vars = ["x".to_string(), "y".to_string()];
    let mut count = 0;
    let mut boxes = 0;
    for dim in 1..=8 {
        for q in staircases_2v(dim, &vars) {
            let view = local_view(&q.to_algebra_table()).map_err(|e| e.to_string())?;
            let socle = view.socle().dim();
            ensure(socle == staircase_corners(&q), || format!("{}: socle {socle}", ideal_display(&q)))?;
            let is_box = q.is_box().is_some();
            ensure(view.is_gorenstein() == is_box, || format!("{}: gorenstein {}", ideal_display(&q), !is_box))?;
            count += 1;
            boxes += usize::from(is_box);
        }
    }
    Ok(format!("{count} staircases, {boxes} boxes"))
}

fn torus() -> Result<String, String> {
    let mut grid = section_grid();
    grid.extend(operator_grid());
    grid.sort();
    grid.dedup();
    for &(n, a, b) in &grid {
        let p = normalized_spair(n, a, b).map_err(|e| e.to_string())?;
        ensure(p.torus_equivariance_check() == Ok(true), || format!("({n},{a},{b}) fails"))?;
    }
    let q = MonomialQuotient::from_generators(vec!["t".into(), "s".into()], &[vec![3, 0], vec![1, 1], vec![0, 3]])
        .map_err(|e| e.to_string())?;
    let p = SPair::from_monomial(&q).map_err(|e| e.to_string())?;
    ensure(p.torus_equivariance_check() == Ok(true), || "(t^3, ts, s^3) fails".to_string())?;
    Ok(format!("{} monomial S-pairs", grid.len() + 1))
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into())
}

fn random_staircase(rng: &mut ChaCha8Rng, dims: std::ops::RangeInclusive<usize>, two_generated: bool) -> MonomialQuotient {
    let vars = ["x".to_string(), "y".to_string()];
    loop {
        let family = staircases_2v(rng.gen_range(dims.clone()), &vars);
        let q = family[rng.gen_range(0..family.len())].clone();
        if !two_generated || q.graded_sequence().get(1) == Some(&2) {
            return q;
        }
    }
}

fn exp_additivity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let q = random_staircase(rng, 2..=8, false);
    let view = local_view(&q.to_algebra_table()).map_err(|e| e.to_string())?;
    let element = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        let mut v = vec![rat(0); q.dim()];
        for b in view.maximal_ideal().basis() {
            crate::exactlin::axpy(&mut v, &small(rng), b);
        }
        v
    };
    let (x, y) = (element(rng), element(rng));
    let lhs = view.exp_element(&add_vec(&x, &y)).map_err(|e| e.to_string())?;
    let ex = view.exp_element(&x).map_err(|e| e.to_string())?;
    let ey = view.exp_element(&y).map_err(|e| e.to_string())?;
    ensure(lhs == view.algebra().mul(&ex, &ey), || format!("exp not additive on {}", ideal_display(&q)))
}

fn rank_nullity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let m = Matrix::from_fn(rows, cols, |_, _| if rng.gen_bool(0.4) { rat(0) } else { small(rng) });
    let kernel = m.kernel_basis();
    ensure(m.rank() + kernel.dim() == cols, || format!("rank-nullity fails for {m:?}"))?;
    ensure(kernel.basis().iter().all(|v| m.mul_vec(v).iter().all(|c| *c == rat(0))), || format!("kernel of {m:?}"))
}

fn operator_round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let q = random_staircase(rng, 3..=9, true);
    let p = SPair::from_monomial(&q).map_err(|e| e.to_string())?;
    let back = spair_from_operators(&p.ht_matrices(), &default_names(p.u_basis().len())).map_err(|e| e.to_string())?;
    let (v, w) = (p.view(), back.view());
    ensure(
        back.dim() == p.dim()
            && w.hilbert_samuel() == v.hilbert_samuel()
            && w.socle().dim() == v.socle().dim()
            && w.is_gorenstein() == v.is_gorenstein(),
        || format!("invariants differ after the operator round trip on {}", ideal_display(&q)),
    )
}

fn fingerprint_invariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let q = random_staircase(rng, 3..=7, true);
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let c = small(rng);
        if c != rat(0) {
            return c;
        }
    };
    let lead = [nonzero(rng), small(rng), nonzero(rng)];
    let tails: Vec<Rational> = (0..6).map(|_| small(rng)).collect();
    let (table, gens) = triangular_substitution(&q, &lead, &tails).map_err(|e| e.to_string())?;
    let cert = IsoCertificate::on_basis(table.clone(), q.to_algebra_table(), &[(1, gens[0].clone()), (2, gens[1].clone())]);
    verify_certificate(&cert).map_err(|e| format!("{}: {e}", ideal_display(&q)))?;
    let view = local_view(&table).map_err(|e| e.to_string())?;
    let original = local_view(&q.to_algebra_table()).map_err(|e| e.to_string())?;
    ensure(fingerprint(&view) == fingerprint(&original), || format!("fingerprint changed on {}", ideal_display(&q)))
}

fn properties() -> Result<String, String> {
    type Property = fn(&mut ChaCha8Rng) -> Result<(), String>;
    let suites: [(&str, u64, Property); 4] = [
        ("exp additivity", 1, exp_additivity),
        ("rank-nullity", 2, rank_nullity),
        ("operator round trip", 3, operator_round_trip),
        ("fingerprint invariance", 4, fingerprint_invariance),
    ];
    for (name, seed, property) in suites {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for case in 0..PROPERTY_CASES {
            property(&mut rng).map_err(|e| format!("{name}, case {case}: {e}"))?;
        }
    }
    Ok(format!("{} suites x {PROPERTY_CASES} cases", suites.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_have_the_stated_sizes() {
        assert_eq!(section_grid().len(), 80);
        assert_eq!(operator_grid().len(), 18);
    }

    #[test]
    fn filters_select_criteria() {
        let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=11).collect::<Vec<_>>());
        let picked = run_all(Some("sections"));
        assert_eq!(picked.len(), 1);
        assert!(picked[0].passed, "{}", picked[0].detail);
        assert!(run_all(Some("no-such-criterion")).is_empty());
    }

    #[test]
    fn corners_count_the_socle() {
        let q = MonomialQuotient::from_generators(vec!["x".into(), "y".into()], &[vec![3, 0], vec![1, 1], vec![0, 2]])
            .unwrap();
        assert_eq!(staircase_corners(&q), 2);
    }
}
