mod common;

use common::{exterior_power_matrix, mat_vec, rel_err, subsets, wedge_minors};
use dirichlet_lab::exterior::{
    affine_coefficients, ell_v, flow_on_exterior, tau_on_exterior, verify_lemma36, weight_exponent, ExteriorVector,
    IndexSet, RationalSubspace,
};
use dirichlet_lab::flow::WeightVector;
use dirichlet_lab::measures::stream_rng;
use proptest::prelude::*;
use rand::Rng;

const E: f64 = std::f64::consts::E;

fn t312() -> WeightVector {
    WeightVector::new(1, 2, vec![3.0, 1.0, 2.0]).unwrap()
}

fn set(v: &[usize], k: usize) -> IndexSet {
    IndexSet::new(v.to_vec(), k).unwrap()
}

/// `g_t tau(y)` as a dense matrix, coordinates ordered `e_0, e_1, .., e_n`.
fn g_tau(t: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    let k = t.len();
    let mut tau = vec![vec![0.0; k]; k];
    for (i, row) in tau.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    tau[0][1..].copy_from_slice(y);
    let d: Vec<f64> = (0..k).map(|i| if i == 0 { t[0].exp() } else { (-t[i]).exp() }).collect();
    tau.iter().enumerate().map(|(i, row)| row.iter().map(|x| d[i] * x).collect()).collect()
}

fn identity_t(k: usize) -> Vec<f64> {
    // t = 0 gives g_t = I; only used by the oracle
    vec![0.0; k]
}

/// Random balanced `t = (t_0, t_1..t_n)` and `y`.
fn random_case(seed: u64, i: u64, k: usize) -> (WeightVector, Vec<f64>, ExteriorVector) {
    let mut rng = stream_rng(seed, i);
    let n = k - 1;
    let ts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
    let mut t = vec![ts.iter().sum::<f64>()];
    t.extend(ts);
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let j = rng.gen_range(1..=n);
    let coeffs: Vec<f64> = (0..subsets(k, j).len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (WeightVector::new(1, n, t).unwrap(), y, ExteriorVector::from_coeffs(k, j, coeffs).unwrap())
}

#[test]
fn weight_exponent_examples() {
    assert_eq!(weight_exponent(&t312(), &set(&[0], 3)).unwrap(), 3.0);
    assert_eq!(weight_exponent(&t312(), &set(&[1, 2], 3)).unwrap(), -3.0);
    assert_eq!(weight_exponent(&t312(), &set(&[0, 1], 3)).unwrap(), 2.0);
}

#[test]
fn flow_examples() {
    let w = flow_on_exterior(&t312(), &ExteriorVector::basis(3, &set(&[0], 3)).unwrap()).unwrap();
    assert!((w.get(&set(&[0], 3)) - 3f64.exp()).abs() < 1e-12);
    let w = flow_on_exterior(&t312(), &ExteriorVector::basis(3, &set(&[1, 2], 3)).unwrap()).unwrap();
    assert!((w.get(&set(&[1, 2], 3)) - (-3f64).exp()).abs() < 1e-15);
}

#[test]
fn tau_examples() {
    let y = [0.7, -1.3];
    let e0 = ExteriorVector::basis(3, &set(&[0], 3)).unwrap();
    assert_eq!(tau_on_exterior(&y, &e0).unwrap(), e0);
    let w = tau_on_exterior(&y, &ExteriorVector::basis(3, &set(&[1], 3)).unwrap()).unwrap();
    assert_eq!(w.coeffs(), &[0.7, 1.0, 0.0]);
}

#[test]
fn lemma36_examples() {
    let w = ExteriorVector::basis(3, &set(&[1, 2], 3)).unwrap();
    let r = verify_lemma36(&w, &t312()).unwrap();
    assert_eq!(r.ell, 2);
    assert_eq!(r.set, set(&[0, 1], 3));
    assert_eq!(r.variable, 2);
    assert!((r.value.abs() - E * E).abs() < 1e-12);
    assert!(r.value.abs() >= 1.5f64.exp());
    let bad = ExteriorVector::basis(3, &set(&[0, 1], 3)).unwrap();
    assert_eq!(verify_lemma36(&bad, &t312()).unwrap_err().exit_code(), 2);
}

#[test]
fn wedge_matches_minor_oracle() {
    let mut rng = stream_rng(17, 0);
    for k in [3, 4] {
        for j in 1..k {
            let vs: Vec<Vec<f64>> = (0..j).map(|_| (0..k).map(|_| rng.gen_range(-5..=5) as f64).collect()).collect();
            let w = ExteriorVector::wedge(&vs).unwrap();
            assert!(rel_err(w.coeffs(), &wedge_minors(&vs)) < 1e-12);
        }
    }
}

#[test]
fn tau_of_wedge_is_wedge_of_tau() {
    let mut rng = stream_rng(18, 0);
    for k in [3, 4] {
        for _ in 0..50 {
            let y: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let vs: Vec<Vec<f64>> = (0..2).map(|_| (0..k).map(|_| rng.gen_range(-5..=5) as f64).collect()).collect();
            let g = g_tau(&identity_t(k), &y);
            let moved: Vec<Vec<f64>> = vs.iter().map(|v| mat_vec(&g, v)).collect();
            let got = tau_on_exterior(&y, &ExteriorVector::wedge(&vs).unwrap()).unwrap();
            let want = wedge_minors(&moved);
            if want.iter().any(|x| *x != 0.0) {
                assert!(rel_err(got.coeffs(), &want) < 1e-12);
            }
        }
    }
}

#[test]
fn actions_match_exterior_power_oracle() {
    for i in 0..200 {
        let k = if i % 2 == 0 { 3 } else { 4 };
        let (t, y, w) = random_case(19, i, k);
        let want = mat_vec(&exterior_power_matrix(&g_tau(t.as_slice(), &y), w.grade()), w.coeffs());
        let got = flow_on_exterior(&t, &tau_on_exterior(&y, &w).unwrap()).unwrap();
        assert!(rel_err(got.coeffs(), &want) < 1e-10, "case {i}");
        let flow_only = mat_vec(&exterior_power_matrix(&g_tau(t.as_slice(), &vec![0.0; k - 1]), w.grade()), w.coeffs());
        assert!(rel_err(flow_on_exterior(&t, &w).unwrap().coeffs(), &flow_only) < 1e-10);
    }
}

/// `<g_t tau(y) w, e_I>` through the dense oracle.
fn oracle_coordinate(t: &WeightVector, y: &[f64], w: &ExteriorVector, slot: usize) -> f64 {
    mat_vec(&exterior_power_matrix(&g_tau(t.as_slice(), y), w.grade()), w.coeffs())[slot]
}

#[test]
fn coordinates_are_affine_in_y() {
    let mut rng = stream_rng(20, 0);
    for i in 0..200 {
        let k = if i % 2 == 0 { 3 } else { 4 };
        let (t, y, w) = random_case(21, i, k);
        let y2: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mid: Vec<f64> = y.iter().zip(&y2).map(|(a, b)| (a + b) / 2.0).collect();
        let eval = |y: &[f64]| flow_on_exterior(&t, &tau_on_exterior(y, &w).unwrap()).unwrap();
        let (a, b, c) = (eval(&y), eval(&y2), eval(&mid));
        for (slot, s) in w.index_sets().iter().enumerate() {
            let scale = a.coeffs()[slot].abs().max(b.coeffs()[slot].abs()).max(1.0);
            let lhs = c.coeffs()[slot];
            let rhs = (a.coeffs()[slot] + b.coeffs()[slot]) / 2.0;
            assert!((lhs - rhs).abs() <= 1e-12 * scale, "{lhs} vs {rhs}");
            let (c0, cs) = affine_coefficients(&t, &w, s).unwrap();
            let affine = c0 + cs.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>();
            let want = oracle_coordinate(&t, &y, &w, slot);
            assert!((affine - want).abs() <= 1e-10 * want.abs().max(scale));
        }
    }
}

#[test]
fn lemma36_bound_on_integer_vectors() {
    let mut rng = stream_rng(22, 0);
    let mut checked = 0;
    for i in 0..200 {
        let k = if i % 2 == 0 { 3 } else { 4 };
        let (t, _, w) = random_case(23, i, k);
        let coeffs: Vec<f64> = w.coeffs().iter().map(|_| rng.gen_range(-3..=3) as f64).collect();
        let w = ExteriorVector::from_coeffs(k, w.grade(), coeffs).unwrap();
        let avoids_zero = w.index_sets().iter().zip(w.coeffs()).any(|(s, c)| !s.contains(0) && *c != 0.0);
        match verify_lemma36(&w, &t) {
            Ok(r) => {
                assert!(avoids_zero);
                let bound = (t.norm() / (k - 1) as f64).exp();
                assert!(r.value.abs() >= bound * (1.0 - 1e-9), "{} < {bound}", r.value);
                // the coefficient really is d/dy_i of the oracle coordinate
                let slot = w.index_sets().iter().position(|s| *s == r.set).unwrap();
                let zero = vec![0.0; k - 1];
                let mut unit = zero.clone();
                unit[r.variable - 1] = 1.0;
                let slope = oracle_coordinate(&t, &unit, &w, slot) - oracle_coordinate(&t, &zero, &w, slot);
                assert!((slope - r.value).abs() <= 1e-9 * r.value.abs());
                checked += 1;
            }
            Err(e) => {
                assert!(!avoids_zero, "{e}");
                assert_eq!(e.exit_code(), 2);
            }
        }
    }
    assert!(checked > 150);
}

#[test]
fn ell_v_examples() {
    let v = RationalSubspace::new(vec![vec![1, 0]]).unwrap();
    assert!((ell_v(&[1.0, 0.0, 0.0, 1.0], &v).unwrap() - 1.0).abs() < 1e-15);
    let g = [E, 0.0, 0.0, 1.0 / E];
    let want = (E * E + 1.0 / (E * E)).sqrt();
    let v = RationalSubspace::new(vec![vec![1, 1]]).unwrap();
    assert!((ell_v(&g, &v).unwrap() - want).abs() < 1e-12);
    let doubled = RationalSubspace::new(vec![vec![2, 2]]).unwrap();
    assert_eq!(doubled.saturated_basis(), &[vec![1, 1]]);
    assert!((ell_v(&g, &doubled).unwrap() - want).abs() < 1e-12);
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn text_form_round_trips() {
    let (_, _, w) = random_case(24, 0, 4);
    let text = w.to_text();
    assert!(text.lines().skip(1).all(|l| l.starts_with("I={") && l.contains(" w=")));
    assert_eq!(ExteriorVector::from_text(&text).unwrap(), w);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn saturation_spans_and_has_index_one(
        gens in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..=2),
        scale in 1i64..=4,
    ) {
        let gens: Vec<Vec<i64>> = gens.into_iter().map(|g| g.into_iter().map(|x| x * scale).collect()).collect();
        let Ok(v) = RationalSubspace::new(gens.clone()) else { return Ok(()); };
        let basis: Vec<Vec<f64>> = v.saturated_basis().iter().map(|b| b.iter().map(|&x| x as f64).collect()).collect();
        // index one: the maximal minors of the basis are coprime
        let minors = wedge_minors(&basis);
        let g = minors.iter().fold(0i64, |acc, &m| gcd(acc, m.round() as i64));
        prop_assert_eq!(g, 1);
        // same span: adding any generator does not raise the rank
        for gen in &gens {
            let mut ext = basis.clone();
            ext.push(gen.iter().map(|&x| x as f64).collect());
            if ext.len() <= 4 {
                prop_assert!(wedge_minors(&ext).iter().all(|m| m.abs() < 1e-6));
            }
        }
    }

    #[test]
    fn ell_v_ignores_the_generating_set(
        a in prop::collection::vec(-5i64..=5, 3),
        b in prop::collection::vec(-5i64..=5, 3),
        c in -3i64..=3,
        s in 0.1f64..2.0,
    ) {
        let Ok(v) = RationalSubspace::new(vec![a.clone(), b.clone()]) else { return Ok(()); };
        if v.dim() != 2 { return Ok(()); }
        let mixed: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + c * y).collect();
        let w = RationalSubspace::new(vec![b.iter().map(|x| 2 * x).collect(), mixed]).unwrap();
        let g = [s.exp(), 0.0, 0.0, 0.0, (-s / 2.0).exp(), 0.0, 0.3, 0.0, (-s / 2.0).exp()];
        let (x, y) = (ell_v(&g, &v).unwrap(), ell_v(&g, &w).unwrap());
        prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
    }

    #[test]
    fn weights_with_zero_are_nonnegative(ts in prop::collection::vec(0.01f64..5.0, 2..=4), mask in 0u32..16) {
        let n = ts.len();
        let mut t = vec![ts.iter().sum::<f64>()];
        t.extend(&ts);
        let t = WeightVector::new(1, n, t).unwrap();
        let mut elems = vec![0];
        elems.extend((1..=n).filter(|i| mask & (1 << (i - 1)) != 0));
        if elems.len() <= n {
            prop_assert!(weight_exponent(&t, &IndexSet::new(elems, n + 1).unwrap()).unwrap() >= 0.0);
        }
    }
}
