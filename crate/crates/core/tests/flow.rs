mod common;

use dirichlet_lab::experiments::{dual_oracle_batch, random_case, NamedInput};
use dirichlet_lab::flow::{
    ba_quality, di_classify, dirichlet_solvable_direct, dirichlet_solvable_lattice, flow, flowed_lattice, tau,
    trajectory_lambda1, DIVerdict, LinearFormSystem, Solvability, TrajectoryFamily, WeightVector,
};
use proptest::prelude::*;

const E: f64 = std::f64::consts::E;

/// Plain-f64 check of the strict system `|Y_i q - p_i| < eps e^{-t_i}`, `|q_j| < eps e^{t_j}`.
fn oracle_is_witness(y: &[f64], m: usize, n: usize, t: &[f64], eps: f64, p: &[i64], q: &[i64]) -> bool {
    if q.iter().all(|&x| x == 0) {
        return false;
    }
    let forms = (0..m).all(|i| {
        let v: f64 = (0..n).map(|j| y[i * n + j] * q[j] as f64).sum::<f64>() - p[i] as f64;
        v.abs() < eps * (-t[i]).exp()
    });
    forms && (0..n).all(|j| (q[j].abs() as f64) < eps * t[m + j].exp())
}

/// Tries every `q` in the box with nearest-integer `p`.
fn oracle_solvable(y: &[f64], m: usize, n: usize, t: &[f64], eps: f64) -> bool {
    let bound: Vec<i64> = (0..n).map(|j| (eps * t[m + j].exp()).floor() as i64).collect();
    let mut q: Vec<i64> = bound.iter().map(|b| -b).collect();
    loop {
        let p: Vec<i64> =
            (0..m).map(|i| (0..n).map(|j| y[i * n + j] * q[j] as f64).sum::<f64>().round() as i64).collect();
        if oracle_is_witness(y, m, n, t, eps, &p, &q) {
            return true;
        }
        let mut j = n;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            if q[j] < bound[j] {
                q[j] += 1;
                break;
            }
            q[j] = -bound[j];
        }
    }
}

#[test]
fn tau_block_shapes() {
    let b = tau(&LinearFormSystem::zero(2, 2));
    assert_eq!(b.matrix(), dirichlet_lab::lattice::LatticeBasis::identity(4).matrix());
    let b = tau(&LinearFormSystem::new(1, 1, vec![0.7]).unwrap());
    assert_eq!(b.matrix(), vec![1.0, 0.7, 0.0, 1.0]);
    let b = tau(&LinearFormSystem::new(2, 1, vec![0.3, -1.2]).unwrap());
    assert_eq!(b.matrix(), vec![1.0, 0.0, 0.3, 0.0, 1.0, -1.2, 0.0, 0.0, 1.0]);
}

#[test]
fn flow_diagonals() {
    let d = flow(&WeightVector::new(1, 1, vec![1.0, 1.0]).unwrap()).unwrap().diagonal();
    assert!((d[0] - E).abs() < 1e-15 && (d[1] - 1.0 / E).abs() < 1e-15);
    let f = flow(&WeightVector::new(1, 2, vec![3.0, 1.0, 2.0]).unwrap()).unwrap();
    let d = f.diagonal();
    assert!(
        (d[0] - 3f64.exp()).abs() < 1e-12
            && (d[1] - (-1f64).exp()).abs() < 1e-15
            && (d[2] - (-2f64).exp()).abs() < 1e-15
    );
    assert!((f.det() - 1.0).abs() < 1e-12);
    let d = flow(&WeightVector::central(1, 2, 6.0).unwrap()).unwrap().diagonal();
    assert!(
        (d[0] - 6f64.exp()).abs() < 1e-9
            && (d[1] - (-3f64).exp()).abs() < 1e-15
            && (d[2] - (-3f64).exp()).abs() < 1e-15
    );
}

#[test]
fn weight_vectors_reject_bad_input() {
    assert!(WeightVector::new(1, 1, vec![0.0, 0.0]).is_err());
    assert!(WeightVector::new(1, 1, vec![1.0, 2.0]).is_err());
    assert!(flow(&WeightVector::new(1, 1, vec![301.0, 301.0]).unwrap()).is_err());
}

#[test]
fn direct_solver_examples() {
    let y = LinearFormSystem::new(1, 1, vec![0.5]).unwrap();
    let t = WeightVector::new(1, 1, vec![1.0, 1.0]).unwrap();
    assert!(dirichlet_solvable_direct(&y, &t, 0.3, false).unwrap().is_none());

    let y = LinearFormSystem::zero(1, 1);
    let t = WeightVector::new(1, 1, vec![2.0, 2.0]).unwrap();
    let w = dirichlet_solvable_direct(&y, &t, 0.5, false).unwrap().unwrap();
    assert_eq!((w.p(), w.q()), (&[0][..], &[1][..]));
    assert_eq!(dirichlet_solvable_lattice(&y, &t, 0.5, 1e-9).unwrap(), Solvability::Solvable);
}

#[test]
fn direct_solver_budget_is_enforced() {
    let y = LinearFormSystem::new(1, 2, vec![0.1, 0.2]).unwrap();
    let t = WeightVector::new(1, 2, vec![40.0, 20.0, 20.0]).unwrap();
    let err = dirichlet_solvable_direct(&y, &t, 0.9, false).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn golden_ratio_at_three_is_unsolvable() {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    assert!(!oracle_solvable(&[phi], 1, 1, &[3.0, 3.0], 0.05));
    let t = WeightVector::new(1, 1, vec![3.0, 3.0]).unwrap();
    let y = NamedInput::GoldenRatio.system();
    assert_eq!(dirichlet_solvable_lattice(&y, &t, 0.05, 1e-9).unwrap(), Solvability::Unsolvable);
    assert!(dirichlet_solvable_direct(&y, &t, 0.05, false).unwrap().is_none());
}

#[test]
fn dual_oracle_on_500_random_cases() {
    let r = dual_oracle_batch(2024, 500, 1e-9).unwrap();
    assert_eq!(r.disagreements, 0);
    assert!(r.boundary * 100 < 500);
    assert_eq!(r.dirichlet_failures, 0);
    let solvable = r.cases.iter().filter(|c| c.lattice == Solvability::Solvable).count();
    assert!(solvable > 50 && solvable < 450, "both outcomes should occur: {solvable}");
    // an independent brute-force check of the same cases
    for c in &r.cases {
        if c.agree.is_some() {
            assert_eq!(oracle_solvable(&c.y, c.m, c.n, &c.t, c.eps), c.direct, "{c:?}");
        }
    }
}

#[test]
fn random_cases_respect_their_ranges() {
    for i in 0..200 {
        let (y, t, eps) = random_case(5, i);
        assert!(t.floor() <= 6.0);
        assert!((0.2..=0.95).contains(&eps));
        assert!(y.entries().iter().all(|v| v.abs() <= 3.0));
        assert!((1..=2).contains(&y.m()) && (1..=2).contains(&y.n()));
    }
}

#[test]
fn di_classification_examples() {
    let fam = TrajectoryFamily::central(1, 1, 0.25, 0.25, 80);
    let r = di_classify(&LinearFormSystem::zero(1, 1), &fam, 0.5, 20.0, 1e-9).unwrap();
    assert_eq!(r.verdict, DIVerdict::ImprovableUpToHorizon);

    let r = di_classify(&NamedInput::Random(3).system(), &fam, 0.3, 20.0, 1e-9).unwrap();
    assert_eq!(r.verdict, DIVerdict::NotImprovableWitnessed);
    assert!(r.last_unsolvable_norm.unwrap() > r.tail_start);

    let fam = TrajectoryFamily::central(1, 1, 0.25, 0.25, 120);
    let r = di_classify(&NamedInput::Liouville(5).system(), &fam, 0.1, 30.0, 1e-9).unwrap();
    assert_eq!(r.verdict, DIVerdict::ImprovableUpToHorizon);
    for rec in &r.records {
        if let Some(w) = &rec.witness {
            assert!(w.verify(&NamedInput::Liouville(5).system(), &rec.t, 0.1, false));
        }
    }
}

#[test]
fn di_rejects_empty_families() {
    let fam = TrajectoryFamily::ExplicitList(vec![]);
    assert!(di_classify(&LinearFormSystem::zero(1, 1), &fam, 0.5, 10.0, 1e-9).is_err());
}

#[test]
fn zero_form_profile_is_exponential() {
    let fam = TrajectoryFamily::central(1, 1, 1.0, 1.0, 5);
    let series = trajectory_lambda1(&LinearFormSystem::zero(1, 1), &fam, 1e-9).unwrap();
    for (i, (_, l)) in series.iter().enumerate() {
        let want = (-(i as f64 + 1.0)).exp();
        assert!((l - want).abs() < 1e-15 * want.max(1.0), "{l} vs {want}");
    }
}

#[test]
fn golden_and_liouville_profiles() {
    let golden =
        trajectory_lambda1(&NamedInput::GoldenRatio.system(), &TrajectoryFamily::central(1, 1, 0.05, 0.05, 400), 1e-9)
            .unwrap();
    let min = golden.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    assert!(min >= 0.6, "{min}");
    let liou =
        trajectory_lambda1(&NamedInput::Liouville(5).system(), &TrajectoryFamily::central(1, 1, 0.05, 0.05, 600), 1e-9)
            .unwrap();
    let min = liou.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    assert!(min <= 0.01, "{min}");
}

/// `min_{1 <= q <= Qmax} q |q y - round(q y)|` for `m = n = 1`, unit weights.
fn oracle_ba(y: f64, q_max: i64) -> f64 {
    (1..=q_max).map(|q| q as f64 * (q as f64 * y - (q as f64 * y).round()).abs()).fold(f64::INFINITY, f64::min)
}

#[test]
fn ba_quality_examples() {
    let zero = LinearFormSystem::zero(1, 2);
    assert_eq!(ba_quality(&zero, &[1.0], &[0.5, 0.5], 5).unwrap(), 0.0);
    let half = LinearFormSystem::new(1, 1, vec![0.5]).unwrap();
    assert_eq!(ba_quality(&half, &[1.0], &[1.0], 1000).unwrap(), 0.0);
    assert!(ba_quality(&half, &[1.0], &[1.0], 1).unwrap() > 0.0);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let golden = LinearFormSystem::new(1, 1, vec![phi]).unwrap();
    let got = ba_quality(&golden, &[1.0], &[1.0], 1000).unwrap();
    assert!((got - oracle_ba(phi, 1000)).abs() < 1e-12, "{got}");
}

#[test]
fn ba_budget_is_enforced() {
    let y = LinearFormSystem::new(1, 2, vec![0.1, 0.2]).unwrap();
    assert_eq!(ba_quality(&y, &[1.0], &[0.5, 0.5], 10_000).unwrap_err().exit_code(), 3);
}

fn small_case() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>)> {
    (1usize..=2, 1usize..=2).prop_flat_map(|(m, n)| {
        (
            Just(m),
            Just(n),
            prop::collection::vec(-3.0f64..3.0, m * n),
            prop::collection::vec(0.2f64..3.0, m),
            prop::collection::vec(0.2f64..0.8, n),
        )
            .prop_map(|(m, n, y, a, w)| {
                let total: f64 = a.iter().sum();
                let ws: f64 = w.iter().sum();
                let mut t = a;
                t.extend(w.iter().map(|x| total * x / ws));
                (m, n, y, t)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_theorem_at_eps_one((m, n, y, t) in small_case()) {
        let sys = LinearFormSystem::new(m, n, y).unwrap();
        let t = WeightVector::new(m, n, t).unwrap();
        prop_assert!(dirichlet_solvable_direct(&sys, &t, 1.0, true).unwrap().is_some());
    }

    #[test]
    fn witnesses_are_valid_and_monotone_in_eps((m, n, y, t) in small_case(), eps in 0.2f64..0.9) {
        let sys = LinearFormSystem::new(m, n, y.clone()).unwrap();
        let tv = WeightVector::new(m, n, t.clone()).unwrap();
        if let Some(w) = dirichlet_solvable_direct(&sys, &tv, eps, false).unwrap() {
            prop_assert!(w.verify(&sys, &tv, eps, false));
            prop_assert!(oracle_is_witness(&y, m, n, &t, eps, w.p(), w.q()));
            for bigger in [eps * 1.05, (eps + 1.0) / 2.0, 0.999] {
                prop_assert!(w.verify(&sys, &tv, bigger, false));
                prop_assert!(dirichlet_solvable_direct(&sys, &tv, bigger, false).unwrap().is_some());
            }
        }
    }

    #[test]
    fn flow_has_unit_determinant((m, n, _y, t) in small_case()) {
        let t = WeightVector::new(m, n, t).unwrap();
        prop_assert!((flow(&t).unwrap().det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flowed_lattice_is_unimodular((m, n, y, t) in small_case()) {
        let sys = LinearFormSystem::new(m, n, y).unwrap();
        let t = WeightVector::new(m, n, t).unwrap();
        prop_assert!((flowed_lattice(&sys, &t).unwrap().det() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ba_quality_is_nonincreasing(y in 0.0f64..1.0, q in 1u64..200) {
        let sys = LinearFormSystem::new(1, 1, vec![y]).unwrap();
        let a = ba_quality(&sys, &[1.0], &[1.0], q).unwrap();
        let b = ba_quality(&sys, &[1.0], &[1.0], q + 17).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn family_elements_are_valid(start in 0.1f64..3.0, step in 0.1f64..2.0, count in 1usize..30) {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            for t in TrajectoryFamily::central(m, n, start, step, count).generate().unwrap() {
                prop_assert!(WeightVector::new(m, n, t.as_slice().to_vec()).is_ok());
            }
        }
    }
}
