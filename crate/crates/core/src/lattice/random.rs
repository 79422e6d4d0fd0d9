use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IntMatrix, LatticeBasis};

/// Deterministic pseudo-random unimodular basis.
///
/// Built as `A * S`: `A` is a random well-conditioned matrix skewed by a
/// diagonal factor `exp(spread * g_i)` and renormalized to determinant one;
/// `S` is a product of `2k` random integer shears with entries bounded by
/// `ceil(spread)`.
pub fn random_unimodular(seed: u64, k: usize, spread: f64) -> LatticeBasis {
    assert!(spread > 0.0, "spread must be positive");
    assert!((2..=super::MAX_DIM).contains(&k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);

    let g: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = g.iter().sum::<f64>() / k as f64;
    let mut a = vec![0.0; k * k];
    for i in 0..k {
        let s = (spread * (g[i] - mean)).exp();
        for j in 0..k {
            let base = if i == j { 1.0 } else { 0.0 };
            a[i * k + j] = s * (base + 0.5 * rng.gen_range(-1.0..1.0));
        }
    }
    let det = DMatrix::from_row_slice(k, k, &a).lu().determinant();
    // det is bounded away from zero: I + E with |E_ij| <= 1/2 is not guaranteed
    // invertible for k >= 3, so resample the perturbation if it degenerates
    if det.abs() < 1e-3 {
        return random_unimodular(seed.wrapping_add(0x9e37_79b9_7f4a_7c15), k, spread);
    }
    for x in &mut a[..k] {
        *x /= det;
    }

    let bound = spread.ceil() as i64;
    let mut shear = IntMatrix::identity(k);
    for _ in 0..2 * k {
        let src = rng.gen_range(0..k);
        let mut dst = rng.gen_range(0..k - 1);
        if dst >= src {
            dst += 1;
        }
        let mut c = rng.gen_range(1..=bound);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        shear.column_axpy(dst, c, src).expect("shear entries stay small");
    }
    let base = LatticeBasis { k, row_scale: vec![1.0; k], core: a, core_lo: vec![0.0; k * k] };
    base.transformed(&shear)
}
