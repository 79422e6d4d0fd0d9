//! Sup-norm shortest vectors and K_eps membership for a few lattices.

use dirichlet_lab::lattice::{classify_length, random_unimodular, reduce_basis, shortest_vector_supnorm, LatticeBasis};

fn main() -> dirichlet_lab::Result<()> {
    // columns are basis vectors
    let skewed = LatticeBasis::from_rows(2, vec![1.0, 1000.0, 0.0, 1.0])?;
    let sv = shortest_vector_supnorm(&skewed, 1e-9)?;
    println!("skewed: lambda_1 = {} via {:?}", sv.length, sv.coeffs);

    for k in 2..=4 {
        let b = random_unimodular(7, k, 2.0);
        let r = reduce_basis(&b)?;
        let sv = shortest_vector_supnorm(&b, 1e-9)?;
        println!(
            "k={k}: det {:.3e}, reduced first column {:?}, lambda_1 {:.6}, K_0.5 {:?}",
            b.det(),
            r.basis.column(0).iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
            sv.length,
            classify_length(sv.length, 0.5, 1e-9)
        );
    }
    Ok(())
}
