//! One weighted Dirichlet system checked both ways: by searching for
//! `(p, q)` directly and through the flowed lattice.

use dirichlet_lab::flow::{
    dirichlet_solvable_direct, dirichlet_solvable_lattice, flowed_lattice, LinearFormSystem, WeightVector,
};
use dirichlet_lab::lattice::shortest_vector_supnorm;

fn main() -> dirichlet_lab::Result<()> {
    let cases = [
        (LinearFormSystem::new(1, 1, vec![0.5])?, WeightVector::new(1, 1, vec![1.0, 1.0])?, 0.3),
        (LinearFormSystem::new(1, 1, vec![0.0])?, WeightVector::new(1, 1, vec![2.0, 2.0])?, 0.5),
        (LinearFormSystem::new(1, 2, vec![0.3, -1.7])?, WeightVector::new(1, 2, vec![3.0, 1.0, 2.0])?, 0.6),
        (LinearFormSystem::new(2, 1, vec![0.25, 2.5])?, WeightVector::new(2, 1, vec![1.0, 2.0, 3.0])?, 0.8),
    ];
    for (y, t, eps) in cases {
        let lattice = dirichlet_solvable_lattice(&y, &t, eps, 1e-9)?;
        let direct = dirichlet_solvable_direct(&y, &t, eps, false)?;
        let l1 = shortest_vector_supnorm(&flowed_lattice(&y, &t)?, 1e-9)?.length;
        println!(
            "Y={:?} t={:?} eps={eps}: lambda_1 {l1:.5}, lattice says {}",
            y.entries(),
            t.as_slice(),
            lattice.as_str()
        );
        match direct {
            Some(w) => println!("    witness p={:?} q={:?}", w.p(), w.q()),
            None => println!("    no (p, q) in the search box"),
        }
    }
    Ok(())
}
