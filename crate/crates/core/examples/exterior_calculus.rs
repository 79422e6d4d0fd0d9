//! g_t and tau acting on exterior powers, the growth lemma, and ell_V.

use dirichlet_lab::exterior::{
    ell_v, flow_on_exterior, tau_on_exterior, verify_lemma36, weight_exponent, ExteriorVector, IndexSet,
    RationalSubspace,
};
use dirichlet_lab::flow::WeightVector;

fn main() -> dirichlet_lab::Result<()> {
    let t = WeightVector::new(1, 2, vec![3.0, 1.0, 2.0])?;
    for set in IndexSet::all(3, 2) {
        println!("t_{:?} = {}", set.as_slice(), weight_exponent(&t, &set)?);
    }

    let w = ExteriorVector::wedge(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])?;
    let moved = flow_on_exterior(&t, &tau_on_exterior(&[0.4, -0.7], &w)?)?;
    println!("g_t tau(y) (e1 ^ e2) = {}", moved.to_text());

    let r = verify_lemma36(&w, &t)?;
    println!("coefficient {:.4} of y_{} on e_{:?}, bound {:.4}", r.value, r.variable, r.set.as_slice(), r.bound);

    let v = RationalSubspace::new(vec![vec![2, 0, 0], vec![0, 2, 2]])?;
    println!("saturated basis {:?}, index {}", v.saturated_basis(), v.index());
    let g = [2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0];
    println!("ell_V(diag(2, 1/2, 1)) = {:.6}", ell_v(&g, &v)?);
    Ok(())
}
