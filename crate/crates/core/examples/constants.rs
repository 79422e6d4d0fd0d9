//! Known thresholds eps_0 below which almost no point is eps-improvable.

use dirichlet_lab::measures::epsilon0_registry;

fn main() {
    for n in [2, 3, 4] {
        println!("n = {n}");
        for row in epsilon0_registry(n) {
            println!("  {:<26} {:<12.6e} {}", row.key, row.value, row.formula);
        }
    }
}
