//! Weil heights, canonical heights with tail bounds, and the periodicity
//! test.

use regular_affine::dynamics::{AffineAutomorphism, BitBudget};
use regular_affine::heights::{
    canonical, functional_equation_residual, is_periodic_by_height, weil_height, EstimateOptions,
    HeightConvention, PeriodicityOptions,
};
use regular_affine::poly::{integer, rational};
use regular_affine::report::format_point;

pub fn run_example() -> String {
    let map = AffineAutomorphism::henon(3);
    let mut out = String::new();

    let h = weil_height(&[rational(1, 2), integer(3)]);
    out += &format!("h(1/2, 3) = log {} = {:.6}\n", h.max_abs, h.log);

    let ones = vec![integer(1); 3];
    let est = canonical(
        &map,
        &ones,
        EstimateOptions::depth(10),
        HeightConvention::Sum,
    )
    .unwrap();
    out += "terms h(f^n P)/2^n at P = (1, 1, 1):\n";
    for (n, v) in est.plus.values.iter().enumerate() {
        out += &format!("  {n:2}  {v:.10}\n");
    }
    out += &format!(
        "h+ = {:.8} +/- {:.1e}, h- = {:.8} +/- {:.1e}\n",
        est.plus.value(),
        est.plus.tail_bound,
        est.minus.value(),
        est.minus.tail_bound
    );

    let r = functional_equation_residual(&map, &ones, 8, HeightConvention::Sum, BitBudget::DEFAULT)
        .unwrap();
    out += &format!(
        "functional equation: residual {:.1e} within {:.1e}\n",
        r.residual, r.width
    );

    for p in [vec![integer(0); 3], ones] {
        let c = is_periodic_by_height(&map, &p, PeriodicityOptions::new(1e-3)).unwrap();
        out += &format!("{}: {}\n", format_point(&p), c.verdict);
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
