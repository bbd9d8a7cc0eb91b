//! The height lower bound over samples, and its stabilization verdict.

use regular_affine::dynamics::{AffineAutomorphism, BitBudget};
use regular_affine::inequality::{
    batch_verify, delta_statistic, silverman_statistic, stabilization, Sampler,
    StabilizationOptions,
};
use regular_affine::poly::integer;
use regular_affine::report::format_point;

pub fn run_example() -> String {
    let map = AffineAutomorphism::henon(3);
    let mut out = String::new();

    let ones = vec![integer(1); 3];
    let r = delta_statistic(&map, &ones).unwrap();
    out += &format!("delta(1, 1, 1) = {} = {:.6}\n", r.delta_exact, r.delta);
    let (phi, psi) = map.homogenize_pair();
    let s = silverman_statistic(&[phi, psi], &ones).unwrap();
    out += &format!("family statistic at (1, 1, 1) = {s}\n");

    let report = batch_verify(
        &map,
        "henon3",
        &Sampler::Box { bound: 3 },
        BitBudget::DEFAULT,
    )
    .unwrap();
    out += &format!(
        "box |x_i| <= 3: min delta {:.6} at {}\n",
        report.min_delta,
        format_point(&report.argmin)
    );

    let sampler: Sampler = "box:4+orbit:6:1,1,1;1,-1,2".parse().unwrap();
    let st = stabilization(
        &map,
        "henon3",
        &sampler,
        BitBudget::DEFAULT,
        StabilizationOptions::default(),
    )
    .unwrap();
    out += &format!(
        "{}: {} -> {}, change {:.3}\n",
        st.verdict,
        st.base_sample,
        st.enlarged_sample.unwrap(),
        st.change.unwrap()
    );
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
