//! Resolution tables, essential divisors and the divisor D.

use regular_affine::data;
use regular_affine::divisor::{
    check_effective, check_pushpull_identity, combine_resolutions, compute_d, find_essential,
    validate_resolution, PushforwardMap,
};

pub fn run_example() -> String {
    let (v, w) = data::henon3_resolutions();
    let mut out = String::new();
    for datum in [&v, &w] {
        let pf = PushforwardMap::of_datum(datum).unwrap();
        out += &format!(
            "{}: valid {}, essential index {}, pushforward identity {}\n",
            datum.side,
            validate_resolution(datum).passed(),
            find_essential(datum, &pf).unwrap(),
            check_pushpull_identity(datum, &pf)
        );
    }
    let system = combine_resolutions(&v, &w).unwrap();
    out += &format!("pi^*H  = {}\n", system.pi);
    out += &format!("phi^*H = {}\n", system.phi);
    out += &format!("psi^*H = {}\n", system.psi);
    let d = compute_d(&system);
    out += &format!("D = {d}\neffective: {}\n", check_effective(&d).effective);

    let mut bad = v.clone();
    bad.a[3] = 9;
    for violation in validate_resolution(&bad).violations {
        out += &format!("a_3 = 9: {violation}\n");
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
