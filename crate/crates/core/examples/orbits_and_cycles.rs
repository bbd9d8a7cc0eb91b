//! Exact orbits under a bit budget, and cycle detection.

use regular_affine::dynamics::{
    detect_cycle, orbit, AffineAutomorphism, BitBudget, Direction, OrbitError,
};
use regular_affine::poly::integer;
use regular_affine::report::format_point;

pub fn run_example() -> String {
    let map = AffineAutomorphism::henon(3);
    let ones = vec![integer(1); 3];
    let mut out = String::new();

    for dir in [Direction::Forward, Direction::Inverse] {
        out += &format!("{dir} orbit of (1, 1, 1):\n");
        for p in orbit(&map, &ones, 5, dir, BitBudget::DEFAULT).unwrap() {
            out += &format!("  {}\n", format_point(&p));
        }
    }

    match orbit(&map, &ones, 50, Direction::Forward, BitBudget(4096)) {
        Err(OrbitError::BudgetExceeded { completed, .. }) => {
            out += &format!("a 4096-bit budget allows {completed} forward steps\n");
        }
        other => out += &format!("unexpected: {other:?}\n"),
    }

    let origin = vec![integer(0); 3];
    out += &format!(
        "origin: {:?}\n",
        detect_cycle(&map, &origin, 10, BitBudget::DEFAULT).unwrap()
    );
    out += &format!(
        "(1, 1, 1): {:?}\n",
        detect_cycle(&map, &ones, 10, BitBudget::DEFAULT).unwrap()
    );
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
