//! Loading a map file, checking the inverse, and deciding regularity.

use regular_affine::data;
use regular_affine::dynamics::{is_regular, MapDefinition};

pub fn run_example() -> String {
    let mut out = String::new();
    let map = data::henon3();
    let report = is_regular(&map, 0);
    out += &format!(
        "henon3: {}, d={}, d'={}\n",
        report.verdict,
        map.degree(),
        map.inverse_degree()
    );
    for line in &report.certificate {
        out += &format!("  {line}\n");
    }

    // (y - x^2) is not squared here, so the compositions are not the identity
    let wrong =
        "vars x y z\nforward: y | z + y^2 | x + z^2\ninverse: z - (y - x^2) | x | y - x^2\n";
    match MapDefinition::parse(wrong).unwrap().to_automorphism() {
        Ok(_) => out += "unexpectedly verified\n",
        Err(e) => out += &format!("rejected: {e}\n"),
    }

    let tri = MapDefinition::parse(data::TRIANGULAR2_MAP)
        .unwrap()
        .to_automorphism()
        .unwrap();
    let report = is_regular(&tri, 0);
    let witness = report.witness.and_then(|w| w.point).unwrap();
    let coords: Vec<String> = witness.iter().map(ToString::to_string).collect();
    out += &format!(
        "triangular2: {} at [{}]\n",
        report.verdict,
        coords.join(" : ")
    );
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
