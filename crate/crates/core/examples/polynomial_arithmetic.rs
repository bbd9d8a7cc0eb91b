//! Exact polynomial arithmetic: parsing, composition, resultants.

use regular_affine::poly::parse_polynomial;

pub fn run_example() -> String {
    let vars = ["x", "y", "z"];
    let p = |s: &str| parse_polynomial(s, &vars).unwrap();
    let mut out = String::new();

    let f = p("(x + y)^3 - 1/2*x*y");
    out += &format!("f = {}\n", f.display_with(&vars));
    out += &format!(
        "deg f = {}, terms = {}\n",
        f.total_degree().unwrap(),
        f.num_terms()
    );

    // substitute the Henon coordinates into f
    let henon = [p("y"), p("z + y^2"), p("x + z^2")];
    let g = f.compose(&henon).unwrap();
    out += &format!(
        "f(y, z + y^2, x + z^2) has degree {}\n",
        g.total_degree().unwrap()
    );

    // eliminate y from two plane curves
    let a = p("x^2 + y^2 - 1");
    let b = p("x - y");
    let r = a.resultant(&b, 1).unwrap();
    out += &format!("Res_y(x^2 + y^2 - 1, x - y) = {}\n", r.display_with(&vars));

    let h = p("z + y^2").homogenize(2).unwrap();
    out += &format!(
        "homogenized z + y^2 = {}\n",
        h.display_with(&["w", "x", "y", "z"])
    );
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
