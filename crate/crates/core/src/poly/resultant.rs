use super::{PolyError, Polynomial};

impl Polynomial {
    /// Resultant of `self` and `other` with respect to `var`.
    ///
    /// Defined as the determinant of the Sylvester matrix with the rows of
    /// `self` first, without any sign or content normalization. When one
    /// input does not involve `var` the matrix degenerates to a diagonal and
    /// the result is that input raised to the other's degree in `var`. The
    /// result does not involve `var` and keeps the variable count.
    pub fn resultant(&self, other: &Polynomial, var: usize) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let m = self.degree_in(var);
        let n = other.degree_in(var);
        if m == 0 && n == 0 {
            return Err(PolyError::VariableAbsent { var });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.nvars));
        }
        if m == 0 {
            return Ok(self.pow(n));
        }
        if n == 0 {
            return Ok(other.pow(m));
        }
        let matrix = sylvester_matrix(self, other, var);
        Ok(bareiss_determinant(matrix, self.nvars))
    }
}

/// Sylvester matrix of `p` (degree `m` in `var`) and `q` (degree `n`):
/// `n` shifted rows of `p`'s coefficients, then `m` shifted rows of `q`'s,
/// highest power first.
pub(crate) fn sylvester_matrix(p: &Polynomial, q: &Polynomial, var: usize) -> Vec<Vec<Polynomial>> {
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let zero = Polynomial::zero(p.nvars);
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in pc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in qc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free Gaussian elimination; every division is exact.
fn bareiss_determinant(mut a: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let size = a.len();
    let mut negate = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            a[i][k] = Polynomial::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, parse_polynomial};
    use num_traits::Zero;

    /// Leibniz expansion over all permutations: independent of Bareiss.
    fn leibniz(a: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
        fn rec(
            a: &[Vec<Polynomial>],
            row: usize,
            used: &mut Vec<bool>,
            sign: bool,
            acc: Polynomial,
            out: &mut Polynomial,
        ) {
            if row == a.len() {
                *out = if sign { &*out - &acc } else { &*out + &acc };
                return;
            }
            for col in 0..a.len() {
                if used[col] || a[row][col].is_zero() {
                    continue;
                }
                // parity: count used columns greater than `col`
                let inversions = used[col + 1..].iter().filter(|u| **u).count();
                used[col] = true;
                rec(
                    a,
                    row + 1,
                    used,
                    sign ^ (inversions % 2 == 1),
                    &acc * &a[row][col],
                    out,
                );
                used[col] = false;
            }
        }
        let mut out = Polynomial::zero(nvars);
        rec(
            a,
            0,
            &mut vec![false; a.len()],
            false,
            Polynomial::one(nvars),
            &mut out,
        );
        out
    }

    fn p3(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn degenerate_sylvester_power() {
        // y^2 does not involve z: the 2x2 diagonal gives (y^2)^2.
        let r = p3("y^2").resultant(&p3("z^2"), 2).unwrap();
        assert_eq!(r, p3("y^4"));
    }

    #[test]
    fn common_root_gives_zero() {
        let r = p3("x - 1").resultant(&p3("x - 1"), 0).unwrap();
        assert!(r.is_zero());
        let r = p3("x - 1").resultant(&p3("x - 2"), 0).unwrap();
        assert!(r.is_constant() && !r.is_zero());
        assert_eq!(r.constant_term(), integer(-1));
    }

    #[test]
    fn absent_variable_is_an_error() {
        assert_eq!(
            p3("y").resultant(&p3("z"), 0),
            Err(PolyError::VariableAbsent { var: 0 })
        );
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let cases = [
            ("x^2*y - z", "x*z + y^2 - 1"),
            ("x^3 - 2*x*y + z", "x^2 - y*z"),
            ("(x - y)*(x + z)", "x^2 + y"),
            ("y*x^2 + 3/2*x - z^2", "z*x^3 - y"),
            ("x*y", "x*z - 1"),
        ];
        for (a, b) in cases {
            let (p, q) = (p3(a), p3(b));
            for var in 0..3 {
                if p.degree_in(var) == 0 || q.degree_in(var) == 0 {
                    continue;
                }
                let expect = leibniz(&sylvester_matrix(&p, &q, var), 3);
                assert_eq!(
                    p.resultant(&q, var).unwrap(),
                    expect,
                    "{a} / {b} in var {var}"
                );
            }
        }
    }

    #[test]
    fn resultant_vanishes_on_projection_of_common_roots() {
        // Coprime pairs: every common root on a small grid projects into a
        // root of the resultant; shared factors force the resultant to zero.
        let coprime = [("x^2 + y^2 - 5", "x - y + 1"), ("x*y - 2", "x + y - 3")];
        for (a, b) in coprime {
            let (p, q) = (p3(a), p3(b));
            let r = p.resultant(&q, 0).unwrap();
            assert!(!r.is_zero());
            let mut hits = 0;
            for xv in -4..=4 {
                for yv in -4..=4 {
                    let pt = [integer(xv), integer(yv), integer(0)];
                    if p.evaluate(&pt).unwrap().is_zero() && q.evaluate(&pt).unwrap().is_zero() {
                        hits += 1;
                        assert!(r.evaluate(&pt).unwrap().is_zero());
                    }
                }
            }
            assert!(hits > 0);
        }
        let shared = [
            ("(x - y)*(x + 1)", "(x - y)*(y - 3)"),
            ("(x*y - 1)*x", "(x*y - 1)*(x + y)"),
        ];
        for (a, b) in shared {
            assert!(p3(a).resultant(&p3(b), 0).unwrap().is_zero());
        }
    }
}
