//! Sylvester resultants, by fraction-free (Bareiss) elimination.

use super::MultiPoly;

/// The resultant of `a` and `b` with respect to variable `i`.
pub fn resultant(a: &MultiPoly, b: &MultiPoly, i: usize) -> MultiPoly {
    let zero = MultiPoly::zero(a.vars(), a.field());
    let (da, db) = match (a.degree_in(i), b.degree_in(i)) {
        (Some(da), Some(db)) => (da as usize, db as usize),
        _ => return zero,
    };
    if da == 0 && db == 0 {
        return MultiPoly::one(a.vars(), a.field());
    }
    if da == 0 {
        return a.pow(db as u32);
    }
    if db == 0 {
        return b.pow(da as u32);
    }
    let ca = a.coefficients_in(i);
    let cb = b.coefficients_in(i);
    let n = da + db;
    let mut m = vec![vec![zero.clone(); n]; n];
    for row in 0..db {
        for (k, c) in ca.iter().enumerate() {
            m[row][row + da - k] = c.clone();
        }
    }
    for row in 0..da {
        for (k, c) in cb.iter().enumerate() {
            m[db + row][row + db - k] = c.clone();
        }
    }
    bareiss_det(m)
}

/// Determinant of a square matrix of polynomials.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    let one = MultiPoly::one(m[0][0].vars(), m[0][0].field());
    let mut prev = one;
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return MultiPoly::zero(m[0][0].vars(), m[0][0].field()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Field;
    use crate::poly::{parse_poly, vars};

    #[test]
    fn resultant_detects_common_roots() {
        let v = vars(&["x", "y"]);
        let k = Field::new(4).unwrap();
        let p = |s: &str| parse_poly(s, &v, &k).unwrap();
        // common root x = y when y^2 = 1
        let r = resultant(&p("x^2 - 1"), &p("x - y"), 0);
        assert_eq!(r, p("y^2 - 1"));
        let r = resultant(&p("x^2 + y^2 - 2"), &p("x - y"), 0);
        assert_eq!(r.monic(), p("y^2 - 1"));
        assert!(resultant(&p("x*y - 1"), &p("x*y - 1"), 0).is_zero());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let v = vars(&["t"]);
        let k = Field::new(4).unwrap();
        let p = |s: &str| parse_poly(s, &v, &k).unwrap();
        let m = vec![
            vec![p("0"), p("t"), p("1")],
            vec![p("2"), p("1"), p("t")],
            vec![p("1"), p("0"), p("3")],
        ];
        // 0·(3) − t·(6 − t) + 1·(0 − 1)
        assert_eq!(bareiss_det(m), p("t^2 - 6*t - 1"));
    }
}
