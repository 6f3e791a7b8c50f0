//! Recursive primitive-PRS gcd for multivariate polynomials over a field.

use super::MultiPoly;

pub(super) fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let active: Vec<usize> = (0..a.nvars()).collect();
    gcd_in(a, b, &active).monic()
}

fn gcd_in(a: &MultiPoly, b: &MultiPoly, active: &[usize]) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let main = match active
        .iter()
        .rev()
        .copied()
        .find(|&i| a.involves(i) || b.involves(i))
    {
        Some(i) => i,
        None => return MultiPoly::one(a.vars(), a.field()),
    };
    let rest: Vec<usize> = active.iter().copied().filter(|&i| i != main).collect();
    let (ca, pa) = content_split(a, main, &rest);
    let (cb, pb) = content_split(b, main, &rest);
    let g_content = gcd_in(&ca, &cb, &rest);

    let (mut r0, mut r1) = if pa.degree_in(main) >= pb.degree_in(main) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g_prim = loop {
        if r1.degree_in(main) == Some(0) {
            break MultiPoly::one(a.vars(), a.field());
        }
        let r = pseudo_rem(&r0, &r1, main);
        if r.is_zero() {
            break r1;
        }
        let (_, pr) = content_split(&r, main, &rest);
        r0 = std::mem::replace(&mut r1, pr);
    };
    &g_content * &g_prim
}

/// Splits `p` as content · primitive part with respect to `main`.
fn content_split(p: &MultiPoly, main: usize, rest: &[usize]) -> (MultiPoly, MultiPoly) {
    let coeffs = p.coefficients_in(main);
    let mut c = MultiPoly::zero(p.vars(), p.field());
    for k in coeffs.iter().filter(|k| !k.is_zero()) {
        c = gcd_in(&c, k, rest);
        if c.is_constant() {
            break;
        }
    }
    let c = c.monic();
    let prim = p.div_exact(&c).expect("content divides polynomial");
    (c, prim)
}

/// lc(b)^e · a mod b, as polynomials in `main`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, main: usize) -> MultiPoly {
    let db = b.degree_in(main).unwrap_or(0);
    let bc = b.coefficients_in(main);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(main).unwrap_or(0);
        if dr < db {
            break;
        }
        let lr = r.coefficients_in(main)[dr as usize].clone();
        let mut shift = vec![0; a.nvars()];
        shift[main] = dr - db;
        let shifted = (&lr * b).mul_monomial(&super::Monomial(shift));
        r = &(&lb * &r) - &shifted;
    }
    r
}
