//! Points where three invariant surfaces cross: the quadratic part of the
//! form is `ℓ₁ℓ₂ℓ₃ Σ λᵢ dℓᵢ/ℓᵢ` and the residues `λᵢ` decide simplicity.

use num_traits::{Signed, Zero};

use super::chart::Chart;
use super::singular::{rational_sqrt, LinearType, Simplicity};
use crate::numeric::{CycloScalar, Rational};
use crate::poly::{Monomial, MultiPoly};

type Linear = [CycloScalar; 3];

fn homogeneous_part(p: &MultiPoly, deg: u32) -> MultiPoly {
    let mut out = MultiPoly::zero(p.vars(), p.field());
    for (m, c) in p.terms() {
        if m.degree() == deg {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

fn linear_poly(l: &Linear, like: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(like.vars(), like.field());
    for (i, c) in l.iter().enumerate() {
        out = &out + &MultiPoly::var(like.vars(), like.field(), i).scale(c);
    }
    out
}

fn linear_coeffs(p: &MultiPoly) -> Linear {
    let unit = |i: usize| {
        let mut m = vec![0; 3];
        m[i] = 1;
        p.coeff(&Monomial(m))
    };
    [unit(0), unit(1), unit(2)]
}

/// Square root in the field, for rationals and their negatives.
fn field_sqrt(c: &CycloScalar) -> Option<CycloScalar> {
    let k = c.field();
    let q = c.as_rational()?;
    if !q.is_negative() {
        return Some(k.from_rational(rational_sqrt(q)?));
    }
    if k.order() % 4 != 0 {
        return None;
    }
    let r = k.from_rational(rational_sqrt(&-q)?);
    Some(&r * &k.zeta_pow(k.order() as i64 / 4))
}

/// Linear factors of a homogeneous polynomial of degree one or two, when they exist over the field.
fn linear_factors(q: &MultiPoly) -> Vec<Linear> {
    let k = q.field().clone();
    match q.total_degree() {
        Some(1) => return vec![linear_coeffs(q)],
        Some(2) => {}
        _ => return Vec::new(),
    }
    let Some(t) = (0..3).find(|&t| q.degree_in(t) == Some(2)) else {
        return Vec::new();
    };
    let cs = q.coefficients_in(t);
    let a = cs[2].constant_term();
    let b = linear_coeffs(&cs[1]);
    let c = &cs[0];
    let (u, v) = match t {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    // discriminant B² − 4aC = αu² + βuv + γv², needed as a square (su + rv)²
    let four_a = &k.from_int(4) * &a;
    let mono = |i: usize, j: usize| {
        let mut m = vec![0; 3];
        m[i] += 1;
        m[j] += 1;
        Monomial(m)
    };
    let alpha = &(&b[u] * &b[u]) - &(&four_a * &c.coeff(&mono(u, u)));
    let beta = &(&k.from_int(2) * &(&b[u] * &b[v])) - &(&four_a * &c.coeff(&mono(u, v)));
    let gamma = &(&b[v] * &b[v]) - &(&four_a * &c.coeff(&mono(v, v)));
    let (s, r) = if !alpha.is_zero() {
        let s = match field_sqrt(&alpha) {
            Some(s) => s,
            None => return Vec::new(),
        };
        let r = &beta * &(&k.from_int(2) * &s).inverse().expect("nonzero");
        if &r * &r != gamma {
            return Vec::new();
        }
        (s, r)
    } else {
        if !beta.is_zero() {
            return Vec::new();
        }
        match field_sqrt(&gamma) {
            Some(r) => (k.zero(), r),
            None => return Vec::new(),
        }
    };
    let two_a = &k.from_int(2) * &a;
    [1i64, -1]
        .iter()
        .map(|&sign| {
            let sg = k.from_int(sign);
            let mut l = b.clone();
            l[t] = two_a.clone();
            l[u] = &l[u] + &(&sg * &s);
            l[v] = &l[v] + &(&sg * &r);
            l
        })
        .collect()
}

fn det3(m: &[Linear; 3]) -> CycloScalar {
    let t = |a: &CycloScalar, b: &CycloScalar, c: &CycloScalar, d: &CycloScalar| &(a * d) - &(b * c);
    &(&(&m[0][0] * &t(&m[1][1], &m[1][2], &m[2][1], &m[2][2])) - &(&m[0][1] * &t(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
        + &(&m[0][2] * &t(&m[1][0], &m[1][1], &m[2][0], &m[2][1]))
}

/// Solves `Σ λᵢ Fᵢ = Ω` coefficientwise, for one-forms given by their three coefficients.
fn solve_residues(forms: &[[MultiPoly; 3]; 3], target: &[MultiPoly; 3]) -> Option<[CycloScalar; 3]> {
    let mut rows: Vec<Vec<CycloScalar>> = Vec::new();
    for c in 0..3 {
        let mut monos: Vec<Monomial> = target[c].terms().map(|(m, _)| m.clone()).collect();
        for f in forms {
            monos.extend(f[c].terms().map(|(m, _)| m.clone()));
        }
        monos.sort();
        monos.dedup();
        for m in monos {
            let mut row: Vec<CycloScalar> = forms.iter().map(|f| f[c].coeff(&m)).collect();
            row.push(target[c].coeff(&m));
            rows.push(row);
        }
    }
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            return None;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inverse().ok()?;
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pr = rows[r].clone();
                rows[i] = rows[i].iter().zip(&pr).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[3].is_zero()) {
        return None;
    }
    Some([rows[0][3].clone(), rows[1][3].clone(), rows[2][3].clone()])
}

/// Whether some `n ∈ ℕ³ \ {0}` has `Σ nᵢ λᵢ = 0`.
pub fn has_nonnegative_relation(lambda: &[CycloScalar; 3]) -> bool {
    if lambda.iter().any(|l| l.is_zero()) {
        return true;
    }
    let inv = lambda[0].inverse().expect("nonzero");
    let mu: Vec<Vec<Rational>> = lambda.iter().map(|l| (l * &inv).coeffs().to_vec()).collect();
    // columns are μᵢ over the power basis; rational kernel by elimination
    let n = mu[0].len();
    let mut m: Vec<Vec<Rational>> = (0..n).map(|row| (0..3).map(|c| mu[c][row].clone()).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        m[r] = m[r].iter().map(|x| x * &inv).collect();
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pr = m[r].clone();
                m[i] = m[i].iter().zip(&pr).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    match pivot_cols.len() {
        3 => false,
        // all ratios rational
        1 => mu.iter().any(|c| c[0].is_negative()),
        _ => {
            let free = (0..3).find(|c| !pivot_cols.contains(c)).expect("one free column");
            let mut v = vec![Rational::zero(); 3];
            v[free] = Rational::from_integer(1.into());
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v.iter().all(|x| !x.is_negative()) || v.iter().all(|x| !x.is_positive())
        }
    }
}

/// Tests a point of the singular set as a logarithmic corner.
pub fn corner_simplicity(chart: &Chart, coords: &[CycloScalar]) -> Option<Simplicity> {
    let k = chart.form.field().clone();
    let shift: Vec<MultiPoly> = (0..3)
        .map(|i| &MultiPoly::var(&chart.vars, &k, i) + &MultiPoly::constant(&chart.vars, coords[i].clone()))
        .collect();
    let at = |p: &MultiPoly| p.substitute(&shift);
    let coeffs: Vec<MultiPoly> = chart.form.dense_components().iter().map(at).collect();
    if coeffs.iter().any(|c| c.order().map_or(false, |o| o < 2)) {
        return None;
    }
    let omega: [MultiPoly; 3] = [0, 1, 2].map(|c| homogeneous_part(&coeffs[c], 2));
    let mut candidates: Vec<Linear> = (0..3)
        .map(|i| {
            let mut l = [k.zero(), k.zero(), k.zero()];
            l[i] = k.one();
            l
        })
        .collect();
    let mut hypers = vec![at(&chart.separatrix)];
    hypers.extend(chart.extra.iter().map(|(_, f)| at(f)));
    for h in hypers {
        if let Some(o) = h.order() {
            if o >= 1 {
                candidates.extend(linear_factors(&homogeneous_part(&h, o)));
            }
        }
    }
    let invariant: Vec<Linear> = candidates
        .into_iter()
        .filter(|l| {
            let lp = linear_poly(l, &omega[0]);
            (0..3).all(|i| {
                (i + 1..3).all(|j| {
                    let w = &omega[i].scale(&l[j]) - &omega[j].scale(&l[i]);
                    w.is_zero() || w.div_exact(&lp).is_some()
                })
            })
        })
        .collect();
    for a in 0..invariant.len() {
        for b in a + 1..invariant.len() {
            for c in b + 1..invariant.len() {
                let ls = [invariant[a].clone(), invariant[b].clone(), invariant[c].clone()];
                if det3(&ls).is_zero() {
                    continue;
                }
                let polys: Vec<MultiPoly> = ls.iter().map(|l| linear_poly(l, &omega[0])).collect();
                let forms: [[MultiPoly; 3]; 3] = [0, 1, 2].map(|i| {
                    let rest = &polys[(i + 1) % 3] * &polys[(i + 2) % 3];
                    [0, 1, 2].map(|c| rest.scale(&ls[i][c]))
                });
                if let Some(lambda) = solve_residues(&forms, &omega) {
                    let resonant = has_nonnegative_relation(&lambda);
                    return Some(Simplicity {
                        simple: !resonant,
                        linear: LinearType::Corner {
                            residues: lambda.iter().map(|l| l.to_string()).collect(),
                        },
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Field;

    #[test]
    fn residue_relations() {
        let k = Field::new(4).unwrap();
        let r = |a: i64, b: i64, c: i64| [k.from_int(a), k.from_int(b), k.from_int(c)];
        assert!(!has_nonnegative_relation(&r(1, 1, 12)));
        assert!(has_nonnegative_relation(&r(1, -1, 3)));
        assert!(has_nonnegative_relation(&r(2, 0, 3)));
        let i = k.zeta();
        assert!(!has_nonnegative_relation(&[k.one(), i.clone(), &k.one() + &i]));
        assert!(has_nonnegative_relation(&[k.one(), i.clone(), -(&k.one() + &i)]));
    }

    #[test]
    fn quadratic_splits_over_gaussian_field() {
        let k = Field::new(4).unwrap();
        let v = crate::poly::vars(&["x", "y", "z"]);
        let x = MultiPoly::var(&v, &k, 0);
        let z = MultiPoly::var(&v, &k, 2);
        let q = &(&x * &x) + &(&z * &z);
        let fs = linear_factors(&q);
        assert_eq!(fs.len(), 2);
        let prod = &linear_poly(&fs[0], &q) * &linear_poly(&fs[1], &q);
        assert!(prod.div_exact(&q).map_or(false, |c| c.is_constant()));
    }
}
