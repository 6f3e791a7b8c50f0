use cuspres_core::numeric::{cf_expand, rat};
use cuspres_core::pi1::{
    abelianization, cyclic_reduce, inverse, raw_presentation, reduce, simplified_presentation, smith_normal_form,
    substitution_is_consequence, substitution_words,
};
use cuspres_core::resolution::resolve_step_i;
use cuspres_core::CuspidalInput;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

/// A unimodular matrix as a product of elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            for k in 0..n {
                u[i][k] += c * u[j][k];
            }
        } else {
            u.swap(i, (i + 1) % n);
        }
    }
    u
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 0..20)
}

proptest! {
    #[test]
    fn snf_divisibility_chain(m in matrix(3, 4)) {
        let d = smith_normal_form(&m);
        let nonzero: Vec<i64> = d.iter().copied().take_while(|&x| x != 0).collect();
        prop_assert!(d[nonzero.len()..].iter().all(|&x| x == 0));
        for w in nonzero.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn snf_unimodular_invariance(
        m in matrix(3, 3),
        left in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
        right in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let moved = mul(&mul(&unimodular(3, &left), &m), &unimodular(3, &right));
        prop_assert_eq!(smith_normal_form(&moved), smith_normal_form(&m));
    }

    #[test]
    fn reduction_is_idempotent(w in word()) {
        let r = reduce(&w);
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
        let c = cyclic_reduce(&w);
        prop_assert_eq!(cyclic_reduce(&c), c);
        prop_assert!(reduce(&[w.clone(), inverse(&w)].concat()).is_empty());
    }

    #[test]
    fn digits_reevaluate(p in 1u64..500, q in 1u64..500) {
        let cf = cf_expand(p, q);
        prop_assert_eq!(cf.evaluate(), rat(p as i64, q as i64));
        prop_assert_eq!(cf.k, cf.digits.iter().sum::<u64>());
    }

    #[test]
    fn step_one_blow_up_count(p in 2u32..=20, q in 2u32..=20) {
        let input = CuspidalInput::from_integers(p, q, &[(1, 2)], &[]);
        let (steps, _) = resolve_step_i(&input).unwrap();
        prop_assert_eq!(steps as u64, cf_expand(p as u64, q as u64).k);
    }
}

#[test]
fn abelianization_by_parity() {
    for r in 2..=8 {
        let ab = abelianization(&simplified_presentation(r)).to_string();
        assert_eq!(ab, if r % 2 == 1 { "Z^3" } else { "Z^2 ⊕ Z/2" }, "r = {r}");
    }
}

#[test]
fn relators_are_cyclically_reduced() {
    for r in 2..=8 {
        for p in [raw_presentation(r), simplified_presentation(r)] {
            for w in p.relators() {
                assert_eq!(cyclic_reduce(&w), w);
            }
        }
    }
}

#[test]
fn odd_substitution_maps_into_raw_relations() {
    for r in [3, 5, 7] {
        let words = substitution_words(r);
        assert!(substitution_is_consequence(&raw_presentation(r), &simplified_presentation(r), &words));
    }
}
