use cuspres_core::divisor::{build_graph, to_dot};
use cuspres_core::io::{to_json, trace_document};
use cuspres_core::poly::vars;
use cuspres_core::resolution::chart::strict_transform_form;
use cuspres_core::resolution::singular::{section_simplicity, LinearType};
use cuspres_core::resolution::Stage;
use cuspres_core::{resolve, CuspidalInput, Field, MultiPoly, OneForm, ResolveError, ResolveOptions};
use proptest::prelude::*;

fn cusp() -> CuspidalInput {
    CuspidalInput::from_integers(2, 3, &[(1, 2)], &[])
}

/// `−λ₂ y dx + λ₁ x dy`, dual to `λ₁ x ∂x + λ₂ y ∂y`.
fn linear_form(k: &Field, l1: i64, l2: i64) -> OneForm {
    let v = vars(&["x", "y", "z"]);
    let x = MultiPoly::var(&v, k, 0);
    let y = MultiPoly::var(&v, k, 1);
    OneForm::one_form(vec![y.scale_int(-l2), x.scale_int(l1), MultiPoly::zero(&v, k)])
}

fn classify(form: &OneForm) -> LinearType {
    let k = form.field();
    let y = MultiPoly::var(form.vars(), k, 1);
    section_simplicity(form, (0, &k.zero()), 1, (2, &k.zero()), &y)
        .expect("origin is a valid section")
        .linear
}

#[test]
fn linear_part_classification() {
    let k = Field::new(4).unwrap();
    assert_eq!(classify(&linear_form(&k, 1, -1)), LinearType::NonResonant);
    assert!(matches!(classify(&linear_form(&k, 2, 3)), LinearType::Resonant { .. }));
    assert_eq!(classify(&linear_form(&k, 1, 0)), LinearType::SaddleNode);
    let v = vars(&["x", "y", "z"]);
    let y = MultiPoly::var(&v, &k, 1);
    let nilpotent = OneForm::one_form(vec![MultiPoly::zero(&v, &k), y, MultiPoly::zero(&v, &k)]);
    assert_eq!(classify(&nilpotent), LinearType::Nilpotent);
}

proptest! {
    #[test]
    fn resonance_is_a_positive_quotient(l1 in -9i64..=9, l2 in -9i64..=9) {
        prop_assume!(l1 != 0 && l2 != 0);
        let k = Field::new(4).unwrap();
        let resonant = matches!(classify(&linear_form(&k, l1, l2)), LinearType::Resonant { .. });
        prop_assert_eq!(resonant, (l1 > 0) == (l2 > 0));
    }
}

#[test]
fn strict_transform_divides_the_divisor_power() {
    let k = Field::new(4).unwrap();
    let v = vars(&["x", "y", "z"]);
    let x = MultiPoly::var(&v, &k, 0);
    let y = MultiPoly::var(&v, &k, 1);
    let form = OneForm::one_form(vec![&x.pow(2) * &y, x.pow(3), MultiPoly::zero(&v, &k)]);
    let (pows, strict) = strict_transform_form(&form, &[0]).unwrap();
    assert_eq!(pows, vec![2]);
    assert_eq!(strict, OneForm::one_form(vec![y, x, MultiPoly::zero(&v, &k)]));
}

#[test]
fn cusp_blow_up_counts() {
    let trace = resolve(&cusp(), &ResolveOptions::default()).unwrap();
    assert_eq!(
        (trace.steps_in(Stage::I), trace.steps_in(Stage::II), trace.steps_in(Stage::III)),
        (3, 4, 0)
    );
    let rays: Vec<[i64; 3]> = trace.components.iter().map(|c| c.ray.unwrap()).collect();
    assert_eq!(
        rays,
        vec![[1, 1, 1], [1, 2, 2], [2, 3, 4], [1, 1, 2], [1, 2, 3], [2, 3, 5], [2, 3, 6]]
    );
    assert_eq!(trace.essential, Some(6));
    assert!(trace.shapes.verify(&trace.params).is_ok());
    let step_i = &trace.shapes.step_i;
    assert_eq!((step_i.m, step_i.n), (2, 1));
}

#[test]
fn guard_is_enforced() {
    let err = resolve(&cusp(), &ResolveOptions { guard: Some(2) }).unwrap_err();
    assert!(matches!(err, ResolveError::GuardExhausted { guard: 2, .. }));
}

#[test]
fn inadmissible_input_is_rejected() {
    let err = resolve(&CuspidalInput::from_integers(1, 3, &[(1, 2)], &[]), &ResolveOptions::default()).unwrap_err();
    assert!(matches!(err, ResolveError::Inadmissible(_)));
}

#[test]
fn traces_serialize_deterministically() {
    let a = to_json(&trace_document(&resolve(&cusp(), &ResolveOptions::default()).unwrap()));
    let b = to_json(&trace_document(&resolve(&cusp(), &ResolveOptions::default()).unwrap()));
    assert_eq!(a, b);
}

#[test]
fn dot_lists_every_node() {
    let trace = resolve(&cusp(), &ResolveOptions::default()).unwrap();
    let g = build_graph(&trace).unwrap();
    let dot = to_dot(&g);
    let is_node = |l: &str| {
        let t = l.trim_start();
        t.starts_with('n') && t[1..].starts_with(|c: char| c.is_ascii_digit()) && !t.contains("--")
    };
    let nodes = dot.lines().filter(|l| is_node(l)).count();
    assert_eq!(nodes, g.components.len());
    assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), g.edges.len());
}

#[test]
fn branch_lines_are_blown_up() {
    // two branches with r = 3: each root line carries a cusp
    let input = CuspidalInput::from_integers(2, 3, &[(1, 3), (2, 3)], &[]);
    let trace = resolve(&input, &ResolveOptions::default()).unwrap();
    assert_eq!(trace.steps_in(Stage::III), 6);
    assert!(trace.singular.iter().all(|s| s.is_simple()));
    let g = build_graph(&trace).unwrap();
    assert_eq!(g.special.len(), 2);
}
