//! Fundamental group of the essential component minus the singular locus:
//! the Zariski–Van Kampen presentation, its simplified form, and
//! abelianizations through the Smith normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numeric::CycloScalar;
use crate::poly::{vars, MultiPoly};
use crate::resolution::ResolutionTrace;

/// A word in the free group: letter `k > 0` is generator `k − 1`, `−k` its inverse.
pub type Word = Vec<i32>;

pub fn letter(generator: usize, inverse: bool) -> i32 {
    let k = generator as i32 + 1;
    if inverse {
        -k
    } else {
        k
    }
}

/// Free reduction.
pub fn reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

pub fn power(w: &[i32], e: i64) -> Word {
    let base = if e < 0 { inverse(w) } else { w.to_vec() };
    let mut out = Vec::new();
    for _ in 0..e.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    reduce(&out)
}

pub fn concat(parts: &[&[i32]]) -> Word {
    reduce(&parts.concat())
}

/// Applies the endomorphism sending generator `k` to `images[k]`.
pub fn substitute(w: &[i32], images: &[Word]) -> Word {
    let mut out = Vec::new();
    for &x in w {
        let img = &images[x.unsigned_abs() as usize - 1];
        if x > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(inverse(img));
        }
    }
    reduce(&out)
}

/// The half-twist on `(g₁, g₂)`: `g₁ ↦ g₂`, `g₂ ↦ g₂g₁g₂⁻¹`, fixing the other generators.
pub fn half_twist(n_generators: usize) -> Vec<Word> {
    let mut images: Vec<Word> = (0..n_generators).map(|k| vec![letter(k, false)]).collect();
    images[0] = vec![2];
    images[1] = vec![2, 1, -2];
    images
}

/// `σᵉ(w)`.
pub fn twist_power(w: &[i32], e: u32, n_generators: usize) -> Word {
    let sigma = half_twist(n_generators);
    (0..e).fold(reduce(w), |acc, _| substitute(&acc, &sigma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "r-odd")]
    Odd,
    #[serde(rename = "r-even")]
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "raw-ZVK")]
    RawZvk,
    #[serde(rename = "simplified")]
    Simplified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    /// `lhs · rhs⁻¹`, cyclically reduced.
    pub fn relator(&self) -> Word {
        cyclic_reduce(&concat(&[&self.lhs, &inverse(&self.rhs)]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
    /// Relations with a symbolic exponent, kept as text and left out of the
    /// relator list.
    pub schematic: Vec<String>,
    pub case: Parity,
    pub provenance: Provenance,
    /// Definitions of the generators in terms of another presentation's.
    pub substitution: Vec<(String, String)>,
}

impl Presentation {
    pub fn relators(&self) -> Vec<Word> {
        self.relations.iter().map(Relation::relator).collect()
    }

    pub fn render_word(&self, w: &[i32]) -> String {
        render_word(&self.generators, w)
    }
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

/// Renders runs of a letter as powers, `1` for the empty word.
pub fn render_word(names: &[String], w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let e = (j - i) as i64 * w[i].signum() as i64;
        out.push_str(&names[w[i].unsigned_abs() as usize - 1]);
        if e != 1 {
            out.push_str(&superscript(e));
        }
        i = j;
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators.join(", "))?;
        for r in &self.relations {
            writeln!(f, "{} = {}", self.render_word(&r.lhs), self.render_word(&r.rhs))?;
        }
        for s in &self.schematic {
            writeln!(f, "{s}")?;
        }
        for (name, def) in &self.substitution {
            writeln!(f, "where {name} := {def}")?;
        }
        Ok(())
    }
}

/// The branch curve `t² − (∏(y^δ − aᵢ)^{dᵢ′})^r` in the essential component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurveData {
    pub delta: u32,
    pub roots: Vec<CycloScalar>,
    pub exponents: Vec<u32>,
    pub r: u32,
    pub equation: MultiPoly,
}

impl PlaneCurveData {
    pub fn from_trace(trace: &ResolutionTrace) -> PlaneCurveData {
        let field = &trace.input.field;
        let v = vars(&["y", "t"]);
        let delta = trace.params.delta;
        let roots = trace.input.coefficients();
        let y_delta = MultiPoly::var(&v, field, 0).pow(delta);
        let h = roots
            .iter()
            .zip(&trace.params.d_prime)
            .fold(MultiPoly::constant(&v, field.one()), |acc, (a, &e)| {
                &acc * &(&y_delta - &MultiPoly::constant(&v, a.clone())).pow(e)
            });
        let equation = &MultiPoly::var(&v, field, 1).pow(2) - &h.pow(trace.params.r);
        PlaneCurveData {
            delta,
            roots,
            exponents: trace.params.d_prime.clone(),
            r: trace.params.r,
            equation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Pi1Error {
    #[error("the trace has no essential component")]
    MissingEssential,
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Raw presentation on `g₁, g₂, γ`: `σʳ(gᵢ) = gᵢ` as words, `σᵇ(gᵢ) = γ⁻¹gᵢγ` with `b` symbolic.
pub fn raw_presentation(r: u32) -> Presentation {
    let relations = (0..2)
        .map(|i| Relation {
            lhs: twist_power(&[letter(i, false)], r, 3),
            rhs: vec![letter(i, false)],
        })
        .collect();
    Presentation {
        generators: names(&["g1", "g2", "γ"]),
        relations,
        schematic: (1..=2).map(|i| format!("σ^b(g{i}) = γ⁻¹g{i}γ")).collect(),
        case: parity(r),
        provenance: Provenance::RawZvk,
        substitution: Vec::new(),
    }
}

/// The same relations with an explicit value of `b`.
pub fn raw_presentation_with_b(r: u32, b: u32) -> Presentation {
    let mut p = raw_presentation(r);
    for i in 0..2 {
        let g = letter(i, false);
        p.relations.push(Relation {
            lhs: twist_power(&[g], b, 3),
            rhs: vec![-3, g, 3],
        });
    }
    p.schematic.clear();
    p
}

fn parity(r: u32) -> Parity {
    if r % 2 == 1 {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Words for `α = g₂g₁` and `β = (g₂g₁)^m g₂` in the raw generators, `r = 2m` or `2m + 1`.
pub fn substitution_words(r: u32) -> [Word; 3] {
    let alpha = vec![2, 1];
    let m = (r / 2) as i64;
    let beta = concat(&[&power(&alpha, m), &[2]]);
    [alpha, beta, vec![3]]
}

pub fn simplified_presentation(r: u32) -> Presentation {
    let (a, b, g) = (1, 2, 3);
    let ar = power(&[a], r as i64);
    let first = match parity(r) {
        Parity::Odd => Relation {
            lhs: concat(&[&[b], &ar]),
            rhs: concat(&[&ar, &[b]]),
        },
        Parity::Even => Relation {
            lhs: ar,
            rhs: vec![b, b],
        },
    };
    let raw = names(&["g1", "g2", "γ"]);
    let [wa, wb, _] = substitution_words(r);
    Presentation {
        generators: names(&["α", "β", "γ"]),
        relations: vec![
            first,
            Relation {
                lhs: vec![g, a],
                rhs: vec![a, g],
            },
        ],
        schematic: Vec::new(),
        case: parity(r),
        provenance: Provenance::Simplified,
        substitution: vec![
            ("α".into(), render_word(&raw, &wa)),
            ("β".into(), render_word(&raw, &wb)),
        ],
    }
}

/// Raw and simplified presentations for the essential component of `trace`.
pub fn presentations(trace: &ResolutionTrace) -> Result<(Presentation, Presentation), Pi1Error> {
    if trace.essential.is_none() {
        return Err(Pi1Error::MissingEssential);
    }
    let r = trace.params.r;
    Ok((raw_presentation(r), simplified_presentation(r)))
}

/// Exponent-sum matrix: one row per relator.
pub fn relation_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators()
        .iter()
        .map(|w| {
            let mut row = vec![0i64; p.generators.len()];
            for &x in w {
                row[x.unsigned_abs() as usize - 1] += x.signum() as i64;
            }
            row
        })
        .collect()
}

/// Diagonal of the Smith normal form, `d₁ | d₂ | …`, of length `min(rows, cols)`.
pub fn smith_normal_form(mat: &[Vec<i64>]) -> Vec<i64> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = mat.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let n = rows.min(cols);
    for t in 0..n {
        // pivot: smallest nonzero entry of the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t] / a[t][t];
                for j in t..cols {
                    a[i][j] -= f * a[t][j];
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = a[t][j] / a[t][t];
                for i in t..rows {
                    a[i][j] -= f * a[i][t];
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold a non-multiple into the pivot row
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                    }
                    None => break,
                }
            } else {
                let (mi, mj) = (t..rows)
                    .map(|i| (i, t))
                    .chain((t..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| a[i][j] != 0)
                    .min_by_key(|&(i, j)| a[i][j].abs())
                    .expect("nonzero pivot");
                a.swap(t, mi);
                for row in a.iter_mut() {
                    row.swap(t, mj);
                }
            }
        }
    }
    (0..n).map(|i| a[i][i].abs() as i64).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than 1.
    pub torsion: Vec<i64>,
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

pub fn abelianization(p: &Presentation) -> AbelianGroup {
    let m = relation_matrix(p);
    let diag = smith_normal_form(&m);
    let rank = diag.iter().filter(|&&d| d != 0).count();
    AbelianGroup {
        free_rank: p.generators.len() - rank,
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// Whether every relator of `simplified`, rewritten in the raw generators,
/// lies in the row lattice of the raw relation matrix.
pub fn substitution_is_consequence(raw: &Presentation, simplified: &Presentation, words: &[Word]) -> bool {
    let rewritten = Presentation {
        generators: raw.generators.clone(),
        relations: simplified
            .relators()
            .iter()
            .map(|w| Relation {
                lhs: substitute(w, words),
                rhs: Vec::new(),
            })
            .collect(),
        schematic: Vec::new(),
        case: simplified.case,
        provenance: simplified.provenance,
        substitution: Vec::new(),
    };
    let base = relation_matrix(raw);
    let base_snf = smith_normal_form(&base);
    relation_matrix(&rewritten).into_iter().all(|row| {
        let mut stacked = base.clone();
        stacked.push(row);
        smith_normal_form(&stacked)
            .into_iter()
            .filter(|&d| d != 0)
            .eq(base_snf.iter().copied().filter(|&d| d != 0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_normal_form(&[vec![4, -2, 0]]), vec![2]);
        assert_eq!(smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    }

    #[test]
    fn simplified_rendering() {
        let s = simplified_presentation(3).to_string();
        assert!(s.contains("βα³ = α³β"), "{s}");
        assert!(s.contains("γα = αγ"));
        let s = simplified_presentation(2).to_string();
        assert!(s.contains("α² = β²"), "{s}");
        assert!(s.contains("β := g2g1g2"), "{s}");
    }

    #[test]
    fn half_twist_powers() {
        assert_eq!(twist_power(&[1], 2, 3), vec![2, 1, -2]);
        // σ²(g₂) = (g₂g₁) g₂ (g₂g₁)⁻¹
        assert_eq!(twist_power(&[2], 2, 3), vec![2, 1, 2, -1, -2]);
        assert_eq!(twist_power(&[3], 5, 3), vec![3]);
    }

    #[test]
    fn raw_contains_meridian_relation() {
        let p = raw_presentation(4);
        assert!(p.to_string().contains("γ⁻¹g1γ"));
        let q = raw_presentation_with_b(4, 1);
        assert!(q.relations.iter().any(|r| r.rhs == vec![-3, 1, 3]));
    }

    #[test]
    fn abelianizations() {
        assert_eq!(abelianization(&simplified_presentation(5)).to_string(), "Z^3");
        assert_eq!(abelianization(&simplified_presentation(4)).to_string(), "Z^2 ⊕ Z/2");
        assert_eq!(abelianization(&raw_presentation(3)).to_string(), "Z^2");
    }
}
