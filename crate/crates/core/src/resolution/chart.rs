//! Charts of the blown-up space and the blow-up of a chart along a
//! coordinate center.

use serde::{Deserialize, Serialize};

use crate::error::FormError;
use crate::forms::{OneForm, PolyMap};
use crate::numeric::CycloScalar;
use crate::poly::{MultiPoly, Vars};

pub type ChartId = usize;
pub type ComponentId = usize;

/// What the coordinate hyperplane `{u_i = 0}` of a chart is, globally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// Strict transform of an ambient coordinate plane `{x = 0}`, `{y = 0}`, `{z = 0}`.
    Plane(u8),
    /// An exceptional divisor component.
    Divisor(ComponentId),
    /// Strict transform of a translated hyperplane; carries no global identity.
    Other,
}

/// Index of the `z` plane among ambient planes.
pub const Z_PLANE: Label = Label::Plane(2);

/// A blow-up center in one chart: the common zero set of `u_i − shift_i` for
/// the listed coordinates (three for a point, two for a line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    pub coords: Vec<usize>,
    pub shifts: Vec<Option<CycloScalar>>,
}

impl Center {
    pub fn coordinate(coords: Vec<usize>) -> Center {
        let n = coords.len();
        Center {
            coords,
            shifts: vec![None; n],
        }
    }

    pub fn is_point(&self) -> bool {
        self.coords.len() == 3
    }

    fn shift(&self, i: usize) -> Option<&CycloScalar> {
        self.coords
            .iter()
            .position(|&c| c == i)
            .and_then(|k| self.shifts[k].as_ref())
    }

    pub fn is_toric(&self) -> bool {
        self.shifts.iter().all(|s| s.is_none())
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub id: ChartId,
    pub parent: Option<ChartId>,
    /// Step that created the chart (`None` for the initial chart).
    pub step: Option<usize>,
    pub vars: Vars,
    pub to_parent: PolyMap,
    pub to_origin: PolyMap,
    pub labels: [Label; 3],
    /// Valuation vectors `(ord x, ord y, ord z)` of each coordinate hyperplane,
    /// while the chart is toric.
    pub rays: Option<[[i64; 3]; 3]>,
    pub form: OneForm,
    pub separatrix: MultiPoly,
    /// Global hypersurfaces meeting the chart whose equation is not a coordinate.
    pub extra: Vec<(Label, MultiPoly)>,
    /// Closed sets `V(e₁, …, eₘ)` omitted from the chart; other charts cover them.
    pub domain: Vec<Vec<MultiPoly>>,
    pub leaf: bool,
}

impl Chart {
    /// Whether the curve `{u_i = 0, f = 0}` lies outside the chart's domain.
    pub fn omits_curve(&self, i: usize, f: &MultiPoly) -> bool {
        let zero = self.form.field().zero();
        self.domain.iter().any(|set| {
            set.iter().all(|e| {
                let r = e.eval_var(i, &zero);
                r.is_zero() || (!f.is_constant() && r.div_exact(f).is_some())
            })
        })
    }

    /// Removes from `f` the factors whose curves on `{u_i = 0}` the chart omits.
    pub fn trim_curve(&self, i: usize, f: &MultiPoly) -> MultiPoly {
        let zero = self.form.field().zero();
        let mut f = f.clone();
        for set in &self.domain {
            let r: Vec<MultiPoly> = set.iter().map(|e| e.eval_var(i, &zero)).collect();
            let live: Vec<&MultiPoly> = r.iter().filter(|e| !e.is_zero()).collect();
            if live.len() != 1 || live[0].is_constant() {
                continue;
            }
            loop {
                let g = f.gcd(live[0]);
                if g.is_constant() {
                    break;
                }
                f = f.div_exact(&g).expect("gcd divides");
            }
        }
        f
    }

    pub fn omits_point(&self, p: &[CycloScalar]) -> bool {
        self.domain.iter().any(|set| set.iter().all(|e| e.eval(p).is_zero()))
    }

    /// Indices of coordinates whose hyperplane is an exceptional divisor.
    pub fn exceptional(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| matches!(self.labels[i], Label::Divisor(_)))
            .collect()
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn has_labels(&self, labels: &[Label]) -> bool {
        labels.iter().all(|l| self.labels.contains(l))
    }
}

/// The chart maps of a blow-up of `center` in a chart with coordinates `vars`:
/// one chart per coordinate of the center, in the order of `center.coords`.
pub fn blowup_maps(vars: &Vars, field: &crate::numeric::Field, center: &Center) -> Vec<(usize, PolyMap)> {
    let u: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(vars, field, i)).collect();
    let shifted = |i: usize, p: MultiPoly| match center.shift(i) {
        Some(c) => &p + &MultiPoly::constant(vars, c.clone()),
        None => p,
    };
    center
        .coords
        .iter()
        .map(|&i0| {
            let images = (0..3)
                .map(|i| {
                    if i == i0 {
                        shifted(i, u[i].clone())
                    } else if center.coords.contains(&i) {
                        shifted(i, &u[i0] * &u[i])
                    } else {
                        u[i].clone()
                    }
                })
                .collect();
            (i0, PolyMap::new(vars, vars, images))
        })
        .collect()
}

/// Strict transform: divides out the maximal power of every exceptional coordinate.
pub fn strict_transform_form(f: &OneForm, exceptional: &[usize]) -> Result<(Vec<u32>, OneForm), FormError> {
    f.divide_by_monomial(exceptional)
}

pub fn strict_transform_poly(f: &MultiPoly, exceptional: &[usize]) -> Result<(Vec<u32>, MultiPoly), FormError> {
    f.divide_by_monomial(exceptional).ok_or(FormError::ZeroInput)
}

/// Raw (undivided) pullbacks into the charts of a blow-up, as `(new chart data, map)`.
pub struct RawChild {
    pub divisor_coord: usize,
    pub map: PolyMap,
    pub labels: [Label; 3],
    pub rays: Option<[[i64; 3]; 3]>,
    pub raw_form: OneForm,
    pub raw_separatrix: MultiPoly,
    pub raw_extra: Vec<(Label, MultiPoly)>,
}

/// Blows up `center` in chart `c`; the new divisor gets `new_label`.
pub fn blowup_chart(c: &Chart, center: &Center, new_label: Label) -> Result<Vec<RawChild>, FormError> {
    let field = c.form.field().clone();
    let mut out = Vec::new();
    for (i0, map) in blowup_maps(&c.vars, &field, center) {
        let mut labels = c.labels;
        let mut raw_extra: Vec<(Label, MultiPoly)> = c
            .extra
            .iter()
            .map(|(l, f)| (*l, map.pull_function(f)))
            .collect();
        for &i in &center.coords {
            if center.shift(i).is_some() && c.labels[i] != Label::Other {
                raw_extra.push((c.labels[i], map.images[i].clone()));
            }
        }
        labels[i0] = new_label;
        for &i in &center.coords {
            if i != i0 && center.shift(i).is_some() {
                labels[i] = Label::Other;
            }
        }
        let rays = match (&c.rays, center.is_toric()) {
            (Some(r), true) => {
                let mut rr = *r;
                let mut sum = [0i64; 3];
                for &i in &center.coords {
                    for (s, v) in sum.iter_mut().zip(&r[i]) {
                        *s += v;
                    }
                }
                rr[i0] = sum;
                Some(rr)
            }
            _ => None,
        };
        out.push(RawChild {
            divisor_coord: i0,
            raw_form: c.form.pullback(&map)?,
            raw_separatrix: map.pull_function(&c.separatrix),
            raw_extra,
            map,
            labels,
            rays,
        });
    }
    Ok(out)
}

/// Integer transition exponents between two toric charts: `u'_a = ∏_b u_b^{M[a][b]}`.
pub fn toric_transition(from: &[[i64; 3]; 3], to: &[[i64; 3]; 3]) -> Option<[[i64; 3]; 3]> {
    // characters of `to` are the rows of (R_to^{-1})^T; M[a][b] = <m'_a, r_b>
    let inv = int_inverse(to)?;
    let mut m = [[0i64; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            // m'_a = column a of R_to^{-1}
            m[a][b] = (0..3).map(|t| inv[t][a] * from[b][t]).sum();
        }
    }
    Some(m)
}

fn int_inverse(r: &[[i64; 3]; 3]) -> Option<[[i64; 3]; 3]> {
    let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if det != 1 && det != -1 {
        return None;
    }
    let mut inv = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a0, a1) = ((j + 1) % 3, (j + 2) % 3);
            let (b0, b1) = ((i + 1) % 3, (i + 2) % 3);
            let minor = r[a0][b0] * r[a1][b1] - r[a0][b1] * r[a1][b0];
            inv[i][j] = minor * det;
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Field;
    use crate::poly::vars;

    #[test]
    fn point_and_line_chart_maps() {
        let v = vars(&["x", "y", "z"]);
        let k = Field::new(4).unwrap();
        let maps = blowup_maps(&v, &k, &Center::coordinate(vec![0, 1, 2]));
        let shown: Vec<Vec<String>> = maps
            .iter()
            .map(|(_, m)| m.images.iter().map(|p| p.to_string()).collect())
            .collect();
        assert_eq!(
            shown,
            vec![
                vec!["x", "x*y", "x*z"],
                vec!["x*y", "y", "y*z"],
                vec!["x*z", "y*z", "z"]
            ]
        );
        let c = k.from_int(3);
        let line = Center {
            coords: vec![1, 2],
            shifts: vec![Some(c), None],
        };
        let shown: Vec<Vec<String>> = blowup_maps(&v, &k, &line)
            .iter()
            .map(|(_, m)| m.images.iter().map(|p| p.to_string()).collect())
            .collect();
        assert_eq!(shown, vec![vec!["x", "y + 3", "y*z"], vec!["x", "y*z + 3", "z"]]);
    }

    #[test]
    fn transition_between_adjacent_cones() {
        let a = [[2, 3, 6], [1, 2, 3], [0, 0, 1]];
        let b = [[1, 1, 2], [2, 3, 6], [0, 0, 1]];
        let m = toric_transition(&a, &b).unwrap();
        // the coordinate dual to the differing ray depends only on the other differing ray
        assert_eq!(m[0][0], 0);
        assert_eq!(m[0][2], 0);
        assert_eq!(m[0][1].abs(), 1);
        assert!(int_inverse(&[[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_none());
    }
}
