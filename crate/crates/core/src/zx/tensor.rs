//! Dense evaluation of a ZX diagram by variable elimination.
//!
//! Every Z spider is a copy tensor, so it carries a single binary variable and a unary
//! factor `[1, e^{iα}]`. An X spider is a Z spider with a Hadamard on each leg. An edge
//! whose Hadamard count (edge kind plus X endpoints) is even identifies its two variables;
//! an odd count contributes the pairwise factor `H[a][b] = (−1)^{ab}/√2`. Interior
//! variables are then summed out greedily.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::zx::{EdgeKind, VertexId, VertexKind, ZxDiagram, ZxError};

/// Largest number of boundary legs that will be materialized (2^16 entries).
pub const MAX_TENSOR_LEGS: usize = 16;
/// Largest intermediate factor, in variables.
pub const MAX_FACTOR_VARS: usize = 24;

/// Dense tensor over the boundary legs; bit `k` of the index is leg `k`
/// (inputs first, then outputs, see [`ZxDiagram::boundary_order`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub n_legs: usize,
    pub data: Vec<Complex64>,
}

impl Tensor {
    /// Entry `⟨out| M |in⟩` when the tensor is read as a map from `n_in` inputs.
    pub fn matrix_entry(&self, n_in: usize, out: usize, input: usize) -> Complex64 {
        self.data[input | (out << n_in)]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<Complex64>,
}

impl Factor {
    fn value(&self, assignment: impl Fn(usize) -> usize) -> Complex64 {
        let mut idx = 0;
        for (k, &v) in self.vars.iter().enumerate() {
            idx |= assignment(v) << k;
        }
        self.table[idx]
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn diagram_to_tensor(d: &ZxDiagram) -> Result<Tensor, ZxError> {
    let boundary = d.boundary_order();
    if boundary.len() > MAX_TENSOR_LEGS {
        return Err(ZxError::TooLarge(format!(
            "{} boundary legs (cap {MAX_TENSOR_LEGS})",
            boundary.len()
        )));
    }
    let ids: Vec<VertexId> = d.vertex_ids().collect();
    let slot: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind((0..ids.len()).collect());

    let is_x = |v: VertexId| d.kind(v) == VertexKind::X;
    let mut hadamard_pairs = Vec::new();
    for (u, v, k) in d.edges() {
        let odd = (k == EdgeKind::Hadamard) ^ is_x(u) ^ is_x(v);
        if odd {
            hadamard_pairs.push((slot[&u], slot[&v]));
        } else {
            uf.union(slot[&u], slot[&v]);
        }
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut factors: Vec<Factor> = Vec::new();
    for (i, &v) in ids.iter().enumerate() {
        let vert = d.vertex(v).unwrap();
        if vert.kind.is_spider() && !vert.phase.is_zero() {
            factors.push(Factor {
                vars: vec![uf.find(i)],
                table: vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::from_polar(1.0, vert.phase.to_radians()),
                ],
            });
        }
    }
    for (a, b) in hadamard_pairs {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            factors.push(Factor {
                vars: vec![ra],
                table: vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            });
        } else {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            factors.push(Factor {
                vars: vec![lo, hi],
                table: vec![
                    Complex64::new(h, 0.0),
                    Complex64::new(h, 0.0),
                    Complex64::new(h, 0.0),
                    Complex64::new(-h, 0.0),
                ],
            });
        }
    }

    let boundary_vars: Vec<usize> = boundary.iter().map(|b| uf.find(slot[b])).collect();
    let kept: BTreeSet<usize> = boundary_vars.iter().copied().collect();
    let mut interior: BTreeSet<usize> = (0..ids.len()).map(|i| uf.find(i)).collect();
    interior.retain(|v| !kept.contains(v));

    let mut scalar = d.scalar();
    while let Some(var) = pick_variable(&interior, &factors) {
        interior.remove(&var);
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        let summed = sum_out(var, &touching)?;
        if summed.vars.is_empty() {
            scalar *= summed.table[0];
        } else {
            factors.push(summed);
        }
    }

    let n_legs = boundary.len();
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << n_legs];
    for (idx, slot_out) in data.iter_mut().enumerate() {
        let mut values: BTreeMap<usize, usize> = BTreeMap::new();
        let mut consistent = true;
        for (k, &var) in boundary_vars.iter().enumerate() {
            let bit = (idx >> k) & 1;
            if *values.entry(var).or_insert(bit) != bit {
                consistent = false;
                break;
            }
        }
        if !consistent {
            continue;
        }
        let mut acc = scalar;
        for f in &factors {
            acc *= f.value(|v| values[&v]);
        }
        *slot_out = acc;
    }
    Ok(Tensor { n_legs, data })
}

/// Interior variable whose elimination creates the smallest factor.
fn pick_variable(interior: &BTreeSet<usize>, factors: &[Factor]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for &var in interior {
        let mut scope: BTreeSet<usize> = BTreeSet::new();
        for f in factors.iter().filter(|f| f.vars.contains(&var)) {
            scope.extend(f.vars.iter().copied());
        }
        let size = scope.len();
        if best.is_none_or(|(s, _)| size < s) {
            best = Some((size, var));
        }
    }
    best.map(|(_, v)| v)
}

fn sum_out(var: usize, factors: &[Factor]) -> Result<Factor, ZxError> {
    let mut scope: BTreeSet<usize> = BTreeSet::new();
    for f in factors {
        scope.extend(f.vars.iter().copied());
    }
    scope.insert(var);
    let all: Vec<usize> = scope.into_iter().collect();
    if all.len() > MAX_FACTOR_VARS {
        return Err(ZxError::TooLarge(format!(
            "intermediate factor over {} variables (cap {MAX_FACTOR_VARS})",
            all.len()
        )));
    }
    let pos: BTreeMap<usize, usize> = all.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let out_vars: Vec<usize> = all.iter().copied().filter(|&v| v != var).collect();
    let var_pos = pos[&var];
    let mut table = vec![Complex64::new(0.0, 0.0); 1 << out_vars.len()];
    for assign in 0..(1usize << all.len()) {
        let mut p = Complex64::new(1.0, 0.0);
        for f in factors {
            p *= f.value(|v| (assign >> pos[&v]) & 1);
            if p == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        let low = assign & ((1 << var_pos) - 1);
        let high = assign >> (var_pos + 1);
        table[low | (high << var_pos)] += p;
    }
    Ok(Factor {
        vars: out_vars,
        table,
    })
}

/// Largest elementwise deviation between `a` and `b` after both are scaled to unit max-norm
/// and `b` is rotated onto `a`'s phase at `a`'s largest entry. Returns 0 for two zero
/// tensors and ∞ when exactly one is zero or the leg counts differ.
pub fn deviation_up_to_scalar(a: &Tensor, b: &Tensor) -> f64 {
    if a.n_legs != b.n_legs {
        return f64::INFINITY;
    }
    let (ma, mb) = (a.max_abs(), b.max_abs());
    if ma == 0.0 && mb == 0.0 {
        return 0.0;
    }
    if ma == 0.0 || mb == 0.0 {
        return f64::INFINITY;
    }
    let pivot = a
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let ratio = a.data[pivot] / b.data[pivot];
    if !ratio.is_finite() {
        return f64::INFINITY;
    }
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y * ratio).norm() / ma)
        .fold(0.0, f64::max)
}

/// Proportionality check at tolerance `tol`.
pub fn equal_up_to_scalar(a: &Tensor, b: &Tensor, tol: f64) -> bool {
    deviation_up_to_scalar(a, b) <= tol
}

/// Exact equality (scalar included) relative to the larger max-norm.
pub fn max_deviation(a: &Tensor, b: &Tensor) -> f64 {
    if a.n_legs != b.n_legs {
        return f64::INFINITY;
    }
    let scale = a.max_abs().max(b.max_abs()).max(1e-300);
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm() / scale)
        .fold(0.0, f64::max)
}
