//! Individual rewrite rules. Each rule checks its own precondition and returns
//! [`NotApplicable`] without touching the diagram when it does not hold.

use num_complex::Complex64;

use crate::phase::Phase;
use crate::zx::{EdgeKind, VertexId, VertexKind, ZxDiagram};

/// Rule precondition failed; the diagram is unchanged.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{rule} not applicable: {reason}")]
pub struct NotApplicable {
    pub rule: &'static str,
    pub reason: &'static str,
}

fn reject(rule: &'static str, reason: &'static str) -> Result<(), NotApplicable> {
    Err(NotApplicable { rule, reason })
}

fn sqrt2_pow(k: i64) -> f64 {
    std::f64::consts::SQRT_2.powi(k as i32)
}

pub fn check_fuse(d: &ZxDiagram, u: VertexId, v: VertexId) -> bool {
    u != v
        && d.contains(u)
        && d.contains(v)
        && d.kind(u).is_spider()
        && d.kind(u) == d.kind(v)
        && d.edge(u, v) == Some(EdgeKind::Plain)
}

/// Same-colour spiders joined by a plain wire merge; phases add. `u` survives.
pub fn fuse(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<(), NotApplicable> {
    if !check_fuse(d, u, v) {
        return reject(
            "fuse",
            "needs two same-colour spiders joined by a plain edge",
        );
    }
    let moved: Vec<(VertexId, EdgeKind)> = d.incident_edges(v).filter(|&(w, _)| w != u).collect();
    d.remove_edge(u, v);
    let pv = d.phase(v);
    d.remove_vertex(v);
    d.add_to_phase(u, pv);
    for (w, k) in moved {
        d.add_edge_smart(u, w, k);
    }
    Ok(())
}

pub fn check_identity(d: &ZxDiagram, v: VertexId) -> bool {
    d.contains(v) && d.kind(v).is_spider() && d.phase(v).is_zero() && d.degree(v) == 2
}

/// A phase-free arity-2 spider is a wire; its two edges compose (`H·H = plain`).
pub fn identity_remove(d: &mut ZxDiagram, v: VertexId) -> Result<(), NotApplicable> {
    if !check_identity(d, v) {
        return reject("identity", "needs a phase-0 spider with exactly two edges");
    }
    let nbrs: Vec<(VertexId, EdgeKind)> = d.incident_edges(v).collect();
    let (a, ka) = nbrs[0];
    let (b, kb) = nbrs[1];
    d.remove_vertex(v);
    d.add_edge_smart(a, b, ka.compose(kb));
    Ok(())
}

/// Swaps Z ↔ X and toggles every incident edge between plain and Hadamard.
pub fn color_change(d: &mut ZxDiagram, v: VertexId) -> Result<(), NotApplicable> {
    if !d.contains(v) || !d.kind(v).is_spider() {
        return reject("color_change", "needs a spider");
    }
    let flipped = match d.kind(v) {
        VertexKind::Z => VertexKind::X,
        _ => VertexKind::Z,
    };
    d.set_kind(v, flipped);
    let nbrs: Vec<(VertexId, EdgeKind)> = d.incident_edges(v).collect();
    for (w, k) in nbrs {
        d.set_edge_kind(v, w, k.toggled());
    }
    Ok(())
}

/// Z spider whose every edge is a Hadamard edge to another Z spider.
pub fn is_interior_graph_like(d: &ZxDiagram, v: VertexId) -> bool {
    d.contains(v)
        && d.kind(v) == VertexKind::Z
        && d.incident_edges(v)
            .all(|(w, k)| k == EdgeKind::Hadamard && d.kind(w) == VertexKind::Z)
}

pub fn check_local_complement(d: &ZxDiagram, v: VertexId) -> bool {
    is_interior_graph_like(d, v) && d.phase(v).is_proper_clifford()
}

/// Removes an interior ±π/2 spider: its neighbourhood is complemented and each neighbour
/// loses the removed phase.
pub fn local_complement(d: &mut ZxDiagram, v: VertexId) -> Result<(), NotApplicable> {
    if !check_local_complement(d, v) {
        return reject(
            "local_complement",
            "needs an interior graph-like spider with phase ±π/2",
        );
    }
    let p = d.phase(v);
    let nbrs: Vec<VertexId> = d.neighbors(v).collect();
    d.remove_vertex(v);
    for (i, &a) in nbrs.iter().enumerate() {
        d.add_to_phase(a, -p);
        for &b in &nbrs[i + 1..] {
            d.add_edge_smart(a, b, EdgeKind::Hadamard);
        }
    }
    let x = nbrs.len() as i64;
    // e^{iπ/4} for π/2, e^{-iπ/4} for 3π/2
    let sign = if p == Phase::half_pi() { 1.0 } else { -1.0 };
    d.mul_scalar(Complex64::from_polar(
        sqrt2_pow((x - 1) * (x - 2) / 2),
        sign * std::f64::consts::FRAC_PI_4,
    ));
    Ok(())
}

pub fn check_pivot(d: &ZxDiagram, u: VertexId, v: VertexId) -> bool {
    u != v
        && d.contains(u)
        && d.contains(v)
        && d.edge(u, v) == Some(EdgeKind::Hadamard)
        && d.phase(u).is_pauli()
        && d.phase(v).is_pauli()
        && is_interior_graph_like(d, u)
        && is_interior_graph_like(d, v)
}

/// Removes two adjacent interior Pauli spiders. With `A`, `B` the exclusive neighbourhoods
/// of `u` and `v` and `C` the shared one, the edges between every pair of the three groups
/// are toggled and `A += φ_v`, `B += φ_u`, `C += φ_u + φ_v + π`.
pub fn pivot(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<(), NotApplicable> {
    if !check_pivot(d, u, v) {
        return reject(
            "pivot",
            "needs two interior graph-like Pauli spiders joined by a Hadamard edge",
        );
    }
    let pu = d.phase(u);
    let pv = d.phase(v);
    let nu: Vec<VertexId> = d.neighbors(u).collect();
    let nv: Vec<VertexId> = d.neighbors(v).collect();
    for &a in &nu {
        d.add_to_phase(a, pv);
        for &b in &nv {
            if a != v && b != u {
                d.add_edge_smart(a, b, EdgeKind::Hadamard);
            }
        }
    }
    for &b in &nv {
        d.add_to_phase(b, pu);
    }
    d.remove_vertex(u);
    d.remove_vertex(v);
    let (x, y) = (nu.len() as i64, nv.len() as i64);
    let mut s = Complex64::new(sqrt2_pow((x - 2) * (y - 2)), 0.0);
    if !pu.is_zero() && !pv.is_zero() {
        s = -s;
    }
    d.mul_scalar(s);
    Ok(())
}
