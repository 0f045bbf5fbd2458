use std::fmt;

use crate::zx::rules::{
    check_fuse, check_identity, check_local_complement, check_pivot, color_change, fuse,
    identity_remove, local_complement, pivot, NotApplicable,
};
use crate::zx::{EdgeKind, VertexId, VertexKind, ZxDiagram, ZxError};

/// Upper bound on rewrite steps in one `full_simplify` call.
pub const MAX_REWRITE_STEPS: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Fuse,
    Identity,
    ColorChange,
    LocalComplement,
    Pivot,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Fuse => "fuse",
            Rule::Identity => "identity",
            Rule::ColorChange => "color_change",
            Rule::LocalComplement => "local_complement",
            Rule::Pivot => "pivot",
        }
    }

    /// Applies this rule at `vertices` (one id, or two for fuse/pivot).
    pub fn apply(self, d: &mut ZxDiagram, vertices: &[VertexId]) -> Result<(), NotApplicable> {
        let bad = || NotApplicable {
            rule: self.name(),
            reason: "wrong number of vertices",
        };
        match (self, vertices) {
            (Rule::Fuse, &[u, v]) => fuse(d, u, v),
            (Rule::Pivot, &[u, v]) => pivot(d, u, v),
            (Rule::Identity, &[v]) => identity_remove(d, v),
            (Rule::ColorChange, &[v]) => color_change(d, v),
            (Rule::LocalComplement, &[v]) => local_complement(d, v),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: Rule,
    pub vertices: Vec<VertexId>,
    pub vertex_delta: i64,
    pub edge_delta: i64,
}

/// Ordered record of every rewrite applied by [`full_simplify`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub entries: Vec<TraceEntry>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, rule: Rule) -> usize {
        self.entries.iter().filter(|e| e.rule == rule).count()
    }

    /// Re-applies the trace to a copy of `initial`.
    pub fn replay(&self, initial: &ZxDiagram) -> Result<ZxDiagram, ZxError> {
        let mut d = initial.clone();
        for (step, e) in self.entries.iter().enumerate() {
            e.rule
                .apply(&mut d, &e.vertices)
                .map_err(|err| ZxError::Replay {
                    step,
                    message: err.to_string(),
                })?;
        }
        Ok(d)
    }

    fn record(&mut self, d: &mut ZxDiagram, rule: Rule, vertices: Vec<VertexId>) {
        let (v0, e0) = (d.num_vertices() as i64, d.num_edges() as i64);
        rule.apply(d, &vertices)
            .expect("rule checked before recording");
        self.entries.push(TraceEntry {
            rule,
            vertices,
            vertex_delta: d.num_vertices() as i64 - v0,
            edge_delta: d.num_edges() as i64 - e0,
        });
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let ids: Vec<String> = e.vertices.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "{} [{}] dV={} dE={}",
                e.rule.name(),
                ids.join(","),
                e.vertex_delta,
                e.edge_delta
            )?;
        }
        Ok(())
    }
}

fn find_fuse(d: &ZxDiagram) -> Option<(VertexId, VertexId)> {
    d.edges()
        .find(|&(u, v, k)| k == EdgeKind::Plain && check_fuse(d, u, v))
        .map(|(u, v, _)| (u, v))
}

fn find_identity(d: &ZxDiagram) -> Option<VertexId> {
    d.vertex_ids().find(|&v| check_identity(d, v))
}

fn find_local_complement(d: &ZxDiagram) -> Option<VertexId> {
    d.vertex_ids().find(|&v| check_local_complement(d, v))
}

fn find_pivot(d: &ZxDiagram) -> Option<(VertexId, VertexId)> {
    for u in d.vertex_ids() {
        if !d.phase(u).is_pauli() || d.kind(u) != VertexKind::Z {
            continue;
        }
        for w in d.neighbors(u) {
            if w > u && check_pivot(d, u, w) {
                return Some((u, w));
            }
        }
    }
    None
}

/// Colour-changes every X spider and fuses every plain Z–Z edge, leaving only Z spiders
/// joined by Hadamard edges.
pub fn to_graph_like(d: &mut ZxDiagram, trace: &mut RewriteTrace) {
    let xs: Vec<VertexId> = d
        .vertices()
        .filter(|(_, v)| v.kind == VertexKind::X)
        .map(|(id, _)| id)
        .collect();
    for v in xs {
        trace.record(d, Rule::ColorChange, vec![v]);
    }
    while let Some((u, v)) = find_fuse(d) {
        trace.record(d, Rule::Fuse, vec![u, v]);
    }
}

/// Graph-like conversion followed by fuse → identity → local complementation → pivot to a
/// fixpoint, always taking the lowest vertex ids first. Returns the simplified diagram and
/// the trace that reproduces it from the input.
pub fn full_simplify(d: &ZxDiagram) -> (ZxDiagram, RewriteTrace) {
    let mut g = d.clone();
    let mut trace = RewriteTrace::default();
    to_graph_like(&mut g, &mut trace);
    for _ in 0..MAX_REWRITE_STEPS {
        if let Some((u, v)) = find_fuse(&g) {
            trace.record(&mut g, Rule::Fuse, vec![u, v]);
        } else if let Some(v) = find_identity(&g) {
            trace.record(&mut g, Rule::Identity, vec![v]);
        } else if let Some(v) = find_local_complement(&g) {
            trace.record(&mut g, Rule::LocalComplement, vec![v]);
        } else if let Some((u, v)) = find_pivot(&g) {
            trace.record(&mut g, Rule::Pivot, vec![u, v]);
        } else {
            break;
        }
    }
    (g, trace)
}

/// Non-Clifford spider count, the diagram-level T-count.
pub fn diagram_t_count(d: &ZxDiagram) -> usize {
    d.t_count()
}
