use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::phase::Phase;
use crate::zx::ZxError;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Boundary,
    Z,
    X,
}

impl VertexKind {
    pub fn is_spider(self) -> bool {
        !matches!(self, VertexKind::Boundary)
    }

    fn code(self) -> &'static str {
        match self {
            VertexKind::Boundary => "B",
            VertexKind::Z => "Z",
            VertexKind::X => "X",
        }
    }
}

/// A Hadamard edge stands in for the arity-2 Hadamard box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Plain,
    Hadamard,
}

impl EdgeKind {
    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Plain => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Plain,
        }
    }

    /// Composition of two edges meeting at an identity spider.
    pub fn compose(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Plain
        } else {
            EdgeKind::Hadamard
        }
    }

    fn code(self) -> &'static str {
        match self {
            EdgeKind::Plain => "N",
            EdgeKind::Hadamard => "H",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub phase: Phase,
}

/// Open ZX diagram with at most one edge per vertex pair and no self-loops.
///
/// Parallel edges and self-loops produced by rewriting are normalized away on insertion by
/// [`ZxDiagram::add_edge_smart`], with the exact scalar each normalization costs.
#[derive(Clone, Debug, PartialEq)]
pub struct ZxDiagram {
    vertices: BTreeMap<VertexId, Vertex>,
    adjacency: BTreeMap<VertexId, BTreeMap<VertexId, EdgeKind>>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    scalar: Complex64,
    next_id: VertexId,
}

impl Default for ZxDiagram {
    fn default() -> Self {
        Self::new()
    }
}

impl ZxDiagram {
    pub fn new() -> Self {
        ZxDiagram {
            vertices: BTreeMap::new(),
            adjacency: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            scalar: Complex64::new(1.0, 0.0),
            next_id: 0,
        }
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        let phase = if kind.is_spider() {
            phase
        } else {
            Phase::zero()
        };
        self.vertices.insert(id, Vertex { kind, phase });
        self.adjacency.insert(id, BTreeMap::new());
        id
    }

    pub fn add_input(&mut self) -> VertexId {
        let b = self.add_vertex(VertexKind::Boundary, Phase::zero());
        self.inputs.push(b);
        b
    }

    pub fn add_output(&mut self) -> VertexId {
        let b = self.add_vertex(VertexKind::Boundary, Phase::zero());
        self.outputs.push(b);
        b
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    /// Inputs followed by outputs; this is the leg order of [`crate::zx::diagram_to_tensor`].
    pub fn boundary_order(&self) -> Vec<VertexId> {
        self.inputs.iter().chain(&self.outputs).copied().collect()
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn mul_scalar(&mut self, factor: Complex64) {
        self.scalar *= factor;
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Vertex)> + '_ {
        self.vertices.iter().map(|(&id, &v)| (id, v))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex(&self, v: VertexId) -> Option<Vertex> {
        self.vertices.get(&v).copied()
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.vertices[&v].kind
    }

    pub fn phase(&self, v: VertexId) -> Phase {
        self.vertices[&v].phase
    }

    pub fn set_phase(&mut self, v: VertexId, phase: Phase) {
        if let Some(vert) = self.vertices.get_mut(&v) {
            if vert.kind.is_spider() {
                vert.phase = phase;
            }
        }
    }

    pub fn add_to_phase(&mut self, v: VertexId, phase: Phase) {
        let p = self.phase(v);
        self.set_phase(v, p + phase);
    }

    pub fn set_kind(&mut self, v: VertexId, kind: VertexKind) {
        if let Some(vert) = self.vertices.get_mut(&v) {
            vert.kind = kind;
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency.get(&v).map_or(0, BTreeMap::len)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[&v].keys().copied()
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeKind)> + '_ {
        self.adjacency[&v].iter().map(|(&w, &k)| (w, k))
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<EdgeKind> {
        self.adjacency.get(&u).and_then(|m| m.get(&v)).copied()
    }

    /// All edges once, as `(low id, high id, kind)` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, EdgeKind)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&u, m)| m.range(u + 1..).map(move |(&v, &k)| (u, v, k)))
    }

    pub fn set_edge_kind(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) {
        if self.edge(u, v).is_some() {
            self.adjacency.get_mut(&u).unwrap().insert(v, kind);
            self.adjacency.get_mut(&v).unwrap().insert(u, kind);
        }
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        if let Some(m) = self.adjacency.get_mut(&u) {
            m.remove(&v);
        }
        if let Some(m) = self.adjacency.get_mut(&v) {
            m.remove(&u);
        }
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(nbrs) = self.adjacency.remove(&v) {
            for w in nbrs.keys() {
                if let Some(m) = self.adjacency.get_mut(w) {
                    m.remove(&v);
                }
            }
        }
        self.vertices.remove(&v);
        self.inputs.retain(|&b| b != v);
        self.outputs.retain(|&b| b != v);
    }

    /// Inserts an edge with no normalization; the pair must not be connected yet.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) -> Result<(), ZxError> {
        if u == v {
            return Err(ZxError::SelfLoop(u));
        }
        if !self.contains(u) || !self.contains(v) {
            return Err(ZxError::UnknownVertex(if self.contains(u) { v } else { u }));
        }
        if self.edge(u, v).is_some() {
            return Err(ZxError::ParallelEdge(u, v));
        }
        self.adjacency.get_mut(&u).unwrap().insert(v, kind);
        self.adjacency.get_mut(&v).unwrap().insert(u, kind);
        Ok(())
    }

    /// Whether an edge of this kind acts as a Hadamard once both endpoints are viewed as Z spiders.
    fn effective_hadamard(&self, u: VertexId, v: VertexId, kind: EdgeKind) -> bool {
        (kind == EdgeKind::Hadamard)
            ^ (self.kind(u) == VertexKind::X)
            ^ (self.kind(v) == VertexKind::X)
    }

    /// Adds an edge between spiders, normalizing self-loops and parallel edges:
    ///
    /// * plain self-loop: dropped; Hadamard self-loop: phase `+π`, scalar `1/√2`;
    /// * two effectively-plain edges: one kept;
    /// * two effectively-Hadamard edges: both removed (Hopf), scalar `1/2`;
    /// * one of each: the effectively-plain edge kept, phase `+π` on `u`, scalar `1/√2`.
    ///
    /// "Effectively" means after colour-changing any X endpoint to Z.
    pub fn add_edge_smart(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) {
        let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        if u == v {
            if kind == EdgeKind::Hadamard {
                self.add_to_phase(u, Phase::pi());
                self.scalar *= inv_sqrt2;
            }
            return;
        }
        let Some(old) = self.edge(u, v) else {
            self.adjacency.get_mut(&u).unwrap().insert(v, kind);
            self.adjacency.get_mut(&v).unwrap().insert(u, kind);
            return;
        };
        debug_assert!(self.kind(u).is_spider() && self.kind(v).is_spider());
        match (
            self.effective_hadamard(u, v, old),
            self.effective_hadamard(u, v, kind),
        ) {
            (false, false) => {}
            (true, true) => {
                self.remove_edge(u, v);
                self.scalar *= Complex64::new(0.5, 0.0);
            }
            (old_h, _) => {
                let keep = if old_h { kind } else { old };
                self.set_edge_kind(u, v, keep);
                self.add_to_phase(u, Phase::pi());
                self.scalar *= inv_sqrt2;
            }
        }
    }

    /// Replaces input `q` by the state `|0⟩` (an arity-1 X spider, scalar `1/√2`).
    pub fn plug_input_zero(&mut self, q: usize) -> Result<(), ZxError> {
        let b = *self.inputs.get(q).ok_or(ZxError::NoSuchInput(q))?;
        self.set_kind(b, VertexKind::X);
        self.set_phase(b, Phase::zero());
        self.inputs.remove(q);
        self.scalar *= Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ok(())
    }

    /// Plugs `|0⟩` into every input, turning a unitary into the state it prepares.
    pub fn plug_all_inputs_zero(&mut self) {
        while !self.inputs.is_empty() {
            self.plug_input_zero(0).expect("input exists");
        }
    }

    /// Number of spiders whose phase is not a multiple of π/2.
    pub fn t_count(&self) -> usize {
        self.vertices
            .values()
            .filter(|v| v.kind.is_spider() && !v.phase.is_clifford())
            .count()
    }

    pub fn num_spiders(&self) -> usize {
        self.vertices
            .values()
            .filter(|v| v.kind.is_spider())
            .count()
    }

    /// Checks the boundary invariants: degree 1, phase 0, listed exactly once.
    pub fn validate(&self) -> Result<(), ZxError> {
        for (id, v) in &self.vertices {
            if v.kind == VertexKind::Boundary {
                if self.degree(*id) != 1 {
                    return Err(ZxError::BoundaryDegree(*id, self.degree(*id)));
                }
                let listed = self
                    .inputs
                    .iter()
                    .chain(&self.outputs)
                    .filter(|&&b| b == *id)
                    .count();
                if listed != 1 {
                    return Err(ZxError::UnlistedBoundary(*id));
                }
            }
        }
        for b in self.inputs.iter().chain(&self.outputs) {
            if !self.contains(*b) || self.kind(*b) != VertexKind::Boundary {
                return Err(ZxError::UnlistedBoundary(*b));
            }
        }
        Ok(())
    }

    /// Text form:
    ///
    /// ```text
    /// scalar <re> <im>
    /// inputs <ids…>
    /// outputs <ids…>
    /// v <id> <B|Z|X> <p/q>
    /// e <u> <v> <N|H>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "scalar {:?} {:?}", self.scalar.re, self.scalar.im).unwrap();
        let ids = |xs: &[VertexId]| xs.iter().map(|x| format!(" {x}")).collect::<String>();
        writeln!(out, "inputs{}", ids(&self.inputs)).unwrap();
        writeln!(out, "outputs{}", ids(&self.outputs)).unwrap();
        for (id, v) in &self.vertices {
            writeln!(out, "v {id} {} {}", v.kind.code(), v.phase).unwrap();
        }
        for (u, v, k) in self.edges() {
            writeln!(out, "e {u} {v} {}", k.code()).unwrap();
        }
        out
    }

    /// Graphviz rendering: Z spiders green, X spiders red, Hadamard edges drawn as yellow boxes' stand-ins.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph zx {\n  node [style=filled, fontsize=10];\n");
        for (id, v) in &self.vertices {
            let (shape, color, label) = match v.kind {
                VertexKind::Boundary => ("plaintext", "white", format!("b{id}")),
                VertexKind::Z => ("circle", "#99dd99", phase_label(v.phase)),
                VertexKind::X => ("circle", "#ff8888", phase_label(v.phase)),
            };
            writeln!(
                out,
                "  v{id} [shape={shape}, fillcolor=\"{color}\", label=\"{label}\"];"
            )
            .unwrap();
        }
        for (u, v, k) in self.edges() {
            match k {
                EdgeKind::Plain => writeln!(out, "  v{u} -- v{v};").unwrap(),
                EdgeKind::Hadamard => writeln!(
                    out,
                    "  v{u} -- v{v} [color=\"#e6c200\", penwidth=2.5, style=dashed];"
                )
                .unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }
}

fn phase_label(p: Phase) -> String {
    if p.is_zero() {
        String::new()
    } else {
        let r = p.to_rational();
        match (*r.numer(), *r.denom()) {
            (1, 1) => "π".to_string(),
            (n, 1) => format!("{n}π"),
            (1, d) => format!("π/{d}"),
            (n, d) => format!("{n}π/{d}"),
        }
    }
}

impl FromStr for ZxDiagram {
    type Err = ZxError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut d = ZxDiagram::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || ZxError::Parse {
                line: lineno + 1,
                message: format!("cannot parse `{line}`"),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let ids = |xs: &[&str]| -> Result<Vec<VertexId>, ZxError> {
                xs.iter().map(|t| t.parse().map_err(|_| bad())).collect()
            };
            match toks[0] {
                "scalar" if toks.len() == 3 => {
                    let re: f64 = toks[1].parse().map_err(|_| bad())?;
                    let im: f64 = toks[2].parse().map_err(|_| bad())?;
                    d.scalar = Complex64::new(re, im);
                }
                "inputs" => inputs = ids(&toks[1..])?,
                "outputs" => outputs = ids(&toks[1..])?,
                "v" if toks.len() == 4 => {
                    let id: VertexId = toks[1].parse().map_err(|_| bad())?;
                    let kind = match toks[2] {
                        "B" => VertexKind::Boundary,
                        "Z" => VertexKind::Z,
                        "X" => VertexKind::X,
                        _ => return Err(bad()),
                    };
                    let phase: Phase = toks[3].parse().map_err(|_| bad())?;
                    if d.vertices.insert(id, Vertex { kind, phase }).is_some() {
                        return Err(bad());
                    }
                    d.adjacency.insert(id, BTreeMap::new());
                    d.next_id = d.next_id.max(id + 1);
                }
                "e" if toks.len() == 4 => {
                    let u: VertexId = toks[1].parse().map_err(|_| bad())?;
                    let v: VertexId = toks[2].parse().map_err(|_| bad())?;
                    let kind = match toks[3] {
                        "N" => EdgeKind::Plain,
                        "H" => EdgeKind::Hadamard,
                        _ => return Err(bad()),
                    };
                    edges.push((lineno + 1, u, v, kind));
                }
                _ => return Err(bad()),
            }
        }
        for (line, u, v, kind) in edges {
            d.add_edge(u, v, kind).map_err(|e| ZxError::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        d.inputs = inputs;
        d.outputs = outputs;
        d.validate()?;
        Ok(d)
    }
}
