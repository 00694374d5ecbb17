//! Directed graphs, path enumeration, a partial symbolic calculus for
//! monomials `z^k s_α s_β*`, and construction plus replay-verification of
//! saturation witnesses for the gauge action on a graph C*-algebra.
//!
//! The calculus is deliberately partial: only the prefix reduction rules
//! for `s_α* s_β` and the `δ_{β,μ}` rule for same-length monomials are
//! applied; the Cuntz–Krieger expansion `p_v = Σ s_e s_e*` is never used
//! as a rewrite. Equality decided here is sound but not complete for the
//! graph C*-algebra — exactly enough to replay the witness transcripts.
//!
//! Infinite graphs (the line graph used for the gauge crossed product) are
//! presented through a finite window with a declared radius; every path
//! search that runs off the window fails with a capacity error naming the
//! radius that would have sufficed.

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub range: usize,
}

/// A locally finite directed graph, optionally a finite window into an
/// infinite graph. `truncated` marks vertices whose incident edges may be
/// cut off by the window; they are excluded from sink/source bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    truncated: Vec<bool>,
    window_radius: Option<u32>,
    /// incoming edge ids per vertex, sorted by edge name
    incoming: Vec<Vec<usize>>,
    /// outgoing edge ids per vertex, sorted by edge name
    outgoing: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_parts(
        vertex_names: Vec<String>,
        edges: Vec<(String, usize, usize)>,
        truncated: Vec<usize>,
        window_radius: Option<u32>,
    ) -> Result<Self> {
        let nv = vertex_names.len();
        if nv == 0 {
            return Err(Error::Invalid("a graph needs at least one vertex".into()));
        }
        let mut names = std::collections::HashSet::new();
        for v in &vertex_names {
            if !names.insert(v.clone()) {
                return Err(Error::Invalid(format!("duplicate vertex name {v:?}")));
            }
        }
        let mut enames = std::collections::HashSet::new();
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(name, source, range)| {
                if source >= nv || range >= nv {
                    return Err(Error::Invalid(format!("edge {name:?} references a missing vertex")));
                }
                if !enames.insert(name.clone()) {
                    return Err(Error::Invalid(format!("duplicate edge name {name:?}")));
                }
                Ok(Edge { name, source, range })
            })
            .collect::<Result<_>>()?;
        let mut trunc = vec![false; nv];
        for v in truncated {
            if v >= nv {
                return Err(Error::Invalid("truncated vertex out of range".into()));
            }
            trunc[v] = true;
        }
        if trunc.iter().any(|&t| t) && window_radius.is_none() {
            return Err(Error::Invalid(
                "truncated vertices require a declared window radius".into(),
            ));
        }
        let mut incoming = vec![Vec::new(); nv];
        let mut outgoing = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            incoming[e.range].push(i);
            outgoing[e.source].push(i);
        }
        for list in incoming.iter_mut().chain(outgoing.iter_mut()) {
            list.sort_by(|&a, &b| edges[a].name.cmp(&edges[b].name));
        }
        Ok(Graph { vertex_names, edges, truncated: trunc, window_radius, incoming, outgoing })
    }

    /// One vertex with two loops `e` and `f`.
    pub fn two_loop_vertex() -> Self {
        Graph::from_parts(
            vec!["v".into()],
            vec![("e".into(), 0, 0), ("f".into(), 0, 0)],
            vec![],
            None,
        )
        .expect("static data")
    }

    /// The directed `n`-cycle.
    pub fn cycle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cycle length must be positive".into()));
        }
        let vertex_names = (0..n).map(|i| format!("v{i}")).collect();
        let edges = (0..n).map(|i| (format!("c{i}"), i, (i + 1) % n)).collect();
        Graph::from_parts(vertex_names, edges, vec![], None)
    }

    /// The line graph `… → −1 → 0 → 1 → …` windowed to `[−radius, radius]`;
    /// the two boundary vertices are truncated.
    pub fn line_window(radius: u32) -> Result<Self> {
        if radius == 0 {
            return Err(Error::Invalid("window radius must be positive".into()));
        }
        let r = radius as i64;
        let positions: Vec<i64> = (-r..=r).collect();
        let vertex_names = positions.iter().map(|p| p.to_string()).collect();
        let edges = (0..positions.len() - 1)
            .map(|i| (format!("e[{}]", positions[i]), i, i + 1))
            .collect();
        let truncated = vec![0, positions.len() - 1];
        Graph::from_parts(vertex_names, edges, truncated, Some(radius))
    }

    /// Vertex index of a line-window position label, if present.
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_truncated(&self, v: usize) -> bool {
        self.truncated[v]
    }

    pub fn window_radius(&self) -> Option<u32> {
        self.window_radius
    }

    fn exhausted(&self, remaining: usize) -> Error {
        let available = self.window_radius.unwrap_or(0);
        Error::WindowExhausted { required: available + remaining as u32, available }
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        if p.start >= self.num_vertices() {
            return Err(Error::Invalid("path starts at a missing vertex".into()));
        }
        let mut at = p.start;
        for &e in &p.edges {
            let edge = self
                .edges
                .get(e)
                .ok_or_else(|| Error::Invalid("path uses a missing edge".into()))?;
            if edge.source != at {
                return Err(Error::Invalid("path edges are not composable".into()));
            }
            at = edge.range;
        }
        Ok(())
    }

    pub fn vertex_path(&self, v: usize) -> Result<Path> {
        if v >= self.num_vertices() {
            return Err(Error::Invalid("missing vertex".into()));
        }
        Ok(Path { start: v, edges: vec![] })
    }

    pub fn path_from_edge_names(&self, names: &[&str]) -> Result<Path> {
        if names.is_empty() {
            return Err(Error::Invalid("use vertex_path for length-0 paths".into()));
        }
        let edges: Vec<usize> = names
            .iter()
            .map(|n| {
                self.edge_by_name(n)
                    .ok_or_else(|| Error::Invalid(format!("no edge named {n:?}")))
            })
            .collect::<Result<_>>()?;
        let p = Path { start: self.edges[edges[0]].source, edges };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn path_range(&self, p: &Path) -> usize {
        match p.edges.last() {
            Some(&e) => self.edges[e].range,
            None => p.start,
        }
    }

    pub fn path_source(&self, p: &Path) -> usize {
        p.start
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            return format!("({})", self.vertex_names[p.start]);
        }
        let mut out = String::new();
        for (i, &e) in p.edges.iter().enumerate() {
            if i > 0 {
                out.push('·');
            }
            out.push_str(&self.edges[e].name);
        }
        out
    }

    pub fn format_monomial(&self, m: &PathMonomial) -> String {
        let mut out = String::new();
        if m.degree != 0 {
            let _ = write!(out, "z^{}·", m.degree);
        }
        let _ = write!(out, "s[{}]s[{}]*", self.format_path(&m.alpha), self.format_path(&m.beta));
        out
    }

    /// The lexicographically smallest path of the given length ending at
    /// `end` (a backward walk; exists whenever the graph has no sources).
    pub fn backward_path(&self, end: usize, len: usize) -> Result<Path> {
        let mut at = end;
        let mut rev = Vec::with_capacity(len);
        for step in 0..len {
            if self.truncated[at] {
                return Err(self.exhausted(len - step));
            }
            let &e = self.incoming[at].first().ok_or_else(|| {
                Error::Precondition(format!(
                    "vertex {} is a source; no backward path exists",
                    self.vertex_names[at]
                ))
            })?;
            rev.push(e);
            at = self.edges[e].source;
        }
        rev.reverse();
        Ok(Path { start: at, edges: rev })
    }

    pub fn concat(&self, a: &Path, b: &Path) -> Result<Path> {
        if self.path_range(a) != self.path_source(b) {
            return Err(Error::Invalid("paths are not composable".into()));
        }
        let mut edges = a.edges.clone();
        edges.extend_from_slice(&b.edges);
        Ok(Path { start: a.start, edges })
    }
}

/// A finite path: a start vertex and a composable edge sequence (length 0
/// means the vertex itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    start: usize,
    edges: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }
}

/// `z^degree · s_α s_β*` with `r(α) = r(β)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMonomial {
    pub alpha: Path,
    pub beta: Path,
    pub degree: i64,
}

impl PathMonomial {
    /// `None` encodes the zero term (mismatched ranges collapse to zero).
    pub fn new(g: &Graph, alpha: Path, beta: Path, degree: i64) -> Result<Option<Self>> {
        g.check_path(&alpha)?;
        g.check_path(&beta)?;
        if g.path_range(&alpha) != g.path_range(&beta) {
            return Ok(None);
        }
        Ok(Some(PathMonomial { alpha, beta, degree }))
    }

    pub fn projection(g: &Graph, v: usize) -> Result<Self> {
        let p = g.vertex_path(v)?;
        Ok(PathMonomial { alpha: p.clone(), beta: p, degree: 0 })
    }

    pub fn isometry(g: &Graph, alpha: Path) -> Result<Self> {
        g.check_path(&alpha)?;
        let beta = g.vertex_path(g.path_range(&alpha))?;
        Ok(PathMonomial { alpha, beta, degree: 0 })
    }

    /// `(z^k s_α s_β*)* = z^{−k} s_β s_α*`.
    pub fn adjoint(&self) -> Self {
        PathMonomial {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            degree: -self.degree,
        }
    }
}

/// Per-vertex sink/source report; truncated window vertices are skipped
/// since their missing edges are an artifact of the window.
#[derive(Debug, Clone)]
pub struct GraphReport {
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    pub no_sinks: bool,
    pub no_sources: bool,
}

pub fn validate_graph(g: &Graph) -> GraphReport {
    let mut sinks = Vec::new();
    let mut sources = Vec::new();
    for v in 0..g.num_vertices() {
        if g.is_truncated(v) {
            continue;
        }
        if g.outgoing[v].is_empty() {
            sinks.push(v);
        }
        if g.incoming[v].is_empty() {
            sources.push(v);
        }
    }
    GraphReport {
        no_sinks: sinks.is_empty(),
        no_sources: sources.is_empty(),
        sinks,
        sources,
    }
}

/// Exact enumeration of length-`n` paths, optionally constrained by source
/// and/or range vertex. Walks that would need edges beyond the window fail
/// with a capacity error naming a sufficient radius.
pub fn paths_of_length(
    g: &Graph,
    n: usize,
    source: Option<usize>,
    range: Option<usize>,
) -> Result<Vec<Path>> {
    if n == 0 {
        let vertices: Vec<usize> = match (source, range) {
            (Some(s), Some(r)) if s == r => vec![s],
            (Some(_), Some(_)) => vec![],
            (Some(s), None) => vec![s],
            (None, Some(r)) => vec![r],
            (None, None) => (0..g.num_vertices()).collect(),
        };
        return vertices.into_iter().map(|v| g.vertex_path(v)).collect();
    }
    // walk backward when a range is pinned (the common witness query),
    // forward otherwise
    let mut out = Vec::new();
    if let Some(r) = range {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(r, vec![])];
        while let Some((at, rev)) = stack.pop() {
            if rev.len() == n {
                if source.is_none_or(|s| s == at) {
                    let mut edges = rev.clone();
                    edges.reverse();
                    out.push(Path { start: at, edges });
                }
                continue;
            }
            if g.is_truncated(at) {
                return Err(g.exhausted(n - rev.len()));
            }
            for &e in &g.incoming[at] {
                let mut next = rev.clone();
                next.push(e);
                stack.push((g.edges[e].source, next));
            }
        }
    } else {
        let starts: Vec<usize> = match source {
            Some(s) => vec![s],
            None => (0..g.num_vertices()).collect(),
        };
        let mut stack: Vec<(usize, Vec<usize>, usize)> =
            starts.into_iter().map(|s| (s, vec![], s)).collect();
        while let Some((at, edges, start)) = stack.pop() {
            if edges.len() == n {
                out.push(Path { start, edges });
                continue;
            }
            if g.is_truncated(at) {
                return Err(g.exhausted(n - edges.len()));
            }
            for &e in &g.outgoing[at] {
                let mut next = edges.clone();
                next.push(e);
                stack.push((g.edges[e].range, next, start));
            }
        }
    }
    out.sort_by(|a, b| (a.start, &a.edges).cmp(&(b.start, &b.edges)));
    Ok(out)
}

/// `(z^j s_α s_β*)(z^k s_μ s_ν*)` by the three-way prefix rule on `(β, μ)`;
/// `None` is the zero term. Gauge degrees add.
pub fn reduce_product(
    g: &Graph,
    m1: &PathMonomial,
    m2: &PathMonomial,
) -> Result<Option<PathMonomial>> {
    g.check_path(&m1.alpha)?;
    g.check_path(&m1.beta)?;
    g.check_path(&m2.alpha)?;
    g.check_path(&m2.beta)?;
    let beta = &m1.beta;
    let mu = &m2.alpha;
    let degree = m1.degree + m2.degree;
    if beta.start != mu.start {
        return Ok(None);
    }
    if mu.edges.len() >= beta.edges.len() && mu.edges[..beta.edges.len()] == beta.edges[..] {
        // μ = β·μ′ → s_{αμ′} s_ν*
        let rest = Path {
            start: g.path_range(beta),
            edges: mu.edges[beta.edges.len()..].to_vec(),
        };
        let alpha = g.concat(&m1.alpha, &rest)?;
        PathMonomial::new(g, alpha, m2.beta.clone(), degree)
    } else if beta.edges.len() > mu.edges.len() && beta.edges[..mu.edges.len()] == mu.edges[..] {
        // β = μ·β′ → s_α s_{νβ′}*
        let rest = Path {
            start: g.path_range(mu),
            edges: beta.edges[mu.edges.len()..].to_vec(),
        };
        let new_beta = g.concat(&m2.beta, &rest)?;
        PathMonomial::new(g, m1.alpha.clone(), new_beta, degree)
    } else {
        Ok(None)
    }
}

/// `γ_z(s_α s_β*) = z^{|α|−|β|} s_α s_β*` as formal degree bookkeeping.
pub fn gauge_act(m: &PathMonomial) -> PathMonomial {
    PathMonomial {
        alpha: m.alpha.clone(),
        beta: m.beta.clone(),
        degree: m.degree + m.alpha.len() as i64 - m.beta.len() as i64,
    }
}

/// Size of the matrix block `span{s_α s_β* : α,β ∈ Eⁿ, r(α)=r(β)=v}`:
/// the number of length-`n` paths into `v`.
pub fn fixed_core_blocks(g: &Graph, n: usize, v: usize) -> Result<usize> {
    Ok(paths_of_length(g, n, None, Some(v))?.len())
}

#[derive(Debug, Clone)]
pub enum WitnessCase {
    /// `l ≥ 0`: a backward path μ into `s(α)` with `|μ| = l`
    Backtrack { mu: Path },
    /// `l < 0`: a backward path ν into `r(α)` with `|ν| = |β| + n`
    Extend { nu: Path },
}

/// A saturation witness for `z^n s_α s_β*`: a pair `(a, b)` with
/// `a·γ_z(b) = z^n s_α s_β*`, plus the replayed transcript proving it.
#[derive(Debug, Clone)]
pub struct GaugeWitness {
    pub target: PathMonomial,
    /// the requested degree was negative and the witness is for the adjoint
    pub adjoint_route: bool,
    pub l: i64,
    pub case: WitnessCase,
    pub a: PathMonomial,
    pub b: PathMonomial,
    pub transcript: Vec<String>,
}

/// Produce and verify the witness for `z^n s_α s_β*`. For `n < 0` the
/// witness is generated for `z^{−n} s_β s_α*` and flagged, since
/// `z^{−n} s_α s_β* = (z^n s_β s_α*)*`.
pub fn gauge_witness(g: &Graph, alpha: &Path, beta: &Path, n: i64) -> Result<GaugeWitness> {
    let report = validate_graph(g);
    if !report.no_sinks || !report.no_sources {
        return Err(Error::Precondition(
            "witness generation requires a graph with no sinks and no sources".into(),
        ));
    }
    if n < 0 {
        let mut w = gauge_witness(g, beta, alpha, -n)?;
        w.adjoint_route = true;
        w.transcript.push(format!(
            "adjoint route: z^{}·s[{}]s[{}]* = ({})*",
            n,
            g.format_path(alpha),
            g.format_path(beta),
            g.format_monomial(&w.target),
        ));
        w.target = w.target.adjoint();
        return Ok(w);
    }
    g.check_path(alpha)?;
    g.check_path(beta)?;
    if g.path_range(alpha) != g.path_range(beta) {
        return Err(Error::Precondition("target paths must share their range".into()));
    }
    let target = PathMonomial { alpha: alpha.clone(), beta: beta.clone(), degree: n };
    let l = n - (alpha.len() as i64 - beta.len() as i64);
    let mut transcript = vec![format!(
        "target {}; l = n − (|α| − |β|) = {l}",
        g.format_monomial(&target)
    )];
    let (case, a, b) = if l >= 0 {
        let mu = g.backward_path(g.path_source(alpha), l as usize)?;
        let a = PathMonomial::isometry(g, mu.clone())?.adjoint();
        let mu_alpha = g.concat(&mu, alpha)?;
        let b = PathMonomial::new(g, mu_alpha, beta.clone(), 0)?
            .ok_or_else(|| Error::Consistency("witness ranges mismatched".into()))?;
        transcript.push(format!(
            "case (i): μ = {} with r(μ) = s(α); a = s[{}]*, b = {}",
            g.format_path(&mu),
            g.format_path(&mu),
            g.format_monomial(&b)
        ));
        (WitnessCase::Backtrack { mu }, a, b)
    } else {
        let nu_len = beta.len() as i64 + n;
        debug_assert!(nu_len >= 0, "l < 0 forces |β| + n ≥ |α| > 0");
        let nu = g.backward_path(g.path_range(alpha), nu_len as usize)?;
        let a = PathMonomial::new(g, alpha.clone(), nu.clone(), 0)?
            .ok_or_else(|| Error::Consistency("witness ranges mismatched".into()))?;
        let b = PathMonomial::new(g, nu.clone(), beta.clone(), 0)?
            .ok_or_else(|| Error::Consistency("witness ranges mismatched".into()))?;
        transcript.push(format!(
            "case (ii): ν = {} with |ν| = |β| + n, r(ν) = r(α); a = {}, b = {}",
            g.format_path(&nu),
            g.format_monomial(&a),
            g.format_monomial(&b)
        ));
        (WitnessCase::Extend { nu }, a, b)
    };
    // replay: a·γ_z(b) must reduce to the target
    let twisted = gauge_act(&b);
    transcript.push(format!("γ_z(b) = {}", g.format_monomial(&twisted)));
    let replayed = reduce_product(g, &a, &twisted)?.ok_or_else(|| {
        Error::Consistency("witness replay reduced to zero".into())
    })?;
    transcript.push(format!("a·γ_z(b) = {}", g.format_monomial(&replayed)));
    if replayed != target {
        return Err(Error::Consistency(format!(
            "witness replay produced {} instead of {}",
            g.format_monomial(&replayed),
            g.format_monomial(&target)
        )));
    }
    transcript.push("replay matches target".into());
    Ok(GaugeWitness { target, adjoint_route: false, l, case, a, b, transcript })
}

/// The Cartesian product graph: vertex pairs and edge pairs, with
/// `s(e,f) = (s(e), s(f))`. A vertex is truncated when either factor
/// vertex is.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Result<Graph> {
    let n2 = g2.num_vertices();
    let pair = |v1: usize, v2: usize| v1 * n2 + v2;
    let mut vertex_names = Vec::with_capacity(g1.num_vertices() * n2);
    let mut truncated = Vec::new();
    for (v1, n1) in g1.vertex_names().iter().enumerate() {
        for (v2, name2) in g2.vertex_names().iter().enumerate() {
            vertex_names.push(format!("({n1},{name2})"));
            if g1.is_truncated(v1) || g2.is_truncated(v2) {
                truncated.push(pair(v1, v2));
            }
        }
    }
    let mut edges = Vec::with_capacity(g1.num_edges() * g2.num_edges());
    for e1 in g1.edges() {
        for e2 in g2.edges() {
            edges.push((
                format!("({},{})", e1.name, e2.name),
                pair(e1.source, e2.source),
                pair(e1.range, e2.range),
            ));
        }
    }
    let radius = match (g1.window_radius(), g2.window_radius()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (r, None) | (None, r) => r,
    };
    Graph::from_parts(vertex_names, edges, truncated, radius)
}

/// Directed cycle detection over the (windowed) vertex set.
pub fn has_loop(g: &Graph) -> bool {
    // iterative three-color DFS
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let mut mark = vec![Mark::White; g.num_vertices()];
    for root in 0..g.num_vertices() {
        if mark[root] != Mark::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Gray;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < g.outgoing[v].len() {
                let e = g.outgoing[v][*next];
                *next += 1;
                let w = g.edges[e].range;
                match mark[w] {
                    Mark::Gray => return true,
                    Mark::White => {
                        mark[w] = Mark::Gray;
                        stack.push((w, 0));
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                stack.pop();
            }
        }
    }
    false
}
