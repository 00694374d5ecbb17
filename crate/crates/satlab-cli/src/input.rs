//! JSON problem-file schemas and builders. Complex entries are `[re, im]`
//! pairs; matrices are row-major; groups are named ("Z4", "S3", "Z2xZ2")
//! or given as an explicit multiplication table.

use nalgebra::DMatrix;
use serde::Deserialize;

use satlab_core::algebra::{c, AlgebraElement, CMat, StarAlgebra};
use satlab_core::graph::Graph;
use satlab_core::group::{FiniteGroup, GroupAction};
use satlab_core::strata::FiniteGSpace;

pub type MatrixData = Vec<Vec<[f64; 2]>>;
pub type ElementData = Vec<MatrixData>;

#[derive(Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table(Vec<Vec<usize>>),
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, String> {
    match spec {
        GroupSpec::Table(table) => {
            FiniteGroup::from_table(table.clone()).map_err(|e| format!("group: {e}"))
        }
        GroupSpec::Named(name) => parse_group_name(name),
    }
}

fn parse_group_name(name: &str) -> Result<FiniteGroup, String> {
    if let Some((left, right)) = name.split_once('x') {
        return Ok(parse_group_name(left)?.direct_product(&parse_group_name(right)?));
    }
    let (kind, rest) = name.split_at(1.min(name.len()));
    let n: usize = rest.parse().map_err(|_| format!("group: unknown name {name:?}"))?;
    match kind {
        "Z" => Ok(FiniteGroup::cyclic(n)),
        "S" => FiniteGroup::symmetric(n).map_err(|e| format!("group: {e}")),
        _ => Err(format!("group: unknown name {name:?}")),
    }
}

fn build_matrix(rows: &MatrixData, what: &str) -> Result<CMat, String> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(format!("{what}: ragged matrix rows"));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn build_element(
    algebra: &StarAlgebra,
    data: &ElementData,
    what: &str,
) -> Result<AlgebraElement, String> {
    let blocks: Result<Vec<CMat>, String> =
        data.iter().map(|m| build_matrix(m, what)).collect();
    algebra.from_blocks(blocks?).map_err(|e| format!("{what}: {e}"))
}

#[derive(Deserialize)]
pub struct ActionFile {
    /// block dimensions of the algebra, e.g. [2] for M_2 or [2, 1]
    pub algebra: Vec<usize>,
    pub group: GroupSpec,
    /// inner action: one unitary per group element, identity first
    #[serde(default)]
    pub unitaries: Option<Vec<ElementData>>,
    /// permutation action on functions: perms[g][x] = g·x
    #[serde(default)]
    pub permutations: Option<Vec<Vec<usize>>>,
}

pub fn build_action(file: &ActionFile) -> Result<GroupAction, String> {
    let algebra = StarAlgebra::new(file.algebra.clone()).map_err(|e| format!("algebra: {e}"))?;
    let group = build_group(&file.group)?;
    match (&file.unitaries, &file.permutations) {
        (Some(us), None) => {
            let us: Result<Vec<AlgebraElement>, String> = us
                .iter()
                .enumerate()
                .map(|(g, u)| build_element(&algebra, u, &format!("unitaries[{g}]")))
                .collect();
            GroupAction::inner(algebra, group, us?).map_err(|e| format!("action: {e}"))
        }
        (None, Some(perms)) => GroupAction::permutation(algebra, group, perms.clone())
            .map_err(|e| format!("action: {e}")),
        (Some(_), Some(_)) => Err("action: give unitaries or permutations, not both".into()),
        (None, None) => Err("action: one of unitaries/permutations is required".into()),
    }
}

#[derive(Deserialize)]
pub struct SpaceFile {
    pub group: GroupSpec,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    /// explicit point action: perms[g][x] = g·x
    #[serde(default)]
    pub perms: Option<Vec<Vec<usize>>>,
    /// alternative: a disjoint union of coset spaces G/H
    #[serde(default)]
    pub coset_subgroups: Option<Vec<Vec<usize>>>,
}

pub fn build_space(file: &SpaceFile) -> Result<FiniteGSpace, String> {
    let group = build_group(&file.group)?;
    match (&file.perms, &file.coset_subgroups) {
        (Some(perms), None) => {
            let npts = perms.first().map_or(0, |p| p.len());
            let labels = file
                .labels
                .clone()
                .unwrap_or_else(|| (0..npts).map(|i| format!("p{i}")).collect());
            FiniteGSpace::new(labels, group, perms.clone()).map_err(|e| format!("space: {e}"))
        }
        (None, Some(subs)) => {
            let mut labels = Vec::new();
            let mut perms = vec![Vec::new(); group.order()];
            for (piece, sub) in subs.iter().enumerate() {
                let (reps, part) = group.coset_action(sub);
                let offset = labels.len();
                for r in &reps {
                    labels.push(format!("p{piece}.g{r}H"));
                }
                for g in group.elements() {
                    perms[g].extend(part[g].iter().map(|&x| offset + x));
                }
            }
            FiniteGSpace::new(labels, group, perms).map_err(|e| format!("space: {e}"))
        }
        (Some(_), Some(_)) => Err("space: give perms or coset_subgroups, not both".into()),
        (None, None) => Err("space: one of perms/coset_subgroups is required".into()),
    }
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum HopfVariant {
    /// the group algebra in its regular representation
    Group,
    /// functions on the group with pointwise product
    Dual,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum HopfFile {
    /// a group action: run the smash-product saturation criterion
    Action(ActionFile),
    /// a named Hopf algebra: run the axiom battery
    Axioms { group: GroupSpec, variant: HopfVariant },
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum GraphFile {
    Explicit {
        vertices: Vec<String>,
        /// (edge name, source vertex name, range vertex name)
        edges: Vec<(String, String, String)>,
    },
    /// "two_loop_vertex", "cycle:n", or "graph_Z:radius"
    Named { graph: String },
}

pub fn build_graph(file: &GraphFile) -> Result<Graph, String> {
    match file {
        GraphFile::Named { graph } => build_named_graph(graph),
        GraphFile::Explicit { vertices, edges } => {
            let find = |name: &str| {
                vertices
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| format!("edges: unknown vertex {name:?}"))
            };
            let edges: Result<Vec<(String, usize, usize)>, String> = edges
                .iter()
                .map(|(e, s, r)| Ok((e.clone(), find(s)?, find(r)?)))
                .collect();
            Graph::from_parts(vertices.clone(), edges?, vec![], None)
                .map_err(|e| format!("graph: {e}"))
        }
    }
}

pub fn build_named_graph(name: &str) -> Result<Graph, String> {
    if name == "two_loop_vertex" {
        return Ok(Graph::two_loop_vertex());
    }
    if let Some(n) = name.strip_prefix("cycle:") {
        let n: usize = n.parse().map_err(|_| format!("graph: bad length in {name:?}"))?;
        return Graph::cycle(n).map_err(|e| format!("graph: {e}"));
    }
    if let Some(r) = name.strip_prefix("graph_Z:") {
        let r: u32 = r.parse().map_err(|_| format!("graph: bad radius in {name:?}"))?;
        return Graph::line_window(r).map_err(|e| format!("graph: {e}"));
    }
    Err(format!("graph: unknown name {name:?}"))
}
