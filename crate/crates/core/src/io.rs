//! Plain-text files: instances and assignments as TOML, jump traces one per
//! line, and Graphviz DOT export.
//!
//! An instance file looks like
//!
//! ```toml
//! [graph]
//! family = "cylinder"   # optional, with params
//! params = [3]
//! node_count = 6
//! edges = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 4], [2, 5], [3, 4], [3, 5], [4, 5]]
//!
//! [graph.roles]         # optional
//!
//! [profile]
//! counts = [2, 1, 1]
//! ```
//!
//! and an assignment file is a single `occupancy = [0, 0, "E", 1, 2, "E"]`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Assignment, Improvement, Instance, Jump, TypeProfile};
use crate::graph::{FamilyTag, Graph, GraphFamily, RoleMap};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    graph: GraphDoc,
    profile: ProfileDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<u64>,
    node_count: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "RoleMap::is_empty")]
    roles: RoleMap,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    counts: Vec<usize>,
}

/// An instance read from disk, with the family it was generated from if recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub family: Option<GraphFamily>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn instance_to_string(instance: &Instance, family: Option<&GraphFamily>) -> String {
    let g = instance.graph();
    let doc = InstanceDoc {
        graph: GraphDoc {
            family: family.map(|f| f.tag.to_string()),
            params: family.map(|f| f.params.clone()).unwrap_or_default(),
            node_count: g.node_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            roles: instance.roles().clone(),
        },
        profile: ProfileDoc { counts: instance.profile().counts().to_vec() },
    };
    toml::to_string(&doc).expect("instance documents always serialize")
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let doc: InstanceDoc = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
    let edges: Vec<_> = doc.graph.edges.iter().map(|&[u, v]| (u, v)).collect();
    let graph = Graph::from_edges(doc.graph.node_count, &edges).map_err(|e| bad(format!("[graph]: {e}")))?;
    let profile = TypeProfile::new(doc.profile.counts).map_err(|e| bad(format!("[profile]: {e}")))?;
    let instance = Instance::with_roles(graph, profile, doc.graph.roles).map_err(|e| bad(e.to_string()))?;
    let family = match doc.graph.family {
        Some(name) => {
            let tag: FamilyTag = name.parse().map_err(|e: Error| bad(format!("[graph] family: {e}")))?;
            Some(GraphFamily::new(tag, doc.graph.params))
        }
        None => None,
    };
    Ok(InstanceFile { instance, family })
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn write_instance(path: &Path, instance: &Instance, family: Option<&GraphFamily>) -> Result<()> {
    write(path, &instance_to_string(instance, family))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    occupancy: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Cell {
    Agent(u8),
    Empty(String),
}

pub fn assignment_to_string(a: &Assignment) -> String {
    let occupancy = a
        .occupancy()
        .into_iter()
        .map(|c| c.map_or_else(|| Cell::Empty("E".into()), Cell::Agent))
        .collect();
    toml::to_string(&AssignmentDoc { occupancy }).expect("assignment documents always serialize")
}

/// Parses and validates an assignment against `instance`.
pub fn parse_assignment(text: &str, instance: &Instance) -> Result<Assignment> {
    let doc: AssignmentDoc = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
    let mut occupancy = Vec::with_capacity(doc.occupancy.len());
    for (v, cell) in doc.occupancy.into_iter().enumerate() {
        occupancy.push(match cell {
            Cell::Agent(t) => Some(t),
            Cell::Empty(s) if s == "E" => None,
            Cell::Empty(s) => return Err(bad(format!("occupancy[{v}]: expected a type id or \"E\", got {s:?}"))),
        });
    }
    Assignment::new(instance, &occupancy).map_err(|e| bad(format!("occupancy: {e}")))
}

pub fn read_assignment(path: &Path, instance: &Instance) -> Result<Assignment> {
    let text = read(path)?;
    parse_assignment(&text, instance).map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn write_assignment(path: &Path, a: &Assignment) -> Result<()> {
    write(path, &assignment_to_string(a))
}

/// One jump per line: `type from->to u_old->u_new`.
pub fn trace_to_string(trace: &[Improvement]) -> String {
    trace.iter().map(|s| format!("{s}\n")).collect()
}

pub fn parse_trace(text: &str) -> Result<Vec<Improvement>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = || bad(format!("trace line {}: expected `type from->to old->new`, got {line:?}", i + 1));
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [ty, nodes, utils] = parts[..] else {
            return Err(err());
        };
        let pair = |s: &str| -> Option<(usize, usize)> {
            let (a, b) = s.split_once("->")?;
            Some((a.parse().ok()?, b.parse().ok()?))
        };
        let ty: u8 = ty.parse().map_err(|_| err())?;
        let (from, to) = pair(nodes).ok_or_else(err)?;
        let (old_utility, new_utility) = pair(utils).ok_or_else(err)?;
        out.push(Improvement { jump: Jump { from, to, ty }, old_utility, new_utility });
    }
    Ok(out)
}

const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45", "#fabed4", "#469990",
    "#dcbeff", "#9a6324",
];

/// Undirected DOT graph; with an assignment, nodes are filled by type and
/// empty nodes are dashed.
pub fn to_dot(instance: &Instance, a: Option<&Assignment>) -> String {
    let g = instance.graph();
    let mut s = String::from("graph G {\n");
    for v in 0..g.node_count() {
        match a.map(|a| a.get(v)) {
            Some(Some(t)) => {
                let color = PALETTE[t as usize % PALETTE.len()];
                let _ = writeln!(s, "  {v} [label=\"{v}:{t}\", style=filled, fillcolor=\"{color}\"];");
            }
            Some(None) => {
                let _ = writeln!(s, "  {v} [label=\"{v}:E\", style=dashed];");
            }
            None => {
                let _ = writeln!(s, "  {v} [label=\"{v}\"];");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| bad(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique_lines, make_cylinder};

    #[test]
    fn instance_round_trip() {
        let (g, roles) = make_clique_lines(&[2, 2, 1]).unwrap();
        let inst = Instance::with_roles(g, TypeProfile::new(vec![2, 2, 1]).unwrap(), roles).unwrap();
        let fam = GraphFamily::new(FamilyTag::CliqueLines, vec![2, 2, 1]);
        let text = instance_to_string(&inst, Some(&fam));
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.instance, inst);
        assert_eq!(back.family, Some(fam.clone()));
        assert_eq!(instance_to_string(&back.instance, Some(&fam)), text);
    }

    #[test]
    fn assignment_round_trip() {
        let inst = Instance::new(make_cylinder(3).unwrap(), TypeProfile::new(vec![2, 1, 1]).unwrap()).unwrap();
        let a = Assignment::new(&inst, &[Some(0), Some(0), None, Some(1), Some(2), None]).unwrap();
        let text = assignment_to_string(&a);
        assert_eq!(text.trim(), "occupancy = [0, 0, \"E\", 1, 2, \"E\"]");
        assert_eq!(parse_assignment(&text, &inst).unwrap(), a);
        assert!(parse_assignment("occupancy = [0, 0, \"X\", 1, 2, \"E\"]", &inst).is_err());
        assert!(parse_assignment("occupancy = [0, 0, 0, 1, 2, \"E\"]", &inst).is_err());
    }

    #[test]
    fn malformed_instances_report_the_field() {
        let err = parse_instance("[graph]\nnode_count = 3\nedges = [[0, 5]]\n[profile]\ncounts = [1, 1]\n").unwrap_err();
        assert!(err.to_string().contains("[graph]"), "{err}");
        let err = parse_instance("[graph]\nnode_count = 3\n").unwrap_err();
        assert!(err.to_string().contains("edges") || err.to_string().contains("profile"), "{err}");
    }

    #[test]
    fn trace_round_trip() {
        let t = vec![Improvement { jump: Jump { from: 3, to: 7, ty: 1 }, old_utility: 0, new_utility: 2 }];
        let text = trace_to_string(&t);
        assert_eq!(text, "1 3->7 0->2\n");
        assert_eq!(parse_trace(&text).unwrap(), t);
        assert!(parse_trace("1 3-7 0->2").is_err());
    }

    #[test]
    fn dot_marks_empties() {
        let inst = Instance::new(make_cylinder(3).unwrap(), TypeProfile::new(vec![1, 1]).unwrap()).unwrap();
        let a = Assignment::new(&inst, &[Some(0), Some(1), None, None, None, None]).unwrap();
        let dot = to_dot(&inst, Some(&a));
        assert!(dot.contains("2 [label=\"2:E\", style=dashed]"));
        assert!(dot.contains("0 -- 1;"));
        assert_eq!(dot.matches("--").count(), 9);
    }
}
