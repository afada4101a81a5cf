//! Standard graph families and the built-in test catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Multigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cycle,
    Banana,
    TreePath,
    Bouquet,
    Complete,
    Wheel,
    Dumbbell,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Cycle,
        Family::Banana,
        Family::TreePath,
        Family::Bouquet,
        Family::Complete,
        Family::Wheel,
        Family::Dumbbell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Banana => "banana",
            Family::TreePath => "tree_path",
            Family::Bouquet => "bouquet",
            Family::Complete => "complete",
            Family::Wheel => "wheel",
            Family::Dumbbell => "dumbbell",
        }
    }

    fn min_size(self) -> usize {
        match self {
            Family::Cycle | Family::Complete | Family::Wheel => 3,
            _ => 1,
        }
    }
}

/// A family name with its size parameter, written `name:m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub size: usize,
}

impl FamilySpec {
    pub fn new(family: Family, size: usize) -> Self {
        FamilySpec { family, size }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.name(), self.size)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, size) = s
            .split_once(':')
            .ok_or_else(|| Error::Family(format!("expected name:m, got {s:?}")))?;
        let family = Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::Family(format!("unknown family {name:?} (one of {})", names.join(", ")))
            })?;
        let size = size
            .parse()
            .map_err(|_| Error::Family(format!("bad size {size:?}")))?;
        Ok(FamilySpec { family, size })
    }
}

/// Edges of the `m`-cycle on vertices `0..m`; `m = 1` is a loop and
/// `m = 2` a double edge.
fn cycle_edges(m: usize) -> Vec<(usize, usize)> {
    (0..m).map(|i| (i, (i + 1) % m)).collect()
}

pub fn generate_family(spec: FamilySpec) -> Result<Multigraph> {
    let m = spec.size;
    if m < spec.family.min_size() {
        return Err(Error::Family(format!(
            "{} needs m >= {}, got {m}",
            spec.family.name(),
            spec.family.min_size()
        )));
    }
    match spec.family {
        Family::Cycle => Multigraph::new(m, &cycle_edges(m)),
        Family::Banana => Multigraph::new(2, &vec![(0, 1); m]),
        Family::TreePath => {
            let edges: Vec<_> = (0..m).map(|i| (i, i + 1)).collect();
            Multigraph::new(m + 1, &edges)
        }
        Family::Bouquet => Multigraph::new(1, &vec![(0, 0); m]),
        Family::Complete => {
            let mut edges = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    edges.push((i, j));
                }
            }
            Multigraph::new(m, &edges)
        }
        Family::Wheel => {
            // rim 0..m, hub m; rim edges first, then spokes
            let mut edges = cycle_edges(m);
            edges.extend((0..m).map(|i| (m, i)));
            Multigraph::new(m + 1, &edges)
        }
        Family::Dumbbell => {
            let mut edges = cycle_edges(m);
            edges.push((0, 0));
            Multigraph::new(m, &edges)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub graph: Multigraph,
}

fn entry(id: &str, v: usize, edges: &[(usize, usize)]) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        graph: Multigraph::new(v, edges).expect("catalog graph is valid"),
    }
}

fn fam(family: Family, m: usize) -> CatalogEntry {
    let spec = FamilySpec::new(family, m);
    CatalogEntry {
        id: spec.to_string(),
        graph: generate_family(spec).expect("catalog family is valid"),
    }
}

fn union(id: &str, a: &CatalogEntry, b: &CatalogEntry) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        graph: a.graph.disjoint_union(&b.graph).expect("union fits"),
    }
}

/// Fixed catalog of small multigraphs, all with at most 8 edges: loops,
/// multi-edges, bridges, forests, cycles C3..C6, bananas B2..B5, K4, W4,
/// dumbbells and disjoint unions.
pub fn catalog() -> Vec<CatalogEntry> {
    use Family::*;
    vec![
        entry("point", 1, &[]),
        entry("three_points", 3, &[]),
        fam(TreePath, 1),
        fam(TreePath, 2),
        fam(TreePath, 3),
        entry("star3", 4, &[(0, 1), (0, 2), (0, 3)]),
        entry("two_bridges", 4, &[(0, 1), (2, 3)]),
        entry("bridge_and_point", 3, &[(0, 1)]),
        fam(Bouquet, 1),
        fam(Bouquet, 2),
        fam(Bouquet, 3),
        fam(Bouquet, 4),
        entry("two_loop_vertices", 2, &[(0, 0), (1, 1)]),
        fam(Cycle, 3),
        fam(Cycle, 4),
        fam(Cycle, 5),
        fam(Cycle, 6),
        fam(Banana, 2),
        fam(Banana, 3),
        fam(Banana, 4),
        fam(Banana, 5),
        fam(Complete, 4),
        fam(Wheel, 4),
        fam(Dumbbell, 3),
        fam(Dumbbell, 4),
        entry("loop_bridge_loop", 2, &[(0, 0), (0, 1), (1, 1)]),
        entry("bridge_with_loop", 2, &[(0, 1), (1, 1)]),
        entry("tadpole3", 4, &[(0, 1), (1, 2), (2, 0), (2, 3)]),
        entry("banana2_with_loop", 2, &[(0, 1), (0, 1), (1, 1)]),
        entry("banana3_pendant", 3, &[(0, 1), (0, 1), (0, 1), (1, 2)]),
        entry("doubled_side_triangle", 3, &[(0, 1), (0, 1), (1, 2), (2, 0)]),
        entry("theta_k4_minus_edge", 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        entry("bowtie", 5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]),
        entry(
            "triangles_bridged",
            6,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)],
        ),
        entry("k23", 5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
        entry(
            "doubled_triangle",
            3,
            &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)],
        ),
        entry(
            "cycle6_chord",
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)],
        ),
        entry("cycle4_two_loops", 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 0), (2, 2)]),
        union("cycle3+bouquet1", &fam(Cycle, 3), &fam(Bouquet, 1)),
        union("banana3+banana2", &fam(Banana, 3), &fam(Banana, 2)),
        union("cycle3+cycle3", &fam(Cycle, 3), &fam(Cycle, 3)),
        union("tree_path:2+bouquet:2", &fam(TreePath, 2), &fam(Bouquet, 2)),
    ]
}
