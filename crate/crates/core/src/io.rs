//! Graph file formats.
//!
//! Edge-list text: a header line `V n`, then `n` lines `u v` with 0-based
//! vertices (`u = v` is a loop). Labels follow file order. Blank lines and
//! lines starting with `#` are ignored.
//!
//! JSON: `{"vertex_count": V, "edges": [[u, v], ...]}` with an optional
//! `"edge_labels": [...]` parallel to `edges`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<Vec<usize>>,
}

impl From<&Multigraph> for GraphJson {
    fn from(g: &Multigraph) -> Self {
        let labels: Vec<usize> = g.labels().collect();
        let sequential = labels.iter().enumerate().all(|(i, &l)| i == l);
        GraphJson {
            vertex_count: g.vertex_count(),
            edges: g.edges().iter().map(|e| (e.u, e.v)).collect(),
            edge_labels: (!sequential).then_some(labels),
        }
    }
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Multigraph> {
        match j.edge_labels {
            None => Multigraph::new(j.vertex_count, &j.edges),
            Some(labels) => {
                if labels.len() != j.edges.len() {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!(
                            "{} edge labels for {} edges",
                            labels.len(),
                            j.edges.len()
                        ),
                    });
                }
                let edges = labels
                    .into_iter()
                    .zip(j.edges)
                    .map(|(label, (u, v))| Edge { label, u, v })
                    .collect();
                Multigraph::with_edges(j.vertex_count, edges)
            }
        }
    }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_json(text: &str) -> Result<Multigraph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    j.try_into()
}

pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"V n\"".into(),
    })?;
    let (vertex_count, edge_count) = two_numbers(header_line, header)?;

    let mut pairs = Vec::with_capacity(edge_count);
    for (line, text) in lines {
        if pairs.len() == edge_count {
            return Err(Error::Parse {
                line,
                message: format!("more than the {edge_count} declared edges"),
            });
        }
        let (u, v) = two_numbers(line, text)?;
        for endpoint in [u, v] {
            if endpoint >= vertex_count {
                return Err(Error::Parse {
                    line,
                    message: format!("endpoint {endpoint} out of range for {vertex_count} vertices"),
                });
            }
        }
        pairs.push((u, v));
    }
    if pairs.len() != edge_count {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("expected {edge_count} edges, found {}", pairs.len()),
        });
    }
    Multigraph::new(vertex_count, &pairs).map_err(|e| Error::Parse {
        line: header_line,
        message: e.to_string(),
    })
}

fn two_numbers(line: usize, text: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("expected a non-negative integer, found {s:?}"),
        })
    };
    match fields.as_slice() {
        [a, b] => Ok((parse(a)?, parse(b)?)),
        _ => Err(Error::Parse {
            line,
            message: format!("expected two integers, found {text:?}"),
        }),
    }
}

/// Edge-list text for `g`; labels are written in label order.
pub fn to_edge_list(g: &Multigraph) -> String {
    let mut edges = g.edges().to_vec();
    edges.sort_by_key(|e| e.label);
    let mut out = format!("{} {}\n", g.vertex_count(), edges.len());
    for e in edges {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKind;

    #[test]
    fn edge_list_examples() {
        let bridge = parse_graph("2 1\n0 1").unwrap();
        assert_eq!(bridge.classify_edge(0), Ok(EdgeKind::Bridge));
        let lp = parse_graph("1 1\n0 0\n").unwrap();
        assert_eq!(lp.classify_edge(0), Ok(EdgeKind::Loop));
        let c3 = parse_graph("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(c3, Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap());
        let commented = parse_graph("# triangle\n3 3\n\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(commented, c3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_graph("3 2\n0 1\n1 5").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_graph("3 2\n0 1\nx 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_graph("3 2\n0 1").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_graph("3 1\n0 1\n1 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_graph("3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn json_form() {
        let g = parse_graph(r#"{"vertex_count": 2, "edges": [[0, 1], [0, 1]]}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        let labeled =
            parse_graph(r#"{"vertex_count": 2, "edges": [[0, 1], [1, 1]], "edge_labels": [4, 2]}"#)
                .unwrap();
        assert_eq!(labeled.labels().collect::<Vec<_>>(), vec![4, 2]);
        let back = serde_json::to_string(&GraphJson::from(&labeled)).unwrap();
        assert_eq!(parse_graph(&back).unwrap(), labeled);
        assert!(parse_graph(r#"{"vertex_count": 1, "edges": [[0, 1]]}"#).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Multigraph::new(3, &[(0, 1), (1, 1), (2, 0)]).unwrap();
        assert_eq!(to_edge_list(&g), "3 3\n0 1\n1 1\n2 0\n");
        assert_eq!(parse_graph(&to_edge_list(&g)).unwrap(), g);
    }
}
