//! CSV import/export.
//!
//! Nodes: `node_id,labels,prop:NAME:TYPE,...` with `;`-separated labels.
//! Edges: `src,dst,label,prop:NAME:TYPE,...` where `src`/`dst` are node keys.
//! TYPE is one of `int`, `float`, `str`, `bool`. An empty cell means the
//! property is absent.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use thiserror::Error;

use super::{GraphError, LabelSet, NodeId, Properties, PropertyGraph, PropertyValue, KEY_PROPERTY};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] ::csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: edge references unknown node `{key}`")]
    UnknownNode { line: u64, key: String },
    #[error("line {line}: {source}")]
    Graph { line: u64, source: GraphError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PropType {
    Int,
    Float,
    Str,
    Bool,
}

impl PropType {
    fn parse(s: &str) -> Option<PropType> {
        Some(match s {
            "int" => PropType::Int,
            "float" => PropType::Float,
            "str" => PropType::Str,
            "bool" => PropType::Bool,
            _ => return None,
        })
    }

    fn of(v: &PropertyValue) -> PropType {
        match v {
            PropertyValue::Int(_) => PropType::Int,
            PropertyValue::Float(_) => PropType::Float,
            PropertyValue::Str(_) => PropType::Str,
            PropertyValue::Bool(_) => PropType::Bool,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PropType::Int => "int",
            PropType::Float => "float",
            PropType::Str => "str",
            PropType::Bool => "bool",
        }
    }

    fn value(self, raw: &str) -> Result<PropertyValue, String> {
        match self {
            PropType::Int => raw
                .parse()
                .map(PropertyValue::Int)
                .map_err(|e| format!("bad int `{raw}`: {e}")),
            PropType::Float => raw
                .parse()
                .map(PropertyValue::Float)
                .map_err(|e| format!("bad float `{raw}`: {e}")),
            PropType::Str => Ok(PropertyValue::Str(raw.to_owned())),
            PropType::Bool => match raw {
                "true" => Ok(PropertyValue::Bool(true)),
                "false" => Ok(PropertyValue::Bool(false)),
                _ => Err(format!("bad bool `{raw}`")),
            },
        }
    }
}

#[derive(Clone, Debug)]
struct PropColumn {
    name: String,
    ty: PropType,
}

fn prop_columns(header: &::csv::StringRecord, fixed: &[&str]) -> Result<Vec<PropColumn>, CsvError> {
    for (i, want) in fixed.iter().enumerate() {
        if header.get(i) != Some(*want) {
            return Err(CsvError::Parse {
                line: 1,
                message: format!("expected column {} to be `{want}`", i + 1),
            });
        }
    }
    header
        .iter()
        .skip(fixed.len())
        .map(|col| {
            let mut parts = col.splitn(3, ':');
            match (parts.next(), parts.next(), parts.next().and_then(PropType::parse)) {
                (Some("prop"), Some(name), Some(ty)) if !name.is_empty() => Ok(PropColumn {
                    name: name.to_owned(),
                    ty,
                }),
                _ => Err(CsvError::Parse {
                    line: 1,
                    message: format!("malformed property column `{col}`"),
                }),
            }
        })
        .collect()
}

fn line_of(record: &::csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn read_props(record: &::csv::StringRecord, start: usize, columns: &[PropColumn]) -> Result<Properties, CsvError> {
    let mut props = Properties::new();
    for (i, col) in columns.iter().enumerate() {
        let raw = record.get(start + i).unwrap_or("");
        if raw.is_empty() {
            continue;
        }
        let value = col.ty.value(raw).map_err(|message| CsvError::Parse {
            line: line_of(record),
            message: format!("column `{}`: {message}", col.name),
        })?;
        props.insert(col.name.clone(), value);
    }
    Ok(props)
}

/// Integer keys are stored as ints, anything else as strings.
fn parse_key(raw: &str) -> PropertyValue {
    raw.parse::<i64>()
        .map(PropertyValue::Int)
        .unwrap_or_else(|_| PropertyValue::Str(raw.to_owned()))
}

fn reader<R: Read>(input: R) -> ::csv::Reader<R> {
    ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input)
}

pub fn read_nodes<R: Read>(graph: &mut PropertyGraph, input: R) -> Result<(), CsvError> {
    let mut rdr = reader(input);
    let columns = prop_columns(rdr.headers()?, &["node_id", "labels"])?;
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        let key = record.get(0).unwrap_or("");
        if key.is_empty() {
            return Err(CsvError::Parse {
                line,
                message: "empty node_id".into(),
            });
        }
        let labels: LabelSet = record
            .get(1)
            .unwrap_or("")
            .split(';')
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect();
        let mut props = read_props(&record, 2, &columns)?;
        props.insert(KEY_PROPERTY.to_owned(), parse_key(key));
        graph
            .add_node(labels, props)
            .map_err(|source| CsvError::Graph { line, source })?;
    }
    Ok(())
}

pub fn read_edges<R: Read>(graph: &mut PropertyGraph, input: R) -> Result<(), CsvError> {
    let mut rdr = reader(input);
    let columns = prop_columns(rdr.headers()?, &["src", "dst", "label"])?;
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        let resolve = |raw: &str| {
            graph.node_by_key(&parse_key(raw)).ok_or_else(|| CsvError::UnknownNode {
                line,
                key: raw.to_owned(),
            })
        };
        let src = resolve(record.get(0).unwrap_or(""))?;
        let dst = resolve(record.get(1).unwrap_or(""))?;
        let label = record.get(2).unwrap_or("").to_owned();
        if label.is_empty() {
            return Err(CsvError::Parse {
                line,
                message: "empty edge label".into(),
            });
        }
        let props = read_props(&record, 3, &columns)?;
        graph
            .add_edge(src, dst, &label, props)
            .map_err(|source| CsvError::Graph { line, source })?;
    }
    Ok(())
}

fn collect_columns<'a>(props: impl Iterator<Item = &'a Properties>) -> Vec<PropColumn> {
    let set: BTreeSet<(String, PropType)> = props
        .flat_map(|p| p.iter())
        .filter(|(k, _)| k.as_str() != KEY_PROPERTY)
        .map(|(k, v)| (k.clone(), PropType::of(v)))
        .collect();
    set.into_iter().map(|(name, ty)| PropColumn { name, ty }).collect()
}

fn write_props(row: &mut Vec<String>, props: &Properties, columns: &[PropColumn]) {
    for col in columns {
        row.push(match props.get(&col.name) {
            Some(v) if PropType::of(v) == col.ty => v.to_string(),
            _ => String::new(),
        });
    }
}

fn header(fixed: &[&str], columns: &[PropColumn]) -> Vec<String> {
    fixed
        .iter()
        .map(|s| s.to_string())
        .chain(columns.iter().map(|c| format!("prop:{}:{}", c.name, c.ty.name())))
        .collect()
}

fn key_string(graph: &PropertyGraph, id: NodeId) -> String {
    graph.external_key(id).to_string()
}

pub fn write_nodes<W: Write>(graph: &PropertyGraph, out: W) -> Result<(), CsvError> {
    let columns = collect_columns(graph.nodes().map(|n| &n.properties));
    let mut wtr = ::csv::Writer::from_writer(out);
    wtr.write_record(header(&["node_id", "labels"], &columns))?;
    for node in graph.nodes() {
        let mut row = vec![
            key_string(graph, node.id),
            node.labels.iter().cloned().collect::<Vec<_>>().join(";"),
        ];
        write_props(&mut row, &node.properties, &columns);
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_edges<W: Write>(graph: &PropertyGraph, out: W) -> Result<(), CsvError> {
    let columns = collect_columns(graph.edges().map(|e| &e.properties));
    let mut wtr = ::csv::Writer::from_writer(out);
    wtr.write_record(header(&["src", "dst", "label"], &columns))?;
    for edge in graph.edges() {
        let mut row = vec![
            key_string(graph, edge.src),
            key_string(graph, edge.dst),
            edge.label.clone(),
        ];
        write_props(&mut row, &edge.properties, &columns);
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{load_edge_list, Direction};
    use super::*;

    const NODES: &str = "node_id,labels,prop:name:str\n\
        1,TagClass,Thing\n\
        304,TagClass,Place\n\
        240,TagClass,Agent\n\
        302,TagClass,Organisation\n\
        212,TagClass,Person\n";
    const EDGES: &str = "src,dst,label\n\
        304,1,isSubclassOf\n\
        240,1,isSubclassOf\n\
        302,240,isSubclassOf\n\
        212,240,isSubclassOf\n";

    #[test]
    fn loads_tagclass_fixture() {
        let g = load_edge_list(NODES.as_bytes(), EDGES.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        let thing = g.node_by_key(&PropertyValue::Int(1)).unwrap();
        let names: Vec<_> = g
            .neighbors(thing, "isSubclassOf", Direction::In)
            .unwrap()
            .into_iter()
            .map(|n| g.node(n).unwrap().properties["name"].to_string())
            .collect();
        assert_eq!(names, ["Place", "Agent"]);
    }

    #[test]
    fn empty_edges_file_gives_isolated_nodes() {
        let g = load_edge_list(NODES.as_bytes(), "src,dst,label\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dangling_edge_reports_line() {
        let edges = "src,dst,label\n304,1,isSubclassOf\n999,1,isSubclassOf\n";
        match load_edge_list(NODES.as_bytes(), edges.as_bytes()) {
            Err(CsvError::UnknownNode { line, key }) => {
                assert_eq!(line, 3);
                assert_eq!(key, "999");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_typed_value_reports_line() {
        let nodes = "node_id,labels,prop:age:int\n1,A,12\n2,A,twelve\n";
        match load_edge_list(nodes.as_bytes(), "src,dst,label\n".as_bytes()) {
            Err(CsvError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_header_rejected() {
        let nodes = "id,labels\n1,A\n";
        assert!(matches!(
            load_edge_list(nodes.as_bytes(), "src,dst,label\n".as_bytes()),
            Err(CsvError::Parse { line: 1, .. })
        ));
        let nodes = "node_id,labels,prop:x:decimal\n";
        assert!(matches!(
            load_edge_list(nodes.as_bytes(), "src,dst,label\n".as_bytes()),
            Err(CsvError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn quoted_cells_and_all_types() {
        let nodes = "node_id,labels,prop:a:int,prop:b:float,prop:c:str,prop:d:bool\n\
            x,A;B,-3,2.5,\"hello, world\",true\n\
            y,,,,,\n";
        let edges = "src,dst,label,prop:w:float\nx,y,L,0.125\n";
        let g = load_edge_list(nodes.as_bytes(), edges.as_bytes()).unwrap();
        let x = g.node_by_key(&PropertyValue::from("x")).unwrap();
        let node = g.node(x).unwrap();
        assert_eq!(node.labels.len(), 2);
        assert_eq!(node.properties["c"], PropertyValue::from("hello, world"));
        assert_eq!(node.properties["d"], PropertyValue::Bool(true));
        let y = g.node_by_key(&PropertyValue::from("y")).unwrap();
        assert_eq!(g.node(y).unwrap().properties.len(), 1);
        assert_eq!(g.edges().next().unwrap().properties["w"], PropertyValue::Float(0.125));
    }
}
