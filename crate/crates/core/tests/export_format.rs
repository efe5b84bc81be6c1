//! Format-level checks for the exporters: DOT output against a small
//! vendored DOT grammar, SVG output against an XML well-formedness parser.
//! Both validators live in this file so the checks need no external tools.

use mapper_forge_core::clustering::ClustererSpec;
use mapper_forge_core::data::Metric;
use mapper_forge_core::export::{export_dot, export_svg};
use mapper_forge_core::nerve::{MapperEdge, MapperGraph, MapperVertex};
use mapper_forge_core::pipeline::{
    run_pipeline, CoverSpec, DatasetSpec, LensSource, PipelineConfig,
};

// ---------------------------------------------------------------------------
// a minimal DOT grammar: graph ::= ('graph'|'digraph') [ID] '{' stmt* '}'
// stmt ::= ID attrs? ';'? | ID (edgeop ID)+ attrs? ';'?
// attrs ::= '[' (ID '=' ID ','?)* ']'

#[derive(Debug, PartialEq, Clone)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    Undirected,
    Directed,
}

fn dot_tokens(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '{' => {
                out.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                out.push(Tok::RBrace);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1;
            }
            '-' => {
                match bytes.get(i + 1) {
                    Some('-') => out.push(Tok::Undirected),
                    Some('>') => out.push(Tok::Directed),
                    other => return Err(format!("stray '-' before {other:?}")),
                }
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match bytes.get(i) {
                        None => return Err("unterminated quoted id".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            s.push(*bytes.get(i + 1).ok_or("dangling escape")?);
                            i += 2;
                        }
                        Some(c) => {
                            s.push(*c);
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while i < bytes.len()
                    && (bytes[i].is_alphanumeric() || bytes[i] == '_' || bytes[i] == '.')
                {
                    s.push(bytes[i]);
                    i += 1;
                }
                out.push(Tok::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct DotSummary {
    directed: bool,
    node_stmts: usize,
    edge_stmts: usize,
}

fn validate_dot(src: &str) -> Result<DotSummary, String> {
    let toks = dot_tokens(src)?;
    let mut pos = 0;
    let next = |pos: &mut usize| -> Option<Tok> {
        let t = toks.get(*pos).cloned();
        *pos += 1;
        t
    };

    let directed = match next(&mut pos) {
        Some(Tok::Id(kw)) if kw == "graph" => false,
        Some(Tok::Id(kw)) if kw == "digraph" => true,
        other => return Err(format!("expected graph/digraph, got {other:?}")),
    };
    // optional name
    if let Some(Tok::Id(_)) = toks.get(pos) {
        pos += 1;
    }
    if next(&mut pos) != Some(Tok::LBrace) {
        return Err("expected '{'".into());
    }

    let mut node_stmts = 0;
    let mut edge_stmts = 0;
    loop {
        match next(&mut pos) {
            Some(Tok::RBrace) => break,
            Some(Tok::Id(_)) => {
                // edge continuation?
                let mut is_edge = false;
                while matches!(toks.get(pos), Some(Tok::Undirected) | Some(Tok::Directed)) {
                    let op_directed = toks[pos] == Tok::Directed;
                    if op_directed != directed {
                        return Err("edge operator does not match graph kind".into());
                    }
                    pos += 1;
                    match next(&mut pos) {
                        Some(Tok::Id(_)) => is_edge = true,
                        other => return Err(format!("expected id after edge op, got {other:?}")),
                    }
                }
                // optional attribute list
                if toks.get(pos) == Some(&Tok::LBracket) {
                    pos += 1;
                    loop {
                        match next(&mut pos) {
                            Some(Tok::RBracket) => break,
                            Some(Tok::Id(_)) => {
                                if next(&mut pos) != Some(Tok::Eq) {
                                    return Err("expected '=' in attribute".into());
                                }
                                match next(&mut pos) {
                                    Some(Tok::Id(_)) => {}
                                    other => {
                                        return Err(format!(
                                            "expected attribute value, got {other:?}"
                                        ))
                                    }
                                }
                                if toks.get(pos) == Some(&Tok::Comma) {
                                    pos += 1;
                                }
                            }
                            other => return Err(format!("bad attribute list at {other:?}")),
                        }
                    }
                }
                if toks.get(pos) == Some(&Tok::Semi) {
                    pos += 1;
                }
                if is_edge {
                    edge_stmts += 1;
                } else {
                    node_stmts += 1;
                }
            }
            other => return Err(format!("unexpected token {other:?}")),
        }
    }
    if pos != toks.len() {
        return Err("trailing tokens after '}'".into());
    }
    Ok(DotSummary {
        directed,
        node_stmts,
        edge_stmts,
    })
}

// ---------------------------------------------------------------------------
// XML well-formedness: balanced tags, quoted attributes, sane text content

fn validate_xml(src: &str) -> Result<usize, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut stack: Vec<String> = Vec::new();
    let mut elements = 0;
    let mut seen_root = false;

    fn name(chars: &[char], i: &mut usize) -> Result<String, String> {
        let start = *i;
        while *i < chars.len()
            && (chars[*i].is_alphanumeric() || matches!(chars[*i], ':' | '-' | '_' | '.'))
        {
            *i += 1;
        }
        if *i == start {
            return Err(format!("expected name at offset {start}"));
        }
        Ok(chars[start..*i].iter().collect())
    }

    while i < chars.len() {
        if chars[i] == '<' {
            if chars[i..].iter().collect::<String>().starts_with("<?") {
                while i < chars.len() && chars[i] != '>' {
                    i += 1;
                }
                i += 1;
                continue;
            }
            if chars[i..].iter().collect::<String>().starts_with("<!--") {
                let rest: String = chars[i..].iter().collect();
                let end = rest.find("-->").ok_or("unterminated comment")?;
                i += end + 3;
                continue;
            }
            i += 1;
            if chars.get(i) == Some(&'/') {
                i += 1;
                let tag = name(&chars, &mut i)?;
                while i < chars.len() && chars[i].is_whitespace() {
                    i += 1;
                }
                if chars.get(i) != Some(&'>') {
                    return Err(format!("malformed close tag </{tag}"));
                }
                i += 1;
                match stack.pop() {
                    Some(open) if open == tag => {}
                    Some(open) => return Err(format!("mismatched </{tag}> closing <{open}>")),
                    None => return Err(format!("stray </{tag}>")),
                }
                continue;
            }
            let tag = name(&chars, &mut i)?;
            if seen_root && stack.is_empty() {
                return Err("content after document element".into());
            }
            seen_root = true;
            elements += 1;
            // attributes
            loop {
                while i < chars.len() && chars[i].is_whitespace() {
                    i += 1;
                }
                match chars.get(i) {
                    Some('>') => {
                        i += 1;
                        stack.push(tag.clone());
                        break;
                    }
                    Some('/') => {
                        if chars.get(i + 1) != Some(&'>') {
                            return Err("malformed self-close".into());
                        }
                        i += 2;
                        break;
                    }
                    Some(_) => {
                        name(&chars, &mut i)?;
                        if chars.get(i) != Some(&'=') {
                            return Err("attribute without value".into());
                        }
                        i += 1;
                        let quote = *chars.get(i).ok_or("eof in attribute")?;
                        if quote != '"' && quote != '\'' {
                            return Err("unquoted attribute value".into());
                        }
                        i += 1;
                        while i < chars.len() && chars[i] != quote {
                            if chars[i] == '<' {
                                return Err("raw '<' in attribute value".into());
                            }
                            i += 1;
                        }
                        if i == chars.len() {
                            return Err("unterminated attribute value".into());
                        }
                        i += 1;
                    }
                    None => return Err("eof inside tag".into()),
                }
            }
        } else {
            let c = chars[i];
            if c == '&' {
                let rest: String = chars[i..].iter().take(8).collect();
                let known = ["&amp;", "&lt;", "&gt;", "&quot;", "&apos;"];
                if !known.iter().any(|e| rest.starts_with(e)) && !rest.starts_with("&#") {
                    return Err("bare '&' in text".into());
                }
            }
            if !c.is_whitespace() && stack.is_empty() && seen_root {
                return Err("text outside the document element".into());
            }
            if !c.is_whitespace() && !seen_root {
                return Err("text before the document element".into());
            }
            i += 1;
        }
    }
    if !stack.is_empty() {
        return Err(format!("unclosed elements: {stack:?}"));
    }
    if !seen_root {
        return Err("no document element".into());
    }
    Ok(elements)
}

// ---------------------------------------------------------------------------

fn scenario_a() -> mapper_forge_core::pipeline::PipelineResult {
    run_pipeline(&PipelineConfig {
        dataset: DatasetSpec::Circle {
            n: 400,
            radius: 1.0,
            noise_sigma: 0.05,
            seed: Some(7),
        },
        lens: LensSource::Coordinate { axis: 1 },
        metric: Metric::Euclidean,
        cover: CoverSpec {
            n_intervals: vec![4],
            overlap_frac: 0.35,
        },
        clusterer: ClustererSpec::gap(10),
        max_dim: 2,
        seed: 7,
        outputs: None,
    })
    .unwrap()
}

#[test]
fn dot_validator_rejects_garbage() {
    assert!(validate_dot("graph {").is_err());
    assert!(validate_dot("graph mapper { v0 -> v1; }").is_err(), "directed edge in graph");
    assert!(validate_dot("graph mapper { v0 [label=]; }").is_err());
    assert!(validate_dot("blah mapper {}").is_err());
}

#[test]
fn empty_graph_dot_is_grammatical() {
    let g = MapperGraph {
        vertices: vec![],
        edges: vec![],
    };
    let dot = export_dot(&g);
    assert_eq!(dot, "graph mapper {\n}\n");
    let summary = validate_dot(&dot).unwrap();
    assert!(!summary.directed);
    assert_eq!(summary.node_stmts, 0);
    assert_eq!(summary.edge_stmts, 0);
}

#[test]
fn triangle_dot_statement_counts() {
    let vertex = |id: usize| MapperVertex {
        id,
        cover_index: vec![id],
        cluster_label: 0,
        size: 1,
        mean_lens: vec![id as f64],
        members: vec![id],
    };
    let g = MapperGraph {
        vertices: (0..3).map(vertex).collect(),
        edges: vec![
            MapperEdge { a: 0, b: 1, intersection: 1 },
            MapperEdge { a: 0, b: 2, intersection: 1 },
            MapperEdge { a: 1, b: 2, intersection: 1 },
        ],
    };
    let summary = validate_dot(&export_dot(&g)).unwrap();
    assert_eq!(summary.node_stmts, 3);
    assert_eq!(summary.edge_stmts, 3);
}

#[test]
fn scenario_dot_accepted_by_grammar() {
    let result = scenario_a();
    let dot = export_dot(&result.graph);
    let summary = validate_dot(&dot).unwrap();
    assert!(!summary.directed);
    assert_eq!(summary.node_stmts, result.graph.vertex_count());
    assert_eq!(summary.edge_stmts, result.graph.edge_count());
}

#[test]
fn scenario_svg_is_well_formed_xml() {
    let result = scenario_a();
    let svg = export_svg(&result.graph, &result.dataset, &result.lens_values).unwrap();
    validate_xml(&svg).unwrap();
    // one circle per data point plus one per graph vertex
    let circles = svg.matches("<circle").count();
    assert_eq!(
        circles,
        result.dataset.len() + result.graph.vertex_count()
    );
}

#[test]
fn scenario_svg_ring_layout() {
    // the reference run lays out two vertices per middle fiber and the
    // extreme fibers on the centerline spread: y offsets come in +-1/2
    // pairs for the two-cluster fibers
    let result = scenario_a();
    let mut by_cover: std::collections::BTreeMap<usize, usize> = Default::default();
    for v in &result.graph.vertices {
        *by_cover.entry(v.cover_index[0]).or_default() += 1;
    }
    assert_eq!(by_cover[&1], 2);
    assert_eq!(by_cover[&2], 2);
    assert_eq!(by_cover[&3], 1);
}

#[test]
fn xml_validator_rejects_broken_documents() {
    assert!(validate_xml("<svg><circle></svg>").is_err());
    assert!(validate_xml("<svg attr=oops></svg>").is_err());
    assert!(validate_xml("no tags at all").is_err());
    assert!(validate_xml("<a></a><b></b>").is_err(), "two roots");
    assert!(validate_xml("<a>x & y</a>").is_err(), "bare ampersand");
    assert_eq!(validate_xml("<a><b c=\"1\"/>text</a>").unwrap(), 2);
}

#[test]
fn empty_svg_is_well_formed() {
    let g = MapperGraph {
        vertices: vec![],
        edges: vec![],
    };
    let d = mapper_forge_core::data::Dataset::empty(2);
    let lv = mapper_forge_core::lens::LensValues::new(1, vec![]).unwrap();
    let svg = export_svg(&g, &d, &lv).unwrap();
    validate_xml(&svg).unwrap();
}
