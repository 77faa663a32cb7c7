//! Edge-list and DOT-subset readers plus the edge-list writer.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{Digraph, GraphError};
use crate::vertex_set::MAX_VERTICES;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("no vertices in input")]
    Empty,
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("more than {MAX_VERTICES} vertices")]
    TooManyVertices,
    #[error("expected `u v` or a single vertex name, found {0} tokens")]
    TokenCount(usize),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Accumulates vertices in first-appearance order and rejects loops and
/// repeated edges as they arrive.
#[derive(Default)]
struct Builder {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    seen: std::collections::HashSet<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, name: &str, line: usize) -> Result<usize, ParseError> {
        if let Some(&id) = self.ids.get(name) {
            return Ok(id);
        }
        if self.labels.len() == MAX_VERTICES {
            return Err(ParseError::new(line, ParseErrorKind::TooManyVertices));
        }
        let id = self.labels.len();
        self.ids.insert(name.to_owned(), id);
        self.labels.push(name.to_owned());
        Ok(id)
    }

    fn edge(&mut self, u: &str, v: &str, line: usize) -> Result<(), ParseError> {
        if u == v {
            return Err(ParseError::new(line, ParseErrorKind::SelfLoop(u.to_owned())));
        }
        let (a, b) = (self.vertex(u, line)?, self.vertex(v, line)?);
        if !self.seen.insert((a, b)) {
            return Err(ParseError::new(line, ParseErrorKind::DuplicateEdge(u.to_owned(), v.to_owned())));
        }
        self.edges.push((a, b));
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<Digraph, ParseError> {
        Digraph::with_labels(self.labels, self.edges).map_err(|e| match e {
            GraphError::Empty => ParseError::new(last_line, ParseErrorKind::Empty),
            other => ParseError::new(last_line, ParseErrorKind::Syntax(other.to_string())),
        })
    }
}

/// Parses whitespace-separated `u v` edge lines. A line with a single name
/// declares an isolated vertex; text after `#` is a comment. Vertex ids are
/// assigned in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut b = Builder::default();
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => {
                b.vertex(v, line)?;
            }
            [u, v] => b.edge(u, v, line)?,
            more => return Err(ParseError::new(line, ParseErrorKind::TokenCount(more.len()))),
        }
    }
    b.finish(last)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Arrow,
    UndirectedEdge,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Equals,
    Colon,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let mut at_line_start = true;
    while let Some(c) = chars.next() {
        let start_line = line;
        match c {
            '\n' => {
                line += 1;
                at_line_start = true;
                continue;
            }
            c if c.is_whitespace() => continue,
            '#' if at_line_start => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '/' if chars.peek() == Some(&'/') => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '/' if chars.peek() == Some(&'*') => {
                chars.next();
                let mut prev = ' ';
                loop {
                    match chars.next() {
                        None => return Err(ParseError::new(start_line, ParseErrorKind::Syntax("unterminated comment".into()))),
                        Some('/') if prev == '*' => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            prev = c;
                        }
                    }
                }
            }
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                out.push((Tok::Arrow, line));
            }
            '-' if chars.peek() == Some(&'-') => {
                chars.next();
                out.push((Tok::UndirectedEdge, line));
            }
            '{' => out.push((Tok::LBrace, line)),
            '}' => out.push((Tok::RBrace, line)),
            '[' => out.push((Tok::LBracket, line)),
            ']' => out.push((Tok::RBracket, line)),
            ';' => out.push((Tok::Semi, line)),
            ',' => out.push((Tok::Comma, line)),
            '=' => out.push((Tok::Equals, line)),
            ':' => out.push((Tok::Colon, line)),
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ParseError::new(start_line, ParseErrorKind::Syntax("unterminated string".into()))),
                        Some('"') => break,
                        Some('\\') if chars.peek() == Some(&'"') => s.push(chars.next().unwrap()),
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                    }
                }
                out.push((Tok::Id(s), start_line));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let mut s = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '.' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Id(s), line));
            }
            '<' => return Err(ParseError::new(line, ParseErrorKind::Unsupported("HTML label".into()))),
            other => return Err(ParseError::new(line, ParseErrorKind::Syntax(format!("unexpected character {other:?}")))),
        }
        at_line_start = false;
    }
    Ok(out)
}

struct DotParser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl DotParser {
    fn line(&self) -> usize {
        self.toks.get(self.at).or(self.toks.last()).map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line(), kind)
    }

    fn syntax(&self, msg: &str) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.to_owned()))
    }

    fn keyword(t: Option<&Tok>, kw: &str) -> bool {
        matches!(t, Some(Tok::Id(s)) if s.eq_ignore_ascii_case(kw))
    }

    fn skip_attributes(&mut self) -> Result<(), ParseError> {
        while self.peek() == Some(&Tok::LBracket) {
            self.bump();
            loop {
                match self.bump() {
                    Some(Tok::RBracket) => break,
                    Some(Tok::Id(_) | Tok::Equals | Tok::Comma | Tok::Semi) => {}
                    Some(_) => return Err(self.syntax("malformed attribute list")),
                    None => return Err(self.syntax("unterminated attribute list")),
                }
            }
        }
        Ok(())
    }

    fn node_id(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Id(s)) if s.eq_ignore_ascii_case("subgraph") => {
                Err(self.err(ParseErrorKind::Unsupported("subgraph".into())))
            }
            Some(Tok::LBrace) => Err(self.err(ParseErrorKind::Unsupported("subgraph".into()))),
            Some(Tok::Id(_)) => {
                let Some(Tok::Id(s)) = self.bump() else { unreachable!() };
                if self.peek() == Some(&Tok::Colon) {
                    return Err(self.err(ParseErrorKind::Unsupported("port".into())));
                }
                Ok(s)
            }
            _ => Err(self.syntax("expected a node name")),
        }
    }

    fn parse(mut self) -> Result<Digraph, ParseError> {
        if Self::keyword(self.peek(), "strict") {
            return Err(self.err(ParseErrorKind::Unsupported("strict".into())));
        }
        if Self::keyword(self.peek(), "graph") {
            return Err(self.err(ParseErrorKind::Unsupported("undirected graph".into())));
        }
        if !Self::keyword(self.peek(), "digraph") {
            return Err(self.syntax("expected `digraph`"));
        }
        self.bump();
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.bump();
        }
        if self.bump() != Some(Tok::LBrace) {
            return Err(self.syntax("expected `{`"));
        }
        let mut b = Builder::default();
        loop {
            match self.peek() {
                None => return Err(self.syntax("missing `}`")),
                Some(Tok::RBrace) => {
                    self.bump();
                    break;
                }
                Some(Tok::Semi) => {
                    self.bump();
                }
                Some(Tok::UndirectedEdge) => return Err(self.err(ParseErrorKind::Unsupported("undirected edge `--`".into()))),
                Some(t) if Self::keyword(Some(t), "graph") || Self::keyword(Some(t), "node") || Self::keyword(Some(t), "edge") => {
                    self.bump();
                    self.skip_attributes()?;
                }
                _ => self.statement(&mut b)?,
            }
        }
        if self.peek().is_some() {
            return Err(self.syntax("trailing input after `}`"));
        }
        let last = self.line();
        b.finish(last)
    }

    fn statement(&mut self, b: &mut Builder) -> Result<(), ParseError> {
        let line = self.line();
        let first = self.node_id()?;
        if self.peek() == Some(&Tok::Equals) {
            // graph-level attribute `id = value`
            self.bump();
            return match self.bump() {
                Some(Tok::Id(_)) => Ok(()),
                _ => Err(self.syntax("expected attribute value")),
            };
        }
        let mut chain = vec![first];
        loop {
            match self.peek() {
                Some(Tok::Arrow) => {
                    self.bump();
                    chain.push(self.node_id()?);
                }
                Some(Tok::UndirectedEdge) => {
                    return Err(self.err(ParseErrorKind::Unsupported("undirected edge `--`".into())));
                }
                _ => break,
            }
        }
        self.skip_attributes()?;
        if chain.len() == 1 {
            b.vertex(&chain[0], line)?;
        }
        for w in chain.windows(2) {
            b.edge(&w[0], &w[1], line)?;
        }
        Ok(())
    }
}

/// Parses a `digraph { ... }` block of `u -> v` edge statements (chains
/// allowed) and node declarations. Attribute lists are ignored; undirected
/// graphs, subgraphs and ports are rejected.
pub fn parse_dot_subset(text: &str) -> Result<Digraph, ParseError> {
    DotParser { toks: tokenize(text)?, at: 0 }.parse()
}

/// Input format detected by [`parse_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Dot,
}

/// Detects DOT input by its first keyword (`digraph`, `graph` or `strict`)
/// and falls back to the edge-list format.
pub fn detect_format(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("//"))
        .and_then(|l| l.split(|c: char| c.is_whitespace() || c == '{').next())
        .unwrap_or("");
    if ["digraph", "graph", "strict"].iter().any(|k| first.eq_ignore_ascii_case(k)) {
        Format::Dot
    } else {
        Format::EdgeList
    }
}

pub fn parse_graph(text: &str) -> Result<Digraph, ParseError> {
    match detect_format(text) {
        Format::Dot => parse_dot_subset(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

/// Writes `g` as an edge list that [`parse_edge_list`] reads back with the
/// same ids: every vertex is declared first, in id order, then the edges.
/// Labels that cannot be written as a single token are replaced by their ids.
pub fn to_edge_list(g: &Digraph) -> String {
    let usable = |l: &str| !l.is_empty() && !l.contains(|c: char| c.is_whitespace() || c == '#');
    let mut distinct = std::collections::HashSet::new();
    let keep = g.labels().iter().all(|l| usable(l) && distinct.insert(l.as_str()));
    let name = |v: usize| if keep { g.label(v).to_owned() } else { v.to_string() };
    let mut out = String::new();
    for v in g.vertices() {
        let _ = writeln!(out, "{}", name(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", name(u), name(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &Digraph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn edge_list_examples() {
        let g = parse_edge_list("a b\nb c").unwrap();
        assert_eq!(g, Digraph::with_labels(vec!["a".into(), "b".into(), "c".into()], [(0, 1), (1, 2)]).unwrap());
        assert_eq!(
            parse_edge_list("a a").unwrap_err(),
            ParseError { line: 1, kind: ParseErrorKind::SelfLoop("a".into()) }
        );
        let g = parse_edge_list("# x\n1 2\n2 1").unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (1, 0)]);
        assert_eq!(g.labels(), ["1", "2"]);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        assert_eq!(parse_edge_list("a b\n\nb c\na b").unwrap_err().line, 4);
        assert_eq!(parse_edge_list("").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_edge_list("# only\n\n").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_edge_list("a b c").unwrap_err().kind, ParseErrorKind::TokenCount(3));
    }

    #[test]
    fn isolated_vertices_and_inline_comments() {
        let g = parse_edge_list("x\ny z # edge\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(edges(&g), vec![(1, 2)]);
    }

    #[test]
    fn dot_examples() {
        let g = parse_dot_subset("digraph{a->b;b->c;}").unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (1, 2)]);
        assert!(matches!(
            parse_dot_subset("graph{a--b;}").unwrap_err().kind,
            ParseErrorKind::Unsupported(_)
        ));
        let g = parse_dot_subset("digraph{a->b[label=x];}").unwrap();
        assert_eq!(edges(&g), vec![(0, 1)]);
    }

    #[test]
    fn dot_constructs() {
        let text = "digraph G {\n  rankdir = LR;\n  node [shape=box];\n  \"x y\";\n  a -> b -> c\n  // c -> a\n  c -> a [color=red, style=bold]\n}\n";
        let g = parse_dot_subset(text).unwrap();
        assert_eq!(g.labels(), ["x y", "a", "b", "c"]);
        assert_eq!(edges(&g), vec![(1, 2), (2, 3), (3, 1)]);
        for bad in ["digraph{a->b--c}", "digraph{subgraph s{a->b}}", "digraph{a:p->b}", "digraph{{a b}->c}"] {
            assert!(matches!(parse_dot_subset(bad).unwrap_err().kind, ParseErrorKind::Unsupported(_)), "{bad}");
        }
        assert_eq!(parse_dot_subset("digraph{\na->b\na->b}").unwrap_err().line, 3);
        assert_eq!(parse_dot_subset("digraph{\n\na->a}").unwrap_err().line, 3);
    }

    #[test]
    fn sniffing() {
        assert_eq!(detect_format("# c\ndigraph {a -> b}"), Format::Dot);
        assert_eq!(detect_format("digraph{a->b}"), Format::Dot);
        assert_eq!(detect_format("a b\n"), Format::EdgeList);
        assert_eq!(parse_graph("digraph{a->b}").unwrap(), parse_graph("a b").unwrap());
    }

    #[test]
    fn writer_round_trips() {
        let g = parse_edge_list("q\nb a\na c\nc b").unwrap();
        let text = to_edge_list(&g);
        assert_eq!(parse_edge_list(&text).unwrap(), g);
        let spaced = parse_dot_subset("digraph{\"p q\" -> r}").unwrap();
        assert_eq!(to_edge_list(&spaced), "0\n1\n0 1\n");
    }
}
