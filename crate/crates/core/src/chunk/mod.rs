//! Cascaded regular-expression chunking over POS tag sequences.
//!
//! Each rule runs over the current top-level symbol sequence (raw POS tags
//! plus labels of chunks built by earlier rules). Matching is
//! leftmost-longest and non-overlapping; empty matches never form a chunk.

mod grammar;
mod nfa;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pos::PosSentence;

pub use grammar::{ChunkGrammar, ChunkRule, Pattern, TagPattern};

/// Half-open token range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn words<'a>(&self, s: &'a PosSentence) -> Vec<&'a str> {
        s.tokens[self.start..self.end]
            .iter()
            .map(|t| t.surface.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkNode {
    Leaf(usize),
    Chunk(Chunk),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub label: String,
    pub span: Span,
    pub children: Vec<ChunkNode>,
}

impl ChunkNode {
    pub fn span(&self) -> Span {
        match self {
            ChunkNode::Leaf(i) => Span::new(*i, i + 1),
            ChunkNode::Chunk(c) => c.span,
        }
    }

    fn symbol<'a>(&'a self, s: &PosSentence) -> &'a str {
        match self {
            ChunkNode::Leaf(i) => s.tokens[*i].pos.as_str(),
            ChunkNode::Chunk(c) => &c.label,
        }
    }
}

impl Chunk {
    /// Child chunks at any depth, in left-to-right order.
    pub fn descendants(&self) -> Vec<&Chunk> {
        let mut out = Vec::new();
        for child in &self.children {
            if let ChunkNode::Chunk(c) = child {
                out.push(c);
                out.extend(c.descendants());
            }
        }
        out
    }
}

/// Result of chunking one sentence: a flat root whose children are chunks or
/// unchunked token leaves, in token order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkTree {
    pub children: Vec<ChunkNode>,
}

impl ChunkTree {
    /// All chunks with the given label, at any depth, left to right.
    pub fn chunks_labelled<'a>(&'a self, label: &str) -> Vec<&'a Chunk> {
        let mut out = Vec::new();
        for child in &self.children {
            if let ChunkNode::Chunk(c) = child {
                if c.label == label {
                    out.push(c);
                }
                out.extend(c.descendants().into_iter().filter(|d| d.label == label));
            }
        }
        out
    }

    /// Bracketed rendering, `(S (NP market/NN share/NN) ./.)`.
    pub fn to_bracketed(&self, s: &PosSentence) -> String {
        self.render(s, true)
    }

    /// Bracketed rendering with tags only, `(S (NP NN NN) .)`.
    pub fn to_tag_bracketed(&self, s: &PosSentence) -> String {
        self.render(s, false)
    }

    fn render(&self, s: &PosSentence, surfaces: bool) -> String {
        fn node(out: &mut String, n: &ChunkNode, s: &PosSentence, surfaces: bool) {
            match n {
                ChunkNode::Leaf(i) => {
                    let t = &s.tokens[*i];
                    if surfaces {
                        out.push_str(&t.surface);
                        out.push('/');
                    }
                    out.push_str(t.pos.as_str());
                }
                ChunkNode::Chunk(c) => {
                    out.push('(');
                    out.push_str(&c.label);
                    for child in &c.children {
                        out.push(' ');
                        node(out, child, s, surfaces);
                    }
                    out.push(')');
                }
            }
        }
        let mut out = String::from("(S");
        for child in &self.children {
            out.push(' ');
            node(&mut out, child, s, surfaces);
        }
        out.push(')');
        out
    }
}

/// Runs the cascade over `s`.
pub fn chunk(grammar: &ChunkGrammar, s: &PosSentence) -> ChunkTree {
    let mut nodes: Vec<ChunkNode> = (0..s.len()).map(ChunkNode::Leaf).collect();
    for rule in grammar.rules() {
        let symbols: Vec<&str> = nodes.iter().map(|n| n.symbol(s)).collect();
        let table = rule.nfa.atom_table(&symbols);
        let mut matches = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            match rule.nfa.longest_match(&table, i) {
                Some(end) if end > i => {
                    matches.push((i, end));
                    i = end;
                }
                _ => i += 1,
            }
        }
        if matches.is_empty() {
            continue;
        }
        let mut rebuilt = Vec::with_capacity(nodes.len());
        let mut drain = nodes.into_iter().enumerate().peekable();
        let mut m = matches.into_iter().peekable();
        while let Some((idx, node)) = drain.next() {
            match m.peek() {
                Some(&(start, end)) if start == idx => {
                    m.next();
                    let mut children = vec![node];
                    while drain.peek().is_some_and(|(j, _)| *j < end) {
                        children.push(drain.next().unwrap().1);
                    }
                    let span = Span::new(children[0].span().start, children.last().unwrap().span().end);
                    rebuilt.push(ChunkNode::Chunk(Chunk {
                        label: rule.label.clone(),
                        span,
                        children,
                    }));
                }
                _ => rebuilt.push(node),
            }
        }
        nodes = rebuilt;
    }
    ChunkTree { children: nodes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpanRole {
    /// NP or NPP chunk: potential performance indicator.
    Indicator,
    /// JJ, RB or VB chunk: potential directionality word.
    Modifier,
}

fn role_of(label: &str) -> Option<SpanRole> {
    match label {
        "NP" | "NPP" => Some(SpanRole::Indicator),
        "JJ" | "RB" | "VB" => Some(SpanRole::Modifier),
        _ => None,
    }
}

/// Candidate produced from an `NPJJ` chunk. `node` numbers the NPJJ chunks
/// left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Candidate {
    Pair {
        node: usize,
        indicator: Span,
        modifier: Span,
    },
    Singleton {
        node: usize,
        span: Span,
        role: SpanRole,
    },
}

impl Candidate {
    pub fn node(&self) -> usize {
        match self {
            Candidate::Pair { node, .. } | Candidate::Singleton { node, .. } => *node,
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candidate::Pair {
                node,
                indicator,
                modifier,
            } => write!(
                f,
                "#{node} pair [{}..{}) + [{}..{})",
                indicator.start, indicator.end, modifier.start, modifier.end
            ),
            Candidate::Singleton { node, span, role } => {
                write!(f, "#{node} {role:?} [{}..{})", span.start, span.end)
            }
        }
    }
}

/// Indicator/modifier pairings inside every NPJJ chunk. Pairs are ordered by
/// indicator position, then modifier position. A chunk lacking either an
/// indicator or a modifier contributes its spans as singletons instead.
pub fn extract_pairs(tree: &ChunkTree) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (node, npjj) in tree.chunks_labelled("NPJJ").into_iter().enumerate() {
        let mut indicators = Vec::new();
        let mut modifiers = Vec::new();
        for c in npjj.descendants() {
            match role_of(&c.label) {
                Some(SpanRole::Indicator) => indicators.push(c.span),
                Some(SpanRole::Modifier) => modifiers.push(c.span),
                None => {}
            }
        }
        if !indicators.is_empty() && !modifiers.is_empty() {
            for &indicator in &indicators {
                for &modifier in &modifiers {
                    out.push(Candidate::Pair {
                        node,
                        indicator,
                        modifier,
                    });
                }
            }
        } else {
            let mut spans: Vec<(Span, SpanRole)> = indicators
                .into_iter()
                .map(|s| (s, SpanRole::Indicator))
                .chain(modifiers.into_iter().map(|s| (s, SpanRole::Modifier)))
                .collect();
            spans.sort_by_key(|(s, _)| *s);
            out.extend(
                spans
                    .into_iter()
                    .map(|(span, role)| Candidate::Singleton { node, span, role }),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pos::{ingest_pretagged, PosTag};

    fn tags(s: &str) -> PosSentence {
        PosSentence::from_tags(
            &s.split_whitespace()
                .map(|t| t.parse::<PosTag>().unwrap())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn np_np_vb_forms_npjj() {
        let g = ChunkGrammar::indicator();
        let s = tags("NN NN VBD");
        let tree = chunk(&g, &s);
        assert_eq!(tree.to_tag_bracketed(&s), "(S (NPJJ (NP NN NN) (VB VBD)))");
    }

    #[test]
    fn lone_determiner_is_a_leaf() {
        let g = ChunkGrammar::indicator();
        let s = tags("DT");
        let tree = chunk(&g, &s);
        assert_eq!(tree.children, vec![ChunkNode::Leaf(0)]);
        assert!(tree.chunks_labelled("NPJJ").is_empty());
        assert!(extract_pairs(&tree).is_empty());
    }

    #[test]
    fn numeric_second_alternative() {
        let g = ChunkGrammar::numeric();
        let s = tags("NN IN NN CD , VBD IN NNP CD");
        let tree = chunk(&g, &s);
        let npjj = tree.chunks_labelled("NPJJ");
        assert_eq!(npjj.len(), 1);
        assert_eq!(npjj[0].span, Span::new(0, 9));
    }

    #[test]
    fn spans_partition_tokens() {
        let g = ChunkGrammar::indicator();
        let s = tags("DT JJ NN IN NNP VBD RB , CD NNS .");
        let tree = chunk(&g, &s);
        let mut next = 0;
        for child in &tree.children {
            assert_eq!(child.span().start, next);
            next = child.span().end;
        }
        assert_eq!(next, s.len());
    }

    #[test]
    fn market_share_increase_pair() {
        let s = ingest_pretagged("market_NN share_NN increase_VB").unwrap();
        let tree = chunk(&ChunkGrammar::indicator(), &s);
        let pairs = extract_pairs(&tree);
        assert_eq!(pairs.len(), 1);
        let Candidate::Pair { indicator, modifier, .. } = pairs[0] else { panic!() };
        assert_eq!(indicator.words(&s), vec!["market", "share"]);
        assert_eq!(modifier.words(&s), vec!["increase"]);
    }

    #[test]
    fn details_disclosed_pair() {
        let s = ingest_pretagged("details_NNS disclosed_VBN").unwrap();
        let pairs = extract_pairs(&chunk(&ChunkGrammar::indicator(), &s));
        let Candidate::Pair { indicator, modifier, .. } = pairs[0] else { panic!() };
        assert_eq!(indicator.words(&s), vec!["details"]);
        assert_eq!(modifier.words(&s), vec!["disclosed"]);
    }

    #[test]
    fn npjj_without_modifier_yields_singletons() {
        let g = ChunkGrammar::compile("NP: {<NN>+}\nNPP: {<NNP>}\nNPJJ: {<NP><IN><NPP>}").unwrap();
        let s = tags("NN IN NNP");
        let pairs = extract_pairs(&chunk(&g, &s));
        assert_eq!(
            pairs,
            vec![
                Candidate::Singleton { node: 0, span: Span::new(0, 1), role: SpanRole::Indicator },
                Candidate::Singleton { node: 0, span: Span::new(2, 3), role: SpanRole::Indicator },
            ]
        );
    }

    #[test]
    fn chunking_is_deterministic() {
        let g = ChunkGrammar::indicator();
        let s = tags("NNP VBZ NN NN TO VB IN DT JJ NN IN CD");
        assert_eq!(chunk(&g, &s), chunk(&g, &s));
    }
}
