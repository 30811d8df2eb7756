//! Parser for cascaded chunk grammars written as `LABEL: { pattern }` rules.
//!
//! Pattern atoms are `<...>` tag patterns matched against a single symbol
//! (a POS tag or the label of an earlier chunk). Outside atoms the usual
//! regular operators apply: juxtaposition, `|`, grouping, `*`, `+`, `?`.
//! Whitespace is insignificant everywhere, including inside atoms.
//! Inside an atom `.` matches any character and `*`/`+`/`?`/`|`/`()` act on
//! characters, except that an atom consisting of a lone `(` or `)` is the
//! literal bracket tag.

use std::collections::HashSet;
use std::fmt;

use regex::Regex;

use crate::error::{Error, Result};
use crate::pos::PosTag;

use super::nfa::Nfa;

/// A compiled `<...>` atom.
#[derive(Clone)]
pub struct TagPattern {
    source: String,
    regex: Regex,
}

impl TagPattern {
    fn compile(source: &str) -> std::result::Result<TagPattern, String> {
        let body = if source == "(" || source == ")" {
            regex::escape(source)
        } else {
            let mut body = String::new();
            for c in source.chars() {
                match c {
                    '.' | '*' | '+' | '?' | '|' | '(' | ')' => body.push(c),
                    other => body.push_str(&regex::escape(&other.to_string())),
                }
            }
            body
        };
        let regex = Regex::new(&format!("^(?:{body})$")).map_err(|e| format!("bad tag pattern <{source}>: {e}"))?;
        Ok(TagPattern {
            source: source.to_string(),
            regex,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn matches(&self, symbol: &str) -> bool {
        self.regex.is_match(symbol)
    }

    /// Top-level alternatives that are plain symbol names (no wildcards).
    fn literal_alternatives(&self) -> Vec<&str> {
        if self.source == "(" || self.source == ")" {
            return vec![self.source.as_str()];
        }
        if self.source.contains(['(', ')']) {
            return Vec::new();
        }
        self.source
            .split('|')
            .filter(|alt| !alt.contains(['.', '*', '+', '?']))
            .collect()
    }
}

impl fmt::Debug for TagPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.source)
    }
}

impl PartialEq for TagPattern {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

/// Regular expression over symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    Atom(TagPattern),
    Seq(Vec<Pattern>),
    Alt(Vec<Pattern>),
    Star(Box<Pattern>),
    Plus(Box<Pattern>),
    Optional(Box<Pattern>),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Atom(a) => write!(f, "<{}>", a.source),
            Pattern::Seq(items) => {
                for p in items {
                    match p {
                        Pattern::Alt(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            Pattern::Alt(alts) => {
                for (i, p) in alts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Pattern::Star(p) => write_postfix(f, p, '*'),
            Pattern::Plus(p) => write_postfix(f, p, '+'),
            Pattern::Optional(p) => write_postfix(f, p, '?'),
        }
    }
}

fn write_postfix(f: &mut fmt::Formatter<'_>, p: &Pattern, op: char) -> fmt::Result {
    match p {
        Pattern::Atom(_) => write!(f, "{p}{op}"),
        _ => write!(f, "({p}){op}"),
    }
}

#[derive(Debug, Clone)]
pub struct ChunkRule {
    pub label: String,
    pub pattern: Pattern,
    pub(crate) nfa: Nfa,
}

/// Ordered list of chunk rules, applied as a cascade.
#[derive(Debug, Clone)]
pub struct ChunkGrammar {
    rules: Vec<ChunkRule>,
}

const INDICATOR_GRAMMAR: &str = include_str!("../../resources/grammar_indicator.txt");
const NUMERIC_GRAMMAR: &str = include_str!("../../resources/grammar_numeric.txt");

impl ChunkGrammar {
    pub fn compile(source: &str) -> Result<ChunkGrammar> {
        let mut rules = Vec::new();
        let mut labels: HashSet<String> = HashSet::new();
        for (label, body, offset) in split_rules(source)? {
            let mut parser = PatternParser {
                label: &label,
                src: body,
                pos: 0,
                base: offset,
            };
            let pattern = parser.parse()?;
            check_references(&label, &pattern, &labels)?;
            let nfa = Nfa::compile(&pattern);
            labels.insert(label.clone());
            rules.push(ChunkRule { label, pattern, nfa });
        }
        Ok(ChunkGrammar { rules })
    }

    /// Indicator/directionality grammar used for pairing indicators with
    /// direction words.
    pub fn indicator() -> ChunkGrammar {
        ChunkGrammar::compile(INDICATOR_GRAMMAR).expect("bundled indicator grammar compiles")
    }

    /// Grammar locating an indicator and two numerals for numeric comparisons.
    pub fn numeric() -> ChunkGrammar {
        ChunkGrammar::compile(NUMERIC_GRAMMAR).expect("bundled numeric grammar compiles")
    }

    pub fn indicator_source() -> &'static str {
        INDICATOR_GRAMMAR
    }

    pub fn numeric_source() -> &'static str {
        NUMERIC_GRAMMAR
    }

    pub fn rules(&self) -> &[ChunkRule] {
        &self.rules
    }

    pub fn rule(&self, label: &str) -> Option<&ChunkRule> {
        self.rules.iter().find(|r| r.label == label)
    }
}

fn syntax(label: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::GrammarSyntax {
        label: label.to_string(),
        offset,
        message: message.into(),
    }
}

/// Splits source text into `(label, body, body_offset)` triples.
fn split_rules(source: &str) -> Result<Vec<(String, &str, usize)>> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let label_start = i;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$') {
            i += 1;
        }
        let label = &source[label_start..i];
        if label.is_empty() {
            return Err(syntax("", i, format!("expected rule label, found {:?}", c as char)));
        }
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b':' {
            return Err(syntax(label, i, "expected ':' after rule label"));
        }
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'{' {
            return Err(syntax(label, i, "expected '{' to open rule body"));
        }
        i += 1;
        let body_start = i;
        let mut in_atom = false;
        while i < bytes.len() {
            match bytes[i] {
                b'<' if !in_atom => in_atom = true,
                b'>' if in_atom => in_atom = false,
                b'}' if !in_atom => break,
                _ => {}
            }
            i += 1;
        }
        if in_atom {
            return Err(syntax(label, i, "unclosed atom '<'"));
        }
        if i >= bytes.len() {
            return Err(syntax(label, i, "unclosed rule body '{'"));
        }
        out.push((label.to_string(), &source[body_start..i], body_start));
        i += 1;
    }
    Ok(out)
}

struct PatternParser<'a> {
    label: &'a str,
    src: &'a str,
    pos: usize,
    base: usize,
}

impl PatternParser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.label, self.base + self.pos, message)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn parse(&mut self) -> Result<Pattern> {
        let p = self.alternation()?;
        match self.peek() {
            None => Ok(p),
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
        }
    }

    fn alternation(&mut self) -> Result<Pattern> {
        let mut alts = Vec::new();
        loop {
            match self.sequence()? {
                Pattern::Alt(inner) => alts.extend(inner),
                p => alts.push(p),
            }
            if self.peek() != Some('|') {
                break;
            }
            self.pos += 1;
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            Pattern::Alt(alts)
        })
    }

    fn sequence(&mut self) -> Result<Pattern> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            match self.postfix()? {
                Pattern::Seq(inner) => items.extend(inner),
                p => items.push(p),
            }
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Pattern::Seq(items)
        })
    }

    fn postfix(&mut self) -> Result<Pattern> {
        let mut p = self.primary()?;
        loop {
            match self.peek() {
                Some('*') => p = Pattern::Star(Box::new(p)),
                Some('+') => p = Pattern::Plus(Box::new(p)),
                Some('?') => p = Pattern::Optional(Box::new(p)),
                _ => return Ok(p),
            }
            self.pos += 1;
        }
    }

    fn primary(&mut self) -> Result<Pattern> {
        match self.peek() {
            Some('<') => {
                let start = self.pos;
                let close = self.src[start..]
                    .find('>')
                    .ok_or_else(|| self.err("unclosed atom '<'"))?;
                let content: String = self.src[start + 1..start + close]
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .collect();
                if content.is_empty() {
                    return Err(self.err("empty atom '<>'"));
                }
                let atom = TagPattern::compile(&content).map_err(|m| self.err(m))?;
                self.pos = start + close + 1;
                Ok(Pattern::Atom(atom))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of pattern")),
        }
    }
}

fn check_references(label: &str, pattern: &Pattern, defined: &HashSet<String>) -> Result<()> {
    match pattern {
        Pattern::Atom(atom) => {
            for name in atom.literal_alternatives() {
                if name.parse::<PosTag>().is_err() && !defined.contains(name) {
                    return Err(Error::UndefinedLabel {
                        label: label.to_string(),
                        reference: name.to_string(),
                    });
                }
            }
            Ok(())
        }
        Pattern::Seq(ps) | Pattern::Alt(ps) => ps.iter().try_for_each(|p| check_references(label, p, defined)),
        Pattern::Star(p) | Pattern::Plus(p) | Pattern::Optional(p) => check_references(label, p, defined),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_np_rule() {
        let g = ChunkGrammar::compile("NP: {(<NNS|NN>)*}").unwrap();
        assert_eq!(g.rules().len(), 1);
        let rule = &g.rules()[0];
        assert_eq!(rule.label, "NP");
        match &rule.pattern {
            Pattern::Star(inner) => match inner.as_ref() {
                Pattern::Atom(a) => {
                    assert!(a.matches("NN"));
                    assert!(a.matches("NNS"));
                    assert!(!a.matches("NNP"));
                    assert!(!a.matches("N"));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unclosed_atom_is_syntax_error() {
        match ChunkGrammar::compile("X: {<NN").unwrap_err() {
            Error::GrammarSyntax { label, message, .. } => {
                assert_eq!(label, "X");
                assert!(message.contains("unclosed atom"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_syntax_errors_carry_position() {
        for (src, at) in [("X: {<NN>)}", 8), ("X: {(<NN>}", 9), ("X {<NN>}", 2), ("X: {<NN>", 8)] {
            match ChunkGrammar::compile(src).unwrap_err() {
                Error::GrammarSyntax { offset, .. } => assert_eq!(offset, at, "{src}"),
                other => panic!("unexpected {other:?} for {src}"),
            }
        }
    }

    #[test]
    fn undefined_label_reference() {
        match ChunkGrammar::compile("A: {<NP><VB>}").unwrap_err() {
            Error::UndefinedLabel { label, reference } => {
                assert_eq!(label, "A");
                assert_eq!(reference, "NP");
            }
            other => panic!("unexpected {other:?}"),
        }
        // a label is usable only after its rule
        assert!(ChunkGrammar::compile("NP: {<NN>+}\nA: {<NP><VB>}").is_ok());
        assert!(ChunkGrammar::compile("A: {<X>}\nX: {<NN>}").is_err());
    }

    #[test]
    fn bundled_grammars_compile() {
        let a = ChunkGrammar::indicator();
        let labels: Vec<&str> = a.rules().iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["JJ", "VB", "NP", "NPP", "RB", "NPJJ"]);
        match &a.rule("NPJJ").unwrap().pattern {
            Pattern::Alt(alts) => assert_eq!(alts.len(), 12),
            other => panic!("unexpected {other:?}"),
        }
        let b = ChunkGrammar::numeric();
        assert!(b.rule("CD").is_some());
        match &b.rule("NPJJ").unwrap().pattern {
            Pattern::Alt(alts) => assert_eq!(alts.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bracket_atoms_and_wildcards() {
        let g = ChunkGrammar::compile("X: {<(><.*>*<)>}").unwrap();
        let Pattern::Seq(items) = &g.rules()[0].pattern else { panic!() };
        let Pattern::Atom(open) = &items[0] else { panic!() };
        assert!(open.matches("("));
        assert!(!open.matches("NN"));
        let Pattern::Star(any) = &items[1] else { panic!() };
        let Pattern::Atom(any) = any.as_ref() else { panic!() };
        assert!(any.matches("NPJJ") && any.matches(","));
    }

    #[test]
    fn whitespace_inside_atoms_is_ignored() {
        let g = ChunkGrammar::compile("NP: {(<NNS | NN>)*}").unwrap();
        let Pattern::Star(inner) = &g.rules()[0].pattern else { panic!() };
        let Pattern::Atom(a) = inner.as_ref() else { panic!() };
        assert!(a.matches("NN") && a.matches("NNS"));
    }

    #[test]
    fn display_reparses_to_same_pattern() {
        for rule in ChunkGrammar::indicator().rules() {
            let text = format!("{}: {{{}}}", "Z", rule.pattern);
            let labels = "JJ: {<JJ>}\nVB: {<VB>}\nNP: {<NN>}\nNPP: {<NNP>}\nRB: {<RB>}\n";
            let again = ChunkGrammar::compile(&format!("{labels}{text}")).unwrap();
            assert_eq!(again.rule("Z").unwrap().pattern, rule.pattern);
        }
    }
}
