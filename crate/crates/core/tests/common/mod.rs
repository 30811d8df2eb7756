//! Fixtures and independent reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use finsent::arm::{ClassLabel, Transaction};
use finsent::SemTag;
use rand::Rng;
use regex::Regex;

/// The six-sentence illustrative transaction table.
pub const SAMPLE_TRANSACTIONS: [&str; 6] = [
    "LagInd::UP, positive",
    "UP, POS, neutral",
    "LagInd::DOWN, negative",
    "LagInd, neutral",
    "LeadInd::UP, positive",
    "LagInd, POS, NEG, neutral",
];

/// The seven reference sample rules: (antecedent, class, support %, confidence %).
pub const SAMPLE_RULES: [(&str, &str, f64, f64); 7] = [
    ("LagInd", "neutral", 33.33, 100.0),
    ("POS", "neutral", 33.33, 100.0),
    ("UP, POS", "neutral", 16.67, 100.0),
    ("LagInd::DOWN", "negative", 16.67, 100.0),
    ("LagInd::UP", "positive", 16.67, 100.0),
    ("LeadInd::UP", "positive", 16.67, 100.0),
    ("UP", "neutral", 16.67, 100.0),
];

pub fn sample_transactions() -> Vec<Transaction> {
    SAMPLE_TRANSACTIONS.iter().map(|l| l.parse().unwrap()).collect()
}

pub fn sample_rulebase() -> finsent::RuleBase {
    let rules = SAMPLE_RULES
        .iter()
        .map(|&(a, c, s, conf)| finsent::Rule::new(finsent::TagSet::parse(a).unwrap(), c.parse().unwrap(), s, conf))
        .collect();
    finsent::RuleBase::new(rules, 16.0, 60.0)
}

// ---------------------------------------------------------------------------
// Exhaustive mining oracle

/// Items as plain strings so the oracle shares no types with the miner.
pub fn items_of(t: &Transaction) -> Vec<String> {
    let mut v: Vec<String> = t.items.iter().map(|x| x.as_str().to_string()).collect();
    v.push(t.label.as_str().to_string());
    v
}

pub const CLASS_NAMES: [&str; 4] = ["positive", "neutral", "negative", "polarized"];

/// Every itemset (sorted names) whose support reaches `minsup`, with its count.
pub fn brute_force_frequent(tx: &[Transaction], minsup: f64) -> BTreeMap<Vec<String>, usize> {
    let rows: Vec<Vec<String>> = tx.iter().map(items_of).collect();
    let mut universe: Vec<String> = rows.iter().flatten().cloned().collect();
    universe.sort();
    universe.dedup();
    let n = tx.len() as f64;
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << universe.len()) {
        let set: Vec<String> = (0..universe.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe[i].clone())
            .collect();
        let count = rows.iter().filter(|r| set.iter().all(|x| r.contains(x))).count();
        if count > 0 && count as f64 / n * 100.0 >= minsup - 1e-9 {
            out.insert(set, count);
        }
    }
    out
}

/// `(antecedent names, class) -> (support %, confidence %)` for every rule
/// over every (tag subset, class) pair.
pub fn brute_force_rules(tx: &[Transaction], minsup: f64, minconf: f64) -> BTreeMap<(Vec<String>, String), (f64, f64)> {
    let rows: Vec<Vec<String>> = tx.iter().map(items_of).collect();
    let mut tags: Vec<String> = rows
        .iter()
        .flatten()
        .filter(|x| !CLASS_NAMES.contains(&x.as_str()))
        .cloned()
        .collect();
    tags.sort();
    tags.dedup();
    let n = tx.len() as f64;
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << tags.len()) {
        let ante: Vec<String> = (0..tags.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| tags[i].clone())
            .collect();
        let ante_count = rows.iter().filter(|r| ante.iter().all(|x| r.contains(x))).count();
        for class in CLASS_NAMES {
            let both = rows
                .iter()
                .filter(|r| r.iter().any(|x| x == class) && ante.iter().all(|x| r.contains(x)))
                .count();
            if both == 0 {
                continue;
            }
            let support = both as f64 / n * 100.0;
            let confidence = both as f64 / ante_count as f64 * 100.0;
            if support >= minsup - 1e-9 && confidence >= minconf - 1e-9 {
                out.insert((ante.clone(), class.to_string()), (support, confidence));
            }
        }
    }
    out
}

/// Up to `max_tx` transactions over at most `max_tags` distinct tags and the
/// three polarity classes.
pub fn random_transactions(rng: &mut impl Rng, max_tx: usize, max_tags: usize) -> Vec<Transaction> {
    let pool_size = rng.gen_range(1..=max_tags);
    let mut pool: Vec<SemTag> = SemTag::ALL.to_vec();
    for i in (1..pool.len()).rev() {
        pool.swap(i, rng.gen_range(0..=i));
    }
    pool.truncate(pool_size);
    let n = rng.gen_range(1..=max_tx);
    (0..n)
        .map(|_| {
            let items = pool.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
            let label = ClassLabel::POLARITIES[rng.gen_range(0..3)];
            Transaction::new(items, label)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Reference chunker

/// Rule as (label, regex over encoded symbols).
pub struct RefRule {
    pub label: String,
    pub regex: Regex,
}

/// Translates each `LABEL: { ... }` rule into a regular expression over the
/// concatenation `<SYM><SYM>...` of the current symbols.
pub fn reference_grammar(source: &str) -> Vec<RefRule> {
    let text: String = source
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let rule_re = Regex::new(r"(?s)(\w+)\s*:\s*\{(.*?)\}").unwrap();
    rule_re
        .captures_iter(&text)
        .map(|c| {
            let body: String = c[2].chars().filter(|ch| !ch.is_whitespace()).collect();
            let mut out = String::new();
            let mut rest = body.as_str();
            while let Some(open) = rest.find('<') {
                out.push_str(&rest[..open]);
                let close = open + rest[open..].find('>').expect("closed atom");
                let atom = &rest[open + 1..close];
                out.push_str("(?:<(?:");
                if atom == "(" || atom == ")" {
                    out.push_str(&regex::escape(atom));
                } else {
                    for ch in atom.chars() {
                        match ch {
                            '.' => out.push_str("[^<>]"),
                            '*' | '+' | '?' | '|' | '(' | ')' => out.push(ch),
                            other => out.push_str(&regex::escape(&other.to_string())),
                        }
                    }
                }
                out.push_str(")>)");
                rest = &rest[close + 1..];
            }
            out.push_str(rest);
            RefRule {
                label: c[1].to_string(),
                regex: Regex::new(&format!("^(?:{out})$")).unwrap(),
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum RefNode {
    Leaf(String),
    Chunk(String, Vec<RefNode>),
}

impl RefNode {
    fn symbol(&self) -> &str {
        match self {
            RefNode::Leaf(t) => t,
            RefNode::Chunk(l, _) => l,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            RefNode::Leaf(t) => out.push_str(t),
            RefNode::Chunk(l, kids) => {
                out.push('(');
                out.push_str(l);
                for k in kids {
                    out.push(' ');
                    k.render(out);
                }
                out.push(')');
            }
        }
    }
}

/// Leftmost-longest, non-overlapping, rule by rule; brute force over every
/// (start, end) pair.
pub fn reference_chunk(rules: &[RefRule], tags: &[&str]) -> String {
    let mut nodes: Vec<RefNode> = tags.iter().map(|t| RefNode::Leaf(t.to_string())).collect();
    for rule in rules {
        let encoded: Vec<String> = nodes.iter().map(|n| format!("<{}>", n.symbol())).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let end = (i + 1..=nodes.len())
                .rev()
                .find(|&e| rule.regex.is_match(&encoded[i..e].concat()));
            match end {
                Some(e) => {
                    out.push(RefNode::Chunk(rule.label.clone(), nodes[i..e].to_vec()));
                    i = e;
                }
                None => {
                    out.push(nodes[i].clone());
                    i += 1;
                }
            }
        }
        nodes = out;
    }
    let mut s = String::from("(S");
    for n in &nodes {
        s.push(' ');
        n.render(&mut s);
    }
    s.push(')');
    s
}
