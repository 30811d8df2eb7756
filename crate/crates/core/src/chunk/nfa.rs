//! Thompson construction over symbol patterns, simulated as a state set to
//! find the longest match starting at a given position.

use super::grammar::{Pattern, TagPattern};

#[derive(Debug, Clone, Default)]
struct State {
    eps: Vec<usize>,
    /// (atom index, target state)
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    states: Vec<State>,
    atoms: Vec<TagPattern>,
    start: usize,
    accept: usize,
}

impl Nfa {
    pub(crate) fn compile(pattern: &Pattern) -> Nfa {
        let mut nfa = Nfa {
            states: vec![State::default(), State::default()],
            atoms: Vec::new(),
            start: 0,
            accept: 1,
        };
        nfa.build(pattern, 0, 1);
        nfa
    }

    fn new_state(&mut self) -> usize {
        self.states.push(State::default());
        self.states.len() - 1
    }

    fn build(&mut self, p: &Pattern, from: usize, to: usize) {
        match p {
            Pattern::Atom(a) => {
                self.atoms.push(a.clone());
                let atom = self.atoms.len() - 1;
                self.states[from].edges.push((atom, to));
            }
            Pattern::Seq(items) => {
                if items.is_empty() {
                    self.states[from].eps.push(to);
                    return;
                }
                let mut cur = from;
                for (i, item) in items.iter().enumerate() {
                    let next = if i + 1 == items.len() { to } else { self.new_state() };
                    self.build(item, cur, next);
                    cur = next;
                }
            }
            Pattern::Alt(alts) => {
                for alt in alts {
                    self.build(alt, from, to);
                }
            }
            Pattern::Star(inner) => {
                let (a, b) = (self.new_state(), self.new_state());
                self.states[from].eps.push(a);
                self.build(inner, a, b);
                self.states[b].eps.push(a);
                self.states[a].eps.push(to);
            }
            Pattern::Plus(inner) => {
                let (a, b) = (self.new_state(), self.new_state());
                self.states[from].eps.push(a);
                self.build(inner, a, b);
                self.states[b].eps.push(a);
                self.states[b].eps.push(to);
            }
            Pattern::Optional(inner) => {
                self.build(inner, from, to);
                self.states[from].eps.push(to);
            }
        }
    }

    fn closure(&self, set: &mut [bool], stack: &mut Vec<usize>) {
        while let Some(s) = stack.pop() {
            for &t in &self.states[s].eps {
                if !set[t] {
                    set[t] = true;
                    stack.push(t);
                }
            }
        }
    }

    /// For each symbol, which atoms accept it. Indexed `[symbol][atom]`.
    pub(crate) fn atom_table(&self, symbols: &[&str]) -> Vec<Vec<bool>> {
        let mut cache: Vec<(&str, Vec<bool>)> = Vec::new();
        symbols
            .iter()
            .map(|&sym| {
                if let Some((_, row)) = cache.iter().find(|(s, _)| *s == sym) {
                    return row.clone();
                }
                let row: Vec<bool> = self.atoms.iter().map(|a| a.matches(sym)).collect();
                cache.push((sym, row.clone()));
                row
            })
            .collect()
    }

    /// End (exclusive) of the longest match beginning at `start`, if any.
    /// An empty match yields `Some(start)`.
    pub(crate) fn longest_match(&self, table: &[Vec<bool>], start: usize) -> Option<usize> {
        let n = self.states.len();
        let mut current = vec![false; n];
        let mut stack = vec![self.start];
        current[self.start] = true;
        self.closure(&mut current, &mut stack);
        let mut best = current[self.accept].then_some(start);
        for (pos, row) in table.iter().enumerate().skip(start) {
            let mut next = vec![false; n];
            let mut any = false;
            for s in (0..n).filter(|&s| current[s]) {
                for &(atom, t) in &self.states[s].edges {
                    if row[atom] && !next[t] {
                        next[t] = true;
                        stack.push(t);
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
            self.closure(&mut next, &mut stack);
            if next[self.accept] {
                best = Some(pos + 1);
            }
            current = next;
        }
        best
    }
}
