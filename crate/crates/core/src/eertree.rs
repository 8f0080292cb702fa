//! Online palindromic tree (eertree) with undo, richness predicates,
//! Θ-palindromic defect and palindrome-graph export.
//!
//! Node 0 is the imaginary root γ of length −1 and node 1 the empty root ε.
//! Every other node is one distinct nonempty palindromic factor of the
//! buffer, so a word of length `n` is rich exactly when the tree holds `n`
//! nonempty nodes.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EertreeError {
    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfAlphabet { symbol: u8, alphabet: u8 },
    #[error("undo on empty tree")]
    UndoOnEmpty,
    #[error("factor [{start}, {start}+{len}) exceeds word length {word_len}")]
    OutOfRange { start: usize, len: usize, word_len: usize },
    #[error("letter map is not an involution: {symbol} -> {image} -> {back}")]
    NotInvolutive { symbol: u8, image: u8, back: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const IMAGINARY: NodeId = NodeId(0);
    pub const EMPTY: NodeId = NodeId(1);
}

const NO_NODE: u32 = u32::MAX;

/// Read-only view of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PalNode {
    pub id: NodeId,
    pub length: i32,
    pub suffix_link: NodeId,
    /// Buffer index of the last symbol of the first occurrence; `None` for roots.
    pub created_at: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Appended {
    pub created_new: bool,
    pub node: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct UndoRecord {
    prev_last: u32,
    /// Parent whose border edge was inserted, or `NO_NODE` if nothing was created.
    parent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eertree {
    alphabet: u8,
    length: Vec<i32>,
    link: Vec<u32>,
    created_at: Vec<u32>,
    // edges[node * alphabet + symbol]
    edges: Vec<u32>,
    buf: Vec<u8>,
    last: u32,
    log: Vec<UndoRecord>,
}

impl Eertree {
    pub fn new(alphabet: u8) -> Self {
        assert!(alphabet >= 1, "alphabet must be nonempty");
        let k = alphabet as usize;
        Eertree {
            alphabet,
            length: vec![-1, 0],
            link: vec![0, 0],
            created_at: vec![NO_NODE, NO_NODE],
            edges: vec![NO_NODE; 2 * k],
            buf: Vec::new(),
            last: 1,
            log: Vec::new(),
        }
    }

    pub fn from_word(alphabet: u8, word: &[u8]) -> Result<Self, EertreeError> {
        let mut t = Eertree::new(alphabet);
        for &a in word {
            t.append(a)?;
        }
        Ok(t)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn word(&self) -> &[u8] {
        &self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.length.len()
    }

    pub fn distinct_palindromes(&self) -> usize {
        self.length.len() - 2
    }

    /// Longest palindromic suffix of the buffer.
    pub fn last(&self) -> NodeId {
        NodeId(self.last)
    }

    pub fn node(&self, id: NodeId) -> PalNode {
        let i = id.0 as usize;
        PalNode {
            id,
            length: self.length[i],
            suffix_link: NodeId(self.link[i]),
            created_at: (self.created_at[i] != NO_NODE).then_some(self.created_at[i] as usize),
        }
    }

    pub fn border_edge(&self, from: NodeId, symbol: u8) -> Option<NodeId> {
        if symbol >= self.alphabet {
            return None;
        }
        let to = self.edges[from.0 as usize * self.alphabet as usize + symbol as usize];
        (to != NO_NODE).then_some(NodeId(to))
    }

    /// Symbols of the palindrome a node stands for (empty for both roots).
    pub fn palindrome(&self, id: NodeId) -> &[u8] {
        let node = self.node(id);
        match node.created_at {
            Some(end) => &self.buf[end + 1 - node.length as usize..=end],
            None => &[],
        }
    }

    #[inline]
    fn extends(&self, node: u32, pos: usize, a: u8) -> bool {
        // buf[pos - 1 - len] == a, with len = -1 always matching.
        let back = pos as i64 - 1 - self.length[node as usize] as i64;
        back >= 0 && self.buf[back as usize] == a
    }

    pub fn append(&mut self, a: u8) -> Result<Appended, EertreeError> {
        if a >= self.alphabet {
            return Err(EertreeError::SymbolOutOfAlphabet { symbol: a, alphabet: self.alphabet });
        }
        let k = self.alphabet as usize;
        let pos = self.buf.len();
        self.buf.push(a);
        let mut cur = self.last;
        while !self.extends(cur, pos, a) {
            cur = self.link[cur as usize];
        }
        let existing = self.edges[cur as usize * k + a as usize];
        if existing != NO_NODE {
            self.log.push(UndoRecord { prev_last: self.last, parent: NO_NODE });
            self.last = existing;
            return Ok(Appended { created_new: false, node: NodeId(existing) });
        }
        let new_len = self.length[cur as usize] + 2;
        let new_link = if new_len == 1 {
            1
        } else {
            let mut s = self.link[cur as usize];
            while !self.extends(s, pos, a) {
                s = self.link[s as usize];
            }
            self.edges[s as usize * k + a as usize]
        };
        let id = self.length.len() as u32;
        self.length.push(new_len);
        self.link.push(new_link);
        self.created_at.push(pos as u32);
        self.edges.extend(std::iter::repeat_n(NO_NODE, k));
        self.edges[cur as usize * k + a as usize] = id;
        self.log.push(UndoRecord { prev_last: self.last, parent: cur });
        self.last = id;
        Ok(Appended { created_new: true, node: NodeId(id) })
    }

    /// Reverts the most recent append.
    pub fn undo(&mut self) -> Result<(), EertreeError> {
        let rec = self.log.pop().ok_or(EertreeError::UndoOnEmpty)?;
        let a = self.buf.pop().expect("log and buffer have equal length");
        if rec.parent != NO_NODE {
            let k = self.alphabet as usize;
            self.edges[rec.parent as usize * k + a as usize] = NO_NODE;
            self.length.pop();
            self.link.pop();
            self.created_at.pop();
            self.edges.truncate(self.edges.len() - k);
        }
        self.last = rec.prev_last;
        Ok(())
    }

    /// Deterministic description of nodes, border edges and suffix edges.
    pub fn palindrome_graph(&self) -> PalindromeGraph {
        let mut nodes = Vec::with_capacity(self.node_count());
        let mut border_edges = Vec::new();
        let mut suffix_edges = Vec::new();
        for i in 0..self.node_count() as u32 {
            let id = NodeId(i);
            let label = match i {
                0 => "γ".to_string(),
                1 => "ε".to_string(),
                _ => crate::render_symbols(self.palindrome(id)),
            };
            nodes.push(GraphNode { id: i, length: self.length[i as usize], label });
            for a in 0..self.alphabet {
                if let Some(to) = self.border_edge(id, a) {
                    border_edges.push(BorderEdge { from: i, to: to.0, symbol: a });
                }
            }
            if i != 0 {
                suffix_edges.push(SuffixEdge { from: i, to: self.link[i as usize] });
            }
        }
        PalindromeGraph { word: crate::render_symbols(&self.buf), nodes, border_edges, suffix_edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub id: u32,
    pub length: i32,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorderEdge {
    pub from: u32,
    pub to: u32,
    pub symbol: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuffixEdge {
    pub from: u32,
    pub to: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PalindromeGraph {
    pub word: String,
    pub nodes: Vec<GraphNode>,
    pub border_edges: Vec<BorderEdge>,
    pub suffix_edges: Vec<SuffixEdge>,
}

impl PalindromeGraph {
    /// Graphviz rendering; suffix edges are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph palindromes {\n");
        let _ = writeln!(out, "  // word: {}", self.word);
        for n in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, n.label);
        }
        for e in &self.border_edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.symbol);
        }
        for e in &self.suffix_edges {
            let _ = writeln!(out, "  n{} -> n{} [style=dashed];", e.from, e.to);
        }
        out.push_str("}\n");
        out
    }
}

fn alphabet_for(word: &[u8]) -> u8 {
    word.iter().max().map_or(1, |&m| m + 1)
}

pub fn distinct_palindromes(word: &[u8]) -> usize {
    Eertree::from_word(alphabet_for(word), word)
        .expect("alphabet covers the word")
        .distinct_palindromes()
}

/// Length of the shortest prefix that is not rich, if any.
pub fn first_non_rich_prefix(word: &[u8]) -> Option<usize> {
    let mut t = Eertree::new(alphabet_for(word));
    for (i, &a) in word.iter().enumerate() {
        if !t.append(a).expect("alphabet covers the word").created_new {
            return Some(i + 1);
        }
    }
    None
}

/// Every prefix has a unioccurrent palindromic suffix.
pub fn is_rich(word: &[u8]) -> bool {
    first_non_rich_prefix(word).is_none()
}

pub fn rich_factor(word: &[u8], start: usize, len: usize) -> Result<bool, EertreeError> {
    match start.checked_add(len) {
        Some(end) if end <= word.len() => Ok(is_rich(&word[start..end])),
        _ => Err(EertreeError::OutOfRange { start, len, word_len: word.len() }),
    }
}

/// `Θ(w) = π(reverse(w))` for an involutive letter permutation `π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antimorphism {
    letter_map: Vec<u8>,
}

impl Antimorphism {
    pub fn new(letter_map: Vec<u8>) -> Result<Self, EertreeError> {
        let n = letter_map.len() as u8;
        for (s, &img) in letter_map.iter().enumerate() {
            if img >= n {
                return Err(EertreeError::SymbolOutOfAlphabet { symbol: img, alphabet: n });
            }
            let back = letter_map[img as usize];
            if back as usize != s {
                return Err(EertreeError::NotInvolutive { symbol: s as u8, image: img, back });
            }
        }
        Ok(Antimorphism { letter_map })
    }

    /// Plain reversal.
    pub fn reversal(alphabet: u8) -> Self {
        Antimorphism { letter_map: (0..alphabet).collect() }
    }

    pub fn alphabet(&self) -> u8 {
        self.letter_map.len() as u8
    }

    pub fn map_letter(&self, a: u8) -> u8 {
        self.letter_map[a as usize]
    }

    pub fn apply(&self, w: &[u8]) -> Vec<u8> {
        w.iter().rev().map(|&a| self.map_letter(a)).collect()
    }
}

/// `D(w) = |w| + 1 - γ(w) - |Pal(w)|`, where `Pal(w)` counts distinct
/// Θ-palindromic factors including the empty word.
pub fn defect(word: &[u8], theta: &Antimorphism) -> Result<usize, EertreeError> {
    let k = theta.alphabet();
    if let Some(&bad) = word.iter().find(|&&a| a >= k) {
        return Err(EertreeError::SymbolOutOfAlphabet { symbol: bad, alphabet: k });
    }
    let n = word.len();
    let mut pals: HashSet<&[u8]> = HashSet::new();
    pals.insert(&[]);
    // Expand around every center; odd centers need a Θ-fixed letter.
    for center in 0..n {
        if theta.map_letter(word[center]) == word[center] {
            let (mut l, mut r) = (center as isize, center);
            while l >= 0 && r < n && word[l as usize] == theta.map_letter(word[r]) {
                pals.insert(&word[l as usize..=r]);
                l -= 1;
                r += 1;
            }
        }
        let (mut l, mut r) = (center as isize, center + 1);
        while l >= 0 && r < n && word[l as usize] == theta.map_letter(word[r]) {
            pals.insert(&word[l as usize..=r]);
            l -= 1;
            r += 1;
        }
    }
    let mut seen = vec![false; k as usize];
    for &a in word {
        seen[a as usize] = true;
    }
    let gamma = (0..k)
        .filter(|&a| {
            let b = theta.map_letter(a);
            a < b && (seen[a as usize] || seen[b as usize])
        })
        .count();
    Ok(n + 1 - gamma - pals.len())
}

#[cfg(test)]
pub(crate) mod oracle {
    use std::collections::HashSet;

    /// Distinct nonempty palindromic factors by enumerating every factor.
    pub fn brute_force_palindromes(w: &[u8]) -> usize {
        let mut set: HashSet<&[u8]> = HashSet::new();
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                let f = &w[i..j];
                if f.iter().eq(f.iter().rev()) {
                    set.insert(f);
                }
            }
        }
        set.len()
    }

    pub fn all_words(alphabet: u8, len: usize) -> impl Iterator<Item = Vec<u8>> {
        let total = (alphabet as u64).pow(len as u32);
        (0..total).map(move |mut code| {
            let mut w = vec![0u8; len];
            for slot in w.iter_mut() {
                *slot = (code % alphabet as u64) as u8;
                code /= alphabet as u64;
            }
            w
        })
    }
}
