//! Parity vectors and the unordered-majorization order on them.
//!
//! `V` precedes `W` when `W` is reached from `V` by repeatedly turning an
//! adjacent `01` into `10`. Equivalently, both have the same length and the
//! same number of ones, and every prefix sum of `V` is at most the matching
//! prefix sum of `W`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::dynamics::{parity_vector_u64, shortcut_remainder_u128};
use crate::{Error, Result};

/// Largest length accepted by [`hasse`] unless the caller raises it.
pub const DEFAULT_HASSE_CAP: u64 = 16;

/// Bit sequence packed into 64-bit words, bit 0 first.
#[derive(Clone, Debug)]
pub struct ParityVector {
    words: Vec<u64>,
    len: usize,
    ones: usize,
}

impl ParityVector {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = alloc::vec![0u64; bits.len().div_ceil(64)];
        let mut ones = 0;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
                ones += 1;
            }
        }
        ParityVector { words, len: bits.len(), ones }
    }

    /// Parses a plain binary word such as `"0110"`.
    pub fn from_word(word: &str) -> Result<Self> {
        let bits = word
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(alloc::format!("bad parity digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParityVector::from_bits(&bits))
    }

    /// `<0^(j-q) 1^q>`, the least vector of its class.
    pub fn minimum(j: usize, q: usize) -> Self {
        let bits: Vec<bool> = (0..j).map(|i| i >= j - q).collect();
        ParityVector::from_bits(&bits)
    }

    /// `<1^q 0^(j-q)>`, the greatest vector of its class.
    pub fn maximum(j: usize, q: usize) -> Self {
        let bits: Vec<bool> = (0..j).map(|i| i < q).collect();
        ParityVector::from_bits(&bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    fn with_swapped(&self, i: usize) -> Self {
        let mut bits: Vec<bool> = self.bits().collect();
        bits.swap(i, i + 1);
        ParityVector::from_bits(&bits)
    }

    pub fn to_word(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Run-length form, e.g. `1^2 0^3 1`.
    pub fn run_length(&self) -> String {
        let mut out = String::new();
        let mut bits = self.bits().peekable();
        while let Some(b) = bits.next() {
            let mut run = 1;
            while bits.peek() == Some(&b) {
                bits.next();
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push(if b { '1' } else { '0' });
            if run > 1 {
                out.push_str(&alloc::format!("^{run}"));
            }
        }
        out
    }
}

impl PartialEq for ParityVector {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for ParityVector {}

impl Hash for ParityVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.words.hash(state);
    }
}

/// Lexicographic order on binary words, `0 < 1`, shorter prefix first.
impl Ord for ParityVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits().cmp(other.bits())
    }
}

impl PartialOrd for ParityVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.run_length())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosetRelation {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Prefix-sum dominance.
pub fn compare(v: &ParityVector, w: &ParityVector) -> PosetRelation {
    if v.len() != w.len() || v.ones() != w.ones() {
        return PosetRelation::Incomparable;
    }
    if v == w {
        return PosetRelation::Equal;
    }
    let (mut sv, mut sw) = (0usize, 0usize);
    let (mut below, mut above) = (true, true);
    for (a, b) in v.bits().zip(w.bits()) {
        sv += a as usize;
        sw += b as usize;
        below &= sv <= sw;
        above &= sv >= sw;
    }
    match (below, above) {
        (true, _) => PosetRelation::Less,
        (_, true) => PosetRelation::Greater,
        _ => PosetRelation::Incomparable,
    }
}

/// Upper covers: every vector obtained by one `01 -> 10` swap.
pub fn covers(v: &ParityVector) -> Vec<ParityVector> {
    let mut out: Vec<ParityVector> = (0..v.len().saturating_sub(1))
        .filter(|&i| !v.bit(i) && v.bit(i + 1))
        .map(|i| v.with_swapped(i))
        .collect();
    out.sort();
    out
}

/// Everything reachable from `v` through covers, `v` included.
pub fn upset(v: &ParityVector) -> BTreeSet<ParityVector> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([v.clone()]);
    while let Some(u) = queue.pop_front() {
        if !seen.insert(u.clone()) {
            continue;
        }
        queue.extend(covers(&u));
    }
    seen
}

/// All vectors of length `j` with exactly `q` ones, in lexicographic order.
pub fn class(j: usize, q: usize) -> Vec<ParityVector> {
    fn fill(j: usize, q: usize, ones: usize, prefix: &mut Vec<bool>, out: &mut Vec<ParityVector>) {
        if prefix.len() == j {
            out.push(ParityVector::from_bits(prefix));
            return;
        }
        let left = j - prefix.len();
        if q - ones < left {
            prefix.push(false);
            fill(j, q, ones, prefix, out);
            prefix.pop();
        }
        if ones < q {
            prefix.push(true);
            fill(j, q, ones + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if q <= j {
        fill(j, q, 0, &mut Vec::with_capacity(j), &mut out);
    }
    out
}

/// Hasse diagram of one `(length, ones)` class. Edges point from a vector to
/// its upper covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hasse {
    pub length: usize,
    pub ones: usize,
    pub nodes: Vec<ParityVector>,
    pub edges: Vec<(usize, usize)>,
}

impl Hasse {
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = alloc::vec![false; self.nodes.len()];
        for &(_, to) in &self.edges {
            has_in[to] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_in[i]).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = alloc::vec![false; self.nodes.len()];
        for &(from, _) in &self.edges {
            has_out[from] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }

    /// Kahn's algorithm; true when every node gets ordered.
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg = alloc::vec![0usize; n];
        let mut succ = alloc::vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            indeg[b] += 1;
            succ[a].push(b);
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut ordered = 0;
        while let Some(u) = ready.pop() {
            ordered += 1;
            for &v in &succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(v);
                }
            }
        }
        ordered == n
    }

    /// No edge is implied by a longer path.
    pub fn is_transitively_reduced(&self) -> bool {
        let n = self.nodes.len();
        let mut succ = alloc::vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            succ[a].push(b);
        }
        self.edges.iter().all(|&(a, b)| {
            // search from a's other successors for b
            let mut seen = alloc::vec![false; n];
            let mut stack: Vec<usize> = succ[a].iter().copied().filter(|&s| s != b).collect();
            while let Some(u) = stack.pop() {
                if u == b {
                    return false;
                }
                if !core::mem::replace(&mut seen[u], true) {
                    stack.extend(succ[u].iter().copied());
                }
            }
            true
        })
    }
}

pub fn hasse(j: usize, q: usize) -> Result<Hasse> {
    hasse_with_cap(j, q, DEFAULT_HASSE_CAP)
}

pub fn hasse_with_cap(j: usize, q: usize, cap: u64) -> Result<Hasse> {
    if q > j {
        return Err(Error::OnesExceedLength { j: j as u64, q: q as u64 });
    }
    if j as u64 > cap {
        return Err(Error::CapExceeded { j: j as u64, cap });
    }
    let nodes = class(j, q);
    let index: BTreeMap<&ParityVector, usize> = nodes.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, v) in nodes.iter().enumerate() {
        for w in covers(v) {
            edges.push((i, index[&w]));
        }
    }
    Ok(Hasse { length: j, ones: q, nodes, edges })
}

/// A comparable residue pair whose remainders are not strictly ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub lesser: u64,
    pub greater: u64,
}

/// For every pair of residues `m, n` in `1..=2^j` with `V_j(m) < V_j(n)`,
/// checks `E_j(m) > E_j(n)`. Returns the violations found.
pub fn check_remainder_monotonicity(j: u32) -> Result<Vec<MonotonicityViolation>> {
    if j > 16 {
        return Err(Error::CapExceeded { j: j as u64, cap: 16 });
    }
    let mut by_ones: BTreeMap<usize, Vec<(u64, ParityVector, u128)>> = BTreeMap::new();
    for n in 1..=(1u64 << j) {
        let v = parity_vector_u64(n, j as usize).expect("small residues never overflow");
        let e = shortcut_remainder_u128(n, j).expect("small residues never overflow");
        by_ones.entry(v.ones()).or_default().push((n, v, e));
    }
    let mut violations = Vec::new();
    for group in by_ones.values() {
        for (m, vm, em) in group {
            for (n, vn, en) in group {
                if compare(vm, vn) == PosetRelation::Less && em <= en {
                    violations.push(MonotonicityViolation { lesser: *m, greater: *n });
                }
            }
        }
    }
    Ok(violations)
}
