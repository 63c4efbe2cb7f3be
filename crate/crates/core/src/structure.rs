//! Finite ternary betweenness structures `(N, B)`.
//!
//! Nodes are identified by string tokens and handled internally by their
//! position in declaration order. Triples are stored once, in the orientation
//! whose first entry has the smaller index, so `(x, y, z)` and `(z, y, x)`
//! always denote the same fact.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::{self, NodeTable};

/// Largest node count for which membership is answered from a dense bit cube.
const DENSE_LIMIT: usize = 512;

/// A betweenness fact `B(x, y, z)`: `y` lies between `x` and `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Triple {
    /// Builds the canonical orientation of `(x, y, z)`; `None` if two entries coincide.
    pub fn canonical(x: usize, y: usize, z: usize) -> Option<Triple> {
        if x == y || y == z || x == z {
            return None;
        }
        Some(if x < z {
            Triple { x, y, z }
        } else {
            Triple { x: z, y, z: x }
        })
    }

    pub fn reversed(self) -> Triple {
        Triple {
            x: self.z,
            y: self.y,
            z: self.x,
        }
    }

    pub fn as_array(self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }
}

/// Outcome of checking a property: either it holds, or a falsifying witness is attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// A falsifying assignment: node indices in the order of the checked property's variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub nodes: Vec<usize>,
    pub reason: String,
}

impl Verdict {
    pub fn holds() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(nodes: Vec<usize>, reason: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(Witness {
                nodes,
                reason: reason.into(),
            }),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.holds
    }

    pub fn witness_nodes(&self) -> Option<&[usize]> {
        self.witness.as_ref().map(|w| w.nodes.as_slice())
    }
}

#[derive(Debug, Clone)]
enum Membership {
    Dense { n: usize, bits: Vec<u64> },
    Sparse,
}

/// A finite set of nodes with a symmetric ternary relation.
#[derive(Debug, Clone)]
pub struct BetweennessStructure {
    name: Option<String>,
    table: NodeTable,
    triples: BTreeSet<Triple>,
    membership: Membership,
}

impl PartialEq for BetweennessStructure {
    fn eq(&self, other: &Self) -> bool {
        self.table.names == other.table.names && self.triples == other.triples
    }
}

impl Eq for BetweennessStructure {}

impl BetweennessStructure {
    /// Builds a structure from node names and index triples.
    ///
    /// Triples with a repeated entry are rejected; each triple is stored with
    /// its reversal implied.
    pub fn new<I, S, T>(names: I, triples: T) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
        T: IntoIterator<Item = (usize, usize, usize)>,
    {
        let table = NodeTable::from_names(names)?;
        let n = table.names.len();
        let mut set = BTreeSet::new();
        for (x, y, z) in triples {
            for v in [x, y, z] {
                if v >= n {
                    return Err(Error::UnknownNode(format!("#{v}")));
                }
            }
            let t = Triple::canonical(x, y, z).ok_or_else(|| {
                Error::RepeatedEntry(table.names[x].clone(), table.names[y].clone(), table.names[z].clone())
            })?;
            set.insert(t);
        }
        Ok(Self::from_parts(None, table, set))
    }

    /// A structure with no triples.
    pub fn trivial<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::new(names, std::iter::empty())
    }

    pub fn builder<I, S>(names: I) -> Result<Builder>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Ok(Builder {
            table: NodeTable::from_names(names)?,
            name: None,
            triples: BTreeSet::new(),
        })
    }

    fn from_parts(name: Option<String>, table: NodeTable, triples: BTreeSet<Triple>) -> Self {
        let n = table.names.len();
        let membership = if n <= DENSE_LIMIT {
            let mut bits = vec![0u64; (n * n * n).div_ceil(64)];
            for t in &triples {
                for (a, b, c) in [(t.x, t.y, t.z), (t.z, t.y, t.x)] {
                    let k = (a * n + b) * n + c;
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
            Membership::Dense { n, bits }
        } else {
            Membership::Sparse
        };
        BetweennessStructure {
            name,
            table,
            triples,
            membership,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.table.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.table.names
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.table.names[v]
    }

    /// Index of the node called `name`.
    pub fn id(&self, name: &str) -> Result<usize> {
        self.table.lookup(name)
    }

    pub fn ids(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.id(n)).collect()
    }

    /// Canonically oriented triples, sorted.
    pub fn triples(&self) -> impl ExactSizeIterator<Item = Triple> + '_ {
        self.triples.iter().copied()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    /// True when `B` is empty.
    pub fn is_trivial(&self) -> bool {
        self.triples.is_empty()
    }

    /// Both orientations of every stored triple, in lexicographic order.
    pub fn oriented_triples(&self) -> Vec<Triple> {
        let mut all: Vec<Triple> = self.triples.iter().flat_map(|t| [*t, t.reversed()]).collect();
        all.sort_unstable();
        all
    }

    /// `B(x, y, z)`. Out-of-range indices are simply not members.
    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        match &self.membership {
            Membership::Dense { n, bits } => {
                let n = *n;
                if x >= n || y >= n || z >= n {
                    return false;
                }
                let k = (x * n + y) * n + z;
                bits[k / 64] >> (k % 64) & 1 == 1
            }
            Membership::Sparse => Triple::canonical(x, y, z).is_some_and(|t| self.triples.contains(&t)),
        }
    }

    /// `B⁺(x₁, …, xₙ)`: every `(xᵢ, xⱼ, xₖ)` with `i < j < k` is a member.
    pub fn contains_chain(&self, chain: &[usize]) -> bool {
        let n = chain.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.contains(chain[i], chain[j], chain[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(format!("#{v}")))
        }
    }

    /// `x, y, z` are aligned: one of them lies between the other two.
    pub fn aligned(&self, x: usize, y: usize, z: usize) -> Result<bool> {
        for v in [x, y, z] {
            self.check(v)?;
        }
        Ok(self.is_aligned(x, y, z))
    }

    #[inline]
    pub(crate) fn is_aligned(&self, x: usize, y: usize, z: usize) -> bool {
        self.contains(x, y, z) || self.contains(x, z, y) || self.contains(y, x, z)
    }

    /// `[x, y]_B`: the endpoints together with every node between them.
    pub fn interval(&self, x: usize, y: usize) -> Result<BTreeSet<usize>> {
        self.check(x)?;
        self.check(y)?;
        let mut out: BTreeSet<usize> = [x, y].into_iter().collect();
        if x != y {
            out.extend((0..self.len()).filter(|&z| self.contains(x, z, y)));
        }
        Ok(out)
    }

    /// The substructure induced on `subset`, keeping declaration order.
    pub fn induce(&self, subset: &BTreeSet<usize>) -> Result<BetweennessStructure> {
        for &v in subset {
            self.check(v)?;
        }
        let keep: Vec<usize> = subset.iter().copied().collect();
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let names: Vec<&str> = keep.iter().map(|&v| self.node_name(v)).collect();
        let table = NodeTable::from_names(names)?;
        let triples = self
            .triples
            .iter()
            .filter(|t| subset.contains(&t.x) && subset.contains(&t.y) && subset.contains(&t.z))
            .filter_map(|t| Triple::canonical(remap[t.x], remap[t.y], remap[t.z]))
            .collect();
        Ok(Self::from_parts(self.name.clone(), table, triples))
    }

    /// Same as [`induce`](Self::induce), addressing nodes by name.
    pub fn induce_names(&self, names: &[&str]) -> Result<BetweennessStructure> {
        let set = self.ids(names)?.into_iter().collect();
        self.induce(&set)
    }

    /// Connected components of the Gaifman graph, each sorted, ordered by smallest member.
    pub fn gaifman_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.len());
        for t in &self.triples {
            uf.union(t.x, t.y);
            uf.union(t.y, t.z);
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.len()];
        for v in 0..self.len() {
            let r = uf.find(v);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(v);
        }
        groups
    }

    /// The unique node between each pair of a non-aligned triple, if present.
    ///
    /// Returns `None` when the three nodes are aligned or no such node exists.
    /// If several candidates pass the test (possible only when the structure
    /// violates the basic axioms) the first in declaration order is returned;
    /// see [`median_candidates`](Self::median_candidates).
    pub fn median(&self, x: usize, y: usize, z: usize) -> Result<Option<usize>> {
        Ok(self.median_candidates(x, y, z)?.into_iter().next())
    }

    /// Every `w` with `B(x,w,y) ∧ B(y,w,z) ∧ B(x,w,z)`, empty when `x, y, z` are aligned.
    pub fn median_candidates(&self, x: usize, y: usize, z: usize) -> Result<Vec<usize>> {
        for v in [x, y, z] {
            self.check(v)?;
        }
        if x == y || y == z || x == z {
            return Err(Error::InvalidArgument("median needs three distinct nodes".into()));
        }
        if self.is_aligned(x, y, z) {
            return Ok(Vec::new());
        }
        Ok((0..self.len())
            .filter(|&w| self.contains(x, w, y) && self.contains(y, w, z) && self.contains(x, w, z))
            .collect())
    }

    /// Nodes reachable from `start` in the Gaifman graph (breadth-first).
    pub fn reachable_from(&self, start: usize) -> BTreeSet<usize> {
        let mut adj = vec![BTreeSet::new(); self.len()];
        for t in &self.triples {
            for (a, b) in [(t.x, t.y), (t.y, t.z), (t.x, t.z)] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Reads the `.bst` text format.
    pub fn parse(text: &str) -> Result<BetweennessStructure> {
        let mut name = None;
        let mut table = NodeTable::default();
        let mut triples = BTreeSet::new();
        for d in text::directives(text)? {
            let at = |e| Error::at_line(d.line, e);
            match d.keyword {
                "structure" => text::header_name(&d, &mut name)?,
                "nodes" => {
                    for a in &d.args {
                        table.declare(a).map_err(at)?;
                    }
                }
                "chain" => {
                    if d.args.len() < 3 {
                        return Err(at(Error::ChainTooShort(d.args.len())));
                    }
                    let ids: Vec<usize> = d
                        .args
                        .iter()
                        .map(|a| table.lookup(a))
                        .collect::<Result<_>>()
                        .map_err(at)?;
                    for i in 0..ids.len() {
                        for j in i + 1..ids.len() {
                            for k in j + 1..ids.len() {
                                let t = Triple::canonical(ids[i], ids[j], ids[k]).ok_or_else(|| {
                                    at(Error::RepeatedEntry(
                                        d.args[i].into(),
                                        d.args[j].into(),
                                        d.args[k].into(),
                                    ))
                                })?;
                                triples.insert(t);
                            }
                        }
                    }
                }
                "triple" => {
                    let [x, y, z] = d.args.as_slice() else {
                        return Err(at(Error::Syntax("`triple` takes exactly three nodes".into())));
                    };
                    let (a, b, c) = (
                        table.lookup(x).map_err(at)?,
                        table.lookup(y).map_err(at)?,
                        table.lookup(z).map_err(at)?,
                    );
                    let t = Triple::canonical(a, b, c)
                        .ok_or_else(|| at(Error::RepeatedEntry((*x).into(), (*y).into(), (*z).into())))?;
                    triples.insert(t);
                }
                other => {
                    return Err(at(Error::Syntax(format!("unknown directive `{other}`"))));
                }
            }
        }
        Ok(Self::from_parts(name, table, triples))
    }

    /// Writes the `.bst` text format: one `triple` line per stored triple.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("structure {n}\n"));
        }
        out.push_str("nodes");
        for n in &self.table.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for t in &self.triples {
            out.push_str(&format!(
                "triple {} {} {}\n",
                self.node_name(t.x),
                self.node_name(t.y),
                self.node_name(t.z)
            ));
        }
        out
    }

    /// Renders a tuple of node indices with their names.
    pub fn show(&self, nodes: &[usize]) -> String {
        let parts: Vec<&str> = nodes.iter().map(|&v| self.node_name(v)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for BetweennessStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Incremental construction by node name, mirroring the `chain`/`triple` directives.
#[derive(Debug, Clone)]
pub struct Builder {
    table: NodeTable,
    name: Option<String>,
    triples: BTreeSet<Triple>,
}

impl Builder {
    pub fn name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// Adds `B⁺` of the given sequence.
    pub fn chain(mut self, nodes: &[&str]) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::ChainTooShort(nodes.len()));
        }
        let ids: Vec<usize> = nodes.iter().map(|n| self.table.lookup(n)).collect::<Result<_>>()?;
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                for k in j + 1..ids.len() {
                    let t = Triple::canonical(ids[i], ids[j], ids[k])
                        .ok_or_else(|| Error::RepeatedEntry(nodes[i].into(), nodes[j].into(), nodes[k].into()))?;
                    self.triples.insert(t);
                }
            }
        }
        Ok(self)
    }

    pub fn triple(mut self, x: &str, y: &str, z: &str) -> Result<Self> {
        let (a, b, c) = (self.table.lookup(x)?, self.table.lookup(y)?, self.table.lookup(z)?);
        let t = Triple::canonical(a, b, c).ok_or_else(|| Error::RepeatedEntry(x.into(), y.into(), z.into()))?;
        self.triples.insert(t);
        Ok(self)
    }

    pub fn build(self) -> BetweennessStructure {
        BetweennessStructure::from_parts(self.name, self.table, self.triples)
    }
}
