//! Finite strict partial orders viewed as O-forests, O-trees and join-trees.
//!
//! The strict order is stored transitively closed, one bitset row per node
//! holding its strict upper set. Edges are read as `cover x y`, meaning
//! `x < y`; the declared pairs need not be Hasse covers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{BetweennessStructure, Triple};
use crate::text::{self, NodeTable};

/// How tree-like a poset is. Each kind implies every smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OTreeKind {
    NotOforest,
    Oforest,
    Otree,
    Jointree,
    RootedTree,
}

impl fmt::Display for OTreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OTreeKind::NotOforest => "not_oforest",
            OTreeKind::Oforest => "oforest",
            OTreeKind::Otree => "otree",
            OTreeKind::Jointree => "jointree",
            OTreeKind::RootedTree => "rooted_tree",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }
    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn union_with(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= *b;
        }
    }
}

/// A finite strict partial order on named nodes.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    name: Option<String>,
    table: NodeTable,
    /// `above[x]` has bit `y` set iff `x < y`.
    above: Vec<BitRow>,
    cover_input: Vec<(usize, usize)>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.table.names == other.table.names && self.above == other.above
    }
}

impl Eq for FinitePoset {}

impl FinitePoset {
    /// Builds the transitive closure of `pairs` (each `(x, y)` meaning `x < y`).
    pub fn new<I, S>(names: I, pairs: &[(usize, usize)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let table = NodeTable::from_names(names)?;
        for &(x, y) in pairs {
            if x >= table.names.len() || y >= table.names.len() {
                return Err(Error::UnknownNode(format!("#{}", x.max(y))));
            }
        }
        Self::close(None, table, pairs.to_vec())
    }

    /// Builds a forest from a parent array (`parents[x]` covers `x`).
    pub fn from_parents<I, S>(names: I, parents: &[Option<usize>]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let pairs: Vec<(usize, usize)> = parents
            .iter()
            .enumerate()
            .filter_map(|(x, p)| p.map(|p| (x, p)))
            .collect();
        let p = Self::new(names, &pairs)?;
        if parents.len() != p.len() {
            return Err(Error::InvalidArgument(
                "parent array length differs from node count".into(),
            ));
        }
        Ok(p)
    }

    /// Builds a poset from named `(smaller, larger)` pairs.
    pub fn from_named_covers<I, S>(names: I, covers: &[(&str, &str)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let table = NodeTable::from_names(names)?;
        let pairs = covers
            .iter()
            .map(|(x, y)| Ok((table.lookup(x)?, table.lookup(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::close(None, table, pairs)
    }

    fn close(name: Option<String>, table: NodeTable, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = table.names.len();
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(x, y) in &pairs {
            succ[x].push(y);
            indegree[y] += 1;
        }
        // Kahn's algorithm; leftovers lie on or above a cycle.
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
            return Err(Error::Cycle(table.names[stuck].clone()));
        }
        let mut above = vec![BitRow::new(n); n];
        for &v in order.iter().rev() {
            let mut row = BitRow::new(n);
            for &w in &succ[v] {
                row.set(w);
                row.union_with(&above[w]);
            }
            above[v] = row;
        }
        Ok(FinitePoset {
            name,
            table,
            above,
            cover_input: pairs,
        })
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

    pub fn id(&self, name: &str) -> Result<usize> {
        self.table.lookup(name)
    }

    pub fn ids(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.id(n)).collect()
    }

    /// The pairs as given to the constructor or parser.
    pub fn cover_input(&self) -> &[(usize, usize)] {
        &self.cover_input
    }

    /// `x < y`.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].get(y)
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.lt(y, x)
    }

    /// `N_>(x)`, ascending along the order when `x` lies in an O-forest.
    pub fn strict_upper(&self, x: usize) -> Vec<usize> {
        let mut up: Vec<usize> = (0..self.len()).filter(|&y| self.lt(x, y)).collect();
        up.sort_by_key(|&y| std::cmp::Reverse(self.strict_upper_count(y)));
        up
    }

    fn strict_upper_count(&self, x: usize) -> usize {
        self.above[x].0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `L_≥(x)`: `x` followed by its strict upper set, ascending.
    pub fn upper_line(&self, x: usize) -> Vec<usize> {
        let mut v = vec![x];
        v.extend(self.strict_upper(x));
        v
    }

    /// `N_≤(x)`, in declaration order.
    pub fn down_set(&self, x: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&y| self.le(y, x)).collect()
    }

    /// `L_≥(x, y)`: common upper bounds (including `x` or `y` themselves when comparable).
    pub fn common_upper(&self, x: usize, y: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&z| self.le(x, z) && self.le(y, z)).collect()
    }

    /// Least element of `set`, if any.
    pub fn least_of(&self, set: &BTreeSet<usize>) -> Option<usize> {
        set.iter().copied().find(|&m| set.iter().all(|&z| self.le(m, z)))
    }

    /// Least upper bound of `x` and `y`.
    pub fn join(&self, x: usize, y: usize) -> Result<Option<usize>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.join_of(x, y))
    }

    pub(crate) fn join_of(&self, x: usize, y: usize) -> Option<usize> {
        if self.le(x, y) {
            return Some(y);
        }
        if self.lt(y, x) {
            return Some(x);
        }
        self.least_of(&self.common_upper(x, y))
    }

    /// Nodes with nothing above them, in declaration order.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.strict_upper_count(x) == 0).collect()
    }

    /// The node covering `x` in an O-forest (least strict upper bound).
    pub fn parent(&self, x: usize) -> Option<usize> {
        (0..self.len()).find(|&y| self.lt(x, y) && (0..self.len()).all(|z| !self.lt(x, z) || self.le(y, z)))
    }

    /// All Hasse covers `(x, y)`: `x < y` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Children of every node, in declaration order (Hasse covers read downwards).
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut kids = vec![Vec::new(); self.len()];
        for (x, y) in self.hasse() {
            kids[y].push(x);
        }
        kids
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(format!("#{v}")))
        }
    }

    fn oforest_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&x| {
            let up = self.strict_upper(x);
            up.iter()
                .enumerate()
                .any(|(i, &a)| up[i + 1..].iter().any(|&b| !self.comparable(a, b)))
        })
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
    }

    /// Strongest kind that applies; each condition is checked directly.
    pub fn kind_of(&self) -> OTreeKind {
        if self.oforest_violation().is_some() {
            return OTreeKind::NotOforest;
        }
        if self.pairs().any(|(x, y)| self.common_upper(x, y).is_empty()) {
            return OTreeKind::Oforest;
        }
        if self.pairs().any(|(x, y)| self.join_of(x, y).is_none()) {
            return OTreeKind::Otree;
        }
        let maxes = self.maximal();
        if maxes.len() == 1 {
            OTreeKind::RootedTree
        } else {
            OTreeKind::Jointree
        }
    }

    pub fn require_oforest(&self) -> Result<()> {
        match self.oforest_violation() {
            Some(x) => Err(Error::NotOForest(self.node_name(x).to_string())),
            None => Ok(()),
        }
    }

    pub fn require_otree(&self) -> Result<()> {
        self.require_oforest()?;
        match self.pairs().find(|&(x, y)| self.common_upper(x, y).is_empty()) {
            Some((x, y)) => Err(Error::NotOTree(self.node_name(x).into(), self.node_name(y).into())),
            None => Ok(()),
        }
    }

    pub fn require_jointree(&self) -> Result<()> {
        self.require_otree()?;
        match self.pairs().find(|&(x, y)| self.join_of(x, y).is_none()) {
            Some((x, y)) => Err(Error::NotJoinTree(self.node_name(x).into(), self.node_name(y).into())),
            None => Ok(()),
        }
    }

    /// `B_F`: `y` is strictly above one of `x, z` and at most their join.
    pub fn betweenness_of(&self) -> Result<BetweennessStructure> {
        self.require_oforest()?;
        let n = self.len();
        let mut triples = Vec::new();
        for (x, z) in self.pairs() {
            let Some(j) = self.join_of(x, z) else { continue };
            for y in 0..n {
                if y == x || y == z || !self.le(y, j) {
                    continue;
                }
                if self.lt(x, y) || self.lt(z, y) {
                    triples.push((x, y, z));
                }
            }
        }
        let s = BetweennessStructure::new(self.names(), triples)?;
        Ok(match &self.name {
            Some(n) => s.with_name(n.clone()),
            None => s,
        })
    }

    /// `B_F[X]`.
    pub fn induced_betweenness(&self, subset: &BTreeSet<usize>) -> Result<BetweennessStructure> {
        self.betweenness_of()?.induce(subset)
    }

    /// The order restricted to `subset`, keeping declaration order.
    pub fn induced_order(&self, subset: &BTreeSet<usize>) -> FinitePoset {
        let keep: Vec<usize> = subset.iter().copied().collect();
        let names: Vec<&str> = keep.iter().map(|&v| self.node_name(v)).collect();
        let mut pairs = Vec::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.lt(x, y) {
                    pairs.push((i, j));
                }
            }
        }
        let mut p = FinitePoset::new(names, &pairs).expect("a suborder of a poset is a poset");
        p.name = self.name.clone();
        p
    }

    /// `lsub(X)`: the least element of the strict upper bounds of `X`.
    pub fn lsub(&self, set: &BTreeSet<usize>) -> Result<Option<usize>> {
        if set.is_empty() {
            return Err(Error::InvalidArgument("lsub of the empty set".into()));
        }
        for &v in set {
            self.check(v)?;
        }
        let bounds: BTreeSet<usize> = (0..self.len())
            .filter(|&y| set.iter().all(|&x| self.lt(x, y)))
            .collect();
        Ok(self.least_of(&bounds))
    }

    /// Join-completion: the lines `L_≥(x, y)` ordered by reverse inclusion.
    ///
    /// Returns the completed join-tree and `j`, mapping each node to the node
    /// standing for `L_≥(x)`. Those keep their names; the other lines are
    /// named `^0, ^1, …` in sorted order of their contents (the empty line,
    /// present when some pair has no upper bound, sorts first).
    pub fn join_completion(&self) -> Result<(FinitePoset, Vec<usize>)> {
        self.require_oforest()?;
        let n = self.len();
        let singles: Vec<BTreeSet<usize>> = (0..n).map(|x| self.common_upper(x, x)).collect();
        let generated: BTreeSet<BTreeSet<usize>> = self
            .pairs()
            .map(|(x, y)| self.common_upper(x, y))
            .filter(|k| !singles.contains(k))
            .collect();

        let mut names: Vec<String> = self.names().to_vec();
        let mut sets: Vec<BTreeSet<usize>> = singles;
        let mut taken: BTreeSet<String> = names.iter().cloned().collect();
        for (k, set) in generated.into_iter().enumerate() {
            names.push(fresh_name(&format!("^{k}"), &mut taken));
            sets.push(set);
        }
        let mut pairs = Vec::new();
        for a in 0..sets.len() {
            for b in 0..sets.len() {
                if a != b && sets[a].is_superset(&sets[b]) {
                    pairs.push((a, b));
                }
            }
        }
        let mut done = FinitePoset::new(&names, &pairs)?;
        done.name = self.name.clone();
        Ok((done, (0..n).collect()))
    }

    /// A rooted forest re-oriented so that `root` becomes the largest element of its component.
    pub fn rerooted(&self, root: usize) -> Result<FinitePoset> {
        self.require_oforest()?;
        self.check(root)?;
        let mut adj = vec![Vec::new(); self.len()];
        for (x, y) in self.hasse() {
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        for v in 0..self.len() {
            if !seen[v] {
                parent[v] = self.parent(v);
            }
        }
        FinitePoset::from_parents(self.names(), &parent)
    }

    /// Canonical string of an O-forest up to isomorphism (names ignored).
    pub fn shape(&self) -> Result<String> {
        self.require_oforest()?;
        let kids = self.children();
        let mut roots: Vec<String> = self.maximal().into_iter().map(|r| ahu(r, &kids)).collect();
        roots.sort();
        Ok(roots.concat())
    }

    /// Same as [`shape`](Self::shape) but each node contributes its name, so
    /// equal strings mean isomorphic via the identity on names.
    pub fn labelled_shape(&self) -> Result<String> {
        self.require_oforest()?;
        let kids = self.children();
        fn go(p: &FinitePoset, v: usize, kids: &[Vec<usize>]) -> String {
            let mut parts: Vec<String> = kids[v].iter().map(|&c| go(p, c, kids)).collect();
            parts.sort();
            format!("({}{})", p.node_name(v), parts.concat())
        }
        let mut roots: Vec<String> = self.maximal().into_iter().map(|r| go(self, r, &kids)).collect();
        roots.sort();
        Ok(roots.concat())
    }

    /// Reads the `.pos` text format.
    pub fn parse(text: &str) -> Result<FinitePoset> {
        let mut name = None;
        let mut table = NodeTable::default();
        let mut pairs = Vec::new();
        for d in text::directives(text)? {
            let at = |e| Error::at_line(d.line, e);
            match d.keyword {
                "otree" => text::header_name(&d, &mut name)?,
                "nodes" => {
                    for a in &d.args {
                        table.declare(a).map_err(at)?;
                    }
                }
                "cover" => {
                    let [x, y] = d.args.as_slice() else {
                        return Err(at(Error::Syntax("`cover` takes exactly two nodes".into())));
                    };
                    pairs.push((table.lookup(x).map_err(at)?, table.lookup(y).map_err(at)?));
                }
                other => return Err(at(Error::Syntax(format!("unknown directive `{other}`")))),
            }
        }
        Self::close(name, table, pairs)
    }

    /// Writes the `.pos` format with the Hasse covers of the order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("otree {n}\n"));
        }
        out.push_str("nodes");
        for n in self.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for (x, y) in self.hasse() {
            out.push_str(&format!("cover {} {}\n", self.node_name(x), self.node_name(y)));
        }
        out
    }
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn ahu(v: usize, kids: &[Vec<usize>]) -> String {
    let mut parts: Vec<String> = kids[v].iter().map(|&c| ahu(c, kids)).collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// `base`, or `base` followed by enough `'` marks to avoid every name in `taken`.
pub(crate) fn fresh_name(base: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// Reads a node map: one `x -> y` line per entry.
pub fn parse_map(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for d in text::directives(text)? {
        let at = |e| Error::at_line(d.line, e);
        match d.args.as_slice() {
            ["->", target] => {
                if out.insert(d.keyword.to_string(), (*target).to_string()).is_some() {
                    return Err(at(Error::DuplicateNode(d.keyword.to_string())));
                }
            }
            _ => return Err(at(Error::Syntax("expected `<node> -> <node>`".into()))),
        }
    }
    Ok(out)
}

/// Writes a node map in the format read by [`parse_map`].
pub fn map_to_text(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect()
}

/// True when `y` lies on the path from `x` to `z` in the cover graph of a forest.
///
/// Independent of [`FinitePoset::betweenness_of`]; used to cross-check it.
pub fn path_betweenness(p: &FinitePoset) -> Result<BetweennessStructure> {
    p.require_oforest()?;
    let n = p.len();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in p.hasse() {
        adj[x].push(y);
        adj[y].push(x);
    }
    let mut triples = BTreeSet::new();
    for x in 0..n {
        let mut prev = vec![usize::MAX; n];
        prev[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        for z in x + 1..n {
            if prev[z] == usize::MAX {
                continue;
            }
            let mut v = prev[z];
            while v != x {
                triples.insert(Triple::canonical(x, v, z).expect("path interior is distinct"));
                v = prev[v];
            }
        }
    }
    BetweennessStructure::new(p.names(), triples.into_iter().map(|t| (t.x, t.y, t.z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t8() -> FinitePoset {
        FinitePoset::parse(
            "otree T8\nnodes 0 1 a b c d 2 e f g h\n\
             cover b a\ncover a 1\ncover d c\ncover c 1\ncover 1 0\n\
             cover f e\ncover e 2\ncover h g\ncover g 2\ncover 2 0\n",
        )
        .unwrap()
    }

    #[test]
    fn t8_order_and_joins() {
        let t = t8();
        assert_eq!(t.len(), 11);
        let id = |s| t.id(s).unwrap();
        for (lo, mid) in [("a", "1"), ("c", "1"), ("e", "2"), ("g", "2")] {
            assert!(t.lt(id(lo), id(mid)) && t.lt(id(mid), id("0")));
        }
        assert_eq!(t.join(id("a"), id("c")).unwrap(), Some(id("1")));
        assert_eq!(t.join(id("b"), id("h")).unwrap(), Some(id("0")));
        assert_eq!(t.kind_of(), OTreeKind::RootedTree);
    }

    #[test]
    fn small_parses() {
        let p = FinitePoset::parse("nodes a b\ncover a b\n").unwrap();
        assert!(p.lt(0, 1) && !p.lt(1, 0));
        assert_eq!(p.join(0, 1).unwrap(), Some(1));
        let err = FinitePoset::parse("nodes a b\ncover a b\ncover b a\n").unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
        let err = FinitePoset::parse("nodes a\ncover a a\n").unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
        let err = FinitePoset::parse("nodes a\ncover a b\n").unwrap_err();
        assert_eq!(err.root(), &Error::UnknownNode("b".into()));
    }

    #[test]
    fn kinds() {
        let diamond =
            FinitePoset::from_named_covers(["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])
                .unwrap();
        assert_eq!(diamond.kind_of(), OTreeKind::NotOforest);
        assert!(diamond.betweenness_of().is_err());

        let two = FinitePoset::from_named_covers(["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert_eq!(two.kind_of(), OTreeKind::Oforest);
        assert_eq!(two.join(0, 2).unwrap(), None);

        let empty = FinitePoset::new(Vec::<String>::new(), &[]).unwrap();
        assert_eq!(empty.kind_of(), OTreeKind::Jointree);
        let one = FinitePoset::new(["x"], &[]).unwrap();
        assert_eq!(one.kind_of(), OTreeKind::RootedTree);
    }

    #[test]
    fn chain_betweenness() {
        let p = FinitePoset::from_named_covers(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let b = p.betweenness_of().unwrap();
        assert_eq!(b.triples().collect::<Vec<_>>(), vec![Triple { x: 0, y: 1, z: 2 }]);
    }

    #[test]
    fn t8_betweenness_matches_path_betweenness() {
        let t = t8();
        assert_eq!(t.betweenness_of().unwrap(), path_betweenness(&t).unwrap());
    }

    #[test]
    fn lsub_examples() {
        let t = t8();
        let set = |names: &[&str]| t.ids(names).unwrap().into_iter().collect::<BTreeSet<_>>();
        assert_eq!(t.lsub(&set(&["a", "b"])).unwrap(), Some(t.id("1").unwrap()));
        let chain = FinitePoset::from_named_covers(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(chain.lsub(&BTreeSet::from([0])).unwrap(), Some(1));
        let two = FinitePoset::new(["p", "q"], &[]).unwrap();
        assert_eq!(two.lsub(&BTreeSet::from([0, 1])).unwrap(), None);
        assert!(two.lsub(&BTreeSet::new()).is_err());
    }

    #[test]
    fn completion_of_isolated_nodes() {
        let p = FinitePoset::new(["a", "b"], &[]).unwrap();
        let (c, j) = p.join_completion().unwrap();
        assert_eq!(c.names(), ["a", "b", "^0"]);
        assert_eq!(j, vec![0, 1]);
        assert!(c.lt(0, 2) && c.lt(1, 2));
        assert_eq!(c.kind_of(), OTreeKind::RootedTree);
    }

    #[test]
    fn completion_of_two_chains() {
        let p = FinitePoset::from_named_covers(["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        let (c, _) = p.join_completion().unwrap();
        assert_eq!(c.len(), 5);
        let root = c.id("^0").unwrap();
        for x in ["b", "d"] {
            assert_eq!(c.parent(c.id(x).unwrap()), Some(root));
        }
    }

    #[test]
    fn completion_of_a_tree_is_the_tree() {
        let t = t8();
        let (c, j) = t.join_completion().unwrap();
        assert_eq!(c, t.clone());
        assert_eq!(j, (0..t.len()).collect::<Vec<_>>());
    }

    #[test]
    fn completion_name_collision() {
        let p = FinitePoset::new(["^0", "b"], &[]).unwrap();
        let (c, _) = p.join_completion().unwrap();
        assert_eq!(c.names(), ["^0", "b", "^0'"]);
    }

    #[test]
    fn rerooting_keeps_betweenness() {
        let t = t8();
        let b = t.betweenness_of().unwrap();
        for r in 0..t.len() {
            let u = t.rerooted(r).unwrap();
            assert_eq!(u.maximal(), vec![r]);
            assert_eq!(u.betweenness_of().unwrap(), b);
        }
    }

    #[test]
    fn text_round_trip_and_shape() {
        let t = t8();
        let again = FinitePoset::parse(&t.to_text()).unwrap();
        assert_eq!(again, t);
        assert_eq!(again.name(), Some("T8"));
        let renamed = FinitePoset::from_parents(["r", "x", "y"], &[None, Some(0), Some(0)]).unwrap();
        let other = FinitePoset::from_parents(["p", "q", "s"], &[Some(2), Some(2), None]).unwrap();
        assert_eq!(renamed.shape().unwrap(), other.shape().unwrap());
        assert_ne!(renamed.labelled_shape().unwrap(), other.labelled_shape().unwrap());
    }

    #[test]
    fn maps() {
        let m = parse_map("a -> b\n# note\nc -> +0\n").unwrap();
        assert_eq!(m.get("c").map(String::as_str), Some("+0"));
        assert!(parse_map("a b\n").is_err());
        assert!(parse_map("a -> b\na -> c\n").is_err());
        let text = map_to_text(&[("x".into(), "y".into())]);
        assert_eq!(parse_map(&text).unwrap().len(), 1);
    }
}
