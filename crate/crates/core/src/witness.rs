//! Witness join-trees for induced betweenness.
//!
//! Given a structure satisfying A1–A6 and A8 and a root `r`, the rooted order
//! `≤_r` is an O-tree on the nodes. Wherever several independent directions
//! hang below the same line, a fresh node is inserted above their union. The
//! resulting family of down-sets is laminar, and ordering it by inclusion
//! gives a join-tree whose betweenness, restricted to the original nodes, is
//! exactly `B`.

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;

use crate::axioms::{self, AxiomId};
use crate::error::{Error, Result};
use crate::poset::{fresh_name, FinitePoset};
use crate::structure::{BetweennessStructure, Verdict};

/// The order `x ≤_r y ⇔ x = y ∨ y = r ∨ B(x, y, r)` on the nodes of a structure.
#[derive(Debug, Clone)]
pub struct RootedOrder {
    base: BetweennessStructure,
    root: usize,
    poset: FinitePoset,
}

impl RootedOrder {
    pub fn base(&self) -> &BetweennessStructure {
        &self.base
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }
}

/// Builds `≤_r` and checks that it is an O-tree with largest element `r`.
pub fn order_from_root(s: &BetweennessStructure, r: usize) -> Result<RootedOrder> {
    if r >= s.len() {
        return Err(Error::UnknownNode(format!("#{r}")));
    }
    let n = s.len();
    let below = |x: usize, y: usize| x != y && (y == r || s.contains(x, y, r));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| below(x, y))
        .collect();
    let poset = FinitePoset::new(s.names(), &pairs).map_err(|e| match e {
        Error::Cycle(v) => Error::Precondition(format!("rooted order has a cycle through `{v}`")),
        other => other,
    })?;
    // The closure must add nothing: the relation is transitive when A1–A6 hold.
    for x in 0..n {
        for y in 0..n {
            if poset.lt(x, y) != below(x, y) {
                return Err(Error::Precondition(format!(
                    "rooted order is not transitive at ({}, {})",
                    s.node_name(x),
                    s.node_name(y)
                )));
            }
        }
    }
    poset.require_otree().map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(RootedOrder {
        base: s.clone(),
        root: r,
        poset,
    })
}

/// The lines `L_>(x, y)` for incomparable `x, y`, deduplicated and sorted.
pub fn lines_family(order: &RootedOrder) -> Vec<BTreeSet<usize>> {
    let p = order.poset();
    let n = p.len();
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            if !p.comparable(x, y) {
                out.insert(p.common_upper(x, y));
            }
        }
    }
    out.into_iter().collect()
}

/// The directions below an upwards-closed line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionPartition {
    pub line: BTreeSet<usize>,
    /// Blocks ordered by smallest member.
    pub directions: Vec<BTreeSet<usize>>,
}

/// Partitions `N_<(L)` into directions: `x ∼ y` iff some `u` below the line is above both.
pub fn directions(order: &RootedOrder, line: &BTreeSet<usize>) -> Result<DirectionPartition> {
    let p = order.poset();
    let n = p.len();
    if line.iter().any(|&v| v >= n) {
        return Err(Error::InvalidArgument("line mentions an unknown node".into()));
    }
    for &a in line {
        for &b in line {
            if !p.comparable(a, b) {
                return Err(Error::InvalidArgument("line is not linearly ordered".into()));
            }
        }
        if (0..n).any(|v| p.lt(a, v) && !line.contains(&v)) {
            return Err(Error::InvalidArgument("line is not upwards closed".into()));
        }
    }
    let below: Vec<usize> = (0..n).filter(|&w| line.iter().all(|&m| p.lt(w, m))).collect();
    let mut uf = UnionFind::<usize>::new(n);
    for &x in &below {
        for &u in &below {
            if p.lt(x, u) {
                uf.union(x, u);
            }
        }
    }
    let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for &x in &below {
        let root = uf.find(x);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(BTreeSet::new());
        }
        blocks[slot[root]].insert(x);
    }
    Ok(DirectionPartition {
        line: line.clone(),
        directions: blocks,
    })
}

/// Which members of the line are tried as the linking node `m` in `B(D, m, D′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkTest {
    /// Only the least element of the line can link two directions.
    #[default]
    MinimumOnly,
    /// Try every member; slower, kept to cross-check `MinimumOnly`.
    EveryMember,
}

/// Groups the directions into classes of pairwise unlinked ones.
///
/// Each class is a sorted list of indices into `part.directions`; classes
/// are ordered by smallest index. Fails if unlinkedness is not transitive,
/// which happens only when A8 does not hold.
pub fn approx_classes(order: &RootedOrder, part: &DirectionPartition, test: LinkTest) -> Result<Vec<Vec<usize>>> {
    let s = order.base();
    let p = order.poset();
    let links: Vec<usize> = match test {
        LinkTest::MinimumOnly => p.least_of(&part.line).into_iter().collect(),
        LinkTest::EveryMember => part.line.iter().copied().collect(),
    };
    let rep: Vec<usize> = part
        .directions
        .iter()
        .map(|d| *d.iter().next().expect("directions are nonempty"))
        .collect();
    let linked = |i: usize, j: usize| links.iter().any(|&m| s.contains(rep[i], m, rep[j]));
    let k = rep.len();
    let mut uf = UnionFind::<usize>::new(k);
    for i in 0..k {
        for j in i + 1..k {
            if !linked(i, j) {
                uf.union(i, j);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; k];
    for i in 0..k {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(i);
    }
    for class in &classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                if linked(i, j) {
                    return Err(Error::Precondition(format!(
                        "independence of directions is not transitive at {} and {}",
                        s.node_name(rep[i]),
                        s.node_name(rep[j])
                    )));
                }
            }
        }
    }
    Ok(classes)
}

/// The down-sets that become the nodes of the witness tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarFamily {
    /// `c1[x] = N_≤(x)`.
    pub c1: Vec<BTreeSet<usize>>,
    /// Unions of at least two independent directions, sorted and deduplicated.
    pub c2: Vec<BTreeSet<usize>>,
}

impl LaminarFamily {
    pub fn len(&self) -> usize {
        self.c1.len() + self.c2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.c1.iter().chain(&self.c2)
    }

    /// The first pair of members that overlap without being nested.
    pub fn overlap(&self) -> Option<(&BTreeSet<usize>, &BTreeSet<usize>)> {
        let all: Vec<&BTreeSet<usize>> = self.members().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

pub fn family_c(s: &BetweennessStructure, r: usize) -> Result<LaminarFamily> {
    family_c_with(s, r, LinkTest::MinimumOnly)
}

/// Builds the laminar family for root `r`, testing links with `test`.
pub fn family_c_with(s: &BetweennessStructure, r: usize, test: LinkTest) -> Result<LaminarFamily> {
    axioms::require(
        s,
        &[
            AxiomId::A1,
            AxiomId::A2,
            AxiomId::A3,
            AxiomId::A4,
            AxiomId::A5,
            AxiomId::A6,
            AxiomId::A8,
        ],
    )?;
    let order = order_from_root(s, r)?;
    let p = order.poset();
    let c1: Vec<BTreeSet<usize>> = (0..s.len()).map(|x| p.down_set(x)).collect();
    let mut c2 = BTreeSet::new();
    for line in lines_family(&order) {
        let part = directions(&order, &line)?;
        for class in approx_classes(&order, &part, test)? {
            if class.len() >= 2 {
                let union: BTreeSet<usize> = class.iter().flat_map(|&i| part.directions[i].iter().copied()).collect();
                c2.insert(union);
            }
        }
    }
    let family = LaminarFamily {
        c1,
        c2: c2.into_iter().collect(),
    };
    if let Some((a, b)) = family.overlap() {
        let show = |set: &BTreeSet<usize>| s.show(&set.iter().copied().collect::<Vec<_>>());
        return Err(Error::Overlap(format!("{} and {}", show(a), show(b))));
    }
    Ok(family)
}

/// A join-tree containing the nodes of a structure, with the node map.
#[derive(Debug, Clone)]
pub struct WitnessTree {
    pub tree: FinitePoset,
    /// `embedding[x]` is the tree node standing for structure node `x`.
    pub embedding: Vec<usize>,
    pub family: LaminarFamily,
}

/// Orders the laminar family by inclusion.
///
/// Members of the first kind keep the name of their generating node; the
/// others are named `+0, +1, …` in sorted order of their contents.
pub fn tree_of_c(s: &BetweennessStructure, r: usize) -> Result<WitnessTree> {
    let family = family_c(s, r)?;
    let mut names: Vec<String> = s.names().to_vec();
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    for k in 0..family.c2.len() {
        names.push(fresh_name(&format!("+{k}"), &mut taken));
    }
    let sets: Vec<&BTreeSet<usize>> = family.members().collect();
    let mut pairs = Vec::new();
    for (a, sa) in sets.iter().enumerate() {
        for (b, sb) in sets.iter().enumerate() {
            if a != b && sa.is_subset(sb) {
                pairs.push((a, b));
            }
        }
    }
    let tree = FinitePoset::new(&names, &pairs)?;
    let tree = match s.name() {
        Some(n) => tree.with_name(n),
        None => tree,
    };
    Ok(WitnessTree {
        tree,
        embedding: (0..s.len()).collect(),
        family,
    })
}

/// Compares `B` with the betweenness of `tree` pulled back along `embedding`.
///
/// The witness is the first triple `(x, y, z)` (with `x` before `z`) on
/// which the two sides disagree.
pub fn verify_witness(s: &BetweennessStructure, tree: &FinitePoset, embedding: &[usize]) -> Result<Verdict> {
    if embedding.len() != s.len() {
        return Err(Error::InvalidEmbedding(format!(
            "map covers {} nodes, structure has {}",
            embedding.len(),
            s.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for &v in embedding {
        if v >= tree.len() {
            return Err(Error::InvalidEmbedding(format!("target #{v} is not a tree node")));
        }
        if !seen.insert(v) {
            return Err(Error::InvalidEmbedding(format!(
                "`{}` is the image of two nodes",
                tree.node_name(v)
            )));
        }
    }
    let bt = tree.betweenness_of()?;
    let n = s.len();
    for x in 0..n {
        for z in x + 1..n {
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                let mine = s.contains(x, y, z);
                let theirs = bt.contains(embedding[x], embedding[y], embedding[z]);
                if mine != theirs {
                    let side = if mine {
                        "missing from the tree"
                    } else {
                        "extra in the tree"
                    };
                    return Ok(Verdict::fails(vec![x, y, z], side));
                }
            }
        }
    }
    Ok(Verdict::holds())
}

/// The unique ascending order of `line` with `a` before `b` whose betweenness is `B[line]`.
pub fn line_order(s: &BetweennessStructure, line: &BTreeSet<usize>, a: usize, b: usize) -> Result<Vec<usize>> {
    if a == b || !line.contains(&a) || !line.contains(&b) {
        return Err(Error::InvalidArgument("need two distinct members of the line".into()));
    }
    let sub = s.induce(line)?;
    let to_sub: Vec<usize> = line.iter().copied().collect();
    axioms::require(
        &sub,
        &[
            AxiomId::A1,
            AxiomId::A2,
            AxiomId::A3,
            AxiomId::A4,
            AxiomId::A5,
            AxiomId::A6,
            AxiomId::A7Prime,
        ],
    )?;
    // Signed distance from `a`: left of `a` is negative, the side of `b` positive.
    let key = |u: usize| -> i64 {
        if u == a {
            0
        } else if s.contains(u, a, b) {
            -1 - line.iter().filter(|&&v| s.contains(u, v, a)).count() as i64
        } else {
            1 + line.iter().filter(|&&v| s.contains(a, v, u)).count() as i64
        }
    };
    let mut seq: Vec<usize> = to_sub.clone();
    seq.sort_by_key(|&u| key(u));
    let pos: Vec<usize> = {
        let mut p = vec![0; s.len()];
        for (i, &u) in seq.iter().enumerate() {
            p[u] = i;
        }
        p
    };
    for &x in &to_sub {
        for &y in &to_sub {
            for &z in &to_sub {
                if x == y || y == z || x == z {
                    continue;
                }
                let ordered = (pos[x] < pos[y] && pos[y] < pos[z]) || (pos[z] < pos[y] && pos[y] < pos[x]);
                if ordered != s.contains(x, y, z) {
                    return Err(Error::Precondition("betweenness on the line is not linear".into()));
                }
            }
        }
    }
    Ok(seq)
}
