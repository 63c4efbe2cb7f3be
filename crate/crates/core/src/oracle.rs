//! Brute-force ground truth: exhaustive witness-tree search, random
//! generators and sampling of axiom implications.
//!
//! The witness search works with unrooted trees whose nodes are the labelled
//! nodes of the structure plus unlabelled Steiner nodes. Path betweenness
//! does not depend on a root, and any finite tree is a join-tree once rooted,
//! so a structure is induced by a finite join-tree iff it is induced by such
//! a tree. A Steiner node of degree one can be deleted and one of degree two
//! contracted without changing the betweenness among labelled nodes, so the
//! search only builds trees whose Steiner nodes have degree at least three.
//! A tree with `n ≥ 2` labelled nodes has then at most `n − 2` Steiner
//! nodes: its degrees sum to `2(n + s − 1)` and are at least `3s + n`.
//!
//! Trees are grown by inserting labels `0, 1, 2, …` one at a time. Removing
//! the largest label from a valid tree and tidying its neighbour gives a
//! valid tree on the smaller label set, possibly with one more Steiner node
//! (where the label sat on a node of degree three or more), so the four
//! insertion moves below reach every tree:
//!
//! * hang the new label as a leaf on an existing node,
//! * place it inside an existing edge,
//! * hang it from a new Steiner node placed inside an existing edge,
//! * put it on an existing Steiner node.
//!
//! Insertion never changes the paths between labels already placed, so a
//! partial tree is discarded as soon as the triples among its labels differ
//! from the target.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{satisfies, AxiomId};
use crate::error::{Error, Result};
use crate::geometry::Rat;
use crate::poset::{fresh_name, FinitePoset};
use crate::structure::{BetweennessStructure, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_extra_nodes: usize,
    /// Upper bound on the partial trees examined before giving up.
    pub max_candidates: usize,
    /// Recorded for reproducibility; the enumeration itself is deterministic.
    pub seed: u64,
}

impl SearchBudget {
    pub fn with_extra(max_extra_nodes: usize) -> SearchBudget {
        SearchBudget {
            max_extra_nodes,
            ..SearchBudget::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_extra_nodes: 0,
            max_candidates: 5_000_000,
            seed: 0,
        }
    }
}

/// A tree whose first nodes may carry labels; `label[v]` is the structure node at `v`.
#[derive(Debug, Clone)]
struct XTree {
    adj: Vec<Vec<usize>>,
    label: Vec<Option<usize>>,
    /// Tree node of each placed label.
    at: Vec<usize>,
}

impl XTree {
    fn single() -> XTree {
        XTree {
            adj: vec![vec![]],
            label: vec![Some(0)],
            at: vec![0],
        }
    }

    fn steiner_count(&self) -> usize {
        self.label.iter().filter(|l| l.is_none()).count()
    }

    fn add_node(&mut self, label: Option<usize>) -> usize {
        self.adj.push(Vec::new());
        self.label.push(label);
        self.adj.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    /// Every tree obtained by inserting label `v` (which must be the next label).
    fn insertions(&self, v: usize, extra_left: bool) -> Vec<XTree> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            let mut t = self.clone();
            let w = t.add_node(Some(v));
            t.link(u, w);
            t.at.push(w);
            out.push(t);
            if self.label[u].is_none() {
                let mut t = self.clone();
                t.label[u] = Some(v);
                t.at.push(u);
                out.push(t);
            }
        }
        for (a, b) in self.edges() {
            let mut t = self.clone();
            let w = t.add_node(Some(v));
            t.unlink(a, b);
            t.link(a, w);
            t.link(w, b);
            t.at.push(w);
            out.push(t);
            if extra_left {
                let mut t = self.clone();
                let s = t.add_node(None);
                let w = t.add_node(Some(v));
                t.unlink(a, b);
                t.link(a, s);
                t.link(s, b);
                t.link(s, w);
                t.at.push(w);
                out.push(t);
            }
        }
        out
    }

    /// Tree nodes on the path from `a` to `b`, both included.
    fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &self.adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut out = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            out.push(cur);
        }
        out
    }

    /// Triples involving label `v` agree with `s` (labels below `v` were checked earlier).
    fn consistent_at(&self, s: &BetweennessStructure, v: usize) -> bool {
        for x in 0..=v {
            for z in x + 1..=v {
                let on: BTreeSet<usize> = self
                    .path(self.at[x], self.at[z])
                    .into_iter()
                    .filter_map(|p| self.label[p])
                    .collect();
                for y in 0..=v {
                    if y == x || y == z || (x != v && y != v && z != v) {
                        continue;
                    }
                    if on.contains(&y) != s.contains(x, y, z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Canonical form with Steiner nodes anonymous, rooted at label 0.
    fn canonical(&self) -> String {
        fn go(t: &XTree, v: usize, from: usize) -> String {
            let mut kids: Vec<String> = t.adj[v].iter().filter(|&&w| w != from).map(|&w| go(t, w, v)).collect();
            kids.sort();
            let tag = t.label[v].map_or("*".to_string(), |l| l.to_string());
            format!("({tag}{})", kids.concat())
        }
        go(self, self.at[0], usize::MAX)
    }

    /// Rooted at label 0, labelled nodes first in label order, then Steiner nodes.
    fn to_poset(&self, names: &[String]) -> Result<(FinitePoset, Vec<usize>)> {
        let mut order: Vec<usize> = self.at.clone();
        order.extend((0..self.adj.len()).filter(|&v| self.label[v].is_none()));
        let mut pos = vec![0; self.adj.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut taken: BTreeSet<String> = names.iter().cloned().collect();
        let mut all = names.to_vec();
        for k in 1..=order.len() - names.len() {
            all.push(fresh_name(&format!("*{k}"), &mut taken));
        }
        let mut parents = vec![None; order.len()];
        let mut seen = vec![false; self.adj.len()];
        let root = self.at[0];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parents[pos[y]] = Some(pos[x]);
                    queue.push_back(y);
                }
            }
        }
        Ok((FinitePoset::from_parents(&all, &parents)?, (0..names.len()).collect()))
    }
}

/// Grows every tree on labels `0..n` with at most `max_extra` Steiner nodes,
/// keeping partial trees accepted by `keep`, deduplicated up to isomorphism.
fn grow(n: usize, max_extra: usize, max_candidates: usize, keep: impl Fn(&XTree, usize) -> bool) -> Result<Vec<XTree>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![XTree::single()];
    let mut examined = 0usize;
    for v in 1..n {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for t in &level {
            // A Steiner node may still receive one of the labels after `v`, so
            // partial trees may carry that many more than the final budget.
            let allowance = max_extra + (n - 1 - v);
            for c in t.insertions(v, t.steiner_count() < allowance) {
                examined += 1;
                if examined > max_candidates {
                    return Err(Error::BudgetExceeded);
                }
                if keep(&c, v) && seen.insert(c.canonical()) {
                    next.push(c);
                }
            }
        }
        level = next;
    }
    // Steiner nodes are created with degree three and degrees never drop.
    Ok(level.into_iter().filter(|t| t.steiner_count() <= max_extra).collect())
}

/// Searches for a finite tree over the nodes of `s` plus at most
/// `budget.max_extra_nodes` new ones whose induced betweenness is `s`.
///
/// Returns the tree rooted at the first node, with new nodes named `*1`, `*2`,
/// …, and the tree node of each structure node. `Ok(None)` means the
/// enumeration finished without a match; a cut-off reports
/// [`Error::BudgetExceeded`] instead.
pub fn brute_force_ibqt(s: &BetweennessStructure, budget: &SearchBudget) -> Result<Option<(FinitePoset, Vec<usize>)>> {
    let n = s.len();
    if n == 0 {
        return Ok(Some((FinitePoset::from_parents(Vec::<String>::new(), &[])?, vec![])));
    }
    let found = grow(n, budget.max_extra_nodes, budget.max_candidates, |t, v| {
        t.consistent_at(s, v)
    })?;
    match found.first() {
        Some(t) => t.to_poset(s.names()).map(Some),
        None => Ok(None),
    }
}

/// Canonical forms of every tree on `n` labels with at most `max_extra` Steiner
/// nodes of degree at least three.
pub fn labelled_tree_shapes(n: usize, max_extra: usize) -> Result<Vec<String>> {
    let mut out: Vec<String> = grow(n, max_extra, usize::MAX, |_, _| true)?
        .iter()
        .map(XTree::canonical)
        .collect();
    out.sort();
    Ok(out)
}

/// A structure with each possible triple present with probability `density`.
///
/// Triples are stored symmetrically, so each unordered `{x, z}` with middle `y` is one draw.
pub fn random_structure(n: usize, density: &Rat, seed: u64) -> BetweennessStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let p = if density.is_negative() {
        0.0
    } else {
        density.to_f64().unwrap_or(1.0).min(1.0)
    };
    let exact = density
        .numer()
        .to_u64()
        .zip(density.denom().to_u64())
        .filter(|_| !density.is_negative());
    let mut triples = Vec::new();
    for x in 0..n {
        for z in x + 1..n {
            for y in (0..n).filter(|&y| y != x && y != z) {
                let hit = match exact {
                    Some((num, den)) => rng.random_range(0..den) < num,
                    None => rng.random_bool(p),
                };
                if hit {
                    triples.push((x, y, z));
                }
            }
        }
    }
    BetweennessStructure::new(&names, triples).expect("generated triples are well-formed")
}

/// A random rooted tree on `n ≥ 1` nodes named `0..n`; declaration order is shuffled.
pub fn random_jointree(n: usize, seed: u64) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_jointree_with(n.max(1), &mut rng)
}

fn random_jointree_with(n: usize, rng: &mut ChaCha8Rng) -> FinitePoset {
    let parent: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then(|| rng.random_range(0..i))).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // Node `i` of the generated tree is declared at position `perm[i]`.
    let mut parents = vec![None; n];
    for i in 0..n {
        parents[perm[i]] = parent[i].map(|p| perm[p]);
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FinitePoset::from_parents(&names, &parents).expect("parent arrays give trees")
}

/// The betweenness induced on a random subset of a random tree.
pub fn random_induced_structure(n: usize, extra: usize, seed: u64) -> BetweennessStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_induced_with(n, extra, &mut rng)
}

fn random_induced_with(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> BetweennessStructure {
    let t = random_jointree_with(n + extra, rng);
    let mut nodes: Vec<usize> = (0..t.len()).collect();
    nodes.shuffle(rng);
    let keep: BTreeSet<usize> = nodes.into_iter().take(n).collect();
    t.induced_betweenness(&keep).expect("trees have betweenness")
}

#[derive(Debug, Clone, Serialize)]
pub struct ImplicationReport {
    pub premises: Vec<AxiomId>,
    pub conclusion: AxiomId,
    /// Structures drawn in total.
    pub attempts: usize,
    /// Structures satisfying every premise.
    pub samples: usize,
    pub violations: usize,
    /// The first sample satisfying the premises but not the conclusion, in `.bst` format.
    pub counterexample: Option<String>,
}

/// Samples structures, keeps those satisfying `premises` and counts the ones
/// violating `conclusion`.
///
/// The fixed corpus structures are tried first, the A8 separation example
/// leading, then a mix of uniformly random
/// structures, tree betweenness, induced tree betweenness and single-triple
/// perturbations of the latter. Stops after `samples` kept structures or
/// `50·samples` draws.
pub fn implication_suite(premises: &[AxiomId], conclusion: AxiomId, samples: usize, seed: u64) -> ImplicationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ImplicationReport {
        premises: premises.to_vec(),
        conclusion,
        attempts: 0,
        samples: 0,
        violations: 0,
        counterexample: None,
    };
    // The A8 separation example goes first so that it is the reported counterexample.
    let mut seeds: Vec<BetweennessStructure> = crate::corpus::entries()
        .iter()
        .filter_map(|e| e.structure().ok())
        .collect();
    seeds.sort_by_key(|s| s.name() != Some("A8-separation"));
    let mut seeds = seeds.into_iter();
    let limit = samples.saturating_mul(50);
    while report.samples < samples && report.attempts < limit {
        report.attempts += 1;
        let s = match seeds.next() {
            Some(s) => s,
            None => draw(&mut rng),
        };
        if !satisfies(&s, premises) {
            continue;
        }
        report.samples += 1;
        if !satisfies(&s, &[conclusion]) {
            report.violations += 1;
            report.counterexample.get_or_insert_with(|| s.to_text());
        }
    }
    report
}

fn draw(rng: &mut ChaCha8Rng) -> BetweennessStructure {
    let n = rng.random_range(3..=6);
    match rng.random_range(0..4) {
        0 => {
            let den = rng.random_range(2..=12);
            let density = Rat::new(1.into(), (den as i64).into());
            random_structure(n, &density, rng.random())
        }
        1 => random_jointree_with(n, rng)
            .betweenness_of()
            .expect("trees have betweenness"),
        2 => {
            let extra = rng.random_range(0..=3);
            random_induced_with(n, extra, rng)
        }
        _ => {
            let s = random_induced_with(n, rng.random_range(0..=3), rng);
            perturb(&s, rng)
        }
    }
}

/// Toggles one random triple.
fn perturb(s: &BetweennessStructure, rng: &mut ChaCha8Rng) -> BetweennessStructure {
    let n = s.len();
    let x = rng.random_range(0..n);
    let mut others: Vec<usize> = (0..n).filter(|&v| v != x).collect();
    others.shuffle(rng);
    let (y, z) = (others[0], others[1]);
    let t = Triple::canonical(x, y, z).expect("distinct");
    let mut triples: Vec<(usize, usize, usize)> = s.triples().filter(|&u| u != t).map(|u| (u.x, u.y, u.z)).collect();
    if !s.contains(x, y, z) {
        triples.push((t.x, t.y, t.z));
    }
    BetweennessStructure::new(s.names(), triples).expect("perturbed triples are well-formed")
}
