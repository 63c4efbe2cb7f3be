//! Structurings: partitions of an O-tree into convex lines with an upwards-closed axis.
//!
//! Walking up from any node `x`, the set `L_≥(x)` crosses a sequence of lines
//! `U_k, U_{k-1}, …, U_0` (the last one being the axis) in one interval each.
//! `k` is the depth of `x`, and it is the same for every node of a line.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::structure::Verdict;

/// A validated structuring. Line 0 is the axis.
#[derive(Debug, Clone)]
pub struct Structuring {
    tree: FinitePoset,
    lines: Vec<BTreeSet<usize>>,
    line_of: Vec<usize>,
    depth: Vec<usize>,
}

/// One interval of a decomposition: the members of `L_≥(x)` that lie in line `line`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub line: usize,
    pub nodes: Vec<usize>,
}

/// Nodes at even depth and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityEncoding {
    pub n0: BTreeSet<usize>,
    pub n1: BTreeSet<usize>,
}

/// Greedy structuring driven by `order` (a permutation of the nodes).
///
/// The axis is the upward chain of `order[0]` extended down to a leaf; each
/// later line starts from the first node not yet covered, climbs to the top
/// and descends to a leaf, always entering the child that comes first in
/// `order`, and keeps only the uncovered part.
pub fn build_structuring(tree: &FinitePoset, order: &[usize]) -> Result<Structuring> {
    tree.require_otree()?;
    let n = tree.len();
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::InvalidArgument("order must list every node exactly once".into()));
        }
        rank[v] = i;
    }
    if order.len() != n {
        return Err(Error::InvalidArgument("order must list every node exactly once".into()));
    }
    let children = tree.children();
    let mut used = vec![false; n];
    let mut lines = Vec::new();
    for &v in order {
        if used[v] {
            continue;
        }
        // Everything below an uncovered node is uncovered, so the descent never meets a used node.
        let mut line: BTreeSet<usize> = tree.upper_line(v).into_iter().filter(|&u| !used[u]).collect();
        let mut cur = v;
        while let Some(&next) = children[cur].iter().min_by_key(|&&c| rank[c]) {
            line.insert(next);
            cur = next;
        }
        for &u in &line {
            used[u] = true;
        }
        lines.push(line);
    }
    Structuring::from_lines(tree, lines)
}

/// The default enumeration: declaration order.
pub fn build_default(tree: &FinitePoset) -> Result<Structuring> {
    let order: Vec<usize> = (0..tree.len()).collect();
    build_structuring(tree, &order)
}

fn runs(tree: &FinitePoset, line_of: &[usize], x: usize) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for u in tree.upper_line(x) {
        match out.last_mut() {
            Some(last) if last.line == line_of[u] => last.nodes.push(u),
            _ => out.push(Interval {
                line: line_of[u],
                nodes: vec![u],
            }),
        }
    }
    out
}

/// Checks every structuring condition; the witness names the offending nodes.
pub fn validate_structuring(tree: &FinitePoset, lines: &[BTreeSet<usize>]) -> Verdict {
    let n = tree.len();
    let mut line_of = vec![usize::MAX; n];
    for (i, line) in lines.iter().enumerate() {
        if line.is_empty() {
            return Verdict::fails(vec![], format!("line {i} is empty"));
        }
        for &v in line {
            if v >= n {
                return Verdict::fails(vec![], format!("line {i} mentions unknown node #{v}"));
            }
            if line_of[v] != usize::MAX {
                return Verdict::fails(vec![v], "node lies in two lines");
            }
            line_of[v] = i;
        }
    }
    if let Some(v) = (0..n).find(|&v| line_of[v] == usize::MAX) {
        return Verdict::fails(vec![v], "node lies in no line");
    }
    if n == 0 {
        return Verdict::holds();
    }
    for (i, line) in lines.iter().enumerate() {
        for &a in line {
            for &b in line {
                if !tree.comparable(a, b) {
                    return Verdict::fails(vec![a, b], format!("line {i} is not linearly ordered"));
                }
                if tree.lt(a, b) {
                    if let Some(z) = (0..n).find(|&z| tree.lt(a, z) && tree.lt(z, b) && !line.contains(&z)) {
                        return Verdict::fails(vec![a, z, b], format!("line {i} is not convex"));
                    }
                }
            }
        }
    }
    for &a in &lines[0] {
        if let Some(z) = (0..n).find(|&z| tree.lt(a, z) && !lines[0].contains(&z)) {
            return Verdict::fails(vec![a, z], "axis is not upwards closed");
        }
    }
    for (i, u) in lines.iter().enumerate() {
        for (j, w) in lines.iter().enumerate() {
            if i != j && u.iter().all(|&a| w.iter().all(|&b| tree.lt(a, b))) {
                return Verdict::fails(
                    vec![*u.iter().next().unwrap(), *w.iter().next().unwrap()],
                    format!("line {i} lies entirely below line {j}"),
                );
            }
        }
    }
    for x in 0..n {
        let rs = runs(tree, &line_of, x);
        let mut seen = BTreeSet::new();
        for r in &rs {
            if !seen.insert(r.line) {
                return Verdict::fails(vec![x], format!("the nodes above enter line {} twice", r.line));
            }
            let bottom = r.nodes[0];
            if let Some(&z) = lines[r.line]
                .iter()
                .find(|&&z| tree.lt(bottom, z) && !r.nodes.contains(&z))
            {
                return Verdict::fails(vec![x, bottom, z], "interval is not upwards closed in its line");
            }
        }
        if rs.last().map(|r| r.line) != Some(0) {
            return Verdict::fails(vec![x], "the nodes above this node do not end in the axis");
        }
    }
    Verdict::holds()
}

impl Structuring {
    /// Validates `lines` (line 0 being the axis) against `tree`.
    pub fn from_lines(tree: &FinitePoset, lines: Vec<BTreeSet<usize>>) -> Result<Structuring> {
        tree.require_otree()?;
        let v = validate_structuring(tree, &lines);
        if let Some(w) = v.witness {
            let names: Vec<&str> = w.nodes.iter().map(|&i| tree.node_name(i)).collect();
            return Err(Error::Precondition(format!("{} ({})", w.reason, names.join(", "))));
        }
        let mut line_of = vec![0; tree.len()];
        for (i, line) in lines.iter().enumerate() {
            for &v in line {
                line_of[v] = i;
            }
        }
        let depth = lines
            .iter()
            .map(|l| runs(tree, &line_of, *l.iter().next().unwrap()).len() - 1)
            .collect();
        Ok(Structuring {
            tree: tree.clone(),
            lines,
            line_of,
            depth,
        })
    }

    pub fn tree(&self) -> &FinitePoset {
        &self.tree
    }

    pub fn lines(&self) -> &[BTreeSet<usize>] {
        &self.lines
    }

    /// Index of the line containing `x`.
    pub fn line_of(&self, x: usize) -> usize {
        self.line_of[x]
    }

    pub fn line_depth(&self, line: usize) -> usize {
        self.depth[line]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[self.line_of[x]]
    }

    /// The intervals `I_k, …, I_0` of `L_≥(x)`, starting at `x`.
    pub fn decompose(&self, x: usize) -> Vec<Interval> {
        runs(&self.tree, &self.line_of, x)
    }

    /// `L⁺(x)`: the part of `L_≥(x)` outside the line of `x`.
    pub fn lplus(&self, x: usize) -> Result<BTreeSet<usize>> {
        let d = self.decompose(x);
        if d.len() == 1 {
            return Err(Error::InvalidArgument(format!(
                "`{}` lies on the axis",
                self.tree.node_name(x)
            )));
        }
        Ok(d[1..].iter().flat_map(|i| i.nodes.iter().copied()).collect())
    }

    /// The line covering `line` (the next one met walking upwards), `None` for the axis.
    pub fn covering_line(&self, line: usize) -> Option<usize> {
        let x = *self.lines[line].iter().next()?;
        self.decompose(x).get(1).map(|i| i.line)
    }

    pub fn parity_sets(&self) -> ParityEncoding {
        let (n0, n1) = (0..self.tree.len()).partition(|&x| self.depth(x).is_multiple_of(2));
        ParityEncoding { n0, n1 }
    }

    /// The tree is a join-tree iff every non-axis line has an `lsub` inside its covering line.
    pub fn jointree_by_structuring(&self) -> Verdict {
        for (i, line) in self.lines.iter().enumerate().skip(1) {
            let lowest: Vec<usize> = line.iter().copied().collect();
            match self.tree.lsub(line).expect("lines are nonempty") {
                None => return Verdict::fails(lowest, format!("line {i} has no least strict upper bound")),
                Some(m) if Some(self.line_of[m]) != self.covering_line(i) => {
                    return Verdict::fails(vec![m], format!("lsub of line {i} is outside its covering line"));
                }
                Some(_) => {}
            }
        }
        Verdict::holds()
    }

    /// Lines sorted by depth then index, each listed from the top down.
    pub fn to_text(&self) -> String {
        let mut order: Vec<usize> = (0..self.lines.len()).collect();
        order.sort_by_key(|&i| (self.depth[i], i));
        let mut out = String::new();
        for i in order {
            let mut nodes: Vec<usize> = self.lines[i].iter().copied().collect();
            nodes.sort_by_key(|&v| self.tree.upper_line(v).len());
            let names: Vec<&str> = nodes.iter().map(|&v| self.tree.node_name(v)).collect();
            let tag = if i == 0 { " axis" } else { "" };
            out.push_str(&format!("line {i} depth {}{tag}: {}\n", self.depth[i], names.join(" ")));
        }
        out
    }
}

/// Rebuilds the line of every node from the two colour classes alone.
///
/// `y` shares a line with `x` iff they are comparable and every node of the
/// closed interval between them has the colour of `x`.
pub fn lines_from_parity(tree: &FinitePoset, n0: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let n = tree.len();
    let colour = |v: usize| n0.contains(&v);
    (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| {
                    let (lo, hi) = if tree.le(x, y) {
                        (x, y)
                    } else if tree.lt(y, x) {
                        (y, x)
                    } else {
                        return false;
                    };
                    (0..n)
                        .filter(|&z| tree.le(lo, z) && tree.le(z, hi))
                        .all(|z| colour(z) == colour(x))
                })
                .collect()
        })
        .collect()
}
