//! Worked examples shipped with the library, and finite truncations of the
//! infinite ones.
//!
//! Every entry carries expected classification fragments such as `qt=false`
//! or `A8=fail`; [`CorpusEntry::check`] evaluates them, and the test suite
//! runs it over the whole corpus.
//!
//! Truncations are induced substructures of an infinite structure (or finite
//! restrictions of an infinite O-tree). Truncating can change class
//! membership: a finite O-tree is always a join-tree, so the order of a
//! truncated tree never shows the missing joins of the infinite one. The
//! notes state the class of the infinite object; the fragments state only
//! what holds of the truncation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::axioms::{check_axiom, classify, AxiomId, IboScreen};
use crate::error::{Error, Result};
use crate::poset::{FinitePoset, OTreeKind};
use crate::structure::BetweennessStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    Structure,
    Poset,
}

impl CorpusKind {
    pub fn extension(self) -> &'static str {
        match self {
            CorpusKind::Structure => "bst",
            CorpusKind::Poset => "pos",
        }
    }
}

/// One checkable claim about a structure or an O-tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fragment {
    /// `qt`, `ibqt`, `bo_finite` or `linear` has the given value.
    Class(&'static str, bool),
    Ibo(IboScreen),
    Axiom(AxiomId, bool),
    Kind(OTreeKind),
}

impl FromStr for Fragment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fragment> {
        let bad = || Error::InvalidArgument(format!("`{s}` is not an expectation such as qt=false or A8=fail"));
        let (key, value) = s.trim().split_once('=').ok_or_else(bad)?;
        let flag = |v: &str| match v {
            "true" | "ok" | "holds" => Ok(true),
            "false" | "fail" | "fails" => Ok(false),
            _ => Err(bad()),
        };
        Ok(match key {
            "qt" => Fragment::Class("qt", flag(value)?),
            "ibqt" => Fragment::Class("ibqt", flag(value)?),
            "bo_finite" | "bo" => Fragment::Class("bo_finite", flag(value)?),
            "linear" => Fragment::Class("linear", flag(value)?),
            "ibo" => Fragment::Ibo(match value {
                "excluded" => IboScreen::Excluded,
                "open" => IboScreen::Open,
                _ => return Err(bad()),
            }),
            "kind" => Fragment::Kind(match value {
                "not_oforest" => OTreeKind::NotOforest,
                "oforest" => OTreeKind::Oforest,
                "otree" => OTreeKind::Otree,
                "jointree" => OTreeKind::Jointree,
                "rooted_tree" => OTreeKind::RootedTree,
                _ => return Err(bad()),
            }),
            axiom => Fragment::Axiom(axiom.parse().map_err(|_| bad())?, flag(value)?),
        })
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fragment::Class(k, v) => write!(f, "{k}={v}"),
            Fragment::Ibo(IboScreen::Excluded) => write!(f, "ibo=excluded"),
            Fragment::Ibo(IboScreen::Open) => write!(f, "ibo=open"),
            Fragment::Axiom(a, v) => write!(f, "{a}={}", if *v { "ok" } else { "fail" }),
            Fragment::Kind(k) => write!(f, "kind={k}"),
        }
    }
}

/// Parses a comma-separated list of fragments.
pub fn parse_fragments(text: &str) -> Result<Vec<Fragment>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// The fragments of `expected` that do not hold of `s`, as `claimed (actual)` strings.
pub fn check_structure(s: &BetweennessStructure, expected: &[Fragment]) -> Vec<String> {
    let report = classify(s);
    let mut out = Vec::new();
    for fr in expected {
        let actual = match fr {
            Fragment::Class(k, _) => {
                let v = match *k {
                    "qt" => report.qt,
                    "ibqt" => report.ibqt,
                    "bo_finite" => report.bo_finite,
                    _ => report.linear,
                };
                Fragment::Class(k, v)
            }
            Fragment::Ibo(_) => Fragment::Ibo(report.ibo),
            Fragment::Axiom(a, _) => Fragment::Axiom(*a, check_axiom(s, *a).holds),
            Fragment::Kind(_) => {
                out.push(format!("{fr} (kind applies to O-trees only)"));
                continue;
            }
        };
        if actual != *fr {
            out.push(format!("{fr} (actual {actual})"));
        }
    }
    out
}

/// Same as [`check_structure`] for an O-tree; class fragments refer to its betweenness.
pub fn check_poset(p: &FinitePoset, expected: &[Fragment]) -> Vec<String> {
    let mut out = Vec::new();
    let (kinds, rest): (Vec<&Fragment>, Vec<&Fragment>) = expected.iter().partition(|f| matches!(f, Fragment::Kind(_)));
    for fr in kinds {
        let actual = Fragment::Kind(p.kind_of());
        if actual != *fr {
            out.push(format!("{fr} (actual {actual})"));
        }
    }
    if !rest.is_empty() {
        match p.betweenness_of() {
            Ok(b) => out.extend(check_structure(&b, &rest.into_iter().cloned().collect::<Vec<_>>())),
            Err(e) => out.push(format!("betweenness unavailable: {e}")),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: CorpusKind,
    /// The entry in `.bst` or `.pos` format.
    pub text: String,
    pub expected: Vec<Fragment>,
    pub note: String,
}

impl CorpusEntry {
    fn new(name: &str, kind: CorpusKind, text: String, expected: &str, note: &str) -> CorpusEntry {
        CorpusEntry {
            name: name.to_string(),
            kind,
            text,
            expected: parse_fragments(expected).expect("corpus expectations are well-formed"),
            note: note.to_string(),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.{}", self.name, self.kind.extension())
    }

    pub fn structure(&self) -> Result<BetweennessStructure> {
        match self.kind {
            CorpusKind::Structure => BetweennessStructure::parse(&self.text),
            CorpusKind::Poset => Err(Error::InvalidArgument(format!("{} is an O-tree", self.name))),
        }
    }

    pub fn poset(&self) -> Result<FinitePoset> {
        match self.kind {
            CorpusKind::Poset => FinitePoset::parse(&self.text),
            CorpusKind::Structure => Err(Error::InvalidArgument(format!("{} is a structure", self.name))),
        }
    }

    /// Failed expectations; empty when every fragment holds.
    pub fn check(&self) -> Result<Vec<String>> {
        Ok(match self.kind {
            CorpusKind::Structure => check_structure(&self.structure()?, &self.expected),
            CorpusKind::Poset => check_poset(&self.poset()?, &self.expected),
        })
    }
}

const S1: &str = include_str!("../corpus/s1.bst");
const Q: &str = include_str!("../corpus/q.bst");
const S4: &str = include_str!("../corpus/s4.bst");
const S6: &str = include_str!("../corpus/s6.bst");
const S8: &str = include_str!("../corpus/s8.bst");
const A8_SEPARATION: &str = include_str!("../corpus/a8_separation.bst");
const U: &str = include_str!("../corpus/u.bst");
const U_PRIME: &str = include_str!("../corpus/u_prime.bst");
const W: &str = include_str!("../corpus/w.bst");
const FIGURE2: &str = include_str!("../corpus/figure2.pos");
const FIGURE5: &str = include_str!("../corpus/figure5.pos");
const T4: &str = include_str!("../corpus/t4.pos");
const T8: &str = include_str!("../corpus/t8.pos");
const FIGURE13: &str = include_str!("../corpus/figure13.pos");

fn bst(text: &str) -> BetweennessStructure {
    BetweennessStructure::parse(text).expect("corpus file parses")
}

fn pos(text: &str) -> FinitePoset {
    FinitePoset::parse(text).expect("corpus file parses")
}

pub fn s1() -> BetweennessStructure {
    bst(S1)
}

pub fn q() -> BetweennessStructure {
    bst(Q)
}

pub fn s4() -> BetweennessStructure {
    bst(S4)
}

pub fn s6() -> BetweennessStructure {
    bst(S6)
}

pub fn s8() -> BetweennessStructure {
    bst(S8)
}

/// A1-A6 hold and A8 fails.
pub fn a8_separation() -> BetweennessStructure {
    bst(A8_SEPARATION)
}

pub fn structure_u() -> BetweennessStructure {
    bst(U)
}

pub fn structure_u_prime() -> BetweennessStructure {
    bst(U_PRIME)
}

pub fn structure_w() -> BetweennessStructure {
    bst(W)
}

pub fn figure2_tree() -> FinitePoset {
    pos(FIGURE2)
}

pub fn figure5_tree() -> FinitePoset {
    pos(FIGURE5)
}

pub fn t4() -> FinitePoset {
    pos(T4)
}

pub fn t8() -> FinitePoset {
    pos(T8)
}

/// The join-tree with thirteen nodes and its seven-line structuring, axis first.
pub fn figure13() -> (FinitePoset, Vec<BTreeSet<usize>>) {
    let t = pos(FIGURE13);
    let lines = [
        &["a", "b", "d", "e", "f"][..],
        &["c"],
        &["g", "h"],
        &["i"],
        &["j", "k"],
        &["m"],
        &["n"],
    ]
    .iter()
    .map(|l| t.ids(l).expect("line nodes exist").into_iter().collect())
    .collect();
    (t, lines)
}

/// Node names of `0..k`, listed from the largest down.
fn descending(k: usize) -> Vec<String> {
    (0..k).rev().map(|i| i.to_string()).collect()
}

fn chain_line(nodes: &[String]) -> String {
    format!("chain {}\n", nodes.join(" "))
}

/// Betweenness of a structure given as chains over declared nodes, skipping chains shorter than 3.
fn from_chains(name: &str, nodes: &[String], chains: &[Vec<String>]) -> String {
    let mut out = format!("structure {name}\nnodes {}\n", nodes.join(" "));
    for c in chains.iter().filter(|c| c.len() >= 3) {
        out.push_str(&chain_line(c));
    }
    out
}

fn require_depth(depth: usize, min: usize) -> Result<()> {
    if depth < min {
        return Err(Error::InvalidArgument(format!("depth must be at least {min}")));
    }
    Ok(())
}

/// Restriction of the second separating structure to `a, b, c, 0..depth`.
///
/// The infinite O-tree has `a < b < i` and `c < i` for all naturals `i`,
/// with larger naturals lower; `b` and `c` have no join.
pub fn s2_truncated(depth: usize) -> Result<BetweennessStructure> {
    require_depth(depth, 1)?;
    let nat = descending(depth);
    let mut nodes = vec!["a".to_string(), "b".into(), "c".into()];
    nodes.extend(nat.iter().cloned());
    let ab: Vec<String> = ["a", "b"]
        .iter()
        .map(|s| s.to_string())
        .chain(nat.iter().cloned())
        .collect();
    let c: Vec<String> = std::iter::once("c".to_string()).chain(nat.iter().cloned()).collect();
    BetweennessStructure::parse(&from_chains(&format!("S2-{depth}"), &nodes, &[ab, c]))
}

/// The finite restriction of the O-tree of [`s2_truncated`]; being finite it joins `b` and `c`.
pub fn t2_truncated(depth: usize) -> Result<FinitePoset> {
    require_depth(depth, 1)?;
    let nat = descending(depth);
    let mut text = format!("otree T2-{depth}\nnodes a b c {}\ncover a b\n", nat.join(" "));
    text.push_str(&format!("cover b {}\ncover c {}\n", nat[0], nat[0]));
    for w in nat.windows(2) {
        text.push_str(&format!("cover {} {}\n", w[0], w[1]));
    }
    FinitePoset::parse(&text)
}

/// [`s2_truncated`] without `a`.
pub fn s5_truncated(depth: usize) -> Result<BetweennessStructure> {
    let s = s2_truncated(depth)?;
    let keep: BTreeSet<usize> = (1..s.len()).collect();
    Ok(s.induce(&keep)?.with_name(format!("S5-{depth}")))
}

/// [`s2_truncated`] with the extra triple `(a, b, c)`.
pub fn s7_truncated(depth: usize) -> Result<BetweennessStructure> {
    let s = s2_truncated(depth)?;
    let mut text = s
        .to_text()
        .replacen(&format!("structure S2-{depth}"), &format!("structure S7-{depth}"), 1);
    text.push_str("triple a b c\n");
    BetweennessStructure::parse(&text)
}

/// Restriction of the O-tree over the rationals to `a, b, c, d, 1..=depth`.
///
/// `a < b < i` and `d < c < i` for rationals `i` above the square root of 2,
/// and the rationals are ordered as usual; `b` and `c` have no join. Depth 3 gives S4.
pub fn t3_fragment(depth: usize) -> Result<BetweennessStructure> {
    require_depth(depth, 2)?;
    let nums: Vec<String> = (1..=depth).map(|i| i.to_string()).collect();
    let above: Vec<String> = nums[1..].to_vec();
    let mut nodes: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    nodes.extend(nums.iter().cloned());
    let with =
        |lo: [&str; 2]| -> Vec<String> { lo.iter().map(|s| s.to_string()).chain(above.iter().cloned()).collect() };
    BetweennessStructure::parse(&from_chains(
        &format!("T3-{depth}"),
        &nodes,
        &[with(["a", "b"]), with(["d", "c"]), nums.clone()],
    ))
}

/// Restriction of the O-tree on the rationals where `x ≤ y` iff `x ≤ y` as
/// numbers and `y` is not an integer, to the multiples of 1/2 in `[0, depth]`.
pub fn example_integers_fragment(depth: usize) -> Result<BetweennessStructure> {
    require_depth(depth, 1)?;
    let halves: Vec<i64> = (0..=2 * depth as i64).collect();
    let name = |h: i64| {
        if h % 2 == 0 {
            (h / 2).to_string()
        } else {
            format!("{h}/2")
        }
    };
    let names: Vec<String> = halves.iter().map(|&h| name(h)).collect();
    let mut triples = Vec::new();
    for (i, &x) in halves.iter().enumerate() {
        for (j, &y) in halves.iter().enumerate() {
            for (k, &z) in halves.iter().enumerate() {
                if x < y && y < z && y % 2 != 0 && z % 2 != 0 {
                    triples.push((i, j, k));
                }
            }
        }
    }
    Ok(BetweennessStructure::new(&names, triples)?.with_name(format!("Integers-{depth}")))
}

/// The order of the universal join-tree on nonempty sequences of rationals.
fn seq_le(x: &[i64], y: &[i64]) -> bool {
    let m = y.len();
    x.len() >= m && x[..m - 1] == y[..m - 1] && x[m - 1] <= y[m - 1]
}

/// Join in the universal tree: the lowest `(x1..x_{p-1}, max(x_p, y_p))` over shared prefixes.
fn seq_join(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut p = 1;
    while p < x.len() && p < y.len() && x[p - 1] == y[p - 1] {
        p += 1;
    }
    let mut z = x[..p - 1].to_vec();
    z.push(x[p - 1].max(y[p - 1]));
    z
}

/// Induced betweenness of the universal join-tree on the sequences over `{0, 1}` of length at most `depth`.
pub fn universal_fragment(depth: usize) -> Result<BetweennessStructure> {
    require_depth(depth, 1)?;
    if depth > 4 {
        return Err(Error::InvalidArgument("depth above 4 gives more than 30 nodes".into()));
    }
    let mut seqs: Vec<Vec<i64>> = Vec::new();
    for len in 1..=depth {
        for bits in 0..1u32 << len {
            seqs.push((0..len).map(|i| i64::from((bits >> (len - 1 - i)) & 1)).collect());
        }
    }
    let names: Vec<String> = seqs
        .iter()
        .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("."))
        .collect();
    let mut triples = Vec::new();
    for (i, x) in seqs.iter().enumerate() {
        for (k, z) in seqs.iter().enumerate().skip(i + 1) {
            let j = seq_join(x, z);
            for (m, y) in seqs.iter().enumerate() {
                if m == i || m == k {
                    continue;
                }
                let on = |a: &[i64]| seq_le(a, y) && seq_le(y, &j);
                if on(x) || on(z) {
                    triples.push((i, m, k));
                }
            }
        }
    }
    Ok(BetweennessStructure::new(&names, triples)?.with_name(format!("Universal-{depth}")))
}

/// Names accepted by [`generate`].
pub const GENERATORS: [&str; 7] = ["s2", "t2", "s5", "s7", "t3", "integers", "universal"];

/// A parametric truncation as a corpus entry.
pub fn generate(name: &str, depth: usize) -> Result<CorpusEntry> {
    use CorpusKind::*;
    let e = |n: &str, kind, text: String, exp: &str, note: &str| CorpusEntry::new(n, kind, text, exp, note);
    let n = format!("{name}-{depth}");
    Ok(match name {
        "s2" => e(
            &n,
            Structure,
            s2_truncated(depth)?.to_text(),
            "A6=ok,A8=fail,ibqt=false",
            "The infinite structure is the betweenness of an O-tree but fails A8.",
        ),
        "t2" => e(
            &n,
            Poset,
            t2_truncated(depth)?.to_text(),
            "kind=rooted_tree",
            "Finite restriction of the infinite O-tree; it is a join-tree although the infinite one is not.",
        ),
        "s5" => e(
            &n,
            Structure,
            s5_truncated(depth)?.to_text(),
            "ibqt=true,qt=false",
            "The infinite structure is in BO and IBQT but is not a quasi-tree.",
        ),
        "s7" => e(
            &n,
            Structure,
            s7_truncated(depth)?.to_text(),
            "",
            "Adds (a, b, c); the order built from root 0 loses that triple.",
        ),
        "t3" => e(
            &n,
            Structure,
            t3_fragment(depth)?.to_text(),
            "A8=fail,ibqt=false",
            "Induced by an infinite O-tree; no finite O-tree induces it.",
        ),
        "integers" => e(
            &n,
            Structure,
            example_integers_fragment(depth)?.to_text(),
            "",
            "The infinite structure is in BO but has no rooted O-tree realising it.",
        ),
        "universal" => e(
            &n,
            Structure,
            universal_fragment(depth)?.to_text(),
            "ibqt=true",
            "Every O-tree embeds in the infinite universal join-tree.",
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown generator `{name}`; known: {}",
                GENERATORS.join(", ")
            )))
        }
    })
}

/// The fixed corpus, in a stable order.
pub fn entries() -> Vec<CorpusEntry> {
    use CorpusKind::*;
    let e = |n: &str, kind, text: &str, exp: &str, note: &str| CorpusEntry::new(n, kind, text.to_string(), exp, note);
    vec![
        e(
            "s1",
            Structure,
            S1,
            "qt=false,ibqt=true,A7=fail",
            "IBQT but not QT; the figure5 tree is a witness.",
        ),
        e(
            "q",
            Structure,
            Q,
            "qt=true,ibqt=true",
            "Betweenness of a tree; median of 1, 4, 6 is 7.",
        ),
        e(
            "s4",
            Structure,
            S4,
            "A6=ok,A8=fail,ibqt=false,ibo=open",
            "In IBO, not induced by any finite O-tree.",
        ),
        e(
            "s6",
            Structure,
            S6,
            "A7=fail,ibqt=true",
            "The rooted order adds (a, 2, c).",
        ),
        e(
            "s8",
            Structure,
            S8,
            "qt=false,ibqt=true",
            "Witness T8 adds nodes 1 and 2.",
        ),
        e(
            "a8_separation",
            Structure,
            A8_SEPARATION,
            "A6=ok,A8=fail,ibqt=false",
            "A1-A6 do not imply A8.",
        ),
        e("u", Structure, U, "A6=ok,ibo=excluded,ibqt=false", "Not in IBO."),
        e("u_prime", Structure, U_PRIME, "A6=ok,ibo=excluded", "Not in IBO."),
        e("w", Structure, W, "A6=ok,ibo=open", "U minus g; in IBO with a root."),
        e("figure2", Poset, FIGURE2, "kind=rooted_tree,qt=true", "A rooted tree."),
        e(
            "figure5",
            Poset,
            FIGURE5,
            "kind=rooted_tree,qt=true",
            "Witness for S1 with the new node 7.",
        ),
        e(
            "t4",
            Poset,
            T4,
            "kind=rooted_tree,qt=true",
            "Finite tree over the nodes of S4.",
        ),
        e("t8", Poset, T8, "kind=rooted_tree,qt=true", "Witness for S8."),
        e(
            "figure13",
            Poset,
            FIGURE13,
            "kind=rooted_tree",
            "Structured join-tree with seven lines.",
        ),
    ]
}

/// Looks up a fixed entry by name, or a truncation written `<generator>-<depth>`.
pub fn entry(name: &str) -> Result<CorpusEntry> {
    if let Some(e) = entries().into_iter().find(|e| e.name == name) {
        return Ok(e);
    }
    if let Some((g, d)) = name.rsplit_once('-') {
        if let Ok(depth) = d.parse::<usize>() {
            if GENERATORS.contains(&g) {
                return generate(g, depth);
            }
        }
    }
    Err(Error::InvalidArgument(format!("no corpus entry named `{name}`")))
}
