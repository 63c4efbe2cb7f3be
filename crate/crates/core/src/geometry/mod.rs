//! Drawing a structured join-tree as a tree of half-lines in the plane.
//!
//! All coordinates are exact rationals. Each half-line carries a cone: its
//! own direction `d` and an upper boundary `h`, counter-clockwise from `d` by
//! less than a straight angle. Lines attached to a half-line get directions
//! strictly inside that cone, and their own cones tile a sub-range of it, so
//! every subtree stays inside a convex wedge that meets its siblings' wedges
//! at most in a shared apex.
//!
//! Directions are interpolated linearly between `d` and `h`; on a cone of
//! span below a straight angle this is monotone in the angle, so disjoint
//! parameter ranges give disjoint angular ranges without any trigonometry.

mod path;
mod svg;

pub use path::{betweenness_on_lines, crossing, path_between, Crossing};
pub use svg::{to_svg, SvgOptions};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::structuring::Structuring;

pub type Rat = BigRational;

/// Parses `p/q` or an integer into a reduced rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    let ok_digits = |s: &str| {
        let s = s.strip_prefix('-').unwrap_or(s);
        !s.is_empty() && s.len() <= 200 && s.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    if !ok_digits(num) || !ok_digits(den) || den.starts_with('-') {
        return Err(Error::InvalidArgument(format!(
            "`{text}` is not a rational of the form p/q"
        )));
    }
    let n = BigInt::from_str(num).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let d = BigInt::from_str(den).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("`{text}` has a zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A point or vector of the rational plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    pub fn origin() -> Point {
        Point::new(Rat::zero(), Rat::zero())
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn cross(&self, o: &Point) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.x), rat_to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `a` lies on the closed segment `[p, q]`.
pub fn on_segment(a: &Point, p: &Point, q: &Point) -> bool {
    let pq = q.sub(p);
    let pa = a.sub(p);
    if !pq.cross(&pa).is_zero() {
        return false;
    }
    let t = pa.dot(&pq);
    !t.is_negative() && t <= pq.dot(&pq)
}

/// A half-line `origin + t·direction`, `t ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfLine {
    pub id: usize,
    /// Index of the structuring line drawn on this half-line.
    pub line: usize,
    pub origin: Point,
    pub direction: Point,
    /// Upper boundary of the cone reserved for lines attached here.
    pub cone_hi: Point,
    /// Parent half-line and the parameter of `origin` on it.
    pub parent: Option<(usize, Rat)>,
}

impl HalfLine {
    pub fn at(&self, t: &Rat) -> Point {
        self.origin.add(&self.direction.scale(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOfLines {
    pub lines: Vec<HalfLine>,
}

/// A point given by a half-line and a parameter on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub t: Rat,
}

impl TreeOfLines {
    pub fn point(&self, p: &Located) -> Point {
        self.lines[p.line].at(&p.t)
    }

    /// Rewrites a point sitting on the origin of a non-root half-line onto its parent.
    pub fn normalize(&self, p: &Located) -> Located {
        let mut cur = p.clone();
        while cur.t.is_zero() {
            match &self.lines[cur.line].parent {
                Some((parent, t)) => {
                    cur = Located {
                        line: *parent,
                        t: t.clone(),
                    }
                }
                None => break,
            }
        }
        cur
    }

    /// Every pair of half-lines meets in nothing or in the origin of one of them.
    pub fn check_non_crossing(&self) -> Result<()> {
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let (a, b) = (&self.lines[i], &self.lines[j]);
                match crossing(a, b) {
                    Crossing::Empty => {}
                    Crossing::Point(p) if p == a.origin || p == b.origin => {}
                    other => {
                        return Err(Error::InvalidEmbedding(format!(
                            "half-lines {i} and {j} meet in {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// Each half-line starts on an earlier one, and each attached direction lies
    /// strictly inside its parent's cone together with its own cone.
    pub fn check_sectors(&self) -> Result<()> {
        for l in &self.lines {
            if !l.direction.cross(&l.cone_hi).is_positive() {
                return Err(Error::InvalidEmbedding(format!(
                    "half-line {} has a degenerate cone",
                    l.id
                )));
            }
            let Some((p, t)) = &l.parent else { continue };
            if *p >= l.id || t.is_negative() || self.lines[*p].at(t) != l.origin {
                return Err(Error::InvalidEmbedding(format!(
                    "half-line {} is not attached to an earlier one",
                    l.id
                )));
            }
            let parent = &self.lines[*p];
            let inside = |v: &Point| parent.direction.cross(v).is_positive() && v.cross(&parent.cone_hi).is_positive();
            if !inside(&l.direction) || !inside(&l.cone_hi) {
                return Err(Error::InvalidEmbedding(format!("half-line {} leaves its sector", l.id)));
            }
        }
        Ok(())
    }
}

/// Node positions on a tree of lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub points: Vec<Located>,
}

/// The upper cone boundary of the axis for `alpha ∈ (0, 1)`.
///
/// `(1 − k², 2k)` with `k = α/(1−α)` points at angle `2·atan(k)`, which
/// increases with `α` from 0 to a straight angle and equals a right angle at `α = 1/2`.
pub fn axis_cone(alpha: &Rat) -> Result<Point> {
    if !alpha.is_positive() || *alpha >= Rat::one() {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let k = alpha / (Rat::one() - alpha);
    Ok(Point::new(Rat::one() - &k * &k, &k + &k))
}

fn lerp(a: &Point, b: &Point, s: &Rat) -> Point {
    a.scale(&(Rat::one() - s)).add(&b.scale(s))
}

/// Embeds the tree of a structuring; `alpha` sets the opening of the axis cone.
///
/// Nodes of each line sit at parameters 1, 2, 3, … from its top down. The
/// `k`-th attached line (counting from the attachment farthest from the
/// origin, then by line index) takes the parameter range
/// `[1 − 2^-(k+1), 1 − 2^-(k+2)]` of its parent's cone; its direction is the
/// lower end.
pub fn embed(s: &Structuring, alpha: &Rat) -> Result<(TreeOfLines, Embedding)> {
    let tree = s.tree();
    tree.require_jointree()?;
    let hi0 = axis_cone(alpha)?;
    let v = s.jointree_by_structuring();
    if let Some(w) = v.witness {
        return Err(Error::Precondition(w.reason));
    }
    let n = tree.len();
    if n == 0 {
        return Ok((TreeOfLines { lines: vec![] }, Embedding { points: vec![] }));
    }
    let count = s.lines().len();
    let mut by_depth: Vec<usize> = (0..count).collect();
    by_depth.sort_by_key(|&i| (s.line_depth(i), i));
    let mut half_of = vec![usize::MAX; count];
    for (h, &i) in by_depth.iter().enumerate() {
        half_of[i] = h;
    }

    // Top-down parameters of every node on its own line.
    let mut param: Vec<Rat> = vec![Rat::zero(); n];
    for line in s.lines() {
        let mut nodes: Vec<usize> = line.iter().copied().collect();
        nodes.sort_by_key(|&v| tree.upper_line(v).len());
        for (k, &v) in nodes.iter().enumerate() {
            param[v] = Rat::from_integer(BigInt::from(k as u64 + 1));
        }
    }

    let mut children: BTreeMap<usize, Vec<(Rat, usize)>> = BTreeMap::new();
    for i in 1..count {
        let m = tree
            .lsub(&s.lines()[i])?
            .ok_or_else(|| Error::Precondition(format!("line {i} has no lsub")))?;
        children.entry(s.line_of(m)).or_default().push((param[m].clone(), i));
    }
    for kids in children.values_mut() {
        kids.sort_by(|(ta, ia), (tb, ib)| tb.cmp(ta).then(ia.cmp(ib)));
    }

    let mut lines: Vec<Option<HalfLine>> = vec![None; count];
    lines[half_of[0]] = Some(HalfLine {
        id: 0,
        line: 0,
        origin: Point::origin(),
        direction: Point::new(Rat::one(), Rat::zero()),
        cone_hi: hi0,
        parent: None,
    });
    for &i in &by_depth {
        let parent = lines[half_of[i]].clone().expect("parents are drawn before children");
        let Some(kids) = children.get(&i) else { continue };
        for (k, (t, child)) in kids.iter().enumerate() {
            let lo = Rat::one() - Rat::new(BigInt::one(), BigInt::one() << (k + 1));
            let hi = Rat::one() - Rat::new(BigInt::one(), BigInt::one() << (k + 2));
            lines[half_of[*child]] = Some(HalfLine {
                id: half_of[*child],
                line: *child,
                origin: parent.at(t),
                direction: lerp(&parent.direction, &parent.cone_hi, &lo),
                cone_hi: lerp(&parent.direction, &parent.cone_hi, &hi),
                parent: Some((parent.id, t.clone())),
            });
        }
    }
    let lines: Vec<HalfLine> = lines.into_iter().map(|l| l.expect("every line is reached")).collect();
    let points = (0..n)
        .map(|v| Located {
            line: half_of[s.line_of(v)],
            t: param[v].clone(),
        })
        .collect();
    Ok((TreeOfLines { lines }, Embedding { points }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poset::FinitePoset;
    use crate::structuring::build_default;

    fn halves() -> [Rat; 3] {
        [rat(1, 2), rat(1, 4), rat(9, 10)]
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-3").unwrap(), rat(-3, 1));
        for bad in ["1/0", "", "a/b", "1/-2", "1.5", "/3", "--1"] {
            assert!(parse_rat(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn chain_is_collinear() {
        let chain =
            FinitePoset::from_parents(["a", "b", "c", "d", "e"], &[Some(1), Some(2), Some(3), Some(4), None]).unwrap();
        let s = build_default(&chain).unwrap();
        let (l, e) = embed(&s, &rat(1, 2)).unwrap();
        assert_eq!(l.lines.len(), 1);
        let pts: Vec<Point> = e.points.iter().map(|p| l.point(p)).collect();
        for p in &pts {
            assert!(p.y.is_zero());
        }
        assert_eq!(pts[4], Point::new(rat(1, 1), rat(0, 1)));
        assert_eq!(pts[0], Point::new(rat(5, 1), rat(0, 1)));
    }

    #[test]
    fn t8_origins_sit_on_lsub_points() {
        let t = corpus::t8();
        let s = build_default(&t).unwrap();
        for alpha in halves() {
            let (l, e) = embed(&s, &alpha).unwrap();
            assert_eq!(l.lines.len(), 4);
            l.check_non_crossing().unwrap();
            l.check_sectors().unwrap();
            let at = |name: &str| l.point(&e.points[t.id(name).unwrap()]);
            let origin_of = |name: &str| l.lines[e.points[t.id(name).unwrap()].line].origin.clone();
            assert_eq!(origin_of("c"), at("1"));
            assert_eq!(origin_of("g"), at("2"));
            assert_eq!(origin_of("e"), at("0"));
        }
    }

    #[test]
    fn star_lines_share_the_root() {
        let star = FinitePoset::from_parents(["r", "x", "y", "z"], &[None, Some(0), Some(0), Some(0)]).unwrap();
        let s = build_default(&star).unwrap();
        let (l, e) = embed(&s, &rat(1, 2)).unwrap();
        assert_eq!(l.lines.len(), 3);
        let root = l.point(&e.points[0]);
        assert_eq!(l.lines[1].origin, root);
        assert_eq!(l.lines[2].origin, root);
        l.check_non_crossing().unwrap();
    }

    #[test]
    fn alpha_bounds() {
        assert!(axis_cone(&rat(0, 1)).is_err());
        assert!(axis_cone(&rat(1, 1)).is_err());
        assert_eq!(axis_cone(&rat(1, 2)).unwrap(), Point::new(rat(0, 1), rat(2, 1)));
    }

    #[test]
    fn segments() {
        let p = Point::new(rat(0, 1), rat(0, 1));
        let q = Point::new(rat(2, 1), rat(2, 1));
        assert!(on_segment(&Point::new(rat(1, 1), rat(1, 1)), &p, &q));
        assert!(on_segment(&p, &p, &q));
        assert!(!on_segment(&Point::new(rat(3, 1), rat(3, 1)), &p, &q));
        assert!(!on_segment(&Point::new(rat(1, 1), rat(0, 1)), &p, &q));
    }
}
