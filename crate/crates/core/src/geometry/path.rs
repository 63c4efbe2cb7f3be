use num_traits::{Signed, Zero};

use super::{on_segment, Embedding, HalfLine, Located, Point, Rat, TreeOfLines};
use crate::error::{Error, Result};
use crate::structure::BetweennessStructure;

/// Intersection of two half-lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossing {
    Empty,
    Point(Point),
    /// The half-lines share a segment or a ray.
    Overlap,
}

/// Exact intersection of two half-lines.
pub fn crossing(a: &HalfLine, b: &HalfLine) -> Crossing {
    let d = a.direction.cross(&b.direction);
    let w = b.origin.sub(&a.origin);
    if d.is_zero() {
        if !w.cross(&a.direction).is_zero() {
            return Crossing::Empty;
        }
        // Collinear: project `b` onto `a`'s parameter axis.
        let aa = a.direction.dot(&a.direction);
        let start = w.dot(&a.direction) / &aa;
        let same_way = a.direction.dot(&b.direction).is_positive();
        return match (same_way, start.is_negative(), start.is_zero()) {
            (true, _, _) => Crossing::Overlap,
            (false, true, _) => Crossing::Empty,
            (false, false, true) => Crossing::Point(a.origin.clone()),
            (false, false, false) => Crossing::Overlap,
        };
    }
    // a.origin + t·a.dir = b.origin + u·b.dir
    let t = w.cross(&b.direction) / &d;
    let u = w.cross(&a.direction) / &d;
    if t.is_negative() || u.is_negative() {
        Crossing::Empty
    } else {
        Crossing::Point(a.at(&t))
    }
}

/// Half-line ids from `line` up to the axis.
fn ancestry(l: &TreeOfLines, line: usize) -> Vec<usize> {
    let mut out = vec![line];
    let mut cur = line;
    while let Some((p, _)) = &l.lines[cur].parent {
        out.push(*p);
        cur = *p;
    }
    out
}

/// Points met climbing from `p` to line `stop`, ending with the position on `stop`.
fn climb(l: &TreeOfLines, p: &Located, stop: usize) -> (Vec<Point>, Rat) {
    let mut pts = vec![l.point(p)];
    let mut cur = p.clone();
    while cur.line != stop {
        let (parent, t) = l.lines[cur.line].parent.clone().expect("stop is an ancestor");
        cur = Located { line: parent, t };
        pts.push(l.point(&cur));
    }
    (pts, cur.t)
}

/// The vertices of the unique path from `p` to `q` along the half-lines.
pub fn path_between(l: &TreeOfLines, p: &Located, q: &Located) -> Result<Vec<Point>> {
    for x in [p, q] {
        if x.line >= l.lines.len() || x.t.is_negative() {
            return Err(Error::InvalidArgument("point is not on the tree of lines".into()));
        }
    }
    let (p, q) = (l.normalize(p), l.normalize(q));
    if p == q {
        return Err(Error::InvalidArgument("path endpoints coincide".into()));
    }
    let up_q = ancestry(l, q.line);
    let meet = ancestry(l, p.line)
        .into_iter()
        .find(|a| up_q.contains(a))
        .expect("all lines reach the axis");
    let (mut from_p, _) = climb(l, &p, meet);
    let (mut from_q, _) = climb(l, &q, meet);
    from_q.reverse();
    from_p.append(&mut from_q);
    from_p.dedup();
    Ok(from_p)
}

/// `(x, y, z)` whenever the point of `y` lies on the path between the points of `x` and `z`.
pub fn betweenness_on_lines(l: &TreeOfLines, e: &Embedding, names: &[String]) -> Result<BetweennessStructure> {
    let n = e.points.len();
    if names.len() != n {
        return Err(Error::InvalidArgument("one name per embedded point is required".into()));
    }
    let pts: Vec<Point> = e.points.iter().map(|p| l.point(p)).collect();
    let mut triples = Vec::new();
    for x in 0..n {
        for z in x + 1..n {
            let path = path_between(l, &e.points[x], &e.points[z])?;
            for (y, py) in pts.iter().enumerate() {
                if y != x && y != z && path.windows(2).any(|s| on_segment(py, &s[0], &s[1])) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    BetweennessStructure::new(names, triples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::geometry::{embed, rat};
    use crate::structuring::build_default;

    fn ray(ox: i64, oy: i64, dx: i64, dy: i64) -> HalfLine {
        HalfLine {
            id: 0,
            line: 0,
            origin: Point::new(rat(ox, 1), rat(oy, 1)),
            direction: Point::new(rat(dx, 1), rat(dy, 1)),
            cone_hi: Point::new(rat(0, 1), rat(1, 1)),
            parent: None,
        }
    }

    #[test]
    fn ray_crossings() {
        assert_eq!(
            crossing(&ray(0, 0, 1, 0), &ray(1, -1, 0, 1)),
            Crossing::Point(Point::new(rat(1, 1), rat(0, 1)))
        );
        assert_eq!(crossing(&ray(0, 0, 1, 0), &ray(1, 1, 0, 1)), Crossing::Empty);
        assert_eq!(crossing(&ray(0, 0, 1, 0), &ray(0, 1, 1, 0)), Crossing::Empty);
        assert_eq!(crossing(&ray(0, 0, 1, 0), &ray(3, 0, 1, 0)), Crossing::Overlap);
        assert_eq!(
            crossing(&ray(0, 0, 1, 0), &ray(0, 0, -1, 0)),
            Crossing::Point(Point::new(rat(0, 1), rat(0, 1)))
        );
        assert_eq!(crossing(&ray(0, 0, 1, 0), &ray(-2, 0, -1, 0)), Crossing::Empty);
        assert_eq!(crossing(&ray(0, 0, 1, 0), &ray(2, 0, -1, 0)), Crossing::Overlap);
    }

    #[test]
    fn paths_in_t8() {
        let t = corpus::t8();
        let s = build_default(&t).unwrap();
        let (l, e) = embed(&s, &rat(1, 2)).unwrap();
        let loc = |n: &str| e.points[t.id(n).unwrap()].clone();
        let pt = |n: &str| l.point(&loc(n));

        let same = path_between(&l, &loc("a"), &loc("0")).unwrap();
        assert_eq!(same, vec![pt("a"), pt("0")]);

        let hop = path_between(&l, &loc("d"), &loc("0")).unwrap();
        assert_eq!(hop, vec![pt("d"), pt("1"), pt("0")]);

        // d climbs to 1, runs along the axis to 0, enters the line of 2 and descends to h.
        let long = path_between(&l, &loc("d"), &loc("h")).unwrap();
        assert_eq!(long, vec![pt("d"), pt("1"), pt("0"), pt("2"), pt("h")]);
        assert!(path_between(&l, &loc("d"), &loc("d")).is_err());
    }

    #[test]
    fn t8_betweenness_is_recovered() {
        let t = corpus::t8();
        let s = build_default(&t).unwrap();
        let (l, e) = embed(&s, &rat(1, 4)).unwrap();
        let b = betweenness_on_lines(&l, &e, t.names()).unwrap();
        assert_eq!(b, t.betweenness_of().unwrap());
        let n8: std::collections::BTreeSet<usize> = t
            .ids(&["0", "a", "b", "c", "d", "e", "f", "g", "h"])
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(
            b.induce(&n8).unwrap().triples().collect::<Vec<_>>(),
            corpus::s8().triples().collect::<Vec<_>>()
        );
    }
}
