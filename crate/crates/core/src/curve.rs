//! Piecewise-linear immersed circles in the fundamental polygon.
//!
//! A curve is stored as a cyclic list of strands. Each strand either crosses
//! the polygon — entering on one glued side, visiting interior points, and
//! leaving through another — or, when the whole curve avoids the boundary,
//! is a single closed interior polyline. Side crossings are recorded in
//! arrow parameters so that the exit of one strand and the entry of the next
//! carry the same number.
//!
//! All incidence checks are exact over the rationals: a reported crossing
//! count or edge word can never flip from rounding noise. Degenerate inputs
//! (vertex hits, tangencies, triple points) are rejected, not repaired.

use crate::error::{Error, Result};
use crate::exact::{rat, rat_to_f64, ratio, Pt, Rat, SegmentMeet};
use crate::schema::SurfaceSchema;
use crate::word::Word;
use num_traits::Zero;
use std::collections::HashMap;

/// A point on a glued side, in arrow parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidePoint {
    pub side: usize,
    pub param: Rat,
}

impl SidePoint {
    pub fn new(side: usize, param: Rat) -> SidePoint {
        SidePoint { side, param }
    }
}

/// One chord of the curve, or the entire curve when it stays interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub entry: Option<SidePoint>,
    pub points: Vec<Pt>,
    pub exit: Option<SidePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLCurve {
    pub strands: Vec<Strand>,
    /// (strand, interior-point index): the marked point f(1).
    pub basepoint: (usize, usize),
}

/// One end of a double point: a parameter location on the curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossingEnd {
    pub strand: usize,
    pub segment: usize,
    pub t: Rat,
}

/// A transverse double point, with its two parameter locations ordered
/// along the traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub first: CrossingEnd,
    pub second: CrossingEnd,
    pub point: Pt,
}

/// Successful general-position report.
#[derive(Debug, Clone)]
pub struct PositionReport {
    pub crossings: Vec<Crossing>,
    /// Lower bound on how far every coordinate may move without changing
    /// the crossing count or the edge word.
    pub clearance: f64,
}

struct SegmentRef {
    strand: usize,
    index: usize,
    a: Pt,
    b: Pt,
}

impl PLCurve {
    /// A curve lying entirely inside the polygon, as one closed polyline.
    pub fn interior_loop(points: Vec<Pt>, basepoint: usize) -> PLCurve {
        PLCurve {
            strands: vec![Strand {
                entry: None,
                points,
                exit: None,
            }],
            basepoint: (0, basepoint),
        }
    }

    pub fn is_interior(&self) -> bool {
        self.strands.len() == 1 && self.strands[0].entry.is_none()
    }

    /// Full polyline of a strand, boundary endpoints included.
    pub fn strand_polyline(&self, schema: &SurfaceSchema, strand: usize) -> Vec<Pt> {
        let s = &self.strands[strand];
        let mut out = Vec::with_capacity(s.points.len() + 2);
        if let Some(entry) = &s.entry {
            out.push(schema.side_point_at_arrow(entry.side, &entry.param));
        }
        out.extend(s.points.iter().cloned());
        if let Some(exit) = &s.exit {
            out.push(schema.side_point_at_arrow(exit.side, &exit.param));
        }
        out
    }

    fn segment_table(&self, schema: &SurfaceSchema) -> Vec<SegmentRef> {
        let mut table = Vec::new();
        for (si, strand) in self.strands.iter().enumerate() {
            let line = self.strand_polyline(schema, si);
            if strand.entry.is_none() {
                for i in 0..line.len() {
                    table.push(SegmentRef {
                        strand: si,
                        index: i,
                        a: line[i].clone(),
                        b: line[(i + 1) % line.len()].clone(),
                    });
                }
            } else {
                for i in 0..line.len() - 1 {
                    table.push(SegmentRef {
                        strand: si,
                        index: i,
                        a: line[i].clone(),
                        b: line[i + 1].clone(),
                    });
                }
            }
        }
        table
    }

    fn segments_adjacent(&self, x: &SegmentRef, y: &SegmentRef) -> bool {
        if x.strand != y.strand {
            return false;
        }
        let strand = &self.strands[x.strand];
        let count = if strand.entry.is_none() {
            strand.points.len()
        } else {
            strand.points.len() + 1
        };
        let (i, j) = (x.index, y.index);
        let consecutive = i + 1 == j || j + 1 == i;
        let wraps = strand.entry.is_none() && ((i == 0 && j == count - 1) || (j == 0 && i == count - 1));
        consecutive || wraps
    }

    /// Check every general-position invariant; on success report the
    /// crossings and a perturbation clearance.
    pub fn validate(&self, schema: &SurfaceSchema) -> Result<PositionReport> {
        self.validate_structure(schema)?;
        self.validate_side_points(schema)?;
        self.validate_interior_points(schema)?;
        let (crossings, mut margins) = self.collect_crossings(schema)?;
        self.clearance_boundary_terms(schema, &mut margins);
        let min2 = margins
            .into_iter()
            .min()
            .unwrap_or_else(|| rat(1));
        let clearance = rat_to_f64(&min2).sqrt() / 4.0;
        Ok(PositionReport {
            crossings,
            clearance,
        })
    }

    fn validate_structure(&self, schema: &SurfaceSchema) -> Result<()> {
        if self.strands.is_empty() {
            return Err(Error::MalformedCurve {
                reason: "curve has no strands".into(),
            });
        }
        for (si, strand) in self.strands.iter().enumerate() {
            if strand.entry.is_some() != strand.exit.is_some() {
                return Err(Error::MalformedCurve {
                    reason: format!("strand {si} must either cross the boundary twice or not at all"),
                });
            }
            if strand.entry.is_none() {
                if self.strands.len() != 1 {
                    return Err(Error::MalformedCurve {
                        reason: format!("interior strand {si} cannot be chained with others"),
                    });
                }
                if strand.points.len() < 3 {
                    return Err(Error::MalformedCurve {
                        reason: "an interior loop needs at least three vertices".into(),
                    });
                }
            }
        }
        let (bs, bv) = self.basepoint;
        if bs >= self.strands.len() || bv >= self.strands[bs].points.len() {
            return Err(Error::MalformedCurve {
                reason: format!("basepoint ({bs}, {bv}) does not name an interior vertex"),
            });
        }
        // Consecutive strands must match under the gluing map.
        if self.strands[0].entry.is_some() {
            let n = self.strands.len();
            for i in 0..n {
                let exit = self.strands[i].exit.as_ref().expect("checked above");
                let entry = self.strands[(i + 1) % n].entry.as_ref().expect("checked above");
                let partner = schema.partner(exit.side);
                if partner != Some(entry.side) || entry.param != exit.param {
                    return Err(Error::NotClosed);
                }
            }
        }
        Ok(())
    }

    fn validate_side_points(&self, schema: &SurfaceSchema) -> Result<()> {
        let mut per_pair: HashMap<usize, Vec<Rat>> = HashMap::new();
        for (si, strand) in self.strands.iter().enumerate() {
            for (which, sp) in [("entry", &strand.entry), ("exit", &strand.exit)] {
                let Some(sp) = sp else { continue };
                if sp.side >= schema.side_count() {
                    return Err(Error::MalformedCurve {
                        reason: format!("strand {si} {which} names side {} of a {}-gon",
                            sp.side, schema.side_count()),
                    });
                }
                let Some(pair) = schema.pair_of_side(sp.side) else {
                    return Err(Error::MalformedCurve {
                        reason: format!("strand {si} {which} crosses free side {}", sp.side),
                    });
                };
                if sp.param <= rat(0) || sp.param >= rat(1) {
                    return Err(Error::VertexHit {
                        location: format!("strand {si} {which} hits a corner of side {}", sp.side),
                    });
                }
                let local = schema.local_of_arrow(sp.side, &sp.param);
                if schema.polygon().marker_locals(sp.side).contains(&local) {
                    return Err(Error::VertexHit {
                        location: format!(
                            "strand {si} {which} hits a subdivision vertex of side {}",
                            sp.side
                        ),
                    });
                }
                if which == "exit" {
                    per_pair.entry(pair).or_default().push(sp.param.clone());
                }
            }
        }
        for (pair, params) in per_pair {
            let mut sorted = params.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::SideCoincidence {
                    reason: format!(
                        "two crossings of the side pair '{}' share a parameter",
                        schema.pair(pair).letter
                    ),
                });
            }
        }
        Ok(())
    }

    fn validate_interior_points(&self, schema: &SurfaceSchema) -> Result<()> {
        let polygon = schema.polygon();
        for (si, strand) in self.strands.iter().enumerate() {
            for (pi, p) in strand.points.iter().enumerate() {
                if !polygon.contains_strictly(p) {
                    let on_boundary = polygon
                        .boundary_segments()
                        .any(|(_, a, b)| crate::exact::point_on_segment(p, a, b));
                    if on_boundary {
                        return Err(Error::SideCoincidence {
                            reason: format!("interior vertex {pi} of strand {si} lies on the boundary"),
                        });
                    }
                    return Err(Error::MalformedCurve {
                        reason: format!("vertex {pi} of strand {si} is outside the polygon"),
                    });
                }
            }
        }
        Ok(())
    }

    fn collect_crossings(
        &self,
        schema: &SurfaceSchema,
    ) -> Result<(Vec<Crossing>, Vec<Rat>)> {
        let table = self.segment_table(schema);
        let mut margins: Vec<Rat> = Vec::new();
        for seg in &table {
            let d = &seg.b - &seg.a;
            let len2 = d.norm2();
            if len2.is_zero() {
                return Err(Error::MalformedCurve {
                    reason: format!(
                        "segment {} of strand {} has zero length",
                        seg.index, seg.strand
                    ),
                });
            }
            margins.push(len2);
        }
        let mut crossings = Vec::new();
        for i in 0..table.len() {
            for j in i + 1..table.len() {
                let (x, y) = (&table[i], &table[j]);
                let adjacent = self.segments_adjacent(x, y);
                match crate::exact::segment_meet(&x.a, &x.b, &y.a, &y.b) {
                    SegmentMeet::Empty => {
                        if !adjacent {
                            margins.push(crate::exact::dist2_segments(&x.a, &x.b, &y.a, &y.b));
                        }
                    }
                    SegmentMeet::Proper { point, t_first, t_second } => {
                        debug_assert!(!adjacent, "adjacent segments cannot cross properly");
                        // Stability margin: each endpoint keeps its side of
                        // the other segment's line.
                        for (p, (a, b)) in [
                            (&x.a, (&y.a, &y.b)),
                            (&x.b, (&y.a, &y.b)),
                            (&y.a, (&x.a, &x.b)),
                            (&y.b, (&x.a, &x.b)),
                        ] {
                            let d = b - a;
                            let off = p - a;
                            let num = d.cross(&off);
                            margins.push(&num * &num / d.norm2());
                        }
                        let (first, second) = order_ends(
                            CrossingEnd { strand: x.strand, segment: x.index, t: t_first },
                            CrossingEnd { strand: y.strand, segment: y.index, t: t_second },
                        );
                        crossings.push(Crossing { first, second, point });
                    }
                    SegmentMeet::Touch { point } => {
                        if adjacent {
                            let shared = x.a == y.b || x.b == y.a || x.a == y.a || x.b == y.b;
                            let at_shared = shared
                                && (point == x.a || point == x.b);
                            if !at_shared {
                                return Err(Error::TangentialCrossing {
                                    location: format!(
                                        "strand {} segments {} and {} touch off their shared vertex",
                                        x.strand, x.index, y.index
                                    ),
                                });
                            }
                        } else {
                            return Err(Error::TangentialCrossing {
                                location: format!(
                                    "segment {} of strand {} touches segment {} of strand {}",
                                    x.index, x.strand, y.index, y.strand
                                ),
                            });
                        }
                    }
                    SegmentMeet::Overlap => {
                        return Err(Error::TangentialCrossing {
                            location: format!(
                                "segment {} of strand {} overlaps segment {} of strand {}",
                                x.index, x.strand, y.index, y.strand
                            ),
                        });
                    }
                }
            }
        }
        let mut seen: HashMap<Pt, usize> = HashMap::new();
        for c in &crossings {
            let hits = seen.entry(c.point.clone()).or_insert(0);
            *hits += 1;
            if *hits > 1 {
                return Err(Error::TriplePoint {
                    location: format!(
                        "three branches pass through ({}, {})",
                        rat_to_f64(&c.point.x),
                        rat_to_f64(&c.point.y)
                    ),
                });
            }
        }
        Ok((crossings, margins))
    }

    fn clearance_boundary_terms(&self, schema: &SurfaceSchema, margins: &mut Vec<Rat>) {
        let polygon = schema.polygon();
        // Interior vertices keep their distance to the boundary.
        for strand in &self.strands {
            for p in &strand.points {
                for (_, a, b) in polygon.boundary_segments() {
                    margins.push(crate::exact::dist2_point_segment(p, a, b));
                }
            }
        }
        // Side crossings keep their distance to ring vertices and to each
        // other along the same side.
        let mut per_side: HashMap<usize, Vec<Pt>> = HashMap::new();
        for strand in &self.strands {
            for sp in [&strand.entry, &strand.exit].into_iter().flatten() {
                let p = schema.side_point_at_arrow(sp.side, &sp.param);
                for v in polygon.ring() {
                    margins.push(p.dist2(v));
                }
                per_side.entry(sp.side).or_default().push(p);
            }
        }
        for (_, pts) in per_side {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if pts[i] != pts[j] {
                        margins.push(pts[i].dist2(&pts[j]));
                    }
                }
            }
        }
    }

    /// Number of double points modulo 2 (raw count, no convention applied).
    pub fn self_intersection_parity(&self, schema: &SurfaceSchema) -> Result<u8> {
        Ok((self.validate(schema)?.crossings.len() % 2) as u8)
    }

    /// The based word of oriented side crossings, starting at the basepoint.
    pub fn edge_word(&self, schema: &SurfaceSchema) -> Result<Word> {
        if self.is_interior() {
            return Ok(Word::empty());
        }
        let n = self.strands.len();
        let mut word = Word::empty();
        for k in 0..n {
            let strand = &self.strands[(self.basepoint.0 + k) % n];
            let exit = strand.exit.as_ref().ok_or(Error::NotClosed)?;
            let letter = schema.crossing_letter(exit.side).ok_or_else(|| {
                Error::MalformedCurve {
                    reason: format!("exit side {} is not glued", exit.side),
                }
            })?;
            word.push(letter);
        }
        Ok(word)
    }

    /// Slide every side crossing by the same amount along its arrow.
    ///
    /// Both ends of each gluing carry the same arrow parameter, so a
    /// uniform shift keeps the strands glued and the edge word intact
    /// while moving every boundary point — handy for building a second
    /// copy of a curve in general position with respect to the first.
    /// Interior vertices stay put; the result is not re-validated.
    pub fn with_shifted_side_params(&self, shift: &Rat) -> Result<PLCurve> {
        let mut out = self.clone();
        for strand in &mut out.strands {
            for sp in [strand.entry.as_mut(), strand.exit.as_mut()].into_iter().flatten() {
                let moved = &sp.param + shift;
                if moved <= rat(0) || moved >= rat(1) {
                    return Err(Error::InvalidInput {
                        reason: format!(
                            "shift pushes a crossing to arrow parameter {moved}, off its side"
                        ),
                    });
                }
                sp.param = moved;
            }
        }
        Ok(out)
    }

    /// Insert one vertex at ratio `t` on every segment. The curve is
    /// unchanged as a subset of the surface.
    pub fn subdivided(&self, schema: &SurfaceSchema, t: &Rat) -> PLCurve {
        let mut strands = Vec::with_capacity(self.strands.len());
        for (si, strand) in self.strands.iter().enumerate() {
            let line = self.strand_polyline(schema, si);
            let mut points = Vec::new();
            if strand.entry.is_none() {
                for i in 0..line.len() {
                    let a = &line[i];
                    let b = &line[(i + 1) % line.len()];
                    points.push(a.clone());
                    points.push(a.lerp(b, t));
                }
            } else {
                for i in 0..line.len() - 1 {
                    if i > 0 {
                        points.push(line[i].clone());
                    }
                    points.push(line[i].lerp(&line[i + 1], t));
                }
            }
            strands.push(Strand {
                entry: strand.entry.clone(),
                points,
                exit: strand.exit.clone(),
            });
        }
        let (bs, bv) = self.basepoint;
        let basepoint = if self.strands[bs].entry.is_none() {
            (bs, 2 * bv)
        } else {
            (bs, 2 * bv + 1)
        };
        PLCurve { strands, basepoint }
    }
}

fn order_ends(a: CrossingEnd, b: CrossingEnd) -> (CrossingEnd, CrossingEnd) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// An embedded diamond around `center`; turning number ±1 in the plane.
pub fn diamond_loop(center: &Pt, radius: &Rat) -> PLCurve {
    let c = center;
    let r = radius;
    let points = vec![
        Pt::new(&c.x + r, c.y.clone()),
        Pt::new(c.x.clone(), &c.y + r),
        Pt::new(&c.x - r, c.y.clone()),
        Pt::new(c.x.clone(), &c.y - r),
    ];
    PLCurve::interior_loop(points, 0)
}

/// A bowtie with exactly one transverse double point at `center`.
pub fn figure_eight_loop(center: &Pt, scale: &Rat) -> PLCurve {
    let c = center;
    let s = scale;
    let two = rat(2);
    let points = vec![
        Pt::new(&c.x - &(&two * s), &c.y + s),
        Pt::new(&c.x - &(&two * s), &c.y - s),
        Pt::new(&c.x + &(&two * s), &c.y + s),
        Pt::new(&c.x + &(&two * s), &c.y - s),
    ];
    PLCurve::interior_loop(points, 0)
}

/// Build a curve whose edge word is exactly `word`, routing every chord
/// near the polygon's centroid. Returns the curve together with its
/// validation report.
pub fn curve_from_word(schema: &SurfaceSchema, word: &Word) -> Result<(PLCurve, PositionReport)> {
    let polygon = schema.polygon();
    let ring = polygon.ring();
    let centroid = {
        let mut sum = Pt::zero();
        for v in ring {
            sum = &sum + v;
        }
        sum.scaled(&Rat::new(1.into(), (ring.len() as i64).into()))
    };
    if word.is_empty() {
        let quarter = ratio(1, 4);
        let curve = diamond_loop(&centroid, &quarter);
        let report = curve.validate(schema)?;
        return Ok((curve, report));
    }
    // Exit sides and one shared arrow parameter per traversal.
    let mut uses_per_pair: HashMap<usize, usize> = HashMap::new();
    for letter in word.letters() {
        *uses_per_pair.entry(letter.gen).or_insert(0) += 1;
    }
    let mut seen_per_pair: HashMap<usize, usize> = HashMap::new();
    let mut exits: Vec<SidePoint> = Vec::new();
    for letter in word.letters() {
        if letter.gen >= schema.generator_count() {
            return Err(Error::MalformedWord {
                reason: "word uses a generator the schema does not have".into(),
            });
        }
        let pair = schema.pair(letter.gen);
        let side = if letter.inv { pair.second } else { pair.first };
        let total = uses_per_pair[&letter.gen];
        let j = *seen_per_pair.entry(letter.gen).or_insert(0);
        seen_per_pair.insert(letter.gen, j + 1);
        // (6j+5)/(6K+6) never collides with a chain subdivision vertex.
        let param = Rat::new(
            ((6 * j + 5) as i64).into(),
            ((6 * total + 6) as i64).into(),
        );
        exits.push(SidePoint::new(side, param));
    }
    let m = exits.len();
    let spread = {
        let mut min2: Option<Rat> = None;
        for (_, a, b) in polygon.boundary_segments() {
            let d2 = crate::exact::dist2_point_segment(&centroid, a, b);
            min2 = Some(match min2 {
                Some(cur) => cur.min(d2),
                None => d2,
            });
        }
        let inradius = rat_to_f64(&min2.expect("polygon has sides")).sqrt();
        crate::exact::dyadic_approx(inradius / 3.0, 16)
    };
    let directions = [
        (rat(1), rat(0)),
        (ratio(3, 4), ratio(3, 4)),
        (rat(0), rat(1)),
        (ratio(-3, 4), ratio(3, 4)),
        (rat(-1), rat(0)),
        (ratio(-3, 4), ratio(-3, 4)),
        (rat(0), rat(-1)),
        (ratio(3, 4), ratio(-3, 4)),
    ];
    let mut strands = Vec::with_capacity(m);
    for i in 0..m {
        let prev = &exits[(i + m - 1) % m];
        let entry_side = schema
            .partner(prev.side)
            .expect("exit sides are glued by construction");
        let entry = SidePoint::new(entry_side, prev.param.clone());
        let (dx, dy) = &directions[i % directions.len()];
        let shrink = Rat::new(((2 * m - i) as i64).into(), ((2 * m) as i64).into());
        let offset = Pt::new(dx * &spread, dy * &spread).scaled(&shrink);
        let midpoint = &centroid + &offset;
        strands.push(Strand {
            entry: Some(entry),
            points: vec![midpoint],
            exit: Some(exits[i].clone()),
        });
    }
    let curve = PLCurve {
        strands,
        basepoint: (0, 0),
    };
    let report = curve.validate(schema)?;
    let produced = curve.edge_word(schema)?;
    if produced != *word {
        return Err(Error::MalformedCurve {
            reason: "constructed curve fails to reproduce its word".into(),
        });
    }
    Ok((curve, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::SurfaceSchema;

    fn torus() -> SurfaceSchema {
        SurfaceSchema::parse("abAB", &[]).unwrap()
    }

    fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> Pt {
        Pt::new(ratio(xn, xd), ratio(yn, yd))
    }

    fn disk() -> SurfaceSchema {
        SurfaceSchema::parse("abc", &[0, 1, 2]).unwrap()
    }

    #[test]
    fn embedded_diamond_has_no_crossings() {
        let schema = torus();
        let curve = diamond_loop(&pt(1, 2, 1, 2), &ratio(1, 4));
        let report = curve.validate(&schema).expect("diamond is valid");
        assert!(report.crossings.is_empty(), "an embedded loop has no double points");
        assert_eq!(curve.self_intersection_parity(&schema).unwrap(), 0);
        assert!(curve.edge_word(&schema).unwrap().is_empty());
        assert!(report.clearance > 0.0, "clearance must be positive");
    }

    #[test]
    fn figure_eight_has_one_crossing() {
        let schema = disk();
        let curve = figure_eight_loop(&Pt::zero(), &ratio(1, 8));
        let report = curve.validate(&schema).expect("bowtie is valid");
        assert_eq!(report.crossings.len(), 1, "a bowtie has exactly one double point");
        assert_eq!(report.crossings[0].point, Pt::zero());
        assert_eq!(curve.self_intersection_parity(&schema).unwrap(), 1);
    }

    #[test]
    fn corner_parameter_is_a_vertex_hit() {
        let schema = torus();
        let curve = PLCurve {
            strands: vec![Strand {
                entry: Some(SidePoint::new(2, rat(0))),
                points: vec![pt(1, 2, 1, 2)],
                exit: Some(SidePoint::new(0, rat(0))),
            }],
            basepoint: (0, 0),
        };
        assert!(matches!(
            curve.validate(&schema),
            Err(Error::VertexHit { .. })
        ));
    }

    #[test]
    fn chain_marker_parameter_is_a_vertex_hit() {
        let schema = SurfaceSchema::parse("aa", &[]).unwrap();
        let curve = PLCurve {
            strands: vec![Strand {
                entry: Some(SidePoint::new(1, ratio(1, 2))),
                points: vec![Pt::zero()],
                exit: Some(SidePoint::new(0, ratio(1, 2))),
            }],
            basepoint: (0, 0),
        };
        assert!(matches!(
            curve.validate(&schema),
            Err(Error::VertexHit { .. })
        ));
    }

    #[test]
    fn three_concurrent_chords_are_a_triple_point() {
        let schema = torus();
        let pts = |x: i64, y: i64| pt(x, 4, y, 4);
        // Three segments through (1/2, 1/2) inside the unit square.
        let points = vec![
            pts(3, 2), // (3/4, 1/2)
            pts(1, 2), // (1/4, 1/2)
            pts(1, 1), // (1/4, 1/4)
            pts(3, 3), // (3/4, 3/4)
            pts(2, 3), // (1/2, 3/4)
            pts(2, 1), // (1/2, 1/4)
        ];
        let curve = PLCurve::interior_loop(points, 0);
        assert!(matches!(
            curve.validate(&schema),
            Err(Error::TriplePoint { .. })
        ));
    }

    #[test]
    fn tangency_is_rejected() {
        let schema = torus();
        // The vertex (1/2, 1/2) lies on the interior of the first segment.
        let points = vec![
            pt(1, 4, 1, 2),
            pt(3, 4, 1, 2),
            pt(3, 4, 3, 4),
            pt(1, 2, 1, 2),
            pt(1, 4, 3, 4),
        ];
        let curve = PLCurve::interior_loop(points, 0);
        let outcome = curve.validate(&schema);
        assert!(
            matches!(outcome, Err(Error::TangentialCrossing { .. })),
            "a vertex resting on another segment must be rejected, got {outcome:?}"
        );
    }

    #[test]
    fn torus_word_curves_read_back_their_words() {
        let schema = torus();
        for text in ["a", "b", "ab", "aA", "abAB", "aab"] {
            let word = schema.parse_word(text).unwrap();
            let (curve, report) = curve_from_word(&schema, &word).expect("constructible");
            assert_eq!(
                schema.display_word(&curve.edge_word(&schema).unwrap()),
                text,
                "edge word must reproduce the request"
            );
            assert!(report.clearance > 0.0);
        }
    }

    #[test]
    fn word_curves_work_on_other_schemas() {
        for (sides, punctures, text) in [
            ("abaB", [].as_slice(), "ab"),
            ("aabb", &[], "ab"),
            ("aa", &[], "a"),
            ("abac", &[1, 3], "aa"),
            ("abABcdCD", &[], "ac"),
        ] {
            let schema = SurfaceSchema::parse(sides, punctures).unwrap();
            let word = schema.parse_word(text).unwrap();
            let (curve, _) = curve_from_word(&schema, &word)
                .unwrap_or_else(|e| panic!("word {text} on {sides}: {e:?}"));
            assert_eq!(schema.display_word(&curve.edge_word(&schema).unwrap()), text);
        }
    }

    #[test]
    fn mismatched_gluing_parameters_are_not_closed() {
        let schema = torus();
        let curve = PLCurve {
            strands: vec![Strand {
                entry: Some(SidePoint::new(2, ratio(1, 3))),
                points: vec![pt(1, 2, 1, 2)],
                exit: Some(SidePoint::new(0, ratio(2, 3))),
            }],
            basepoint: (0, 0),
        };
        assert!(matches!(curve.validate(&schema), Err(Error::NotClosed)));
    }

    #[test]
    fn free_side_crossing_is_malformed() {
        let schema = SurfaceSchema::parse("abac", &[1, 3]).unwrap();
        let curve = PLCurve {
            strands: vec![Strand {
                entry: Some(SidePoint::new(1, ratio(1, 3))),
                points: vec![],
                exit: Some(SidePoint::new(1, ratio(1, 3))),
            }],
            basepoint: (0, 0),
        };
        assert!(matches!(
            curve.validate(&schema),
            Err(Error::MalformedCurve { .. })
        ));
    }

    #[test]
    fn subdivision_preserves_crossings_and_word() {
        let schema = torus();
        let word = schema.parse_word("ab").unwrap();
        let (curve, report) = curve_from_word(&schema, &word).unwrap();
        for t in [ratio(1, 3), ratio(2, 5)] {
            let finer = curve.subdivided(&schema, &t);
            let fine_report = finer.validate(&schema).expect("subdivision stays valid");
            assert_eq!(
                fine_report.crossings.len(),
                report.crossings.len(),
                "subdividing at {t} must not change the crossing count"
            );
            assert_eq!(finer.edge_word(&schema).unwrap(), word);
        }
        let eight = figure_eight_loop(&pt(1, 2, 1, 2), &ratio(1, 8));
        let finer = eight.subdivided(&schema, &ratio(1, 3));
        assert_eq!(
            finer.validate(&schema).unwrap().crossings.len(),
            1,
            "bowtie keeps its double point after subdivision"
        );
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn perturbation_below_clearance_preserves_invariants(
            factors in prop::collection::vec(-999i32..1000, 24)
        ) {
            let schema = torus();
            let word = schema.parse_word("ab").unwrap();
            let (curve, report) = curve_from_word(&schema, &word).unwrap();
            let scale = crate::exact::dyadic_approx(report.clearance * 0.45, 24);
            let param_scale = &scale * &ratio(1, 3);
            let mut cursor = 0usize;
            let mut next = |unit: &Rat| -> Rat {
                let k = factors[cursor % factors.len()];
                cursor += 1;
                unit * &ratio(k as i64, 1000)
            };
            let mut perturbed = curve.clone();
            for strand in &mut perturbed.strands {
                for p in &mut strand.points {
                    p.x = &p.x + &next(&scale);
                    p.y = &p.y + &next(&scale);
                }
            }
            let n = perturbed.strands.len();
            for i in 0..n {
                let shift = next(&param_scale);
                let base = perturbed.strands[i].exit.as_ref().unwrap().param.clone();
                let moved = &base + &shift;
                perturbed.strands[i].exit.as_mut().unwrap().param = moved.clone();
                perturbed.strands[(i + 1) % n].entry.as_mut().unwrap().param = moved;
            }
            let outcome = perturbed.validate(&schema);
            prop_assert!(outcome.is_ok(), "perturbation under clearance broke validity: {:?}", outcome.err());
            prop_assert_eq!(outcome.unwrap().crossings.len(), report.crossings.len());
            prop_assert_eq!(perturbed.edge_word(&schema).unwrap(), word);
        }

        #[test]
        fn interior_loop_perturbation_keeps_the_double_point(
            factors in prop::collection::vec(-999i32..1000, 8)
        ) {
            let schema = torus();
            let eight = figure_eight_loop(&pt(1, 2, 1, 2), &ratio(1, 10));
            let report = eight.validate(&schema).unwrap();
            let scale = crate::exact::dyadic_approx(report.clearance * 0.45, 24);
            let mut perturbed = eight.clone();
            for (i, p) in perturbed.strands[0].points.iter_mut().enumerate() {
                p.x = &p.x + &(&scale * &ratio(factors[2 * i] as i64, 1000));
                p.y = &p.y + &(&scale * &ratio(factors[2 * i + 1] as i64, 1000));
            }
            let outcome = perturbed.validate(&schema);
            prop_assert!(outcome.is_ok(), "perturbation broke the bowtie: {:?}", outcome.err());
            prop_assert_eq!(outcome.unwrap().crossings.len(), 1);
        }
    }

    #[test]
    fn crossing_count_ignores_strand_enumeration_order() {
        let schema = torus();
        let word = schema.parse_word("aab").unwrap();
        let (curve, report) = curve_from_word(&schema, &word).unwrap();
        let mut rotated = curve.clone();
        rotated.strands.rotate_left(1);
        rotated.basepoint = (curve.strands.len() - 1, 0);
        let rotated_report = rotated.validate(&schema).expect("rotation stays valid");
        assert_eq!(report.crossings.len(), rotated_report.crossings.len());
    }
}
