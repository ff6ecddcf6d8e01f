//! Band sums of immersed circles.
//!
//! `concatenate` joins two disjoint curves along a thin band following a
//! user-supplied polygonal path through the polygon interior. The first
//! curve is cut open where the path leaves it, routed along one rail of
//! the band to the second curve, around the second curve *backward*, and
//! home along the other rail. Because the band stays interior, the edge
//! word of the sum is the second word inverted spliced into the first:
//! with both cuts on basepoint strands it free-reduces like
//! `word(g)⁻¹ · word(f)`, so the sum represents the difference of the two
//! based classes.
//!
//! The two band types differ by exactly one crossing with the second
//! curve next to the far junction. An [`BandKind::Alternating`] sum makes
//! the band arcs contribute an *odd* number of double points over
//! `crossings(f) + crossings(g) + mutual`; it is the sum whose turning
//! number subtracts, `T(f # g*) = T(f) - T(g)` whenever both sides are
//! defined. A [`BandKind::Constant`] sum keeps the band contribution
//! even and shifts the turning difference by one.

use crate::curve::{PLCurve, Strand};
use crate::error::{Error, Result};
use crate::exact::{
    dist2_point_segment, dist2_segments, orient, point_on_segment, pow2_at_most, rat, rat_to_f64,
    ratio, segment_meet, Pt, Rat, SegmentMeet,
};
use crate::schema::SurfaceSchema;
use num_traits::{Signed, Zero};

/// Which of the two band types to attach.
///
/// `Alternating` flips the crossing parity of the disjoint union;
/// `Constant` keeps it. For two disjoint embedded circles in a disk the
/// alternating sum is the one-crossing figure eight with turning number
/// `0`, while the constant sum is the embedded boundary of the region
/// between the circles, with turning number `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Alternating,
    Constant,
}

impl BandKind {
    /// Parity of double points the band itself must contribute.
    fn parity(self) -> usize {
        match self {
            BandKind::Alternating => 1,
            BandKind::Constant => 0,
        }
    }
}

/// One polyline edge of a curve, with its strand-local index.
struct EdgeRef {
    strand: usize,
    edge: usize,
    a: Pt,
    b: Pt,
}

fn curve_edges(curve: &PLCurve, schema: &SurfaceSchema) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    for (si, strand) in curve.strands.iter().enumerate() {
        let line = curve.strand_polyline(schema, si);
        if strand.entry.is_none() {
            for i in 0..line.len() {
                out.push(EdgeRef {
                    strand: si,
                    edge: i,
                    a: line[i].clone(),
                    b: line[(i + 1) % line.len()].clone(),
                });
            }
        } else {
            for i in 0..line.len() - 1 {
                out.push(EdgeRef {
                    strand: si,
                    edge: i,
                    a: line[i].clone(),
                    b: line[i + 1].clone(),
                });
            }
        }
    }
    out
}

/// Index of the unique edge whose open interior contains `p`.
fn locate_endpoint(edges: &[EdgeRef], p: &Pt, which: &str) -> Result<usize> {
    let mut found = None;
    for (i, e) in edges.iter().enumerate() {
        if point_on_segment(p, &e.a, &e.b) {
            if p == &e.a || p == &e.b {
                return Err(Error::MalformedPath {
                    reason: format!("path {which} endpoint sits on a curve vertex"),
                });
            }
            if found.is_some() {
                return Err(Error::MalformedPath {
                    reason: format!("path {which} endpoint sits on a double point"),
                });
            }
            found = Some(i);
        }
    }
    found.ok_or_else(|| Error::MalformedPath {
        reason: format!("path {which} endpoint does not lie on its curve"),
    })
}

fn touches_curve(edges: &[EdgeRef], p: &Pt) -> bool {
    edges.iter().any(|e| point_on_segment(p, &e.a, &e.b))
}

/// The strand of `curve` whose interior carries `p`, with the same
/// diagnostics as band-path endpoint location.
pub(crate) fn host_strand(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    p: &Pt,
    which: &str,
) -> Result<usize> {
    let edges = curve_edges(curve, schema);
    let idx = locate_endpoint(&edges, p, which)?;
    Ok(edges[idx].strand)
}

/// Count transverse intersections between the two curves, rejecting any
/// tangential or overlapping contact.
fn mutual_crossings(f_edges: &[EdgeRef], g_edges: &[EdgeRef]) -> Result<usize> {
    let mut count = 0;
    for ef in f_edges {
        for eg in g_edges {
            match segment_meet(&ef.a, &ef.b, &eg.a, &eg.b) {
                SegmentMeet::Empty => {}
                SegmentMeet::Proper { .. } => count += 1,
                _ => {
                    return Err(Error::MalformedPath {
                        reason: "the two curves touch tangentially; perturb one of them".into(),
                    })
                }
            }
        }
    }
    Ok(count)
}

fn seg_dist_f64(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> f64 {
    rat_to_f64(&dist2_segments(a, b, c, d)).sqrt()
}

fn dist_f64(a: &Pt, b: &Pt) -> f64 {
    rat_to_f64(&a.dist2(b)).sqrt()
}

/// A traversal-reversed copy of a boundary strand.
fn reversed_strand(s: &Strand) -> Strand {
    let mut points = s.points.clone();
    points.reverse();
    Strand {
        entry: s.exit.clone(),
        points,
        exit: s.entry.clone(),
    }
}

/// The cut point a small step from `q` toward `end`, and the fraction used.
fn cut_toward(q: &Pt, end: &Pt, eps: f64) -> Result<(Pt, Rat)> {
    let room = dist_f64(q, end);
    let frac = pow2_at_most((2.0 * eps / room).min(0.25)).ok_or_else(|| {
        Error::InsufficientClearance {
            reason: "no room to cut the curve next to the path".into(),
        }
    })?;
    Ok((q.lerp(end, &frac), frac))
}

/// Offset copy of the path at distance about `eps`, on side `sigma`,
/// with mitred corners so the rail never folds back across itself.
fn rail(path: &[Pt], offsets: &[Pt], sigma: i8) -> Vec<Pt> {
    let sig = rat(i64::from(sigma));
    let mut out = Vec::with_capacity(path.len());
    out.push(&path[0] + &offsets[0].scaled(&sig));
    for v in 1..path.len() - 1 {
        let d_in = &path[v] - &path[v - 1];
        let d_out = &path[v + 1] - &path[v];
        let denom = d_in.cross(&d_out);
        if denom.is_zero() {
            continue; // straight passage, no corner vertex needed
        }
        let a = &path[v] + &offsets[v - 1].scaled(&sig);
        let b = &path[v] + &offsets[v].scaled(&sig);
        let t = (&b - &a).cross(&d_out) / &denom;
        out.push(&a + &d_in.scaled(&t));
    }
    out.push(path.last().expect("path is nonempty") + &offsets[offsets.len() - 1].scaled(&sig));
    out
}

/// How one smoothing of a junction behaves: the number of proper
/// crossings between its two connector segments, or `None` when they
/// meet degenerately.
fn junction_crossings(c1: (&Pt, &Pt), c2: (&Pt, &Pt)) -> Option<usize> {
    match segment_meet(c1.0, c1.1, c2.0, c2.1) {
        SegmentMeet::Empty => Some(0),
        SegmentMeet::Proper { .. } => Some(1),
        _ => None,
    }
}

struct Junction {
    strand: usize,
    edge: usize,
    host_a: Pt,
    host_b: Pt,
    q: Pt,
}

fn junction(edges: &[EdgeRef], p: &Pt, which: &str) -> Result<Junction> {
    let idx = locate_endpoint(edges, p, which)?;
    let e = &edges[idx];
    Ok(Junction {
        strand: e.strand,
        edge: e.edge,
        host_a: e.a.clone(),
        host_b: e.b.clone(),
        q: p.clone(),
    })
}

/// Band sum of `f` with the reverse of `g` along `path`.
///
/// `path[0]` must lie in the open interior of one edge of `f`,
/// `path[last]` on one edge of `g`, every point strictly inside the
/// polygon, and the open path must stay clear of both curves, itself and
/// the boundary. The result is validated before it is returned; its
/// double points are those of `f`, of `g`, the mutual crossings of the
/// pair, plus band self-contacts of the parity selected by `kind`.
pub fn concatenate(
    f: &PLCurve,
    g: &PLCurve,
    path: &[Pt],
    kind: BandKind,
    schema: &SurfaceSchema,
) -> Result<PLCurve> {
    let report_f = f.validate(schema)?;
    let report_g = g.validate(schema)?;
    if path.len() < 2 {
        return Err(Error::MalformedPath {
            reason: "path needs at least two points".into(),
        });
    }
    let polygon = schema.polygon();
    for p in path {
        if !polygon.contains_strictly(p) {
            return Err(Error::MalformedPath {
                reason: "path leaves the open polygon".into(),
            });
        }
    }
    for w in path.windows(2) {
        if w[0] == w[1] {
            return Err(Error::MalformedPath {
                reason: "path repeats a point".into(),
            });
        }
    }
    for v in 1..path.len() - 1 {
        let d_in = &path[v] - &path[v - 1];
        let d_out = &path[v + 1] - &path[v];
        if d_in.cross(&d_out).is_zero() && !d_in.dot(&d_out).is_positive() {
            return Err(Error::MalformedPath {
                reason: "path doubles back on itself".into(),
            });
        }
    }
    let segs = path.len() - 1;
    for i in 0..segs {
        for j in i + 2..segs {
            if !matches!(
                segment_meet(&path[i], &path[i + 1], &path[j], &path[j + 1]),
                SegmentMeet::Empty
            ) {
                return Err(Error::MalformedPath {
                    reason: "path intersects itself".into(),
                });
            }
        }
    }

    let f_edges = curve_edges(f, schema);
    let g_edges = curve_edges(g, schema);
    if touches_curve(&g_edges, &path[0]) || touches_curve(&f_edges, &path[segs]) {
        return Err(Error::MalformedPath {
            reason: "path endpoints must each touch only their own curve".into(),
        });
    }
    let jf = junction(&f_edges, &path[0], "start")?;
    let jg = junction(&g_edges, &path[segs], "end")?;
    let mutual = mutual_crossings(&f_edges, &g_edges)?;

    // The path may touch each curve only at its own junction.
    for i in 0..segs {
        for (edges, host, expected, label) in [
            (
                &f_edges,
                (i == 0).then_some((jf.strand, jf.edge)),
                &path[0],
                "first",
            ),
            (
                &g_edges,
                (i == segs - 1).then_some((jg.strand, jg.edge)),
                &path[segs],
                "second",
            ),
        ] {
            for e in edges.iter() {
                let meet = segment_meet(&path[i], &path[i + 1], &e.a, &e.b);
                let allowed = host == Some((e.strand, e.edge));
                match meet {
                    SegmentMeet::Empty => {}
                    SegmentMeet::Touch { ref point } if allowed && point == expected => {}
                    _ => {
                        return Err(Error::MalformedPath {
                            reason: format!("path is not clear of the {label} curve"),
                        })
                    }
                }
            }
        }
    }

    // Clearance floor for every band dimension.
    let mut clear = report_f.clearance.min(report_g.clearance);
    let mut shrink = |d: f64| {
        if d < clear {
            clear = d;
        }
    };
    for i in 0..segs {
        shrink(dist_f64(&path[i], &path[i + 1]));
        for (edges, j, touching, far) in [
            (&f_edges, &jf, i == 0, &path[1]),
            (&g_edges, &jg, i == segs - 1, &path[segs - 1]),
        ] {
            for e in edges.iter() {
                if touching && (e.strand, e.edge) == (j.strand, j.edge) {
                    // The touching pair has distance zero; bound the
                    // junction neighbourhood by how far the path's next
                    // vertex and the host's ends stay from each other.
                    shrink(rat_to_f64(&dist2_point_segment(far, &e.a, &e.b)).sqrt());
                    shrink(rat_to_f64(&dist2_point_segment(&e.a, &path[i], &path[i + 1])).sqrt());
                    shrink(rat_to_f64(&dist2_point_segment(&e.b, &path[i], &path[i + 1])).sqrt());
                    continue;
                }
                shrink(seg_dist_f64(&path[i], &path[i + 1], &e.a, &e.b));
            }
        }
        for (_, a, b) in polygon.boundary_segments() {
            shrink(seg_dist_f64(&path[i], &path[i + 1], a, b));
        }
        for j in i + 2..segs {
            shrink(seg_dist_f64(
                &path[i],
                &path[i + 1],
                &path[j],
                &path[j + 1],
            ));
        }
    }
    for (q, a, b) in [
        (&jf.q, &jf.host_a, &jf.host_b),
        (&jg.q, &jg.host_a, &jg.host_b),
    ] {
        shrink(dist_f64(q, a));
        shrink(dist_f64(q, b));
    }
    let eps = pow2_at_most(clear / 8.0).ok_or_else(|| Error::InsufficientClearance {
        reason: "curves, path and boundary leave no room for a band".into(),
    })?;
    let eps_f = rat_to_f64(&eps);

    let (x_minus, _) = cut_toward(&jf.q, &jf.host_a, eps_f)?;
    let (x_plus, _) = cut_toward(&jf.q, &jf.host_b, eps_f)?;
    let (y_minus, frac_y) = cut_toward(&jg.q, &jg.host_a, eps_f)?;
    let (y_plus, _) = cut_toward(&jg.q, &jg.host_b, eps_f)?;

    let mut offsets = Vec::with_capacity(segs);
    for i in 0..segs {
        let d = &path[i + 1] - &path[i];
        let len = rat_to_f64(&d.norm2()).sqrt();
        let scale = pow2_at_most(eps_f / len).ok_or_else(|| Error::InsufficientClearance {
            reason: "band rail would collapse to zero width".into(),
        })?;
        offsets.push(d.rot90().scaled(&scale));
    }

    // The side on which the path leaves the first curve fixes the sign
    // conventions of the whole band: a type-flipping dive must wind so the
    // composite's turning lands on the subtracting value for alternating
    // sums (and one past it for constant ones), and the winding is set by
    // which side of the second curve the diving rail comes from.
    let leave_dir = &path[1] - &path[0];
    let host_dir_f = &jf.host_b - &jf.host_a;
    let leave_side = sign(&host_dir_f.cross(&leave_dir));
    if leave_side == 0 {
        return Err(Error::MalformedPath {
            reason: "path leaves the first curve along its own edge".into(),
        });
    }
    let dive_side = match kind {
        BandKind::Alternating => leave_side,
        BandKind::Constant => -leave_side,
    };

    // Pick the rail side whose mouth smoothings cross least: each mouth
    // connector is tested against the opposite connector and against the
    // rail segments entering the mouth, since a connector that switches
    // sides has to cut across the other rail. Leftover transverse mouth
    // crossings are legal; the dive below balances their parity against
    // the requested type, and a rail side that would hand the dive the
    // wrong winding is rejected outright.
    let mut choice: Option<(i8, usize)> = None;
    for sigma in [1i8, -1] {
        let out = rail(path, &offsets, sigma);
        let ret = rail(path, &offsets, -sigma);
        let (o_n, r_n) = (out.len(), ret.len());
        let pairs = [
            ((&x_minus, &out[0]), (&ret[0], &x_plus)),
            ((&x_minus, &out[0]), (&ret[0], &ret[1])),
            ((&ret[0], &x_plus), (&out[0], &out[1])),
            ((&out[o_n - 1], &y_minus), (&y_plus, &ret[r_n - 1])),
            ((&out[o_n - 1], &y_minus), (&ret[r_n - 2], &ret[r_n - 1])),
            ((&y_plus, &ret[r_n - 1]), (&out[o_n - 2], &out[o_n - 1])),
        ];
        let mut total = 0;
        let mut clean = true;
        for (c1, c2) in pairs {
            match junction_crossings(c1, c2) {
                Some(k) => total += k,
                None => {
                    clean = false;
                    break;
                }
            }
        }
        if !clean {
            continue;
        }
        if total % 2 != kind.parity()
            && orient(&jg.host_a, &jg.host_b, &out[o_n - 1]) != dive_side
        {
            continue;
        }
        if choice.map_or(true, |(_, best)| total < best) {
            choice = Some((sigma, total));
        }
    }
    let (sigma_out, smoothing_crossings) = choice.ok_or_else(|| Error::MalformedPath {
        reason: "band mouths cannot be smoothed into the requested type; adjust the path near the curves".into(),
    })?;
    let rail_out = rail(path, &offsets, sigma_out);
    let mut rail_ret = rail(path, &offsets, -sigma_out);
    let e_out = rail_out.last().expect("rail is nonempty").clone();
    rail_ret.reverse();

    // A dive detours the outgoing rail across the second curve just
    // before its junction, adding exactly one transverse crossing.
    let dive = smoothing_crossings % 2 != kind.parity();
    let mut out_chain = Vec::with_capacity(rail_out.len() + 4);
    out_chain.push(x_minus);
    out_chain.extend(rail_out);
    if dive {
        let x_c = jg.q.lerp(&jg.host_a, &(&frac_y * &ratio(3, 2)));
        let host_dir = &jg.host_b - &jg.host_a;
        let len = rat_to_f64(&host_dir.norm2()).sqrt();
        let scale = pow2_at_most(eps_f / (2.0 * len)).ok_or_else(|| {
            Error::InsufficientClearance {
                reason: "no room for the type-flipping dive".into(),
            }
        })?;
        let side = match orient(&jg.host_a, &jg.host_b, &e_out) {
            0 => 1,
            s => s,
        };
        let w = host_dir.rot90().scaled(&(&scale * &rat(i64::from(side))));
        out_chain.push(&x_c + &w);
        out_chain.push(&x_c - &w);
    }
    out_chain.push(y_minus);
    let mut ret_chain = Vec::with_capacity(rail_ret.len() + 2);
    ret_chain.push(y_plus);
    ret_chain.extend(rail_ret);
    ret_chain.push(x_plus);

    let composite = assemble(f, g, &jf, &jg, out_chain, ret_chain);
    let report = composite
        .validate(schema)
        .map_err(|e| Error::InsufficientClearance {
            reason: format!("band placement degenerates: {e}"),
        })?;
    let base = report_f.crossings.len() + report_g.crossings.len() + mutual;
    let total = report.crossings.len();
    if total < base || (total - base) % 2 != kind.parity() {
        return Err(Error::InsufficientClearance {
            reason: format!(
                "band self-contacts spoiled the crossing parity: expected {} extra mod 2 over {base}, found {total}",
                kind.parity()
            ),
        });
    }
    Ok(composite)
}

/// Splice the cut-open curves and the band chains into one curve.
///
/// `out_chain` runs from the cut on `f` to the cut on `g` (first point on
/// `f`'s host edge, last on `g`'s); `ret_chain` runs back. The second
/// curve is traversed against its own orientation between the two.
fn assemble(
    f: &PLCurve,
    g: &PLCurve,
    jf: &Junction,
    jg: &Junction,
    out_chain: Vec<Pt>,
    ret_chain: Vec<Pt>,
) -> PLCurve {
    let (bs, bv) = f.basepoint;
    if f.is_interior() && g.is_interior() {
        let pf = &f.strands[0].points;
        let pg = &g.strands[0].points;
        let (nf, ng) = (pf.len(), pg.len());
        let mut points = Vec::with_capacity(nf + ng + out_chain.len() + ret_chain.len());
        for t in 1..=nf {
            points.push(pf[(jf.edge + t) % nf].clone());
        }
        points.extend(out_chain);
        for t in 0..ng {
            points.push(pg[(jg.edge + ng - t) % ng].clone());
        }
        points.extend(ret_chain);
        return PLCurve {
            strands: vec![Strand {
                entry: None,
                points,
                exit: None,
            }],
            basepoint: (0, (bv + nf - jf.edge - 1) % nf),
        };
    }

    if f.is_interior() {
        // One long boundary strand carries the g-tail, the return rail,
        // all of f, the outgoing rail and the g-front; the remaining g
        // strands follow reversed.
        let pf = &f.strands[0].points;
        let nf = pf.len();
        let gs = &g.strands[jg.strand];
        let mut g_back_tail: Vec<Pt> = gs.points[jg.edge..].to_vec();
        g_back_tail.reverse();
        let mut g_back_front: Vec<Pt> = gs.points[..jg.edge].to_vec();
        g_back_front.reverse();
        let prefix = g_back_tail.len() + ret_chain.len();
        let mut points = g_back_tail;
        points.extend(ret_chain);
        for t in 1..=nf {
            points.push(pf[(jf.edge + t) % nf].clone());
        }
        points.extend(out_chain);
        points.extend(g_back_front);
        let mut strands = vec![Strand {
            entry: gs.exit.clone(),
            points,
            exit: gs.entry.clone(),
        }];
        let ng = g.strands.len();
        for j in 1..ng {
            strands.push(reversed_strand(&g.strands[(jg.strand + ng - j) % ng]));
        }
        return PLCurve {
            strands,
            basepoint: (0, prefix + (bv + nf - jf.edge - 1) % nf),
        };
    }

    let fs = &f.strands[jf.strand];
    let nf = f.strands.len();
    if g.is_interior() {
        // Only f's host strand changes: the band and the whole of g are
        // inlined between its cut halves.
        let pg = &g.strands[0].points;
        let ng = pg.len();
        let mut points: Vec<Pt> = fs.points[..jf.edge].to_vec();
        points.extend(out_chain);
        for t in 0..ng {
            points.push(pg[(jg.edge + ng - t) % ng].clone());
        }
        let inserted = points.len() + ret_chain.len() - jf.edge;
        points.extend(ret_chain);
        points.extend_from_slice(&fs.points[jf.edge..]);
        let mut strands = f.strands.clone();
        strands[jf.strand] = Strand {
            entry: fs.entry.clone(),
            points,
            exit: fs.exit.clone(),
        };
        let basepoint = if bs == jf.strand && bv >= jf.edge {
            (bs, bv + inserted)
        } else {
            (bs, bv)
        };
        return PLCurve { strands, basepoint };
    }

    // Both boundary: f's host strand splits into the half leaving through
    // g's entry side and the half returning through f's old exit, with
    // the reversed g strands and the rest of f in between.
    let gs = &g.strands[jg.strand];
    let ng = g.strands.len();
    let mut g_back_front: Vec<Pt> = gs.points[..jg.edge].to_vec();
    g_back_front.reverse();
    let mut g_back_tail: Vec<Pt> = gs.points[jg.edge..].to_vec();
    g_back_tail.reverse();

    let mut first_half: Vec<Pt> = fs.points[..jf.edge].to_vec();
    first_half.extend(out_chain);
    first_half.extend(g_back_front);
    let prefix = g_back_tail.len() + ret_chain.len();
    let mut second_half = g_back_tail;
    second_half.extend(ret_chain);
    second_half.extend_from_slice(&fs.points[jf.edge..]);

    let mut strands = Vec::with_capacity(nf + ng);
    strands.push(Strand {
        entry: fs.entry.clone(),
        points: first_half,
        exit: gs.entry.clone(),
    });
    for j in 1..ng {
        strands.push(reversed_strand(&g.strands[(jg.strand + ng - j) % ng]));
    }
    strands.push(Strand {
        entry: gs.exit.clone(),
        points: second_half,
        exit: fs.exit.clone(),
    });
    for i in 1..nf {
        strands.push(f.strands[(jf.strand + i) % nf].clone());
    }
    let basepoint = if bs == jf.strand {
        if bv < jf.edge {
            (0, bv)
        } else {
            (ng, prefix + bv - jf.edge)
        }
    } else {
        (ng + 1 + (bs + nf - jf.strand - 1) % nf, bv)
    };
    PLCurve { strands, basepoint }
}
