//! Regular-homotopy moves.
//!
//! Every operation here turns a curve into one that is regularly
//! homotopic to it by construction: kinks are born and die through an
//! explicit exact-rational template kept inside a quarter of the local
//! clearance, strand perturbations stay below the validated clearance
//! bound, and slides push one segment across a glued side through an
//! unobstructed finger. The engine exists so tests can manufacture
//! provably-equivalent curve pairs instead of trusting invariance
//! claims, plus an independent signed-crossing oracle for planar
//! turning numbers.

use crate::curve::{PLCurve, SidePoint, Strand};
use crate::error::{Error, Result};
use crate::exact::{pow2_at_most, rat, rat_to_f64, ratio, Pt, Rat};
use crate::geometry::DevelopedPolyline;
use crate::rng::Lcg;
use crate::schema::SurfaceSchema;

/// A point on a strand polyline: `segment` counts polyline edges (the
/// entry edge first on boundary strands) and `t` the fraction walked
/// along that edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPoint {
    pub strand: usize,
    pub segment: usize,
    pub t: Rat,
}

/// One regular-homotopy move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Insert a small loop of the given handedness (+1 turns left).
    AddKink { sign: i8, at: SegmentPoint },
    /// Delete the kink whose six template vertices start at interior
    /// vertex `first` of `strand`.
    RemoveKink { strand: usize, first: usize },
    /// Translate every interior vertex of one strand.
    PerturbStrand { strand: usize, by: Pt },
    /// Push part of a strand across a glued side and back through the
    /// side's partner, leaving the image isotopic.
    SlideAcrossSide { strand: usize, side: usize },
    /// Carry the curve's first kink forward along the curve, mirroring
    /// its handedness across orientation-reversing gluings.
    PushKinkAlongCurve { steps: usize },
}

/// Where a kink currently sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinkSite {
    pub strand: usize,
    /// Interior-vertex index of the first of its six template points.
    pub first: usize,
    pub sign: i8,
}

/// The six vertices of the kink template for a left-handed (+1) kink,
/// in traversal order. The first and last lie on the host segment;
/// the loop crosses itself exactly once, between its second edge and
/// its final one, at template point (7/16, 15/16).
fn kink_template(sign: i8) -> [Pt; 6] {
    let s = rat(i64::from(sign));
    [
        Pt::new(rat(-4), rat(0)),
        Pt::new(rat(0), &ratio(1, 2) * &s),
        Pt::new(ratio(3, 4), &ratio(5, 4) * &s),
        Pt::new(rat(0), &rat(2) * &s),
        Pt::new(ratio(-3, 4), &ratio(5, 4) * &s),
        Pt::new(rat(4), rat(0)),
    ]
}

/// Complex multiplication, rotating-and-scaling `t` by `w`.
fn cmul(t: &Pt, w: &Pt) -> Pt {
    Pt::new(
        &(&t.x * &w.x) - &(&t.y * &w.y),
        &(&t.x * &w.y) + &(&t.y * &w.x),
    )
}

fn segment_count(curve: &PLCurve, strand: usize) -> usize {
    let s = &curve.strands[strand];
    if s.entry.is_none() {
        s.points.len()
    } else {
        s.points.len() + 1
    }
}

struct HostSegment {
    a: Pt,
    b: Pt,
    /// Index in the strand's interior-point list where new vertices
    /// splice in.
    splice: usize,
}

fn host_segment(curve: &PLCurve, schema: &SurfaceSchema, at: &SegmentPoint) -> Result<HostSegment> {
    if at.strand >= curve.strands.len() {
        return Err(Error::InvalidInput {
            reason: format!("curve has no strand {}", at.strand),
        });
    }
    if at.t <= rat(0) || at.t >= rat(1) {
        return Err(Error::InvalidInput {
            reason: "segment location must be strictly inside its edge".into(),
        });
    }
    let line = curve.strand_polyline(schema, at.strand);
    let interior = curve.strands[at.strand].entry.is_none();
    if interior {
        let n = line.len();
        if at.segment >= n {
            return Err(Error::InvalidInput {
                reason: format!("strand {} has only {n} edges", at.strand),
            });
        }
        Ok(HostSegment {
            a: line[at.segment].clone(),
            b: line[(at.segment + 1) % n].clone(),
            splice: at.segment + 1,
        })
    } else {
        let edges = line.len() - 1;
        if at.segment >= edges {
            return Err(Error::InvalidInput {
                reason: format!("strand {} has only {edges} edges", at.strand),
            });
        }
        Ok(HostSegment {
            a: line[at.segment].clone(),
            b: line[at.segment + 1].clone(),
            splice: at.segment,
        })
    }
}

fn add_kink(curve: &PLCurve, schema: &SurfaceSchema, sign: i8, at: &SegmentPoint) -> Result<PLCurve> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidInput {
            reason: format!("kink handedness must be +1 or -1, got {sign}"),
        });
    }
    let report = curve.validate(schema)?;
    let host = host_segment(curve, schema, at)?;
    let p = host.a.lerp(&host.b, &at.t);
    let u = &host.b - &host.a;

    // Local clearance around the insertion point: distance to every
    // curve segment other than the host (other strands, and the host's
    // own neighbours, which may curl back), distance to the polygon
    // boundary, and room along the host so the template's on-segment
    // endpoints stay strictly between the host's ends.
    let mut clear = f64::INFINITY;
    for (si, strand) in curve.strands.iter().enumerate() {
        let line = curve.strand_polyline(schema, si);
        let cyclic = strand.entry.is_none();
        let edges = if cyclic { line.len() } else { line.len() - 1 };
        for e in 0..edges {
            if si == at.strand && e == at.segment {
                continue;
            }
            let a = &line[e];
            let b = &line[(e + 1) % line.len()];
            let d = rat_to_f64(&crate::exact::dist2_point_segment(&p, a, b)).sqrt();
            clear = clear.min(d);
        }
    }
    for (_, a, b) in schema.polygon().boundary_segments() {
        let d = rat_to_f64(&crate::exact::dist2_point_segment(&p, a, b)).sqrt();
        clear = clear.min(d);
    }
    let along = rat_to_f64(&u.norm2()).sqrt();
    let t_f = rat_to_f64(&at.t);
    clear = clear.min(along * t_f.min(1.0 - t_f));

    // Footprint radius at most clear/4: template points have norm at
    // most 4 and |u·eta| is at most (|ux| + |uy|)·eta.
    let sup = rat_to_f64(&u.x).abs() + rat_to_f64(&u.y).abs();
    let Some(eta) = pow2_at_most(clear / (16.0 * sup)) else {
        return Err(Error::InsufficientClearance {
            reason: format!(
                "no room for a kink on strand {} edge {}",
                at.strand, at.segment
            ),
        });
    };
    let w = Pt::new(&u.x * &eta, &u.y * &eta);
    let inserted: Vec<Pt> = kink_template(sign)
        .iter()
        .map(|t| &p + &cmul(t, &w))
        .collect();

    let mut out = curve.clone();
    {
        let pts = &mut out.strands[at.strand].points;
        for (k, q) in inserted.into_iter().enumerate() {
            pts.insert(host.splice + k, q);
        }
    }
    if out.basepoint.0 == at.strand && out.basepoint.1 >= host.splice {
        out.basepoint.1 += 6;
    }
    let after = out.validate(schema).map_err(|e| Error::InsufficientClearance {
        reason: format!("kink placement degenerates the curve: {e}"),
    })?;
    if after.crossings.len() != report.crossings.len() + 1 {
        return Err(Error::InsufficientClearance {
            reason: format!(
                "kink footprint reaches other parts of the curve ({} crossings became {})",
                report.crossings.len(),
                after.crossings.len()
            ),
        });
    }
    Ok(out)
}

/// Pattern-match the kink template at interior vertex `first`.
fn kink_match(points: &[Pt], first: usize, cyclic: bool) -> Option<i8> {
    let n = points.len();
    if n < 6 || first >= n || (!cyclic && first + 6 > n) {
        return None;
    }
    let idx = |k: usize| if cyclic { (first + k) % n } else { first + k };
    let a = &points[idx(0)];
    let f = &points[idx(5)];
    let w = (f - a).scaled(&ratio(1, 8));
    if w == Pt::zero() {
        return None;
    }
    let p = a.lerp(f, &ratio(1, 2));
    'signs: for sign in [1i8, -1] {
        for (k, t) in kink_template(sign).iter().enumerate() {
            if points[idx(k)] != &p + &cmul(t, &w) {
                continue 'signs;
            }
        }
        return Some(sign);
    }
    None
}

/// Every spot where a kink template currently sits on the curve.
pub fn kink_sites(curve: &PLCurve) -> Vec<KinkSite> {
    let mut out = Vec::new();
    for (si, strand) in curve.strands.iter().enumerate() {
        let cyclic = strand.entry.is_none();
        let n = strand.points.len();
        let reach = if cyclic { n } else { n.saturating_sub(5) };
        for first in 0..reach {
            if let Some(sign) = kink_match(&strand.points, first, cyclic) {
                out.push(KinkSite {
                    strand: si,
                    first,
                    sign,
                });
            }
        }
    }
    out
}

fn remove_kink(curve: &PLCurve, schema: &SurfaceSchema, strand: usize, first: usize) -> Result<PLCurve> {
    if strand >= curve.strands.len() {
        return Err(Error::InvalidInput {
            reason: format!("curve has no strand {strand}"),
        });
    }
    let cyclic = curve.strands[strand].entry.is_none();
    if kink_match(&curve.strands[strand].points, first, cyclic).is_none() {
        return Err(Error::InvalidInput {
            reason: format!("no kink template starts at vertex {first} of strand {strand}"),
        });
    }
    let report = curve.validate(schema)?;
    let n = curve.strands[strand].points.len();
    let removed: Vec<usize> = (0..6)
        .map(|k| if cyclic { (first + k) % n } else { first + k })
        .collect();
    let (bs, bv) = curve.basepoint;
    if bs == strand && removed.contains(&bv) {
        return Err(Error::InvalidInput {
            reason: "basepoint sits on the kink being removed".into(),
        });
    }
    let mut out = curve.clone();
    {
        let pts = &mut out.strands[strand].points;
        let kept: Vec<Pt> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, q)| q.clone())
            .collect();
        *pts = kept;
    }
    if bs == strand {
        let shift = removed.iter().filter(|&&i| i < bv).count();
        out.basepoint.1 = bv - shift;
    }
    let after = out.validate(schema).map_err(|e| Error::InsufficientClearance {
        reason: format!("removing the kink degenerates the curve: {e}"),
    })?;
    if after.crossings.len() + 1 != report.crossings.len() {
        return Err(Error::InsufficientClearance {
            reason: "the kink's disk is not free: removal changes more than its own crossing"
                .into(),
        });
    }
    Ok(out)
}

fn perturb_strand(curve: &PLCurve, schema: &SurfaceSchema, strand: usize, by: &Pt) -> Result<PLCurve> {
    if strand >= curve.strands.len() {
        return Err(Error::InvalidInput {
            reason: format!("curve has no strand {strand}"),
        });
    }
    let report = curve.validate(schema)?;
    let sup = rat_to_f64(&by.x).abs().max(rat_to_f64(&by.y).abs());
    if sup >= report.clearance {
        return Err(Error::InsufficientClearance {
            reason: format!(
                "displacement {sup:.3e} is not below the clearance bound {:.3e}",
                report.clearance
            ),
        });
    }
    let mut out = curve.clone();
    for q in &mut out.strands[strand].points {
        *q = &*q + by;
    }
    let after = out.validate(schema).map_err(|e| Error::InsufficientClearance {
        reason: format!("perturbation degenerates the curve: {e}"),
    })?;
    if after.crossings.len() != report.crossings.len() {
        return Err(Error::InsufficientClearance {
            reason: "perturbation crossed a clearance margin".into(),
        });
    }
    Ok(out)
}

fn slide_across_side(curve: &PLCurve, schema: &SurfaceSchema, strand: usize, side: usize) -> Result<PLCurve> {
    if strand >= curve.strands.len() {
        return Err(Error::InvalidInput {
            reason: format!("curve has no strand {strand}"),
        });
    }
    if schema.pair_of_side(side).is_none() {
        return Err(Error::InvalidInput {
            reason: format!("side {side} is not glued; nothing lies across it"),
        });
    }
    let partner = schema.partner(side).expect("glued sides have partners");
    let report = curve.validate(schema)?;

    // Parameters already used on this side pair; the new crossings
    // must keep clear of them, of the side's ends, and of chain
    // subdivision vertices.
    let used: Vec<Rat> = curve
        .strands
        .iter()
        .flat_map(|s| [&s.entry, &s.exit])
        .flatten()
        .filter(|sp| sp.side == side || sp.side == partner)
        .map(|sp| sp.param.clone())
        .collect();
    let delta = ratio(1, 24);
    let margin = ratio(1, 48);
    let centers = [
        ratio(1, 2),
        ratio(3, 8),
        ratio(5, 8),
        ratio(1, 4),
        ratio(3, 4),
        ratio(5, 16),
        ratio(11, 16),
        ratio(3, 16),
        ratio(13, 16),
    ];
    let mut chosen = None;
    'search: for c in &centers {
        let lo = &(c - &delta) - &margin;
        let hi = &(c + &delta) + &margin;
        if lo <= rat(0) || hi >= rat(1) {
            continue;
        }
        for u in &used {
            if *u > lo && *u < hi {
                continue 'search;
            }
        }
        for t in [c - &delta, c + &delta] {
            for s in [side, partner] {
                let local = schema.local_of_arrow(s, &t);
                if schema.polygon().marker_locals(s).contains(&local) {
                    continue 'search;
                }
            }
        }
        chosen = Some(c.clone());
        break;
    }
    let Some(center) = chosen else {
        return Err(Error::InsufficientClearance {
            reason: format!("side {side} has no free stretch to slide across"),
        });
    };
    let t1 = &center - &delta;
    let t2 = &center + &delta;

    let ring = schema.polygon().ring();
    let centroid = {
        let mut sum = Pt::zero();
        for v in ring {
            sum = &sum + v;
        }
        sum.scaled(&ratio(1, ring.len() as i64))
    };
    // Pull factor toward the centroid for the four new interior
    // vertices; kept within the clearance bound so the finger hugs the
    // side pair.
    let rho = pow2_at_most((report.clearance * 0.45).min(0.125)).ok_or_else(|| {
        Error::InsufficientClearance {
            reason: "curve leaves no room next to its sides".into(),
        }
    })?;
    let pulled = |s: usize, t: &Rat| {
        let on_side = schema.side_point_at_arrow(s, t);
        let inward = (&centroid - &on_side).scaled(&rho);
        &on_side + &inward
    };
    let a1 = pulled(side, &t1);
    let a2 = pulled(side, &t2);
    let b1 = pulled(partner, &t1);
    let b2 = pulled(partner, &t2);

    let host = &curve.strands[strand];
    let m_side = schema.side_point_at_arrow(side, &center);
    let q_idx = host
        .points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| m_side.dist2(a).cmp(&m_side.dist2(b)))
        .map(|(i, _)| i)
        .expect("strands have interior vertices");

    let pocket = Strand {
        entry: Some(SidePoint::new(partner, t1.clone())),
        points: vec![b1, b2],
        exit: Some(SidePoint::new(partner, t2.clone())),
    };

    let mut out = curve.clone();
    if host.entry.is_none() {
        // Interior loop: the loop opens into one boundary strand plus
        // the pocket.
        let m = host.points.len();
        let mut pts = Vec::with_capacity(m + 2);
        pts.push(a2);
        for k in 1..=m {
            pts.push(host.points[(q_idx + k) % m].clone());
        }
        pts.push(a1);
        let opened = Strand {
            entry: Some(SidePoint::new(side, t2.clone())),
            points: pts,
            exit: Some(SidePoint::new(side, t1.clone())),
        };
        out.strands = vec![opened, pocket];
        let bv = curve.basepoint.1;
        out.basepoint = (0, 1 + (bv + m - q_idx - 1) % m);
    } else {
        let before = Strand {
            entry: host.entry.clone(),
            points: host.points[..=q_idx]
                .iter()
                .cloned()
                .chain([a1])
                .collect(),
            exit: Some(SidePoint::new(side, t1.clone())),
        };
        let after_pts: Vec<Pt> = [a2]
            .into_iter()
            .chain(host.points[q_idx + 1..].iter().cloned())
            .collect();
        let after = Strand {
            entry: Some(SidePoint::new(side, t2.clone())),
            points: after_pts,
            exit: host.exit.clone(),
        };
        out.strands.splice(strand..=strand, [before, pocket, after]);
        let (bs, bv) = curve.basepoint;
        out.basepoint = if bs < strand {
            (bs, bv)
        } else if bs > strand {
            (bs + 2, bv)
        } else if bv <= q_idx {
            (bs, bv)
        } else {
            (bs + 2, 1 + (bv - q_idx - 1))
        };
    }

    let after = out.validate(schema).map_err(|e| Error::InsufficientClearance {
        reason: format!("the finger is obstructed: {e}"),
    })?;
    if after.crossings.len() != report.crossings.len() {
        return Err(Error::InsufficientClearance {
            reason: format!(
                "the finger sweeps across other strands ({} crossings became {})",
                report.crossings.len(),
                after.crossings.len()
            ),
        });
    }
    debug_assert_eq!(
        out.edge_word(schema)
            .expect("slid curve closes up")
            .free_reduce(),
        curve
            .edge_word(schema)
            .expect("original curve closes up")
            .free_reduce(),
        "a slide must only insert a cancelling letter pair"
    );
    Ok(out)
}

fn push_kink(curve: &PLCurve, schema: &SurfaceSchema, steps: usize) -> Result<PLCurve> {
    let sites = kink_sites(curve);
    let Some(site) = sites.first() else {
        return Err(Error::InvalidInput {
            reason: "curve has no kink to push".into(),
        });
    };
    let stripped = remove_kink(curve, schema, site.strand, site.first)?;

    // Host edge of the removed kink in the stripped curve.
    let cyclic = stripped.strands[site.strand].entry.is_none();
    let host_seg = if cyclic {
        let n_old = curve.strands[site.strand].points.len();
        let removed: Vec<usize> = (0..6).map(|k| (site.first + k) % n_old).collect();
        let pred_old = (site.first + n_old - 1) % n_old;
        (0..n_old)
            .filter(|i| !removed.contains(i))
            .position(|i| i == pred_old)
            .expect("the kink's predecessor vertex survives")
    } else {
        site.first
    };

    let mut s = site.strand;
    let mut seg = host_seg;
    let mut sign = site.sign;
    let strand_count = stripped.strands.len();
    for _ in 0..steps {
        seg += 1;
        if seg >= segment_count(&stripped, s) {
            if let Some(exit) = &stripped.strands[s].exit {
                let pair = schema
                    .pair_of_side(exit.side)
                    .expect("validated curves exit through glued sides");
                if !schema.pair(pair).preserving {
                    // The local frame mirrors across the gluing.
                    sign = -sign;
                }
            }
            s = (s + 1) % strand_count;
            seg = 0;
        }
    }
    add_kink(
        &stripped,
        schema,
        sign,
        &SegmentPoint {
            strand: s,
            segment: seg,
            t: ratio(1, 2),
        },
    )
}

/// Apply one move; the result is regularly homotopic to the input.
pub fn apply(curve: &PLCurve, schema: &SurfaceSchema, mv: &Move) -> Result<PLCurve> {
    match mv {
        Move::AddKink { sign, at } => add_kink(curve, schema, *sign, at),
        Move::RemoveKink { strand, first } => remove_kink(curve, schema, *strand, *first),
        Move::PerturbStrand { strand, by } => perturb_strand(curve, schema, *strand, by),
        Move::SlideAcrossSide { strand, side } => slide_across_side(curve, schema, *strand, *side),
        Move::PushKinkAlongCurve { steps } => push_kink(curve, schema, *steps),
    }
}

fn random_kink_spot(cur: &PLCurve, rng: &mut Lcg) -> SegmentPoint {
    let strand = rng.below(cur.strands.len() as u32) as usize;
    let segment = rng.below(segment_count(cur, strand) as u32) as usize;
    let t = ratio(1 + 2 * i64::from(rng.below(8)), 16);
    SegmentPoint { strand, segment, t }
}

/// Draw and apply one class-preserving step, or `None` when the draw does
/// not fit the current curve. Kinks are born and removed only in canceling
/// pairs of opposite handedness: a single kink would shift the turning
/// number and leave the regular-homotopy class.
fn try_step(
    cur: &PLCurve,
    schema: &SurfaceSchema,
    rng: &mut Lcg,
    glued: &[usize],
) -> Option<PLCurve> {
    let strands = cur.strands.len() as u32;
    match rng.below(8) {
        0..=2 => {
            let sign = if rng.below(2) == 0 { 1 } else { -1 };
            let at = random_kink_spot(cur, rng);
            let mid = apply(cur, schema, &Move::AddKink { sign, at }).ok()?;
            for _ in 0..8 {
                let at = random_kink_spot(&mid, rng);
                if let Ok(done) = apply(&mid, schema, &Move::AddKink { sign: -sign, at }) {
                    return Some(done);
                }
            }
            None
        }
        3 | 4 => {
            let sites = kink_sites(cur);
            let plus: Vec<&KinkSite> = sites.iter().filter(|s| s.sign > 0).collect();
            let minus: Vec<&KinkSite> = sites.iter().filter(|s| s.sign < 0).collect();
            if plus.is_empty() || minus.is_empty() {
                return None;
            }
            let p = plus[rng.below(plus.len() as u32) as usize];
            let m = minus[rng.below(minus.len() as u32) as usize];
            // Remove the later site first so the earlier index stays valid.
            let (first, second) = if (p.strand, p.first) > (m.strand, m.first) {
                (p, m)
            } else {
                (m, p)
            };
            let mid = apply(
                cur,
                schema,
                &Move::RemoveKink {
                    strand: first.strand,
                    first: first.first,
                },
            )
            .ok()?;
            apply(
                &mid,
                schema,
                &Move::RemoveKink {
                    strand: second.strand,
                    first: second.first,
                },
            )
            .ok()
        }
        5 => {
            let strand = rng.below(strands) as usize;
            let clearance = cur
                .validate(schema)
                .map(|r| r.clearance)
                .unwrap_or_default();
            let scale = clearance * 0.5;
            let dx = scale * (2.0 * rng.unit_f64() - 1.0);
            let dy = scale * (2.0 * rng.unit_f64() - 1.0);
            let by = Pt::new(
                crate::exact::dyadic_approx(dx * 0.5, 40),
                crate::exact::dyadic_approx(dy * 0.5, 40),
            );
            apply(cur, schema, &Move::PerturbStrand { strand, by }).ok()
        }
        6 => {
            if glued.is_empty() {
                return None;
            }
            let side = glued[rng.below(glued.len() as u32) as usize];
            let strand = rng.below(strands) as usize;
            apply(cur, schema, &Move::SlideAcrossSide { strand, side }).ok()
        }
        _ => {
            if kink_sites(cur).is_empty() {
                return None;
            }
            let steps = 1 + rng.below(4) as usize;
            apply(cur, schema, &Move::PushKinkAlongCurve { steps }).ok()
        }
    }
}

/// Apply `count` random admissible moves; moves that would violate
/// clearance are re-drawn, so the result is always regularly
/// homotopic to the input. Deterministic per seed.
pub fn random_regular_homotopy(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    count: usize,
    seed: u64,
) -> Result<PLCurve> {
    curve.validate(schema)?;
    let glued: Vec<usize> = (0..schema.side_count())
        .filter(|&s| schema.pair_of_side(s).is_some())
        .collect();
    let mut rng = Lcg::new(seed);
    let mut cur = curve.clone();
    for _ in 0..count {
        let mut applied = false;
        for _attempt in 0..24 {
            if let Some(next) = try_step(&cur, schema, &mut rng, &glued) {
                cur = next;
                applied = true;
                break;
            }
        }
        if !applied {
            // Fallback that always clears: a displacement strictly
            // below the clearance bound.
            let report = cur.validate(schema)?;
            let eps = pow2_at_most(report.clearance * 0.25).unwrap_or_else(|| rat(0));
            let strand = rng.below(cur.strands.len() as u32) as usize;
            cur = apply(
                &cur,
                schema,
                &Move::PerturbStrand {
                    strand,
                    by: Pt::new(eps.clone(), -&eps),
                },
            )?;
        }
    }
    Ok(cur)
}

/// Drop every vertex whose two incident edges continue in the same
/// direction; sampled points along straight segments carry no corner
/// and would otherwise masquerade as degenerate parallel edges.
fn collapse_straight_runs(pts: &mut Vec<[f64; 2]>) {
    loop {
        let n = pts.len();
        if n < 3 {
            return;
        }
        let mut keep = vec![true; n];
        let mut changed = false;
        for i in 0..n {
            let prev = (1..n)
                .map(|k| (i + n - k) % n)
                .find(|&k| keep[k])
                .expect("at least two vertices stay");
            let next = (1..n)
                .map(|k| (i + k) % n)
                .find(|&k| keep[k])
                .expect("at least two vertices stay");
            if prev == next {
                break;
            }
            let din = [pts[i][0] - pts[prev][0], pts[i][1] - pts[prev][1]];
            let dout = [pts[next][0] - pts[i][0], pts[next][1] - pts[i][1]];
            let cross = din[0] * dout[1] - din[1] * dout[0];
            let dot = din[0] * dout[0] + din[1] * dout[1];
            let scale = din[0].hypot(din[1]) * dout[0].hypot(dout[1]);
            if cross.abs() <= 1e-9 * scale && dot > 0.0 {
                keep[i] = false;
                changed = true;
            }
        }
        if !changed {
            return;
        }
        let mut filtered = Vec::with_capacity(n);
        for (i, q) in pts.iter().enumerate() {
            if keep[i] {
                filtered.push(*q);
            }
        }
        *pts = filtered;
    }
}

/// Turning number of a closed generic polyline from signed crossings
/// plus the corner term at a rightmost vertex; an oracle independent
/// of angle summation.
pub fn whitney_oracle(poly: &DevelopedPolyline) -> Result<i64> {
    if !poly.closed {
        return Err(Error::NotClosed);
    }
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(poly.points.len());
    for &q in &poly.points {
        if pts
            .last()
            .is_none_or(|l| (l[0] - q[0]).hypot(l[1] - q[1]) > 1e-12)
        {
            pts.push(q);
        }
    }
    if pts.len() > 1 {
        let first = pts[0];
        let last = *pts.last().expect("non-empty");
        if (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-9 {
            pts.pop();
        }
    }
    collapse_straight_runs(&mut pts);
    let n = pts.len();
    if n < 3 {
        return Err(Error::InvalidInput {
            reason: "a closed polyline needs at least three distinct vertices".into(),
        });
    }
    let root = (0..n)
        .max_by(|&i, &j| {
            pts[i][0]
                .partial_cmp(&pts[j][0])
                .expect("finite coordinates")
                .then(pts[i][1].partial_cmp(&pts[j][1]).expect("finite coordinates"))
        })
        .expect("non-empty");
    let prev = pts[(root + n - 1) % n];
    let here = pts[root];
    let next = pts[(root + 1) % n];
    let din = [here[0] - prev[0], here[1] - prev[1]];
    let dout = [next[0] - here[0], next[1] - here[1]];
    let base_cross = din[0] * dout[1] - din[1] * dout[0];
    if base_cross.abs() <= 1e-9 * din[0].hypot(din[1]) * dout[0].hypot(dout[1]) {
        return Err(Error::TangentialCrossing {
            location: "rightmost corner is numerically collinear".into(),
        });
    }
    let mut total: i64 = if base_cross > 0.0 { 1 } else { -1 };

    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            let r = [b[0] - a[0], b[1] - a[1]];
            let q = [d[0] - c[0], d[1] - c[1]];
            let det = r[0] * q[1] - r[1] * q[0];
            let scale = r[0].hypot(r[1]) * q[0].hypot(q[1]);
            let off = [c[0] - a[0], c[1] - a[1]];
            if det.abs() <= 1e-12 * scale {
                // Parallel edges: fine while separated or while they
                // share a line but not a stretch of it; hopeless when
                // they nearly overlap.
                let r_len = r[0].hypot(r[1]).max(1e-300);
                let gap = (off[0] * r[1] - off[1] * r[0]).abs() / r_len;
                if gap < 1e-9 {
                    let r2 = r[0] * r[0] + r[1] * r[1];
                    let sc = (off[0] * r[0] + off[1] * r[1]) / r2;
                    let sd = ((d[0] - a[0]) * r[0] + (d[1] - a[1]) * r[1]) / r2;
                    let (lo, hi) = (sc.min(sd), sc.max(sd));
                    if lo < 1.0 - 1e-9 && hi > 1e-9 {
                        return Err(Error::TangentialCrossing {
                            location: format!("edges {i} and {j} overlap along one line"),
                        });
                    }
                }
                continue;
            }
            let s = (off[0] * q[1] - off[1] * q[0]) / det;
            let t = (off[0] * r[1] - off[1] * r[0]) / det;
            let eps = 1e-9;
            let s_in = s > eps && s < 1.0 - eps;
            let t_in = t > eps && t < 1.0 - eps;
            let s_near = s > -eps && s < 1.0 + eps;
            let t_near = t > -eps && t < 1.0 + eps;
            if s_in && t_in {
                let key_i = (i + n - root) % n;
                let key_j = (j + n - root) % n;
                let (d_first, d_second) = if (key_i, s.to_bits()) < (key_j, t.to_bits()) {
                    (r, q)
                } else {
                    (q, r)
                };
                let cross = d_second[0] * d_first[1] - d_second[1] * d_first[0];
                total += if cross > 0.0 { 1 } else { -1 };
            } else if s_near && t_near {
                return Err(Error::TangentialCrossing {
                    location: format!("edges {i} and {j} meet too close to a vertex"),
                });
            }
        }
    }
    Ok(total)
}
