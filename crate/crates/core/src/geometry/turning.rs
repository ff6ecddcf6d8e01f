//! Turning numbers of closed planar polylines.
//!
//! Two independent computations are provided: the exterior-angle sum
//! of a developed polyline, and a combinatorial count over an exact
//! interior loop (its crossing signs plus a base term at the lowest
//! vertex).  They must agree on generic loops, which makes each one an
//! oracle for the other.

use std::f64::consts::PI;

use crate::curve::PLCurve;
use crate::error::{Error, Result};
use crate::exact::sign;
use crate::geometry::develop::DevelopedPolyline;
use crate::schema::SurfaceSchema;

/// Exterior angles larger than this are treated as unreadable: a turn
/// close to a half-turn cannot be attributed a direction reliably.
pub(crate) const TURN_GUARD: f64 = PI - 0.15;

/// How far from an integer the angle sum may drift before the polyline
/// is rejected as numerically unsound.
pub(crate) const INTEGRALITY_TOLERANCE: f64 = 0.05;

/// Turning number of a closed polyline: the total rotation of its
/// edge direction divided by a full turn.
pub fn turning_number_planar(poly: &DevelopedPolyline) -> Result<i64> {
    if !poly.closed {
        return Err(Error::NotClosed);
    }
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(poly.points.len());
    for &p in &poly.points {
        if let Some(last) = pts.last() {
            if (last[0] - p[0]).hypot(last[1] - p[1]) < 1e-12 {
                continue;
            }
        }
        pts.push(p);
    }
    if let (Some(&first), Some(&last)) = (pts.first(), pts.last()) {
        if (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-9 {
            pts.pop();
        }
    }
    if pts.len() < 3 {
        return Err(Error::InvalidInput {
            reason: "a closed polyline needs at least three distinct vertices".to_string(),
        });
    }
    let n = pts.len();
    let edge = |i: usize| {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        [b[0] - a[0], b[1] - a[1]]
    };
    let mut total = 0.0;
    for i in 0..n {
        let e = edge(i);
        let f = edge((i + 1) % n);
        let turn = (e[0] * f[1] - e[1] * f[0]).atan2(e[0] * f[0] + e[1] * f[1]);
        if turn.abs() > TURN_GUARD {
            return Err(Error::SampleTooCoarse { index: (i + 1) % n });
        }
        total += turn;
    }
    let value = total / (2.0 * PI);
    let rounded = value.round();
    if (value - rounded).abs() > INTEGRALITY_TOLERANCE {
        return Err(Error::AngleSumNotInteger { value });
    }
    Ok(rounded as i64)
}

/// Turning number of an exact interior loop, computed without any
/// floating point: re-root the traversal at the lowest vertex, read a
/// base term from the turn there, and add one sign per self-crossing
/// ordered by first passage.
pub fn whitney_turning_number(curve: &PLCurve, schema: &SurfaceSchema) -> Result<i64> {
    if !curve.is_interior() {
        return Err(Error::InvalidInput {
            reason: "the crossing-count rule applies to interior loops only".to_string(),
        });
    }
    let report = curve.validate(schema)?;
    let pts = &curve.strands[0].points;
    let n = pts.len();
    let root = (0..n)
        .min_by(|&i, &j| pts[i].y.cmp(&pts[j].y).then(pts[i].x.cmp(&pts[j].x)))
        .expect("loops are non-empty");
    let dir = |seg: usize| &pts[(seg + 1) % n] - &pts[seg];
    let incoming = dir((root + n - 1) % n);
    let outgoing = dir(root);
    let base = sign(&incoming.cross(&outgoing));
    debug_assert!(
        base != 0,
        "straight runs through the lowest vertex would contradict its minimality"
    );
    let mut total = i64::from(base);
    for crossing in &report.crossings {
        // Order the two passages by position along the re-rooted loop.
        let shift = |seg: usize| (seg + n - root) % n;
        let a = (shift(crossing.first.segment), crossing.first.t.clone());
        let b = (shift(crossing.second.segment), crossing.second.t.clone());
        let (first_seg, second_seg) = if a < b {
            (crossing.first.segment, crossing.second.segment)
        } else {
            (crossing.second.segment, crossing.first.segment)
        };
        let d_first = dir(first_seg);
        let d_second = dir(second_seg);
        total += i64::from(sign(&d_second.cross(&d_first)));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{diamond_loop, figure_eight_loop, PLCurve};
    use crate::exact::{dyadic_approx, ratio, Pt};
    use crate::geometry::chart::realize;
    use crate::geometry::develop::develop;
    use crate::rng::Lcg;
    use crate::schema::SurfaceSchema;

    fn closed(points: Vec<[f64; 2]>) -> DevelopedPolyline {
        DevelopedPolyline {
            points,
            closed: true,
            sample_density: 1.0,
        }
    }

    #[test]
    fn counterclockwise_regular_polygon_turns_once() {
        let points: Vec<[f64; 2]> = (0..=16)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 16.0;
                [t.cos(), t.sin()]
            })
            .collect();
        assert_eq!(
            turning_number_planar(&closed(points.clone())).unwrap(),
            1,
            "a counterclockwise 16-gon turns once"
        );
        let reversed: Vec<[f64; 2]> = points.into_iter().rev().collect();
        assert_eq!(
            turning_number_planar(&closed(reversed)).unwrap(),
            -1,
            "reversing the traversal negates the turning number"
        );
    }

    #[test]
    fn doubly_traversed_spiral_turns_twice() {
        let coarse: Vec<[f64; 2]> = (0..=32)
            .map(|k| {
                let t = 4.0 * PI * k as f64 / 32.0;
                let r = 1.0 + 0.05 * (t / 2.0).cos();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let fine: Vec<[f64; 2]> = (0..=64)
            .map(|k| {
                let t = 4.0 * PI * k as f64 / 64.0;
                let r = 1.0 + 0.05 * (t / 2.0).cos();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let coarse_turn = turning_number_planar(&closed(coarse)).unwrap();
        let fine_turn = turning_number_planar(&closed(fine)).unwrap();
        assert_eq!(coarse_turn, 2, "two laps turn twice");
        assert_eq!(
            coarse_turn, fine_turn,
            "doubling the sample density must not change the answer"
        );
    }

    #[test]
    fn open_polylines_are_rejected() {
        let poly = DevelopedPolyline {
            points: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
            closed: false,
            sample_density: 1.0,
        };
        assert!(matches!(
            turning_number_planar(&poly),
            Err(Error::NotClosed)
        ));
    }

    #[test]
    fn near_reversals_are_flagged_as_too_coarse() {
        let points = vec![
            [0.0, 0.0],
            [1.0, 0.001],
            [0.0, 0.002],
            [-1.0, 0.001],
            [0.0, 0.0],
        ];
        assert!(matches!(
            turning_number_planar(&closed(points)),
            Err(Error::SampleTooCoarse { .. })
        ));
    }

    #[test]
    fn crossing_count_rule_matches_angle_sum_on_basic_loops() {
        let s = SurfaceSchema::parse("abc", &[0, 1, 2]).unwrap();
        let hol = realize(&s).unwrap();
        let diamond = diamond_loop(&Pt::new(ratio(0, 1), ratio(0, 1)), &ratio(1, 4));
        let eight = figure_eight_loop(&Pt::new(ratio(0, 1), ratio(0, 1)), &ratio(1, 8));
        for (curve, expected) in [(&diamond, 1i64), (&eight, 0i64)] {
            let combinatorial = whitney_turning_number(curve, &s).unwrap();
            let dev = develop(curve, &s, &hol, &hol.identity_motion()).unwrap();
            let angles = turning_number_planar(&dev).unwrap();
            assert_eq!(
                combinatorial, angles,
                "the two turning computations disagree"
            );
            assert_eq!(combinatorial.abs(), expected.abs());
        }
    }

    /// Sampled trigonometric loops: both turning computations must
    /// agree whenever the sampled loop is in general position.
    #[test]
    fn crossing_count_rule_matches_angle_sum_on_random_loops() {
        let s = SurfaceSchema::parse("abc", &[0, 1, 2]).unwrap();
        let hol = realize(&s).unwrap();
        let mut rng = Lcg::new(20260825);
        let mut checked = 0;
        for _ in 0..60 {
            let loops = rng.int_in(1, 2) as f64;
            let mut ax = [0.0; 4];
            let mut ay = [0.0; 4];
            for j in 0..4 {
                ax[j] = 0.12 * (rng.unit_f64() - 0.5);
                ay[j] = 0.12 * (rng.unit_f64() - 0.5);
            }
            let samples = 44 + 2 * rng.int_in(0, 8);
            let pts: Vec<Pt> = (0..samples)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / samples as f64;
                    let mut x = 0.3 * (loops * t).cos();
                    let mut y = 0.3 * (loops * t).sin();
                    for j in 0..4 {
                        x += ax[j] * ((j as f64 + 2.0) * t).cos();
                        y += ay[j] * ((j as f64 + 2.0) * t).sin();
                    }
                    Pt::new(dyadic_approx(x, 24), dyadic_approx(y, 24))
                })
                .collect();
            let curve = PLCurve::interior_loop(pts, 0);
            let Ok(dev) = develop(&curve, &s, &hol, &hol.identity_motion()) else {
                continue; // degenerate sample; the validator refused it
            };
            let combinatorial = whitney_turning_number(&curve, &s).unwrap();
            let angles = match turning_number_planar(&dev) {
                Ok(t) => t,
                // A sampled corner can legitimately approach a reversal;
                // the reader refuses those rather than guessing.
                Err(Error::SampleTooCoarse { .. }) => continue,
                Err(other) => panic!("angle sum failed on a random loop: {other:?}"),
            };
            assert_eq!(
                combinatorial, angles,
                "crossing-count and angle-sum turning numbers disagree on a random loop"
            );
            checked += 1;
        }
        assert!(
            checked >= 40,
            "most random loops should be in general position, only {checked} were"
        );
    }
}
