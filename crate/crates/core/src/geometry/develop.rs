//! Developing curves into a chart.
//!
//! Starting from the basepoint, each strand is pushed through the
//! chart map; every time the curve exits through a glued side the
//! running motion picks up that side's crossing motion, so the next
//! strand is drawn in the neighbouring copy of the polygon.  The
//! result is an immersed polyline in the plane (or the unit disk for
//! hyperbolic charts) whose endpoints agree exactly when the curve's
//! class is trivial.

use crate::curve::PLCurve;
use crate::error::{Error, Result};
use crate::geometry::chart::{ChartModel, Holonomy, RELATOR_TOLERANCE};
use crate::geometry::motion::Motion;
use crate::schema::SurfaceSchema;

/// A developed curve in presentation coordinates.
#[derive(Debug, Clone)]
pub struct DevelopedPolyline {
    pub points: Vec<[f64; 2]>,
    /// Whether the development returned to its starting chart placement.
    pub closed: bool,
    /// Largest gap between consecutive sample points.
    pub sample_density: f64,
}

pub(crate) struct RawDevelopment {
    /// Chart-model coordinates (half-plane coordinates when hyperbolic).
    pub points: Vec<[f64; 2]>,
    pub final_motion: Motion,
}

fn push_point(out: &mut Vec<[f64; 2]>, p: [f64; 2]) {
    if let Some(last) = out.last() {
        if (last[0] - p[0]).abs() < 1e-12 && (last[1] - p[1]).abs() < 1e-12 {
            return;
        }
    }
    out.push(p);
}

/// Develop without validation or closure checks; callers own both.
pub(crate) fn develop_raw(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    hol: &Holonomy,
    start: &Motion,
    samples: usize,
) -> Result<RawDevelopment> {
    assert!(samples >= 1, "at least one sample per segment");
    let mut out: Vec<[f64; 2]> = Vec::new();
    let mut motion = start.clone();
    let (bs, bv) = curve.basepoint;

    let emit_run = |out: &mut Vec<[f64; 2]>, motion: &Motion, run: &[[f64; 2]]| {
        if run.is_empty() {
            return;
        }
        push_point(out, motion.apply(hol.chart_point_f64(run[0])));
        for pair in run.windows(2) {
            for j in 1..=samples {
                let t = j as f64 / samples as f64;
                let q = [
                    pair[0][0] + (pair[1][0] - pair[0][0]) * t,
                    pair[0][1] + (pair[1][1] - pair[0][1]) * t,
                ];
                push_point(out, motion.apply(hol.chart_point_f64(q)));
            }
        }
    };

    if curve.is_interior() {
        let pts = &curve.strands[0].points;
        let n = pts.len();
        let run: Vec<[f64; 2]> = (0..=n)
            .map(|j| {
                let (x, y) = pts[(bv + j) % n].to_f64();
                [x, y]
            })
            .collect();
        emit_run(&mut out, &motion, &run);
        return Ok(RawDevelopment {
            points: out,
            final_motion: motion,
        });
    }

    let strand_count = curve.strands.len();
    for k in 0..=strand_count {
        let idx = (bs + k) % strand_count;
        let poly = curve.strand_polyline(schema, idx);
        let coords: Vec<[f64; 2]> = poly
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                [x, y]
            })
            .collect();
        // In a strand polyline the entry point occupies index 0, so
        // interior vertex `bv` sits at index `bv + 1`.
        let (from, to) = if k == 0 {
            (bv + 1, coords.len() - 1)
        } else if k == strand_count {
            (0, bv + 1)
        } else {
            (0, coords.len() - 1)
        };
        emit_run(&mut out, &motion, &coords[from..=to]);
        if k < strand_count {
            let side = curve.strands[idx]
                .exit
                .as_ref()
                .expect("non-interior strands have exits")
                .side;
            let crossing = hol
                .crossing_motion(side)
                .expect("validated curves only cross glued sides");
            motion = motion.compose(crossing);
        }
    }
    Ok(RawDevelopment {
        points: out,
        final_motion: motion,
    })
}

fn default_samples(model: ChartModel) -> usize {
    match model {
        // Straight lines stay straight in a flat chart.
        ChartModel::Plane => 1,
        // Hyperbolic charts bend segments; sample them.
        ChartModel::HalfPlane => 24,
        ChartModel::Round => 1,
    }
}

/// Develop a curve and report whether it closed up, without insisting
/// that it does.
pub fn develop_open(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    hol: &Holonomy,
    start: &Motion,
) -> Result<(DevelopedPolyline, f64)> {
    if hol.model() == ChartModel::Round {
        return Err(Error::UnsupportedSchema {
            reason: "round models have no planar chart to develop into".to_string(),
        });
    }
    curve.validate(schema)?;
    let raw = develop_raw(curve, schema, hol, start, default_samples(hol.model()))?;
    let residual = start.inverse().compose(&raw.final_motion).residual();
    let points: Vec<[f64; 2]> = raw.points.iter().map(|&q| hol.present_point(q)).collect();
    let mut density: f64 = 0.0;
    for pair in points.windows(2) {
        density = density.max((pair[0][0] - pair[1][0]).hypot(pair[0][1] - pair[1][1]));
    }
    let closed = residual < RELATOR_TOLERANCE;
    if closed {
        let first = points.first().expect("developments are non-empty");
        let last = points.last().expect("developments are non-empty");
        debug_assert!(
            (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-9,
            "a closing motion must bring the polyline back to its start"
        );
    }
    Ok((
        DevelopedPolyline {
            points,
            closed,
            sample_density: density,
        },
        residual,
    ))
}

/// Develop a curve whose class is trivial; errors with the closure
/// residual otherwise.
pub fn develop(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    hol: &Holonomy,
    start: &Motion,
) -> Result<DevelopedPolyline> {
    let (polyline, residual) = develop_open(curve, schema, hol, start)?;
    if !polyline.closed {
        return Err(Error::NotNullHomotopic { residual });
    }
    Ok(polyline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curve_from_word, diamond_loop};
    use crate::exact::{ratio, Pt};
    use crate::geometry::chart::realize;
    use crate::schema::SurfaceSchema;

    fn schema(word: &str, punctures: &[usize]) -> SurfaceSchema {
        SurfaceSchema::parse(word, punctures).expect("test schema parses")
    }

    #[test]
    fn interior_curves_develop_to_themselves_in_flat_charts() {
        let s = schema("abc", &[0, 1, 2]);
        let curve = diamond_loop(&Pt::new(ratio(0, 1), ratio(0, 1)), &ratio(1, 4));
        let hol = realize(&s).unwrap();
        let dev = develop(&curve, &s, &hol, &hol.identity_motion()).expect("diamond develops");
        assert!(dev.closed, "interior curves always close");
        let expected = {
            let (x, y) = curve.strands[0].points[0].to_f64();
            [x, y]
        };
        assert!(
            (dev.points[0][0] - expected[0]).abs() < 1e-12
                && (dev.points[0][1] - expected[1]).abs() < 1e-12,
            "flat development starts at the basepoint itself"
        );
        let first = dev.points.first().unwrap();
        let last = dev.points.last().unwrap();
        assert!(
            (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-12,
            "loop must return to its start"
        );
    }

    #[test]
    fn torus_out_and_back_finger_closes() {
        let s = schema("abAB", &[]);
        let (curve, _) = curve_from_word(&s, &s.parse_word("aA").unwrap()).expect("finger curve");
        let hol = realize(&s).unwrap();
        let dev = develop(&curve, &s, &hol, &hol.identity_motion())
            .expect("out-and-back crossing is null-homotopic");
        assert!(dev.closed);
        assert!(
            dev.points.len() > 3,
            "the finger should pass through the neighbouring square"
        );
    }

    #[test]
    fn essential_torus_curve_reports_its_residual() {
        let s = schema("abAB", &[]);
        let (curve, _) = curve_from_word(&s, &s.parse_word("a").unwrap()).expect("core curve");
        let hol = realize(&s).unwrap();
        let err = develop(&curve, &s, &hol, &hol.identity_motion()).unwrap_err();
        match err {
            Error::NotNullHomotopic { residual } => assert!(
                residual > 0.5,
                "a unit translation should leave residual about one, got {residual}"
            ),
            other => panic!("expected a non-closing development, got {other:?}"),
        }
    }

    #[test]
    fn hyperbolic_out_and_back_closes_in_the_disk() {
        let s = schema("abABcdCD", &[]);
        let (curve, _) = curve_from_word(&s, &s.parse_word("aA").unwrap()).expect("finger curve");
        let hol = realize(&s).unwrap();
        let dev = develop(&curve, &s, &hol, &hol.identity_motion())
            .expect("out-and-back finger closes on the octagon too");
        assert!(dev.closed);
        for p in &dev.points {
            assert!(
                p[0].hypot(p[1]) < 1.0 + 1e-9,
                "disk-model development must stay in the unit disk, got {p:?}"
            );
        }
        assert!(
            dev.sample_density < 0.2,
            "hyperbolic sampling should be reasonably dense, got {}",
            dev.sample_density
        );
    }

    #[test]
    fn changing_the_start_motion_moves_the_development_rigidly() {
        let s = schema("abAB", &[]);
        let (curve, _) = curve_from_word(&s, &s.parse_word("aA").unwrap()).expect("finger curve");
        let hol = realize(&s).unwrap();
        let base = develop(&curve, &s, &hol, &hol.identity_motion()).unwrap();
        let shift = hol.word_motion(&s, &s.parse_word("b").unwrap());
        let moved = develop(&curve, &s, &hol, &shift).unwrap();
        assert_eq!(base.points.len(), moved.points.len());
        for (p, q) in base.points.iter().zip(moved.points.iter()) {
            let image = shift.apply(*p);
            assert!(
                (image[0] - q[0]).abs() < 1e-9 && (image[1] - q[1]).abs() < 1e-9,
                "developments in different placements differ by that placement"
            );
        }
    }

    #[test]
    fn round_models_refuse_to_develop() {
        let s = schema("aa", &[]);
        let hol = realize(&s).unwrap();
        let curve = diamond_loop(&Pt::new(ratio(0, 1), ratio(-1, 4)), &ratio(1, 8));
        let err = develop(&curve, &s, &hol, &Motion::Plane(
            crate::geometry::motion::PlaneMotion::identity(),
        ))
        .unwrap_err();
        assert!(
            matches!(err, Error::UnsupportedSchema { .. }),
            "round models have no chart, got {err:?}"
        );
    }

    #[test]
    fn development_starts_at_the_basepoint_vertex() {
        let s = schema("abAB", &[]);
        let hol = realize(&s).unwrap();

        // Strand curve: move the basepoint onto the second strand.
        let (mut curve, _) = curve_from_word(&s, &s.parse_word("aA").unwrap()).unwrap();
        curve.basepoint = (1, 0);
        let dev = develop(&curve, &s, &hol, &hol.identity_motion()).unwrap();
        let (x, y) = curve.strands[1].points[0].to_f64();
        assert!(
            (dev.points[0][0] - x).abs() < 1e-12 && (dev.points[0][1] - y).abs() < 1e-12,
            "first developed point must be the basepoint vertex of the strand curve"
        );

        // Interior loop: rotate the starting corner of a diamond.
        let mut diamond = diamond_loop(&Pt::new(ratio(1, 2), ratio(1, 2)), &ratio(1, 4));
        diamond.basepoint = (0, 2);
        let dev = develop(&diamond, &s, &hol, &hol.identity_motion()).unwrap();
        let (x, y) = diamond.strands[0].points[2].to_f64();
        assert!(
            (dev.points[0][0] - x).abs() < 1e-12 && (dev.points[0][1] - y).abs() < 1e-12,
            "first developed point must be the basepoint vertex of the interior loop"
        );
    }
}
