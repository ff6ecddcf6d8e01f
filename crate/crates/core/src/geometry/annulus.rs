//! Framed turning numbers of essential curves.
//!
//! An essential curve with orientable normal bundle determines an
//! annular cover: the chart modulo the holonomy of the curve's class.
//! Immersing that annulus onto a thickened figure-eight in the plane
//! turns one traversal of the curve into a closed planar curve whose
//! ordinary turning number is the framed invariant.  Because the
//! figure-eight's tangent frame winds zero times per period, that
//! turning number equals the tangent winding of the curve in the flat
//! (θ, r) coordinates of the annulus itself, which is what this module
//! computes: it keeps polyline corners at their true angles instead of
//! squeezing them into the thin normal band of the figure-eight.  The
//! figure-eight composite survives as a test oracle.  Flipping the
//! frame reference mirrors the chart first, which negates the answer.

use std::f64::consts::PI;

use crate::curve::PLCurve;
use crate::error::{Error, Result};
use crate::geometry::chart::{ChartModel, Holonomy, RELATOR_TOLERANCE};
use crate::geometry::develop::develop_raw;
use crate::geometry::motion::{C, HalfMotion, Motion, PlaneMotion};
use crate::schema::SurfaceSchema;

/// Coordinates on the annular cover determined by a deck motion: θ
/// advances by exactly one per application of the motion, r is the
/// signed distance from its axis.  Both charts are oriented positively
/// with respect to the model.
enum AnnulusCoords {
    Flat { v: [f64; 2] },
    Hyperbolic { straighten: HalfMotion, length: f64 },
    Parabolic { straighten: HalfMotion, shift: f64 },
}

impl AnnulusCoords {
    fn from_motion(gamma: &Motion) -> Result<AnnulusCoords> {
        match gamma {
            Motion::Plane(m) => {
                debug_assert!(
                    !m.reverses_orientation(),
                    "orientation-reversing deck motions are filtered out earlier"
                );
                let spin = (m.m[0] - 1.0)
                    .abs()
                    .max(m.m[1].abs())
                    .max(m.m[2].abs())
                    .max((m.m[3] - 1.0).abs());
                if spin > 1e-9 {
                    return Err(Error::EllipticHolonomy);
                }
                Ok(AnnulusCoords::Flat { v: m.t })
            }
            Motion::Half(m) => {
                debug_assert!(!m.reflect);
                let trace = m.trace().abs();
                if trace > 2.0 + 1e-9 {
                    let [a, b, c, d] = m.m;
                    let disc = (trace * trace - 4.0).sqrt();
                    let straighten = if c.abs() < 1e-12 {
                        // One fixed point at infinity, the other finite.
                        let x0 = b / (d - a);
                        HalfMotion::from_rows([1.0, -x0, 0.0, 1.0], false)
                    } else {
                        let r1 = ((a - d) - disc * (a + d).signum()) / (2.0 * c);
                        let r2 = ((a - d) + disc * (a + d).signum()) / (2.0 * c);
                        let (p, q) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
                        HalfMotion::from_rows([1.0, -q, 1.0, -p], false)
                    };
                    let conj = straighten
                        .compose(m)
                        .compose(&straighten.inverse());
                    let stretch = conj.apply_c(C::new(0.0, 1.0)).im;
                    debug_assert!(stretch > 0.0);
                    let straighten = if stretch < 1.0 {
                        // Turn the axis upside down so the motion moves up.
                        HalfMotion::from_rows([0.0, -1.0, 1.0, 0.0], false).compose(&straighten)
                    } else {
                        straighten
                    };
                    let conj = straighten
                        .compose(m)
                        .compose(&straighten.inverse());
                    let length = conj.apply_c(C::new(0.0, 1.0)).im.ln();
                    debug_assert!(length > 0.0);
                    Ok(AnnulusCoords::Hyperbolic { straighten, length })
                } else if trace > 2.0 - 1e-9 {
                    let [a, _, c, d] = m.m;
                    let straighten = if c.abs() < 1e-12 {
                        HalfMotion::identity()
                    } else {
                        // Send the unique fixed point to infinity.
                        let x0 = (a - d) / (2.0 * c);
                        HalfMotion::from_rows([0.0, 1.0, -1.0, x0], false)
                    };
                    let conj = straighten
                        .compose(m)
                        .compose(&straighten.inverse());
                    let moved = conj.apply_c(C::new(0.0, 1.0));
                    let shift = moved.re;
                    if shift.abs() < 1e-9 {
                        return Err(Error::EllipticHolonomy);
                    }
                    Ok(AnnulusCoords::Parabolic { straighten, shift })
                } else {
                    Err(Error::EllipticHolonomy)
                }
            }
        }
    }

    fn theta_r(&self, p: [f64; 2]) -> (f64, f64) {
        match self {
            AnnulusCoords::Flat { v } => {
                let n2 = v[0] * v[0] + v[1] * v[1];
                let theta = (p[0] * v[0] + p[1] * v[1]) / n2;
                let perp = (v[0] * p[1] - v[1] * p[0]) / n2.sqrt();
                (theta, perp)
            }
            AnnulusCoords::Hyperbolic { straighten, length } => {
                let w = straighten.apply_c(C::new(p[0], p[1]));
                let theta = w.abs().ln() / length;
                (theta, (-w.re / w.im).asinh())
            }
            AnnulusCoords::Parabolic { straighten, shift } => {
                let w = straighten.apply_c(C::new(p[0], p[1]));
                let theta = w.re / shift;
                (theta, shift.signum() * w.im.ln())
            }
        }
    }
}

/// Corner reading limit for the densest sampling rung.  A per-step
/// turn that survives every refinement is a genuine polyline corner,
/// not an undersampled arc, and its principal value is trustworthy
/// right up to a reversal; curves that double back within 0.02 of π
/// are still refused because the sign of such a turn is meaningless.
const CORNER_GUARD: f64 = PI - 0.02;

/// Tangent winding of a path in the (θ, r) chart whose endpoint is the
/// deck translate of its start.  The deck motion acts on the chart as
/// θ ↦ θ + 1, so the edge continuing past the last one points exactly
/// where the first edge does, and the closing turn compares those two.
fn periodic_turning(track: &[(f64, f64)], guard: f64) -> Result<i64> {
    let mut edges: Vec<[f64; 2]> = Vec::with_capacity(track.len());
    for pair in track.windows(2) {
        let e = [pair[1].0 - pair[0].0, pair[1].1 - pair[0].1];
        // Strand junctions reproduce their shared point only to the
        // crossing-motion round-trip accuracy; edges below that noise
        // floor carry no direction and must not contribute a turn.
        if e[0].hypot(e[1]) > 1e-9 {
            edges.push(e);
        }
    }
    if edges.len() < 2 {
        return Err(Error::InvalidInput {
            reason: "annular track degenerated to fewer than two edges".to_string(),
        });
    }
    let mut total = 0.0;
    for (i, window) in edges.iter().enumerate() {
        let a = window;
        let b = &edges[(i + 1) % edges.len()];
        let turn = (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
        if turn.abs() > guard {
            return Err(Error::SampleTooCoarse { index: i });
        }
        total += turn;
    }
    let value = total / (2.0 * PI);
    let rounded = value.round();
    if (value - rounded).abs() > crate::geometry::turning::INTEGRALITY_TOLERANCE {
        return Err(Error::AngleSumNotInteger { value });
    }
    Ok(rounded as i64)
}

fn reflected(hol: &Holonomy) -> Motion {
    match hol.model() {
        ChartModel::Plane => Motion::Plane(PlaneMotion {
            m: [1.0, 0.0, 0.0, -1.0],
            t: [0.0, 0.0],
        }),
        ChartModel::HalfPlane => Motion::Half(HalfMotion {
            m: [1.0, 0.0, 0.0, 1.0],
            reflect: true,
        }),
        ChartModel::Round => unreachable!("round models are rejected before reflecting"),
    }
}

/// The framed turning number of an essential curve, measured against
/// the chart orientation (`frame = 1`) or its mirror (`frame = -1`).
pub fn annular_turning_number(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    hol: &Holonomy,
    frame: i8,
) -> Result<i64> {
    if frame != 1 && frame != -1 {
        return Err(Error::InvalidInput {
            reason: format!("frame reference must be +1 or -1, got {frame}"),
        });
    }
    if hol.model() == ChartModel::Round {
        return Err(Error::UnsupportedSchema {
            reason: "round models only carry the parity invariant, not a framed turning number"
                .to_string(),
        });
    }
    curve.validate(schema)?;
    let word = curve.edge_word(schema)?;
    if schema.orientation_character(&word) < 0 {
        return Err(Error::NonOrientableNormalBundle);
    }
    let gamma = hol.word_motion(schema, &word);
    if gamma.residual() < RELATOR_TOLERANCE {
        return Err(Error::NullHomotopicWord);
    }
    let mirror = reflected(hol);
    let (gamma, mirror) = if frame < 0 {
        (mirror.compose(&gamma).compose(&mirror), Some(mirror))
    } else {
        (gamma, None)
    };
    let coords = AnnulusCoords::from_motion(&gamma)?;

    let mut last_error = None;
    for samples in [64usize, 256, 1024] {
        let raw = develop_raw(curve, schema, hol, &hol.identity_motion(), samples)?;
        let track: Vec<(f64, f64)> = raw
            .points
            .iter()
            .map(|&p| {
                let q = match &mirror {
                    Some(m) => m.apply(p),
                    None => p,
                };
                coords.theta_r(q)
            })
            .collect();
        let mut max_step: f64 = 0.0;
        for pair in track.windows(2) {
            max_step = max_step.max((pair[0].0 - pair[1].0).abs());
        }
        if max_step > 1.0 / 64.0 && samples < 1024 {
            last_error = Some(Error::SampleTooCoarse { index: 0 });
            continue;
        }
        let wound = track.last().unwrap().0 - track.first().unwrap().0;
        debug_assert!(
            (wound - 1.0).abs() < 1e-6,
            "one traversal advances the annulus coordinate by one, got {wound}"
        );
        let guard = if samples < 1024 {
            crate::geometry::turning::TURN_GUARD
        } else {
            CORNER_GUARD
        };
        match periodic_turning(&track, guard) {
            Ok(t) => return Ok(t),
            Err(err @ Error::SampleTooCoarse { .. }) if samples < 1024 => {
                last_error = Some(err);
            }
            Err(other) => return Err(other),
        }
    }
    Err(last_error.expect("the sampling ladder only ends after an error"))
}
