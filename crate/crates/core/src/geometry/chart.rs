//! Geometric charts for gluing schemas.
//!
//! A realized schema carries a metric model of its fundamental polygon
//! together with one rigid motion per glued side: the motion to apply
//! when a curve exits through that side.  Flat surfaces (disk, annulus,
//! Möbius band, torus, Klein bottle) live in the Euclidean plane; the
//! negatively curved ones get a regular hyperbolic polygon.  Round
//! surfaces (sphere, projective plane) have no planar chart at all and
//! are flagged so callers can route around them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exact::Pt;
use crate::geometry::motion::{
    axis_transform, disk_to_half, half_to_disk, C, HalfMotion, I, Motion, PlaneMotion,
};
use crate::schema::{SurfaceKind, SurfaceSchema};
use crate::word::{Letter, Word};

/// Residual above which a defining relation is considered broken.
pub const RELATOR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartModel {
    /// Positively curved; there is no planar chart to develop into.
    Round,
    /// Euclidean plane.
    Plane,
    /// Hyperbolic plane; motions act on the upper half-plane and
    /// developed output lives in the unit disk.
    HalfPlane,
}

/// One side of the model polygon, straightened onto the imaginary axis.
#[derive(Debug, Clone)]
struct SideArc {
    /// Pulls the imaginary axis back onto the side's geodesic; the
    /// side's start corner sits at height 1.
    from_axis: HalfMotion,
    /// Hyperbolic length of the side.
    span: f64,
}

/// Piecewise map from the exact drawing polygon onto a regular
/// hyperbolic polygon: a point is located in the cone spanned by two
/// adjacent corners, its boundary shadow goes to the matching geodesic
/// arc-length fraction, and the result is pulled toward the centre by
/// the same convex weight.  Sides map to sides with their local
/// parameter preserved, which is exactly what gluing needs.
#[derive(Debug, Clone)]
pub(crate) struct SectorMap {
    corners: Vec<[f64; 2]>,
    sides: Vec<SideArc>,
}

impl SectorMap {
    fn new(schema: &SurfaceSchema, vertex_disk_radius: f64) -> SectorMap {
        let n = schema.side_count();
        let corners: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let c = schema.polygon().corner(k).to_f64();
                [c.0, c.1]
            })
            .collect();
        let model_vertex = |k: usize| -> C {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / n as f64;
            C::new(
                vertex_disk_radius * theta.cos(),
                vertex_disk_radius * theta.sin(),
            )
        };
        let sides = (0..n)
            .map(|k| {
                let x = disk_to_half(model_vertex(k));
                let y = disk_to_half(model_vertex((k + 1) % n));
                let g = axis_transform(x, y);
                let span = g.apply_c(y).im.ln();
                SideArc {
                    from_axis: g.inverse(),
                    span,
                }
            })
            .collect();
        SectorMap { corners, sides }
    }

    /// Model vertex for a polygon corner, in half-plane coordinates.
    fn corner_half(&self, k: usize) -> C {
        let side = &self.sides[k];
        side.from_axis.apply_c(I)
    }

    /// Map a polygon point into the unit disk model.
    fn to_disk(&self, p: [f64; 2]) -> C {
        if p[0] * p[0] + p[1] * p[1] < 1e-24 {
            return C::new(0.0, 0.0);
        }
        let n = self.corners.len();
        let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
        // Pick the corner cone containing p; ties on the rays are safe
        // because the map is continuous across them.
        let mut best = 0usize;
        let mut best_margin = f64::NEG_INFINITY;
        for k in 0..n {
            let c0 = self.corners[k];
            let c1 = self.corners[(k + 1) % n];
            let margin = cross(c0, p).min(cross(p, c1));
            if margin > best_margin {
                best_margin = margin;
                best = k;
            }
        }
        let c0 = self.corners[best];
        let c1 = self.corners[(best + 1) % n];
        let det = cross(c0, c1);
        let alpha = cross(p, c1) / det;
        let beta = cross(c0, p) / det;
        let s = alpha + beta;
        let u = (beta / s).clamp(0.0, 1.0);
        let side = &self.sides[best];
        let on_arc = half_to_disk(side.from_axis.apply_c(C::new(0.0, (u * side.span).exp())));
        on_arc * s.clamp(0.0, 1.0)
    }
}

/// A chart for a schema: the model, one crossing motion per glued
/// side, and (for hyperbolic models) the polygon-to-model map.
#[derive(Debug, Clone)]
pub struct Holonomy {
    model: ChartModel,
    cross: Vec<Option<Motion>>,
    sector: Option<SectorMap>,
}

impl Holonomy {
    pub fn model(&self) -> ChartModel {
        self.model
    }

    /// The identity motion of this chart's model.
    pub fn identity_motion(&self) -> Motion {
        match self.model {
            ChartModel::Plane => Motion::Plane(PlaneMotion::identity()),
            ChartModel::HalfPlane => Motion::Half(HalfMotion::identity()),
            ChartModel::Round => {
                unreachable!("round models have no chart motions; gate on model() first")
            }
        }
    }

    /// Motion to apply when a curve exits through `side`.
    pub fn crossing_motion(&self, side: usize) -> Option<&Motion> {
        self.cross[side].as_ref()
    }

    /// Motion of a single group generator letter.
    pub fn letter_motion(&self, schema: &SurfaceSchema, letter: Letter) -> Motion {
        let pair = &schema.pairs()[letter.gen];
        let side = if letter.inv { pair.second } else { pair.first };
        self.cross[side]
            .clone()
            .expect("glued pairs always carry crossing motions")
    }

    /// Motion of a whole edge word (letters act left to right along
    /// the curve, so the first letter's motion is applied last).
    pub fn word_motion(&self, schema: &SurfaceSchema, w: &Word) -> Motion {
        let mut m = self.identity_motion();
        for &letter in w.letters() {
            m = m.compose(&self.letter_motion(schema, letter));
        }
        m
    }

    /// Map an exact polygon point to chart coordinates (plane points
    /// for flat models, upper half-plane points for hyperbolic ones).
    pub(crate) fn chart_point(&self, p: &Pt) -> [f64; 2] {
        let (x, y) = p.to_f64();
        self.chart_point_f64([x, y])
    }

    /// Same as `chart_point` for already-rounded polygon coordinates.
    pub(crate) fn chart_point_f64(&self, p: [f64; 2]) -> [f64; 2] {
        match self.model {
            ChartModel::Plane => p,
            ChartModel::HalfPlane => {
                let sector = self.sector.as_ref().expect("hyperbolic charts carry a sector map");
                let w = disk_to_half(sector.to_disk(p));
                [w.re, w.im]
            }
            ChartModel::Round => unreachable!("round models have no chart points"),
        }
    }

    /// Convert an internal chart point to presentation coordinates:
    /// the identity for flat charts, half-plane to unit disk otherwise.
    pub(crate) fn present_point(&self, q: [f64; 2]) -> [f64; 2] {
        match self.model {
            ChartModel::Plane => q,
            ChartModel::HalfPlane => {
                let z = half_to_disk(C::new(q[0], q[1]));
                [z.re, z.im]
            }
            ChartModel::Round => unreachable!("round models have no chart points"),
        }
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Euclidean motion carrying the segment `source_a → source_b` onto
/// `target_a → target_b`, chosen so the polygon interior (witnessed by
/// `center`) maps across the target side to the outside.
fn plane_pair_motion(
    target_a: [f64; 2],
    target_b: [f64; 2],
    source_a: [f64; 2],
    source_b: [f64; 2],
    center: [f64; 2],
) -> PlaneMotion {
    let u = sub(target_b, target_a);
    let v = sub(source_b, source_a);
    let n2 = dot2(v, v);
    // Rotation-as-complex-multiplication taking v to u.
    let c = dot2(u, v) / n2;
    let s = cross2(v, u) / n2;
    let rot = [c, -s, s, c];
    // Reflection taking v to u: complex z ↦ (u·v/|v|²)·conj(z).
    let p = (u[0] * v[0] - u[1] * v[1]) / n2;
    let q = (u[0] * v[1] + u[1] * v[0]) / n2;
    let refl = [p, q, q, -p];
    let side_of = |x: [f64; 2]| cross2(u, sub(x, target_a));
    let interior_sign = side_of(center);
    for m in [rot, refl] {
        let motion = PlaneMotion {
            m,
            t: [
                target_a[0] - (m[0] * source_a[0] + m[1] * source_a[1]),
                target_a[1] - (m[2] * source_a[0] + m[3] * source_a[1]),
            ],
        };
        let image = motion.apply(center);
        if side_of(image) * interior_sign < 0.0 {
            return motion;
        }
    }
    unreachable!("one of the two candidate motions must flip the polygon across the side")
}

/// Hyperbolic counterpart of `plane_pair_motion`, in the half-plane.
/// `center` is the model image of the polygon centre.
fn half_pair_motion(
    target_a: C,
    target_b: C,
    source_a: C,
    source_b: C,
    center: C,
) -> HalfMotion {
    let g_target = axis_transform(target_a, target_b);
    let g_source = axis_transform(source_a, source_b);
    let sigma = HalfMotion {
        m: [1.0, 0.0, 0.0, 1.0],
        reflect: true,
    };
    let direct = g_target.inverse().compose(&g_source);
    let mirrored = g_target.inverse().compose(&sigma).compose(&g_source);
    let interior_sign = g_target.apply_c(center).re;
    for motion in [direct, mirrored] {
        let image = g_target.apply_c(motion.apply_c(center)).re;
        if image * interior_sign < 0.0 {
            return motion;
        }
    }
    unreachable!("one of the two candidate motions must flip the polygon across the side")
}

/// Build the chart and crossing motions for a schema.
///
/// Flat closed gluings are only charted on the square; hyperbolic
/// closed ones need all corners identified to a single point (so the
/// regular polygon's angles sum to a full turn there); punctured
/// schemas must not identify corners away from the boundary (such a
/// class would be a cone point).  Within those bounds the defining
/// relations are verified to close up to `RELATOR_TOLERANCE`.
pub fn realize(schema: &SurfaceSchema) -> Result<Holonomy> {
    let n = schema.side_count();
    let hol = match schema.kind() {
        SurfaceKind::Sphere | SurfaceKind::ProjectivePlane => Holonomy {
            model: ChartModel::Round,
            cross: vec![None; n],
            sector: None,
        },
        SurfaceKind::Disk | SurfaceKind::Annulus | SurfaceKind::Moebius => {
            if schema.has_interior_vertex_class() {
                return Err(Error::UnsupportedSchema {
                    reason: "an interior vertex class would be a cone point; no flat chart"
                        .to_string(),
                });
            }
            plane_chart(schema)
        }
        SurfaceKind::Torus | SurfaceKind::KleinBottle => {
            if n != 4 {
                return Err(Error::UnsupportedSchema {
                    reason: format!(
                        "flat closed gluings are charted on the square only, not a {n}-gon"
                    ),
                });
            }
            plane_chart(schema)
        }
        SurfaceKind::HyperbolicClosed => {
            if schema.vertex_class_count() != 1 {
                return Err(Error::UnsupportedSchema {
                    reason: "closed hyperbolic charts need all corners in one vertex class"
                        .to_string(),
                });
            }
            // Regular n-gon whose corner angles sum to a full turn:
            // right-triangle trigonometry gives cosh(circumradius) =
            // cot²(π/n).
            let cot = 1.0 / (PI / n as f64).tan();
            let circumradius = (cot * cot).acosh();
            hyper_chart(schema, (circumradius / 2.0).tanh())
        }
        SurfaceKind::HyperbolicPunctured => {
            if schema.has_interior_vertex_class() {
                return Err(Error::UnsupportedSchema {
                    reason: "an interior vertex class would be a cone point; no hyperbolic chart"
                        .to_string(),
                });
            }
            hyper_chart(schema, (0.5f64).tanh())
        }
    };

    if hol.model != ChartModel::Round {
        for pair in schema.pairs() {
            let first = hol.cross[pair.first].as_ref().unwrap();
            let second = hol.cross[pair.second].as_ref().unwrap();
            let round_trip = first.compose(second);
            debug_assert!(
                round_trip.residual() < 1e-9,
                "crossing a side and back must be the identity, residual {}",
                round_trip.residual()
            );
            debug_assert_eq!(
                first.reverses_orientation(),
                !pair.preserving,
                "chart orientation behaviour must match the gluing sign of `{}`",
                pair.letter
            );
        }
        for relator in schema.relators() {
            let residual = hol.word_motion(schema, relator).residual();
            if residual > RELATOR_TOLERANCE {
                return Err(Error::RelatorNotClosing { residual });
            }
        }
    }
    Ok(hol)
}

fn plane_chart(schema: &SurfaceSchema) -> Holonomy {
    let n = schema.side_count();
    let polygon = schema.polygon();
    let corner = |k: usize| -> [f64; 2] {
        let c = polygon.corner(k).to_f64();
        [c.0, c.1]
    };
    let mut center = [0.0, 0.0];
    for k in 0..n {
        let c = corner(k);
        center[0] += c[0] / n as f64;
        center[1] += c[1] / n as f64;
    }
    let mut cross: Vec<Option<Motion>> = vec![None; n];
    for side in 0..n {
        if let Some(partner) = schema.partner(side) {
            debug_assert_eq!(
                polygon.chain(side).len(),
                2,
                "glued sides are single segments"
            );
            let motion = plane_pair_motion(
                corner(schema.arrow_start_corner(side)),
                corner(schema.arrow_end_corner(side)),
                corner(schema.arrow_start_corner(partner)),
                corner(schema.arrow_end_corner(partner)),
                center,
            );
            cross[side] = Some(Motion::Plane(motion));
        }
    }
    Holonomy {
        model: ChartModel::Plane,
        cross,
        sector: None,
    }
}

fn hyper_chart(schema: &SurfaceSchema, vertex_disk_radius: f64) -> Holonomy {
    let n = schema.side_count();
    let sector = SectorMap::new(schema, vertex_disk_radius);
    let corner = |k: usize| -> C {
        // Corner k starts side k, so its model point heads that side's
        // straightened axis at height 1.
        sector.corner_half(k)
    };
    let center = disk_to_half(C::new(0.0, 0.0));
    let mut cross: Vec<Option<Motion>> = vec![None; n];
    for side in 0..n {
        if let Some(partner) = schema.partner(side) {
            let motion = half_pair_motion(
                corner(schema.arrow_start_corner(side)),
                corner(schema.arrow_end_corner(side)),
                corner(schema.arrow_start_corner(partner)),
                corner(schema.arrow_end_corner(partner)),
                center,
            );
            cross[side] = Some(Motion::Half(motion));
        }
    }
    Holonomy {
        model: ChartModel::HalfPlane,
        cross,
        sector: Some(sector),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::SurfaceSchema;

    fn schema(word: &str, punctures: &[usize]) -> SurfaceSchema {
        SurfaceSchema::parse(word, punctures).expect("test schema parses")
    }

    #[test]
    fn torus_chart_uses_unit_translations() {
        let s = schema("abAB", &[]);
        let hol = realize(&s).expect("torus chart");
        assert_eq!(hol.model(), ChartModel::Plane);
        for letter in ["a", "b"] {
            let w = s.parse_word(letter).unwrap();
            match hol.word_motion(&s, &w) {
                Motion::Plane(m) => {
                    assert!(
                        !m.reverses_orientation(),
                        "torus gluings preserve orientation"
                    );
                    let linear_residual = (m.m[0] - 1.0).abs()
                        + m.m[1].abs()
                        + m.m[2].abs()
                        + (m.m[3] - 1.0).abs();
                    assert!(
                        linear_residual < 1e-12,
                        "letter `{letter}` should act by translation, matrix {:?}",
                        m.m
                    );
                    let len = m.t[0].hypot(m.t[1]);
                    assert!(
                        (len - 1.0).abs() < 1e-12,
                        "letter `{letter}` should translate by a unit step, got {:?}",
                        m.t
                    );
                }
                Motion::Half(_) => panic!("torus is flat"),
            }
        }
    }

    #[test]
    fn klein_bottle_glide_squares_to_translation() {
        let s = schema("abaB", &[]);
        let hol = realize(&s).expect("klein chart");
        let a = s.parse_word("a").unwrap();
        let glide = hol.word_motion(&s, &a);
        assert!(
            glide.reverses_orientation(),
            "the doubled letter of the Klein square reverses orientation"
        );
        let squared = glide.compose(&glide);
        assert!(
            !squared.reverses_orientation(),
            "a glide squared preserves orientation"
        );
        match squared {
            Motion::Plane(m) => {
                let linear_residual = (m.m[0] - 1.0).abs()
                    + m.m[1].abs()
                    + m.m[2].abs()
                    + (m.m[3] - 1.0).abs();
                assert!(
                    linear_residual < 1e-12,
                    "glide squared should be a pure translation, matrix {:?}",
                    m.m
                );
                assert!(
                    m.t[0].hypot(m.t[1]) > 0.5,
                    "glide squared must actually move points, got {:?}",
                    m.t
                );
            }
            Motion::Half(_) => panic!("klein bottle is flat"),
        }
    }

    #[test]
    fn genus_two_octagon_relator_closes() {
        let s = schema("abABcdCD", &[]);
        let hol = realize(&s).expect("octagon chart");
        assert_eq!(hol.model(), ChartModel::HalfPlane);
        let relator = &s.relators()[0];
        let residual = hol.word_motion(&s, relator).residual();
        assert!(
            residual < 1e-9,
            "surface relation must close in the chart, residual {residual}"
        );
        // A single generator is a genuinely hyperbolic translation.
        let a = s.parse_word("a").unwrap();
        match hol.word_motion(&s, &a) {
            Motion::Half(m) => {
                assert!(!m.reflect, "octagon gluings preserve orientation");
                assert!(
                    m.trace().abs() > 2.0 + 1e-6,
                    "generator holonomy should be hyperbolic, trace {}",
                    m.trace()
                );
            }
            Motion::Plane(_) => panic!("octagon is hyperbolic"),
        }
    }

    #[test]
    fn non_orientable_closed_hexagon_closes_and_reflects() {
        let s = schema("aabbcc", &[]);
        let hol = realize(&s).expect("hexagon chart");
        let a = s.parse_word("a").unwrap();
        assert!(
            hol.word_motion(&s, &a).reverses_orientation(),
            "same-sign gluings act by reflection motions"
        );
        let residual = hol
            .word_motion(&s, &s.relators()[0])
            .residual();
        assert!(
            residual < 1e-9,
            "hexagon relation must close, residual {residual}"
        );
    }

    #[test]
    fn round_models_are_flagged_not_charted() {
        for (word, punctures) in [("aa", &[][..]), ("aA", &[][..]), ("aAbB", &[][..])] {
            let s = schema(word, punctures);
            let hol = realize(&s).expect("round models still realize");
            assert_eq!(
                hol.model(),
                ChartModel::Round,
                "`{word}` should be flagged as round"
            );
        }
    }

    #[test]
    fn unsupported_flat_closed_polygons_are_refused() {
        let s = schema("abcABC", &[]);
        let err = realize(&s).unwrap_err();
        assert!(
            matches!(err, Error::UnsupportedSchema { .. }),
            "hexagonal torus gluing should be refused, got {err:?}"
        );
    }

    #[test]
    fn punctured_hyperbolic_chart_has_free_holonomy_feel() {
        let s = schema("abABe", &[4]);
        let hol = realize(&s).expect("punctured torus chart");
        assert_eq!(hol.model(), ChartModel::HalfPlane);
        let w = s.parse_word("ab").unwrap();
        let m = hol.word_motion(&s, &w);
        assert!(
            m.residual() > 1e-3,
            "an essential word must not act trivially"
        );
        let commutator = s.parse_word("abAB").unwrap();
        let cm = hol.word_motion(&s, &commutator);
        assert!(
            cm.residual() > 1e-3,
            "the commutator is essential on the punctured torus (free group)"
        );
    }

    #[test]
    fn sector_map_respects_side_parameters() {
        let s = schema("abABcdCD", &[]);
        let hol = realize(&s).expect("octagon chart");
        // A point on side 0 at arrow parameter t and its partner image
        // must land on the same chart point after crossing.
        let t = crate::exact::ratio(3, 7);
        let exit = s.side_point_at_arrow(0, &t);
        let partner = s.partner(0).unwrap();
        let entry = s.side_point_at_arrow(partner, &t);
        let exit_chart = hol.chart_point(&exit);
        let entry_chart = hol.chart_point(&entry);
        let crossed = hol.crossing_motion(0).unwrap().apply(entry_chart);
        let err = (crossed[0] - exit_chart[0]).hypot(crossed[1] - exit_chart[1]);
        assert!(
            err < 1e-9,
            "gluing motion must identify matched side parameters, error {err}"
        );
    }
}
