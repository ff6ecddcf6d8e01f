//! Complete invariants and the equivalence decision for immersed circles.
//!
//! Two circles on the same surface are regularly homotopic exactly when
//! their free-homotopy classes agree and one further number matches. Which
//! number depends on the class: a signed turning number when the chart
//! orientation can be carried around the curve, its absolute value when
//! some homotopy can flip the sign, and the double-point parity when the
//! normal bundle is one-sided or the surface admits no planar chart.
//! [`circle_invariants`] packages the right variant per curve and
//! [`decide_circle`] compares two of them. [`decide_via_difference`] reaches
//! the same verdict along an independent route, by testing the band sum
//! `f # g*` instead of comparing invariants.

use crate::concat::{concatenate, host_strand, BandKind};
use crate::curve::PLCurve;
use crate::error::{Error, Result};
use crate::exact::Pt;
use crate::geometry::{annular_turning_number, develop, realize, turning_number_planar};
use crate::group::{Conjugacy, CyclicWord, SurfaceGroup};
use crate::schema::{SurfaceKind, SurfaceSchema};
use crate::word::Word;

/// The turning slot of the invariant, in whichever form survives on the
/// given surface for the given class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Turning {
    /// Signed winding count, measured against the chart orientation when
    /// `frame` is `1` and against its mirror when `frame` is `-1`.
    Integer { value: i64, frame: i8 },
    /// Only the magnitude is invariant: some free homotopy carries the
    /// curve around an orientation-reversing loop and flips the sign.
    AbsoluteInteger { value: i64 },
    /// Surfaces without a planar chart keep only a parity in this slot.
    Mod2 { value: u8 },
    /// No turning data beyond the parity field exists for this curve.
    Undefined { reason: String },
}

/// Everything regular homotopy preserves for one immersed circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleInvariants {
    /// Free-homotopy class as a reduced cyclic word in the schema
    /// generators.
    pub class: CyclicWord,
    /// `+1` when the normal bundle along the curve is orientable, `-1`
    /// when going once around the curve reverses the local orientation.
    pub normal_character: i8,
    /// Double-point parity, reported opposite to the raw count: an
    /// embedded curve scores 1, a figure-eight scores 0.
    pub parity: u8,
    pub turning: Turning,
}

/// Outcome of a decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes { summary: String },
    No { reason: String },
    /// Circles never end here; graph decisions may, when the bounded
    /// conjugator search runs out before finding or refuting a witness.
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

/// Compute the full invariant record of one circle.
pub fn circle_invariants(curve: &PLCurve, schema: &SurfaceSchema) -> Result<CircleInvariants> {
    curve.validate(schema)?;
    let word = curve.edge_word(schema)?;
    let group = SurfaceGroup::new(schema)?;
    let class = group.reduce_cyclic(&word);
    let normal_character = schema.orientation_character(&word);
    let parity = curve.self_intersection_parity(schema)? ^ 1;
    let turning = turning_slot(curve, schema, &group, &word, &class, normal_character, parity)?;
    Ok(CircleInvariants {
        class,
        normal_character,
        parity,
        turning,
    })
}

fn turning_slot(
    curve: &PLCurve,
    schema: &SurfaceSchema,
    group: &SurfaceGroup,
    word: &Word,
    class: &CyclicWord,
    normal_character: i8,
    parity: u8,
) -> Result<Turning> {
    if matches!(
        schema.kind(),
        SurfaceKind::Sphere | SurfaceKind::ProjectivePlane
    ) {
        return Ok(Turning::Mod2 { value: parity });
    }
    if normal_character < 0 {
        return Ok(Turning::Undefined {
            reason: "the normal bundle along the curve is one-sided; only the double-point parity remains"
                .to_string(),
        });
    }
    let hol = realize(schema)?;
    if class.is_trivial() {
        let poly = develop(curve, schema, &hol, &hol.identity_motion())?;
        let value = turning_number_planar(&poly)?;
        return Ok(if schema.orientable() {
            Turning::Integer { value, frame: 1 }
        } else {
            // Dragging the curve around an orientation-reversing loop is a
            // free regular homotopy negating the turning number.
            Turning::AbsoluteInteger {
                value: value.abs(),
            }
        });
    }
    let value = annular_turning_number(curve, schema, &hol, 1)?;
    Ok(if group.framing_ambiguous(word)? {
        Turning::AbsoluteInteger {
            value: value.abs(),
        }
    } else {
        Turning::Integer { value, frame: 1 }
    })
}

/// Decide whether two circles are regularly homotopic by comparing their
/// invariants, transporting the frame along a conjugacy witness.
pub fn decide_circle(f: &PLCurve, g: &PLCurve, schema: &SurfaceSchema) -> Result<Verdict> {
    let inv_f = circle_invariants(f, schema)?;
    let inv_g = circle_invariants(g, schema)?;
    let group = SurfaceGroup::new(schema)?;
    let word_f = f.edge_word(schema)?;
    let word_g = g.edge_word(schema)?;
    let witness = match group.conjugate_and_witness(&word_f, &word_g) {
        Conjugacy::Yes { witness } => witness,
        Conjugacy::No | Conjugacy::Exhausted => {
            return Ok(Verdict::No {
                reason: "the free-homotopy classes differ: no conjugation takes one class word to the other"
                    .to_string(),
            });
        }
    };
    debug_assert_eq!(
        inv_f.normal_character, inv_g.normal_character,
        "conjugate classes share their normal character"
    );
    match (&inv_f.turning, &inv_g.turning) {
        (Turning::Mod2 { .. }, Turning::Mod2 { .. })
        | (Turning::Undefined { .. }, Turning::Undefined { .. }) => {
            Ok(if inv_f.parity == inv_g.parity {
                Verdict::Yes {
                    summary: format!(
                        "freely homotopic, and the double-point parities agree ({})",
                        inv_f.parity
                    ),
                }
            } else {
                Verdict::No {
                    reason: format!(
                        "the double-point parities differ: {} vs {}",
                        inv_f.parity, inv_g.parity
                    ),
                }
            })
        }
        (Turning::AbsoluteInteger { value: a }, Turning::AbsoluteInteger { value: b }) => {
            Ok(if a == b {
                Verdict::Yes {
                    summary: format!("freely homotopic, and the unsigned turning numbers agree ({a})"),
                }
            } else {
                Verdict::No {
                    reason: format!("the unsigned turning numbers differ: {a} vs {b}"),
                }
            })
        }
        (Turning::Integer { value: a, .. }, Turning::Integer { value: b, .. }) => {
            // The witness carries g's frame to f's; an orientation-reversing
            // witness mirrors the chart and negates the reading.
            let transported = i64::from(schema.orientation_character(&witness)) * b;
            Ok(if *a == transported {
                Verdict::Yes {
                    summary: format!(
                        "freely homotopic, and the framed turning numbers agree ({a} after transport)"
                    ),
                }
            } else {
                Verdict::No {
                    reason: format!(
                        "the framed turning numbers differ: {a} vs {transported} after transport"
                    ),
                }
            })
        }
        _ => unreachable!("conjugate classes always carry the same turning variant"),
    }
}

/// Decide equivalence through the band sum `f # g*` instead of comparing
/// invariants: the difference curve must develop with turning 0, or — when
/// the normal bundle is one-sided or no planar chart exists — carry the
/// double-point parity of a self-difference.
///
/// The path must run from the basepoint strand of `f` to the basepoint
/// strand of `g` through the polygon interior, and both curves must read
/// the same based class word, so that the difference is null-homotopic for
/// the right reason.
pub fn decide_via_difference(
    f: &PLCurve,
    g: &PLCurve,
    path: &[Pt],
    schema: &SurfaceSchema,
) -> Result<Verdict> {
    f.validate(schema)?;
    g.validate(schema)?;
    let word_f = f.edge_word(schema)?;
    let word_g = g.edge_word(schema)?;
    let group = SurfaceGroup::new(schema)?;
    if !group.equal_based(&word_f, &word_g) {
        return Err(Error::PathWordMismatch {
            reason: format!(
                "the curves read different based class words ({} vs {}); the difference test needs equal words",
                schema.display_word(&word_f),
                schema.display_word(&word_g)
            ),
        });
    }
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err(Error::MalformedPath {
            reason: "difference path needs at least two points".to_string(),
        });
    };
    if host_strand(f, schema, first, "first")? != f.basepoint.0 {
        return Err(Error::MalformedPath {
            reason: "the path must leave the first curve on its basepoint strand".to_string(),
        });
    }
    if host_strand(g, schema, last, "last")? != g.basepoint.0 {
        return Err(Error::MalformedPath {
            reason: "the path must land on the second curve's basepoint strand".to_string(),
        });
    }
    let difference = concatenate(f, g, path, BandKind::Alternating, schema)?;

    let one_sided = schema.orientation_character(&word_f) < 0;
    if one_sided
        || matches!(
            schema.kind(),
            SurfaceKind::Sphere | SurfaceKind::ProjectivePlane
        )
    {
        // Transverse homotopic copies cross each other with the parity of
        // the normal character, and the alternating band adds one more
        // crossing, so a self-difference is even exactly on one-sided
        // classes.
        let want = u8::from(one_sided) ^ 1;
        let got = difference.self_intersection_parity(schema)?;
        return Ok(if got == want {
            Verdict::Yes {
                summary: format!("the difference curve has the parity of a self-difference ({got})"),
            }
        } else {
            Verdict::No {
                reason: format!(
                    "the difference curve has double-point parity {got}; an equivalence would give {want}"
                ),
            }
        });
    }
    let hol = realize(schema)?;
    let poly = develop(&difference, schema, &hol, &hol.identity_motion())?;
    let value = turning_number_planar(&poly)?;
    Ok(if value == 0 {
        Verdict::Yes {
            summary: "the difference curve develops with turning number 0".to_string(),
        }
    } else {
        Verdict::No {
            reason: format!(
                "the difference curve develops with turning number {value}; an equivalence would give 0"
            ),
        }
    })
}
