//! Exact rational plane geometry.
//!
//! Every incidence decision in this crate (crossing detection, transversality,
//! clearance, point-in-polygon) is made here over arbitrary-precision
//! rationals, so curve validation never depends on floating-point luck.
//! Floating point only enters once a curve is handed to the geometric layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Neg, Sub};

/// The scalar used by the exact layer.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Quotient of two integers as a rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Nearest rational with denominator `2^bits` to the given float.
pub fn dyadic_approx(x: f64, bits: u32) -> Rat {
    assert!(x.is_finite(), "cannot approximate a non-finite float");
    let scale = (1u64 << bits) as f64;
    let scaled = (x * scale).round();
    Rat::new(
        BigInt::from(scaled as i128),
        BigInt::from(1u64 << bits),
    )
}

/// Largest power of two that is at most `x`, as a rational.
/// Returns `None` when `x` is not strictly positive.
pub fn pow2_at_most(x: f64) -> Option<Rat> {
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    let k = x.log2().floor().clamp(-128.0, 127.0) as i32;
    let one = BigInt::from(1);
    Some(if k >= 0 {
        Rat::from_integer(one << k as usize)
    } else {
        Rat::new(one, BigInt::from(1) << (-k) as usize)
    })
}

/// A point of the exact plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pt {
    pub x: Rat,
    pub y: Rat,
}

impl Pt {
    pub fn new(x: Rat, y: Rat) -> Self {
        Pt { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Pt::new(rat(x), rat(y))
    }

    pub fn zero() -> Self {
        Pt::new(Rat::zero(), Rat::zero())
    }

    pub fn dot(&self, other: &Pt) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Pt) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn dist2(&self, other: &Pt) -> Rat {
        (self - other).norm2()
    }

    pub fn scaled(&self, s: &Rat) -> Pt {
        Pt::new(&self.x * s, &self.y * s)
    }

    /// Quarter turn counter-clockwise.
    pub fn rot90(&self) -> Pt {
        Pt::new(-self.y.clone(), self.x.clone())
    }

    /// Point `self + t * (other - self)`.
    pub fn lerp(&self, other: &Pt, t: &Rat) -> Pt {
        self + &(&(other - self)).scaled(t)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.x), rat_to_f64(&self.y))
    }
}

impl Add<&Pt> for &Pt {
    type Output = Pt;
    fn add(self, rhs: &Pt) -> Pt {
        Pt::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub<&Pt> for &Pt {
    type Output = Pt;
    fn sub(self, rhs: &Pt) -> Pt {
        Pt::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Pt {
    type Output = Pt;
    fn neg(self) -> Pt {
        Pt::new(-self.x.clone(), -self.y.clone())
    }
}

/// Convert a rational to the nearest float.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Orientation of the triangle `(a, b, c)`: 1 counter-clockwise, -1
/// clockwise, 0 collinear.
pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> i8 {
    sign(&(&(b - a)).cross(&(c - a)))
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentMeet {
    /// No common point.
    Empty,
    /// Transversal crossing in the open interior of both segments.
    /// `t_first` and `t_second` are the parameters of the common point.
    Proper { point: Pt, t_first: Rat, t_second: Rat },
    /// A single common point involving at least one segment endpoint.
    Touch { point: Pt },
    /// Collinear segments sharing more than one point.
    Overlap,
}

/// Exact intersection of segments `[a, b]` and `[c, d]`.
pub fn segment_meet(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> SegmentMeet {
    let d1 = b - a;
    let d2 = d - c;
    let denom = d1.cross(&d2);
    let offset = c - a;
    if !denom.is_zero() {
        let t = offset.cross(&d2) / &denom;
        let u = offset.cross(&d1) / &denom;
        let zero = Rat::zero();
        let one = rat(1);
        if t < zero || t > one || u < zero || u > one {
            return SegmentMeet::Empty;
        }
        let point = a.lerp(b, &t);
        if t > zero && t < one && u > zero && u < one {
            SegmentMeet::Proper {
                point,
                t_first: t,
                t_second: u,
            }
        } else {
            SegmentMeet::Touch { point }
        }
    } else {
        if !offset.cross(&d1).is_zero() {
            return SegmentMeet::Empty; // parallel, different lines
        }
        // Collinear: compare parameter intervals along d1.
        let len2 = d1.norm2();
        if len2.is_zero() {
            // Degenerate zero-length first segment; treat as a point test.
            return if point_on_segment(a, c, d) {
                SegmentMeet::Touch { point: a.clone() }
            } else {
                SegmentMeet::Empty
            };
        }
        let tc = (c - a).dot(&d1) / &len2;
        let td = (d - a).dot(&d1) / &len2;
        let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
        let start = if lo > Rat::zero() { lo } else { Rat::zero() };
        let end = if hi < rat(1) { hi } else { rat(1) };
        if start > end {
            SegmentMeet::Empty
        } else if start == end {
            SegmentMeet::Touch {
                point: a.lerp(b, &start),
            }
        } else {
            SegmentMeet::Overlap
        }
    }
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn point_on_segment(p: &Pt, a: &Pt, b: &Pt) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let d = b - a;
    let along = (p - a).dot(&d);
    !along.is_negative() && along <= d.norm2()
}

/// Squared distance from `p` to the closed segment `[a, b]`.
pub fn dist2_point_segment(p: &Pt, a: &Pt, b: &Pt) -> Rat {
    let d = b - a;
    let len2 = d.norm2();
    if len2.is_zero() {
        return p.dist2(a);
    }
    let mut t = (p - a).dot(&d) / &len2;
    if t.is_negative() {
        t = Rat::zero();
    } else if t > rat(1) {
        t = rat(1);
    }
    p.dist2(&a.lerp(b, &t))
}

/// Squared distance between two closed segments; zero when they meet.
pub fn dist2_segments(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> Rat {
    if !matches!(segment_meet(a, b, c, d), SegmentMeet::Empty) {
        return Rat::zero();
    }
    let candidates = [
        dist2_point_segment(a, c, d),
        dist2_point_segment(b, c, d),
        dist2_point_segment(c, a, b),
        dist2_point_segment(d, a, b),
    ];
    candidates
        .into_iter()
        .min()
        .expect("four candidates are never empty")
}

/// Whether `p` is strictly inside the convex polygon with counter-clockwise
/// corner list `corners`.
pub fn strictly_inside_convex(corners: &[Pt], p: &Pt) -> bool {
    let n = corners.len();
    (0..n).all(|i| orient(&corners[i], &corners[(i + 1) % n], p) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_distinguishes_turns() {
        let a = Pt::from_ints(0, 0);
        let b = Pt::from_ints(1, 0);
        let left = Pt::from_ints(0, 1);
        let right = Pt::from_ints(0, -1);
        let ahead = Pt::from_ints(2, 0);
        assert_eq!(orient(&a, &b, &left), 1, "left turn should be ccw");
        assert_eq!(orient(&a, &b, &right), -1, "right turn should be cw");
        assert_eq!(orient(&a, &b, &ahead), 0, "straight ahead is collinear");
    }

    #[test]
    fn crossing_segments_meet_properly_at_midpoints() {
        let meet = segment_meet(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(2, 2),
            &Pt::from_ints(0, 2),
            &Pt::from_ints(2, 0),
        );
        match meet {
            SegmentMeet::Proper {
                point,
                t_first,
                t_second,
            } => {
                assert_eq!(point, Pt::from_ints(1, 1));
                assert_eq!(t_first, ratio(1, 2), "first parameter should be 1/2");
                assert_eq!(t_second, ratio(1, 2), "second parameter should be 1/2");
            }
            other => panic!("expected a proper crossing, got {other:?}"),
        }
    }

    #[test]
    fn endpoint_contact_is_a_touch_not_a_crossing() {
        let meet = segment_meet(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(2, 0),
            &Pt::from_ints(1, 0),
            &Pt::from_ints(1, 3),
        );
        assert_eq!(
            meet,
            SegmentMeet::Touch {
                point: Pt::from_ints(1, 0)
            },
            "T-contact lands on an endpoint of the second segment"
        );
    }

    #[test]
    fn collinear_segments_with_shared_stretch_overlap() {
        let meet = segment_meet(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(3, 0),
            &Pt::from_ints(2, 0),
            &Pt::from_ints(5, 0),
        );
        assert_eq!(meet, SegmentMeet::Overlap);
    }

    #[test]
    fn collinear_segments_sharing_one_point_touch() {
        let meet = segment_meet(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(1, 0),
            &Pt::from_ints(1, 0),
            &Pt::from_ints(4, 0),
        );
        assert_eq!(
            meet,
            SegmentMeet::Touch {
                point: Pt::from_ints(1, 0)
            }
        );
    }

    #[test]
    fn distant_parallel_segments_are_empty() {
        let meet = segment_meet(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(1, 0),
            &Pt::from_ints(0, 1),
            &Pt::from_ints(1, 1),
        );
        assert_eq!(meet, SegmentMeet::Empty);
    }

    #[test]
    fn point_segment_distance_clamps_to_endpoints() {
        let a = Pt::from_ints(0, 0);
        let b = Pt::from_ints(2, 0);
        assert_eq!(
            dist2_point_segment(&Pt::from_ints(1, 3), &a, &b),
            rat(9),
            "projection inside the segment"
        );
        assert_eq!(
            dist2_point_segment(&Pt::from_ints(-3, 4), &a, &b),
            rat(25),
            "projection clamps to the left endpoint"
        );
    }

    #[test]
    fn segment_distance_is_zero_exactly_when_they_meet() {
        let zero = dist2_segments(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(2, 2),
            &Pt::from_ints(0, 2),
            &Pt::from_ints(2, 0),
        );
        assert!(zero.is_zero(), "crossing segments have distance zero");
        let apart = dist2_segments(
            &Pt::from_ints(0, 0),
            &Pt::from_ints(1, 0),
            &Pt::from_ints(0, 2),
            &Pt::from_ints(1, 2),
        );
        assert_eq!(apart, rat(4));
    }

    #[test]
    fn convex_membership_is_strict() {
        let square = [
            Pt::from_ints(0, 0),
            Pt::from_ints(1, 0),
            Pt::from_ints(1, 1),
            Pt::from_ints(0, 1),
        ];
        assert!(strictly_inside_convex(
            &square,
            &Pt::new(ratio(1, 2), ratio(1, 2))
        ));
        assert!(
            !strictly_inside_convex(&square, &Pt::new(ratio(1, 2), rat(0))),
            "boundary points do not count as inside"
        );
        assert!(!strictly_inside_convex(&square, &Pt::from_ints(5, 5)));
    }

    #[test]
    fn dyadic_approx_hits_simple_fractions() {
        assert_eq!(dyadic_approx(0.25, 16), ratio(1, 4));
        assert_eq!(dyadic_approx(-1.5, 4), ratio(-3, 2));
    }

    #[test]
    fn pow2_at_most_brackets_from_below() {
        assert_eq!(pow2_at_most(5.0), Some(rat(4)));
        assert_eq!(pow2_at_most(0.3), Some(ratio(1, 4)));
        assert_eq!(pow2_at_most(1.0), Some(rat(1)));
        assert_eq!(pow2_at_most(0.0), None);
        assert_eq!(pow2_at_most(-2.0), None);
    }
}
