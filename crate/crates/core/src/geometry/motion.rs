//! Rigid motions of the two chart models.
//!
//! Flat charts use affine maps `p ↦ M·p + t` with orthogonal `M`.
//! Hyperbolic charts use the upper half-plane: a real matrix of
//! determinant one acting by Möbius transformations, optionally
//! pre-composed with the reflection `z ↦ -conj(z)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number helper for half-plane arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct C {
    pub re: f64,
    pub im: f64,
}

impl C {
    pub fn new(re: f64, im: f64) -> C {
        C { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> C {
        C::new(self.re, -self.im)
    }
}

impl Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        C::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for C {
    type Output = C;
    fn mul(self, o: C) -> C {
        C::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Mul<f64> for C {
    type Output = C;
    fn mul(self, s: f64) -> C {
        C::new(self.re * s, self.im * s)
    }
}

impl Div for C {
    type Output = C;
    fn div(self, o: C) -> C {
        let n = o.re * o.re + o.im * o.im;
        C::new(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )
    }
}

impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        C::new(-self.re, -self.im)
    }
}

pub(crate) const I: C = C { re: 0.0, im: 1.0 };

/// Cayley transform from the unit disk to the upper half-plane.
pub(crate) fn disk_to_half(z: C) -> C {
    (I * (C::new(1.0, 0.0) + z)) / (C::new(1.0, 0.0) - z)
}

/// Inverse Cayley transform, half-plane back to the unit disk.
pub(crate) fn half_to_disk(w: C) -> C {
    (w - I) / (w + I)
}

/// Affine isometry of the Euclidean plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMotion {
    /// Row-major orthogonal 2x2 matrix [m00, m01, m10, m11].
    pub m: [f64; 4],
    /// Translation applied after the linear part.
    pub t: [f64; 2],
}

impl PlaneMotion {
    pub fn identity() -> PlaneMotion {
        PlaneMotion {
            m: [1.0, 0.0, 0.0, 1.0],
            t: [0.0, 0.0],
        }
    }

    pub fn translation(tx: f64, ty: f64) -> PlaneMotion {
        PlaneMotion {
            m: [1.0, 0.0, 0.0, 1.0],
            t: [tx, ty],
        }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.m[0] * p[0] + self.m[1] * p[1] + self.t[0],
            self.m[2] * p[0] + self.m[3] * p[1] + self.t[1],
        ]
    }

    /// self ∘ other: `other` acts first.
    pub fn compose(&self, other: &PlaneMotion) -> PlaneMotion {
        let a = &self.m;
        let b = &other.m;
        PlaneMotion {
            m: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
            t: {
                let moved = self.apply(other.t);
                [moved[0], moved[1]]
            },
        }
    }

    pub fn inverse(&self) -> PlaneMotion {
        // Orthogonal matrices invert by transposition.
        let mt = [self.m[0], self.m[2], self.m[1], self.m[3]];
        let t = [
            -(mt[0] * self.t[0] + mt[1] * self.t[1]),
            -(mt[2] * self.t[0] + mt[3] * self.t[1]),
        ];
        PlaneMotion { m: mt, t }
    }

    pub fn reverses_orientation(&self) -> bool {
        self.m[0] * self.m[3] - self.m[1] * self.m[2] < 0.0
    }

    /// Distance from the identity in the sup norm over matrix and
    /// translation entries.
    pub fn residual(&self) -> f64 {
        let id = [1.0, 0.0, 0.0, 1.0];
        let mut r: f64 = 0.0;
        for k in 0..4 {
            r = r.max((self.m[k] - id[k]).abs());
        }
        r.max(self.t[0].abs()).max(self.t[1].abs())
    }
}

/// Isometry of the hyperbolic plane in the upper half-plane model.
///
/// Acts as `z ↦ (a·u + b) / (c·u + d)` where `u` is `z` itself or
/// `-conj(z)` when `reflect` is set.  The matrix is kept at
/// determinant one; it is only defined up to global sign.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfMotion {
    pub m: [f64; 4],
    pub reflect: bool,
}

/// Conjugation by the reflection `σ(z) = -conj(z)`: σ∘M∘σ.
fn sigma_conj(m: &[f64; 4]) -> [f64; 4] {
    [m[0], -m[1], -m[2], m[3]]
}

impl HalfMotion {
    pub fn identity() -> HalfMotion {
        HalfMotion {
            m: [1.0, 0.0, 0.0, 1.0],
            reflect: false,
        }
    }

    pub(crate) fn from_rows(m: [f64; 4], reflect: bool) -> HalfMotion {
        let det = m[0] * m[3] - m[1] * m[2];
        assert!(det > 0.0, "half-plane motions need positive determinant");
        let s = det.sqrt();
        HalfMotion {
            m: [m[0] / s, m[1] / s, m[2] / s, m[3] / s],
            reflect,
        }
    }

    pub(crate) fn apply_c(&self, z: C) -> C {
        let u = if self.reflect { -z.conj() } else { z };
        let num = C::new(self.m[0], 0.0) * u + C::new(self.m[1], 0.0);
        let den = C::new(self.m[2], 0.0) * u + C::new(self.m[3], 0.0);
        num / den
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let w = self.apply_c(C::new(p[0], p[1]));
        [w.re, w.im]
    }

    /// self ∘ other: `other` acts first.
    pub fn compose(&self, other: &HalfMotion) -> HalfMotion {
        let inner = if self.reflect {
            sigma_conj(&other.m)
        } else {
            other.m
        };
        let a = &self.m;
        let b = &inner;
        HalfMotion {
            m: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self) -> HalfMotion {
        let inv = [self.m[3], -self.m[1], -self.m[2], self.m[0]];
        HalfMotion {
            m: if self.reflect { sigma_conj(&inv) } else { inv },
            reflect: self.reflect,
        }
    }

    pub fn reverses_orientation(&self) -> bool {
        self.reflect
    }

    /// Distance from the identity, minimised over the global matrix
    /// sign; reflections are never close to the identity.
    pub fn residual(&self) -> f64 {
        if self.reflect {
            return 2.0;
        }
        let id = [1.0, 0.0, 0.0, 1.0];
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for k in 0..4 {
            plus = plus.max((self.m[k] - id[k]).abs());
            minus = minus.max((self.m[k] + id[k]).abs());
        }
        plus.min(minus)
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }
}

/// A motion of whichever chart model is in use.
#[derive(Debug, Clone, PartialEq)]
pub enum Motion {
    Plane(PlaneMotion),
    Half(HalfMotion),
}

impl Motion {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            Motion::Plane(m) => m.apply(p),
            Motion::Half(m) => m.apply(p),
        }
    }

    /// self ∘ other: `other` acts first.  Panics when the models differ.
    pub fn compose(&self, other: &Motion) -> Motion {
        match (self, other) {
            (Motion::Plane(a), Motion::Plane(b)) => Motion::Plane(a.compose(b)),
            (Motion::Half(a), Motion::Half(b)) => Motion::Half(a.compose(b)),
            _ => panic!("cannot compose motions of different chart models"),
        }
    }

    pub fn inverse(&self) -> Motion {
        match self {
            Motion::Plane(m) => Motion::Plane(m.inverse()),
            Motion::Half(m) => Motion::Half(m.inverse()),
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Motion::Plane(m) => m.residual(),
            Motion::Half(m) => m.residual(),
        }
    }

    pub fn reverses_orientation(&self) -> bool {
        match self {
            Motion::Plane(m) => m.reverses_orientation(),
            Motion::Half(m) => m.reverses_orientation(),
        }
    }
}

/// Orientation-preserving motion sending the geodesic through `x` and
/// `y` to the positive imaginary axis, with `x ↦ i` and `y` strictly
/// above `i`.  Both points must be distinct interior points of the
/// half-plane.
pub(crate) fn axis_transform(x: C, y: C) -> HalfMotion {
    assert!(x.im > 0.0 && y.im > 0.0, "points must lie in the half-plane");
    assert!((x - y).abs() > 1e-12, "geodesic endpoints must differ");
    let base = if (x.re - y.re).abs() < 1e-12 {
        // Vertical geodesic: translate its foot to the origin.
        HalfMotion::from_rows([1.0, -x.re, 0.0, 1.0], false)
    } else {
        let c = (y.re * y.re + y.im * y.im - x.re * x.re - x.im * x.im)
            / (2.0 * (y.re - x.re));
        let r = (x - C::new(c, 0.0)).abs();
        // z ↦ (z - (c+r)) / (z - (c-r)) kills one footpoint and sends
        // the other to infinity, straightening the geodesic.
        HalfMotion::from_rows([1.0, -(c + r), 1.0, -(c - r)], false)
    };
    let hx = base.apply_c(x).im;
    let hy = base.apply_c(y).im;
    let ordered = if hy < hx {
        // Flip the axis upside down so that y ends up above x.
        HalfMotion::from_rows([0.0, -1.0, 1.0, 0.0], false).compose(&base)
    } else {
        base
    };
    let h = ordered.apply_c(x).im;
    let scale = HalfMotion::from_rows([1.0 / h.sqrt(), 0.0, 0.0, h.sqrt()], false);
    scale.compose(&ordered)
}

/// Hyperbolic distance between two half-plane points.
pub(crate) fn half_distance(x: C, y: C) -> f64 {
    let d2 = (x - y).abs().powi(2) / (2.0 * x.im * y.im);
    (1.0 + d2).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 2], b: [f64; 2]) -> bool {
        (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9
    }

    #[test]
    fn plane_compose_matches_pointwise_application() {
        let rot = PlaneMotion {
            m: [0.0, -1.0, 1.0, 0.0],
            t: [2.0, 0.5],
        };
        let glide = PlaneMotion {
            m: [1.0, 0.0, 0.0, -1.0],
            t: [1.0, 0.0],
        };
        let p = [0.3, -1.7];
        let via_compose = rot.compose(&glide).apply(p);
        let via_steps = rot.apply(glide.apply(p));
        assert!(
            close(via_compose, via_steps),
            "compose should agree with sequential application: {via_compose:?} vs {via_steps:?}"
        );
        let inv = rot.compose(&glide).inverse();
        assert!(
            close(inv.apply(via_compose), p),
            "inverse should undo the motion"
        );
    }

    #[test]
    fn half_plane_compose_handles_reflections() {
        let refl = HalfMotion {
            m: [1.0, 0.0, 0.0, 1.0],
            reflect: true,
        };
        let boost = HalfMotion::from_rows([2.0, 1.0, 0.0, 0.5], false);
        let p = [0.4, 1.3];
        for (outer, inner) in [(&refl, &boost), (&boost, &refl), (&refl, &refl)] {
            let via_compose = outer.compose(inner).apply(p);
            let via_steps = outer.apply(inner.apply(p));
            assert!(
                close(via_compose, via_steps),
                "compose with reflections must agree pointwise: {via_compose:?} vs {via_steps:?}"
            );
        }
        let m = refl.compose(&boost);
        let round_trip = m.inverse().compose(&m);
        assert!(
            round_trip.residual() < 1e-12,
            "inverse-compose residual should vanish, got {}",
            round_trip.residual()
        );
        assert!(!round_trip.reflect, "inverse must undo the reflection flag");
    }

    #[test]
    fn axis_transform_straightens_geodesics() {
        let x = C::new(-0.7, 0.9);
        let y = C::new(1.3, 0.4);
        let g = axis_transform(x, y);
        let gx = g.apply_c(x);
        let gy = g.apply_c(y);
        assert!(
            gx.re.abs() < 1e-9 && (gx.im - 1.0).abs() < 1e-9,
            "x should map to i, got {gx:?}"
        );
        assert!(
            gy.re.abs() < 1e-9 && gy.im > 1.0,
            "y should map above i on the axis, got {gy:?}"
        );
        let d_before = half_distance(x, y);
        let d_after = half_distance(gx, gy);
        assert!(
            (d_before - d_after).abs() < 1e-9,
            "isometries preserve distance: {d_before} vs {d_after}"
        );
        assert!(
            (gy.im.ln() - d_before).abs() < 1e-9,
            "height along the axis is exponential in distance"
        );
    }

    #[test]
    fn cayley_transform_round_trips() {
        let z = C::new(0.3, -0.5);
        let back = half_to_disk(disk_to_half(z));
        assert!(
            (z - back).abs() < 1e-12,
            "disk -> half -> disk should be the identity"
        );
        let w = disk_to_half(z);
        assert!(w.im > 0.0, "disk points map into the upper half-plane");
        assert!(
            (disk_to_half(C::new(0.0, 0.0)) - I).abs() < 1e-12,
            "the disk centre maps to i"
        );
    }
}
