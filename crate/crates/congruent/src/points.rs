//! Exact rational point arithmetic on `y² = x³ + ax² + bx`.
//!
//! Chord-tangent group law, the α map into `Q*/Q*²`, a bounded point search
//! used as an independent oracle for the descent images, and the classical
//! correspondence between points with `y ≠ 0` on `y² = x³ − n²x` and
//! rational right triangles of area `n`. No floating point anywhere.

use crate::arith::{is_perfect_square_big, ExactRational};
use crate::descent::{candidate_classes, Curve, DescentError, SquareClass};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PointError {
    #[error("point {0} is not on the curve")]
    OffCurve(String),
    #[error("2-torsion point has no triangle (y = 0)")]
    TwoTorsion,
    #[error("x-coordinate class of {0} does not divide b; not a curve point")]
    ClassNotFound(String),
    #[error("isogeny is implemented for curves with a = 0 only")]
    NonzeroA,
    #[error(transparent)]
    Descent(#[from] DescentError),
}

/// A rational point: affine `(x, y)` or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: ExactRational,
    pub y: ExactRational,
    pub at_infinity: bool,
}

impl RationalPoint {
    pub fn infinity() -> Self {
        RationalPoint {
            x: ExactRational::zero(),
            y: ExactRational::zero(),
            at_infinity: true,
        }
    }

    pub fn affine(x: ExactRational, y: ExactRational) -> Self {
        RationalPoint {
            x,
            y,
            at_infinity: false,
        }
    }

    pub fn from_ints(x: i128, y: i128) -> Self {
        Self::affine(
            ExactRational::from(BigInt::from(x)),
            ExactRational::from(BigInt::from(y)),
        )
    }

    pub fn is_two_torsion(&self) -> bool {
        self.at_infinity || self.y.is_zero()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_infinity {
            write!(f, "O")
        } else {
            write!(f, "({}, {})", self.x, self.y)
        }
    }
}

fn curve_rhs(curve: &Curve, x: &ExactRational) -> ExactRational {
    let a = ExactRational::from(BigInt::from(curve.a()));
    let b = ExactRational::from(BigInt::from(curve.b()));
    x * x * x + a * x * x + b * x
}

/// Exact substitution check `y² = x³ + ax² + bx`.
///
/// ```
/// use congruent::descent::Curve;
/// use congruent::points::{on_curve, RationalPoint};
/// let e = Curve::new(0, -25).unwrap();
/// assert!(on_curve(&e, &RationalPoint::from_ints(-4, 6)));
/// assert!(!on_curve(&e, &RationalPoint::from_ints(1, 1)));
/// ```
pub fn on_curve(curve: &Curve, point: &RationalPoint) -> bool {
    if point.at_infinity {
        return true;
    }
    &point.y * &point.y == curve_rhs(curve, &point.x)
}

/// Negation `(x, y) ↦ (x, −y)`.
pub fn negate(_curve: &Curve, point: &RationalPoint) -> RationalPoint {
    if point.at_infinity {
        return point.clone();
    }
    RationalPoint::affine(point.x.clone(), -point.y.clone())
}

/// Chord-tangent addition. Handles the identity, inverse pairs, and
/// 2-torsion doubling; defined for every pair of points on the curve.
pub fn add(curve: &Curve, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
    if p.at_infinity {
        return q.clone();
    }
    if q.at_infinity {
        return p.clone();
    }
    debug_assert!(on_curve(curve, p) && on_curve(curve, q));
    let a = ExactRational::from(BigInt::from(curve.a()));
    let b = ExactRational::from(BigInt::from(curve.b()));
    let lambda = if p.x == q.x {
        if p.y != q.y || p.y.is_zero() {
            // Inverse pair (or doubling a 2-torsion point).
            return RationalPoint::infinity();
        }
        // Tangent: λ = (3x² + 2ax + b) / 2y.
        let three = ExactRational::from(BigInt::from(3));
        let two = ExactRational::from(BigInt::from(2));
        (three * &p.x * &p.x + &two * &a * &p.x + b) / (two * &p.y)
    } else {
        (&q.y - &p.y) / (&q.x - &p.x)
    };
    let x3 = &lambda * &lambda - &a - &p.x - &q.x;
    let y3 = lambda * (&p.x - &x3) - &p.y;
    RationalPoint::affine(x3, y3)
}

/// The 2-descent map α into `Q*/Q*²`.
///
/// `O ↦ 1`, `(0,0) ↦ class(b)`, and `(x, y) ↦ class(x)` otherwise. The
/// class of `x = u/v` is the squarefree part of `uv`, located by testing the
/// squarefree divisors of `b` (the x-class of a curve point always divides
/// `b` modulo squares).
pub fn alpha_map(curve: &Curve, point: &RationalPoint) -> Result<SquareClass, PointError> {
    if point.at_infinity {
        return Ok(SquareClass::new(1)?);
    }
    if point.x.is_zero() {
        return Ok(SquareClass::of(curve.b())?);
    }
    let uv = point.x.numer() * point.x.denom();
    for class in candidate_classes(curve)? {
        let d = BigInt::from(class.representative());
        let quotient = &uv / &d;
        if (&quotient * &d) == uv && !quotient.is_negative() && is_perfect_square_big(&quotient).is_some()
        {
            return Ok(class);
        }
    }
    Err(PointError::ClassNotFound(point.to_string()))
}

/// Right triangle with exact rational sides, legs sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightTriangle {
    pub leg_a: ExactRational,
    pub leg_b: ExactRational,
    pub hyp: ExactRational,
}

impl RightTriangle {
    pub fn area(&self) -> ExactRational {
        &self.leg_a * &self.leg_b / ExactRational::from(BigInt::from(2))
    }
}

impl fmt::Display for RightTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.leg_a, self.leg_b, self.hyp)
    }
}

/// Triangle of area `n` from a point with `y ≠ 0` on `y² = x³ − n²x`:
/// legs `|x² − n²|/|y|` and `|2nx|/|y|`, hypotenuse `(x² + n²)/|y|`.
///
/// Both the Pythagorean identity and the area are re-checked exactly.
///
/// ```
/// use congruent::points::{triangle_from_point, RationalPoint};
/// let t = triangle_from_point(6, &RationalPoint::from_ints(-3, 9)).unwrap();
/// assert_eq!(t.to_string(), "(3, 4, 5)");
/// ```
pub fn triangle_from_point(n: u64, point: &RationalPoint) -> Result<RightTriangle, PointError> {
    let curve = Curve::congruent(n);
    if point.is_two_torsion() {
        return Err(PointError::TwoTorsion);
    }
    if !on_curve(&curve, point) {
        return Err(PointError::OffCurve(point.to_string()));
    }
    let n2 = ExactRational::from(BigInt::from(n as i128 * n as i128));
    let two_n = ExactRational::from(BigInt::from(2 * n as i128));
    let y_abs = point.y.abs();
    let x = &point.x;
    let mut leg_a = (x * x - &n2).abs() / &y_abs;
    let mut leg_b = (two_n * x).abs() / &y_abs;
    let hyp = (x * x + &n2) / &y_abs;
    if leg_a > leg_b {
        std::mem::swap(&mut leg_a, &mut leg_b);
    }
    let triangle = RightTriangle { leg_a, leg_b, hyp };
    let lhs = &triangle.leg_a * &triangle.leg_a + &triangle.leg_b * &triangle.leg_b;
    if lhs != &triangle.hyp * &triangle.hyp
        || triangle.area() != ExactRational::from(BigInt::from(n))
    {
        return Err(PointError::OffCurve(format!(
            "triangle from {point} failed exact re-verification"
        )));
    }
    Ok(triangle)
}

/// Bounded point search: enumerate `x = d·m²/e²` over candidate classes `d`
/// and coprime `1 ≤ m, e ≤ height_bound`, keeping every `x` whose cubic
/// value is a rational square. Returns affine points only (both signs of
/// `y`, plus the torsion points with `y = 0`), deduplicated and sorted by
/// `(e, m, class, sign of y)`.
///
/// For `x = dm²/e²` the curve value is `d·m²·(d²m⁴ + adm²e² + be⁴) / e⁶`, so
/// `x` lifts to a point exactly when the integer numerator is a perfect
/// square; the scan therefore runs on integers (with a BigInt fallback on
/// overflow) and never touches rationals until a hit.
pub fn point_search(curve: &Curve, height_bound: u64) -> Result<Vec<RationalPoint>, PointError> {
    let classes = candidate_classes(curve)?;
    let mut found: Vec<(u64, u64, SquareClass, RationalPoint)> = Vec::new();
    // (0, 0) is always on the family; record it under (e, m) = (1, 0).
    found.push((
        1,
        0,
        SquareClass::of(curve.b())?,
        RationalPoint::from_ints(0, 0),
    ));
    let numerator = |d: i128, m: i128, e: i128| -> Option<i128> {
        let dm2 = d.checked_mul(m)?.checked_mul(m)?;
        let e2 = e.checked_mul(e)?;
        let inner = dm2
            .checked_mul(dm2)?
            .checked_add(curve.a().checked_mul(dm2)?.checked_mul(e2)?)?
            .checked_add(curve.b().checked_mul(e2)?.checked_mul(e2)?)?;
        dm2.checked_mul(inner)
    };
    let numerator_big = |d: i128, m: i128, e: i128| -> BigInt {
        let dm2 = BigInt::from(d) * m * m;
        let e2 = BigInt::from(e) * e;
        let inner = &dm2 * &dm2 + BigInt::from(curve.a()) * &dm2 * &e2 + curve.b() * &e2 * &e2;
        dm2 * inner
    };
    for e in 1..=height_bound {
        for m in 1..=height_bound {
            if crate::arith::gcd(m as i128, e as i128) != 1 {
                continue;
            }
            for class in &classes {
                let d = class.representative();
                let root = match numerator(d, m as i128, e as i128) {
                    Some(v) if v < 0 => continue,
                    Some(v) => match crate::arith::is_perfect_square(v) {
                        Some(r) => BigInt::from(r),
                        None => continue,
                    },
                    None => match is_perfect_square_big(&numerator_big(d, m as i128, e as i128)) {
                        Some(r) => r,
                        None => continue,
                    },
                };
                let x = ExactRational::new(
                    BigInt::from(d) * m * m,
                    BigInt::from(e) * e,
                );
                let y = ExactRational::new(root, BigInt::from(e).pow(3));
                debug_assert!(on_curve(curve, &RationalPoint::affine(x.clone(), y.clone())));
                if y.is_zero() {
                    found.push((e, m, *class, RationalPoint::affine(x, y)));
                } else {
                    found.push((e, m, *class, RationalPoint::affine(x.clone(), y.clone())));
                    found.push((e, m, *class, RationalPoint::affine(x, -y)));
                }
            }
        }
    }
    found.sort_by(|(e1, m1, c1, p1), (e2, m2, c2, p2)| {
        (e1, m1, c1, p1.y < ExactRational::zero())
            .cmp(&(e2, m2, c2, p2.y < ExactRational::zero()))
    });
    let mut out: Vec<RationalPoint> = Vec::new();
    for (_, _, _, p) in found {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// The 2-isogeny `φ: E → Ē` for `a = 0`: `(x, y) ↦ (y²/x², y(x² − b)/x²)`.
pub fn isogeny(curve: &Curve, point: &RationalPoint) -> Result<RationalPoint, PointError> {
    if curve.a() != 0 {
        return Err(PointError::NonzeroA);
    }
    let target = curve.isogenous();
    if point.at_infinity || point.x.is_zero() {
        return Ok(RationalPoint::infinity());
    }
    let b = ExactRational::from(BigInt::from(curve.b()));
    let x2 = &point.x * &point.x;
    let xi = &point.y * &point.y / &x2;
    let yi = &point.y * (&x2 - b) / x2;
    let image = RationalPoint::affine(xi, yi);
    if !on_curve(&target, &image) {
        return Err(PointError::OffCurve(image.to_string()));
    }
    Ok(image)
}

/// The dual isogeny `φ̂: Ē → E` for `a = 0`:
/// `(x̄, ȳ) ↦ (ȳ²/4x̄², ȳ(x̄² − b̄)/8x̄²)` with `b̄ = −4b`.
pub fn dual_isogeny(curve: &Curve, point: &RationalPoint) -> Result<RationalPoint, PointError> {
    if curve.a() != 0 {
        return Err(PointError::NonzeroA);
    }
    let bar = curve.isogenous();
    if point.at_infinity || point.x.is_zero() {
        return Ok(RationalPoint::infinity());
    }
    if !on_curve(&bar, point) {
        return Err(PointError::OffCurve(point.to_string()));
    }
    let b_bar = ExactRational::from(BigInt::from(bar.b()));
    let four = ExactRational::from(BigInt::from(4));
    let eight = ExactRational::from(BigInt::from(8));
    let x2 = &point.x * &point.x;
    let xi = &point.y * &point.y / (&four * &x2);
    let yi = &point.y * (&x2 - b_bar) / (eight * x2);
    let image = RationalPoint::affine(xi, yi);
    if !on_curve(curve, &image) {
        return Err(PointError::OffCurve(image.to_string()));
    }
    Ok(image)
}
