//! Generic 2-isogeny descent engine for curves `y² = x³ + ax² + bx`.
//!
//! The engine enumerates square classes (squarefree divisors of `b`), decides
//! solvability of each homogeneous space `N² = b₁m⁴ + am²e² + (b/b₁)e⁴` by a
//! residue obstruction sieve and a bounded coprime-pair search, closes the
//! proven classes under the group law of `Q*/Q*²`, and assembles certified
//! rank bounds from `2^r = |Im α|·|Im ᾱ| / 4`.
//!
//! Every verdict carries a checkable artifact: memberships carry witnesses
//! (or the rational point they come from), obstructions carry a residue
//! certificate that re-verifies by independent enumeration.

mod image;
mod search;
mod sieve;

pub use image::{candidate_classes, compute_image, DescentImage};
pub use search::search_homogeneous;
pub use sieve::{
    default_moduli, extended_moduli, local_obstruction, real_obstruction,
    verify_residue_certificate, ModuliPolicy, ResidueCertificate,
};

use crate::arith::{self, ArithError};
use crate::points::RationalPoint;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Engine version stamped into every serialized certificate and cache record.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum DescentError {
    #[error("curve y² = x³ + {a}x² + {b}x is singular (b²(a²−4b) = 0)")]
    SingularCurve { a: i128, b: i128 },
    #[error("{0} does not represent a valid square class (zero or not squarefree)")]
    InvalidClass(i128),
    #[error("class {class} does not divide the coefficient b = {b}")]
    ClassDoesNotDivide { class: i128, b: i128 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("images are not over an isogenous curve pair")]
    IsogenyMismatch,
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Integral curve `y² = x³ + ax² + bx` with `b ≠ 0` and `a² − 4b ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    a: i128,
    b: i128,
}

impl Curve {
    pub fn new(a: i128, b: i128) -> Result<Self, DescentError> {
        if b == 0 || a * a - 4 * b == 0 {
            return Err(DescentError::SingularCurve { a, b });
        }
        Ok(Curve { a, b })
    }

    /// The curve `y² = x³ − n²x` attached to the congruent number `n`.
    pub fn congruent(n: u64) -> Self {
        let n = n as i128;
        Curve { a: 0, b: -(n * n) }
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    /// The 2-isogenous curve `y² = x³ − 2ax² + (a² − 4b)x`.
    ///
    /// Applying this twice yields `(4a, 16b)`, the original curve scaled
    /// by 4. The image is always nonsingular when `self` is.
    ///
    /// ```
    /// use congruent::descent::Curve;
    /// let e = Curve::new(0, -25).unwrap();
    /// let bar = e.isogenous();
    /// assert_eq!((bar.a(), bar.b()), (0, 100));
    /// assert_eq!((bar.isogenous().a(), bar.isogenous().b()), (0, 16 * -25));
    /// assert!(Curve::new(2, 1).is_err()); // a² − 4b = 0
    /// ```
    pub fn isogenous(&self) -> Curve {
        Curve {
            a: -2 * self.a,
            b: self.a * self.a - 4 * self.b,
        }
    }

    /// x-coordinates of the rational 2-torsion points: 0 together with the
    /// integer roots of `x² + ax + b` when `a² − 4b` is a perfect square.
    pub fn two_torsion_x(&self) -> Vec<i128> {
        let mut xs = vec![0i128];
        if let Some(s) = arith::is_perfect_square(self.a * self.a - 4 * self.b) {
            for root in [(-self.a + s) / 2, (-self.a - s) / 2] {
                // Integer roots of a monic integer quadratic divide b.
                if root != 0 && root * root + self.a * root + self.b == 0 {
                    xs.push(root);
                }
            }
        }
        xs
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y² = x³")?;
        if self.a != 0 {
            write!(f, " + {}x²", self.a)?;
        }
        write!(f, " + {}x", self.b)
    }
}

/// An element of `Q*/Q*²`, represented by its squarefree integer.
///
/// Ordered canonically by `(|d|, sign)` so that class maps iterate as
/// `1, −1, 2, −2, 3, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass(i128);

impl SquareClass {
    /// Wrap an integer already known to be squarefree and nonzero.
    pub fn new(d: i128) -> Result<Self, DescentError> {
        let reduced = arith::squarefree_part(d).map_err(|_| DescentError::InvalidClass(d))?;
        if reduced != d {
            return Err(DescentError::InvalidClass(d));
        }
        Ok(SquareClass(d))
    }

    /// The class of an arbitrary nonzero integer (reduces modulo squares).
    pub fn of(n: i128) -> Result<Self, DescentError> {
        Ok(SquareClass(arith::squarefree_part(n)?))
    }

    pub fn representative(&self) -> i128 {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1
    }

    /// Product in `Q*/Q*²`.
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass, DescentError> {
        SquareClass::of(self.0 * other.0)
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.unsigned_abs(), self.0 < 0).cmp(&(other.0.unsigned_abs(), other.0 < 0))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The quartic `N² = b₁m⁴ + am²e² + b₂e⁴` attached to a square class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousSpace {
    pub b1: i128,
    pub a: i128,
    pub b2: i128,
}

impl HomogeneousSpace {
    pub fn new(b1: i128, a: i128, b2: i128) -> Result<Self, DescentError> {
        if b1 == 0 || arith::squarefree_part(b1)? != b1 {
            return Err(DescentError::InvalidClass(b1));
        }
        Ok(HomogeneousSpace { b1, a, b2 })
    }

    /// The space deciding membership of `class` in the image of α for `curve`.
    pub fn for_class(curve: &Curve, class: SquareClass) -> Result<Self, DescentError> {
        let d = class.representative();
        if d == 0 || curve.b % d != 0 {
            return Err(DescentError::ClassDoesNotDivide {
                class: d,
                b: curve.b,
            });
        }
        HomogeneousSpace::new(d, curve.a, curve.b / d)
    }

    /// The coefficient `b = b₁·b₂` of the curve this space belongs to.
    pub fn curve_b(&self) -> i128 {
        self.b1 * self.b2
    }

    /// `b₁m⁴ + am²e² + b₂e⁴`, or `None` on `i128` overflow.
    pub fn evaluate(&self, m: i128, e: i128) -> Option<i128> {
        let m2 = m.checked_mul(m)?;
        let e2 = e.checked_mul(e)?;
        let m4 = m2.checked_mul(m2)?;
        let e4 = e2.checked_mul(e2)?;
        self.b1
            .checked_mul(m4)?
            .checked_add(self.a.checked_mul(m2)?.checked_mul(e2)?)?
            .checked_add(self.b2.checked_mul(e4)?)
    }

    /// Exact evaluation without overflow concerns.
    pub fn evaluate_big(&self, m: i128, e: i128) -> num_bigint::BigInt {
        use num_bigint::BigInt;
        let (m, e) = (BigInt::from(m), BigInt::from(e));
        let (m2, e2) = (&m * &m, &e * &e);
        BigInt::from(self.b1) * &m2 * &m2
            + BigInt::from(self.a) * &m2 * &e2
            + BigInt::from(self.b2) * &e2 * &e2
    }
}

impl fmt::Display for HomogeneousSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N² = {}m⁴", self.b1)?;
        if self.a != 0 {
            write!(f, " + {}m²e²", self.a)?;
        }
        write!(f, " + {}e⁴", self.b2)
    }
}

/// An explicit solution `(m, e, N)` of a homogeneous space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub m: i128,
    pub e: i128,
    pub n: i128,
}

impl Witness {
    /// Validate the full witness contract against a space: the quartic
    /// identity holds exactly, `m·e ≠ 0`, `N ≠ 0`, and
    /// `gcd(m,e) = gcd(m,N) = gcd(e,N) = 1`.
    pub fn checked(
        space: &HomogeneousSpace,
        m: i128,
        e: i128,
        n: i128,
    ) -> Result<Self, DescentError> {
        if m == 0 || e == 0 {
            return Err(DescentError::InvalidWitness("m·e = 0".into()));
        }
        if n == 0 {
            return Err(DescentError::InvalidWitness(
                "N = 0 (2-torsion, not a witness)".into(),
            ));
        }
        for (x, y, label) in [(m, e, "gcd(m,e)"), (m, n, "gcd(m,N)"), (e, n, "gcd(e,N)")] {
            if arith::gcd(x, y) != 1 {
                return Err(DescentError::InvalidWitness(format!("{label} ≠ 1")));
            }
        }
        let value = space.evaluate_big(m, e);
        let n_big = num_bigint::BigInt::from(n);
        if &n_big * &n_big != value {
            return Err(DescentError::InvalidWitness(format!(
                "N² ≠ {space} at (m,e,N) = ({m},{e},{n})"
            )));
        }
        Ok(Witness { m, e, n })
    }

    /// Re-verify the quartic identity by exact arithmetic.
    pub fn verify(&self, space: &HomogeneousSpace) -> bool {
        let n = num_bigint::BigInt::from(self.n);
        &n * &n == space.evaluate_big(self.m, self.e)
    }
}

/// How a class was proven to lie in the image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// Image of the point at infinity (the class of 1).
    Identity,
    /// Image of the distinguished 2-torsion point (0, 0) (the class of b).
    DistinguishedPoint,
    /// Image of a rational 2-torsion point (x, 0) with x ≠ 0.
    TorsionPoint { x: i128 },
    /// Explicit solution of the homogeneous space.
    Witness { space: HomogeneousSpace, witness: Witness },
    /// Product of two proven classes (the image is a subgroup of Q*/Q*²).
    Closure { left: SquareClass, right: SquareClass },
}

/// Why a class is certified *not* to lie in the image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Residue exhaustion: no admissible triple mod `certificate.modulus`.
    Residue { certificate: ResidueCertificate },
    /// The quartic is negative definite on `me ≠ 0`; no real solutions.
    RealPlace,
    /// `obstructed · member` cannot be a member: the image is a group.
    Derived { member: SquareClass, obstructed: SquareClass },
}

/// Solvability verdict for one homogeneous space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolvabilityStatus {
    ProvenSolvable { proof: Membership },
    LocallyObstructed { obstruction: Obstruction },
    Undecided { search_bound: u64 },
}

impl SolvabilityStatus {
    pub fn is_member(&self) -> bool {
        matches!(self, SolvabilityStatus::ProvenSolvable { .. })
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, SolvabilityStatus::LocallyObstructed { .. })
    }
}

/// Certified rank window `lower ≤ rank ≤ upper` with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankBounds {
    pub lower: u32,
    pub upper: u32,
    pub provenance: Vec<ProvenanceEntry>,
}

impl RankBounds {
    pub fn exact(&self) -> Option<u32> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// One line of evidence backing a rank bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    /// "alpha" for E, "alpha_bar" for the isogenous curve.
    pub side: String,
    pub class: i128,
    pub detail: String,
}

fn log2_floor(n: usize) -> u32 {
    debug_assert!(n > 0);
    usize::BITS - 1 - n.leading_zeros()
}

fn describe(status: &SolvabilityStatus) -> String {
    match status {
        SolvabilityStatus::ProvenSolvable { proof } => match proof {
            Membership::Identity => "member: image of O".into(),
            Membership::DistinguishedPoint => "member: image of (0,0)".into(),
            Membership::TorsionPoint { x } => format!("member: image of 2-torsion ({x}, 0)"),
            Membership::Witness { witness, .. } => format!(
                "member: witness (m,e,N) = ({}, {}, {})",
                witness.m, witness.e, witness.n
            ),
            Membership::Closure { left, right } => {
                format!("member: closure {left} × {right}")
            }
        },
        SolvabilityStatus::LocallyObstructed { obstruction } => match obstruction {
            Obstruction::Residue { certificate } => {
                format!("obstructed: no residue solution mod {}", certificate.modulus)
            }
            Obstruction::RealPlace => "obstructed: negative definite over R".into(),
            Obstruction::Derived { member, obstructed } => {
                format!("obstructed: {obstructed} obstructed and {member} is a member")
            }
        },
        SolvabilityStatus::Undecided { search_bound } => {
            format!("undecided at search bound {search_bound}")
        }
    }
}

/// Assemble certified rank bounds from the two descent images.
///
/// `2^r = |Im α| · |Im ᾱ| / 4` for the true images; the proven subsets give
/// the lower bound, the not-obstructed supersets the upper bound. Both
/// directions round counts down to a power of two: the true images are
/// subgroups of `Q*/Q*²`, so their orders are powers of two and the rounding
/// preserves both certifications.
pub fn rank_bounds(im_e: &DescentImage, im_ebar: &DescentImage) -> Result<RankBounds, DescentError> {
    if im_e.curve().isogenous() != *im_ebar.curve() {
        return Err(DescentError::IsogenyMismatch);
    }
    let mut provenance = Vec::new();
    for (side, image) in [("alpha", im_e), ("alpha_bar", im_ebar)] {
        for (class, status) in image.classes() {
            provenance.push(ProvenanceEntry {
                side: side.into(),
                class: class.representative(),
                detail: describe(status),
            });
        }
    }

    let proven_e = im_e.proven_count();
    let proven_ebar = im_ebar.proven_count();
    let open_e = im_e.not_obstructed_count();
    let open_ebar = im_ebar.not_obstructed_count();
    for (count, what) in [(proven_e, "proven Im α"), (proven_ebar, "proven Im ᾱ")] {
        if !count.is_power_of_two() {
            return Err(DescentError::Inconsistency(format!(
                "{what} has {count} elements, not a power of two after closure"
            )));
        }
    }

    let lower_raw = log2_floor(proven_e) as i64 + log2_floor(proven_ebar) as i64 - 2;
    let upper_raw = log2_floor(open_e) as i64 + log2_floor(open_ebar) as i64 - 2;
    let lower = lower_raw.max(0) as u32;
    let upper = upper_raw.max(0) as u32;
    if upper < lower {
        return Err(DescentError::Inconsistency(format!(
            "upper bound {upper} below lower bound {lower}: false witness or false obstruction"
        )));
    }
    Ok(RankBounds {
        lower,
        upper,
        provenance,
    })
}

/// Recover the rational point `(b₁m²/e², b₁mN/e³)` from a witness.
///
/// The point is substituted back into the curve equation before being
/// returned; an off-curve result is a hard error.
///
/// ```
/// use congruent::descent::{point_from_witness, Curve, HomogeneousSpace, Witness};
/// let space = HomogeneousSpace::new(-1, 0, 25).unwrap();
/// let w = Witness::checked(&space, 2, 1, 3).unwrap();
/// let p = point_from_witness(&space, &w).unwrap();
/// assert_eq!(p.to_string(), "(-4, -6)");
/// ```
pub fn point_from_witness(
    space: &HomogeneousSpace,
    witness: &Witness,
) -> Result<RationalPoint, DescentError> {
    if !witness.verify(space) {
        return Err(DescentError::InvalidWitness(format!(
            "witness ({}, {}, {}) does not satisfy {space}",
            witness.m, witness.e, witness.n
        )));
    }
    let curve = Curve::new(space.a, space.curve_b())?;
    use num_bigint::BigInt;
    let (m, e, n) = (
        BigInt::from(witness.m),
        BigInt::from(witness.e),
        BigInt::from(witness.n),
    );
    let b1 = BigInt::from(space.b1);
    let x = crate::arith::ExactRational::new(&b1 * &m * &m, &e * &e);
    let y = crate::arith::ExactRational::new(&b1 * &m * &n, &e * &e * &e);
    let point = RationalPoint::affine(x, y);
    if !crate::points::on_curve(&curve, &point) {
        return Err(DescentError::Inconsistency(format!(
            "recovered point {point} fails the curve equation of {curve}"
        )));
    }
    Ok(point)
}
