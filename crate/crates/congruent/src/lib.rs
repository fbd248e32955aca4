//! Certified rank bounds for congruent-number elliptic curves.
//!
//! A positive integer `n` is a congruent number when it is the area of a
//! right triangle with rational sides — equivalently, when the curve
//! `E_n: y² = x³ − n²x` has a rational point with `y ≠ 0`. This crate
//! decides that question, where it can be decided, by 2-isogeny descent
//! with checkable artifacts:
//!
//! - [`arith`] — exact integer primitives: Legendre symbols, squarefree
//!   decomposition, deterministic primality, two-square decompositions.
//! - [`descent`] — the descent engine: square classes, homogeneous-space
//!   solvability (witness search + residue obstruction certificates), and
//!   the rank formula `2^r = |Im α|·|Im ᾱ| / 4` as certified bounds.
//! - [`theory`] — the residue-class verdict tables for `n ∈ {p, 2p, pq,
//!   2pq}`, the quartic forms `f₁, f₂, f₃`, and the Pythagorean detectors
//!   deciding rank 2 for `p ≡ 1 (mod 8)`.
//! - [`points`] — exact rational points: group law, the α map, a bounded
//!   point search (the independent oracle for descent images), and the
//!   point ↔ triangle correspondence.
//!
//! ```
//! use congruent::descent::{compute_image, rank_bounds, Curve, ModuliPolicy};
//!
//! // n = 5: rank 1, so 5 is a congruent number.
//! let e = Curve::congruent(5);
//! let im = compute_image(&e, 50, &ModuliPolicy::Extended).unwrap();
//! let im_bar = compute_image(&e.isogenous(), 50, &ModuliPolicy::Extended).unwrap();
//! let bounds = rank_bounds(&im, &im_bar).unwrap();
//! assert_eq!(bounds.exact(), Some(1));
//! ```

pub mod arith;
pub mod descent;
pub mod points;
pub mod report;
pub mod theory;

#[cfg(doctest)]
mod book {
    //! Every chapter of the guide is compiled as doc-tests so the book's
    //! code blocks stay in sync with the crate.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(unused)]
            struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(DescentMethod, "../../../book/src/descent.md");
    chapter!(Certificates, "../../../book/src/certificates.md");
    chapter!(VerdictTables, "../../../book/src/verdicts.md");
    chapter!(RankTwo, "../../../book/src/rank-two.md");
    chapter!(Cli, "../../../book/src/cli.md");
}
