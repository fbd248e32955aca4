//! Bounded coprime-pair search for homogeneous-space witnesses.

use super::{HomogeneousSpace, Membership, SolvabilityStatus, Witness};
use crate::arith::{gcd, is_perfect_square, is_perfect_square_big};

/// Scan coprime pairs `1 ≤ m, e ≤ bound` for a solution of
/// `N² = b₁m⁴ + am²e² + b₂e⁴`.
///
/// All four monomials have even degree in both `m` and `e`, so positive
/// pairs suffice. Pairs are visited by `max(m, e)` ascending (then `(m, r)`
/// rows before `(r, e)` rows) so the smallest witness is found first and the
/// result is deterministic. A hit is kept only if the full witness contract
/// holds (`N ≠ 0` and pairwise coprimality of `m`, `e`, `N`); other hits are
/// skipped and the scan continues. Never returns `LocallyObstructed`.
///
/// ```
/// use congruent::descent::{search_homogeneous, HomogeneousSpace, SolvabilityStatus};
/// let s = HomogeneousSpace::new(13, 0, 52).unwrap();
/// match search_homogeneous(&s, 10) {
///     SolvabilityStatus::ProvenSolvable { proof } => {
///         // 13·1 + 52·81 = 4225 = 65²
///         assert!(format!("{proof:?}").contains("m: 1, e: 3, n: 65"));
///     }
///     other => panic!("expected a witness, got {other:?}"),
/// }
/// ```
pub fn search_homogeneous(space: &HomogeneousSpace, bound: u64) -> SolvabilityStatus {
    debug_assert!(bound >= 1);
    // Overflow check once per space: if the worst-case |value| fits i128,
    // the whole scan runs on machine integers; otherwise fall back to BigInt.
    let fits = (|| {
        let b = bound as i128;
        let b4 = b.checked_mul(b)?.checked_mul(b)?.checked_mul(b)?;
        let mut acc: i128 = 0;
        for c in [space.b1, space.a, space.b2] {
            let c = i128::try_from(c.unsigned_abs()).ok()?;
            acc = acc.checked_add(c.checked_mul(b4)?)?;
        }
        Some(acc)
    })()
    .is_some();

    for r in 1..=bound as i128 {
        for (m, e) in ring_pairs(r) {
            if gcd(m, e) != 1 {
                continue;
            }
            let hit = if fits {
                space
                    .evaluate(m, e)
                    .and_then(|v| if v > 0 { is_perfect_square(v) } else { None })
            } else {
                let v = space.evaluate_big(m, e);
                is_perfect_square_big(&v).and_then(|n| i128::try_from(n).ok())
            };
            if let Some(n) = hit {
                if n == 0 {
                    continue; // 2-torsion ray, not a witness
                }
                if let Ok(witness) = Witness::checked(space, m, e, n) {
                    return SolvabilityStatus::ProvenSolvable {
                        proof: Membership::Witness {
                            space: *space,
                            witness,
                        },
                    };
                }
            }
        }
    }
    SolvabilityStatus::Undecided {
        search_bound: bound,
    }
}

/// Pairs with `max(m, e) = r`: `(1, r) … (r, r)` then `(r, 1) … (r, r−1)`.
fn ring_pairs(r: i128) -> impl Iterator<Item = (i128, i128)> {
    (1..=r).map(move |m| (m, r)).chain((1..r).map(move |e| (r, e)))
}
