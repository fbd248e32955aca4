//! Exact integer arithmetic primitives.
//!
//! Everything in this module is deterministic and exact: no floating point,
//! no probabilistic answers. These are the primitives the descent engine and
//! the verdict tables are built on — gcd, integer square roots, squarefree
//! decomposition, modular exponentiation, the Legendre symbol, primality,
//! and two-square decompositions of primes `p ≡ 1 (mod 4)`.

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

/// Exact rational number with reduced numerator/denominator and positive
/// denominator, used for point coordinates and triangle sides.
pub type ExactRational = num_rational::BigRational;

/// Build an [`ExactRational`] from an integer pair, normalizing the sign and
/// reducing to lowest terms.
pub fn rational(num: i128, den: i128) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("squarefree decomposition requires a nonzero argument")]
    ZeroArgument,
    #[error("{0} is not factorable by trial division at this magnitude")]
    Unfactorable(i128),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    NotOneModFour(u64),
}

/// Nonnegative greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for `m ≥ 1`.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor integer square root of a nonnegative `i128`.
pub fn isqrt(n: i128) -> i128 {
    debug_assert!(n >= 0);
    (n as u128).isqrt() as i128
}

/// Perfect-square test with the root returned on success.
///
/// Negative input is simply not a square; `0 → Some(0)`.
pub fn is_perfect_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    // Quick residue filter: squares mod 64 hit only 12 of 64 classes.
    const SQ64: u64 = {
        let mut mask = 0u64;
        let mut i = 0u64;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if SQ64 & (1 << ((n as u128 % 64) as u64)) == 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Perfect-square test for big integers.
pub fn is_perfect_square_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Deterministic primality test.
///
/// Small inputs go through trial division; 64-bit inputs use Miller–Rabin
/// with the fixed witness set `{2, 3, 5, 7, 11, 13, 17}`, which is exact for
/// all `n < 3.3 × 10^14`, extended with `{19, 23, 29, 31, 37}` (exact for all
/// `n < 3.3 × 10^24`, so in particular for all `u64`). Inputs beyond 64 bits
/// fall back to trial division.
pub fn is_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2i128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n <= u64::MAX as i128 {
        return miller_rabin(n as u64);
    }
    // Desk-scale inputs never land here; correctness still guaranteed.
    let mut d = 41i128;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn miller_rabin(n: u64) -> bool {
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
///
/// Returns `0` iff `p | a`, otherwise the Euler-criterion value
/// `a^((p−1)/2) mod p` mapped to `±1`. `a` is reduced mod `p` first, so
/// negative `a` is handled by the reduction. Rejects even or composite `p`.
pub fn legendre(a: i128, p: u64) -> Result<i8, ArithError> {
    if p % 2 == 0 || !is_prime(p as i128) {
        return Err(ArithError::NotOddPrime(p));
    }
    let a = a.rem_euclid(p as i128) as u64;
    if a == 0 {
        return Ok(0);
    }
    let e = mod_pow(a, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Legendre symbol without the primality re-check, for hot loops where the
/// caller has already certified `p`.
pub(crate) fn legendre_unchecked(a: i128, p: u64) -> i8 {
    let a = a.rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A nonzero integer split as `squarefree_part × square_root_of_cofactor²`.
///
/// The squarefree part carries the sign of the original value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub squarefree_part: i128,
    pub square_root_of_cofactor: i128,
}

impl SquarefreeDecomposition {
    /// The value this decomposition reconstructs.
    pub fn value(&self) -> i128 {
        self.squarefree_part * self.square_root_of_cofactor * self.square_root_of_cofactor
    }
}

/// Distinct prime factors of `|n|`, by trial division.
///
/// Exact for all `|n| ≤ 10^12` (and for any input whose second-largest prime
/// factor is below 10^6); larger leftovers are resolved via primality and
/// perfect-square tests, or rejected as unfactorable.
pub fn prime_factors(n: i128) -> Result<Vec<i128>, ArithError> {
    let mut n = n.unsigned_abs() as i128;
    if n == 0 {
        return Err(ArithError::ZeroArgument);
    }
    let mut out = Vec::new();
    let mut d = 2i128;
    while d <= 1_000_000 && d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if is_prime(n) {
            out.push(n);
        } else if let Some(r) = is_perfect_square(n) {
            if is_prime(r) {
                out.push(r);
            } else {
                return Err(ArithError::Unfactorable(n));
            }
        } else {
            return Err(ArithError::Unfactorable(n));
        }
    }
    Ok(out)
}

/// Squarefree decomposition of a nonzero integer.
///
/// ```
/// use congruent::arith::squarefree_decompose;
/// let d = squarefree_decompose(18).unwrap();
/// assert_eq!((d.squarefree_part, d.square_root_of_cofactor), (2, 3));
/// assert_eq!(squarefree_decompose(-25).unwrap().squarefree_part, -1);
/// ```
pub fn squarefree_decompose(n: i128) -> Result<SquarefreeDecomposition, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroArgument);
    }
    let mut rest = n.unsigned_abs() as i128;
    let mut squarefree = 1i128;
    let mut root = 1i128;
    for p in prime_factors(n)? {
        let mut k = 0u32;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if k % 2 == 1 {
            squarefree *= p;
        }
        root *= p.pow(k / 2);
    }
    debug_assert_eq!(rest, 1);
    Ok(SquarefreeDecomposition {
        squarefree_part: squarefree * n.signum(),
        square_root_of_cofactor: root,
    })
}

/// Squarefree part of a nonzero integer (sign included).
pub fn squarefree_part(n: i128) -> Result<i128, ArithError> {
    Ok(squarefree_decompose(n)?.squarefree_part)
}

/// Write a prime `p ≡ 1 (mod 4)` as `a² + b²` with `a` odd, `b` even.
///
/// Finds a square root of `−1 mod p` by exponentiating candidate residues,
/// then runs the classical Euclidean descent: the first remainder below
/// `√p` in the gcd chain of `(p, z)` is one leg of the decomposition.
///
/// ```
/// use congruent::arith::sum_two_squares;
/// assert_eq!(sum_two_squares(41).unwrap(), (5, 4));
/// assert_eq!(sum_two_squares(17).unwrap(), (1, 4));
/// ```
pub fn sum_two_squares(p: u64) -> Result<(u64, u64), ArithError> {
    if p % 4 != 1 || !is_prime(p as i128) {
        return Err(ArithError::NotOneModFour(p));
    }
    // z² ≡ −1 (mod p); a^((p−1)/4) works exactly when a is a non-residue.
    let mut z = 0u64;
    for a in 2..p {
        let t = mod_pow(a, (p - 1) / 4, p);
        if mod_mul(t, t, p) == p - 1 {
            z = t;
            break;
        }
    }
    debug_assert!(z != 0);
    let bound = (p as u128).isqrt() as u64;
    let (mut r0, mut r1) = (p, z);
    while r1 > bound {
        let t = r0 % r1;
        r0 = r1;
        r1 = t;
    }
    let a = r1;
    let b2 = p - a * a;
    let b = (b2 as u128).isqrt() as u64;
    debug_assert_eq!(b * b, b2);
    // Exactly one of the two legs is odd since p is odd.
    if a % 2 == 1 {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 5).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(3, 5).unwrap(), -1);
        assert_eq!(legendre(10, 5).unwrap(), 0);
        assert_eq!(legendre(-1, 13).unwrap(), 1);
        assert!(legendre(3, 15).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn legendre_multiplicative() {
        let primes: Vec<u64> = (3..1000).filter(|&p| is_prime(p as i128)).collect();
        for &p in &primes {
            for a in -20i128..=20 {
                for b in -20i128..=20 {
                    let lab = legendre(a * b, p).unwrap();
                    let la = legendre(a, p).unwrap();
                    let lb = legendre(b, p).unwrap();
                    assert_eq!(lab, la * lb, "a={a} b={b} p={p}");
                }
            }
        }
    }

    #[test]
    fn legendre_supplementary_laws() {
        for p in (3..1000u64).filter(|&p| is_prime(p as i128)) {
            let minus_one = legendre(-1, p).unwrap();
            assert_eq!(minus_one == 1, p % 4 == 1, "(-1/{p})");
            let two = legendre(2, p).unwrap();
            assert_eq!(two == 1, p % 8 == 1 || p % 8 == 7, "(2/{p})");
        }
    }

    #[test]
    fn fourth_power_criterion() {
        // x⁴ ≡ −1 (mod p) is solvable iff p ≡ 1 (mod 8), by exhaustion.
        for p in (3..10_000u64).filter(|&p| is_prime(p as i128)) {
            let solvable = (1..p).any(|x| {
                let x2 = mod_mul(x, x, p);
                mod_mul(x2, x2, p) == p - 1
            });
            assert_eq!(solvable, p % 8 == 1, "fourth-power criterion at p={p}");
        }
    }

    #[test]
    fn square_detection() {
        assert_eq!(is_perfect_square(0), Some(0));
        assert_eq!(is_perfect_square(1681), Some(41));
        assert_eq!(is_perfect_square(325), None);
        assert_eq!(is_perfect_square(-4), None);
        for k in 0..2000i128 {
            assert_eq!(is_perfect_square(k * k), Some(k));
        }
    }

    #[test]
    fn squarefree_reconstruction() {
        assert_eq!(
            squarefree_decompose(2605).unwrap(),
            SquarefreeDecomposition {
                squarefree_part: 2605,
                square_root_of_cofactor: 1
            }
        );
        for n in 1..=100_000i128 {
            for s in [n, -n] {
                let d = squarefree_decompose(s).unwrap();
                assert_eq!(d.value(), s);
                // Squarefree part has no repeated prime factor.
                for p in prime_factors(d.squarefree_part).unwrap() {
                    assert_ne!(d.squarefree_part % (p * p), 0);
                }
            }
        }
        assert!(squarefree_decompose(0).is_err());
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(521));
        assert!(!is_prime(1));
        assert!(!is_prime(2605));
        assert!(is_prime(2));
        assert!(!is_prime(-7));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007i128 * 998_244_353));
    }

    #[test]
    fn two_squares_decomposition() {
        assert_eq!(sum_two_squares(41).unwrap(), (5, 4));
        assert_eq!(sum_two_squares(17).unwrap(), (1, 4));
        assert_eq!(sum_two_squares(149).unwrap(), (7, 10));
        assert!(sum_two_squares(7).is_err());
        for p in (5..5000u64).filter(|&p| p % 4 == 1 && is_prime(p as i128)) {
            let (a, b) = sum_two_squares(p).unwrap();
            assert_eq!(a * a + b * b, p);
            assert_eq!(a % 2, 1);
            assert_eq!(b % 2, 0);
        }
    }
}
