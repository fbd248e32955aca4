//! Probe: do the quartic-form bridges reach witnesses for primes whose
//! minimal homogeneous-space solutions exceed the naive search bound?

use congruent::arith::{is_perfect_square, is_prime};
use congruent::descent::{HomogeneousSpace, Witness};
use congruent::theory::{f1, f2, f3};
use std::time::Instant;

/// α route for p ≡ 5 (mod 8): find coprime (a, b), c ≤ cmax with
/// pc² = a² + b² and (a ± 2b)² + b² = w²; reconstruct the (p, 0, 4p) witness.
fn alpha_route(p: u64, cmax: u64) -> Option<(u64, Witness)> {
    let space = HomogeneousSpace::new(p as i128, 0, 4 * p as i128).unwrap();
    for c in 1..=cmax {
        let target = p as i128 * (c as i128) * (c as i128);
        let mut a = 1i128;
        while a * a < target {
            if let Some(b) = is_perfect_square(target - a * a) {
                if b > 0 && congruent::arith::gcd(a, b) == 1 {
                    for (sign, m) in [(-1i128, a - b), (1, a + b)] {
                        let shifted = a + 2 * sign * b;
                        if let Some(w) = is_perfect_square(shifted * shifted + b * b) {
                            let m = m.abs();
                            if m == 0 {
                                continue;
                            }
                            let n = p as i128 * c as i128 * w;
                            if let Ok(witness) = Witness::checked(&space, m, b, n) {
                                return Some((c, witness));
                            }
                        }
                    }
                }
            }
            a += 1;
        }
    }
    None
}

/// β route: find gcd(2x,y)=1 with f1 or f2 = p·e² (e odd); reconstruct the
/// (2, 0, 2p²) witness.
fn beta_route(p: u64, xy_bound: i64) -> Option<(i64, Witness)> {
    let space = HomogeneousSpace::new(2, 0, 2 * (p as i128) * (p as i128)).unwrap();
    for r in 1..=xy_bound {
        for y in (1..=r).step_by(2) {
            for x in -r..=r {
                if x.abs().max(y) != r || congruent::arith::gcd(2 * x as i128, y as i128) != 1 {
                    continue;
                }
                let (xi, yi) = (x as i128, y as i128);
                for (value, legs) in [
                    (
                        f1(xi, yi),
                        (
                            4 * xi.pow(4) + yi.pow(4) + 4 * xi * xi * yi * yi
                                + 8 * xi.pow(3) * yi
                                + 4 * xi * yi.pow(3),
                            8 * xi * xi * yi * yi + 8 * xi.pow(3) * yi + 4 * xi * yi.pow(3),
                        ),
                    ),
                    (
                        f2(xi, yi),
                        (
                            -8 * xi * xi * yi * yi + 8 * xi.pow(3) * yi + 4 * xi * yi.pow(3),
                            -4 * xi.pow(4) - yi.pow(4) - 4 * xi * xi * yi * yi
                                + 8 * xi.pow(3) * yi
                                + 4 * xi * yi.pow(3),
                        ),
                    ),
                ] {
                    if value <= 0 || value % p as i128 != 0 {
                        continue;
                    }
                    let Some(e) = is_perfect_square(value / p as i128) else {
                        continue;
                    };
                    let (a, b) = legs;
                    debug_assert_eq!(a + b, value);
                    let m2 = a - b;
                    let Some(mut m) = is_perfect_square(m2.abs()) else {
                        continue;
                    };
                    let Some(u) = is_perfect_square(a * a + b * b) else {
                        continue;
                    };
                    let mut e = e;
                    let mut n = 2 * u;
                    // strip common content
                    loop {
                        let d = congruent::arith::gcd(m, e);
                        if d == 1 {
                            break;
                        }
                        m /= d;
                        e /= d;
                        n /= d * d;
                    }
                    if m == 0 || e == 0 {
                        continue;
                    }
                    if let Ok(witness) = Witness::checked(&space, m, e, n) {
                        return Some((r, witness));
                    }
                }
            }
        }
    }
    None
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("both");

    if mode == "both" || mode == "a" {
        println!("== α route for all p ≡ 5 (mod 8), p < 500 ==");
        for p in (5u64..500).filter(|&p| p % 8 == 5 && is_prime(p as i128)) {
            let t = Instant::now();
            match alpha_route(p, 30_000) {
                Some((c, w)) => println!(
                    "p={p}: c={c} witness ({},{},{}) max={} [{:?}]",
                    w.m,
                    w.e,
                    w.n,
                    w.m.max(w.e),
                    t.elapsed()
                ),
                None => println!("p={p}: α route failed at c ≤ 30000 [{:?}]", t.elapsed()),
            }
        }
    }

    if mode == "both" || mode == "b" {
        println!("== β route for all p ≡ 7 (mod 8), p < 500 ==");
        for p in (7u64..500).filter(|&p| p % 8 == 7 && is_prime(p as i128)) {
            let t = Instant::now();
            match beta_route(p, 4000) {
                Some((r, w)) => println!(
                    "p={p}: xy={r} witness ({},{},{}) [{:?}]",
                    w.m,
                    w.e,
                    w.n,
                    t.elapsed()
                ),
                None => println!("p={p}: β route failed at xy ≤ 4000 [{:?}]", t.elapsed()),
            }
        }
        // f3 route sanity for 41:
        let space = HomogeneousSpace::new(82, 0, 82).unwrap();
        for (x, y) in [(1i128, 1i128), (2, 1)] {
            let v = f3(x, y);
            println!("f3({x},{y}) = {v}");
        }
        let w = Witness::checked(&space, 3, 1, 82).unwrap();
        println!("f3 witness for 41: {w:?}");
    }
}
