//! Scratch probe for engine behavior on the tricky inputs. Not shipped
//! functionality; run with `cargo run --release --example probe`.

use congruent::descent::*;
use congruent::theory::*;
use std::time::Instant;

fn bounds_for(n: u64, bound: u64) -> (u32, u32) {
    let e = Curve::congruent(n);
    let im = compute_image(&e, bound, &ModuliPolicy::Extended).unwrap();
    let im_bar = compute_image(&e.isogenous(), bound, &ModuliPolicy::Extended).unwrap();
    let b = rank_bounds(&im, &im_bar).unwrap();
    (b.lower, b.upper)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("all");

    if mode == "all" || mode == "p5" {
        // Part-1 p ≡ 5 (mod 8): witness sizes for the (b1) space (p, 0, 4p).
        println!("== p ≡ 5 (mod 8), witness for (p, 0, 4p) ==");
        for p in (5u64..500).filter(|&p| p % 8 == 5 && congruent::arith::is_prime(p as i128)) {
            let s = HomogeneousSpace::new(p as i128, 0, 4 * p as i128).unwrap();
            let t = Instant::now();
            let mut found = None;
            for bound in [32, 256, 2048, 10_000] {
                if let SolvabilityStatus::ProvenSolvable {
                    proof: Membership::Witness { witness, .. },
                } = search_homogeneous(&s, bound)
                {
                    found = Some(witness);
                    break;
                }
            }
            match found {
                Some(w) => println!(
                    "p={p}: (m,e,N)=({},{},{}) max={} [{:?}]",
                    w.m,
                    w.e,
                    w.n,
                    w.m.max(w.e),
                    t.elapsed()
                ),
                None => println!("p={p}: NOT FOUND at 10^4 [{:?}]", t.elapsed()),
            }
        }
    }

    if mode == "all" || mode == "p7" {
        println!("== p ≡ 7 (mod 8), witness for (2, 0, 2p²) ==");
        for p in (7u64..500).filter(|&p| p % 8 == 7 && congruent::arith::is_prime(p as i128)) {
            let s = HomogeneousSpace::new(2, 0, 2 * (p as i128) * (p as i128)).unwrap();
            let mut found = None;
            for bound in [32, 256, 2048, 10_000] {
                if let SolvabilityStatus::ProvenSolvable {
                    proof: Membership::Witness { witness, .. },
                } = search_homogeneous(&s, bound)
                {
                    found = Some(witness);
                    break;
                }
            }
            match found {
                Some(w) => println!("p={p}: max={}", w.m.max(w.e)),
                None => println!("p={p}: NOT FOUND at 10^4"),
            }
        }
    }

    if mode == "all" || mode == "rank0" {
        println!("== rank-0 patterns: sieve-only upper bound ==");
        let mut bad = 0;
        for n in 1u64..2000 {
            let Some(case) = classify(n) else { continue };
            let verdict = theorem_rank(&case);
            if verdict.rank != Some(0) {
                continue;
            }
            let t = Instant::now();
            let (lo, hi) = bounds_for(n, 4);
            if hi != 0 {
                println!("n={n} ({case:?}): bounds ({lo},{hi}) EXPECTED upper 0");
                bad += 1;
            } else if n < 100 {
                println!("n={n}: exact 0 ok [{:?}]", t.elapsed());
            }
        }
        println!("rank-0 violations: {bad}");
    }

    if mode == "all" || mode == "2605" {
        println!("== N = 2605 ==");
        let t = Instant::now();
        let (lo, hi) = bounds_for(2605, 2048);
        println!("2605: bounds ({lo}, {hi}) [{:?}]", t.elapsed());
    }

    if mode == "all" || mode == "bracket" {
        println!("== bracket sweep pq/2pq < 2000 ==");
        let t = Instant::now();
        let mut checked = 0;
        let mut bad = 0;
        for n in 1u64..2000 {
            let Some(case) = classify(n) else { continue };
            if matches!(case, CongruentCase::P { .. } | CongruentCase::TwoP { .. }) {
                continue;
            }
            let verdict = theorem_rank(&case);
            let Some(r) = verdict.rank else { continue };
            let (lo, hi) = bounds_for(n, 64);
            checked += 1;
            if lo > r || hi < r {
                println!("n={n} ({case:?}): bounds ({lo},{hi}) contradict rank {r}");
                bad += 1;
            }
        }
        println!("checked {checked} verdict cases, contradictions: {bad} [{:?}]", t.elapsed());
    }
}
