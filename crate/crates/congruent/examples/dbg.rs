use congruent::descent::*;
use congruent::theory::*;
fn main() {
    for n in 1u64..2000 {
        let Some(case) = classify(n) else { continue };
        if matches!(case, CongruentCase::P { .. } | CongruentCase::TwoP { .. }) { continue; }
        let e = Curve::congruent(n);
        let im = match compute_image(&e, 64, &ModuliPolicy::Extended) {
            Ok(im) => im,
            Err(err) => { println!("n={n} E-side: {err}"); continue; }
        };
        let im_bar = match compute_image(&e.isogenous(), 64, &ModuliPolicy::Extended) {
            Ok(im) => im,
            Err(err) => { println!("n={n} Ebar-side: {err}"); continue; }
        };
        if let Err(err) = rank_bounds(&im, &im_bar) { println!("n={n} bounds: {err}"); }
    }
    println!("done");
}
