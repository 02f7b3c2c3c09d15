//! The six rank surrogates and their scalar proximal maps: how each one
//! shrinks a singular value compared with the soft threshold of the nuclear
//! norm.

use qtlr::surrogate::{scalar_prox, ProxConfig, Surrogate};

fn main() {
    let lambda = 1.0;
    let cfg = ProxConfig::default();
    let surrogates: Vec<(&str, Surrogate)> = vec![
        ("geman (gamma=3)", Surrogate::geman(3.0)),
        ("laplace (gamma=3)", Surrogate::laplace(3.0)),
        ("logarithm (gamma=3)", Surrogate::logarithm(3.0)),
        ("nuclear (wnn, w=1)", Surrogate::weighted_nuclear(None)),
        ("schatten p=0.5", Surrogate::schatten_p(0.5)),
        ("w. schatten p=0.5", Surrogate::weighted_schatten_p(0.5, None)),
    ];

    // phi values: every surrogate is concave and non-decreasing; the
    // non-convex ones flatten out, penalizing large singular values less
    // than the nuclear norm does.
    println!("phi(x) at lambda = {lambda}:");
    print!("{:>22}", "x");
    for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
        print!("{x:>10.1}");
    }
    println!();
    for (name, s) in &surrogates {
        print!("{name:>22}");
        for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
            print!("{:>10.3}", s.value(x, 0).unwrap());
        }
        println!();
    }

    // prox values: the DC iteration keeps large inputs nearly untouched for
    // the saturating surrogates (small bias) while still zeroing small ones
    // (strong sparsity) - the best of both worlds relative to the uniform
    // soft threshold.
    println!("\nprox(sigma) at lambda = {lambda}:");
    print!("{:>22}", "sigma");
    for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
        print!("{x:>10.1}");
    }
    println!();
    for (name, s) in &surrogates {
        print!("{name:>22}");
        for sigma in [0.5, 1.0, 2.0, 5.0, 10.0] {
            print!("{:>10.3}", scalar_prox(sigma, lambda, s, &cfg, 0));
        }
        println!();
    }
}
