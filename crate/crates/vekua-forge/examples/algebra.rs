//! Arithmetic in a generalized complex algebra with structure polynomial
//! X^2 + beta*X + alpha, where the imaginary unit satisfies
//! i^2 = -beta*i - alpha.
//!
//! Run: cargo run -p vekua-forge --example algebra

use vekua_forge::{StructureParams, GC};

fn main() {
    // alpha = 2, beta = 0: the algebra with i^2 = -2
    let s = StructureParams::new(2.0, 0.0);
    println!(
        "structure {s}: discriminant 4a - b^2 = {}",
        s.discriminant()
    );
    println!(
        "elliptic (every nonzero element invertible): {}",
        s.is_elliptic()
    );

    let w1 = GC::new(1.0, 2.0);
    let w2 = GC::new(-0.5, 1.0);
    println!("w1        = {w1}");
    println!("w2        = {w2}");
    println!("w1 + w2   = {}", w1 + w2);
    println!("w1 * w2   = {}", w1.mul(w2, s));
    println!("i * i     = {}", GC::I.mul(GC::I, s));
    println!("conj(w1)  = {}", w1.conj());
    // w * conj(w) = u^2 + alpha v^2 + i beta v^2, the quadratic form of
    // the algebra; real and positive exactly in the elliptic case
    println!("w1 * conj(w1) = {}", w1.mul(w1.conj(), s));

    let inv = w1
        .inv(s)
        .expect("elliptic algebra: nonzero elements invert");
    println!("w1^-1     = {inv}");
    println!("w1 * w1^-1 = {}", w1.mul(inv, s));

    // alpha = -1, beta = 0 gives i^2 = +1: not elliptic, and 1 + i is a
    // zero divisor
    let hyper = StructureParams::new(-1.0, 0.0);
    let z = GC::new(1.0, 1.0);
    println!("structure {hyper}: elliptic = {}", hyper.is_elliptic());
    println!("(1 + i) * (1 - i) = {}", z.mul(z.conj(), hyper));
    match z.inv(hyper) {
        Ok(_) => println!("unexpected: zero divisor inverted"),
        Err(e) => println!("inverting 1 + i fails: {e}"),
    }
}
