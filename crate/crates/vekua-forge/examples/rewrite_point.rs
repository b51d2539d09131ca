//! The pointwise rewrite pipeline, stage by stage: original system ->
//! substituted intermediate system -> canonical form -> Vekua equation
//! dzbar(W) + A*W + B*conj(W) = F over the generalized complex algebra.
//!
//! Run: cargo run -p vekua-forge --example rewrite_point

use vekua_forge::rewrite::{assemble_vekua, row_reduce, substitute};
use vekua_forge::{parse_expr, rewrite_at, EllipticSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sys = EllipticSystem {
        a11: parse_expr("1")?,
        a12: parse_expr("3")?,
        a21: parse_expr("0")?,
        a22: parse_expr("4")?,
        a1: parse_expr("1")?,
        b2: parse_expr("y")?,
        f1: parse_expr("x")?,
        ..EllipticSystem::classical()
    };
    let (x, y) = (0.25, 0.5);

    // stage 1: the algebra the rewrite lands in (alpha = a22/a11,
    // beta = -(a21 + a12)/a11)
    let s = sys.structure_params(x, y)?;
    println!("algebra: {s}");

    // stage 2: substitution U = a22*u, V = v - a12*u produces an
    // intermediate system with starred lower-order coefficients
    let inter = substitute(&sys, x, y)?;
    println!("intermediate system at ({x}, {y}):");
    println!("  a* = {}", inter.a_star);
    println!("  b* = {}", inter.b_star);
    println!("  c* = {}", inter.c_star);
    println!("  d* = {}", inter.d_star);
    println!(
        "  principal coefficients: 1/alpha = {}, mixed = {}",
        inter.inv_alpha_coeff, inter.mixed_coeff
    );

    // stage 3: row operations align the principal part with the
    // generalized Cauchy-Riemann operator
    let cp = row_reduce(&inter, s)?;
    println!("canonical form coefficients:");
    println!("  a = {}, b = {}", cp.a, cp.b);
    println!("  c = {}, d = {}", cp.c, cp.d);
    println!("  f = {}, g = {}", cp.f, cp.g);

    // stage 4: complex assembly into the Vekua equation
    let (a, b, f) = assemble_vekua(&cp, s)?;
    println!("Vekua equation: dzbar(W) + A*W + B*conj(W) = F with");
    println!("  A = {a}");
    println!("  B = {b}");
    println!("  F = {f}");

    // the one-call form bundles all four stages
    let data = rewrite_at(&sys, x, y)?;
    assert_eq!((data.a, data.b, data.f), (a, b, f));
    println!(
        "rewrite_at agrees: A = {}, B = {}, F = {}",
        data.a, data.b, data.f
    );
    Ok(())
}
