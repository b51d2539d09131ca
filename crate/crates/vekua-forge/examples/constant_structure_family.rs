//! A two-function family of variable-coefficient elliptic systems whose
//! algebra never varies: a11 = lambda, a22 = alpha0*lambda, a12 = mu,
//! a21 = -beta0*lambda - mu gives structure parameters (alpha0, beta0) at
//! every point where lambda > 0.
//!
//! Run: cargo run -p vekua-forge --example constant_structure_family

use vekua_forge::{make_constant_structure_family, parse_expr, rewrite_at, Region};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = parse_expr("exp(x)")?;
    let mu = parse_expr("y")?;
    let sys = make_constant_structure_family(4.0, -2.0, &lambda, &mu)?;
    println!("family for (alpha0, beta0) = (4, -2), lambda = exp(x), mu = y:");
    println!("  a11 = {}", sys.a11);
    println!("  a12 = {}", sys.a12);
    println!("  a21 = {}", sys.a21);
    println!("  a22 = {}", sys.a22);

    // wildly varying coefficients, frozen algebra
    let region = Region::new(0.0, 1.0, 0.0, 1.0, 3, 3)?;
    println!("structure parameters and Vekua coefficients across [0,1]^2:");
    for (x, y) in region.nodes() {
        let data = rewrite_at(&sys, x, y)?;
        println!(
            "  ({x:.1}, {y:.1}): alpha = {}, beta = {}, A = {}, B = {}",
            data.structure.alpha, data.structure.beta, data.a, data.b
        );
    }

    // the construction needs 4*alpha0 - beta0^2 > 0; degenerate parameters
    // are rejected up front
    match make_constant_structure_family(1.0, 2.0, &lambda, &mu) {
        Ok(_) => println!("unexpected: degenerate family accepted"),
        Err(e) => println!("(alpha0, beta0) = (1, 2) rejected: {e}"),
    }
    Ok(())
}
