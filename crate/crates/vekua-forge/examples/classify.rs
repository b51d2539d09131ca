//! Ellipticity classification of a first-order system over a rectangle,
//! with witness points for failures.
//!
//! Run: cargo run -p vekua-forge --example classify

use vekua_forge::{parse_expr, Classification, EllipticSystem, Region};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a11 > 0, a22 > 0, and delta = a11*a22 - ((a12 + a21)/2)^2 > 0 must
    // hold at every sampled node
    let mut sys = EllipticSystem {
        a11: parse_expr("2 + sin(x)")?,
        a12: parse_expr("x*y")?,
        a21: parse_expr("-x*y")?,
        a22: parse_expr("1 + x^2 + y^2")?,
        ..EllipticSystem::classical()
    };
    let region = Region::new(-1.0, 1.0, -1.0, 1.0, 30, 30)?;

    match sys.classify(&region)? {
        Classification::Elliptic => println!("elliptic on [-1,1]^2"),
        witness => println!("{witness}"),
    }
    println!("delta at (0.5, 0.5): {}", sys.delta(0.5, 0.5)?);
    let s = sys.structure_params(0.5, 0.5)?;
    println!("algebra at (0.5, 0.5): {s}");

    // ellipticity is pointwise: a leading coefficient that changes sign
    // yields a witness at the first offending node in grid order
    sys.a11 = parse_expr("x")?;
    match sys.classify(&region)? {
        Classification::Elliptic => println!("unexpectedly elliptic"),
        witness => println!("{witness}"),
    }

    // a large mixed part sinks the discriminant even with a11, a22 > 0
    sys.a11 = parse_expr("1")?;
    sys.a12 = parse_expr("3")?;
    sys.a21 = parse_expr("0")?;
    sys.a22 = parse_expr("1")?;
    match sys.classify(&region)? {
        Classification::Elliptic => println!("unexpectedly elliptic"),
        witness => println!("{witness}"),
    }
    Ok(())
}
