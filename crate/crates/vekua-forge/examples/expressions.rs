//! Parsing, printing, evaluating, and differentiating coefficient
//! expressions in the variables x and y.
//!
//! Run: cargo run -p vekua-forge --example expressions

use vekua_forge::coeffexpr::{eval, eval_jet, fd_partials};
use vekua_forge::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = parse_expr("exp(-x*y) + sin(x)^2 / (1 + y^2)")?;
    // the printer emits a canonical form that parses back to the same tree
    println!("canonical form: {e}");

    let (x, y) = (0.8, -0.4);
    println!("value at ({x}, {y}): {}", eval(&e, x, y)?);

    // forward-mode jets carry exact first partials through every operation
    let j = eval_jet(&e, x, y)?;
    println!("jet: value = {}", j.value);
    println!("     d/dx  = {}", j.dx);
    println!("     d/dy  = {}", j.dy);

    // central differences give an independent derivative path
    let (fx, fy) = fd_partials(&e, x, y, 1e-5)?;
    println!("finite differences: d/dx = {fx}");
    println!("                    d/dy = {fy}");
    println!(
        "|jet - fd| = ({:.3e}, {:.3e})",
        (j.dx - fx).abs(),
        (j.dy - fy).abs()
    );

    // errors carry byte offsets into the source text
    println!("\nerror reporting:");
    for bad in ["1 + sin(x", "foo(3)", "x ^ ", "2 @ 3"] {
        println!("  {bad:?}: {}", parse_expr(bad).unwrap_err());
    }

    // domain failures are reported, not silently NaN
    let log = parse_expr("log(x - 1)")?;
    println!(
        "  log(x - 1) at x = 0: {}",
        eval(&log, 0.0, 0.0).unwrap_err()
    );
    Ok(())
}
