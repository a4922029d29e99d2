// Lambert W and the hypergeometric kernels at a few sample points.

use dirac_darboux::specfun::{hyp1f1_path, hyp2f1_path, lambert_w0, Cx, SeriesControl};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for t in [-1.0 / std::f64::consts::E, -0.2, 0.0, 1.0, 10.0, 1e6] {
        let w = lambert_w0(t)?;
        println!("W0({t:>12.6}) = {w:.15}   w e^w - t = {:.1e}", w * w.exp() - t);
    }

    let ctl = SeriesControl::default();
    let (m, path) = hyp1f1_path(Cx::new(0.5, 0.2), Cx::new(1.5, 0.0), Cx::new(-20.0, 1.0), &ctl)?;
    println!("1F1(0.5+0.2i; 1.5; -20+i) = {m:.12} via {path:?}");

    // Terminating numerator, then the 1 - w connection near w = 1.
    let (p, path) = hyp2f1_path(Cx::new(-3.0, 0.0), Cx::new(2.0, 0.0), Cx::new(1.5, 0.0), Cx::new(0.7, 0.0), &ctl)?;
    println!("2F1(-3, 2; 1.5; 0.7) = {p:.12} via {path:?}");
    let (f, path) = hyp2f1_path(Cx::new(0.3, 0.1), Cx::new(0.8, 0.0), Cx::new(2.2, 0.0), Cx::new(0.97, 0.0), &ctl)?;
    println!("2F1(0.3+0.1i, 0.8; 2.2; 0.97) = {f:.12} via {path:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("special functions example");
}
