//! Curvature at the x-maximal boundary point from a support function:
//! an ellipse, a circle and a polygon vertex.

use scoregeom::geometry::{curvature_at_max_x, ScorePair, SupportPolygon, DEFAULT_CURVATURE_STEP};

pub fn run() -> scoregeom::Result<[f64; 3]> {
    let ellipse = curvature_at_max_x(
        |t: f64| (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt(),
        DEFAULT_CURVATURE_STEP,
    );
    let circle = curvature_at_max_x(|_| 0.5, DEFAULT_CURVATURE_STEP);
    let triangle = SupportPolygon::from_points(&[
        ScorePair::new(1.0, 0.0),
        ScorePair::new(-0.5, 0.8),
        ScorePair::new(-0.5, -0.8),
    ])?;
    let vertex = curvature_at_max_x(|t| triangle.support(t), DEFAULT_CURVATURE_STEP);
    println!("ellipse (2, 1): kappa = {:.6}", ellipse.kappa);
    println!("circle r = 0.5: kappa = {:.6}", circle.kappa);
    println!(
        "triangle: kappa = {}, vertex = {}",
        vertex.kappa, vertex.vertex_detected
    );
    Ok([ellipse.kappa, circle.kappa, vertex.kappa])
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run().map(|_| ())
}
