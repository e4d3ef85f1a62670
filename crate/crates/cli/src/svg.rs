//! Deterministic SVG rendering of a configuration: stereographic projection
//! from the point antipodal to the configuration centroid, vertices as dots,
//! contact edges as projected great-circle arcs.

use scg_core::embedder::SphericalConfig;
use scg_core::sphere_geom::{angular_dist, UnitVector};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Projection viewpoint: the normalized centroid when usable, otherwise the
/// first direction of a fixed grid that keeps clear of every point.
fn viewpoint(cfg: &SphericalConfig) -> UnitVector {
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut cz = 0.0;
    for p in &cfg.points {
        cx += p.x;
        cy += p.y;
        cz += p.z;
    }
    let clear = |q: &UnitVector| {
        cfg.points
            .iter()
            .all(|p| angular_dist(&q.antipode(), p) > 0.2)
    };
    if let Ok(c) = UnitVector::new(cx, cy, cz) {
        if clear(&c) {
            return c;
        }
    }
    let grid = [
        (1.0, 1.0, 1.0),
        (-1.0, 1.0, 1.0),
        (1.0, -1.0, 1.0),
        (1.0, 1.0, -1.0),
        (1.0, 0.3, 0.1),
        (0.1, 1.0, 0.3),
        (0.3, 0.1, 1.0),
        (0.7, -0.4, 0.59),
    ];
    for (x, y, z) in grid {
        let q = UnitVector::new(x, y, z).unwrap();
        if clear(&q) {
            return q;
        }
    }
    UnitVector::new(0.0, 0.0, 1.0).unwrap()
}

/// Stereographic projection from the antipode of `view` onto the tangent
/// plane at `view`.
fn project(p: &UnitVector, view: &UnitVector, e1: &[f64; 3], e2: &[f64; 3]) -> (f64, f64) {
    let t = p.dot(view);
    let scale = 1.0 / (1.0 + t);
    let px = p.x - t * view.x;
    let py = p.y - t * view.y;
    let pz = p.z - t * view.z;
    (
        scale * (px * e1[0] + py * e1[1] + pz * e1[2]),
        scale * (px * e2[0] + py * e2[1] + pz * e2[2]),
    )
}

fn frame(view: &UnitVector) -> ([f64; 3], [f64; 3]) {
    let up = if view.z.abs() < 0.9 {
        UnitVector::new(0.0, 0.0, 1.0).unwrap()
    } else {
        UnitVector::new(1.0, 0.0, 0.0).unwrap()
    };
    let e1v = up.cross(view);
    let n = (e1v[0] * e1v[0] + e1v[1] * e1v[1] + e1v[2] * e1v[2]).sqrt();
    let e1 = [e1v[0] / n, e1v[1] / n, e1v[2] / n];
    let e2 = [
        view.y * e1[2] - view.z * e1[1],
        view.z * e1[0] - view.x * e1[2],
        view.x * e1[1] - view.y * e1[0],
    ];
    (e1, e2)
}

/// Samples a great-circle arc densely enough that the polyline chord error
/// stays below 1e-3 of the sphere radius.
fn arc_points(a: &UnitVector, b: &UnitVector) -> Vec<UnitVector> {
    let theta = angular_dist(a, b);
    // Chord error of a segment subtending t is about t^2/8.
    let per_seg = (8.0 * 1e-3_f64).sqrt();
    let segs = (theta / per_seg).ceil().max(1.0) as usize;
    let sin_t = theta.sin();
    (0..=segs)
        .map(|k| {
            let f = k as f64 / segs as f64;
            if sin_t < 1e-12 {
                *a
            } else {
                let wa = ((1.0 - f) * theta).sin() / sin_t;
                let wb = (f * theta).sin() / sin_t;
                UnitVector::new(
                    wa * a.x + wb * b.x,
                    wa * a.y + wb * b.y,
                    wa * a.z + wb * b.z,
                )
                .unwrap()
            }
        })
        .collect()
}

/// Renders the configuration; byte-identical output for equal input.
pub fn render_svg(cfg: &SphericalConfig) -> String {
    let view = viewpoint(cfg);
    let (e1, e2) = frame(&view);
    let projected: Vec<(f64, f64)> = cfg
        .points
        .iter()
        .map(|p| project(p, &view, &e1, &e2))
        .collect();

    // Scale: fit all projected points (and arc samples) into the canvas.
    let mut all: Vec<(f64, f64)> = projected.clone();
    let mut arcs: Vec<Vec<(f64, f64)>> = Vec::new();
    for &(i, j) in &cfg.edges {
        let pts: Vec<(f64, f64)> = arc_points(&cfg.points[i], &cfg.points[j])
            .iter()
            .map(|p| project(p, &view, &e1, &e2))
            .collect();
        all.extend_from_slice(&pts);
        arcs.push(pts);
    }
    let max_r = all
        .iter()
        .map(|&(x, y)| (x * x + y * y).sqrt())
        .fold(1e-9, f64::max);
    let scale = (SIZE / 2.0 - MARGIN) / max_r;
    let tx = |x: f64| SIZE / 2.0 + scale * x;
    let ty = |y: f64| SIZE / 2.0 - scale * y;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    for pts in &arcs {
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.4},{:.4}", tx(x), ty(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
    }
    for (i, &(x, y)) in projected.iter().enumerate() {
        out.push_str(&format!(
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"5\" fill=\"#c33\"/>\n",
            tx(x),
            ty(y)
        ));
        out.push_str(&format!(
            "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"11\" fill=\"#555\">{}</text>\n",
            tx(x) + 7.0,
            ty(y) - 7.0,
            i
        ));
    }
    out.push_str("</svg>\n");
    out
}
