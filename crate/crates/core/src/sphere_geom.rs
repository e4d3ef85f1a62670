//! Spherical geometry primitives: angular distances, equilateral polygon
//! closure, reflections across great-circle arcs, arc intersection.
//!
//! All angles are in radians; degree values appear only in documentation.
//! `arccos` arguments are clamped into [-1, 1] everywhere so that rounding
//! never produces NaN.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Unit-norm tolerance enforced by constructors.
pub const UNIT_TOL: f64 = 1e-12;

fn clamp1(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVector {
    /// Normalizes the given coordinates. Errors on a near-zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<UnitVector> {
        let n = (x * x + y * y + z * z).sqrt();
        if n < 1e-14 {
            return Err(Error::Degenerate("cannot normalize zero vector".into()));
        }
        Ok(UnitVector {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Builds from spherical coordinates: theta = polar angle from +z,
    /// phi = azimuth from +x.
    pub fn from_spherical(theta: f64, phi: f64) -> UnitVector {
        UnitVector {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn dot(&self, o: &UnitVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &UnitVector) -> [f64; 3] {
        [
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        ]
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm_error(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z - 1.0).abs()
    }

    pub fn antipode(&self) -> UnitVector {
        UnitVector {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Unit tangent at `self` pointing toward `other`.
    /// Errors when the points coincide or are antipodal.
    pub fn tangent_toward(&self, other: &UnitVector) -> Result<[f64; 3]> {
        let c = self.dot(other);
        let tx = other.x - c * self.x;
        let ty = other.y - c * self.y;
        let tz = other.z - c * self.z;
        let n = (tx * tx + ty * ty + tz * tz).sqrt();
        if n < 1e-12 {
            return Err(Error::Degenerate(
                "tangent direction undefined for coincident or antipodal points".into(),
            ));
        }
        Ok([tx / n, ty / n, tz / n])
    }

    /// Walks a geodesic: the point at angular distance `dist` from `self`
    /// along the unit tangent `dir`.
    pub fn walk(&self, dir: [f64; 3], dist: f64) -> UnitVector {
        let (c, s) = (dist.cos(), dist.sin());
        UnitVector::new(
            c * self.x + s * dir[0],
            c * self.y + s * dir[1],
            c * self.z + s * dir[2],
        )
        .expect("walk from unit vector stays on sphere")
    }
}

/// Angular (great-circle) distance between two unit vectors, in [0, pi].
pub fn angular_dist(a: &UnitVector, b: &UnitVector) -> f64 {
    clamp1(a.dot(b)).acos()
}

/// Minimum pairwise angular distance of a point set.
pub fn min_separation(points: &[UnitVector]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain("separation needs at least 2 points"));
    }
    let mut best = PI;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(angular_dist(&points[i], &points[j]));
        }
    }
    Ok(best)
}

/// Vertex angle of the equilateral spherical triangle with side `d`:
/// `arccos(cos d / (1 + cos d))`. Defined for `0 < d < 2*pi/3`, strictly
/// greater than pi/3, strictly increasing.
pub fn equilateral_triangle_angle(d: f64) -> Result<f64> {
    if !(d > 0.0 && d < 2.0 * PI / 3.0) {
        return Err(Error::domain(format!(
            "equilateral triangle side must lie in (0, 2pi/3), got {d}"
        )));
    }
    let c = d.cos();
    Ok(clamp1(c / (1.0 + c)).acos())
}

/// 3x3 row-major matrix helpers for the polygon closure transform.
pub(crate) mod mat3 {
    pub type M = [[f64; 3]; 3];

    pub const IDENT: M = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    pub fn mul(a: &M, b: &M) -> M {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        r
    }

    /// Frobenius distance to the identity.
    pub fn dist_to_ident(a: &M) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = a[i][j] - if i == j { 1.0 } else { 0.0 };
                s += d * d;
            }
        }
        s.sqrt()
    }

    /// Transport along a geodesic of length d in the frame (position,
    /// heading, normal).
    pub fn travel(d: f64) -> M {
        let (c, s) = (d.cos(), d.sin());
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    }

    /// d/dd of travel(d).
    pub fn travel_deriv(d: f64) -> M {
        let (c, s) = (d.cos(), d.sin());
        [[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]]
    }

    /// Turn by the exterior angle (pi - interior) about the current position.
    pub fn turn(interior: f64) -> M {
        let t = std::f64::consts::PI - interior;
        let (c, s) = (t.cos(), t.sin());
        [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
    }

    /// d/d(interior) of turn(interior).
    pub fn turn_deriv(interior: f64) -> M {
        let t = std::f64::consts::PI - interior;
        let (c, s) = (t.cos(), t.sin());
        // chain rule: dt/d(interior) = -1
        [[0.0, 0.0, 0.0], [0.0, s, c], [0.0, -c, s]]
    }
}

/// Interior angles of one face, indexed like the face's vertex cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceAngleVector {
    pub face_id: usize,
    pub angles: Vec<f64>,
}

impl FaceAngleVector {
    pub fn new(face_id: usize, angles: Vec<f64>) -> Result<FaceAngleVector> {
        if angles.len() < 3 {
            return Err(Error::domain("a face needs at least 3 angles"));
        }
        if angles.iter().any(|&a| a <= 0.0 || a > PI + 1e-12) {
            return Err(Error::domain("face angles must lie in (0, pi]"));
        }
        Ok(FaceAngleVector { face_id, angles })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Composite closure transform of an equilateral spherical polygon: travel a
/// side of length `d`, turn by the interior angle, repeated around the face.
pub(crate) fn closure_transform(d: f64, angles: &[f64]) -> mat3::M {
    let mut m = mat3::IDENT;
    let tr = mat3::travel(d);
    for &u in angles {
        m = mat3::mul(&m, &mat3::mul(&tr, &mat3::turn(u)));
    }
    m
}

/// Residual of the polygon closure condition: Frobenius distance of the
/// composite transform from the identity. Zero iff the equilateral spherical
/// polygon with side `d` and the given interior angles closes up.
pub fn polygon_closure_residual(d: f64, face: &FaceAngleVector) -> f64 {
    debug_assert!(d > 0.0 && d < PI);
    mat3::dist_to_ident(&closure_transform(d, &face.angles))
}

/// Mirror image of `x` in the great circle through `y` and `z`.
/// Involutive; preserves distances to `y` and `z`.
pub fn reflect_across_arc(x: &UnitVector, y: &UnitVector, z: &UnitVector) -> Result<UnitVector> {
    let n = y.cross(z);
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if nn < 1e-9 {
        return Err(Error::Degenerate(
            "reflection arc endpoints are equal or antipodal".into(),
        ));
    }
    let n = [n[0] / nn, n[1] / nn, n[2] / nn];
    let p = 2.0 * (x.x * n[0] + x.y * n[1] + x.z * n[2]);
    UnitVector::new(x.x - p * n[0], x.y - p * n[1], x.z - p * n[2])
}

fn strictly_inside_arc(p: [f64; 3], a: &UnitVector, b: &UnitVector, tol: f64) -> bool {
    let p = match UnitVector::new(p[0], p[1], p[2]) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let ab = angular_dist(a, b);
    let ap = angular_dist(a, &p);
    let pb = angular_dist(&p, b);
    (ap + pb - ab).abs() < tol && ap > tol && pb > tol
}

/// Whether the open minimal arcs a1-a2 and b1-b2 share a point. Arcs meeting
/// only at a shared endpoint do not count as intersecting.
pub fn arcs_intersect(
    a1: &UnitVector,
    a2: &UnitVector,
    b1: &UnitVector,
    b2: &UnitVector,
) -> Result<bool> {
    let tol = 1e-9;
    for (p, q) in [(a1, a2), (b1, b2)] {
        let d = angular_dist(p, q);
        if d < tol || d > PI - tol {
            return Err(Error::Degenerate(
                "arc endpoints equal or antipodal".into(),
            ));
        }
    }
    let n1 = a1.cross(a2);
    let n2 = b1.cross(b2);
    let t = [
        n1[1] * n2[2] - n1[2] * n2[1],
        n1[2] * n2[0] - n1[0] * n2[2],
        n1[0] * n2[1] - n1[1] * n2[0],
    ];
    let tn = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    if tn < 1e-12 {
        // Same great circle: intersection means an endpoint of one arc lies
        // strictly inside the other.
        for e in [a1, a2] {
            if strictly_inside_arc(e.coords(), b1, b2, tol) {
                return Ok(true);
            }
        }
        for e in [b1, b2] {
            if strictly_inside_arc(e.coords(), a1, a2, tol) {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let t = [t[0] / tn, t[1] / tn, t[2] / tn];
    for cand in [t, [-t[0], -t[1], -t[2]]] {
        if strictly_inside_arc(cand, a1, a2, tol) && strictly_inside_arc(cand, b1, b2, tol) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn north() -> UnitVector {
        UnitVector::new(0.0, 0.0, 1.0).unwrap()
    }
    fn south() -> UnitVector {
        UnitVector::new(0.0, 0.0, -1.0).unwrap()
    }
    fn ex() -> UnitVector {
        UnitVector::new(1.0, 0.0, 0.0).unwrap()
    }
    fn ey() -> UnitVector {
        UnitVector::new(0.0, 1.0, 0.0).unwrap()
    }

    fn random_unit(rng: &mut SplitMix64) -> UnitVector {
        loop {
            let x = rng.range(-1.0, 1.0);
            let y = rng.range(-1.0, 1.0);
            let z = rng.range(-1.0, 1.0);
            if x * x + y * y + z * z > 1e-3 {
                return UnitVector::new(x, y, z).unwrap();
            }
        }
    }

    #[test]
    fn angular_dist_basic() {
        assert!(angular_dist(&north(), &north()) < 1e-15);
        assert!((angular_dist(&north(), &south()) - PI).abs() < 1e-15);
        assert!((angular_dist(&ex(), &ey()) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn angular_dist_symmetric_and_triangle() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..500 {
            let a = random_unit(&mut rng);
            let b = random_unit(&mut rng);
            let c = random_unit(&mut rng);
            assert!((angular_dist(&a, &b) - angular_dist(&b, &a)).abs() < 1e-15);
            assert!(angular_dist(&a, &c) <= angular_dist(&a, &b) + angular_dist(&b, &c) + 1e-10);
        }
    }

    #[test]
    fn separation_known_solids() {
        // Octahedron.
        let octa = vec![
            ex(),
            ey(),
            north(),
            ex().antipode(),
            ey().antipode(),
            south(),
        ];
        assert!((min_separation(&octa).unwrap() - PI / 2.0).abs() < 1e-12);

        // Icosahedron.
        let ico = crate::extremal::icosahedron_vertices();
        let expect = (1.0 / 5.0_f64.sqrt()).acos();
        assert!((min_separation(&ico).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 1.10715).abs() < 1e-5);

        // Cube.
        let s = 1.0 / 3.0_f64.sqrt();
        let cube: Vec<UnitVector> = (0..8)
            .map(|i| {
                UnitVector::new(
                    if i & 1 == 0 { s } else { -s },
                    if i & 2 == 0 { s } else { -s },
                    if i & 4 == 0 { s } else { -s },
                )
                .unwrap()
            })
            .collect();
        assert!((min_separation(&cube).unwrap() - (1.0_f64 / 3.0).acos()).abs() < 1e-12);
    }

    #[test]
    fn separation_needs_two_points() {
        assert!(min_separation(&[north()]).is_err());
    }

    #[test]
    fn triangle_angle_values() {
        // cos d = 0 gives a right angle.
        assert!((equilateral_triangle_angle(PI / 2.0).unwrap() - PI / 2.0).abs() < 1e-15);
        // Icosahedral edge length gives 72 degrees.
        let d = (1.0 / 5.0_f64.sqrt()).acos();
        assert!((equilateral_triangle_angle(d).unwrap() - 2.0 * PI / 5.0).abs() < 1e-12);
        assert!(equilateral_triangle_angle(0.0).is_err());
        assert!(equilateral_triangle_angle(2.0 * PI / 3.0).is_err());
    }

    #[test]
    fn triangle_angle_monotone_above_sixty_degrees() {
        let mut prev = PI / 3.0;
        for k in 1..1000 {
            let d = 2.0 * PI / 3.0 * (k as f64) / 1000.0;
            let a = equilateral_triangle_angle(d).unwrap();
            assert!(a > PI / 3.0, "angle {a} not above pi/3 at d={d}");
            assert!(a > prev, "not increasing at d={d}");
            prev = a;
        }
    }

    #[test]
    fn closure_octant_triangle() {
        let f = FaceAngleVector::new(0, vec![PI / 2.0; 3]).unwrap();
        assert!(polygon_closure_residual(PI / 2.0, &f) < 1e-12);
    }

    #[test]
    fn closure_icosahedron_face() {
        let d = (1.0 / 5.0_f64.sqrt()).acos();
        let f = FaceAngleVector::new(0, vec![2.0 * PI / 5.0; 3]).unwrap();
        assert!(polygon_closure_residual(d, &f) < 1e-10);
    }

    #[test]
    fn closure_underfilled_triangle_stays_open() {
        let f = FaceAngleVector::new(0, vec![PI / 3.0; 3]).unwrap();
        assert!(polygon_closure_residual(PI / 2.0, &f) > 1e-3);
    }

    #[test]
    fn triangle_angle_matches_closure_root() {
        // Independent oracle: minimize the 3-gon closure residual over the
        // common angle by golden-section search and compare the root.
        let d = 1.3;
        let (mut lo, mut hi) = (1.0f64, 3.0f64);
        let resid = |u: f64| {
            let f = FaceAngleVector::new(0, vec![u; 3]).unwrap();
            polygon_closure_residual(d, &f)
        };
        let phi = (5.0f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if resid(a) < resid(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!(resid(root) < 1e-10, "residual at root {}", resid(root));
        let direct = equilateral_triangle_angle(d).unwrap();
        assert!(
            (root - direct).abs() < 1e-8,
            "closure root {root} vs formula {direct}"
        );
    }

    #[test]
    fn closure_of_triangle_angle_over_grid() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let d = rng.range(0.01, 2.0 * PI / 3.0 - 0.01);
            let a = equilateral_triangle_angle(d).unwrap();
            let f = FaceAngleVector::new(0, vec![a; 3]).unwrap();
            assert!(
                polygon_closure_residual(d, &f) < 1e-10,
                "closure failed at d={d}"
            );
        }
    }

    fn coord_gap(a: &UnitVector, b: &UnitVector) -> f64 {
        (a.x - b.x)
            .abs()
            .max((a.y - b.y).abs())
            .max((a.z - b.z).abs())
    }

    #[test]
    fn reflection_fixed_points_and_involution() {
        let y = ex();
        let z = ey();
        // A point on the arc's great circle is fixed.
        let on = UnitVector::new(1.0, 1.0, 0.0).unwrap();
        let r = reflect_across_arc(&on, &y, &z).unwrap();
        assert!(coord_gap(&on, &r) < 1e-12);

        // North pole reflects across the equator to the south pole.
        let r = reflect_across_arc(&north(), &y, &z).unwrap();
        assert!(coord_gap(&r, &south()) < 1e-12);

        // Involution on random points; distances to y and z preserved.
        // Comparisons are in coordinates: arccos cannot resolve angles
        // below ~1e-8.
        let mut rng = SplitMix64::new(3);
        for _ in 0..200 {
            let x = random_unit(&mut rng);
            let y = random_unit(&mut rng);
            let mut z = random_unit(&mut rng);
            while angular_dist(&y, &z) < 1e-3 || angular_dist(&y, &z) > PI - 1e-3 {
                z = random_unit(&mut rng);
            }
            let x1 = reflect_across_arc(&x, &y, &z).unwrap();
            let x2 = reflect_across_arc(&x1, &y, &z).unwrap();
            assert!(coord_gap(&x, &x2) < 1e-12);
            assert!((x.dot(&y) - x1.dot(&y)).abs() < 1e-12);
            assert!((x.dot(&z) - x1.dot(&z)).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_rejects_degenerate_arc() {
        assert!(reflect_across_arc(&ex(), &north(), &north()).is_err());
        assert!(reflect_across_arc(&ex(), &north(), &south()).is_err());
    }

    #[test]
    fn arcs_shared_endpoint_not_intersecting() {
        // Both arcs start at the north pole, go to different equator points.
        assert!(!arcs_intersect(&north(), &ex(), &north(), &ey()).unwrap());
    }

    #[test]
    fn arcs_crossing() {
        // Equatorial quarter arc vs meridian arc crossing it.
        let mid = UnitVector::new(1.0, 1.0, 0.0).unwrap();
        let lo = UnitVector::new(1.0, 1.0, -1.0).unwrap();
        let hi = UnitVector::new(1.0, 1.0, 1.0).unwrap();
        let _ = mid;
        assert!(arcs_intersect(&ex(), &ey(), &lo, &hi).unwrap());
    }

    #[test]
    fn arcs_disjoint_hemispheres() {
        let a1 = UnitVector::new(0.1, 0.0, 1.0).unwrap();
        let a2 = UnitVector::new(0.0, 0.1, 1.0).unwrap();
        let b1 = UnitVector::new(0.1, 0.0, -1.0).unwrap();
        let b2 = UnitVector::new(0.0, 0.1, -1.0).unwrap();
        assert!(!arcs_intersect(&a1, &a2, &b1, &b2).unwrap());
    }

    #[test]
    fn arcs_degenerate_rejected() {
        assert!(arcs_intersect(&ex(), &ex(), &north(), &ey()).is_err());
    }
}
