//! Point-configuration files.
//!
//! Plain text, one point per line, `#` starts a comment. By default each
//! line is three Cartesian floats; a leading `spherical` header switches to
//! two floats per line, polar angle then azimuth (radians).

use scg_core::embedder::SphericalConfig;
use scg_core::error::Error;
use scg_core::sphere_geom::UnitVector;
use scg_core::Result;

pub fn parse_config(text: &str) -> Result<SphericalConfig> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .peekable();
    let spherical = matches!(lines.peek(), Some(&"spherical"));
    if spherical {
        lines.next();
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad number {t:?} on point line {i}")))
            })
            .collect::<Result<_>>()?;
        let p = match (spherical, nums.len()) {
            (true, 2) => UnitVector::from_spherical(nums[0], nums[1]),
            (false, 3) => {
                let v = UnitVector {
                    x: nums[0],
                    y: nums[1],
                    z: nums[2],
                };
                if v.norm_error() > 1e-6 {
                    return Err(Error::Parse(format!(
                        "point on line {i} is not unit length (off by {:.2e})",
                        v.norm_error()
                    )));
                }
                UnitVector::new(v.x, v.y, v.z)?
            }
            (true, _) => {
                return Err(Error::Parse(format!(
                    "spherical line {i} needs `theta phi`"
                )))
            }
            (false, _) => return Err(Error::Parse(format!("line {i} needs `x y z`"))),
        };
        points.push(p);
    }
    SphericalConfig::from_points(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn write_config(cfg: &SphericalConfig) -> String {
        let mut out = String::new();
        for p in &cfg.points {
            out.push_str(&format!("{:.15} {:.15} {:.15}\n", p.x, p.y, p.z));
        }
        out
    }

    #[test]
    fn cartesian_round_trip() {
        let text = "# a square and a pole\n0 0 1\n1 0 0\n0 1 0\n-1 0 0\n0 -1 0\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.n(), 5);
        assert_eq!(cfg.contact_count(), 8);
        let back = parse_config(&write_config(&cfg)).unwrap();
        assert_eq!(back.n(), 5);
    }

    #[test]
    fn spherical_parsing() {
        let text = format!("spherical\n0 0\n{} 0\n{} {}\n", PI / 2.0, PI / 2.0, PI / 2.0);
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.n(), 3);
        assert!((cfg.separation - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unit() {
        assert!(parse_config("1 1 1\n0 0 1\n").is_err());
        assert!(parse_config("garbage\n").is_err());
    }
}
