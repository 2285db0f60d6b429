//! Piecewise-linear paths in the complex plane, with the JSON wire format
//! `{"waypoints": [[re, im], ...]}`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// An ordered list of at least two waypoints, consecutive ones distinct,
/// interpolated linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Complex64>,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Complex64>) -> Result<Self, NumericError> {
        if waypoints.len() < 2 {
            return Err(NumericError::BadPath);
        }
        if waypoints.iter().any(|z| !z.is_finite()) {
            return Err(NumericError::NonFinite);
        }
        if waypoints.windows(2).any(|p| (p[1] - p[0]).norm() == 0.0) {
            return Err(NumericError::BadPath);
        }
        Ok(PathSpec { waypoints })
    }

    /// Straight segment from `a` to `b`.
    pub fn line(a: Complex64, b: Complex64) -> Self {
        Self::new(vec![a, b]).expect("two distinct waypoints")
    }

    /// A small closed diamond around `center`; contractible, and avoids any
    /// point at distance greater than `radius` from the center.
    pub fn diamond(center: Complex64, radius: f64) -> Self {
        let r = Complex64::new(radius, 0.0);
        let i = Complex64::new(0.0, radius);
        Self::new(vec![
            center + r,
            center + i,
            center - r,
            center - i,
            center + r,
        ])
        .expect("diamond waypoints are distinct")
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }

    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.waypoints.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.waypoints.windows(2).map(|p| (p[0], p[1]))
    }

    pub fn total_length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Same path with every segment split so no step exceeds `max_step`.
    pub fn subdivided(&self, max_step: f64) -> PathSpec {
        let mut pts = vec![self.waypoints[0]];
        for (a, b) in self.segments() {
            let len = (b - a).norm();
            let steps = (len / max_step).ceil().max(1.0) as usize;
            for k in 1..=steps {
                pts.push(a + (b - a) * (k as f64 / steps as f64));
            }
        }
        PathSpec { waypoints: pts }
    }
}

impl Serialize for PathSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            waypoints: Vec<[f64; 2]>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Wire {
            waypoints: self.waypoints.iter().map(|z| [z.re, z.im]).collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PathSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            waypoints: Vec<[f64; 2]>,
        }
        let wire = Wire::deserialize(deserializer)?;
        PathSpec::new(
            wire.waypoints
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PathSpec::new(vec![Complex64::new(0.0, 0.0)]).is_err());
        assert!(PathSpec::new(vec![Complex64::new(0.0, 0.0); 2]).is_err());
        let p = PathSpec::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(p.total_length(), 1.0);
    }

    #[test]
    fn json_round_trip() {
        let p = PathSpec::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.25),
        ])
        .unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.starts_with(r#"{"waypoints":[[0.0,0.0],"#));
        let back: PathSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn subdivision_preserves_endpoints() {
        let p = PathSpec::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0));
        let q = p.subdivided(0.3);
        assert_eq!(q.start(), p.start());
        assert_eq!(q.end(), p.end());
        assert!(q.segments().all(|(a, b)| (b - a).norm() <= 0.3 + 1e-12));
    }

    #[test]
    fn diamond_is_closed() {
        let c = Complex64::new(-0.024, 0.0);
        let d = PathSpec::diamond(c, 0.005);
        assert_eq!(d.start(), d.end());
        assert!(d
            .waypoints()
            .iter()
            .all(|z| (z - c).norm() <= 0.005 + 1e-15));
    }
}
