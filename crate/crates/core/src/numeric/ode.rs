//! Adaptive embedded Runge–Kutta 5(4) (Dormand–Prince) integration of
//! complex ODE systems along piecewise-linear paths, parametrized by
//! arclength.

use num_complex::Complex64;

use super::{NumericError, PathSpec};

/// State vector of a complex ODE system.
pub type OdeState = Vec<Complex64>;

#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    /// Arclength along the path.
    pub s: f64,
    /// Position in the complex plane.
    pub z: Complex64,
    /// State at this point.
    pub y: OdeState,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory is never empty")
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights (same as last A row, FSAL) and embedded 4th-order weights.
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dz = field(z, y)` along the path, i.e. `dy/ds =
/// field(z(s), y) * z'(s)` in the arclength parameter. The local error per
/// step is kept below `tol` (componentwise, relative to `1 + |y_i|`).
pub fn integrate_path<F>(
    mut field: F,
    path: &PathSpec,
    y0: &[Complex64],
    tol: f64,
) -> Result<Trajectory, NumericError>
where
    F: FnMut(Complex64, &[Complex64]) -> Result<OdeState, NumericError>,
{
    if y0.iter().any(|c| !c.is_finite()) || !(tol > 0.0) {
        return Err(NumericError::NonFinite);
    }
    let dim = y0.len();
    let mut traj = Trajectory::default();
    let mut s_total = 0.0;
    let mut y: OdeState = y0.to_vec();
    traj.points.push(TrajectoryPoint {
        s: 0.0,
        z: path.start(),
        y: y.clone(),
    });

    for (a, b) in path.segments() {
        let seg_len = (b - a).norm();
        let tangent = (b - a) / seg_len;
        let mut s = 0.0; // arclength within segment
        let mut h = seg_len; // initial step: whole segment
        let eval = |field: &mut F, s: f64, y: &[Complex64]| -> Result<OdeState, NumericError> {
            let z = a + tangent * s;
            let f = field(z, y)?;
            if f.len() != dim {
                return Err(NumericError::FieldFailure(format!(
                    "field returned {} components, expected {dim}",
                    f.len()
                )));
            }
            if f.iter().any(|c| !c.is_finite()) {
                return Err(NumericError::FieldFailure(
                    "field produced a non-finite derivative".to_string(),
                ));
            }
            Ok(f.iter().map(|&c| c * tangent).collect())
        };

        let mut k0 = eval(&mut field, s, &y)?;
        while s < seg_len {
            h = h.min(seg_len - s);
            if h < 1e-13 * seg_len.max(1.0) {
                return Err(NumericError::StepUnderflow {
                    s: s_total + s,
                    last_z: a + tangent * s,
                    last_y: y.clone(),
                });
            }
            let mut k = vec![k0.clone()];
            for stage in 0..6 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    let c = A[stage][j] * h;
                    for i in 0..dim {
                        ys[i] += kj[i] * c;
                    }
                }
                k.push(eval(&mut field, s + C[stage] * h, &ys)?);
            }
            let mut y5 = y.clone();
            let mut err = 0.0_f64;
            for i in 0..dim {
                let mut dy5 = Complex64::new(0.0, 0.0);
                let mut dy4 = Complex64::new(0.0, 0.0);
                for j in 0..7 {
                    dy5 += k[j][i] * B5[j];
                    dy4 += k[j][i] * B4[j];
                }
                y5[i] += dy5 * h;
                let e = (dy5 - dy4).norm() * h;
                err = err.max(e / (1.0 + y5[i].norm()));
            }
            if err <= tol {
                s += h;
                y = y5;
                k0 = k[6].clone(); // FSAL
                traj.points.push(TrajectoryPoint {
                    s: s_total + s,
                    z: a + tangent * s,
                    y: y.clone(),
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        }
        s_total += seg_len;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_growth_reaches_e() {
        let path = PathSpec::line(c(0.0, 0.0), c(1.0, 0.0));
        let traj = integrate_path(
            |_z, y| Ok(vec![y[0]]),
            &path,
            &[c(1.0, 0.0)],
            1e-10,
        )
        .unwrap();
        let e = std::f64::consts::E;
        assert!((traj.last().y[0] - c(e, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_field_is_constant() {
        let path = PathSpec::line(c(0.0, 0.0), c(2.0, 1.0));
        let traj = integrate_path(
            |_z, _y| Ok(vec![Complex64::new(0.0, 0.0); 2]),
            &path,
            &[c(3.0, -1.0), c(0.5, 0.5)],
            1e-12,
        )
        .unwrap();
        assert_eq!(traj.last().y, vec![c(3.0, -1.0), c(0.5, 0.5)]);
    }

    #[test]
    fn tightening_tol_reduces_error() {
        let e = std::f64::consts::E;
        let path = PathSpec::line(c(0.0, 0.0), c(1.0, 0.0));
        let mut errs = Vec::new();
        for tol in [1e-6, 1e-8, 1e-10] {
            let traj =
                integrate_path(|_z, y| Ok(vec![y[0]]), &path, &[c(1.0, 0.0)], tol).unwrap();
            errs.push((traj.last().y[0] - c(e, 0.0)).norm());
        }
        assert!(errs[1] < errs[0]);
        assert!(errs[2] < errs[1]);
        // local tolerance controls global error up to a modest constant
        assert!(errs[2] < 50.0 * 1e-10);
    }

    #[test]
    fn contour_integration_of_one_over_z() {
        // y' = 1/z around the unit square loop: picks up 2 pi i.
        let path = PathSpec::new(vec![
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(0.0, -1.0),
            c(1.0, 0.0),
        ])
        .unwrap();
        let traj = integrate_path(
            |z, _y| Ok(vec![1.0 / z]),
            &path,
            &[c(0.0, 0.0)],
            1e-11,
        )
        .unwrap();
        let expected = c(0.0, 2.0 * std::f64::consts::PI);
        assert!((traj.last().y[0] - expected).norm() < 1e-9);
    }

    #[test]
    fn singular_field_underflows_cleanly() {
        // y' = 1 / (z - 1/2)^2 integrated across the double pole must fail
        // with a step underflow rather than produce garbage.
        let path = PathSpec::line(c(0.0, 0.0), c(1.0, 0.0));
        let r = integrate_path(
            |z, _y| {
                let d = z - c(0.5, 0.0);
                if d.norm() == 0.0 {
                    return Err(NumericError::FieldFailure("pole".to_string()));
                }
                Ok(vec![1.0 / (d * d)])
            },
            &path,
            &[c(1.0, 0.0)],
            1e-8,
        );
        match r {
            Err(NumericError::StepUnderflow { s, .. }) => assert!((s - 0.5).abs() < 0.05),
            Err(NumericError::FieldFailure(_)) => {}
            other => panic!("expected failure near the pole, got {other:?}"),
        }
    }
}
