//! Finite-difference curvature and Lie-derivative oracles for diagonal
//! metrics. These never see the exact `w`-derivatives, so they give an
//! independent check on anything built from the datasets.

use num_complex::Complex64;

use super::{finite3, GeometryError, Point, TripleField};

const OUTER_SCALE: f64 = 10.0;

fn metric_at(metric: &TripleField, p: &Point) -> Result<[Complex64; 3], GeometryError> {
    let g = finite3(metric(p))?;
    let scale = 1.0 + g.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if g.iter().any(|c| c.norm() < 1e-12 * scale) {
        return Err(GeometryError::SingularMetric);
    }
    Ok(g)
}

/// Christoffel symbols of a diagonal metric by Richardson central
/// differences: `out[i][j][k]` is the symbol with upper index `i`.
pub fn christoffel(
    metric: &TripleField,
    p: &Point,
    h: f64,
) -> Result<[[[Complex64; 3]; 3]; 3], GeometryError> {
    let g = metric_at(metric, p)?;
    let dg = super::partials3(metric, p, h)?; // dg[k][i] = d_k g_ii
    let mut gam = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = Complex64::new(0.0, 0.0);
                if i == j && i == k {
                    v = dg[i][i];
                } else {
                    if i == j {
                        v += dg[k][i];
                    }
                    if i == k {
                        v += dg[j][i];
                    }
                    if j == k && i != j {
                        v -= dg[i][j];
                    }
                }
                gam[i][j][k] = v / (2.0 * g[i]);
            }
        }
    }
    Ok(gam)
}

/// Maximal component magnitude of the curvature tensor, assembled from
/// numerically differentiated Christoffel symbols (outer derivative with a
/// scaled-up Richardson stencil).
pub fn riemann_tensor(metric: &TripleField, p: &Point, h: f64) -> Result<f64, GeometryError> {
    let gam = christoffel(metric, p, h)?;
    let hout = OUTER_SCALE * h;
    let mut dgam = [[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3];
    for kk in 0..3 {
        let eval = |delta: f64| -> Result<[[[Complex64; 3]; 3]; 3], GeometryError> {
            let mut q = *p;
            q[kk] += delta;
            christoffel(metric, &q, h)
        };
        let fp = eval(hout)?;
        let fm = eval(-hout)?;
        let fp2 = eval(hout / 2.0)?;
        let fm2 = eval(-hout / 2.0)?;
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let d1 = (fp[i][j][l] - fm[i][j][l]) / (2.0 * hout);
                    let d2 = (fp2[i][j][l] - fm2[i][j][l]) / hout;
                    dgam[kk][i][j][l] = (4.0 * d2 - d1) / 3.0;
                }
            }
        }
    }
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    // R^i_{jkl} = d_k Gam^i_{lj} - d_l Gam^i_{kj}
                    //           + Gam^i_{km} Gam^m_{lj} - Gam^i_{lm} Gam^m_{kj}
                    let mut v = dgam[k][i][l][j] - dgam[l][i][k][j];
                    for m in 0..3 {
                        v += gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j];
                    }
                    worst = worst.max(v.norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Lie derivative of a diagonal metric along a vector field, as a full
/// symmetric matrix:
/// `(L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k`.
pub fn lie_derivative_metric(
    v_field: &TripleField,
    metric: &TripleField,
    p: &Point,
    h: f64,
) -> Result<[[Complex64; 3]; 3], GeometryError> {
    let g = metric_at(metric, p)?;
    let v = finite3(v_field(p))?;
    let dg = super::partials3(metric, p, h)?; // dg[k][i] = d_k g_ii
    let dv = super::partials3(v_field, p, h)?; // dv[k][i] = d_k v^i
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            if i == j {
                for k in 0..3 {
                    acc += v[k] * dg[k][i];
                }
            }
            acc += g[j] * dv[i][j]; // g_kj d_i V^k collapses to k = j
            acc += g[i] * dv[j][i]; // g_ik d_j V^k collapses to k = i
            out[i][j] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn generic_point() -> Point {
        [c(0.3, 0.2), c(1.1, -0.4), c(-0.6, 0.7)]
    }

    #[test]
    fn euclidean_metric_is_exactly_flat() {
        let g: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0); 3]);
        let r = riemann_tensor(&g, &generic_point(), 1e-4).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn known_nonflat_metric() {
        // diag(1, 1, x1^2 + 1): the curvature component with upper index 1
        // and lower (3,1,3) equals -1/(x1^2+1) by a direct symbolic
        // Christoffel computation, so the max component is at least that.
        let g: TripleField = Arc::new(|p: &Point| {
            [c(1.0, 0.0), c(1.0, 0.0), p[0] * p[0] + 1.0]
        });
        let p = generic_point();
        let expected = (1.0 / (p[0] * p[0] + 1.0)).norm();
        let r = riemann_tensor(&g, &p, 1e-4).unwrap();
        assert!(r > 1e-2);
        assert!(r >= expected - 1e-6, "r = {r}, expected >= {expected}");
        // and for this metric the max component is exactly that value
        assert!((r - expected).abs() < 1e-6, "r = {r}, expected = {expected}");
    }

    #[test]
    fn singular_metric_is_rejected() {
        let g: TripleField = Arc::new(|_p: &Point| [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            riemann_tensor(&g, &generic_point(), 1e-4),
            Err(GeometryError::SingularMetric)
        ));
    }

    #[test]
    fn euclidean_radial_field_is_conformal() {
        let g: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0); 3]);
        let e: TripleField = Arc::new(|p: &Point| *p);
        let l = lie_derivative_metric(&e, &g, &generic_point(), 1e-4).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { c(2.0, 0.0) } else { c(0.0, 0.0) };
                assert!((l[i][j] - want).norm() < 1e-10);
            }
        }
    }
}
