//! Torsion, curvature, the four coframe/connection conditions, the
//! closedness equivalences, and covariant constancy of the dilation
//! endomorphism — all as numeric residuals at a point.

use num_complex::Complex64;

use crate::exact::{rational_to_f64, Rational};

use super::{
    cross, finite3, max_abs, partial3, partials3, CanonicalCoframe, ConnectionForm,
    EgoroffConnection, GeometryError, Point, PointFrame, TripleField,
};

/// Outer finite-difference steps of nested derivatives are scaled up by this
/// factor to keep the amplified rounding noise of the inner stencil below
/// the truncation budget.
const OUTER_SCALE: f64 = 10.0;

fn unit(i: usize) -> [Complex64; 3] {
    let mut e = [Complex64::new(0.0, 0.0); 3];
    e[i] = Complex64::new(1.0, 0.0);
    e
}

fn scale3(v: &[Complex64; 3], s: Complex64) -> [Complex64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn sub3(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add3(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Coefficient columns of a connection matrix: `column(om, k)[i] = i_{d_k}
/// Omega_i`.
fn omega_column(om: &[[Complex64; 3]; 3], k: usize) -> [Complex64; 3] {
    [om[0][k], om[1][k], om[2][k]]
}

fn omega_partials(
    conn: &dyn ConnectionForm,
    p: &Point,
    h: f64,
) -> Result<[[[Complex64; 3]; 3]; 3], GeometryError> {
    let mut out = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
    for k in 0..3 {
        let eval = |delta: f64| -> Result<[[Complex64; 3]; 3], GeometryError> {
            let mut q = *p;
            q[k] += delta;
            conn.omega_at(&q)
        };
        let fp = eval(h)?;
        let fm = eval(-h)?;
        let fp2 = eval(h / 2.0)?;
        let fm2 = eval(-h / 2.0)?;
        for i in 0..3 {
            for c in 0..3 {
                let d1 = (fp[i][c] - fm[i][c]) / (2.0 * h);
                let d2 = (fp2[i][c] - fm2[i][c]) / h;
                out[k][i][c] = (4.0 * d2 - d1) / 3.0;
            }
        }
    }
    Ok(out)
}

/// Exterior derivative of a 1-form field given its coefficient partials:
/// `d alpha` in the cyclic 2-form basis, where `dcoef[k][c] = d_k alpha_c`.
fn curl(dcoef: &dyn Fn(usize, usize) -> Complex64) -> [Complex64; 3] {
    [
        dcoef(1, 2) - dcoef(2, 1),
        dcoef(2, 0) - dcoef(0, 2),
        dcoef(0, 1) - dcoef(1, 0),
    ]
}

/// Components of the torsion two-forms `d theta_i - (Omega x theta)_i` in
/// the cyclic basis; returns the maximal coefficient magnitude per
/// component.
pub fn torsion_residual(
    coframe: &CanonicalCoframe,
    conn: &dyn ConnectionForm,
    p: &Point,
    h: f64,
) -> Result<[f64; 3], GeometryError> {
    EgoroffConnection::check_separation(p)?;
    let hv = coframe.h_at(p)?;
    let dh = partials3(coframe.field(), p, h)?;
    let om = conn.omega_at(p)?;
    let mut out = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        // d theta_i = dh_i ^ dx_i
        let dh_i = [dh[0][i], dh[1][i], dh[2][i]];
        let dtheta = cross(&dh_i, &unit(i));
        // (Omega x theta)_i = Omega_j ^ theta_k - Omega_k ^ theta_j
        let wedge = sub3(
            &cross(&om[j], &scale3(&unit(k), hv[k])),
            &cross(&om[k], &scale3(&unit(j), hv[j])),
        );
        out[i] = max_abs(&sub3(&dtheta, &wedge));
    }
    Ok(out)
}

/// Components of the curvature two-forms `d Omega_i - (1/2)(Omega x
/// Omega)_i = d Omega_i - Omega_j ^ Omega_k`; maximal coefficient magnitude
/// per component.
pub fn curvature_form(
    conn: &dyn ConnectionForm,
    p: &Point,
    h: f64,
) -> Result<[f64; 3], GeometryError> {
    EgoroffConnection::check_separation(p)?;
    let om = conn.omega_at(p)?;
    let dom = omega_partials(conn, p, h)?;
    let mut out = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let domega = curl(&|kk, cc| dom[kk][i][cc]);
        let wedge = cross(&om[j], &om[k]);
        out[i] = max_abs(&sub3(&domega, &wedge));
    }
    Ok(out)
}

/// Residuals of the four coframe/connection conditions at a point.
#[derive(Debug, Clone, Copy)]
pub struct ConditionsReport {
    /// Numeric interior product `i_I Omega` (zero for the special shape).
    pub c1: f64,
    /// `d F - Omega x F`.
    pub c2: f64,
    /// `d H - Omega x H`.
    pub c3: f64,
    /// `F x H - (m/2) H`.
    pub c4: f64,
}

impl ConditionsReport {
    pub fn max(&self) -> f64 {
        self.c1.max(self.c2).max(self.c3).max(self.c4)
    }
}

/// Check the four conditions for a coframe/connection pair at homogeneity
/// `m`.
pub fn check_conditions(
    coframe: &CanonicalCoframe,
    conn: &EgoroffConnection,
    m: &Rational,
    p: &Point,
    h: f64,
) -> Result<ConditionsReport, GeometryError> {
    let pf = PointFrame::compute(coframe, conn, p, h)?;
    let c1 = max_abs(&conn.i_identity(p)?);
    let c2 = one_form_vector_residual(&pf.df, &pf.omega, &pf.f);
    let c3 = one_form_vector_residual(&pf.dh, &pf.omega, &pf.h);
    let half_m = 0.5 * rational_to_f64(m);
    let c4 = max_abs(&sub3(
        &cross(&pf.f, &pf.h),
        &scale3(&pf.h, Complex64::new(half_m, 0.0)),
    ));
    Ok(ConditionsReport { c1, c2, c3, c4 })
}

/// Max coefficient magnitude of the vector-valued 1-form `d V - Omega x V`
/// given the partials `dv[k][i] = d_k v_i`.
fn one_form_vector_residual(
    dv: &[[Complex64; 3]; 3],
    om: &[[Complex64; 3]; 3],
    v: &[Complex64; 3],
) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        // (Omega x V)_i = Omega_j v_k - Omega_k v_j, a 1-form
        let wedge = sub3(&scale3(&om[j], v[k]), &scale3(&om[k], v[j]));
        let dv_i = [dv[0][i], dv[1][i], dv[2][i]];
        worst = worst.max(max_abs(&sub3(&dv_i, &wedge)));
    }
    worst
}

/// Residuals of the three equivalent formulations of the special-shape
/// condition for the Levi-Civita connection of a canonical coframe.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// Closedness of `g11 dx1 + g22 dx2 + g33 dx3`.
    pub c1a: f64,
    /// `(d H - Omega x H) . theta`.
    pub c1b: f64,
    /// `i_I Omega`.
    pub c1c: f64,
}

impl EquivalenceReport {
    pub fn max(&self) -> f64 {
        self.c1a.max(self.c1b).max(self.c1c)
    }

    /// Whether all three formulations agree in their verdict at `tol`.
    pub fn agree(&self, tol: f64) -> bool {
        let a = self.c1a < tol;
        let b = self.c1b < tol;
        let c = self.c1c < tol;
        a == b && b == c
    }
}

/// Evaluate the three equivalent conditions at a point.
pub fn lemma_a3_suite(
    coframe: &CanonicalCoframe,
    conn: &dyn ConnectionForm,
    p: &Point,
    h: f64,
) -> Result<EquivalenceReport, GeometryError> {
    EgoroffConnection::check_separation(p)?;
    let hv = coframe.h_at(p)?;
    let dh = partials3(coframe.field(), p, h)?;
    let om = conn.omega_at(p)?;

    // (a) d of the metric 1-form sum h_i^2 dx_i
    let metric = coframe.metric_field();
    let dg = partials3(&metric, p, h)?;
    let c1a = max_abs(&curl(&|k, c| dg[k][c]));

    // (b) sum_i (dh_i - (Omega x H)_i) ^ theta_i
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let wedge = sub3(&scale3(&om[j], hv[k]), &scale3(&om[k], hv[j]));
        let alpha = sub3(&[dh[0][i], dh[1][i], dh[2][i]], &wedge);
        acc = add3(&acc, &cross(&alpha, &scale3(&unit(i), hv[i])));
    }
    let c1b = max_abs(&acc);

    let c1c = max_abs(&conn.i_identity(p)?);
    Ok(EquivalenceReport { c1a, c1b, c1c })
}

/// Frame components of a vector field against a coframe: `v_i h_i`.
fn frame_components(
    field: &TripleField,
    coframe: &CanonicalCoframe,
    p: &Point,
) -> Result<[Complex64; 3], GeometryError> {
    let v = finite3(field(p))?;
    let h = coframe.h_at(p)?;
    Ok([v[0] * h[0], v[1] * h[1], v[2] * h[2]])
}

/// Covariant derivative endomorphism `A = nabla E` of a vector field in the
/// orthonormal frame: `A[.][j] = (d_j Ehat - Omega(d_j) x Ehat) / h_j`.
fn nabla_endomorphism(
    coframe: &CanonicalCoframe,
    conn: &dyn ConnectionForm,
    e_field: &TripleField,
    p: &Point,
    h: f64,
) -> Result<[[Complex64; 3]; 3], GeometryError> {
    let hv = coframe.h_at(p)?;
    let om = conn.omega_at(p)?;
    let ehat = frame_components(e_field, coframe, p)?;
    // partials of the frame components of E
    let mut de = [[Complex64::new(0.0, 0.0); 3]; 3];
    for k in 0..3 {
        let cof = coframe.clone();
        let ef = e_field.clone();
        let composite: TripleField = std::sync::Arc::new(move |q: &Point| {
            let v = ef(q);
            let hh = (cof.field())(q);
            [v[0] * hh[0], v[1] * hh[1], v[2] * hh[2]]
        });
        de[k] = partial3(&composite, p, k, h)?;
    }
    let mut a = [[Complex64::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let col = scale3(
            &sub3(&de[j], &cross(&omega_column(&om, j), &ehat)),
            1.0 / hv[j],
        );
        for i in 0..3 {
            a[i][j] = col[i];
        }
    }
    Ok(a)
}

fn mat_vec(a: &[[Complex64; 3]; 3], v: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    }
    out
}

/// Covariant constancy of the endomorphism `nabla E`: the maximum over
/// frame directions `Z, Y` of `|nabla_Z nabla_Y E - nabla_{nabla_Z Y} E|`.
/// The inner endomorphism uses step `h`, the outer derivative a scaled-up
/// step.
pub fn covariant_endomorphism_check(
    coframe: &CanonicalCoframe,
    conn: &dyn ConnectionForm,
    e_field: &TripleField,
    p: &Point,
    h: f64,
) -> Result<f64, GeometryError> {
    EgoroffConnection::check_separation(p)?;
    let hv = coframe.h_at(p)?;
    let om = conn.omega_at(p)?;
    let a0 = nabla_endomorphism(coframe, conn, e_field, p, h)?;

    let hout = OUTER_SCALE * h;
    let mut worst = 0.0_f64;
    for z in 0..3 {
        // Richardson outer derivative of the endomorphism along x_z
        let eval = |delta: f64| -> Result<[[Complex64; 3]; 3], GeometryError> {
            let mut q = *p;
            q[z] += delta;
            nabla_endomorphism(coframe, conn, e_field, &q, h)
        };
        let fp = eval(hout)?;
        let fm = eval(-hout)?;
        let fp2 = eval(hout / 2.0)?;
        let fm2 = eval(-hout / 2.0)?;
        let mut da = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let d1 = (fp[i][j] - fm[i][j]) / (2.0 * hout);
                let d2 = (fp2[i][j] - fm2[i][j]) / hout;
                da[i][j] = (4.0 * d2 - d1) / 3.0;
            }
        }
        let om_z = omega_column(&om, z);
        for j in 0..3 {
            let a_col = [a0[0][j], a0[1][j], a0[2][j]];
            let da_col = [da[0][j], da[1][j], da[2][j]];
            // nabla_{e_z}(A e_j) with e_j a fixed frame vector
            let nz = scale3(&sub3(&da_col, &cross(&om_z, &a_col)), 1.0 / hv[z]);
            // A(nabla_{e_z} e_j) correction with nabla_Z e_j = -(i_Z Omega) x e_j
            let corr = mat_vec(&a0, &scale3(&cross(&om_z, &unit(j)), 1.0 / hv[z]));
            worst = worst.max(max_abs(&add3(&nz, &corr)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn generic_point() -> Point {
        [c(0.1, -0.3), c(1.2, 0.4), c(-0.7, 0.9)]
    }

    fn euclidean() -> (CanonicalCoframe, EgoroffConnection) {
        let ones: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let zeros: TripleField = Arc::new(|_p: &Point| [c(0.0, 0.0); 3]);
        (CanonicalCoframe::new(ones), EgoroffConnection::new(zeros))
    }

    #[test]
    fn euclidean_torsion_and_curvature_vanish() {
        let (cof, conn) = euclidean();
        let p = generic_point();
        let t = torsion_residual(&cof, &conn, &p, 1e-4).unwrap();
        assert!(t.iter().all(|&v| v == 0.0));
        let r = curvature_form(&conn, &p, 1e-4).unwrap();
        assert!(r.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nonclosed_coframe_has_unit_torsion_component() {
        // H = (x2, 1, 1) with zero connection: d theta_1 = dx2 ^ dx1, so the
        // dx1 ^ dx2 coefficient is -1 and the first torsion magnitude is 1.
        let hfield: TripleField = Arc::new(|p: &Point| [p[1], c(1.0, 0.0), c(1.0, 0.0)]);
        let cof = CanonicalCoframe::new(hfield);
        let zeros: TripleField = Arc::new(|_p: &Point| [c(0.0, 0.0); 3]);
        let conn = EgoroffConnection::new(zeros);
        let p = generic_point();
        let t = torsion_residual(&cof, &conn, &p, 1e-4).unwrap();
        assert!((t[0] - 1.0).abs() < 1e-9, "{t:?}");
        assert!(t[1] < 1e-10 && t[2] < 1e-10);
    }

    #[test]
    fn constant_connection_coefficients_have_curvature() {
        // F = (1,1,1) in the special shape is not flat: the wedge terms
        // survive even though each dOmega_i has some cancellation.
        let ones: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0); 3]);
        let conn = EgoroffConnection::new(ones);
        let p = generic_point();
        let r = curvature_form(&conn, &p, 1e-4).unwrap();
        assert!(r.iter().any(|&v| v > 1e-2), "{r:?}");
    }

    #[test]
    fn parallel_f_and_h_with_nonzero_m_fails_c4() {
        let ones: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0); 3]);
        let cof = CanonicalCoframe::new(ones.clone());
        let conn = EgoroffConnection::new(ones);
        let p = generic_point();
        let rep = check_conditions(&cof, &conn, &crate::exact::rat_int(1), &p, 1e-4).unwrap();
        // F x H = 0 but (m/2) H = H/2
        assert!((rep.c4 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn euclidean_radial_endomorphism_is_covariantly_constant() {
        let (cof, conn) = euclidean();
        let e: TripleField = Arc::new(|p: &Point| *p);
        let p = generic_point();
        let r = covariant_endomorphism_check(&cof, &conn, &e, &p, 1e-4).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn injected_non_special_connection_fails_c1c() {
        // Omega_1 gains a dx1 component; the other two rows keep the shape.
        let om = Arc::new(|p: &Point| {
            let zero = c(0.0, 0.0);
            let c1 = 1.0 / (p[1] - p[2]);
            let c2 = 1.0 / (p[2] - p[0]);
            let c3 = 1.0 / (p[0] - p[1]);
            [
                [c(1.0, 0.0), c1, -c1],
                [-c2, zero, c2],
                [c3, -c3, zero],
            ]
        });
        let conn = super::super::GeneralConnection { omega: om };
        let ones: TripleField = Arc::new(|_p: &Point| [c(1.0, 0.0); 3]);
        let cof = CanonicalCoframe::new(ones);
        let p = generic_point();
        let rep = lemma_a3_suite(&cof, &conn, &p, 1e-4).unwrap();
        assert!((rep.c1c - 1.0).abs() < 1e-12, "{:?}", rep);
    }
}
