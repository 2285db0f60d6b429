//! Three-dimensional moving-frame calculus with cross-product connection
//! forms, evaluated numerically at complex points.
//!
//! Conventions: 1-forms are coefficient triples in the basis
//! `(dx1, dx2, dx3)`; 2-forms are coefficient triples in the cyclic basis
//! `(dx2^dx3, dx3^dx1, dx1^dx2)`, so the wedge of two 1-forms is the
//! ordinary cross product of their coefficient vectors. The cross product of
//! vector-valued forms is taken componentwise with the wedge as the scalar
//! multiplication: `(a x b)_i = a_j ^ b_k - a_k ^ b_j`, indices cyclic.

pub mod conditions;
pub mod metric;
pub mod sample;

pub use conditions::{
    check_conditions, covariant_endomorphism_check, curvature_form, lemma_a3_suite,
    torsion_residual, ConditionsReport, EquivalenceReport,
};
pub use metric::{christoffel, lie_derivative_metric, riemann_tensor};
pub use sample::{SampleConfig, SamplePoint};

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::numeric::NumericError;

/// A point of C^3 in canonical coordinates.
pub type Point = [Complex64; 3];

/// An evaluator for a triple of scalar functions on C^3 (coframe
/// coefficients, connection coefficients, diagonal metric entries, vector
/// fields). Evaluators are immutable and shareable across threads; failures
/// inside an evaluator surface as non-finite components, which every
/// consumer here rejects with an error.
pub type TripleField = Arc<dyn Fn(&Point) -> [Complex64; 3] + Send + Sync>;

#[derive(Debug, Error, Clone)]
pub enum GeometryError {
    #[error("coordinates coincide at the evaluation point")]
    CoincidentCoordinates,
    #[error("metric is singular at a stencil point")]
    SingularMetric,
    #[error("coframe coefficient vanishes at a stencil point")]
    ZeroCoframe,
    #[error("field evaluation produced a non-finite value")]
    NonFinite,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

pub(crate) fn finite3(v: [Complex64; 3]) -> Result<[Complex64; 3], GeometryError> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(GeometryError::NonFinite)
    }
}

/// Componentwise cross product of two complex 3-vectors.
pub fn cross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn max_abs(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A canonical coframe `theta_i = h_i dx_i`, stored through its coefficient
/// triple `H = (h1, h2, h3)`.
#[derive(Clone)]
pub struct CanonicalCoframe {
    h: TripleField,
}

impl CanonicalCoframe {
    pub fn new(h: TripleField) -> Self {
        CanonicalCoframe { h }
    }

    /// Coefficients at a point; all must be finite and nonzero.
    pub fn h_at(&self, p: &Point) -> Result<[Complex64; 3], GeometryError> {
        let v = finite3((self.h)(p))?;
        if v.iter().any(|c| c.norm() == 0.0) {
            return Err(GeometryError::ZeroCoframe);
        }
        Ok(v)
    }

    pub fn field(&self) -> &TripleField {
        &self.h
    }

    /// The diagonal metric `g_ii = h_i^2` as an evaluator.
    pub fn metric_field(&self) -> TripleField {
        let h = self.h.clone();
        Arc::new(move |p| {
            let v = h(p);
            [v[0] * v[0], v[1] * v[1], v[2] * v[2]]
        })
    }
}

/// A connection form triple, presented through its coefficient matrix at a
/// point: row `i` holds the `(dx1, dx2, dx3)` coefficients of `Omega_i`.
pub trait ConnectionForm: Send + Sync {
    fn omega_at(&self, p: &Point) -> Result<[[Complex64; 3]; 3], GeometryError>;

    /// Interior product with the translation field `(1, 1, 1)`: the
    /// coefficient sums of each `Omega_i`.
    fn i_identity(&self, p: &Point) -> Result<[Complex64; 3], GeometryError> {
        let om = self.omega_at(p)?;
        Ok([
            om[0][0] + om[0][1] + om[0][2],
            om[1][0] + om[1][1] + om[1][2],
            om[2][0] + om[2][1] + om[2][2],
        ])
    }

    /// Interior product with the dilation field `(x1, x2, x3)`.
    fn i_euler(&self, p: &Point) -> Result<[Complex64; 3], GeometryError> {
        let om = self.omega_at(p)?;
        Ok([
            dot(&om[0], p),
            dot(&om[1], p),
            dot(&om[2], p),
        ])
    }
}

/// The special connection shape reconstructible from a coefficient triple
/// `F`: `Omega_1 = f1 (x2 - x3)^{-1} (dx2 - dx3)` and cyclic images.
#[derive(Clone)]
pub struct EgoroffConnection {
    f: TripleField,
}

impl EgoroffConnection {
    pub fn new(f: TripleField) -> Self {
        EgoroffConnection { f }
    }

    pub fn f_at(&self, p: &Point) -> Result<[Complex64; 3], GeometryError> {
        finite3((self.f)(p))
    }

    pub fn field(&self) -> &TripleField {
        &self.f
    }

    pub(crate) fn check_separation(p: &Point) -> Result<(), GeometryError> {
        let scale = 1.0 + p.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            if (p[i] - p[j]).norm() < 1e-9 * scale {
                return Err(GeometryError::CoincidentCoordinates);
            }
        }
        Ok(())
    }
}

impl ConnectionForm for EgoroffConnection {
    fn omega_at(&self, p: &Point) -> Result<[[Complex64; 3]; 3], GeometryError> {
        Self::check_separation(p)?;
        let f = self.f_at(p)?;
        let zero = Complex64::new(0.0, 0.0);
        let c1 = f[0] / (p[1] - p[2]);
        let c2 = f[1] / (p[2] - p[0]);
        let c3 = f[2] / (p[0] - p[1]);
        Ok([
            [zero, c1, -c1],
            [-c2, zero, c2],
            [c3, -c3, zero],
        ])
    }
}

/// An arbitrary connection form given by a coefficient-matrix evaluator;
/// used to exercise the equivalence checks on connections that are not of
/// the special shape.
pub struct GeneralConnection {
    pub omega: Arc<dyn Fn(&Point) -> [[Complex64; 3]; 3] + Send + Sync>,
}

impl ConnectionForm for GeneralConnection {
    fn omega_at(&self, p: &Point) -> Result<[[Complex64; 3]; 3], GeometryError> {
        let om = (self.omega)(p);
        for row in &om {
            finite3(*row)?;
        }
        Ok(om)
    }
}

/// Snapshot of coframe and connection data at one point: values and first
/// partials of the coefficient triples, assembled once and reused by the
/// condition checks.
pub struct PointFrame {
    pub point: Point,
    pub h: [Complex64; 3],
    pub f: [Complex64; 3],
    /// `dh[k][i] = d h_i / d x_k`.
    pub dh: [[Complex64; 3]; 3],
    pub df: [[Complex64; 3]; 3],
    pub omega: [[Complex64; 3]; 3],
}

impl PointFrame {
    pub fn compute(
        coframe: &CanonicalCoframe,
        conn: &EgoroffConnection,
        p: &Point,
        h_step: f64,
    ) -> Result<Self, GeometryError> {
        EgoroffConnection::check_separation(p)?;
        let h = coframe.h_at(p)?;
        let f = conn.f_at(p)?;
        let dh = partials3(coframe.field(), p, h_step)?;
        let df = partials3(conn.field(), p, h_step)?;
        let omega = conn.omega_at(p)?;
        Ok(PointFrame {
            point: *p,
            h,
            f,
            dh,
            df,
            omega,
        })
    }
}

/// Richardson-extrapolated central partial derivatives of a triple field:
/// `out[k][i] = d field_i / d x_k`.
pub(crate) fn partials3(
    field: &TripleField,
    p: &Point,
    h: f64,
) -> Result<[[Complex64; 3]; 3], GeometryError> {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for k in 0..3 {
        out[k] = partial3(field, p, k, h)?;
    }
    Ok(out)
}

/// One Richardson-extrapolated central partial of a triple field along
/// coordinate `k`.
pub(crate) fn partial3(
    field: &TripleField,
    p: &Point,
    k: usize,
    h: f64,
) -> Result<[Complex64; 3], GeometryError> {
    let eval = |delta: f64| -> Result<[Complex64; 3], GeometryError> {
        let mut q = *p;
        q[k] += delta;
        finite3(field(&q))
    };
    let fp = eval(h)?;
    let fm = eval(-h)?;
    let fp2 = eval(h / 2.0)?;
    let fm2 = eval(-h / 2.0)?;
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        let d1 = (fp[i] - fm[i]) / (2.0 * h);
        let d2 = (fp2[i] - fm2[i]) / h;
        out[i] = (4.0 * d2 - d1) / 3.0;
    }
    Ok(out)
}
