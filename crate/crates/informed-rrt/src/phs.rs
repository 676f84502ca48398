//! Prolate hyperspheroid geometry and direct uniform sampling.
//!
//! The set of states that can improve a path-length solution of cost `c`
//! between `x_a` and `x_b` is the prolate hyperspheroid (PHS) with foci
//! `x_a`, `x_b`, transverse diameter `c` and conjugate diameters
//! `sqrt(c^2 - c_min^2)`, where `c_min = ||x_b - x_a||`. This module
//! provides its Lebesgue measure in closed form and a direct uniform
//! sampler: a uniform draw from the unit n-ball, stretched by the
//! spheroid radii, rotated into world frame and translated to the
//! spheroid centre.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::{check_dim, check_finite, State, DEGENERACY_FLOOR};

/// Lebesgue measure of the unit ball in R^n: pi^(n/2) / gamma(n/2 + 1).
pub fn unit_ball_measure(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be at least 1");
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

/// Lebesgue measure of a prolate hyperspheroid with foci distance
/// `c_min` and transverse diameter `c` in R^n.
///
/// Equals `c * (c^2 - c_min^2)^((n-1)/2) * unit_ball_measure(n) / 2^n`.
/// Returns `+inf` when `c` is `+inf` and `0` when `c == c_min`.
pub fn phs_measure(c_min: f64, c: f64, n: usize) -> Result<f64> {
    assert!(n >= 1, "dimension must be at least 1");
    if !c_min.is_finite() || c_min < 0.0 {
        return Err(Error::NonFinite(format!("foci distance {c_min}")));
    }
    if c.is_nan() || c < c_min {
        return Err(Error::InfeasibleCost { c, c_min });
    }
    if c.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let transverse_radius = c / 2.0;
    let conjugate_radius = (c * c - c_min * c_min).max(0.0).sqrt() / 2.0;
    Ok(transverse_radius * conjugate_radius.powi(n as i32 - 1) * unit_ball_measure(n))
}

/// Draws a uniform sample from the closed unit ball in R^n: an isotropic
/// Gaussian direction scaled by u^(1/n) for u ~ U[0,1).
pub fn sample_unit_ball(n: usize, rng: &mut RngStream) -> State {
    assert!(n >= 1, "dimension must be at least 1");
    let mut dir = DVector::zeros(n);
    loop {
        for i in 0..n {
            dir[i] = rng.sample(StandardNormal);
        }
        let norm = dir.norm();
        if norm > 0.0 {
            dir /= norm;
            break;
        }
    }
    let u: f64 = rng.random();
    dir * u.powf(1.0 / n as f64)
}

/// Rotation taking the first standard basis vector onto the unit axis
/// `a1`, built from the SVD of the outer product `a1 * e1^T` with the
/// smallest singular direction sign-corrected so the determinant is +1.
///
/// For `n >= 2` the returned matrix `C` satisfies `C * e1 == a1` and
/// `C in SO(n)`.
pub fn rotation_to_world(a1: &State) -> Result<DMatrix<f64>> {
    let n = a1.len();
    assert!(n >= 1, "dimension must be at least 1");
    check_finite(a1, "rotation axis")?;
    let norm = a1.norm();
    if norm == 0.0 {
        return Err(Error::ZeroLengthAxis);
    }
    if n == 1 {
        return Ok(DMatrix::identity(1, 1));
    }
    let unit = a1 / norm;
    let mut outer = DMatrix::zeros(n, n);
    outer.column_mut(0).copy_from(&unit);
    let svd = outer.svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    let sign = u.determinant() * v_t.determinant();
    let mut lambda = DVector::from_element(n, 1.0);
    lambda[n - 1] = sign;
    Ok(&u * DMatrix::from_diagonal(&lambda) * v_t)
}

/// A prolate hyperspheroid: foci, transverse diameter, and the cached
/// rotation and centre used by the direct sampler.
///
/// The rotation and centre depend only on the foci, so updating the
/// transverse diameter with [`set_transverse_diameter`] recomputes the
/// radii alone.
///
/// [`set_transverse_diameter`]: ProlateHyperspheroid::set_transverse_diameter
#[derive(Debug, Clone)]
pub struct ProlateHyperspheroid {
    focus_a: State,
    focus_b: State,
    c_min: f64,
    transverse: f64,
    centre: State,
    rotation: DMatrix<f64>,
    radii: DVector<f64>,
}

impl ProlateHyperspheroid {
    /// Builds the spheroid with foci `focus_a`, `focus_b` and transverse
    /// diameter `transverse`.
    ///
    /// Requires distinct foci and a finite `transverse` exceeding the
    /// foci distance by at least a relative `1e-12`; anything closer is
    /// numerically degenerate and rejected.
    pub fn new(focus_a: State, focus_b: State, transverse: f64) -> Result<Self> {
        check_dim(focus_a.len(), focus_b.len())?;
        check_finite(&focus_a, "focus")?;
        check_finite(&focus_b, "focus")?;
        let axis = &focus_b - &focus_a;
        let c_min = axis.norm();
        if c_min == 0.0 {
            return Err(Error::ZeroLengthAxis);
        }
        if !transverse.is_finite() || transverse < c_min {
            return Err(Error::InfeasibleCost {
                c: transverse,
                c_min,
            });
        }
        if transverse - c_min < DEGENERACY_FLOOR * c_min {
            return Err(Error::DegenerateSpheroid {
                c: transverse,
                c_min,
            });
        }
        let centre = (&focus_a + &focus_b) / 2.0;
        let rotation = rotation_to_world(&axis)?;
        let radii = Self::radii_for(c_min, transverse, focus_a.len());
        Ok(ProlateHyperspheroid {
            focus_a,
            focus_b,
            c_min,
            transverse,
            centre,
            rotation,
            radii,
        })
    }

    fn radii_for(c_min: f64, c: f64, n: usize) -> DVector<f64> {
        let conjugate = (c * c - c_min * c_min).max(0.0).sqrt() / 2.0;
        let mut radii = DVector::from_element(n, conjugate);
        radii[0] = c / 2.0;
        radii
    }

    /// Shrinks or grows the spheroid to a new transverse diameter,
    /// keeping the cached rotation and centre.
    pub fn set_transverse_diameter(&mut self, transverse: f64) -> Result<()> {
        if !transverse.is_finite() || transverse < self.c_min {
            return Err(Error::InfeasibleCost {
                c: transverse,
                c_min: self.c_min,
            });
        }
        if transverse - self.c_min < DEGENERACY_FLOOR * self.c_min {
            return Err(Error::DegenerateSpheroid {
                c: transverse,
                c_min: self.c_min,
            });
        }
        self.transverse = transverse;
        self.radii = Self::radii_for(self.c_min, transverse, self.dimension());
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.focus_a.len()
    }

    pub fn focus_a(&self) -> &State {
        &self.focus_a
    }

    pub fn focus_b(&self) -> &State {
        &self.focus_b
    }

    /// Distance between the foci.
    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn transverse_diameter(&self) -> f64 {
        self.transverse
    }

    pub fn centre(&self) -> &State {
        &self.centre
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    /// Semi-axis lengths in the spheroid frame: transverse radius first,
    /// then the `n - 1` equal conjugate radii.
    pub fn radii(&self) -> &DVector<f64> {
        &self.radii
    }

    pub fn measure(&self) -> f64 {
        phs_measure(self.c_min, self.transverse, self.dimension())
            .expect("valid by construction")
    }

    /// Sum of distances from `x` to the two foci.
    pub fn focal_sum(&self, x: &State) -> f64 {
        assert_eq!(x.len(), self.dimension(), "state dimension mismatch");
        (x - &self.focus_a).norm() + (x - &self.focus_b).norm()
    }

    /// Whether `x` lies strictly inside the spheroid.
    pub fn contains(&self, x: &State) -> bool {
        self.focal_sum(x) < self.transverse
    }

    /// Draws a uniform sample from the spheroid.
    pub fn sample(&self, rng: &mut RngStream) -> State {
        sample_phs(self, rng)
    }
}

/// Draws a uniform sample from `phs`: unit-ball draw, stretched by the
/// spheroid radii, rotated to world frame, translated to the centre.
pub fn sample_phs(phs: &ProlateHyperspheroid, rng: &mut RngStream) -> State {
    let ball = sample_unit_ball(phs.dimension(), rng);
    let stretched = phs.radii.component_mul(&ball);
    let x = phs.rotation() * stretched + phs.centre();
    debug_assert!(phs.focal_sum(&x) <= phs.transverse * (1.0 + 1e-9));
    x
}
