//! Classical operating point of the two-crystal cavity.
//!
//! Fields are written over the fixed basis `(a1, b2*, a2, b1*)`: the two
//! polarizations of the `a` frequency and the conjugated polarizations of the
//! `b` frequency. In that basis the first crystal couples `a1` with `b2*`, the
//! second couples `a2` with `b1*`, and the rotated half-wave plate mixes `a1`
//! with `a2` and `b2*` with `b1*`.
//!
//! Two descriptions of one round trip are provided. [`round_trip_exact`]
//! multiplies the five element matrices built from physical constants, and
//! [`round_trip_reduced`] is the first-order form in the small quantities
//! (mirror loss, plate coupling, detunings, single-pass gain). The stationary
//! operating point, threshold and above-threshold field follow from the
//! reduced form.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// 4×4 complex transfer matrix over the basis `(a1, b2*, a2, b1*)`.
pub type ComplexMatrix4 = Matrix4<Complex64>;

/// Four complex field amplitudes over the basis `(a1, b2*, a2, b1*)`.
pub type FieldVector = Vector4<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Wraps a phase onto `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    if wrapped > PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Physical description of the cavity and its birefringent elements.
///
/// Wave vectors are in rad/m and lengths in metres; indices and the mirror
/// reflectivity are dimensionless. `nonlinear_gain` is the single-pass
/// parametric coupling per unit pump amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalConstants {
    pub wavevector_a: f64,
    pub wavevector_b: f64,
    pub wavevector_pump: f64,
    /// Mean index of both waveplates (no dispersion).
    pub plate_index: f64,
    pub pump_index: f64,
    /// Crystal index along the first neutral axis.
    pub index_1: f64,
    /// Crystal index along the second neutral axis.
    pub index_2: f64,
    pub plate_thickness: f64,
    pub crystal_length: f64,
    /// Free-propagation length, excluding the plates and crystals.
    pub cavity_length: f64,
    /// Rotation of the second plate's fast axis away from the second crystal's.
    pub plate_angle: f64,
    /// Amplitude reflectivity of the output coupler.
    pub reflectivity: f64,
    pub nonlinear_gain: f64,
}

impl OpticalConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.reflectivity > 0.0 && self.reflectivity <= 1.0) {
            return Err(Error::param(
                "reflectivity",
                format!("must lie in (0, 1], got {}", self.reflectivity),
            ));
        }
        let lengths = [
            ("plate_thickness", self.plate_thickness),
            ("crystal_length", self.crystal_length),
            ("cavity_length", self.cavity_length),
        ];
        for (name, value) in lengths {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {value}")));
            }
        }
        let wavevectors = [
            ("wavevector_a", self.wavevector_a),
            ("wavevector_b", self.wavevector_b),
            ("wavevector_pump", self.wavevector_pump),
        ];
        for (name, value) in wavevectors {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {value}")));
            }
        }
        let indices = [
            ("plate_index", self.plate_index),
            ("pump_index", self.pump_index),
            ("index_1", self.index_1),
            ("index_2", self.index_2),
        ];
        for (name, value) in indices {
            if !(value >= 1.0 && value.is_finite()) {
                return Err(Error::param(name, format!("must be at least 1, got {value}")));
            }
        }
        if !self.plate_angle.is_finite() || !self.nonlinear_gain.is_finite() {
            return Err(Error::param("plate_angle", "plate angle and gain must be finite"));
        }
        Ok(())
    }

    /// First-order plate coupling `sin 2ρ`.
    pub fn plate_coupling(&self) -> f64 {
        (2.0 * self.plate_angle).sin()
    }

    fn optical_length(&self) -> f64 {
        self.cavity_length
            + 2.0 * self.plate_index * self.plate_thickness
            + self.crystal_length * (self.index_1 + self.index_2)
    }

    /// Round-trip detunings of the `a` and `b` fields, wrapped onto `(-π, π]`.
    pub fn detunings(&self) -> (f64, f64) {
        let length = self.optical_length();
        (
            wrap_phase(self.wavevector_a * length),
            wrap_phase(self.wavevector_b * length),
        )
    }

    /// Phase mismatch between the two crystals, `(k_b n1 + k_a n2) l`, wrapped.
    pub fn crystal_phase(&self) -> f64 {
        wrap_phase(
            (self.wavevector_b * self.index_1 + self.wavevector_a * self.index_2)
                * self.crystal_length,
        )
    }

    /// The pump amplitude as it appears in the reduced round-trip matrix: the
    /// plates shift its phase by `-(k_a + k_b) n e`.
    pub fn effective_pump(&self, pump: Complex64) -> Complex64 {
        pump * cis(-(self.wavevector_a + self.wavevector_b) * self.plate_index * self.plate_thickness)
    }

    /// Dimensionless operating point seen by the reduced round-trip matrix.
    pub fn reduced(&self, sigma: f64) -> ReducedParams {
        let (detuning_a, detuning_b) = self.detunings();
        ReducedParams {
            kappa: 1.0 - self.reflectivity,
            gain: self.nonlinear_gain,
            plate_coupling: self.plate_coupling(),
            detuning_a,
            detuning_b,
            crystal_phase: self.crystal_phase(),
            sigma,
        }
    }
}

/// Dimensionless operating point driving every downstream computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    /// Mirror loss, `1 - r`.
    pub kappa: f64,
    /// Single-pass nonlinear coupling.
    pub gain: f64,
    /// Linear coupling introduced by the rotated plate, `sin 2ρ`.
    pub plate_coupling: f64,
    pub detuning_a: f64,
    pub detuning_b: f64,
    /// Phase mismatch between the two crystals.
    pub crystal_phase: f64,
    /// Input pump amplitude normalized to threshold.
    pub sigma: f64,
}

impl ReducedParams {
    /// Lowest-threshold working point: both detunings equal to the plate
    /// coupling and no phase mismatch between the crystals.
    pub fn working_point(kappa: f64, gain: f64, plate_coupling: f64, sigma: f64) -> Self {
        ReducedParams {
            kappa,
            gain,
            plate_coupling,
            detuning_a: plate_coupling,
            detuning_b: plate_coupling,
            crystal_phase: 0.0,
            sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::param(
                "kappa",
                format!("must lie in (0, 1), got {}", self.kappa),
            ));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::param(
                "sigma",
                format!("must be non-negative, got {}", self.sigma),
            ));
        }
        let rest = [
            ("gain", self.gain),
            ("plate_coupling", self.plate_coupling),
            ("detuning_a", self.detuning_a),
            ("detuning_b", self.detuning_b),
            ("crystal_phase", self.crystal_phase),
        ];
        for (name, value) in rest {
            if !value.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// Plate coupling normalized to the mirror loss, `c = ε₀/κ`.
    pub fn normalized_coupling(&self) -> f64 {
        self.plate_coupling / self.kappa
    }

    /// Pump intensity at the lowest threshold, `2κ²/g²`.
    pub fn threshold_intensity(&self) -> f64 {
        2.0 * self.kappa * self.kappa / (self.gain * self.gain)
    }

    /// Intracavity pump amplitude (real, zero phase) at threshold. Above
    /// threshold, depletion clamps the intracavity pump to this same value.
    pub fn pump_amplitude(&self) -> Complex64 {
        Complex64::new(self.threshold_intensity().sqrt(), 0.0)
    }

    fn is_working_point(&self) -> bool {
        const TOL: f64 = 1e-12;
        (self.detuning_a - self.plate_coupling).abs() <= TOL
            && (self.detuning_b - self.plate_coupling).abs() <= TOL
            && wrap_phase(self.crystal_phase).abs() <= TOL
    }
}

/// The five element matrices of one round trip, in propagation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrices {
    pub plate_1: ComplexMatrix4,
    pub crystal_alpha: ComplexMatrix4,
    pub crystal_beta: ComplexMatrix4,
    pub plate_2: ComplexMatrix4,
    pub propagation: ComplexMatrix4,
}

impl ElementMatrices {
    /// Ordered product `propagation · plate_2 · crystal_beta · crystal_alpha · plate_1`.
    pub fn round_trip(&self) -> ComplexMatrix4 {
        self.propagation * self.plate_2 * self.crystal_beta * self.crystal_alpha * self.plate_1
    }
}

/// Builds the element matrices for an intracavity pump amplitude `pump`.
///
/// Each crystal sees half the pump intensity (`a0/√2` along its axis). The
/// crystals are first order in the gain and the rotated plate first order in
/// its angle; everything else is exact.
pub fn element_matrices(constants: &OpticalConstants, pump: Complex64) -> Result<ElementMatrices> {
    constants.validate()?;
    let c = constants;

    let plate_a = cis(c.wavevector_a * c.plate_index * c.plate_thickness);
    let plate_b = cis(-c.wavevector_b * c.plate_index * c.plate_thickness);
    let zero = Complex64::new(0.0, 0.0);

    let plate_1 = Matrix4::from_diagonal(&Vector4::new(
        I * plate_a,
        I * plate_b,
        -I * plate_a,
        -I * plate_b,
    ));

    let a_1 = cis(c.wavevector_a * c.index_1 * c.crystal_length);
    let a_2 = cis(c.wavevector_a * c.index_2 * c.crystal_length);
    let b_1 = cis(-c.wavevector_b * c.index_1 * c.crystal_length);
    let b_2 = cis(-c.wavevector_b * c.index_2 * c.crystal_length);
    let half_pump = pump * FRAC_1_SQRT_2;
    let gain = c.nonlinear_gain * half_pump;
    let gain_conj = c.nonlinear_gain * half_pump.conj();

    #[rustfmt::skip]
    let crystal_alpha = Matrix4::new(
        a_1,             gain * a_1, zero, zero,
        gain_conj * b_2, b_2,        zero, zero,
        zero,            zero,       a_2,  zero,
        zero,            zero,       zero, b_1,
    );
    #[rustfmt::skip]
    let crystal_beta = Matrix4::new(
        a_2,  zero, zero,            zero,
        zero, b_1,  zero,            zero,
        zero, zero, a_1,             gain * a_1,
        zero, zero, gain_conj * b_2, b_2,
    );

    let eps = Complex64::new(c.plate_coupling(), 0.0);
    #[rustfmt::skip]
    let plate_2 = Matrix4::new(
        -I * plate_a,      zero,              I * eps * plate_a, zero,
        zero,              -I * plate_b,      zero,              -I * eps * plate_b,
        I * eps * plate_a, zero,              I * plate_a,       zero,
        zero,              -I * eps * plate_b, zero,             I * plate_b,
    );

    let free_a = cis(c.wavevector_a * c.cavity_length) * c.reflectivity;
    let free_b = cis(-c.wavevector_b * c.cavity_length) * c.reflectivity;
    let propagation = Matrix4::from_diagonal(&Vector4::new(free_a, free_b, free_a, free_b));

    Ok(ElementMatrices {
        plate_1,
        crystal_alpha,
        crystal_beta,
        plate_2,
        propagation,
    })
}

/// Round-trip matrix from the physical element matrices.
pub fn round_trip_exact(constants: &OpticalConstants, pump: Complex64) -> Result<ComplexMatrix4> {
    Ok(element_matrices(constants, pump)?.round_trip())
}

/// First-order round-trip matrix in `(κ, ε₀, δ_a, δ_b, g·a0)`.
pub fn round_trip_reduced(params: &ReducedParams, pump: Complex64) -> ComplexMatrix4 {
    let p = params;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let diag_a = one + I * p.detuning_a - p.kappa;
    let diag_b = one - I * p.detuning_b - p.kappa;
    let h = pump * (p.gain * FRAC_1_SQRT_2);
    let eps = Complex64::new(p.plate_coupling, 0.0);
    let twist = cis(-p.crystal_phase);

    #[rustfmt::skip]
    let m = Matrix4::new(
        diag_a,   h,        eps,                       zero,
        h.conj(), diag_b,   zero,                      -eps,
        -eps,     zero,     diag_a,                    h * twist,
        zero,     eps,      h.conj() * twist.conj(),   diag_b,
    );
    m
}

/// `|det(M_rt - I)|` for the reduced round trip; zero where a stationary
/// oscillating solution exists.
pub fn stationarity_residual(params: &ReducedParams, pump: Complex64) -> f64 {
    let shifted = round_trip_reduced(params, pump) - ComplexMatrix4::identity();
    shifted.lu().determinant().norm()
}

/// Whether the residual vanishes relative to the product of the diagonal
/// magnitudes of `M_rt - I` (relative tolerance `1e-9`).
pub fn is_stationary(params: &ReducedParams, pump: Complex64) -> bool {
    let shifted = round_trip_reduced(params, pump) - ComplexMatrix4::identity();
    let scale: f64 = shifted.diagonal().iter().map(|z| z.norm()).product();
    shifted.lu().determinant().norm() <= 1e-9 * scale
}

/// Threshold pump intensities of the two oscillation regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdBranches {
    pub lower: f64,
    pub upper: f64,
}

/// Threshold intensities `(2/g²)(κ² + (δ ∓ ε₀)²)` for crystal phase zero.
pub fn threshold_branches(delta: f64, plate_coupling: f64, kappa: f64, gain: f64) -> Result<ThresholdBranches> {
    if gain == 0.0 || !gain.is_finite() {
        return Err(Error::param("gain", "threshold requires a nonzero nonlinear coupling"));
    }
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", format!("must be positive, got {kappa}")));
    }
    let scale = 2.0 / (gain * gain);
    let minus = scale * (kappa * kappa + (delta - plate_coupling).powi(2));
    let plus = scale * (kappa * kappa + (delta + plate_coupling).powi(2));
    Ok(ThresholdBranches {
        lower: minus.min(plus),
        upper: minus.max(plus),
    })
}

/// Above-threshold classical field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldState {
    /// Common amplitude `J`.
    pub amplitude: Complex64,
    /// Free phase of `J`.
    pub phase: f64,
    /// `J·(1, 1, -i, -i)` over `(a1, b2*, a2, b1*)`.
    pub vector: FieldVector,
}

impl FieldState {
    pub fn zero() -> Self {
        FieldState {
            amplitude: Complex64::new(0.0, 0.0),
            phase: 0.0,
            vector: FieldVector::zeros(),
        }
    }

    /// `|J|²`, the photon number per mode.
    pub fn intensity(&self) -> f64 {
        self.amplitude.norm_sqr()
    }

    /// Total output of each beam, `2|J|²`.
    pub fn beam_power(&self) -> f64 {
        2.0 * self.intensity()
    }
}

/// The eigenvector `(1, 1, -i, -i)` of the working-point round trip.
pub fn circular_mode() -> FieldVector {
    FieldVector::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        -I,
        -I,
    )
}

/// Stationary field on the lower-threshold branch.
///
/// `phase` is free; zero is the reproducible default.
pub fn steady_state(params: &ReducedParams, phase: f64) -> Result<FieldState> {
    if !(params.sigma >= 0.0) {
        return Err(Error::param(
            "sigma",
            format!("must be non-negative, got {}", params.sigma),
        ));
    }
    if !params.is_working_point() {
        return Err(Error::param(
            "detuning",
            "steady state is only defined at delta_a = delta_b = epsilon0 with psi = 0",
        ));
    }
    if params.gain == 0.0 {
        return Err(Error::param("gain", "steady state requires a nonzero nonlinear coupling"));
    }
    if params.sigma <= 1.0 {
        return Ok(FieldState {
            phase,
            ..FieldState::zero()
        });
    }
    let modulus = (params.kappa * (params.sigma - 1.0) / (params.gain * params.gain)).sqrt();
    let amplitude = Complex64::from_polar(modulus, phase);
    Ok(FieldState {
        amplitude,
        phase,
        vector: circular_mode() * amplitude,
    })
}

/// Reduced pump parameter `σ = √(I_in / (2κ²/g²))`.
pub fn sigma_from_pump(pump_intensity: f64, kappa: f64, gain: f64) -> Result<f64> {
    if !(pump_intensity >= 0.0) {
        return Err(Error::param(
            "pump_intensity",
            format!("must be non-negative, got {pump_intensity}"),
        ));
    }
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", format!("must be positive, got {kappa}")));
    }
    if gain == 0.0 || !gain.is_finite() {
        return Err(Error::param("gain", "must be nonzero"));
    }
    Ok((pump_intensity * gain * gain / (2.0 * kappa * kappa)).sqrt())
}

/// Residual of the pump-depletion balance at the steady state, for `σ ≥ 1`.
///
/// Each crystal is driven by `a0_in/√2`, so the balance reads
/// `(κ/g + g|J|²)² = I_in/2`.
pub fn depletion_residual(pump_intensity: f64, kappa: f64, gain: f64) -> Result<f64> {
    let sigma = sigma_from_pump(pump_intensity, kappa, gain)?;
    if sigma < 1.0 {
        return Err(Error::param("pump_intensity", "below threshold, no depleted steady state"));
    }
    let intensity = kappa * (sigma - 1.0) / (gain * gain);
    Ok(((kappa / gain + gain * intensity).powi(2) - pump_intensity / 2.0).abs())
}
