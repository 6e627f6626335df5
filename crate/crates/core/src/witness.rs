//! Fidelity-based entanglement witness for the eight-qubit target state.
//!
//! `W = 1/2 − |ψ⟩⟨ψ| + |ψ'⟩⟨ψ'|` has a second form built from eight local
//! measurement settings,
//! `W = 1/2 − ¼(A₀ − A₁) − (1/12) Σ_k (−1)^k B_k`, where
//! `A₀ = (P_H^{⊗6} − P_V^{⊗6}) ⊗ X₇X₈`, `A₁` is the same with `Y₇Y₈`, and
//! `B_k = M_k^{⊗6} ⊗ (|HH⟩⟨HH| − |VV⟩⟨VV|)` with
//! `M_k = cos(kπ/6) X + sin(kπ/6) Y`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dense::{
    expectation_observable, DenseOperator, DensityModel, LocalObservable, Mat2, ProductTerm, StateVector,
};
use crate::error::{Error, Result};

pub const WITNESS_QUBITS: usize = 8;
const FACE_QUBITS: usize = 6;
const ALL_V: usize = (1 << FACE_QUBITS) - 1;
const EDGES_V: usize = 0b11 << FACE_QUBITS;

/// `(|ψ⟩, |ψ'⟩)`: `|ψ⟩ = ½(|H⁶HH⟩ + |H⁶VV⟩ + |V⁶HH⟩ − |V⁶VV⟩)` and `|ψ'⟩`
/// flips the sign of the first term instead of the last.
pub fn build_target_states() -> (StateVector, StateVector) {
    let make = |signs: [f64; 4]| {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << WITNESS_QUBITS];
        for (idx, s) in [0, EDGES_V, ALL_V, ALL_V | EDGES_V].into_iter().zip(signs) {
            amps[idx] = Complex64::new(0.5 * s, 0.0);
        }
        StateVector::from_amplitudes(amps).expect("normalized by construction")
    };
    (make([1.0, 1.0, 1.0, -1.0]), make([-1.0, 1.0, 1.0, 1.0]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSetting {
    pub name: String,
    /// Weight of this setting in the witness, constant term excluded.
    pub coefficient: f64,
    pub observable: LocalObservable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOperator {
    pub constant: f64,
    pub psi: StateVector,
    pub psi_prime: StateVector,
    pub settings: Vec<MeasurementSetting>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Projector,
    Settings,
}

fn faces_then_edges(face: Option<Mat2>, edge: Option<Mat2>) -> Vec<Option<Mat2>> {
    let mut f = vec![face; FACE_QUBITS];
    f.extend([edge, edge]);
    f
}

fn term(coefficient: f64, factors: Vec<Option<Mat2>>) -> ProductTerm {
    ProductTerm { coefficient, factors }
}

/// `M_k = cos(kπ/6) X + sin(kπ/6) Y`.
pub fn equatorial_setting(k: usize) -> Mat2 {
    Mat2::equatorial(k as f64 * PI / 6.0)
}

fn parity_observable(edge: Mat2) -> Result<LocalObservable> {
    let edge_pair = |m: Mat2| {
        let mut f = vec![Some(Mat2::PROJ_0); FACE_QUBITS];
        f.iter_mut().for_each(|x| *x = Some(m));
        f
    };
    let mut h = edge_pair(Mat2::PROJ_0);
    h.extend([Some(edge), Some(edge)]);
    let mut v = edge_pair(Mat2::PROJ_1);
    v.extend([Some(edge), Some(edge)]);
    LocalObservable::new(WITNESS_QUBITS, vec![term(1.0, h), term(-1.0, v)])
}

fn equatorial_observable(k: usize) -> Result<LocalObservable> {
    let m = Some(equatorial_setting(k));
    LocalObservable::new(
        WITNESS_QUBITS,
        vec![
            term(1.0, faces_then_edges(m, Some(Mat2::PROJ_0))),
            term(-1.0, faces_then_edges(m, Some(Mat2::PROJ_1))),
        ],
    )
}

pub fn build_witness() -> Result<WitnessOperator> {
    let (psi, psi_prime) = build_target_states();
    let mut settings = vec![
        MeasurementSetting {
            name: "A0".into(),
            coefficient: -0.25,
            observable: parity_observable(Mat2::X)?,
        },
        MeasurementSetting {
            name: "A1".into(),
            coefficient: 0.25,
            observable: parity_observable(Mat2::Y)?,
        },
    ];
    for k in 0..6 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        settings.push(MeasurementSetting {
            name: format!("B{k}"),
            coefficient: -sign / 12.0,
            observable: equatorial_observable(k)?,
        });
    }
    Ok(WitnessOperator {
        constant: 0.5,
        psi,
        psi_prime,
        settings,
    })
}

impl WitnessOperator {
    /// `1/2 − |ψ⟩⟨ψ| + |ψ'⟩⟨ψ'|` as a 256 × 256 matrix.
    pub fn projector_matrix(&self) -> Result<DenseOperator> {
        let mut op = DenseOperator::scaled_identity(WITNESS_QUBITS, self.constant);
        op.add_projector(-1.0, &self.psi)?;
        op.add_projector(1.0, &self.psi_prime)?;
        Ok(op)
    }

    /// The settings decomposition summed into a 256 × 256 matrix.
    pub fn settings_matrix(&self) -> Result<DenseOperator> {
        let mut op = DenseOperator::scaled_identity(WITNESS_QUBITS, self.constant);
        for s in &self.settings {
            op.add_scaled(s.coefficient, &s.observable.to_matrix())?;
        }
        Ok(op)
    }

    /// Largest entrywise difference between the two forms.
    pub fn form_deviation(&self) -> Result<f64> {
        self.projector_matrix()?.max_abs_diff(&self.settings_matrix()?)
    }

    /// `(name, ⟨setting⟩)` in setting order.
    pub fn setting_expectations(&self, model: &DensityModel) -> Result<Vec<(String, f64)>> {
        check_model(model)?;
        self.settings
            .iter()
            .map(|s| Ok((s.name.clone(), expectation_observable(model, &s.observable)?)))
            .collect()
    }

    pub fn expectation(&self, model: &DensityModel, method: Method) -> Result<f64> {
        check_model(model)?;
        match method {
            Method::Projector => {
                Ok(self.constant - model.fidelity_with(&self.psi)? + model.fidelity_with(&self.psi_prime)?)
            }
            Method::Settings => {
                let mut w = self.constant;
                for s in &self.settings {
                    w += s.coefficient * expectation_observable(model, &s.observable)?;
                }
                Ok(w)
            }
        }
    }
}

fn check_model(model: &DensityModel) -> Result<()> {
    if model.num_qubits() != WITNESS_QUBITS {
        return Err(Error::Dimension {
            expected: WITNESS_QUBITS,
            found: model.num_qubits(),
        });
    }
    Ok(())
}

pub fn witness_expectation(model: &DensityModel, method: Method) -> Result<f64> {
    build_witness()?.expectation(model, method)
}

/// `v |ψ⟩⟨ψ| + (1 − v) 1/256`.
pub fn white_noise_model(visibility: f64) -> Result<DensityModel> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::domain(format!("visibility {visibility} outside [0, 1]")));
    }
    let (psi, _) = build_target_states();
    DensityModel::new(WITNESS_QUBITS, vec![(visibility, psi)], 1.0 - visibility)
}

/// Lower bound on the target-state fidelity implied by a witness value.
pub fn fidelity_bound(w: f64) -> f64 {
    0.5 - w
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SettingValue {
    pub name: String,
    pub coefficient: f64,
    pub expectation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub visibility: f64,
    pub settings: Vec<SettingValue>,
    pub witness: f64,
    pub witness_projector: f64,
    pub fidelity_bound: f64,
    pub fidelity: f64,
}

/// Evaluates both forms under white noise and checks that they agree within `1e-10`.
pub fn witness_report(witness: &WitnessOperator, visibility: f64) -> Result<WitnessReport> {
    let model = white_noise_model(visibility)?;
    let values = witness.setting_expectations(&model)?;
    let settings = witness
        .settings
        .iter()
        .zip(values)
        .map(|(s, (name, expectation))| SettingValue {
            name,
            coefficient: s.coefficient,
            expectation,
        })
        .collect();
    let w = witness.expectation(&model, Method::Settings)?;
    let wp = witness.expectation(&model, Method::Projector)?;
    if (w - wp).abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "witness forms disagree: settings {w}, projector {wp}"
        )));
    }
    Ok(WitnessReport {
        visibility,
        settings,
        witness: w,
        witness_projector: wp,
        fidelity_bound: fidelity_bound(w),
        fidelity: model.fidelity_with(&witness.psi)?,
    })
}
