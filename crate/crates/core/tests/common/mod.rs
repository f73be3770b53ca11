#![allow(dead_code)]

use plexcav::tensor::{DensityMatrix, QOperator, SubsystemLayout};
use plexcav::C64;
use proptest::prelude::*;

/// `n` complex entries drawn from the unit square.
pub fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b)), n)
}

pub fn operator(layout: &SubsystemLayout, data: Vec<C64>) -> QOperator<f64> {
    QOperator::from_vec(layout.clone(), data).unwrap()
}

/// `M M† / Tr(M M†)`, a full-rank state for generic `M`.
pub fn density_from(layout: &SubsystemLayout, data: Vec<C64>) -> DensityMatrix<f64> {
    let m = operator(layout, data);
    let mm = m.multiply(&m.adjoint()).unwrap();
    let tr = mm.trace().re;
    DensityMatrix::new(mm.scale(C64::new(1.0 / tr, 0.0))).unwrap()
}

pub fn ket(amps: &[f64]) -> Vec<C64> {
    amps.iter().map(|&a| C64::new(a, 0.0)).collect()
}

pub fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::new(vec![2, 2]).unwrap()
}

pub fn singlet() -> DensityMatrix<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(two_qubits(), &ket(&[0.0, s, -s, 0.0])).unwrap()
}

pub fn max_abs(a: &QOperator<f64>, b: &QOperator<f64>) -> f64 {
    a.max_abs_diff(b)
}
