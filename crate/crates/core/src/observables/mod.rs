//! Populations, photon correlations, reduced states and entanglement measures.

mod entanglement;
mod oscillation;
mod record;
mod reduce;

pub use entanglement::{bell_fidelity_sq, concurrence};
pub use oscillation::{analyze_oscillations, analyze_oscillations_default, OscillationReport, DEFAULT_PROMINENCE_FRACTION};
pub use record::{g2_numerator, g2_same_time, population, record, ObservableRecord, POPULATION_FLOOR};
pub use reduce::{partial_trace, partial_trace_op, photon_qubit_reduce, photon_reduce, qd_reduce};
