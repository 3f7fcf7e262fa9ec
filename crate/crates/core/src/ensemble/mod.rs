//! Brownian entry paths, circulant samples and their spectra.

pub(crate) mod brownian;
mod circulant;
pub mod rng;
mod spectrum;
mod trace;

pub use brownian::{sample_brownian_paths, BrownianEnsemble, TimeGrid};
pub use circulant::{build_circulant, label_of, CirculantSample};
pub use spectrum::{spectrum, Spectrum};
pub use trace::{default_method, trace_power, TraceMethod};
