//! Spectra of the quantum multiplication operator c1* for toric Fano manifolds,
//! computed through their Landau-Ginzburg mirrors: critical values, conjecture
//! flags, quantum periods, moduli-space scans and principal asymptotic classes.

pub mod hp;
pub mod toric;
