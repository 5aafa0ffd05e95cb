//! Shared inputs for the criterion benches in `benches/`.

use modinv::{builtin_e6_double, builtin_su2, verlinde, FusionRing, ModularData, ToleranceConfig};

pub fn e6_double() -> (ModularData, FusionRing, ToleranceConfig) {
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).expect("builtin data is valid");
    let fr = verlinde(&md, &tol).expect("builtin data is integral");
    (md, fr, tol)
}

pub fn su2(k: u32) -> (ModularData, ToleranceConfig) {
    let tol = ToleranceConfig::default();
    (builtin_su2(k, &tol).expect("builtin data is valid"), tol)
}
