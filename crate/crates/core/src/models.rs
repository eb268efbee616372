//! Reference Hamiltonians and observable tuples used by the tests, the
//! acceptance suite and the CLI.

use crate::ground::{KLocalSpec, KLocalTerm};
use crate::ops::{pauli, HermitianOperator};

fn term(name: &str, operator: HermitianOperator) -> KLocalTerm {
    KLocalTerm { name: name.into(), operator }
}

/// `-Z (x) Z - g (X (x) I + I (x) X) / 2`, a Lipkin-Meshkov-Glick type
/// two-body term. Its mean-field energy is `-1 - g^2/4` for `g <= 2` and
/// `-g` beyond.
pub fn lmg(g: f64) -> KLocalSpec {
    let zz = pauli::z().kron(&pauli::z());
    let xsum = &pauli::x().kron(&pauli::id()) + &pauli::id().kron(&pauli::x());
    KLocalSpec::new(2, 2, vec![term("zz", zz), term("x", xsum)], vec![-1.0, -g / 2.0]).expect("valid model")
}

/// Closed-form mean-field energy of [`lmg`].
pub fn lmg_mean_field_energy(g: f64) -> f64 {
    if g.abs() <= 2.0 {
        -1.0 - g * g / 4.0
    } else {
        -g.abs()
    }
}

/// `Z (x) Z` with unit coefficient.
pub fn zz() -> KLocalSpec {
    KLocalSpec::new(2, 2, vec![term("zz", pauli::z().kron(&pauli::z()))], vec![1.0]).expect("valid model")
}

/// `(X, Z)` on a single qubit; the symmetric product range is the unit circle.
pub fn bloch_observables() -> Vec<KLocalTerm> {
    vec![term("x", pauli::x()), term("z", pauli::z())]
}

/// `(Z (x) Z, X (x) X)`; the symmetric product range is the triangle
/// `{(cos^2 t, sin^2 t cos^2 p)}` with vertices `(0,0)`, `(1,0)`, `(0,1)`.
pub fn triangle_observables() -> Vec<KLocalTerm> {
    vec![term("zz", pauli::z().kron(&pauli::z())), term("xx", pauli::x().kron(&pauli::x()))]
}
