//! Benchmark inputs shared by the criterion harness.

use shl_core::{Polynomial, WeightSystem};

/// Named `(polynomial, weights)` pairs, smallest first.
pub const CASES: [(&str, &str, &str); 3] = [
    ("E7", "x1^3*x2+x2^3", "2/9,1/3"),
    ("cubic", "x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
    ("sextic-quartic", "x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
];

pub fn input(f: &str, w: &str) -> (Polynomial, WeightSystem) {
    (
        Polynomial::parse(f).expect("benchmark polynomial parses"),
        WeightSystem::parse(w).expect("benchmark weights parse"),
    )
}
