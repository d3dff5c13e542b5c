//! Hodge filtrations and generating levels of weighted-homogeneous isolated
//! hypersurface singularities, computed with exact rational linear algebra.

pub mod certify;
pub mod exact;
pub mod filtration;
pub mod graded;
pub mod poly;
pub mod residue;
pub mod spectral;

pub use certify::{certify_level, exactness_probe, ExactnessVerdict, LevelCertificate, Verdict};
pub use exact::{rat, QMatrix, Rational};
pub use filtration::{Cutoffs, FilteredPieceTable, ModuleElement, ModuleTag};
pub use graded::{DegreeIndex, GradedPiece, MilnorData};
pub use poly::{Monomial, Polynomial, QHClassification, QHKind, WeightSystem};
pub use residue::{BbarPiece, LocalCohomologyElement};
pub use spectral::{SingularityClass, SpectralReport};
