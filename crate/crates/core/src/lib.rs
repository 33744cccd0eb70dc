pub mod error;
pub mod invariants;
pub mod pd;
pub mod petalperm;
pub mod poly;
pub mod resolve;
pub mod simplify;
pub mod tablekit;
pub mod unknot;
pub mod uberdiag;

pub use error::{Error, Result};
pub use pd::{GaussCode, Passage, PlanarDiagram};
pub use poly::LaurentPolynomial;
pub use petalperm::{cyclic_distance, torus_permutation, DifferenceClass, PetalPermutation};
pub use uberdiag::{Handedness, Ribbon, UbercrossingDiagram};
pub use resolve::{resolve, resolve_default, PerturbationSchedule};
pub use simplify::{petal_reduced_diagram, StarContext};
pub use tablekit::{KnotRecord, KnotTable};
pub use unknot::{unknotting_bound, unknotting_sequence, UnknottingCertificate};
