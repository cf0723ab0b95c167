//! The canonical partial action: indeterminacy, semi-indices, growth, axioms,
//! transfix scans and the path-length comparison on finite truncations.

pub mod axioms;
pub mod growth;
pub mod pathbound;
pub mod singularity;
pub mod transfix;

pub use axioms::{axioms_check, AxiomReport};
pub use growth::{fit_growth, growth_sequence, power_growth, power_growth_with, GrowthReport, GrowthVerdict};
pub use pathbound::{graph_distances, path_bound_check, PartialGerm, PathBoundReport};
pub use singularity::{index_character, indeterminacy_set, semi_index, SingularityProfile};
pub use transfix::{transfix_scan, transfix_scan_with, word_string, Certificate, TransfixReport, TransfixVerdict, Word};
