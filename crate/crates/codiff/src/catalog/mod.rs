//! The 3-dimensional (complex and real) and 4-dimensional complex
//! moduli-space catalogs: labeled families with parameter normalization,
//! identification of arbitrary codifferentials, equivalence witnesses, and
//! the expected jump/contraction graphs.

mod data;
mod graph;
mod identify;
mod witness;

pub use data::{
    catalog_entries, instantiate, instantiate_generic, normalize_params, CatalogEntry,
    CatalogId, Symmetry,
};
pub use graph::{expected_contractions, expected_graph, graph_to_dot, node_name};
pub use identify::{identify, Identification};
pub use witness::{equivalent, normalize_with_witness, Equivalence, NormalForm};

use crate::codifferential::Codifferential;
use crate::error::CatalogError;
use crate::scalar::Scalar;

/// Instantiate and also render the canonical node name, used by graph
/// emission and tests.
pub fn instantiate_canonical(
    label: &str,
    params: &[Scalar],
) -> Result<(Codifferential, Vec<Scalar>, String), CatalogError> {
    let canon = normalize_params(label, params)?;
    let d = instantiate(label, params)?;
    let name = node_name(label, &canon);
    Ok((d, canon, name))
}
