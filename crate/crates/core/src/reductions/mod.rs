//! Front-ends that reduce satisfiability and bipartization problems to
//! skew-symmetric multicut.

pub mod bipartite;
pub mod cnf;
pub mod qhorn;

pub use bipartite::{edge_bipartization, edge_bipartization_with_stats, oct, oct_with_stats, UndirectedGraph};
pub use cnf::{almost_2sat, almost_2sat_with_stats, implication_graph, two_sat_satisfiable, CnfFormula};
pub use qhorn::{is_qhorn, qhorn_backdoor, qhorn_backdoor_with_stats, qhorn_gadget, quadratic_cover, QhornOracle};
