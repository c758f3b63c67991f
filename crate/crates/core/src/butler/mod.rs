//! Diagrams for `C_p x C_p` and their correspondence with reduced lattices.

mod build;
mod diagram;
mod extract;
mod iso;
mod lambda;
mod lemmas;
mod predicates;
mod random;
mod routes;

pub use build::{head_lifts, lattice_of, radical, LatticeBuild};
pub use diagram::Diagram;
pub use extract::{diagram_of, is_reduced, DiagramExtraction, ReducedReport};
pub use iso::{diagram_iso, is_diagram_iso};
pub use lambda::{complement_generator, lambda_model, LambdaModel};
pub use lemmas::{component_image, coinvariants_upstairs, invariants_in_blocks, meet_blocks, perm_upstairs, Inclusion};
pub use predicates::{
    aug_whole, pred_coinvariants_lattice, pred_coinvariants_perm, pred_invariants_perm, pred_perm, PredicateOutcome,
    TAG_COINV_LATTICE, TAG_COINV_PERM, TAG_INVARIANTS, TAG_PERM,
};
pub use random::{random_diagram, RandomDiagramConfig};
pub use routes::{
    compare_routes, lattice_route, round_trip, RouteComparison, RoundTrip, Q_COINV_LATTICE, Q_COINV_PERM, Q_INVARIANTS,
    Q_PERM,
};
