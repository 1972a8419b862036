//! Monomial ideals attached to strong quasi-n-partite graphs.
//!
//! The crate builds generalized graph ideals `I_t(K'_{m_1,...,m_n})`, edge
//! ideals, their powers, colon ideals and monomial localizations, and checks
//! exchange properties, discrete polymatroid axioms, linear quotients and the
//! Cohen-Macaulay property of edge ideals by direct computation on exact
//! generator sets.

pub mod bipolymatroid;
pub mod cm;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod io;
pub mod monomial;

pub use bipolymatroid::{
    base_set, check_d1_d2, check_exchange, check_linear_quotients, find_exchange,
    find_linear_quotients_order, is_generalized_bipolymatroidal, BaseSet, ExchangeScope,
    ExchangeVerdict, ExchangeWitness, LinearQuotients, OrderSearch, PolymatroidVerdict,
};
pub use cm::{
    cm_report, cohen_macaulay_verdict, height, minimal_vertex_covers, quotient_dimension, CmReport,
    CmStatus, VertexCover,
};
pub use error::{Error, Result};
pub use graph::{
    compositions, edge_ideal, enumerate_walk_monomials, generalized_graph_ideal,
    power_via_compositions, veronese_type, Composition, EdgeSemantics, StrongQuasiGraph,
    WalkPolicy, DEFAULT_CAP,
};
pub use ideal::{MonomialIdeal, MonomialPrime};
pub use monomial::{log_set, BlockShape, Distance, Monomial, VariableIndex};
