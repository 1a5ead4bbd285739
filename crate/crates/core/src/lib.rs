//! Exact computation of Hilbert coefficients, Ratliff-Rush closures,
//! reduction numbers and regularity bounds for m-primary ideals in
//! truncated power series rings over the rationals.

pub mod bounds;
pub mod corpus;
pub mod error;
pub mod filtration;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod session;

pub use error::{EngineError, Result};
pub use ideal::{quotient_context, IdealRep, PowerTower, PrimacyCertificate};
pub use linalg::{Echelon, RankCounter, SparseVec};
pub use poly::{derivative_at_one, monomial_compare, poly_mul_trunc, Monomial, Polynomial, TruncatedAlgebra, Q};
pub use hilbert::{HilbertData, HilbertOptions};
pub use filtration::{ClosureRecord, Filtration, FiltrationData, FiltrationOptions};
pub use reduction::ReductionData;
pub use bounds::{BehavesWell, BoundVerdict, Relation, TheoremId};
pub use report::{analyze, IdealRecord, Report, Settings};
pub use corpus::{corpus_entries, run_corpus, run_entries, CorpusCheck, CorpusEntry, CorpusOutcome};
pub use session::{parse_session, ParseError, Session};
