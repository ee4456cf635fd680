//! Finite abstract logics, their prime-theory spaces and the duality
//! between them.

pub mod builders;
pub mod connectives;
pub mod corpus;
pub mod duality;
pub mod io;
pub mod logic;
pub mod subset;
pub mod topology;

pub use connectives::{verify_connectives, ClassificationReport, LogicClass};
pub use logic::{AbstractLogic, TheoryFamily};
pub use subset::{ExprSet, PointSet, Subset};
pub use topology::FiniteSpace;
