//! Model checking MSO with linear cardinality constraints on graphs of bounded
//! vertex integrity.

pub mod graphs;
pub mod formulas;
pub mod constraints;
pub mod ilp;
pub mod evaluator;
pub mod instance;
pub mod shapes;
pub mod engine;
pub mod gso;
pub mod problems;
pub mod oracle;
pub mod corpus;
