//! Exact analysis of freeness and nearly-freeness for reduced plane curves,
//! with specialised tooling for arrangements of smooth conics.

pub mod analysis;
pub mod combinatorics;
pub mod corpus;
pub mod freeness;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod singular;
