pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod geometry;
pub mod jet;
pub mod linearize;
pub mod parser;
