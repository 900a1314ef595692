pub mod coloring;
pub mod corpus;
pub mod design;
pub mod family;
pub mod format;
pub mod graph;
pub mod outcome;
pub mod reduction;
pub mod seed;
pub mod solver;
