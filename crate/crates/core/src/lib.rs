pub mod caps;
pub mod cli;
pub mod cohomology;
pub mod dsu;
pub mod error;
pub mod formats;
pub mod graph;
pub mod linalg;
pub mod local;
pub mod rational;
pub mod state;
pub mod transition;
pub mod uniform;
