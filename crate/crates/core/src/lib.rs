pub mod acceptance;
pub mod cli;
pub mod curvature;
pub mod density;
pub mod error;
pub mod factor;
pub mod graphs;
pub mod interp;
pub mod linalg;
pub mod norms;
mod optim;
pub mod report;
pub mod sample;
