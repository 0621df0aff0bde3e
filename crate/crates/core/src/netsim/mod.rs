//! Network-level Monte Carlo evaluation.
//!
//! BSs and users are Poisson point processes on a square torus; each BS has
//! one IRS at a fixed offset, and users are served by the BS whose IRS is
//! nearest. Per drop, every BS pairs its users with the selected algorithm.

mod aggregate;
mod campaign;
mod config;
mod deploy;
mod evaluate;
mod pathloss;

pub use aggregate::{aggregate, AlgorithmSummary, EmpiricalCdf, OutageStat};
pub use campaign::{run_campaign, run_direct_campaign, Campaign};
pub use config::{InterferenceModel, NetworkConfig};
pub use deploy::{deploy, nearest, torus_distance, Drop, Point};
pub use evaluate::{
    evaluate_drop, evaluate_population_direct, user_links, Algorithm, DecisionRecord, DropMetrics,
    Role, UserRecord, RATE_TOLERANCE,
};
pub use pathloss::{path_loss, path_loss_db, MIN_DISTANCE_M};
