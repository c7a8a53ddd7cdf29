//! Desk-scale experiments: scans of vertical shifts against a target on a
//! compact box, mean squares on the critical hyperplane, and zero finding.

mod moments;
mod scan;
mod zeros;

pub use moments::{mean_square, MeanSquareReport, MAX_MOMENT_ARITY};
pub use scan::{
    density_at, in_window, scan_shifts, square_about, sup_distance, EvalSettings, JointTarget, ScanMode, ScanOutcome,
    ScanSpec, ShiftRecord, Target, TargetFunction, DEFAULT_MAX_SHIFTS,
};
pub use zeros::{find_zeros, ZeroOptions, ZeroRecord};
