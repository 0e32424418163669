//! Std side of the workspace: JSON formats, topology-parallel solving and the
//! verification suite used by the `quantrop` binary.

pub mod formats;
pub mod parallel;
pub mod verify;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const PROPERTY_FAILURE: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
    pub const INVARIANCE_VIOLATION: u8 = 3;
}
