pub mod chain;
pub mod converge;
pub mod path_sum;
pub mod simulate;
pub mod verify;
