pub mod connection;
pub mod exact;
pub mod formal;
pub mod grammar;
pub mod numeric;
pub mod report;
