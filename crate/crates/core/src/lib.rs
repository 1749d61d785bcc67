pub mod circuits;
pub mod metrics;
pub mod noisemodel;
pub mod otoc;
pub mod protocol;
pub mod simkernel;
