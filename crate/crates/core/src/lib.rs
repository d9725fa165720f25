pub mod cli;
pub mod datagen;
pub mod error;
pub mod features;
pub mod fft;
pub mod mcl;
pub mod nn;
pub mod radar_io;
pub mod spectrogram;

pub use error::{Error, Result};
