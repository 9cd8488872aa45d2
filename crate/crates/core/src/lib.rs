pub mod cartan;
pub mod cli;
pub mod coeffring;
pub mod corrections;
pub mod exactnum;
pub mod isocheck;
pub mod mckay;
pub mod resolve;
pub mod ringtables;
