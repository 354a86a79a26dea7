pub mod alphabet;
pub mod backward;
pub mod cli;
pub mod condition;
pub mod dot;
pub mod error;
pub mod gen;
mod lex;
pub mod lasso;
pub mod ltl;
pub mod nba;
pub mod nutl;
pub mod run;
pub mod value;
pub mod waa;

pub use error::{Error, Result};
