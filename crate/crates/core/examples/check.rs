//! The randomized cross-checks behind `backdet check`, driven from code.

use backdet::cli::{cmd_check, CheckConfig, CheckMode};

fn main() {
    for mode in [CheckMode::Ltl, CheckMode::Nutl, CheckMode::Dual, CheckMode::Nba] {
        let mut cfg = CheckConfig::new(mode);
        cfg.count = 20;
        match cmd_check(&cfg) {
            Ok(out) => println!("{}", out.report),
            Err(f) => println!("exit {}: {}", f.code, f.message),
        }
    }
}
