//! Resource caps, overridable through the environment.

use std::sync::OnceLock;

pub const MAX_LP_PIVOTS_VAR: &str = "KFLATS_MAX_LP_PIVOTS";
pub const MAX_NET_SIZE_VAR: &str = "KFLATS_MAX_NET_SIZE";

const DEFAULT_MAX_LP_PIVOTS: usize = 100_000;
const DEFAULT_MAX_NET_SIZE: usize = 200_000;

fn env_or(var: &str, default: usize) -> usize {
    std::env::var(var).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

pub fn max_lp_pivots() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| env_or(MAX_LP_PIVOTS_VAR, DEFAULT_MAX_LP_PIVOTS))
}

pub fn max_net_size() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| env_or(MAX_NET_SIZE_VAR, DEFAULT_MAX_NET_SIZE))
}
