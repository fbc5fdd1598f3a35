//! Resource caps, overridable from the environment.

/// Default cap on the number of points of a constructed action.
pub const DEFAULT_DEGREE_CAP: usize = 100_000;
/// Default budget of partial flags visited by exhaustive enumeration.
pub const DEFAULT_FLAG_BUDGET: u64 = 10_000_000;
/// Above this many undirected incidence edges a constructed geometry keeps
/// its incidence implicit (group orbits) instead of adjacency lists.
pub const DEFAULT_MATERIALIZE_LIMIT: u64 = 4_000_000;

fn env_number(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}

pub fn degree_cap() -> usize {
    env_number("GEOFORGE_DEGREE_CAP")
        .map(|v| v as usize)
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

pub fn flag_budget() -> u64 {
    env_number("GEOFORGE_FLAG_BUDGET").unwrap_or(DEFAULT_FLAG_BUDGET)
}

pub fn materialize_limit() -> u64 {
    env_number("GEOFORGE_MATERIALIZE_LIMIT").unwrap_or(DEFAULT_MATERIALIZE_LIMIT)
}
