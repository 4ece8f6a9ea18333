//! Size caps. `STACKLAB_CAP`, when set, replaces every default below.

/// Arrows in a constructed groupoid.
pub const DEFAULT_ARROW_CAP: usize = 1_000_000;

/// Vertices in a tree ball.
pub const DEFAULT_BALL_CAP: usize = 100_000;

/// Largest degree for action enumeration.
pub const DEFAULT_DEGREE_CAP: usize = 7;

fn env_cap() -> Option<usize> {
    std::env::var("STACKLAB_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
}

pub fn arrow_cap() -> usize {
    env_cap().unwrap_or(DEFAULT_ARROW_CAP)
}

pub fn ball_cap() -> usize {
    env_cap().unwrap_or(DEFAULT_BALL_CAP)
}

pub fn degree_cap() -> usize {
    env_cap().unwrap_or(DEFAULT_DEGREE_CAP)
}
