//! Caps and tunables shared by the capped operations.

/// Limits for operations whose cost grows with the request. Every cap is a
/// hard error when exceeded, never a silent truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Longest count series a single call may produce (number of coefficients
    /// is `truncation + 1`).
    pub truncation_cap: usize,
    /// Largest norm accepted by exhaustive enumeration.
    pub enum_norm_bound: u64,
    /// Largest finite order accepted by formula evaluation.
    pub mso_domain_bound: usize,
    /// Trailing window width for ratio-based radius estimates.
    pub ratio_window: usize,
    /// Series length used when a limit needs a radius estimate internally.
    pub rho_series_len: usize,
    /// Most parts a semilinear set may have before inclusion-exclusion.
    pub part_cap: usize,
    /// Largest Matula census range.
    pub census_cap: u64,
    /// Largest state count accepted by lasso detection.
    pub lasso_state_cap: usize,
    /// Most reduced-exponent tuples a spectrum computation may visit.
    pub spectrum_guard: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            truncation_cap: 512,
            enum_norm_bound: 14,
            mso_domain_bound: 12,
            ratio_window: 8,
            rho_series_len: 120,
            part_cap: 20,
            census_cap: 1_000_000,
            lasso_state_cap: 10,
            spectrum_guard: 4096,
        }
    }
}
