use crate::{Error, Result};

/// One Pauli-pair correlation channel `⟨σ^μ_0 σ^ν_r⟩_c ≈ c r^{-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayChannel {
    /// `f64::INFINITY` for a vanishing channel.
    pub alpha: f64,
    /// Amplitude entering linearly in the magic expansion.
    pub constant: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExponentLawInput {
    pub channels: Vec<DecayChannel>,
}

impl ExponentLawInput {
    pub fn new(channels: Vec<DecayChannel>) -> Self {
        Self { channels }
    }

    pub fn push(&mut self, alpha: f64, constant: f64) -> &mut Self {
        self.channels.push(DecayChannel { alpha, constant });
        self
    }
}

/// `(α*, ᾱ, α_M)` with `α*` the slowest decay, `ᾱ` the slowest among
/// channels with nonzero constant, and `α_M = min(2α*, ᾱ)`.
pub fn exponent_law_parts(input: &ExponentLawInput) -> Result<(f64, f64, f64)> {
    if input
        .channels
        .iter()
        .any(|c| c.alpha.is_nan() || c.alpha <= 0.0)
    {
        return Err(Error::Argument("exponents must be positive".into()));
    }
    let alpha_star = input
        .channels
        .iter()
        .map(|c| c.alpha)
        .fold(f64::INFINITY, f64::min);
    if !alpha_star.is_finite() {
        return Err(Error::Domain("no finite decay exponent".into()));
    }
    let alpha_bar = input
        .channels
        .iter()
        .filter(|c| c.constant != 0.0)
        .map(|c| c.alpha)
        .fold(f64::INFINITY, f64::min);
    Ok((alpha_star, alpha_bar, (2.0 * alpha_star).min(alpha_bar)))
}

/// Decay exponent of the total nonstabilizerness, `min(2α*, ᾱ)`.
pub fn exponent_law(input: &ExponentLawInput) -> Result<f64> {
    exponent_law_parts(input).map(|(_, _, a)| a)
}
