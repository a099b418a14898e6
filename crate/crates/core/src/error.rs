use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// |α|² is zero or not a finite positive number; the odd cat state is undefined.
    #[error("degenerate coherent amplitude: |alpha|^2 = {0} (must be finite and > 0)")]
    DegenerateAlpha(f64),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what} is not normalized: squared norm {norm_sqr}")]
    Norm { what: &'static str, norm_sqr: f64 },

    #[error(
        "Fock cutoff {cutoff} too small for amplitude {amplitude} (tail rule needs at least {required})"
    )]
    CutoffTooSmall {
        cutoff: usize,
        required: usize,
        amplitude: f64,
    },

    #[error("mode {0} is not present in the register")]
    ModeIndex(u8),

    #[error("branch {0} has zero probability")]
    ZeroBranch(&'static str),
}
