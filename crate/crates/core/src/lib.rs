pub mod contiguity;
pub mod error;
pub mod gaussian;
pub mod lebesgue;
pub mod matcore;
pub mod presets;
pub mod qlan;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::ToleranceConfig;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/lebesgue.md")]
    mod lebesgue {}
    #[doc = include_str!("../../../book/src/contiguity.md")]
    mod contiguity {}
    #[doc = include_str!("../../../book/src/gaussian.md")]
    mod gaussian {}
    #[doc = include_str!("../../../book/src/qlan.md")]
    mod qlan {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
