//! File formats, expression parsing and pipeline commands behind the `cmc` binary.

pub mod commands;
pub mod dataset;
pub mod expr;
pub mod mesh;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/weierstrass.md")]
    mod weierstrass {}
    #[doc = include_str!("../../../book/src/gauss-map.md")]
    mod gauss_map {}
    #[doc = include_str!("../../../book/src/lax.md")]
    mod lax {}
    #[doc = include_str!("../../../book/src/decouple.md")]
    mod decouple {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
