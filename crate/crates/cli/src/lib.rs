//! Library side of the `fractal-calc` binary: the expression parser and the
//! textual series / fractional-complex literal handling.

pub mod parse;
