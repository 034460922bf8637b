// `!(x > 0.0)` guards are deliberate: they reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod debye;
pub mod decay;
pub mod maxwell;
pub mod polarization;
pub mod quadrature;
pub mod specfun;
