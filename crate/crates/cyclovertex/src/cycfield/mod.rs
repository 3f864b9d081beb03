//! Exact arithmetic in the cyclotomic field Q(w_T) and in univariate rational
//! functions over it, with Laurent expansion, residues and partial fractions.

pub mod scalar;
pub mod poly;
pub mod ratfun;
pub mod series;
