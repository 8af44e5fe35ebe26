//! Ramanujan-Orr series: representation, summation, closed forms.

mod formula;
mod lvalue;
mod sum;

pub use formula::{is_squarefree, square_part, AlgebraicConstant, DenomPattern, FormulaSpec, LValueTerm};
pub use lvalue::{bernoulli_numbers, chi_minus7, dirichlet_l};
pub use sum::{
    exact_summand, exact_terms, pochhammer_part, sum_hypergeometric, sum_series, term_ratio,
    verify_formula, SeriesSum, VerifyReport,
};
