mod deborder; mod gad; mod kumar; mod linalg; mod monomial; mod newton; mod rb; mod types;
pub use deborder::{deborder_bound, deborder_waring};
pub use rb::{interpolate_decompositions, rb_deborder, two_product_border_extract, RbDeborder};
pub use monomial::{monomial_border_decomposition, monomial_power_decomposition};
pub use gad::{classify_bwr_normal_form, gad_from_border, NormalForm};
pub use kumar::{classify_kumar, kumar_build, kumar_invert, kumar_product_build, KumarInverse, KumarRegime};
pub use newton::{elementary_symmetric, essential_variables, newton_identity_check, power_sum};
pub use types::{Gad, GadSummand, KumarExpr, ProductForm, SigmaLambdaSigma, SlsSummand, WaringDecomposition};
