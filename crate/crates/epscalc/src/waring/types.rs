use crate::error::{Error, Result};
use crate::polyring::{LaurentScalar, LinearForm, Poly};

/// A (border) Waring decomposition: the represented polynomial is
/// `sum_i scale_i * form_i^d`. The decomposition is a border one iff any
/// scale or form involves ε.
#[derive(Clone, Debug, PartialEq)]
pub struct WaringDecomposition {
    pub d: u32,
    pub forms: Vec<LinearForm>,
    pub scales: Vec<LaurentScalar>,
}

impl WaringDecomposition {
    pub fn new(d: u32, forms: Vec<LinearForm>, scales: Vec<LaurentScalar>) -> Result<Self> {
        if forms.len() != scales.len() {
            return Err(Error::ArityMismatch {
                expected: forms.len(),
                got: scales.len(),
            });
        }
        Ok(WaringDecomposition { d, forms, scales })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn is_border(&self) -> bool {
        !(self.forms.iter().all(|f| f.is_eps_free())
            && self.scales.iter().all(|s| s.is_eps_free()))
    }

    pub fn order(&self) -> u32 {
        let fo = self
            .forms
            .iter()
            .map(|f| f.order())
            .fold(1, num::integer::lcm);
        self.scales
            .iter()
            .map(|s| s.order())
            .fold(fo, num::integer::lcm)
    }

    pub fn nvars(&self) -> usize {
        self.forms.iter().map(|f| f.nvars()).max().unwrap_or(0)
    }

    pub fn expand(&self) -> Poly {
        let order = self.order();
        let nvars = self.nvars();
        let mut acc = Poly::zero(order, nvars);
        for (f, s) in self.forms.iter().zip(&self.scales) {
            acc = acc.add(&f.to_poly_n(order, nvars).pow(self.d).scale(s));
        }
        acc
    }

    pub fn limit(&self) -> Result<Poly> {
        self.expand().limit()
    }
}

/// A Kumar expression `alpha * ((prod_i (1 + l_i)) - 1)` with homogeneous
/// linear nonzero forms l_i.
#[derive(Clone, Debug, PartialEq)]
pub struct KumarExpr {
    pub alpha: LaurentScalar,
    pub forms: Vec<LinearForm>,
}

impl KumarExpr {
    pub fn new(alpha: LaurentScalar, forms: Vec<LinearForm>) -> Result<Self> {
        if forms.iter().any(|f| f.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(KumarExpr { alpha, forms })
    }

    pub fn m(&self) -> usize {
        self.forms.len()
    }

    pub fn order(&self) -> u32 {
        self.forms
            .iter()
            .map(|f| f.order())
            .fold(self.alpha.order(), num::integer::lcm)
    }

    pub fn nvars(&self) -> usize {
        self.forms.iter().map(|f| f.nvars()).max().unwrap_or(0)
    }

    pub fn expand(&self) -> Poly {
        let order = self.order();
        let nvars = self.nvars();
        let one = Poly::one(order, nvars);
        let mut prod = one.clone();
        for f in &self.forms {
            prod = prod.mul(&one.add(&f.to_poly_n(order, nvars)));
        }
        prod.sub(&one).scale(&self.alpha)
    }
}

/// A generalized additive decomposition: `sum_k ell_k^{d - r_k + 1} g_k`
/// with pairwise non-proportional ε-free forms ell_k and ε-free g_k of
/// degree r_k - 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Gad {
    pub d: u32,
    pub summands: Vec<GadSummand>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadSummand {
    pub ell: LinearForm,
    pub g: Poly,
    pub r_k: u32,
}

impl Gad {
    pub fn total_rank(&self) -> u32 {
        self.summands.iter().map(|s| s.r_k).sum()
    }

    pub fn order(&self) -> u32 {
        self.summands
            .iter()
            .map(|s| num::integer::lcm(s.ell.order(), s.g.order()))
            .fold(1, num::integer::lcm)
    }

    pub fn nvars(&self) -> usize {
        self.summands
            .iter()
            .map(|s| s.ell.nvars().max(s.g.nvars()))
            .max()
            .unwrap_or(0)
    }

    pub fn expand(&self) -> Poly {
        let order = self.order();
        let nvars = self.nvars();
        let mut acc = Poly::zero(order, nvars);
        for s in &self.summands {
            let pow = self.d + 1 - s.r_k;
            acc = acc.add(
                &s.ell
                    .to_poly_n(order, nvars)
                    .pow(pow)
                    .mul(&s.g.embed(order).unwrap().with_nvars(nvars)),
            );
        }
        acc
    }
}

/// A sum of powers of affine linear forms with bounded summand count and
/// exponents: `sum_i scale_i * (const_i + form_i)^{e_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaLambdaSigma {
    pub summands: Vec<SlsSummand>,
    /// declared bound on the summand count
    pub s_bound: usize,
    /// declared bound on the exponents
    pub e_bound: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlsSummand {
    pub scale: LaurentScalar,
    pub affine_const: LaurentScalar,
    pub form: LinearForm,
    pub exponent: u32,
}

impl SigmaLambdaSigma {
    pub fn new(summands: Vec<SlsSummand>, s_bound: usize, e_bound: u32) -> Result<Self> {
        if summands.len() > s_bound {
            return Err(Error::ConstraintViolation(format!(
                "SigmaLambdaSigma: {} summands exceed bound {}",
                summands.len(),
                s_bound
            )));
        }
        if summands.iter().any(|s| s.exponent > e_bound) {
            return Err(Error::ConstraintViolation(
                "SigmaLambdaSigma: exponent exceeds bound".into(),
            ));
        }
        Ok(SigmaLambdaSigma {
            summands,
            s_bound,
            e_bound,
        })
    }

    pub fn order(&self) -> u32 {
        self.summands
            .iter()
            .map(|s| {
                num::integer::lcm(
                    num::integer::lcm(s.scale.order(), s.affine_const.order()),
                    s.form.order(),
                )
            })
            .fold(1, num::integer::lcm)
    }

    pub fn nvars(&self) -> usize {
        self.summands
            .iter()
            .map(|s| s.form.nvars())
            .max()
            .unwrap_or(0)
    }

    pub fn expand(&self) -> Poly {
        let order = self.order();
        let nvars = self.nvars();
        let mut acc = Poly::zero(order, nvars);
        for s in &self.summands {
            let affine = Poly::constant(nvars, s.affine_const.embed(order).unwrap())
                .add(&s.form.to_poly_n(order, nvars));
            acc = acc.add(&affine.pow(s.exponent).scale(&s.scale));
        }
        acc
    }

    pub fn limit(&self) -> Result<Poly> {
        self.expand().limit()
    }
}

/// The product factorization returned by the Plus regime of Kumar inversion:
/// the represented polynomial is `scale * prod_i form_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductForm {
    pub scale: LaurentScalar,
    pub forms: Vec<LinearForm>,
}

impl ProductForm {
    pub fn expand(&self) -> Poly {
        let order = self
            .forms
            .iter()
            .map(|f| f.order())
            .fold(self.scale.order(), num::integer::lcm);
        let nvars = self.forms.iter().map(|f| f.nvars()).max().unwrap_or(0);
        let mut acc = Poly::constant(nvars, self.scale.embed(order).unwrap());
        for f in &self.forms {
            acc = acc.mul(&f.to_poly_n(order, nvars));
        }
        acc
    }
}
