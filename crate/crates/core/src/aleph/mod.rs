//! The graded Lie algebra ℵ: bars of one-output and one-input maps, plain maps
//! with at least two inputs and two outputs, and the bracket between them.

mod brackets;
mod deform;
mod ideal;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::tensor::TensorMap;

pub use brackets::{
    alpha_theta, bracket, bracket_generators, gerstenhaber_bracket, gerstenhaber_cobracket, jacobiator,
    mixed_bracket, mixed_sign, psi_alpha, sign_table, SignEntry,
};
pub use deform::{
    first_order_defect, first_order_deformations, first_order_differential, gs_bracket, is_bialgebra, mc_defect,
    tangency_check, twisted_differential, GsElement, TangencyReport,
};
pub use ideal::{ideal_generators, ideal_membership, Ideal, Membership};

/// A basis element of ℵ: bars are formal symbols (two bars are equal only when
/// their tensors are), while `Alpha` stands for the linear summand of that arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    PsiBar(TensorMap),
    ThetaBar(TensorMap),
    Alpha(TensorMap),
}

impl Generator {
    pub fn degree(&self) -> usize {
        match self {
            Generator::PsiBar(t) => t.inputs() - 1,
            Generator::ThetaBar(t) => t.outputs() - 1,
            Generator::Alpha(t) => t.inputs() + t.outputs() - 2,
        }
    }

    pub fn tensor(&self) -> &TensorMap {
        match self {
            Generator::PsiBar(t) | Generator::ThetaBar(t) | Generator::Alpha(t) => t,
        }
    }
}

/// A finite combination of bar generators plus one map per `(m, n)` in the linear part.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlephElement {
    bars: BTreeMap<Generator, Scalar>,
    alpha: BTreeMap<(usize, usize), TensorMap>,
}

impl AlephElement {
    pub fn zero() -> Self {
        AlephElement::default()
    }

    /// `Ψ̄` for `Ψ: V^{⊗m} → V`, `m ≥ 2`; the bar of the zero map is zero.
    pub fn psi_bar(t: TensorMap) -> Result<Self> {
        if t.outputs() != 1 || t.inputs() < 2 {
            return Err(Error::InvalidArity {
                what: "Ψ̄".into(),
                m: t.inputs(),
                n: t.outputs(),
            });
        }
        Ok(AlephElement::from_generator(Generator::PsiBar(t)))
    }

    /// `Θ̄` for `Θ: V → V^{⊗n}`, `n ≥ 2`; the bar of the zero map is zero.
    pub fn theta_bar(t: TensorMap) -> Result<Self> {
        if t.inputs() != 1 || t.outputs() < 2 {
            return Err(Error::InvalidArity {
                what: "Θ̄".into(),
                m: t.inputs(),
                n: t.outputs(),
            });
        }
        Ok(AlephElement::from_generator(Generator::ThetaBar(t)))
    }

    /// A map with at least two inputs and two outputs.
    pub fn alpha(t: TensorMap) -> Result<Self> {
        if t.inputs() < 2 || t.outputs() < 2 {
            return Err(Error::InvalidArity {
                what: "α".into(),
                m: t.inputs(),
                n: t.outputs(),
            });
        }
        Ok(AlephElement::from_generator(Generator::Alpha(t)))
    }

    pub(crate) fn from_generator(g: Generator) -> Self {
        let mut x = AlephElement::zero();
        x.add_term(g, &Scalar::from_integer(1.into()));
        x
    }

    fn add_term(&mut self, g: Generator, c: &Scalar) {
        if c.is_zero() || g.tensor().is_zero() {
            return;
        }
        match g {
            Generator::Alpha(t) => {
                let key = (t.inputs(), t.outputs());
                let t = t.scale(c);
                let sum = match self.alpha.remove(&key) {
                    Some(old) => old.add(&t).expect("callers check that dimensions agree"),
                    None => t,
                };
                if !sum.is_zero() {
                    self.alpha.insert(key, sum);
                }
            }
            bar => {
                let e = self.bars.entry(bar).or_insert_with(Scalar::zero);
                *e += c;
                if e.is_zero() {
                    self.bars.retain(|_, v| !v.is_zero());
                }
            }
        }
    }

    /// Terms as `(generator, coefficient)`; each linear-part map appears once with coefficient 1.
    pub fn terms(&self) -> Vec<(Generator, Scalar)> {
        let one = Scalar::from_integer(1.into());
        let mut v: Vec<(Generator, Scalar)> = self.bars.iter().map(|(g, c)| (g.clone(), c.clone())).collect();
        v.extend(self.alpha.values().map(|t| (Generator::Alpha(t.clone()), one.clone())));
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Generator, Scalar)>) -> Result<Self> {
        let mut x = AlephElement::zero();
        for (g, c) in terms {
            x.check_dim(g.tensor().dim())?;
            x.add_term(g, &c);
        }
        Ok(x)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self.dim() {
            Some(e) if e != d => Err(Error::DimensionMismatch(e, d)),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.bars
            .keys()
            .next()
            .map(|g| g.tensor().dim())
            .or_else(|| self.alpha.values().next().map(TensorMap::dim))
    }

    pub fn is_zero(&self) -> bool {
        self.bars.is_empty() && self.alpha.is_empty()
    }

    pub fn add(&self, other: &AlephElement) -> Result<AlephElement> {
        if let Some(d) = other.dim() {
            self.check_dim(d)?;
        }
        let mut x = self.clone();
        for (g, c) in other.terms() {
            x.add_term(g, &c);
        }
        Ok(x)
    }

    pub fn scale(&self, c: &Scalar) -> AlephElement {
        let mut x = AlephElement::zero();
        for (g, k) in self.terms() {
            x.add_term(g, &(k * c));
        }
        x
    }

    pub fn neg(&self) -> AlephElement {
        self.scale(&scalar::int(-1))
    }

    pub fn sub(&self, other: &AlephElement) -> Result<AlephElement> {
        self.add(&other.neg())
    }

    /// Coefficient of a bar generator.
    pub fn coefficient(&self, g: &Generator) -> Scalar {
        self.bars.get(g).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The linear-part map of arity `(m, n)`, if nonzero.
    pub fn alpha_component(&self, m: usize, n: usize) -> Option<&TensorMap> {
        self.alpha.get(&(m, n))
    }

    pub fn bar_terms(&self) -> impl Iterator<Item = (&Generator, &Scalar)> {
        self.bars.iter()
    }

    pub fn alpha_terms(&self) -> impl Iterator<Item = &TensorMap> {
        self.alpha.values()
    }

    /// Whether the element is a single generator with coefficient 1, or zero.
    pub fn as_single(&self) -> Option<Option<Generator>> {
        let t = self.terms();
        match t.len() {
            0 => Some(None),
            1 if t[0].1 == Scalar::from_integer(1.into()) => Some(Some(t[0].0.clone())),
            _ => None,
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, t) = match self {
            Generator::PsiBar(t) => ("psi_bar", t),
            Generator::ThetaBar(t) => ("theta_bar", t),
            Generator::Alpha(t) => ("alpha", t),
        };
        let mut st = s.serialize_struct("Generator", 3)?;
        st.serialize_field("kind", kind)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("tensor", t)?;
        st.end()
    }
}

impl Serialize for AlephElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coefficient: String,
            generator: &'a Generator,
        }
        let terms: Vec<(Generator, Scalar)> = self.terms();
        let shown: Vec<Term> = terms
            .iter()
            .map(|(g, c)| Term {
                coefficient: scalar::format(c),
                generator: g,
            })
            .collect();
        let mut st = s.serialize_struct("AlephElement", 2)?;
        st.serialize_field("zero", &self.is_zero())?;
        st.serialize_field("terms", &shown)?;
        st.end()
    }
}
