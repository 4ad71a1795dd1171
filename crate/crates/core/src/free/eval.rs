//! Evaluation of words in `End(V)`.

use super::{FreeWord, GeneratorSymbol};
use crate::bialgebra::{iterated_coproduct, iterated_product};
use crate::endv::{self, Column, EndComponent, Kind, Row};
use crate::error::{Error, Result};
use crate::tensor::{self, TensorMap};

/// A choice of `End(V)` component for each generator.
pub type Assignment<'a> = dyn Fn(&GeneratorSymbol) -> Result<EndComponent> + 'a;

fn check(g: &GeneratorSymbol, c: &EndComponent) -> Result<()> {
    let kind_ok = matches!(
        (g.kind, c),
        (Kind::Plain, EndComponent::Plain(_)) | (Kind::Row, EndComponent::Row(_)) | (Kind::Column, EndComponent::Column(_))
    );
    if kind_ok && c.arity() == (g.m, g.n) {
        Ok(())
    } else {
        let (m, n) = c.arity();
        Err(Error::ArityMismatch {
            left: g.to_string(),
            right: format!("{:?} component ({m},{n})", c.kind()),
            detail: "assignment does not respect the signature".into(),
        })
    }
}

/// Replaces every generator by its assigned component and composes.
pub fn evaluate(w: &FreeWord, assign: &Assignment) -> Result<EndComponent> {
    match w {
        FreeWord::Gen(g) => {
            let c = assign(g)?;
            check(g, &c)?;
            Ok(c)
        }
        FreeWord::Compose { op, left, right, index } => {
            endv::compose_components(*op, &evaluate(left, assign)?, &evaluate(right, assign)?, *index)
        }
    }
}

/// Sends every plain `(m,n)` generator to `Δ^{n−1}∘★^{m−1}`, columns to copies of
/// `★^{m−1}` and rows to copies of `Δ^{n−1}`.
pub fn bialgebra_assignment<'a>(
    star: &'a TensorMap,
    delta: &'a TensorMap,
) -> impl Fn(&GeneratorSymbol) -> Result<EndComponent> + 'a {
    move |g| match g.kind {
        Kind::Plain => Ok(EndComponent::Plain(tensor::compose(
            &iterated_coproduct(delta, g.n)?,
            &iterated_product(star, g.m)?,
        )?)),
        Kind::Column => Ok(EndComponent::Column(Column::repeat(&iterated_product(star, g.m)?, g.n)?)),
        Kind::Row => Ok(EndComponent::Row(Row::repeat(&iterated_coproduct(delta, g.n)?, g.m)?)),
    }
}
