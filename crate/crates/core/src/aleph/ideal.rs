//! Finite-span membership tests for the ideals generated by Jacobi defects.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{bracket, jacobiator, AlephElement, Generator};
use crate::error::Result;
use crate::linalg::Echelon;
use crate::scalar::Scalar;
use crate::tensor::TensorMap;

/// Which Jacobi defects generate the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ideal {
    /// Triples of `Ψ̄`'s.
    LowerG,
    /// Triples of `Θ̄`'s.
    UpperG,
    /// Triples with at least one `Ψ̄` and one `Θ̄`.
    Mixed,
    /// All of the above.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Member,
    /// Not in the span of the generators built from this context.
    NotInSpan,
    /// The context cannot even produce some term of the element.
    Inconclusive(String),
}

fn pool(context: &[TensorMap]) -> Result<Vec<AlephElement>> {
    let mut out = Vec::new();
    for t in context {
        if t.outputs() == 1 && t.inputs() >= 2 {
            out.push(AlephElement::psi_bar(t.clone())?);
        } else if t.inputs() == 1 && t.outputs() >= 2 {
            out.push(AlephElement::theta_bar(t.clone())?);
        }
    }
    Ok(out.into_iter().filter(|x| !x.is_zero()).collect())
}

fn is_psi(x: &AlephElement) -> bool {
    matches!(x.terms()[0].0, Generator::PsiBar(_))
}

/// Jacobi defects of bar triples from `context`, and their brackets with one more bar.
pub fn ideal_generators(which: Ideal, context: &[TensorMap]) -> Result<Vec<AlephElement>> {
    let bars = pool(context)?;
    let admissible = |a: &AlephElement, b: &AlephElement, c: &AlephElement| {
        let psis = [a, b, c].iter().filter(|x| is_psi(x)).count();
        match which {
            Ideal::LowerG => psis == 3,
            Ideal::UpperG => psis == 0,
            Ideal::Mixed => psis == 1 || psis == 2,
            Ideal::Full => true,
        }
    };
    let mut gens = Vec::new();
    for a in &bars {
        for b in &bars {
            for c in &bars {
                if admissible(a, b, c) {
                    let j = jacobiator(a, b, c)?;
                    if !j.is_zero() {
                        for d in &bars {
                            let jd = bracket(&j, d)?;
                            if !jd.is_zero() {
                                gens.push(jd);
                            }
                        }
                        gens.push(j);
                    }
                }
            }
        }
    }
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Coord {
    Bar(Generator),
    Alpha(usize, usize),
}

fn coords(x: &AlephElement) -> Vec<(Coord, Vec<Scalar>)> {
    let mut v: Vec<(Coord, Vec<Scalar>)> = x
        .bar_terms()
        .map(|(g, c)| (Coord::Bar(g.clone()), vec![c.clone()]))
        .collect();
    v.extend(
        x.alpha_terms()
            .map(|t| (Coord::Alpha(t.inputs(), t.outputs()), t.coeffs().to_vec())),
    );
    v
}

/// Whether `x` lies in the span of [`ideal_generators`] for the given context.
pub fn ideal_membership(x: &AlephElement, which: Ideal, context: &[TensorMap]) -> Result<Membership> {
    if x.is_zero() {
        return Ok(Membership::Member);
    }
    let gens = ideal_generators(which, context)?;
    let mut layout: BTreeMap<Coord, (usize, usize)> = BTreeMap::new();
    let mut width = 0;
    for g in &gens {
        for (c, v) in coords(g) {
            layout.entry(c).or_insert_with(|| {
                let start = width;
                width += v.len();
                (start, v.len())
            });
        }
    }
    for (c, _) in coords(x) {
        if !layout.contains_key(&c) {
            let what = match c {
                Coord::Bar(g) => format!("a degree-{} bar term", g.degree()),
                Coord::Alpha(m, n) => format!("the ({m},{n}) linear part"),
            };
            return Ok(Membership::Inconclusive(format!("no generator from this context touches {what}")));
        }
    }
    let vector = |e: &AlephElement| {
        let mut out = vec![Scalar::zero(); width];
        for (c, v) in coords(e) {
            let (start, _) = layout[&c];
            for (k, s) in v.into_iter().enumerate() {
                out[start + k] = s;
            }
        }
        out
    };
    let span = Echelon::new(gens.iter().map(vector).collect(), width);
    Ok(if span.contains(&vector(x)) {
        Membership::Member
    } else {
        Membership::NotInSpan
    })
}
