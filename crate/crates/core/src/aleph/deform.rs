//! Maurer-Cartan elements, the twisted differential, first-order deformations and
//! the bracket on the Gerstenhaber-Schack space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{bracket, gerstenhaber_bracket, gerstenhaber_cobracket, mixed_bracket, AlephElement, Generator};
use crate::bialgebra::{self, require_bialgebra, DefectReport};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::scalar::{self, Scalar};
use crate::tensor::TensorMap;

fn beta(p: &TensorMap, t: &TensorMap) -> Result<AlephElement> {
    AlephElement::psi_bar(p.clone())?.add(&AlephElement::theta_bar(t.clone())?)
}

/// `[β, β]` for `β = Ψ̄ + Θ̄`.
pub fn mc_defect(p: &TensorMap, t: &TensorMap) -> Result<AlephElement> {
    let b = beta(p, t)?;
    bracket(&b, &b)
}

/// Associative, coassociative and compatible.
pub fn is_bialgebra(p: &TensorMap, t: &TensorMap) -> Result<bool> {
    bialgebra::is_bialgebra(p, t)
}

/// `ad(β) x = [β, x]`; refuses a `β` that is not a bialgebra.
pub fn twisted_differential(p: &TensorMap, t: &TensorMap, x: &AlephElement) -> Result<AlephElement> {
    require_bialgebra(p, t)?;
    bracket(&beta(p, t)?, x)
}

/// `f'(0)` from `f(0), …, f(4)`, exact for polynomials of degree at most 4.
fn derivative_at_zero(f: impl Fn(&Scalar) -> Result<TensorMap>) -> Result<TensorMap> {
    const WEIGHTS: [i64; 5] = [-25, 48, -36, 16, -3];
    let mut acc: Option<TensorMap> = None;
    for (k, w) in WEIGHTS.iter().enumerate() {
        let term = f(&scalar::int(k as i64))?.scale(&scalar::ratio(*w, 12));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("five nodes"))
}

fn shifted(x: &TensorMap, dx: &TensorMap, eps: &Scalar) -> Result<TensorMap> {
    x.add(&dx.scale(eps))
}

/// First-order parts in `ε` of the associator, coassociator and compatibility
/// defect of `(P + εP1, T + εT1)`.
pub fn first_order_defect(p: &TensorMap, t: &TensorMap, p1: &TensorMap, t1: &TensorMap) -> Result<DefectReport> {
    Ok(DefectReport {
        associator: derivative_at_zero(|e| bialgebra::associator(&shifted(p, p1, e)?))?,
        coassociator: derivative_at_zero(|e| bialgebra::coassociator(&shifted(t, t1, e)?))?,
        compatibility: derivative_at_zero(|e| bialgebra::compatibility_defect(&shifted(p, p1, e)?, &shifted(t, t1, e)?))?,
    })
}

/// `½ d/dε [β_ε, β_ε]` at `ε = 0` for `β_ε = bar(P + εP1) + bar(T + εT1)`, taken on the
/// tensors carried by each component.
pub fn first_order_differential(p: &TensorMap, t: &TensorMap, p1: &TensorMap, t1: &TensorMap) -> Result<AlephElement> {
    let half = scalar::ratio(1, 2);
    let psi = derivative_at_zero(|e| {
        let q = shifted(p, p1, e)?;
        Ok(gerstenhaber_bracket(&q, &q)?.scale(&half))
    })?;
    let theta = derivative_at_zero(|e| {
        let q = shifted(t, t1, e)?;
        Ok(gerstenhaber_cobracket(&q, &q)?.scale(&half))
    })?;
    let alpha = derivative_at_zero(|e| mixed_bracket(&shifted(t, t1, e)?, &shifted(p, p1, e)?))?;
    AlephElement::psi_bar(psi)?
        .add(&AlephElement::theta_bar(theta)?)?
        .add(&AlephElement::alpha(alpha)?)
}

/// A basis of the pairs `(P1, T1)` with `(P + εP1, T + εT1)` a bialgebra modulo `ε²`.
pub fn first_order_deformations(p: &TensorMap, t: &TensorMap) -> Result<Vec<(TensorMap, TensorMap)>> {
    let d = p.dim();
    let np = d * d * d;
    let unknowns = 2 * np;
    let unit = |k: usize| -> Result<(TensorMap, TensorMap)> {
        let mut a = vec![scalar::zero(); np];
        let mut b = a.clone();
        if k < np {
            a[k] = scalar::one();
        } else {
            b[k - np] = scalar::one();
        }
        Ok((TensorMap::new(2, 1, d, a)?, TensorMap::new(1, 2, d, b)?))
    };
    let mut columns = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        let (p1, t1) = unit(k)?;
        let r = first_order_defect(p, t, &p1, &t1)?;
        let mut col = r.associator.coeffs().to_vec();
        col.extend_from_slice(r.coassociator.coeffs());
        col.extend_from_slice(r.compatibility.coeffs());
        columns.push(col);
    }
    let equations: Vec<Vec<Scalar>> = (0..columns[0].len())
        .map(|row| columns.iter().map(|c| c[row].clone()).collect())
        .collect();
    Echelon::new(equations, unknowns)
        .nullspace()
        .into_iter()
        .map(|v| Ok((TensorMap::new(2, 1, d, v[..np].to_vec())?, TensorMap::new(1, 2, d, v[np..].to_vec())?)))
        .collect()
}

/// A homogeneous element of the Gerstenhaber-Schack space: one map with
/// `m, n ≥ 1` and `m + n ≥ 3`.
pub type GsElement = TensorMap;

fn embed(x: &GsElement) -> Result<AlephElement> {
    match (x.inputs(), x.outputs()) {
        (m, 1) if m >= 2 => AlephElement::psi_bar(x.clone()),
        (1, n) if n >= 2 => AlephElement::theta_bar(x.clone()),
        (m, n) if m >= 2 && n >= 2 => AlephElement::alpha(x.clone()),
        (m, n) => Err(Error::InvalidArity {
            what: "Gerstenhaber-Schack element".into(),
            m,
            n,
        }),
    }
}

/// Brackets the images in ℵ and pulls the result back. `Ok(Some(None))` is zero;
/// `Ok(None)` means the bracket left the image.
pub fn gs_bracket(x: &GsElement, y: &GsElement) -> Result<Option<Option<TensorMap>>> {
    let z = bracket(&embed(x)?, &embed(y)?)?;
    Ok(z.as_single().map(|g| {
        g.map(|g| match g {
            Generator::PsiBar(t) | Generator::ThetaBar(t) | Generator::Alpha(t) => t,
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyReport {
    pub samples: usize,
    pub closed: usize,
    pub one_output_pairs: usize,
    pub counterexample: Option<String>,
}

impl TangencyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && self.closed == self.samples
    }
}

/// Brackets random homogeneous pairs with `m + n <= bound`, checks that the result
/// is again an image, and that one-output pairs pull back to the Gerstenhaber bracket.
pub fn tangency_check(d: usize, bound: usize, samples: usize, seed: u64) -> Result<TangencyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TangencyReport {
        samples,
        closed: 0,
        one_output_pairs: 0,
        counterexample: None,
    };
    let arity = |rng: &mut ChaCha8Rng| {
        let total = rng.gen_range(3..=bound.max(3));
        let m = rng.gen_range(1..total);
        (m, total - m)
    };
    for _ in 0..samples {
        let (m1, n1) = arity(&mut rng);
        let (m2, n2) = arity(&mut rng);
        let x = TensorMap::random(m1, n1, d, &mut rng);
        let y = TensorMap::random(m2, n2, d, &mut rng);
        match gs_bracket(&x, &y)? {
            None => {
                report.counterexample = Some(format!("bracket of ({m1},{n1}) and ({m2},{n2}) left the image"));
                break;
            }
            Some(pulled) => {
                report.closed += 1;
                if n1 == 1 && n2 == 1 {
                    report.one_output_pairs += 1;
                    let expected = gerstenhaber_bracket(&x, &y)?;
                    let got_matches = match &pulled {
                        None => expected.is_zero(),
                        Some(t) => *t == expected,
                    };
                    if !got_matches {
                        report.counterexample =
                            Some(format!("pullback of ({m1},1),({m2},1) differs from the Gerstenhaber bracket"));
                        break;
                    }
                }
            }
        }
    }
    Ok(report)
}
