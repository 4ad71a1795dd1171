//! The bracket of ℵ on generators, extended bilinearly.

use serde::Serialize;

use super::{AlephElement, Generator};
use crate::endv::{self, Column, Row};
use crate::error::{Error, Result};
use crate::perm::{koszul_sign, Permutation};
use crate::scalar::{self, Scalar};
use crate::tensor::{self, TensorMap};

fn check_dim(a: &TensorMap, b: &TensorMap) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(a.dim(), b.dim()))
    }
}

fn one_output(p: &TensorMap, what: &str) -> Result<()> {
    if p.outputs() == 1 && p.inputs() >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArity {
            what: what.into(),
            m: p.inputs(),
            n: p.outputs(),
        })
    }
}

fn one_input(t: &TensorMap, what: &str) -> Result<()> {
    if t.inputs() == 1 && t.outputs() >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArity {
            what: what.into(),
            m: t.inputs(),
            n: t.outputs(),
        })
    }
}

/// `Σ_j (−1)^{(j−1)(m2−1)} p1(… , p2 at input j, …)`.
fn insert_all_inputs(p1: &TensorMap, p2: &TensorMap) -> Result<TensorMap> {
    let mut acc = TensorMap::zeros(p1.inputs() + p2.inputs() - 1, 1, p1.dim());
    for j in 1..=p1.inputs() {
        let c = scalar::sign((j - 1) * (p2.inputs() - 1));
        acc.axpy(&c, &endv::jcirc(p2, p1, j)?)?;
    }
    Ok(acc)
}

/// `Σ_i (−1)^{(i−1)(n2−1)} t2 applied to output i of t1`.
fn insert_all_outputs(t1: &TensorMap, t2: &TensorMap) -> Result<TensorMap> {
    let mut acc = TensorMap::zeros(1, t1.outputs() + t2.outputs() - 1, t1.dim());
    for i in 1..=t1.outputs() {
        let c = scalar::sign((i - 1) * (t2.outputs() - 1));
        acc.axpy(&c, &endv::circ_i(t1, t2, i)?)?;
    }
    Ok(acc)
}

/// `[P1, P2] = P1•P2 − (−1)^{(m1−1)(m2−1)} P2•P1` with `•` the signed sum of insertions.
pub fn gerstenhaber_bracket(p1: &TensorMap, p2: &TensorMap) -> Result<TensorMap> {
    one_output(p1, "bracket operand")?;
    one_output(p2, "bracket operand")?;
    check_dim(p1, p2)?;
    let c = scalar::sign((p1.inputs() - 1) * (p2.inputs() - 1));
    insert_all_inputs(p1, p2)?.sub(&insert_all_inputs(p2, p1)?.scale(&c))
}

/// The mirror of [`gerstenhaber_bracket`] on maps with one input.
pub fn gerstenhaber_cobracket(t1: &TensorMap, t2: &TensorMap) -> Result<TensorMap> {
    one_input(t1, "cobracket operand")?;
    one_input(t2, "cobracket operand")?;
    check_dim(t1, t2)?;
    let c = scalar::sign((t1.outputs() - 1) * (t2.outputs() - 1));
    insert_all_outputs(t1, t2)?.sub(&insert_all_outputs(t2, t1)?.scale(&c))
}

/// Koszul sign of regrouping `m·n` odd legs from blocks by input to blocks by output.
pub fn mixed_sign(m: usize, n: usize) -> Scalar {
    let p = Permutation::new((0..m * n).map(|pos| (pos % n) * m + pos / n).collect())
        .expect("regrouping is a bijection");
    koszul_sign(&p, &vec![1; m * n]).expect("lengths agree")
}

/// `T∘P + κ·(P^{⊗n} ⊚ T^{⊗m})` with `κ` from [`mixed_sign`]; for `m = n = 2` this is
/// `a⊗b ↦ Δ(a★b) − Δ(a)★Δ(b)`.
pub fn mixed_bracket(t: &TensorMap, p: &TensorMap) -> Result<TensorMap> {
    one_input(t, "mixed bracket Θ")?;
    one_output(p, "mixed bracket Ψ")?;
    check_dim(t, p)?;
    let (m, n) = (p.inputs(), t.outputs());
    let through = endv::circledcirc(&Column::repeat(p, n)?, &Row::repeat(t, m)?)?;
    tensor::compose(t, p)?.add(&through.scale(&mixed_sign(m, n)))
}

/// `[Ψ̄, α] = −(−1)^{|Ψ||α|} Σ_j (−1)^{(j−1)|Ψ|} Ψ inserted at input j of α`.
pub fn psi_alpha(p: &TensorMap, a: &TensorMap) -> Result<TensorMap> {
    one_output(p, "Ψ̄ in [Ψ̄,α]")?;
    check_dim(p, a)?;
    let dp = p.inputs() - 1;
    let da = a.inputs() + a.outputs() - 2;
    let mut acc = TensorMap::zeros(a.inputs() + p.inputs() - 1, a.outputs(), a.dim());
    for j in 1..=a.inputs() {
        acc.axpy(&scalar::sign((j - 1) * dp), &endv::jcirc(p, a, j)?)?;
    }
    Ok(acc.scale(&-scalar::sign(dp * da)))
}

/// `[α, Θ̄] = (−1)^{|Θ|(m−1)} Σ_i (−1)^{(i−1)|Θ|} Θ applied to output i of α`, where `m`
/// is the number of inputs of α: outputs sit after the inputs, so Θ passes over them.
pub fn alpha_theta(a: &TensorMap, t: &TensorMap) -> Result<TensorMap> {
    one_input(t, "Θ̄ in [α,Θ̄]")?;
    check_dim(a, t)?;
    let dt = t.outputs() - 1;
    let mut acc = TensorMap::zeros(a.inputs(), a.outputs() + t.outputs() - 1, a.dim());
    for i in 1..=a.outputs() {
        acc.axpy(&scalar::sign((i - 1) * dt), &endv::circ_i(a, t, i)?)?;
    }
    Ok(acc.scale(&scalar::sign(dt * (a.inputs() - 1))))
}

/// `−(−1)^{|x||y|}`: the factor relating `[y, x]` to `[x, y]`.
fn swap_sign(dx: usize, dy: usize) -> Scalar {
    -scalar::sign(dx * dy)
}

/// The bracket of two generators.
pub fn bracket_generators(g: &Generator, h: &Generator) -> Result<AlephElement> {
    use Generator::*;
    check_dim(g.tensor(), h.tensor())?;
    let flip = swap_sign(g.degree(), h.degree());
    Ok(match (g, h) {
        (PsiBar(p1), PsiBar(p2)) => AlephElement::from_generator(PsiBar(gerstenhaber_bracket(p1, p2)?)),
        (ThetaBar(t1), ThetaBar(t2)) => AlephElement::from_generator(ThetaBar(gerstenhaber_cobracket(t1, t2)?)),
        (ThetaBar(t), PsiBar(p)) => AlephElement::from_generator(Alpha(mixed_bracket(t, p)?)),
        (PsiBar(p), ThetaBar(t)) => AlephElement::from_generator(Alpha(mixed_bracket(t, p)?.scale(&flip))),
        (PsiBar(p), Alpha(a)) => AlephElement::from_generator(Alpha(psi_alpha(p, a)?)),
        (Alpha(a), PsiBar(p)) => AlephElement::from_generator(Alpha(psi_alpha(p, a)?.scale(&flip))),
        (Alpha(a), ThetaBar(t)) => AlephElement::from_generator(Alpha(alpha_theta(a, t)?)),
        (ThetaBar(t), Alpha(a)) => AlephElement::from_generator(Alpha(alpha_theta(a, t)?.scale(&flip))),
        (Alpha(_), Alpha(_)) => AlephElement::zero(),
    })
}

/// The bracket of ℵ, bilinear in both arguments.
pub fn bracket(x: &AlephElement, y: &AlephElement) -> Result<AlephElement> {
    let mut acc = AlephElement::zero();
    for (g, a) in x.terms() {
        for (h, b) in y.terms() {
            acc = acc.add(&bracket_generators(&g, &h)?.scale(&(&a * &b)))?;
        }
    }
    Ok(acc)
}

/// `[[x,y],z] − [x,[y,z]] + (−1)^{|x||y|}[y,[x,z]]`, extended trilinearly over
/// homogeneous terms.
pub fn jacobiator(x: &AlephElement, y: &AlephElement, z: &AlephElement) -> Result<AlephElement> {
    let mut acc = AlephElement::zero();
    for (g, a) in x.terms() {
        for (h, b) in y.terms() {
            for (k, c) in z.terms() {
                let (g1, h1, k1) = (
                    AlephElement::from_generator(g.clone()),
                    AlephElement::from_generator(h.clone()),
                    AlephElement::from_generator(k.clone()),
                );
                let first = bracket(&bracket(&g1, &h1)?, &k1)?;
                let second = bracket(&g1, &bracket(&h1, &k1)?)?;
                let third = bracket(&h1, &bracket(&g1, &k1)?)?.scale(&scalar::sign(g.degree() * h.degree()));
                let j = first.sub(&second)?.add(&third)?;
                acc = acc.add(&j.scale(&(&a * &b * &c)))?;
            }
        }
    }
    Ok(acc)
}

/// One row of the resolved sign table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignEntry {
    pub case: &'static str,
    pub rule: &'static str,
}

/// The sign conventions used by [`bracket`], with degrees |Ψ| = m−1, |Θ| = n−1, |α| = m+n−2.
pub fn sign_table() -> Vec<SignEntry> {
    vec![
        SignEntry {
            case: "[Ψ̄1,Ψ̄2]",
            rule: "bar of Ψ1•Ψ2 − (−1)^{|Ψ1||Ψ2|} Ψ2•Ψ1, where Ψ1•Ψ2 = Σ_j (−1)^{(j−1)|Ψ2|} Ψ2 inserted at input j of Ψ1",
        },
        SignEntry {
            case: "[Θ̄1,Θ̄2]",
            rule: "bar of Θ1•Θ2 − (−1)^{|Θ1||Θ2|} Θ2•Θ1, where Θ1•Θ2 = Σ_i (−1)^{(i−1)|Θ2|} Θ2 applied to output i of Θ1",
        },
        SignEntry {
            case: "[Θ̄,Ψ̄]",
            rule: "Θ∘Ψ + κ(m,n)·(Ψ^{⊗n} ⊚ Θ^{⊗m}), κ(m,n) = Koszul sign of regrouping m·n odd legs = (−1)^{C(m,2)·C(n,2)}; κ(2,2) = −1",
        },
        SignEntry {
            case: "[Ψ̄,α]",
            rule: "−(−1)^{|Ψ||α|} Σ_j (−1)^{(j−1)|Ψ|} Ψ inserted at input j of α",
        },
        SignEntry {
            case: "[α,Θ̄]",
            rule: "(−1)^{|Θ|(m−1)} Σ_i (−1)^{(i−1)|Θ|} Θ applied to output i of α, m = inputs of α",
        },
        SignEntry {
            case: "[y,x] for the pairs above",
            rule: "−(−1)^{|x||y|}[x,y]",
        },
        SignEntry {
            case: "all other pairs",
            rule: "0",
        },
    ]
}
