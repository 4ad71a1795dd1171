//! The 2/3-PROP `Bi` of permutation pairs and its evaluation `φ` into `End(V)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bialgebra::{iterated_coproduct, iterated_product, require_bialgebra};
pub use crate::endv::Kind;
use crate::endv::{self, Column, EndComponent, Op, Row};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tensor::{self, TensorMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BiElement {
    /// `σ^∨ × σ ∈ Σ_m^∨ × Σ_n`.
    Plain { tau: Permutation, sigma: Permutation },
    /// `m` copies of a `(1,n)` slot, carrying `σ ∈ Σ_n`.
    Row { copies: usize, sigma: Permutation },
    /// `n` copies of an `(m,1)` slot, carrying `σ^∨ ∈ Σ_m^∨`.
    Column { copies: usize, tau: Permutation },
}

impl fmt::Display for BiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiElement::Plain { tau, sigma } => write!(f, "{tau}x{sigma}"),
            BiElement::Row { copies, sigma } => write!(f, "row{copies}{sigma}"),
            BiElement::Column { copies, tau } => write!(f, "col{copies}{tau}"),
        }
    }
}

impl BiElement {
    pub fn plain(tau: Permutation, sigma: Permutation) -> Result<Self> {
        let (m, n) = (tau.size(), sigma.size());
        if m < 1 || n < 1 || m + n < 3 {
            return Err(Error::InvalidArity {
                what: "Bi plain component".into(),
                m,
                n,
            });
        }
        Ok(BiElement::Plain { tau, sigma })
    }

    pub fn row(copies: usize, sigma: Permutation) -> Result<Self> {
        if copies < 2 || sigma.size() < 2 {
            return Err(Error::InvalidArity {
                what: "Bi row component".into(),
                m: copies,
                n: sigma.size(),
            });
        }
        Ok(BiElement::Row { copies, sigma })
    }

    pub fn column(copies: usize, tau: Permutation) -> Result<Self> {
        if copies < 2 || tau.size() < 2 {
            return Err(Error::InvalidArity {
                what: "Bi column component".into(),
                m: tau.size(),
                n: copies,
            });
        }
        Ok(BiElement::Column { copies, tau })
    }

    /// The unit `Id^∨ × Id` of the given kind and arity.
    pub fn identity(kind: Kind, m: usize, n: usize) -> Result<Self> {
        match kind {
            Kind::Plain => BiElement::plain(Permutation::identity(m), Permutation::identity(n)),
            Kind::Row => BiElement::row(m, Permutation::identity(n)),
            Kind::Column => BiElement::column(n, Permutation::identity(m)),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            BiElement::Plain { .. } => Kind::Plain,
            BiElement::Row { .. } => Kind::Row,
            BiElement::Column { .. } => Kind::Column,
        }
    }

    /// `(m, n)` with the same conventions as [`EndComponent::arity`].
    pub fn arity(&self) -> (usize, usize) {
        match self {
            BiElement::Plain { tau, sigma } => (tau.size(), sigma.size()),
            BiElement::Row { copies, sigma } => (*copies, sigma.size()),
            BiElement::Column { copies, tau } => (tau.size(), *copies),
        }
    }

    /// Left action of `g^∨ × g`; Rows ignore `g^∨`, Columns ignore `g`.
    pub fn act(&self, g_in: &Permutation, g_out: &Permutation) -> Result<Self> {
        let (m, n) = self.arity();
        let check = |p: &Permutation, k: usize| {
            if p.size() == k {
                Ok(())
            } else {
                Err(Error::ArityMismatch {
                    left: format!("permutation of {}", p.size()),
                    right: self.to_string(),
                    detail: format!("expected size {k}"),
                })
            }
        };
        Ok(match self {
            BiElement::Plain { tau, sigma } => {
                check(g_in, m)?;
                check(g_out, n)?;
                BiElement::Plain {
                    tau: g_in.then_after(tau),
                    sigma: g_out.then_after(sigma),
                }
            }
            BiElement::Row { copies, sigma } => {
                check(g_out, n)?;
                BiElement::Row {
                    copies: *copies,
                    sigma: g_out.then_after(sigma),
                }
            }
            BiElement::Column { copies, tau } => {
                check(g_in, m)?;
                BiElement::Column {
                    copies: *copies,
                    tau: g_in.then_after(tau),
                }
            }
        })
    }
}


fn inadmissible(op: Op, a: &BiElement, b: &BiElement, why: &str) -> Error {
    Error::Inadmissible(format!("{op:?} of {a} with {b}: {why}"))
}

fn position(index: usize, bound: usize) -> Result<()> {
    if index == 0 || index > bound {
        Err(Error::IndexOutOfRange { index, bound })
    } else {
        Ok(())
    }
}

/// Composes in `Bi`. Operand order follows [`Op`]: for `∘_i`, `⊚_i` the host comes
/// first; for `_j∘`, `_j⊚` the inserted element comes first; for `⊚` the Column
/// comes first.
pub fn bi_compose(op: Op, a: &BiElement, b: &BiElement, index: usize) -> Result<BiElement> {
    use BiElement as B;
    match (op, a, b) {
        (Op::Circ, B::Plain { tau, sigma }, B::Plain { tau: t2, sigma: s2 }) => {
            if t2.size() != 1 {
                return Err(inadmissible(op, a, b, "inserted element must have one input"));
            }
            position(index, sigma.size())?;
            let i0 = endv::transported_index(sigma, index);
            BiElement::plain(tau.clone(), sigma.substitute_block(i0 - 1, s2))
        }
        (Op::JCirc, B::Plain { tau: t2, sigma: s2 }, B::Plain { tau, sigma }) => {
            if s2.size() != 1 {
                return Err(inadmissible(op, a, b, "inserted element must have one output"));
            }
            position(index, tau.size())?;
            let j0 = endv::transported_index(tau, index);
            BiElement::plain(tau.substitute_block(j0 - 1, t2), sigma.clone())
        }
        (Op::Circled, B::Row { copies, sigma }, B::Row { copies: c2, sigma: s2 }) => {
            if copies != c2 {
                return Err(inadmissible(op, a, b, "copy counts differ"));
            }
            position(index, sigma.size())?;
            let i0 = endv::transported_index(sigma, index);
            BiElement::row(*copies, sigma.substitute_block(i0 - 1, s2))
        }
        (Op::JCircled, B::Column { copies: c2, tau: t2 }, B::Column { copies, tau }) => {
            if copies != c2 {
                return Err(inadmissible(op, a, b, "copy counts differ"));
            }
            position(index, tau.size())?;
            let j0 = endv::transported_index(tau, index);
            BiElement::column(*copies, tau.substitute_block(j0 - 1, t2))
        }
        (Op::CircledCirc, B::Column { copies: n, tau }, B::Row { copies: m, sigma }) => {
            if *n != sigma.size() || *m != tau.size() {
                return Err(inadmissible(op, a, b, "column copies must match row outputs and vice versa"));
            }
            BiElement::plain(tau.clone(), sigma.clone())
        }
        _ => Err(inadmissible(op, a, b, "operand kinds do not fit this composition")),
    }
}

/// How `φ` treats the permutations of a plain element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PhiMode {
    /// `P_σ ∘ Δ^{n−1}∘★^{m−1} ∘ P_{σ^∨}^{-1}`.
    Equivariant,
    /// `Δ^{n−1}∘★^{m−1}` regardless of the permutations.
    Literal,
}

/// `φ_{★,Δ}`; refuses pairs that are not bialgebras.
pub fn phi(star: &TensorMap, delta: &TensorMap, x: &BiElement) -> Result<EndComponent> {
    require_bialgebra(star, delta)?;
    phi_unchecked(star, delta, x, PhiMode::Equivariant)
}

/// `φ` without the bialgebra check, to exhibit what goes wrong without it.
pub fn phi_unchecked(star: &TensorMap, delta: &TensorMap, x: &BiElement, mode: PhiMode) -> Result<EndComponent> {
    Ok(match x {
        BiElement::Plain { tau, sigma } => {
            let core = tensor::compose(
                &iterated_coproduct(delta, sigma.size())?,
                &iterated_product(star, tau.size())?,
            )?;
            EndComponent::Plain(match mode {
                PhiMode::Equivariant => endv::act_pair(tau, sigma, &core)?,
                PhiMode::Literal => core,
            })
        }
        BiElement::Row { copies, sigma } => {
            let entry = tensor::act_out(sigma, &iterated_coproduct(delta, sigma.size())?)?;
            EndComponent::Row(Row::repeat(&entry, *copies)?)
        }
        BiElement::Column { copies, tau } => {
            let entry = tensor::act_in(tau, &iterated_product(star, tau.size())?)?;
            EndComponent::Column(Column::repeat(&entry, *copies)?)
        }
    })
}

/// Every element of `Bi` with `m + n <= bound`.
pub fn elements(bound: usize) -> Vec<BiElement> {
    let mut out = Vec::new();
    for total in 3..=bound {
        for m in 1..total {
            let n = total - m;
            for tau in Permutation::all(m) {
                for sigma in Permutation::all(n) {
                    out.push(BiElement::Plain {
                        tau: tau.clone(),
                        sigma: sigma.clone(),
                    });
                }
            }
            if m >= 2 && n >= 2 {
                for sigma in Permutation::all(n) {
                    out.push(BiElement::Row { copies: m, sigma });
                }
                for tau in Permutation::all(m) {
                    out.push(BiElement::Column { copies: n, tau });
                }
            }
        }
    }
    out
}

/// All admissible `(op, a, b, index)` with both operands from [`elements`].
pub fn composable_triples(bound: usize) -> Vec<(Op, BiElement, BiElement, usize)> {
    let elems = elements(bound);
    let mut out = Vec::new();
    for op in Op::ALL {
        for a in &elems {
            for b in &elems {
                let slots = match op {
                    Op::Circ | Op::Circled => a.arity().1,
                    Op::JCirc | Op::JCircled => b.arity().0,
                    Op::CircledCirc => 1,
                };
                for index in 1..=slots {
                    if bi_compose(op, a, b, index).is_ok() {
                        out.push((op, a.clone(), b.clone(), index));
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub checked: usize,
    pub per_op: Vec<(Op, usize)>,
    pub failure: Option<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.checked > 0
    }
}

/// Checks `φ(a) op φ(b) = φ(a op b)` on composable pairs with operand arity `m + n <= bound`.
/// Every pair is checked when `trials` is 0 or at least the number of pairs;
/// otherwise `trials` pairs are drawn with the given seed.
pub fn check_phi_morphism(
    star: &TensorMap,
    delta: &TensorMap,
    arity_bound: usize,
    trials: usize,
    seed: u64,
) -> Result<PhiReport> {
    require_bialgebra(star, delta)?;
    Ok(morphism_report(star, delta, PhiMode::Equivariant, arity_bound, trials, seed))
}

/// The same check for an arbitrary pair and mode; failures land in the report.
pub fn morphism_report(
    star: &TensorMap,
    delta: &TensorMap,
    mode: PhiMode,
    arity_bound: usize,
    trials: usize,
    seed: u64,
) -> PhiReport {
    let mut triples = composable_triples(arity_bound);
    if trials > 0 && trials < triples.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        triples.shuffle(&mut rng);
        triples.truncate(trials);
    }
    let mut per_op: Vec<(Op, usize)> = Op::ALL.iter().map(|&op| (op, 0)).collect();
    let mut checked = 0;
    for (op, a, b, index) in &triples {
        let outcome = (|| -> Result<Option<String>> {
            let lhs = endv::compose_components(
                *op,
                &phi_unchecked(star, delta, a, mode)?,
                &phi_unchecked(star, delta, b, mode)?,
                *index,
            )?;
            let composed = bi_compose(*op, a, b, *index)?;
            let rhs = phi_unchecked(star, delta, &composed, mode)?;
            Ok((lhs != rhs).then(|| format!("{op:?} at {index} of {a} and {b} (= {composed})")))
        })();
        checked += 1;
        per_op.iter_mut().find(|(o, _)| o == op).unwrap().1 += 1;
        let failure = match outcome {
            Ok(None) => continue,
            Ok(Some(w)) => w,
            Err(e) => e.to_string(),
        };
        return PhiReport {
            checked,
            per_op,
            failure: Some(failure),
        };
    }
    PhiReport {
        checked,
        per_op,
        failure: None,
    }
}

/// `φ(Id∘Id) − φ(Id ⊚ Id)` in `Bi(2,2)`, computed without the bialgebra check:
/// the map `a⊗b ↦ Δ(a★b) − Δ(a)★Δ(b)`.
pub fn unit_square_defect(star: &TensorMap, delta: &TensorMap) -> Result<TensorMap> {
    let via_circ = bi_compose(
        Op::Circ,
        &BiElement::identity(Kind::Plain, 2, 1)?,
        &BiElement::identity(Kind::Plain, 1, 2)?,
        1,
    )?;
    let via_occ = bi_compose(
        Op::CircledCirc,
        &BiElement::identity(Kind::Column, 2, 2)?,
        &BiElement::identity(Kind::Row, 2, 2)?,
        1,
    )?;
    debug_assert_eq!(via_circ, via_occ);
    let plain = |x: &BiElement| -> Result<EndComponent> { phi_unchecked(star, delta, x, PhiMode::Equivariant) };
    let lhs = endv::compose_components(Op::Circ, &plain(&BiElement::identity(Kind::Plain, 2, 1)?)?, &plain(&BiElement::identity(Kind::Plain, 1, 2)?)?, 1)?;
    let rhs = endv::compose_components(
        Op::CircledCirc,
        &plain(&BiElement::identity(Kind::Column, 2, 2)?)?,
        &plain(&BiElement::identity(Kind::Row, 2, 2)?)?,
        1,
    )?;
    match (lhs, rhs) {
        (EndComponent::Plain(l), EndComponent::Plain(r)) => l.sub(&r),
        _ => unreachable!("both compositions land in plain components"),
    }
}

pub fn random_element<R: Rng>(kind: Kind, m: usize, n: usize, rng: &mut R) -> Result<BiElement> {
    match kind {
        Kind::Plain => BiElement::plain(Permutation::random(m, rng), Permutation::random(n, rng)),
        Kind::Row => BiElement::row(m, Permutation::random(n, rng)),
        Kind::Column => BiElement::column(n, Permutation::random(m, rng)),
    }
}
