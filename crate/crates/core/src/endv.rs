//! The pre-2/3-PROP `End(V)`: plain maps, row and column tensor powers, and the
//! five compositions between them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tensor::{self, TensorMap};

/// A pure tensor `θ_1 ⊗ … ⊗ θ_m` of one-input maps `V → V^{⊗n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row(Vec<TensorMap>);

/// A pure tensor `ψ_1 ⊗ … ⊗ ψ_n` of one-output maps `V^{⊗m} → V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Column(Vec<TensorMap>);

/// Which of the three component families an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Plain,
    Row,
    Column,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "payload")]
pub enum EndComponent {
    Plain(TensorMap),
    Row(Row),
    Column(Column),
}

fn check_entries(entries: &[TensorMap], what: &str, one_in: bool) -> Result<()> {
    let first = entries.first().ok_or_else(|| Error::InvalidArity {
        what: what.into(),
        m: 0,
        n: 0,
    })?;
    for e in entries {
        if e.dim() != first.dim() {
            return Err(Error::DimensionMismatch(first.dim(), e.dim()));
        }
        let ok = if one_in {
            e.inputs() == 1 && e.outputs() == first.outputs()
        } else {
            e.outputs() == 1 && e.inputs() == first.inputs()
        };
        if !ok {
            return Err(Error::ArityMismatch {
                left: first.signature(),
                right: e.signature(),
                detail: format!("{what} entries must share one signature"),
            });
        }
    }
    Ok(())
}

impl Row {
    pub fn new(entries: Vec<TensorMap>) -> Result<Self> {
        check_entries(&entries, "row", true)?;
        let (m, n) = (entries.len(), entries[0].outputs());
        if m < 2 || n < 2 {
            return Err(Error::InvalidArity {
                what: "row".into(),
                m,
                n,
            });
        }
        Ok(Row(entries))
    }

    /// `m` identical copies of `gamma`.
    pub fn repeat(gamma: &TensorMap, m: usize) -> Result<Self> {
        Row::new(vec![gamma.clone(); m])
    }

    pub fn entries(&self) -> &[TensorMap] {
        &self.0
    }

    /// Number of copies.
    pub fn copies(&self) -> usize {
        self.0.len()
    }

    pub fn outputs(&self) -> usize {
        self.0[0].outputs()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }

    /// Diagonal action of `Σ_n` on the outputs of every entry.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        let entries = self
            .0
            .iter()
            .map(|e| tensor::act_out(sigma, e))
            .collect::<Result<_>>()?;
        Ok(Row(entries))
    }

    /// Entry `k` moves to slot `pi(k)`.
    pub fn permute_entries(&self, pi: &Permutation) -> Self {
        let mut out = self.0.clone();
        for (k, e) in self.0.iter().enumerate() {
            out[pi.apply(k)] = e.clone();
        }
        Row(out)
    }

    /// Repeats entry `j` (1-based) `times` times.
    pub fn repeat_entry(&self, j: usize, times: usize) -> Result<Self> {
        if j == 0 || j > self.0.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.0.len(),
            });
        }
        let mut out = self.0[..j - 1].to_vec();
        out.extend(std::iter::repeat(self.0[j - 1].clone()).take(times));
        out.extend_from_slice(&self.0[j..]);
        Row::new(out)
    }
}

impl Column {
    pub fn new(entries: Vec<TensorMap>) -> Result<Self> {
        check_entries(&entries, "column", false)?;
        let (m, n) = (entries[0].inputs(), entries.len());
        if m < 2 || n < 2 {
            return Err(Error::InvalidArity {
                what: "column".into(),
                m,
                n,
            });
        }
        Ok(Column(entries))
    }

    /// `n` identical copies of `gamma`.
    pub fn repeat(gamma: &TensorMap, n: usize) -> Result<Self> {
        Column::new(vec![gamma.clone(); n])
    }

    pub fn entries(&self) -> &[TensorMap] {
        &self.0
    }

    pub fn copies(&self) -> usize {
        self.0.len()
    }

    pub fn inputs(&self) -> usize {
        self.0[0].inputs()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }

    /// Diagonal action of `Σ_m^∨` on the inputs of every entry.
    pub fn act(&self, tau: &Permutation) -> Result<Self> {
        let entries = self
            .0
            .iter()
            .map(|e| tensor::act_in(tau, e))
            .collect::<Result<_>>()?;
        Ok(Column(entries))
    }

    pub fn permute_entries(&self, pi: &Permutation) -> Self {
        let mut out = self.0.clone();
        for (k, e) in self.0.iter().enumerate() {
            out[pi.apply(k)] = e.clone();
        }
        Column(out)
    }

    /// Repeats entry `i` (1-based) `times` times.
    pub fn repeat_entry(&self, i: usize, times: usize) -> Result<Self> {
        if i == 0 || i > self.0.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.0.len(),
            });
        }
        let mut out = self.0[..i - 1].to_vec();
        out.extend(std::iter::repeat(self.0[i - 1].clone()).take(times));
        out.extend_from_slice(&self.0[i..]);
        Column::new(out)
    }
}

impl EndComponent {
    pub fn plain(t: TensorMap) -> Result<Self> {
        let (m, n) = (t.inputs(), t.outputs());
        if m < 1 || n < 1 || m + n < 3 {
            return Err(Error::InvalidArity {
                what: "plain component".into(),
                m,
                n,
            });
        }
        Ok(EndComponent::Plain(t))
    }

    pub fn kind(&self) -> Kind {
        match self {
            EndComponent::Plain(_) => Kind::Plain,
            EndComponent::Row(_) => Kind::Row,
            EndComponent::Column(_) => Kind::Column,
        }
    }

    pub fn as_plain(&self) -> Option<&TensorMap> {
        match self {
            EndComponent::Plain(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_row(&self) -> Option<&Row> {
        match self {
            EndComponent::Row(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_column(&self) -> Option<&Column> {
        match self {
            EndComponent::Column(c) => Some(c),
            _ => None,
        }
    }

    /// `(inputs, outputs)` of a plain map; `(copies, outputs)` of a row;
    /// `(inputs, copies)` of a column.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            EndComponent::Plain(t) => (t.inputs(), t.outputs()),
            EndComponent::Row(r) => (r.copies(), r.outputs()),
            EndComponent::Column(c) => (c.inputs(), c.copies()),
        }
    }
}

/// The five compositions. For `Circ`/`Circled` the host is the first operand; for
/// `JCirc`/`JCircled` the inserted element is first; `CircledCirc` takes the column first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Op {
    Circ,
    JCirc,
    Circled,
    JCircled,
    CircledCirc,
}

impl Op {
    pub const ALL: [Op; 5] = [Op::Circ, Op::JCirc, Op::Circled, Op::JCircled, Op::CircledCirc];
}

pub fn circ_i(psi: &TensorMap, theta: &TensorMap, i: usize) -> Result<TensorMap> {
    tensor::insert_output(psi, theta, i)
}

pub fn jcirc(theta: &TensorMap, psi: &TensorMap, j: usize) -> Result<TensorMap> {
    tensor::insert_input(theta, psi, j)
}

/// Entrywise `∘_i` of two rows with the same number of copies.
pub fn circled_i(c1: &Row, c2: &Row, i: usize) -> Result<Row> {
    if c1.copies() != c2.copies() {
        return Err(Error::ArityMismatch {
            left: format!("row of {} copies", c1.copies()),
            right: format!("row of {} copies", c2.copies()),
            detail: "⊚_i needs equal copy counts".into(),
        });
    }
    let entries = c1
        .0
        .iter()
        .zip(&c2.0)
        .map(|(a, b)| circ_i(a, b, i))
        .collect::<Result<_>>()?;
    Row::new(entries)
}

/// Entrywise `_j∘`: column `c1` is fed into input `j` of column `c2`.
pub fn jcircled(c1: &Column, c2: &Column, j: usize) -> Result<Column> {
    if c1.copies() != c2.copies() {
        return Err(Error::ArityMismatch {
            left: format!("column of {} copies", c1.copies()),
            right: format!("column of {} copies", c2.copies()),
            detail: "_j⊚ needs equal copy counts".into(),
        });
    }
    let entries = c1
        .0
        .iter()
        .zip(&c2.0)
        .map(|(a, b)| jcirc(a, b, j))
        .collect::<Result<_>>()?;
    Column::new(entries)
}

/// `(ψ_1⊗…⊗ψ_n) ⊚ (θ_1⊗…⊗θ_m)`: every `θ_a` splits input `a` into `n` legs,
/// then `ψ_k` merges the `k`-th leg of every block.
pub fn circledcirc(psis: &Column, thetas: &Row) -> Result<TensorMap> {
    let (m, n) = (thetas.copies(), psis.copies());
    if thetas.outputs() != n {
        return Err(Error::ArityMismatch {
            left: format!("column of {n} copies"),
            right: format!("row with {} outputs", thetas.outputs()),
            detail: "splitting stage: every θ must have one output per column entry".into(),
        });
    }
    if psis.inputs() != m {
        return Err(Error::ArityMismatch {
            left: format!("column entries with {} inputs", psis.inputs()),
            right: format!("row of {m} copies"),
            detail: "regrouping stage: every ψ must have one input per row entry".into(),
        });
    }
    if psis.dim() != thetas.dim() {
        return Err(Error::DimensionMismatch(psis.dim(), thetas.dim()));
    }
    // Contract from the narrower side so the widest intermediate has d^(min(m,n) + mn) entries.
    if m <= n {
        // split every input, order the legs by column, then merge each column
        let mut state = TensorMap::identity(m, psis.dim());
        for (a, theta) in thetas.entries().iter().enumerate() {
            state = tensor::insert_output(&state, theta, a * n + 1)?;
        }
        // leg k of block a goes to input a of ψ_k
        let by_column = Permutation::new((0..m * n).map(|pos| (pos % n) * m + pos / n).collect())?;
        state = tensor::act_out(&by_column, &state)?;
        for (b, psi) in psis.entries().iter().enumerate() {
            state = tensor::merge_outputs(&state, psi, b + 1)?;
        }
        Ok(state)
    } else {
        let mut state = TensorMap::identity(n, psis.dim());
        for (b, psi) in psis.entries().iter().enumerate() {
            state = tensor::insert_input(psi, &state, b * m + 1)?;
        }
        // input leg a of ψ_b is fed by output b of θ_a
        let by_row = Permutation::new((0..m * n).map(|pos| (pos % m) * n + pos / m).collect())?;
        state = tensor::act_in(&by_row, &state)?;
        for (a, theta) in thetas.entries().iter().enumerate() {
            state = tensor::merge_inputs(&state, theta, a + 1)?;
        }
        Ok(state)
    }
}

/// Applies a composition to two `End(V)` components of the matching kinds.
pub fn compose_components(op: Op, a: &EndComponent, b: &EndComponent, index: usize) -> Result<EndComponent> {
    use EndComponent as E;
    match (op, a, b) {
        (Op::Circ, E::Plain(x), E::Plain(y)) => Ok(E::Plain(circ_i(x, y, index)?)),
        (Op::JCirc, E::Plain(x), E::Plain(y)) => Ok(E::Plain(jcirc(x, y, index)?)),
        (Op::Circled, E::Row(x), E::Row(y)) => Ok(E::Row(circled_i(x, y, index)?)),
        (Op::JCircled, E::Column(x), E::Column(y)) => Ok(E::Column(jcircled(x, y, index)?)),
        (Op::CircledCirc, E::Column(x), E::Row(y)) => Ok(E::Plain(circledcirc(x, y)?)),
        _ => Err(Error::Inadmissible(format!("{op:?} does not apply to these component kinds"))),
    }
}

/// The five compositions, overridable so that broken variants can be fed to the checker.
pub trait Compositions {
    fn circ(&self, psi: &TensorMap, theta: &TensorMap, i: usize) -> Result<TensorMap> {
        circ_i(psi, theta, i)
    }
    fn jcirc(&self, theta: &TensorMap, psi: &TensorMap, j: usize) -> Result<TensorMap> {
        jcirc(theta, psi, j)
    }
    fn circled(&self, c1: &Row, c2: &Row, i: usize) -> Result<Row> {
        let entries = c1
            .entries()
            .iter()
            .zip(c2.entries())
            .map(|(a, b)| self.circ(a, b, i))
            .collect::<Result<_>>()?;
        Row::new(entries)
    }
    fn jcircled(&self, c1: &Column, c2: &Column, j: usize) -> Result<Column> {
        let entries = c1
            .entries()
            .iter()
            .zip(c2.entries())
            .map(|(a, b)| self.jcirc(a, b, j))
            .collect::<Result<_>>()?;
        Column::new(entries)
    }
    fn circledcirc(&self, psis: &Column, thetas: &Row) -> Result<TensorMap> {
        circledcirc(psis, thetas)
    }
}

/// The compositions of `End(V)` as defined above.
pub struct EndV;

impl Compositions for EndV {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub arity_bound: usize,
    pub seed: u64,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Names of the checked identities, in report order.
pub const AXIOMS: [&str; 12] = [
    "(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)", "(A)", "(B)", "(ix)", "E2",
];

/// Samples random tensors and checks every identity exactly.
pub fn check_axioms(dim: usize, arity_bound: usize, trials: usize, seed: u64) -> AxiomReport {
    check_axioms_with(&EndV, dim, arity_bound, trials, seed)
}

pub fn check_axioms_with(
    ops: &dyn Compositions,
    dim: usize,
    arity_bound: usize,
    trials: usize,
    seed: u64,
) -> AxiomReport {
    let results = AXIOMS
        .iter()
        .enumerate()
        .map(|(which, name)| {
            let mut sampled = 0;
            let mut counterexample = None;
            // draws that admit no instance of the identity are skipped, not counted
            for attempt in 0..trials * 20 {
                if sampled == trials {
                    break;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((attempt as u64) << 8 | which as u64);
                match run_axiom(ops, which, dim, arity_bound, &mut rng) {
                    Some(Ok(None)) => sampled += 1,
                    Some(Ok(Some(witness))) => {
                        sampled += 1;
                        counterexample = Some(witness);
                        break;
                    }
                    Some(Err(e)) => {
                        counterexample = Some(format!("composition failed: {e}"));
                        break;
                    }
                    None => {}
                }
            }
            AxiomResult {
                name: name.to_string(),
                trials: sampled,
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    AxiomReport {
        dim,
        arity_bound,
        seed,
        results,
    }
}

type Trial = Option<Result<Option<String>>>;

fn compare<T: PartialEq + std::fmt::Debug>(lhs: T, rhs: T, ctx: String) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(format!("{ctx}: lhs {lhs:?} != rhs {rhs:?}"))
    }
}

fn pick<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> Option<usize> {
    (lo <= hi).then(|| rng.gen_range(lo..=hi))
}

/// Random `(m, n)` with `m, n >= 1`, `m + n >= 3`, `m + n <= budget`.
fn plain_arity<R: Rng>(rng: &mut R, budget: usize) -> Option<(usize, usize)> {
    if budget < 3 {
        return None;
    }
    let total = rng.gen_range(3..=budget);
    let m = rng.gen_range(1..total);
    Some((m, total - m))
}

fn run_axiom<R: Rng>(
    ops: &dyn Compositions,
    which: usize,
    d: usize,
    bound: usize,
    rng: &mut R,
) -> Trial {
    match which {
        0 | 1 => output_axiom(ops, which == 0, d, bound, rng),
        2 | 3 => input_axiom(ops, which == 2, d, bound, rng),
        4 | 5 => row_axiom(ops, which == 4, d, bound, rng),
        6 | 7 => column_axiom(ops, which == 6, d, bound, rng),
        8 => compat_a(ops, d, bound, rng),
        9 => compat_b(ops, d, bound, rng),
        10 => equivariance(ops, d, bound, rng),
        _ => mixed_assoc(ops, d, bound, rng),
    }
}

/// Given a host with `n` legs and a first insertion of `n1` legs at `i`, pick a second
/// position `j` either nested in the inserted block or disjoint from it.
fn second_position<R: Rng>(rng: &mut R, nested: bool, n: usize, n1: usize, i: usize) -> Option<usize> {
    if nested {
        Some(rng.gen_range(i..=i + n1 - 1))
    } else {
        let total = n + n1 - 1;
        let choices: Vec<usize> = (1..=total).filter(|&j| j < i || j > i + n1 - 1).collect();
        if choices.is_empty() {
            None
        } else {
            Some(choices[rng.gen_range(0..choices.len())])
        }
    }
}

// Reindexing shared by the "same side" axioms: returns the right-hand side built
// from `ins` (insert a into b at a position) for nested or commuted orderings.
fn output_axiom<R: Rng>(ops: &dyn Compositions, nested: bool, d: usize, bound: usize, rng: &mut R) -> Trial {
    let n1 = pick(rng, 2, bound.saturating_sub(3))?;
    let n2 = pick(rng, 2, bound.saturating_sub(1 + n1))?;
    let (m, n) = plain_arity(rng, (bound + 2).checked_sub(n1 + n2)?)?;
    let i = rng.gen_range(1..=n);
    let j = second_position(rng, nested, n, n1, i)?;
    let psi = TensorMap::random(m, n, d, rng);
    let t1 = TensorMap::random(1, n1, d, rng);
    let t2 = TensorMap::random(1, n2, d, rng);
    Some((|| {
        let lhs = ops.circ(&ops.circ(&psi, &t1, i)?, &t2, j)?;
        let rhs = if nested {
            ops.circ(&psi, &ops.circ(&t1, &t2, j - i + 1)?, i)?
        } else if j < i {
            ops.circ(&ops.circ(&psi, &t2, j)?, &t1, i + n2 - 1)?
        } else {
            ops.circ(&ops.circ(&psi, &t2, j - n1 + 1)?, &t1, i)?
        };
        Ok(compare(lhs, rhs, format!("psi({m},{n}) i={i} n1={n1} j={j} n2={n2}")))
    })())
}

fn input_axiom<R: Rng>(ops: &dyn Compositions, nested: bool, d: usize, bound: usize, rng: &mut R) -> Trial {
    let m1 = pick(rng, 2, bound.saturating_sub(3))?;
    let m2 = pick(rng, 2, bound.saturating_sub(1 + m1))?;
    let (m, n) = plain_arity(rng, (bound + 2).checked_sub(m1 + m2)?)?;
    let j = rng.gen_range(1..=m);
    let k = second_position(rng, nested, m, m1, j)?;
    let psi = TensorMap::random(m, n, d, rng);
    let t1 = TensorMap::random(m1, 1, d, rng);
    let t2 = TensorMap::random(m2, 1, d, rng);
    Some((|| {
        let lhs = ops.jcirc(&t2, &ops.jcirc(&t1, &psi, j)?, k)?;
        let rhs = if nested {
            ops.jcirc(&ops.jcirc(&t2, &t1, k - j + 1)?, &psi, j)?
        } else if k < j {
            ops.jcirc(&t1, &ops.jcirc(&t2, &psi, k)?, j + m2 - 1)?
        } else {
            ops.jcirc(&t1, &ops.jcirc(&t2, &psi, k - m1 + 1)?, j)?
        };
        Ok(compare(lhs, rhs, format!("psi({m},{n}) j={j} m1={m1} k={k} m2={m2}")))
    })())
}

fn random_row<R: Rng>(m: usize, n: usize, d: usize, rng: &mut R) -> Row {
    Row((0..m).map(|_| TensorMap::random(1, n, d, rng)).collect())
}

fn random_column<R: Rng>(m: usize, n: usize, d: usize, rng: &mut R) -> Column {
    Column((0..n).map(|_| TensorMap::random(m, 1, d, rng)).collect())
}

fn row_axiom<R: Rng>(ops: &dyn Compositions, nested: bool, d: usize, bound: usize, rng: &mut R) -> Trial {
    let m = 2;
    let n1 = pick(rng, 2, bound.saturating_sub(m + 2))?;
    let n2 = pick(rng, 2, (bound + 2).saturating_sub(m + n1 + 2))?;
    let n = pick(rng, 2, (bound + 2).checked_sub(m + n1 + n2)?)?;
    let m = pick(rng, 2, (bound + 2).checked_sub(n + n1 + n2)?)?;
    let i = rng.gen_range(1..=n);
    let j = second_position(rng, nested, n, n1, i)?;
    let c = random_row(m, n, d, rng);
    let c1 = random_row(m, n1, d, rng);
    let c2 = random_row(m, n2, d, rng);
    Some((|| {
        let lhs = ops.circled(&ops.circled(&c, &c1, i)?, &c2, j)?;
        let rhs = if nested {
            ops.circled(&c, &ops.circled(&c1, &c2, j - i + 1)?, i)?
        } else if j < i {
            ops.circled(&ops.circled(&c, &c2, j)?, &c1, i + n2 - 1)?
        } else {
            ops.circled(&ops.circled(&c, &c2, j - n1 + 1)?, &c1, i)?
        };
        Ok(compare(lhs, rhs, format!("row({m}x{n}) i={i} n1={n1} j={j} n2={n2}")))
    })())
}

fn column_axiom<R: Rng>(ops: &dyn Compositions, nested: bool, d: usize, bound: usize, rng: &mut R) -> Trial {
    let n = 2;
    let m1 = pick(rng, 2, bound.saturating_sub(n + 2))?;
    let m2 = pick(rng, 2, (bound + 2).saturating_sub(n + m1 + 2))?;
    let m = pick(rng, 2, (bound + 2).checked_sub(n + m1 + m2)?)?;
    let n = pick(rng, 2, (bound + 2).checked_sub(m + m1 + m2)?)?;
    let j = rng.gen_range(1..=m);
    let k = second_position(rng, nested, m, m1, j)?;
    let c = random_column(m, n, d, rng);
    let c1 = random_column(m1, n, d, rng);
    let c2 = random_column(m2, n, d, rng);
    Some((|| {
        let lhs = ops.jcircled(&c2, &ops.jcircled(&c1, &c, j)?, k)?;
        let rhs = if nested {
            ops.jcircled(&ops.jcircled(&c2, &c1, k - j + 1)?, &c, j)?
        } else if k < j {
            ops.jcircled(&c1, &ops.jcircled(&c2, &c, k)?, j + m2 - 1)?
        } else {
            ops.jcircled(&c1, &ops.jcircled(&c2, &c, k - m1 + 1)?, j)?
        };
        Ok(compare(lhs, rhs, format!("column({m}x{n}) j={j} m1={m1} k={k} m2={m2}")))
    })())
}

/// `(α⊚β)∘_iγ = ⋎(α) ⊚ (β ⊚_i ⋏(γ))` with `⋏` = copies of `γ` and `⋎` = entry `i`
/// of `α` repeated over the new legs.
pub fn compat_a_sides(
    ops: &dyn Compositions,
    alpha: &Column,
    beta: &Row,
    gamma: &TensorMap,
    i: usize,
) -> Result<(TensorMap, TensorMap)> {
    let lhs = ops.circ(&ops.circledcirc(alpha, beta)?, gamma, i)?;
    let wedge = Row::repeat(gamma, beta.copies())?;
    let vee = alpha.repeat_entry(i, gamma.outputs())?;
    let rhs = ops.circledcirc(&vee, &ops.circled(beta, &wedge, i)?)?;
    Ok((lhs, rhs))
}

/// `γ _j∘(α⊚β) = (⋎(γ) _j⊚ α) ⊚ ⋏(β)` with `⋎` = copies of `γ` and `⋏` = entry `j`
/// of `β` repeated over the new legs.
pub fn compat_b_sides(
    ops: &dyn Compositions,
    alpha: &Column,
    beta: &Row,
    gamma: &TensorMap,
    j: usize,
) -> Result<(TensorMap, TensorMap)> {
    let lhs = ops.jcirc(gamma, &ops.circledcirc(alpha, beta)?, j)?;
    let vee = Column::repeat(gamma, alpha.copies())?;
    let wedge = beta.repeat_entry(j, gamma.inputs())?;
    let rhs = ops.circledcirc(&ops.jcircled(&vee, alpha, j)?, &wedge)?;
    Ok((lhs, rhs))
}

fn compat_a<R: Rng>(ops: &dyn Compositions, d: usize, bound: usize, rng: &mut R) -> Trial {
    let n1 = pick(rng, 2, bound.saturating_sub(3))?;
    let m = pick(rng, 2, bound.checked_sub(n1 + 1)?)?;
    let n = pick(rng, 2, (bound + 1).checked_sub(m + n1)?)?;
    let i = rng.gen_range(1..=n);
    let alpha = random_column(m, n, d, rng);
    let beta = random_row(m, n, d, rng);
    let gamma = TensorMap::random(1, n1, d, rng);
    Some(compat_a_sides(ops, &alpha, &beta, &gamma, i).map(|(l, r)| {
        compare(l, r, format!("alpha({m}x{n}) beta gamma(1,{n1}) i={i}"))
    }))
}

fn compat_b<R: Rng>(ops: &dyn Compositions, d: usize, bound: usize, rng: &mut R) -> Trial {
    let m1 = pick(rng, 2, bound.saturating_sub(3))?;
    let n = pick(rng, 2, bound.checked_sub(m1 + 1)?)?;
    let m = pick(rng, 2, (bound + 1).checked_sub(n + m1)?)?;
    let j = rng.gen_range(1..=m);
    let alpha = random_column(m, n, d, rng);
    let beta = random_row(m, n, d, rng);
    let gamma = TensorMap::random(m1, 1, d, rng);
    Some(compat_b_sides(ops, &alpha, &beta, &gamma, j).map(|(l, r)| {
        compare(l, r, format!("alpha({m}x{n}) beta gamma({m1},1) j={j}"))
    }))
}

/// Acts on a plain map by `τ` on inputs and `σ` on outputs.
pub fn act_pair(tau: &Permutation, sigma: &Permutation, t: &TensorMap) -> Result<TensorMap> {
    tensor::act_out(sigma, &tensor::act_in(tau, t)?)
}

/// Where a composition at position `index` (1-based) lands after undoing the
/// host permutation: `perm^{-1}(index)`.
pub fn transported_index(perm: &Permutation, index: usize) -> usize {
    perm.inverse().apply(index - 1) + 1
}

fn equivariance<R: Rng>(ops: &dyn Compositions, d: usize, bound: usize, rng: &mut R) -> Trial {
    let op = rng.gen_range(0..5);
    Some((|| {
        let witness = match op {
            0 => {
                let n1 = pick(rng, 2, bound.saturating_sub(2)).unwrap_or(2);
                let (m, n) = plain_arity(rng, (bound + 1).saturating_sub(n1)).unwrap_or((1, 2));
                let (t1, s1, s2) = (Permutation::random(m, rng), Permutation::random(n, rng), Permutation::random(n1, rng));
                let psi = TensorMap::random(m, n, d, rng);
                let theta = TensorMap::random(1, n1, d, rng);
                let i = rng.gen_range(1..=n);
                let i0 = transported_index(&s1, i);
                let lhs = ops.circ(&act_pair(&t1, &s1, &psi)?, &tensor::act_out(&s2, &theta)?, i)?;
                let rhs = act_pair(&t1, &s1.substitute_block(i0 - 1, &s2), &ops.circ(&psi, &theta, i0)?)?;
                compare(lhs, rhs, format!("∘_{i} with σ={s1}, σ'={s2}"))
            }
            1 => {
                let m1 = pick(rng, 2, bound.saturating_sub(2)).unwrap_or(2);
                let (m, n) = plain_arity(rng, (bound + 1).saturating_sub(m1)).unwrap_or((2, 1));
                let (t1, s1, t2) = (Permutation::random(m, rng), Permutation::random(n, rng), Permutation::random(m1, rng));
                let psi = TensorMap::random(m, n, d, rng);
                let theta = TensorMap::random(m1, 1, d, rng);
                let j = rng.gen_range(1..=m);
                let j0 = transported_index(&t1, j);
                let lhs = ops.jcirc(&tensor::act_in(&t2, &theta)?, &act_pair(&t1, &s1, &psi)?, j)?;
                let rhs = act_pair(&t1.substitute_block(j0 - 1, &t2), &s1, &ops.jcirc(&theta, &psi, j0)?)?;
                compare(lhs, rhs, format!("_{j}∘ with τ={t1}, τ'={t2}"))
            }
            2 => {
                let (m, n, n1) = (2, 2, 2 + rng.gen_range(0..=bound.saturating_sub(6).min(1)));
                let c = random_row(m, n, d, rng);
                let c1 = random_row(m, n1, d, rng);
                let (s1, s2, pi) = (Permutation::random(n, rng), Permutation::random(n1, rng), Permutation::random(m, rng));
                let i = rng.gen_range(1..=n);
                let i0 = transported_index(&s1, i);
                let lhs = ops.circled(&c.act(&s1)?.permute_entries(&pi), &c1.act(&s2)?.permute_entries(&pi), i)?;
                let rhs = ops.circled(&c, &c1, i0)?.act(&s1.substitute_block(i0 - 1, &s2))?.permute_entries(&pi);
                compare(lhs, rhs, format!("⊚_{i} with σ={s1}, σ'={s2}, π={pi}"))
            }
            3 => {
                let (m, n, m1) = (2, 2, 2);
                let c = random_column(m, n, d, rng);
                let c1 = random_column(m1, n, d, rng);
                let (t1, t2, pi) = (Permutation::random(m, rng), Permutation::random(m1, rng), Permutation::random(n, rng));
                let j = rng.gen_range(1..=m);
                let j0 = transported_index(&t1, j);
                let lhs = ops.jcircled(&c1.act(&t2)?.permute_entries(&pi), &c.act(&t1)?.permute_entries(&pi), j)?;
                let rhs = ops.jcircled(&c1, &c, j0)?.act(&t1.substitute_block(j0 - 1, &t2))?.permute_entries(&pi);
                compare(lhs, rhs, format!("_{j}⊚ with τ={t1}, τ'={t2}, π={pi}"))
            }
            _ => {
                let m = pick(rng, 2, bound.saturating_sub(2)).unwrap_or(2);
                let n = pick(rng, 2, bound.saturating_sub(m)).unwrap_or(2);
                let alpha = random_column(m, n, d, rng);
                let beta = random_row(m, n, d, rng);
                let (t, s) = (Permutation::random(m, rng), Permutation::random(n, rng));
                let lhs = ops.circledcirc(&alpha.act(&t)?, &beta.act(&s)?)?;
                // ψ entries are reindexed by σ, θ entries by τ
                let alpha_t = alpha.permute_entries(&s.inverse());
                let beta_t = beta.permute_entries(&t.inverse());
                let rhs = act_pair(&t, &s, &ops.circledcirc(&alpha_t, &beta_t)?)?;
                compare(lhs, rhs, format!("⊚ with τ={t}, σ={s}"))
            }
        };
        Ok(witness)
    })())
}

fn mixed_assoc<R: Rng>(ops: &dyn Compositions, d: usize, bound: usize, rng: &mut R) -> Trial {
    let m1 = pick(rng, 2, bound.saturating_sub(3))?;
    let n1 = pick(rng, 2, bound.saturating_sub(1 + m1))?;
    let (m, n) = plain_arity(rng, (bound + 2).checked_sub(m1 + n1)?)?;
    let j = rng.gen_range(1..=m);
    let i = rng.gen_range(1..=n);
    let psi = TensorMap::random(m, n, d, rng);
    let theta = TensorMap::random(m1, 1, d, rng);
    let gamma = TensorMap::random(1, n1, d, rng);
    Some((|| {
        let lhs = ops.circ(&ops.jcirc(&theta, &psi, j)?, &gamma, i)?;
        let rhs = ops.jcirc(&theta, &ops.circ(&psi, &gamma, i)?, j)?;
        Ok(compare(lhs, rhs, format!("psi({m},{n}) j={j} i={i}")))
    })())
}
