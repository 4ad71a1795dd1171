//! Dense multilinear maps `V^{⊗m} → V^{⊗n}` over exact rationals.
//!
//! Coefficients are stored row-major by (output multi-index, input multi-index);
//! within a multi-index leg 1 is the most significant digit.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{self, Scalar};

/// A sequence over `{0..d}` of fixed length, the label of a basis tensor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn decode(mut lin: usize, len: usize, d: usize) -> Self {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = lin % d;
            lin /= d;
        }
        MultiIndex(v)
    }

    pub fn encode(digits: &[usize], d: usize) -> usize {
        digits.iter().fold(0, |acc, &x| acc * d + x)
    }

    /// Every multi-index of the given length, in lexicographic order.
    pub fn all(len: usize, d: usize) -> impl Iterator<Item = MultiIndex> {
        (0..d.pow(len as u32)).map(move |lin| MultiIndex::decode(lin, len, d))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorMap {
    inputs: usize,
    outputs: usize,
    dim: usize,
    coeffs: Vec<Scalar>,
}

impl TensorMap {
    pub fn new(inputs: usize, outputs: usize, dim: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Format("dimension of V must be at least 1".into()));
        }
        let expected = dim.pow((inputs + outputs) as u32);
        if coeffs.len() != expected {
            return Err(Error::Format(format!(
                "({inputs},{outputs}) map over d={dim} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(TensorMap {
            inputs,
            outputs,
            dim,
            coeffs,
        })
    }

    pub fn zeros(inputs: usize, outputs: usize, dim: usize) -> Self {
        TensorMap {
            inputs,
            outputs,
            dim,
            coeffs: vec![Scalar::zero(); dim.pow((inputs + outputs) as u32)],
        }
    }

    pub fn from_fn<F>(inputs: usize, outputs: usize, dim: usize, mut f: F) -> Self
    where
        F: FnMut(&[usize], &[usize]) -> Scalar,
    {
        let n_in = dim.pow(inputs as u32);
        let n_out = dim.pow(outputs as u32);
        let mut coeffs = Vec::with_capacity(n_in * n_out);
        for o in 0..n_out {
            let out = MultiIndex::decode(o, outputs, dim);
            for i in 0..n_in {
                let inp = MultiIndex::decode(i, inputs, dim);
                coeffs.push(f(&out.0, &inp.0));
            }
        }
        TensorMap {
            inputs,
            outputs,
            dim,
            coeffs,
        }
    }

    /// Identity on `V^{⊗k}`.
    pub fn identity(k: usize, dim: usize) -> Self {
        Self::from_fn(k, k, dim, |o, i| {
            if o == i {
                scalar::one()
            } else {
                scalar::zero()
            }
        })
    }

    pub fn random<R: Rng + ?Sized>(inputs: usize, outputs: usize, dim: usize, rng: &mut R) -> Self {
        let len = dim.pow((inputs + outputs) as u32);
        let coeffs = (0..len).map(|_| scalar::random(rng)).collect();
        TensorMap {
            inputs,
            outputs,
            dim,
            coeffs,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree as a generator of the deformation complex: `m + n - 2`.
    pub fn degree(&self) -> i64 {
        self.inputs as i64 + self.outputs as i64 - 2
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn signature(&self) -> String {
        format!("({},{}) over d={}", self.inputs, self.outputs, self.dim)
    }

    fn n_in(&self) -> usize {
        self.dim.pow(self.inputs as u32)
    }

    fn lin(&self, out: &[usize], inp: &[usize]) -> usize {
        MultiIndex::encode(out, self.dim) * self.n_in() + MultiIndex::encode(inp, self.dim)
    }

    pub fn get(&self, out: &[usize], inp: &[usize]) -> &Scalar {
        &self.coeffs[self.lin(out, inp)]
    }

    pub fn set(&mut self, out: &[usize], inp: &[usize], value: Scalar) {
        let k = self.lin(out, inp);
        self.coeffs[k] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_shape(&self, other: &TensorMap) -> Result<()> {
        if (self.inputs, self.outputs, self.dim) != (other.inputs, other.outputs, other.dim) {
            return Err(Error::ArityMismatch {
                left: self.signature(),
                right: other.signature(),
                detail: "linear combination needs equal signatures".into(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorMap) -> Result<TensorMap> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &TensorMap) -> Result<TensorMap> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> TensorMap {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        self.with_coeffs(coeffs)
    }

    pub fn neg(&self) -> TensorMap {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        self.with_coeffs(coeffs)
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &TensorMap) -> Result<()> {
        self.same_shape(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<Scalar>) -> TensorMap {
        TensorMap {
            inputs: self.inputs,
            outputs: self.outputs,
            dim: self.dim,
            coeffs,
        }
    }

    fn check_dim(&self, other: &TensorMap) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Nonzero entries as `(output index, input index, value)`.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, Vec<usize>, Scalar)> {
        let n_in = self.n_in();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                (
                    MultiIndex::decode(k / n_in, self.outputs, self.dim).0,
                    MultiIndex::decode(k % n_in, self.inputs, self.dim).0,
                    c.clone(),
                )
            })
            .collect()
    }
}

/// `a ∘ b`: feeds the outputs of `b` into the inputs of `a`.
pub fn compose(a: &TensorMap, b: &TensorMap) -> Result<TensorMap> {
    a.check_dim(b)?;
    if a.inputs != b.outputs {
        return Err(Error::ArityMismatch {
            left: a.signature(),
            right: b.signature(),
            detail: format!("{} inputs vs {} outputs", a.inputs, b.outputs),
        });
    }
    let d = a.dim;
    let n_out = d.pow(a.outputs as u32);
    let n_mid = d.pow(a.inputs as u32);
    let n_in = d.pow(b.inputs as u32);
    let mut coeffs = vec![Scalar::zero(); n_out * n_in];
    for o in 0..n_out {
        for t in 0..n_mid {
            let x = &a.coeffs[o * n_mid + t];
            if x.is_zero() {
                continue;
            }
            for i in 0..n_in {
                let y = &b.coeffs[t * n_in + i];
                if !y.is_zero() {
                    coeffs[o * n_in + i] += x * y;
                }
            }
        }
    }
    Ok(TensorMap {
        inputs: b.inputs,
        outputs: a.outputs,
        dim: d,
        coeffs,
    })
}

/// `a ⊗ b`, legs of `a` first.
pub fn tensor_product(a: &TensorMap, b: &TensorMap) -> Result<TensorMap> {
    a.check_dim(b)?;
    let d = a.dim;
    let (ai, bi) = (a.n_in(), b.n_in());
    let bo = d.pow(b.outputs as u32);
    let ao = d.pow(a.outputs as u32);
    let mut coeffs = vec![Scalar::zero(); ao * bo * ai * bi];
    let n_in = ai * bi;
    for o1 in 0..ao {
        for i1 in 0..ai {
            let x = &a.coeffs[o1 * ai + i1];
            if x.is_zero() {
                continue;
            }
            for o2 in 0..bo {
                for i2 in 0..bi {
                    let y = &b.coeffs[o2 * bi + i2];
                    if !y.is_zero() {
                        coeffs[(o1 * bo + o2) * n_in + i1 * bi + i2] = x * y;
                    }
                }
            }
        }
    }
    Ok(TensorMap {
        inputs: a.inputs + b.inputs,
        outputs: a.outputs + b.outputs,
        dim: d,
        coeffs,
    })
}

/// Tensor product of a non-empty list, left to right.
pub fn tensor_all(maps: &[TensorMap]) -> Result<TensorMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::Format("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, t| tensor_product(&acc, t))
}

/// Moves output leg `a` to position `sigma(a)`.
pub fn act_out(sigma: &Permutation, t: &TensorMap) -> Result<TensorMap> {
    if sigma.size() != t.outputs {
        return Err(Error::ArityMismatch {
            left: format!("permutation of {}", sigma.size()),
            right: t.signature(),
            detail: "output permutation size".into(),
        });
    }
    let mut old = vec![0; t.outputs];
    Ok(TensorMap::from_fn(t.inputs, t.outputs, t.dim, |o, i| {
        for (a, slot) in old.iter_mut().enumerate() {
            *slot = o[sigma.apply(a)];
        }
        t.get(&old, i).clone()
    }))
}

/// Precomposes with the inverse leg permutation: input leg `b` reads position `tau(b)`.
pub fn act_in(tau: &Permutation, t: &TensorMap) -> Result<TensorMap> {
    if tau.size() != t.inputs {
        return Err(Error::ArityMismatch {
            left: format!("permutation of {}", tau.size()),
            right: t.signature(),
            detail: "input permutation size".into(),
        });
    }
    let mut old = vec![0; t.inputs];
    Ok(TensorMap::from_fn(t.inputs, t.outputs, t.dim, |o, i| {
        for (b, slot) in old.iter_mut().enumerate() {
            *slot = i[tau.apply(b)];
        }
        t.get(o, &old).clone()
    }))
}

/// `psi ∘_i theta`: applies the one-input map `theta` to output leg `i` (1-based) of `psi`.
pub fn insert_output(psi: &TensorMap, theta: &TensorMap, i: usize) -> Result<TensorMap> {
    psi.check_dim(theta)?;
    if theta.inputs != 1 {
        return Err(Error::ArityMismatch {
            left: psi.signature(),
            right: theta.signature(),
            detail: "∘_i needs a one-input right operand".into(),
        });
    }
    if i == 0 || i > psi.outputs {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: psi.outputs,
        });
    }
    let (k, d) = (theta.outputs, psi.dim);
    let at = i - 1;
    let mut host = vec![0; psi.outputs];
    Ok(TensorMap::from_fn(psi.inputs, psi.outputs + k - 1, d, |o, inp| {
        host[..at].copy_from_slice(&o[..at]);
        host[at + 1..].copy_from_slice(&o[at + k..]);
        let block = &o[at..at + k];
        let mut acc = Scalar::zero();
        for x in 0..d {
            let t = theta.get(block, &[x]);
            if t.is_zero() {
                continue;
            }
            host[at] = x;
            acc += t * psi.get(&host, inp);
        }
        acc
    }))
}

/// `theta (_j∘) psi`: feeds the one-output map `theta` into input slot `j` (1-based) of `psi`.
pub fn insert_input(theta: &TensorMap, psi: &TensorMap, j: usize) -> Result<TensorMap> {
    psi.check_dim(theta)?;
    if theta.outputs != 1 {
        return Err(Error::ArityMismatch {
            left: theta.signature(),
            right: psi.signature(),
            detail: "_j∘ needs a one-output left operand".into(),
        });
    }
    if j == 0 || j > psi.inputs {
        return Err(Error::IndexOutOfRange {
            index: j,
            bound: psi.inputs,
        });
    }
    let (k, d) = (theta.inputs, psi.dim);
    let at = j - 1;
    let mut host = vec![0; psi.inputs];
    Ok(TensorMap::from_fn(psi.inputs + k - 1, psi.outputs, d, |o, inp| {
        host[..at].copy_from_slice(&inp[..at]);
        host[at + 1..].copy_from_slice(&inp[at + k..]);
        let block = &inp[at..at + k];
        let mut acc = Scalar::zero();
        for x in 0..d {
            let t = theta.get(&[x], block);
            if t.is_zero() {
                continue;
            }
            host[at] = x;
            acc += t * psi.get(o, &host);
        }
        acc
    }))
}

/// `(1^{i−1} ⊗ f ⊗ 1) ∘ t` for `f` with one output: the outputs `i..i+r` of `t` are
/// merged by `f` into a single leg.
pub fn merge_outputs(t: &TensorMap, f: &TensorMap, i: usize) -> Result<TensorMap> {
    t.check_dim(f)?;
    let r = f.inputs;
    if f.outputs != 1 || i == 0 || i + r - 1 > t.outputs {
        return Err(Error::ArityMismatch {
            left: f.signature(),
            right: t.signature(),
            detail: format!("cannot merge outputs {i}..{} with a {}-input map", i + r - 1, r),
        });
    }
    let (at, d) = (i - 1, t.dim);
    let mut old = vec![0; t.outputs];
    Ok(TensorMap::from_fn(t.inputs, t.outputs + 1 - r, d, |o, inp| {
        old[..at].copy_from_slice(&o[..at]);
        old[at + r..].copy_from_slice(&o[at + 1..]);
        let mut acc = Scalar::zero();
        for block in MultiIndex::all(r, d) {
            let c = f.get(&o[at..=at], &block.0);
            if c.is_zero() {
                continue;
            }
            old[at..at + r].copy_from_slice(&block.0);
            acc += c * t.get(&old, inp);
        }
        acc
    }))
}

/// `t ∘ (1^{j−1} ⊗ f ⊗ 1)` for `f` with one input: the inputs `j..j+r` of `t` are fed
/// from a single leg through `f`.
pub fn merge_inputs(t: &TensorMap, f: &TensorMap, j: usize) -> Result<TensorMap> {
    t.check_dim(f)?;
    let r = f.outputs;
    if f.inputs != 1 || j == 0 || j + r - 1 > t.inputs {
        return Err(Error::ArityMismatch {
            left: t.signature(),
            right: f.signature(),
            detail: format!("cannot feed inputs {j}..{} from a {}-output map", j + r - 1, r),
        });
    }
    let (at, d) = (j - 1, t.dim);
    let mut old = vec![0; t.inputs];
    Ok(TensorMap::from_fn(t.inputs + 1 - r, t.outputs, d, |o, inp| {
        old[..at].copy_from_slice(&inp[..at]);
        old[at + r..].copy_from_slice(&inp[at + 1..]);
        let mut acc = Scalar::zero();
        for block in MultiIndex::all(r, d) {
            let c = f.get(&block.0, &inp[at..=at]);
            if c.is_zero() {
                continue;
            }
            old[at..at + r].copy_from_slice(&block.0);
            acc += c * t.get(o, &old);
        }
        acc
    }))
}

impl fmt::Debug for TensorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorMap{} {{", self.signature())?;
        for (o, i, c) in self.nonzero_entries() {
            write!(f, " {o:?}<-{i:?}: {c};")?;
        }
        write!(f, " }}")
    }
}

impl Serialize for TensorMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            out: Vec<usize>,
            #[serde(rename = "in")]
            inp: Vec<usize>,
            value: String,
        }
        let entries: Vec<Entry> = self
            .nonzero_entries()
            .into_iter()
            .map(|(o, i, c)| Entry {
                out: o.into_iter().map(|x| x + 1).collect(),
                inp: i.into_iter().map(|x| x + 1).collect(),
                value: scalar::format(&c),
            })
            .collect();
        let mut st = s.serialize_struct("TensorMap", 4)?;
        st.serialize_field("inputs", &self.inputs)?;
        st.serialize_field("outputs", &self.outputs)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}
