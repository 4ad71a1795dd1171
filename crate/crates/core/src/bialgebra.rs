//! Product/coproduct pairs, their defect maps, and the JSON structure-constant format.

use serde::{Deserialize, Serialize};

use crate::endv::{self, Column, Row};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::tensor::{self, TensorMap};

/// A product `★: V⊗V → V` together with a coproduct `Δ: V → V⊗V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bialgebra {
    pub basis: Vec<String>,
    pub star: TensorMap,
    pub delta: TensorMap,
}

/// On-disk form: `product[i][j][k]` is the coefficient of `e_k` in `e_i★e_j`,
/// `coproduct[i][j][k]` the coefficient of `e_j⊗e_k` in `Δ(e_i)`. Rationals are strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BialgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub product: Vec<Vec<Vec<String>>>,
    pub coproduct: Vec<Vec<Vec<String>>>,
}

fn cube(name: &str, d: usize, c: &[Vec<Vec<String>>]) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let bad = || Error::Format(format!("{name} must be a {d}x{d}x{d} array"));
    if c.len() != d {
        return Err(bad());
    }
    c.iter()
        .map(|plane| {
            if plane.len() != d {
                return Err(bad());
            }
            plane
                .iter()
                .map(|line| {
                    if line.len() != d {
                        return Err(bad());
                    }
                    line.iter().map(|s| scalar::parse(s)).collect()
                })
                .collect()
        })
        .collect()
}

impl BialgebraFile {
    pub fn to_bialgebra(&self) -> Result<Bialgebra> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Format("dim must be at least 1".into()));
        }
        if self.basis.len() != d {
            return Err(Error::Format(format!("basis has {} labels, dim is {d}", self.basis.len())));
        }
        let c = cube("product", d, &self.product)?;
        let g = cube("coproduct", d, &self.coproduct)?;
        let star = TensorMap::from_fn(2, 1, d, |out, inp| c[inp[0]][inp[1]][out[0]].clone());
        let delta = TensorMap::from_fn(1, 2, d, |out, inp| g[inp[0]][out[0]][out[1]].clone());
        Ok(Bialgebra {
            basis: self.basis.clone(),
            star,
            delta,
        })
    }
}

impl Bialgebra {
    pub fn new(star: TensorMap, delta: TensorMap) -> Result<Self> {
        if (star.inputs(), star.outputs()) != (2, 1) {
            return Err(Error::InvalidArity {
                what: "product".into(),
                m: star.inputs(),
                n: star.outputs(),
            });
        }
        if (delta.inputs(), delta.outputs()) != (1, 2) {
            return Err(Error::InvalidArity {
                what: "coproduct".into(),
                m: delta.inputs(),
                n: delta.outputs(),
            });
        }
        if star.dim() != delta.dim() {
            return Err(Error::DimensionMismatch(star.dim(), delta.dim()));
        }
        let basis = (1..=star.dim()).map(|i| format!("e{i}")).collect();
        Ok(Bialgebra { basis, star, delta })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BialgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("bad bialgebra file: {e}")))?;
        file.to_bialgebra()
    }

    pub fn to_file(&self) -> BialgebraFile {
        let d = self.dim();
        let product = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| scalar::format(self.star.get(&[k], &[i, j]))).collect())
                    .collect()
            })
            .collect();
        let coproduct = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| scalar::format(self.delta.get(&[j, k], &[i]))).collect())
                    .collect()
            })
            .collect();
        BialgebraFile {
            dim: d,
            basis: self.basis.clone(),
            product,
            coproduct,
        }
    }

    pub fn dim(&self) -> usize {
        self.star.dim()
    }

    pub fn report(&self) -> Result<DefectReport> {
        DefectReport::new(&self.star, &self.delta)
    }
}

/// Group algebra of the two-element group `{e, g}` with `Δ(x) = x⊗x`.
pub fn group_bialgebra() -> Bialgebra {
    Bialgebra {
        basis: vec!["e".into(), "g".into()],
        star: z2_product(),
        delta: TensorMap::from_fn(1, 2, 2, |out, inp| {
            if out[0] == inp[0] && out[1] == inp[0] {
                scalar::one()
            } else {
                scalar::zero()
            }
        }),
    }
}

/// The same product with `Δ'(e) = e⊗e`, `Δ'(g) = e⊗g + g⊗e`: coassociative, but
/// not multiplicative.
pub fn broken_bialgebra() -> Bialgebra {
    Bialgebra {
        basis: vec!["e".into(), "g".into()],
        star: z2_product(),
        delta: TensorMap::from_fn(1, 2, 2, |out, inp| {
            let hit = match inp[0] {
                0 => out == [0, 0],
                _ => out == [0, 1] || out == [1, 0],
            };
            if hit {
                scalar::one()
            } else {
                scalar::zero()
            }
        }),
    }
}

fn z2_product() -> TensorMap {
    TensorMap::from_fn(2, 1, 2, |out, inp| {
        if out[0] == (inp[0] + inp[1]) % 2 {
            scalar::one()
        } else {
            scalar::zero()
        }
    })
}

/// `★^{m−1}`: the left-nested `m`-fold product, `(m,1)`; the identity for `m = 1`.
pub fn iterated_product(star: &TensorMap, m: usize) -> Result<TensorMap> {
    let mut acc = TensorMap::identity(1, star.dim());
    for _ in 1..m {
        acc = endv::jcirc(star, &acc, 1)?;
    }
    Ok(acc)
}

/// `Δ^{n−1}`: the left-nested `n`-fold coproduct, `(1,n)`; the identity for `n = 1`.
pub fn iterated_coproduct(delta: &TensorMap, n: usize) -> Result<TensorMap> {
    let mut acc = TensorMap::identity(1, delta.dim());
    for _ in 1..n {
        acc = endv::circ_i(&acc, delta, 1)?;
    }
    Ok(acc)
}

/// `(a★b)★c − a★(b★c)`.
pub fn associator(star: &TensorMap) -> Result<TensorMap> {
    endv::jcirc(star, star, 1)?.sub(&endv::jcirc(star, star, 2)?)
}

/// `(Δ⊗1)Δ − (1⊗Δ)Δ`.
pub fn coassociator(delta: &TensorMap) -> Result<TensorMap> {
    endv::circ_i(delta, delta, 1)?.sub(&endv::circ_i(delta, delta, 2)?)
}

/// `a⊗b ↦ Δ(a★b) − Δ(a)★Δ(b)`.
pub fn compatibility_defect(star: &TensorMap, delta: &TensorMap) -> Result<TensorMap> {
    let lhs = tensor::compose(delta, star)?;
    let rhs = endv::circledcirc(&Column::repeat(star, 2)?, &Row::repeat(delta, 2)?)?;
    lhs.sub(&rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub associator: TensorMap,
    pub coassociator: TensorMap,
    pub compatibility: TensorMap,
}

impl DefectReport {
    pub fn new(star: &TensorMap, delta: &TensorMap) -> Result<Self> {
        Ok(DefectReport {
            associator: associator(star)?,
            coassociator: coassociator(delta)?,
            compatibility: compatibility_defect(star, delta)?,
        })
    }

    pub fn holds(&self) -> bool {
        self.associator.is_zero() && self.coassociator.is_zero() && self.compatibility.is_zero()
    }

    /// First failing law, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.associator.is_zero() {
            Some("product is not associative")
        } else if !self.coassociator.is_zero() {
            Some("coproduct is not coassociative")
        } else if !self.compatibility.is_zero() {
            Some("coproduct is not multiplicative")
        } else {
            None
        }
    }
}

/// True iff `★` is associative, `Δ` coassociative and `Δ(a★b) = Δ(a)★Δ(b)`.
pub fn is_bialgebra(star: &TensorMap, delta: &TensorMap) -> Result<bool> {
    Ok(DefectReport::new(star, delta)?.holds())
}

/// Errors unless the pair is a bialgebra.
pub fn require_bialgebra(star: &TensorMap, delta: &TensorMap) -> Result<()> {
    match DefectReport::new(star, delta)?.failure() {
        None => Ok(()),
        Some(why) => Err(Error::NotBialgebra(why.into())),
    }
}
