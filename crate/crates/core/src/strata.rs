//! The cell complex of the compactified configuration spaces `K(m,n)`: strata are
//! free words in normal form, faces are single-cell degenerations.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::endv::Kind;
use crate::error::{Error, Result};
use crate::free::{Flow, FreeWord, GeneratorSymbol, Shape, Structure};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Stratum {
    pub word: FreeWord,
    pub dim: usize,
}

impl Stratum {
    pub fn of(shape: &Shape) -> Self {
        Stratum {
            word: shape.to_word(),
            dim: shape.dim(),
        }
    }
}

/// One codimension-one degeneration: which cell (by position in the canonical
/// term's tree) moved, and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub shape: Shape,
    pub cell: usize,
    pub position: usize,
}

fn k(m: usize, n: usize) -> GeneratorSymbol {
    GeneratorSymbol {
        name: "k".into(),
        kind: Kind::Plain,
        m,
        n,
    }
}

fn relabel(g: &GeneratorSymbol, m: usize, n: usize) -> GeneratorSymbol {
    GeneratorSymbol {
        name: g.name.clone(),
        kind: g.kind,
        m,
        n,
    }
}

fn cell_moves(flow: &Flow, out: &mut Vec<(Flow, usize, usize)>) {
    for (c, g) in flow.cells.iter().enumerate() {
        match g.kind {
            Kind::Plain => {
                let (a, b) = (g.m, g.n);
                // collapse n1 consecutive outputs
                let top_max = if a == 1 { b.saturating_sub(1) } else { b };
                for n1 in 2..=top_max {
                    for at in 0..=b - n1 {
                        out.push((flow.split_upper(c, at, n1, relabel(g, a, b - n1 + 1), k(1, n1)), c, at));
                    }
                }
                // collapse m1 consecutive inputs
                let bottom_max = if b == 1 { a.saturating_sub(1) } else { a };
                for m1 in 2..=bottom_max {
                    for at in 0..=a - m1 {
                        out.push((flow.split_lower(c, at, m1, relabel(g, a - m1 + 1, b), k(m1, 1)), c, at));
                    }
                }
            }
            Kind::Column => {
                let a = g.m;
                for m1 in 2..a {
                    for at in 0..=a - m1 {
                        let keep = relabel(g, a - m1 + 1, g.n);
                        out.push((flow.split_lower(c, at, m1, keep, relabel(g, m1, g.n)), c, at));
                    }
                }
            }
            Kind::Row => {
                let b = g.n;
                for n1 in 2..b {
                    for at in 0..=b - n1 {
                        let keep = relabel(g, g.m, b - n1 + 1);
                        out.push((flow.split_upper(c, at, n1, keep, relabel(g, g.m, n1)), c, at));
                    }
                }
            }
        }
    }
}

/// Every single-cell degeneration of a stratum, with the moved cell and position;
/// the same face may appear more than once.
pub fn degenerations(shape: &Shape) -> Vec<Face> {
    let mut out = Vec::new();
    match shape.structure() {
        Structure::Single(flow) => {
            let mut moves = Vec::new();
            cell_moves(&flow, &mut moves);
            for (f, cell, position) in moves {
                out.push(Face {
                    shape: Shape::from_structure(&Structure::Single(f)),
                    cell,
                    position,
                });
            }
            if let Some(split) = shape.split_center() {
                let center = flow
                    .cells
                    .iter()
                    .position(|g| g.kind == Kind::Plain && g.m >= 2 && g.n >= 2)
                    .unwrap_or(0);
                out.push(Face {
                    shape: split,
                    cell: center,
                    position: 0,
                });
            }
        }
        Structure::Split { column, row } => {
            let mut moves = Vec::new();
            cell_moves(&column, &mut moves);
            for (f, cell, position) in moves {
                out.push(Face {
                    shape: Shape::from_structure(&Structure::Split {
                        column: f,
                        row: row.clone(),
                    }),
                    cell,
                    position,
                });
            }
            let offset = column.cells.len();
            let mut moves = Vec::new();
            cell_moves(&row, &mut moves);
            for (f, cell, position) in moves {
                out.push(Face {
                    shape: Shape::from_structure(&Structure::Split {
                        column: column.clone(),
                        row: f,
                    }),
                    cell: cell + offset,
                    position,
                });
            }
        }
    }
    out
}

/// Distinct codimension-one faces, sorted.
pub fn faces(shape: &Shape) -> Vec<Shape> {
    let set: BTreeSet<Shape> = degenerations(shape).into_iter().map(|f| f.shape).collect();
    set.into_iter().collect()
}

pub fn top_cell(m: usize, n: usize) -> Result<Shape> {
    if m < 1 || n < 1 || m + n < 3 {
        return Err(Error::InvalidArity {
            what: "configuration space".into(),
            m,
            n,
        });
    }
    Ok(Shape::Type1 {
        center: k(m, n),
        lower: vec![None; m],
        upper: vec![None; n],
    })
}

/// All strata of the compactified `K(m,n)`, grouped by dimension; within a
/// dimension, sorted by their printed word.
pub fn enumerate_strata(m: usize, n: usize) -> Result<Vec<Vec<Shape>>> {
    let top = top_cell(m, n)?;
    let top_dim = top.dim();
    let mut seen: BTreeSet<Shape> = BTreeSet::new();
    let mut queue = VecDeque::from([top.clone()]);
    seen.insert(top);
    while let Some(s) = queue.pop_front() {
        for f in faces(&s) {
            debug_assert_eq!(f.dim() + 1, s.dim());
            if seen.insert(f.clone()) {
                queue.push_back(f);
            }
        }
    }
    let mut by_dim = vec![Vec::new(); top_dim + 1];
    for s in seen {
        by_dim[s.dim()].push(s);
    }
    for v in by_dim.iter_mut() {
        v.sort_by_cached_key(|s| s.to_word().to_string());
    }
    Ok(by_dim)
}

/// How incidence signs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignRule {
    /// Orientations propagated cell by cell so that every boundary closes up.
    Induced,
    /// `(−1)^{(dims of earlier cells) + position}` per degeneration, summed.
    Koszul,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainComplex {
    pub m: usize,
    pub n: usize,
    pub rule: SignRule,
    /// Strata by dimension.
    pub strata: Vec<Vec<Stratum>>,
    /// `boundaries[k]` maps `C_k` to `C_{k−1}`: rows index `(k−1)`-strata, columns `k`-strata.
    #[serde(skip)]
    pub boundaries: Vec<Matrix>,
}

fn koszul_column(shape: &Shape, index: &HashMap<Shape, usize>, rows: usize) -> Vec<Scalar> {
    let cell_dims: Vec<usize> = match shape.structure() {
        Structure::Single(f) => f.cells.iter().map(GeneratorSymbol::cell_dim).collect(),
        Structure::Split { column, row } => column
            .cells
            .iter()
            .chain(&row.cells)
            .map(GeneratorSymbol::cell_dim)
            .collect(),
    };
    let mut col = vec![Scalar::zero(); rows];
    for face in degenerations(shape) {
        let before: usize = cell_dims[..face.cell].iter().sum();
        col[index[&face.shape]] += scalar::sign(before + face.position);
    }
    col
}

/// Signs `[g : f]` for the facets of `g`, given the signs already fixed one dimension
/// down: the first facet gets `+1`, and each ridge shared by two facets forces the
/// second facet's sign so that the ridge cancels.
fn induced_column(
    g: &Shape,
    facets: &[usize],
    lower: &Matrix,
) -> std::result::Result<BTreeMap<usize, Scalar>, String> {
    let mut sign: BTreeMap<usize, Scalar> = BTreeMap::new();
    if g.dim() == 1 {
        if facets.len() != 2 {
            return Err(format!("edge {} has {} endpoints", g.to_word(), facets.len()));
        }
        sign.insert(facets[0], Scalar::one());
        sign.insert(facets[1], -Scalar::one());
        return Ok(sign);
    }
    // ridge -> facets of g containing it, with the incidence sign
    let mut ridges: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for &f in facets {
        for r in 0..lower.rows {
            let c = &lower.data[r][f];
            if !c.is_zero() {
                ridges.entry(r).or_default().push((f, c.clone()));
            }
        }
    }
    if let Some((r, v)) = ridges.iter().find(|(_, v)| v.len() != 2) {
        return Err(format!(
            "ridge {r} of {} lies in {} facets, not 2",
            g.to_word(),
            v.len()
        ));
    }
    sign.insert(facets[0], Scalar::one());
    let mut queue = VecDeque::from([facets[0]]);
    while let Some(f) = queue.pop_front() {
        let sf = sign[&f].clone();
        for pair in ridges.values() {
            let Some(mine) = pair.iter().position(|(x, _)| *x == f) else {
                continue;
            };
            let (other, c_other) = &pair[1 - mine];
            let c_mine = &pair[mine].1;
            let want = -(&sf * c_mine) / c_other;
            match sign.get(other) {
                Some(s) if *s != want => {
                    return Err(format!("{} is not orientable along its boundary", g.to_word()))
                }
                Some(_) => {}
                None => {
                    sign.insert(*other, want);
                    queue.push_back(*other);
                }
            }
        }
    }
    if sign.len() != facets.len() {
        return Err(format!("boundary of {} is disconnected", g.to_word()));
    }
    Ok(sign)
}

impl ChainComplex {
    /// Builds every boundary matrix and checks `∂∘∂ = 0`.
    pub fn assemble(m: usize, n: usize, rule: SignRule) -> Result<ChainComplex> {
        let shapes = enumerate_strata(m, n)?;
        let index: Vec<HashMap<Shape, usize>> = shapes
            .iter()
            .map(|v| v.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut boundaries = vec![Matrix::zeros(0, shapes[0].len())];
        for d in 1..shapes.len() {
            let rows = shapes[d - 1].len();
            let mut mat = Matrix::zeros(rows, shapes[d].len());
            for (j, g) in shapes[d].iter().enumerate() {
                match rule {
                    SignRule::Koszul => {
                        for (i, x) in koszul_column(g, &index[d - 1], rows).into_iter().enumerate() {
                            mat.data[i][j] = x;
                        }
                    }
                    SignRule::Induced => {
                        let facets: Vec<usize> = faces(g).iter().map(|f| index[d - 1][f]).collect();
                        let col = induced_column(g, &facets, &boundaries[d - 1]).map_err(|w| {
                            Error::BoundarySquare {
                                degree: d,
                                witness: w,
                            }
                        })?;
                        for (i, x) in col {
                            mat.data[i][j] = x;
                        }
                    }
                }
            }
            boundaries.push(mat);
        }
        let strata = shapes
            .iter()
            .map(|v| v.iter().map(Stratum::of).collect())
            .collect();
        let c = ChainComplex {
            m,
            n,
            rule,
            strata,
            boundaries,
        };
        c.verify()?;
        Ok(c)
    }

    /// Checks `∂_{k−1}∘∂_k = 0` for every `k`, naming a stratum whose boundary
    /// does not close up.
    pub fn verify(&self) -> Result<()> {
        for d in 2..self.boundaries.len() {
            let sq = self.boundaries[d - 1].mul(&self.boundaries[d]);
            if let Some((_, j, _)) = sq.triplets().first() {
                return Err(Error::BoundarySquare {
                    degree: d,
                    witness: self.strata[d][*j].word.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn top_dim(&self) -> usize {
        self.strata.len() - 1
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(Matrix::rank).collect();
        (0..self.strata.len())
            .map(|d| {
                let next = ranks.get(d + 1).copied().unwrap_or(0);
                self.strata[d].len() - ranks[d] - next
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    fn locate(&self, word: &FreeWord) -> Option<(usize, usize)> {
        let nf = word.normal_form();
        self.strata
            .iter()
            .enumerate()
            .find_map(|(d, v)| v.iter().position(|s| s.word == nf).map(|i| (d, i)))
    }

    /// `∂` of a stratum as signed faces.
    pub fn boundary(&self, word: &FreeWord) -> Result<Vec<(Stratum, Scalar)>> {
        let (d, j) = self
            .locate(word)
            .ok_or_else(|| Error::Inadmissible(format!("{word} is not a stratum of K({},{})", self.m, self.n)))?;
        if d == 0 {
            return Err(Error::ZeroDimensional);
        }
        Ok(self.boundaries[d]
            .data
            .iter()
            .enumerate()
            .filter(|(_, row)| !row[j].is_zero())
            .map(|(i, row)| (self.strata[d - 1][i].clone(), row[j].clone()))
            .collect())
    }

    /// Boundary matrices as `d_k rows cols` headers followed by `row col value` lines (1-based).
    pub fn triplets_text(&self) -> String {
        let mut s = String::new();
        for (d, mat) in self.boundaries.iter().enumerate().skip(1) {
            let _ = writeln!(s, "d_{d} {} {}", mat.rows, mat.cols);
            for (i, j, v) in mat.triplets() {
                let _ = writeln!(s, "{} {} {}", i + 1, j + 1, scalar::format(&v));
            }
        }
        s
    }

    /// The face poset as a DOT digraph, edges from a stratum to its faces.
    pub fn dot(&self) -> String {
        let mut s = format!("digraph K_{}_{} {{\n", self.m, self.n);
        for (d, v) in self.strata.iter().enumerate() {
            for (i, st) in v.iter().enumerate() {
                let _ = writeln!(s, "  s{d}_{i} [label=\"{}\"];", st.word);
            }
        }
        for (d, mat) in self.boundaries.iter().enumerate().skip(1) {
            for (i, j, v) in mat.triplets() {
                let sign = if v > Scalar::zero() { "+" } else { "-" };
                let _ = writeln!(s, "  s{d}_{j} -> s{}_{i} [label=\"{sign}\"];", d - 1);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `∂` of a single stratum, orienting the complex of its arity.
pub fn boundary(word: &FreeWord) -> Result<Vec<(Stratum, Scalar)>> {
    let (m, n) = word.shape().arity();
    ChainComplex::assemble(m, n, SignRule::Induced)?.boundary(word)
}
