//! The free 2/3-PROP on typed generators: words, their tree shapes, normal forms,
//! a text syntax, and evaluation into `End(V)`.

mod eval;
mod flow;
mod parse;

use std::fmt;

use serde::Serialize;

use crate::endv::{Kind, Op};
use crate::error::{Error, Result};

pub use eval::{bialgebra_assignment, evaluate, Assignment};
pub use flow::{Flow, Node, Shape, Structure};
pub use parse::parse_word;

/// A generator with a name and a signature. For plain generators `(m, n)` are the
/// input and output counts; for columns `m` inputs and `n` copies; for rows `m`
/// copies and `n` outputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneratorSymbol {
    pub name: String,
    pub kind: Kind,
    pub m: usize,
    pub n: usize,
}

impl GeneratorSymbol {
    pub fn new(name: &str, kind: Kind, m: usize, n: usize) -> Result<Self> {
        let ok = match kind {
            Kind::Plain => m >= 1 && n >= 1 && m + n >= 3,
            Kind::Row | Kind::Column => m >= 2 && n >= 2,
        };
        if !ok {
            return Err(Error::InvalidArity {
                what: format!("generator {name}"),
                m,
                n,
            });
        }
        Ok(GeneratorSymbol {
            name: name.into(),
            kind,
            m,
            n,
        })
    }

    /// The plain cell `k(m,n)`.
    pub fn k(m: usize, n: usize) -> Result<Self> {
        GeneratorSymbol::new("k", Kind::Plain, m, n)
    }

    pub fn st_col(m: usize, n: usize) -> Result<Self> {
        GeneratorSymbol::new("st_col", Kind::Column, m, n)
    }

    pub fn st_row(m: usize, n: usize) -> Result<Self> {
        GeneratorSymbol::new("st_row", Kind::Row, m, n)
    }

    /// Kind implied by a name in the word syntax.
    pub fn kind_of_name(name: &str) -> Kind {
        match name {
            "st_col" => Kind::Column,
            "st_row" => Kind::Row,
            _ => Kind::Plain,
        }
    }

    /// Legs as a vertex of a tree: a column cell has one output, a row cell one input.
    pub fn legs(&self) -> (usize, usize) {
        match self.kind {
            Kind::Plain => (self.m, self.n),
            Kind::Column => (self.m, 1),
            Kind::Row => (1, self.n),
        }
    }

    /// Dimension of the matching stratum cell.
    pub fn cell_dim(&self) -> usize {
        match self.kind {
            Kind::Plain => self.m + self.n - 3,
            Kind::Column => self.m - 2,
            Kind::Row => self.n - 2,
        }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.name, self.m, self.n)
    }
}

/// Signature of a word: its kind, `(m, n)` as for generators, and whether it
/// contains a `⊚`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WordSignature {
    pub kind: Kind,
    pub m: usize,
    pub n: usize,
    pub has_occ: bool,
}

/// A word as a composition term. Operand order follows [`Op`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeWord {
    Gen(GeneratorSymbol),
    Compose {
        op: Op,
        left: Box<FreeWord>,
        right: Box<FreeWord>,
        index: usize,
    },
}

impl FreeWord {
    pub fn gen(g: GeneratorSymbol) -> Self {
        FreeWord::Gen(g)
    }

    pub fn signature(&self) -> WordSignature {
        match self {
            FreeWord::Gen(g) => WordSignature {
                kind: g.kind,
                m: g.m,
                n: g.n,
                has_occ: false,
            },
            FreeWord::Compose { op, left, right, .. } => {
                let (a, b) = (left.signature(), right.signature());
                match op {
                    Op::Circ => WordSignature { n: a.n + b.n - 1, ..a },
                    Op::Circled => WordSignature { n: a.n + b.n - 1, ..a },
                    Op::JCirc | Op::JCircled => WordSignature { m: a.m + b.m - 1, ..b },
                    Op::CircledCirc => WordSignature {
                        kind: Kind::Plain,
                        m: a.m,
                        n: b.n,
                        has_occ: true,
                    },
                }
            }
        }
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        match self {
            FreeWord::Gen(_) => 1,
            FreeWord::Compose { left, right, .. } => left.size() + right.size(),
        }
    }

    /// Generator occurrences, left to right.
    pub fn generators(&self) -> Vec<&GeneratorSymbol> {
        match self {
            FreeWord::Gen(g) => vec![g],
            FreeWord::Compose { left, right, .. } => {
                let mut v = left.generators();
                v.extend(right.generators());
                v
            }
        }
    }

    pub fn shape(&self) -> Shape {
        Shape::of(self)
    }

    /// Canonical representative of the class of `self` under the axioms.
    pub fn normal_form(&self) -> FreeWord {
        self.shape().to_word()
    }
}

/// Composes two words, checking that `op` applies to their signatures.
pub fn graft(op: Op, left: FreeWord, right: FreeWord, index: usize) -> Result<FreeWord> {
    let (a, b) = (left.signature(), right.signature());
    let fail = |why: String| Err(Error::Inadmissible(format!("{left} {} {right}: {why}", op_text(op, index))));
    let in_range = |i: usize, bound: usize| i >= 1 && i <= bound;
    match op {
        Op::Circ | Op::JCirc => {
            let (host, ins) = if op == Op::Circ { (a, b) } else { (b, a) };
            if host.kind != Kind::Plain || ins.kind != Kind::Plain {
                return fail("∘-type compositions take plain words".into());
            }
            if host.has_occ {
                return fail("the host already contains ⊚; only row/column refinements may follow".into());
            }
            let (slots, single) = if op == Op::Circ { (host.n, ins.m) } else { (host.m, ins.n) };
            if single != 1 {
                return fail(format!("inserted word must have exactly one {}", if op == Op::Circ { "input" } else { "output" }));
            }
            if !in_range(index, slots) {
                return fail(format!("position {index} outside 1..={slots}"));
            }
        }
        Op::Circled => {
            if a.kind != Kind::Row || b.kind != Kind::Row {
                return fail("⊚_i composes two rows".into());
            }
            if a.m != b.m {
                return fail(format!("copy counts {} and {} differ", a.m, b.m));
            }
            if !in_range(index, a.n) {
                return fail(format!("position {index} outside 1..={}", a.n));
            }
        }
        Op::JCircled => {
            if a.kind != Kind::Column || b.kind != Kind::Column {
                return fail("_j⊚ composes two columns".into());
            }
            if a.n != b.n {
                return fail(format!("copy counts {} and {} differ", a.n, b.n));
            }
            if !in_range(index, b.m) {
                return fail(format!("position {index} outside 1..={}", b.m));
            }
        }
        Op::CircledCirc => {
            if a.kind != Kind::Column || b.kind != Kind::Row {
                return fail("⊚ takes a column and then a row".into());
            }
            if a.m != b.m || a.n != b.n {
                return fail(format!(
                    "column ({},{}) and row ({},{}) profiles do not match",
                    a.m, a.n, b.m, b.n
                ));
            }
        }
    }
    let index = if op == Op::CircledCirc { 0 } else { index };
    Ok(FreeWord::Compose {
        op,
        left: Box::new(left),
        right: Box::new(right),
        index,
    })
}

fn op_text(op: Op, index: usize) -> String {
    match op {
        Op::Circ => format!("o[{index}]"),
        Op::JCirc => format!("[{index}]o"),
        Op::Circled => format!("oc[{index}]"),
        Op::JCircled => format!("[{index}]oc"),
        Op::CircledCirc => "occ".into(),
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeWord::Gen(g) => write!(f, "{g}"),
            FreeWord::Compose { op, left, right, index } => {
                let side = |w: &FreeWord| match w {
                    FreeWord::Gen(_) => w.to_string(),
                    _ => format!("({w})"),
                };
                write!(f, "{} {} {}", side(left), op_text(*op, *index), side(right))
            }
        }
    }
}

impl Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
