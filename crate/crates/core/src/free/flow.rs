//! Words as planar trees of cells, and the canonical term read back from a tree.
//!
//! Every word is a tree of cells joined output-to-input. Under the axioms, two
//! words are equal exactly when they describe the same tree with the same order
//! of external legs; [`Shape`] is that tree, rooted at a canonical center.

use serde::Serialize;

use super::{FreeWord, GeneratorSymbol};
use crate::endv::{Kind, Op};

type Port = (usize, usize);

/// Cells and the edges between them, with external legs in planar order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub cells: Vec<GeneratorSymbol>,
    /// For each cell and input slot, the producing `(cell, output slot)`.
    pub feeds: Vec<Vec<Option<Port>>>,
    /// For each cell and output slot, the consuming `(cell, input slot)`.
    pub uses: Vec<Vec<Option<Port>>>,
    pub ext_in: Vec<Port>,
    pub ext_out: Vec<Port>,
}

/// A plain (or single-side) tree, or a column tree facing a row tree across `⊚`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Single(Flow),
    Split { column: Flow, row: Flow },
}

impl Flow {
    pub fn cell(g: GeneratorSymbol) -> Self {
        let (a, b) = g.legs();
        Flow {
            cells: vec![g],
            feeds: vec![vec![None; a]],
            uses: vec![vec![None; b]],
            ext_in: (0..a).map(|s| (0, s)).collect(),
            ext_out: (0..b).map(|s| (0, s)).collect(),
        }
    }

    fn absorb(&mut self, other: Flow) -> usize {
        let off = self.cells.len();
        let shift = |p: Option<Port>| p.map(|(c, s)| (c + off, s));
        self.cells.extend(other.cells);
        self.feeds
            .extend(other.feeds.into_iter().map(|v| v.into_iter().map(shift).collect::<Vec<_>>()));
        self.uses
            .extend(other.uses.into_iter().map(|v| v.into_iter().map(shift).collect::<Vec<_>>()));
        off
    }

    /// Feeds the single input of `upper` from external output `i` (0-based).
    fn attach_above(mut self, upper: Flow, i: usize) -> Flow {
        let above_out: Vec<Port> = upper.ext_out.clone();
        let (uc, us) = upper.ext_in[0];
        let off = self.absorb(upper);
        let (pc, ps) = self.ext_out[i];
        self.uses[pc][ps] = Some((uc + off, us));
        self.feeds[uc + off][us] = Some((pc, ps));
        let mut out = self.ext_out[..i].to_vec();
        out.extend(above_out.iter().map(|&(c, s)| (c + off, s)));
        out.extend_from_slice(&self.ext_out[i + 1..]);
        self.ext_out = out;
        self
    }

    /// Feeds external input `j` (0-based) from the single output of `lower`.
    fn attach_below(mut self, lower: Flow, j: usize) -> Flow {
        let below_in: Vec<Port> = lower.ext_in.clone();
        let (lc, ls) = lower.ext_out[0];
        let off = self.absorb(lower);
        let (cc, cs) = self.ext_in[j];
        self.feeds[cc][cs] = Some((lc + off, ls));
        self.uses[lc + off][ls] = Some((cc, cs));
        let mut inp = self.ext_in[..j].to_vec();
        inp.extend(below_in.iter().map(|&(c, s)| (c + off, s)));
        inp.extend_from_slice(&self.ext_in[j + 1..]);
        self.ext_in = inp;
        self
    }

    /// Replaces cell `c` by `keep` with the outputs `at..at+width` moved onto a new
    /// cell `top` whose single input is fed by output `at` of `keep`.
    pub fn split_upper(&self, c: usize, at: usize, width: usize, keep: GeneratorSymbol, top: GeneratorSymbol) -> Flow {
        let mut f = self.clone();
        let t = f.cells.len();
        let old = f.uses[c].clone();
        debug_assert_eq!(keep.legs().1, old.len() - width + 1);
        debug_assert_eq!(top.legs(), (1, width));
        f.cells[c] = keep;
        f.cells.push(top);
        let mut mine = old[..at].to_vec();
        mine.push(Some((t, 0)));
        mine.extend_from_slice(&old[at + width..]);
        f.uses[c] = mine;
        f.uses.push(old[at..at + width].to_vec());
        f.feeds.push(vec![Some((c, at))]);
        let relabel = |slot: usize| -> Port {
            if slot < at {
                (c, slot)
            } else if slot < at + width {
                (t, slot - at)
            } else {
                (c, slot - width + 1)
            }
        };
        for (slot, consumer) in old.iter().enumerate() {
            if let Some((q, s)) = consumer {
                f.feeds[*q][*s] = Some(relabel(slot));
            }
        }
        for p in f.ext_out.iter_mut() {
            if p.0 == c {
                *p = relabel(p.1);
            }
        }
        f
    }

    /// Mirror of [`Flow::split_upper`]: inputs `at..at+width` move onto a new cell
    /// `bottom` whose single output feeds input `at` of `keep`.
    pub fn split_lower(&self, c: usize, at: usize, width: usize, keep: GeneratorSymbol, bottom: GeneratorSymbol) -> Flow {
        let mut f = self.clone();
        let b = f.cells.len();
        let old = f.feeds[c].clone();
        debug_assert_eq!(keep.legs().0, old.len() - width + 1);
        debug_assert_eq!(bottom.legs(), (width, 1));
        f.cells[c] = keep;
        f.cells.push(bottom);
        let mut mine = old[..at].to_vec();
        mine.push(Some((b, 0)));
        mine.extend_from_slice(&old[at + width..]);
        f.feeds[c] = mine;
        f.feeds.push(old[at..at + width].to_vec());
        f.uses.push(vec![Some((c, at))]);
        let relabel = |slot: usize| -> Port {
            if slot < at {
                (c, slot)
            } else if slot < at + width {
                (b, slot - at)
            } else {
                (c, slot - width + 1)
            }
        };
        for (slot, producer) in old.iter().enumerate() {
            if let Some((p, s)) = producer {
                f.uses[*p][*s] = Some(relabel(slot));
            }
        }
        for p in f.ext_in.iter_mut() {
            if p.0 == c {
                *p = relabel(p.1);
            }
        }
        f
    }

    fn lower_node(&self, c: usize) -> Node {
        let children = self.feeds[c]
            .iter()
            .map(|p| {
                p.map(|(q, _)| {
                    debug_assert_eq!(self.cells[q].legs().1, 1, "producer below a tree cell has one output");
                    self.lower_node(q)
                })
            })
            .collect();
        Node {
            cell: self.cells[c].clone(),
            children,
        }
    }

    fn upper_node(&self, c: usize) -> Node {
        let children = self.uses[c]
            .iter()
            .map(|p| {
                p.map(|(q, _)| {
                    debug_assert_eq!(self.cells[q].legs().0, 1, "consumer above a tree cell has one input");
                    self.upper_node(q)
                })
            })
            .collect();
        Node {
            cell: self.cells[c].clone(),
            children,
        }
    }

    /// The canonical center of a plain tree: the cell with several inputs and several
    /// outputs if there is one, else the last cell with several inputs, else the first
    /// cell with several outputs.
    fn center(&self) -> usize {
        let legs: Vec<(usize, usize)> = self.cells.iter().map(GeneratorSymbol::legs).collect();
        if let Some(c) = (0..legs.len()).find(|&c| legs[c].0 >= 2 && legs[c].1 >= 2) {
            return c;
        }
        let root_merger = (0..legs.len()).find(|&c| {
            legs[c].0 >= 2 && self.uses[c][0].map_or(true, |(q, _)| legs[q].0 == 1)
        });
        if let Some(c) = root_merger {
            return c;
        }
        (0..legs.len())
            .find(|&c| self.feeds[c].iter().all(Option::is_none))
            .expect("a tree has a bottom cell")
    }
}

impl Structure {
    pub fn build(w: &FreeWord) -> Structure {
        match w {
            FreeWord::Gen(g) => Structure::Single(Flow::cell(g.clone())),
            FreeWord::Compose { op, left, right, index } => {
                let (l, r) = (Structure::build(left), Structure::build(right));
                match (op, l, r) {
                    (Op::CircledCirc, Structure::Single(column), Structure::Single(row)) => {
                        Structure::Split { column, row }
                    }
                    (Op::Circ | Op::Circled, Structure::Single(host), Structure::Single(ins)) => {
                        Structure::Single(host.attach_above(ins, index - 1))
                    }
                    (Op::JCirc | Op::JCircled, Structure::Single(ins), Structure::Single(host)) => {
                        Structure::Single(host.attach_below(ins, index - 1))
                    }
                    _ => unreachable!("words are checked when grafted"),
                }
            }
        }
    }
}

/// A cell with a subtree (or nothing) on each input, for trees growing downward, or
/// on each output, for trees growing upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Node {
    pub cell: GeneratorSymbol,
    pub children: Vec<Option<Node>>,
}

impl Node {
    /// External legs on the growing side.
    pub fn leaves(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.as_ref().map_or(1, Node::leaves))
            .sum()
    }

    pub fn dim(&self) -> usize {
        self.cell.cell_dim()
            + self
                .children
                .iter()
                .flatten()
                .map(Node::dim)
                .sum::<usize>()
    }

    pub fn cells(&self) -> Vec<&GeneratorSymbol> {
        let mut v = vec![&self.cell];
        for c in self.children.iter().flatten() {
            v.extend(c.cells());
        }
        v
    }

    fn map_cells(&self, f: &dyn Fn(&GeneratorSymbol) -> GeneratorSymbol) -> Node {
        Node {
            cell: f(&self.cell),
            children: self
                .children
                .iter()
                .map(|c| c.as_ref().map(|n| n.map_cells(f)))
                .collect(),
        }
    }

    /// Builds the subtree first, then grafts children at ascending positions.
    fn word(&self, op: Op) -> FreeWord {
        let mut w = FreeWord::Gen(self.cell.clone());
        let mut offset = 0;
        for (slot, child) in self.children.iter().enumerate() {
            if let Some(ch) = child {
                w = graft_below_or_above(op, w, ch.word(op), slot + 1 + offset);
                offset += ch.leaves() - 1;
            }
        }
        w
    }
}

fn graft_below_or_above(op: Op, host: FreeWord, sub: FreeWord, index: usize) -> FreeWord {
    let (left, right) = match op {
        Op::Circ | Op::Circled => (host, sub),
        _ => (sub, host),
    };
    FreeWord::Compose {
        op,
        left: Box::new(left),
        right: Box::new(right),
        index,
    }
}

/// The tree of a word, rooted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Shape {
    /// A plain center with merger trees below its inputs and splitter trees above
    /// its outputs.
    Type1 {
        center: GeneratorSymbol,
        lower: Vec<Option<Node>>,
        upper: Vec<Option<Node>>,
    },
    /// A tree of column cells.
    Column(Node),
    /// A tree of row cells.
    Row(Node),
    /// A column tree composed by `⊚` with a row tree.
    Type2 { column: Node, row: Node },
}

impl Shape {
    pub fn of(w: &FreeWord) -> Shape {
        Shape::from_structure(&Structure::build(w))
    }

    pub fn from_structure(s: &Structure) -> Shape {
        match s {
            Structure::Split { column, row } => Shape::Type2 {
                column: column.lower_node(column.ext_out[0].0),
                row: row.upper_node(row.ext_in[0].0),
            },
            Structure::Single(f) => match f.cells[0].kind {
                Kind::Column => Shape::Column(f.lower_node(f.ext_out[0].0)),
                Kind::Row => Shape::Row(f.upper_node(f.ext_in[0].0)),
                Kind::Plain => {
                    let c = f.center();
                    let below = f.lower_node(c);
                    let above = f.upper_node(c);
                    Shape::Type1 {
                        center: below.cell,
                        lower: below.children,
                        upper: above.children,
                    }
                }
            },
        }
    }

    /// The canonical term: lower-side grafts first, at ascending positions, each
    /// subtree assembled before it is grafted.
    pub fn to_word(&self) -> FreeWord {
        match self {
            Shape::Column(n) => n.word(Op::JCircled),
            Shape::Row(n) => n.word(Op::Circled),
            Shape::Type2 { column, row } => FreeWord::Compose {
                op: Op::CircledCirc,
                left: Box::new(column.word(Op::JCircled)),
                right: Box::new(row.word(Op::Circled)),
                index: 0,
            },
            Shape::Type1 { center, lower, upper } => {
                let below = Node {
                    cell: center.clone(),
                    children: lower.clone(),
                };
                let mut w = below.word(Op::JCirc);
                let mut offset = 0;
                for (slot, child) in upper.iter().enumerate() {
                    if let Some(ch) = child {
                        w = graft_below_or_above(Op::Circ, w, ch.word(Op::Circ), slot + 1 + offset);
                        offset += ch.leaves() - 1;
                    }
                }
                w
            }
        }
    }

    pub fn structure(&self) -> Structure {
        Structure::build(&self.to_word())
    }

    /// Total `(inputs, outputs)`; copy counts for single-side words as in
    /// [`super::WordSignature`].
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Shape::Type1 { lower, upper, .. } => (leaves(lower), leaves(upper)),
            Shape::Column(n) => (n.leaves(), n.cell.n),
            Shape::Row(n) => (n.cell.m, n.leaves()),
            Shape::Type2 { column, row } => (column.leaves(), row.leaves()),
        }
    }

    /// Sum of the cell dimensions.
    pub fn dim(&self) -> usize {
        match self {
            Shape::Type1 { center, lower, upper } => {
                center.cell_dim() + lower.iter().chain(upper).flatten().map(Node::dim).sum::<usize>()
            }
            Shape::Column(n) | Shape::Row(n) => n.dim(),
            Shape::Type2 { column, row } => column.dim() + row.dim(),
        }
    }

    pub fn cells(&self) -> Vec<&GeneratorSymbol> {
        match self {
            Shape::Type1 { center, lower, upper } => {
                let mut v = vec![center];
                for n in lower.iter().chain(upper).flatten() {
                    v.extend(n.cells());
                }
                v
            }
            Shape::Column(n) | Shape::Row(n) => n.cells(),
            Shape::Type2 { column, row } => {
                let mut v = column.cells();
                v.extend(row.cells());
                v
            }
        }
    }

    /// Splits a plain word with a cell of several inputs and several outputs across
    /// one `⊚`: that cell becomes a column cell facing a row cell, cells below it
    /// become column cells and cells above it row cells. `None` when no such cell exists.
    pub fn split_center(&self) -> Option<Shape> {
        let Shape::Type1 { center, lower, upper } = self else {
            return None;
        };
        if center.kind != Kind::Plain || center.m < 2 || center.n < 2 {
            return None;
        }
        let (m, n) = self.arity();
        let to_col = |g: &GeneratorSymbol| GeneratorSymbol {
            name: "st_col".into(),
            kind: Kind::Column,
            m: g.m,
            n,
        };
        let to_row = |g: &GeneratorSymbol| GeneratorSymbol {
            name: "st_row".into(),
            kind: Kind::Row,
            m,
            n: g.n,
        };
        let column = Node {
            cell: to_col(center),
            children: lower.iter().map(|c| c.as_ref().map(|x| x.map_cells(&to_col))).collect(),
        };
        let row = Node {
            cell: to_row(center),
            children: upper.iter().map(|c| c.as_ref().map(|x| x.map_cells(&to_row))).collect(),
        };
        Some(Shape::Type2 { column, row })
    }
}

fn leaves(v: &[Option<Node>]) -> usize {
    v.iter().map(|c| c.as_ref().map_or(1, Node::leaves)).sum()
}
