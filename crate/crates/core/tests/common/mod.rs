//! Oracles written against raw coefficients and plain combinatorics, without going
//! through the composition code under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};
use rand::Rng;
use tprop_core::endv::{Column, EndComponent, Kind, Op, Row};
use tprop_core::free::{graft, FreeWord, GeneratorSymbol};
use tprop_core::{Scalar, TensorMap};

pub fn rat(p: i64, q: i64) -> Scalar {
    Scalar::new(p.into(), q.into())
}

/// Every multi-index of length `len` over `0..d`, leg 1 first.
pub fn indices(len: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn build(m: usize, n: usize, d: usize, f: impl Fn(&[usize], &[usize]) -> Scalar) -> TensorMap {
    let mut coeffs = Vec::new();
    for out in indices(n, d) {
        for inp in indices(m, d) {
            coeffs.push(f(&out, &inp));
        }
    }
    TensorMap::new(m, n, d, coeffs).unwrap()
}

/// `(b∘a)(out, in) = Σ_mid b(out, mid) a(mid, in)`.
pub fn compose(b: &TensorMap, a: &TensorMap) -> TensorMap {
    let d = a.dim();
    build(a.inputs(), b.outputs(), d, |out, inp| {
        indices(a.outputs(), d)
            .iter()
            .map(|mid| b.get(out, mid) * a.get(mid, inp))
            .sum()
    })
}

/// `θ` applied to output `i` of `ψ`.
pub fn circ(psi: &TensorMap, theta: &TensorMap, i: usize) -> TensorMap {
    let (n, n1, d) = (psi.outputs(), theta.outputs(), psi.dim());
    build(psi.inputs(), n + n1 - 1, d, |out, inp| {
        let (before, rest) = out.split_at(i - 1);
        let (block, after) = rest.split_at(n1);
        (0..d)
            .map(|k| {
                let o: Vec<usize> = before.iter().copied().chain([k]).chain(after.iter().copied()).collect();
                psi.get(&o, inp) * theta.get(block, &[k])
            })
            .sum()
    })
}

/// `θ` feeding input `j` of `ψ`.
pub fn jcirc(theta: &TensorMap, psi: &TensorMap, j: usize) -> TensorMap {
    let (m, m1, d) = (psi.inputs(), theta.inputs(), psi.dim());
    build(m + m1 - 1, psi.outputs(), d, |out, inp| {
        let (before, rest) = inp.split_at(j - 1);
        let (block, after) = rest.split_at(m1);
        (0..d)
            .map(|k| {
                let a: Vec<usize> = before.iter().copied().chain([k]).chain(after.iter().copied()).collect();
                theta.get(&[k], block) * psi.get(out, &a)
            })
            .sum()
    })
}

/// `α ⊚ β` evaluated leg by leg: input `a` of the result splits through the column
/// entry `ψ_b` for each output `b`, and the row entry `θ_a` collects them.
pub fn circledcirc(alpha: &Column, beta: &Row) -> TensorMap {
    let (m, n, d) = (beta.copies(), alpha.copies(), beta.dim());
    build(m, n, d, |out, inp| {
        // x[a][b]: the value on the internal edge from splitter a to merger b
        let mut total = Scalar::zero();
        for x in indices(m * n, d) {
            let mut term = Scalar::one();
            for a in 0..m {
                let legs: Vec<usize> = (0..n).map(|b| x[a * n + b]).collect();
                term *= beta.entries()[a].get(&legs, &[inp[a]]);
                if term.is_zero() {
                    break;
                }
            }
            if term.is_zero() {
                continue;
            }
            for b in 0..n {
                let legs: Vec<usize> = (0..m).map(|a| x[a * n + b]).collect();
                term *= alpha.entries()[b].get(&[out[b]], &legs);
            }
            total += term;
        }
        total
    })
}

pub fn product(p: &TensorMap, a: usize, b: usize, k: usize) -> Scalar {
    p.get(&[k], &[a, b]).clone()
}

pub fn coproduct(t: &TensorMap, a: usize, x: usize, y: usize) -> Scalar {
    t.get(&[x, y], &[a]).clone()
}

/// `(ab)c − a(bc)` from structure constants.
pub fn associator(p: &TensorMap) -> TensorMap {
    associator_terms(p, p)
}

fn associator_terms(p_in: &TensorMap, p_out: &TensorMap) -> TensorMap {
    let d = p_in.dim();
    build(3, 1, d, |out, inp| {
        let (a, b, c, l) = (inp[0], inp[1], inp[2], out[0]);
        (0..d)
            .map(|k| product(p_in, a, b, k) * product(p_out, k, c, l) - product(p_in, b, c, k) * product(p_out, a, k, l))
            .sum()
    })
}

/// `(Δ⊗1)Δ − (1⊗Δ)Δ` from structure constants.
pub fn coassociator(t: &TensorMap) -> TensorMap {
    coassociator_terms(t, t)
}

fn coassociator_terms(t_first: &TensorMap, t_second: &TensorMap) -> TensorMap {
    let d = t_first.dim();
    build(1, 3, d, |out, inp| {
        let (a, x, y, z) = (inp[0], out[0], out[1], out[2]);
        (0..d)
            .map(|k| {
                coproduct(t_first, a, k, z) * coproduct(t_second, k, x, y)
                    - coproduct(t_first, a, x, k) * coproduct(t_second, k, y, z)
            })
            .sum()
    })
}

/// `Δ(ab) − Δ(a)Δ(b)` with the componentwise product on `V⊗V`.
pub fn compatibility(p: &TensorMap, t: &TensorMap) -> TensorMap {
    delta_of_product(p, t).sub(&product_of_deltas([p, p], [t, t])).unwrap()
}

/// `a⊗b ↦ T(P(a,b))`.
fn delta_of_product(p: &TensorMap, t: &TensorMap) -> TensorMap {
    let d = p.dim();
    build(2, 2, d, |out, inp| {
        (0..d)
            .map(|k| product(p, inp[0], inp[1], k) * coproduct(t, k, out[0], out[1]))
            .sum()
    })
}

/// `a⊗b ↦ Σ ps[0](a1,b1) ⊗ ps[1](a2,b2)` with `ts[0](a) = Σ a1⊗a2`, `ts[1](b) = Σ b1⊗b2`.
fn product_of_deltas(ps: [&TensorMap; 2], ts: [&TensorMap; 2]) -> TensorMap {
    let d = ps[0].dim();
    build(2, 2, d, |out, inp| {
        let (a, b, x, y) = (inp[0], inp[1], out[0], out[1]);
        let mut s = Scalar::zero();
        for a1 in 0..d {
            for a2 in 0..d {
                let da = coproduct(ts[0], a, a1, a2);
                if da.is_zero() {
                    continue;
                }
                for b1 in 0..d {
                    for b2 in 0..d {
                        s += &da * coproduct(ts[1], b, b1, b2) * product(ps[0], a1, b1, x) * product(ps[1], a2, b2, y);
                    }
                }
            }
        }
        s
    })
}

fn add(a: TensorMap, b: TensorMap) -> TensorMap {
    a.add(&b).unwrap()
}

/// Coefficients of `ε` in the three defects of `(P + εP1, T + εT1)`, by the product rule.
pub fn first_order(p: &TensorMap, t: &TensorMap, p1: &TensorMap, t1: &TensorMap) -> [TensorMap; 3] {
    let assoc = add(associator_terms(p1, p), associator_terms(p, p1));
    let coassoc = add(coassociator_terms(t1, t), coassociator_terms(t, t1));
    let linear = add(delta_of_product(p1, t), delta_of_product(p, t1));
    let quadratic = [
        product_of_deltas([p1, p], [t, t]),
        product_of_deltas([p, p1], [t, t]),
        product_of_deltas([p, p], [t1, t]),
        product_of_deltas([p, p], [t, t1]),
    ]
    .into_iter()
    .reduce(add)
    .unwrap();
    [assoc, coassoc, linear.sub(&quadratic).unwrap()]
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Face counts of the associahedron on `leaves` leaves, by dimension, from planar
/// trees: a tree with `v` internal vertices is a face of dimension `leaves − 1 − v`.
pub fn associahedron_f_vector(leaves: usize) -> Vec<usize> {
    // trees[l][v]: planar trees, every internal vertex with at least 2 children
    let mut trees = vec![vec![0usize; leaves + 1]; leaves + 1];
    trees[1][0] = 1;
    for l in 2..=leaves {
        // forests[k][l'][v']: ordered sequences of k trees
        let mut seq: HashMap<(usize, usize, usize), usize> = HashMap::new();
        seq.insert((0, 0, 0), 1);
        for k in 1..=l {
            for ll in 0..=l {
                for vv in 0..=l {
                    let mut s = 0;
                    for l1 in 1..=ll {
                        for v1 in 0..=vv {
                            let prev = seq.get(&(k - 1, ll - l1, vv - v1)).copied().unwrap_or(0);
                            if prev > 0 && l1 < l {
                                s += prev * trees[l1][v1];
                            }
                        }
                    }
                    if s > 0 {
                        seq.insert((k, ll, vv), s);
                    }
                }
            }
        }
        for v in 1..=l {
            trees[l][v] = (2..=l).map(|k| seq.get(&(k, l, v - 1)).copied().unwrap_or(0)).sum();
        }
    }
    let top = leaves - 2;
    (0..=top).map(|dim| trees[leaves][leaves - 1 - dim]).collect()
}

// ---- free words ----

/// `(m, n)` of a word as generator data: inputs and outputs for plain words,
/// `(copies, outputs)` for rows, `(inputs, copies)` for columns.
pub fn word_arity(w: &FreeWord) -> (usize, usize) {
    match w {
        FreeWord::Gen(g) => (g.m, g.n),
        FreeWord::Compose { op, left, right, .. } => {
            let (a, b) = (word_arity(left), word_arity(right));
            match op {
                Op::Circ | Op::Circled => (a.0, a.1 + b.1 - 1),
                Op::JCirc | Op::JCircled => (a.0 + b.0 - 1, b.1),
                Op::CircledCirc => (a.0, b.1),
            }
        }
    }
}

fn node(op: Op, left: &FreeWord, right: &FreeWord, index: usize) -> FreeWord {
    FreeWord::Compose {
        op,
        left: Box::new(left.clone()),
        right: Box::new(right.clone()),
        index,
    }
}

/// One-step rewrites at the root by the associativity, commutation and mixed
/// associativity laws.
fn root_moves(w: &FreeWord) -> Vec<FreeWord> {
    let FreeWord::Compose { op, left, right, index } = w else {
        return vec![];
    };
    let mut out = Vec::new();
    let (op, x) = (*op, *index);
    match op {
        Op::Circ | Op::Circled => {
            if let FreeWord::Compose { op: op2, left: a, right: b, index: i } = left.as_ref() {
                let (i, j, c) = (*i, x, right.as_ref());
                if *op2 == op {
                    let nb = word_arity(b).1;
                    let nc = word_arity(c).1;
                    out.push(if j >= i && j < i + nb {
                        node(op, a, &node(op, b, c, j - i + 1), i)
                    } else if j < i {
                        node(op, &node(op, a, c, j), b, i + nc - 1)
                    } else {
                        node(op, &node(op, a, c, j - nb + 1), b, i)
                    });
                }
                if op == Op::Circ && *op2 == Op::JCirc {
                    // (A j∘ B) ∘_x C  ->  A j∘ (B ∘_x C)
                    out.push(node(Op::JCirc, a, &node(Op::Circ, b, c, j), i));
                }
            }
            if let FreeWord::Compose { op: op2, left: b, right: c, index: k } = right.as_ref() {
                if *op2 == op {
                    out.push(node(op, &node(op, left, b, x), c, x + k - 1));
                }
            }
        }
        Op::JCirc | Op::JCircled => {
            let c = left.as_ref();
            if let FreeWord::Compose { op: op2, left: b, right: a, index: j } = right.as_ref() {
                let (j, k) = (*j, x);
                if *op2 == op {
                    let mb = word_arity(b).0;
                    let mc = word_arity(c).0;
                    out.push(if k >= j && k < j + mb {
                        node(op, &node(op, c, b, k - j + 1), a, j)
                    } else if k < j {
                        node(op, b, &node(op, c, a, k), j + mc - 1)
                    } else {
                        node(op, b, &node(op, c, a, k - mb + 1), j)
                    });
                }
                if op == Op::JCirc && *op2 == Op::Circ {
                    // A j∘ (B ∘_i C)  ->  (A j∘ B) ∘_i C
                    out.push(node(Op::Circ, &node(Op::JCirc, c, b, k), a, j));
                }
            }
            if let FreeWord::Compose { op: op2, left: cc, right: b, index: l } = left.as_ref() {
                if *op2 == op {
                    out.push(node(op, cc, &node(op, b, right, x), x + l - 1));
                }
            }
        }
        Op::CircledCirc => {}
    }
    // a one-output word feeding a one-input word is the same graph either way
    let (a, b) = (left.as_ref(), right.as_ref());
    match op {
        Op::Circ if word_arity(a).1 == 1 && word_arity(b).0 == 1 => out.push(node(Op::JCirc, a, b, 1)),
        Op::JCirc if word_arity(a).1 == 1 && word_arity(b).0 == 1 => out.push(node(Op::Circ, a, b, 1)),
        _ => {}
    }
    out
}

/// All words one law away from `w`, at any subterm.
pub fn neighbours(w: &FreeWord) -> Vec<FreeWord> {
    let mut out = root_moves(w);
    if let FreeWord::Compose { op, left, right, index } = w {
        for l in neighbours(left) {
            out.push(node(*op, &l, right, *index));
        }
        for r in neighbours(right) {
            out.push(node(*op, left, &r, *index));
        }
    }
    out
}

/// Rebuilds `w` through `graft`, which rejects anything ill-typed.
pub fn regraft(w: &FreeWord) -> FreeWord {
    match w {
        FreeWord::Gen(_) => w.clone(),
        FreeWord::Compose { op, left, right, index } => {
            graft(*op, regraft(left), regraft(right), *index).unwrap_or_else(|e| panic!("oracle produced {w}: {e}"))
        }
    }
}

fn generators(bound: usize) -> Vec<FreeWord> {
    let mut out = Vec::new();
    for total in 3..=bound {
        for m in 1..total {
            let n = total - m;
            out.push(FreeWord::gen(GeneratorSymbol::k(m, n).unwrap()));
            if m >= 2 && n >= 2 {
                out.push(FreeWord::gen(GeneratorSymbol::st_col(m, n).unwrap()));
                out.push(FreeWord::gen(GeneratorSymbol::st_row(m, n).unwrap()));
            }
        }
    }
    out
}

/// Every well-typed word with `m + n <= bound`, one generator name per kind.
pub fn all_words(bound: usize) -> Vec<FreeWord> {
    let mut by_size: Vec<Vec<FreeWord>> = vec![vec![], generators(bound)];
    loop {
        let s = by_size.len();
        let mut next = BTreeSet::new();
        for s1 in 1..s {
            for a in &by_size[s1] {
                for b in &by_size[s - s1] {
                    for op in Op::ALL {
                        let slots = match op {
                            Op::CircledCirc => 1,
                            Op::Circ | Op::Circled => word_arity(a).1,
                            Op::JCirc | Op::JCircled => word_arity(b).0,
                        };
                        for i in 1..=slots {
                            if let Ok(w) = graft(op, a.clone(), b.clone(), i) {
                                let (m, n) = word_arity(&w);
                                if m + n <= bound {
                                    next.insert(w);
                                }
                            }
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        by_size.push(next.into_iter().collect());
    }
    by_size.concat()
}

/// Classes of `words` under the laws, found by breadth-first closure.
pub fn orbits(words: &[FreeWord]) -> Vec<BTreeSet<FreeWord>> {
    let universe: BTreeSet<&FreeWord> = words.iter().collect();
    let mut seen: BTreeSet<FreeWord> = BTreeSet::new();
    let mut classes = Vec::new();
    for w in words {
        if seen.contains(w) {
            continue;
        }
        let mut class = BTreeSet::from([w.clone()]);
        let mut queue = VecDeque::from([w.clone()]);
        while let Some(x) = queue.pop_front() {
            for y in neighbours(&x) {
                let y = regraft(&y);
                assert!(universe.contains(&y), "{y} escaped the enumeration");
                if class.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.extend(class.iter().cloned());
        classes.push(class);
    }
    classes
}

/// A random value for each generator symbol, fixed per symbol.
pub fn random_assignment<R: Rng>(words: &[&FreeWord], d: usize, rng: &mut R) -> BTreeMap<GeneratorSymbol, EndComponent> {
    let mut out = BTreeMap::new();
    for w in words {
        for g in w.generators() {
            out.entry(g.clone()).or_insert_with(|| match g.kind {
                Kind::Plain => EndComponent::Plain(TensorMap::random(g.m, g.n, d, rng)),
                Kind::Row => EndComponent::Row(Row::new((0..g.m).map(|_| TensorMap::random(1, g.n, d, rng)).collect()).unwrap()),
                Kind::Column => {
                    EndComponent::Column(Column::new((0..g.n).map(|_| TensorMap::random(g.m, 1, d, rng)).collect()).unwrap())
                }
            });
        }
    }
    out
}
