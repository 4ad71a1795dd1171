mod common;

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tprop_core::aleph::{
    bracket, first_order_defect, first_order_deformations, first_order_differential, gerstenhaber_bracket,
    gerstenhaber_cobracket, gs_bracket, ideal_membership, jacobiator, mc_defect, tangency_check,
    twisted_differential, AlephElement, Ideal, Membership,
};
use tprop_core::bi::{bi_compose, check_phi_morphism, phi, random_element, unit_square_defect, BiElement};
use tprop_core::bialgebra::{broken_bialgebra, group_bialgebra};
use tprop_core::endv::{act_pair, check_axioms, compose_components, transported_index, Column, EndComponent, Kind, Op, Row};
use tprop_core::free::{evaluate, graft, FreeWord, GeneratorSymbol};
use tprop_core::strata::{ChainComplex, SignRule};
use tprop_core::{scalar, Error, Permutation, Scalar, TensorMap};

use common::*;

type Outcome = Result<(), String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

// ---- A1 ----

fn a1() -> Outcome {
    let mut failed = Vec::new();
    for d in 1..=3 {
        let report = check_axioms(d, 6, 100, 0xA1);
        for r in &report.results {
            if !r.passed || r.trials < 100 {
                let mut why = r.counterexample.clone().unwrap_or_else(|| "too few admissible samples".into());
                if why.len() > 120 {
                    let cut = (0..=120).rev().find(|&k| why.is_char_boundary(k)).unwrap();
                    why.truncate(cut);
                    why.push('…');
                }
                failed.push(format!("d={d} {} after {} trials: {why}", r.name, r.trials));
            }
        }
    }
    ensure(failed.is_empty(), || failed.join("; "))
}

// ---- A2 ----

fn random_component(kind: Kind, m: usize, n: usize, rng: &mut ChaCha8Rng) -> EndComponent {
    match kind {
        Kind::Plain => EndComponent::Plain(TensorMap::random(m, n, 2, rng)),
        Kind::Row => EndComponent::Row(Row::new((0..m).map(|_| TensorMap::random(1, n, 2, rng)).collect()).unwrap()),
        Kind::Column => {
            EndComponent::Column(Column::new((0..n).map(|_| TensorMap::random(m, 1, 2, rng)).collect()).unwrap())
        }
    }
}

fn act(x: &BiElement, c: &EndComponent) -> EndComponent {
    match (x, c) {
        (BiElement::Plain { tau, sigma }, EndComponent::Plain(t)) => EndComponent::Plain(act_pair(tau, sigma, t).unwrap()),
        (BiElement::Row { sigma, .. }, EndComponent::Row(r)) => EndComponent::Row(r.act(sigma).unwrap()),
        (BiElement::Column { tau, .. }, EndComponent::Column(c)) => EndComponent::Column(c.act(tau).unwrap()),
        _ => panic!("kind mismatch"),
    }
}

/// Acting then composing equals composing at the transported position and acting
/// by the composite in `Bi`.
fn transport_instance(op: Op, rng: &mut ChaCha8Rng) -> Outcome {
    let (ka, kb, (am, an), (bm, bn)) = match op {
        Op::Circ => (Kind::Plain, Kind::Plain, (rng.gen_range(1..=2), rng.gen_range(2..=3)), (1, rng.gen_range(2..=3))),
        Op::JCirc => (Kind::Plain, Kind::Plain, (rng.gen_range(2..=3), 1), (rng.gen_range(2..=3), rng.gen_range(1..=2))),
        Op::Circled => {
            let m = rng.gen_range(2..=3);
            (Kind::Row, Kind::Row, (m, rng.gen_range(2..=3)), (m, 2))
        }
        Op::JCircled => {
            let n = rng.gen_range(2..=3);
            (Kind::Column, Kind::Column, (2, n), (rng.gen_range(2..=3), n))
        }
        Op::CircledCirc => {
            let (m, n) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
            (Kind::Column, Kind::Row, (m, n), (m, n))
        }
    };
    let a = random_element(ka, am, an, rng).unwrap();
    let b = random_element(kb, bm, bn, rng).unwrap();
    let x = random_component(ka, am, an, rng);
    let y = random_component(kb, bm, bn, rng);
    let (index, host_perm) = match (&a, &b) {
        (BiElement::Plain { sigma, .. }, _) if op == Op::Circ => (rng.gen_range(1..=an), sigma.clone()),
        (_, BiElement::Plain { tau, .. }) if op == Op::JCirc => (rng.gen_range(1..=bm), tau.clone()),
        (BiElement::Row { sigma, .. }, _) if op == Op::Circled => (rng.gen_range(1..=an), sigma.clone()),
        (_, BiElement::Column { tau, .. }) if op == Op::JCircled => (rng.gen_range(1..=bm), tau.clone()),
        _ => (1, Permutation::identity(1)),
    };
    let lhs = compose_components(op, &act(&a, &x), &act(&b, &y), index).map_err(|e| e.to_string())?;
    let composite = bi_compose(op, &a, &b, index).map_err(|e| e.to_string())?;
    let inner = if op == Op::CircledCirc {
        let (BiElement::Column { tau, .. }, BiElement::Row { sigma, .. }) = (&a, &b) else { unreachable!() };
        let alpha = x.as_column().unwrap().permute_entries(&sigma.inverse());
        let beta = y.as_row().unwrap().permute_entries(&tau.inverse());
        compose_components(op, &EndComponent::Column(alpha), &EndComponent::Row(beta), 0)
    } else {
        compose_components(op, &x, &y, transported_index(&host_perm, index))
    }
    .map_err(|e| e.to_string())?;
    let rhs = act(&composite, &inner);
    ensure(lhs == rhs, || format!("{op:?} at {index} of {a} and {b}"))
}

fn a2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for op in Op::ALL {
        for _ in 0..20 {
            transport_instance(op, &mut rng)?;
        }
    }
    let square = bi_compose(
        Op::Circ,
        &BiElement::identity(Kind::Plain, 2, 1).unwrap(),
        &BiElement::identity(Kind::Plain, 1, 2).unwrap(),
        1,
    )
    .unwrap();
    let through = bi_compose(
        Op::CircledCirc,
        &BiElement::identity(Kind::Column, 2, 2).unwrap(),
        &BiElement::identity(Kind::Row, 2, 2).unwrap(),
        1,
    )
    .unwrap();
    ensure(square == through, || format!("unit square: {square} vs {through}"))?;
    let b1 = group_bialgebra();
    let report = check_phi_morphism(&b1.star, &b1.delta, 4, 0, 0xA2).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("B1 morphism: {:?}", report.failure))?;
    let b2 = broken_bialgebra();
    ensure(
        matches!(phi(&b2.star, &b2.delta, &square), Err(Error::NotBialgebra(_))),
        || "φ accepted B2".into(),
    )?;
    let defect = unit_square_defect(&b2.star, &b2.delta).unwrap();
    ensure(!defect.is_zero() && defect == compatibility(&b2.star, &b2.delta), || {
        "B2 unit-square image differs from the direct compatibility defect".into()
    })
}

// ---- A3 ----

fn a3() -> Outcome {
    for total in 3..=6 {
        for m in 1..total {
            let n = total - m;
            let c = ChainComplex::assemble(m, n, SignRule::Induced).map_err(|e| format!("({m},{n}): {e}"))?;
            let mats: Vec<Vec<Vec<Scalar>>> = c.boundaries.iter().map(|b| b.data.clone()).collect();
            for k in 2..mats.len() {
                let sq = matmul(&mats[k - 1], &mats[k]);
                ensure(sq.iter().flatten().all(|x| *x == Scalar::from_integer(0.into())), || {
                    format!("({m},{n}): ∂∂ ≠ 0 in degree {k}")
                })?;
            }
            let ranks: Vec<usize> = mats.iter().map(|x| rank(x)).collect();
            let f = c.f_vector();
            let homology: Vec<usize> = (0..f.len())
                .map(|k| f[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
                .collect();
            let mut point = vec![0; f.len()];
            point[0] = 1;
            ensure(homology == point, || format!("({m},{n}): homology {homology:?}"))?;
            ensure(c.homology_ranks() == point, || format!("({m},{n}): library homology {:?}", c.homology_ranks()))?;
            let chi: i64 = f.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            ensure(chi == 1 && c.euler_characteristic() == 1, || format!("({m},{n}): χ = {chi}"))?;
            if m == 1 || n == 1 {
                let expected = associahedron_f_vector(m.max(n));
                ensure(f == expected, || format!("({m},{n}): f-vector {f:?}, associahedron {expected:?}"))?;
            }
            if (m, n) == (2, 2) {
                ensure(f == vec![2, 1], || format!("(2,2): f-vector {f:?}"))?;
            }
            if (m, n) == (1, 4) {
                ensure(f == vec![5, 5, 1], || format!("(1,4): f-vector {f:?}"))?;
            }
        }
    }
    Ok(())
}

// ---- A4 ----

fn degree_in(p: &TensorMap) -> usize {
    p.inputs() - 1
}

fn degree_out(t: &TensorMap) -> usize {
    t.outputs() - 1
}

fn a4_brackets(rng: &mut ChaCha8Rng) -> Outcome {
    for trial in 0..100 {
        let ps: Vec<TensorMap> = (0..3).map(|_| TensorMap::random(rng.gen_range(1..=3), 1, 2, rng)).collect();
        let ts: Vec<TensorMap> = (0..3).map(|_| TensorMap::random(1, rng.gen_range(1..=3), 2, rng)).collect();
        let (x, y, z) = (&ps[0], &ps[1], &ps[2]);
        let flip = -scalar::sign(degree_in(x) * degree_in(y));
        ensure(gerstenhaber_bracket(y, x).unwrap() == gerstenhaber_bracket(x, y).unwrap().scale(&flip), || {
            format!("trial {trial}: bracket not antisymmetric")
        })?;
        let jac = gerstenhaber_bracket(&gerstenhaber_bracket(x, y).unwrap(), z)
            .unwrap()
            .sub(&gerstenhaber_bracket(x, &gerstenhaber_bracket(y, z).unwrap()).unwrap())
            .unwrap()
            .add(&gerstenhaber_bracket(y, &gerstenhaber_bracket(x, z).unwrap()).unwrap().scale(&scalar::sign(degree_in(x) * degree_in(y))))
            .unwrap();
        ensure(jac.is_zero(), || format!("trial {trial}: Jacobi fails for inputs {:?}", ps.iter().map(TensorMap::inputs).collect::<Vec<_>>()))?;
        let (x, y, z) = (&ts[0], &ts[1], &ts[2]);
        let flip = -scalar::sign(degree_out(x) * degree_out(y));
        ensure(gerstenhaber_cobracket(y, x).unwrap() == gerstenhaber_cobracket(x, y).unwrap().scale(&flip), || {
            format!("trial {trial}: cobracket not antisymmetric")
        })?;
        let jac = gerstenhaber_cobracket(&gerstenhaber_cobracket(x, y).unwrap(), z)
            .unwrap()
            .sub(&gerstenhaber_cobracket(x, &gerstenhaber_cobracket(y, z).unwrap()).unwrap())
            .unwrap()
            .add(&gerstenhaber_cobracket(y, &gerstenhaber_cobracket(x, z).unwrap()).unwrap().scale(&scalar::sign(degree_out(x) * degree_out(y))))
            .unwrap();
        ensure(jac.is_zero(), || format!("trial {trial}: co-Jacobi fails"))?;
        // mixed pairs land in the linear part, where antisymmetry is literal
        let (p, t) = (TensorMap::random(2, 1, 2, rng), TensorMap::random(1, 2, 2, rng));
        let a = AlephElement::alpha(TensorMap::random(2, 2, 2, rng)).unwrap();
        let pb = AlephElement::psi_bar(p).unwrap();
        let tb = AlephElement::theta_bar(t).unwrap();
        for (u, v, du, dv) in [(&pb, &tb, 1, 1), (&pb, &a, 1, 2), (&a, &tb, 2, 1)] {
            let uv = bracket(u, v).unwrap();
            ensure(bracket(v, u).unwrap() == uv.scale(&-scalar::sign(du * dv)), || {
                format!("trial {trial}: ℵ bracket not antisymmetric")
            })?;
        }
    }
    Ok(())
}

fn a4_mc() -> Outcome {
    let b1 = group_bialgebra();
    ensure(mc_defect(&b1.star, &b1.delta).unwrap().is_zero(), || "[β,β] ≠ 0 for B1".into())?;
    let b2 = broken_bialgebra();
    let mc = mc_defect(&b2.star, &b2.delta).unwrap();
    let direct = compatibility(&b2.star, &b2.delta);
    ensure(!mc.is_zero() && mc.bar_terms().next().is_none(), || "B2 defect outside the linear part".into())?;
    ensure(mc.alpha_component(2, 2) == Some(&direct.scale(&scalar::int(2))), || {
        "B2 Alpha component differs from twice the direct defect".into()
    })
}

fn a4_ideals(rng: &mut ChaCha8Rng) -> Outcome {
    let cases: [(Ideal, usize); 4] = [(Ideal::LowerG, 3), (Ideal::UpperG, 0), (Ideal::Mixed, 2), (Ideal::Mixed, 1)];
    for (which, psis) in cases {
        let tensors: Vec<TensorMap> = (0..3)
            .map(|k| if k < psis { TensorMap::random(2, 1, 2, rng) } else { TensorMap::random(1, 2, 2, rng) })
            .collect();
        let bars: Vec<AlephElement> = tensors
            .iter()
            .map(|t| if t.outputs() == 1 { AlephElement::psi_bar(t.clone()) } else { AlephElement::theta_bar(t.clone()) }.unwrap())
            .collect();
        let j = jacobiator(&bars[0], &bars[1], &bars[2]).unwrap();
        let verdict = ideal_membership(&j, which, &tensors).unwrap();
        ensure(verdict == Membership::Member, || format!("{which:?} with {psis} Ψ̄: {verdict:?}"))?;
    }
    Ok(())
}

fn random_combination(basis: &[(TensorMap, TensorMap)], rng: &mut ChaCha8Rng) -> (TensorMap, TensorMap) {
    let mut p = TensorMap::zeros(2, 1, 2);
    let mut t = TensorMap::zeros(1, 2, 2);
    for (bp, bt) in basis {
        let c = scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        p.axpy(&c, bp).unwrap();
        t.axpy(&c, bt).unwrap();
    }
    (p, t)
}

fn a4_first_order(rng: &mut ChaCha8Rng) -> Outcome {
    let b1 = group_bialgebra();
    let (p, t) = (&b1.star, &b1.delta);
    let basis = first_order_deformations(p, t).unwrap();
    let mut samples: Vec<(TensorMap, TensorMap)> = (0..25).map(|_| random_combination(&basis, rng)).collect();
    samples.extend((0..25).map(|_| (TensorMap::random(2, 1, 2, rng), TensorMap::random(1, 2, 2, rng))));
    let mut literal_mismatches = Vec::new();
    for (k, (p1, t1)) in samples.iter().enumerate() {
        let oracle = first_order(p, t, p1, t1);
        let tangent = oracle.iter().all(TensorMap::is_zero);
        ensure(tangent == (k < 25), || format!("sample {k}: oracle disagrees with the computed deformation space"))?;
        let lib = first_order_defect(p, t, p1, t1).unwrap();
        ensure([lib.associator, lib.coassociator, lib.compatibility] == oracle, || {
            format!("sample {k}: first-order defect differs from the ε-expansion")
        })?;
        ensure(first_order_differential(p, t, p1, t1).unwrap().is_zero() == tangent, || {
            format!("sample {k}: linearized [β,β] disagrees with the ε-expansion")
        })?;
        let x = AlephElement::psi_bar(p1.clone()).unwrap().add(&AlephElement::theta_bar(t1.clone()).unwrap()).unwrap();
        if twisted_differential(p, t, &x).unwrap().is_zero() != tangent {
            literal_mismatches.push(k);
        }
    }
    ensure(literal_mismatches.is_empty(), || {
        format!(
            "ad(β)(P̄1+T̄1) = 0 disagrees with the ε-expansion on {}/50 samples (first: {}); the linearized check agrees on all 50",
            literal_mismatches.len(),
            literal_mismatches[0]
        )
    })
}

fn a4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    a4_brackets(&mut rng)?;
    a4_mc()?;
    a4_ideals(&mut rng)?;
    a4_first_order(&mut rng)
}

// ---- A5 ----

fn a5() -> Outcome {
    let report = tangency_check(2, 5, 100, 0xA5).map_err(|e| e.to_string())?;
    ensure(report.passed() && report.closed == 100, || format!("{report:?}"))?;
    ensure(report.one_output_pairs > 0, || "no (·,1)×(·,1) pair sampled".into())?;
    let b2 = broken_bialgebra();
    let pulled = gs_bracket(&b2.delta, &b2.star).unwrap();
    ensure(pulled == Some(Some(compatibility(&b2.star, &b2.delta))), || {
        "B2 (1,2),(2,1) pullback is not the compatibility defect".into()
    })
}

// ---- A6 ----

fn eval(w: &FreeWord, values: &std::collections::BTreeMap<GeneratorSymbol, EndComponent>) -> EndComponent {
    evaluate(w, &|g: &GeneratorSymbol| Ok(values[g].clone())).unwrap()
}

fn a6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
    let words = all_words(6);
    let mut per_op = [0usize; 5];
    let mut attempts = 0;
    while per_op.iter().any(|&c| c < 20) {
        attempts += 1;
        ensure(attempts < 2_000_000, || format!("could not sample every op: {per_op:?}"))?;
        let op = Op::ALL[rng.gen_range(0..5)];
        let slot = Op::ALL.iter().position(|&o| o == op).unwrap();
        if per_op[slot] >= 20 {
            continue;
        }
        let a = &words[rng.gen_range(0..words.len())];
        let b = &words[rng.gen_range(0..words.len())];
        let index = rng.gen_range(1..=4);
        let Ok(w) = graft(op, a.clone(), b.clone(), index) else {
            continue;
        };
        let values = random_assignment(&[a, b], 2, &mut rng);
        let lhs = eval(&w, &values);
        let rhs = compose_components(op, &eval(a, &values), &eval(b, &values), index).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("evaluate is not multiplicative on {w}"))?;
        per_op[slot] += 1;
    }
    for w in &words {
        let nf = w.normal_form();
        ensure(nf.normal_form() == nf, || format!("normal form of {w} is not idempotent"))?;
        let values = random_assignment(&[w], 2, &mut rng);
        ensure(eval(w, &values) == eval(&nf, &values), || format!("{w} and its normal form evaluate differently"))?;
    }
    let small = all_words(5);
    for class in orbits(&small) {
        let forms: std::collections::BTreeSet<FreeWord> = class.iter().map(FreeWord::normal_form).collect();
        ensure(forms.len() == 1, || format!("normal form splits the class of {}", class.iter().next().unwrap()))?;
        let nf = forms.into_iter().next().unwrap();
        ensure(class.contains(&nf), || format!("{nf} lies outside its class"))?;
    }
    let classes = orbits(&small).len();
    let forms: std::collections::BTreeSet<FreeWord> = small.iter().map(FreeWord::normal_form).collect();
    ensure(forms.len() == classes, || format!("{} normal forms for {classes} classes", forms.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 6] = [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6)];
    let mut failures = Vec::new();
    // the harness has already printed "test acceptance ... " without a newline
    std::io::stderr().write_all(b"\n").unwrap();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        // written straight to stderr so the lines survive output capture
        let line = match &outcome {
            Ok(()) => format!("{name} PASS ({secs:.1}s)\n"),
            Err(why) => format!("{name} FAIL ({secs:.1}s): {why}\n"),
        };
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if outcome.is_err() {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
