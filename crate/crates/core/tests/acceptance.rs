//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use torus_sl2::cli::findings;
use torus_sl2::complex::{check_d_squared, check_equivariance, torus_complex};
use torus_sl2::homology::{expected_dims, homology_dims, homology_presentation};
use torus_sl2::polyring::{check_ring_brackets, e1, e2, scalar, Scalar, Sl2, SymPoly};
use torus_sl2::sl2mod::{induced_module, Summand, VermaTail};
use torus_sl2::statespace::{Element, DOT_O, OO, THETA};

const K_RANGE: std::ops::RangeInclusive<i64> = 2..=8;
const QMAX: i64 = 40;
const BOUND: i64 = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Series coefficients written out directly from the generating functions.
fn series_oracle(k: i64, i: i64, q: i64) -> usize {
    let j = k - i;
    let from = |start: i64, growing: bool| -> usize {
        if q < start || (q - start) % 2 != 0 {
            0
        } else if growing {
            ((q - start) / 2 + 1) as usize
        } else {
            1
        }
    };
    if j == 0 {
        from(-2, true)
    } else if j % 2 == 0 && j < k {
        from(2 * j - 2, false)
    } else if j == k && k % 2 == 0 {
        from(2 * k - 2, true)
    } else {
        0
    }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        let got = homology_dims(&c, QMAX);
        let want = expected_dims(k, QMAX).map_err(|e| e.to_string())?;
        if let Some((i, q, a, b)) = got.first_difference(&want) {
            return Err(format!("k={k} H^{i} q={q}: {a} vs closed form {b}"));
        }
        for i in 0..=k {
            for q in -4..=QMAX {
                let (a, b) = (got.get(i as usize, q), series_oracle(k, i, q));
                ensure(a == b, || format!("k={k} H^{i} q={q}: {a} vs series {b}"))?;
            }
        }
        let top: Vec<usize> = [-2, 0, 2, 4].iter().map(|&q| got.get(k as usize, q)).collect();
        ensure(top == [1, 2, 3, 4], || format!("k={k} H^k leading terms {top:?}"))?;
        if k % 2 == 0 {
            let bottom: Vec<usize> = [0, 2, 4].iter().map(|&s| got.get(0, 2 * k - 2 + s)).collect();
            ensure(bottom == [1, 2, 3], || format!("k={k} H^0 leading terms {bottom:?}"))?;
            ensure(got.get(0, 2 * k - 4) == 0, || format!("k={k} H^0 below q^(2k-2)"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("k=2..8, q<=40 exact, {:.2}s", elapsed.as_secs_f64()))
}

fn ac2() -> Outcome {
    let mut count = 0;
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        let dims = homology_dims(&c, QMAX);
        let mut zero_degrees: Vec<i64> = (3..=k).step_by(2).map(|j| k - j).collect();
        zero_degrees.push(k - 1);
        if k % 2 == 1 {
            zero_degrees.push(0);
        }
        for i in zero_degrees {
            ensure(dims.is_zero_in(i as usize), || format!("k={k}: H^{i} nonzero"))?;
            let p = homology_presentation(&c, i as usize).map_err(|e| e.to_string())?;
            ensure(p.is_zero(), || format!("k={k}: presentation of H^{i} nonzero"))?;
            count += 1;
        }
    }
    Ok(format!("{count} vanishing groups confirmed"))
}

fn ac3() -> Outcome {
    let relation = &(&e1() * &e1()) - &e2().scale(&scalar(4));
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        let top = homology_presentation(&c, k as usize).map_err(|e| e.to_string())?;
        let gens = top.generators();
        ensure(top.is_free() && gens == [(OO.to_string(), -2), (DOT_O.to_string(), 0)], || {
            format!("k={k}: top presentation {gens:?} / {:?}", top.relation_strings())
        })?;
        for j in (2..k).step_by(2) {
            let p = homology_presentation(&c, (k - j) as usize).map_err(|e| e.to_string())?;
            let gens = p.generators();
            ensure(gens.len() == 1 && gens[0].0 == THETA && gens[0].1 == 2 * j - 2, || {
                format!("k={k} j={j}: generators {gens:?}")
            })?;
            ensure(p.relations() == [Element::term(0, relation.clone())], || {
                format!("k={k} j={j}: relations {:?}", p.relation_strings())
            })?;
        }
    }
    let f = findings().map_err(|e| e.to_string())?;
    ensure(!f.plus_variant_holds, || "(E1^2 + 4*E2)·θι is a relation".into())?;
    let flagged = f.notes().iter().any(|n| n.contains("+4*E2") && n.contains("inconsistent"));
    ensure(flagged, || "report does not flag the +4*E2 variant".into())?;
    Ok(format!("free rank 2 in q = -2, 0; relation {} = 0; +4*E2 variant flagged", f.torsion_relation))
}

fn ac4() -> Outcome {
    check_ring_brackets(12)?;
    let mut modules = 0;
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        for i in 0..=k as usize {
            let m = induced_module(&c, i).map_err(|e| e.to_string())?;
            m.check_brackets(BOUND).map_err(|e| format!("k={k} H^{i}: {e}"))?;
            modules += 1;
        }
    }
    Ok(format!("ring to degree 12, {modules} modules down to weight -20"))
}

fn ac5() -> Outcome {
    let mut checked = 0;
    for k in K_RANGE {
        for normalized in [true, false] {
            let c = torus_complex(k, normalized).map_err(|e| e.to_string())?;
            for report in [check_d_squared(&c), check_equivariance(&c)] {
                if let Some(v) = report.first_violation() {
                    return Err(format!("k={k} {}: degree {}: {}", report.name, v.degree, v.detail));
                }
            }
            checked += c.top_degree();
        }
    }
    Ok(format!("g∘d = d∘g on {checked} differentials"))
}

fn proportional(a: &Element, b: &Element) -> Option<Scalar> {
    let (i, p) = b.terms().next()?;
    let (mono, lead) = p.leading_term()?;
    let c = a.coeff(i).coeff(mono.0, mono.1) / lead;
    (!c.is_zero() && b.scale_scalar(&c) == *a).then_some(c)
}

fn ac6() -> Outcome {
    let f = findings().map_err(|e| e.to_string())?;
    let m = &f.top;
    let g = m.generators();
    let (a, b) = (g.index_of(OO).unwrap(), g.index_of(DOT_O).unwrap());
    let p = |t: &[(u32, u32, i64)]| SymPoly::from_terms(t.iter().copied());
    let ab = |pa: SymPoly, pb: SymPoly| Element::from_terms([(a, pa), (b, pb)]);
    let reference = [
        (2, ab(SymPoly::one(), SymPoly::zero())),
        (0, ab(e1(), SymPoly::from_int(-2))),
        (-2, ab(p(&[(2, 0, 1), (0, 1, -4)]), SymPoly::zero())),
        (-4, ab(p(&[(3, 0, 1), (1, 1, -4)]), p(&[(2, 0, -2), (0, 1, 8)]))),
    ];
    for (w, v) in &reference {
        let hw = m.highest_weight_vectors(*w);
        ensure(hw.len() == 1, || format!("{} highest-weight vectors at {w}", hw.len()))?;
        ensure(proportional(&hw[0], v).is_some(), || format!("weight {w}: {} not a multiple", hw[0].display(g)))?;
        ensure(m.act(Sl2::E, v).is_zero(), || format!("e does not annihilate the weight {w} vector"))?;
    }
    let v2 = &reference[0].1;
    let f3 = m.act(Sl2::F, &m.act(Sl2::F, &m.act(Sl2::F, v2)));
    ensure(f3.is_zero(), || format!("f^3 v2 = {}", f3.display(g)))?;
    let fv0 = m.act(Sl2::F, &reference[1].1);
    ensure(fv0.is_zero(), || format!("f v0 = {}", fv0.display(g)))?;

    for w in [&f.w2, &f.w4] {
        ensure(!w.image.is_zero() && w.coefficients.iter().any(|c| !c.is_zero()), || {
            format!("weight {} witness has zero image", w.weight)
        })?;
        let combo = w.coefficients.iter().zip(&w.targets).fold(Element::zero(), |acc, (c, t)| &acc + &t.scale_scalar(c));
        ensure(combo == w.image, || format!("weight {} image mismatch", w.weight))?;
    }
    let c2 = f.candidate_w2_scalar.clone().ok_or("e·(E1^2 a - 2E1 b) not a multiple of v0")?;
    ensure(f.f3_v2.is_zero() && !f.candidate_w4_in_orbit_span, || "candidate at -4 behaves unexpectedly".into())?;
    Ok(format!(
        "v2, v0, v-2, v-4 match; f^3 v2 = 0, f v0 = 0; e·w(-2) = {}·v0 with w(-2) = {}; e·w(-4) = {}·f^2 v2 with w(-4) = {}; (E1^2 a - 2E1 b) gives {c2}·v0",
        f.w2.coefficients[0],
        f.w2.w.display(g),
        f.w4.coefficients[0],
        f.w4.w.display(g),
    ))
}

fn ac7() -> Outcome {
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        for i in 0..=k {
            let m = induced_module(&c, i as usize).map_err(|e| e.to_string())?;
            let d = m.classify(BOUND).map_err(|e| format!("k={k} H^{i}: {e}"))?;
            let j = k - i;
            let (summands, tail) = if j == 0 {
                (vec![Summand::DualVermaExt(2), Summand::DualVermaExt(0)], Some(-2))
            } else if j % 2 == 0 && j < k {
                (vec![Summand::Verma(-2 * j + 2)], None)
            } else if j == k && k % 2 == 0 {
                (vec![], Some(-2 * (k - 1)))
            } else {
                (vec![], None)
            };
            let tail = tail.map(|start| VermaTail { start, step: -2 });
            ensure(d.summands == summands && d.tail == tail, || format!("k={k} H^{i}: got {d}"))?;
            ensure(d.character() == m.character(BOUND), || format!("k={k} H^{i}: character differs"))?;
        }
    }
    let f = findings().map_err(|e| e.to_string())?;
    ensure(f.tower_start == Some(-2), || format!("tower start {:?}", f.tower_start))?;
    ensure(f.late_tower_mismatch == Some(-2), || "tower from M(-4) not ruled out".into())?;
    Ok("k=2..8 match; top-degree tower starts at M(-2) (r = 1), a start at r = 2 fails at weight -2".into())
}

fn ac8() -> Outcome {
    let mut points = 0;
    for k in K_RANGE {
        let c = torus_complex(k, true).map_err(|e| e.to_string())?;
        let dims = homology_dims(&c, QMAX);
        for i in 0..=k as usize {
            let p = homology_presentation(&c, i).map_err(|e| e.to_string())?;
            let qmin = c.group(i).module.min_qdeg().unwrap_or(0);
            for q in qmin..=QMAX {
                let (a, b) = (p.slice_dim(q), dims.get(i, q));
                ensure(a == b, || format!("k={k} H^{i} q={q}: presentation {a}, slices {b}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} (k, i, q) points agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "graded dimensions", ac1),
        ("AC2", "vanishing", ac2),
        ("AC3", "presentations", ac3),
        ("AC4", "sl2 brackets", ac4),
        ("AC5", "chain-level equivariance", ac5),
        ("AC6", "highest-weight data", ac6),
        ("AC7", "classification", ac7),
        ("AC8", "dual-path oracle", ac8),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
