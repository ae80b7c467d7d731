//! Triple Massey products with exact indeterminacy.
//!
//! For classes `a, b, c` with `a⌣b = 0 = b⌣c` the product is the class of
//! `x∧c + (−1)^{|a|+1} a∧y` where `dx = a∧b` and `dy = b∧c`. Particular
//! solutions come from the cached elimination with all free variables zero,
//! so runs are reproducible; the triviality verdict — membership of the
//! representative class in the indeterminacy subspace
//! `a⌣H^{|b|+|c|−1} + H^{|a|+|b|−1}⌣c` — does not depend on those choices,
//! and the test suite re-derives it under perturbed solutions.

use crate::ce::{CeError, CohClass, CohomologyBasis, Differential};
use crate::exterior::Form;
use crate::linalg::{in_span, QMatrix};
use crate::rational::Rational;

/// Which cup product obstructed the definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CupSlot {
    /// `a ⌣ b`
    LeftPair,
    /// `b ⌣ c`
    RightPair,
}

#[derive(Debug, Clone)]
pub struct MasseyProduct {
    /// Witness with `dx = a∧b`.
    pub x: Form,
    /// Witness with `dy = b∧c`.
    pub y: Form,
    pub representative: Form,
    pub class: CohClass,
    /// Basis of `a⌣H^{|b|+|c|−1} + H^{|a|+|b|−1}⌣c`.
    pub indeterminacy: Vec<CohClass>,
    /// True iff the representative class lies in the indeterminacy subspace,
    /// i.e. the product contains zero.
    pub trivial: bool,
}

#[derive(Debug, Clone)]
pub enum MasseyOutcome {
    Undefined {
        failing: CupSlot,
        obstruction: CohClass,
    },
    Defined(Box<MasseyProduct>),
}

#[derive(Debug, Clone)]
pub struct MasseyResult {
    pub degrees: (usize, usize, usize),
    pub outcome: MasseyOutcome,
}

impl MasseyResult {
    pub fn is_defined(&self) -> bool {
        matches!(self.outcome, MasseyOutcome::Defined(_))
    }

    pub fn product(&self) -> Option<&MasseyProduct> {
        match &self.outcome {
            MasseyOutcome::Defined(p) => Some(p),
            MasseyOutcome::Undefined { .. } => None,
        }
    }
}

/// Particular solution of `d x = rhs` in degree `degree`, all free variables
/// zero. `rhs` must be exact (checked by the caller through the cup product).
fn solve_primitive(d: &Differential, degree: usize, rhs: &Form) -> Form {
    let n = d.dim();
    if rhs.is_zero() || degree > n {
        return Form::zero(n);
    }
    let target = degree + 1;
    let coords = rhs.coordinates(target, d.basis(target));
    let solution = d
        .matrix(degree)
        .to_dense()
        .solve(&coords)
        .expect("an exact form has a primitive");
    Form::from_coordinates(n, d.basis(degree), &solution)
}

struct Witnesses {
    x: Form,
    y: Form,
    representative: Form,
    class: CohClass,
}

/// Witnesses and representative class of a product whose cup obstructions
/// already vanish.
fn massey_witnesses(
    d: &Differential,
    coh: &CohomologyBasis,
    a: &CohClass,
    b: &CohClass,
    c: &CohClass,
) -> Result<Witnesses, CeError> {
    let (p, q, r) = (a.degree, b.degree, c.degree);
    let fa = coh.class_to_form(a)?;
    let fb = coh.class_to_form(b)?;
    let fc = coh.class_to_form(c)?;

    let x = solve_primitive(d, p + q - 1, &fa.wedge(&fb).expect("same dim"));
    let y = solve_primitive(d, q + r - 1, &fb.wedge(&fc).expect("same dim"));

    // x∧c + (−1)^{|a|+1}·a∧y, closed because d(x∧c) = (ab)c and
    // d(a∧y) = (−1)^{|a|}·a(bc)
    let mut second = fa.wedge(&y).expect("same dim");
    if (p + 1) % 2 == 1 {
        second = second.neg();
    }
    let representative = x
        .wedge(&fc)
        .expect("same dim")
        .add(&second)
        .expect("same dim");
    assert!(
        d.is_closed(&representative),
        "massey representative must be closed; convention bug"
    );
    let class = coh.reduce_at(d, p + q + r - 1, &representative)?;
    Ok(Witnesses {
        x,
        y,
        representative,
        class,
    })
}

fn cup_obstruction(
    d: &Differential,
    coh: &CohomologyBasis,
    a: &CohClass,
    b: &CohClass,
    c: &CohClass,
) -> Result<Option<(CupSlot, CohClass)>, CeError> {
    let cup_ab = coh.cup(d, a, b)?;
    if !cup_ab.is_zero() {
        return Ok(Some((CupSlot::LeftPair, cup_ab)));
    }
    let cup_bc = coh.cup(d, b, c)?;
    if !cup_bc.is_zero() {
        return Ok(Some((CupSlot::RightPair, cup_bc)));
    }
    Ok(None)
}

/// Computes the triple Massey product `⟨a, b, c⟩` with witnesses,
/// representative class, indeterminacy basis and triviality verdict.
pub fn triple_massey(
    d: &Differential,
    coh: &CohomologyBasis,
    a: &CohClass,
    b: &CohClass,
    c: &CohClass,
) -> Result<MasseyResult, CeError> {
    let (p, q, r) = (a.degree, b.degree, c.degree);
    let degrees = (p, q, r);

    if let Some((failing, obstruction)) = cup_obstruction(d, coh, a, b, c)? {
        return Ok(MasseyResult {
            degrees,
            outcome: MasseyOutcome::Undefined {
                failing,
                obstruction,
            },
        });
    }

    let Witnesses {
        x,
        y,
        representative,
        class,
    } = massey_witnesses(d, coh, a, b, c)?;
    let total = p + q + r - 1;
    let ambient = coh.betti(total);

    let mut spanning: Vec<(CohClass, Vec<Rational>)> = Vec::new();
    for u in coh.basis_classes(q + r - 1) {
        let prod = coh.cup(d, a, &u)?;
        if !prod.is_zero() {
            spanning.push((prod.clone(), prod.coords));
        }
    }
    for v in coh.basis_classes(p + q - 1) {
        let prod = coh.cup(d, &v, c)?;
        if !prod.is_zero() {
            spanning.push((prod.clone(), prod.coords));
        }
    }
    let vectors: Vec<Vec<Rational>> = spanning.iter().map(|(_, v)| v.clone()).collect();
    let indeterminacy: Vec<CohClass> = if vectors.is_empty() {
        Vec::new()
    } else {
        QMatrix::from_columns(ambient, &vectors)
            .independent_columns()
            .into_iter()
            .map(|i| spanning[i].0.clone())
            .collect()
    };
    let trivial = class.is_zero() || in_span(ambient, &vectors, &class.coords);

    Ok(MasseyResult {
        degrees,
        outcome: MasseyOutcome::Defined(Box::new(MasseyProduct {
            x,
            y,
            representative,
            class,
            indeterminacy,
            trivial,
        })),
    })
}

/// A non-trivial product found by the scanner.
#[derive(Debug, Clone)]
pub struct ScanHit {
    pub labels: (String, String, String),
    pub result: MasseyResult,
}

/// Enumerates ordered triples of cached basis classes (plus any adjoined
/// extra classes) with total degree at most `max_total_degree`, in
/// degree-lexicographic order, and reports every defined non-trivial triple
/// product.
pub fn scan_triple_massey(
    d: &Differential,
    coh: &CohomologyBasis,
    max_total_degree: usize,
    extras: &[(String, CohClass)],
    generator_names: Option<&[String]>,
) -> Result<Vec<ScanHit>, CeError> {
    let mut pool: Vec<(String, CohClass)> = Vec::new();
    for degree in 1..=coh.dim().min(max_total_degree) {
        for (index, class) in coh.basis_classes(degree).into_iter().enumerate() {
            let rep = &coh.representatives(degree)[index];
            pool.push((format!("[{}]", rep.render(generator_names)), class));
        }
    }
    for (label, class) in extras {
        pool.push((label.clone(), class.clone()));
    }
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by_key(|&i| (pool[i].1.degree, i));

    // cup products of all admissible ordered pairs, computed once
    let mut pair_zero = vec![vec![None; pool.len()]; pool.len()];
    for &i in &order {
        for &j in &order {
            let (pi, pj) = (pool[i].1.degree, pool[j].1.degree);
            if pi + pj < max_total_degree {
                let product = coh.cup(d, &pool[i].1, &pool[j].1)?;
                pair_zero[i][j] = Some(product.is_zero());
            }
        }
    }

    let mut hits = Vec::new();
    for &ia in &order {
        for &ib in &order {
            if pair_zero[ia][ib] != Some(true) {
                continue;
            }
            for &ic in &order {
                let total = pool[ia].1.degree + pool[ib].1.degree + pool[ic].1.degree;
                if total > max_total_degree || pair_zero[ib][ic] != Some(true) {
                    continue;
                }
                // a representative class of zero is trivial outright; only
                // the rarer non-zero classes need the indeterminacy basis
                let witnesses = massey_witnesses(d, coh, &pool[ia].1, &pool[ib].1, &pool[ic].1)?;
                if witnesses.class.is_zero() {
                    continue;
                }
                let result = triple_massey(d, coh, &pool[ia].1, &pool[ib].1, &pool[ic].1)?;
                if let MasseyOutcome::Defined(product) = &result.outcome {
                    if !product.trivial {
                        hits.push(ScanHit {
                            labels: (pool[ia].0.clone(), pool[ib].0.clone(), pool[ic].0.clone()),
                            result,
                        });
                    }
                }
            }
        }
    }
    Ok(hits)
}
