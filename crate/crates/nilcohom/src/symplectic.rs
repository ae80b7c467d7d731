//! Symplectic structures on the invariant complex: validation, the Poisson
//! bivector, the symplectic star operator, the Koszul codifferential,
//! symplectically harmonic cohomology, Lefschetz ranks, the odd-degree skew
//! pairing, and the flexibility pencil scan.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * `Ω_ij` is the coefficient of `α_i∧α_j` in `ω` for `i < j`, extended
//!   antisymmetrically; `Π = Ω⁻¹`.
//! * `i(Π) = Σ_{i<j} Π^{ij} ι_{X_i∧X_j}` where a decomposable bivector
//!   contracts its first factor first: `ι_{X∧Y} = ι_Y ∘ ι_X`. With this
//!   order `i(Π)(α_i∧α_j) = Π^{ij}` on 2-forms, and the codifferential
//!   `δ = i(Π)∘d − d∘i(Π)` satisfies `δ = (−1)^{k+1}(*∘d∘*)` on k-forms,
//!   which the test suite checks monomial by monomial.
//! * `Λᵏ(Π)(β, α) = det[Π(β_r, α_s)]` on monomials, extended bilinearly, and
//!   `*α` is the unique solution of `β∧(*α) = Λᵏ(Π)(β, α)·v` for all basis
//!   monomials `β`, with `v = ωᵐ/m!`. Wedging into the top degree pairs each
//!   `β` with its complementary monomial only, so each equation of the
//!   defining system determines exactly one coefficient of `*α`.
//!
//! Harmonic dimensions are computed at the invariant-form level. In the top
//! three degrees (`2m`, `2m−1`, `2m−2`) they coincide with image ranks of
//! Lefschetz maps, and the two computations are cross-checked on every run;
//! a mismatch aborts, since it can only mean an internal convention bug.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ce::{CeError, CohomologyBasis, Differential};
use crate::exterior::{degree_basis, Form, Monomial};
use crate::linalg::QMatrix;
use crate::rational::{factorial, Rational};

#[derive(Debug, Error)]
pub enum SymplecticError {
    #[error("the algebra dimension {dim} is odd; a symplectic form needs an even dimension")]
    OddDimension { dim: usize },
    #[error("expected a homogeneous 2-form, found degree {found:?}")]
    WrongDegree { found: Option<usize> },
    #[error("the form is not closed: d(form) = {residual}")]
    NotClosed { residual: String },
    #[error("the form is degenerate: its top wedge power vanishes")]
    Degenerate,
    #[error("form lives over {form_dim} generators but the algebra has {algebra_dim}")]
    DimensionMismatch { form_dim: usize, algebra_dim: usize },
    #[error(
        "internal convention mismatch in degree {degree}: harmonic dimension {harmonic} \
         but Lefschetz image rank {lefschetz}; this is an implementation bug, not a result"
    )]
    OracleMismatch {
        degree: usize,
        harmonic: usize,
        lefschetz: usize,
    },
    #[error(transparent)]
    Ce(#[from] CeError),
}

/// A validated symplectic form with its derived data.
#[derive(Debug, Clone)]
pub struct SymplecticData {
    omega: Form,
    omega_matrix: QMatrix,
    pi: QMatrix,
    half_dim: usize,
    vol: Form,
    /// Top coefficient of `vol` (the Pfaffian of `Ω`).
    vol_top: Rational,
}

impl SymplecticData {
    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn omega_matrix(&self) -> &QMatrix {
        &self.omega_matrix
    }

    pub fn poisson_bivector(&self) -> &QMatrix {
        &self.pi
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn volume_form(&self) -> &Form {
        &self.vol
    }

    pub fn volume_top_coefficient(&self) -> &Rational {
        &self.vol_top
    }
}

/// Validates closedness and non-degeneracy of `w` and assembles `Ω`, `Π` and
/// the volume form. The two failure modes are reported distinctly.
pub fn check_symplectic(d: &Differential, w: &Form) -> Result<SymplecticData, SymplecticError> {
    let n = d.dim();
    if w.dim() != n {
        return Err(SymplecticError::DimensionMismatch {
            form_dim: w.dim(),
            algebra_dim: n,
        });
    }
    if !n.is_multiple_of(2) {
        return Err(SymplecticError::OddDimension { dim: n });
    }
    if !w.is_homogeneous_of(2) {
        return Err(SymplecticError::WrongDegree { found: w.degree() });
    }
    let residual = d.apply(w);
    if !residual.is_zero() {
        return Err(SymplecticError::NotClosed {
            residual: residual.render(None),
        });
    }
    let m = n / 2;
    let power = w.wedge_power(m);
    if power.is_zero() {
        return Err(SymplecticError::Degenerate);
    }
    let mut omega_matrix = QMatrix::zeros(n, n);
    for (monomial, c) in w.terms() {
        let idx = monomial.indices();
        omega_matrix.set(idx[0] - 1, idx[1] - 1, c.clone());
        omega_matrix.set(idx[1] - 1, idx[0] - 1, -c.clone());
    }
    // for invariant 2-forms, ω^m ≠ 0 is exactly non-degeneracy of Ω
    let pi = omega_matrix.inverse().ok_or(SymplecticError::Degenerate)?;
    let vol = power.scale(&(Rational::one() / factorial(m)));
    let vol_top = vol.top_coefficient();
    Ok(SymplecticData {
        omega: w.clone(),
        omega_matrix,
        pi,
        half_dim: m,
        vol,
        vol_top,
    })
}

/// `i(Π)`: double contraction with the Poisson bivector (degree −2).
fn bivector_contraction(s: &SymplecticData, form: &Form) -> Form {
    let n = form.dim();
    let mut out = Form::zero(n);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let coeff = s.pi.get(i - 1, j - 1);
            if coeff.is_zero() {
                continue;
            }
            // contract the first bivector factor first: ι_{X_i∧X_j} = ι_j ∘ ι_i
            let contracted = form
                .interior(i)
                .expect("index in range")
                .interior(j)
                .expect("index in range");
            if !contracted.is_zero() {
                out = out.add(&contracted.scale(coeff)).expect("same dim");
            }
        }
    }
    out
}

/// The Koszul codifferential `δ = [i(Π), d] = i(Π)∘d − d∘i(Π)` (degree −1).
pub fn koszul_delta(s: &SymplecticData, d: &Differential, form: &Form) -> Form {
    let first = bivector_contraction(s, &d.apply(form));
    let second = d.apply(&bivector_contraction(s, form));
    first.sub(&second).expect("same dim")
}

/// `Λᵏ(Π)(β, α)` on a pair of degree-k monomials: the Gram determinant
/// `det[Π(β_r, α_s)]`.
fn lambda_pairing_monomials(pi: &QMatrix, beta: Monomial, alpha: Monomial) -> Rational {
    let rows = beta.indices();
    let cols = alpha.indices();
    debug_assert_eq!(rows.len(), cols.len());
    let k = rows.len();
    let mut gram = QMatrix::zeros(k, k);
    let mut row_hit = vec![false; k];
    let mut col_hit = vec![false; k];
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            let v = pi.get(i - 1, j - 1);
            if !v.is_zero() {
                row_hit[r] = true;
                col_hit[c] = true;
                gram.set(r, c, v.clone());
            }
        }
    }
    // a zero row or column kills the determinant; Π is sparse so this is the
    // common case
    if row_hit.iter().any(|h| !h) || col_hit.iter().any(|h| !h) {
        return Rational::zero();
    }
    gram.determinant()
}

/// The symplectic star operator `*: Ωᵏ → Ω^{2m−k}`, from the defining
/// wedge-pairing system (see the module docs).
pub fn star(s: &SymplecticData, form: &Form) -> Form {
    let n = form.dim();
    let mut out = Form::zero(n);
    if form.is_zero() {
        return out;
    }
    let k = form.degree().expect("star is defined on homogeneous forms");
    for beta in degree_basis(n, k) {
        let mut lambda = Rational::zero();
        for (alpha, c) in form.terms() {
            let gram = lambda_pairing_monomials(&s.pi, beta, *alpha);
            if !gram.is_zero() {
                lambda += gram * c;
            }
        }
        if lambda.is_zero() {
            continue;
        }
        let complement = beta.complement(n);
        let (_, sign) = beta
            .wedge_sign(complement)
            .expect("disjoint by construction");
        let mut coeff = lambda * &s.vol_top;
        if sign < 0 {
            coeff = -coeff;
        }
        out = out
            .add(&Form::from_terms(n, [(complement, coeff)]))
            .expect("same dim");
    }
    out
}

/// Dense matrix of `δ` on degree `k` (mapping to degree `k−1`).
fn delta_matrix(s: &SymplecticData, d: &Differential, k: usize) -> QMatrix {
    let n = d.dim();
    let domain = d.basis(k);
    let target_len = if k == 0 { 0 } else { d.basis(k - 1).len() };
    let mut m = QMatrix::zeros(target_len, domain.len());
    for (c, monomial) in domain.iter().enumerate() {
        let image = koszul_delta(s, d, &Form::from_terms(n, [(*monomial, Rational::one())]));
        if k == 0 {
            debug_assert!(image.is_zero());
            continue;
        }
        for (row_monomial, value) in image.terms() {
            let r = d
                .basis(k - 1)
                .binary_search(row_monomial)
                .expect("basis monomial");
            m.set(r, c, value.clone());
        }
    }
    m
}

/// Per-degree dimensions of symplectically harmonic cohomology, with the
/// top-three-degree cross-check against Lefschetz image ranks.
#[derive(Debug, Clone)]
pub struct HarmonicSummary {
    /// `h_k` for `k = 0..=2m`.
    pub h: Vec<usize>,
    /// `(degree, lefschetz rank, agrees)` for the checked degrees `2m−k`,
    /// `k = 0, 1, 2` (clamped to `k ≤ m`).
    pub oracle: Vec<(usize, usize, bool)>,
}

/// Computes `h_k = dim H^k_hr` in every degree: harmonic forms are
/// `ker d ∩ ker δ`, taken modulo the boundaries they contain.
///
/// Aborts with [`SymplecticError::OracleMismatch`] if any checked degree
/// disagrees with the Lefschetz rank computation.
pub fn harmonic_cohomology(
    s: &SymplecticData,
    d: &Differential,
    coh: &CohomologyBasis,
) -> Result<HarmonicSummary, SymplecticError> {
    let n = d.dim();
    let m = s.half_dim;
    let mut h = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let d_dense = d.matrix(k).to_dense();
        let delta_dense = delta_matrix(s, d, k);
        let stacked = d_dense.stack(&delta_dense);
        let harmonic_basis = stacked.kernel_basis();
        let boundaries = coh.boundary_basis(k);
        if harmonic_basis.is_empty() {
            h.push(0);
            continue;
        }
        let space = d.basis(k).len();
        let joint: Vec<Vec<Rational>> = harmonic_basis
            .iter()
            .chain(boundaries.iter())
            .cloned()
            .collect();
        let joint_rank = QMatrix::from_columns(space, &joint).rank();
        // dim Hrm − dim(Hrm ∩ Im d) = rank[Hrm | Im] − rank Im
        h.push(joint_rank - boundaries.len());
        debug_assert!(h[k] <= coh.betti(k));
    }
    debug_assert_eq!(h[0], 1);

    let mut oracle = Vec::new();
    for k in 0..=2usize.min(m) {
        let rank = lefschetz_rank(s, d, coh, k)?;
        let degree = 2 * m - k;
        let agrees = h[degree] == rank;
        oracle.push((degree, rank, agrees));
        if !agrees {
            return Err(SymplecticError::OracleMismatch {
                degree,
                harmonic: h[degree],
                lefschetz: rank,
            });
        }
    }
    Ok(HarmonicSummary { h, oracle })
}

/// Rank of `L^{m−k} : H^k → H^{2m−k}`, cup multiplication by `[ω]^{m−k}` in
/// the cached cohomology coordinates. Requires `0 ≤ k ≤ m`.
pub fn lefschetz_rank(
    s: &SymplecticData,
    d: &Differential,
    coh: &CohomologyBasis,
    k: usize,
) -> Result<usize, SymplecticError> {
    let m = s.half_dim;
    assert!(k <= m, "lefschetz_rank requires k <= m");
    let power = s.omega.wedge_power(m - k);
    let target = 2 * m - k;
    let columns: Vec<Vec<Rational>> = coh
        .representatives(k)
        .iter()
        .map(|rep| {
            let image = rep.wedge(&power).expect("same dim");
            Ok(coh.reduce_at(d, target, &image)?.coords)
        })
        .collect::<Result<_, SymplecticError>>()?;
    if columns.is_empty() || coh.betti(target) == 0 {
        return Ok(0);
    }
    Ok(QMatrix::from_columns(coh.betti(target), &columns).rank())
}

#[derive(Debug, Clone)]
pub struct LefschetzEntry {
    /// Power `k` of `L^k : H^{m−k} → H^{m+k}`.
    pub power: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    pub rank: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub surjective: bool,
    pub bijective: bool,
}

#[derive(Debug, Clone)]
pub struct LefschetzReport {
    pub entries: Vec<LefschetzEntry>,
    /// True when every `L^k`, `k = 1..m`, is surjective. By top-degree
    /// duality this coincides with all of them being bijective.
    pub holds: bool,
}

/// Hard Lefschetz verdicts for all powers `k = 1..m`.
pub fn hard_lefschetz(
    s: &SymplecticData,
    d: &Differential,
    coh: &CohomologyBasis,
) -> Result<LefschetzReport, SymplecticError> {
    let m = s.half_dim;
    let mut entries = Vec::new();
    for power in 1..=m {
        let source = m - power;
        let target = m + power;
        let rank = lefschetz_rank(s, d, coh, source)?;
        let source_betti = coh.betti(source);
        let target_betti = coh.betti(target);
        entries.push(LefschetzEntry {
            power,
            source_degree: source,
            target_degree: target,
            rank,
            source_betti,
            target_betti,
            surjective: rank == target_betti,
            bijective: rank == target_betti && rank == source_betti,
        });
    }
    let holds = entries.iter().all(|e| e.surjective);
    Ok(LefschetzReport { entries, holds })
}

/// The skew pairing `⟨[α],[γ]⟩ = top(α ∧ ω^{m−2k−1} ∧ γ)` on `H^{2k+1}`,
/// with its non-degeneracy verdict. Requires `2k+1 ≤ m`.
pub fn evenness_skew_form(s: &SymplecticData, coh: &CohomologyBasis, k: usize) -> (QMatrix, bool) {
    let m = s.half_dim;
    let degree = 2 * k + 1;
    assert!(
        degree <= m,
        "the skew form lives on H^(2k+1) with 2k+1 <= m"
    );
    let power = s.omega.wedge_power(m - degree);
    let reps = coh.representatives(degree);
    let mut matrix = QMatrix::zeros(reps.len(), reps.len());
    for (a, ra) in reps.iter().enumerate() {
        for (b, rb) in reps.iter().enumerate() {
            let value = ra
                .wedge(&power)
                .expect("same dim")
                .wedge(rb)
                .expect("same dim")
                .top_coefficient();
            matrix.set(a, b, value);
        }
    }
    assert!(
        matrix.is_skew_symmetric(),
        "pairing on odd degrees must be skew"
    );
    let nondegenerate = matrix.rank() == reps.len();
    (matrix, nondegenerate)
}

#[derive(Debug, Clone)]
pub enum PointOutcome {
    Symplectic { h: Vec<usize> },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct PencilPoint {
    pub t: Rational,
    pub outcome: PointOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlexVerdict {
    /// Two valid pencil points have different harmonic dimension vectors.
    Flexible {
        varying_degrees: Vec<usize>,
    },
    NotObserved,
    /// Fewer than two valid pencil points.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct FlexReport {
    pub steps: usize,
    pub points: Vec<PencilPoint>,
    pub verdict: FlexVerdict,
    /// Degrees whose variation alone certifies flexibility.
    pub highlight_degrees: Vec<usize>,
}

/// Scans the exact-rational pencil `ω_t = (1−t)·wa + t·wb`, `t = i/steps`,
/// computing the h-vector at every symplectic point. Non-symplectic points
/// are skipped with a reason; fewer than two valid points yields an
/// inconclusive verdict rather than an error.
pub fn flex_scan(
    d: &Differential,
    coh: &CohomologyBasis,
    wa: &Form,
    wb: &Form,
    steps: usize,
) -> Result<FlexReport, SymplecticError> {
    assert!(steps >= 1, "flex_scan requires steps >= 1");
    for w in [wa, wb] {
        let residual = d.apply(w);
        if !residual.is_zero() {
            return Err(SymplecticError::NotClosed {
                residual: residual.render(None),
            });
        }
    }
    let n = d.dim();
    let m = n / 2;
    let mut points = Vec::with_capacity(steps + 1);
    let mut valid: Vec<Vec<usize>> = Vec::new();
    for i in 0..=steps {
        let t = Rational::new(i.into(), steps.into());
        let one_minus = Rational::one() - &t;
        let wt = wa.scale(&one_minus).add(&wb.scale(&t)).expect("same dim");
        let outcome = match check_symplectic(d, &wt) {
            Ok(s) => {
                let summary = harmonic_cohomology(&s, d, coh)?;
                valid.push(summary.h.clone());
                PointOutcome::Symplectic { h: summary.h }
            }
            Err(
                e @ (SymplecticError::Degenerate
                | SymplecticError::NotClosed { .. }
                | SymplecticError::WrongDegree { .. }),
            ) => PointOutcome::Skipped {
                reason: e.to_string(),
            },
            Err(other) => return Err(other),
        };
        points.push(PencilPoint { t, outcome });
    }

    let verdict = if valid.len() < 2 {
        FlexVerdict::Inconclusive
    } else {
        let reference = &valid[0];
        let varying: Vec<usize> = (0..reference.len())
            .filter(|&deg| valid.iter().any(|h| h[deg] != reference[deg]))
            .collect();
        if varying.is_empty() {
            FlexVerdict::NotObserved
        } else {
            FlexVerdict::Flexible {
                varying_degrees: varying,
            }
        }
    };

    let highlight = if n >= 2 {
        vec![2 * m - 1, 2 * m - 2]
    } else {
        Vec::new()
    };
    Ok(FlexReport {
        steps,
        points,
        verdict,
        highlight_degrees: highlight,
    })
}
