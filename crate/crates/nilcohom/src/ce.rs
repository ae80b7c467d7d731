//! The cochain complex of invariant forms and its cohomology.
//!
//! The differential is determined on dual generators by the structure
//! constants, `dα_k = -Σ_{i<j} c_k^{ij} α_i∧α_j`, and extended to the whole
//! exterior algebra as a degree +1 antiderivation. `d∘d = 0` is equivalent to
//! the Jacobi identity and is verified at construction.
//!
//! Cohomology representatives are computed once per complex and every
//! downstream computation (cup products, Lefschetz ranks, Massey products,
//! reports) uses the same cached basis, so coordinates are reproducible.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::StructureConstants;
use crate::exterior::{degree_basis, Form, Monomial};
use crate::linalg::{PreparedSolver, QMatrix};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum CeError {
    #[error("d² ≠ 0 at generator {generator}: the bracket data violates the Jacobi identity")]
    JacobiViolation { generator: usize },
    #[error("form of degree {found:?} where degree {expected} is required")]
    WrongDegree {
        expected: usize,
        found: Option<usize>,
    },
    #[error("class representatives must be non-zero homogeneous forms")]
    InhomogeneousClass,
    #[error("form is not closed: d(form) = {residual}")]
    NotClosed { residual: String },
    #[error("class coordinates have length {found}, expected {expected}")]
    BadCoordinates { expected: usize, found: usize },
}

/// Sparse column-major matrix of a differential in the canonical bases.
#[derive(Debug, Clone)]
pub struct SparseColumns {
    rows: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseColumns {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn to_dense(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct Differential {
    dim: usize,
    /// `d` of each generator (1-based index - 1).
    dgen: Vec<Form>,
    /// Canonical monomial basis per degree, `k = 0..=dim`.
    bases: Vec<Vec<Monomial>>,
    /// `d_k : Λᵏ → Λᵏ⁺¹` per degree, `k = 0..=dim`.
    matrices: Vec<SparseColumns>,
}

/// Builds the differential from validated structure constants.
pub fn build_differential(sc: &StructureConstants) -> Result<Differential, CeError> {
    let dim = sc.dim();
    let mut dgen = Vec::with_capacity(dim);
    for k in 1..=dim {
        let mut dk = Form::zero(dim);
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                let c = sc.bracket(i, j)[k - 1].clone();
                if c.is_zero() {
                    continue;
                }
                let monomial = Form::from_terms(
                    dim,
                    [(Monomial::from_indices(&[i, j], dim).expect("i<j"), -c)],
                );
                dk = dk.add(&monomial).expect("same dim");
            }
        }
        dgen.push(dk);
    }

    let d = Differential {
        dim,
        dgen,
        bases: (0..=dim).map(|k| degree_basis(dim, k)).collect(),
        matrices: Vec::new(),
    };

    // d² = 0 on generators is exactly the Jacobi identity
    for k in 1..=dim {
        if !d.apply(&d.dgen[k - 1]).is_zero() {
            return Err(CeError::JacobiViolation { generator: k });
        }
    }

    let mut matrices = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let rows = if k < dim { d.bases[k + 1].len() } else { 0 };
        let mut columns = Vec::with_capacity(d.bases[k].len());
        for monomial in &d.bases[k] {
            let image = d.apply_monomial(*monomial);
            let mut col = Vec::new();
            if k < dim {
                for (m, c) in image.terms() {
                    let row = d.bases[k + 1]
                        .binary_search(m)
                        .expect("image monomial in basis");
                    col.push((row, c.clone()));
                }
            }
            columns.push(col);
        }
        matrices.push(SparseColumns { rows, columns });
    }
    let mut d = d;
    d.matrices = matrices;

    // invariant: the composite vanishes on every basis monomial
    for k in 0..=dim {
        for monomial in &d.bases[k] {
            debug_assert!(d.apply(&d.apply_monomial(*monomial)).is_zero());
        }
    }

    Ok(d)
}

impl Differential {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_image(&self, index: usize) -> &Form {
        &self.dgen[index - 1]
    }

    pub fn basis(&self, k: usize) -> &[Monomial] {
        &self.bases[k]
    }

    pub fn matrix(&self, k: usize) -> &SparseColumns {
        &self.matrices[k]
    }

    fn apply_monomial(&self, monomial: Monomial) -> Form {
        // d(α_{i₁}…α_{i_k}) = Σ_i dα_i ∧ interior(i, monomial): the degree-2
        // images commute past everything, so each factor contributes its
        // position sign through the interior product.
        let mut out = Form::zero(self.dim);
        for index in monomial.indices() {
            let dg = &self.dgen[index - 1];
            if dg.is_zero() {
                continue;
            }
            let (rest, sign) = monomial.remove(index).expect("factor present");
            let rest_form = Form::from_terms(
                self.dim,
                [(
                    rest,
                    if sign < 0 {
                        -Rational::from_integer(1.into())
                    } else {
                        Rational::from_integer(1.into())
                    },
                )],
            );
            out = out
                .add(&dg.wedge(&rest_form).expect("same dim"))
                .expect("same dim");
        }
        out
    }

    /// Applies `d` to an arbitrary form.
    pub fn apply(&self, form: &Form) -> Form {
        let mut out = Form::zero(self.dim);
        for (m, c) in form.terms() {
            out = out
                .add(&self.apply_monomial(*m).scale(c))
                .expect("same dim");
        }
        out
    }

    pub fn is_closed(&self, form: &Form) -> bool {
        self.apply(form).is_zero()
    }

    /// Computes cohomology in every degree: Betti numbers, cached
    /// representatives, and the reduction data used by `reduce`.
    pub fn cohomology(&self) -> CohomologyBasis {
        let dim = self.dim;
        let mut degrees = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let dense = self.matrices[k].to_dense();
            let kernel = dense.kernel_basis();
            let image: Vec<Vec<Rational>> = if k == 0 {
                Vec::new()
            } else {
                let prev = self.matrices[k - 1].to_dense();
                prev.independent_columns()
                    .into_iter()
                    .map(|c| prev.column(c))
                    .collect()
            };
            let space = self.bases[k].len();
            let candidates: Vec<Vec<Rational>> =
                image.iter().chain(kernel.iter()).cloned().collect();
            let chosen = if candidates.is_empty() {
                Vec::new()
            } else {
                QMatrix::from_columns(space, &candidates).independent_columns()
            };
            let rep_coords: Vec<Vec<Rational>> = chosen
                .into_iter()
                .filter(|&c| c >= image.len())
                .map(|c| kernel[c - image.len()].clone())
                .collect();
            let reps: Vec<Form> = rep_coords
                .iter()
                .map(|v| Form::from_coordinates(dim, &self.bases[k], v))
                .collect();
            debug_assert_eq!(rep_coords.len(), kernel.len() - image.len());
            let columns: Vec<Vec<Rational>> =
                rep_coords.iter().chain(image.iter()).cloned().collect();
            let solver = PreparedSolver::new(&QMatrix::from_columns(space, &columns));
            degrees.push(DegreeData {
                betti: rep_coords.len(),
                reps,
                image_basis: image,
                solver,
            });
        }
        CohomologyBasis {
            dim,
            bases: self.bases.clone(),
            degrees,
        }
    }
}

#[derive(Debug, Clone)]
struct DegreeData {
    betti: usize,
    reps: Vec<Form>,
    image_basis: Vec<Vec<Rational>>,
    /// Prepared elimination of `[representatives | boundaries]`, reused by
    /// every reduction in this degree.
    solver: PreparedSolver,
}

/// A cohomology class in the cached basis: a coordinate vector in `H^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl CohClass {
    pub fn zero(degree: usize, betti: usize) -> CohClass {
        CohClass {
            degree,
            coords: vec![Rational::zero(); betti],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, factor: &Rational) -> CohClass {
        CohClass {
            degree: self.degree,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    dim: usize,
    bases: Vec<Vec<Monomial>>,
    degrees: Vec<DegreeData>,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn betti(&self, k: usize) -> usize {
        if k <= self.dim {
            self.degrees[k].betti
        } else {
            0
        }
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.betti(k)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti_vector()
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// The cached closed representatives of `H^k`.
    pub fn representatives(&self, k: usize) -> &[Form] {
        &self.degrees[k].reps
    }

    /// Basis of `Im d_{k-1}` in degree-`k` coordinates.
    pub fn boundary_basis(&self, k: usize) -> &[Vec<Rational>] {
        &self.degrees[k].image_basis
    }

    pub fn basis_classes(&self, k: usize) -> Vec<CohClass> {
        (0..self.betti(k))
            .map(|i| {
                let mut coords = vec![Rational::zero(); self.betti(k)];
                coords[i] = Rational::from_integer(1.into());
                CohClass { degree: k, coords }
            })
            .collect()
    }

    pub fn unit_class(&self) -> CohClass {
        let mut coords = vec![Rational::zero(); self.betti(0)];
        coords[0] = Rational::from_integer(1.into());
        CohClass { degree: 0, coords }
    }

    /// The chosen representative form of a class.
    pub fn class_to_form(&self, class: &CohClass) -> Result<Form, CeError> {
        let k = class.degree;
        if k > self.dim {
            return Ok(Form::zero(self.dim));
        }
        let data = &self.degrees[k];
        if class.coords.len() != data.betti {
            return Err(CeError::BadCoordinates {
                expected: data.betti,
                found: class.coords.len(),
            });
        }
        let mut acc = Form::zero(self.dim);
        for (rep, c) in data.reps.iter().zip(class.coords.iter()) {
            acc = acc.add(&rep.scale(c)).expect("same dim");
        }
        Ok(acc)
    }

    /// Coordinates of a closed homogeneous form in the cached basis of its
    /// degree.
    pub fn reduce(&self, d: &Differential, form: &Form) -> Result<CohClass, CeError> {
        match form.degree() {
            Some(k) => self.reduce_at(d, k, form),
            None => Err(CeError::InhomogeneousClass),
        }
    }

    /// Like [`CohomologyBasis::reduce`] but with the degree supplied, so the
    /// zero form reduces cleanly.
    pub fn reduce_at(&self, d: &Differential, k: usize, form: &Form) -> Result<CohClass, CeError> {
        if k > self.dim {
            return Ok(CohClass::zero(k, 0));
        }
        if !form.is_zero() && !form.is_homogeneous_of(k) {
            return Err(CeError::WrongDegree {
                expected: k,
                found: form.degree(),
            });
        }
        let residual = d.apply(form);
        if !residual.is_zero() {
            return Err(CeError::NotClosed {
                residual: residual.render(None),
            });
        }
        let data = &self.degrees[k];
        let coords = form.coordinates(k, &self.bases[k]);
        let solution = data
            .solver
            .solve(&coords)
            .expect("closed forms decompose over representatives and boundaries");
        Ok(CohClass {
            degree: k,
            coords: solution[..data.betti].to_vec(),
        })
    }

    /// Cup product in the cached bases. Degrees beyond the top return the
    /// zero class of a 0-dimensional space.
    pub fn cup(&self, d: &Differential, a: &CohClass, b: &CohClass) -> Result<CohClass, CeError> {
        let degree = a.degree + b.degree;
        if degree > self.dim {
            return Ok(CohClass::zero(degree, 0));
        }
        let fa = self.class_to_form(a)?;
        let fb = self.class_to_form(b)?;
        let product = fa.wedge(&fb).expect("same dim");
        self.reduce_at(d, degree, &product)
    }

    /// Matrix of the top-degree pairing `H^k ⊗ H^{n-k} → ℚ`,
    /// `P[a][b] = top_coefficient(rep_a ∧ rep_b)`.
    pub fn poincare_pairing(&self, k: usize) -> QMatrix {
        let n = self.dim;
        let left = self.representatives(k);
        let right = self.representatives(n - k);
        let mut p = QMatrix::zeros(left.len(), right.len());
        for (a, ra) in left.iter().enumerate() {
            for (b, rb) in right.iter().enumerate() {
                p.set(a, b, ra.wedge(rb).expect("same dim").top_coefficient());
            }
        }
        p
    }
}
