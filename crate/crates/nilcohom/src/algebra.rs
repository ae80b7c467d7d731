//! Lie algebras over the rationals, given by structure constants
//! `[X_i, X_j] = Σ_k c_k^{ij} X_k`.
//!
//! Only pairs `i < j` are stored; antisymmetry is structural. Validation
//! reports the Jacobi identity, nilpotency via the lower central series, and
//! the lattice criterion (rational structure constants), without throwing.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::QMatrix;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    names: Option<Vec<String>>,
    /// `(i, j)` with `i < j` mapped to the non-zero coefficients
    /// `(k, c_k^{ij})`, sorted by `k`.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl StructureConstants {
    pub fn abelian(dim: usize) -> StructureConstants {
        assert!(dim >= 1, "dimension must be at least 1");
        StructureConstants {
            dim,
            names: None,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.dim);
        self.names = Some(names);
    }

    /// Human label for generator `i` (1-based): the declared name or `aN`.
    pub fn generator_label(&self, i: usize) -> String {
        match &self.names {
            Some(ns) if i >= 1 && i <= ns.len() => ns[i - 1].clone(),
            _ => format!("a{i}"),
        }
    }

    /// Installs `[X_i, X_j] = Σ c_k X_k` for `i < j`. Zero coefficients are
    /// dropped; an empty list removes the bracket.
    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: Vec<(usize, Rational)>) {
        assert!(i < j && j <= self.dim && i >= 1);
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (k, c) in coeffs {
            assert!(k >= 1 && k <= self.dim);
            *merged.entry(k).or_insert_with(Rational::zero) += c;
        }
        let cleaned: Vec<(usize, Rational)> =
            merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if cleaned.is_empty() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), cleaned);
        }
    }

    pub fn stored_brackets(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, Rational)>)> {
        self.brackets.iter()
    }

    /// `[X_i, X_j]` as a coefficient vector, for any `i, j` (antisymmetry
    /// applied when `i > j`).
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        if i == j {
            return out;
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        if let Some(coeffs) = self.brackets.get(&key) {
            for (k, c) in coeffs {
                out[k - 1] = if flip { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    /// Bilinear extension of the bracket to coordinate vectors.
    pub fn bracket_vectors(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, cu) in u.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (j, cv) in v.iter().enumerate() {
                if cv.is_zero() || i == j {
                    continue;
                }
                let w = self.bracket(i + 1, j + 1);
                let factor = cu * cv;
                for (k, c) in w.into_iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += c * &factor;
                    }
                }
            }
        }
        out
    }

    /// Block direct sum: `b`'s generators and bracket targets are shifted by
    /// `a.dim()`, with no cross brackets.
    pub fn direct_sum(a: &StructureConstants, b: &StructureConstants) -> StructureConstants {
        let dim = a.dim + b.dim;
        let mut out = StructureConstants {
            dim,
            names: None,
            brackets: BTreeMap::new(),
        };
        for (&(i, j), coeffs) in &a.brackets {
            out.brackets.insert((i, j), coeffs.clone());
        }
        for (&(i, j), coeffs) in &b.brackets {
            let shifted: Vec<(usize, Rational)> =
                coeffs.iter().map(|(k, c)| (k + a.dim, c.clone())).collect();
            out.brackets.insert((i + a.dim, j + a.dim), shifted);
        }
        if let (Some(na), Some(nb)) = (&a.names, &b.names) {
            let mut merged: Vec<String> = na.iter().chain(nb.iter()).cloned().collect();
            let has_collision = {
                let mut seen = std::collections::BTreeSet::new();
                !merged.iter().all(|n| seen.insert(n.clone()))
            };
            if has_collision {
                merged = na
                    .iter()
                    .map(|n| format!("{n}_1"))
                    .chain(nb.iter().map(|n| format!("{n}_2")))
                    .collect();
            }
            out.names = Some(merged);
        }
        out
    }

    /// Canonical text in the algebra file grammar; [`crate::parse::parse_algebra`]
    /// inverts it.
    pub fn serialize(&self) -> String {
        let mut out = format!("dim {};\n", self.dim);
        if let Some(names) = &self.names {
            out.push_str(&format!("generators {};\n", names.join(",")));
        }
        for (&(i, j), coeffs) in &self.brackets {
            let terms: Vec<String> = coeffs
                .iter()
                .map(|(k, c)| format!("{}*{}", format_rational(c), k))
                .collect();
            out.push_str(&format!("[{},{}]={};\n", i, j, terms.join("+")));
        }
        out
    }

    pub fn validate(&self) -> AlgebraReport {
        let mut violations = Vec::new();
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let unit = |idx: usize| {
                        let mut v = vec![Rational::zero(); self.dim];
                        v[idx - 1] = Rational::from_integer(1.into());
                        v
                    };
                    let (ei, ej, ek) = (unit(i), unit(j), unit(k));
                    let mut residual = self.bracket_vectors(&self.bracket(i, j), &ek);
                    for (slot, val) in self
                        .bracket_vectors(&self.bracket(j, k), &ei)
                        .into_iter()
                        .enumerate()
                    {
                        residual[slot] += val;
                    }
                    for (slot, val) in self
                        .bracket_vectors(&self.bracket(k, i), &ej)
                        .into_iter()
                        .enumerate()
                    {
                        residual[slot] += val;
                    }
                    if residual.iter().any(|c| !c.is_zero()) {
                        violations.push(JacobiViolation { i, j, k, residual });
                    }
                }
            }
        }
        let jacobi_ok = violations.is_empty();

        let (nilpotent, nilpotency_class) = self.lower_central_series();

        AlgebraReport {
            jacobi_ok,
            jacobi_violations: violations,
            nilpotent,
            nilpotency_class,
            lattice_criterion: true,
        }
    }

    /// Runs `𝔤 ⊇ [𝔤,𝔤] ⊇ [𝔤,[𝔤,𝔤]] ⊇ …` until stable. Returns whether the
    /// series reaches zero and, if so, the number of non-zero steps (the
    /// abelian algebra has class 1).
    fn lower_central_series(&self) -> (bool, Option<usize>) {
        let mut current: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rational::zero(); self.dim];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect();
        let mut steps = 0usize;
        loop {
            steps += 1;
            let mut generated: Vec<Vec<Rational>> = Vec::new();
            for i in 0..self.dim {
                let mut ei = vec![Rational::zero(); self.dim];
                ei[i] = Rational::from_integer(1.into());
                for v in &current {
                    let w = self.bracket_vectors(&ei, v);
                    if w.iter().any(|c| !c.is_zero()) {
                        generated.push(w);
                    }
                }
            }
            if generated.is_empty() {
                return (true, Some(steps));
            }
            let matrix = QMatrix::from_columns(self.dim, &generated);
            let keep = matrix.independent_columns();
            let next: Vec<Vec<Rational>> = keep.into_iter().map(|c| matrix.column(c)).collect();
            if next.len() == current.len() {
                // series stabilized at a non-zero subalgebra
                return (false, None);
            }
            current = next;
            if steps > self.dim + 1 {
                return (false, None);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    pub jacobi_ok: bool,
    pub jacobi_violations: Vec<JacobiViolation>,
    pub nilpotent: bool,
    /// Present iff nilpotent; the abelian algebra has class 1.
    pub nilpotency_class: Option<usize>,
    /// Rational structure constants guarantee a lattice; true for every
    /// algebra this crate can represent.
    pub lattice_criterion: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub fn kodaira_thurston() -> StructureConstants {
        let mut sc = StructureConstants::abelian(4);
        sc.set_names(vec!["x".into(), "e1".into(), "e2".into(), "e3".into()]);
        sc.set_bracket(2, 3, vec![(4, rat(-1))]);
        sc
    }

    pub fn six_dim_two_form_algebra() -> StructureConstants {
        let mut sc = StructureConstants::abelian(6);
        sc.set_bracket(1, 2, vec![(4, rat(-1))]);
        sc.set_bracket(1, 4, vec![(5, rat(-1))]);
        sc.set_bracket(1, 5, vec![(6, rat(-1))]);
        sc.set_bracket(2, 3, vec![(6, rat(-1))]);
        sc.set_bracket(2, 4, vec![(6, rat(-1))]);
        sc
    }

    #[test]
    fn six_dim_algebra_is_jacobi_and_nilpotent() {
        let report = six_dim_two_form_algebra().validate();
        assert!(
            report.jacobi_ok,
            "violations: {:?}",
            report.jacobi_violations
        );
        assert!(report.nilpotent);
        assert!(report.lattice_criterion);
    }

    #[test]
    fn abelian_has_class_one() {
        let report = StructureConstants::abelian(4).validate();
        assert!(report.jacobi_ok);
        assert!(report.nilpotent);
        assert_eq!(report.nilpotency_class, Some(1));
    }

    #[test]
    fn non_nilpotent_but_jacobi_valid() {
        // [X1, X2] = X1: Jacobi holds, lower central series stabilizes at
        // span(X1) != 0
        let mut sc = StructureConstants::abelian(3);
        sc.set_bracket(1, 2, vec![(1, rat(1))]);
        let report = sc.validate();
        assert!(report.jacobi_ok);
        assert!(!report.nilpotent);
        assert_eq!(report.nilpotency_class, None);
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [X1,X2]=X2 and [X2,X3]=X1 leave the cyclic sum on (1,2,3) equal
        // to [[X1,X2],X3] = X1 != 0
        let mut sc = StructureConstants::abelian(3);
        sc.set_bracket(1, 2, vec![(2, rat(1))]);
        sc.set_bracket(2, 3, vec![(1, rat(1))]);
        let report = sc.validate();
        assert!(!report.jacobi_ok);
        assert_eq!(report.jacobi_violations.len(), 1);
        let v = &report.jacobi_violations[0];
        assert_eq!((v.i, v.j, v.k), (1, 2, 3));
        assert_eq!(v.residual, vec![rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn antisymmetry_is_structural() {
        let sc = kodaira_thurston();
        let forward = sc.bracket(2, 3);
        let backward = sc.bracket(3, 2);
        for (f, b) in forward.iter().zip(backward.iter()) {
            assert_eq!(f.clone(), -b.clone());
        }
        assert!(sc.bracket(2, 2).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn direct_sum_shifts_and_renames() {
        let kt = kodaira_thurston();
        let sum = StructureConstants::direct_sum(&kt, &kt);
        assert_eq!(sum.dim(), 8);
        let w = sum.bracket(6, 7); // shifted copy of [2,3]
        assert_eq!(w[7], rat(-1));
        assert!(sum.bracket(2, 6).iter().all(|c| c.is_zero()));
        assert_eq!(
            sum.names().unwrap(),
            &["x_1", "e1_1", "e2_1", "e3_1", "x_2", "e1_2", "e2_2", "e3_2"]
        );
        let report = sum.validate();
        assert!(report.jacobi_ok && report.nilpotent);
    }

    #[test]
    fn direct_sum_with_a_line_stays_nilpotent() {
        let sum = StructureConstants::direct_sum(
            &six_dim_two_form_algebra(),
            &StructureConstants::abelian(1),
        );
        assert_eq!(sum.dim(), 7);
        let report = sum.validate();
        assert!(report.jacobi_ok && report.nilpotent);
    }

    #[test]
    fn direct_sum_of_abelians_is_abelian() {
        let sum = StructureConstants::direct_sum(
            &StructureConstants::abelian(2),
            &StructureConstants::abelian(2),
        );
        assert_eq!(sum.dim(), 4);
        assert_eq!(sum.stored_brackets().count(), 0);
    }

    #[test]
    fn kodaira_thurston_class_two() {
        let report = kodaira_thurston().validate();
        assert!(report.nilpotent);
        assert_eq!(report.nilpotency_class, Some(2));
    }
}
