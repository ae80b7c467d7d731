//! Exact exterior algebra on `n` degree-1 generators.
//!
//! Basis monomials are strictly ascending index sets, stored as bitmasks
//! (bit `i-1` set iff generator `i` is a factor). All sign bookkeeping lives
//! in [`Monomial::wedge_sign`], the single merge routine; everything else is
//! sign-free sparse arithmetic over [`Rational`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{format_rational, Rational};

pub const MAX_GENERATORS: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("forms live over different generator counts: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// A basis monomial `α_{i₁}∧…∧α_{i_k}` with `i₁ < … < i_k`, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    mask: u32,
}

impl Monomial {
    pub const EMPTY: Monomial = Monomial { mask: 0 };

    pub fn from_mask(mask: u32) -> Monomial {
        Monomial { mask }
    }

    /// Builds a monomial from 1-based indices, which must be strictly
    /// ascending. Returns the index that violated the order or range.
    pub fn from_indices(indices: &[usize], dim: usize) -> Result<Monomial, ExteriorError> {
        let mut mask = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > dim || dim > MAX_GENERATORS {
                return Err(ExteriorError::IndexOutOfRange { index: i, dim });
            }
            if i <= last {
                return Err(ExteriorError::IndexOutOfRange { index: i, dim });
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(Monomial { mask })
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..MAX_GENERATORS)
            .filter(|b| self.mask & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    pub fn degree(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        (1..=MAX_GENERATORS).contains(&index) && self.mask & (1 << (index - 1)) != 0
    }

    pub fn complement(self, dim: usize) -> Monomial {
        let full = if dim == 32 {
            u32::MAX
        } else {
            (1u32 << dim) - 1
        };
        Monomial {
            mask: full & !self.mask,
        }
    }

    /// Sign of sorting the concatenation `self · other` into ascending order,
    /// or `None` when the factor sets overlap (the product vanishes).
    ///
    /// The sign is `(-1)^t` where `t` counts pairs `(i ∈ self, j ∈ other)`
    /// with `j < i` — the transpositions of the merge.
    pub fn wedge_sign(self, other: Monomial) -> Option<(Monomial, i32)> {
        if self.mask & other.mask != 0 {
            return None;
        }
        let mut transpositions = 0u32;
        let mut rest = self.mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            // bits of `other` strictly below this factor of `self`
            transpositions += (other.mask & (bit - 1)).count_ones();
            rest ^= bit;
        }
        let sign = if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        };
        Some((
            Monomial {
                mask: self.mask | other.mask,
            },
            sign,
        ))
    }

    /// Position-signed deletion of generator `index`: returns the monomial
    /// with the factor removed and `(-1)^p` where `p` is the factor's 0-based
    /// position. `None` if the generator is absent.
    pub fn remove(self, index: usize) -> Option<(Monomial, i32)> {
        if !self.contains(index) {
            return None;
        }
        let bit = 1u32 << (index - 1);
        let below = (self.mask & (bit - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1 } else { -1 };
        Some((
            Monomial {
                mask: self.mask & !bit,
            },
            sign,
        ))
    }
}

/// Orders monomials by degree, then lexicographically on the ascending index
/// tuples, which is the canonical basis order used for all matrices.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            // reversed-bit descending == lexicographic ascending on tuples
            .then_with(|| other.mask.reverse_bits().cmp(&self.mask.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`k` monomials over `dim` generators in canonical (lex) order.
pub fn degree_basis(dim: usize, k: usize) -> Vec<Monomial> {
    assert!(dim <= MAX_GENERATORS);
    if k > dim {
        return Vec::new();
    }
    if k == 0 {
        return vec![Monomial::EMPTY];
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(Monomial::from_indices(&current, dim).expect("ascending by construction"));
        // next k-combination of {1..dim} in lexicographic order
        let mut pos = k;
        while pos > 0 && current[pos - 1] == dim - (k - pos) {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        current[pos - 1] += 1;
        for p in pos..k {
            current[p] = current[p - 1] + 1;
        }
    }
    out
}

/// A sparse exterior form: finitely many monomials with non-zero exact
/// rational coefficients, all over the same generator count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Form {
    pub fn zero(dim: usize) -> Form {
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar `1` viewed as a 0-form.
    pub fn one(dim: usize) -> Form {
        Form::scalar(dim, Rational::from_integer(1.into()))
    }

    pub fn scalar(dim: usize, value: Rational) -> Form {
        let mut f = Form::zero(dim);
        f.add_term(Monomial::EMPTY, value);
        f
    }

    /// The generator `α_index` as a 1-form.
    pub fn generator(dim: usize, index: usize) -> Result<Form, ExteriorError> {
        if index == 0 || index > dim {
            return Err(ExteriorError::IndexOutOfRange { index, dim });
        }
        let mut f = Form::zero(dim);
        f.add_term(
            Monomial::from_indices(&[index], dim)?,
            Rational::from_integer(1.into()),
        );
        Ok(f)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Form
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut f = Form::zero(dim);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: Monomial) -> Rational {
        self.terms
            .get(&monomial)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Degree when homogeneous (the zero form reports `None`, as does any
    /// mixed-degree form).
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    fn add_term(&mut self, monomial: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Form) -> Result<(), ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn scale(&self, factor: &Rational) -> Form {
        if factor.is_zero() {
            return Form::zero(self.dim);
        }
        Form {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    /// Exterior product. Bilinear, associative, graded-commutative; repeated
    /// generators annihilate.
    pub fn wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.check_dim(other)?;
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((merged, sign)) = ma.wedge_sign(*mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(merged, c);
                }
            }
        }
        Ok(out)
    }

    /// `k`-th wedge power.
    pub fn wedge_power(&self, k: usize) -> Form {
        let mut out = Form::one(self.dim);
        for _ in 0..k {
            out = out.wedge(self).expect("same dim");
        }
        out
    }

    /// Interior product against the `index`-th dual basis vector: the
    /// degree −1 antiderivation with `interior(i, α_i) = 1`.
    pub fn interior(&self, index: usize) -> Result<Form, ExteriorError> {
        if index == 0 || index > self.dim {
            return Err(ExteriorError::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            if let Some((reduced, sign)) = m.remove(index) {
                let mut coeff = c.clone();
                if sign < 0 {
                    coeff = -coeff;
                }
                out.add_term(reduced, coeff);
            }
        }
        Ok(out)
    }

    /// Coefficient of the top monomial `α₁∧…∧α_n` (zero if absent).
    pub fn top_coefficient(&self) -> Rational {
        self.coefficient(Monomial::EMPTY.complement(self.dim))
    }

    /// Coordinates in the canonical degree-`k` basis. The form must be
    /// homogeneous of degree `k` (or zero).
    pub fn coordinates(&self, k: usize, basis: &[Monomial]) -> Vec<Rational> {
        debug_assert!(self.is_homogeneous_of(k) || self.is_zero());
        basis.iter().map(|m| self.coefficient(*m)).collect()
    }

    pub fn from_coordinates(dim: usize, basis: &[Monomial], coords: &[Rational]) -> Form {
        Form::from_terms(
            dim,
            basis
                .iter()
                .zip(coords.iter())
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Renders the form in the expression grammar, e.g. `a1^a6 + 3/2*a2^a5`.
    /// With `names` the declared generator names are used instead of `aN`.
    pub fn render(&self, names: Option<&[String]>) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let generator_label = |i: usize| -> String {
            match names {
                Some(ns) if i - 1 < ns.len() => ns[i - 1].clone(),
                _ => format!("a{i}"),
            }
        };
        let mut out = String::new();
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if pos == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let indices = m.indices();
            let is_unit_coeff = magnitude == Rational::from_integer(1.into());
            if indices.is_empty() {
                out.push_str(&format_rational(&magnitude));
            } else {
                if !is_unit_coeff {
                    out.push_str(&format_rational(&magnitude));
                    out.push('*');
                }
                let factors: Vec<String> = indices.into_iter().map(generator_label).collect();
                out.push_str(&factors.join("^"));
            }
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn gen(dim: usize, i: usize) -> Form {
        Form::generator(dim, i).unwrap()
    }

    fn monomial(dim: usize, idx: &[usize]) -> Form {
        Form::from_terms(dim, [(Monomial::from_indices(idx, dim).unwrap(), rat(1))])
    }

    #[test]
    fn wedge_disjoint_ascending() {
        let a1 = gen(4, 1);
        let a2 = gen(4, 2);
        assert_eq!(a1.wedge(&a2).unwrap(), monomial(4, &[1, 2]));
    }

    #[test]
    fn wedge_one_transposition() {
        let a1 = gen(4, 1);
        let a2 = gen(4, 2);
        assert_eq!(a2.wedge(&a1).unwrap(), monomial(4, &[1, 2]).neg());
    }

    #[test]
    fn wedge_repeated_generator_vanishes() {
        let a1 = gen(4, 1);
        assert!(a1.wedge(&a1).unwrap().is_zero());
    }

    #[test]
    fn wedge_dimension_mismatch() {
        let err = gen(4, 1).wedge(&gen(5, 1)).unwrap_err();
        assert_eq!(err, ExteriorError::DimensionMismatch { left: 4, right: 5 });
    }

    #[test]
    fn interior_positions_and_absent_generator() {
        let a12 = monomial(4, &[1, 2]);
        assert_eq!(a12.interior(1).unwrap(), gen(4, 2));
        assert_eq!(a12.interior(2).unwrap(), gen(4, 1).neg());
        assert!(a12.interior(3).unwrap().is_zero());
        assert!(a12.interior(5).is_err());
    }

    #[test]
    fn top_coefficient_projects() {
        let top = monomial(6, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(top.top_coefficient(), rat(1));
        let mixed = top.scale(&rat(-6)).add(&monomial(6, &[1, 2])).unwrap();
        assert_eq!(mixed.top_coefficient(), rat(-6));
        assert_eq!(monomial(6, &[1, 2]).top_coefficient(), rat(0));
    }

    /// Independent sign oracle: multiply monomials by concatenating index
    /// lists and counting bubble-sort swaps.
    fn oracle_wedge(dim: usize, a: &Form, b: &Form) -> Form {
        let mut out = Form::zero(dim);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut seq = ma.indices();
                seq.extend(mb.indices());
                let mut swaps = 0usize;
                let mut dup = false;
                for i in 0..seq.len() {
                    for j in (i + 1..seq.len()).rev() {
                        if seq[j - 1] > seq[j] {
                            seq.swap(j - 1, j);
                            swaps += 1;
                        }
                    }
                }
                for w in seq.windows(2) {
                    if w[0] == w[1] {
                        dup = true;
                    }
                }
                if dup {
                    continue;
                }
                let sign = if swaps.is_multiple_of(2) {
                    rat(1)
                } else {
                    rat(-1)
                };
                out = out
                    .add(&Form::from_terms(
                        dim,
                        [(Monomial::from_indices(&seq, dim).unwrap(), ca * cb * sign)],
                    ))
                    .unwrap();
            }
        }
        out
    }

    fn omega1() -> Form {
        // a1^a6 + a2^a5 - a3^a4
        monomial(6, &[1, 6])
            .add(&monomial(6, &[2, 5]))
            .unwrap()
            .sub(&monomial(6, &[3, 4]))
            .unwrap()
    }

    fn omega2() -> Form {
        // a1^a3 + a2^a6 - a4^a5
        monomial(6, &[1, 3])
            .add(&monomial(6, &[2, 6]))
            .unwrap()
            .sub(&monomial(6, &[4, 5]))
            .unwrap()
    }

    #[test]
    fn omega1_cube_matches_brute_force_expansion() {
        let w = omega1();
        let cube = w.wedge(&w).unwrap().wedge(&w).unwrap();
        let oracle = oracle_wedge(6, &oracle_wedge(6, &w, &w), &w);
        assert_eq!(cube, oracle);
        // frozen from the oracle expansion over all 3^3 term triples
        assert_eq!(cube, monomial(6, &[1, 2, 3, 4, 5, 6]).scale(&rat(-6)));
    }

    #[test]
    fn omega2_cube_top_coefficient() {
        let w = omega2();
        let cube = w.wedge_power(3);
        let oracle = oracle_wedge(6, &oracle_wedge(6, &w, &w), &w);
        assert_eq!(cube, oracle);
        assert_eq!(cube.top_coefficient(), rat(6)); // frozen from the oracle
    }

    #[test]
    fn degree_basis_is_lex_sorted_and_complete() {
        let basis = degree_basis(4, 2);
        let tuples: Vec<Vec<usize>> = basis.iter().map(|m| m.indices()).collect();
        assert_eq!(
            tuples,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut sorted = basis.clone();
        sorted.sort();
        assert_eq!(basis, sorted);
        assert_eq!(degree_basis(6, 3).len(), 20);
    }

    #[test]
    fn render_round_trip_shape() {
        let f = monomial(4, &[1, 2])
            .scale(&crate::rational::ratio(-3, 2))
            .add(&gen(4, 3))
            .unwrap();
        assert_eq!(f.render(None), "a3 - 3/2*a1^a2");
    }
}
