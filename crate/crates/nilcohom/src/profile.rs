//! Classification of a symplectic algebra against the three-property table
//! (triviality of Massey products, Hard Lefschetz, evenness of odd Betti
//! numbers) for the symplectically aspherical case.

use crate::ce::{CohomologyBasis, Differential};
use crate::massey::scan_triple_massey;
use crate::symplectic::{hard_lefschetz, SymplecticData, SymplecticError};

/// Row annotations, in table order. Rows are numbered 1..=8 by the triple
/// (massey trivial, hard lefschetz, odd betti even) read as three bits from
/// `yes yes yes` down to `no no no`.
const ANNOTATIONS: [&str; 8] = [
    "Kähler (T^{2n})",
    "Impossible",
    "?",
    "?",
    "?",
    "Impossible",
    "K×K",
    "K",
];

pub fn table_line(massey_trivial: bool, hlp: bool, odd_betti_even: bool) -> (u8, &'static str) {
    let line = 1
        + (if massey_trivial { 0 } else { 4 })
        + (if hlp { 0 } else { 2 })
        + (if odd_betti_even { 0 } else { 1 });
    (line as u8, ANNOTATIONS[line - 1])
}

#[derive(Debug, Clone)]
pub struct PropertyProfile {
    /// No non-trivial triple product found up to the bound. A bounded scan
    /// cannot certify vanishing of products of all orders.
    pub massey_trivial_within_bound: bool,
    pub massey_bound: usize,
    /// First non-trivial triple found, if any.
    pub massey_witness: Option<(String, String, String)>,
    pub hard_lefschetz: bool,
    pub odd_betti_even: bool,
    pub line: u8,
    pub annotation: &'static str,
}

pub fn compute_profile(
    d: &Differential,
    coh: &CohomologyBasis,
    s: &SymplecticData,
    massey_bound: usize,
    generator_names: Option<&[String]>,
) -> Result<PropertyProfile, SymplecticError> {
    let omega_class = coh.reduce(d, s.omega())?;
    let extras = vec![("[omega]".to_string(), omega_class)];
    let hits = scan_triple_massey(d, coh, massey_bound, &extras, generator_names)
        .map_err(SymplecticError::Ce)?;
    let massey_trivial_within_bound = hits.is_empty();
    let massey_witness = hits.first().map(|h| h.labels.clone());

    let hlp = hard_lefschetz(s, d, coh)?.holds;

    let odd_betti_even = (0..=coh.dim())
        .filter(|k| k % 2 == 1)
        .all(|k| coh.betti(k).is_multiple_of(2));

    let (line, annotation) = table_line(massey_trivial_within_bound, hlp, odd_betti_even);
    Ok(PropertyProfile {
        massey_trivial_within_bound,
        massey_bound,
        massey_witness,
        hard_lefschetz: hlp,
        odd_betti_even,
        line,
        annotation,
    })
}
