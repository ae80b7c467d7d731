//! Built-in example algebras under stable names, plus lookup of user
//! catalogs through the `NILCOHOM_CATALOG` environment variable.
//!
//! Every built-in entry is a nilpotent Lie algebra shipped as text in the
//! algebra grammar (so loading one exercises the parser), together with its
//! preregistered symplectic forms.

use std::path::{Path, PathBuf};

use crate::algebra::StructureConstants;
use crate::exterior::Form;
use crate::parse::{parse_algebra, parse_form, ParseError};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    /// The algebra file text this entry was parsed from.
    pub source: String,
    pub algebra: StructureConstants,
    /// Named symplectic forms; the first one is the default.
    pub forms: Vec<(String, Form)>,
}

impl CatalogEntry {
    fn build(name: &str, source: String, forms: &[(&str, &str)]) -> CatalogEntry {
        let algebra = parse_algebra(&source).expect("built-in catalog entry must parse");
        let forms = forms
            .iter()
            .map(|(label, expr)| {
                let form = parse_form(expr, &algebra).expect("built-in form must parse");
                (label.to_string(), form)
            })
            .collect();
        CatalogEntry {
            name: name.to_string(),
            source,
            algebra,
            forms,
        }
    }

    pub fn named_form(&self, label: &str) -> Option<&Form> {
        self.forms.iter().find(|(l, _)| l == label).map(|(_, f)| f)
    }

    pub fn default_form(&self) -> Option<&(String, Form)> {
        self.forms.first()
    }
}

fn torus_entry(n: usize) -> CatalogEntry {
    let m = n / 2;
    let omega = (1..=m)
        .map(|i| format!("a{i}^a{}", i + m))
        .collect::<Vec<_>>()
        .join("+");
    CatalogEntry::build(
        &format!("torus{n}"),
        format!("dim {n};\n"),
        &[("omega", omega.as_str())],
    )
}

const KT_SOURCE: &str = "dim 4;\ngenerators x,e1,e2,e3;\n[2,3]=-1*4;\n";

fn kt_entry() -> CatalogEntry {
    CatalogEntry::build("kt", KT_SOURCE.to_string(), &[("omega", "e1^e3 + e2^x")])
}

fn kt_product_entry() -> CatalogEntry {
    let kt = parse_algebra(KT_SOURCE).expect("kt source parses");
    let product = StructureConstants::direct_sum(&kt, &kt);
    let source = product.serialize();
    CatalogEntry::build(
        "kt-x-kt",
        source,
        &[("omega", "e1_1^e3_1 + e2_1^x_1 + e1_2^e3_2 + e2_2^x_2")],
    )
}

const PROP45_SOURCE: &str =
    "dim 6;\n[1,2]=-1*4;\n[1,4]=-1*5;\n[1,5]=-1*6;\n[2,3]=-1*6;\n[2,4]=-1*6;\n";

fn prop45_entry() -> CatalogEntry {
    CatalogEntry::build(
        "prop45",
        PROP45_SOURCE.to_string(),
        &[
            ("omega1", "a1^a6 + a2^a5 - a3^a4"),
            ("omega2", "a1^a3 + a2^a6 - a4^a5"),
        ],
    )
}

/// All built-in entries, in stable order.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    vec![
        torus_entry(2),
        torus_entry(4),
        torus_entry(6),
        kt_entry(),
        kt_product_entry(),
        prop45_entry(),
    ]
}

pub fn builtin_names() -> Vec<String> {
    builtin_catalog().into_iter().map(|e| e.name).collect()
}

/// Directory of extra algebra files named by the `NILCOHOM_CATALOG`
/// environment variable, if set.
pub fn extra_catalog_dir() -> Option<PathBuf> {
    std::env::var_os("NILCOHOM_CATALOG").map(PathBuf::from)
}

#[derive(Debug)]
pub enum CatalogLookup {
    Found(CatalogEntry),
    ParseFailed(ParseError),
    NotFound,
}

/// Looks a name up among built-ins first, then as `<dir>/<name>` (or
/// `<name>.alg`) inside `extra_dir`. Built-in names always win, so catalog
/// directories cannot shadow the shipped examples.
pub fn lookup(name: &str, extra_dir: Option<&Path>) -> CatalogLookup {
    if let Some(entry) = builtin_catalog().into_iter().find(|e| e.name == name) {
        return CatalogLookup::Found(entry);
    }
    if let Some(dir) = extra_dir {
        for candidate in [dir.join(name), dir.join(format!("{name}.alg"))] {
            if candidate.is_file() {
                let Ok(source) = std::fs::read_to_string(&candidate) else {
                    return CatalogLookup::NotFound;
                };
                return match parse_algebra(&source) {
                    Ok(algebra) => CatalogLookup::Found(CatalogEntry {
                        name: name.to_string(),
                        source,
                        algebra,
                        forms: Vec::new(),
                    }),
                    Err(e) => CatalogLookup::ParseFailed(e),
                };
            }
        }
    }
    CatalogLookup::NotFound
}
