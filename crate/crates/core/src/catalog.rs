//! Case tables G1–G16 (generic) and C1–C14 (singular): printed regions,
//! Loewy grouping, isomorphism pairs and weight multiplicity types, plus
//! recognition of the case a block belongs to.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::Region;
use crate::scalar::{self, int, ratio, Scalar};
use crate::structure::SubquotientReport;
use crate::tableau::{BlockSpec, Shift};

static CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Type of the weight multiplicities of a simple subquotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    /// Finitely many weights.
    Finite,
    /// Finite and bounded by a parameter.
    Bounded,
    /// Finite but unbounded.
    Unbounded,
    /// Some weight space is infinite dimensional.
    Infinite,
}

/// A printed region replaced because the printed list does not partition the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub module: usize,
    pub region: String,
    pub note: String,
}

/// One case of the tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCase {
    pub case: String,
    /// Integer parameters appearing in the template, among `t` and `s`.
    pub params: Vec<String>,
    /// Base vector template, e.g. `["a","a-t","c","a","a","a"]`.
    pub template: Vec<String>,
    /// Region of `L_i` at index `i-1`, as printed.
    pub regions: Vec<String>,
    /// Loewy layers, socle first, as lists of module indices.
    pub loewy: Vec<Vec<usize>>,
    pub iso_pairs: Vec<(usize, usize)>,
    /// Number of simples up to isomorphism.
    pub simples: usize,
    pub multiplicity: Vec<Option<Multiplicity>>,
    /// Modules on which `E21` acts injectively.
    pub e21_injective: Vec<usize>,
    pub errata: Vec<Erratum>,
}

impl CatalogCase {
    pub fn is_singular(&self) -> bool {
        self.case.starts_with('C')
    }

    pub fn count(&self) -> usize {
        self.regions.len()
    }

    /// Parameter values for which the case is defined.
    pub fn check_params(&self, t: i64, s: i64) -> Result<()> {
        let needs_t = !self.params.is_empty();
        let needs_s = self.params.len() == 2;
        if needs_t && t <= 0 || needs_s && s <= t {
            return Err(Error::Inadmissible(format!("{} needs 0 < t{}", self.case, if needs_s { " < s" } else { "" })));
        }
        Ok(())
    }

    fn regions_from(&self, texts: &[String], t: i64, s: i64) -> Result<Vec<Region>> {
        self.check_params(t, s)?;
        texts.iter().map(|r| Region::parse_with(r, &[("t", t), ("s", s)])).collect()
    }

    /// Printed regions at parameters `(t, s)`, in template coordinates.
    pub fn printed_regions(&self, t: i64, s: i64) -> Result<Vec<Region>> {
        self.regions_from(&self.regions, t, s)
    }

    /// Printed regions with the errata applied.
    pub fn regions(&self, t: i64, s: i64) -> Result<Vec<Region>> {
        let mut texts = self.regions.clone();
        for e in &self.errata {
            texts[e.module - 1] = e.region.clone();
        }
        self.regions_from(&texts, t, s)
    }

    /// Module index of the isomorphic partner of `L_i`, if any.
    pub fn iso_partner(&self, i: usize) -> Option<usize> {
        self.iso_pairs.iter().find_map(|&(a, b)| match i {
            _ if i == a => Some(b),
            _ if i == b => Some(a),
            _ => None,
        })
    }

    /// Layer of `L_i` in the printed Loewy grouping, starting at 1.
    pub fn loewy_layer(&self, i: usize) -> Option<usize> {
        self.loewy.iter().position(|l| l.contains(&i)).map(|p| p + 1)
    }
}

/// All cases in table order.
pub fn cases() -> &'static [CatalogCase] {
    static CASES: OnceLock<Vec<CatalogCase>> = OnceLock::new();
    CASES.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("catalog data is valid"))
}

pub fn case(label: &str) -> Result<&'static CatalogCase> {
    cases().iter().find(|c| c.case == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Values substituted for the template letters. They are pairwise
/// non-congruent, so only the integer offsets in the template matter.
fn letter(c: char) -> Option<Scalar> {
    "abcxyz".find(c).map(|i| ratio(i as i64 + 1, 7))
}

/// Value of a signed sum of template letters such as `z-a`.
pub fn letter_expr(text: &str) -> Result<Scalar> {
    let mut acc = int(0);
    let mut sign = 1;
    let mut seen = false;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '+' => sign = 1,
            '-' => sign = -1,
            c => {
                let v = letter(c).ok_or_else(|| Error::Parse(format!("letter `{c}` in `{text}`")))?;
                acc += int(sign) * v;
                sign = 1;
                seen = true;
            }
        }
    }
    if !seen {
        return Err(Error::Parse(format!("empty letter expression `{text}`")));
    }
    Ok(acc)
}

fn stone(text: &str, t: i64, s: i64) -> Result<Scalar> {
    let mut it = text.chars();
    let base = it.next().and_then(letter).ok_or_else(|| Error::Parse(format!("template entry `{text}`")))?;
    match it.as_str() {
        "" => Ok(base),
        "-t" => Ok(base - int(t)),
        "-s" => Ok(base - int(s)),
        rest => Err(Error::Parse(format!("template suffix `{rest}`"))),
    }
}

/// The block of a case at parameters `(t, s)`, in gl(3) mode.
pub fn instantiate(label: &str, t: i64, s: i64) -> Result<BlockSpec> {
    let c = case(label)?;
    c.check_params(t, s)?;
    let v: Vec<Scalar> = c.template.iter().map(|x| stone(x, t, s)).collect::<Result<_>>()?;
    BlockSpec::new(v.try_into().expect("six template entries"), false)
}

/// Case of a block and the map from template to block coordinates.
///
/// Blocks are normalized so that the row-two entry with more congruent
/// top entries comes first; `template_swap` and `swap` record whether the
/// template and the block needed the exchange of `m` and `n`. A template
/// point `p` maps to `swap(template_swap(p) + offset)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: String,
    pub t: i64,
    pub s: i64,
    pub template_swap: bool,
    pub swap: bool,
    pub offset: Shift,
}

impl Classification {
    pub fn case(&self) -> &'static CatalogCase {
        case(&self.label).expect("classified labels exist")
    }

    /// A template region in block coordinates.
    pub fn to_block(&self, r: &Region) -> Region {
        let r = if self.template_swap { r.swap_mn() } else { r.clone() };
        let r = r.translate(self.offset);
        if self.swap {
            r.swap_mn()
        } else {
            r
        }
    }

    /// Catalog regions (with errata) in block coordinates.
    pub fn regions(&self) -> Result<Vec<Region>> {
        Ok(self.case().regions(self.t, self.s)?.iter().map(|r| self.to_block(r)).collect())
    }
}

/// Integer offsets `d` with `v ≡ x + d`, sorted decreasing.
fn congruent(top: &[Scalar; 3], x: &Scalar) -> Vec<i64> {
    let mut d: Vec<i64> = top.iter().filter_map(|v| scalar::as_int(&(v - x))).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Gaps `(t, s)` of a decreasing offset list below its maximum.
fn gaps(d: &[i64]) -> (i64, i64) {
    let g = |i: usize| d.get(i).map_or(0, |v| d[0] - v);
    (g(1), g(2))
}

/// Finds the case of a block among G1–G16 and C1–C14.
pub fn classify_block(block: &BlockSpec) -> Result<Classification> {
    let mut cls = normalize(block)?;
    let tpl = normalize(&instantiate(&cls.label, cls.t.max(1), cls.s.max(cls.t + 1))?)?;
    cls.template_swap = tpl.swap;
    cls.offset = cls.offset - tpl.offset;
    Ok(cls)
}

/// Label, parameters, exchange flag and normalized offset of a block.
fn normalize(block: &BlockSpec) -> Result<Classification> {
    let b = block.base();
    let top = block.top();
    let (x, y, z) = (&b[3], &b[4], &b[5]);
    if block.is_singular() {
        let dx = congruent(&top, x);
        let zx = scalar::as_int(&(z - x));
        let (t, s) = gaps(&dx);
        let with_z = zx.is_some();
        let label = match (dx.len(), t, s) {
            (0, _, _) => ["C1", "C2"],
            (1, _, _) => ["C3", "C4"],
            (2, 0, _) => ["C8", "C7"],
            (2, _, _) => ["C6", "C5"],
            (3, 0, 0) => ["C14", "C13"],
            (3, 0, _) => ["C12", "C11"],
            (3, _, _) if t == s => return Err(Error::Unclassified),
            (3, _, _) => ["C9", "C10"],
            _ => unreachable!("three top entries"),
        }[with_z as usize];
        // (a,a,a-t) has gaps (0,t); the template parameter is the larger one.
        let (t, s) = if dx.len() == 3 && t == 0 { (s, 0) } else { (t, s) };
        let m0 = dx.first().copied().unwrap_or(0);
        let k0 = zx.map_or(0, |d| m0 - d);
        return Ok(Classification { label: label.into(), t, s, template_swap: false, swap: false, offset: Shift::new(m0, m0, k0) });
    }
    let (mut dx, mut dy) = (congruent(&top, x), congruent(&top, y));
    let (mut zx, mut zy) = (scalar::as_int(&(z - x)), scalar::as_int(&(z - y)));
    let swap = dx.len() < dy.len() || dx.len() == dy.len() && zy.is_some();
    if swap {
        std::mem::swap(&mut dx, &mut dy);
        std::mem::swap(&mut zx, &mut zy);
    }
    let (t, s) = gaps(&dx);
    if dx.len() >= 2 && (t == 0 || dx.len() == 3 && (s == 0 || s == t)) {
        return Err(Error::Unclassified);
    }
    let zc = if zx.is_some() { 1 } else if zy.is_some() { 2 } else { 0 };
    let label = match (dx.len(), dy.len(), zc) {
        (0, 0, 0) => "G1",
        (0, 0, _) => "G2",
        (1, 0, 0) => "G3",
        (1, 0, 1) => "G5",
        (1, 0, 2) => "G4",
        (1, 1, 0) => "G7",
        (1, 1, _) => "G6",
        (2, 0, 0) => "G8",
        (2, 0, 1) => "G9",
        (2, 0, 2) => "G10",
        (2, 1, 0) => "G13",
        (2, 1, 1) => "G11",
        (2, 1, 2) => "G12",
        (3, 0, 0) => "G16",
        (3, 0, 1) => "G14",
        (3, 0, 2) => "G15",
        _ => return Err(Error::Unclassified),
    };
    let m0 = dx.first().copied().unwrap_or(0);
    let n0 = dy.first().copied().unwrap_or(0);
    let k0 = match (zx, zy) {
        (Some(d), _) => m0 - d,
        (None, Some(d)) => n0 - d,
        _ => 0,
    };
    Ok(Classification { label: label.into(), t, s, template_swap: false, swap, offset: Shift::new(m0, n0, k0) })
}

/// Fills in the labels `L<i>` of a decomposition by exact region match with
/// the catalog (errata applied). Returns the classification and the number
/// of subquotients that received a label.
pub fn label_report(block: &BlockSpec, report: &mut SubquotientReport) -> Result<(Classification, usize)> {
    let cls = classify_block(block)?;
    let regions = cls.regions()?;
    let mut hits = 0;
    for sq in report.subquotients.iter_mut() {
        sq.label = regions.iter().position(|r| r.set_eq(&sq.region)).map(|i| format!("L{}", i + 1));
        hits += sq.label.is_some() as usize;
    }
    Ok((cls, hits))
}
