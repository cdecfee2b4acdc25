//! Localization with respect to `E21` on region bases.
//!
//! `E21` lowers `k` by one, so it is injective (surjective) on the module of
//! a region exactly when the region is closed under `k ↦ k − 1` (`k ↦ k + 1`).
//! The localization of an injective module has basis `B + ℕδ¹¹`; a twist by
//! `x` moves the base vector by `x δ¹¹` and shifts the character value `g11`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{classify_block, instantiate, letter_expr, Classification};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::scalar::{self, Scalar};
use crate::structure::ClassGraph;
use crate::tableau::{BlockSpec, GTCharacter, Shift};

static TABLES_JSON: &str = include_str!("../data/localization.json");

/// Localization functors at `E21`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    /// `D12`: basis `B + ℕδ¹¹`.
    D12,
    /// `QD12`: basis `(B + ℕδ¹¹) \ B`.
    QD12,
    /// `D12^x`: basis `B + ℕδ¹¹` over the base moved by `x δ¹¹`.
    D12x,
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functor::D12 => "D12",
            Functor::QD12 => "QD12",
            Functor::D12x => "D12^x",
        })
    }
}

impl FromStr for Functor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d12" => Ok(Functor::D12),
            "qd12" => Ok(Functor::QD12),
            "d12x" | "d12^x" => Ok(Functor::D12x),
            _ => Err(Error::Parse(format!("unknown functor `{s}`"))),
        }
    }
}

impl Serialize for Functor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

const DOWN: Shift = Shift::new(0, 0, -1);
const UP: Shift = Shift::new(0, 0, 1);

/// `E21` is injective on `M(r)`: `r` is closed under `k ↦ k − 1`.
pub fn e21_injective(r: &Region) -> bool {
    r.translate(DOWN).is_subset(r)
}

/// `E21` is surjective on `M(r)`: `r` is closed under `k ↦ k + 1`.
pub fn e21_surjective(r: &Region) -> bool {
    r.translate(UP).is_subset(r)
}

/// Outcome of applying a functor to the module of a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationResult {
    #[serde(serialize_with = "crate::ser::display")]
    pub input: Region,
    #[serde(serialize_with = "crate::ser::display")]
    pub output: Region,
    pub functor: Functor,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub twist: Scalar,
    /// Base vector after the twist, when a block was given.
    #[serde(serialize_with = "ser_base")]
    pub base: Option<[Scalar; 6]>,
}

fn ser_base<S: serde::Serializer>(b: &Option<[Scalar; 6]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(b) => crate::ser::scalar_list(b, s),
        None => s.serialize_none(),
    }
}

/// Applies `functor` to the module with basis `region`. The twist `x` is
/// used by `D12^x` only.
pub fn apply_functor(
    functor: Functor,
    region: &Region,
    block: Option<&BlockSpec>,
    x: &Scalar,
) -> Result<LocalizationResult> {
    if !e21_injective(region) {
        return Err(Error::NotInjective(region.to_string()));
    }
    let closure = region.k_closure();
    let output = match functor {
        Functor::QD12 => closure.difference(region).simplify(),
        Functor::D12 | Functor::D12x => closure,
    };
    let twist = if functor == Functor::D12x { x.clone() } else { scalar::int(0) };
    let base = block.map(|b| b.twisted(&twist).map(|t| t.base().clone())).transpose()?;
    Ok(LocalizationResult { input: region.clone(), output, functor, twist, base })
}

/// Character of `v^x` from the character of `v`: only `g11` moves.
pub fn twist_character(chi: &GTCharacter, x: &Scalar) -> GTCharacter {
    let mut out = chi.clone();
    out.0[0] = &out.0[0] + x;
    out
}

/// One row of the localization tables: the targets of a block and the
/// recipes that produce them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub case: String,
    pub targets: Vec<usize>,
    pub recipes: Vec<String>,
    /// Printed recipes, when a corrected form is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// All table rows in printed order.
pub fn table_rows() -> &'static [TableRow] {
    static ROWS: OnceLock<Vec<TableRow>> = OnceLock::new();
    ROWS.get_or_init(|| serde_json::from_str(TABLES_JSON).expect("localization tables are valid"))
}

/// A recipe: `L3`, `C4:L1`, `QD12(L1)`, `D12^(z-a)(G6:L4)`, `soc(E)`,
/// `E/L2`, `E/(L7+L8)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Module { case: Option<String>, index: usize },
    Localize { functor: Functor, twist: Option<String>, inner: Box<Recipe> },
    Socle(Box<Recipe>),
    Quotient(Box<Recipe>, Vec<usize>),
}

impl FromStr for Recipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = RecipeParser { s: &text, pos: 0 };
        let r = p.expr()?;
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

struct RecipeParser<'a> {
    s: &'a str,
    pos: usize,
}

impl RecipeParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("recipe `{}` at {}: {what}", self.s, self.pos))
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn expr(&mut self) -> Result<Recipe> {
        let mut r = self.atom()?;
        while self.eat("/") {
            let idx = if self.eat("(") {
                let mut v = vec![self.index()?];
                while self.eat("+") {
                    v.push(self.index()?);
                }
                self.expect(")")?;
                v
            } else {
                vec![self.index()?]
            };
            r = Recipe::Quotient(Box::new(r), idx);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Recipe> {
        if self.eat("soc(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(Recipe::Socle(Box::new(inner)));
        }
        let functor = if self.eat("QD12") {
            Some(Functor::QD12)
        } else if self.eat("D12") {
            Some(Functor::D12)
        } else {
            None
        };
        if let Some(functor) = functor {
            let twist = if self.eat("^(") {
                let end = self.rest().find(')').ok_or_else(|| self.err("unclosed twist"))?;
                let t = self.rest()[..end].to_string();
                self.pos += end + 1;
                Some(t)
            } else {
                None
            };
            self.expect("(")?;
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(Recipe::Localize { functor, twist, inner: Box::new(inner) });
        }
        let case = match self.rest().find(':') {
            Some(i) if self.rest()[..i].chars().all(|c| c.is_ascii_alphanumeric()) => {
                let c = self.rest()[..i].to_string();
                self.pos += i + 1;
                Some(c)
            }
            _ => None,
        };
        Ok(Recipe::Module { case, index: self.index()? })
    }

    fn index(&mut self) -> Result<usize> {
        self.expect("L")?;
        let n = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        let i = self.rest()[..n].parse().map_err(|_| self.err("expected a module index"))?;
        self.pos += n;
        Ok(i)
    }
}

/// A module produced during a replay: a region in the coordinates of a block.
struct Value {
    block: BlockSpec,
    cls: Classification,
    region: Region,
}

/// Replay record of one recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationRecord {
    /// Target modules, e.g. `C4:L2`; several when the row lists isomorphic targets.
    pub target: Vec<String>,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
    pub functor: String,
    /// Symbolic twist and its value at the catalog letters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<String>,
    pub steps: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Target whose region equals the output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_target: Option<String>,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Evaluates recipes at fixed parameters, caching class graphs per block.
pub struct Replayer {
    t: i64,
    s: i64,
    graphs: HashMap<String, ClassGraph>,
}

impl Replayer {
    /// Prepares the class graphs needed by socle steps of every row.
    pub fn new(t: i64, s: i64) -> Result<Self> {
        let mut cases: Vec<String> = table_rows()
            .iter()
            .filter(|r| r.recipes.iter().any(|x| x.contains("soc(")))
            .map(|r| r.case.clone())
            .collect();
        cases.dedup();
        let graphs = cases
            .par_iter()
            .map(|c| Ok((c.clone(), ClassGraph::build(&instantiate(c, t, s)?)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(Replayer { t, s, graphs })
    }

    fn module(&self, case: &str, index: usize) -> Result<Value> {
        let block = instantiate(case, self.t, self.s)?;
        let cls = classify_block(&block)?;
        let region = cls
            .regions()?
            .get(index.wrapping_sub(1))
            .cloned()
            .ok_or_else(|| Error::Parse(format!("{case} has no module L{index}")))?;
        Ok(Value { block, cls, region })
    }

    fn graph(&self, v: &Value) -> Result<ClassGraph> {
        match self.graphs.get(&v.cls.label) {
            Some(g) if g.block() == &v.block => Ok(g.clone()),
            _ => ClassGraph::build(&v.block),
        }
    }

    fn eval(&self, r: &Recipe, home: &str, steps: &mut Vec<String>) -> Result<Value> {
        match r {
            Recipe::Module { case, index } => {
                let case = case.as_deref().unwrap_or(home);
                let v = self.module(case, *index)?;
                steps.push(format!("{case}:L{index} = {}", v.region));
                Ok(v)
            }
            Recipe::Localize { functor, twist, inner } => {
                let v = self.eval(inner, home, steps)?;
                match twist {
                    None => {
                        let out = apply_functor(*functor, &v.region, None, &scalar::int(0))?;
                        steps.push(format!("{functor} = {}", out.output));
                        Ok(Value { region: out.output, ..v })
                    }
                    Some(expr) => {
                        // A non-integral twist leaves no copy of the source inside
                        // the localization, so both functors give the closure.
                        let x = letter_expr(expr)?;
                        let out = apply_functor(Functor::D12x, &v.region, Some(&v.block), &x)?;
                        let block = v.block.twisted(&x)?;
                        let cls = classify_block(&block)?;
                        steps.push(format!(
                            "twist by {expr} = {}: block {}, closure = {}",
                            scalar::format(&x),
                            cls.label,
                            out.output
                        ));
                        Ok(Value { block, cls, region: out.output })
                    }
                }
            }
            Recipe::Socle(inner) => {
                let v = self.eval(inner, home, steps)?;
                let region = self.graph(&v)?.socle_of(&v.region)?;
                steps.push(format!("socle = {region}"));
                Ok(Value { region, ..v })
            }
            Recipe::Quotient(inner, idx) => {
                let mut v = self.eval(inner, home, steps)?;
                let regions = v.cls.regions()?;
                for &j in idx {
                    let rj = regions
                        .get(j.wrapping_sub(1))
                        .ok_or_else(|| Error::Parse(format!("{} has no module L{j}", v.cls.label)))?;
                    if !rj.is_subset(&v.region) {
                        return Err(Error::Invariant(format!("L{j} = {rj} is not inside {}", v.region)));
                    }
                    v.region = v.region.difference(rj).simplify();
                }
                steps.push(format!("quotient = {}", v.region));
                Ok(v)
            }
        }
    }

    /// Replays one recipe of a row.
    pub fn replay(&self, row: &TableRow, k: usize) -> DerivationRecord {
        let text = &row.recipes[k];
        let target: Vec<String> = row.targets.iter().map(|i| format!("{}:L{i}", row.case)).collect();
        let mut rec = DerivationRecord {
            target,
            source: text.clone(),
            printed: row.printed.as_ref().and_then(|p| p.get(k).cloned()),
            functor: String::new(),
            twist: None,
            steps: Vec::new(),
            output: None,
            matched_target: None,
            matched: false,
            error: None,
        };
        let recipe = match text.parse::<Recipe>() {
            Ok(r) => r,
            Err(e) => {
                rec.error = Some(e.to_string());
                return rec;
            }
        };
        let (functor, twist) = outer_functor(&recipe);
        rec.functor = functor;
        rec.twist = twist;
        let mut steps = Vec::new();
        let res = self.eval(&recipe, &row.case, &mut steps);
        rec.steps = steps;
        match res.and_then(|v| self.compare(row, &v)) {
            Ok((out, hit)) => {
                rec.output = Some(out.to_string());
                rec.matched = hit.is_some();
                rec.matched_target = hit.map(|i| format!("{}:L{i}", row.case));
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }

    fn compare(&self, row: &TableRow, v: &Value) -> Result<(Region, Option<usize>)> {
        if v.cls.label != row.case {
            return Err(Error::Invariant(format!("recipe lands in block {}, not {}", v.cls.label, row.case)));
        }
        let regions = v.cls.regions()?;
        let hit = row.targets.iter().copied().find(|&i| regions.get(i - 1).is_some_and(|r| r.set_eq(&v.region)));
        Ok((v.region.clone(), hit))
    }
}

fn outer_functor(r: &Recipe) -> (String, Option<String>) {
    match r {
        Recipe::Module { .. } => ("none".into(), None),
        Recipe::Localize { functor, twist: None, .. } => (functor.to_string(), None),
        Recipe::Localize { functor, twist: Some(t), .. } => (format!("{functor}^({t})"), Some(t.clone())),
        Recipe::Socle(i) | Recipe::Quotient(i, _) => outer_functor(i),
    }
}

/// Replays every recipe of every table row at parameters `(t, s)`.
pub fn replay_tables(t: i64, s: i64) -> Result<Vec<DerivationRecord>> {
    let rp = Replayer::new(t, s)?;
    let jobs: Vec<(&TableRow, usize)> =
        table_rows().iter().flat_map(|r| (0..r.recipes.len()).map(move |k| (r, k))).collect();
    Ok(jobs.par_iter().map(|(r, k)| rp.replay(r, *k)).collect())
}

/// Replays the recipes producing `L_index` of a case.
pub fn realize_simple_via_localization(label: &str, index: usize, t: i64, s: i64) -> Result<Vec<DerivationRecord>> {
    let rows: Vec<&TableRow> =
        table_rows().iter().filter(|r| r.case == label && r.targets.contains(&index)).collect();
    if rows.is_empty() {
        return Err(Error::UnknownLabel(format!("{label}:L{index}")));
    }
    let rp = Replayer { t, s, graphs: HashMap::new() };
    Ok(rows.iter().flat_map(|r| (0..r.recipes.len()).map(|k| rp.replay(r, k)).collect::<Vec<_>>()).collect())
}
