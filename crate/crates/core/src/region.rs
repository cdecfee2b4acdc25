//! Finite unions of difference-constraint cells over `Z^3`.
//!
//! A cell is a conjunction of atoms `X − Y ≤ c` with `X, Y ∈ {0, m, n, k}`,
//! stored as a 4×4 bound matrix. Emptiness, inclusion and equality are exact:
//! over the integers a system of difference constraints with integer bounds
//! is feasible exactly when its constraint graph has no negative cycle.
//!
//! Text form: `{m<=0, k<=m, n>-2}`, cells joined by `|`, `{}` for all of
//! `Z^3` and `none` for the empty region.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tableau::Shift;

/// Variable indices inside a bound matrix.
pub const ZERO: usize = 0;
pub const M: usize = 1;
pub const N: usize = 2;
pub const K: usize = 3;

const NAMES: [&str; 4] = ["0", "m", "n", "k"];

/// An atom `x_i − x_j ≤ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub i: usize,
    pub j: usize,
    pub c: i64,
}

impl Atom {
    pub fn new(i: usize, j: usize, c: i64) -> Self {
        assert!(i < 4 && j < 4 && i != j, "atom needs two distinct variables");
        Atom { i, j, c }
    }

    /// The complementary atom `x_j − x_i ≤ −c − 1`.
    pub fn negate(self) -> Atom {
        Atom::new(self.j, self.i, -self.c - 1)
    }

    pub fn holds(&self, p: [i64; 4]) -> bool {
        p[self.i] - p[self.j] <= self.c
    }

    fn rank(&self) -> (usize, i64) {
        const ORDER: [(usize, usize); 12] =
            [(M, ZERO), (ZERO, M), (N, ZERO), (ZERO, N), (K, ZERO), (ZERO, K), (M, N), (N, M), (K, M), (M, K), (K, N), (N, K)];
        let r = ORDER.iter().position(|&p| p == (self.i, self.j)).expect("valid pair");
        (r, self.c)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, c) = (NAMES[self.i], NAMES[self.j], self.c);
        if self.j == ZERO {
            write!(f, "{x}<={c}")
        } else if self.i == ZERO {
            write!(f, "{y}>{}", -c - 1)
        } else {
            match c.cmp(&0) {
                Ordering::Equal => write!(f, "{x}<={y}"),
                _ if c == -1 => write!(f, "{x}<{y}"),
                Ordering::Greater => write!(f, "{x}<={y}+{c}"),
                Ordering::Less => write!(f, "{x}<={y}{c}"),
            }
        }
    }
}

/// Point `(0, m, n, k)` in bound-matrix coordinates.
pub fn point(s: Shift) -> [i64; 4] {
    [0, s.m, s.n, s.k]
}

/// A conjunction of atoms; `bound[i][j] = Some(c)` encodes `x_i − x_j ≤ c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    bound: [[Option<i64>; 4]; 4],
}

impl Default for Cell {
    fn default() -> Self {
        Cell::full()
    }
}

impl Cell {
    /// The unconstrained cell `Z^3`.
    pub fn full() -> Self {
        Cell { bound: [[None; 4]; 4] }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut c = Cell::full();
        for a in atoms {
            c.add(a);
        }
        c
    }

    pub fn add(&mut self, a: Atom) {
        let slot = &mut self.bound[a.i][a.j];
        *slot = Some(slot.map_or(a.c, |c| c.min(a.c)));
    }

    pub fn with(&self, a: Atom) -> Cell {
        let mut c = self.clone();
        c.add(a);
        c
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if let Some(c) = self.bound[i][j] {
                    out.push(Atom::new(i, j, c));
                }
            }
        }
        out.sort_by_key(|a| a.rank());
        out
    }

    pub fn contains(&self, s: Shift) -> bool {
        let p = point(s);
        (0..4).all(|i| (0..4).all(|j| self.bound[i][j].is_none_or(|c| p[i] - p[j] <= c)))
    }

    /// A lattice point of the cell, each coordinate in turn chosen as close
    /// to `target` as the remaining constraints allow.
    pub fn sample_near(&self, target: Shift) -> Option<Shift> {
        let mut cell = self.clone();
        let want = point(target);
        let mut got = [0i64; 4];
        for v in [M, N, K] {
            let cl = cell.closure()?;
            let mut x = want[v];
            if let Some(hi) = cl[v][ZERO] {
                x = x.min(hi);
            }
            if let Some(lo) = cl[ZERO][v] {
                x = x.max(-lo);
            }
            cell.add(Atom::new(v, ZERO, x));
            cell.add(Atom::new(ZERO, v, -x));
            got[v] = x;
        }
        cell.closure()?;
        Some(Shift::new(got[M], got[N], got[K]))
    }

    /// Shortest-path closure; `None` if the cell is empty.
    pub fn closure(&self) -> Option<[[Option<i64>; 4]; 4]> {
        closure_n(self.bound)
    }

    pub fn is_empty(&self) -> bool {
        self.closure().is_none()
    }

    /// Whether the cell implies the atom.
    pub fn implies(&self, a: Atom) -> bool {
        self.with(a.negate()).is_empty()
    }

    pub fn is_subset(&self, o: &Cell) -> bool {
        self.is_empty() || o.atoms().into_iter().all(|a| self.implies(a))
    }

    pub fn intersect(&self, o: &Cell) -> Cell {
        let mut c = self.clone();
        for a in o.atoms() {
            c.add(a);
        }
        c
    }

    /// `{p + d : p ∈ cell}`.
    pub fn translate(&self, d: Shift) -> Cell {
        let dv = point(d);
        Cell::from_atoms(self.atoms().into_iter().map(|a| Atom::new(a.i, a.j, a.c + dv[a.i] - dv[a.j])))
    }

    /// Exchanges `m` and `n`.
    pub fn swap_mn(&self) -> Cell {
        let sw = |v: usize| match v {
            M => N,
            N => M,
            x => x,
        };
        Cell::from_atoms(self.atoms().into_iter().map(|a| Atom::new(sw(a.i), sw(a.j), a.c)))
    }

    /// `{p + j·δ11 : p ∈ cell, j ≥ 0}` by eliminating the original `k`.
    pub fn k_closure(&self) -> Cell {
        // Nodes 0..4 as usual plus node 4 for the original k0, with k0 ≤ k.
        let mut b = [[None; 5]; 5];
        for a in self.atoms() {
            let map = |v: usize| if v == K { 4 } else { v };
            let (i, j) = (map(a.i), map(a.j));
            b[i][j] = Some(b[i][j].map_or(a.c, |c: i64| c.min(a.c)));
        }
        b[4][K] = Some(0);
        match closure_n(b) {
            None => empty_cell(),
            Some(cl) => {
                let mut out = Cell::full();
                for i in 0..4 {
                    for j in 0..4 {
                        if i != j {
                            if let Some(c) = cl[i][j] {
                                out.add(Atom::new(i, j, c));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Drops atoms implied by the others, after tightening.
    pub fn minimized(&self) -> Cell {
        let Some(cl) = self.closure() else { return empty_cell() };
        let mut atoms = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    if let Some(c) = cl[i][j] {
                        atoms.push(Atom::new(i, j, c));
                    }
                }
            }
        }
        atoms.sort_by_key(|a| std::cmp::Reverse(a.rank()));
        let mut keep = atoms.clone();
        for a in atoms {
            let rest: Vec<Atom> = keep.iter().copied().filter(|b| *b != a).collect();
            if Cell::from_atoms(rest.clone()).implies(a) {
                keep = rest;
            }
        }
        Cell::from_atoms(keep)
    }

    /// Smallest cell containing both (bounds are the weaker of the two closures).
    pub fn hull(&self, o: &Cell) -> Option<Cell> {
        let (a, b) = (self.closure()?, o.closure()?);
        let mut out = Cell::full();
        for i in 0..4 {
            for j in 0..4 {
                if let (Some(x), Some(y)) = (a[i][j], b[i][j]) {
                    if i != j {
                        out.add(Atom::new(i, j, x.max(y)));
                    }
                }
            }
        }
        Some(out)
    }

    /// Largest absolute atom constant.
    pub fn max_const(&self) -> i64 {
        self.atoms().iter().map(|a| a.c.abs()).max().unwrap_or(0)
    }
}

fn empty_cell() -> Cell {
    Cell::from_atoms([Atom::new(M, ZERO, -1), Atom::new(ZERO, M, 0)])
}

fn closure_n<const D: usize>(mut b: [[Option<i64>; D]; D]) -> Option<[[Option<i64>; D]; D]> {
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = Some(row[i].map_or(0, |c| c.min(0)));
    }
    for via in 0..D {
        for i in 0..D {
            let Some(a) = b[i][via] else { continue };
            for j in 0..D {
                if let Some(c) = b[via][j] {
                    let s = a + c;
                    if b[i][j].is_none_or(|x| s < x) {
                        b[i][j] = Some(s);
                    }
                }
            }
        }
    }
    if (0..D).any(|i| b[i][i].is_some_and(|c| c < 0)) {
        None
    } else {
        Some(b)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms().iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A finite union of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Region {
    cells: Vec<Cell>,
}

impl Region {
    pub fn empty() -> Self {
        Region { cells: Vec::new() }
    }

    pub fn full() -> Self {
        Region { cells: vec![Cell::full()] }
    }

    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Self {
        Region { cells: cells.into_iter().filter(|c| !c.is_empty()).collect() }
    }

    pub fn cell(c: Cell) -> Self {
        Region::from_cells([c])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, s: Shift) -> bool {
        self.cells.iter().any(|c| c.contains(s))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    pub fn union(&self, o: &Region) -> Region {
        Region::from_cells(self.cells.iter().chain(o.cells.iter()).cloned())
    }

    pub fn intersect(&self, o: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.cells {
            for b in &o.cells {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        Region { cells: out }
    }

    pub fn complement(&self) -> Region {
        let mut acc = Region::full();
        for c in &self.cells {
            let atoms = c.atoms();
            if atoms.is_empty() {
                return Region::empty();
            }
            let neg = Region::from_cells(atoms.into_iter().map(|a| Cell::from_atoms([a.negate()])));
            acc = acc.intersect(&neg).compact();
        }
        acc
    }

    pub fn difference(&self, o: &Region) -> Region {
        let mut acc = self.clone();
        for c in &o.cells {
            acc = acc.intersect(&Region::cell(c.clone()).complement()).compact();
        }
        acc
    }

    pub fn is_subset(&self, o: &Region) -> bool {
        self.difference(o).is_empty()
    }

    pub fn set_eq(&self, o: &Region) -> bool {
        self.is_subset(o) && o.is_subset(self)
    }

    pub fn is_disjoint(&self, o: &Region) -> bool {
        self.intersect(o).is_empty()
    }

    pub fn translate(&self, d: Shift) -> Region {
        Region { cells: self.cells.iter().map(|c| c.translate(d)).collect() }
    }

    pub fn swap_mn(&self) -> Region {
        Region { cells: self.cells.iter().map(|c| c.swap_mn()).collect() }
    }

    /// `B + Nδ11`.
    pub fn k_closure(&self) -> Region {
        Region::from_cells(self.cells.iter().map(|c| c.k_closure())).simplify()
    }

    pub fn max_const(&self) -> i64 {
        self.cells.iter().map(|c| c.max_const()).max().unwrap_or(0)
    }

    /// Drops empty cells and cells contained in another cell.
    fn compact(&self) -> Region {
        let cells: Vec<Cell> = self.cells.iter().filter(|c| !c.is_empty()).map(|c| c.minimized()).collect();
        let keep = cells
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !cells.iter().enumerate().any(|(j, d)| j != *i && c.is_subset(d) && (j < *i || !d.is_subset(c)))
            })
            .map(|(_, c)| c.clone())
            .collect();
        Region { cells: keep }
    }

    /// Canonicalizing simplification: minimal atoms, merged cells, stable order.
    pub fn simplify(&self) -> Region {
        let mut cur = self.compact();
        loop {
            let mut merged = false;
            'outer: for i in 0..cur.cells.len() {
                for j in i + 1..cur.cells.len() {
                    let Some(h) = cur.cells[i].hull(&cur.cells[j]) else { continue };
                    let pair = Region { cells: vec![cur.cells[i].clone(), cur.cells[j].clone()] };
                    if Region::cell(h.clone()).is_subset(&pair) {
                        let mut cells = cur.cells.clone();
                        cells.remove(j);
                        cells[i] = h.minimized();
                        cur = Region { cells }.compact();
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        // Drop cells covered by the union of the remaining ones.
        let mut i = 0;
        while i < cur.cells.len() && cur.cells.len() > 1 {
            let mut rest = cur.cells.clone();
            let c = rest.remove(i);
            if Region::cell(c).is_subset(&Region { cells: rest.clone() }) {
                cur.cells = rest;
            } else {
                i += 1;
            }
        }
        cur.cells.sort_by_key(|c| c.to_string());
        cur
    }

    /// Lattice points of the region with every coordinate in `[-r, r]`.
    pub fn points(&self, r: i64) -> Vec<Shift> {
        window(r).into_iter().filter(|s| self.contains(*s)).collect()
    }

    /// Parses the text form with named integer parameters such as `t`, `s`.
    pub fn parse_with(text: &str, params: &[(&str, i64)]) -> Result<Region> {
        parse_region(text, params)
    }
}

/// All shifts with coordinates in `[-r, r]`.
pub fn window(r: i64) -> Vec<Shift> {
    let mut out = Vec::with_capacity(((2 * r + 1).pow(3)) as usize);
    for m in -r..=r {
        for n in -r..=r {
            for k in -r..=r {
                out.push(Shift::new(m, n, k));
            }
        }
    }
    out
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "none");
        }
        let parts: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

impl FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Region> {
        parse_region(s, &[])
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Cmp(&'static str),
    Comma,
    Open,
    Close,
    Bar,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '{' => (out.push(Tok::Open), i += 1).1,
            '}' => (out.push(Tok::Close), i += 1).1,
            ',' => (out.push(Tok::Comma), i += 1).1,
            '|' | '∪' => (out.push(Tok::Bar), i += 1).1,
            '+' => (out.push(Tok::Plus), i += 1).1,
            '-' | '−' => (out.push(Tok::Minus), i += 1).1,
            '≤' => (out.push(Tok::Cmp("<=")), i += 1).1,
            '≥' => (out.push(Tok::Cmp(">=")), i += 1).1,
            '<' | '>' => {
                let eq = cs.get(i + 1) == Some(&'=');
                let op = match (c, eq) {
                    ('<', true) => "<=",
                    ('<', false) => "<",
                    ('>', true) => ">=",
                    _ => ">",
                };
                out.push(Tok::Cmp(op));
                i += if eq { 2 } else { 1 };
            }
            '=' => (out.push(Tok::Cmp("=")), i += 1).1,
            d if d.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = cs[st..i].iter().collect();
                out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("bad integer `{t}`")))?));
            }
            a if a.is_alphabetic() => {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[st..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}` in region"))),
        }
    }
    Ok(out)
}

/// Linear form `Σ coef·var + constant` over `[0, m, n, k]`.
type Lin = ([i64; 4], i64);

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a [(&'a str, i64)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at token {}", self.pos)))
    }

    fn region(&mut self) -> Result<Region> {
        if let Some(Tok::Ident(w)) = self.peek() {
            if w == "none" {
                self.pos += 1;
                return if self.peek().is_none() { Ok(Region::empty()) } else { self.err("trailing input") };
            }
        }
        let mut cells = vec![self.cell()?];
        while let Some(Tok::Bar) = self.peek() {
            self.pos += 1;
            cells.push(self.cell()?);
        }
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(Region::from_cells(cells))
    }

    fn cell(&mut self) -> Result<Cell> {
        if self.next() != Some(Tok::Open) {
            return self.err("expected `{`");
        }
        let mut cell = Cell::full();
        if let Some(Tok::Close) = self.peek() {
            self.pos += 1;
            return Ok(cell);
        }
        loop {
            for a in self.chain()? {
                cell.add(a);
            }
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::Close) => return Ok(cell),
                _ => return self.err("expected `,` or `}`"),
            }
        }
    }

    fn chain(&mut self) -> Result<Vec<Atom>> {
        let mut lhs = self.expr()?;
        let mut atoms = Vec::new();
        let mut seen = false;
        while let Some(Tok::Cmp(op)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.expr()?;
            atoms.extend(compare(&lhs, op, &rhs)?);
            lhs = rhs;
            seen = true;
        }
        if !seen {
            return self.err("expected a comparison");
        }
        Ok(atoms)
    }

    fn expr(&mut self) -> Result<Lin> {
        let mut acc: Lin = ([0; 4], 0);
        let mut sign = 1;
        let mut first = true;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -sign;
                    continue;
                }
                Some(Tok::Plus) if !first => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            match self.next() {
                Some(Tok::Num(v)) => acc.1 += sign * v,
                Some(Tok::Ident(name)) => match name.as_str() {
                    "m" => acc.0[M] += sign,
                    "n" => acc.0[N] += sign,
                    "k" => acc.0[K] += sign,
                    p => match self.params.iter().find(|(q, _)| *q == p) {
                        Some((_, v)) => acc.1 += sign * v,
                        None => return Err(Error::Parse(format!("unknown symbol `{p}` in region"))),
                    },
                },
                _ => return self.err("expected a term"),
            }
            first = false;
            sign = 1;
            match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => continue,
                _ => return Ok(acc),
            }
        }
    }
}

/// Atoms for `lhs op rhs`.
fn compare(lhs: &Lin, op: &str, rhs: &Lin) -> Result<Vec<Atom>> {
    let mut v = [0i64; 4];
    for i in 0..4 {
        v[i] = lhs.0[i] - rhs.0[i];
    }
    let c = rhs.1 - lhs.1;
    // v·x ≤ c  (after moving constants), as a difference atom.
    let le = |v: [i64; 4], c: i64| -> Result<Atom> {
        let pos: Vec<usize> = (1..4).filter(|&i| v[i] == 1).collect();
        let neg: Vec<usize> = (1..4).filter(|&i| v[i] == -1).collect();
        if (1..4).any(|i| v[i].abs() > 1) || pos.len() > 1 || neg.len() > 1 || pos.len() + neg.len() == 0 {
            return Err(Error::Parse("region atoms must be differences of two variables".into()));
        }
        let i = pos.first().copied().unwrap_or(ZERO);
        let j = neg.first().copied().unwrap_or(ZERO);
        Ok(Atom::new(i, j, c))
    };
    let negv = v.map(|x| -x);
    Ok(match op {
        "<=" => vec![le(v, c)?],
        "<" => vec![le(v, c - 1)?],
        ">=" => vec![le(negv, -c)?],
        ">" => vec![le(negv, -c - 1)?],
        "=" => vec![le(v, c)?, le(negv, -c)?],
        _ => unreachable!(),
    })
}

fn parse_region(text: &str, params: &[(&str, i64)]) -> Result<Region> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty region text".into()));
    }
    Parser { toks, pos: 0, params }.region()
}
