//! Ω⁺ combinatorics, submodule bases, simple subquotients and Loewy layers.
//!
//! Every submodule of a block is spanned by basis tableaux: the
//! Gelfand-Tsetlin subalgebra separates them, and a derivative tableau
//! generates its regular partner. The submodule generated by a tableau is
//! therefore spanned by everything reachable from it along nonzero matrix
//! coefficients of `E12, E21, E23, E32`, plus the step `DT(w) → T(τw)`.
//!
//! Lattice points are grouped into classes: sign patterns of the integrality
//! atoms that decide Ω⁺, refined by the sign of `m − n` on singular blocks.
//! The class graph is sampled exactly at points next to every class
//! boundary, and its strongly connected components are the simple
//! subquotients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Signed;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::action::act_unit;
use crate::error::{Error, Result};
use crate::region::{self, Atom, Cell, Region, K, M, N, ZERO};
use crate::scalar::{self, Scalar};
use crate::tableau::{BlockSpec, Kind, Shift, Tableau};

/// The eight triples `(r,s,u)` that may lie in Ω⁺, in bit order.
pub const OMEGA_TRIPLES: [(u8, u8, u8); 8] =
    [(2, 1, 1), (2, 2, 1), (3, 1, 1), (3, 1, 2), (3, 2, 1), (3, 2, 2), (3, 3, 1), (3, 3, 2)];

/// A subset of [`OMEGA_TRIPLES`]: `(r,s,u)` is present when
/// `w_rs − w_{r−1,u}` is a nonnegative integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaSet(u8);

impl OmegaSet {
    pub fn empty() -> Self {
        OmegaSet(0)
    }

    pub fn from_triples(ts: &[(u8, u8, u8)]) -> Self {
        let mut o = OmegaSet(0);
        for t in ts {
            o = o.with(*t);
        }
        o
    }

    fn bit(t: (u8, u8, u8)) -> u8 {
        let i = OMEGA_TRIPLES.iter().position(|x| *x == t).expect("valid Ω⁺ triple");
        1 << i
    }

    pub fn with(self, t: (u8, u8, u8)) -> Self {
        OmegaSet(self.0 | Self::bit(t))
    }

    pub fn without(self, t: (u8, u8, u8)) -> Self {
        OmegaSet(self.0 & !Self::bit(t))
    }

    pub fn contains(self, t: (u8, u8, u8)) -> bool {
        self.0 & Self::bit(t) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, o: OmegaSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn triples(self) -> Vec<(u8, u8, u8)> {
        OMEGA_TRIPLES.iter().copied().filter(|t| self.contains(*t)).collect()
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.triples().iter().map(|(r, s, u)| format!("({r},{s},{u})")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for OmegaSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.triples().iter().map(|(r, s, u)| [*r, *s, *u]))
    }
}

fn nonneg_int(d: &Scalar) -> bool {
    d.is_integer() && !d.is_negative()
}

/// Ω⁺ at the entries of a lattice point.
fn omega_at(block: &BlockSpec, s: Shift) -> OmegaSet {
    let e = block.entries_of(s);
    let mut o = OmegaSet::empty();
    for (u, idx) in [(1u8, 3usize), (2, 4)] {
        if nonneg_int(&(&e[idx] - &e[5])) {
            o = o.with((2, u, 1));
        }
        for (si, top) in e[..3].iter().enumerate() {
            if nonneg_int(&(top - &e[idx])) {
                o = o.with((3, si as u8 + 1, u));
            }
        }
    }
    o
}

/// Ω⁺ of a tableau; for a derivative tableau this is Λ⁺, the Ω⁺ of the
/// τ-swapped shift.
pub fn omega_plus(block: &BlockSpec, t: &Tableau) -> OmegaSet {
    let s = if t.kind == Kind::Derivative { t.shift.tau() } else { t.shift };
    omega_at(block, s)
}

/// Tableaux whose successors may lose one element of Ω⁺.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionType {
    None,
    TypeI,
    TypeII1,
    TypeII2,
    TypeII3,
}

impl fmt::Display for ExceptionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExceptionType::None => "none",
            ExceptionType::TypeI => "I",
            ExceptionType::TypeII1 => "II1",
            ExceptionType::TypeII2 => "II2",
            ExceptionType::TypeII3 => "II3",
        };
        f.write_str(s)
    }
}

/// Both exceptional shapes of a canonical singular tableau: whether it has
/// type I, the index `i` of type II, and the successors with one fewer Ω⁺
/// element.
struct Exceptional {
    type_one: bool,
    type_two: Option<u8>,
    images: Vec<Shift>,
}

fn exceptional(block: &BlockSpec, t: &Tableau) -> Exceptional {
    let s = t.shift;
    let e = block.entries_of(s);
    let (x, low) = (&e[3], &e[4]);
    let mut out = Exceptional { type_one: false, type_two: None, images: Vec::new() };
    // Row two must read (x, x − t) with t ≥ 0, i.e. a derivative or critical tableau.
    if s.m < s.n {
        return out;
    }
    let critical = s.m == s.n;
    debug_assert!(critical || x > low);
    if &e[5] == x {
        out.type_one = true;
        if critical {
            out.images.push(Shift::new(s.m - 1, s.n, s.k));
        } else {
            out.images.push(Shift::new(s.n, s.m, s.k + 1));
            out.images.push(Shift::new(s.n, s.m - 1, s.k));
        }
    }
    let hits: Vec<usize> = (0..3).filter(|&i| &e[i] == x).collect();
    if hits.len() == 1 {
        out.type_two = Some(hits[0] as u8 + 1);
        if critical {
            out.images.push(Shift::new(s.m, s.n + 1, s.k));
        } else {
            out.images.push(Shift::new(s.n, s.m + 1, s.k));
        }
    }
    out
}

/// Shapes absent from the printed list: a derivative tableau `DT(x, x−t | ·)`
/// whose smaller row-two entry `x − t` equals `l11` (type I, losing
/// `(2,1,1)`) or exactly one top entry `v3i` (type II, losing `(3,i,1)`).
/// The derivative part of the action reaches a regular neighbour of
/// `T(τw)` with one fewer Λ⁺ element.
fn mirrored(block: &BlockSpec, t: &Tableau) -> Exceptional {
    let s = t.shift;
    let mut out = Exceptional { type_one: false, type_two: None, images: Vec::new() };
    if t.kind != Kind::Derivative || s.m <= s.n {
        return out;
    }
    let e = block.entries_of(s);
    let small = &e[4];
    let ts = s.tau();
    if &e[5] == small {
        out.type_one = true;
        out.images.push(Shift::new(ts.m, ts.n, ts.k + 1));
        out.images.push(Shift::new(ts.m - 1, ts.n, ts.k));
    }
    let hits: Vec<usize> = (0..3).filter(|&i| &e[i] == small).collect();
    if hits.len() == 1 {
        out.type_two = Some(hits[0] as u8 + 1);
        out.images.push(Shift::new(ts.m + 1, ts.n, ts.k));
    }
    out
}

fn classify(ex: &Exceptional) -> ExceptionType {
    match (ex.type_one, ex.type_two) {
        (true, _) => ExceptionType::TypeI,
        (false, Some(1)) => ExceptionType::TypeII1,
        (false, Some(2)) => ExceptionType::TypeII2,
        (false, Some(3)) => ExceptionType::TypeII3,
        _ => ExceptionType::None,
    }
}

/// Which exceptional shape a singular tableau has; type I takes precedence
/// when both apply.
pub fn exception_type(block: &BlockSpec, t: &Tableau) -> Result<ExceptionType> {
    if !block.is_singular() {
        return Err(Error::WrongBlockKind { expected: "singular" });
    }
    Ok(classify(&exceptional(block, t)))
}

/// Exceptional shape of a derivative tableau whose smaller row-two entry
/// meets `l11` or a top entry; see [`exception_type`] for the printed shapes.
pub fn derivative_exception_type(block: &BlockSpec, t: &Tableau) -> Result<ExceptionType> {
    if !block.is_singular() {
        return Err(Error::WrongBlockKind { expected: "singular" });
    }
    Ok(classify(&mirrored(block, t)))
}

/// Integrality atoms of a block: `m ≤ v3i − v21`, `n ≤ v3i − v22`,
/// `k − m ≤ v21 − v11`, `k − n ≤ v22 − v11` whenever the difference is an
/// integer, and both signs of `m − n` on singular blocks.
pub fn block_atoms(block: &BlockSpec) -> Vec<Atom> {
    let b = block.base();
    let mut out = Vec::new();
    for (idx, var) in [(3usize, M), (4, N)] {
        for top in &b[..3] {
            if let Some(d) = scalar::as_int(&(top - &b[idx])) {
                out.push(Atom::new(var, ZERO, d));
            }
        }
        if let Some(d) = scalar::as_int(&(&b[idx] - &b[5])) {
            out.push(Atom::new(K, var, d));
        }
    }
    if block.is_singular() {
        out.push(Atom::new(M, N, 0));
        out.push(Atom::new(N, M, 0));
    }
    out.sort_by_key(|a| (a.i, a.j, a.c));
    out.dedup();
    out
}

/// One sign pattern of the block atoms.
#[derive(Clone, Debug)]
pub struct Class {
    pub mask: u32,
    pub cell: Cell,
    /// A point of the class close to the origin.
    pub rep: Shift,
    /// Ω⁺ (Λ⁺ on singular blocks), constant on the class.
    pub omega: OmegaSet,
    /// Kind of the canonical tableaux of the class.
    pub kind: Kind,
    pub critical: bool,
}

/// The graph of atom classes of a block under the action.
#[derive(Clone, Debug)]
pub struct ClassGraph {
    block: BlockSpec,
    atoms: Vec<Atom>,
    classes: Vec<Class>,
    lookup: HashMap<u32, usize>,
    succ: Vec<BTreeSet<usize>>,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
}

const SIMPLE_UNITS: [(u8, u8); 4] = [(1, 2), (2, 1), (2, 3), (3, 2)];

const STEPS: [Shift; 6] = [
    Shift::new(1, 0, 0),
    Shift::new(-1, 0, 0),
    Shift::new(0, 1, 0),
    Shift::new(0, -1, 0),
    Shift::new(0, 0, 1),
    Shift::new(0, 0, -1),
];

impl ClassGraph {
    /// Classes only, without sampling edges.
    pub fn classes_of(block: &BlockSpec) -> ClassGraph {
        let atoms = block_atoms(block);
        let mut classes = Vec::new();
        let mut lookup = HashMap::new();
        for mask in 0u32..(1 << atoms.len()) {
            let cell = Cell::from_atoms(
                atoms.iter().enumerate().map(|(i, a)| if mask >> i & 1 == 1 { *a } else { a.negate() }),
            );
            let Some(rep) = cell.sample_near(Shift::ZERO) else { continue };
            let t = block.tableau_at(rep);
            lookup.insert(mask, classes.len());
            classes.push(Class {
                mask,
                cell: cell.minimized(),
                rep,
                omega: omega_plus(block, &t),
                kind: t.kind,
                critical: block.is_singular() && rep.m == rep.n,
            });
        }
        let n = classes.len();
        ClassGraph {
            block: block.clone(),
            atoms,
            classes,
            lookup,
            succ: vec![BTreeSet::new(); n],
            component: (0..n).collect(),
            components: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Classes plus edges sampled from the action, and their components.
    pub fn build(block: &BlockSpec) -> Result<ClassGraph> {
        let mut g = Self::classes_of(block);
        let pts = g.sample_points();
        let edges: Vec<(usize, usize)> = pts
            .par_iter()
            .map(|p| g.edges_from(*p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for (a, b) in edges {
            if a != b {
                g.succ[a].insert(b);
            }
        }
        if block.is_singular() {
            for a in 0..g.classes.len() {
                if g.classes[a].kind == Kind::Derivative {
                    let b = g.class_of(g.classes[a].rep.tau());
                    g.succ[a].insert(b);
                }
            }
        }
        g.find_components();
        Ok(g)
    }

    /// Points next to every pair of classes that a unit step can cross,
    /// pulled toward a spread of targets so that isolated zeros of a
    /// coefficient cannot hide an edge.
    fn sample_points(&self) -> BTreeSet<Shift> {
        let targets: Vec<Shift> = [-6, 0, 6]
            .iter()
            .flat_map(|&m| [-6, 0, 6].iter().flat_map(move |&n| [-6, 0, 6].iter().map(move |&k| Shift::new(m, n, k))))
            .collect();
        let jobs: Vec<(usize, usize, Shift)> = (0..self.classes.len())
            .flat_map(|a| (0..self.classes.len()).filter(move |b| *b != a).flat_map(move |b| STEPS.iter().map(move |d| (a, b, *d))))
            .collect();
        let found: Vec<Vec<Shift>> = jobs
            .par_iter()
            .map(|&(a, b, d)| {
                let cell = self.classes[a].cell.intersect(&self.classes[b].cell.translate(-d));
                if cell.is_empty() {
                    return Vec::new();
                }
                targets.iter().filter_map(|t| cell.sample_near(*t)).collect()
            })
            .collect();
        let mut pts: BTreeSet<Shift> = found.into_iter().flatten().collect();
        pts.extend(self.classes.iter().map(|c| c.rep));
        pts
    }

    fn edges_from(&self, p: Shift) -> Result<Vec<(usize, usize)>> {
        let a = self.class_of(p);
        let t = self.block.tableau_at(p);
        let mut out = Vec::new();
        for (i, j) in SIMPLE_UNITS {
            for (q, _) in act_unit(&self.block, i, j, &t)?.iter() {
                out.push((a, self.class_of(q.shift)));
            }
        }
        Ok(out)
    }

    fn find_components(&mut self) {
        let mut g = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..self.classes.len()).map(|i| g.add_node(i)).collect();
        for (a, bs) in self.succ.iter().enumerate() {
            for b in bs {
                g.add_edge(nodes[a], nodes[*b], ());
            }
        }
        let mut comps: Vec<Vec<usize>> =
            tarjan_scc(&g).into_iter().map(|c| c.into_iter().map(|n| g[n]).collect()).collect();
        for c in comps.iter_mut() {
            c.sort();
        }
        comps.sort();
        let mut component = vec![0; self.classes.len()];
        for (ci, c) in comps.iter().enumerate() {
            for &x in c {
                component[x] = ci;
            }
        }
        self.component = component;
        self.components = comps;
    }

    pub fn block(&self) -> &BlockSpec {
        &self.block
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn successors(&self, c: usize) -> &BTreeSet<usize> {
        &self.succ[c]
    }

    /// Class index of a lattice point.
    pub fn class_of(&self, s: Shift) -> usize {
        let p = region::point(s);
        let mask = self.atoms.iter().enumerate().fold(0u32, |acc, (i, a)| acc | (a.holds(p) as u32) << i);
        self.lookup[&mask]
    }

    /// Strongly connected components, each a sorted list of classes.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, class: usize) -> usize {
        self.component[class]
    }

    /// Union of the cells of a set of classes.
    pub fn region_of<'a>(&self, classes: impl IntoIterator<Item = &'a usize>) -> Region {
        Region::from_cells(classes.into_iter().map(|c| self.classes[*c].cell.clone())).simplify()
    }

    /// Classes reachable from `start` without leaving `within`.
    pub fn reach(&self, start: usize, within: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &b in &self.succ[a] {
                if within.contains(&b) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// Basis of the submodule generated by a tableau, from the action.
    pub fn generated(&self, t: &Tableau) -> Region {
        let all: BTreeSet<usize> = (0..self.classes.len()).collect();
        self.region_of(&self.reach(self.class_of(t.shift), &all))
    }

    /// Classes whose cells lie in `r`; errors unless they cover `r`.
    pub fn classes_in(&self, r: &Region) -> Result<BTreeSet<usize>> {
        let inside: BTreeSet<usize> = (0..self.classes.len())
            .filter(|&c| Region::cell(self.classes[c].cell.clone()).is_subset(r))
            .collect();
        if !self.region_of(&inside).set_eq(r) {
            return Err(Error::Invariant(format!("{r} is not a union of classes")));
        }
        Ok(inside)
    }

    /// Socle of the subquotient spanned by `r`: the union of the minimal
    /// reach-closed sets of classes inside `r`.
    pub fn socle_of(&self, r: &Region) -> Result<Region> {
        let inside = self.classes_in(r)?;
        let reach: BTreeMap<usize, BTreeSet<usize>> = inside.iter().map(|&a| (a, self.reach(a, &inside))).collect();
        let sinks: Vec<usize> =
            inside.iter().copied().filter(|a| reach[a].iter().all(|b| reach[b].contains(a))).collect();
        Ok(self.region_of(&sinks))
    }

    /// Socle layer of every component: sinks are layer 1, otherwise one more
    /// than the deepest successor.
    pub fn socle_layers(&self) -> Vec<usize> {
        let nc = self.components.len();
        let mut csucc = vec![BTreeSet::new(); nc];
        for (a, bs) in self.succ.iter().enumerate() {
            for b in bs {
                let (ca, cb) = (self.component[a], self.component[*b]);
                if ca != cb {
                    csucc[ca].insert(cb);
                }
            }
        }
        let mut layer = vec![0usize; nc];
        fn visit(c: usize, csucc: &[BTreeSet<usize>], layer: &mut [usize]) -> usize {
            if layer[c] == 0 {
                let deepest = csucc[c].iter().map(|d| visit(*d, csucc, layer)).max().unwrap_or(0);
                layer[c] = deepest + 1;
            }
            layer[c]
        }
        for c in 0..nc {
            visit(c, &csucc, &mut layer);
        }
        layer
    }
}

/// One simple subquotient of a block.
#[derive(Clone, Debug, Serialize)]
pub struct Subquotient {
    #[serde(serialize_with = "crate::ser::display")]
    pub region: Region,
    /// Loewy layer, socle first, starting at 1.
    pub layer: usize,
    #[serde(serialize_with = "crate::ser::display")]
    pub anchor: Tableau,
    pub omega: OmegaSet,
    pub label: Option<String>,
}

/// Simple subquotients in emission order.
#[derive(Clone, Debug, Serialize)]
pub struct SubquotientReport {
    pub subquotients: Vec<Subquotient>,
    /// Ω⁺-maximal tableaux whose generated submodule in the quotient was not
    /// simple; a simple submodule below them was emitted instead.
    #[serde(serialize_with = "crate::ser::display_list")]
    pub fallbacks: Vec<Tableau>,
}

impl SubquotientReport {
    pub fn len(&self) -> usize {
        self.subquotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subquotients.is_empty()
    }

    /// Subquotient indices grouped by Loewy layer.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let depth = self.subquotients.iter().map(|s| s.layer).max().unwrap_or(0);
        (1..=depth)
            .map(|l| (0..self.len()).filter(|i| self.subquotients[*i].layer == l).collect())
            .collect()
    }
}

fn require_generic(block: &BlockSpec) -> Result<()> {
    if block.is_singular() {
        Err(Error::WrongBlockKind { expected: "generic" })
    } else {
        Ok(())
    }
}

/// `{w' : Ω⁺(w') = Ω⁺(t)}`, the basis of the simple subquotient containing `t`.
pub fn simple_basis_generic(block: &BlockSpec, t: &Tableau) -> Result<Region> {
    require_generic(block)?;
    let g = ClassGraph::classes_of(block);
    let o = omega_plus(block, t);
    let cls: Vec<usize> = (0..g.classes.len()).filter(|c| g.classes[*c].omega == o).collect();
    Ok(g.region_of(&cls))
}

/// Layers `{|Ω⁺| = i}` for `i` from the largest value down, socle first.
pub fn loewy_layers_generic(block: &BlockSpec) -> Result<Vec<Region>> {
    require_generic(block)?;
    let g = ClassGraph::classes_of(block);
    let mut by_size: BTreeMap<std::cmp::Reverse<usize>, Vec<usize>> = BTreeMap::new();
    for (i, c) in g.classes.iter().enumerate() {
        by_size.entry(std::cmp::Reverse(c.omega.len())).or_default().push(i);
    }
    Ok(by_size.values().map(|cls| g.region_of(cls)).collect())
}

/// Basis of `U·t` from the combinatorial description: `{Ω⁺(t) ⊆ Ω⁺(w')}`
/// on generic blocks, and on singular blocks the union of `Â(w')` over
/// `w' ∈ 𝒩(t)`, where exceptional tableaux, printed or mirrored, also
/// contribute `𝒩` of their successor with one fewer Ω⁺ element. The union is
/// closed under repetition, since a successor's `𝒩` may hold further
/// exceptional tableaux.
pub fn generated_basis(block: &BlockSpec, t: &Tableau) -> Result<Region> {
    block.check_vector(&crate::tableau::SparseVector::basis(*t))?;
    let g = ClassGraph::classes_of(block);
    let start = g.class_of(t.shift);
    if !block.is_singular() {
        let o = g.classes[start].omega;
        let cls: Vec<usize> = (0..g.classes.len()).filter(|c| o.is_subset(g.classes[*c].omega)).collect();
        return Ok(g.region_of(&cls));
    }
    // Exceptional tableaux sit on planes inside classes; a window wider than
    // every atom constant meets each such plane in every class it touches.
    let r = g.atoms.iter().map(|a| a.c.abs()).max().unwrap_or(0) + 3;
    let mut images: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for p in region::window(r) {
        let t = block.tableau_at(p);
        for q in exceptional(block, &t).images.into_iter().chain(mirrored(block, &t).images) {
            images.entry(g.class_of(p)).or_default().insert(g.class_of(q));
        }
    }
    // Close `𝒩` of the start under `𝒩` and exceptional successors.
    let mut out = singular_n(&g, start);
    let mut todo: Vec<usize> = out.iter().copied().collect();
    while let Some(c) = todo.pop() {
        let mut next = singular_n(&g, c);
        next.extend(images.get(&c).into_iter().flatten().copied());
        for d in next {
            if out.insert(d) {
                todo.push(d);
            }
        }
    }
    Ok(g.region_of(&out))
}

/// `𝒩` of any tableau in class `c` of a singular block.
fn singular_n(g: &ClassGraph, c: usize) -> BTreeSet<usize> {
    let a_of = |c: usize| -> BTreeSet<usize> {
        let o = g.classes[c].omega;
        (0..g.classes.len()).filter(|d| o.is_subset(g.classes[*d].omega)).collect()
    };
    let cl = &g.classes[c];
    let a = a_of(c);
    if cl.kind == Kind::Regular && !cl.critical {
        let mut out: BTreeSet<usize> = a.iter().copied().filter(|d| g.classes[*d].kind == Kind::Regular).collect();
        for &d in &a {
            if g.classes[d].critical {
                out.extend(a_of(d));
            }
        }
        out
    } else {
        a
    }
}

/// Number of points of `anchor + i·(1,−1,0)` inside a region, or `None`
/// when infinite.
pub fn weight_multiplicity(region: &Region, anchor: Shift) -> Result<Option<u64>> {
    if !region.contains(anchor) {
        return Err(Error::AnchorOutside);
    }
    Ok(line_count(region, anchor))
}

/// Number of points of `anchor + i·(1,−1,0)` inside a region for any anchor,
/// zero when the line misses it, `None` when infinite.
pub fn line_count(region: &Region, anchor: Shift) -> Option<u64> {
    // Each cell meets the line in an interval of i.
    let mut intervals: Vec<(Option<i64>, Option<i64>)> = Vec::new();
    for cell in region.cells() {
        let (mut lo, mut hi): (Option<i64>, Option<i64>) = (None, None);
        let p = region::point(anchor);
        let dir = [0i64, 1, -1, 0];
        let mut empty = false;
        for a in cell.atoms() {
            // (p_i + i·dir_i) − (p_j + i·dir_j) ≤ c  ⇔  i·(dir_i − dir_j) ≤ c − p_i + p_j
            let coef = dir[a.i] - dir[a.j];
            let rhs = a.c - p[a.i] + p[a.j];
            match coef.signum() {
                0 => empty |= rhs < 0,
                1 => hi = Some(hi.map_or(rhs.div_euclid(coef), |h: i64| h.min(rhs.div_euclid(coef)))),
                _ => {
                    let b = -((rhs).div_euclid(-coef));
                    lo = Some(lo.map_or(b, |l: i64| l.max(b)));
                }
            }
        }
        if empty || matches!((lo, hi), (Some(l), Some(h)) if l > h) {
            continue;
        }
        intervals.push((lo, hi));
    }
    if intervals.iter().any(|(l, h)| l.is_none() || h.is_none()) {
        return None;
    }
    let mut iv: Vec<(i64, i64)> = intervals.into_iter().map(|(l, h)| (l.unwrap(), h.unwrap())).collect();
    iv.sort();
    let mut count = 0u64;
    let mut cur: Option<(i64, i64)> = None;
    for (l, h) in iv {
        cur = match cur {
            Some((cl, ch)) if l <= ch + 1 => Some((cl, ch.max(h))),
            Some((cl, ch)) => {
                count += (ch - cl + 1) as u64;
                Some((l, h))
            }
            None => Some((l, h)),
        };
    }
    if let Some((cl, ch)) = cur {
        count += (ch - cl + 1) as u64;
    }
    Some(count)
}

/// Decomposes a block into simple subquotients.
///
/// Generic blocks are partitioned into Ω⁺-equality classes, ordered by
/// decreasing `|Ω⁺|`. Singular blocks repeat: take a Λ⁺-maximal tableau
/// (regular if possible), emit the submodule it generates in the current
/// quotient, and pass to the quotient. When that submodule is not simple a
/// simple submodule inside it is emitted and the tableau is recorded in
/// `fallbacks`.
pub fn decompose_block(block: &BlockSpec) -> Result<SubquotientReport> {
    if !block.is_singular() {
        return decompose_generic(block);
    }
    let g = ClassGraph::build(block)?;
    let layer = g.socle_layers();
    let mut remaining: BTreeSet<usize> = (0..g.classes.len()).collect();
    let mut out = Vec::new();
    let mut fallbacks = Vec::new();
    let rank = |c: &usize| {
        let cl = &g.classes[*c];
        (std::cmp::Reverse(cl.omega.len()), cl.kind == Kind::Derivative, cl.rep)
    };
    while !remaining.is_empty() {
        let pick = *remaining.iter().min_by_key(|c| rank(c)).expect("nonempty");
        let mut reach = g.reach(pick, &remaining);
        let mut anchor = pick;
        if reach.iter().any(|c| g.component_of(*c) != g.component_of(pick)) {
            // The generated submodule is not simple; its socle components
            // are simple submodules of the quotient.
            let sink = |c: &usize| g.reach(*c, &remaining).iter().all(|d| g.component_of(*d) == g.component_of(*c));
            anchor = *reach.iter().filter(|c| sink(c)).min_by_key(|c| rank(c)).ok_or_else(|| {
                Error::Invariant(format!("no simple submodule below {}", block.tableau_at(g.classes[pick].rep)))
            })?;
            fallbacks.push(block.tableau_at(g.classes[pick].rep));
            reach = g.reach(anchor, &remaining);
        }
        out.push(Subquotient {
            region: g.region_of(&reach),
            layer: layer[g.component_of(anchor)],
            anchor: block.tableau_at(g.classes[anchor].rep),
            omega: g.classes[anchor].omega,
            label: None,
        });
        for c in &reach {
            remaining.remove(c);
        }
    }
    Ok(SubquotientReport { subquotients: out, fallbacks })
}

fn decompose_generic(block: &BlockSpec) -> Result<SubquotientReport> {
    let g = ClassGraph::classes_of(block);
    let mut groups: BTreeMap<OmegaSet, Vec<usize>> = BTreeMap::new();
    for (i, c) in g.classes.iter().enumerate() {
        groups.entry(c.omega).or_default().push(i);
    }
    let sizes: BTreeSet<std::cmp::Reverse<usize>> = groups.keys().map(|o| std::cmp::Reverse(o.len())).collect();
    let layer_of = |o: &OmegaSet| sizes.iter().position(|s| s.0 == o.len()).expect("present") + 1;
    let mut out: Vec<Subquotient> = groups
        .iter()
        .map(|(o, cls)| {
            let anchor = cls.iter().map(|c| g.classes[*c].rep).min_by_key(|r| (r.m.abs() + r.n.abs() + r.k.abs(), *r));
            Subquotient {
                region: g.region_of(cls),
                layer: layer_of(o),
                anchor: block.tableau_at(anchor.expect("nonempty group")),
                omega: *o,
                label: None,
            }
        })
        .collect();
    out.sort_by_key(|s| (s.layer, s.anchor));
    Ok(SubquotientReport { subquotients: out, fallbacks: Vec::new() })
}
