//! Degree-bounded ideal closures `V_{F,d}` and the last fall degree.
//!
//! `V_{F,d}` is the smallest vector space that contains the members of `F` of
//! degree at most `d` and contains `h g` whenever it contains `g` and
//! `deg(h g) <= d`. Because multiplying by a polynomial is a sequence of
//! multiplications by single variables, closing under `x_j g` suffices.
//!
//! The engine keeps every monomial of degree at most `d` in one persistent
//! table, sorted ascending in grevlex, so a column index never changes when
//! the degree grows and the largest column of a row is its leading monomial.
//! Rows are sparse, sorted by column and normalized to a leading coefficient
//! of 1. A row is inserted by top-reducing it against the existing pivots
//! with a dense accumulator; rows already present are never rewritten, which
//! makes the construction incremental in `d`.

use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner;
use crate::poly::{Monomial, Polynomial};
use crate::system::PolySystem;

/// All monomials up to some degree, in ascending grevlex order.
#[derive(Clone, Debug)]
struct MonomialTable {
    nvars: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    /// `deg_start[d]` = first index of degree `d`; one extra entry closes the last degree.
    deg_start: Vec<usize>,
    /// `mulvar[i * nvars + j]` = index of `x_j * m_i`, once that degree exists.
    mulvar: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl MonomialTable {
    fn new(nvars: usize) -> MonomialTable {
        let one = vec![0; nvars];
        let mut index = HashMap::new();
        index.insert(one.clone(), 0);
        MonomialTable { nvars, exps: vec![one], index, deg_start: vec![0, 1], mulvar: vec![ABSENT; nvars] }
    }

    fn max_degree(&self) -> usize {
        self.deg_start.len() - 2
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn degree_of(&self, col: u32) -> usize {
        self.exps[col as usize].iter().sum::<u32>() as usize
    }

    fn extend_to(&mut self, d: usize) {
        while self.max_degree() < d {
            let prev = self.deg_start[self.deg_start.len() - 2]..self.deg_start[self.deg_start.len() - 1];
            let mut fresh: Vec<Vec<u32>> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for i in prev.clone() {
                for j in 0..self.nvars {
                    let mut e = self.exps[i].clone();
                    e[j] += 1;
                    if seen.insert(e.clone()) {
                        fresh.push(e);
                    }
                }
            }
            fresh.sort_by(|a, b| crate::poly::grevlex(a, b));
            for e in fresh {
                self.index.insert(e.clone(), self.exps.len() as u32);
                self.exps.push(e);
            }
            self.deg_start.push(self.exps.len());
            self.mulvar.resize(self.exps.len() * self.nvars, ABSENT);
            for i in prev {
                for j in 0..self.nvars {
                    let mut e = self.exps[i].clone();
                    e[j] += 1;
                    self.mulvar[i * self.nvars + j] = self.index[&e];
                }
            }
        }
    }

    fn col(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m.exps()).copied()
    }
}

type Row = Vec<(u32, u32)>;

/// Incremental closure state over one polynomial system.
#[derive(Clone)]
pub struct ClosureEngine {
    field: Field,
    nvars: usize,
    inputs: Vec<Polynomial>,
    table: MonomialTable,
    rows: Vec<Row>,
    /// pivot column -> row index
    pivots: HashMap<u32, usize>,
    degree: Option<usize>,
    acc: Vec<u32>,
    in_heap: Vec<bool>,
}

impl ClosureEngine {
    pub fn new(system: &PolySystem) -> ClosureEngine {
        ClosureEngine::from_polys(system.field(), system.nvars(), system.polys().to_vec())
    }

    pub fn from_polys(field: &Field, nvars: usize, inputs: Vec<Polynomial>) -> ClosureEngine {
        ClosureEngine {
            field: field.clone(),
            nvars,
            inputs: inputs.into_iter().filter(|p| !p.is_zero()).collect(),
            table: MonomialTable::new(nvars),
            rows: Vec::new(),
            pivots: HashMap::new(),
            degree: None,
            acc: Vec::new(),
            in_heap: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Current degree bound, `None` before the first [`advance_to`](Self::advance_to).
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn lead_degree(&self, r: usize) -> usize {
        self.table.degree_of(self.rows[r].last().unwrap().0)
    }

    /// `dim (V ∩ R_e)` for the current bound.
    pub fn rank_up_to_degree(&self, e: usize) -> usize {
        (0..self.rows.len()).filter(|&r| self.lead_degree(r) <= e).count()
    }

    fn poly_to_row(&self, p: &Polynomial) -> Row {
        p.terms().map(|(m, c)| (self.table.col(m).expect("monomial within table"), c)).collect()
    }

    fn row_to_poly(&self, row: &Row) -> Polynomial {
        Polynomial::from_terms(
            &self.field,
            self.nvars,
            row.iter().map(|&(c, v)| (Monomial::new(self.table.exps[c as usize].clone()), v)),
        )
    }

    fn ensure_scratch(&mut self) {
        let n = self.table.len();
        if self.acc.len() < n {
            self.acc.resize(n, 0);
            self.in_heap.resize(n, false);
        }
    }

    /// Reduces `row` in the accumulator. With `full`, every pivot column is
    /// eliminated; otherwise reduction stops at the first non-pivot leading column.
    /// Returns the resulting sparse row (ascending, possibly empty).
    fn reduce(&mut self, row: &Row, full: bool) -> Row {
        self.ensure_scratch();
        let f = self.field.clone();
        let mut heap: BinaryHeap<u32> = BinaryHeap::new();
        let mut touched: Vec<u32> = Vec::new();
        for &(c, v) in row {
            self.acc[c as usize] = v;
            self.in_heap[c as usize] = true;
            heap.push(c);
            touched.push(c);
        }
        let mut kept: Vec<u32> = Vec::new();
        while let Some(c) = heap.pop() {
            self.in_heap[c as usize] = false;
            let v = self.acc[c as usize];
            if v == 0 {
                continue;
            }
            match self.pivots.get(&c) {
                Some(&r) => {
                    let factor = f.neg(v);
                    let prow = &self.rows[r];
                    for &(pc, pv) in &prow[..prow.len() - 1] {
                        let slot = &mut self.acc[pc as usize];
                        *slot = f.mul_add(*slot, factor, pv);
                        if !self.in_heap[pc as usize] {
                            self.in_heap[pc as usize] = true;
                            heap.push(pc);
                            touched.push(pc);
                        }
                    }
                    self.acc[c as usize] = 0;
                }
                None => {
                    kept.push(c);
                    if !full {
                        break;
                    }
                }
            }
        }
        // the leading column stops the loop early: everything still queued is tail
        if !full {
            kept.extend(heap.drain());
        }
        kept.sort_unstable();
        let mut out = Vec::with_capacity(kept.len());
        for c in kept {
            let v = self.acc[c as usize];
            if v != 0 {
                out.push((c, v));
            }
        }
        for c in touched {
            self.acc[c as usize] = 0;
            self.in_heap[c as usize] = false;
        }
        out
    }

    /// Inserts a row; returns the new row's index if the span grew.
    fn insert(&mut self, row: &Row) -> Option<usize> {
        let mut red = self.reduce(row, false);
        let &(lead, lc) = red.last()?;
        if lc != 1 {
            let inv = self.field.inv(lc).unwrap();
            for e in red.iter_mut() {
                e.1 = self.field.mul(e.1, inv);
            }
        }
        self.rows.push(red);
        self.pivots.insert(lead, self.rows.len() - 1);
        Some(self.rows.len() - 1)
    }

    fn times_var(&self, r: usize, j: usize) -> Row {
        let n = self.nvars;
        self.rows[r].iter().map(|&(c, v)| (self.table.mulvar[c as usize * n + j], v)).collect()
    }

    /// Raises the bound to `d`, returning `dim(V_d ∩ R_{d-1}) - dim V_{d-1}` for
    /// each degree passed (a positive entry marks a fall).
    pub fn advance_to(&mut self, d: usize) -> Vec<(usize, usize)> {
        let mut report = Vec::new();
        let start = self.degree.map_or(0, |x| x + 1);
        for e in start..=d {
            let fall = self.step(e);
            report.push((e, fall));
        }
        report
    }

    fn step(&mut self, d: usize) -> usize {
        self.table.extend_to(d + 1);
        // rows of degree d-1 were not multiplied at the previous bound
        let mut work: Vec<usize> = if d == 0 {
            Vec::new()
        } else {
            (0..self.rows.len()).filter(|&r| self.lead_degree(r) == d - 1).collect()
        };
        let inputs: Vec<Row> = self
            .inputs
            .iter()
            .filter(|p| p.degree() == Some(d as u32))
            .map(|p| self.poly_to_row(p))
            .collect();
        let mut fall = 0;
        let mut pending = inputs;
        loop {
            for row in pending.drain(..) {
                if let Some(new) = self.insert(&row) {
                    if self.lead_degree(new) < d {
                        fall += 1;
                        work.push(new);
                    }
                }
            }
            let Some(r) = work.pop() else { break };
            pending.extend((0..self.nvars).map(|j| self.times_var(r, j)));
        }
        self.degree = Some(d);
        fall
    }

    /// Normal form modulo the current space: zero iff `p ∈ V`.
    pub fn reduce_mod(&mut self, p: &Polynomial) -> Result<Polynomial> {
        let d = self.degree.ok_or_else(|| Error::pre("closure not computed yet"))?;
        if p.degree().is_some_and(|e| e as usize > d) {
            return Err(Error::pre(format!("degree {} exceeds the closure bound {d}", p.degree().unwrap())));
        }
        let row = self.poly_to_row(p);
        let red = self.reduce(&row, true);
        Ok(self.row_to_poly(&red))
    }

    pub fn contains(&mut self, p: &Polynomial) -> Result<bool> {
        Ok(self.reduce_mod(p)?.is_zero())
    }

    /// Reduced row echelon basis of the current space.
    pub fn basis(&mut self) -> ClosureBasis {
        let d = self.degree.unwrap_or(0);
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r].last().unwrap().0);
        let mut reduced: Vec<Row> = vec![Vec::new(); self.rows.len()];
        // ascending leads: each row's tail only meets pivots already fully reduced
        let mut engine = self.clone_shallow();
        for &r in &order {
            let row = self.rows[r].clone();
            let (lead, _) = *row.last().unwrap();
            let mut tail: Row = row[..row.len() - 1].to_vec();
            tail = engine.reduce(&tail, true);
            tail.push((lead, 1));
            engine.rows.push(tail.clone());
            engine.pivots.insert(lead, engine.rows.len() - 1);
            reduced[r] = tail;
        }
        let rows = order.iter().rev().map(|&r| self.row_to_poly(&reduced[r])).collect();
        ClosureBasis { field: self.field.clone(), nvars: self.nvars, degree: d, rows }
    }

    fn clone_shallow(&self) -> ClosureEngine {
        ClosureEngine {
            field: self.field.clone(),
            nvars: self.nvars,
            inputs: Vec::new(),
            table: self.table.clone(),
            rows: Vec::new(),
            pivots: HashMap::new(),
            degree: self.degree,
            acc: Vec::new(),
            in_heap: Vec::new(),
        }
    }
}

/// A reduced row echelon basis of `V_{F,d}`, leading monomials strictly decreasing.
#[derive(Clone, Debug)]
pub struct ClosureBasis {
    field: Field,
    nvars: usize,
    degree: usize,
    rows: Vec<Polynomial>,
}

impl ClosureBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Polynomial] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Normal form of `f`; zero iff `f` lies in the span.
    pub fn reduce_mod(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.degree().is_some_and(|e| e as usize > self.degree) {
            return Err(Error::pre(format!(
                "degree {} exceeds the closure bound {}",
                f.degree().unwrap(),
                self.degree
            )));
        }
        let mut r = f.clone();
        // rows are fully reduced with distinct leads, so one pass suffices
        for row in &self.rows {
            let (lm, _) = row.leading_term().unwrap();
            let c = r.coeff(lm);
            if c != 0 {
                r = r.sub(&row.scale(c));
            }
        }
        Ok(r)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce_mod(f)?.is_zero())
    }

    /// Basis of the members of degree at most `e`.
    pub fn up_to_degree(&self, e: u32) -> Vec<Polynomial> {
        self.rows.iter().filter(|r| r.degree().unwrap() <= e).cloned().collect()
    }

    /// Basis of `{f ∈ V : deg f <= 1}`.
    pub fn linear_subspace(&self) -> Vec<Polynomial> {
        self.up_to_degree(1)
    }

    /// Basis of `V ∩ k[x_i : keep[i]]`, as polynomials in the full ring.
    pub fn restrict_to_vars(&self, keep: &[bool]) -> Vec<Polynomial> {
        assert_eq!(keep.len(), self.nvars);
        let uses_dropped = |m: &Monomial| m.exps().iter().zip(keep).any(|(&e, &k)| e > 0 && !k);
        // Re-echelonize with every monomial touching a dropped variable ranked
        // above all others; rows whose lead avoids them live in the subring.
        let mut cols: Vec<Monomial> = self.rows.iter().flat_map(|r| r.terms().map(|(m, _)| m.clone())).collect();
        cols.sort();
        cols.dedup();
        cols.sort_by_key(|m| uses_dropped(m));
        let idx: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut dense: Vec<Vec<u32>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![0; cols.len()];
                for (m, c) in r.terms() {
                    v[cols.len() - 1 - idx[m]] = c;
                }
                v
            })
            .collect();
        let pivots = crate::linear::rref(&self.field, &mut dense);
        let mut out = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            let m = &cols[cols.len() - 1 - pc];
            if uses_dropped(m) {
                continue;
            }
            let terms = dense[i]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| (cols[cols.len() - 1 - j].clone(), c));
            out.push(Polynomial::from_terms(&self.field, self.nvars, terms.collect::<Vec<_>>()));
        }
        out.sort_by(|a, b| b.leading_term().unwrap().0.cmp(a.leading_term().unwrap().0));
        out
    }
}

/// `V_{F,d}` as a reduced basis.
pub fn compute_closure(system: &PolySystem, d: usize) -> ClosureBasis {
    let mut e = ClosureEngine::new(system);
    e.advance_to(d);
    e.basis()
}

/// Outcome of a last-fall-degree computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastFallReport {
    pub d_f: usize,
    /// Every degree `d` with `V_{F,d} ∩ R_{d-1} != V_{F,d-1}`.
    pub fall_degrees: Vec<usize>,
    /// Largest degree for which the closure was computed.
    pub stabilization_degree: usize,
    /// A Gröbner basis of the ideal lies in `V_{F, stabilization_degree}`, so no later fall exists.
    pub certified: bool,
}

impl LastFallReport {
    pub fn summary(&self) -> String {
        format!("d_F={} certified={}", self.d_f, self.certified)
    }
}

/// Computes closures for `d = 0, 1, ...` up to `cap`, stopping at the first
/// degree where an independently computed Gröbner basis lies in the closure.
pub fn last_fall_degree(system: &PolySystem, cap: usize) -> Result<LastFallReport> {
    let (report, _) = last_fall_degree_with_engine(system, cap)?;
    Ok(report)
}

/// As [`last_fall_degree`], also returning the engine at the final degree.
pub fn last_fall_degree_with_engine(system: &PolySystem, cap: usize) -> Result<(LastFallReport, ClosureEngine)> {
    if (system.degree() as usize) > cap {
        return Err(Error::pre(format!("cap {cap} is below the system degree {}", system.degree())));
    }
    let gb = groebner::groebner_basis(system.polys())?;
    let gb_degree = gb.iter().filter_map(|g| g.degree()).max().unwrap_or(0) as usize;
    let mut engine = ClosureEngine::new(system);
    let mut falls = Vec::new();
    let start = system.degree() as usize;
    for d in 0..=cap {
        for (e, fall) in engine.advance_to(d) {
            if fall > 0 && e > 0 {
                falls.push(e);
            }
        }
        if d >= start.max(gb_degree) && gb.iter().all(|g| engine.contains(g).unwrap()) {
            let report = LastFallReport {
                d_f: falls.last().copied().unwrap_or(0),
                fall_degrees: falls,
                stabilization_degree: d,
                certified: true,
            };
            return Ok((report, engine));
        }
    }
    let report = LastFallReport {
        d_f: falls.last().copied().unwrap_or(0),
        fall_degrees: falls,
        stabilization_degree: cap,
        certified: false,
    };
    Ok((report, engine))
}
