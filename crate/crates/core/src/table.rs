//! Dense tables of symmetric Taylor coefficients and the partition-sum
//! (higher-order chain rule) kernel shared by group multiplication, the
//! group action and chart changes.
//!
//! A [`JetTable`] with `vars` source variables, `comps` components and
//! order `r` stores `D_I f^c` at a point for every component `c` and every
//! canonical `I` with `|I| <= r`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{JetError, Result};
use crate::index::{all_set_partitions, enumerate_multiindices, Layout, MultiIndex, SetPartition};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct JetTable<S> {
    comps: usize,
    layout: Layout,
    data: Vec<S>,
}

impl<S: Scalar> JetTable<S> {
    pub fn zeros(vars: usize, comps: usize, order: usize) -> Self {
        let layout = Layout::new(vars, order);
        JetTable {
            comps,
            layout,
            data: alloc::vec![S::zero(); comps * layout.len()],
        }
    }

    pub fn from_fn(
        vars: usize,
        comps: usize,
        order: usize,
        mut f: impl FnMut(usize, &MultiIndex) -> S,
    ) -> Self {
        let layout = Layout::new(vars, order);
        let indices = layout.indices();
        let mut data = Vec::with_capacity(comps * indices.len());
        for c in 0..comps {
            for index in &indices {
                data.push(f(c, index));
            }
        }
        JetTable {
            comps,
            layout,
            data,
        }
    }

    pub fn vars(&self) -> usize {
        self.layout.vars
    }

    pub fn comps(&self) -> usize {
        self.comps
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn get(&self, comp: usize, index: &MultiIndex) -> &S {
        &self.data[comp * self.layout.len() + self.layout.offset(index)]
    }

    pub fn get_checked(&self, comp: usize, index: &MultiIndex) -> Option<&S> {
        (comp < self.comps && self.layout.contains(index)).then(|| self.get(comp, index))
    }

    pub fn set(&mut self, comp: usize, index: &MultiIndex, value: S) {
        let pos = comp * self.layout.len() + self.layout.offset(index);
        self.data[pos] = value;
    }

    /// First-order entry `D_i f^c`.
    pub fn first(&self, comp: usize, i: usize) -> &S {
        &self.data[comp * self.layout.len() + 1 + i]
    }

    /// Coefficients of one component in layout order.
    pub fn component(&self, comp: usize) -> &[S] {
        let len = self.layout.len();
        &self.data[comp * len..(comp + 1) * len]
    }

    pub fn values(&self) -> &[S] {
        &self.data
    }

    /// All `(component, index, value)` triples in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, MultiIndex, &S)> + '_ {
        let indices = self.layout.indices();
        let len = indices.len();
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / len, indices[k % len].clone(), v))
    }

    /// The square matrix `M[c][i] = D_i f^{rows[c]}`.
    pub fn first_order_block(&self, rows: &[usize]) -> Matrix<S> {
        Matrix::from_fn(rows.len(), |c, i| self.first(rows[c], i).clone())
    }

    /// Drops every coefficient of order above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(JetError::OrderMismatch(format!(
                "cannot truncate order {} to {order}",
                self.order()
            )));
        }
        let mut out = Self::zeros(self.vars(), self.comps, order);
        let new_len = out.layout.len();
        let old_len = self.layout.len();
        for c in 0..self.comps {
            out.data[c * new_len..(c + 1) * new_len]
                .clone_from_slice(&self.data[c * old_len..c * old_len + new_len]);
        }
        Ok(out)
    }

    /// Keeps the listed components, in the listed order.
    pub fn select_components(&self, comps: &[usize]) -> Self {
        let len = self.layout.len();
        let mut data = Vec::with_capacity(comps.len() * len);
        for &c in comps {
            data.extend_from_slice(self.component(c));
        }
        JetTable {
            comps: comps.len(),
            layout: self.layout,
            data,
        }
    }

    /// Stacks the components of `self` and `other` (same vars and order).
    pub fn stack(&self, other: &Self) -> Self {
        debug_assert_eq!(self.layout, other.layout);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        JetTable {
            comps: self.comps + other.comps,
            layout: self.layout,
            data,
        }
    }

    pub fn map(&self, f: impl Fn(usize, &MultiIndex, &S) -> S) -> Self {
        let indices = self.layout.indices();
        let len = indices.len();
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, v)| f(k / len, &indices[k % len], v))
            .collect();
        JetTable {
            comps: self.comps,
            layout: self.layout,
            data,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.comps == other.comps
            && self.layout == other.layout
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Partitions of every size `0..=order`, computed once per kernel call.
pub(crate) struct PartitionCache {
    by_size: Vec<Vec<SetPartition>>,
}

impl PartitionCache {
    pub(crate) fn new(order: usize) -> Self {
        PartitionCache {
            by_size: (0..=order).map(all_set_partitions).collect(),
        }
    }

    fn get(&self, size: usize) -> &[SetPartition] {
        &self.by_size[size]
    }
}

/// `Σ_{partitions (I_1..I_p) of positions of I} Σ_{j_1..j_p}
/// inner^{j_1}_{I_1}···inner^{j_p}_{I_p} · outer^c_{j_1…j_p}` for every outer
/// component `c`, accumulated into `acc`.
fn contract_index<S: Scalar>(
    outer: &JetTable<S>,
    inner: &JetTable<S>,
    index: &MultiIndex,
    partitions: &[SetPartition],
    acc: &mut [S],
) {
    let p = outer.vars();
    let outer_len = outer.layout.len();
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut tuple: Vec<usize> = Vec::new();
    for partition in partitions {
        let k = partition.len();
        rows.clear();
        for block in partition.blocks() {
            let sub = index.select(block);
            rows.push((0..p).map(|j| inner.get(j, &sub).clone()).collect());
        }
        if rows.iter().any(|row| row.iter().all(Scalar::is_zero)) {
            continue;
        }
        // Odometer over (j_1, …, j_k) with prefix products.
        tuple.clear();
        tuple.resize(k, 0);
        let mut prefix: Vec<S> = Vec::with_capacity(k + 1);
        prefix.push(S::one());
        for b in 0..k {
            let next = prefix[b].clone() * rows[b][0].clone();
            prefix.push(next);
        }
        loop {
            let coef = &prefix[k];
            if !coef.is_zero() {
                let pos = outer.layout.offset(&MultiIndex::new(tuple.clone()));
                for (c, slot) in acc.iter_mut().enumerate() {
                    let term = outer.data[c * outer_len + pos].clone();
                    if !term.is_zero() {
                        *slot = slot.clone() + coef.clone() * term;
                    }
                }
            }
            let Some(b) = (0..k).rev().find(|&b| tuple[b] + 1 < p) else {
                break;
            };
            tuple[b] += 1;
            for t in &mut tuple[b + 1..] {
                *t = 0;
            }
            prefix.truncate(b + 1);
            for bb in b..k {
                let next = prefix[bb].clone() * rows[bb][tuple[bb]].clone();
                prefix.push(next);
            }
        }
    }
}

fn check_shapes<S: Scalar>(outer: &JetTable<S>, inner: &JetTable<S>, order: usize) -> Result<()> {
    if inner.comps() != outer.vars() {
        return Err(JetError::DimensionMismatch(format!(
            "inner map has {} components but outer map has {} variables",
            inner.comps(),
            outer.vars()
        )));
    }
    if outer.order() < order || inner.order() < order {
        return Err(JetError::OrderMismatch(format!(
            "order {order} requested from tables of orders {} and {}",
            outer.order(),
            inner.order()
        )));
    }
    Ok(())
}

/// Order-`s` coefficients of `outer ∘ inner`, one row per outer component
/// in layout order of the order-`s` indices.
pub fn faa_di_bruno_order<S: Scalar>(
    outer: &JetTable<S>,
    inner: &JetTable<S>,
    s: usize,
) -> Result<Vec<Vec<S>>> {
    check_shapes(outer, inner, s)?;
    let partitions = all_set_partitions(s);
    let indices = enumerate_multiindices(inner.vars(), s);
    let mut out = alloc::vec![Vec::with_capacity(indices.len()); outer.comps()];
    let mut acc = alloc::vec![S::zero(); outer.comps()];
    for index in &indices {
        acc.iter_mut().for_each(|a| *a = S::zero());
        if s == 0 {
            for (c, a) in acc.iter_mut().enumerate() {
                *a = outer.get(c, index).clone();
            }
        } else {
            contract_index(outer, inner, index, &partitions, &mut acc);
        }
        for (c, a) in acc.iter().enumerate() {
            out[c].push(a.clone());
        }
    }
    Ok(out)
}

/// Taylor table of `outer ∘ inner` through order `inner.order()`.
///
/// `outer` holds the derivatives of the outer map at the image point of the
/// inner map; the order-0 entries of `inner` are not read.
pub fn faa_di_bruno<S: Scalar>(outer: &JetTable<S>, inner: &JetTable<S>) -> Result<JetTable<S>> {
    let order = inner.order();
    check_shapes(outer, inner, order)?;
    let cache = PartitionCache::new(order);
    let mut out = JetTable::zeros(inner.vars(), outer.comps(), order);
    let mut acc = alloc::vec![S::zero(); outer.comps()];
    for index in out.layout.indices() {
        if index.is_empty() {
            for c in 0..outer.comps() {
                out.set(c, &index, outer.get(c, &index).clone());
            }
            continue;
        }
        acc.iter_mut().for_each(|a| *a = S::zero());
        contract_index(outer, inner, &index, cache.get(index.order()), &mut acc);
        for (c, a) in acc.iter().enumerate() {
            out.set(c, &index, a.clone());
        }
    }
    Ok(out)
}

/// Solves `outer ∘ x = target` for the inner table `x` order by order.
///
/// The unknown of order `s` enters only through the single-block partition
/// `x^j_I · outer^c_j`, so each order is one linear solve with the inverse
/// of the square first-order block of `outer`. Order-0 entries of the result
/// are zero.
pub fn solve_inner<S: Scalar>(outer: &JetTable<S>, target: &JetTable<S>) -> Result<JetTable<S>> {
    let p = outer.vars();
    if outer.comps() != p || target.comps() != p {
        return Err(JetError::DimensionMismatch(format!(
            "inner solve needs a square outer block, got {} components over {} variables \
             and a target with {} components",
            outer.comps(),
            p,
            target.comps()
        )));
    }
    let order = target.order();
    let rows: Vec<usize> = (0..p).collect();
    let block = outer.first_order_block(&rows);
    let inv = block
        .inverse()
        .ok_or_else(|| JetError::Singular(format!("first-order block with det {}", block.det())))?;
    let cache = PartitionCache::new(order);
    let mut x = JetTable::zeros(target.vars(), p, order);
    let mut acc = alloc::vec![S::zero(); p];
    for s in 1..=order {
        for index in enumerate_multiindices(target.vars(), s) {
            acc.iter_mut().for_each(|a| *a = S::zero());
            contract_index(outer, &x, &index, cache.get(s), &mut acc);
            let rhs: Vec<S> = (0..p)
                .map(|c| target.get(c, &index).clone() - acc[c].clone())
                .collect();
            for j in 0..p {
                let value = (0..p).fold(S::zero(), |sum, c| {
                    sum + inv.get(j, c).clone() * rhs[c].clone()
                });
                x.set(j, &index, value);
            }
        }
    }
    Ok(x)
}

/// Solves `w ∘ inner = target` for the outer table `w` order by order, where
/// `inner` is square in its first-order block.
///
/// At order `k` the unknown appears as `inner^{j_1}_{p_1}···inner^{j_k}_{p_k}
/// w_{j_1…j_k}`, inverted slot by slot with `z = (inner first block)^{-1}`.
pub fn solve_outer<S: Scalar>(inner: &JetTable<S>, target: &JetTable<S>) -> Result<JetTable<S>> {
    let n = inner.vars();
    if inner.comps() != n || target.vars() != n {
        return Err(JetError::DimensionMismatch(format!(
            "outer solve needs a square inner block over {} variables; got {} components and \
             a target over {} variables",
            n,
            inner.comps(),
            target.vars()
        )));
    }
    let order = target.order();
    if inner.order() < order {
        return Err(JetError::OrderMismatch(format!(
            "inner order {} below target order {order}",
            inner.order()
        )));
    }
    let rows: Vec<usize> = (0..n).collect();
    let block = inner.first_order_block(&rows);
    let z = block
        .inverse()
        .ok_or_else(|| JetError::Singular(format!("first-order block with det {}", block.det())))?;
    let comps = target.comps();
    let cache = PartitionCache::new(order);
    let mut w = JetTable::zeros(n, comps, order);
    for c in 0..comps {
        w.set(
            c,
            &MultiIndex::empty(),
            target.get(c, &MultiIndex::empty()).clone(),
        );
    }
    let mut acc = alloc::vec![S::zero(); comps];
    for k in 1..=order {
        let indices = enumerate_multiindices(n, k);
        let mut residual: Vec<Vec<S>> = alloc::vec![Vec::with_capacity(indices.len()); comps];
        for index in &indices {
            acc.iter_mut().for_each(|a| *a = S::zero());
            contract_index(&w, inner, index, cache.get(k), &mut acc);
            for c in 0..comps {
                residual[c].push(target.get(c, index).clone() - acc[c].clone());
            }
        }
        let local = Layout::new(n, k);
        let start = local.order_start(k);
        for target_index in &indices {
            let mut values = alloc::vec![S::zero(); comps];
            // Σ over ordered tuples (p_1..p_k) of Π z[p_l][j_l] · R_{sorted(p)}
            let mut tuple = alloc::vec![0usize; k];
            loop {
                let coef = tuple
                    .iter()
                    .zip(target_index.entries())
                    .fold(S::one(), |acc, (&pl, &jl)| acc * z.get(pl, jl).clone());
                if !coef.is_zero() {
                    let pos = local.offset(&MultiIndex::new(tuple.clone())) - start;
                    for c in 0..comps {
                        values[c] = values[c].clone() + coef.clone() * residual[c][pos].clone();
                    }
                }
                let Some(b) = (0..k).rev().find(|&b| tuple[b] + 1 < n) else {
                    break;
                };
                tuple[b] += 1;
                for t in &mut tuple[b + 1..] {
                    *t = 0;
                }
            }
            for (c, v) in values.into_iter().enumerate() {
                w.set(c, target_index, v);
            }
        }
    }
    Ok(w)
}
