//! JSON documents for velocities, group elements, Grassmann points, chart
//! jets and polynomial maps. Components and index entries are 1-based.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use velojet::{
    ChartJet, GrassmannPoint, GroupJet, JetTable, MultiIndex, PolyMap, Polynomial, Velocity,
};

use crate::error::CliError;
use crate::wire::{ScalarMode, WireScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Velocity,
    Group,
    Grassmann,
    Chart,
    Polymap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordRecord {
    pub component: usize,
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialRecord {
    pub component: usize,
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// One document. `n` is the source dimension, except for charts where it is
/// the dimension of the chart. `m` is absent for groups and charts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDocument {
    pub kind: DocKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub scalar_mode: ScalarMode,
    /// Chart selection of a Grassmann point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<usize>>,
    /// Expansion point of a chart jet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coords: Vec<CoordRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub monomials: Vec<MonomialRecord>,
}

fn parse_error(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn record<S: WireScalar>(component: usize, index: &MultiIndex, value: &S) -> CoordRecord {
    CoordRecord {
        component: component + 1,
        index: index.one_based(),
        value: value.to_wire(),
    }
}

fn table_records<S: WireScalar>(
    table: &JetTable<S>,
    component_of: impl Fn(usize) -> usize,
    keep: impl Fn(&MultiIndex) -> bool,
) -> Vec<CoordRecord> {
    table
        .entries()
        .filter(|(_, index, _)| keep(index))
        .map(|(c, index, value)| record(component_of(c), &index, value))
        .collect()
}

impl JetDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    fn expect_kind(&self, kind: DocKind) -> Result<(), CliError> {
        if self.kind != kind {
            return Err(parse_error(format!(
                "expected a {kind:?} document, got {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    fn order(&self) -> Result<usize, CliError> {
        self.r
            .ok_or_else(|| parse_error(format!("{:?} document without `r`", self.kind)))
    }

    fn extra(&self) -> Result<usize, CliError> {
        self.m
            .ok_or_else(|| parse_error(format!("{:?} document without `m`", self.kind)))
    }

    /// Collects coordinates into a table, requiring each canonical slot with
    /// `min_order <= |I|` to appear exactly once. `slot` maps a 1-based
    /// component to a table row, or `None` for records handled elsewhere.
    fn fill_table<S: WireScalar>(
        &self,
        vars: usize,
        comps: usize,
        order: usize,
        min_order: usize,
        slot: impl Fn(usize, &[usize]) -> Option<usize>,
    ) -> Result<JetTable<S>, CliError> {
        let mut table = JetTable::zeros(vars, comps, order);
        let mut seen = HashSet::new();
        for rec in &self.coords {
            let Some(row) = slot(rec.component, &rec.index) else {
                continue;
            };
            if rec.index.windows(2).any(|w| w[0] > w[1]) {
                return Err(parse_error(format!("index {:?} is not sorted", rec.index)));
            }
            if rec.index.len() < min_order || rec.index.len() > order {
                return Err(parse_error(format!(
                    "index {:?} of component {} outside orders {min_order}..={order}",
                    rec.index, rec.component
                )));
            }
            let index = MultiIndex::from_one_based(&rec.index, vars)
                .map_err(|e| parse_error(format!("component {}: {e}", rec.component)))?;
            if !seen.insert((row, index.clone())) {
                return Err(parse_error(format!(
                    "duplicate coordinate for component {} index {:?}",
                    rec.component, rec.index
                )));
            }
            table.set(row, &index, S::parse_wire(&rec.value, self.scalar_mode)?);
        }
        let expected: usize = comps
            * (min_order..=order)
                .map(|k| table.layout().order_len(k))
                .sum::<usize>();
        if seen.len() != expected {
            return Err(parse_error(format!(
                "expected {expected} coordinates, found {}",
                seen.len()
            )));
        }
        Ok(table)
    }

    fn component_slot(total: usize) -> impl Fn(usize, &[usize]) -> Option<usize> {
        move |c, _| (1..=total).contains(&c).then(|| c - 1)
    }

    fn check_components(&self, total: usize) -> Result<(), CliError> {
        if let Some(rec) = self
            .coords
            .iter()
            .find(|r| r.component == 0 || r.component > total)
        {
            return Err(parse_error(format!(
                "component {} outside 1..={total}",
                rec.component
            )));
        }
        Ok(())
    }

    pub fn from_velocity<S: WireScalar>(v: &Velocity<S>) -> Self {
        JetDocument {
            kind: DocKind::Velocity,
            n: v.n(),
            m: Some(v.m()),
            r: Some(v.order()),
            scalar_mode: S::MODE,
            nu: None,
            base: None,
            coords: table_records(v.table(), |c| c, |_| true),
            monomials: Vec::new(),
        }
    }

    pub fn to_velocity<S: WireScalar>(&self) -> Result<Velocity<S>, CliError> {
        self.expect_kind(DocKind::Velocity)?;
        let (m, r) = (self.extra()?, self.order()?);
        if self.n == 0 {
            return Err(parse_error("velocities need n >= 1"));
        }
        let total = self.n + m;
        self.check_components(total)?;
        let table = self.fill_table(self.n, total, r, 0, Self::component_slot(total))?;
        Ok(Velocity::new(self.n, m, table)?)
    }

    pub fn from_group<S: WireScalar>(g: &GroupJet<S>) -> Self {
        JetDocument {
            kind: DocKind::Group,
            n: g.n(),
            m: None,
            r: Some(g.order()),
            scalar_mode: S::MODE,
            nu: None,
            base: None,
            coords: table_records(g.table(), |c| c, |i| !i.is_empty()),
            monomials: Vec::new(),
        }
    }

    pub fn to_group<S: WireScalar>(&self) -> Result<GroupJet<S>, CliError> {
        self.expect_kind(DocKind::Group)?;
        let r = self.order()?;
        if r == 0 {
            return Err(parse_error("group jets need r >= 1"));
        }
        self.check_components(self.n)?;
        let table = self.fill_table(self.n, self.n, r, 1, Self::component_slot(self.n))?;
        Ok(GroupJet::new(table)?)
    }

    pub fn from_grassmann<S: WireScalar>(p: &GrassmannPoint<S>) -> Self {
        let others: Vec<usize> = (0..p.n() + p.m()).filter(|c| !p.nu().contains(c)).collect();
        let mut coords: Vec<CoordRecord> = p
            .nu()
            .iter()
            .zip(p.base())
            .map(|(&c, value)| record(c, &MultiIndex::empty(), value))
            .collect();
        coords.extend(table_records(p.w(), |sigma| others[sigma], |_| true));
        JetDocument {
            kind: DocKind::Grassmann,
            n: p.n(),
            m: Some(p.m()),
            r: Some(p.order()),
            scalar_mode: S::MODE,
            nu: Some(p.nu().iter().map(|c| c + 1).collect()),
            base: None,
            coords,
            monomials: Vec::new(),
        }
    }

    pub fn to_grassmann<S: WireScalar>(&self) -> Result<GrassmannPoint<S>, CliError> {
        self.expect_kind(DocKind::Grassmann)?;
        let (m, r) = (self.extra()?, self.order()?);
        let total = self.n + m;
        self.check_components(total)?;
        let nu_raw = self
            .nu
            .as_ref()
            .ok_or_else(|| parse_error("Grassmann document without `nu`"))?;
        if nu_raw.iter().any(|&c| c == 0 || c > total) {
            return Err(parse_error(format!(
                "chart selection {nu_raw:?} outside 1..={total}"
            )));
        }
        let nu: Vec<usize> = nu_raw.iter().map(|c| c - 1).collect();
        let others: Vec<usize> = (0..total).filter(|c| !nu.contains(c)).collect();
        let in_nu = |c: usize| nu.contains(&(c - 1));
        let base_table: JetTable<S> = self.fill_table(self.n, self.n, 0, 0, |c, _| {
            nu.iter().position(|&k| k + 1 == c)
        })?;
        if let Some(rec) = self
            .coords
            .iter()
            .find(|rec| in_nu(rec.component) && !rec.index.is_empty())
        {
            return Err(parse_error(format!(
                "component {} is a base coordinate and takes only the empty index",
                rec.component
            )));
        }
        let w = self.fill_table(self.n, m, r, 0, |c, _| {
            others.iter().position(|&k| k + 1 == c)
        })?;
        let base = base_table.values().to_vec();
        Ok(GrassmannPoint::new(nu, base, w)?)
    }

    pub fn from_chart<S: WireScalar>(chart: &ChartJet<S>) -> Self {
        JetDocument {
            kind: DocKind::Chart,
            n: chart.dim(),
            m: None,
            r: Some(chart.order()),
            scalar_mode: S::MODE,
            nu: None,
            base: Some(chart.base().iter().map(WireScalar::to_wire).collect()),
            coords: table_records(chart.table(), |c| c, |_| true),
            monomials: Vec::new(),
        }
    }

    pub fn to_chart<S: WireScalar>(&self) -> Result<ChartJet<S>, CliError> {
        self.expect_kind(DocKind::Chart)?;
        let r = self.order()?;
        let dim = self.n;
        let raw = self
            .base
            .as_ref()
            .ok_or_else(|| parse_error("chart document without `base`"))?;
        if raw.len() != dim {
            return Err(parse_error(format!(
                "base has {} entries, expected {dim}",
                raw.len()
            )));
        }
        let base = raw
            .iter()
            .map(|s| S::parse_wire(s, self.scalar_mode))
            .collect::<Result<_, _>>()?;
        self.check_components(dim)?;
        let table = self.fill_table(dim, dim, r, 0, Self::component_slot(dim))?;
        Ok(ChartJet::new(base, table)?)
    }

    /// Polynomial map `R^n → R^{n+m}`.
    pub fn from_polymap<S: WireScalar>(map: &PolyMap<S>) -> Self {
        let monomials = map
            .components()
            .iter()
            .enumerate()
            .flat_map(|(c, p)| {
                p.terms().map(move |(exps, coeff)| MonomialRecord {
                    component: c + 1,
                    exponents: exps.to_vec(),
                    coeff: coeff.to_wire(),
                })
            })
            .collect();
        JetDocument {
            kind: DocKind::Polymap,
            n: map.vars(),
            m: Some(map.comps() - map.vars().min(map.comps())),
            r: None,
            scalar_mode: S::MODE,
            nu: None,
            base: None,
            coords: Vec::new(),
            monomials,
        }
    }

    pub fn to_polymap<S: WireScalar>(&self) -> Result<PolyMap<S>, CliError> {
        self.expect_kind(DocKind::Polymap)?;
        let comps = self.n + self.extra()?;
        let mut components = vec![Polynomial::zero(self.n); comps];
        let mut seen = HashSet::new();
        for mono in &self.monomials {
            if mono.component == 0 || mono.component > comps {
                return Err(parse_error(format!(
                    "component {} outside 1..={comps}",
                    mono.component
                )));
            }
            if mono.exponents.len() != self.n {
                return Err(parse_error(format!(
                    "monomial {:?} needs {} exponents",
                    mono.exponents, self.n
                )));
            }
            if !seen.insert((mono.component, mono.exponents.clone())) {
                return Err(parse_error(format!(
                    "duplicate monomial {:?} in component {}",
                    mono.exponents, mono.component
                )));
            }
            let coeff = S::parse_wire(&mono.coeff, self.scalar_mode)?;
            components[mono.component - 1].add_term(mono.exponents.clone(), coeff);
        }
        Ok(PolyMap::new(self.n, components)?)
    }
}
