use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, BoundsError, ClassTag, ExceptionDescriptor};
use crate::genvec::{min_genus, MinGenusRecord};
use crate::groups::{enumerate_metacyclic, Group, MetacyclicParams};
use crate::rational::ExactRational;

/// Extra restriction on the group order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFilter {
    #[default]
    All,
    Odd,
    DivisibleBy4,
}

impl OrderFilter {
    pub fn admits(self, order: u64) -> bool {
        match self {
            OrderFilter::All => true,
            OrderFilter::Odd => order % 2 == 1,
            OrderFilter::DivisibleBy4 => order.is_multiple_of(4),
        }
    }
}

/// Source of previously computed records, e.g. an on-disk cache.
/// Lookups are re-validated before use.
pub trait RecordStore: Sync {
    fn lookup(&self, params: MetacyclicParams) -> Option<MinGenusRecord>;
    fn store(&self, record: &MinGenusRecord);
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub class_tag: ClassTag,
    pub coefficient: ExactRational,
    pub order_min: u64,
    pub order_max: u64,
    pub genus_cap: u64,
    pub order_filter: OrderFilter,
    pub exceptions: Vec<ExceptionDescriptor>,
}

impl ScanConfig {
    pub fn new(class_tag: ClassTag, coefficient: u64, order_max: u64) -> Self {
        ScanConfig {
            class_tag,
            coefficient: ExactRational::from(coefficient),
            order_min: 1,
            order_max,
            genus_cap: default_genus_cap(order_max),
            order_filter: OrderFilter::All,
            exceptions: Vec::new(),
        }
    }

    pub fn with_exceptions(mut self, exceptions: Vec<ExceptionDescriptor>) -> Self {
        self.exceptions = exceptions;
        self
    }

    pub fn with_genus_cap(mut self, genus_cap: u64) -> Self {
        self.genus_cap = genus_cap;
        self
    }

    pub fn with_order_filter(mut self, filter: OrderFilter) -> Self {
        self.order_filter = filter;
        self
    }
}

/// Smallest cap under which every violation of a bound with coefficient
/// above 4 is visible, plus one.
pub fn default_genus_cap(order_max: u64) -> u64 {
    order_max / 4 + 2
}

/// One scanned group. Shared by the JSON and CSV emitters.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub order: u64,
    /// Empty when no action exists up to the group's search cap.
    pub min_genus: Option<u64>,
    pub ratio_num: Option<u64>,
    pub ratio_den: Option<u64>,
    /// Semicolon-separated.
    pub class_tags: String,
    pub exception_label: Option<String>,
}

pub type ScanRow = ReportRow;

impl ReportRow {
    pub fn params(&self) -> MetacyclicParams {
        MetacyclicParams::new(self.m, self.n, self.k, self.t)
    }

    pub fn ratio(&self) -> Option<ExactRational> {
        Some(ExactRational::new(
            self.ratio_num? as i64,
            self.ratio_den? as i64,
        ))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MatchedException {
    pub label: String,
    pub order: u64,
    pub min_genus: u64,
    pub params: Vec<MetacyclicParams>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub class_tag: ClassTag,
    pub coefficient: ExactRational,
    pub order_min: u64,
    pub order_max: u64,
    pub genus_cap: u64,
    pub order_filter: OrderFilter,
    pub rows: Vec<ReportRow>,
    pub violations: Vec<ReportRow>,
    pub matched_exceptions: Vec<MatchedException>,
}

impl ScanReport {
    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        write_rows_csv(&self.rows, w)
    }
}

pub fn write_rows_csv<W: io::Write>(rows: &[ReportRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    if rows.is_empty() {
        out.write_record([
            "m",
            "n",
            "k",
            "t",
            "order",
            "min_genus",
            "ratio_num",
            "ratio_den",
            "class_tags",
            "exception_label",
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn verify_bound_scan(config: &ScanConfig) -> Result<ScanReport, BoundsError> {
    verify_bound_scan_with(config, None)
}

/// Scans every enumerated group of the class with order in range.
///
/// A group is searched up to genus `min(genus_cap, order/4 + 1)`: an action
/// with ratio above 4 has `g - 1 < order / 4`. Rows come out in
/// `(order, m, n, k, t)` order whatever the thread pool.
pub fn verify_bound_scan_with(
    config: &ScanConfig,
    store: Option<&dyn RecordStore>,
) -> Result<ScanReport, BoundsError> {
    if config.coefficient <= 4 {
        return Err(BoundsError::CoefficientTooLow(config.coefficient.clone()));
    }
    let params: Vec<MetacyclicParams> = if config.order_min <= config.order_max {
        enumerate_metacyclic(config.order_min.max(1), config.order_max)
            .filter(|p| config.order_filter.admits(p.order()))
            .collect()
    } else {
        Vec::new()
    };

    let results: Vec<Result<Option<ReportRow>, BoundsError>> = params
        .par_iter()
        .map(|&p| scan_one(config, p, store))
        .collect();

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut matched: Vec<MatchedException> = Vec::new();
    for res in results {
        let Some(row) = res? else { continue };
        if let (Some(g), Some(label)) = (row.min_genus, &row.exception_label) {
            match matched.iter_mut().find(|e| &e.label == label) {
                Some(e) => e.params.push(row.params()),
                None => matched.push(MatchedException {
                    label: label.clone(),
                    order: row.order,
                    min_genus: g,
                    params: vec![row.params()],
                }),
            }
        } else if row.ratio().is_some_and(|ratio| ratio > config.coefficient) {
            violations.push(row.clone());
        }
        rows.push(row);
    }

    Ok(ScanReport {
        class_tag: config.class_tag,
        coefficient: config.coefficient.clone(),
        order_min: config.order_min,
        order_max: config.order_max,
        genus_cap: config.genus_cap,
        order_filter: config.order_filter,
        rows,
        violations,
        matched_exceptions: matched,
    })
}

fn scan_one(
    config: &ScanConfig,
    p: MetacyclicParams,
    store: Option<&dyn RecordStore>,
) -> Result<Option<ReportRow>, BoundsError> {
    let g = Group::new(p)?;
    let tags = classify(&g);
    if !tags.contains(&config.class_tag) {
        return Ok(None);
    }
    let order = g.order();
    let natural = order / 4 + 1;
    let cap = config.genus_cap.min(natural).max(2);
    let record = min_genus_with_store(&g, cap, store);

    if record.is_none() && cap < natural {
        // Actions above the cap have g - 1 >= genus_cap.
        let safe = &config.coefficient * &ExactRational::from(config.genus_cap) >= order;
        if !safe {
            return Err(BoundsError::GenusCapTooSmall {
                params: p,
                order,
                genus_cap: config.genus_cap,
            });
        }
    }

    let min_genus = record.map(|r| r.min_genus);
    let ratio = min_genus.map(|mg| ExactRational::new(order as i64, mg as i64 - 1));
    let exception_label = match (min_genus, &ratio) {
        (Some(mg), Some(ratio)) if *ratio > config.coefficient => config
            .exceptions
            .iter()
            .find(|e| e.matches(&g, mg))
            .map(|e| e.label.clone()),
        _ => None,
    };
    Ok(Some(ReportRow {
        m: p.m,
        n: p.n,
        k: p.k,
        t: p.t,
        order,
        min_genus,
        ratio_num: ratio
            .as_ref()
            .and_then(|r| r.to_i128_parts())
            .map(|x| x.0 as u64),
        ratio_den: ratio
            .as_ref()
            .and_then(|r| r.to_i128_parts())
            .map(|x| x.1 as u64),
        class_tags: tags
            .iter()
            .map(|t| t.as_str())
            .collect::<Vec<_>>()
            .join(";"),
        exception_label,
    }))
}

/// [`min_genus`] backed by a store. Stored records are exact minima, so a
/// valid one answers any cap; it is reported only when within the cap so
/// that output does not depend on the store's contents.
pub(crate) fn min_genus_with_store(
    g: &Group,
    cap: u64,
    store: Option<&dyn RecordStore>,
) -> Option<MinGenusRecord> {
    if let Some(store) = store {
        if let Some(rec) = store.lookup(g.params()) {
            if rec.revalidate_against(g) {
                return (rec.min_genus <= cap).then_some(rec);
            }
        }
    }
    let rec = min_genus(g, cap);
    if let (Some(store), Some(rec)) = (store, &rec) {
        store.store(rec);
    }
    rec
}

/// Odd-order metacyclic groups against the coefficient 9, with `C7 x| C3`
/// on genus 3 as the only exception.
pub fn verify_odd_order_scan(order_max: u64) -> Result<ScanReport, BoundsError> {
    let config = ScanConfig::new(ClassTag::Metacyclic, 9, order_max)
        .with_order_filter(OrderFilter::Odd)
        .with_exceptions(vec![ExceptionDescriptor::c7_c3_genus3()]);
    verify_bound_scan(&config)
}
