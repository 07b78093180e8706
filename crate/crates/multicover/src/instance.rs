//! Problem data model: weighted sets over a small item universe, demand
//! feasibility, bucket partitioning, and coverage accounting.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bucket keys are item-subset bitmasks in a machine word; the cap leaves
/// headroom so `1 << ell` and related arithmetic never overflow.
pub const MAX_ITEMS: usize = 62;

/// One input set: its item content as a bitmask over the universe, and its
/// non-negative weight. Duplicate contents across records are fine; each
/// record is selectable at most once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetRecord {
    pub items: u64,
    pub weight: f64,
}

impl SetRecord {
    /// Builds a record from explicit item indices. Index validity against the
    /// universe is checked when the containing [`Instance`] is constructed.
    pub fn new(weight: f64, item_indices: &[usize]) -> Self {
        let mut items = 0u64;
        for &g in item_indices {
            assert!(g < 64, "item index {g} cannot be a bitmask bit");
            items |= 1 << g;
        }
        SetRecord { items, weight }
    }

    pub fn contains(&self, item: usize) -> bool {
        self.items >> item & 1 == 1
    }

    pub fn item_indices(&self, ell: usize) -> Vec<usize> {
        (0..ell).filter(|&g| self.contains(g)).collect()
    }
}

/// A multi-cover instance: `ell` named items with per-item demands, and `n`
/// weighted sets over them. Immutable once constructed.
///
/// JSON form: `{"items": [names], "demands": [ints],
/// "sets": [{"weight": number, "items": [item indices]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceWire", into = "InstanceWire")]
pub struct Instance {
    item_names: Vec<String>,
    demands: Vec<u32>,
    sets: Vec<SetRecord>,
}

impl Instance {
    pub fn new(item_names: Vec<String>, demands: Vec<u32>, sets: Vec<SetRecord>) -> Result<Self> {
        let ell = item_names.len();
        if ell == 0 {
            return Err(Error::InvalidInstance(
                "universe must contain at least one item".into(),
            ));
        }
        if ell > MAX_ITEMS {
            return Err(Error::InvalidInstance(format!(
                "universe has {ell} items; at most {MAX_ITEMS} are supported \
                 (item subsets are machine-word bitmasks)"
            )));
        }
        if demands.len() != ell {
            return Err(Error::InvalidInstance(format!(
                "{} demands for {ell} items",
                demands.len()
            )));
        }
        for (t, s) in sets.iter().enumerate() {
            if !s.weight.is_finite() || s.weight < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "set {t} has weight {}; weights must be finite and non-negative",
                    s.weight
                )));
            }
            if s.items >> ell != 0 {
                return Err(Error::InvalidInstance(format!(
                    "set {t} references items outside the {ell}-item universe"
                )));
            }
        }
        Ok(Instance {
            item_names,
            demands,
            sets,
        })
    }

    /// Number of items in the universe.
    pub fn ell(&self) -> usize {
        self.item_names.len()
    }

    /// Number of input sets.
    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn item_names(&self) -> &[String] {
        &self.item_names
    }

    pub fn demands(&self) -> &[u32] {
        &self.demands
    }

    pub fn sets(&self) -> &[SetRecord] {
        &self.sets
    }

    pub fn set(&self, index: usize) -> &SetRecord {
        &self.sets[index]
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Ingest(format!("instance JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    items: Vec<String>,
    demands: Vec<u32>,
    sets: Vec<SetWire>,
}

#[derive(Serialize, Deserialize)]
struct SetWire {
    weight: f64,
    items: Vec<usize>,
}

impl TryFrom<InstanceWire> for Instance {
    type Error = Error;

    fn try_from(w: InstanceWire) -> Result<Self> {
        let ell = w.items.len();
        if ell == 0 || ell > MAX_ITEMS {
            // Delegate the error message to the one validation path.
            return Instance::new(w.items, w.demands, Vec::new());
        }
        let mut sets = Vec::with_capacity(w.sets.len());
        for (t, s) in w.sets.iter().enumerate() {
            for &g in &s.items {
                if g >= ell {
                    return Err(Error::InvalidInstance(format!(
                        "set {t} references item index {g}, but the universe has {ell} items"
                    )));
                }
            }
            sets.push(SetRecord::new(s.weight, &s.items));
        }
        Instance::new(w.items, w.demands, sets)
    }
}

impl From<Instance> for InstanceWire {
    fn from(inst: Instance) -> Self {
        let ell = inst.ell();
        InstanceWire {
            sets: inst
                .sets
                .iter()
                .map(|s| SetWire {
                    weight: s.weight,
                    items: s.item_indices(ell),
                })
                .collect(),
            items: inst.item_names,
            demands: inst.demands,
        }
    }
}

/// Per-item capacity (how many sets contain the item) versus demand.
/// Feasible iff no demand exceeds its item's capacity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub per_item: Vec<ItemCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemCheck {
    pub item: String,
    pub capacity: u32,
    pub demand: u32,
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible {
            return write!(f, "feasible");
        }
        let short: Vec<String> = self
            .per_item
            .iter()
            .filter(|c| c.demand > c.capacity)
            .map(|c| format!("{} needs {} but only {} sets contain it", c.item, c.demand, c.capacity))
            .collect();
        write!(f, "{}", short.join("; "))
    }
}

/// Reports per-item capacity versus demand. Infeasibility is data here, not
/// an error.
pub fn validate(instance: &Instance) -> FeasibilityReport {
    let per_item: Vec<ItemCheck> = instance
        .item_names
        .iter()
        .enumerate()
        .map(|(g, name)| ItemCheck {
            item: name.clone(),
            capacity: instance.sets.iter().filter(|s| s.contains(g)).count() as u32,
            demand: instance.demands[g],
        })
        .collect();
    FeasibilityReport {
        feasible: per_item.iter().all(|c| c.demand <= c.capacity),
        per_item,
    }
}

/// Multiplicity of item coverage by a selected sub-family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageVector {
    pub counts: Vec<u32>,
}

impl CoverageVector {
    pub fn satisfies(&self, demands: &[u32]) -> bool {
        self.counts.iter().zip(demands).all(|(c, q)| c >= q)
    }
}

/// Counts, for every item, how many selected sets contain it.
pub fn coverage(instance: &Instance, solution: &Solution) -> Result<CoverageVector> {
    let mut counts = vec![0u32; instance.ell()];
    for &t in &solution.selected {
        if t >= instance.n() {
            return Err(Error::InvalidSolution(format!(
                "set index {t} out of range for {} sets",
                instance.n()
            )));
        }
        for (g, c) in counts.iter_mut().enumerate() {
            if instance.sets[t].contains(g) {
                *c += 1;
            }
        }
    }
    Ok(CoverageVector { counts })
}

/// A selected sub-family: distinct set indices (kept sorted), the recomputed
/// total weight, and the tag of the producing algorithm. `seed` is recorded
/// only by randomized algorithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub selected: Vec<usize>,
    pub total_weight: f64,
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Solution {
    /// Sorts and validates the indices (in range, no duplicates) and
    /// recomputes the total weight from the instance.
    pub fn new(
        instance: &Instance,
        mut selected: Vec<usize>,
        algorithm: impl Into<String>,
    ) -> Result<Self> {
        selected.sort_unstable();
        for pair in selected.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidSolution(format!(
                    "set index {} selected twice",
                    pair[0]
                )));
            }
        }
        if let Some(&last) = selected.last() {
            if last >= instance.n() {
                return Err(Error::InvalidSolution(format!(
                    "set index {last} out of range for {} sets",
                    instance.n()
                )));
            }
        }
        let total_weight = selected.iter().map(|&t| instance.sets[t].weight).sum();
        Ok(Solution {
            selected,
            total_weight,
            algorithm: algorithm.into(),
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Partition of the input sets into buckets keyed by exact item content.
/// Bucket members are sorted ascending by weight (ties by set index), and
/// `prefix()[x]` holds the total weight of the `x` cheapest members, so the
/// increments of the prefix sequence are non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketIndex {
    buckets: BTreeMap<u64, BucketEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketEntry {
    key: u64,
    members: Vec<usize>,
    prefix: Vec<f64>,
}

impl BucketEntry {
    /// Item-content bitmask shared by every member.
    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Set indices in ascending (weight, index) order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Cumulative sorted weights; length `len() + 1`, starts at 0.
    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn contains_item(&self, g: usize) -> bool {
        self.key >> g & 1 == 1
    }
}

impl BucketIndex {
    /// Buckets in ascending key order.
    pub fn entries(&self) -> impl Iterator<Item = &BucketEntry> {
        self.buckets.values()
    }

    pub fn get(&self, key: u64) -> Option<&BucketEntry> {
        self.buckets.get(&key)
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }
}

/// Groups sets by exact item content and precomputes per-bucket sorted order
/// and weight prefix sums.
pub fn partition_buckets(instance: &Instance) -> BucketIndex {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (t, s) in instance.sets.iter().enumerate() {
        groups.entry(s.items).or_default().push(t);
    }
    let buckets = groups
        .into_iter()
        .map(|(key, mut members)| {
            members.sort_by(|&a, &b| {
                instance.sets[a]
                    .weight
                    .total_cmp(&instance.sets[b].weight)
                    .then(a.cmp(&b))
            });
            let mut prefix = Vec::with_capacity(members.len() + 1);
            let mut acc = 0.0;
            prefix.push(acc);
            for &t in &members {
                acc += instance.sets[t].weight;
                prefix.push(acc);
            }
            (key, BucketEntry { key, members, prefix })
        })
        .collect();
    BucketIndex { buckets }
}

/// Builds an instance from tabular rows: one record per row, binary item
/// columns, one numeric weight column. Demands are supplied by the caller,
/// aligned with `item_columns`, which also fixes the universe order.
pub fn ingest_csv<R: Read>(
    reader: R,
    item_columns: &[String],
    weight_column: &str,
    demands: &[u32],
) -> Result<Instance> {
    if item_columns.is_empty() {
        return Err(Error::Ingest("no item columns given".into()));
    }
    if item_columns.len() > MAX_ITEMS {
        return Err(Error::Ingest(format!(
            "{} item columns; at most {MAX_ITEMS} are supported",
            item_columns.len()
        )));
    }
    if demands.len() != item_columns.len() {
        return Err(Error::Ingest(format!(
            "{} demands for {} item columns",
            demands.len(),
            item_columns.len()
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Ingest(format!("reading header: {e}")))?
        .clone();
    let col_index = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Ingest(format!("unknown column {name:?}")))
    };
    let weight_idx = col_index(weight_column)?;
    let item_idx: Vec<usize> = item_columns
        .iter()
        .map(|c| col_index(c))
        .collect::<Result<_>>()?;

    let mut sets = Vec::new();
    for (row_no, record) in rdr.records().enumerate() {
        let row = row_no + 1;
        let record = record.map_err(|e| Error::Ingest(format!("row {row}: {e}")))?;
        let raw = record.get(weight_idx).unwrap_or("").trim();
        let weight: f64 = raw.parse().map_err(|_| {
            Error::Ingest(format!(
                "row {row}, column {weight_column:?}: {raw:?} is not a number"
            ))
        })?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Ingest(format!(
                "row {row}, column {weight_column:?}: weight {weight} is negative or non-finite"
            )));
        }
        let mut items = 0u64;
        for (g, &ci) in item_idx.iter().enumerate() {
            let cell = record.get(ci).unwrap_or("").trim();
            let truthy = parse_truthy(cell).ok_or_else(|| {
                Error::Ingest(format!(
                    "row {row}, column {:?}: {cell:?} is not a 0/1 value",
                    item_columns[g]
                ))
            })?;
            if truthy {
                items |= 1 << g;
            }
        }
        sets.push(SetRecord { items, weight });
    }
    Instance::new(item_columns.to_vec(), demands.to_vec(), sets)
}

fn parse_truthy(cell: &str) -> Option<bool> {
    match cell.to_ascii_lowercase().as_str() {
        "" | "0" | "false" | "no" => Some(false),
        "1" | "true" | "yes" => Some(true),
        other => other.parse::<f64>().ok().map(|v| v != 0.0),
    }
}
