//! Synthetic examinee populations: raw health attributes, thresholding into
//! items, response and improvement bits, and aggregation into types.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{ExamineeType, Population};
use crate::universe::{ItemId, ItemUniverse, MethodUniverse};

/// Rejection-sampling attempts before a truncated normal is declared unusable.
pub const REJECTION_CAP: u32 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distribution {
    /// Normal with the given parent parameters, conditioned on `[min, max]`.
    TruncatedNormal { min: f64, max: f64, mean: f64, sd: f64 },
    /// `(value, probability)` pairs.
    Categorical { table: Vec<(f64, f64)> },
    /// 1 with probability `p`, else 0.
    Bernoulli { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    #[serde(flatten)]
    pub distribution: Distribution,
}

impl AttributeSpec {
    fn tn(name: &str, min: f64, max: f64, mean: f64, sd: f64) -> Self {
        Self { name: name.into(), distribution: Distribution::TruncatedNormal { min, max, mean, sd } }
    }

    fn cat(name: &str, table: &[(f64, f64)]) -> Self {
        Self { name: name.into(), distribution: Distribution::Categorical { table: table.to_vec() } }
    }

    fn bern(name: &str, p: f64) -> Self {
        Self { name: name.into(), distribution: Distribution::Bernoulli { p } }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Generation(format!("attribute `{}`: {msg}", self.name)));
        match &self.distribution {
            Distribution::TruncatedNormal { min, max, mean, sd } => {
                if min.partial_cmp(max) != Some(std::cmp::Ordering::Less) {
                    return bad(format!("min {min} must be below max {max}"));
                }
                if sd.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !sd.is_finite() || !mean.is_finite() {
                    return bad(format!("needs finite mean and sd > 0, got mean {mean} sd {sd}"));
                }
            }
            Distribution::Categorical { table } => {
                if table.is_empty() {
                    return bad("empty table".into());
                }
                if table.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) {
                    return bad("probabilities must lie in [0, 1]".into());
                }
                let total: f64 = table.iter().map(|e| e.1).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("probabilities sum to {total}"));
                }
            }
            Distribution::Bernoulli { p } => {
                if !(0.0..=1.0).contains(p) {
                    return bad(format!("probability {p} outside [0, 1]"));
                }
            }
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> Result<f64> {
        match &self.distribution {
            &Distribution::TruncatedNormal { min, max, mean, sd } => {
                let normal = Normal::new(mean, sd).map_err(|e| Error::Generation(e.to_string()))?;
                for _ in 0..REJECTION_CAP {
                    let x = normal.sample(rng);
                    if (min..=max).contains(&x) {
                        return Ok(x);
                    }
                }
                Err(Error::Generation(format!(
                    "attribute `{}`: no draw within [{min}, {max}] after {REJECTION_CAP} attempts",
                    self.name
                )))
            }
            Distribution::Categorical { table } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(value, p) in table {
                    acc += p;
                    if u < acc {
                        return Ok(value);
                    }
                }
                Ok(table.last().expect("validated non-empty").0)
            }
            &Distribution::Bernoulli { p } => Ok(if rng.random::<f64>() < p { 1.0 } else { 0.0 }),
        }
    }
}

/// Condition under which an item is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Predicate {
    AtLeast { attr: String, value: f64 },
    Below { attr: String, value: f64 },
    /// `lo ≤ v < hi`
    Band { attr: String, lo: f64, hi: f64 },
    Equals { attr: String, value: f64 },
    /// A Bernoulli attribute copied through.
    Flag { attr: String },
}

impl Predicate {
    pub fn attr(&self) -> &str {
        match self {
            Predicate::AtLeast { attr, .. }
            | Predicate::Below { attr, .. }
            | Predicate::Band { attr, .. }
            | Predicate::Equals { attr, .. }
            | Predicate::Flag { attr } => attr,
        }
    }

    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Predicate::AtLeast { value, .. } => v >= value,
            Predicate::Below { value, .. } => v < value,
            Predicate::Band { lo, hi, .. } => lo <= v && v < hi,
            Predicate::Equals { value, .. } => v == value,
            Predicate::Flag { .. } => v != 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemRule {
    pub item: ItemId,
    #[serde(flatten)]
    pub predicate: Predicate,
}

/// One rule per item id `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThresholdTable {
    pub rules: Vec<ItemRule>,
}

/// A threshold table with attribute names resolved to record positions.
#[derive(Clone, Debug)]
pub struct CompiledTable {
    /// Indexed by item id.
    rules: Vec<(usize, Predicate)>,
}

impl CompiledTable {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl ThresholdTable {
    /// Checks every item `0..n` appears exactly once and resolves names.
    pub fn compile(&self, attributes: &[AttributeSpec]) -> Result<CompiledTable> {
        let n = self.rules.len();
        let mut slots: Vec<Option<(usize, Predicate)>> = vec![None; n];
        for rule in &self.rules {
            let i = rule.item as usize;
            if i >= n {
                return Err(Error::Generation(format!("item {} outside 0..{n}", rule.item)));
            }
            if slots[i].is_some() {
                return Err(Error::Generation(format!("item {} defined twice", rule.item)));
            }
            let pos = attributes
                .iter()
                .position(|a| a.name == rule.predicate.attr())
                .ok_or_else(|| Error::Generation(format!("item {}: unknown attribute `{}`", rule.item, rule.predicate.attr())))?;
            slots[i] = Some((pos, rule.predicate.clone()));
        }
        Ok(CompiledTable { rules: slots.into_iter().map(|s| s.expect("n rules over n distinct ids")).collect() })
    }
}

/// One sampled value per attribute, in attribute order.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRecord {
    pub values: Vec<f64>,
}

pub fn sample_raw(specs: &[AttributeSpec], rng: &mut impl Rng) -> Result<RawRecord> {
    let values = specs.iter().map(|s| s.sample(rng)).collect::<Result<_>>()?;
    Ok(RawRecord { values })
}

/// Item bit vector of `raw` under `table`.
pub fn binarize(raw: &RawRecord, table: &CompiledTable) -> Result<Vec<bool>> {
    table
        .rules
        .iter()
        .enumerate()
        .map(|(i, (pos, pred))| {
            let v = raw
                .values
                .get(*pos)
                .ok_or_else(|| Error::Generation(format!("item {i}: record has no attribute #{pos}")))?;
            Ok(pred.holds(*v))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    #[serde(default)]
    pub records: usize,
    #[serde(default)]
    pub seed: u64,
    /// Response probability per method; the first (no guidance) must be 0.
    pub response: Vec<f64>,
    pub improvement: f64,
    pub attributes: Vec<AttributeSpec>,
    pub items: ThresholdTable,
}

impl GenConfig {
    /// The 49-item health-checkup generator. Response probabilities
    /// `(0, 0.3, 0.5, 0.6)` and improvement probability 0.5 are invented
    /// defaults, not measured values.
    pub fn health_checkup(records: usize, seed: u64) -> Self {
        use Predicate::*;
        let attributes = vec![
            AttributeSpec::cat("health_checkup", &[(0.0, 0.449), (1.0, 0.551)]),
            AttributeSpec::tn("fasting_glucose", 20.0, 600.0, 97.78, 21.8),
            AttributeSpec::cat("casual_glucose", &[(120.0, 0.889), (130.0, 0.039), (170.0, 0.052), (210.0, 0.020)]),
            AttributeSpec::tn("hba1c", 3.0, 20.0, 5.19, 0.73),
            AttributeSpec::tn("diastolic", 30.0, 150.0, 75.45, 12.15),
            AttributeSpec::tn("systolic", 60.0, 300.0, 120.63, 17.11),
            AttributeSpec::cat(
                "urine_protein",
                &[(1.0, 0.853), (2.0, 0.100), (3.0, 0.034), (4.0, 0.010), (5.0, 0.003)],
            ),
            AttributeSpec::tn("egfr", 1.0, 500.0, 79.56, 14.54),
            AttributeSpec::bern("diabetes_visit_this_year", 0.112),
            AttributeSpec::bern("diabetes_treatment_ongoing", 0.112),
            AttributeSpec::bern("diabetes_visit_previous_year", 0.112),
            AttributeSpec::bern("diabetes_visit_two_years", 0.112),
            AttributeSpec::bern("diabetes_no_visit", 0.888),
            AttributeSpec::bern("hypertension_visit_this_year", 0.132),
            AttributeSpec::bern("hypertension_visit_previous_year", 0.132),
            AttributeSpec::bern("hypertension_visit_three_months", 0.132),
            AttributeSpec::bern("diabetes_medication", 0.081),
            AttributeSpec::bern("medical_visit", 0.294),
            AttributeSpec::bern("diabetes_history", 0.170),
            AttributeSpec::bern("diabetes_treatment_interruption", 0.058),
            AttributeSpec::bern("hypertension_treatment_interruption", 0.164),
        ];
        let at = |a: &str, v: f64| AtLeast { attr: a.into(), value: v };
        let below = |a: &str, v: f64| Below { attr: a.into(), value: v };
        let band = |a: &str, lo: f64, hi: f64| Band { attr: a.into(), lo, hi };
        let eq = |a: &str, v: f64| Equals { attr: a.into(), value: v };
        let flag = |a: &str| Flag { attr: a.into() };
        let predicates = vec![
            eq("health_checkup", 1.0),
            at("fasting_glucose", 126.0),
            at("fasting_glucose", 130.0),
            at("casual_glucose", 126.0),
            at("casual_glucose", 200.0),
            at("hba1c", 5.6),
            at("hba1c", 6.0),
            at("hba1c", 6.2),
            at("hba1c", 6.5),
            at("hba1c", 7.0),
            at("hba1c", 8.0),
            band("hba1c", 6.0, 6.5),
            at("diastolic", 90.0),
            at("diastolic", 100.0),
            at("diastolic", 160.0),
            at("systolic", 130.0),
            at("systolic", 140.0),
            at("systolic", 160.0),
            eq("urine_protein", 1.0),
            eq("urine_protein", 2.0),
            eq("urine_protein", 3.0),
            at("urine_protein", 1.0),
            at("urine_protein", 2.0),
            at("urine_protein", 3.0),
            at("urine_protein", 4.0),
            below("egfr", 30.0),
            below("egfr", 45.0),
            below("egfr", 50.0),
            below("egfr", 60.0),
            below("egfr", 90.0),
            at("egfr", 30.0),
            band("egfr", 30.0, 45.0),
            band("egfr", 30.0, 60.0),
            band("egfr", 30.0, 90.0),
            band("egfr", 45.0, 60.0),
            band("egfr", 60.0, 90.0),
            flag("diabetes_visit_this_year"),
            flag("diabetes_treatment_ongoing"),
            flag("diabetes_visit_previous_year"),
            flag("diabetes_visit_two_years"),
            flag("diabetes_no_visit"),
            flag("hypertension_visit_this_year"),
            flag("hypertension_visit_previous_year"),
            flag("hypertension_visit_three_months"),
            flag("diabetes_medication"),
            flag("medical_visit"),
            flag("diabetes_history"),
            flag("diabetes_treatment_interruption"),
            flag("hypertension_treatment_interruption"),
        ];
        let rules = predicates.into_iter().enumerate().map(|(i, predicate)| ItemRule { item: i as ItemId, predicate }).collect();
        Self {
            records,
            seed,
            response: vec![0.0, 0.3, 0.5, 0.6],
            improvement: 0.5,
            attributes,
            items: ThresholdTable { rules },
        }
    }

    pub fn validate(&self, methods: &MethodUniverse) -> Result<CompiledTable> {
        for a in &self.attributes {
            a.validate()?;
        }
        if self.response.len() != methods.len() {
            return Err(Error::Generation(format!(
                "{} response probabilities for {} methods",
                self.response.len(),
                methods.len()
            )));
        }
        if self.response.first() != Some(&0.0) {
            return Err(Error::Generation("response probability of method 0 must be 0".into()));
        }
        if let Some(p) = self.response.iter().chain([&self.improvement]).find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Generation(format!("probability {p} outside [0, 1]")));
        }
        self.items.compile(&self.attributes)
    }
}

/// `Y(0) = 0`, `Y(m) ~ Bernoulli(p_m)` for `m ≥ 1`, `z ~ Bernoulli(p_z)`.
pub fn sample_response(cfg: &GenConfig, rng: &mut impl Rng) -> (Vec<bool>, bool) {
    let y = cfg.response.iter().enumerate().map(|(m, &p)| m > 0 && rng.random::<f64>() < p).collect();
    let z = rng.random::<f64>() < cfg.improvement;
    (y, z)
}

/// Draws `cfg.records` records from a stream seeded by `cfg.seed` and merges
/// records with equal `(X, Y, z)` into one weighted type, in key order.
pub fn generate_population(cfg: &GenConfig) -> Result<Population> {
    let methods = MethodUniverse::health_guidance();
    let table = cfg.validate(&methods)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut counts: BTreeMap<(Vec<bool>, Vec<bool>, bool), u64> = BTreeMap::new();
    for _ in 0..cfg.records {
        let raw = sample_raw(&cfg.attributes, &mut rng)?;
        let x = binarize(&raw, &table)?;
        let (y, z) = sample_response(cfg, &mut rng);
        *counts.entry((x, y, z)).or_default() += 1;
    }
    let types = counts
        .into_iter()
        .enumerate()
        .map(|(id, ((items, responses, improves), weight))| ExamineeType { id: id as u32, weight, items, responses, improves })
        .collect();
    Population::new(ItemUniverse::range(table.len() as u32), methods, types)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(cfg: &GenConfig, set: &[(&str, f64)]) -> RawRecord {
        let mut values = vec![0.0; cfg.attributes.len()];
        for (name, v) in set {
            values[cfg.attributes.iter().position(|a| a.name == *name).unwrap()] = *v;
        }
        RawRecord { values }
    }

    fn positives(cfg: &GenConfig, set: &[(&str, f64)], range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        let table = cfg.items.compile(&cfg.attributes).unwrap();
        let x = binarize(&record(cfg, set), &table).unwrap();
        range.filter(|&i| x[i]).collect()
    }

    #[test]
    fn threshold_examples() {
        let cfg = GenConfig::health_checkup(0, 0);
        assert_eq!(positives(&cfg, &[("hba1c", 6.7)], 5..=11), vec![5, 6, 7, 8]);
        assert_eq!(positives(&cfg, &[("urine_protein", 1.0)], 18..=24), vec![18, 21]);
        assert_eq!(positives(&cfg, &[("egfr", 55.0)], 25..=35), vec![28, 29, 30, 32, 33, 34]);
        assert_eq!(positives(&cfg, &[("hba1c", 6.2)], 5..=11), vec![5, 6, 7, 11]);
    }

    #[test]
    fn table_covers_every_item_once() {
        let cfg = GenConfig::health_checkup(0, 0);
        assert_eq!(cfg.items.compile(&cfg.attributes).unwrap().len(), 49);
        let mut dup = cfg.items.clone();
        dup.rules[3].item = 2;
        assert!(dup.compile(&cfg.attributes).is_err());
        let mut unknown = cfg.items.clone();
        unknown.rules[0].predicate = Predicate::Flag { attr: "nope".into() };
        assert!(unknown.compile(&cfg.attributes).is_err());
        let table = cfg.items.compile(&cfg.attributes).unwrap();
        assert!(binarize(&RawRecord { values: vec![0.0; 3] }, &table).is_err());
    }

    #[test]
    fn responses() {
        let mut cfg = GenConfig::health_checkup(0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        cfg.response = vec![0.0; 4];
        assert_eq!(sample_response(&cfg, &mut rng).0, vec![false; 4]);
        cfg.response = vec![0.0, 1.0, 1.0, 1.0];
        assert_eq!(sample_response(&cfg, &mut rng).0, vec![false, true, true, true]);

        let cfg = GenConfig::health_checkup(0, 0);
        let n = 100_000;
        let hits = (0..n).filter(|_| sample_response(&cfg, &mut rng).0[1]).count();
        assert!((hits as f64 / n as f64 - 0.3).abs() < 0.01);
    }

    #[test]
    fn validation() {
        let methods = MethodUniverse::health_guidance();
        let mut cfg = GenConfig::health_checkup(0, 0);
        assert!(cfg.validate(&methods).is_ok());
        cfg.response[0] = 0.1;
        assert!(cfg.validate(&methods).is_err());
        for bad in [
            Distribution::TruncatedNormal { min: 5.0, max: 5.0, mean: 5.0, sd: 1.0 },
            Distribution::TruncatedNormal { min: 0.0, max: 9.0, mean: 5.0, sd: 0.0 },
            Distribution::Categorical { table: vec![(1.0, 0.5), (2.0, 0.4)] },
            Distribution::Bernoulli { p: 1.5 },
        ] {
            assert!(AttributeSpec { name: "a".into(), distribution: bad }.validate().is_err());
        }
    }

    #[test]
    fn hopeless_truncation_is_an_error() {
        let spec = AttributeSpec::tn("far", 100.0, 101.0, 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(spec.sample(&mut rng), Err(Error::Generation(_))));
    }

    #[test]
    fn populations() {
        let one = generate_population(&GenConfig::health_checkup(1, 3)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.types()[0].weight, 1);

        let a = generate_population(&GenConfig::health_checkup(2000, 9)).unwrap();
        let b = generate_population(&GenConfig::health_checkup(2000, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_weight(), 2000);
        for t in a.types() {
            assert!(t.items[21]);
            assert!(t.items[5..=10].windows(2).all(|w| w[0] >= w[1]));
            assert!(!t.responses[0]);
        }
        assert!(generate_population(&GenConfig::health_checkup(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = GenConfig::health_checkup(10, 4);
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<GenConfig>(&text).unwrap(), cfg);
    }
}
