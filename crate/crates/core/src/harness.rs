//! Experiment driver and figure data.
//!
//! Monte Carlo runs are seeded per run index, so results do not depend on
//! how runs are spread over threads. Figure series carry exact values
//! for curves whose fractions stay short; CSV output has a 6-decimal float
//! column per curve plus, for those curves, an `_exact` column holding
//! `num/den` text.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{recover, Strategy, TrialSource};
use crate::analytics::{t_cb, t_cs_with, t_q_approx, Binomials, Rational, TqTable};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::{Labeling, MaskVariant, MaskedOracle, QueryAccumulator, QueryStats};
use crate::qsim::MAX_SIM_WIDTH;

/// Environment variable naming the directory relative output paths are
/// resolved against.
pub const OUT_DIR_ENV: &str = "MASKFIND_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskTarget {
    /// Fresh uniform mask per run with `m` measurable bits.
    Weight(u32),
    /// The same mask every run.
    Mask(BitString),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n: u32,
    pub target: MaskTarget,
    pub variant: MaskVariant,
    pub strategy: Strategy,
    pub runs: u64,
    pub seed: u64,
    #[serde(default)]
    pub trial_source: TrialSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(n: u32, m: u32, strategy: Strategy, runs: u64, seed: u64) -> Self {
        Self {
            n,
            target: MaskTarget::Weight(m),
            variant: MaskVariant::And,
            strategy,
            runs,
            seed,
            trial_source: TrialSource::Fast,
            output: None,
        }
    }

    /// Number of bits the measurements range over: `wt(s)` for AND masks,
    /// `n - wt(s)` for OR masks.
    pub fn m(&self) -> u32 {
        match self.target {
            MaskTarget::Weight(m) => m,
            MaskTarget::Mask(s) => self.variant.support(s).weight(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=BitString::MAX_WIDTH).contains(&self.n) {
            return Err(Error::OutOfRange(format!("n = {} outside 2..=64", self.n)));
        }
        if self.runs == 0 {
            return Err(Error::OutOfRange("runs must be at least 1".into()));
        }
        if let MaskTarget::Mask(s) = self.target {
            if s.width() != self.n {
                return Err(Error::WidthMismatch {
                    left: self.n,
                    right: s.width(),
                });
            }
        }
        let m = self.m();
        if !(1..self.n).contains(&m) {
            return Err(Error::OutOfRange(format!(
                "m = {m} outside 1..={}",
                self.n - 1
            )));
        }
        if self.strategy != Strategy::Quantum && self.variant != MaskVariant::And {
            return Err(Error::OutOfRange(format!(
                "{} needs an AND-masked oracle",
                self.strategy
            )));
        }
        if self.strategy == Strategy::Binary && m != 1 {
            return Err(Error::OutOfRange("binary search needs m = 1".into()));
        }
        if self.strategy == Strategy::Quantum
            && self.trial_source == TrialSource::Full
            && self.n > MAX_SIM_WIDTH
        {
            return Err(Error::Capacity {
                n: self.n,
                max: MAX_SIM_WIDTH,
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Generator for run `index` of an experiment seeded with `seed`.
pub fn run_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniformly random `n`-bit string of weight `m`.
pub fn random_mask<R: Rng + ?Sized>(n: u32, m: u32, rng: &mut R) -> BitString {
    BitString::from_positions(
        n,
        sample(rng, n as usize, m as usize)
            .into_iter()
            .map(|p| p as u32),
    )
}

fn single_run(spec: &ExperimentSpec, index: u64) -> Result<u64> {
    let mut rng = run_rng(spec.seed, index);
    let m = spec.m();
    let s = match spec.target {
        MaskTarget::Mask(s) => s,
        MaskTarget::Weight(m) => {
            let support = random_mask(spec.n, m, &mut rng);
            match spec.variant {
                MaskVariant::And => support,
                MaskVariant::Or => support.complement(),
            }
        }
    };
    let labeling = Labeling::SeededRandom { seed: rng.random() };
    let mut oracle = MaskedOracle::new(spec.n, s, spec.variant, labeling)?;
    let result = recover(&mut oracle, m, spec.strategy, spec.trial_source, &mut rng)?;
    if result.s_found != s {
        return Err(Error::PromiseViolation(format!(
            "{} recovered {} instead of {s}",
            spec.strategy, result.s_found
        )));
    }
    Ok(result.queries)
}

/// Accumulated query counts of `spec.runs` independent runs.
pub fn montecarlo_accumulate(spec: &ExperimentSpec) -> Result<QueryAccumulator> {
    spec.validate()?;
    (0..spec.runs)
        .into_par_iter()
        .try_fold(QueryAccumulator::default, |mut acc, i| {
            acc.push(single_run(spec, i)?);
            Ok(acc)
        })
        .try_reduce(QueryAccumulator::default, |a, b| Ok(a.merge(b)))
}

/// Mean queries and standard error over `spec.runs` runs, each on a fresh
/// mask (unless fixed) and a fresh labeling.
pub fn montecarlo_expected_queries(spec: &ExperimentSpec) -> Result<QueryStats> {
    Ok(montecarlo_accumulate(spec)?.stats())
}

/// Visits every `n`-bit string of weight `m` in increasing order.
pub fn for_each_mask(n: u32, m: u32, mut visit: impl FnMut(BitString) -> Result<()>) -> Result<()> {
    if m > n || n > 63 {
        return Err(Error::OutOfRange(format!("cannot enumerate n={n}, m={m}")));
    }
    if m == 0 {
        return visit(BitString::zeros(n));
    }
    // Gosper's hack: next integer with the same popcount
    let mut v: u64 = (1u64 << m) - 1;
    while v < 1u64 << n {
        visit(BitString::new(n, v)?)?;
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    Ok(())
}

/// Exact mean query count of a deterministic classical strategy over all
/// `C(n, m)` masks, with the per-mask counts accumulated alongside.
pub fn exhaustive_expected_queries(
    n: u32,
    m: u32,
    strategy: Strategy,
) -> Result<(Rational, QueryAccumulator)> {
    if strategy == Strategy::Quantum {
        return Err(Error::OutOfRange(
            "exhaustive averaging needs a deterministic strategy".into(),
        ));
    }
    let mut acc = QueryAccumulator::default();
    let mut rng = run_rng(0, 0);
    for_each_mask(n, m, |s| {
        let mut oracle = MaskedOracle::new(n, s, MaskVariant::And, Labeling::Canonical)?;
        let r = recover(&mut oracle, m, strategy, TrialSource::Fast, &mut rng)?;
        if r.s_found != s {
            return Err(Error::PromiseViolation(format!(
                "{strategy} recovered {} instead of {s}",
                r.s_found
            )));
        }
        acc.push(r.queries);
        Ok(())
    })?;
    let stats = acc.stats();
    Ok((Rational::new(stats.total_queries, stats.runs), acc))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub values: Vec<f64>,
    /// Exact values, when the curve has them.
    pub exact: Option<Vec<Rational>>,
}

impl Curve {
    fn exact(label: &str, values: Vec<Rational>) -> Self {
        Self {
            label: label.to_string(),
            values: values.iter().map(Rational::to_f64).collect(),
            exact: Some(values),
        }
    }

    fn real(label: &str, values: Vec<f64>) -> Self {
        Self {
            label: label.to_string(),
            values,
            exact: None,
        }
    }
}

/// Labeled curves sampled at a common, strictly increasing `m` axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub m: Vec<u32>,
    pub curves: Vec<Curve>,
}

const EXACT_SUFFIX: &str = "_exact";

impl FigureSeries {
    pub fn curve(&self, label: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.m.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::OutOfRange(
                "m axis is not strictly increasing".into(),
            ));
        }
        for c in &self.curves {
            if c.values.len() != self.m.len()
                || c.exact.as_ref().is_some_and(|e| e.len() != self.m.len())
            {
                return Err(Error::OutOfRange(format!(
                    "curve {} has the wrong length",
                    c.label
                )));
            }
            if let Some(bad) = c.values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
                return Err(Error::OutOfRange(format!(
                    "curve {} has non-positive or non-finite value {bad}",
                    c.label
                )));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["m".to_string()];
        for c in &self.curves {
            header.push(c.label.clone());
            if c.exact.is_some() {
                header.push(format!("{}{EXACT_SUFFIX}", c.label));
            }
        }
        out.write_record(&header)?;
        for (row, m) in self.m.iter().enumerate() {
            let mut record = vec![m.to_string()];
            for c in &self.curves {
                record.push(format!("{:.6}", c.values[row]));
                if let Some(exact) = &c.exact {
                    record.push(exact[row].to_string());
                }
            }
            out.write_record(&record)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let header = input.headers()?.clone();
        if header.get(0) != Some("m") {
            return Err(Error::OutOfRange("first CSV column must be m".into()));
        }
        // column index -> (curve index, is exact column)
        let mut curves: Vec<Curve> = Vec::new();
        let mut columns = Vec::new();
        for name in header.iter().skip(1) {
            match name.strip_suffix(EXACT_SUFFIX) {
                Some(base) if curves.last().is_some_and(|c| c.label == base) => {
                    curves.last_mut().unwrap().exact = Some(Vec::new());
                    columns.push((curves.len() - 1, true));
                }
                _ => {
                    curves.push(Curve::real(name, Vec::new()));
                    columns.push((curves.len() - 1, false));
                }
            }
        }
        let mut m = Vec::new();
        let parse_err = |what: &str, text: &str| Error::OutOfRange(format!("bad {what} {text:?}"));
        for record in input.records() {
            let record = record?;
            let first = record.get(0).unwrap_or_default();
            m.push(first.parse().map_err(|_| parse_err("m", first))?);
            for (field, &(curve, exact)) in record.iter().skip(1).zip(&columns) {
                if exact {
                    curves[curve].exact.as_mut().unwrap().push(field.parse()?);
                } else {
                    curves[curve]
                        .values
                        .push(field.parse().map_err(|_| parse_err("value", field))?);
                }
            }
        }
        let series = Self { m, curves };
        series.validate()?;
        Ok(series)
    }

    /// Equal axes and labels, identical exact values, float values within
    /// `tolerance`.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.m == other.m
            && self.curves.len() == other.curves.len()
            && self.curves.iter().zip(&other.curves).all(|(a, b)| {
                a.label == b.label
                    && a.exact == b.exact
                    && a.values.len() == b.values.len()
                    && a.values
                        .iter()
                        .zip(&b.values)
                        .all(|(x, y)| (x - y).abs() <= tolerance)
            })
    }
}

/// Quantum expectation (exact recurrence, rounded) and its `2 + log2 m`
/// estimate for `1 <= m <= m_max`. The quantum curve has no exact column:
/// its reduced fractions run to thousands of digits; `TqTable` holds them.
pub fn figure1_series(m_max: u32) -> Result<FigureSeries> {
    if m_max == 0 {
        return Err(Error::OutOfRange("m_max must be at least 1".into()));
    }
    let table = TqTable::up_to(m_max);
    let m: Vec<u32> = (1..=m_max).collect();
    let tq = m.iter().map(|&k| table.to_f64(k)).collect();
    let approx = m.iter().map(|&k| t_q_approx(k)).collect::<Result<_>>()?;
    let series = FigureSeries {
        m,
        curves: vec![Curve::real("t_q", tq), Curve::real("t_q_approx", approx)],
    };
    series.validate()?;
    Ok(series)
}

/// Quantum expectation against both classical searches for
/// `1 <= m <= n - 1`.
pub fn figure3_series(n: u32) -> Result<FigureSeries> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let table = TqTable::up_to(n - 1);
    let binomials = Binomials::new(n as usize);
    let m: Vec<u32> = (1..n).collect();
    let tq = m.iter().map(|&k| table.to_f64(k)).collect();
    let tcb = m
        .iter()
        .map(|&k| Ok(Rational::from_integer(t_cb(n, k)?)))
        .collect::<Result<_>>()?;
    let tcs = m
        .iter()
        .map(|&k| t_cs_with(&binomials, n, k))
        .collect::<Result<_>>()?;
    let series = FigureSeries {
        m,
        curves: vec![
            Curve::real("t_q", tq),
            Curve::exact("t_cb", tcb),
            Curve::exact("t_cs", tcs),
        ],
    };
    series.validate()?;
    Ok(series)
}

/// Run record written next to every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters,
        }
    }

    /// `<output>.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_next_to(&self, output: &Path) -> Result<PathBuf> {
        let path = Self::path_for(output);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// Resolves a relative output path against [`OUT_DIR_ENV`] when set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `series` as CSV to `path` plus its manifest.
pub fn emit_series(series: &FigureSeries, path: &Path, manifest: &RunManifest) -> Result<PathBuf> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let file = fs::File::create(path)?;
    series.write_csv(std::io::BufWriter::new(file))?;
    manifest.write_next_to(path)
}

pub fn emit_figure1(m_max: u32, path: &Path) -> Result<FigureSeries> {
    let series = figure1_series(m_max)?;
    let manifest = RunManifest::new("figures", serde_json::json!({ "which": 1, "m_max": m_max }));
    emit_series(&series, path, &manifest)?;
    Ok(series)
}

pub fn emit_figure3(n: u32, path: &Path) -> Result<FigureSeries> {
    let series = figure3_series(n)?;
    let manifest = RunManifest::new("figures", serde_json::json!({ "which": 3, "n": n }));
    emit_series(&series, path, &manifest)?;
    Ok(series)
}
