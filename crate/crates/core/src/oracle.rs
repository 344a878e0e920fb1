//! Promised black-box functions with a hidden mask.
//!
//! An AND-masked oracle satisfies `f(x) = f(y)` iff `x & s == y & s`; an
//! OR-masked one satisfies `g(x) = g(y)` iff `x | s == y | s`. Outputs are
//! computed on demand from the class representative, so oracles of any
//! width up to 64 cost nothing to build.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// Largest width for which a full truth table is materialized.
pub const MAX_TABLE_WIDTH: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskVariant {
    And,
    Or,
}

impl MaskVariant {
    /// Class representative of `x` under mask `s`.
    #[inline]
    pub fn representative(self, x: BitString, s: BitString) -> BitString {
        match self {
            MaskVariant::And => x & s,
            MaskVariant::Or => x | s,
        }
    }

    /// Bits on which measured strings are supported: `s` itself for AND,
    /// its complement for OR.
    #[inline]
    pub fn support(self, s: BitString) -> BitString {
        match self {
            MaskVariant::And => s,
            MaskVariant::Or => s.complement(),
        }
    }
}

impl fmt::Display for MaskVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaskVariant::And => "and",
            MaskVariant::Or => "or",
        })
    }
}

impl FromStr for MaskVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "and" => Ok(MaskVariant::And),
            "or" => Ok(MaskVariant::Or),
            other => Err(Error::OutOfRange(format!("unknown mask variant {other:?}"))),
        }
    }
}

/// How class representatives are mapped to output labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Labeling {
    /// Each representative is its own label.
    Canonical,
    /// A reproducible pseudo-random injection keyed by `seed`.
    SeededRandom { seed: u64 },
}

/// Keyed bijection on `width`-bit integers: rounds of odd multiply, add
/// and xor-shift, each invertible modulo `2^width`.
#[derive(Clone, Debug)]
struct LabelPermutation {
    mask: u64,
    shift: u32,
    rounds: [(u64, u64); 3],
}

impl LabelPermutation {
    fn new(width: u32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        let rounds = [(); 3].map(|_| (rng.random::<u64>() | 1, rng.random::<u64>()));
        Self {
            mask,
            shift: width.div_ceil(2).max(1),
            rounds,
        }
    }

    fn apply(&self, mut x: u64) -> u64 {
        for &(mul, add) in &self.rounds {
            x = x.wrapping_mul(mul).wrapping_add(add) & self.mask;
            x ^= x >> self.shift;
        }
        x
    }
}

/// Serializable description of an oracle, as recorded in run manifests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub n: u32,
    pub s: BitString,
    pub variant: MaskVariant,
    pub labeling: Labeling,
}

#[derive(Clone, Debug)]
pub struct MaskedOracle {
    s: BitString,
    variant: MaskVariant,
    labeling: Labeling,
    permutation: Option<LabelPermutation>,
    queries: u64,
}

impl MaskedOracle {
    /// Builds an oracle of width `n` honoring the promise for mask `s`.
    /// Trivial masks (all zeros or all ones) are rejected.
    pub fn new(n: u32, s: BitString, variant: MaskVariant, labeling: Labeling) -> Result<Self> {
        if !(1..=BitString::MAX_WIDTH).contains(&n) {
            return Err(Error::InvalidWidth(n));
        }
        if s.width() != n {
            return Err(Error::WidthMismatch {
                left: n,
                right: s.width(),
            });
        }
        if s.is_zero() || s.is_ones() {
            return Err(Error::TrivialMask(s.to_string()));
        }
        let permutation = match labeling {
            Labeling::Canonical => None,
            Labeling::SeededRandom { seed } => Some(LabelPermutation::new(n, seed)),
        };
        Ok(Self {
            s,
            variant,
            labeling,
            permutation,
            queries: 0,
        })
    }

    pub fn from_spec(spec: &OracleSpec) -> Result<Self> {
        Self::new(spec.n, spec.s, spec.variant, spec.labeling)
    }

    pub fn spec(&self) -> OracleSpec {
        OracleSpec {
            n: self.width(),
            s: self.s,
            variant: self.variant,
            labeling: self.labeling,
        }
    }

    pub fn width(&self) -> u32 {
        self.s.width()
    }

    /// The hidden mask. Only simulators and checks should look at this.
    pub fn mask(&self) -> BitString {
        self.s
    }

    pub fn variant(&self) -> MaskVariant {
        self.variant
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    /// Output for `x` without touching the query counter.
    pub fn peek(&self, x: BitString) -> Result<BitString> {
        if x.width() != self.width() {
            return Err(Error::WidthMismatch {
                left: self.width(),
                right: x.width(),
            });
        }
        let rep = self.variant.representative(x, self.s);
        let label = match &self.permutation {
            None => rep.bits(),
            Some(p) => p.apply(rep.bits()),
        };
        BitString::new(self.width(), label)
    }

    /// One metered query.
    pub fn evaluate(&mut self, x: BitString) -> Result<BitString> {
        let y = self.peek(x)?;
        self.queries += 1;
        Ok(y)
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    /// Counts one query made through a channel other than [`evaluate`],
    /// such as one application of the quantum oracle gate.
    ///
    /// [`evaluate`]: MaskedOracle::evaluate
    pub fn record_query(&mut self) {
        self.queries += 1;
    }

    pub fn reset_queries(&mut self) {
        self.queries = 0;
    }

    /// Output labels indexed by input value, unmetered. Width must be at
    /// most [`MAX_TABLE_WIDTH`].
    pub fn truth_table(&self) -> Result<Vec<u64>> {
        let n = self.width();
        if n > MAX_TABLE_WIDTH {
            return Err(Error::Capacity {
                n,
                max: MAX_TABLE_WIDTH,
            });
        }
        (0..1u64 << n)
            .map(|x| Ok(self.peek(BitString::new(n, x)?)?.bits()))
            .collect()
    }
}

/// Result of checking a truth table against the mask promise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum PromiseCheck {
    Holds {
        mask: BitString,
    },
    /// The table is not mask-invariant at all: `x` and `y` witness it.
    Violation {
        x: BitString,
        y: BitString,
    },
    /// The table is mask-invariant, but for a mask of another weight.
    WeightMismatch {
        mask: BitString,
        claimed: u32,
    },
}

impl PromiseCheck {
    pub fn holds(&self) -> Option<BitString> {
        match self {
            PromiseCheck::Holds { mask } => Some(*mask),
            _ => None,
        }
    }
}

/// Exhaustively checks whether `table` (outputs indexed by input value)
/// satisfies the `variant` promise for a mask of weight `claimed_m`.
///
/// Under the AND promise, flipping bit `i` changes the output exactly
/// when `s_i = 1`, so the only candidate mask is read off from `f(0)`
/// and its single-bit neighbours. The candidate is then confirmed over
/// the whole table: every input agrees with its class representative and
/// distinct representatives carry distinct labels. The OR promise is
/// checked through its dual: `x -> g(!x)` is AND-invariant under `!s`.
pub fn verify_promise(
    table: &[u64],
    n: u32,
    claimed_m: u32,
    variant: MaskVariant,
) -> Result<PromiseCheck> {
    if !(1..=MAX_TABLE_WIDTH).contains(&n) {
        return Err(Error::Capacity {
            n,
            max: MAX_TABLE_WIDTH,
        });
    }
    if table.len() as u64 != 1u64 << n {
        return Err(Error::OutOfRange(format!(
            "table has {} entries, expected 2^{n}",
            table.len()
        )));
    }
    let all = (1u64 << n) - 1;
    // Re-index so that the AND check applies to both variants.
    let at = |x: u64| match variant {
        MaskVariant::And => table[x as usize],
        MaskVariant::Or => table[(!x & all) as usize],
    };
    let bs = |v: u64| BitString::new(n, v).expect("value within width");
    let un_dual = |v: u64| match variant {
        MaskVariant::And => bs(v),
        MaskVariant::Or => bs(!v & all),
    };

    let base = at(0);
    let candidate = (0..n)
        .filter(|&i| at(1u64 << i) != base)
        .fold(0u64, |acc, i| acc | (1u64 << i));

    let mut owner: HashMap<u64, u64> = HashMap::new();
    for x in 0..=all {
        let rep = x & candidate;
        if at(x) != at(rep) {
            return Ok(PromiseCheck::Violation {
                x: un_dual(x),
                y: un_dual(rep),
            });
        }
        if rep == x {
            if let Some(&other) = owner.get(&at(x)) {
                return Ok(PromiseCheck::Violation {
                    x: un_dual(other),
                    y: un_dual(x),
                });
            }
            owner.insert(at(x), x);
        }
    }

    let mask = match variant {
        MaskVariant::And => bs(candidate),
        MaskVariant::Or => bs(!candidate & all),
    };
    if mask.weight() == claimed_m {
        Ok(PromiseCheck::Holds { mask })
    } else {
        Ok(PromiseCheck::WeightMismatch {
            mask,
            claimed: claimed_m,
        })
    }
}

/// Aggregated query counts over a batch of runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryStats {
    pub runs: u64,
    pub total_queries: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Mergeable running sums. Integer sums keep merging exact and
/// independent of order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryAccumulator {
    runs: u64,
    sum: u64,
    sum_sq: u128,
}

impl QueryAccumulator {
    pub fn push(&mut self, queries: u64) {
        self.runs += 1;
        self.sum += queries;
        self.sum_sq += u128::from(queries) * u128::from(queries);
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.runs += other.runs;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    pub fn runs(&self) -> u64 {
        self.runs
    }

    /// Mean and standard error of the mean (sample variance with `n - 1`).
    pub fn stats(&self) -> QueryStats {
        let runs = self.runs;
        if runs == 0 {
            return QueryStats {
                runs,
                total_queries: 0,
                mean: 0.0,
                std_error: 0.0,
            };
        }
        let r = runs as f64;
        let mean = self.sum as f64 / r;
        let std_error = if runs > 1 {
            // n*sum_sq - sum^2 is exact in integers
            let spread = (u128::from(runs) * self.sum_sq)
                .saturating_sub(u128::from(self.sum) * u128::from(self.sum));
            let variance = spread as f64 / (r * (r - 1.0));
            (variance / r).sqrt()
        } else {
            0.0
        };
        QueryStats {
            runs,
            total_queries: self.sum,
            mean,
            std_error,
        }
    }
}

impl FromIterator<u64> for QueryAccumulator {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut acc = Self::default();
        iter.into_iter().for_each(|q| acc.push(q));
        acc
    }
}
