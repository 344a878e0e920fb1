//! Mask recovery procedures and their exact query accounting.
//!
//! The quantum procedure repeats the circuit and folds the measured
//! strings together until the promised weight is reached. The classical
//! procedures compare `f(probe)` against `f(0)`: under the AND promise the
//! two agree exactly when the probe misses every one-bit of `s`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::ceil_log2;
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::{MaskVariant, MaskedOracle};
use crate::qsim::{run_trial_fast, run_trial_full, TrialOutcome};

/// Trials after which a quantum run that has not reached the promised
/// weight is declared a promise violation. A correct promise fails to
/// finish within this many trials with probability below `m * 2^-512`.
pub const TRIAL_LIMIT: u64 = 512;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialSource {
    /// State-vector simulation, `n <= 10`.
    Full,
    /// Direct sampling of the measurement distribution, any `n`.
    #[default]
    Fast,
}

impl fmt::Display for TrialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialSource::Full => "full",
            TrialSource::Fast => "fast",
        })
    }
}

impl FromStr for TrialSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TrialSource::Full),
            "fast" => Ok(TrialSource::Fast),
            other => Err(Error::OutOfRange(format!("unknown trial source {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Quantum,
    /// Binary search for a single one-bit.
    Binary,
    /// Binary search repeated once per one-bit.
    BinaryAdapted,
    Sequential,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Quantum,
        Strategy::Binary,
        Strategy::BinaryAdapted,
        Strategy::Sequential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Quantum => "quantum",
            Strategy::Binary => "binary",
            Strategy::BinaryAdapted => "binary-adapted",
            Strategy::Sequential => "sequential",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum TranscriptEntry {
    Trial {
        k: BitString,
        accumulated: BitString,
    },
    Probe {
        input: BitString,
        output: BitString,
        /// `None` for the reference query `f(0)`.
        differs_from_zero: Option<bool>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub s_found: BitString,
    pub queries: u64,
    pub trials: u64,
    pub transcript: Vec<TranscriptEntry>,
}

fn require_variant(oracle: &MaskedOracle, variant: MaskVariant) -> Result<()> {
    if oracle.variant() == variant {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "this procedure needs a {variant}-masked oracle, got {}",
            oracle.variant()
        )))
    }
}

fn require_weight_range(n: u32, m: u32) -> Result<()> {
    if (1..n).contains(&m) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "weight {m} outside 1..={}",
            n - 1
        )))
    }
}

fn one_trial<R: Rng + ?Sized>(
    oracle: &mut MaskedOracle,
    source: TrialSource,
    rng: &mut R,
) -> Result<TrialOutcome> {
    match source {
        TrialSource::Full => run_trial_full(oracle, rng),
        TrialSource::Fast => {
            oracle.record_query();
            Ok(run_trial_fast(oracle.mask(), oracle.variant(), rng))
        }
    }
}

/// Recovers `s` from an AND-masked oracle with `wt(s) = m` by OR-ing
/// measured strings until the accumulated weight reaches `m`.
pub fn quantum_find_s<R: Rng + ?Sized>(
    oracle: &mut MaskedOracle,
    m: u32,
    source: TrialSource,
    rng: &mut R,
) -> Result<RecoveryResult> {
    require_variant(oracle, MaskVariant::And)?;
    let n = oracle.width();
    require_weight_range(n, m)?;
    let start = oracle.query_count();

    let mut acc = BitString::zeros(n);
    let mut transcript = Vec::new();
    let mut trials = 0;
    while acc.weight() < m {
        if trials == TRIAL_LIMIT {
            return Err(Error::PromiseViolation(format!(
                "accumulated weight stuck at {} < {m} after {trials} trials",
                acc.weight()
            )));
        }
        let k = one_trial(oracle, source, rng)?.k;
        trials += 1;
        acc = acc | k;
        transcript.push(TranscriptEntry::Trial {
            k,
            accumulated: acc,
        });
        if acc.weight() > m {
            return Err(Error::PromiseViolation(format!(
                "accumulated {acc} has weight {} > promised {m}",
                acc.weight()
            )));
        }
    }

    Ok(RecoveryResult {
        s_found: acc,
        queries: oracle.query_count() - start,
        trials,
        transcript,
    })
}

/// Recovers `s` from an OR-masked oracle with `wt(s) = n - m`. Measured
/// strings live on the zeros of `s`; their complements are AND-ed until
/// the accumulated weight falls to `n - m`.
pub fn quantum_find_s_or<R: Rng + ?Sized>(
    oracle: &mut MaskedOracle,
    m: u32,
    source: TrialSource,
    rng: &mut R,
) -> Result<RecoveryResult> {
    require_variant(oracle, MaskVariant::Or)?;
    let n = oracle.width();
    require_weight_range(n, m)?;
    let target = n - m;
    let start = oracle.query_count();

    let mut acc = BitString::ones(n);
    let mut transcript = Vec::new();
    let mut trials = 0;
    while acc.weight() > target {
        if trials == TRIAL_LIMIT {
            return Err(Error::PromiseViolation(format!(
                "accumulated weight stuck at {} > {target} after {trials} trials",
                acc.weight()
            )));
        }
        let k = one_trial(oracle, source, rng)?.k;
        trials += 1;
        acc = acc & k.complement();
        transcript.push(TranscriptEntry::Trial {
            k,
            accumulated: acc,
        });
        if acc.weight() < target {
            return Err(Error::PromiseViolation(format!(
                "accumulated {acc} has weight {} < promised {target}",
                acc.weight()
            )));
        }
    }

    Ok(RecoveryResult {
        s_found: acc,
        queries: oracle.query_count() - start,
        trials,
        transcript,
    })
}

/// Query log for the classical searches. Every probe is compared with the
/// reference output `f(0)`.
struct Prober<'a> {
    oracle: &'a mut MaskedOracle,
    zero_output: BitString,
    transcript: Vec<TranscriptEntry>,
    start: u64,
}

impl<'a> Prober<'a> {
    fn new(oracle: &'a mut MaskedOracle) -> Result<Self> {
        require_variant(oracle, MaskVariant::And)?;
        let start = oracle.query_count();
        let zero = BitString::zeros(oracle.width());
        let zero_output = oracle.evaluate(zero)?;
        Ok(Self {
            oracle,
            zero_output,
            transcript: vec![TranscriptEntry::Probe {
                input: zero,
                output: zero_output,
                differs_from_zero: None,
            }],
            start,
        })
    }

    /// True when `probe` hits at least one one-bit of `s`.
    fn hits(&mut self, probe: BitString) -> Result<bool> {
        let output = self.oracle.evaluate(probe)?;
        let differs = output != self.zero_output;
        self.transcript.push(TranscriptEntry::Probe {
            input: probe,
            output,
            differs_from_zero: Some(differs),
        });
        Ok(differs)
    }

    fn finish(self, s_found: BitString) -> RecoveryResult {
        RecoveryResult {
            s_found,
            queries: self.oracle.query_count() - self.start,
            trials: 0,
            transcript: self.transcript,
        }
    }
}

/// Locates the single one-bit of `s` (`wt(s) = 1`) with the fixed probe
/// family `a^(l)`: position `p` is set in `a^(l)` iff bit `l-1` of `p` is
/// set. Probes run from the coarsest (`l = ceil(log2 n)`, left/right
/// halves) to the finest (alternating bits); each answer is one bit of
/// the position index, so every mask costs exactly `1 + ceil(log2 n)`.
pub fn classical_binary_search_m1(oracle: &mut MaskedOracle) -> Result<RecoveryResult> {
    let n = oracle.width();
    let levels = ceil_log2(u64::from(n))?;
    let mut prober = Prober::new(oracle)?;
    let mut index = 0u64;
    for level in (0..levels).rev() {
        let probe = BitString::from_positions(n, (0..n).filter(|p| (p >> level) & 1 == 1));
        if prober.hits(probe)? {
            index |= 1 << level;
        }
    }
    if index >= u64::from(n) {
        return Err(Error::PromiseViolation(format!(
            "answers point at position {index} of a {n}-bit mask"
        )));
    }
    Ok(prober.finish(BitString::unit(n, index as u32)))
}

/// Probes `b^(1), b^(2), ...` (single set bits, left to right) and reads
/// `s_i` off each answer. Stops once `m` ones or `n - m` zeros have been
/// seen, since the weight promise then fixes the remaining bits.
pub fn classical_sequential_search(oracle: &mut MaskedOracle, m: u32) -> Result<RecoveryResult> {
    let n = oracle.width();
    require_weight_range(n, m)?;
    let mut prober = Prober::new(oracle)?;
    let mut s = BitString::zeros(n);
    let (mut ones, mut zeros) = (0, 0);
    let mut next = 0;
    while ones < m && zeros < n - m {
        if prober.hits(BitString::unit(n, next))? {
            s = s.with_bit(next, true);
            ones += 1;
        } else {
            zeros += 1;
        }
        next += 1;
    }
    if ones < m {
        // all zeros located; the rest are ones
        for p in next..n {
            s = s.with_bit(p, true);
        }
    }
    Ok(prober.finish(s))
}

/// Finds the `m` one-bits one at a time. Each round binary-searches the
/// positions not yet known to be ones: the candidate set is split into a
/// left part of `floor(r/2)` and a right part of `ceil(r/2)` positions,
/// and the probe sets exactly the right part (found ones stay pinned to
/// 0). A hit keeps the right part, a miss the left. Round `h` costs at
/// most `ceil(log2(n - h + 1))` probes.
pub fn classical_binary_search_adapted(
    oracle: &mut MaskedOracle,
    m: u32,
) -> Result<RecoveryResult> {
    let n = oracle.width();
    require_weight_range(n, m)?;
    let mut prober = Prober::new(oracle)?;
    let mut found = BitString::zeros(n);
    for _ in 0..m {
        let mut candidates: Vec<u32> = (0..n).filter(|&p| !found.get(p)).collect();
        while candidates.len() > 1 {
            let right = candidates.split_off(candidates.len() / 2);
            if prober.hits(BitString::from_positions(n, right.iter().copied()))? {
                candidates = right;
            }
        }
        found = found.with_bit(candidates[0], true);
    }
    Ok(prober.finish(found))
}

/// Runs `strategy` against `oracle`. `m` is the number of bits the
/// quantum measurements range over: `wt(s)` for AND oracles and
/// `n - wt(s)` for OR oracles (classical strategies need AND oracles).
pub fn recover<R: Rng + ?Sized>(
    oracle: &mut MaskedOracle,
    m: u32,
    strategy: Strategy,
    source: TrialSource,
    rng: &mut R,
) -> Result<RecoveryResult> {
    let before = oracle.query_count();
    let result = match strategy {
        Strategy::Quantum => match oracle.variant() {
            MaskVariant::And => quantum_find_s(oracle, m, source, rng),
            MaskVariant::Or => quantum_find_s_or(oracle, m, source, rng),
        },
        Strategy::Binary if m != 1 => Err(Error::OutOfRange(format!(
            "binary search needs wt(s) = 1, got {m}"
        ))),
        Strategy::Binary => classical_binary_search_m1(oracle),
        Strategy::BinaryAdapted => classical_binary_search_adapted(oracle, m),
        Strategy::Sequential => classical_sequential_search(oracle, m),
    }?;
    debug_assert_eq!(result.queries, oracle.query_count() - before);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::t_cb;
    use crate::oracle::Labeling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn and_oracle(s: BitString, seed: u64) -> MaskedOracle {
        MaskedOracle::new(
            s.width(),
            s,
            MaskVariant::And,
            Labeling::SeededRandom { seed },
        )
        .unwrap()
    }

    fn masks(n: u32, m: u32) -> impl Iterator<Item = BitString> {
        (0..1u64 << n)
            .filter(move |v| v.count_ones() == m)
            .map(move |v| BitString::new(n, v).unwrap())
    }

    #[test]
    fn worked_example_accumulation() {
        // Replay k = 010 then 100 through the accumulation rule.
        let mut acc = BitString::zeros(3);
        for k in ["010", "100"] {
            acc = acc | b(k);
        }
        assert_eq!(acc, b("110"));

        // And through the driver: find a seed whose first trials are 010, 100.
        let seed = (0..10_000u64)
            .find(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut o = and_oracle(b("110"), 0);
                let r = quantum_find_s(&mut o, 2, TrialSource::Fast, &mut rng).unwrap();
                let ks: Vec<_> = r
                    .transcript
                    .iter()
                    .map(|e| match e {
                        TranscriptEntry::Trial { k, .. } => *k,
                        _ => unreachable!(),
                    })
                    .collect();
                ks == [b("010"), b("100")]
            })
            .expect("some seed reproduces the worked example");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut o = and_oracle(b("110"), 0);
        let r = quantum_find_s(&mut o, 2, TrialSource::Fast, &mut rng).unwrap();
        assert_eq!(r.s_found, b("110"));
        assert_eq!(r.queries, 2);
        assert_eq!(r.trials, 2);
        assert_eq!(o.query_count(), 2);
    }

    #[test]
    fn quantum_accumulation_is_monotone() {
        let s = b("1101001110");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for source in [TrialSource::Fast, TrialSource::Full] {
            let mut o = and_oracle(s, 1);
            let r = quantum_find_s(&mut o, s.weight(), source, &mut rng).unwrap();
            assert_eq!(r.s_found, s);
            assert_eq!(r.queries, r.trials);
            assert_eq!(r.queries as usize, r.transcript.len());
            let mut last = 0;
            for e in &r.transcript {
                let TranscriptEntry::Trial { k, accumulated } = e else {
                    panic!("unexpected probe");
                };
                assert_eq!(*k & s, *k);
                assert!(accumulated.weight() >= last && accumulated.weight() <= s.weight());
                last = accumulated.weight();
            }
        }
    }

    #[test]
    fn quantum_rejects_wrong_promises() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut o = and_oracle(b("0111"), 0);
        let short = quantum_find_s(&mut o, 1, TrialSource::Fast, &mut rng).unwrap();
        assert_eq!(short.s_found.weight(), 1);
        assert_eq!(short.s_found & b("0111"), short.s_found);

        let mut o = and_oracle(b("0100"), 0);
        let err = quantum_find_s(&mut o, 2, TrialSource::Fast, &mut rng).unwrap_err();
        assert!(matches!(err, Error::PromiseViolation(_)));
        assert_eq!(o.query_count(), TRIAL_LIMIT);

        let mut o = and_oracle(b("0100"), 0);
        assert!(quantum_find_s(&mut o, 4, TrialSource::Fast, &mut rng).is_err());
        let mut g = MaskedOracle::new(4, b("0100"), MaskVariant::Or, Labeling::Canonical).unwrap();
        assert!(quantum_find_s(&mut g, 1, TrialSource::Fast, &mut rng).is_err());
        assert!(classical_sequential_search(&mut g, 1).is_err());
    }

    #[test]
    fn or_driver_mirrors_and_driver() {
        for s in masks(6, 2).chain(masks(6, 5)) {
            let dual = s.complement();
            let m = dual.weight();
            for seed in 0..5 {
                let mut g =
                    MaskedOracle::new(6, s, MaskVariant::Or, Labeling::SeededRandom { seed })
                        .unwrap();
                let mut f = and_oracle(dual, seed);
                let or_run = quantum_find_s_or(
                    &mut g,
                    m,
                    TrialSource::Fast,
                    &mut ChaCha8Rng::seed_from_u64(seed),
                )
                .unwrap();
                let and_run = quantum_find_s(
                    &mut f,
                    m,
                    TrialSource::Fast,
                    &mut ChaCha8Rng::seed_from_u64(seed),
                )
                .unwrap();
                assert_eq!(or_run.s_found, s);
                assert_eq!(and_run.s_found, dual);
                assert_eq!(or_run.queries, and_run.queries);
                for (a, b) in or_run.transcript.iter().zip(&and_run.transcript) {
                    match (a, b) {
                        (
                            TranscriptEntry::Trial {
                                k: ka,
                                accumulated: aa,
                            },
                            TranscriptEntry::Trial {
                                k: kb,
                                accumulated: ab,
                            },
                        ) => {
                            assert_eq!(ka, kb);
                            assert_eq!(*aa, ab.complement());
                        }
                        _ => panic!("unexpected probe"),
                    }
                }
            }
        }
    }

    #[test]
    fn binary_m1_examples() {
        // n = 2^t, s = 10...0: every probe agrees with f(0)
        for t in 1..=6u32 {
            let n = 1u32 << t;
            let mut o = and_oracle(BitString::unit(n, 0), 3);
            let r = classical_binary_search_m1(&mut o).unwrap();
            assert_eq!(r.s_found, BitString::unit(n, 0));
            assert_eq!(r.queries, u64::from(t) + 1);
            assert!(r.transcript.iter().all(|e| matches!(
                e,
                TranscriptEntry::Probe {
                    differs_from_zero: None | Some(false),
                    ..
                }
            )));
        }
        // s = 010...0 differs only at the finest probe
        let mut o = and_oracle(BitString::unit(8, 1), 3);
        let r = classical_binary_search_m1(&mut o).unwrap();
        let answers: Vec<_> = r
            .transcript
            .iter()
            .filter_map(|e| match e {
                TranscriptEntry::Probe {
                    differs_from_zero, ..
                } => *differs_from_zero,
                _ => None,
            })
            .collect();
        assert_eq!(answers, [false, false, true]);
        assert!(matches!(
            r.transcript[1],
            TranscriptEntry::Probe { input, .. } if input == b("00001111")
        ));

        for p in 0..8 {
            let mut o = and_oracle(BitString::unit(8, p), 7);
            assert_eq!(classical_binary_search_m1(&mut o).unwrap().queries, 4);
        }
        for p in 0..5 {
            let mut o = and_oracle(BitString::unit(5, p), 7);
            let r = classical_binary_search_m1(&mut o).unwrap();
            assert_eq!(r.s_found, BitString::unit(5, p));
            assert!(r.queries <= 4);
        }
    }

    #[test]
    fn binary_m1_detects_inconsistent_answers() {
        // wt(s) = 2 breaks the promise; positions 3 and 4 OR together to 7 >= 5
        let mut o = and_oracle(b("00011"), 0);
        assert!(matches!(
            classical_binary_search_m1(&mut o),
            Err(Error::PromiseViolation(_))
        ));
    }

    #[test]
    fn sequential_examples() {
        let n = 7;
        let mut o = and_oracle(b("0111111"), 0);
        let r = classical_sequential_search(&mut o, n - 1).unwrap();
        assert_eq!((r.s_found, r.queries), (b("0111111"), 2));

        let mut o = and_oracle(b("1011111"), 0);
        assert_eq!(
            classical_sequential_search(&mut o, n - 1).unwrap().queries,
            3
        );

        let mut o = and_oracle(b("1111110"), 0);
        let r = classical_sequential_search(&mut o, n - 1).unwrap();
        assert_eq!((r.s_found, r.queries), (b("1111110"), u64::from(n)));

        let mut o = and_oracle(b("1100000"), 0);
        let r = classical_sequential_search(&mut o, 2).unwrap();
        assert_eq!((r.s_found, r.queries), (b("1100000"), 3));

        // 0...011 is settled by its first n-2 zeros
        let mut o = and_oracle(b("0000011"), 0);
        let r = classical_sequential_search(&mut o, 2).unwrap();
        assert_eq!((r.s_found, r.queries), (b("0000011"), u64::from(n) - 1));
    }

    #[test]
    fn adapted_binary_search_bounds() {
        for n in [6u32, 8] {
            let mut worst = 0;
            for s in masks(n, 2) {
                let mut o = and_oracle(s, u64::from(n));
                let r = classical_binary_search_adapted(&mut o, 2).unwrap();
                assert_eq!(r.s_found, s);
                assert!(r.queries <= t_cb(n, 2).unwrap());
                worst = worst.max(r.queries);
            }
            assert_eq!(worst, 7, "n={n}");
        }
        for n in [2u32, 4, 8, 16] {
            for s in masks(n, 1) {
                let mut o = and_oracle(s, 0);
                let r = classical_binary_search_adapted(&mut o, 1).unwrap();
                assert_eq!(r.queries, u64::from(ceil_log2(u64::from(n)).unwrap()) + 1);
            }
        }
    }

    #[test]
    fn adapted_probe_pins_found_bits() {
        // The last bit is found first and stays 0 in later probes; the
        // seven remaining positions split 3 | 4.
        let mut o = and_oracle(b("10000001"), 0);
        let r = classical_binary_search_adapted(&mut o, 2).unwrap();
        assert_eq!(r.s_found, b("10000001"));
        let probes: Vec<BitString> = r
            .transcript
            .iter()
            .map(|e| match e {
                TranscriptEntry::Probe { input, .. } => *input,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(probes[1], b("00001111"));
        assert_eq!(probes[4], b("00011110"));
        assert_eq!(r.queries, 6);
    }

    #[test]
    fn recover_dispatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = BitString::unit(16, 9);
        let mut o = and_oracle(s, 0);
        let r = recover(
            &mut o,
            1,
            Strategy::BinaryAdapted,
            TrialSource::Fast,
            &mut rng,
        )
        .unwrap();
        assert_eq!((r.s_found, r.queries), (s, 5));
        assert!(recover(&mut o, 2, Strategy::Binary, TrialSource::Fast, &mut rng).is_err());
        assert_eq!(
            "binary-adapted".parse::<Strategy>().unwrap(),
            Strategy::BinaryAdapted
        );
        assert!(matches!(
            "grover".parse::<Strategy>(),
            Err(Error::UnknownStrategy(_))
        ));

        let mut g = MaskedOracle::new(3, b("011"), MaskVariant::Or, Labeling::Canonical).unwrap();
        let r = recover(&mut g, 1, Strategy::Quantum, TrialSource::Full, &mut rng).unwrap();
        assert_eq!(r.s_found, b("011"));
    }

    #[test]
    fn every_strategy_recovers_every_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=7u32 {
            for bits in 1..(1u64 << n) - 1 {
                let s = BitString::new(n, bits).unwrap();
                let m = s.weight();
                for strategy in Strategy::ALL {
                    if strategy == Strategy::Binary && m != 1 {
                        continue;
                    }
                    let mut o = and_oracle(s, bits);
                    let r = recover(&mut o, m, strategy, TrialSource::Fast, &mut rng).unwrap();
                    assert_eq!(r.s_found, s, "{strategy} n={n} s={s}");
                    assert_eq!(r.queries, o.query_count());
                }
            }
        }
    }
}
