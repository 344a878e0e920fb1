//! State-vector simulation of the two-register mask-finding circuit.
//!
//! The circuit is: prepare `|0>|0>`, Hadamard every qubit of the first
//! register, apply `U_f |x>|y> = |x>|y + f(x) mod 2^n>`, Hadamard the first
//! register again, and measure it. A measured `k` is always a uniformly
//! random sub-mask of `s` (AND promise) or of `!s` (OR promise), which is
//! what the fast sampler draws directly.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::oracle::{MaskVariant, MaskedOracle};

/// Largest register width the full simulator accepts (2^20 amplitudes).
pub const MAX_SIM_WIDTH: u32 = 10;

/// Amplitudes over both registers, indexed by `(x << n) | y` where `x` is
/// the first register and `y` the second.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>|0...0>`.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidWidth(n));
        }
        if n > MAX_SIM_WIDTH {
            return Err(Error::Capacity {
                n,
                max: MAX_SIM_WIDTH,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << (2 * n)];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Basis state `|x>|y>`.
    pub fn basis(n: u32, x: u64, y: u64) -> Result<Self> {
        let mut state = Self::new(n)?;
        let dim = 1u64 << n;
        if x >= dim || y >= dim {
            return Err(Error::OutOfRange(format!(
                "basis label ({x}, {y}) outside {n}-qubit registers"
            )));
        }
        state.amps[0] = Complex64::new(0.0, 0.0);
        let idx = state.index(x, y);
        state.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn width(&self) -> u32 {
        self.n
    }

    #[inline]
    fn index(&self, x: u64, y: u64) -> usize {
        ((x << self.n) | y) as usize
    }

    pub fn amplitude(&self, x: u64, y: u64) -> Complex64 {
        self.amps[self.index(x, y)]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `H` on each first-register qubit, i.e. `H^{(x)n} (x) I`.
    pub fn hadamard_first_register(&mut self) {
        for qubit in 0..self.n {
            let stride = 1usize << (self.n + qubit);
            for block in (0..self.amps.len()).step_by(2 * stride) {
                for i in block..block + stride {
                    let a = self.amps[i];
                    let b = self.amps[i + stride];
                    self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                    self.amps[i + stride] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
    }

    /// `|x>|y> -> |x>|y + table[x] mod 2^n>`. Unmetered; see
    /// [`StateVector::apply_oracle`].
    pub fn apply_function_table(&mut self, table: &[u64]) -> Result<()> {
        let dim = 1u64 << self.n;
        if table.len() as u64 != dim {
            return Err(Error::OutOfRange(format!(
                "function table has {} entries, expected {dim}",
                table.len()
            )));
        }
        let modulus_mask = dim - 1;
        let mut next = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (x, &fx) in table.iter().enumerate() {
            let x = x as u64;
            for y in 0..dim {
                let target = (y + (fx & modulus_mask)) & modulus_mask;
                next[self.index(x, target)] = self.amps[self.index(x, y)];
            }
        }
        self.amps = next;
        Ok(())
    }

    /// One application of `U_f`, metered as a single query.
    pub fn apply_oracle(&mut self, oracle: &mut MaskedOracle) -> Result<()> {
        if oracle.width() != self.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: oracle.width(),
            });
        }
        let table = oracle.truth_table()?;
        self.apply_function_table(&table)?;
        oracle.record_query();
        Ok(())
    }

    /// Marginal probability of each first-register value.
    pub fn first_register_distribution(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        self.amps
            .chunks_exact(dim)
            .map(|row| row.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Samples the first register by inverse-CDF on its marginal.
    pub fn measure_first_register<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let probs = self.first_register_distribution();
        let draw: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
        let mut cumulative = 0.0;
        let mut last_possible = 0;
        for (k, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                last_possible = k;
            }
            cumulative += p;
            if draw < cumulative {
                return BitString::new(self.n, k as u64).expect("index within width");
            }
        }
        BitString::new(self.n, last_possible as u64).expect("index within width")
    }
}

/// One circuit execution followed by a measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub k: BitString,
    pub queries_used: u32,
}

/// Runs the circuit up to (not including) the measurement. Costs one query.
pub fn prepare_final_state(oracle: &mut MaskedOracle) -> Result<StateVector> {
    let mut state = StateVector::new(oracle.width())?;
    state.hadamard_first_register();
    state.apply_oracle(oracle)?;
    state.hadamard_first_register();
    Ok(state)
}

/// Full state-vector trial: prepare, Hadamard, oracle, Hadamard, measure.
pub fn run_trial_full<R: Rng + ?Sized>(
    oracle: &mut MaskedOracle,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let state = prepare_final_state(oracle)?;
    Ok(TrialOutcome {
        k: state.measure_first_register(rng),
        queries_used: 1,
    })
}

/// Draws `k` uniformly from the sub-masks of the measurement support
/// without building amplitudes. Works at any width.
pub fn run_trial_fast<R: Rng + ?Sized>(
    s: BitString,
    variant: MaskVariant,
    rng: &mut R,
) -> TrialOutcome {
    let support = variant.support(s);
    let k = BitString::new(s.width(), rng.random::<u64>() & support.bits())
        .expect("sub-mask fits width");
    TrialOutcome { k, queries_used: 1 }
}

/// Exact output distribution of [`run_trial_fast`], indexed by `k`.
pub fn fast_distribution(s: BitString, variant: MaskVariant) -> Result<Vec<f64>> {
    let n = s.width();
    if n > MAX_SIM_WIDTH {
        return Err(Error::Capacity {
            n,
            max: MAX_SIM_WIDTH,
        });
    }
    let support = variant.support(s).bits();
    let p = 0.5f64.powi(support.count_ones() as i32);
    Ok((0..1u64 << n)
        .map(|k| if k & !support == 0 { p } else { 0.0 })
        .collect())
}
