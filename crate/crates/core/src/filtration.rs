//! Ratliff-Rush closures of powers, the stability index `ρ(I)`, the
//! filtration coefficients `ẽ_i` and the superficial cross-check `ρ_x`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::hilbert::{HilbertData, HilbertOptions};
use crate::ideal::{IdealRep, PowerTower};
use crate::poly::{Polynomial, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationOptions {
    /// Consecutive equal colon ideals that end a closure chain.
    pub chain_window: u32,
    /// Maximum colon steps per power.
    pub chain_cap: u32,
    /// How far past `r_J` to look for a closed power.
    pub search_cap: u32,
}

impl Default for FiltrationOptions {
    fn default() -> Self {
        FiltrationOptions {
            chain_window: 2,
            chain_cap: 20,
            search_cap: 30,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureRecord {
    pub closure: IdealRep,
    /// Index `n` at which `(I^{k+n} : I^n)` first took its stable value.
    pub chain_length: u32,
}

#[derive(Clone, Debug)]
pub struct FiltrationData {
    pub closures: BTreeMap<u32, IdealRep>,
    /// `λ(Ĩ^k / I^k)` for `k = 1..=rho`.
    pub gaps: BTreeMap<u32, u64>,
    pub rho: u32,
    /// First closed power at or above `r_J`, where the downward walk began.
    pub first_closed: u32,
    pub tilde: HilbertData,
    pub tilde_r: Option<u32>,
    pub chain_lengths: BTreeMap<u32, u32>,
}

impl FiltrationData {
    pub fn tilde_e(&self) -> &[Q] {
        &self.tilde.e
    }

    pub fn gap_sum(&self) -> u64 {
        self.gaps.values().sum()
    }

    /// `λ(Ĩ/I)`.
    pub fn first_gap(&self) -> u64 {
        self.gaps.get(&1).copied().unwrap_or(0)
    }
}

/// The Ratliff-Rush filtration of one ideal, with its power tower and
/// memoized closures.
#[derive(Clone, Debug)]
pub struct Filtration {
    tower: PowerTower,
    closures: BTreeMap<u32, ClosureRecord>,
    opts: FiltrationOptions,
}

impl Filtration {
    pub fn new(tower: PowerTower, opts: FiltrationOptions) -> Self {
        Filtration {
            tower,
            closures: BTreeMap::new(),
            opts,
        }
    }

    pub fn tower(&mut self) -> &mut PowerTower {
        &mut self.tower
    }

    pub fn options(&self) -> &FiltrationOptions {
        &self.opts
    }

    /// `Ĩ^k`, the stable value of `(I^{k+n} : I^n)`.
    pub fn closure(&mut self, k: u32) -> Result<&ClosureRecord> {
        if !self.closures.contains_key(&k) {
            let rec = self.compute_closure(k)?;
            self.closures.insert(k, rec);
        }
        Ok(&self.closures[&k])
    }

    fn compute_closure(&mut self, k: u32) -> Result<ClosureRecord> {
        let mut prev = self.tower.get(k)?.clone();
        let mut run = 0u32;
        for n in 1..=self.opts.chain_cap {
            let top = self.tower.get(k + n)?.clone();
            let by = self.tower.get(n)?.clone();
            let t = top.colon_with_floor(&by, &prev)?;
            run = if n > 1 && t == prev { run + 1 } else { 1 };
            prev = t;
            if run >= self.opts.chain_window {
                return Ok(ClosureRecord {
                    closure: prev,
                    chain_length: n + 1 - self.opts.chain_window,
                });
            }
        }
        Err(EngineError::ChainNotStabilized {
            power: k,
            cap: self.opts.chain_cap,
        })
    }

    pub fn is_closed(&mut self, k: u32) -> Result<bool> {
        let power = self.tower.get(k)?.clone();
        Ok(self.closure(k)?.closure == power)
    }

    /// `λ(Ĩ^k / I^k)`.
    pub fn gap_length(&mut self, k: u32) -> Result<u64> {
        let power = self.tower.colength(k)?;
        Ok(power - self.closure(k)?.closure.colength())
    }

    /// Smallest `m >= r_J` with `Ĩ^m = I^m`; every higher power is then
    /// closed as well.
    pub fn first_closed_from(&mut self, r_j: u32) -> Result<u32> {
        let start = r_j.max(1);
        for m in start..=start + self.opts.search_cap {
            if self.is_closed(m)? {
                return Ok(m);
            }
        }
        Err(EngineError::SearchExhausted {
            what: "closed power".to_string(),
            cap: start + self.opts.search_cap,
        })
    }

    /// `ρ(I)`, found by walking down from the first closed power at or
    /// above `r_J`. A fully closed filtration has `ρ = 1`.
    pub fn stability_index(&mut self, r_j: u32) -> Result<u32> {
        let m = self.first_closed_from(r_j)?;
        let mut k = m;
        while k > 1 {
            if !self.is_closed(k - 1)? {
                return Ok(k);
            }
            k -= 1;
        }
        Ok(1)
    }

    /// `Ĩ^k` with `Ĩ^0 = R`, using `I^k` itself from `rho` on.
    pub fn filtration_ideal(&mut self, k: u32, rho: u32) -> Result<IdealRep> {
        if k == 0 {
            return Ok(IdealRep::unit(self.tower.base().context()));
        }
        if k >= rho {
            return Ok(self.tower.get(k)?.clone());
        }
        Ok(self.closure(k)?.closure.clone())
    }

    /// Hilbert data of `{Ĩ^n}` from `λ(R/Ĩ^{n+1})`, checked against `e`:
    /// the two filtrations must share `e_0..e_d`.
    pub fn filtration_coefficients(
        &mut self,
        rho: u32,
        powers: &HilbertData,
        hopts: &HilbertOptions,
    ) -> Result<HilbertData> {
        let d = powers.dimension;
        let tilde = HilbertData::adaptive(d, hopts, |n| {
            let k = n as u32 + 1;
            let full = self.tower.colength(k)?;
            if k >= rho {
                Ok(full)
            } else {
                Ok(full - self.gap_length(k)?)
            }
        })?;
        for i in 0..=d {
            if tilde.e[i] != powers.e[i] {
                return Err(EngineError::ConsistencyViolation {
                    index: i,
                    expected: powers.e[i].to_string(),
                    found: tilde.e[i].to_string(),
                });
            }
        }
        Ok(tilde)
    }

    /// `ẽr_J(I)`: smallest `n` with `J Ĩ^k = Ĩ^{k+1}` for all `k` in
    /// `n..=horizon`.
    pub fn tilde_reduction_number(&mut self, j_gens: &[Polynomial], rho: u32, horizon: u32) -> Result<u32> {
        let mut flags = Vec::with_capacity(horizon as usize + 1);
        for k in 0..=horizon {
            let a = self.filtration_ideal(k, rho)?;
            let b = self.filtration_ideal(k + 1, rho)?;
            flags.push(b.is_generated_by_products(j_gens, &a)?);
        }
        if !flags[horizon as usize] {
            return Err(EngineError::SearchExhausted {
                what: "tilde reduction number".to_string(),
                cap: horizon,
            });
        }
        let trailing = flags.iter().rev().take_while(|&&f| f).count() as u32;
        Ok(horizon + 1 - trailing)
    }

    /// `ρ_x(I)`: smallest `k` with `(I^{n+1} : x) = I^n` for all tested
    /// `n` in `k..=horizon`.
    pub fn stability_index_via_superficial(&mut self, x: &Polynomial, horizon: u32) -> Result<u32> {
        let mut k = horizon + 1;
        for n in (1..=horizon).rev() {
            let floor = self.tower.get(n)?.clone();
            let top = self.tower.get(n + 1)?.clone();
            if top.colon_element_equals(x, &floor)? {
                k = n;
            } else {
                break;
            }
        }
        if k > horizon {
            return Err(EngineError::SearchExhausted {
                what: "superficial stability index".to_string(),
                cap: horizon,
            });
        }
        Ok(k)
    }

    /// The full filtration record for a reduction `J` with number `r_j`.
    pub fn analyze(
        &mut self,
        j_gens: &[Polynomial],
        r_j: u32,
        powers: &HilbertData,
        hopts: &HilbertOptions,
    ) -> Result<FiltrationData> {
        let first_closed = self.first_closed_from(r_j)?;
        let rho = self.stability_index(r_j)?;
        let mut gaps = BTreeMap::new();
        for k in 1..=rho {
            gaps.insert(k, self.gap_length(k)?);
        }
        let tilde = self.filtration_coefficients(rho, powers, hopts)?;
        let horizon = rho.max(r_j) + self.opts.chain_window;
        let tilde_r = Some(self.tilde_reduction_number(j_gens, rho, horizon)?);
        let mut closures = BTreeMap::new();
        let mut chain_lengths = BTreeMap::new();
        for (k, rec) in &self.closures {
            closures.insert(*k, rec.closure.clone());
            chain_lengths.insert(*k, rec.chain_length);
        }
        Ok(FiltrationData {
            closures,
            gaps,
            rho,
            first_closed,
            tilde,
            tilde_r,
            chain_lengths,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, TruncatedAlgebra};
    use std::sync::Arc;

    fn ideal(gens: &[&[u32]]) -> IdealRep {
        let c = Arc::new(TruncatedAlgebra::new(2, 400));
        let g: Vec<Polynomial> = gens
            .iter()
            .map(|e| Polynomial::monomial(Monomial::new(e.to_vec())))
            .collect();
        IdealRep::from_generators(&g, &c).unwrap()
    }

    #[test]
    fn powers_of_the_maximal_ideal_are_closed() {
        let m = ideal(&[&[1, 0], &[0, 1]]);
        let mut f = Filtration::new(PowerTower::new(m), FiltrationOptions::default());
        for k in 1..4 {
            assert!(f.is_closed(k).unwrap());
        }
        assert_eq!(f.stability_index(0).unwrap(), 1);
    }

    #[test]
    fn closure_of_a_small_example() {
        let i = ideal(&[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        let mut f = Filtration::new(PowerTower::new(i), FiltrationOptions::default());
        let closure = f.closure(1).unwrap().closure.clone();
        let expected = ideal(&[&[4, 0], &[3, 1], &[2, 2], &[1, 3], &[0, 4]]);
        assert_eq!(closure, expected);
        assert_eq!(f.gap_length(1).unwrap(), 1);
        assert_eq!(f.stability_index(2).unwrap(), 2);
    }
}
