//! Minimal reductions, superficial elements and reduction numbers.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{EngineError, Result};
use crate::ideal::{quotient_context, IdealRep, PowerTower};
use crate::poly::{q_int, Polynomial};

pub const RETRIES: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionData {
    pub j_generators: Vec<Polynomial>,
    pub r_j: u32,
    /// Further exponents past `r_j` at which `J I^n = I^{n+1}` was confirmed.
    pub verified_window: u32,
    /// Seed the generators were drawn with, when generated.
    pub seed: Option<u64>,
}

/// Integer combination of `gens` with coefficients drawn from
/// `{-9..9} \ {0}`.
pub fn random_combination(gens: &[Polynomial], rng: &mut ChaCha8Rng) -> Polynomial {
    let mut acc = Polynomial::zero(gens[0].num_vars());
    for g in gens {
        let mut c: i64 = 0;
        while c == 0 {
            c = rng.gen_range(-9..=9);
        }
        acc = acc.add(&g.scale(&q_int(c)));
    }
    acc
}

/// Smallest `n <= cap` with `J I^n = I^{n+1}`, confirmed for `window`
/// further exponents.
pub fn reduction_number(
    j_gens: &[Polynomial],
    tower: &mut PowerTower,
    cap: u32,
    window: u32,
) -> Result<u32> {
    let base = tower.base().clone();
    if let Some(bad) = j_gens.iter().find(|g| !base.contains(g)) {
        return Err(EngineError::NotAReduction(format!("{bad} is not in I")));
    }
    let mut n = 0;
    while n <= cap {
        let mut ok = true;
        for k in n..=n + window {
            let a = tower.get(k)?.clone();
            let b = tower.get(k + 1)?.clone();
            if !b.is_generated_by_products(j_gens, &a)? {
                ok = false;
                n = k + 1;
                break;
            }
        }
        if ok {
            return Ok(n);
        }
    }
    Err(EngineError::NotAReduction(format!(
        "J I^n != I^(n+1) for all n <= {cap}"
    )))
}

/// A reduction generated by `d` random combinations of the generators of
/// `I`, retried with seeds `seed, seed+1, ...` on failure.
pub fn generate_minimal_reduction(
    tower: &mut PowerTower,
    d: usize,
    seed: u64,
    cap: u32,
    window: u32,
) -> Result<ReductionData> {
    let gens = tower.base().generators().to_vec();
    let mut last = String::new();
    for attempt in 0..RETRIES {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let j: Vec<Polynomial> = (0..d).map(|_| random_combination(&gens, &mut rng)).collect();
        match reduction_number(&j, tower, cap, window) {
            Ok(r_j) => {
                return Ok(ReductionData {
                    j_generators: j,
                    r_j,
                    verified_window: window,
                    seed: Some(s),
                })
            }
            Err(e @ EngineError::TruncationInsufficient { .. }) => return Err(e),
            Err(e) => last = e.to_string(),
        }
    }
    Err(EngineError::GenerationFailed {
        attempts: RETRIES,
        reason: last,
    })
}

/// Whether `x ∈ I \ I^2` and `(I^{n+1} : x) = I^n` for every `n` in
/// `from..=to`.
pub fn is_superficial(tower: &mut PowerTower, x: &Polynomial, from: u32, to: u32) -> Result<bool> {
    if !tower.base().contains(x) || tower.get(2)?.contains(x) {
        return Ok(false);
    }
    for n in from.max(1)..=to {
        let floor = tower.get(n)?.clone();
        let top = tower.get(n + 1)?.clone();
        if !top.colon_element_equals(x, &floor)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search random combinations of `pool` (defaulting to the generators of
/// `I`) for a superficial element, verified on `from..=to`.
pub fn find_superficial(
    tower: &mut PowerTower,
    pool: Option<&[Polynomial]>,
    seed: u64,
    from: u32,
    to: u32,
) -> Result<Polynomial> {
    let gens = match pool {
        Some(p) => p.to_vec(),
        None => tower.base().generators().to_vec(),
    };
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let x = random_combination(&gens, &mut rng);
        if is_superficial(tower, &x, from, to)? {
            return Ok(x);
        }
    }
    Err(EngineError::GenerationFailed {
        attempts: RETRIES,
        reason: "no superficial combination passed verification".to_string(),
    })
}

/// A superficial sequence `x_1, ..., x_count`: each `x_i` is verified as a
/// superficial element for the image of `I` modulo `x_1, ..., x_{i-1}`.
pub fn random_superficial_sequence(
    ideal: &IdealRep,
    count: usize,
    seed: u64,
    from: u32,
    to: u32,
) -> Result<Vec<Polynomial>> {
    if count > ideal.context().dimension() {
        return Err(EngineError::UnsupportedDimension(count));
    }
    let mut out = Vec::with_capacity(count);
    let mut current = ideal.clone();
    for i in 0..count {
        let mut tower = PowerTower::new(current.clone());
        let x = find_superficial(&mut tower, None, seed.wrapping_add(97 * i as u64), from, to)?;
        let qctx = Arc::new(quotient_context(current.context(), &x)?);
        current = current.image_in(&qctx)?;
        out.push(x);
    }
    Ok(out)
}
