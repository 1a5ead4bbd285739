//! Hilbert-Samuel data of a filtration: `H(n) = λ(R/I_{n+1})`, the
//! h-polynomial, the postulation index and the coefficients `e_0..e_{d+1}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::ideal::PowerTower;
use crate::poly::{binomial, derivative_at_one, q_int, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub values: Vec<u64>,
    pub h_coeffs: Vec<i64>,
    pub postulation: usize,
    #[serde(with = "crate::rational::q_vec")]
    pub e: Vec<Q>,
    pub dimension: usize,
}

/// Controls for the adaptive computation of Hilbert values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertOptions {
    /// Trailing zero transform coefficients required; `None` means
    /// `max(3, d + 1)`.
    pub window: Option<usize>,
    /// Further values on which the predicted polynomial must agree.
    pub verify: usize,
    pub initial: usize,
    pub step: usize,
    pub cap: usize,
}

impl Default for HilbertOptions {
    fn default() -> Self {
        HilbertOptions {
            window: None,
            verify: 3,
            initial: 8,
            step: 4,
            cap: 40,
        }
    }
}

impl HilbertOptions {
    pub fn window_for(&self, d: usize) -> usize {
        self.window.unwrap_or_else(|| (d + 1).max(3))
    }
}

/// `H(n) = λ(R/I^{n+1})` for `n = 0..=m`.
pub fn hilbert_samuel_sequence(tower: &mut PowerTower, m: usize) -> Result<Vec<u64>> {
    (0..=m).map(|n| tower.colength(n as u32 + 1)).collect()
}

/// Generalized binomial `C(x, k)` for any integer `x`.
fn binom_q(x: i64, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q_int(x - i as i64) / q_int(i as i64 + 1);
    }
    acc
}

fn transform(values: &[u64], d: usize) -> Vec<i64> {
    (0..values.len())
        .map(|k| {
            (0..=(d + 1).min(k))
                .map(|j| {
                    let c = binomial(d as u64 + 1, j as u64) as i64 * values[k - j] as i64;
                    if j % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .sum()
        })
        .collect()
}

/// Numerator of `Σ H(n) z^n = h(z)/(1-z)^{d+1}` and the postulation index.
///
/// Requires `window` trailing zero coefficients of the transform; the
/// polynomial so predicted is then checked against `verify` further values.
pub fn h_polynomial(values: &[u64], d: usize, window: usize, verify: usize) -> Result<(Vec<i64>, usize)> {
    let h = transform(values, d);
    let last = h.iter().rposition(|&c| c != 0).unwrap_or(0);
    let zeros = h.len() - last - 1;
    if zeros < window + verify {
        return Err(EngineError::NoStabilization {
            computed: values.len(),
        });
    }
    let coeffs = h[..=last].to_vec();
    let e = coefficients_unchecked(&coeffs, d);
    let postulation = (0..values.len())
        .rev()
        .take_while(|&n| hilbert_polynomial_value(&e, n as i64, d) == q_int(values[n] as i64))
        .last()
        .unwrap_or(values.len());
    Ok((coeffs, postulation))
}

fn coefficients_unchecked(h: &[i64], d: usize) -> Vec<Q> {
    let hq: Vec<Q> = h.iter().map(|&c| q_int(c)).collect();
    (0..=d + 1).map(|i| derivative_at_one(&hq, i)).collect()
}

/// `e_i = h^{(i)}(1)/i!` for `i = 0..=d+1`.
pub fn hilbert_coefficients(h: &[i64], d: usize) -> Result<Vec<Q>> {
    let e = coefficients_unchecked(h, d);
    for (i, c) in e.iter().enumerate() {
        if !c.is_integer() {
            return Err(EngineError::IntegralityViolation {
                index: i,
                value: c.to_string(),
            });
        }
    }
    Ok(e)
}

/// `P(n) = Σ_{j=0}^{d} (-1)^j e_j C(n+d-j, d-j)`.
pub fn hilbert_polynomial_value(e: &[Q], n: i64, d: usize) -> Q {
    (0..=d).fold(Q::zero(), |acc, j| {
        let term = &e[j] * binom_q(n + (d - j) as i64, d - j);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// `P²(n) = Σ_{j=0}^{d+1} (-1)^j e_j C(n+d-j+1, d-j+1)`, the polynomial
/// agreeing with `Σ_{j≤n} H(j)` for large `n`.
pub fn second_hilbert_value(e: &[Q], n: i64, d: usize) -> Q {
    (0..=d + 1).fold(Q::zero(), |acc, j| {
        let term = &e[j] * binom_q(n + (d + 1 - j) as i64, d + 1 - j);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

impl HilbertData {
    /// Run the pipeline on a fixed list of values.
    pub fn from_values(values: Vec<u64>, d: usize, opts: &HilbertOptions) -> Result<HilbertData> {
        let (h, postulation) = h_polynomial(&values, d, opts.window_for(d), opts.verify)?;
        let e = hilbert_coefficients(&h, d)?;
        Ok(HilbertData {
            values,
            h_coeffs: h,
            postulation,
            e,
            dimension: d,
        })
    }

    /// Compute values through `value(n)` until the h-polynomial stabilizes,
    /// growing the range by `opts.step` up to `opts.cap`.
    pub fn adaptive(
        d: usize,
        opts: &HilbertOptions,
        mut value: impl FnMut(usize) -> Result<u64>,
    ) -> Result<HilbertData> {
        let mut values: Vec<u64> = Vec::new();
        let mut m = opts.initial.max(opts.window_for(d) + opts.verify + 1);
        loop {
            while values.len() <= m {
                values.push(value(values.len())?);
            }
            match Self::from_values(values.clone(), d, opts) {
                Err(EngineError::NoStabilization { .. }) if m < opts.cap => {
                    m = (m + opts.step).min(opts.cap);
                }
                other => return other,
            }
        }
    }

    /// Hilbert-Samuel data of the `I`-adic filtration.
    pub fn of_powers(tower: &mut PowerTower, d: usize, opts: &HilbertOptions) -> Result<HilbertData> {
        Self::adaptive(d, opts, |n| tower.colength(n as u32 + 1))
    }

    pub fn multiplicity(&self) -> &Q {
        &self.e[0]
    }

    /// `e_i` as a machine integer (all coefficients are integral).
    pub fn e_int(&self, i: usize) -> i64 {
        let c = &self.e[i];
        let v: BigInt = c.to_integer();
        v.to_i64().unwrap_or(if c.is_negative() { i64::MIN } else { i64::MAX })
    }
}
