//! Prime factorization and the two inclusion–exclusion operators over the
//! distinct prime divisors of `n`.
//!
//! `phi1(seq, n)` is the alternating sum of `seq(n / d)` over the squarefree
//! divisors `d` of `n`; for `seq` counting solutions of `f^n(x) = x` it counts
//! points of least period `n`. `phi2` runs the same sum over the odd primes
//! only and has the special value `seq(2^k) - 1` on powers of two; for `seq`
//! counting solutions of `g^n(x) = -x` with `g` odd it counts symmetric
//! points of least period `2n`.

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::RingValue;

const SMALL_PRIME_LIMIT: u64 = 1 << 16;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for p in 2..=limit {
            if composite[p] {
                continue;
            }
            primes.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                composite[q] = true;
                q += p;
            }
        }
        primes
    })
}

/// Prime-power decomposition of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs; empty for `n = 1`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.distinct_primes().filter(|&p| p != 2)
    }

    /// Exponent of 2 in `n` (the `k₀` of the odd-part split).
    pub fn two_exponent(&self) -> u32 {
        match self.factors.first() {
            Some(&(2, e)) => e,
            _ => 0,
        }
    }

    pub fn odd_part(&self) -> u64 {
        self.n >> self.two_exponent()
    }

    pub fn radical(&self) -> u64 {
        self.distinct_primes().product()
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Trial division by the precomputed primes below 2^16, then by odd
/// candidates for whatever cofactor remains.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive(n.to_string()));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        push(&mut rest, p);
    }
    let mut d = SMALL_PRIME_LIMIT + 1;
    while d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        push(&mut rest, d);
        d += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// Signed sum of `seq(n / d)` over all products `d` of subsets of `primes`,
/// with sign `(-1)^{|subset|}`.
fn alternating_sum<T, E, F>(n: u64, primes: &[u64], seq: &mut F) -> std::result::Result<T, E>
where
    T: RingValue,
    F: FnMut(u64) -> std::result::Result<T, E>,
{
    let mut total = T::zero();
    for mask in 0u32..(1u32 << primes.len()) {
        let divisor: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .product();
        let term = seq(n / divisor)?;
        if mask.count_ones() % 2 == 0 {
            total = total + term;
        } else {
            total = total - term;
        }
    }
    Ok(total)
}

/// The inclusion–exclusion operator over all distinct primes of `n`.
///
/// `seq` is called only at arguments `n / d` with `d` a squarefree divisor of
/// `n`; its errors propagate unchanged.
pub fn phi1<T, E, F>(mut seq: F, n: u64) -> std::result::Result<T, E>
where
    T: RingValue,
    E: From<Error>,
    F: FnMut(u64) -> std::result::Result<T, E>,
{
    let fact = factorize(n)?;
    let primes: Vec<u64> = fact.distinct_primes().collect();
    alternating_sum(n, &primes, &mut seq)
}

/// The inclusion–exclusion operator over the distinct odd primes of `n`;
/// equals `seq(n) - 1` whenever the odd part of `n` is 1 (including `n = 1`).
pub fn phi2<T, E, F>(mut seq: F, n: u64) -> std::result::Result<T, E>
where
    T: RingValue,
    E: From<Error>,
    F: FnMut(u64) -> std::result::Result<T, E>,
{
    let fact = factorize(n)?;
    if fact.odd_part() == 1 {
        return Ok(seq(n)? - T::one());
    }
    let primes: Vec<u64> = fact.odd_primes().collect();
    alternating_sum(n, &primes, &mut seq)
}

/// Outcome of testing `modulus | value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisibility<T> {
    pub passes: bool,
    /// Mathematical remainder, always in `[0, modulus)`.
    pub remainder: T,
}

pub fn divisibility_check<T: Integer + Clone>(value: &T, modulus: &T) -> Result<Divisibility<T>> {
    if *modulus <= T::zero() {
        return Err(Error::NonPositive("modulus".into()));
    }
    let remainder = value.mod_floor(modulus);
    Ok(Divisibility {
        passes: remainder.is_zero(),
        remainder,
    })
}
