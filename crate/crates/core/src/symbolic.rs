//! Symbolic edge counts for the iterates of `g_j` (`j >= 3`).
//!
//! The graph of `g_j^n` is encoded as a word over the node symbols
//! `{-j, …, -1, 1, …, j}`: consecutive symbols `uv` are the heights at the two
//! ends of one linear piece. Up to orientation only `2j - 1` distinct pairs
//! occur ([`EdgeLabel`]). An [`EdgeTensor`] records, for every x-bucket `k`
//! and label `i`, how many pieces of `g_j^n` over bucket `k` carry label `i`.
//! [`EdgeTensor::step`] advances it by the linear substitution recurrence;
//! [`expand_word`] recomputes the same tallies by literal word substitution.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Tally;
use crate::Rational;

fn check_j(j: u32) -> Result<()> {
    if j < 3 {
        return Err(Error::InvalidParameter(format!(
            "the symbolic engine requires j >= 3, got {j}"
        )));
    }
    Ok(())
}

/// One of the `2j - 1` unordered symbol pairs, indexed `-(j-1)..=j-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel(pub i64);

impl EdgeLabel {
    /// The canonical orientation `uv` of this label.
    pub fn pair(self, j: u32) -> (i64, i64) {
        let (j, i) = (j as i64, self.0);
        match i {
            _ if i == -(j - 1) => (-j, 1),
            _ if i < 0 => (i - 1, i),
            0 => (-j, j),
            _ if i < j - 1 => (i, i + 1),
            _ => (j, -1),
        }
    }

    /// Label of the pair `uv` or its reversal `vu`, if it is one of the labels.
    pub fn of_pair(u: i64, v: i64, j: u32) -> Option<EdgeLabel> {
        let m = j as i64 - 1;
        (-m..=m).map(EdgeLabel).find(|l| {
            let p = l.pair(j);
            p == (u, v) || p == (v, u)
        })
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the `2j - 1` linear pieces of `g_j`, indexed `-(j-1)..=j-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionBucket(pub i64);

impl PositionBucket {
    /// `[s_k, t_k]`
    pub fn interval(self) -> (i64, i64) {
        match self.0 {
            k if k < 0 => (k - 1, k),
            0 => (-1, 1),
            k => (k, k + 1),
        }
    }

    /// The bucket whose interval contains `[lo, hi]`.
    pub fn containing(lo: &Rational, hi: &Rational, j: u32) -> Option<PositionBucket> {
        let m = j as i64 - 1;
        (-m..=m).map(PositionBucket).find(|b| {
            let (s, t) = b.interval();
            *lo >= Rational::from_integer(BigInt::from(s))
                && *hi <= Rational::from_integer(BigInt::from(t))
        })
    }
}

/// `a_{n,k,i}`: the `(2j - 1) × (2j - 1)` grid of edge counts at iterate `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTensor<T> {
    j: u32,
    n: u64,
    counts: Vec<T>,
}

impl<T: Tally> EdgeTensor<T> {
    pub fn zero(j: u32, n: u64) -> Result<Self> {
        check_j(j)?;
        let w = (2 * j - 1) as usize;
        Ok(EdgeTensor {
            j,
            n,
            counts: vec![T::zero(); w * w],
        })
    }

    /// The tensor for `g_j` itself.
    pub fn initial(j: u32) -> Result<Self> {
        let mut t = Self::zero(j, 1)?;
        let m = j as i64 - 1;
        for k in -m..=-2 {
            t.set(k, k + 1, T::one());
        }
        t.set(-1, m, T::one());
        t.set(0, 0, T::one());
        t.set(1, -m, T::one());
        for k in 2..=m {
            t.set(k, k - 1, T::one());
        }
        Ok(t)
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// The iterate this tensor describes.
    pub fn n(&self) -> u64 {
        self.n
    }

    fn half(&self) -> i64 {
        self.j as i64 - 1
    }

    fn width(&self) -> usize {
        (2 * self.j - 1) as usize
    }

    fn offset(&self, k: i64, i: i64) -> usize {
        let m = self.half();
        assert!(
            (-m..=m).contains(&k) && (-m..=m).contains(&i),
            "index ({k}, {i}) out of range for j = {}",
            self.j
        );
        (k + m) as usize * self.width() + (i + m) as usize
    }

    /// Entry `(k, i)`: pieces over bucket `k` labelled `i`.
    pub fn get(&self, k: i64, i: i64) -> &T {
        &self.counts[self.offset(k, i)]
    }

    fn set(&mut self, k: i64, i: i64, v: T) {
        let o = self.offset(k, i);
        self.counts[o] = v;
    }

    /// `((k, i), count)` for all entries, row-major in `k`.
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), &T)> {
        let m = self.half();
        let w = self.width() as i64;
        self.counts
            .iter()
            .enumerate()
            .map(move |(o, v)| ((o as i64 / w - m, o as i64 % w - m), v))
    }

    pub fn total(&self) -> T {
        self.counts.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Advances from iterate `n` to `n + 1`. Each row `k` evolves independently.
    pub fn step(&self) -> Self {
        let j = self.j as i64;
        let m = j - 1;
        let mut next = EdgeTensor {
            j: self.j,
            n: self.n + 1,
            counts: self.counts.clone(),
        };
        for k in -m..=m {
            let r = |i: i64| self.get(k, i).clone();
            for i in -m..=m {
                let v = if i == -m {
                    r(0) + r(1) + r(m)
                } else if i == -(j - 2) {
                    r(0) + r(-m)
                } else if i <= -1 {
                    r(i - 1) + r(0) + r(-m)
                } else if i == 0 {
                    r(-m) + r(0) + r(m)
                } else if i <= j - 3 {
                    r(0) + r(i + 1) + r(m)
                } else if i == j - 2 {
                    r(0) + r(m)
                } else {
                    r(-m) + r(-1) + r(0)
                };
                next.set(k, i, v);
            }
        }
        next
    }

    /// Number of distinct solutions of `g_j^n(x) = x`.
    pub fn c_count(&self) -> T {
        let m = self.half();
        let mut acc = T::zero();
        for k in -m..=m {
            acc = acc + self.get(k, k).clone();
        }
        for k in 1..=m {
            acc = acc + self.get(-k, 0).clone() + self.get(k, 0).clone();
        }
        for k in 0..=m - 1 {
            acc = acc + self.get(-k, -m).clone() + self.get(k, m).clone();
        }
        acc
    }

    /// Number of distinct solutions of `g_j^n(x) = -x`.
    pub fn d_count(&self) -> T {
        let m = self.half();
        let mut acc = T::zero();
        for k in -m..=m {
            acc = acc + self.get(k, -k).clone();
        }
        for k in 1..=m {
            acc = acc + self.get(-k, 0).clone() + self.get(k, 0).clone();
        }
        for k in 0..=m - 1 {
            acc = acc + self.get(k, -m).clone() + self.get(-k, m).clone();
        }
        acc
    }
}

impl<T: Tally> Add for &EdgeTensor<T> {
    type Output = EdgeTensor<T>;

    fn add(self, rhs: &EdgeTensor<T>) -> EdgeTensor<T> {
        assert_eq!(self.j, rhs.j, "tensors for different j");
        let counts = self
            .counts
            .iter()
            .zip(&rhs.counts)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        EdgeTensor {
            j: self.j,
            n: self.n,
            counts,
        }
    }
}

/// Tensors for `n = 1, 2, …` (unbounded).
pub fn tensor_series<T: Tally>(j: u32) -> Result<impl Iterator<Item = EdgeTensor<T>>> {
    let first = EdgeTensor::<T>::initial(j)?;
    Ok(std::iter::successors(Some(first), |t| Some(t.step())))
}

/// `(c_{n,j}, d_{n,j})` for `n = 1..=n_max`.
pub fn symbolic_counts<T: Tally>(j: u32, n_max: u64) -> Result<Vec<(T, T)>> {
    Ok(tensor_series::<T>(j)?
        .take(n_max as usize)
        .map(|t| (t.c_count(), t.d_count()))
        .collect())
}

/// Symbols of `{-j, …, -1, 1, …, j}` from `u` to `v` inclusive, in order.
fn nodes_between(u: i64, v: i64) -> Vec<i64> {
    let step = if u <= v { 1 } else { -1 };
    let mut out = Vec::new();
    let mut s = u;
    loop {
        if s != 0 {
            out.push(s);
        }
        if s == v {
            break;
        }
        s += step;
    }
    out
}

/// The image under `g_j` of the piece `uv`, as the substitution table lists it.
/// Returns `None` for pairs that are not labels.
pub fn substitute(u: i64, v: i64, j: u32) -> Option<Vec<i64>> {
    let label = EdgeLabel::of_pair(u, v, j)?;
    let (a, _) = label.pair(j);
    let (j, i) = (j as i64, label.0);
    let neg_run = || (1..j).rev().map(|s| -s); // -(j-1) … -1
    let pos_run = || 1..j; // 1 … j-1
    let forward: Vec<i64> = match i {
        _ if i == -(j - 1) => neg_run().chain([j, -j]).collect(),
        -1 => vec![-1, j],
        _ if i < 0 => vec![i, i + 1],
        0 => neg_run().chain([j, -j]).chain(pos_run()).collect(),
        1 => vec![-j, 1],
        _ if i < j - 1 => vec![i - 1, i],
        _ => pos_run().rev().chain([-j, j]).collect(),
    };
    Some(if a == u {
        forward
    } else {
        forward.into_iter().rev().collect()
    })
}

/// Recomputes the tensor at iterate `n` by expanding the word for `g_j`
/// `n - 1` times, tracking the exact x-interval of every piece.
pub fn expand_word<T: Tally>(j: u32, n: u64, symbol_cap: usize) -> Result<EdgeTensor<T>> {
    check_j(j)?;
    if n == 0 {
        return Err(Error::NonPositive(n.to_string()));
    }
    let ji = j as i64;
    let rat = |v: i64| Rational::from_integer(BigInt::from(v));
    // Word for g_j: heights at x = -j, …, -2, -1, 1, 2, …, j.
    let seed: Vec<i64> = (1..ji)
        .rev()
        .map(|s| -s)
        .chain([ji, -ji])
        .chain(1..ji)
        .collect();
    let xs = (-ji..=-1).chain(1..=ji);
    let mut word: Vec<(Rational, i64)> = xs.map(rat).zip(seed).collect();

    for _ in 1..n {
        let mut images = Vec::with_capacity(word.len() - 1);
        let mut needed = 1usize;
        for w in word.windows(2) {
            let (u, v) = (w[0].1, w[1].1);
            let image = substitute(u, v, j).ok_or_else(|| {
                Error::InvalidParameter(format!("no substitution for pair {u} {v}"))
            })?;
            needed += image.len() - 1;
            images.push(image);
        }
        if needed > symbol_cap {
            return Err(Error::WordCapExceeded {
                cap: symbol_cap,
                needed,
            });
        }
        let mut next = Vec::with_capacity(needed);
        next.push((word[0].0.clone(), images[0][0]));
        for (w, image) in word.windows(2).zip(&images) {
            let ((xa, u), (xb, v)) = ((&w[0].0, w[0].1), (&w[1].0, w[1].1));
            let heights = nodes_between(u, v);
            if heights.len() != image.len() {
                return Err(Error::InvalidParameter(format!(
                    "substitution for {u} {v} has {} symbols, expected {}",
                    image.len(),
                    heights.len()
                )));
            }
            for (h, &sym) in heights.iter().zip(image).skip(1) {
                let t = Rational::new(BigInt::from(h - u), BigInt::from(v - u));
                next.push((xa + t * (xb - xa), sym));
            }
        }
        word = next;
    }

    let mut tensor = EdgeTensor::<T>::zero(j, n)?;
    for w in word.windows(2) {
        let ((xa, u), (xb, v)) = ((&w[0].0, w[0].1), (&w[1].0, w[1].1));
        let label = EdgeLabel::of_pair(u, v, j)
            .ok_or_else(|| Error::InvalidParameter(format!("unlabelled pair {u} {v}")))?;
        let bucket = PositionBucket::containing(xa, xb, j).ok_or_else(|| {
            Error::InvalidParameter(format!("piece [{xa}, {xb}] spans several buckets"))
        })?;
        let o = tensor.offset(bucket.0, label.0);
        tensor.counts[o] = tensor.counts[o].clone() + T::one();
    }
    Ok(tensor)
}
