//! Continuous piecewise-linear self-maps of a closed interval.
//!
//! A map is stored as its node list `(x_0, y_0), …, (x_m, y_m)` with strictly
//! increasing `x`; it is linear between consecutive nodes. With an exact
//! coordinate type (`BigRational`) composition and root finding are exact, so
//! the number of solutions of `f^n(x) = x` or `g^n(x) = -x` is an exact count
//! obtained independently of any recurrence.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{coord, Coord};

/// Upper bound on the number of linear pieces a composition may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieceCap(pub usize);

impl PieceCap {
    pub const DEFAULT: PieceCap = PieceCap(10_000_000);
}

impl Default for PieceCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The equation whose solutions are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `f(x) = x`
    Fixed,
    /// `f(x) = -x`
    Antifixed,
}

impl Equation {
    fn residual<T: Coord>(self, x: &T, y: &T) -> T {
        match self {
            Equation::Fixed => y.clone() - x.clone(),
            Equation::Antifixed => y.clone() + x.clone(),
        }
    }

    fn line(self) -> &'static str {
        match self {
            Equation::Fixed => "x",
            Equation::Antifixed => "-x",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlMap<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

impl<T: Coord> PlMap<T> {
    /// Builds a map from its nodes, checking ordering and the self-map property.
    pub fn new(nodes: Vec<(T, T)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMap("at least two nodes are required".into()));
        }
        let (xs, ys): (Vec<T>, Vec<T>) = nodes.into_iter().unzip();
        if let Some(w) = xs.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMap(format!(
                "breakpoints must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let (lo, hi) = (&xs[0], &xs[xs.len() - 1]);
        if let Some(y) = ys.iter().find(|y| *y < lo || *y > hi) {
            return Err(Error::InvalidMap(format!(
                "value {y} leaves the domain [{lo}, {hi}]"
            )));
        }
        Ok(PlMap { xs, ys })
    }

    pub fn identity(lo: T, hi: T) -> Result<Self> {
        Self::new(vec![(lo.clone(), lo), (hi.clone(), hi)])
    }

    pub fn lo(&self) -> &T {
        &self.xs[0]
    }

    pub fn hi(&self) -> &T {
        &self.xs[self.xs.len() - 1]
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.xs
    }

    pub fn values(&self) -> &[T] {
        &self.ys
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&T, &T)> {
        self.xs.iter().zip(&self.ys)
    }

    /// Number of linear pieces.
    pub fn pieces(&self) -> usize {
        self.xs.len() - 1
    }

    /// `None` outside the domain.
    pub fn eval(&self, x: &T) -> Option<T> {
        if x < self.lo() || x > self.hi() {
            return None;
        }
        // First node strictly to the right of x, clamped to a valid segment.
        let right = self
            .xs
            .partition_point(|b| b <= x)
            .clamp(1, self.xs.len() - 1);
        Some(self.eval_on_segment(right - 1, x))
    }

    fn eval_on_segment(&self, i: usize, x: &T) -> T {
        let (x0, x1) = (&self.xs[i], &self.xs[i + 1]);
        let (y0, y1) = (&self.ys[i], &self.ys[i + 1]);
        if x == x0 {
            return y0.clone();
        }
        if x == x1 {
            return y1.clone();
        }
        y0.clone()
            + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    /// `self ∘ inner`. Breakpoints of the result are those of `inner` plus the
    /// preimages under `inner` of every breakpoint of `self`.
    pub fn compose(&self, inner: &PlMap<T>, cap: PieceCap) -> Result<PlMap<T>> {
        if inner.ys.iter().any(|y| y < self.lo() || y > self.hi()) {
            return Err(Error::DomainMismatch);
        }
        // Outer breakpoints strictly inside each inner segment's value range.
        let crossings = |a: &T, b: &T| -> (usize, usize) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let start = self.xs.partition_point(|p| p <= lo);
            let end = self.xs.partition_point(|p| p < hi);
            (start, end.max(start))
        };
        let needed: usize = inner
            .ys
            .windows(2)
            .map(|w| {
                let (s, e) = crossings(&w[0], &w[1]);
                e - s + 1
            })
            .sum();
        if needed > cap.0 {
            return Err(Error::PieceCapExceeded { cap: cap.0, needed });
        }

        let mut xs = Vec::with_capacity(needed + 1);
        let mut ys = Vec::with_capacity(needed + 1);
        xs.push(inner.xs[0].clone());
        ys.push(self.eval(&inner.ys[0]).expect("range checked"));
        for i in 0..inner.pieces() {
            let (xa, xb) = (&inner.xs[i], &inner.xs[i + 1]);
            let (a, b) = (&inner.ys[i], &inner.ys[i + 1]);
            let (start, end) = crossings(a, b);
            let mut push_preimage = |k: usize| {
                let p = &self.xs[k];
                let t = (p.clone() - a.clone()) / (b.clone() - a.clone());
                xs.push(xa.clone() + t * (xb.clone() - xa.clone()));
                ys.push(self.ys[k].clone());
            };
            if a < b {
                (start..end).for_each(&mut push_preimage);
            } else {
                (start..end).rev().for_each(&mut push_preimage);
            }
            xs.push(xb.clone());
            ys.push(self.eval(b).expect("range checked"));
        }
        let mut out = PlMap { xs, ys };
        out.prune_collinear();
        Ok(out)
    }

    /// Drops interior nodes whose neighbours are collinear with them.
    fn prune_collinear(&mut self) {
        let n = self.xs.len();
        if n < 3 {
            return;
        }
        let mut keep_x: Vec<T> = Vec::with_capacity(n);
        let mut keep_y: Vec<T> = Vec::with_capacity(n);
        for (x, y) in self.xs.drain(..).zip(self.ys.drain(..)) {
            while keep_x.len() >= 2 {
                let (x0, y0) = (&keep_x[keep_x.len() - 2], &keep_y[keep_y.len() - 2]);
                let (x1, y1) = (&keep_x[keep_x.len() - 1], &keep_y[keep_y.len() - 1]);
                let lhs = (y1.clone() - y0.clone()) * (x.clone() - x1.clone());
                let rhs = (y.clone() - y1.clone()) * (x1.clone() - x0.clone());
                if lhs == rhs {
                    keep_x.pop();
                    keep_y.pop();
                } else {
                    break;
                }
            }
            keep_x.push(x);
            keep_y.push(y);
        }
        self.xs = keep_x;
        self.ys = keep_y;
    }

    /// `f^n`, with `iterate(1) = f`.
    pub fn iterate(&self, n: u64, cap: PieceCap) -> Result<PlMap<T>> {
        if n == 0 {
            return Err(Error::NonPositive(n.to_string()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Successive iterates `f, f², f³, …`.
    pub fn iterates(&self, cap: PieceCap) -> Iterates<'_, T> {
        Iterates {
            base: self,
            current: None,
            cap,
            failed: false,
        }
    }

    /// Distinct solutions of `f(x) = x` or `f(x) = -x`, ascending.
    pub fn solutions(&self, equation: Equation) -> Result<Vec<T>> {
        let mut out: Vec<T> = Vec::new();
        let mut push = |x: T| {
            if out.last() != Some(&x) {
                out.push(x);
            }
        };
        let zero = T::zero();
        for i in 0..self.pieces() {
            let (x0, x1) = (&self.xs[i], &self.xs[i + 1]);
            let h0 = equation.residual(x0, &self.ys[i]);
            let h1 = equation.residual(x1, &self.ys[i + 1]);
            let s0 = h0.partial_cmp(&zero);
            let s1 = h1.partial_cmp(&zero);
            match (s0, s1) {
                (Some(Ordering::Equal), Some(Ordering::Equal)) => {
                    return Err(Error::InfiniteSolutionSet {
                        lo: x0.to_string(),
                        hi: x1.to_string(),
                        line: equation.line().into(),
                    });
                }
                (Some(Ordering::Equal), _) => push(x0.clone()),
                (Some(Ordering::Less), Some(Ordering::Greater))
                | (Some(Ordering::Greater), Some(Ordering::Less)) => {
                    let t = h0.clone() / (h0 - h1);
                    push(x0.clone() + t * (x1.clone() - x0.clone()));
                }
                _ => {}
            }
            if s1 == Some(Ordering::Equal) {
                push(x1.clone());
            }
        }
        Ok(out)
    }

    fn symmetric_domain(&self) -> bool {
        *self.lo() == -self.hi().clone()
    }

    /// True iff the domain is symmetric about 0 and `f(-x) = -f(x)`.
    pub fn is_odd(&self) -> bool {
        if !self.symmetric_domain() {
            return false;
        }
        // Both sides are piecewise linear on the merged node set.
        self.xs.iter().all(|x| {
            let neg = -x.clone();
            match (self.eval(x), self.eval(&neg)) {
                (Some(fx), Some(fneg)) => fneg == -fx,
                _ => false,
            }
        })
    }

    /// Exact count for a single map (no iteration).
    pub fn count_solutions(&self, equation: Equation) -> Result<u64> {
        if equation == Equation::Antifixed && !self.symmetric_domain() {
            return Err(Error::AsymmetricDomain {
                lo: self.lo().to_string(),
                hi: self.hi().to_string(),
            });
        }
        Ok(self.solutions(equation)?.len() as u64)
    }
}

/// Iterator over `f, f², …`; stops after the first error.
pub struct Iterates<'a, T> {
    base: &'a PlMap<T>,
    current: Option<PlMap<T>>,
    cap: PieceCap,
    failed: bool,
}

impl<T: Coord> Iterator for Iterates<'_, T> {
    type Item = Result<PlMap<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.current {
            None => Ok(self.base.clone()),
            Some(prev) => self.base.compose(prev, self.cap),
        };
        match next {
            Ok(m) => {
                self.current = Some(m.clone());
                Some(Ok(m))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// The odd map on `[-j, j]`: `x + 1` on `[-j, -2]`, `x - 1` on `[2, j]`,
/// `g(-1) = j`, `g(1) = -j`, linear in between.
pub fn build_gj<T: Coord>(j: u32) -> Result<PlMap<T>> {
    if j < 2 {
        return Err(Error::InvalidParameter(format!(
            "g_j requires j >= 2, got {j}"
        )));
    }
    let j = j as i64;
    let mut nodes = Vec::with_capacity(2 * j as usize);
    for x in -j..=-2 {
        nodes.push((x, x + 1));
    }
    nodes.push((-1, j));
    nodes.push((1, -j));
    for x in 2..=j {
        nodes.push((x, x - 1));
    }
    PlMap::new(
        nodes
            .into_iter()
            .map(|(x, y)| (coord(x), coord(y)))
            .collect(),
    )
}

/// Number of distinct solutions of `f^n(x) = x`.
pub fn count_fixed<T: Coord>(f: &PlMap<T>, n: u64, cap: PieceCap) -> Result<u64> {
    f.iterate(n, cap)?.count_solutions(Equation::Fixed)
}

/// Number of distinct solutions of `g^n(x) = -x`; the domain must be symmetric.
pub fn count_antifixed<T: Coord>(g: &PlMap<T>, n: u64, cap: PieceCap) -> Result<u64> {
    if !g.symmetric_domain() {
        return Err(Error::AsymmetricDomain {
            lo: g.lo().to_string(),
            hi: g.hi().to_string(),
        });
    }
    g.iterate(n, cap)?.count_solutions(Equation::Antifixed)
}

/// Counts for `n = 1..=n_max`, reusing each iterate for the next.
pub fn count_series<T: Coord>(
    f: &PlMap<T>,
    equation: Equation,
    n_max: u64,
    cap: PieceCap,
) -> Result<Vec<u64>> {
    if equation == Equation::Antifixed && !f.symmetric_domain() {
        return Err(Error::AsymmetricDomain {
            lo: f.lo().to_string(),
            hi: f.hi().to_string(),
        });
    }
    f.iterates(cap)
        .take(n_max as usize)
        .map(|m| m.and_then(|m| m.count_solutions(equation)))
        .collect()
}

/// Parses the map-file format: a `domain lo hi` header followed by one
/// `x y` node per line. Blank lines and `#` comments are ignored.
pub fn parse_map<T>(text: &str) -> Result<PlMap<T>>
where
    T: Coord + FromStr,
    T::Err: fmt::Display,
{
    let parse = |tok: &str, line: usize| {
        tok.parse::<T>().map_err(|e| Error::Parse {
            line,
            message: format!("`{tok}`: {e}"),
        })
    };
    let mut domain: Option<(T, T)> = None;
    let mut nodes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match (&domain, toks.as_slice()) {
            (None, ["domain", lo, hi]) => domain = Some((parse(lo, line)?, parse(hi, line)?)),
            (None, _) => {
                return Err(Error::Parse {
                    line,
                    message: "expected header `domain lo hi`".into(),
                });
            }
            (Some(_), [x, y]) => nodes.push((parse(x, line)?, parse(y, line)?)),
            (Some(_), _) => {
                return Err(Error::Parse {
                    line,
                    message: "expected a node `x y`".into(),
                });
            }
        }
    }
    let (lo, hi) = domain.ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing `domain` header".into(),
    })?;
    match (nodes.first(), nodes.last()) {
        (Some((first, _)), Some((last, _))) if *first == lo && *last == hi => {}
        _ => {
            return Err(Error::InvalidMap(format!(
                "nodes must start at x = {lo} and end at x = {hi}"
            )));
        }
    }
    PlMap::new(nodes)
}

impl<T: Coord> fmt::Display for PlMap<T> {
    /// Writes the map-file format accepted by [`parse_map`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {} {}", self.lo(), self.hi())?;
        for (x, y) in self.nodes() {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}
