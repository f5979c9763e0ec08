//! Memoized integer sequences on the positive integers.
//!
//! Generators cover the two recurrence families (`theorem4`, and the `φ_j`,
//! `ψ_j` pair counting fixed and antifixed points of `g_j`); combinators build
//! new sequences pointwise. Every sequence carries [`Guarantees`] describing
//! which divisibility property is known to hold by construction. Reports use
//! them as labels only; verification always recomputes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Which divisibility facts are inherited from the construction of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Guarantees {
    /// Counts solutions of `f^n(x) = x` for some self-map `f`.
    pub fixed_point_count: bool,
    /// Counts solutions of `g^n(x) = -x` for some odd self-map `g`.
    pub odd_antifixed_count: bool,
    /// `n | phi1(seq, n)` for all `n`, either from a fixed-point count or from
    /// closure under integer linear combinations.
    pub phi1_divisible: bool,
}

impl Guarantees {
    pub const NONE: Guarantees = Guarantees {
        fixed_point_count: false,
        odd_antifixed_count: false,
        phi1_divisible: false,
    };

    fn fixed_points() -> Self {
        Guarantees {
            fixed_point_count: true,
            phi1_divisible: true,
            ..Self::NONE
        }
    }

    fn antifixed_points() -> Self {
        Guarantees {
            odd_antifixed_count: true,
            ..Self::NONE
        }
    }

    fn phi1_closure() -> Self {
        Guarantees {
            phi1_divisible: true,
            ..Self::NONE
        }
    }

    /// Short labels, e.g. `map-derived-phi+phi1-closure`.
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.fixed_point_count {
            out.push("map-derived-phi");
        }
        if self.odd_antifixed_count {
            out.push("odd-map-derived-psi");
        }
        if self.phi1_divisible && !self.fixed_point_count {
            out.push("phi1-closure");
        }
        if out.is_empty() {
            out.push("no-guarantee");
        }
        out
    }
}

impl fmt::Display for Guarantees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels().join("+"))
    }
}

/// The constructor a sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Theorem4,
    Theorem5Phi,
    Theorem5Psi,
    Constant,
    LinearCombination,
    Dilation,
    Product,
    ExternalTable,
}

impl SequenceKind {
    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Theorem4 => "theorem4",
            SequenceKind::Theorem5Phi => "theorem5-phi",
            SequenceKind::Theorem5Psi => "theorem5-psi",
            SequenceKind::Constant => "constant",
            SequenceKind::LinearCombination => "linear-combination",
            SequenceKind::Dilation => "dilation",
            SequenceKind::Product => "product",
            SequenceKind::ExternalTable => "external-table",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum BaseRule {
    /// `m(2^n - 1) + k`
    Theorem4 {
        k: i64,
        m: i64,
    },
    Theorem5Phi {
        j: u32,
    },
    Theorem5Psi {
        j: u32,
    },
}

impl BaseRule {
    fn value(self, n: u32) -> BigInt {
        let three = |e: u32| BigInt::from(3u32).pow(e);
        match self {
            BaseRule::Theorem4 { k, m } => {
                BigInt::from(m) * ((BigInt::one() << n as usize) - 1) + BigInt::from(k)
            }
            BaseRule::Theorem5Phi { j } if n <= j => three(n) - 2,
            BaseRule::Theorem5Phi { j } => three(n) - 2 - BigInt::from(4 * n) * three(n - j - 1),
            BaseRule::Theorem5Psi { j } if n < j => three(n),
            BaseRule::Theorem5Psi { j } if n == j => three(j) - 2 * j,
            BaseRule::Theorem5Psi { j } => three(n) - BigInt::from(4 * n) * three(n - j - 1),
        }
    }
}

/// `a(n) = base(n)` for `n <= coefficients.len()`, otherwise
/// `a(n) = sum_i coefficients[i-1] * a(n - i) + constant`.
#[derive(Debug)]
struct Recurrence {
    base: BaseRule,
    coefficients: Vec<BigInt>,
    constant: BigInt,
}

impl Recurrence {
    fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Extends `values` (holding a(1), a(2), ...) bottom-up through index `n`.
    fn extend(&self, values: &mut Vec<BigInt>, n: usize) {
        while values.len() < n {
            let next = values.len() + 1;
            let v = if next <= self.order() {
                self.base.value(next as u32)
            } else {
                let mut acc = self.constant.clone();
                for (i, c) in self.coefficients.iter().enumerate() {
                    acc += c * &values[next - 2 - i];
                }
                acc
            };
            values.push(v);
        }
    }
}

#[derive(Debug)]
enum Body {
    Recurrence(Recurrence),
    Constant(BigInt),
    Linear {
        k: BigInt,
        a: Sequence,
        m: BigInt,
        b: Sequence,
    },
    Dilation {
        seq: Sequence,
        factor: u64,
    },
    Product(Vec<Sequence>),
    Table(Vec<BigInt>),
}

#[derive(Debug, Default)]
struct Memo {
    /// a(1), a(2), ... for recurrence kinds.
    prefix: Vec<BigInt>,
    sparse: BTreeMap<u64, BigInt>,
}

#[derive(Debug)]
struct Inner {
    id: String,
    kind: SequenceKind,
    guarantees: Guarantees,
    body: Body,
    memo: Mutex<Memo>,
}

/// A shareable, thread-safe, memoized sequence `n ↦ value` for `n >= 1`.
///
/// Cloning is cheap and shares the cache.
#[derive(Debug, Clone)]
pub struct Sequence {
    inner: Arc<Inner>,
}

impl Sequence {
    fn new(id: String, kind: SequenceKind, guarantees: Guarantees, body: Body) -> Self {
        Sequence {
            inner: Arc::new(Inner {
                id,
                kind,
                guarantees,
                body,
                memo: Mutex::default(),
            }),
        }
    }

    /// `m(2^n - 1) + k` for `n <= j`, then the sum of the previous `j` values
    /// minus `(j - 1)k`.
    pub fn theorem4(j: u32, k: i64, m: i64) -> Result<Self> {
        if j < 2 {
            return Err(Error::InvalidParameter(format!(
                "theorem4 requires j >= 2, got {j}"
            )));
        }
        let rec = Recurrence {
            base: BaseRule::Theorem4 { k, m },
            coefficients: vec![BigInt::one(); j as usize],
            constant: -BigInt::from(j - 1) * BigInt::from(k),
        };
        Ok(Self::new(
            format!("theorem4({j},{k},{m})"),
            SequenceKind::Theorem4,
            Guarantees::phi1_closure(),
            Body::Recurrence(rec),
        ))
    }

    /// Number of solutions of `g_j^n(x) = x`.
    pub fn theorem5_phi(j: u32) -> Result<Self> {
        let rec = Self::theorem5_recurrence(j, BaseRule::Theorem5Phi { j })?;
        Ok(Self::new(
            format!("theorem5phi({j})"),
            SequenceKind::Theorem5Phi,
            Guarantees::fixed_points(),
            Body::Recurrence(rec),
        ))
    }

    /// Number of solutions of `g_j^n(x) = -x`.
    pub fn theorem5_psi(j: u32) -> Result<Self> {
        let rec = Self::theorem5_recurrence(j, BaseRule::Theorem5Psi { j })?;
        Ok(Self::new(
            format!("theorem5psi({j})"),
            SequenceKind::Theorem5Psi,
            Guarantees::antifixed_points(),
            Body::Recurrence(rec),
        ))
    }

    fn theorem5_recurrence(j: u32, base: BaseRule) -> Result<Recurrence> {
        if j < 2 {
            return Err(Error::InvalidParameter(format!(
                "theorem5 requires j >= 2, got {j}"
            )));
        }
        Ok(Recurrence {
            base,
            coefficients: theorem5_coefficients(j),
            constant: BigInt::zero(),
        })
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        Self::new(
            c.to_string(),
            SequenceKind::Constant,
            Guarantees::phi1_closure(),
            Body::Constant(c),
        )
    }

    /// Pointwise `k·a(n) + m·b(n)`.
    pub fn linear_combine(
        k: impl Into<BigInt>,
        a: &Sequence,
        m: impl Into<BigInt>,
        b: &Sequence,
    ) -> Self {
        let (k, m) = (k.into(), m.into());
        let guarantees = Guarantees {
            phi1_divisible: a.guarantees().phi1_divisible && b.guarantees().phi1_divisible,
            ..Guarantees::NONE
        };
        Self::new(
            format!("lin({k},{},{m},{})", a.id(), b.id()),
            SequenceKind::LinearCombination,
            guarantees,
            Body::Linear {
                k,
                a: a.clone(),
                m,
                b: b.clone(),
            },
        )
    }

    /// `n ↦ seq(k·n)`. A fixed-point count stays one (it counts for `f^k`).
    pub fn dilate(seq: &Sequence, k: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(
                "dilation factor must be >= 1".into(),
            ));
        }
        let g = seq.guarantees();
        let guarantees = Guarantees {
            fixed_point_count: g.fixed_point_count,
            odd_antifixed_count: g.odd_antifixed_count && k % 2 == 1,
            phi1_divisible: g.fixed_point_count,
        };
        Ok(Self::dilation(
            format!("dilate({},{k})", seq.id()),
            seq,
            k,
            guarantees,
        ))
    }

    /// `n ↦ seq(k·n)` for odd `k`; keeps the antifixed-count guarantee.
    pub fn dilate_odd(seq: &Sequence, k: u64) -> Result<Self> {
        if k < 1 || k.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "odd dilation factor must be an odd positive integer, got {k}"
            )));
        }
        let g = seq.guarantees();
        let guarantees = Guarantees {
            fixed_point_count: g.fixed_point_count,
            odd_antifixed_count: g.odd_antifixed_count,
            phi1_divisible: g.fixed_point_count,
        };
        Ok(Self::dilation(
            format!("dilateodd({},{k})", seq.id()),
            seq,
            k,
            guarantees,
        ))
    }

    fn dilation(id: String, seq: &Sequence, factor: u64, guarantees: Guarantees) -> Self {
        Self::new(
            id,
            SequenceKind::Dilation,
            guarantees,
            Body::Dilation {
                seq: seq.clone(),
                factor,
            },
        )
    }

    /// Pointwise product; a product of map counts counts for the product map.
    pub fn product(seqs: &[Sequence]) -> Result<Self> {
        if seqs.is_empty() {
            return Err(Error::InvalidParameter("product of an empty list".into()));
        }
        let all = |p: fn(&Guarantees) -> bool| seqs.iter().all(|s| p(&s.guarantees()));
        let fixed = all(|g| g.fixed_point_count);
        let guarantees = Guarantees {
            fixed_point_count: fixed,
            odd_antifixed_count: all(|g| g.odd_antifixed_count),
            phi1_divisible: fixed,
        };
        let ids: Vec<&str> = seqs.iter().map(|s| s.id()).collect();
        Ok(Self::new(
            format!("prod({})", ids.join(",")),
            SequenceKind::Product,
            guarantees,
            Body::Product(seqs.to_vec()),
        ))
    }

    /// Finite table; `values[i]` is `seq(i + 1)`.
    pub fn table(id: impl Into<String>, values: Vec<BigInt>) -> Self {
        Self::new(
            id.into(),
            SequenceKind::ExternalTable,
            Guarantees::NONE,
            Body::Table(values),
        )
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Ok(Self::table(
            format!("table({})", path.display()),
            parse_table(&text)?,
        ))
    }

    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn kind(&self) -> SequenceKind {
        self.inner.kind
    }

    pub fn guarantees(&self) -> Guarantees {
        self.inner.guarantees
    }

    pub fn eval(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::NonPositive(n.to_string()));
        }
        match &self.inner.body {
            Body::Recurrence(rec) => {
                let idx = usize::try_from(n)
                    .map_err(|_| Error::InvalidParameter(format!("n = {n} too large")))?;
                let mut memo = self.lock();
                rec.extend(&mut memo.prefix, idx);
                Ok(memo.prefix[idx - 1].clone())
            }
            Body::Constant(c) => Ok(c.clone()),
            Body::Table(values) => {
                values
                    .get(n as usize - 1)
                    .cloned()
                    .ok_or_else(|| Error::OutOfTableRange {
                        id: self.inner.id.clone(),
                        n,
                        len: values.len() as u64,
                    })
            }
            Body::Linear { .. } | Body::Dilation { .. } | Body::Product(_) => {
                if let Some(v) = self.lock().sparse.get(&n) {
                    return Ok(v.clone());
                }
                let v = self.eval_composite(n)?;
                Ok(self.lock().sparse.entry(n).or_insert(v).clone())
            }
        }
    }

    fn eval_composite(&self, n: u64) -> Result<BigInt> {
        match &self.inner.body {
            Body::Linear { k, a, m, b } => Ok(k * a.eval(n)? + m * b.eval(n)?),
            Body::Dilation { seq, factor } => {
                let arg = n
                    .checked_mul(*factor)
                    .ok_or_else(|| Error::InvalidParameter(format!("{n} * {factor} overflows")))?;
                seq.eval(arg)
            }
            Body::Product(seqs) => seqs
                .iter()
                .try_fold(BigInt::one(), |acc, s| Ok(acc * s.eval(n)?)),
            _ => unreachable!("not a composite sequence"),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Memo> {
        self.inner.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Values at `1..=n_max`.
    pub fn values(&self, n_max: u64) -> Result<Vec<BigInt>> {
        (1..=n_max).map(|n| self.eval(n)).collect()
    }

    pub fn phi1(&self, n: u64) -> Result<BigInt> {
        arith::phi1(|i| self.eval(i), n)
    }

    pub fn phi2(&self, n: u64) -> Result<BigInt> {
        arith::phi2(|i| self.eval(i), n)
    }
}

/// Coefficients shared by `φ_j` and `ψ_j`: `2i - 1` for `i <= j`, then
/// `4j - 2i - 1` for `j < i <= 2j - 1`.
pub fn theorem5_coefficients(j: u32) -> Vec<BigInt> {
    (1..2 * j)
        .map(|i| {
            if i <= j {
                BigInt::from(2 * i - 1)
            } else {
                BigInt::from(4 * j - 2 * i - 1)
            }
        })
        .collect()
}

/// One decimal value per line; blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<Vec<BigInt>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let v = content.parse::<BigInt>().map_err(|e| Error::Parse {
            line: lineno + 1,
            message: format!("`{content}`: {e}"),
        })?;
        values.push(v);
    }
    Ok(values)
}
