//! Row-by-row divisibility reports and three-way cross-checks.

use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::arith::divisibility_check;
use crate::error::Error;
use crate::interval_map::{build_gj, Equation, PieceCap};
use crate::sequences::{Guarantees, Sequence};
use crate::symbolic::symbolic_counts;
use crate::Rational;

/// Which operator is applied and which modulus is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `n | phi1(seq, n)`
    Phi1ModN,
    /// `2n | phi2(seq, n)`
    Phi2Mod2N,
    /// `n | phi1(seq, n)` for an antifixed-point count; an open question,
    /// so failures are findings rather than errors.
    Phi1OfPsi,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Phi1ModN => "phi1-mod-n",
            Mode::Phi2Mod2N => "phi2-mod-2n",
            Mode::Phi1OfPsi => "phi1-of-psi",
        }
    }

    pub fn modulus(self, n: u64) -> u64 {
        match self {
            Mode::Phi2Mod2N => 2 * n,
            Mode::Phi1ModN | Mode::Phi1OfPsi => n,
        }
    }

    /// The mode matching what a sequence is known to count.
    pub fn for_sequence(seq: &Sequence) -> Mode {
        let g = seq.guarantees();
        if g.odd_antifixed_count && !g.fixed_point_count {
            Mode::Phi2Mod2N
        } else {
            Mode::Phi1ModN
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub n: u64,
    /// `seq(n)`; `None` when evaluation failed.
    pub q: Option<BigInt>,
    /// The operator value; `None` when evaluation failed.
    pub phi: Option<BigInt>,
    pub modulus: u64,
    pub remainder: Option<BigInt>,
    pub pass: bool,
    pub error: Option<Error>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct DivisibilityReport {
    pub sequence_id: String,
    pub guarantees: Guarantees,
    pub mode: Mode,
    pub rows: Vec<ReportRow>,
}

impl DivisibilityReport {
    pub fn summary(&self) -> Summary {
        let failed = || self.rows.iter().filter(|r| !r.pass);
        Summary {
            checked: self.rows.len(),
            failures: failed().count(),
            first_failure: failed().next().map(|r| r.n),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn check_row(seq: &Sequence, mode: Mode, n: u64) -> ReportRow {
    let modulus = mode.modulus(n);
    let computed = seq.eval(n).and_then(|q| {
        let phi = match mode {
            Mode::Phi2Mod2N => seq.phi2(n)?,
            Mode::Phi1ModN | Mode::Phi1OfPsi => seq.phi1(n)?,
        };
        let d = divisibility_check(&phi, &BigInt::from(modulus))?;
        Ok((q, phi, d))
    });
    match computed {
        Ok((q, phi, d)) => ReportRow {
            n,
            q: Some(q),
            phi: Some(phi),
            modulus,
            remainder: Some(d.remainder),
            pass: d.passes,
            error: None,
        },
        Err(e) => ReportRow {
            n,
            q: None,
            phi: None,
            modulus,
            remainder: None,
            pass: false,
            error: Some(e),
        },
    }
}

/// Checks every `n` in `1..=n_max`; evaluation errors become failing rows.
pub fn verify(seq: &Sequence, mode: Mode, n_max: u64) -> DivisibilityReport {
    DivisibilityReport {
        sequence_id: seq.id().to_string(),
        guarantees: seq.guarantees(),
        mode,
        rows: (1..=n_max).map(|n| check_row(seq, mode, n)).collect(),
    }
}

/// One computation path's value for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Value(BigInt),
    NotApplicable,
    Failed(Error),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::NotApplicable => f.write_str("n/a"),
            Cell::Failed(_) => f.write_str("error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub recurrence: Cell,
    pub oracle: Cell,
    pub symbolic: Cell,
}

impl Triple {
    pub fn cells(&self) -> [&Cell; 3] {
        [&self.recurrence, &self.oracle, &self.symbolic]
    }

    /// All present values are equal and no path failed.
    pub fn agree(&self) -> bool {
        let mut values = Vec::new();
        for c in self.cells() {
            match c {
                Cell::Value(v) => values.push(v),
                Cell::NotApplicable => {}
                Cell::Failed(_) => return false,
            }
        }
        values.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckRow {
    pub n: u64,
    /// Solutions of `g_j^n(x) = x`.
    pub fixed: Triple,
    /// Solutions of `g_j^n(x) = -x`.
    pub antifixed: Triple,
}

impl CrossCheckRow {
    pub fn agree(&self) -> bool {
        self.fixed.agree() && self.antifixed.agree()
    }
}

#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub j: u32,
    pub rows: Vec<CrossCheckRow>,
}

impl CrossCheckReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(CrossCheckRow::agree)
    }

    /// First error raised by any path, if any.
    pub fn first_error(&self) -> Option<&Error> {
        self.rows
            .iter()
            .flat_map(|r| r.fixed.cells().into_iter().chain(r.antifixed.cells()))
            .find_map(|c| match c {
                Cell::Failed(e) => Some(e),
                _ => None,
            })
    }
}

fn value_cells(vals: Vec<BigUint>) -> Vec<Cell> {
    vals.into_iter().map(|v| Cell::Value(v.into())).collect()
}

/// Fixed and antifixed counts from one pass over the iterates of `g_j`.
/// A failure at some `n` marks that row and every later one.
fn oracle_cells(j: u32, n_max: u64, cap: PieceCap) -> (Vec<Cell>, Vec<Cell>) {
    let n = n_max as usize;
    let g = match build_gj::<Rational>(j) {
        Ok(g) => g,
        Err(e) => return (vec![Cell::Failed(e.clone()); n], vec![Cell::Failed(e); n]),
    };
    let (mut fixed, mut anti) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for m in g.iterates(cap).take(n) {
        let counts = m.and_then(|m| {
            Ok((
                m.count_solutions(Equation::Fixed)?,
                m.count_solutions(Equation::Antifixed)?,
            ))
        });
        match counts {
            Ok((c, d)) => {
                fixed.push(Cell::Value(BigInt::from(c)));
                anti.push(Cell::Value(BigInt::from(d)));
            }
            Err(e) => {
                fixed.resize(n, Cell::Failed(e.clone()));
                anti.resize(n, Cell::Failed(e));
                break;
            }
        }
    }
    (fixed, anti)
}

/// Compares the recurrence, the map oracle, and (for `j >= 3`) the symbolic
/// engine on `n = 1..=n_max`.
pub fn crosscheck(j: u32, n_max: u64, cap: PieceCap) -> CrossCheckReport {
    let n = n_max as usize;
    let recurrence = |seq: crate::Result<Sequence>| -> Vec<Cell> {
        match seq {
            Ok(s) => (1..=n_max)
                .map(|i| s.eval(i).map_or_else(Cell::Failed, Cell::Value))
                .collect(),
            Err(e) => vec![Cell::Failed(e); n],
        }
    };
    let rec_fixed = recurrence(Sequence::theorem5_phi(j));
    let rec_anti = recurrence(Sequence::theorem5_psi(j));
    let (orc_fixed, orc_anti) = oracle_cells(j, n_max, cap);
    let (sym_fixed, sym_anti) = if j >= 3 {
        match symbolic_counts::<BigUint>(j, n_max) {
            Ok(pairs) => {
                let (c, d): (Vec<BigUint>, Vec<BigUint>) = pairs.into_iter().unzip();
                (value_cells(c), value_cells(d))
            }
            Err(e) => (vec![Cell::Failed(e.clone()); n], vec![Cell::Failed(e); n]),
        }
    } else {
        (vec![Cell::NotApplicable; n], vec![Cell::NotApplicable; n])
    };
    let rows = (0..n)
        .map(|i| CrossCheckRow {
            n: i as u64 + 1,
            fixed: Triple {
                recurrence: rec_fixed[i].clone(),
                oracle: orc_fixed[i].clone(),
                symbolic: sym_fixed[i].clone(),
            },
            antifixed: Triple {
                recurrence: rec_anti[i].clone(),
                oracle: orc_anti[i].clone(),
                symbolic: sym_anti[i].clone(),
            },
        })
        .collect();
    CrossCheckReport { j, rows }
}
