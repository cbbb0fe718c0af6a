//! Exact integer feasibility for small linear systems `A·x ≤ b` over a bounded box.
//!
//! Depth-first branch and bound: each node tightens variable domains by
//! interval propagation over the rows, then branches on the variable with the
//! smallest remaining domain, trying values from low to high.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IlpError {
    #[error("variable {0} has no finite bound")]
    Unbounded(usize),
    #[error("row {row} has {got} coefficients, expected {dim}")]
    Arity { row: usize, got: usize, dim: usize },
    #[error("arithmetic overflow while propagating")]
    Overflow,
}

/// The constraint `coeffs · x ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRow {
    pub coeffs: Vec<i64>,
    pub bound: i64,
}

impl LinearRow {
    pub fn new(coeffs: Vec<i64>, bound: i64) -> Self {
        LinearRow { coeffs, bound }
    }

    pub fn satisfied(&self, x: &[i64]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(&a, &v)| a as i128 * v as i128)
            .sum();
        lhs <= self.bound as i128
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub dim: usize,
    pub rows: Vec<LinearRow>,
    pub lo: Vec<Option<i64>>,
    pub hi: Vec<Option<i64>>,
    /// Display names; `x{j}` when empty.
    pub names: Vec<String>,
}

impl LinearSystem {
    /// A system with no rows and no bounds.
    pub fn new(dim: usize) -> Self {
        LinearSystem {
            dim,
            rows: Vec::new(),
            lo: vec![None; dim],
            hi: vec![None; dim],
            names: Vec::new(),
        }
    }

    /// A system whose every variable lies in `[lo, hi]`.
    pub fn boxed(dim: usize, lo: i64, hi: i64) -> Self {
        let mut sys = Self::new(dim);
        for j in 0..dim {
            sys.set_bounds(j, lo, hi);
        }
        sys
    }

    pub fn set_bounds(&mut self, var: usize, lo: i64, hi: i64) {
        self.lo[var] = Some(lo);
        self.hi[var] = Some(hi);
    }

    pub fn add_le(&mut self, coeffs: Vec<i64>, bound: i64) {
        self.rows.push(LinearRow::new(coeffs, bound));
    }

    pub fn add_ge(&mut self, coeffs: Vec<i64>, bound: i64) {
        self.rows
            .push(LinearRow::new(coeffs.into_iter().map(|a| -a).collect(), -bound));
    }

    pub fn add_eq(&mut self, coeffs: Vec<i64>, bound: i64) {
        self.add_ge(coeffs.clone(), bound);
        self.add_le(coeffs, bound);
    }

    /// True if `x` lies in the box and satisfies every row.
    pub fn satisfied(&self, x: &[i64]) -> bool {
        x.len() == self.dim
            && (0..self.dim).all(|j| {
                self.lo[j].is_none_or(|l| x[j] >= l) && self.hi[j].is_none_or(|h| x[j] <= h)
            })
            && self.rows.iter().all(|r| r.satisfied(x))
    }

    fn name(&self, j: usize) -> String {
        self.names.get(j).cloned().unwrap_or_else(|| format!("x{j}"))
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subject to")?;
        for row in &self.rows {
            let mut terms = Vec::new();
            for (j, &a) in row.coeffs.iter().enumerate() {
                match a {
                    0 => {}
                    1 => terms.push(format!("+ {}", self.name(j))),
                    -1 => terms.push(format!("- {}", self.name(j))),
                    a if a > 0 => terms.push(format!("+ {a} {}", self.name(j))),
                    a => terms.push(format!("- {} {}", -a, self.name(j))),
                }
            }
            let lhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" ").trim_start_matches("+ ").to_string()
            };
            writeln!(f, "  {lhs} <= {}", row.bound)?;
        }
        writeln!(f, "bounds")?;
        for j in 0..self.dim {
            let show = |b: Option<i64>, inf: &str| b.map_or(inf.to_string(), |v| v.to_string());
            writeln!(
                f,
                "  {} <= {} <= {}",
                show(self.lo[j], "-inf"),
                self.name(j),
                show(self.hi[j], "+inf")
            )?;
        }
        write!(f, "end")
    }
}

/// Finds an integer point of `sys`, or `None` if there is none.
pub fn feasible(sys: &LinearSystem) -> Result<Option<Vec<i64>>, IlpError> {
    for (row, r) in sys.rows.iter().enumerate() {
        if r.coeffs.len() != sys.dim {
            return Err(IlpError::Arity {
                row,
                got: r.coeffs.len(),
                dim: sys.dim,
            });
        }
    }
    let mut lo = Vec::with_capacity(sys.dim);
    let mut hi = Vec::with_capacity(sys.dim);
    for j in 0..sys.dim {
        match (sys.lo[j], sys.hi[j]) {
            (Some(l), Some(h)) => {
                lo.push(l as i128);
                hi.push(h as i128);
            }
            _ => return Err(IlpError::Unbounded(j)),
        }
    }
    let rows: Vec<(Vec<(usize, i128)>, i128)> = sys
        .rows
        .iter()
        .map(|r| {
            let terms = r
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| (j, a as i128))
                .collect();
            (terms, r.bound as i128)
        })
        .collect();
    let found = search(&rows, lo, hi)?;
    let point = found.map(|x| x.into_iter().map(|v| v as i64).collect::<Vec<_>>());
    if let Some(x) = &point {
        assert!(sys.satisfied(x), "branch and bound returned an infeasible point");
    }
    Ok(point)
}

type Rows = [(Vec<(usize, i128)>, i128)];

fn search(rows: &Rows, mut lo: Vec<i128>, mut hi: Vec<i128>) -> Result<Option<Vec<i128>>, IlpError> {
    if !propagate(rows, &mut lo, &mut hi)? {
        return Ok(None);
    }
    let branch = (0..lo.len())
        .filter(|&j| lo[j] < hi[j])
        .min_by_key(|&j| hi[j] - lo[j]);
    let Some(j) = branch else {
        let ok = rows.iter().all(|(terms, b)| {
            terms.iter().map(|&(k, a)| a * lo[k]).sum::<i128>() <= *b
        });
        return Ok(ok.then_some(lo));
    };
    let (l, h) = (lo[j], hi[j]);
    for v in l..=h {
        let mut lo2 = lo.clone();
        let mut hi2 = hi.clone();
        lo2[j] = v;
        hi2[j] = v;
        if let Some(x) = search(rows, lo2, hi2)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

const MAX_ROUNDS: usize = 64;

/// Tightens `lo`/`hi`; returns false if some row cannot be satisfied.
fn propagate(rows: &Rows, lo: &mut [i128], hi: &mut [i128]) -> Result<bool, IlpError> {
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for (terms, b) in rows {
            let mut min_act: i128 = 0;
            for &(j, a) in terms {
                let c = if a > 0 { a * lo[j] } else { a * hi[j] };
                min_act = min_act.checked_add(c).ok_or(IlpError::Overflow)?;
            }
            if min_act > *b {
                return Ok(false);
            }
            for &(j, a) in terms {
                let own = if a > 0 { a * lo[j] } else { a * hi[j] };
                let slack = b - (min_act - own);
                if a > 0 {
                    let cap = div_floor(slack, a);
                    if cap < hi[j] {
                        hi[j] = cap;
                        changed = true;
                    }
                } else {
                    let floor = div_ceil(slack, a);
                    if floor > lo[j] {
                        lo[j] = floor;
                        changed = true;
                    }
                }
                if lo[j] > hi[j] {
                    return Ok(false);
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mut sys = LinearSystem::boxed(2, 0, 10);
        sys.add_le(vec![1, 1], 1);
        sys.add_ge(vec![1, 1], 2);
        assert_eq!(feasible(&sys).unwrap(), None);

        let mut sys = LinearSystem::boxed(1, 0, 10);
        sys.add_le(vec![2], 3);
        sys.add_ge(vec![2], 1);
        assert_eq!(feasible(&sys).unwrap(), Some(vec![1]));

        let sys = LinearSystem::boxed(1, 3, 3);
        assert_eq!(feasible(&sys).unwrap(), Some(vec![3]));
    }

    #[test]
    fn rejects_unbounded() {
        let sys = LinearSystem::new(1);
        assert_eq!(feasible(&sys), Err(IlpError::Unbounded(0)));
    }

    #[test]
    fn negative_bounds_and_coefficients() {
        let mut sys = LinearSystem::boxed(2, -5, 5);
        sys.add_eq(vec![3, -2], 7);
        let x = feasible(&sys).unwrap().unwrap();
        assert_eq!(3 * x[0] - 2 * x[1], 7);
        assert_eq!(x, vec![-1, -5]);
    }

    #[test]
    fn display_is_readable() {
        let mut sys = LinearSystem::boxed(2, 0, 3);
        sys.add_le(vec![1, -2], 4);
        let text = sys.to_string();
        assert!(text.contains("x0 - 2 x1 <= 4"), "{text}");
        assert!(text.contains("0 <= x1 <= 3"), "{text}");
    }
}
