//! Linear sum assignment by the Hungarian method.
//!
//! Costs are converted to a common binary fixed-point grid (`i128` multiples of
//! `2^s`) before solving. Every `f64` is a dyadic rational, so whenever the
//! matrix's dynamic range fits the grid the conversion is lossless and the
//! solver compares permutation costs in exact arithmetic. Permutations that
//! tie in exact arithmetic therefore tie in the solver, which is what makes the
//! lexicographic tie-break and the reported total reproducible.
//!
//! The solve is the shortest-augmenting-path form of Kuhn–Munkres with row and
//! column potentials, `O(m³)` time and `O(m²)` space. A second pass over the
//! equality subgraph (entries with zero reduced cost) picks the
//! lexicographically smallest optimal permutation, also in `O(m³)`.

use crate::error::Result;
use crate::numeric::exact_sum;
use crate::types::{Assignment, CostMatrix};

/// An optimal assignment plus the dual potentials certifying it.
///
/// `row_potentials[i] + col_potentials[j] <= cost(i, j)` for all cells, with
/// equality on the selected cells.
#[derive(Debug, Clone, PartialEq)]
pub struct LsapSolution {
    pub assignment: Assignment,
    pub row_potentials: Vec<f64>,
    pub col_potentials: Vec<f64>,
    /// False when the matrix spanned too many binary orders of magnitude for
    /// the fixed-point grid and the smallest entries were rounded.
    pub exact: bool,
}

/// Minimum-cost permutation of `costs`; lexicographically smallest `target_of`
/// among equal-cost optima.
pub fn solve(costs: &CostMatrix) -> Result<Assignment> {
    Ok(solve_with_duals(costs)?.assignment)
}

pub fn solve_with_duals(costs: &CostMatrix) -> Result<LsapSolution> {
    let m = costs.dim();
    if m == 0 {
        return Ok(LsapSolution {
            assignment: Assignment::identity(0),
            row_potentials: vec![],
            col_potentials: vec![],
            exact: true,
        });
    }

    let grid = FixedGrid::from_costs(costs);
    let mut state = Hungarian::new(m, &grid.values);
    state.run();
    state.lexicographic_min();

    let target_of = state.target_of();
    let total = exact_sum(target_of.iter().enumerate().map(|(i, &j)| costs.get(i, j)));
    let row_potentials = state.u[1..].iter().map(|&u| grid.to_f64(u)).collect();
    let col_potentials = state.v[1..].iter().map(|&v| grid.to_f64(v)).collect();

    Ok(LsapSolution {
        assignment: Assignment::new(target_of, total)?,
        row_potentials,
        col_potentials,
        exact: grid.exact,
    })
}

/// Non-negative costs as integer multiples of `2^scale_exp`.
struct FixedGrid {
    values: Vec<i128>,
    scale_exp: i32,
    exact: bool,
}

/// `(mantissa, exponent)` with odd mantissa, `v = mantissa · 2^exponent`.
fn decompose(v: f64) -> Option<(u64, i32)> {
    if v == 0.0 {
        return None;
    }
    let bits = v.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_bits - 1075) };
    let tz = mant.trailing_zeros();
    Some((mant >> tz, exp + tz as i32))
}

impl FixedGrid {
    fn from_costs(costs: &CostMatrix) -> Self {
        let m = costs.dim();
        let parts: Vec<Option<(u64, i32)>> = costs.as_slice().iter().map(|&c| decompose(c)).collect();

        let mut min_exp = i32::MAX;
        let mut max_top = i32::MIN;
        for &(mant, exp) in parts.iter().flatten() {
            min_exp = min_exp.min(exp);
            max_top = max_top.max(exp + (64 - mant.leading_zeros()) as i32);
        }
        if min_exp == i32::MAX {
            return Self { values: vec![0; m * m], scale_exp: 0, exact: true };
        }

        // Potentials and path lengths stay within a few multiples of m·max.
        let headroom = 120 - (usize::BITS - m.leading_zeros()) as i32;
        let scale_exp = min_exp.max(max_top - headroom);
        let exact = scale_exp == min_exp;

        let values = parts
            .iter()
            .map(|p| match *p {
                None => 0,
                Some((mant, exp)) if exp >= scale_exp => (mant as i128) << (exp - scale_exp),
                Some((mant, exp)) => {
                    let shift = (scale_exp - exp) as u32;
                    if shift >= 66 {
                        0
                    } else {
                        let m = mant as i128;
                        (m + (1i128 << (shift - 1))) >> shift
                    }
                }
            })
            .collect();
        Self { values, scale_exp, exact }
    }

    fn to_f64(&self, k: i128) -> f64 {
        let mut v = k as f64;
        let mut s = self.scale_exp;
        while s < -1000 {
            v *= 2f64.powi(-1000);
            s += 1000;
        }
        while s > 1000 {
            v *= 2f64.powi(1000);
            s -= 1000;
        }
        v * 2f64.powi(s)
    }
}

const INF: i128 = i128::MAX / 4;

/// Shortest-augmenting-path Hungarian state, 1-based with a sentinel column 0.
struct Hungarian<'a> {
    m: usize,
    cost: &'a [i128],
    u: Vec<i128>,
    v: Vec<i128>,
    /// `owner[j]`: row matched to column `j` (0 = none).
    owner: Vec<usize>,
}

impl<'a> Hungarian<'a> {
    fn new(m: usize, cost: &'a [i128]) -> Self {
        Self { m, cost, u: vec![0; m + 1], v: vec![0; m + 1], owner: vec![0; m + 1] }
    }

    #[inline]
    fn c(&self, i: usize, j: usize) -> i128 {
        self.cost[(i - 1) * self.m + (j - 1)]
    }

    #[inline]
    fn reduced(&self, i: usize, j: usize) -> i128 {
        self.c(i, j) - self.u[i] - self.v[j]
    }

    fn run(&mut self) {
        let m = self.m;
        let mut way = vec![0usize; m + 1];
        let mut min_slack = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        for i in 1..=m {
            self.owner[0] = i;
            let mut j0 = 0;
            min_slack.fill(INF);
            used.fill(false);
            loop {
                used[j0] = true;
                let i0 = self.owner[j0];
                let mut delta = INF;
                let mut j1 = 0;
                for j in 1..=m {
                    if used[j] {
                        continue;
                    }
                    let cur = self.reduced(i0, j);
                    if cur < min_slack[j] {
                        min_slack[j] = cur;
                        way[j] = j0;
                    }
                    if min_slack[j] < delta {
                        delta = min_slack[j];
                        j1 = j;
                    }
                }
                for j in 0..=m {
                    if used[j] {
                        let r = self.owner[j];
                        self.u[r] += delta;
                        self.v[j] -= delta;
                    } else {
                        min_slack[j] -= delta;
                    }
                }
                j0 = j1;
                if self.owner[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                self.owner[j0] = self.owner[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
    }

    fn target_of(&self) -> Vec<usize> {
        let mut target = vec![0; self.m];
        for j in 1..=self.m {
            target[self.owner[j] - 1] = j - 1;
        }
        target
    }

    /// Rewrites the optimal matching into the lexicographically smallest
    /// perfect matching of the equality subgraph.
    ///
    /// Rows are fixed in order. For row `i` currently on column `c0`, a
    /// backward search from `c0` over unfixed rows finds every column `j` that
    /// row `i` could take while the displaced rows shift along tight edges
    /// into the freed `c0`. The smallest such `j` is taken.
    fn lexicographic_min(&mut self) {
        let m = self.m;
        let mut col_of = vec![0usize; m + 1];
        for j in 1..=m {
            col_of[self.owner[j]] = j;
        }
        // via[j]: column the owner of j moves to; 0 marks c0, MAX unreached
        let mut via = vec![usize::MAX; m + 1];
        let mut queue = Vec::with_capacity(m);
        for i in 1..=m {
            let c0 = col_of[i];
            via.fill(usize::MAX);
            via[c0] = 0;
            queue.clear();
            queue.push(c0);
            let mut head = 0;
            while head < queue.len() {
                let c = queue[head];
                head += 1;
                for (r, &rc) in col_of.iter().enumerate().skip(i + 1) {
                    if via[rc] == usize::MAX && self.reduced(r, c) == 0 {
                        via[rc] = c;
                        queue.push(rc);
                    }
                }
            }
            let Some(j) = (1..=m).find(|&j| via[j] != usize::MAX && self.reduced(i, j) == 0) else {
                continue;
            };
            if j == c0 {
                continue;
            }
            // shift displaced rows along the chain ending at c0
            let mut col = j;
            let mut moving = self.owner[col];
            self.owner[col] = i;
            col_of[i] = col;
            while col != c0 {
                let next = via[col];
                let displaced = self.owner[next];
                self.owner[next] = moving;
                col_of[moving] = next;
                moving = displaced;
                col = next;
            }
        }
    }
}
