use super::{Method, SumResult, TermStream};
use crate::error::{Error, Result};
use crate::numerics::BigReal;

const FIRST_NODE: f64 = 24.0;
const GROWTH: f64 = 1.4;
const MAX_NODES: usize = 18;
const MIN_NODES: usize = 8;

/// Even partial-sum indices used for the fit, all within `max_terms`.
pub fn extrapolation_nodes(max_terms: usize) -> Vec<usize> {
    let mut nodes: Vec<usize> = Vec::new();
    for i in 0..MAX_NODES {
        let n = 2 * (FIRST_NODE * GROWTH.powi(i as i32) / 2.0).round() as usize;
        if n > max_terms {
            break;
        }
        if nodes.last() != Some(&n) {
            nodes.push(n);
        }
    }
    nodes
}

/// Sums a slowly convergent series by fitting the partial sums `S_N` at a
/// geometric ladder of even `N` to
///
/// `S_N = S + sum_{j>=0} c_j N^-(g + j)`,  `g = exponent_halves / 2`,
///
/// and reading off `S`. The reported tail bound is the larger disagreement
/// between the full fit and the fits that drop the first or the last node.
///
/// Terms should be generated with guard bits beyond the working precision:
/// the fit is ill-conditioned by design.
pub fn sum_extrapolated(
    mut stream: TermStream<'_>,
    exponent_halves: u32,
    tol: &BigReal,
    max_terms: usize,
) -> Result<SumResult> {
    if exponent_halves == 0 {
        return Err(Error::InvalidArgument("algebraic exponent must be positive".into()));
    }
    let nodes = extrapolation_nodes(max_terms);
    if nodes.len() < MIN_NODES {
        return Err(Error::NoConvergence {
            terms: max_terms,
            reason: "term budget too small for extrapolation".into(),
        });
    }
    let last = *nodes.last().expect("nonempty");
    let mut partial = Vec::with_capacity(nodes.len());
    let mut sum: Option<BigReal> = None;
    let mut next_node = 0;
    for used in 1..=last {
        let t = stream.term(stream.start + used - 1)?;
        sum = Some(match sum {
            Some(s) => s + &t,
            None => t,
        });
        if used == nodes[next_node] {
            partial.push(sum.clone().expect("set above"));
            next_node += 1;
        }
    }
    let p = partial[0].precision_bits().max(tol.precision_bits());

    let full = fit(&nodes, &partial, exponent_halves, p)?;
    let head = fit(&nodes[1..], &partial[1..], exponent_halves, p)?;
    let tail = fit(&nodes[..nodes.len() - 1], &partial[..partial.len() - 1], exponent_halves, p)?;
    let spread = BigReal::max_of(&(full.clone() - &head).abs(), &(full.clone() - &tail).abs());

    let one = BigReal::one(p);
    let threshold = tol.clone() * &BigReal::max_of(&one, &full.abs());
    if spread >= threshold {
        return Err(Error::NoConvergence {
            terms: last,
            reason: format!("extrapolation spread {} exceeds tolerance", spread.to_decimal_digits(6)),
        });
    }
    Ok(SumResult { value: full, terms_used: last, tail_bound: spread, terminated: false, method: Method::Extrapolated })
}

/// Solves for the constant term of the asymptotic model through the given
/// points.
fn fit(nodes: &[usize], values: &[BigReal], exponent_halves: u32, p: usize) -> Result<BigReal> {
    let m = nodes.len();
    let mut rows: Vec<Vec<BigReal>> = Vec::with_capacity(m);
    for (&n, v) in nodes.iter().zip(values) {
        let nr = BigReal::from_i64(n as i64, p);
        let inv = nr.recip()?;
        let mut basis = inv.powi(exponent_halves as i64 / 2)?;
        if exponent_halves % 2 == 1 {
            basis = basis * &inv.sqrt()?;
        }
        let mut row = Vec::with_capacity(m + 1);
        row.push(BigReal::one(p));
        for _ in 1..m {
            row.push(basis.clone());
            basis = basis * &inv;
        }
        row.push(v.with_precision(p));
        rows.push(row);
    }
    let solution = solve(rows)?;
    Ok(solution[0].clone())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<BigReal>>) -> Result<Vec<BigReal>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()))
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return Err(Error::InvalidArgument("singular extrapolation system".into()));
        }
        a.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col].checked_div(&a[col][col])?;
            if factor.is_zero() {
                continue;
            }
            for j in col..=m {
                let delta = factor.clone() * &a[col][j];
                a[row][j] = a[row][j].clone() - &delta;
            }
        }
    }
    let mut x = vec![BigReal::zero(a[0][0].precision_bits()); m];
    for row in (0..m).rev() {
        let mut acc = a[row][m].clone();
        for j in row + 1..m {
            acc = acc - &(a[row][j].clone() * &x[j]);
        }
        x[row] = acc.checked_div(&a[row][row])?;
    }
    Ok(x)
}
