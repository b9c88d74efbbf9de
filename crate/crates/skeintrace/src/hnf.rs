//! Small exact integer linear algebra: Hermite-style row echelon over a
//! chosen column (generator) priority, used for lattice quotients and for
//! expressing dependent relation vectors through a basis.

/// Row echelon form of integer rows over the column order `priority`.
///
/// Returns `(rows, pivots)` where `rows` spans the same lattice as the
/// input, `pivots[i]` is the pivot column of `rows[i]` (positive pivot
/// entry, echelon in priority order, entries above pivots reduced into
/// `[0, pivot)`).  Zero rows are dropped.
pub fn echelon(rows_in: &[Vec<i64>], priority: &[usize]) -> (Vec<Vec<i64>>, Vec<usize>) {
    let (basis, pivots, _) = echelon_tracked(rows_in, priority);
    (basis, pivots)
}

/// Like [`echelon`], also returning, for each output row, its integer
/// coefficients over the input rows.
pub fn echelon_with_coeffs(rows_in: &[Vec<i64>], priority: &[usize]) -> Vec<Vec<i64>> {
    echelon_tracked(rows_in, priority).2
}

fn echelon_tracked(
    rows_in: &[Vec<i64>],
    priority: &[usize],
) -> (Vec<Vec<i64>>, Vec<usize>, Vec<Vec<i64>>) {
    let n_in = rows_in.len();
    let mut rows: Vec<(Vec<i64>, Vec<i64>)> = rows_in
        .iter()
        .enumerate()
        .filter(|(_, r)| r.iter().any(|&x| x != 0))
        .map(|(i, r)| {
            let mut c = vec![0i64; n_in];
            c[i] = 1;
            (r.clone(), c)
        })
        .collect();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut coeffs: Vec<Vec<i64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &col in priority {
        loop {
            let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].0[col] != 0).collect();
            if idx.is_empty() {
                break;
            }
            if idx.len() == 1 {
                let (mut r, mut c) = rows.remove(idx[0]);
                if r[col] < 0 {
                    for x in r.iter_mut() {
                        *x = -*x;
                    }
                    for x in c.iter_mut() {
                        *x = -*x;
                    }
                }
                basis.push(r);
                coeffs.push(c);
                pivots.push(col);
                break;
            }
            idx.sort_by_key(|&i| rows[i].0[col].abs());
            let (small, big) = (idx[0], idx[1]);
            let q = rows[big].0[col].div_euclid(rows[small].0[col]);
            let (sm_r, sm_c) = rows[small].clone();
            for (x, s) in rows[big].0.iter_mut().zip(sm_r.iter()) {
                *x -= q * s;
            }
            for (x, s) in rows[big].1.iter_mut().zip(sm_c.iter()) {
                *x -= q * s;
            }
        }
    }
    // reduce entries above pivots
    for i in (0..basis.len()).rev() {
        let p = pivots[i];
        let pv = basis[i][p];
        for j in 0..i {
            let q = basis[j][p].div_euclid(pv);
            if q != 0 {
                let bi = basis[i].clone();
                let ci = coeffs[i].clone();
                for (x, s) in basis[j].iter_mut().zip(bi.iter()) {
                    *x -= q * s;
                }
                for (x, s) in coeffs[j].iter_mut().zip(ci.iter()) {
                    *x -= q * s;
                }
            }
        }
    }
    (basis, pivots, coeffs)
}

/// Solves `sum_i c_i * basis[i] = v` over the integers when `basis` is in
/// echelon form with the given pivots.  Returns `None` if unsolvable.
pub fn solve_in_span(basis: &[Vec<i64>], pivots: &[usize], v: &[i64]) -> Option<Vec<i64>> {
    let mut rem: Vec<i64> = v.to_vec();
    let mut coeffs = vec![0i64; basis.len()];
    for (i, row) in basis.iter().enumerate() {
        let p = pivots[i];
        if rem[p] % row[p] != 0 {
            return None;
        }
        let c = rem[p] / row[p];
        coeffs[i] = c;
        for (x, s) in rem.iter_mut().zip(row.iter()) {
            *x -= c * s;
        }
    }
    if rem.iter().all(|&x| x == 0) {
        Some(coeffs)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_and_solve() {
        let rows = vec![vec![1, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 1, 2, 1]];
        let prio: Vec<usize> = (0..4).collect();
        let (basis, pivots) = echelon(&rows, &prio);
        assert_eq!(basis.len(), 2);
        let c = solve_in_span(&basis, &pivots, &[1, 1, 2, 1]).unwrap();
        let mut acc = vec![0i64; 4];
        for (ci, row) in c.iter().zip(basis.iter()) {
            for (a, r) in acc.iter_mut().zip(row.iter()) {
                *a += ci * r;
            }
        }
        assert_eq!(acc, vec![1, 1, 2, 1]);
        assert!(solve_in_span(&basis, &pivots, &[0, 1, 0, 0]).is_none());
    }

    #[test]
    fn priority_controls_pivots() {
        let rows = vec![vec![1, 1, 1]];
        let (b1, p1) = echelon(&rows, &[0, 1, 2]);
        assert_eq!(p1, vec![0]);
        let (b2, p2) = echelon(&rows, &[2, 1, 0]);
        assert_eq!(p2, vec![2]);
        assert_eq!(b1[0], vec![1, 1, 1]);
        assert_eq!(b2[0], vec![1, 1, 1]);
    }
}
