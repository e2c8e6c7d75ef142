/// Result of [`smith_normal_form`]: `u · a · v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Vec<Vec<i64>>,
    pub d: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `d`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i])
            .take_while(|&x| x != 0)
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row_dst -= q · row_src`
fn row_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row) {
        *x -= q * s;
    }
}

/// `col_dst -= q · col_src`
fn col_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64) {
    for row in m.iter_mut() {
        row[dst] -= q * row[src];
    }
}

/// Smith normal form of an integer matrix: unimodular `u`, `v` and diagonal
/// `d = u·a·v` whose diagonal entries are nonnegative and each divides the next.
pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithDecomposition {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut pivot = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| d[i][j].abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithDecomposition { u, d, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    row_axpy(&mut d, i, t, q);
                    row_axpy(&mut u, i, t, q);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    col_axpy(&mut d, j, t, q);
                    col_axpy(&mut v, j, t, q);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
            match offender {
                Some(i) => {
                    row_axpy(&mut d, t, i, -1);
                    row_axpy(&mut u, t, i, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    SmithDecomposition { u, d, v }
}
