//! Small integer-matrix utilities: Hermite and Smith normal forms.
//!
//! Lattices and subgroups throughout this crate are represented by the
//! row span of an integer matrix. The Hermite normal form gives each
//! lattice a unique canonical basis; the Smith normal form reads off the
//! isomorphism type of a quotient. Everything here is sized for desk-scale
//! inputs (rank <= 8, entries bounded by small prime powers), so plain
//! `i64` arithmetic suffices.

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero echelon rows: pivots strictly left to right, each
/// pivot positive, and every entry above a pivot reduced into `[0, pivot)`.
/// Two row sets span the same lattice iff their HNFs are identical.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "row length mismatch");
            r.clone()
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        // find a row at or below `row` with nonzero entry in this column
        let mut any = false;
        for r in row..m.len() {
            if m[r][col] != 0 {
                any = true;
            }
        }
        if !any {
            continue;
        }
        // euclid out all entries below the working row
        loop {
            let mut best: Option<usize> = None;
            for r in row..m.len() {
                if m[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if m[r][col].abs() < m[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let b = best.expect("nonzero entry exists");
            m.swap(row, b);
            let mut done = true;
            let pivot = m[row][col];
            for r in row + 1..m.len() {
                if m[r][col] != 0 {
                    let q = div_floor(m[r][col], pivot);
                    for c in 0..ncols {
                        m[r][c] -= q * m[row][c];
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[row][col] < 0 {
            for c in 0..ncols {
                m[row][c] = -m[row][c];
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    m.truncate(row);
    // reduce entries above each pivot
    for (i, &r) in pivot_rows.iter().enumerate() {
        let col = m[r].iter().position(|&x| x != 0).expect("pivot row");
        let pivot = m[r][col];
        for above in 0..i {
            let ra = pivot_rows[above];
            let q = div_floor(m[ra][col], pivot);
            if q != 0 {
                for c in 0..ncols {
                    m[ra][c] -= q * m[r][c];
                }
            }
        }
    }
    m
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Whether `v` lies in the row span of an HNF matrix `h`.
pub fn in_rowspan(h: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for row in h {
        let col = match row.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => continue,
        };
        if v[col] != 0 {
            if v[col] % row[col] != 0 {
                return false;
            }
            let q = v[col] / row[col];
            for c in 0..v.len() {
                v[c] -= q * row[c];
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Smith normal form diagonal of a full matrix, padded with the elementary
/// divisors in divisibility order `d_1 | d_2 | ...`, all non-negative.
pub fn snf_diag(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = rows.iter().cloned().collect();
    let nrows = m.len();
    let n = nrows.min(ncols);
    let mut diag = Vec::with_capacity(n);
    let mut top = 0usize;
    let mut left = 0usize;
    while top < nrows && left < ncols {
        // locate a nonzero entry of minimal absolute value
        let mut best: Option<(usize, usize)> = None;
        for r in top..nrows {
            for c in left..ncols {
                if m[r][c] != 0 {
                    best = match best {
                        None => Some((r, c)),
                        Some((br, bc)) if m[r][c].abs() < m[br][bc].abs() => Some((r, c)),
                        keep => keep,
                    };
                }
            }
        }
        let (br, bc) = match best {
            None => break,
            Some(x) => x,
        };
        m.swap(top, br);
        for row in m.iter_mut() {
            row.swap(left, bc);
        }
        // clear the row and column; restart if a remainder appears
        loop {
            let pivot = m[top][left];
            let mut clean = true;
            for r in top + 1..nrows {
                if m[r][left] != 0 {
                    let q = div_floor(m[r][left], pivot);
                    for c in left..ncols {
                        m[r][c] -= q * m[top][c];
                    }
                    if m[r][left] != 0 {
                        clean = false;
                    }
                }
            }
            for c in left + 1..ncols {
                if m[top][c] != 0 {
                    let q = div_floor(m[top][c], pivot);
                    for r in top..nrows {
                        m[r][c] -= q * m[r][left];
                    }
                    if m[top][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // a smaller entry appeared somewhere; pull it to the pivot
            let mut best = (top, left);
            for r in top..nrows {
                for c in left..ncols {
                    if m[r][c] != 0 && m[r][c].abs() < m[best.0][best.1].abs() {
                        best = (r, c);
                    }
                }
            }
            m.swap(top, best.0);
            for row in m.iter_mut() {
                row.swap(left, best.1);
            }
        }
        diag.push(m[top][left].abs());
        top += 1;
        left += 1;
    }
    while diag.len() < n {
        diag.push(0);
    }
    // enforce d_1 | d_2 | ... by repeated gcd/lcm fixups
    let len = diag.len();
    loop {
        let mut fixed = true;
        for i in 0..len.saturating_sub(1) {
            if diag[i] != 0 && diag[i + 1] % diag[i].max(1) != 0 {
                let g = gcd(diag[i], diag[i + 1]);
                let l = diag[i] / g * diag[i + 1];
                diag[i] = g;
                diag[i + 1] = l;
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }
    diag
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Matrix product of row-major square-ish matrices (`a` is k x n, `b` n x m).
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(&x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}
