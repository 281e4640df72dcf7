use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored row by
/// row with room for the `kl` extra super-diagonals created by row pivoting.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    /// Whether `(i, j)` lies inside the original band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl >= i && j <= i + self.ku + self.kl {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Gaussian elimination with partial pivoting inside the band. Consumes
    /// the matrix; `b` is overwritten with the solution.
    pub fn solve_in_place(self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(b.len(), n);
        if self.kl == 1 && self.ku == 1 && n > 0 {
            // tridiagonal without fill: try the sweep first
            let a: Vec<f64> = (0..n).map(|i| if i > 0 { self.get(i, i - 1) } else { 0.0 }).collect();
            let d: Vec<f64> = (0..n).map(|i| self.get(i, i)).collect();
            let c: Vec<f64> = (0..n).map(|i| if i + 1 < n { self.get(i, i + 1) } else { 0.0 }).collect();
            let dominant = (0..n).all(|i| d[i].abs() >= a[i].abs() + c[i].abs());
            if dominant {
                let x = thomas(&a, &d, &c, b)?;
                b.copy_from_slice(&x);
                return Ok(());
            }
        }
        self.factor()?.solve(b);
        Ok(())
    }

    /// LU factorization with partial pivoting inside the band.
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let reach = self.ku + self.kl;
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0) || !best.is_finite() {
                return Err(Error::Singular(k));
            }
            piv[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = self.idx(k, j);
                    let c = self.idx(p, j);
                    self.data.swap(a, c);
                }
            }
            let pivot = self.data[self.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = self.idx(i, k);
                let f = self.data[ik] / pivot;
                // keep the multiplier in the eliminated slot
                self.data[ik] = f;
                if f == 0.0 {
                    continue;
                }
                for j in k + 1..=last_col {
                    let kj = self.data[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.data[ij] -= f * kj;
                }
            }
        }
        Ok(BandedLu { m: self, piv })
    }
}

/// Factors produced by [`BandedMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandedLu {
    m: BandedMatrix,
    piv: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, b: &mut [f64]) {
        let m = &self.m;
        let n = m.n;
        let reach = m.ku + m.kl;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            for i in k + 1..=(k + m.kl).min(n.saturating_sub(1)) {
                b[i] -= m.data[m.idx(i, k)] * bk;
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last_col {
                s -= m.data[m.idx(k, j)] * b[j];
            }
            b[k] = s / m.data[m.idx(k, k)];
        }
    }
}

/// Tridiagonal sweep: `a_i x_{i-1} + d_i x_i + c_i x_{i+1} = r_i`
/// (`a_0` and `c_{n-1}` are ignored).
pub fn thomas(a: &[f64], d: &[f64], c: &[f64], r: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut cp = vec![0.0; n];
    let mut rp = vec![0.0; n];
    let mut denom = d[0];
    if denom == 0.0 {
        return Err(Error::Singular(0));
    }
    cp[0] = if n > 1 { c[0] / denom } else { 0.0 };
    rp[0] = r[0] / denom;
    for i in 1..n {
        denom = d[i] - a[i] * cp[i - 1];
        if denom == 0.0 {
            return Err(Error::Singular(i));
        }
        cp[i] = if i + 1 < n { c[i] / denom } else { 0.0 };
        rp[i] = (r[i] - a[i] * rp[i - 1]) / denom;
    }
    let mut x = rp;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    Ok(x)
}
