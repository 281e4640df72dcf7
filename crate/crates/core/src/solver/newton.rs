use super::banded::BandedMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Bound on the max-norm of the scaled residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Step factor applied while the residual grows.
    pub damping: f64,
    /// Relative finite-difference increment for the Jacobian.
    pub fd_rel: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100, damping: 0.5, fd_rel: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual: f64,
    /// Equation index carrying the largest residual.
    pub worst: usize,
}

fn max_norm(r: &[f64]) -> (f64, usize) {
    let mut best = (0.0, 0);
    for (i, v) in r.iter().enumerate() {
        if !v.is_finite() {
            return (f64::INFINITY, i);
        }
        if v.abs() > best.0 {
            best = (v.abs(), i);
        }
    }
    best
}

/// Newton iteration for a banded system `F(x) = 0`.
///
/// `f` writes the scaled residual and returns `false` when `x` is outside the
/// admissible set (for instance a collapsed cell). `typical` sets the size of
/// the difference increments per unknown. The Jacobian is built by finite
/// differences, perturbing every `kl + ku + 1`-th column at once.
pub fn newton_solve<F>(
    x: &mut [f64],
    kl: usize,
    ku: usize,
    typical: &[f64],
    opts: &NewtonOptions,
    mut f: F,
) -> Result<NewtonReport>
where
    F: FnMut(&[f64], &mut [f64]) -> bool,
{
    let n = x.len();
    let mut r = vec![0.0; n];
    let mut rp = vec![0.0; n];
    if !f(x, &mut r) {
        return Err(Error::StepRejected("initial guess is not admissible".into()));
    }
    let (mut norm, mut worst) = max_norm(&r);
    let colors = kl + ku + 1;
    let mut xp = x.to_vec();
    let mut lu = None;
    let mut extra = 0;
    let mut it = 0;
    let mut fresh;
    while it < opts.max_iter {
        if norm <= opts.tol {
            // a few cheap polishing sweeps drive the residual toward round-off
            if norm <= opts.tol * 1e-4 || extra >= 3 || lu.is_none() {
                break;
            }
            extra += 1;
        }
        if lu.is_none() {
            let mut jac = BandedMatrix::zeros(n, kl, ku);
            let mut incs = vec![0.0; n];
            for c in 0..colors.min(n) {
                xp.copy_from_slice(x);
                for j in (c..n).step_by(colors) {
                    let d = opts.fd_rel * x[j].abs().max(typical[j]).max(1e-300);
                    xp[j] = x[j] + d;
                    incs[j] = xp[j] - x[j];
                }
                if !f(&xp, &mut rp) {
                    for j in (c..n).step_by(colors) {
                        xp[j] = x[j] - incs[j];
                        incs[j] = xp[j] - x[j];
                    }
                    if !f(&xp, &mut rp) {
                        return Err(Error::StepRejected("jacobian probe not admissible".into()));
                    }
                }
                for j in (c..n).step_by(colors) {
                    let lo = j.saturating_sub(ku);
                    let hi = (j + kl).min(n - 1);
                    for i in lo..=hi {
                        jac.set(i, j, (rp[i] - r[i]) / incs[j]);
                    }
                }
            }
            lu = Some(jac.factor()?);
            fresh = true;
        } else {
            fresh = false;
        }
        it += 1;
        let mut dx: Vec<f64> = r.iter().map(|v| -v).collect();
        lu.as_ref().expect("factored").solve(&mut dx);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            for j in 0..n {
                xp[j] = x[j] + lambda * dx[j];
            }
            if f(&xp, &mut rp) {
                let (nn, w) = max_norm(&rp);
                if nn < norm {
                    accepted = Some((nn, w));
                    break;
                }
            }
            lambda *= opts.damping;
            if lambda < 1e-6 {
                break;
            }
        }
        match accepted {
            Some((nn, w)) => {
                // stale factors are kept only while they still contract fast
                if nn > 0.2 * norm || lambda < 1.0 {
                    lu = None;
                }
                x.copy_from_slice(&xp);
                std::mem::swap(&mut r, &mut rp);
                norm = nn;
                worst = w;
            }
            None if norm <= opts.tol => break,
            None => {
                if !fresh {
                    lu = None;
                    continue;
                }
                return Err(Error::NoConvergence { iterations: it, residual: norm });
            }
        }
    }
    if norm <= opts.tol {
        return Ok(NewtonReport { iterations: it, residual: norm, worst });
    }
    Err(Error::NoConvergence { iterations: it, residual: norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_banded_nonlinear_system() {
        // discrete Bratu problem with lambda = 1
        let n = 40;
        let mut x = vec![0.0; n];
        let typ = vec![1.0; n];
        let rep = newton_solve(&mut x, 1, 1, &typ, &NewtonOptions::default(), |x, r| {
            for i in 0..n {
                let l = if i > 0 { x[i - 1] } else { 0.0 };
                let rr = if i + 1 < n { x[i + 1] } else { 0.0 };
                r[i] = l - 2.0 * x[i] + rr + x[i].exp() / ((n + 1) * (n + 1)) as f64;
            }
            true
        })
        .unwrap();
        assert!(rep.residual <= 1e-10);
        assert!(rep.iterations < 15);
    }

    #[test]
    fn inadmissible_start_rejected() {
        let mut x = vec![1.0];
        let res = newton_solve(&mut x, 0, 0, &[1.0], &NewtonOptions::default(), |_, _| false);
        assert!(matches!(res, Err(Error::StepRejected(_))));
    }

    #[test]
    fn reports_non_convergence() {
        let mut x = vec![1.0];
        let opts = NewtonOptions { max_iter: 3, ..Default::default() };
        // no real root
        let res = newton_solve(&mut x, 0, 0, &[1.0], &opts, |x, r| {
            r[0] = x[0] * x[0] + 1.0;
            true
        });
        assert!(matches!(res, Err(Error::NoConvergence { .. })));
    }
}
