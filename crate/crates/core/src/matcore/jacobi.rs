// Cyclic Jacobi methods. The two-sided sweep diagonalises a Hermitian
// matrix; the one-sided sweep orthogonalises the columns of a factor G and
// so diagonalises G G* without ever forming it. Both skip a pivot only when
// it is negligible relative to the geometric mean of the two diagonal
// entries, which keeps small eigenvalues of graded matrices accurate.

use super::hermitian::{CMat, C64};

const MAX_SWEEPS: usize = 80;
const FLOOR: f64 = 1e-300;

struct Rotation {
    c: f64,
    s: f64,
    phase: C64, // conj of the pivot phase
    t: f64,
}

fn rotation(app: f64, aqq: f64, apq: C64) -> Option<Rotation> {
    let r = apq.norm();
    if r <= FLOOR || r <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
        return None;
    }
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    Some(Rotation { c, s: t * c, phase: (apq / r).conj(), t: t * r })
}

/// Eigenvalues (unsorted) and eigenvectors (as columns) of a Hermitian matrix.
pub(crate) fn eigh(mut a: CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    let mut w = CMat::identity(n, n);
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let Some(rot) = rotation(app, aqq, a[(p, q)]) else { continue };
                rotated = true;
                let Rotation { c, s, phase, t } = rot;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let np = akp * c - phase * akq * s;
                    let nq = akp * s + phase * akq * c;
                    a[(k, p)] = np;
                    a[(p, k)] = np.conj();
                    a[(k, q)] = nq;
                    a[(q, k)] = nq.conj();
                }
                a[(p, p)] = C64::new(app - t, 0.0);
                a[(q, q)] = C64::new(aqq + t, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let wkp = w[(k, p)];
                    let wkq = w[(k, q)];
                    w[(k, p)] = wkp * c - phase * wkq * s;
                    w[(k, q)] = wkp * s + phase * wkq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), w)
}

fn col_norm_sq(g: &CMat, j: usize) -> f64 {
    g.column(j).iter().map(|z| z.norm_sqr()).sum()
}

/// One-sided Jacobi on the columns of `g`. Returns column norms and the
/// orthogonalised columns, so that `g g* = sum_k out_k out_k*`.
pub(crate) fn orthogonalize_columns(mut g: CMat) -> (Vec<f64>, CMat) {
    let (m, k) = g.shape();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let a = col_norm_sq(&g, p);
                let b = col_norm_sq(&g, q);
                let cross: C64 = (0..m).map(|i| g[(i, p)].conj() * g[(i, q)]).sum();
                let Some(rot) = rotation(a, b, cross) else { continue };
                rotated = true;
                let Rotation { c, s, phase, .. } = rot;
                for i in 0..m {
                    let gp = g[(i, p)];
                    let gq = g[(i, q)];
                    g[(i, p)] = gp * c - phase * gq * s;
                    g[(i, q)] = gp * s + phase * gq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms = (0..k).map(|j| col_norm_sq(&g, j).sqrt()).collect();
    (norms, g)
}
