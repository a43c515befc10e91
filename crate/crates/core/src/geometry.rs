//! Full 3×3 permittivity tensors of the two uniaxial plates.
//!
//! Plate 1 carries its optical axis along `x`. Plate 2 is the same kind of
//! tensor rotated in the slab (`x`–`y`) plane by the misalignment angle θ.
//! The torque integrand only needs (ε_∥, ε_⊥) per plate; these tensors are
//! used for diagnostics and to check that reduction.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateTensor {
    pub entries: [[f64; 3]; 3],
    /// Rotation angle in radians (zero for plate 1).
    pub angle: f64,
}

impl PlateTensor {
    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.entries[i][i]).sum()
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.entries;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn is_symmetric(&self) -> bool {
        let m = &self.entries;
        m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1]
    }

    /// Eigenvalues in ascending order (cyclic Jacobi rotations; the input is
    /// assumed symmetric).
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut a = self.entries;
        for _ in 0..64 {
            let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
            let diag = a[0][0].powi(2) + a[1][1].powi(2) + a[2][2].powi(2);
            if off <= f64::EPSILON.powi(2) * 1e-4 * diag {
                break;
            }
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                if a[p][q] == 0.0 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        let mut eig = [a[0][0], a[1][1], a[2][2]];
        eig.sort_by(f64::total_cmp);
        eig
    }
}

impl fmt::Display for PlateTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(f, "[{:>14.8} {:>14.8} {:>14.8}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// diag(ε_∥, ε_⊥, ε_⊥).
pub fn plate1_tensor(eps_par: f64, eps_perp: f64) -> PlateTensor {
    PlateTensor {
        entries: [
            [eps_par, 0.0, 0.0],
            [0.0, eps_perp, 0.0],
            [0.0, 0.0, eps_perp],
        ],
        angle: 0.0,
    }
}

/// Plate-1 tensor rotated in-plane by `theta` radians.
pub fn plate2_tensor(eps_par: f64, eps_perp: f64, theta: f64) -> PlateTensor {
    let (s, c) = theta.sin_cos();
    let xy = (eps_perp - eps_par) * s * c;
    PlateTensor {
        entries: [
            [eps_par * c * c + eps_perp * s * s, xy, 0.0],
            [xy, eps_par * s * s + eps_perp * c * c, 0.0],
            [0.0, 0.0, eps_perp],
        ],
        angle: theta,
    }
}
