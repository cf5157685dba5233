//! Monic orthogonal polynomials of a spectral measure.
//!
//! The polynomials satisfy `s q⁽ⁿ⁾ = q⁽ⁿ⁺¹⁾ + bₙ q⁽ⁿ⁾ + aₙ q⁽ⁿ⁻¹⁾` with
//! `q⁽⁰⁾ = 1`, `q⁽¹⁾ = s − b₀`, and squared norms `γₙ = a₁⋯aₙ`. When the
//! measure has `m` support points, `q⁽ⁿ⁾ = 0` and `aₙ = bₙ = 0` for `n ≥ m`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;

const BREAKDOWN_TOL: f64 = 1e-10;
const EXHAUSTION_TOL: f64 = 1e-13;
const MAX_DIGITS_LOST: f64 = 6.0;
/// `σ_{k,k}` within this many ulps of its magnitude bound is rounding noise.
const NOISE_ULPS: f64 = 256.0;

#[derive(Debug, Clone, PartialEq)]
pub struct TableDiagnostics {
    /// Decimal digits lost to cancellation (Chebyshev algorithm only).
    pub digits_lost: f64,
    pub ill_conditioned: bool,
    /// Whether the moment problem was checked for determinacy. Never done.
    pub determinacy_checked: bool,
}

/// Recurrence coefficients `b₀…b_{K−1}`, `a₁…a_K` and norms `γ₀…γ_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    b: Vec<f64>,
    a: Vec<f64>,
    gamma: Vec<f64>,
    support_size: Option<usize>,
    diagnostics: TableDiagnostics,
}

impl RecurrenceTable {
    /// The truncation order `K`.
    pub fn order(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a₁ … a_K`; `a()[n - 1]` is `aₙ`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Number of support points, `None` when the measure is not known to be
    /// finitely supported (moment sequences without exhaustion).
    pub fn support_size(&self) -> Option<usize> {
        self.support_size
    }

    pub fn diagnostics(&self) -> &TableDiagnostics {
        &self.diagnostics
    }

    /// True when `q⁽ᵏ⁾` vanishes identically on the support.
    pub fn is_degenerate(&self, k: usize) -> bool {
        self.support_size.is_some_and(|m| k >= m)
    }

    /// `bₙ`, zero past the support; `None` if beyond the table.
    pub fn b_at(&self, n: usize) -> Option<f64> {
        if self.is_degenerate(n) {
            Some(0.0)
        } else {
            self.b.get(n).copied()
        }
    }

    /// `aₙ` for `n ≥ 1`, zero at and past the support; `None` if beyond the table.
    pub fn a_at(&self, n: usize) -> Option<f64> {
        assert!(n >= 1, "a_n is defined for n >= 1");
        if self.is_degenerate(n) {
            Some(0.0)
        } else {
            self.a.get(n - 1).copied()
        }
    }

    pub fn gamma_at(&self, n: usize) -> Option<f64> {
        if self.is_degenerate(n) {
            Some(0.0)
        } else {
            self.gamma.get(n).copied()
        }
    }

    /// Largest `aₙ` in the table: the finite-lattice form of local boundedness.
    pub fn max_a(&self) -> f64 {
        self.a.iter().cloned().fold(0.0, f64::max)
    }

    /// `q⁽ᵏ⁾(s)` by forward recurrence.
    pub fn evaluate_q(&self, k: usize, s: f64) -> Result<f64> {
        if self.is_degenerate(k) {
            return Ok(0.0);
        }
        if k > self.order() {
            return Err(Error::TableTooShort { order: self.order(), needed: k });
        }
        let (mut prev, mut cur) = (0.0, 1.0);
        for n in 0..k {
            let a_n = if n == 0 { 0.0 } else { self.a[n - 1] };
            let next = (s - self.b[n]) * cur - a_n * prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// Monomial coefficients `b₀⁽ᵏ⁾ … b_k⁽ᵏ⁾` of `q⁽ᵏ⁾`, lowest degree first.
    pub fn monomial_coefficients(&self, k: usize) -> Result<Vec<f64>> {
        if let Some(m) = self.support_size.filter(|&m| k >= m) {
            return Err(Error::DegenerateDegree { degree: k, support: m });
        }
        if k > self.order() {
            return Err(Error::TableTooShort { order: self.order(), needed: k });
        }
        let mut prev: Vec<f64> = Vec::new();
        let mut cur = vec![1.0];
        for n in 0..k {
            let a_n = if n == 0 { 0.0 } else { self.a[n - 1] };
            let mut next = vec![0.0; n + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= self.b[n] * c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= a_n * c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    /// Multiplication by `s` in the normalized basis `q⁽ⁿ⁾/√γₙ`, `n ≤ dim_cut`:
    /// diagonal `bₙ`, off-diagonal `√aₙ₊₁`. Rows past the support are zero.
    pub fn jacobi_matrix(&self, dim_cut: usize) -> Result<DMatrix<f64>> {
        let size = dim_cut + 1;
        let mut jac = DMatrix::zeros(size, size);
        for n in 0..size {
            jac[(n, n)] = self.b_at(n).ok_or(Error::TableTooShort {
                order: self.order(),
                needed: n,
            })?;
            if n + 1 < size {
                let a = self.a_at(n + 1).ok_or(Error::TableTooShort {
                    order: self.order(),
                    needed: n + 1,
                })?;
                jac[(n, n + 1)] = a.sqrt();
                jac[(n + 1, n)] = a.sqrt();
            }
        }
        Ok(jac)
    }
}

/// Recurrence coefficients of `measure` up to order `k_max`.
///
/// Discrete measures use the Stieltjes procedure with inner products summed
/// exactly over the atoms. Moment sequences use the Chebyshev algorithm and
/// need moments up to order `2·k_max`.
pub fn recurrence_coefficients(measure: &SpectralMeasure, k_max: usize) -> Result<RecurrenceTable> {
    match measure {
        SpectralMeasure::Discrete { .. } => {
            let support = measure.support().expect("discrete measure has atoms");
            Ok(stieltjes(&support, k_max))
        }
        SpectralMeasure::MomentSequence { moments } => chebyshev(moments, k_max),
    }
}

fn exhausted(a: f64, gamma_prev: f64) -> bool {
    a < EXHAUSTION_TOL * gamma_prev.max(1.0)
}

fn stieltjes(points: &[(f64, f64)], k_max: usize) -> RecurrenceTable {
    let m = points.len();
    let mut b = vec![0.0; k_max];
    let mut a = vec![0.0; k_max];
    let mut gamma = vec![0.0; k_max + 1];
    gamma[0] = points.iter().map(|p| p.1).sum();

    let mut support_size = m;
    let mut q_prev = vec![0.0; m];
    let mut q = vec![1.0; m];
    for n in 0..k_max {
        if n + 1 > support_size {
            break;
        }
        let weighted: f64 = points.iter().zip(&q).map(|(&(s, w), qi)| w * s * qi * qi).sum();
        b[n] = weighted / gamma[n];
        let a_n = if n == 0 { 0.0 } else { a[n - 1] };
        let q_next: Vec<f64> = points
            .iter()
            .zip(q.iter().zip(&q_prev))
            .map(|(&(s, _), (qi, pi))| (s - b[n]) * qi - a_n * pi)
            .collect();
        let g: f64 = points.iter().zip(&q_next).map(|(&(_, w), qi)| w * qi * qi).sum();
        let ratio = g / gamma[n];
        if n + 1 >= m || exhausted(ratio, gamma[n]) {
            support_size = n + 1;
            break;
        }
        a[n] = ratio;
        gamma[n + 1] = g;
        q_prev = std::mem::replace(&mut q, q_next);
    }
    RecurrenceTable {
        b,
        a,
        gamma,
        support_size: Some(support_size),
        diagnostics: TableDiagnostics {
            digits_lost: 0.0,
            ill_conditioned: false,
            determinacy_checked: false,
        },
    }
}

/// Chebyshev algorithm on ordinary moments, with a running bound on the
/// magnitudes that enter each cancellation.
fn chebyshev(moments: &[f64], k_max: usize) -> Result<RecurrenceTable> {
    let needed = 2 * k_max;
    if moments.len() <= needed {
        return Err(Error::OrderExceeded { requested: needed, available: moments.len() - 1 });
    }
    let mut b = vec![0.0; k_max];
    let mut a = vec![0.0; k_max];
    let mut gamma = vec![0.0; k_max + 1];
    let mut digits_lost = 0.0f64;
    let mut support_size = None;

    // rows k-2, k-1 of σ_{k,l} and of the magnitude bound.
    let len = needed + 1;
    let mut sig_pp = vec![0.0; len];
    let mut sig_p: Vec<f64> = moments[..len].to_vec();
    let mut mag_pp = vec![0.0; len];
    let mut mag_p: Vec<f64> = sig_p.iter().map(|m| m.abs()).collect();

    gamma[0] = sig_p[0];
    if k_max > 0 {
        b[0] = sig_p[1] / sig_p[0];
    }
    for k in 1..=k_max {
        let b_prev = b[k - 1];
        let a_prev = if k >= 2 { a[k - 2] } else { 0.0 };
        let mut sig = vec![0.0; len];
        let mut mag = vec![0.0; len];
        for l in k..=needed - k {
            sig[l] = sig_p[l + 1] - b_prev * sig_p[l] - a_prev * sig_pp[l];
            mag[l] = mag_p[l + 1] + b_prev.abs() * mag_p[l] + a_prev * mag_pp[l];
        }
        let g = sig[k];
        let ratio = g / sig_p[k - 1];
        if g.abs() <= NOISE_ULPS * f64::EPSILON * mag[k] {
            support_size = Some(k);
            break;
        }
        if ratio < -BREAKDOWN_TOL {
            return Err(Error::NumericalBreakdown { degree: k, value: ratio });
        }
        if exhausted(ratio, gamma[k - 1]) {
            support_size = Some(k);
            break;
        }
        digits_lost = digits_lost.max((mag[k] / g.abs()).log10());
        a[k - 1] = ratio;
        gamma[k] = g;
        if k < k_max {
            b[k] = sig[k + 1] / sig[k] - sig_p[k] / sig_p[k - 1];
        }
        sig_pp = std::mem::replace(&mut sig_p, sig);
        mag_pp = std::mem::replace(&mut mag_p, mag);
    }
    Ok(RecurrenceTable {
        b,
        a,
        gamma,
        support_size,
        diagnostics: TableDiagnostics {
            digits_lost,
            ill_conditioned: digits_lost > MAX_DIGITS_LOST,
            determinacy_checked: false,
        },
    })
}

/// Largest `aₙ` over a set of cell tables.
pub fn condition_a_bound(tables: &[RecurrenceTable]) -> f64 {
    tables.iter().map(RecurrenceTable::max_a).fold(0.0, f64::max)
}
