//! Check suites comparing Monte Carlo estimates against Fock-side and
//! closed-form targets. Each check yields auditable [`CheckRow`]s.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chaos::{ChaosCoefficient, ChaosIndex, ChaosModel};
use crate::error::Result;
use crate::fock::{vacuum_moment, ModeBasis, OperatorSpec};
use crate::mc::{Estimate, MonteCarlo};
use crate::measure::MeasureField;
use crate::sampler::PathSampler;

/// Statistical rows pass when `|estimate − target| ≤ SIGMA · stderr`.
pub const SIGMA: f64 = 3.0;

pub const FOCK_NORM_TOL: f64 = 1e-11;

/// `θ ∈ {−3, −2.5, …, 3}`.
pub fn theta_grid() -> Vec<f64> {
    (-6..=6).map(|i| i as f64 * 0.5).collect()
}

/// Largest moment order in [`moment_rows`].
pub const MAX_MOMENT: usize = 4;

/// Largest `k` in [`orthogonality_rows`].
pub const MAX_POWER: usize = 3;

/// Multi-indices exercised by [`isometry_rows`], clipped to available degrees.
pub fn isometry_indices() -> Vec<ChaosIndex> {
    [vec![1], vec![2], vec![0, 1], vec![1, 1], vec![2, 1]]
        .into_iter()
        .map(ChaosIndex::new)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub quantity: String,
    pub target: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn statistical(quantity: impl Into<String>, target: f64, est: Estimate) -> Self {
        Self {
            quantity: quantity.into(),
            target,
            estimate: est.mean,
            stderr: est.stderr,
            pass: est.within(target, SIGMA),
        }
    }

    /// Deterministic comparison: `stderr` is reported as zero.
    pub fn exact(quantity: impl Into<String>, target: f64, estimate: f64, tol: f64) -> Self {
        Self {
            quantity: quantity.into(),
            target,
            estimate,
            stderr: 0.0,
            pass: (estimate - target).abs() <= tol,
        }
    }
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

/// `|empirical_cf(θ) − char_functional(θ)|` on [`theta_grid`], target 0.
pub fn cf_rows(field: &MeasureField, phi: &[f64], mc: &MonteCarlo) -> Result<Vec<CheckRow>> {
    field.lattice().check_function(phi)?;
    let sampler = PathSampler::new(field)?;
    let thetas = theta_grid();
    let est = sampler.empirical_cf(phi, &thetas, mc)?;
    Ok(thetas
        .iter()
        .zip(est)
        .map(|(&th, (z, se))| {
            let diff = (z - sampler.char_functional(phi, th)).norm();
            CheckRow::statistical(format!("cf_abs_error[theta={th}]"), 0.0, Estimate { mean: diff, stderr: se })
        })
        .collect())
}

/// Power functionals `Y⁽ᵏ⁾(χ_{Δ₀})` multiplied together in the mixed-moment
/// rows; `Y⁽ᵏ⁾` is multiplication by `A⁽ᵏ⁺¹⁾` on the Fock side.
const MIXED_PRODUCTS: &[&[usize]] = &[&[1, 0], &[1, 1], &[2, 0], &[1, 0, 0], &[1, 1, 0], &[2, 1, 0], &[1, 1, 1, 0]];

/// Degree cut large enough that every vacuum moment below is exact.
const MOMENT_DEGREE_CUT: usize = 8;

/// Moments `𝔼⟨ω,φ⟩ⁿ` for `n ≤ 4` against `⟨Ω, A(φ)ⁿ Ω⟩`, plus mixed moments
/// of the power functionals on cell 0 against products of `A⁽ᵏ⁾`.
pub fn moment_rows(field: &MeasureField, phis: &[Vec<f64>], mc: &MonteCarlo) -> Result<Vec<CheckRow>> {
    for phi in phis {
        field.lattice().check_function(phi)?;
    }
    let basis = ModeBasis::new(field, MOMENT_DEGREE_CUT)?;
    let model = ChaosModel::new(field.clone(), 0)?;
    let sampler = model.sampler()?;
    let mut chi0 = vec![0.0; field.len()];
    chi0[0] = 1.0;

    let mut targets = Vec::new();
    for (i, phi) in phis.iter().enumerate() {
        for n in 1..=MAX_MOMENT {
            let specs = vec![OperatorSpec::Field(phi.clone()); n];
            targets.push((format!("moment[phi{i},n={n}]"), vacuum_moment(&basis, n, &specs)?));
        }
    }
    for prod in MIXED_PRODUCTS {
        let specs: Vec<OperatorSpec> = prod.iter().map(|&k| OperatorSpec::Power(chi0.clone(), k + 1)).collect();
        let name: Vec<String> = prod.iter().map(|k| format!("Y{k}")).collect();
        targets.push((format!("mixed[{}](cell0)", name.join("*")), vacuum_moment(&basis, prod.len(), &specs)?));
    }

    let max_power = MIXED_PRODUCTS.iter().flat_map(|p| p.iter()).copied().max().unwrap_or(0);
    let est = mc.estimate(sampler, targets.len(), |path, out| {
        let mut o = 0;
        for phi in phis {
            let x = sampler.pairing(path, phi);
            let mut p = 1.0;
            for _ in 1..=MAX_MOMENT {
                p *= x;
                out[o] = p;
                o += 1;
            }
        }
        let ys: Vec<f64> = (0..=max_power)
            .map(|k| model.evaluate_y(path, 0, k).expect("discrete field"))
            .collect();
        for prod in MIXED_PRODUCTS {
            out[o] = prod.iter().map(|&k| ys[k]).product();
            o += 1;
        }
    })?;
    Ok(targets
        .into_iter()
        .zip(est)
        .map(|((q, t), e)| CheckRow::statistical(q, t, e))
        .collect())
}

/// `𝔼[Y⁽ᵏ⁾Y⁽ˡ⁾] = |Δ|∫s^{k+l}σ`, `𝔼[Z⁽ᵏ⁾Z⁽ˡ⁾] = δₖₗ|Δ|γₖ` on cell 0 for
/// `k, l ≤ 3`, means of `Y⁽ᵏ⁾`, and cross-cell `𝔼[Z⁽ᵏ⁾(Δ₀)Z⁽ˡ⁾(Δ₁)] = 0`.
pub fn orthogonality_rows(field: &MeasureField, mc: &MonteCarlo) -> Result<Vec<CheckRow>> {
    let model = ChaosModel::new(field.clone(), MAX_POWER)?;
    let sampler = model.sampler()?;
    let v0 = field.lattice().volume(0);
    let sigma0 = field.measure(0);
    let table0 = model.basis().table(0);
    let z0 = model.degrees_in(0);
    let z1 = if field.len() > 1 { model.degrees_in(1) } else { 0 };

    let mut targets = Vec::new();
    for k in 0..=MAX_POWER {
        targets.push((format!("E[Y{k}](cell0)"), 0.0));
    }
    for k in 0..=MAX_POWER {
        for l in k..=MAX_POWER {
            targets.push((format!("E[Y{k}*Y{l}](cell0)"), v0 * sigma0.moment(k + l)?));
        }
    }
    for k in 0..z0 {
        for l in k..z0 {
            let t = if k == l { v0 * table0.gamma_at(k).unwrap_or(0.0) } else { 0.0 };
            targets.push((format!("E[Z{k}*Z{l}](cell0)"), t));
        }
    }
    for k in 0..z0 {
        for l in 0..z1 {
            targets.push((format!("E[Z{k}(cell0)*Z{l}(cell1)]"), 0.0));
        }
    }

    let est = mc.estimate(sampler, targets.len(), |path, out| {
        let y: Vec<f64> = (0..=MAX_POWER).map(|k| model.evaluate_y(path, 0, k).expect("discrete")).collect();
        let za: Vec<f64> = (0..z0).map(|k| model.evaluate_z(path, 0, k).expect("usable degree")).collect();
        let zb: Vec<f64> = (0..z1).map(|k| model.evaluate_z(path, 1, k).expect("usable degree")).collect();
        let mut o = 0;
        for &yk in &y {
            out[o] = yk;
            o += 1;
        }
        for k in 0..y.len() {
            for l in k..y.len() {
                out[o] = y[k] * y[l];
                o += 1;
            }
        }
        for k in 0..za.len() {
            for l in k..za.len() {
                out[o] = za[k] * za[l];
                o += 1;
            }
        }
        for &a in &za {
            for &b in &zb {
                out[o] = a * b;
                o += 1;
            }
        }
    })?;
    Ok(targets
        .into_iter()
        .zip(est)
        .map(|((q, t), e)| CheckRow::statistical(q, t, e))
        .collect())
}

/// Random off-diagonal coefficients for each index of [`isometry_indices`]
/// that fits the field and the cuts; indices with no admissible tuple are
/// dropped.
pub fn random_coefficients(model: &ChaosModel, particle_cut: usize, seed: u64) -> Result<Vec<ChaosCoefficient>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for idx in isometry_indices() {
        if idx.order() > particle_cut || idx.max_degree().is_some_and(|d| d > model.basis().degree_cut()) {
            continue;
        }
        let tuples = model.admissible_tuples(&idx);
        if !tuples.is_empty() {
            out.push(ChaosCoefficient::random(idx, &tuples, &mut rng)?);
        }
    }
    Ok(out)
}

/// Fock-side norms and cross inner products of `kmap_fock(f)` (exact), then
/// Monte Carlo variances, covariances and means of the multiple integrals.
pub fn isometry_rows(
    field: &MeasureField,
    degree_cut: usize,
    particle_cut: usize,
    mc: &MonteCarlo,
) -> Result<Vec<CheckRow>> {
    let model = ChaosModel::new(field.clone(), degree_cut)?;
    let fs = random_coefficients(&model, particle_cut, mc.seed)?;
    let mut rows = Vec::new();
    let mut images = Vec::with_capacity(fs.len());
    let mut norms = Vec::with_capacity(fs.len());
    for f in &fs {
        let g = model.g_norm_sq(f)?;
        let v = model.kmap_fock(f, particle_cut)?;
        rows.push(CheckRow::exact(
            format!("fock_norm_sq{}", f.index()),
            g,
            v.norm_sq(),
            FOCK_NORM_TOL * g.max(1.0),
        ));
        images.push(v);
        norms.push(g);
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            rows.push(CheckRow::exact(
                format!("fock_inner{}{}", fs[i].index(), fs[j].index()),
                0.0,
                images[i].inner(&images[j]),
                FOCK_NORM_TOL,
            ));
        }
    }
    let gram = model.mc_gram(&fs, mc)?;
    for (i, f) in fs.iter().enumerate() {
        rows.push(CheckRow::statistical(format!("mean{}", f.index()), 0.0, gram.means[i]));
        rows.push(CheckRow::statistical(format!("var{}", f.index()), norms[i], gram.covariances[i][i]));
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            rows.push(CheckRow::statistical(
                format!("cov{}{}", fs[i].index(), fs[j].index()),
                0.0,
                gram.covariances[i][j],
            ));
        }
    }
    Ok(rows)
}
