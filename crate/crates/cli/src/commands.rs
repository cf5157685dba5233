use std::io::Write;
use std::path::Path;

use levy_chaos::orthopoly::recurrence_coefficients;
use levy_chaos::verify::{self, CheckRow};
use levy_chaos::{MonteCarlo, PathSampler};

use crate::config::{Check, ExperimentConfig};
use crate::Failure;

fn monte_carlo(cfg: &ExperimentConfig) -> MonteCarlo {
    let mc = MonteCarlo::new(cfg.samples, cfg.seed);
    match cfg.threads {
        Some(t) => mc.with_threads(t),
        None => mc,
    }
}

pub fn recurrence(cfg: &ExperimentConfig, cell: usize, order: Option<usize>) -> Result<(), Failure> {
    let field = cfg.field()?;
    if cell >= field.len() {
        return Err(Failure::Usage(format!("--cell: {cell} out of range for {} cells", field.len())));
    }
    let order = order.unwrap_or(cfg.degree_cut);
    let table = recurrence_coefficients(field.measure(cell), order)?;
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(["n", "b_n", "a_n", "gamma_n"])?;
    // b_n runs over 0..K, a_n over 1..=K; missing entries stay blank.
    for n in 0..=order {
        let b = table.b().get(n).map(f64::to_string).unwrap_or_default();
        let a = if n == 0 { String::new() } else { table.a()[n - 1].to_string() };
        w.write_record([n.to_string(), b, a, table.gamma()[n].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn simulate(cfg: &ExperimentConfig, out: &Path) -> Result<(), Failure> {
    let field = cfg.field()?;
    let sampler = PathSampler::new(&field)?;
    let atoms = sampler.max_atoms();
    let mut w = csv::Writer::from_path(out)?;
    let mut header = vec!["sample_index".to_string(), "cell".into(), "gaussian".into()];
    header.extend((0..atoms).map(|r| format!("jump_{r}")));
    w.write_record(&header)?;
    let mut path = sampler.empty_sample();
    for index in 0..cfg.samples {
        sampler.sample_into(cfg.seed, index, &mut path);
        for cell in 0..sampler.cells() {
            let mut rec = vec![index.to_string(), cell.to_string(), path.gaussian[cell].to_string()];
            let counts = &path.jump_counts[cell];
            rec.extend((0..atoms).map(|r| counts.get(r).map(u64::to_string).unwrap_or_default()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_check(cfg: &ExperimentConfig, check: Check) -> Result<Vec<CheckRow>, Failure> {
    let field = cfg.field()?;
    let mc = monte_carlo(cfg);
    let phi = cfg.phi(field.len())?;
    let rows = match check {
        Check::Cf => verify::cf_rows(&field, &phi, &mc)?,
        Check::Moments => {
            let mut phis = vec![phi];
            phis.extend(cfg.psi(field.len())?);
            verify::moment_rows(&field, &phis, &mc)?
        }
        Check::Orthogonality => verify::orthogonality_rows(&field, &mc)?,
        Check::Isometry => verify::isometry_rows(&field, cfg.degree_cut, cfg.particle_cut, &mc)?,
    };
    Ok(rows)
}

fn write_rows<W: Write>(w: W, rows: &[CheckRow]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["quantity", "target", "estimate", "stderr", "pass"])?;
    for r in rows {
        w.write_record([
            r.quantity.clone(),
            r.target.to_string(),
            r.estimate.to_string(),
            r.stderr.to_string(),
            if r.pass { "pass" } else { "fail" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn verify(cfg: &ExperimentConfig, check: Check, out_dir: Option<&Path>) -> Result<(), Failure> {
    let rows = run_check(cfg, check)?;
    write_rows(std::io::stdout().lock(), &rows)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        write_rows(std::fs::File::create(dir.join(format!("{check}.csv")))?, &rows)?;
    }
    if verify::all_pass(&rows) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

pub fn report(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(), Failure> {
    if cfg.checks.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(out_dir)?;
    let mut summary = Vec::new();
    for &check in &cfg.checks {
        let rows = run_check(cfg, check)?;
        write_rows(std::fs::File::create(out_dir.join(format!("{check}.csv")))?, &rows)?;
        let failed = rows.iter().filter(|r| !r.pass).count();
        summary.push((check, rows.len(), failed));
    }
    let mut w = csv::Writer::from_path(out_dir.join("report.csv"))?;
    w.write_record(["check", "rows", "failed", "status"])?;
    let mut out = std::io::stdout().lock();
    for &(check, n, failed) in &summary {
        let status = if failed == 0 { "pass" } else { "fail" };
        w.write_record([check.to_string(), n.to_string(), failed.to_string(), status.to_string()])?;
        writeln!(out, "{check}: {status} ({}/{n} rows pass)", n - failed)?;
    }
    w.flush()?;
    if summary.iter().all(|s| s.2 == 0) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
