//! Global settings: flags win over the key=value config file, which
//! wins over environment defaults.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};

#[derive(Default)]
pub struct FileDefaults {
    jobs: Option<usize>,
    precision: Option<u32>,
    trial_limit: Option<u64>,
    rho_iterations: Option<u64>,
}

pub struct Settings {
    pub jobs: Option<usize>,
    pub precision: u32,
    pub trial_limit: Option<u64>,
    pub rho_iterations: Option<u64>,
}

impl Settings {
    pub fn resolve(
        config: &Option<PathBuf>,
        jobs_flag: Option<usize>,
        precision_flag: Option<u32>,
        trial_limit_flag: Option<u64>,
        rho_iterations_flag: Option<u64>,
    ) -> Result<Settings> {
        let mut file = FileDefaults::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    bail!("{}:{}: expected key=value", path.display(), lineno + 1);
                };
                let value = value.trim();
                match key.trim() {
                    "jobs" => file.jobs = Some(value.parse()?),
                    "precision" => file.precision = Some(value.parse()?),
                    "trial-limit" => file.trial_limit = Some(value.parse()?),
                    "rho-iterations" => file.rho_iterations = Some(value.parse()?),
                    other => bail!("{}:{}: unknown key {other}", path.display(), lineno + 1),
                }
            }
        }
        let precision_env = std::env::var(super::PRECISION_ENV)
            .ok()
            .map(|v| v.parse::<u32>())
            .transpose()
            .context("RECSQUARES_PRECISION must be an integer")?;
        let precision = precision_flag
            .or(file.precision)
            .or(precision_env)
            .unwrap_or(256);
        if precision < 64 {
            bail!("precision below 64 bits is refused");
        }
        Ok(Settings {
            jobs: jobs_flag.or(file.jobs),
            precision,
            trial_limit: trial_limit_flag.or(file.trial_limit),
            rho_iterations: rho_iterations_flag.or(file.rho_iterations),
        })
    }
}
