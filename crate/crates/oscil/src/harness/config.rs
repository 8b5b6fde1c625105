//! Experiment configuration: the kind to run, the function under study,
//! grids, seeds and output destinations. A flat `key=value` text file
//! mirrors every field for CLI use.

use serde::{Deserialize, Serialize};

use crate::funcspace::{FunctionDescriptor, FunctionKind};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    L2Growth,
    Tail,
    ExpMoment,
    Lil,
    Cancellation,
    IdentitySweep,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub function: FunctionDescriptor,
    pub alpha: f64,
    /// Dyadic depths N (for the cancellation run these are the exponents
    /// of the ε grid, ε = 2^{-N}).
    pub n_list: Vec<u32>,
    /// Monte Carlo sample count (number of x points).
    pub m: u32,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    /// Martingale ensemble parameters.
    pub beta: f64,
    pub trace_c: f64,
    pub traces: u32,
    /// Quadrature tolerances for the integral-heavy paths.
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub output_path: Option<String>,
    pub json_path: Option<String>,
}

impl ExperimentConfig {
    /// Baseline configuration per experiment kind, matching the defaults
    /// the report tables are calibrated against.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let lacunary = FunctionDescriptor {
            kind: FunctionKind::LacunarySine,
            alpha: 0.5,
            base: 2,
            terms: 40,
            level: 0.0,
            seminorm_hint: None,
            shift: 0.0,
            samples: None,
        };
        let mut cfg = Self {
            experiment: kind,
            function: lacunary,
            alpha: 0.5,
            n_list: vec![8, 16, 24, 32],
            m: 4096,
            seed: 7,
            t_grid: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            lambda_grid: vec![0.1, 0.2, 0.4],
            beta: 0.5,
            trace_c: 1.0,
            traces: 1000,
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            output_path: None,
            json_path: None,
        };
        match kind {
            ExperimentKind::L2Growth => {}
            ExperimentKind::Tail => {
                cfg.n_list = vec![8, 12, 16];
            }
            ExperimentKind::ExpMoment => {
                cfg.n_list = vec![8, 12, 16];
            }
            ExperimentKind::Lil => {
                cfg.n_list = vec![16, 20, 24, 28, 32, 36];
                cfg.m = 64;
                cfg.traces = 256;
            }
            ExperimentKind::Cancellation => {
                cfg.function.kind = FunctionKind::WeierstrassCos;
                cfg.function.base = 64;
                cfg.function.terms = 12;
                cfg.n_list = (4..=10).map(|i| 2 * i).collect(); // ε = 2^{-8} .. 2^{-20}
                cfg.m = 32;
                cfg.abs_tol = 1e-5;
                cfg.rel_tol = 1e-5;
            }
            ExperimentKind::IdentitySweep => {
                // The identities are exact for any truncation; J = 12 keeps
                // the default sweep fast.
                cfg.function.terms = 12;
                cfg.n_list = (1..=8).collect();
                cfg.m = 10;
                cfg.traces = 100;
                cfg.abs_tol = 1e-10;
                cfg.rel_tol = 1e-10;
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.m < 1 {
            return Err(HarnessError::BadConfig("sample count M must be >= 1".into()));
        }
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::BadConfig(
                "N list must be nonempty and strictly ascending".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(HarnessError::BadConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(HarnessError::BadConfig(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Apply one `key=value` assignment (the config-file grammar; keys
    /// mirror the CLI flags).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let bad = |what: &str| HarnessError::BadConfig(format!("bad {what}: {value}"));
        match key {
            "fn" | "function" => {
                self.function.kind = parse_kind(value)
                    .ok_or_else(|| bad("function kind"))?;
            }
            "alpha" => {
                self.alpha = value.parse().map_err(|_| bad("alpha"))?;
                self.function.alpha = self.alpha;
            }
            "base" => self.function.base = value.parse().map_err(|_| bad("base"))?,
            "terms" => self.function.terms = value.parse().map_err(|_| bad("terms"))?,
            "level" => self.function.level = value.parse().map_err(|_| bad("level"))?,
            "N" | "n" => {
                self.n_list = parse_list(value).ok_or_else(|| bad("N list"))?;
            }
            "M" | "samples" => self.m = value.parse().map_err(|_| bad("M"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "t-grid" | "t_grid" => {
                self.t_grid = parse_list(value).ok_or_else(|| bad("t grid"))?;
            }
            "lambda-grid" | "lambda_grid" => {
                self.lambda_grid = parse_list(value).ok_or_else(|| bad("lambda grid"))?;
            }
            "beta" => self.beta = value.parse().map_err(|_| bad("beta"))?,
            "trace-c" | "trace_c" => self.trace_c = value.parse().map_err(|_| bad("trace C"))?,
            "traces" => self.traces = value.parse().map_err(|_| bad("traces"))?,
            "abs-tol" | "abs_tol" => self.abs_tol = value.parse().map_err(|_| bad("abs tol"))?,
            "rel-tol" | "rel_tol" => self.rel_tol = value.parse().map_err(|_| bad("rel tol"))?,
            "out" | "output" => self.output_path = Some(value.to_string()),
            "json" => self.json_path = Some(value.to_string()),
            other => {
                return Err(HarnessError::BadConfig(format!("unknown config key {other}")));
            }
        }
        Ok(())
    }

    /// Parse a flat `key=value` config file body (blank lines and
    /// '#'-comments allowed).
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                HarnessError::BadConfig(format!("line {}: expected key=value", i + 1))
            })?;
            self.apply_kv(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

pub fn parse_kind(value: &str) -> Option<FunctionKind> {
    Some(match value {
        "lacunary" | "lacunary-sine" => FunctionKind::LacunarySine,
        "weierstrass" | "weierstrass-cos" => FunctionKind::WeierstrassCos,
        "sign-power" => FunctionKind::SignPower,
        "constant" => FunctionKind::Constant,
        "linear" => FunctionKind::Linear,
        _ => return None,
    })
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Option<Vec<T>> {
    value
        .split(',')
        .map(|s| s.trim().parse::<T>().ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for kind in [
            ExperimentKind::L2Growth,
            ExperimentKind::Tail,
            ExperimentKind::ExpMoment,
            ExperimentKind::Lil,
            ExperimentKind::Cancellation,
            ExperimentKind::IdentitySweep,
        ] {
            ExperimentConfig::default_for(kind).validate().unwrap();
        }
    }

    #[test]
    fn config_text_round_trip() {
        let mut cfg = ExperimentConfig::default_for(ExperimentKind::L2Growth);
        cfg.apply_config_text("fn = lacunary\nalpha = 0.3\nN = 4,8\nseed = 99\n# comment\n")
            .unwrap();
        assert_eq!(cfg.alpha, 0.3);
        assert_eq!(cfg.n_list, vec![4, 8]);
        assert_eq!(cfg.seed, 99);
        assert!(cfg
            .apply_config_text("unknown-key = 3\n")
            .is_err());
        assert!(cfg.apply_config_text("no-equals-sign\n").is_err());
    }
}
