//! Flat `key=value` simulation configs.
//!
//! ```text
//! # comparison harness configuration
//! runs = 1000
//! n_values = 1,2,3,5,7,10,15,22,33,47,68,100
//! theta_true = 1.0
//! seed = 42
//! estimators = mle,bayes_param,restricted_fisher,restricted_lebesgue,unrestricted
//! priors = 1:1,1:3,1:100
//! ```
//!
//! Every key is optional; omitted keys keep their defaults. Unknown keys are
//! rejected.

use funbreg::GammaPrior;

use crate::sim::{EstimatorKind, SimConfig};
use crate::{CliError, Result};

pub fn parse_config(text: &str, origin: &str) -> Result<SimConfig> {
    let mut cfg = SimConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse {
            path: origin.to_string(),
            line: idx + 1,
            msg,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value".into()))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "runs" => {
                cfg.runs = value
                    .parse()
                    .map_err(|_| err(format!("bad runs value {value:?}")))?;
            }
            "n_values" => {
                cfg.n_values = value
                    .split(',')
                    .map(|v| v.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(format!("bad n_values list {value:?}")))?;
            }
            "theta_true" => {
                cfg.theta_true = value
                    .parse()
                    .map_err(|_| err(format!("bad theta_true value {value:?}")))?;
            }
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| err(format!("bad seed value {value:?}")))?;
            }
            "estimators" => {
                cfg.estimators = value
                    .split(',')
                    .map(|v| {
                        let v = v.trim();
                        EstimatorKind::parse(v)
                            .ok_or_else(|| err(format!("unknown estimator {v:?}")))
                    })
                    .collect::<Result<_>>()?;
            }
            "priors" => {
                cfg.prior_grid = value
                    .split(',')
                    .map(|pair| {
                        let pair = pair.trim();
                        let (t1, t2) = pair
                            .split_once(':')
                            .ok_or_else(|| err(format!("expected t1:t2, got {pair:?}")))?;
                        let t1: f64 = t1
                            .trim()
                            .parse()
                            .map_err(|_| err(format!("bad t1 in {pair:?}")))?;
                        let t2: f64 = t2
                            .trim()
                            .parse()
                            .map_err(|_| err(format!("bad t2 in {pair:?}")))?;
                        GammaPrior::new(t1, t2).map_err(CliError::Core)
                    })
                    .collect::<Result<_>>()?;
            }
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
