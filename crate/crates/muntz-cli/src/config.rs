//! Flat `key=value` experiment configs. `#` starts a comment anywhere on
//! a line; blank lines are skipped. Parse errors carry 1-based line and
//! column positions.

use std::fmt;

#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    pub exponent_spec: Option<String>,
    pub p: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub n_grid: Option<Vec<usize>>,
    pub seed: Option<u64>,
    pub output_path: Option<String>,
}

#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.path, self.line, self.col, self.msg
        )
    }
}

impl std::error::Error for ConfigError {}

pub fn parse(path: &str, text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |col: usize, msg: String| ConfigError {
            path: path.to_string(),
            line,
            col,
            msg,
        };
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let key_col = body.len() - body.trim_start().len() + 1;
        let Some(eq) = body.find('=') else {
            return Err(err(key_col, "expected `key=value`".into()));
        };
        let key = body[..eq].trim();
        let after = &body[eq + 1..];
        let value = after.trim();
        let val_col = eq + 1 + (after.len() - after.trim_start().len()) + 1;
        if key.is_empty() {
            return Err(err(key_col, "missing key before `=`".into()));
        }
        if value.is_empty() {
            return Err(err(val_col, format!("missing value for `{key}`")));
        }

        let dup = |field: &str| err(key_col, format!("duplicate key `{field}`"));
        let real = |field: &str| -> Result<f64, ConfigError> {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    err(val_col, format!("invalid number for `{field}`: `{value}`"))
                })
        };
        match key {
            "exponent_spec" => {
                if cfg.exponent_spec.is_some() {
                    return Err(dup(key));
                }
                cfg.exponent_spec = Some(value.to_string());
            }
            "p" => {
                if cfg.p.is_some() {
                    return Err(dup(key));
                }
                let v = real(key)?;
                if v <= 1.0 {
                    return Err(err(val_col, "p must exceed 1".into()));
                }
                cfg.p = Some(v);
            }
            "delta" => {
                if cfg.delta.is_some() {
                    return Err(dup(key));
                }
                let v = real(key)?;
                if !(0.5 < v && v < 1.0) {
                    return Err(err(val_col, "delta must lie in (0.5, 1)".into()));
                }
                cfg.delta = Some(v);
            }
            "gamma" => {
                if cfg.gamma.is_some() {
                    return Err(dup(key));
                }
                cfg.gamma = Some(real(key)?);
            }
            "n_grid" => {
                if cfg.n_grid.is_some() {
                    return Err(dup(key));
                }
                cfg.n_grid = Some(parse_grid(value).map_err(|m| err(val_col, m))?);
            }
            "seed" => {
                if cfg.seed.is_some() {
                    return Err(dup(key));
                }
                let v = value.parse::<u64>().map_err(|_| {
                    err(
                        val_col,
                        format!("seed must be a nonnegative integer, got `{value}`"),
                    )
                })?;
                cfg.seed = Some(v);
            }
            "output_path" => {
                if cfg.output_path.is_some() {
                    return Err(dup(key));
                }
                cfg.output_path = Some(value.to_string());
            }
            other => {
                return Err(err(key_col, format!("unknown key `{other}`")));
            }
        }
    }
    Ok(cfg)
}

/// `8,16,32` or the dyadic range `8..64` (doubling from the left end up
/// to the right end inclusive); must come out strictly increasing.
fn parse_grid(value: &str) -> Result<Vec<usize>, String> {
    let grid = if let Some((lo, hi)) = value.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("invalid range start `{}`", lo.trim()))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("invalid range end `{}`", hi.trim()))?;
        if lo == 0 || hi < lo {
            return Err(format!("empty dyadic range `{value}`"));
        }
        let mut g = Vec::new();
        let mut n = lo;
        while n <= hi {
            g.push(n);
            n *= 2;
        }
        g
    } else {
        let mut g = Vec::new();
        for field in value.split(',') {
            let n: usize = field
                .trim()
                .parse()
                .map_err(|_| format!("invalid integer in n_grid: `{}`", field.trim()))?;
            g.push(n);
        }
        g
    };
    if grid.is_empty() || grid[0] == 0 {
        return Err("n_grid entries must be positive".into());
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err("n_grid must be strictly increasing".into());
    }
    Ok(grid)
}
