//! `--config FILE` support: flat `key = value` lines become `--key value`
//! flags placed right after the subcommand, so explicit flags override them.

use std::ffi::OsString;

/// Config-file problems, reported as usage errors.
#[derive(Debug)]
pub struct ConfigError(pub String);

/// Turns config text into flags. Blank lines and `#` comments are skipped;
/// `key = true` becomes a bare `--key`, `key = false` is dropped.
pub fn config_to_flags(text: &str) -> Result<Vec<OsString>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!("config line {}: expected key = value", i + 1)));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(ConfigError(format!("config line {}: bad key '{key}'", i + 1)));
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

/// Removes `--config PATH` / `--config=PATH` from `args` and returns the
/// argument list with the file's flags spliced in after the subcommand.
pub fn expand(args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>, ConfigError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let p = it.next().ok_or_else(|| ConfigError("--config needs a path".into()))?;
            path = Some(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let flags = config_to_flags(&text)?;
    let at = rest
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
        .map(|i| i + 1)
        .ok_or_else(|| ConfigError("--config needs a subcommand".into()))?;
    rest.splice(at..at, flags);
    Ok(rest)
}
