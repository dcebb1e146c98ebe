//! Config files hold flag values as a JSON object. Keys not already given on
//! the command line are appended as flags, so explicit flags win. Keys the
//! chosen subcommand does not accept are ignored.

use clap::Command;
use serde_json::Value;

fn flag_present(argv: &[String], flag: &str) -> bool {
    argv.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn config_path(argv: &[String]) -> Option<String> {
    let i = argv.iter().position(|a| a == "--config" || a.starts_with("--config="))?;
    match argv[i].split_once('=') {
        Some((_, p)) => Some(p.to_string()),
        None => argv.get(i + 1).cloned(),
    }
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported config value {other}")),
    }
}

fn accepted_flags(cmd: &Command, argv: &[String]) -> Vec<String> {
    let longs = |c: &Command| -> Vec<String> {
        c.get_arguments().filter_map(|a| a.get_long()).map(|l| format!("--{l}")).collect()
    };
    let mut out = longs(cmd);
    if let Some(sub) = argv.iter().skip(1).find_map(|a| cmd.find_subcommand(a)) {
        out.extend(longs(sub));
    }
    out
}

pub fn merge(mut argv: Vec<String>, cmd: &Command) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let accepted = accepted_flags(cmd, &argv);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("config {path} is not JSON: {e}"))?;
    let Value::Object(map) = value else { return Err(format!("config {path} must be a JSON object")) };
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if !accepted.contains(&flag) || flag_present(&argv, &flag) || flag == "--config" {
            continue;
        }
        if flag == "--memory-budget" && std::env::var_os("POLYA_MEMORY_BUDGET").is_some() {
            continue;
        }
        match &v {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar).collect::<Result<_, _>>()?;
                argv.push(format!("{flag}={}", parts.join(",")));
            }
            other => argv.push(format!("{flag}={}", scalar(other)?)),
        }
    }
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::CommandFactory;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn flags_win_over_config() {
        let dir = std::env::temp_dir().join(format!("polya-config-{}", std::process::id()));
        std::fs::write(&dir, r#"{"dim": 3, "steps": 8, "n_list": [7, 9], "quick": true}"#).unwrap();
        let path = dir.to_string_lossy().to_string();
        let out = merge(s(&["polya", "count", "--dim", "2", "--config", &path]), &Cli::command()).unwrap();
        assert!(out.contains(&"--steps=8".to_string()));
        assert!(!out.iter().any(|a| a.starts_with("--dim=") || a.starts_with("--n-list") || a == "--quick"));
        let out = merge(s(&["polya", "bounds2d", "--config", &path]), &Cli::command()).unwrap();
        assert!(out.contains(&"--n-list=7,9".to_string()));
        std::fs::remove_file(dir).unwrap();
    }
}
