//! key=value config files merged under the command-line flags.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

/// Entries of a config file: `key = value` per line, `#` comments.
pub fn read(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// The --config value, wherever on the command line it was given.
pub fn config_path(matches: &ArgMatches) -> Option<PathBuf> {
    let mut m = matches;
    loop {
        if let Ok(Some(p)) = m.try_get_one::<PathBuf>("config") {
            return Some(p.clone());
        }
        m = m.subcommand()?.1;
    }
}

/// The leaf subcommand and its matches.
fn leaf<'a>(mut cmd: &'a Command, mut m: &'a ArgMatches) -> (&'a Command, &'a ArgMatches) {
    while let Some((name, sub)) = m.subcommand() {
        cmd = cmd.find_subcommand(name).expect("matched subcommand exists");
        m = sub;
    }
    (cmd, m)
}

/// `argv` extended by the config entries whose flags were not given on the
/// command line. `cmd` must be built so global flags reach the leaf.
pub fn merge(cmd: &Command, matches: &ArgMatches, argv: &[OsString], entries: &[(String, String)]) -> Result<Vec<OsString>, String> {
    let (leaf_cmd, leaf_m) = leaf(cmd, matches);
    let mut out = argv.to_vec();
    for (key, value) in entries {
        if key == "config" {
            return Err("a config file cannot name another config file".into());
        }
        let arg = leaf_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| format!("config key '{key}' is not a flag of '{}'", leaf_cmd.get_name()))?;
        if leaf_m.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{key}").into());
            out.push(value.into());
        } else {
            let on: bool = value.parse().map_err(|_| format!("config key '{key}' expects true or false, got '{value}'"))?;
            if on {
                out.push(format!("--{key}").into());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_spacing() {
        let e = parse("# run\nalpha = 0.4\n\n  T=1e5 \nprime_limit = 100\n").unwrap();
        assert_eq!(
            e,
            vec![("alpha".into(), "0.4".into()), ("T".into(), "1e5".into()), ("prime-limit".into(), "100".into())]
        );
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(parse("alpha 0.4").unwrap_err().contains("line 1"));
    }
}
