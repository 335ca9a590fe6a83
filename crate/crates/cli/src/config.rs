//! Flat `key = value` configuration files.
//!
//! Each key names a long flag of the chosen subcommand or a global flag.
//! The file's flags are spliced in right after the subcommand name, ahead
//! of the user's own flags, so the command line overrides the file.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Command, CommandFactory};

use crate::args::Cli;
use crate::UsageError;

/// Returns `argv` with the flags from `--config FILE` (if any) spliced in.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let root = Cli::command();
    let Some((index, sub)) = subcommand_position(&root, &argv) else {
        return Ok(argv);
    };
    let injected = config_flags(&text, &root, sub)?;
    let mut out = argv[..=index].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[index + 1..]);
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut iter = argv.iter().skip(1);
    let mut found = None;
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            found = iter.next().map(PathBuf::from);
        } else if let Some(rest) = s.strip_prefix("--config=") {
            found = Some(PathBuf::from(rest));
        }
    }
    found
}

fn takes_value(cmd: &Command, long: &str) -> bool {
    cmd.get_arguments()
        .find(|a| a.get_long() == Some(long))
        .is_some_and(|a| a.get_action().takes_values())
}

/// Index of the subcommand token, skipping global flags and their values.
fn subcommand_position<'a>(root: &'a Command, argv: &[OsString]) -> Option<(usize, &'a Command)> {
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if let Some(long) = s.strip_prefix("--") {
            if !long.contains('=') && takes_value(root, long) {
                i += 1;
            }
        } else if let Some(sub) = root.find_subcommand(s.as_ref()) {
            return Some((i, sub));
        }
        i += 1;
    }
    None
}

fn config_flags(text: &str, root: &Command, sub: &Command) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(UsageError(format!("config line {}: expected key = value", lineno + 1)));
        };
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key == "config" {
            bail!(UsageError("config files cannot include other config files".into()));
        }
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key))
            .ok_or_else(|| UsageError(format!("config line {}: unknown key `{key}`", lineno + 1)))?;
        match arg.get_action() {
            ArgAction::SetTrue => match value {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                _ => bail!(UsageError(format!("config line {}: `{key}` expects true or false", lineno + 1))),
            },
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(items: &[&str]) -> Vec<OsString> {
        items.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_go_after_subcommand() {
        let root = Cli::command();
        let args = argv(&["hchit", "--seed", "3", "check", "--set", "f"]);
        let (i, sub) = subcommand_position(&root, &args).unwrap();
        assert_eq!(i, 3);
        let flags = config_flags("# c\nexact-stats = true\nm = 12\nthreads=2\n", &root, sub).unwrap();
        assert_eq!(flags, argv(&["--exact-stats", "--m", "12", "--threads", "2"]));
    }

    #[test]
    fn unknown_key_is_usage_error() {
        let root = Cli::command();
        let sub = root.find_subcommand("xi").unwrap();
        let err = config_flags("bogus = 1", &root, sub).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }
}
