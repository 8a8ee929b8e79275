//! `--config` files: flat `key=value` lines whose keys are long flag names.
//!
//! Values are turned into `--key=value` arguments placed right after the
//! subcommand, skipping keys the command line already sets, so flags win.
//! Keys that belong to a different subcommand are ignored.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use crate::Failure;

pub fn parse(text: &str, source: &Path) -> Result<Vec<(String, String)>, Failure> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Failure::usage(format!("{}:{}: expected key=value", source.display(), n + 1)));
        };
        pairs.push((key.trim().replace('_', "-"), value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return iter.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

fn sets_flag(args: &[OsString], long: &str, short: Option<char>) -> bool {
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        let long_hit = a.strip_prefix("--").is_some_and(|rest| rest == long || rest.starts_with(&format!("{long}=")));
        let short_hit = short.is_some_and(|c| {
            let mut chars = a.chars();
            chars.next() == Some('-') && chars.next() == Some(c)
        });
        long_hit || short_hit
    })
}

/// Returns `args` with config-file values spliced in.
pub fn apply(args: Vec<OsString>, cli: &Command) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let Some(pos) = args.iter().skip(1).position(|a| {
        let a = a.to_string_lossy();
        cli.get_subcommands().any(|s| s.get_name() == a || s.get_all_aliases().any(|al| al == a))
    }) else {
        return Ok(args);
    };
    let pos = pos + 1;
    let sub_name = args[pos].to_string_lossy().into_owned();
    let sub = cli.find_subcommand(&sub_name).expect("matched above");
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;

    let mut injected = Vec::new();
    for (key, value) in parse(&text, path)? {
        let known_elsewhere = cli
            .get_subcommands()
            .flat_map(|s| s.get_arguments())
            .chain(cli.get_arguments())
            .any(|a| a.get_long() == Some(key.as_str()));
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            if known_elsewhere {
                continue;
            }
            return Err(Failure::usage(format!("{}: unknown key {key:?}", path.display())));
        };
        if key == "config" || sets_flag(&args[pos + 1..], &key, arg.get_short()) {
            continue;
        }
        if arg.get_action().takes_values() {
            injected.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value.as_str() {
                "true" | "1" | "yes" => injected.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                _ => return Err(Failure::usage(format!("{}: {key} expects true or false", path.display()))),
            }
        }
    }
    let mut out = args;
    let tail = out.split_off(pos + 1);
    out.extend(injected);
    out.extend(tail);
    Ok(out)
}
